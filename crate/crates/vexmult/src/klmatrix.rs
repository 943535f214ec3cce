//! Matrix models of Schubert cells and the counting lemmas behind the
//! isomorphism of Kazhdan–Lusztig varieties.
//!
//! The cell `X_v°` is represented on the grid of `v` (`n` rows in type A,
//! `2n` in types C and D, `2n+1` in type B where the middle index is 0).
//! Rows and columns are addressed by 0-based slots of that grid. In the
//! signed types a free entry `(a,b)` is paired with
//! `(-v(b), -v⁻¹(a))` by the isotropy condition; one entry of each pair is
//! free (`*`) and the other dependent (`•`).

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vexillary::{outer_shape_of, weak_triple, Shape, Triple, WeakTriple};
use crate::weylgroups::{length, simple_reflections, LieType, SignedPermutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeKind {
    Star,
    Bullet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entry {
    Zero,
    Pivot(i8),
    Free { kind: FreeKind, label: Option<usize> },
}

impl Entry {
    pub fn is_free(self) -> bool {
        matches!(self, Entry::Free { .. })
    }

    pub fn label(self) -> Option<usize> {
        match self {
            Entry::Free { label, .. } => label,
            _ => None,
        }
    }

    fn glyph(self) -> String {
        match self {
            Entry::Zero => "0".into(),
            Entry::Pivot(s) => s.to_string(),
            Entry::Free { kind, label } => {
                let sym = if kind == FreeKind::Star { "*" } else { "•" };
                match label {
                    Some(l) => format!("{sym}{l}"),
                    None => sym.into(),
                }
            }
        }
    }
}

/// Grid of the matrix model: type B carries the extra index 0.
pub fn matrix_grid(t: LieType, n: usize) -> Vec<i32> {
    let n = n as i32;
    match t {
        LieType::A => (1..=n).collect(),
        LieType::B => (-n..=n).collect(),
        LieType::C | LieType::D => (-n..=-1).chain(1..=n).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellMatrix {
    #[serde(rename = "type")]
    pub t: LieType,
    pub v: SignedPermutation,
    pub grid: Vec<i32>,
    pub entries: Vec<Vec<Entry>>,
}

impl CellMatrix {
    pub fn size(&self) -> usize {
        self.grid.len()
    }

    fn slot(&self, x: i32) -> usize {
        self.grid.binary_search(&x).expect("index on grid")
    }

    /// Column slot of the pivot in each row.
    pub fn row_pivots(&self) -> Vec<usize> {
        let inv = self.v.inverse();
        self.grid.iter().map(|&x| self.slot(inv.at(x))).collect()
    }

    /// Row slot of the pivot in each column.
    pub fn col_pivots(&self) -> Vec<usize> {
        self.grid.iter().map(|&x| self.slot(self.v.at(x))).collect()
    }

    /// The entry tied to `(a, b)` by the isotropy condition.
    pub fn partner(&self, a: usize, b: usize) -> (usize, usize) {
        let inv = self.v.inverse();
        (self.slot(-self.v.at(self.grid[b])), self.slot(-inv.at(self.grid[a])))
    }

    pub fn free_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.size();
        (0..n).flat_map(move |a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| self.entries[a][b].is_free())
    }

    pub fn count_free(&self, kind: FreeKind, labelled: bool) -> usize {
        self.free_cells()
            .filter(|&(a, b)| match self.entries[a][b] {
                Entry::Free { kind: k, label } => k == kind && (!labelled || label.is_some()),
                _ => false,
            })
            .count()
    }

    /// Text layout with `|` after the given column counts.
    pub fn render(&self, separators: &[usize]) -> String {
        render_rows(&self.entries, separators)
    }
}

fn render_rows(rows: &[Vec<Entry>], separators: &[usize]) -> String {
    let width = rows
        .iter()
        .flatten()
        .map(|e| e.glyph().chars().count())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (b, e) in row.iter().enumerate() {
            if b > 0 {
                line.push(' ');
                if separators.contains(&b) {
                    line.push_str("| ");
                }
            }
            let g = e.glyph();
            let pad = width - g.chars().count();
            line.push_str(&" ".repeat(pad));
            line.push_str(&g);
        }
        let _ = writeln!(out, "{line}");
    }
    out
}

/// The representative of `X_v°`: pivots `1` at `(v(j), j)`, free entries at
/// `(i, j)` with `i < v(j)` and `j < v⁻¹(i)`. In the signed types the free
/// entry of each isotropic pair sits in the smaller column. A self-paired
/// entry is free in type C. In types B and D isotropy of its column makes it
/// a sum of products of other entries of that column, so it is dependent, or
/// zero when no other pair of rows `r, r̄` of the column is free.
pub fn cell_matrix(t: LieType, v: &SignedPermutation) -> Result<CellMatrix> {
    build_cell(t, v, true)
}

/// With `isotropic` false the self-paired entries of type D stay dependent,
/// as in the ambient type A cell.
fn build_cell(t: LieType, v: &SignedPermutation, isotropic: bool) -> Result<CellMatrix> {
    v.check_type(t)?;
    let grid = matrix_grid(t, v.n());
    let size = grid.len();
    let inv = v.inverse();
    let mut m = CellMatrix { t, v: v.clone(), grid: grid.clone(), entries: vec![vec![Entry::Zero; size]; size] };
    for (b, &j) in grid.iter().enumerate() {
        for (a, &i) in grid.iter().enumerate() {
            if i == v.at(j) {
                m.entries[a][b] = Entry::Pivot(1);
            } else if i < v.at(j) && j < inv.at(i) {
                m.entries[a][b] = Entry::Free { kind: FreeKind::Star, label: None };
            }
        }
    }
    if t.is_signed() {
        let raw = m.clone();
        let slot = |x: i32| grid.iter().position(|&g| g == x).expect("value on the grid");
        let cells: Vec<_> = m.free_cells().collect();
        for (a, b) in cells {
            let (pa, pb) = m.partner(a, b);
            let kind = if (pa, pb) == (a, b) {
                if t == LieType::C {
                    FreeKind::Star
                } else {
                    let pivot = v.at(grid[b]);
                    let paired = grid.iter().any(|&r| {
                        r != pivot && r != -pivot && raw.entries[slot(r)][b].is_free() && raw.entries[slot(-r)][b].is_free()
                    });
                    if isotropic && !paired {
                        m.entries[a][b] = Entry::Zero;
                        continue;
                    }
                    FreeKind::Bullet
                }
            } else if b < pb {
                FreeKind::Star
            } else {
                FreeKind::Bullet
            };
            m.entries[a][b] = Entry::Free { kind, label: None };
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedTriple {
    pub base: WeakTriple,
    pub ktilde: Vec<usize>,
    pub ptilde: Vec<usize>,
    pub qtilde: Vec<usize>,
}

impl ExtendedTriple {
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.ktilde.len()).map(|i| (self.ktilde[i], self.ptilde[i], self.qtilde[i]))
    }

    /// The type A outer shape `μ̃` of the extension.
    pub fn mu_tilde(&self) -> Shape {
        type_a_shape(&self.ktilde, &self.ptilde, &self.qtilde)
    }
}

fn type_a_shape(k: &[usize], p: &[usize], q: &[usize]) -> Shape {
    let tau = Triple { t: LieType::A, k: k.to_vec(), p: p.to_vec(), q: q.to_vec() };
    outer_shape_of(&WeakTriple { kprime: k.to_vec(), base: tau })
}

/// The type A weak triple on the matrix grid of rank `n` that carries the
/// same conditions as `wt`.
pub fn extend_triple(wt: &WeakTriple, n: usize) -> Result<ExtendedTriple> {
    let t = wt.t();
    if t == LieType::A {
        return Err(Error::domain("extend_triple applies to types B, C and D"));
    }
    wt.validate(n)?;
    Ok(ambient_triple(wt, n))
}

fn ambient_triple(wt: &WeakTriple, n: usize) -> ExtendedTriple {
    let b = &wt.base;
    let s = b.len();
    let mut out: Vec<(usize, usize, usize)> = Vec::with_capacity(2 * s);
    if wt.t() == LieType::A {
        out.extend((0..s).map(|i| (wt.kprime[i], b.p[i], b.q[i])));
    } else {
        for i in 0..s {
            let (k, p, q) = (wt.kprime[i], b.p[i], b.q[i]);
            out.push(match wt.t() {
                LieType::C => (k, n + 1 - p, n + q - 1),
                LieType::D => (k, n - p, n + q),
                _ => (k, n + 1 - p, n + q),
            });
        }
        for i in (0..s).rev() {
            let (k, p, q) = (wt.kprime[i], b.p[i], b.q[i]);
            out.push(match wt.t() {
                LieType::C => (p + q + k - 2, n + p - 1, n + 1 - q),
                LieType::D => (p + q + k, n + p, n - q),
                _ => (p + q + k - 1, n + p, n + 1 - q),
            });
        }
        if s > 0 && out[s - 1] == out[s] {
            out.remove(s);
        }
    }
    ExtendedTriple {
        base: wt.clone(),
        ktilde: out.iter().map(|x| x.0).collect(),
        ptilde: out.iter().map(|x| x.1).collect(),
        qtilde: out.iter().map(|x| x.2).collect(),
    }
}

fn check_dims(m: &CellMatrix, wt: &WeakTriple) -> Result<()> {
    if m.t != wt.t() {
        return Err(Error::domain(format!("matrix of type {} with triple of type {}", m.t, wt.t())));
    }
    wt.validate(m.v.n())
}

/// Labels from the nested north-west submatrices of the extended triple:
/// entry `(a,b)` of the `q̃_i × p̃_i` corner gets label `i` unless it is
/// already labelled or a pivot of the corner shares its row or column. In the
/// signed types each isotropic pair then keeps its free entry at the smaller
/// (label, column), with unlabelled entries last.
pub fn label_entries(m: &CellMatrix, wt: &WeakTriple) -> Result<CellMatrix> {
    check_dims(m, wt)?;
    let ext = ambient_triple(wt, m.v.n());
    let rowpiv = m.row_pivots();
    let colpiv = m.col_pivots();
    let mut out = m.clone();
    for (li, (_, p, q)) in ext.entries().enumerate() {
        for a in (0..q).filter(|&a| rowpiv[a] >= p) {
            for b in (0..p).filter(|&b| colpiv[b] >= q) {
                if let Entry::Free { kind, label: None } = out.entries[a][b] {
                    out.entries[a][b] = Entry::Free { kind, label: Some(li + 1) };
                }
            }
        }
    }
    if m.t.is_signed() {
        let rank = |e: Entry, b: usize| (e.label().unwrap_or(usize::MAX), b);
        let cells: Vec<_> = out.free_cells().collect();
        for (a, b) in cells {
            let (pa, pb) = out.partner(a, b);
            if (pa, pb) == (a, b) {
                continue;
            }
            let kind = if rank(out.entries[a][b], b) < rank(out.entries[pa][pb], pb) {
                FreeKind::Star
            } else {
                FreeKind::Bullet
            };
            let label = out.entries[a][b].label();
            out.entries[a][b] = Entry::Free { kind, label };
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCount {
    /// Labelled free entries (all labelled entries in type A).
    pub labelled: usize,
    /// `|μ|`.
    pub expected: usize,
    /// All labelled entries, free or dependent; equals `|μ̃|`.
    pub labelled_all: usize,
    pub expected_all: usize,
    /// Free entries overall; equals `ℓ(v)`.
    pub free: usize,
    pub length_v: usize,
    pub ok: bool,
}

pub fn label_count_check(t: LieType, w: &SignedPermutation, v: &SignedPermutation) -> Result<LabelCount> {
    label_count_check_for(&weak_triple(t, w, v)?, v)
}

pub fn label_count_check_for(wt: &WeakTriple, v: &SignedPermutation) -> Result<LabelCount> {
    let t = wt.t();
    let m = label_entries(&cell_matrix(t, v)?, wt)?;
    let ambient = label_entries(&build_cell(t, v, false)?, wt)?;
    let labelled_all = ambient.free_cells().filter(|&(a, b)| ambient.entries[a][b].label().is_some()).count();
    let labelled = m.count_free(FreeKind::Star, true);
    let expected = outer_shape_of(wt).size();
    let expected_all = ambient_triple(wt, v.n()).mu_tilde().size();
    let free = m.count_free(FreeKind::Star, false);
    let length_v = length(t, v);
    let ok = labelled == expected && labelled_all == expected_all && free == length_v;
    Ok(LabelCount { labelled, expected, labelled_all, expected_all, free, length_v, ok })
}

/// Column sets `E_p` in grid values: `{1..p}` (A), `{n̄..p̄}` (B, C),
/// `{n̄..(p+1)‾}` (D).
fn column_set(t: LieType, n: usize, p: usize) -> Vec<i32> {
    let (n, p) = (n as i32, p as i32);
    match t {
        LieType::A => (1..=p).collect(),
        LieType::B | LieType::C => (-n..=-p).collect(),
        LieType::D => (-n..-p).collect(),
    }
}

/// `v` is shortest in `v·W_P`, where `W_P` is generated by the simple
/// reflections fixing every column set `E_{p_i}` of `tau`.
pub fn is_coset_minimal(v: &SignedPermutation, tau: &Triple) -> bool {
    let t = tau.t;
    let n = v.n();
    let id = SignedPermutation::identity(n);
    let lv = length(t, v);
    simple_reflections(t, n).into_iter().all(|s| {
        let sw = s.apply(&id);
        let stable = tau.p.iter().all(|&p| {
            let set = column_set(t, n, p);
            let mut img: Vec<i32> = set.iter().map(|&x| sw.at(x)).collect();
            img.sort_unstable();
            img == set
        });
        !stable || length(t, &s.apply(v)) > lv
    })
}

fn require_coset_minimal(v: &SignedPermutation, tau: &Triple) -> Result<()> {
    if is_coset_minimal(v, tau) {
        Ok(())
    } else {
        Err(Error::NotCosetMinimal(format!("{v} has a descent inside the blocks of p = {:?}", tau.p)))
    }
}

/// A column of the top half of `Σ(X_v°)` in the diagonal-adapted basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SumColumn {
    /// column `b` of the cell matrix
    Cell(usize),
    /// `-1` in row `x`
    Diagonal(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectSumMatrix {
    #[serde(rename = "type")]
    pub t: LieType,
    pub extended: ExtendedTriple,
    pub columns: Vec<SumColumn>,
    /// 1-based block of each column.
    pub blocks: Vec<usize>,
    /// Column counts `r̃_i = p̃_i + N - q̃_i` at the end of each block but the last.
    pub block_ends: Vec<usize>,
    pub entries: Vec<Vec<Entry>>,
    #[serde(skip)]
    cell: Option<CellMatrix>,
}

impl DirectSumMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn render(&self) -> String {
        render_rows(&self.entries, &self.block_ends)
    }

    /// Column order of the displays: the first half as built, the second half
    /// its mirror under the duality `j ↦ N+1-j`, with the two middle columns
    /// exchanged in type D. Falls back to the built order when that would move
    /// a column out of its block.
    pub fn mirrored_layout(&self) -> Vec<usize> {
        let size = self.rows();
        let identity: Vec<usize> = (0..self.columns.len()).collect();
        if !self.t.is_signed() {
            return identity;
        }
        let dual = |c: SumColumn| match c {
            SumColumn::Cell(b) => SumColumn::Cell(size - 1 - b),
            SumColumn::Diagonal(x) => SumColumn::Diagonal(size - 1 - x),
        };
        let mut order: Vec<SumColumn> = self.columns[..size].to_vec();
        order.extend(self.columns[..size].iter().rev().map(|&c| dual(c)));
        if self.t == LieType::D {
            order.swap(size - 1, size);
        }
        let index: Option<Vec<usize>> = order.iter().map(|c| self.columns.iter().position(|d| d == c)).collect();
        match index {
            Some(ix) if ix.iter().enumerate().all(|(x, &i)| self.blocks[i] == self.blocks[x]) => {
                let mut seen = ix.clone();
                seen.sort_unstable();
                if seen == identity {
                    ix
                } else {
                    identity
                }
            }
            _ => identity,
        }
    }

    /// The top half in [`Self::mirrored_layout`] order, with a separator at
    /// every block end and, in the signed types, at the axis of symmetry.
    pub fn render_mirrored(&self) -> String {
        let order = self.mirrored_layout();
        let rows: Vec<Vec<Entry>> = self.entries.iter().map(|r| order.iter().map(|&i| r[i]).collect()).collect();
        let mut seps = self.block_ends.clone();
        if self.t.is_signed() && !seps.contains(&self.rows()) {
            seps.push(self.rows());
        }
        render_rows(&rows, &seps)
    }

    pub fn cell(&self) -> &CellMatrix {
        self.cell.as_ref().expect("built with its cell matrix")
    }

    fn block_of_cell(&self, b: usize) -> usize {
        self.blocks[self.columns.iter().position(|&c| c == SumColumn::Cell(b)).unwrap()]
    }

    fn block_of_diagonal(&self, x: usize) -> usize {
        self.blocks[self.columns.iter().position(|&c| c == SumColumn::Diagonal(x)).unwrap()]
    }
}

pub fn direct_sum_matrix(t: LieType, w: &SignedPermutation, v: &SignedPermutation) -> Result<DirectSumMatrix> {
    direct_sum_matrix_for(&weak_triple(t, w, v)?, v)
}

/// Block `i` holds cell columns `p̃_{i-1}..p̃_i` followed by diagonal columns
/// for rows `q̃_i..q̃_{i-1}` (0-based, `p̃_0 = 0`, `q̃_0 = N`); the last block
/// takes what remains.
pub fn direct_sum_matrix_for(wt: &WeakTriple, v: &SignedPermutation) -> Result<DirectSumMatrix> {
    let t = wt.t();
    require_coset_minimal(v, &wt.base)?;
    let cell = label_entries(&cell_matrix(t, v)?, wt)?;
    let size = cell.size();
    let ext = ambient_triple(wt, v.n());
    let s = ext.ktilde.len();
    let ps: Vec<usize> = std::iter::once(0).chain(ext.ptilde.iter().copied()).chain([size]).collect();
    let qs: Vec<usize> = std::iter::once(size).chain(ext.qtilde.iter().copied()).chain([0]).collect();
    let mut columns = Vec::with_capacity(2 * size);
    let mut blocks = Vec::with_capacity(2 * size);
    let mut block_ends = Vec::with_capacity(s);
    for i in 1..=s + 1 {
        for b in ps[i - 1]..ps[i] {
            columns.push(SumColumn::Cell(b));
            blocks.push(i);
        }
        for x in qs[i]..qs[i - 1] {
            columns.push(SumColumn::Diagonal(x));
            blocks.push(i);
        }
        if i <= s {
            block_ends.push(columns.len());
        }
    }
    let entries = (0..size)
        .map(|a| {
            columns
                .iter()
                .map(|&c| match c {
                    SumColumn::Cell(b) => cell.entries[a][b],
                    SumColumn::Diagonal(x) if x == a => Entry::Pivot(-1),
                    SumColumn::Diagonal(_) => Entry::Zero,
                })
                .collect()
        })
        .collect();
    Ok(DirectSumMatrix { t, extended: ext, columns, blocks, block_ends, entries, cell: Some(cell) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorReport {
    /// Free (`*`) entries of type (b), as cell-matrix slots.
    pub survivors: Vec<(usize, usize)>,
    pub expected: usize,
    /// Entries of type (b) of either kind.
    pub type_b: usize,
    pub ok: bool,
}

pub fn echelon_survivor_check(t: LieType, w: &SignedPermutation, v: &SignedPermutation) -> Result<SurvivorReport> {
    echelon_survivor_check_for(&weak_triple(t, w, v)?, v)
}

/// An entry `(a,b)` is of type (b) when the pivot `1` below it and the `-1`
/// in its column's pivot row both sit in blocks strictly left of the `-1` in
/// its own row and the column holding its row's pivot `1`. Entries of type (a)
/// are cleared by row operations; those of type (b) survive in echelon form.
pub fn echelon_survivor_check_for(wt: &WeakTriple, v: &SignedPermutation) -> Result<SurvivorReport> {
    let ds = direct_sum_matrix_for(wt, v)?;
    let cell = ds.cell();
    let rowpiv = cell.row_pivots();
    let colpiv = cell.col_pivots();
    let mut type_b = Vec::new();
    for (a, b) in cell.free_cells() {
        let lo = ds.block_of_cell(b).max(ds.block_of_diagonal(colpiv[b]));
        let hi = ds.block_of_diagonal(a).min(ds.block_of_cell(rowpiv[a]));
        if lo < hi {
            type_b.push((a, b));
        }
    }
    let labelled: Vec<(usize, usize)> =
        cell.free_cells().filter(|&(a, b)| cell.entries[a][b].label().is_some()).collect();
    let survivors: Vec<(usize, usize)> = type_b
        .iter()
        .copied()
        .filter(|&(a, b)| matches!(cell.entries[a][b], Entry::Free { kind: FreeKind::Star, .. }))
        .collect();
    let expected = outer_shape_of(wt).size();
    let ok = type_b == labelled && survivors.len() == expected;
    Ok(SurvivorReport { type_b: type_b.len(), survivors, expected, ok })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFailure {
    pub trial: usize,
    pub block: usize,
    pub rank: usize,
    pub bound: usize,
    /// The instantiated top half, row-major.
    pub matrix: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
    /// `#{b < p̃_i : pivot row of b ≥ q̃_i} = k̃'_i` for every block.
    pub structural_ok: bool,
    pub failures: Vec<RankFailure>,
    pub ok: bool,
}

pub fn rank_claim_check(
    t: LieType,
    w: &SignedPermutation,
    v: &SignedPermutation,
    trials: usize,
    prime: u64,
    seed: u64,
) -> Result<RankReport> {
    rank_claim_check_for(&weak_triple(t, w, v)?, v, trials, prime, seed)
}

/// Fills every free entry with independent uniform values mod `prime` and
/// checks that the first `r̃_i` columns have rank at least `N - μ̃_{k̃'_i}`.
/// Trial `j` draws from a ChaCha stream seeded by `seed` and `j`, so the
/// outcome does not depend on scheduling.
pub fn rank_claim_check_for(
    wt: &WeakTriple,
    v: &SignedPermutation,
    trials: usize,
    prime: u64,
    seed: u64,
) -> Result<RankReport> {
    if prime < 3 || !is_prime(prime) || prime > u32::MAX as u64 {
        return Err(Error::domain(format!("{prime} is not an odd prime below 2^32")));
    }
    let ds = direct_sum_matrix_for(wt, v)?;
    let cell = ds.cell();
    let colpiv = cell.col_pivots();
    let ext = &ds.extended;
    let mu = ext.mu_tilde();
    let size = ds.rows();
    let structural_ok = ext
        .entries()
        .all(|(k, p, q)| (0..p).filter(|&b| colpiv[b] >= q).count() == k);
    let bounds: Vec<usize> = ext.ktilde.iter().map(|&k| size - mu.part(k - 1)).collect();
    let failures: Vec<RankFailure> = (0..trials)
        .into_par_iter()
        .flat_map_iter(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let m: Vec<Vec<u64>> = ds
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&e| match e {
                            Entry::Zero => 0,
                            Entry::Pivot(s) if s > 0 => 1,
                            Entry::Pivot(_) => prime - 1,
                            Entry::Free { .. } => rng.random_range(0..prime),
                        })
                        .collect()
                })
                .collect();
            let mut out = Vec::new();
            for (i, (&end, &bound)) in ds.block_ends.iter().zip(&bounds).enumerate() {
                let rank = rank_mod_p(&m, end, prime);
                if rank < bound {
                    out.push(RankFailure { trial, block: i + 1, rank, bound, matrix: m.clone() });
                }
            }
            out
        })
        .collect();
    let ok = structural_ok && failures.is_empty();
    Ok(RankReport { trials, prime, seed, structural_ok, failures, ok })
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Rank of the first `cols` columns over `F_p`.
pub fn rank_mod_p(m: &[Vec<u64>], cols: usize, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r[..cols].to_vec()).collect();
    let rows = a.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for j in c..cols {
                    a[r][j] = (a[r][j] + (p - f) * a[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Signed types: the free-entry count per label range,
/// `Σ (μ̃_k - (k-1)) = Σ μ_k` in type C and `Σ (μ̃_k - k) = Σ μ_k` in types B
/// and D, each sum over `k'_{i-1} < k ≤ k'_i`.
pub fn accounting_identity(wt: &WeakTriple, n: usize) -> Result<bool> {
    let ext = extend_triple(wt, n)?;
    let mt = ext.mu_tilde();
    let mu = outer_shape_of(wt);
    let offset = if wt.t() == LieType::C { 1 } else { 0 };
    let mut prev = 0;
    for &k in &wt.kprime {
        let lhs: i64 = (prev + 1..=k).map(|j| mt.part(j - 1) as i64 - (j as i64 - offset)).sum();
        let rhs: i64 = (prev + 1..=k).map(|j| mu.part(j - 1) as i64).sum();
        if lhs != rhs {
            return Ok(false);
        }
        prev = prev.max(k);
    }
    Ok(true)
}
