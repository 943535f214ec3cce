//! Excited Young diagrams.
//!
//! Type A works in the straight diagram of `μ`, the other types in the shifted
//! diagram (row `i` occupies columns `i..i+μ_i-1`). A move slides one box of
//! the current state one step south-east:
//!
//! * an off-diagonal box `(i,j)` moves to `(i+1,j+1)` when `(i,j+1)`,
//!   `(i+1,j)`, `(i+1,j+1)` are cells of the region not in the state;
//! * type C: a diagonal box `(i,i)` moves to `(i+1,i+1)` when `(i,i+1)`,
//!   `(i+1,i+1)` are free cells;
//! * types B and D: a diagonal box `(i,i)` moves to `(i+2,i+2)` when
//!   `(i,i+1)`, `(i+1,i+1)`, `(i+1,i+2)`, `(i+2,i+2)` are free cells.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vexillary::Shape;
use crate::weylgroups::LieType;

pub const DEFAULT_STATE_CAP: usize = 10_000_000;

/// The cap from `VEXMULT_STATE_CAP`, or [`DEFAULT_STATE_CAP`].
pub fn default_state_cap() -> usize {
    std::env::var("VEXMULT_STATE_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_STATE_CAP)
}

/// Row/column pairs, 1-based.
pub type Pos = (usize, usize);

#[derive(Clone, Debug)]
pub struct Region {
    pub t: LieType,
    pub mu: Shape,
    cells: Vec<Pos>,
    rows: usize,
    cols: usize,
    index: Vec<Option<usize>>,
}

fn shape_cells(t: LieType, shape: &Shape) -> Vec<Pos> {
    let mut out = Vec::new();
    for (r, &len) in shape.trimmed().iter().enumerate() {
        let i = r + 1;
        let start = if t.is_signed() { i } else { 1 };
        out.extend((start..start + len).map(|j| (i, j)));
    }
    out
}

fn check_shape(t: LieType, shape: &Shape) -> Result<()> {
    let ok = if t.is_signed() { shape.is_partition() && shape.is_strict() } else { shape.is_partition() };
    if ok {
        Ok(())
    } else {
        let kind = if t.is_signed() { "strict partition" } else { "partition" };
        Err(Error::domain(format!("{shape} is not a {kind}")))
    }
}

impl Region {
    pub fn new(t: LieType, mu: &Shape) -> Result<Self> {
        check_shape(t, mu)?;
        let cells = shape_cells(t, mu);
        let rows = mu.trimmed().len();
        let cols = cells.iter().map(|c| c.1).max().unwrap_or(0);
        // two spare rows and columns so neighbour lookups never go out of range
        let mut index = vec![None; (rows + 3) * (cols + 3)];
        for (k, &(i, j)) in cells.iter().enumerate() {
            index[i * (cols + 3) + j] = Some(k);
        }
        Ok(Region { t, mu: mu.clone(), cells, rows, cols, index })
    }

    pub fn cells(&self) -> &[Pos] {
        &self.cells
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn slot(&self, (i, j): Pos) -> Option<usize> {
        if i > self.rows + 2 || j > self.cols + 2 {
            return None;
        }
        self.index[i * (self.cols + 3) + j]
    }

    pub fn contains(&self, p: Pos) -> bool {
        self.slot(p).is_some()
    }

    fn words(&self) -> usize {
        self.cells.len().div_ceil(64).max(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagramState {
    /// Sorted row-major.
    pub boxes: Vec<Pos>,
}

type Key = Vec<u64>;

fn key_of(region: &Region, boxes: &[Pos]) -> Key {
    let mut key = vec![0u64; region.words()];
    for &b in boxes {
        let k = region.slot(b).expect("box inside region");
        key[k / 64] |= 1 << (k % 64);
    }
    key
}

fn state_of(region: &Region, key: &Key) -> DiagramState {
    let mut boxes: Vec<Pos> = bits(key).map(|k| region.cells[k]).collect();
    boxes.sort_unstable();
    DiagramState { boxes }
}

fn bits(key: &Key) -> impl Iterator<Item = usize> + '_ {
    key.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + b)
        })
    })
}

/// `λ` in its home position inside `region`.
pub fn initial_state(lambda: &Shape, region: &Region) -> Result<DiagramState> {
    check_shape(region.t, lambda)?;
    if !region.mu.contains(lambda) {
        return Err(Error::domain(format!("{lambda} is not contained in {}", region.mu)));
    }
    let mut boxes = shape_cells(region.t, lambda);
    boxes.sort_unstable();
    Ok(DiagramState { boxes })
}

fn successors(region: &Region, key: &Key) -> Vec<Key> {
    let free = |p: Pos| region.slot(p).is_some_and(|k| key[k / 64] >> (k % 64) & 1 == 0);
    let mut out = Vec::new();
    for k in bits(key) {
        let (i, j) = region.cells[k];
        let (need, target): (&[Pos], Pos) = if region.t.is_signed() && i == j {
            if region.t == LieType::C {
                (&[(i, i + 1), (i + 1, i + 1)], (i + 1, i + 1))
            } else {
                (&[(i, i + 1), (i + 1, i + 1), (i + 1, i + 2), (i + 2, i + 2)], (i + 2, i + 2))
            }
        } else {
            (&[(i, j + 1), (i + 1, j), (i + 1, j + 1)], (i + 1, j + 1))
        };
        if need.iter().all(|&p| free(p)) {
            let t = region.slot(target).expect("target is a needed cell");
            let mut next = key.clone();
            next[k / 64] &= !(1 << (k % 64));
            next[t / 64] |= 1 << (t % 64);
            out.push(next);
        }
    }
    out
}

/// All states one move away from `s`, sorted.
pub fn elementary_moves(s: &DiagramState, region: &Region) -> Result<Vec<DiagramState>> {
    if let Some(b) = s.boxes.iter().find(|&&b| !region.contains(b)) {
        return Err(Error::domain(format!("box {b:?} is outside the region")));
    }
    let key = key_of(region, &s.boxes);
    let mut out: Vec<DiagramState> = successors(region, &key).iter().map(|k| state_of(region, k)).collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub parallel: bool,
    pub cap: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { parallel: false, cap: default_state_cap() }
    }
}

/// `E_μ(λ)` in sorted order.
pub fn enumerate(t: LieType, lambda: &Shape, mu: &Shape) -> Result<Vec<DiagramState>> {
    enumerate_with(t, lambda, mu, EnumerateOptions::default())
}

pub fn enumerate_with(t: LieType, lambda: &Shape, mu: &Shape, opts: EnumerateOptions) -> Result<Vec<DiagramState>> {
    let region = Region::new(t, mu)?;
    let seen = closure(&region, lambda, opts)?;
    let mut out: Vec<DiagramState> = seen.iter().map(|k| state_of(&region, k)).collect();
    out.sort();
    Ok(out)
}

fn closure(region: &Region, lambda: &Shape, opts: EnumerateOptions) -> Result<HashSet<Key>> {
    let start = key_of(region, &initial_state(lambda, region)?.boxes);
    let mut seen: HashSet<Key> = HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let found: Vec<Key> = if opts.parallel {
            frontier.par_iter().flat_map_iter(|k| successors(region, k)).collect()
        } else {
            frontier.iter().flat_map(|k| successors(region, k)).collect()
        };
        let mut next = Vec::new();
        for k in found {
            if !seen.contains(&k) {
                seen.insert(k.clone());
                next.push(k);
                if seen.len() > opts.cap {
                    return Err(Error::StateCap { cap: opts.cap, states: seen.len() });
                }
            }
        }
        frontier = next;
    }
    Ok(seen)
}

/// `#E_μ(λ)`. Counts are bounded by the state cap, so they fit in `u64`.
pub fn count(t: LieType, lambda: &Shape, mu: &Shape) -> Result<u64> {
    count_with(t, lambda, mu, EnumerateOptions::default())
}

pub fn count_with(t: LieType, lambda: &Shape, mu: &Shape, opts: EnumerateOptions) -> Result<u64> {
    let region = Region::new(t, mu)?;
    Ok(closure(&region, lambda, opts)?.len() as u64)
}

/// One line per row: `#` for a box of the state, `.` for an empty cell of
/// the region, a space outside it. Trailing spaces are dropped.
pub fn render_state(region: &Region, s: &DiagramState) -> String {
    let mut out = String::new();
    for i in 1..=region.rows {
        let line: String = (1..=region.cols)
            .map(|j| {
                if s.boxes.binary_search(&(i, j)).is_ok() {
                    '#'
                } else if region.contains((i, j)) {
                    '.'
                } else {
                    ' '
                }
            })
            .collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
