//! Vexillary elements, triples, shapes and outer shapes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagrams::{essential_of, rothe_diagram, Cell};
use crate::error::{Error, Result};
use crate::weylgroups::{
    bruhat_leq, elements, grid, grid_next, length, rank_k_c, rank_k_raw, LieType, SignedPermutation,
};

/// Essential rank conditions `k_w(q_i, p_i) ≥ k_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    #[serde(rename = "type")]
    pub t: LieType,
    pub k: Vec<usize>,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

impl Triple {
    pub fn new(t: LieType, k: Vec<usize>, p: Vec<usize>, q: Vec<usize>) -> Result<Self> {
        if k.len() != p.len() || k.len() != q.len() {
            return Err(Error::domain("triple sequences have different lengths"));
        }
        Ok(Triple { t, k, p, q })
    }

    pub fn empty(t: LieType) -> Self {
        Triple { t, k: vec![], p: vec![], q: vec![] }
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.len()).map(|i| (self.k[i], self.p[i], self.q[i]))
    }

    /// Checks the defining inequalities for rank `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |why: &str| Err(Error::domain(format!("invalid triple {self}: {why}")));
        if self.k.len() != self.p.len() || self.k.len() != self.q.len() {
            return bad("sequences have different lengths");
        }
        if self.k.iter().any(|&k| k == 0) {
            return bad("k must be positive");
        }
        if self.k.windows(2).any(|w| w[0] >= w[1]) {
            return bad("k must be strictly increasing");
        }
        let lo = if self.t == LieType::D { 0 } else { 1 };
        if self.p.iter().chain(&self.q).any(|&x| x < lo || x > n) {
            return bad(&format!("p and q must lie in {lo}..={n}"));
        }
        let (k, p, q) = (&self.k, &self.p, &self.q);
        match self.t {
            LieType::A => {
                if p.windows(2).any(|w| w[0] > w[1]) || q.windows(2).any(|w| w[0] < w[1]) {
                    return bad("p must be weakly increasing and q weakly decreasing");
                }
                let d: Vec<i64> = self.entries().map(|(k, p, q)| q as i64 - p as i64 + k as i64).collect();
                if d.windows(2).any(|w| w[0] <= w[1]) || d.last().is_some_and(|&x| x <= 0) {
                    return bad("q-p+k must be strictly decreasing and positive");
                }
            }
            _ => {
                if p.windows(2).any(|w| w[0] < w[1]) || q.windows(2).any(|w| w[0] < w[1]) {
                    return bad("p and q must be weakly decreasing");
                }
                let d: Vec<usize> = self.entries().map(|(k, p, q)| p + q + k).collect();
                if d.windows(2).any(|w| w[0] <= w[1]) {
                    return bad("p+q+k must be strictly decreasing");
                }
                let s = k.len();
                if self.t == LieType::D && s > 0 && p[s - 1] == 0 && q[s - 1] == 0 && k[s - 1] % 2 == 1 {
                    return bad("k_s must be even when p_s = q_s = 0");
                }
            }
        }
        Ok(())
    }

    /// Type D only: an odd `k_s` forces `k_w(0, 0̄) ≥ k_s + 1`. That condition
    /// is appended, or replaces the last one when it implies it.
    pub fn normalized(&self) -> Triple {
        let mut out = self.clone();
        let s = self.len();
        if self.t != LieType::D || s == 0 || self.k[s - 1] % 2 == 0 {
            return out;
        }
        let (k, p, q) = (self.k[s - 1], self.p[s - 1], self.q[s - 1]);
        match p + q {
            0 => {}
            1 => {
                out.k[s - 1] = k + 1;
                out.p[s - 1] = 0;
                out.q[s - 1] = 0;
            }
            _ => {
                out.k.push(k + 1);
                out.p.push(0);
                out.q.push(0);
            }
        }
        out
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "k={};p={};q={};type={}", join(&self.k), join(&self.p), join(&self.q), self.t)
    }
}

impl FromStr for Triple {
    type Err = Error;

    /// Parses `k=1,2;p=3,1;q=3,2;type=C`.
    fn from_str(s: &str) -> Result<Self> {
        let (mut k, mut p, mut q, mut t) = (None, None, None, None);
        for part in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::domain(format!("expected key=value, got {part:?}")))?;
            let list = || -> Result<Vec<usize>> {
                val.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse().map_err(|_| Error::domain(format!("bad number {x:?} in triple"))))
                    .collect()
            };
            match key.trim() {
                "k" => k = Some(list()?),
                "p" => p = Some(list()?),
                "q" => q = Some(list()?),
                "type" => t = Some(val.parse()?),
                other => return Err(Error::domain(format!("unknown triple key {other:?}"))),
            }
        }
        let missing = |name: &str| Error::domain(format!("triple is missing {name}"));
        Triple::new(
            t.ok_or_else(|| missing("type"))?,
            k.ok_or_else(|| missing("k"))?,
            p.ok_or_else(|| missing("p"))?,
            q.ok_or_else(|| missing("q"))?,
        )
    }
}

/// A partition; equality ignores trailing zeros.
#[derive(Clone, Debug, Default, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Shape {
    pub parts: Vec<usize>,
}

impl PartialEq for Shape {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Shape {
    pub fn new(parts: Vec<usize>) -> Self {
        Shape { parts }
    }

    pub fn trimmed(&self) -> &[usize] {
        let end = self.parts.iter().rposition(|&x| x > 0).map_or(0, |i| i + 1);
        &self.parts[..end]
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn is_partition(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1])
    }

    /// Strictly decreasing positive parts.
    pub fn is_strict(&self) -> bool {
        let t = self.trimmed();
        t.windows(2).all(|w| w[0] > w[1])
    }

    pub fn contains(&self, other: &Shape) -> bool {
        (0..other.parts.len()).all(|i| other.part(i) <= self.part(i))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let body = text.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|x| !x.is_empty())
            .map(|x| x.parse().map_err(|_| Error::domain(format!("bad part {x:?} in shape"))))
            .collect::<Result<Vec<usize>>>()?;
        let shape = Shape::new(parts);
        if !shape.is_partition() {
            return Err(Error::domain(format!("{text:?} is not a partition")));
        }
        Ok(shape)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.trimmed().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Shape::parse(s)
    }
}

/// Positions `[a, b, c, d]` of a 2143 pattern in `seq`, if any.
pub fn pattern_2143(seq: &[i32]) -> Option<[usize; 4]> {
    let m = seq.len();
    for b in 1..m {
        for c in b + 1..m {
            if seq[b] >= seq[c] {
                continue;
            }
            // smallest value strictly between seq[b] and seq[c] before b
            let a = (0..b)
                .filter(|&a| seq[b] < seq[a] && seq[a] < seq[c])
                .min_by_key(|&a| seq[a]);
            if let Some(a) = a {
                if let Some(d) = (c + 1..m).find(|&d| seq[a] < seq[d] && seq[d] < seq[c]) {
                    return Some([a, b, c, d]);
                }
            }
        }
    }
    None
}

/// The values `w(x)` for `x` running over the grid of `t`.
pub fn extended_sequence(t: LieType, w: &SignedPermutation) -> Vec<i32> {
    grid(t, w.n()).into_iter().map(|x| w.at(x)).collect()
}

/// Type A: the essential set is ordered south-west to north-east. Signed
/// types: the extended permutation on `{±1..±n}` avoids 2143.
pub fn is_vexillary(t: LieType, w: &SignedPermutation) -> Result<bool> {
    Ok(non_vexillary_witness(t, w)?.is_none())
}

fn non_vexillary_witness(t: LieType, w: &SignedPermutation) -> Result<Option<String>> {
    w.check_type(t)?;
    if t == LieType::A {
        let ess = essential_of(&rothe_diagram(t, w)?);
        Ok(ess.boxes.windows(2).find(|p| !(p[0].1 <= p[1].1 && p[0].0 >= p[1].0)).map(|p| {
            format!("essential boxes {:?} and {:?} are not ordered south-west to north-east", p[0], p[1])
        }))
    } else {
        let g = grid(t, w.n());
        let seq = extended_sequence(t, w);
        Ok(pattern_2143(&seq).map(|[a, b, c, d]| {
            format!(
                "positions {},{},{},{} carry the pattern 2143 (values {},{},{},{})",
                g[a], g[b], g[c], g[d], seq[a], seq[b], seq[c], seq[d]
            )
        }))
    }
}

pub(crate) fn require_vexillary(t: LieType, w: &SignedPermutation) -> Result<()> {
    match non_vexillary_witness(t, w)? {
        Some(why) => Err(Error::NotVexillary(why)),
        None => Ok(()),
    }
}

/// Reads the triple off the ordered essential boxes.
pub fn triple_of(t: LieType, w: &SignedPermutation) -> Result<Triple> {
    require_vexillary(t, w)?;
    let ess = essential_of(&rothe_diagram(t, w)?);
    if !ess.sw_ne {
        return Err(Error::Invariant(format!("essential set of {w} is not ordered")));
    }
    triple_from_boxes(t, w, &ess.boxes)
}

fn triple_from_boxes(t: LieType, w: &SignedPermutation, boxes: &[Cell]) -> Result<Triple> {
    let n = w.n();
    let mut tr = Triple::empty(t);
    for &(r, c) in boxes {
        let (k, p, q) = if t == LieType::A {
            (rank_k_raw(t, w, r, c), c as usize, r as usize)
        } else {
            let p = -c;
            let q = grid_next(t, n, r)
                .ok_or_else(|| Error::Invariant(format!("essential box {:?} of {w} is in the last row", (r, c))))?;
            if q < 0 {
                return Err(Error::Invariant(format!("essential box {:?} of {w} lies above row 1̄", (r, c))));
            }
            let k = rank_k_c(w, q, p);
            if t == LieType::D {
                (k, p as usize - 1, q as usize - 1)
            } else {
                (k, p as usize, q as usize)
            }
        };
        tr.k.push(k);
        tr.p.push(p);
        tr.q.push(q);
    }
    Ok(tr)
}

/// A rank condition on the leading `c` entries of the column sequence `u`:
/// at least `k` of them are `≥ thr`.
#[derive(Clone, Copy, Debug)]
struct Condition {
    c: usize,
    thr: i32,
    k: usize,
}

fn conditions(tau: &Triple, n: usize) -> Vec<Condition> {
    tau.entries()
        .map(|(k, p, q)| {
            let (c, thr) = match tau.t {
                LieType::A => (p, q as i32 + 1),
                LieType::B | LieType::C => (n + 1 - p, q as i32),
                LieType::D => (n - p, q as i32 + 1),
            };
            Condition { c, thr, k }
        })
        .collect()
}

/// The column sequence `u`: `w` itself in type A, and
/// `(w(n̄), …, w(1̄))` in the signed types.
fn window_of_columns(t: LieType, u: &[i32]) -> Vec<i32> {
    if t == LieType::A {
        u.to_vec()
    } else {
        u.iter().rev().map(|&x| -x).collect()
    }
}

/// The unique Bruhat-minimal element satisfying the conditions of `tau`.
///
/// The minimal element has the lexicographically smallest column sequence
/// among all solutions; it is found by depth-first search with an exact
/// feasibility bound per condition. The answer is checked by re-extracting
/// its triple.
pub fn perm_of_triple(tau: &Triple, n: usize) -> Result<SignedPermutation> {
    tau.validate(n)?;
    let conds = conditions(tau, n);
    if conds.iter().any(|c| c.k > c.c) {
        return Err(Error::domain(format!("triple {tau} is not realizable in rank {n}")));
    }
    let mut search = Search {
        t: tau.t,
        n,
        conds: &conds,
        used: vec![false; n + 1],
        u: Vec::with_capacity(n),
        counts: vec![0; conds.len()],
    };
    if !search.dfs() {
        return Err(Error::domain(format!("triple {tau} is not realizable in rank {n}")));
    }
    let w = SignedPermutation::new(window_of_columns(tau.t, &search.u))?;
    let back = triple_of(tau.t, &w).map_err(|_| not_essential(tau, n))?;
    if back != tau.normalized() {
        return Err(not_essential(tau, n));
    }
    Ok(w)
}

fn not_essential(tau: &Triple, n: usize) -> Error {
    Error::domain(format!(
        "triple {tau} is not the triple of a vexillary element in rank {n}"
    ))
}

struct Search<'a> {
    t: LieType,
    n: usize,
    conds: &'a [Condition],
    used: Vec<bool>,
    u: Vec<i32>,
    counts: Vec<usize>,
}

impl Search<'_> {
    fn candidates(&self) -> Vec<i32> {
        let n = self.n as i32;
        let free = |a: i32| !self.used[a as usize];
        if self.t == LieType::A {
            (1..=n).filter(|&a| free(a)).collect()
        } else {
            (-n..=-1).filter(|&x| free(-x)).chain((1..=n).filter(|&a| free(a))).collect()
        }
    }

    fn available_at_least(&self, thr: i32) -> usize {
        (1..=self.n).filter(|&a| !self.used[a] && a as i32 >= thr).count()
    }

    fn feasible(&self) -> bool {
        let placed = self.u.len();
        self.conds.iter().zip(&self.counts).all(|(c, &cnt)| {
            if c.c < placed {
                true
            } else if c.c == placed {
                cnt >= c.k
            } else {
                cnt + (c.c - placed).min(self.available_at_least(c.thr)) >= c.k
            }
        })
    }

    fn dfs(&mut self) -> bool {
        if self.u.len() == self.n {
            // In the column sequence a positive entry is a negative entry of w.
            let neg = self.u.iter().filter(|&&x| x > 0).count();
            return self.t != LieType::D || neg % 2 == 0;
        }
        for x in self.candidates() {
            let pos = self.u.len();
            self.used[x.unsigned_abs() as usize] = true;
            self.u.push(x);
            for (c, cnt) in self.conds.iter().zip(self.counts.iter_mut()) {
                if pos < c.c && x >= c.thr {
                    *cnt += 1;
                }
            }
            if self.feasible() && self.dfs() {
                return true;
            }
            for (c, cnt) in self.conds.iter().zip(self.counts.iter_mut()) {
                if pos < c.c && x >= c.thr {
                    *cnt -= 1;
                }
            }
            self.u.pop();
            self.used[x.unsigned_abs() as usize] = false;
        }
        false
    }
}

/// Reference construction: scan the whole group for the minimal-length
/// element satisfying the conditions of `tau`, and require it to be unique.
pub fn perm_of_triple_exhaustive(tau: &Triple, n: usize) -> Result<SignedPermutation> {
    const CAP: usize = 8;
    if n > CAP {
        return Err(Error::Capability(format!("exhaustive search is limited to n ≤ {CAP}")));
    }
    tau.validate(n)?;
    let t = tau.t;
    let mut best: Option<(usize, SignedPermutation, bool)> = None;
    for w in elements(t, n) {
        if !tau.entries().all(|(k, p, q)| rank_k_raw(t, &w, q as i32, p as i32) >= k) {
            continue;
        }
        let l = length(t, &w);
        match &mut best {
            Some((bl, _, unique)) if *bl == l => *unique = false,
            Some((bl, _, _)) if *bl < l => {}
            _ => best = Some((l, w, true)),
        }
    }
    match best {
        None => Err(Error::domain(format!("triple {tau} is not realizable in rank {n}"))),
        Some((_, _, false)) => Err(Error::Invariant(format!("triple {tau} has several minimal solutions"))),
        Some((_, w, true)) => Ok(w),
    }
}

/// `λ_{k_i}` from the type formula, minimal filling in between.
pub fn shape_of(tau: &Triple) -> Result<Shape> {
    let lam = shape_formula(tau.t, &tau.k, &tau.p, &tau.q);
    let ok = tau.entries().all(|(k, p, q)| {
        let want = match tau.t {
            LieType::A => q as i64 - p as i64 + k as i64,
            LieType::B | LieType::C => (p + q) as i64 - 1,
            LieType::D => (p + q) as i64,
        };
        lam.part(k - 1) as i64 == want
    });
    let shaped = if tau.t == LieType::A { lam.is_partition() } else { lam.is_strict() };
    if !ok || !shaped {
        return Err(Error::Invariant(format!("triple {tau} gives the inconsistent shape {lam}")));
    }
    Ok(lam)
}

/// `λ_k = max_{k_i ≥ k} f(i, k)` with `f` the filling rule of the type. With
/// repeated `k_i` the maximum keeps the larger candidate.
fn shape_formula(t: LieType, k: &[usize], p: &[usize], q: &[usize]) -> Shape {
    let len = k.iter().copied().max().unwrap_or(0);
    let mut parts = Vec::with_capacity(len + 1);
    for row in 1..=len {
        let best = (0..k.len())
            .filter(|&i| k[i] >= row)
            .map(|i| {
                let v = match t {
                    LieType::A => q[i] as i64 - p[i] as i64 + k[i] as i64,
                    LieType::B | LieType::C => (p[i] + q[i] + k[i] - row) as i64 - 1,
                    LieType::D => (p[i] + q[i] + k[i] - row) as i64,
                };
                v.max(0) as usize
            })
            .max()
            .unwrap_or(0);
        parts.push(best);
    }
    if t == LieType::D && parts.len() % 2 == 1 {
        parts.push(0);
    }
    Shape::new(parts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakTriple {
    pub base: Triple,
    pub kprime: Vec<usize>,
}

impl WeakTriple {
    pub fn t(&self) -> LieType {
        self.base.t
    }

    /// The conditions the matrix model relies on: monotone `p`, `q` in range
    /// and weakly increasing positive `k'`. The base `k` is not inspected.
    pub fn validate(&self, n: usize) -> Result<()> {
        let (p, q, kp) = (&self.base.p, &self.base.q, &self.kprime);
        let bad = |why: &str| Err(Error::domain(format!("invalid weak triple: {why}")));
        if kp.len() != p.len() || kp.len() != q.len() {
            return bad("sequences have different lengths");
        }
        if kp.iter().any(|&k| k == 0) || kp.windows(2).any(|w| w[0] > w[1]) {
            return bad("k' must be positive and weakly increasing");
        }
        let lo = if self.t() == LieType::D { 0 } else { 1 };
        if p.iter().chain(q).any(|&x| x < lo || x > n) {
            return bad(&format!("p and q must lie in {lo}..={n}"));
        }
        let p_ok = if self.t() == LieType::A {
            p.windows(2).all(|w| w[0] <= w[1])
        } else {
            p.windows(2).all(|w| w[0] >= w[1])
        };
        if !p_ok || q.windows(2).any(|w| w[0] < w[1]) {
            return bad("p and q are not monotone");
        }
        Ok(())
    }
}

/// `k'_i = k_v(q_i, p_i)` for the triple of `w`.
pub fn weak_triple(t: LieType, w: &SignedPermutation, v: &SignedPermutation) -> Result<WeakTriple> {
    let base = triple_of(t, w)?;
    if !bruhat_leq(t, w, v)? {
        return Err(Error::NotBelow);
    }
    weak_triple_from(&base, v)
}

/// `k'` for an arbitrary valid triple; fails if some `k'_i < k_i`.
pub fn weak_triple_from(tau: &Triple, v: &SignedPermutation) -> Result<WeakTriple> {
    v.check_type(tau.t)?;
    tau.validate(v.n())?;
    let kprime: Vec<usize> = tau
        .entries()
        .map(|(_, p, q)| rank_k_raw(tau.t, v, q as i32, p as i32))
        .collect();
    if kprime.iter().zip(&tau.k).any(|(a, b)| a < b) {
        return Err(Error::NotBelow);
    }
    Ok(WeakTriple { base: tau.clone(), kprime })
}

pub fn outer_shape(t: LieType, w: &SignedPermutation, v: &SignedPermutation) -> Result<Shape> {
    Ok(outer_shape_of(&weak_triple(t, w, v)?))
}

/// The shape formula applied to `k'`.
pub fn outer_shape_of(wt: &WeakTriple) -> Shape {
    let b = &wt.base;
    shape_formula(b.t, &wt.kprime, &b.p, &b.q)
}
