//! Permutations and signed permutations for the classical types.
//!
//! A signed permutation is stored in window notation `w(1..n)` and extended
//! to `{±1..±n}` by `w(-i) = -w(i)`. Grid indices for signed types run over
//! `n̄ < … < 1̄ < 1 < … < n`, which is the natural order of the integers
//! `-n..=-1, 1..=n`, so comparisons on `i32` are comparisons in grid order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LieType {
    A,
    B,
    C,
    D,
}

impl LieType {
    pub const ALL: [LieType; 4] = [LieType::A, LieType::B, LieType::C, LieType::D];

    pub fn is_signed(self) -> bool {
        self != LieType::A
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LieType::A => "A",
            LieType::B => "B",
            LieType::C => "C",
            LieType::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(LieType::A),
            "B" | "b" => Ok(LieType::B),
            "C" | "c" => Ok(LieType::C),
            "D" | "d" => Ok(LieType::D),
            other => Err(Error::domain(format!("unknown Lie type {other:?}"))),
        }
    }
}

/// How barred indices are printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Notation {
    /// `-2`
    #[default]
    Minus,
    /// `2b`
    Bar,
}

pub fn format_index(x: i32, notation: Notation) -> String {
    match notation {
        Notation::Bar if x < 0 => format!("{}b", -x),
        _ => x.to_string(),
    }
}

fn parse_index(tok: &str) -> Result<i32> {
    let tok = tok.trim();
    let bad = || Error::domain(format!("cannot parse entry {tok:?}"));
    if let Some(body) = tok.strip_suffix('b') {
        let v: i32 = body.parse().map_err(|_| bad())?;
        if v <= 0 {
            return Err(bad());
        }
        return Ok(-v);
    }
    tok.parse().map_err(|_| bad())
}

/// Splits comma- or whitespace-separated integer lists.
pub fn parse_int_list(text: &str) -> Result<Vec<i32>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_index)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct SignedPermutation {
    window: Vec<i32>,
}

impl TryFrom<Vec<i32>> for SignedPermutation {
    type Error = Error;

    fn try_from(window: Vec<i32>) -> Result<Self> {
        SignedPermutation::new(window)
    }
}

impl From<SignedPermutation> for Vec<i32> {
    fn from(w: SignedPermutation) -> Self {
        w.window
    }
}

impl SignedPermutation {
    pub fn new(window: Vec<i32>) -> Result<Self> {
        let n = window.len();
        let mut seen = vec![false; n + 1];
        for &x in &window {
            let a = x.unsigned_abs() as usize;
            if x == 0 || a > n || seen[a] {
                return Err(Error::domain(format!(
                    "{window:?} is not a signed permutation of 1..{n}"
                )));
            }
            seen[a] = true;
        }
        Ok(SignedPermutation { window })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            window: (1..=n as i32).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse_int_list(text)?)
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i32] {
        &self.window
    }

    pub fn negatives(&self) -> usize {
        self.window.iter().filter(|&&x| x < 0).count()
    }

    /// Checks the sign constraints of type `t`.
    pub fn check_type(&self, t: LieType) -> Result<()> {
        match t {
            LieType::A if self.negatives() > 0 => Err(Error::domain(format!(
                "{} has negative entries, not allowed in type A",
                self
            ))),
            LieType::D if self.negatives() % 2 == 1 => Err(Error::domain(format!(
                "{} has an odd number of negative entries, not allowed in type D",
                self
            ))),
            _ => Ok(()),
        }
    }

    /// `w(x)` on the extended domain; `w(0) = 0`.
    pub fn at(&self, x: i32) -> i32 {
        match x.cmp(&0) {
            std::cmp::Ordering::Greater => self.window[x as usize - 1],
            std::cmp::Ordering::Less => -self.window[(-x) as usize - 1],
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.window.iter().enumerate() {
            let pos = i as i32 + 1;
            inv[x.unsigned_abs() as usize - 1] = if x > 0 { pos } else { -pos };
        }
        SignedPermutation { window: inv }
    }

    /// `u ∘ w`, i.e. `i ↦ u(w(i))`.
    pub fn compose(u: &Self, w: &Self) -> Result<Self> {
        if u.n() != w.n() {
            return Err(Error::domain("compose: rank mismatch"));
        }
        Ok(SignedPermutation {
            window: w.window.iter().map(|&x| u.at(x)).collect(),
        })
    }

    pub fn display_with(&self, notation: Notation) -> String {
        self.window
            .iter()
            .map(|&x| format_index(x, notation))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Embeds into rank `m >= n` by appending fixed points.
    pub fn padded(&self, m: usize) -> Self {
        let mut window = self.window.clone();
        window.extend(self.n() as i32 + 1..=m as i32);
        SignedPermutation { window }
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(Notation::Minus))
    }
}

impl FromStr for SignedPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Row/column indices of the square grid for type `t` in grid order.
pub fn grid(t: LieType, n: usize) -> Vec<i32> {
    let n = n as i32;
    if t.is_signed() {
        (-n..=-1).chain(1..=n).collect()
    } else {
        (1..=n).collect()
    }
}

/// Successor of `x` in the grid order, if any.
pub fn grid_next(t: LieType, n: usize, x: i32) -> Option<i32> {
    let y = if t.is_signed() && x == -1 { 1 } else { x + 1 };
    (y <= n as i32).then_some(y)
}

/// Array slot of a grid index: `s<0 ↦ n+s`, `s>0 ↦ n+s-1` (0-based).
pub fn grid_slot(t: LieType, n: usize, x: i32) -> usize {
    let n = n as i32;
    let slot = match (t.is_signed(), x < 0) {
        (false, _) => x - 1,
        (true, true) => n + x,
        (true, false) => n + x - 1,
    };
    slot as usize
}

fn check_pair(t: LieType, w: &SignedPermutation, v: &SignedPermutation) -> Result<()> {
    if w.n() != v.n() {
        return Err(Error::domain(format!(
            "rank mismatch: {} has n={}, {} has n={}",
            w,
            w.n(),
            v,
            v.n()
        )));
    }
    w.check_type(t)?;
    v.check_type(t)
}

/// `k_w(q, p)`: A `#{s≤p : w(s)>q}`, B/C `#{s≤p̄ : w(s)≥q}`, D `#{s<p̄ : w(s)>q}`.
pub fn rank_k(t: LieType, w: &SignedPermutation, q: i32, p: i32) -> Result<usize> {
    w.check_type(t)?;
    let n = w.n() as i32;
    let out_of_range = || Error::domain(format!("index (q={q}, p={p}) out of range for type {t}, n={n}"));
    match t {
        LieType::A => {
            if !(0..=n).contains(&q) || !(0..=n).contains(&p) {
                return Err(out_of_range());
            }
            Ok(rank_k_a(w, q, p))
        }
        LieType::B | LieType::C => {
            if !(1..=n).contains(&p) || q == 0 || q.abs() > n {
                return Err(out_of_range());
            }
            Ok(rank_k_c(w, q, p))
        }
        LieType::D => {
            if !(0..=n).contains(&p) || q.abs() > n {
                return Err(out_of_range());
            }
            Ok(rank_k_d(w, q, p))
        }
    }
}

pub(crate) fn rank_k_a(w: &SignedPermutation, q: i32, p: i32) -> usize {
    w.window[..p as usize].iter().filter(|&&x| x > q).count()
}

pub(crate) fn rank_k_c(w: &SignedPermutation, q: i32, p: i32) -> usize {
    w.window[p as usize - 1..].iter().filter(|&&x| -x >= q).count()
}

pub(crate) fn rank_k_d(w: &SignedPermutation, q: i32, p: i32) -> usize {
    w.window[p as usize..].iter().filter(|&&x| -x > q).count()
}

/// Unchecked rank function used on hot paths; indices must be valid.
pub(crate) fn rank_k_raw(t: LieType, w: &SignedPermutation, q: i32, p: i32) -> usize {
    match t {
        LieType::A => rank_k_a(w, q, p),
        LieType::B | LieType::C => rank_k_c(w, q, p),
        LieType::D => rank_k_d(w, q, p),
    }
}

/// `r_w(q, p)`: A `p-k`, B/C `n+1-p-k`, D `n-p-k`.
pub fn rank_r(t: LieType, w: &SignedPermutation, q: i32, p: i32) -> Result<usize> {
    let k = rank_k(t, w, q, p)? as i32;
    let n = w.n() as i32;
    let r = match t {
        LieType::A => p - k,
        LieType::B | LieType::C => n + 1 - p - k,
        LieType::D => n - p - k,
    };
    Ok(r as usize)
}

pub fn length(t: LieType, w: &SignedPermutation) -> usize {
    let win = &w.window;
    let mut inv = 0;
    for i in 0..win.len() {
        for j in i + 1..win.len() {
            if win[i] > win[j] {
                inv += 1;
            }
        }
    }
    let neg = win.iter().filter(|&&x| x < 0);
    match t {
        LieType::A => inv,
        LieType::B | LieType::C => inv + neg.map(|&x| (-x) as usize).sum::<usize>(),
        LieType::D => inv + neg.map(|&x| (-x - 1) as usize).sum::<usize>(),
    }
}

/// Reflections acting on positions (right multiplication). Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reflection {
    /// swap entries `i` and `j`
    Transpose(usize, usize),
    /// swap entries `i` and `j` and negate both
    SignedTranspose(usize, usize),
    /// negate entry `i`
    SignChange(usize),
}

impl Reflection {
    pub fn apply(self, w: &SignedPermutation) -> SignedPermutation {
        let mut win = w.window.clone();
        match self {
            Reflection::Transpose(i, j) => win.swap(i, j),
            Reflection::SignedTranspose(i, j) => {
                let (a, b) = (win[i], win[j]);
                win[i] = -b;
                win[j] = -a;
            }
            Reflection::SignChange(i) => win[i] = -win[i],
        }
        SignedPermutation { window: win }
    }
}

pub fn simple_reflections(t: LieType, n: usize) -> Vec<Reflection> {
    let mut out = Vec::new();
    match t {
        LieType::B | LieType::C if n >= 1 => out.push(Reflection::SignChange(0)),
        LieType::D if n >= 2 => out.push(Reflection::SignedTranspose(0, 1)),
        _ => {}
    }
    out.extend((0..n.saturating_sub(1)).map(|i| Reflection::Transpose(i, i + 1)));
    out
}

pub fn reflections(t: LieType, n: usize) -> Vec<Reflection> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(Reflection::Transpose(i, j));
            if t.is_signed() {
                out.push(Reflection::SignedTranspose(i, j));
            }
        }
        if matches!(t, LieType::B | LieType::C) {
            out.push(Reflection::SignChange(i));
        }
    }
    out
}

/// Elements covering `w`: `w·t` with length one more.
pub fn covers_up(t: LieType, w: &SignedPermutation) -> Vec<SignedPermutation> {
    let l = length(t, w);
    reflections(t, w.n())
        .into_iter()
        .map(|r| r.apply(w))
        .filter(|u| length(t, u) == l + 1)
        .collect()
}

/// Bruhat order.
///
/// Decided by descent recursion: for a right descent `s` of `v`,
/// `u ≤ v` iff `min(u, us) ≤ vs`. In type A the answer is also computed from
/// rank matrices and the two must agree. [`CoverClosure`] gives the order by
/// closing the reflection-cover relation and is used to test this function.
pub fn bruhat_leq(t: LieType, u: &SignedPermutation, v: &SignedPermutation) -> Result<bool> {
    check_pair(t, u, v)?;
    let by_descent = bruhat_leq_descent(t, u, v);
    if t == LieType::A {
        let by_rank = bruhat_leq_by_rank(t, u, v)?;
        if by_rank != by_descent {
            return Err(Error::Invariant(format!(
                "Bruhat criteria disagree on ({u}) ≤ ({v})"
            )));
        }
    }
    Ok(by_descent)
}

fn bruhat_leq_descent(t: LieType, u: &SignedPermutation, v: &SignedPermutation) -> bool {
    let simple = simple_reflections(t, v.n());
    let mut u = u.clone();
    let mut v = v.clone();
    let mut lu = length(t, &u);
    let mut lv = length(t, &v);
    loop {
        if lu > lv {
            return false;
        }
        if lv == 0 {
            return lu == 0;
        }
        let s = simple
            .iter()
            .copied()
            .find(|s| length(t, &s.apply(&v)) < lv)
            .expect("a non-identity element has a descent");
        v = s.apply(&v);
        lv -= 1;
        let us = s.apply(&u);
        if length(t, &us) < lu {
            u = us;
            lu -= 1;
        }
    }
}

/// Rank-matrix criterion: type A compares `k` on all boxes; types B and C
/// compare the rank matrices of the extended permutations on the `2n` grid.
pub fn bruhat_leq_by_rank(t: LieType, u: &SignedPermutation, v: &SignedPermutation) -> Result<bool> {
    check_pair(t, u, v)?;
    let n = u.n() as i32;
    match t {
        LieType::A => Ok((0..=n).all(|q| (1..=n).all(|p| rank_k_a(u, q, p) <= rank_k_a(v, q, p)))),
        LieType::B | LieType::C => {
            let g = grid(t, u.n());
            let r = |x: &SignedPermutation, q: i32, c: i32| {
                g.iter().filter(|&&s| s <= c && x.at(s) >= q).count()
            };
            Ok(g.iter().all(|&q| g.iter().all(|&c| r(u, q, c) <= r(v, q, c))))
        }
        LieType::D => Err(Error::domain(
            "type D Bruhat order is not the rank-matrix order; use bruhat_leq",
        )),
    }
}

/// Bruhat order on a whole group, by transitive closure of the covers
/// `u ⋖ u·t`. Memory is quadratic in the group order.
pub struct CoverClosure {
    t: LieType,
    elements: Vec<SignedPermutation>,
    index: HashMap<SignedPermutation, usize>,
    words: usize,
    up: Vec<u64>,
}

impl CoverClosure {
    pub const MAX_ORDER: usize = 10_000;

    pub fn new(t: LieType, n: usize) -> Result<Self> {
        let order = group_order(t, n);
        if order > Self::MAX_ORDER {
            return Err(Error::Capability(format!(
                "cover closure limited to groups of order ≤ {}, type {t} n={n} has {order}",
                Self::MAX_ORDER
            )));
        }
        let mut elements: Vec<SignedPermutation> = elements(t, n).collect();
        elements.sort_by_key(|w| std::cmp::Reverse(length(t, w)));
        let index: HashMap<_, _> = elements.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let words = elements.len().div_ceil(64);
        let mut up = vec![0u64; words * elements.len()];
        for (i, w) in elements.iter().enumerate() {
            up[i * words + i / 64] |= 1 << (i % 64);
            for c in covers_up(t, w) {
                let j = index[&c];
                // j has larger length, hence was processed earlier.
                for k in 0..words {
                    up[i * words + k] |= up[j * words + k];
                }
            }
        }
        Ok(CoverClosure { t, elements, index, words, up })
    }

    pub fn lie_type(&self) -> LieType {
        self.t
    }

    pub fn elements(&self) -> &[SignedPermutation] {
        &self.elements
    }

    pub fn leq(&self, u: &SignedPermutation, v: &SignedPermutation) -> bool {
        let (i, j) = (self.index[u], self.index[v]);
        self.up[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// All `v ≥ u`, in the stored element order.
    pub fn upper_set(&self, u: &SignedPermutation) -> Vec<SignedPermutation> {
        let i = self.index[u];
        (0..self.elements.len())
            .filter(|&j| self.up[i * self.words + j / 64] >> (j % 64) & 1 == 1)
            .map(|j| self.elements[j].clone())
            .collect()
    }
}

pub fn group_order(t: LieType, n: usize) -> usize {
    let fact: usize = (1..=n).product();
    match t {
        LieType::A => fact,
        LieType::B | LieType::C => fact << n,
        LieType::D => (fact << n) >> 1,
    }
}

/// Streams every element of `S_n`, `W_n` or `W_n⁺`.
pub fn elements(t: LieType, n: usize) -> impl Iterator<Item = SignedPermutation> {
    let masks: Vec<u32> = if t.is_signed() {
        (0..1u32 << n)
            .filter(|m| t != LieType::D || m.count_ones() % 2 == 0)
            .collect()
    } else {
        vec![0]
    };
    Permutations::new(n).flat_map(move |perm| {
        masks
            .clone()
            .into_iter()
            .map(move |m| SignedPermutation {
                window: perm
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| if m >> i & 1 == 1 { -x } else { x })
                    .collect(),
            })
    })
}

struct Permutations {
    next: Option<Vec<i32>>,
}

impl Permutations {
    fn new(n: usize) -> Self {
        Permutations {
            next: Some((1..=n as i32).collect()),
        }
    }
}

impl Iterator for Permutations {
    type Item = Vec<i32>;

    fn next(&mut self) -> Option<Vec<i32>> {
        let cur = self.next.take()?;
        let mut a = cur.clone();
        let k = (0..a.len().saturating_sub(1)).rev().find(|&i| a[i] < a[i + 1]);
        if let Some(k) = k {
            let l = (k + 1..a.len()).rev().find(|&l| a[k] < a[l]).unwrap();
            a.swap(k, l);
            a[k + 1..].reverse();
            self.next = Some(a);
        }
        Some(cur)
    }
}

/// The Grassmannian element `w_λ`.
///
/// Type A uses the descent position `d`; the signed types ignore it. Type D
/// is the type C element of `λ+1`, after padding `λ` by a zero part to an even
/// number of parts.
pub fn grassmannian_perm(t: LieType, shape: &[usize], d: usize, n: usize) -> Result<SignedPermutation> {
    let parts: Vec<usize> = shape.iter().copied().filter(|&x| x > 0).collect();
    let misfit = || Error::domain(format!("shape {shape:?} does not fit type {t} with n={n}, d={d}"));
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(misfit());
    }
    match t {
        LieType::A => {
            if d > n || parts.len() > d || parts.first().is_some_and(|&x| x > n - d) {
                return Err(misfit());
            }
            let lam = |i: usize| parts.get(i).copied().unwrap_or(0);
            let first: Vec<i32> = (1..=d).map(|k| (k + lam(d - k)) as i32).collect();
            Ok(SignedPermutation::new(with_complement(first, n))?)
        }
        LieType::B | LieType::C => {
            if parts.windows(2).any(|w| w[0] == w[1]) || parts.first().is_some_and(|&x| x > n) {
                return Err(misfit());
            }
            let first = parts.iter().map(|&x| -(x as i32)).collect();
            Ok(SignedPermutation::new(with_complement(first, n))?)
        }
        LieType::D => {
            let zeros = shape.iter().filter(|&&x| x == 0).count();
            if zeros > 1 || parts.windows(2).any(|w| w[0] == w[1]) {
                return Err(misfit());
            }
            let mut plus: Vec<usize> = parts.iter().map(|&x| x + 1).collect();
            if plus.len() % 2 == 1 {
                plus.push(1);
            }
            if plus.first().is_some_and(|&x| x > n) {
                return Err(misfit());
            }
            let first = plus.iter().map(|&x| -(x as i32)).collect();
            Ok(SignedPermutation::new(with_complement(first, n))?)
        }
    }
}

fn with_complement(mut first: Vec<i32>, n: usize) -> Vec<i32> {
    let used: Vec<i32> = first.iter().map(|x| x.abs()).collect();
    first.extend((1..=n as i32).filter(|x| !used.contains(x)));
    first
}
