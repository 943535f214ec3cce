//! Test-side oracles, written independently of the library code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use vexmult::{LieType, SignedPermutation};

pub fn sp(s: &str) -> SignedPermutation {
    SignedPermutation::parse(s).unwrap()
}

/// Every window of the group, by brute force over permutations and signs.
pub fn all_windows(t: LieType, n: usize) -> Vec<Vec<i32>> {
    fn perms(rest: &mut Vec<i32>, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            perms(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut ps = Vec::new();
    perms(&mut (1..=n as i32).collect(), &mut Vec::new(), &mut ps);
    if t == LieType::A {
        return ps;
    }
    let mut out = Vec::new();
    for p in ps {
        for signs in 0..1u32 << n {
            if t == LieType::D && signs.count_ones() % 2 == 1 {
                continue;
            }
            out.push(p.iter().enumerate().map(|(i, &x)| if signs >> i & 1 == 1 { -x } else { x }).collect());
        }
    }
    out
}

/// Simple generators acting on positions (right multiplication).
fn generators(t: LieType, n: usize) -> Vec<Box<dyn Fn(&[i32]) -> Vec<i32>>> {
    let mut gens: Vec<Box<dyn Fn(&[i32]) -> Vec<i32>>> = Vec::new();
    for i in 0..n.saturating_sub(1) {
        gens.push(Box::new(move |w: &[i32]| {
            let mut u = w.to_vec();
            u.swap(i, i + 1);
            u
        }));
    }
    match t {
        LieType::B | LieType::C if n >= 1 => gens.push(Box::new(|w: &[i32]| {
            let mut u = w.to_vec();
            u[0] = -u[0];
            u
        })),
        LieType::D if n >= 2 => gens.push(Box::new(|w: &[i32]| {
            let mut u = w.to_vec();
            let (a, b) = (u[0], u[1]);
            u[0] = -b;
            u[1] = -a;
            u
        })),
        _ => {}
    }
    gens
}

/// Word length of every element, by breadth-first search from the identity.
pub fn bfs_lengths(t: LieType, n: usize) -> HashMap<Vec<i32>, usize> {
    let gens = generators(t, n);
    let id: Vec<i32> = (1..=n as i32).collect();
    let mut dist = HashMap::from([(id.clone(), 0)]);
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        for g in &gens {
            let u = g(&w);
            if !dist.contains_key(&u) {
                dist.insert(u.clone(), d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// All reflections of the group as position maps.
fn reflection_maps(t: LieType, n: usize) -> Vec<Box<dyn Fn(&[i32]) -> Vec<i32>>> {
    let mut out: Vec<Box<dyn Fn(&[i32]) -> Vec<i32>>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(Box::new(move |w: &[i32]| {
                let mut u = w.to_vec();
                u.swap(i, j);
                u
            }));
            if t != LieType::A {
                out.push(Box::new(move |w: &[i32]| {
                    let mut u = w.to_vec();
                    u[i] = -w[j];
                    u[j] = -w[i];
                    u
                }));
            }
        }
        if matches!(t, LieType::B | LieType::C) {
            out.push(Box::new(move |w: &[i32]| {
                let mut u = w.to_vec();
                u[i] = -u[i];
                u
            }));
        }
    }
    out
}

/// Bruhat order as the transitive closure of `u < ut` for reflections `t`
/// with `ℓ(ut) > ℓ(u)`. Returns the up-set of every element.
pub fn bruhat_upsets(t: LieType, n: usize) -> HashMap<Vec<i32>, HashSet<Vec<i32>>> {
    let len = bfs_lengths(t, n);
    let refl = reflection_maps(t, n);
    let mut elems: Vec<Vec<i32>> = len.keys().cloned().collect();
    elems.sort_by_key(|w| std::cmp::Reverse(len[w]));
    let mut up: HashMap<Vec<i32>, HashSet<Vec<i32>>> = HashMap::new();
    for w in elems {
        let mut set = HashSet::from([w.clone()]);
        for r in &refl {
            let u = r(&w);
            if len[&u] > len[&w] {
                set.extend(up[&u].iter().cloned());
            }
        }
        up.insert(w, set);
    }
    up
}

/// `w(x)` on the extended index set.
pub fn at(w: &[i32], x: i32) -> i32 {
    if x > 0 {
        w[x as usize - 1]
    } else {
        -w[(-x) as usize - 1]
    }
}

/// Rank numbers by counting dots of the permutation matrix.
///
/// A: dots in columns `1..=p` with value `> q`. C/B: dots in columns
/// `n̄..=p̄` with value `≥ q`. D: dots in columns `n̄..(p+1)‾` with value `> q`.
pub fn dot_count(t: LieType, w: &[i32], q: i32, p: i32) -> usize {
    let n = w.len() as i32;
    match t {
        LieType::A => (1..=p).filter(|&x| at(w, x) > q).count(),
        LieType::B | LieType::C => (-n..=-p).filter(|&x| at(w, x) >= q).count(),
        LieType::D => (-n..-p).filter(|&x| at(w, x) > q).count(),
    }
}

/// Brute-force search for the pattern `pat` in `seq`.
pub fn contains_pattern(seq: &[i32], pat: &[usize]) -> bool {
    let k = pat.len();
    let m = seq.len();
    let mut idx: Vec<usize> = (0..k).collect();
    if m < k {
        return false;
    }
    loop {
        let vals: Vec<i32> = idx.iter().map(|&i| seq[i]).collect();
        let ok = (0..k).all(|a| (0..k).all(|b| (pat[a] < pat[b]) == (vals[a] < vals[b]) || a == b));
        if ok {
            return true;
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < m - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A second excited-diagram engine: depth-first search over sets of boxes,
/// with the region given by a membership predicate.
pub fn excited_oracle(t: LieType, lambda: &[usize], mu: &[usize]) -> BTreeSet<BTreeSet<(usize, usize)>> {
    let step = match t {
        LieType::A => 0,
        LieType::C => 1,
        LieType::B | LieType::D => 2,
    };
    excited_by_rule(t != LieType::A, step, lambda, mu)
}

/// Excited states under the plain square move, plus a diagonal move of
/// `diagonal_step` (0: none, 1: one step, 2: two steps) in shifted regions.
pub fn excited_by_rule(
    shifted: bool,
    diagonal_step: usize,
    lambda: &[usize],
    mu: &[usize],
) -> BTreeSet<BTreeSet<(usize, usize)>> {
    let in_shape = |sh: &[usize], i: usize, j: usize| -> bool {
        if i == 0 || i > sh.len() {
            return false;
        }
        let len = sh[i - 1];
        if shifted {
            j >= i && j < i + len
        } else {
            j >= 1 && j <= len
        }
    };
    let start: BTreeSet<(usize, usize)> = (1..=lambda.len())
        .flat_map(|i| {
            let lo = if shifted { i } else { 1 };
            (lo..lo + lambda[i - 1]).map(move |j| (i, j))
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        if !seen.insert(s.clone()) {
            continue;
        }
        for &(i, j) in &s {
            let free = |c: (usize, usize)| in_shape(mu, c.0, c.1) && !s.contains(&c);
            let (cells, dest): (Vec<(usize, usize)>, (usize, usize)) = if shifted && i == j {
                match diagonal_step {
                    0 => continue,
                    1 => (vec![(i, i + 1), (i + 1, i + 1)], (i + 1, i + 1)),
                    _ => (vec![(i, i + 1), (i + 1, i + 1), (i + 1, i + 2), (i + 2, i + 2)], (i + 2, i + 2)),
                }
            } else {
                (vec![(i, j + 1), (i + 1, j), (i + 1, j + 1)], (i + 1, j + 1))
            };
            if cells.iter().all(|&c| free(c)) {
                let mut next = s.clone();
                next.remove(&(i, j));
                next.insert(dest);
                stack.push(next);
            }
        }
    }
    seen
}

/// Rank over `F_p` as the largest non-vanishing minor, minors by the
/// Leibniz formula. Only for tiny matrices.
pub fn rank_by_minors(m: &[Vec<u64>], p: u64) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    fn det(m: &[Vec<u64>], r: &[usize], c: &[usize], p: u64) -> u64 {
        let k = r.len();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut total: i128 = 0;
        loop {
            let mut prod: i128 = 1;
            for i in 0..k {
                prod = prod * m[r[i]][c[perm[i]]] as i128 % p as i128;
            }
            let inversions = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
            total += if inversions % 2 == 0 { prod } else { -prod };
            // next permutation
            let Some(a) = (0..k.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
            let b = (a + 1..k).rev().find(|&j| perm[a] < perm[j]).unwrap();
            perm.swap(a, b);
            perm[a + 1..].reverse();
        }
        total.rem_euclid(p as i128) as u64
    }
    for k in (1..=rows.min(cols)).rev() {
        for r in subsets(rows, k) {
            for c in subsets(cols, k) {
                if det(m, &r, &c, p) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

/// Conjugate of a partition.
pub fn conjugate(parts: &[usize]) -> Vec<usize> {
    let m = parts.first().copied().unwrap_or(0);
    (1..=m).map(|j| parts.iter().filter(|&&x| x >= j).count()).collect()
}

/// Ordinary partitions inside a `rows × cols` box.
pub fn partitions_in_box(rows: usize, cols: usize) -> Vec<Vec<usize>> {
    fn go(rows: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == rows {
            return;
        }
        for x in 1..=max {
            cur.push(x);
            go(rows, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(rows, cols, &mut Vec::new(), &mut out);
    out
}

/// Strict partitions with parts at most `max`.
pub fn strict_partitions(max: usize) -> Vec<Vec<usize>> {
    (0..1u32 << max)
        .map(|m| (1..=max).rev().filter(|&x| m >> (x - 1) & 1 == 1).collect())
        .collect()
}

/// Whether `inner ⊆ outer` as diagrams.
pub fn contained(inner: &[usize], outer: &[usize]) -> bool {
    inner.len() <= outer.len() && inner.iter().zip(outer).all(|(a, b)| a <= b)
}

/// Every vexillary `w` with every coset-minimal `v ≥ w`, through the library.
pub fn vexillary_pairs(t: LieType, n: usize) -> Vec<(SignedPermutation, SignedPermutation)> {
    use vexmult::klmatrix::is_coset_minimal;
    use vexmult::vexillary::{is_vexillary, triple_of};
    use vexmult::weylgroups::{elements, CoverClosure};
    let closure = CoverClosure::new(t, n).unwrap();
    let mut out = Vec::new();
    for w in elements(t, n) {
        if !is_vexillary(t, &w).unwrap() {
            continue;
        }
        let tau = triple_of(t, &w).unwrap();
        for v in closure.upper_set(&w) {
            if is_coset_minimal(&v, &tau) {
                out.push((w.clone(), v));
            }
        }
    }
    out
}

/// Whether the simple reflection at 0-based `slot` (0 is the sign generator
/// in the signed types, `i ≥ 1` swaps positions `i`, `i+1`) preserves every
/// column set `E_p`.
pub fn stabilizes(t: LieType, slot: usize, ps: &[usize]) -> bool {
    match (t, slot) {
        (LieType::A, 0) => false,
        (LieType::A, i) => ps.iter().all(|&p| p != i),
        (LieType::B | LieType::C, 0) => ps.iter().all(|&p| p != 1),
        (LieType::D, 0) => ps.iter().all(|&p| p >= 2),
        (LieType::B | LieType::C, i) => ps.iter().all(|&p| p != i + 1),
        (LieType::D, i) => ps.iter().all(|&p| p != i),
    }
}

/// Applies the simple generator at `slot`, in the numbering of [`stabilizes`].
pub fn apply_simple(t: LieType, slot: usize, w: &[i32]) -> Vec<i32> {
    let mut u = w.to_vec();
    match (t, slot) {
        (LieType::A, i) => u.swap(i - 1, i),
        (LieType::B | LieType::C, 0) => u[0] = -u[0],
        (LieType::D, 0) => {
            u[0] = -w[1];
            u[1] = -w[0];
        }
        (_, i) => u.swap(i - 1, i),
    }
    u
}

/// Length by counting, coded separately from the library formulas:
/// inversion pairs of the extended sequence on the full grid, halved.
pub fn length_by_pairs(t: LieType, w: &[i32]) -> usize {
    let n = w.len() as i32;
    if t == LieType::A {
        return (0..w.len()).flat_map(|i| (i + 1..w.len()).map(move |j| (i, j))).filter(|&(i, j)| w[i] > w[j]).count();
    }
    let g: Vec<i32> = (-n..=n).filter(|&x| x != 0).collect();
    let inv = g
        .iter()
        .flat_map(|&a| g.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| a < b && at(w, a) > at(w, b))
        .count();
    // ℓ_B = (inv + neg) / 2 and ℓ_D = ℓ_B - neg.
    let neg = w.iter().filter(|&&x| x < 0).count();
    match t {
        LieType::D => (inv - neg) / 2,
        _ => (inv + neg) / 2,
    }
}

/// The shortest element of `v·W_P`, by descending through stabilizing
/// generators.
pub fn coset_minimize(t: LieType, v: &[i32], ps: &[usize]) -> Vec<i32> {
    let n = v.len();
    let slots: Vec<usize> = match t {
        LieType::A => (1..n).collect(),
        LieType::D if n < 2 => Vec::new(),
        _ => (0..n).collect(),
    };
    let mut cur = v.to_vec();
    loop {
        let l = length_by_pairs(t, &cur);
        let step = slots
            .iter()
            .filter(|&&s| stabilizes(t, s, ps))
            .map(|&s| apply_simple(t, s, &cur))
            .find(|u| length_by_pairs(t, u) < l);
        match step {
            Some(u) => cur = u,
            None => return cur,
        }
    }
}
