mod common;

use std::collections::BTreeSet;

use common::{contained, excited_by_rule, excited_oracle, partitions_in_box, strict_partitions};
use vexmult::excited::{
    count, count_with, elementary_moves, enumerate, enumerate_with, initial_state, render_state, DiagramState,
    EnumerateOptions, Region,
};
use vexmult::{Error, LieType, Shape};

type Boxes = BTreeSet<(usize, usize)>;

fn sh(parts: &[usize]) -> Shape {
    Shape::new(parts.to_vec())
}

fn as_sets(states: &[DiagramState]) -> BTreeSet<Boxes> {
    states.iter().map(|s| s.boxes.iter().copied().collect()).collect()
}

/// Nested pairs `λ ⊆ μ` for the type: straight shapes in a 4×4 box, strict
/// shapes inside the staircase (5,4,3,2,1) otherwise.
fn pairs(t: LieType) -> Vec<(Vec<usize>, Vec<usize>)> {
    let shapes = if t == LieType::A { partitions_in_box(4, 4) } else { strict_partitions(5) };
    let mut out = Vec::new();
    for mu in &shapes {
        for lam in &shapes {
            if contained(lam, mu) {
                out.push((lam.clone(), mu.clone()));
            }
        }
    }
    out
}

#[test]
fn agrees_with_second_engine() {
    for t in LieType::ALL {
        for (lam, mu) in pairs(t) {
            let ours = enumerate(t, &sh(&lam), &sh(&mu)).unwrap();
            assert_eq!(as_sets(&ours), excited_oracle(t, &lam, &mu), "{t} {lam:?} in {mu:?}");
        }
    }
}

#[test]
fn moves_preserve_size_and_raise_rows() {
    for t in LieType::ALL {
        for (lam, mu) in pairs(t) {
            let region = Region::new(t, &sh(&mu)).unwrap();
            let all = enumerate(t, &sh(&lam), &sh(&mu)).unwrap();
            let size: usize = lam.iter().sum();
            for s in &all {
                assert_eq!(s.boxes.len(), size);
                assert!(s.boxes.iter().all(|&b| region.contains(b)));
                let rows: usize = s.boxes.iter().map(|b| b.0).sum();
                for next in elementary_moves(s, &region).unwrap() {
                    let r: usize = next.boxes.iter().map(|b| b.0).sum();
                    assert!(r > rows);
                    assert!(all.binary_search(&next).is_ok());
                }
            }
        }
    }
}

/// States one reverse move before `s`.
fn predecessors(t: LieType, region: &Region, s: &Boxes) -> Vec<Boxes> {
    let free = |c: (usize, usize)| region.contains(c) && !s.contains(&c);
    let mut out = Vec::new();
    for &(a, b) in s {
        let from: Option<((usize, usize), Vec<(usize, usize)>)> = if t.is_signed() && a == b {
            match t {
                LieType::C if a >= 2 => Some(((a - 1, a - 1), vec![(a - 1, a)])),
                LieType::B | LieType::D if a >= 3 => Some(((a - 2, a - 2), vec![(a - 2, a - 1), (a - 1, a - 1), (a - 1, a)])),
                _ => None,
            }
        } else if a >= 2 && b >= 2 {
            Some(((a - 1, b - 1), vec![(a - 1, b), (a, b - 1)]))
        } else {
            None
        };
        if let Some((src, need)) = from {
            if free(src) && need.iter().all(|&c| free(c)) {
                let mut y = s.clone();
                y.remove(&(a, b));
                y.insert(src);
                out.push(y);
            }
        }
    }
    out
}

#[test]
fn backward_closure_from_maximal_states() {
    for t in LieType::ALL {
        for (lam, mu) in pairs(t) {
            let region = Region::new(t, &sh(&mu)).unwrap();
            let all = enumerate(t, &sh(&lam), &sh(&mu)).unwrap();
            let maximal: Vec<Boxes> = all
                .iter()
                .filter(|s| elementary_moves(s, &region).unwrap().is_empty())
                .map(|s| s.boxes.iter().copied().collect())
                .collect();
            let mut seen: BTreeSet<Boxes> = maximal.iter().cloned().collect();
            let mut stack = maximal;
            while let Some(s) = stack.pop() {
                for y in predecessors(t, &region, &s) {
                    if seen.insert(y.clone()) {
                        stack.push(y);
                    }
                }
            }
            assert_eq!(seen, as_sets(&all), "{t} {lam:?} in {mu:?}");
        }
    }
}

#[test]
fn shifted_counts_are_ordered() {
    for (lam, mu) in pairs(LieType::C) {
        let c = count(LieType::C, &sh(&lam), &sh(&mu)).unwrap();
        let b = count(LieType::B, &sh(&lam), &sh(&mu)).unwrap();
        let plain = excited_by_rule(true, 0, &lam, &mu).len() as u64;
        assert!(plain <= b && b <= c, "{lam:?} in {mu:?}: plain {plain}, B {b}, C {c}");
        assert_eq!(count(LieType::D, &sh(&lam), &sh(&mu)).unwrap(), b);
    }
}

#[test]
fn worked_counts() {
    let cases: [(LieType, &[usize], &[usize], u64); 5] = [
        (LieType::A, &[2, 1], &[3, 3, 2], 5),
        (LieType::A, &[4, 3, 3, 2, 1], &[4, 3, 3, 3, 3], 2),
        (LieType::C, &[3, 1], &[4, 3, 1], 6),
        (LieType::D, &[3, 1], &[4, 3, 2, 1], 5),
        (LieType::B, &[3, 1], &[4, 3, 1], 2),
    ];
    for (t, lam, mu, want) in cases {
        assert_eq!(count(t, &sh(lam), &sh(mu)).unwrap(), want, "{t} {lam:?} in {mu:?}");
    }
}

#[test]
fn count_is_one_exactly_without_moves() {
    for t in LieType::ALL {
        for (lam, mu) in pairs(t) {
            let region = Region::new(t, &sh(&mu)).unwrap();
            let start = initial_state(&sh(&lam), &region).unwrap();
            let rigid = elementary_moves(&start, &region).unwrap().is_empty();
            assert_eq!(count(t, &sh(&lam), &sh(&mu)).unwrap() == 1, rigid);
        }
        assert_eq!(count(t, &sh(&[]), &sh(&[3, 2])).unwrap(), 1);
    }
}

#[test]
fn parallel_matches_serial() {
    let big = [(LieType::A, vec![3, 3, 2, 1], vec![7, 7, 6, 6, 5, 4, 2]), (LieType::C, vec![4, 2, 1], vec![8, 6, 5, 3, 2])];
    for (t, lam, mu) in big {
        let serial = enumerate_with(t, &sh(&lam), &sh(&mu), EnumerateOptions { parallel: false, cap: 1 << 24 }).unwrap();
        let parallel = enumerate_with(t, &sh(&lam), &sh(&mu), EnumerateOptions { parallel: true, cap: 1 << 24 }).unwrap();
        assert!(serial.len() >= 70);
        assert_eq!(serial, parallel);
    }
}

#[test]
fn state_cap_fails_loudly() {
    let opts = EnumerateOptions { parallel: true, cap: 10 };
    let err = count_with(LieType::A, &sh(&[3, 2, 1]), &sh(&[6, 6, 5, 4, 3, 2]), opts).unwrap_err();
    assert!(matches!(err, Error::StateCap { cap: 10, .. }));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn bad_shapes_are_rejected() {
    assert!(Region::new(LieType::C, &sh(&[3, 3])).is_err());
    assert!(Region::new(LieType::A, &sh(&[1, 2])).is_err());
    let region = Region::new(LieType::A, &sh(&[2, 2])).unwrap();
    assert!(initial_state(&sh(&[3]), &region).is_err());
    let outside = DiagramState { boxes: vec![(3, 3)] };
    assert!(elementary_moves(&outside, &region).is_err());
}

#[test]
fn rendering() {
    let region = Region::new(LieType::A, &sh(&[3, 3, 2])).unwrap();
    let states = enumerate(LieType::A, &sh(&[2, 1]), &sh(&[3, 3, 2])).unwrap();
    let pictures: Vec<String> = states.iter().map(|s| render_state(&region, s)).collect();
    assert_eq!(pictures[0], "##.\n#..\n..\n");
    assert!(pictures.contains(&"...\n.##\n.#\n".to_string()));
    let shifted = Region::new(LieType::C, &sh(&[3, 1])).unwrap();
    let s = initial_state(&sh(&[1]), &shifted).unwrap();
    assert_eq!(render_state(&shifted, &s), "#..\n .\n");
}
