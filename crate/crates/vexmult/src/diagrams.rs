//! Rothe diagrams, essential sets and their ASCII rendering.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::weylgroups::{format_index, grid, grid_next, LieType, Notation, SignedPermutation};

/// A grid position `(row, col)`; barred indices are negative.
pub type Cell = (i32, i32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotheDiagram {
    pub t: LieType,
    pub owner: SignedPermutation,
    pub boxes: BTreeSet<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialSet {
    /// Sorted by column, then by decreasing row.
    pub boxes: Vec<Cell>,
    /// Whether consecutive boxes go weakly south-west to north-east.
    pub sw_ne: bool,
}

/// JSON form `{"boxes": [[row, col], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxesJson {
    pub boxes: Vec<[i32; 2]>,
}

impl BoxesJson {
    pub fn new<'a>(cells: impl IntoIterator<Item = &'a Cell>) -> Self {
        BoxesJson {
            boxes: cells.into_iter().map(|&(r, c)| [r, c]).collect(),
        }
    }
}

/// Boxes `(i, j)` with `i < w(j)` and `j < w⁻¹(i)`, over the full grid of `t`.
pub fn rothe_diagram(t: LieType, w: &SignedPermutation) -> Result<RotheDiagram> {
    w.check_type(t)?;
    let g = grid(t, w.n());
    let winv = w.inverse();
    let mut boxes = BTreeSet::new();
    for &j in &g {
        for &i in &g {
            if i < w.at(j) && j < winv.at(i) {
                boxes.insert((i, j));
            }
        }
    }
    Ok(RotheDiagram {
        t,
        owner: w.clone(),
        boxes,
    })
}

impl RotheDiagram {
    /// The part of the diagram whose essential boxes are read: everything in
    /// type A, the barred columns otherwise.
    pub fn restricted(&self) -> BTreeSet<Cell> {
        if self.t.is_signed() {
            self.boxes.iter().copied().filter(|&(_, j)| j < 0).collect()
        } else {
            self.boxes.clone()
        }
    }

    pub fn transpose(&self) -> BTreeSet<Cell> {
        self.boxes.iter().map(|&(i, j)| (j, i)).collect()
    }
}

/// South-east corners of the (restricted) Rothe diagram. In the signed types
/// boxes `(i, 1̄)` with `i < 1̄` are dropped; this is the rule for vexillary
/// elements and is applied to every input.
pub fn essential_set(t: LieType, w: &SignedPermutation) -> Result<EssentialSet> {
    let d = rothe_diagram(t, w)?;
    Ok(essential_of(&d))
}

pub(crate) fn essential_of(d: &RotheDiagram) -> EssentialSet {
    let n = d.owner.n();
    let t = d.t;
    let r = d.restricted();
    let mut boxes: Vec<Cell> = r
        .iter()
        .copied()
        .filter(|&(i, j)| {
            let below = grid_next(t, n, i).is_some_and(|i2| r.contains(&(i2, j)));
            let right = grid_next(t, n, j).is_some_and(|j2| r.contains(&(i, j2)));
            let excluded = t.is_signed() && j == -1 && i < -1;
            !below && !right && !excluded
        })
        .collect();
    boxes.sort_by_key(|&(i, j)| (j, std::cmp::Reverse(i)));
    let sw_ne = boxes.windows(2).all(|p| p[0].1 <= p[1].1 && p[0].0 >= p[1].0);
    EssentialSet { boxes, sw_ne }
}

/// Fixed-width grid rendering: dots `*`, diagram boxes `#`, essential boxes
/// `E`, everything else `.`. Rows and columns are labelled.
pub fn render_rothe(t: LieType, w: &SignedPermutation, show_essential: bool, notation: Notation) -> Result<String> {
    let d = rothe_diagram(t, w)?;
    let ess: BTreeSet<Cell> = if show_essential {
        essential_of(&d).boxes.into_iter().collect()
    } else {
        BTreeSet::new()
    };
    let g = grid(t, w.n());
    Ok(render_grid(&g, &g, notation, |i, j| {
        if w.at(j) == i {
            '*'
        } else if ess.contains(&(i, j)) {
            'E'
        } else if d.boxes.contains(&(i, j)) {
            '#'
        } else {
            '.'
        }
    }))
}

pub(crate) fn render_grid(rows: &[i32], cols: &[i32], notation: Notation, cell: impl Fn(i32, i32) -> char) -> String {
    let label = |x: i32| format_index(x, notation);
    let width = rows.iter().chain(cols).map(|&x| label(x).len()).max().unwrap_or(1);
    let mut out = String::new();
    out.push_str(&" ".repeat(width));
    for &j in cols {
        out.push_str(&format!(" {:>width$}", label(j)));
    }
    out.push('\n');
    for &i in rows {
        out.push_str(&format!("{:>width$}", label(i)));
        for &j in cols {
            out.push_str(&format!(" {:>width$}", cell(i, j)));
        }
        out.push('\n');
    }
    out
}
