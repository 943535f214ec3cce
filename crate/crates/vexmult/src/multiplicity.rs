//! `mult_{p_v}(Ω_w) = #E_μ(λ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::excited::{count_with, enumerate_with, DiagramState, EnumerateOptions};
use crate::vexillary::{outer_shape_of, shape_of, weak_triple, Shape};
use crate::weylgroups::{LieType, SignedPermutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    #[serde(rename = "type")]
    pub t: LieType,
    pub w: SignedPermutation,
    pub v: SignedPermutation,
    pub k: Vec<usize>,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub kprime: Vec<usize>,
    pub lambda: Shape,
    pub mu: Shape,
    pub multiplicity: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<DiagramState>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MultiplicityOptions {
    /// Embed every excited diagram in the report.
    pub list_states: bool,
    pub enumerate: EnumerateOptions,
}

pub fn multiplicity(t: LieType, w: &SignedPermutation, v: &SignedPermutation) -> Result<MultiplicityReport> {
    multiplicity_with(t, w, v, MultiplicityOptions::default())
}

pub fn multiplicity_with(
    t: LieType,
    w: &SignedPermutation,
    v: &SignedPermutation,
    opts: MultiplicityOptions,
) -> Result<MultiplicityReport> {
    let wt = weak_triple(t, w, v)?;
    let lambda = Shape::new(shape_of(&wt.base)?.trimmed().to_vec());
    let mu = Shape::new(outer_shape_of(&wt).trimmed().to_vec());
    if !mu.contains(&lambda) {
        return Err(Error::Invariant(format!("shape {lambda} is not inside outer shape {mu}")));
    }
    let (value, states) = if opts.list_states {
        let states = enumerate_with(t, &lambda, &mu, opts.enumerate)?;
        (states.len() as u64, Some(states))
    } else {
        (count_with(t, &lambda, &mu, opts.enumerate)?, None)
    };
    Ok(MultiplicityReport {
        t,
        w: w.clone(),
        v: v.clone(),
        k: wt.base.k.clone(),
        p: wt.base.p.clone(),
        q: wt.base.q.clone(),
        kprime: wt.kprime,
        lambda,
        mu,
        multiplicity: value,
        states,
    })
}

/// Whether `p_v` is a smooth point of `Ω_w`.
pub fn is_smooth_point(t: LieType, w: &SignedPermutation, v: &SignedPermutation) -> Result<bool> {
    Ok(multiplicity(t, w, v)?.multiplicity == 1)
}
