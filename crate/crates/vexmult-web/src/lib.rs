//! Browser bindings. Every entry point takes plain strings and returns a JSON
//! string; failures come back as `{"error": kind, "message": text}`.

use serde_json::{json, Value};
use vexmult::diagrams::{essential_set, render_rothe};
use vexmult::excited::{render_state, EnumerateOptions, Region};
use vexmult::multiplicity::{multiplicity_with, MultiplicityOptions};
use vexmult::vexillary::{is_vexillary, outer_shape, shape_of, triple_of};
use vexmult::weylgroups::Notation;
use vexmult::{Error, LieType, SignedPermutation};
use wasm_bindgen::prelude::*;

/// Browser builds have no environment, so the state cap is fixed here.
pub const WEB_STATE_CAP: usize = 200_000;

fn finish(r: Result<Value, Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.kind(), "message": e.to_string() }).to_string(),
    }
}

fn args(t: &str, w: &str) -> Result<(LieType, SignedPermutation), Error> {
    Ok((t.trim().parse()?, SignedPermutation::parse(w)?))
}

fn notation(bar: bool) -> Notation {
    if bar {
        Notation::Bar
    } else {
        Notation::Minus
    }
}

/// Rothe diagram with essential boxes marked, plus the triple when `w` is vexillary.
#[wasm_bindgen]
pub fn diagram(t: &str, w: &str, bar: bool) -> String {
    finish((|| {
        let (t, w) = args(t, w)?;
        let picture = render_rothe(t, &w, true, notation(bar))?;
        let ess = essential_set(t, &w)?;
        let vex = is_vexillary(t, &w)?;
        let (triple, lambda) = if vex {
            let tau = triple_of(t, &w)?;
            let lam = shape_of(&tau)?;
            (Some(tau.to_string()), Some(lam.to_string()))
        } else {
            (None, None)
        };
        Ok(json!({
            "picture": picture,
            "essential": ess.boxes.iter().map(|&(r, c)| [r, c]).collect::<Vec<_>>(),
            "vexillary": vex,
            "triple": triple,
            "lambda": lambda,
        }))
    })())
}

/// Shapes `λ` and `μ` for the pair `w ≤ v`.
#[wasm_bindgen]
pub fn shapes(t: &str, w: &str, v: &str) -> String {
    finish((|| {
        let (t, w) = args(t, w)?;
        let v = SignedPermutation::parse(v)?;
        let tau = triple_of(t, &w)?;
        let lam = shape_of(&tau)?;
        let mu = outer_shape(t, &w, &v)?;
        Ok(json!({ "triple": tau.to_string(), "lambda": lam.to_string(), "mu": mu.to_string() }))
    })())
}

/// Multiplicity of `Ω_w` at `p_v`, with up to `max_pictures` excited diagrams drawn.
#[wasm_bindgen]
pub fn multiplicity(t: &str, w: &str, v: &str, max_pictures: usize) -> String {
    finish((|| {
        let (t, w) = args(t, w)?;
        let v = SignedPermutation::parse(v)?;
        let opts = MultiplicityOptions {
            list_states: true,
            enumerate: EnumerateOptions { parallel: false, cap: WEB_STATE_CAP },
        };
        let r = multiplicity_with(t, &w, &v, opts)?;
        let region = Region::new(t, &r.mu)?;
        let pictures: Vec<String> = r
            .states
            .iter()
            .flatten()
            .take(max_pictures)
            .map(|s| render_state(&region, s))
            .collect();
        Ok(json!({
            "lambda": r.lambda.to_string(),
            "mu": r.mu.to_string(),
            "kprime": r.kprime,
            "multiplicity": r.multiplicity,
            "smooth": r.multiplicity == 1,
            "pictures": pictures,
        }))
    })())
}
