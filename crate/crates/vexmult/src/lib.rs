//! Multiplicities of vexillary Schubert varieties at torus-fixed points in
//! classical types, computed by counting excited Young diagrams.
//!
//! The pipeline is `w ↦ triple ↦ shape λ`, `(w, v) ↦ weak triple ↦ outer
//! shape μ`, and the multiplicity of `Ω_w` at `p_v` is `#E_μ(λ)`.

pub mod cli;
pub mod diagrams;
pub mod error;
pub mod excited;
pub mod klmatrix;
pub mod multiplicity;
pub mod vexillary;
pub mod weylgroups;

pub use error::{Error, Result};
pub use vexillary::{Shape, Triple, WeakTriple};
pub use weylgroups::{LieType, SignedPermutation};
