//! Drifting-Laplacian spectra on model metric measure spaces.
//!
//! The operator is `Δ_f u = Δu − ⟨∇f, ∇u⟩`, self-adjoint for the measure
//! `e^{−f} dv`. This crate discretizes it on flat boxes and tori, computes
//! the low end of its spectrum with residual certificates and Richardson
//! extrapolation, supplies closed-form reference spectra, and evaluates a
//! family of universal eigenvalue inequalities and gap bounds.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod discretize;
pub mod eigensolve;
pub mod error;
pub mod linalg;
pub mod model_space;
pub mod oracles;
mod util;

pub use bounds::{BoundCheck, ConstantsBundle, Verdict};
pub use discretize::{GeneralizedPair, Grid, SparseSymmetricOperator};
pub use eigensolve::{Method, Route, SolverConfig, Spectrum};
pub use error::{Error, Result};
pub use model_space::{Boundary, Domain, GeometrySpec, Shape, WeightFunction};
