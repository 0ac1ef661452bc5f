//! Extremal three-point Nevanlinna–Pick interpolation on polydiscs.
//!
//! A three-point problem `z_j ↦ λ_j` from `𝔻ⁿ` to `𝔻` is normalized to
//! `0 ↦ 0, z ↦ σ, w ↦ τ`, classified (degenerate, or `k`-dimensional), and for
//! extremal data solved constructively: a 3-complex geodesic through the
//! nodes is recovered by inverting the parametrization map [`geodesic::phi_map`],
//! and the interpolant is synthesized as a composition of magic functions that
//! is a left inverse to that geodesic.
//!
//! Independent oracles live next to the constructive path: Pick matrices on
//! the disc ([`schur_pick`]), the two-kernel decomposition on the bidisc
//! ([`agler`]) and sampled boundary checks ([`solver::verify`]).

pub mod agler;
pub mod classify;
pub mod error;
pub mod geodesic;
pub mod hyperbolic;
pub mod linalg;
pub mod magic;
pub mod problem;
pub mod schur_pick;
pub mod solver;
pub mod tolerances;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use problem::{PickProblem, PolydiscPoint};
