//! Numerical tolerances shared across modules.

/// Algebraic identities (involutions, round trips, closed forms).
pub const IDENTITY: f64 = 1e-12;

/// Decision predicates: extremality, degeneracy and region membership.
/// Comparisons whose margin falls inside this band are reported as boundary
/// cases rather than classified.
pub const DECISION: f64 = 1e-9;

/// Relative band on the minimum Pick eigenvalue, scaled by the trace.
pub const PICK_EXTREMAL: f64 = 1e-9;

/// Residual accepted from the Newton inversion of the parametrization map.
pub const INVERSION_RESIDUAL: f64 = 1e-11;

/// Interpolation residual required from a solve.
pub const INTERPOLATION: f64 = 1e-9;

/// Agler certificates: positivity of both kernels.
pub const AGLER_PSD: f64 = 1e-9;

/// Agler certificates: entrywise violation of the decomposition.
pub const AGLER_RESIDUAL: f64 = 1e-8;

/// Simplex clamp used while iterating on weights.
pub const SIMPLEX_EPS: f64 = 1e-12;
