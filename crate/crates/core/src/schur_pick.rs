//! One-variable Pick machinery: Pick matrices, solvability and extremality
//! on the disc, and explicit degree-≤2 Blaschke interpolation by Schur
//! reduction.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{mobius, pseudo_hyperbolic, unit, BlaschkeProduct, DiscAutomorphism};
use crate::linalg::hermitian_eigenvalues;
use crate::tolerances;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The matrix `((1 − λ_i λ̄_j)/(1 − z_i z̄_j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PickMatrix {
    entries: DMatrix<Complex64>,
}

impl PickMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn trace(&self) -> f64 {
        (0..self.order()).map(|i| self.entries[(i, i)].re).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    StrictlySolvable,
    Extremal,
    Unsolvable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscSolvability {
    pub verdict: Verdict,
    pub min_eigenvalue: f64,
}

pub fn pick_matrix(nodes: &[Complex64], targets: &[Complex64]) -> Result<PickMatrix> {
    if nodes.len() != targets.len() {
        return Err(Error::DimensionMismatch { expected: nodes.len(), got: targets.len() });
    }
    if nodes.is_empty() || nodes.len() > 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: nodes.len() });
    }
    for i in 0..nodes.len() {
        for j in 0..i {
            if nodes[i] == nodes[j] {
                return Err(Error::NodesNotDistinct);
            }
        }
    }
    let n = nodes.len();
    let entries = DMatrix::from_fn(n, n, |i, j| {
        (ONE - targets[i] * targets[j].conj()) / (ONE - nodes[i] * nodes[j].conj())
    });
    Ok(PickMatrix { entries })
}

/// Eigenvalue verdict with the band `|λ_min| ≤ 1e−9 · trace`.
pub fn is_solvable_disc(nodes: &[Complex64], targets: &[Complex64]) -> Result<DiscSolvability> {
    let pick = pick_matrix(nodes, targets)?;
    let min_eigenvalue = pick.min_eigenvalue();
    let band = tolerances::PICK_EXTREMAL * pick.trace().abs();
    let verdict = if min_eigenvalue > band {
        Verdict::StrictlySolvable
    } else if min_eigenvalue >= -band {
        Verdict::Extremal
    } else {
        Verdict::Unsolvable
    };
    Ok(DiscSolvability { verdict, min_eigenvalue })
}

/// Largest `s` for which the datum `nodes ↦ s·targets` is solvable on the
/// disc, by bisection on the (non-increasing) minimum Pick eigenvalue.
pub fn extremal_scale_disc(nodes: &[Complex64], targets: &[Complex64]) -> Result<f64> {
    let max_target = targets.iter().map(|t| t.norm()).fold(0.0, f64::max);
    if max_target == 0.0 {
        return Err(Error::TargetsNotDistinct);
    }
    let scaled = |s: f64| -> Result<f64> {
        let t: Vec<Complex64> = targets.iter().map(|&v| v * s).collect();
        Ok(pick_matrix(nodes, &t)?.min_eigenvalue())
    };
    let (mut lo, mut hi) = (0.0, 1.0 / max_target);
    if scaled(hi)? >= 0.0 {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if scaled(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A Schur function `φ(λ) = m_a(c · m_x(λ))`, `|c| ≤ 1`, with `φ(x) = a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPointSchur {
    pub x: Complex64,
    pub a: Complex64,
    pub c: Complex64,
}

impl TwoPointSchur {
    /// The map sending `x ↦ a`, `y ↦ b`; requires `ρ(a, b) ≤ ρ(x, y)`
    /// (otherwise `|c| > 1` and the result is not a self-map of the disc).
    pub fn through(x: Complex64, a: Complex64, y: Complex64, b: Complex64) -> Self {
        let c = mobius(a, b) / mobius(x, y);
        Self { x, a, c }
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        mobius(self.a, self.c * mobius(self.x, lambda))
    }
}

/// Degree-≤2 Blaschke product through an extremal three-point disc datum.
///
/// The first node is peeled off by one Schur step; the reduced two-point
/// extremal problem is solved by an automorphism (or a unimodular constant
/// when the reduced targets coincide) and the step is undone.
pub fn blaschke_interpolate(nodes: [Complex64; 3], targets: [Complex64; 3]) -> Result<BlaschkeProduct> {
    let solvability = is_solvable_disc(&nodes, &targets)?;
    if solvability.verdict != Verdict::Extremal {
        return Err(Error::NotExtremal { min_eigenvalue: solvability.min_eigenvalue });
    }
    let (z1, w1) = (nodes[0], targets[0]);
    let reduced: Vec<Complex64> = (1..3).map(|j| mobius(w1, targets[j]) / mobius(z1, nodes[j])).collect();
    let (u2, u3) = (reduced[0], reduced[1]);

    let constant = (u2 - u3).norm() <= tolerances::DECISION
        || u2.norm() >= 1.0 - tolerances::DECISION
        || u3.norm() >= 1.0 - tolerances::DECISION;
    let (zeros, inner): (Vec<Complex64>, Box<dyn Fn(Complex64) -> Complex64>) = if constant {
        let kappa = unit(u2 + u3);
        (vec![mobius(z1, kappa.conj() * w1)], Box::new(move |l| kappa * mobius(z1, l)))
    } else {
        let g = DiscAutomorphism::through_two_points(nodes[1], u2, nodes[2], u3);
        // r·m_{z1}(λ)·m_c(λ) = w1, cleared of denominators.
        let (r, c) = (g.rotation, g.center);
        let qa = r - w1 * z1.conj() * c.conj();
        let qb = -r * (z1 + c) + w1 * (z1.conj() + c.conj());
        let qc = r * z1 * c - w1;
        (quadratic_roots(qa, qb, qc).to_vec(), Box::new(move |l| mobius(z1, l) * g.apply(l)))
    };
    let f = |l: Complex64| mobius(w1, inner(l));

    // Evaluate on the circle, where every Möbius factor has modulus one.
    let probe = Complex64::from_polar(1.0, 0.7);
    let denom = zeros.iter().fold(ONE, |acc, &a| acc * mobius(a, probe));
    let factor = unit(f(probe) / denom);
    BlaschkeProduct::new(factor, zeros)
}

fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - a * c * 4.0).sqrt();
    let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) * 0.5 } else { -(b - disc) * 0.5 };
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

/// Two-point extremality on the disc: `ρ(λ₁, λ₂) = ρ(z₁, z₂)` within the
/// decision band.
pub fn two_point_disc_extremal(z1: Complex64, l1: Complex64, z2: Complex64, l2: Complex64) -> bool {
    (pseudo_hyperbolic(l1, l2) - pseudo_hyperbolic(z1, z2)).abs() <= tolerances::DECISION
}
