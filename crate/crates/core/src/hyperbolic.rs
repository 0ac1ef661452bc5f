//! Möbius maps, Blaschke products and the pseudo-hyperbolic metric of the
//! unit disc, plus automorphism-based normalization of Pick problems.
//!
//! Möbius maps follow the involutive convention
//! `m_α(λ) = (α − λ)/(1 − ᾱλ)`, so `m_α(α) = 0`, `m_α(0) = α` and
//! `m_α ∘ m_α = id`. Blaschke factors use the same maps; the unimodular
//! prefactor absorbs the sign relative to `(λ − α)/(1 − ᾱλ)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{PickProblem, PolydiscPoint};
use crate::tolerances;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `m_α(λ) = (α − λ)/(1 − ᾱλ)`.
#[inline]
pub fn mobius(alpha: Complex64, lambda: Complex64) -> Complex64 {
    (alpha - lambda) / (ONE - alpha.conj() * lambda)
}

/// Pseudo-hyperbolic distance `|m_a(b)|`, a monotone function of the
/// hyperbolic distance.
#[inline]
pub fn pseudo_hyperbolic(a: Complex64, b: Complex64) -> f64 {
    mobius(a, b).norm().min(1.0)
}

/// Unit complex number with the argument of `z` (1 for `z = 0`).
pub fn unit(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        ONE
    } else {
        z / r
    }
}

/// Finite Blaschke product `factor · Π m_{zeros_i}(λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    factor: Complex64,
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(factor: Complex64, zeros: Vec<Complex64>) -> Result<Self> {
        if (factor.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameters(format!("Blaschke factor {factor} is not unimodular")));
        }
        if let Some(z) = zeros.iter().find(|z| !(z.norm() < 1.0)) {
            return Err(Error::OutsideDisc(format!("Blaschke zero {z}")));
        }
        Ok(Self { factor: unit(factor), zeros })
    }

    /// The identity map `λ`, written as `−m_0(λ)`.
    pub fn identity() -> Self {
        Self { factor: -ONE, zeros: vec![ZERO] }
    }

    /// `λ · m_γ(λ) = −m_0(λ) m_γ(λ)`.
    pub fn lambda_times_mobius(gamma: Complex64) -> Self {
        Self { factor: -ONE, zeros: vec![ZERO, gamma] }
    }

    pub fn factor(&self) -> Complex64 {
        self.factor
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        self.zeros.iter().fold(self.factor, |acc, &a| acc * mobius(a, lambda))
    }
}

/// Disc automorphism `ζ ↦ rotation · m_center(ζ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscAutomorphism {
    pub center: Complex64,
    pub rotation: Complex64,
}

impl DiscAutomorphism {
    pub fn new(center: Complex64, rotation: Complex64) -> Result<Self> {
        if !(center.norm() < 1.0) {
            return Err(Error::OutsideDisc(format!("automorphism center {center}")));
        }
        if (rotation.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameters(format!("rotation {rotation} is not unimodular")));
        }
        Ok(Self { center, rotation: unit(rotation) })
    }

    /// `ζ ↦ (ζ − a)/(1 − āζ)`: sends `a` to 0 and is the identity for `a = 0`.
    pub fn to_origin(a: Complex64) -> Self {
        Self { center: a, rotation: -ONE }
    }

    pub fn identity() -> Self {
        Self::to_origin(ZERO)
    }

    pub fn apply(&self, zeta: Complex64) -> Complex64 {
        self.rotation * mobius(self.center, zeta)
    }

    pub fn invert(&self, v: Complex64) -> Complex64 {
        mobius(self.center, self.rotation.conj() * v)
    }

    /// The automorphism `g` with `g(ζ) = self.apply(ζ)` followed by a rotation.
    pub fn then_rotate(&self, rotation: Complex64) -> Self {
        Self { center: self.center, rotation: unit(rotation * self.rotation) }
    }

    /// Unique automorphism with `g(a₁) = b₁, g(a₂) = b₂`, when the two pairs
    /// are at equal pseudo-hyperbolic distance (the rotation is projected to
    /// the unit circle otherwise).
    pub fn through_two_points(a1: Complex64, b1: Complex64, a2: Complex64, b2: Complex64) -> Self {
        // m_{b1} ∘ g ∘ m_{a1} fixes 0, hence is a rotation c.
        let c = unit(mobius(b1, b2) / mobius(a1, a2));
        // g(ζ) = m_{b1}(c · m_{a1}(ζ)); its zero is m_{a1}(c̄ b1).
        let center = mobius(a1, c.conj() * b1);
        let probe = if center.norm() < 0.5 { Complex64::new(0.5, 0.25) } else { ZERO };
        let value = mobius(b1, c * mobius(a1, probe));
        let rotation = unit(value / mobius(center, probe));
        Self { center, rotation }
    }
}

/// Coordinate-wise automorphisms normalizing a Pick problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemTransform {
    pub disc_maps: Vec<DiscAutomorphism>,
    pub target_map: DiscAutomorphism,
}

impl ProblemTransform {
    pub fn identity(n: usize) -> Self {
        Self { disc_maps: vec![DiscAutomorphism::identity(); n], target_map: DiscAutomorphism::identity() }
    }

    pub fn dim(&self) -> usize {
        self.disc_maps.len()
    }

    pub fn apply_point(&self, z: &PolydiscPoint) -> PolydiscPoint {
        PolydiscPoint::from_vec_unchecked(
            self.disc_maps.iter().zip(z.coords()).map(|(g, &c)| g.apply(c)).collect(),
        )
    }

    pub fn invert_point(&self, z: &PolydiscPoint) -> PolydiscPoint {
        PolydiscPoint::from_vec_unchecked(
            self.disc_maps.iter().zip(z.coords()).map(|(g, &c)| g.invert(c)).collect(),
        )
    }

    pub fn apply_target(&self, v: Complex64) -> Complex64 {
        self.target_map.apply(v)
    }

    pub fn invert_target(&self, v: Complex64) -> Complex64 {
        self.target_map.invert(v)
    }

    pub fn apply_problem(&self, p: &PickProblem) -> PickProblem {
        PickProblem {
            nodes: [self.apply_point(&p.nodes[0]), self.apply_point(&p.nodes[1]), self.apply_point(&p.nodes[2])],
            targets: p.targets.map(|v| self.apply_target(v)),
        }
    }

    pub fn invert_problem(&self, p: &PickProblem) -> PickProblem {
        PickProblem {
            nodes: [self.invert_point(&p.nodes[0]), self.invert_point(&p.nodes[1]), self.invert_point(&p.nodes[2])],
            targets: p.targets.map(|v| self.invert_target(v)),
        }
    }

    /// Post-composes the target map with a rotation.
    pub fn rotate_targets(&self, rotation: Complex64) -> Self {
        Self { disc_maps: self.disc_maps.clone(), target_map: self.target_map.then_rotate(rotation) }
    }
}

/// Moves the first node to `0 ∈ 𝔻ⁿ` and the first target to `0 ∈ 𝔻`.
///
/// Nodes that agree in some coordinates are accepted; only coincident tuples
/// are rejected.
pub fn normalize_problem(p: &PickProblem) -> Result<(PickProblem, ProblemTransform)> {
    p.check_distinct()?;
    let transform = ProblemTransform {
        disc_maps: p.nodes[0].coords().iter().map(|&a| DiscAutomorphism::to_origin(a)).collect(),
        target_map: DiscAutomorphism::to_origin(p.targets[0]),
    };
    let mut normalized = transform.apply_problem(p);
    // The first node and target are exactly zero, not merely within rounding.
    normalized.nodes[0] = PolydiscPoint::origin(p.dim());
    normalized.targets[0] = ZERO;
    Ok((normalized, transform))
}

/// True when `|z| < 1` with a margin of [`tolerances::IDENTITY`].
pub fn strictly_inside(z: Complex64) -> bool {
    z.norm() < 1.0 - tolerances::IDENTITY
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mobius_examples() {
        assert!((mobius(c(0.0, 0.0), c(0.5, 0.0)) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!(mobius(c(0.3, 0.0), c(0.3, 0.0)).norm() < 1e-15);
        assert!((mobius(c(0.0, 0.5), c(0.0, 0.0)) - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn pseudo_hyperbolic_examples() {
        let a = c(0.3, -0.4);
        assert_eq!(pseudo_hyperbolic(a, a), 0.0);
        assert!((pseudo_hyperbolic(c(0.0, 0.0), c(0.5, 0.0)) - 0.5).abs() < 1e-15);
        // |0.5 + 0.5| / |1 + 0.25| = 0.8
        assert!((pseudo_hyperbolic(c(0.5, 0.0), c(-0.5, 0.0)) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn blaschke_convention() {
        // λ·m_0(λ) has zeros {0, 0}; with factor 1 it is −λ².
        let b = BlaschkeProduct::new(c(1.0, 0.0), vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((b.eval(c(0.5, 0.0)) - c(0.25, 0.0)).norm() < 1e-15);
        let b = BlaschkeProduct::new(c(-1.0, 0.0), vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((b.eval(c(0.5, 0.0)) - c(-0.25, 0.0)).norm() < 1e-15);
        let id = BlaschkeProduct::new(c(-1.0, 0.0), vec![c(0.0, 0.0)]).unwrap();
        assert!((id.eval(c(0.3, 0.0)) - c(0.3, 0.0)).norm() < 1e-15);
        let b = BlaschkeProduct::new(c(0.6, 0.8), vec![c(0.2, 0.7), c(-0.5, 0.1)]).unwrap();
        for k in 0..32 {
            let theta = k as f64 * std::f64::consts::TAU / 32.0;
            assert!((b.eval(Complex64::from_polar(1.0, theta)).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn blaschke_rejects_bad_input() {
        assert!(BlaschkeProduct::new(c(0.5, 0.0), vec![]).is_err());
        assert!(BlaschkeProduct::new(c(1.0, 0.0), vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn automorphism_through_two_points() {
        let (a1, a2) = (c(0.1, 0.2), c(-0.4, 0.3));
        let g = DiscAutomorphism::new(c(0.3, -0.5), c(0.0, 1.0)).unwrap();
        let h = DiscAutomorphism::through_two_points(a1, g.apply(a1), a2, g.apply(a2));
        assert!((h.center - g.center).norm() < 1e-13);
        assert!((h.rotation - g.rotation).norm() < 1e-13);
    }

    #[test]
    fn normalize_disc_example() {
        let nodes = [c(0.2, 0.0), c(0.5, 0.0), c(-0.1, 0.0)];
        let targets = [c(0.1, 0.0), c(0.4, 0.0), c(0.0, 0.0)];
        let p = PickProblem::new(nodes.map(|z| PolydiscPoint::new(vec![z]).unwrap()), targets).unwrap();
        let (q, tr) = normalize_problem(&p).unwrap();
        assert!(q.is_normalized());
        let back = tr.invert_problem(&q);
        for j in 0..3 {
            assert!(back.nodes[j].max_abs_diff(&p.nodes[j]) < 1e-12);
            assert!((back.targets[j] - p.targets[j]).norm() < 1e-12);
        }
    }

    #[test]
    fn normalize_identity_on_normalized_input() {
        let p = PickProblem::normalized_form(
            PolydiscPoint::new(vec![c(0.3, 0.1), c(-0.2, 0.0)]).unwrap(),
            PolydiscPoint::new(vec![c(0.0, 0.4), c(0.5, 0.5)]).unwrap(),
            c(0.1, 0.1),
            c(-0.2, 0.3),
        )
        .unwrap();
        let (q, tr) = normalize_problem(&p).unwrap();
        assert_eq!(tr, ProblemTransform::identity(2));
        assert_eq!(q, p);
    }

    #[test]
    fn normalize_rejects_duplicates() {
        let z = PolydiscPoint::new(vec![c(0.1, 0.0), c(0.2, 0.0)]).unwrap();
        let w = PolydiscPoint::new(vec![c(0.1, 0.0), c(0.3, 0.0)]).unwrap();
        let t = [c(0.0, 0.0), c(0.1, 0.0), c(0.2, 0.0)];
        let p = PickProblem::new([z.clone(), z.clone(), w.clone()], t).unwrap();
        assert_eq!(normalize_problem(&p).unwrap_err(), Error::NodesNotDistinct);
        // Shared first coordinate is allowed.
        let u = PolydiscPoint::new(vec![c(0.1, 0.0), c(0.0, 0.0)]).unwrap();
        let p = PickProblem::new([z.clone(), w.clone(), u.clone()], t).unwrap();
        assert!(normalize_problem(&p).is_ok());
        let p = PickProblem::new([z, w, u], [t[0], t[0], t[1]]).unwrap();
        assert_eq!(normalize_problem(&p).unwrap_err(), Error::TargetsNotDistinct);
    }
}
