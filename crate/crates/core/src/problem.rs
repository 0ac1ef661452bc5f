//! Points of the polydisc and three-point Pick data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `𝔻ⁿ`; every coordinate has modulus `< 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolydiscPoint(Vec<Complex64>);

impl PolydiscPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if let Some(c) = coords.iter().find(|c| !(c.norm() < 1.0)) {
            return Err(Error::OutsideDisc(format!("coordinate {c} has modulus >= 1")));
        }
        Ok(Self(coords))
    }

    /// Builds a point without checking moduli. Used for intermediate values
    /// that are in the disc by construction.
    pub(crate) fn from_vec_unchecked(coords: Vec<Complex64>) -> Self {
        Self(coords)
    }

    pub fn origin(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.0
    }

    /// Coordinates reordered so that the result's `i`-th entry is `self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self(perm.iter().map(|&i| self.0[i]).collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for PolydiscPoint {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// Three nodes in `𝔻ⁿ` with three targets in `𝔻`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickProblem {
    pub nodes: [PolydiscPoint; 3],
    pub targets: [Complex64; 3],
}

impl PickProblem {
    pub fn new(nodes: [PolydiscPoint; 3], targets: [Complex64; 3]) -> Result<Self> {
        let n = nodes[0].dim();
        for node in &nodes {
            if node.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: node.dim() });
            }
        }
        if let Some(t) = targets.iter().find(|t| !(t.norm() < 1.0)) {
            return Err(Error::OutsideDisc(format!("target {t} has modulus >= 1")));
        }
        Ok(Self { nodes, targets })
    }

    /// The normalized form `0 ↦ 0, z ↦ σ, w ↦ τ`.
    pub fn normalized_form(z: PolydiscPoint, w: PolydiscPoint, sigma: Complex64, tau: Complex64) -> Result<Self> {
        let n = z.dim();
        Self::new([PolydiscPoint::origin(n), z, w], [Complex64::new(0.0, 0.0), sigma, tau])
    }

    pub fn dim(&self) -> usize {
        self.nodes[0].dim()
    }

    pub fn is_normalized(&self) -> bool {
        self.nodes[0].coords().iter().all(|c| c.norm() == 0.0) && self.targets[0].norm() == 0.0
    }

    /// Rejects coincident nodes (as full tuples) and coincident targets.
    pub fn check_distinct(&self) -> Result<()> {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if self.nodes[i] == self.nodes[j] {
                return Err(Error::NodesNotDistinct);
            }
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if self.targets[i] == self.targets[j] {
                return Err(Error::TargetsNotDistinct);
            }
        }
        Ok(())
    }

    /// The same problem with polydisc coordinates reordered by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            nodes: [
                self.nodes[0].permuted(perm),
                self.nodes[1].permuted(perm),
                self.nodes[2].permuted(perm),
            ],
            targets: self.targets,
        }
    }
}
