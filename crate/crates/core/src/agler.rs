//! Bidisc solvability through Agler's decomposition
//!
//! ```text
//! 1 − λᵢλ̄ⱼ = (1 − zᵢ¹z̄ⱼ¹) Γᵢⱼ + (1 − zᵢ²z̄ⱼ²) Δᵢⱼ,   Γ, Δ ⪰ 0.
//! ```
//!
//! `Δ` is eliminated through the identity, leaving a search over Hermitian
//! `Γ` (nine real parameters). The search minimizes the squared negative
//! parts of the spectra of `Γ` and `Δ(Γ)`. A feasible answer is a checkable
//! certificate; an infeasible one only means no start found a certificate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, min_eigenvalue};
use crate::problem::PolydiscPoint;
use crate::tolerances;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AglerCertificate {
    pub gamma: DMatrix<Complex64>,
    pub delta: DMatrix<Complex64>,
    /// Largest entrywise violation of the decomposition identity.
    pub residual: f64,
    pub min_eigenvalue_gamma: f64,
    pub min_eigenvalue_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AglerOutcome {
    Feasible(AglerCertificate),
    /// `margin` is the smallest penalty reached over all starts.
    Infeasible { margin: f64 },
}

impl AglerOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, AglerOutcome::Feasible(_))
    }
}

struct Kernel {
    lhs: DMatrix<Complex64>,
    k1: DMatrix<Complex64>,
    k2: DMatrix<Complex64>,
}

impl Kernel {
    fn new(nodes: &[PolydiscPoint; 3], targets: &[Complex64; 3]) -> Self {
        let lhs = DMatrix::from_fn(3, 3, |i, j| ONE - targets[i] * targets[j].conj());
        let k = |c: usize| DMatrix::from_fn(3, 3, |i, j| ONE - nodes[i][c] * nodes[j][c].conj());
        Self { lhs, k1: k(0), k2: k(1) }
    }

    fn delta(&self, gamma: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        DMatrix::from_fn(3, 3, |i, j| (self.lhs[(i, j)] - self.k1[(i, j)] * gamma[(i, j)]) / self.k2[(i, j)])
    }

    fn penalty(&self, p: &DVector<f64>) -> f64 {
        let gamma = hermitian_from(p);
        let delta = self.delta(&gamma);
        hermitian_eigenvalues(&gamma)
            .into_iter()
            .chain(hermitian_eigenvalues(&delta))
            .map(|e| e.min(0.0).powi(2))
            .sum()
    }

    fn gradient(&self, p: &DVector<f64>) -> DVector<f64> {
        let mut q = p.clone();
        DVector::from_fn(9, |k, _| {
            let h = 1e-7 * p[k].abs().max(1.0);
            q[k] = p[k] + h;
            let plus = self.penalty(&q);
            q[k] = p[k] - h;
            let minus = self.penalty(&q);
            q[k] = p[k];
            (plus - minus) / (2.0 * h)
        })
    }
}

/// Diagonal from `p[0..3]`, upper triangle `(0,1), (0,2), (1,2)` from pairs.
fn hermitian_from(p: &DVector<f64>) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_diagonal(&DVector::from_fn(3, |i, _| Complex64::new(p[i], 0.0)));
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        let v = Complex64::new(p[3 + 2 * k], p[4 + 2 * k]);
        m[(i, j)] = v;
        m[(j, i)] = v.conj();
    }
    m
}

fn params_from(m: &DMatrix<Complex64>) -> DVector<f64> {
    let mut p = DVector::zeros(9);
    for i in 0..3 {
        p[i] = m[(i, i)].re;
    }
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        p[3 + 2 * k] = m[(i, j)].re;
        p[4 + 2 * k] = m[(i, j)].im;
    }
    p
}

/// BFGS with Armijo backtracking.
fn bfgs(kernel: &Kernel, mut p: DVector<f64>) -> (DVector<f64>, f64) {
    let mut f = kernel.penalty(&p);
    let mut g = kernel.gradient(&p);
    let mut h = DMatrix::<f64>::identity(9, 9);
    let mut plateau = f;
    for iter in 0..400 {
        if f < 1e-28 || g.norm() < 1e-18 {
            break;
        }
        if iter % 50 == 49 {
            if f > 0.999 * plateau {
                break;
            }
            plateau = f;
        }
        let mut d = -(&h * &g);
        if d.dot(&g) >= 0.0 {
            h = DMatrix::identity(9, 9);
            d = -g.clone();
        }
        let mut step = 1.0;
        let mut next = None;
        for _ in 0..40 {
            let cand = &p + &d * step;
            let fc = kernel.penalty(&cand);
            if fc <= f + 1e-4 * step * d.dot(&g) {
                next = Some((cand, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, fc)) = next else { break };
        let gc = kernel.gradient(&cand);
        let s = &cand - &p;
        let y = &gc - &g;
        let sy = s.dot(&y);
        if sy > 1e-300 {
            let rho = 1.0 / sy;
            let eye = DMatrix::<f64>::identity(9, 9);
            let left = &eye - &s * y.transpose() * rho;
            let right = &eye - &y * s.transpose() * rho;
            h = &left * &h * &right + &s * s.transpose() * rho;
        }
        p = cand;
        f = fc;
        g = gc;
    }
    (p, f)
}

/// Deterministic multistart search for an Agler decomposition on 𝔻².
pub fn agler_feasible(nodes: &[PolydiscPoint; 3], targets: &[Complex64; 3]) -> Result<AglerOutcome> {
    for node in nodes {
        if node.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: node.dim() });
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if nodes[i] == nodes[j] {
            return Err(Error::NodesNotDistinct);
        }
    }
    let kernel = Kernel::new(nodes, targets);
    let szego = DMatrix::from_fn(3, 3, |i, j| ONE / (ONE - nodes[i][0] * nodes[j][0].conj()));
    let mut starts: Vec<DVector<f64>> =
        [0.0, 0.25, 0.5, 0.75, 1.0].iter().map(|c| params_from(&(&szego * Complex64::new(*c, 0.0)))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..11 {
        let a = DMatrix::from_fn(3, 3, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        starts.push(params_from(&(&a * a.adjoint())));
    }

    let mut best = f64::INFINITY;
    for start in starts {
        let (p, f) = bfgs(&kernel, start);
        best = best.min(f);
        let gamma = hermitian_from(&p);
        let delta = kernel.delta(&gamma);
        let (mg, md) = (min_eigenvalue(&gamma), min_eigenvalue(&delta));
        if mg >= -tolerances::AGLER_PSD && md >= -tolerances::AGLER_PSD {
            let residual = decomposition_residual(nodes, targets, &gamma, &delta);
            if residual <= tolerances::AGLER_RESIDUAL {
                return Ok(AglerOutcome::Feasible(AglerCertificate {
                    gamma,
                    delta,
                    residual,
                    min_eigenvalue_gamma: mg,
                    min_eigenvalue_delta: md,
                }));
            }
        }
    }
    Ok(AglerOutcome::Infeasible { margin: best })
}

/// Entrywise violation of the decomposition identity, recomputed from scratch.
pub fn decomposition_residual(
    nodes: &[PolydiscPoint; 3],
    targets: &[Complex64; 3],
    gamma: &DMatrix<Complex64>,
    delta: &DMatrix<Complex64>,
) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let lhs = ONE - targets[i] * targets[j].conj();
            let rhs = (ONE - nodes[i][0] * nodes[j][0].conj()) * gamma[(i, j)]
                + (ONE - nodes[i][1] * nodes[j][1].conj()) * delta[(i, j)];
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}
