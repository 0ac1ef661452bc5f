//! Degeneracy and dimension of a normalized three-point problem
//! `0 ↦ 0, z ↦ σ, w ↦ τ`.
//!
//! Comparisons whose margin falls inside [`tolerances::DECISION`] are never
//! resolved silently: the result carries `boundary_case = true` together with
//! every candidate dimension that survived.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesic::{invert_phi_with, GeodesicParams, InversionOptions, ProjectiveTarget};
use crate::hyperbolic::pseudo_hyperbolic;
use crate::magic::caratheodory_reduce;
use crate::problem::{PickProblem, PolydiscPoint};
use crate::schur_pick::TwoPointSchur;
use crate::tolerances::DECISION;

/// Outcome of a margin comparison `margin ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cmp {
    Pass,
    Boundary,
    Fail,
}

fn compare(margin: f64) -> Cmp {
    if margin > DECISION {
        Cmp::Pass
    } else if margin >= -DECISION {
        Cmp::Boundary
    } else {
        Cmp::Fail
    }
}

fn worst(a: Cmp, b: Cmp) -> Cmp {
    match (a, b) {
        (Cmp::Fail, _) | (_, Cmp::Fail) => Cmp::Fail,
        (Cmp::Boundary, _) | (_, Cmp::Boundary) => Cmp::Boundary,
        _ => Cmp::Pass,
    }
}

/// Kobayashi distance on the polydisc, as a pseudo-hyperbolic value.
pub fn polydisc_distance(a: &PolydiscPoint, b: &PolydiscPoint) -> f64 {
    a.coords().iter().zip(b.coords()).map(|(u, v)| pseudo_hyperbolic(*u, *v)).fold(0.0, f64::max)
}

/// Signed slack `d(z_i, z_j) − ρ(λ_i, λ_j)` of a two-point subproblem.
fn two_point_slack(zi: &PolydiscPoint, li: Complex64, zj: &PolydiscPoint, lj: Complex64) -> f64 {
    polydisc_distance(zi, zj) - pseudo_hyperbolic(li, lj)
}

/// Whether the two-point problem `z_i ↦ λ_i, z_j ↦ λ_j` is extremal.
pub fn two_point_extremal(zi: &PolydiscPoint, li: Complex64, zj: &PolydiscPoint, lj: Complex64) -> Result<bool> {
    if zi == zj {
        return Err(Error::NodesNotDistinct);
    }
    let slack = two_point_slack(zi, li, zj, lj);
    if slack < -DECISION {
        return Err(Error::UnsolvablePair { i: 0, j: 1 });
    }
    Ok(slack <= DECISION)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Degeneracy {
    pub degenerate: bool,
    /// First extremal pair of node indices (0-based).
    pub witness: Option<(usize, usize)>,
}

pub fn is_degenerate(p: &PickProblem) -> Result<Degeneracy> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (zi, zj) = (&p.nodes[i], &p.nodes[j]);
        if zi == zj {
            return Err(Error::NodesNotDistinct);
        }
        let slack = two_point_slack(zi, p.targets[i], zj, p.targets[j]);
        if slack < -DECISION {
            return Err(Error::UnsolvablePair { i, j });
        }
        if slack <= DECISION {
            return Ok(Degeneracy { degenerate: true, witness: Some((i, j)) });
        }
    }
    Ok(Degeneracy { degenerate: false, witness: None })
}

/// How a non-dominant coordinate follows the dominant one along the disc
/// `λ ↦ (…, λ, …, λφ(λ), …)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CoordinateMap {
    /// `φ` a Schur function through the two quotient values.
    Schur(TwoPointSchur),
    /// `φ ≡ ω`, unimodular.
    Rotation(Complex64),
}

impl CoordinateMap {
    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        match self {
            CoordinateMap::Schur(s) => lambda * s.eval(lambda),
            CoordinateMap::Rotation(w) => lambda * *w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FollowerCertificate {
    pub coord: usize,
    pub map: CoordinateMap,
    /// Smallest Schwarz–Pick margin (infinite for exact rotations).
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneDimCertificate {
    pub coord: usize,
    pub followers: Vec<FollowerCertificate>,
}

/// A geodesic on a coordinate subset plus the remaining coordinates as
/// `λφ(λ)` followers over its parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetCertificate {
    pub subset: Vec<usize>,
    pub geodesic: GeodesicParams,
    pub followers: Vec<FollowerCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DimensionWitness {
    OneDimensional(OneDimCertificate),
    Subset(SubsetCertificate),
    Full { geodesic: GeodesicParams },
    /// `n ≥ 4`: full inversion followed by reduction to three weights.
    Reduced { geodesic: GeodesicParams, indices: [usize; 3], weights: [f64; 3] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub degenerate: bool,
    pub degenerate_pair: Option<(usize, usize)>,
    pub dimension: Option<usize>,
    pub witness: Option<DimensionWitness>,
    pub boundary_case: bool,
    /// Dimensions compatible with the data when `boundary_case` is set.
    pub candidates: Vec<usize>,
}

impl Classification {
    fn degenerate(pair: (usize, usize)) -> Self {
        Self {
            degenerate: true,
            degenerate_pair: Some(pair),
            dimension: None,
            witness: None,
            boundary_case: false,
            candidates: vec![],
        }
    }
}

/// Tests the quotient conditions for `z_j = z_k φ(z_k)`, `w_j = w_k φ(w_k)`
/// with `φ` a self-map of the disc: `|z_j| < |x|`, `|w_j| < |y|`,
/// `ρ(z_j/x, w_j/y) ≤ ρ(x, y)`, or exact unimodular proportionality.
fn follower(x: Complex64, y: Complex64, zj: Complex64, wj: Complex64, coord: usize) -> (Cmp, Option<FollowerCertificate>) {
    let (a, b) = (zj / x, wj / y);
    if (a - b).norm() <= crate::tolerances::IDENTITY && (a.norm() - 1.0).abs() <= crate::tolerances::IDENTITY {
        let map = CoordinateMap::Rotation(crate::hyperbolic::unit(a));
        return (Cmp::Pass, Some(FollowerCertificate { coord, map, margin: f64::INFINITY }));
    }
    let m1 = x.norm() - zj.norm();
    let m2 = y.norm() - wj.norm();
    let c12 = worst(compare(m1), compare(m2));
    if c12 == Cmp::Fail || a.norm() >= 1.0 || b.norm() >= 1.0 {
        return (Cmp::Fail, None);
    }
    let m3 = pseudo_hyperbolic(x, y) - pseudo_hyperbolic(a, b);
    let verdict = worst(c12, compare(m3));
    if verdict == Cmp::Fail {
        return (verdict, None);
    }
    let map = CoordinateMap::Schur(TwoPointSchur::through(x, a, y, b));
    (verdict, Some(FollowerCertificate { coord, map, margin: m1.min(m2).min(m3) }))
}

fn one_dim_test(z: &PolydiscPoint, w: &PolydiscPoint, k: usize) -> (Cmp, Option<OneDimCertificate>) {
    let (x, y) = (z[k], w[k]);
    if x.norm() == 0.0 || y.norm() == 0.0 {
        return (Cmp::Fail, None);
    }
    let mut verdict = Cmp::Pass;
    let mut followers = Vec::new();
    for j in (0..z.dim()).filter(|&j| j != k) {
        let (c, cert) = follower(x, y, z[j], w[j], j);
        verdict = worst(verdict, c);
        match cert {
            Some(f) => followers.push(f),
            None => return (Cmp::Fail, None),
        }
    }
    (verdict, Some(OneDimCertificate { coord: k, followers }))
}

/// Inverts `Φ` on the coordinates in `subset` and checks the others as
/// followers over the recovered `(x, y)`.
fn subset_test(
    z: &PolydiscPoint,
    w: &PolydiscPoint,
    xi: &ProjectiveTarget,
    subset: &[usize],
) -> Option<(Cmp, SubsetCertificate)> {
    let zs = PolydiscPoint::from_vec_unchecked(subset.iter().map(|&k| z[k]).collect());
    let ws = PolydiscPoint::from_vec_unchecked(subset.iter().map(|&k| w[k]).collect());
    // A probe: most subsets are expected to fail, so the start sequence is not extended.
    let opts = InversionOptions { escalation: 1, ..InversionOptions::default() };
    let (g, _) = invert_phi_with(&zs, &ws, xi, &opts).ok()?;
    let mut verdict = Cmp::Pass;
    let mut followers = Vec::new();
    for j in (0..z.dim()).filter(|j| !subset.contains(j)) {
        let (c, cert) = follower(g.x, g.y, z[j], w[j], j);
        verdict = worst(verdict, c);
        followers.push(cert?);
    }
    Some((verdict, SubsetCertificate { subset: subset.to_vec(), geodesic: g, followers }))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    match k {
        2 => (0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j])).collect(),
        3 => (0..n)
            .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |l| vec![i, j, l])))
            .collect(),
        _ => unreachable!(),
    }
}

/// Full classification of a normalized problem.
pub fn dimension(p: &PickProblem) -> Result<Classification> {
    if !p.is_normalized() {
        return Err(Error::InvalidParameters("classification expects a normalized problem".into()));
    }
    p.check_distinct()?;
    let d = is_degenerate(p)?;
    if let Some(pair) = d.witness {
        return Ok(Classification::degenerate(pair));
    }
    let (z, w) = (&p.nodes[1], &p.nodes[2]);
    let n = p.dim();
    let xi = ProjectiveTarget::new(p.targets[1], p.targets[2])?;

    let mut boundary_candidates: Vec<(usize, DimensionWitness)> = Vec::new();
    let finish = |dim: usize, witness: DimensionWitness, boundary: &[(usize, DimensionWitness)]| {
        let mut candidates: Vec<usize> = boundary.iter().map(|(k, _)| *k).collect();
        if !candidates.contains(&dim) {
            candidates.push(dim);
        }
        Classification {
            degenerate: false,
            degenerate_pair: None,
            dimension: Some(dim),
            witness: Some(witness),
            boundary_case: !boundary.is_empty(),
            candidates,
        }
    };
    let boundary_only = |boundary: Vec<(usize, DimensionWitness)>| -> Classification {
        let (dim, witness) = boundary[0].clone();
        Classification {
            degenerate: false,
            degenerate_pair: None,
            dimension: Some(dim),
            witness: Some(witness),
            boundary_case: true,
            candidates: boundary.iter().map(|(k, _)| *k).collect(),
        }
    };

    if n == 1 {
        let cert = OneDimCertificate { coord: 0, followers: vec![] };
        return Ok(finish(1, DimensionWitness::OneDimensional(cert), &[]));
    }

    for k in 0..n {
        match one_dim_test(z, w, k) {
            (Cmp::Pass, Some(cert)) => return Ok(finish(1, DimensionWitness::OneDimensional(cert), &boundary_candidates)),
            (Cmp::Boundary, Some(cert)) => {
                if !boundary_candidates.iter().any(|(d, _)| *d == 1) {
                    boundary_candidates.push((1, DimensionWitness::OneDimensional(cert)));
                }
            }
            _ => {}
        }
    }

    let full = |allow_boundary: bool| {
        let opts = InversionOptions { allow_boundary_t: allow_boundary, ..InversionOptions::default() };
        invert_phi_with(z, w, &xi, &opts)
    };

    if n == 2 {
        return match full(false) {
            Ok((g, _)) => Ok(finish(2, DimensionWitness::Full { geodesic: g }, &boundary_candidates)),
            Err(e) if !boundary_candidates.is_empty() => {
                let _ = e;
                Ok(boundary_only(boundary_candidates))
            }
            Err(e) => Err(e),
        };
    }

    if n == 3 {
        for s in subsets(3, 2) {
            match subset_test(z, w, &xi, &s) {
                Some((Cmp::Pass, cert)) => {
                    return Ok(finish(2, DimensionWitness::Subset(cert), &boundary_candidates));
                }
                Some((Cmp::Boundary, cert)) => {
                    if !boundary_candidates.iter().any(|(d, _)| *d == 2) {
                        boundary_candidates.push((2, DimensionWitness::Subset(cert)));
                    }
                }
                _ => {}
            }
        }
        return match full(false) {
            Ok((g, _)) => Ok(finish(3, DimensionWitness::Full { geodesic: g }, &boundary_candidates)),
            Err(_) if !boundary_candidates.is_empty() => Ok(boundary_only(boundary_candidates)),
            Err(e) => Err(e),
        };
    }

    // n ≥ 4: reduce to at most three active variables.
    if let Ok((g, _)) = full(true) {
        let (indices, weights) = caratheodory_reduce(&g.alpha, &g.t)?;
        let active = weights.iter().filter(|&&v| v > 0.0).count();
        let witness = DimensionWitness::Reduced { geodesic: g, indices, weights };
        return Ok(finish(active, witness, &boundary_candidates));
    }
    for k in [2, 3] {
        for s in subsets(n, k) {
            match subset_test(z, w, &xi, &s) {
                Some((Cmp::Pass, cert)) => return Ok(finish(k, DimensionWitness::Subset(cert), &boundary_candidates)),
                Some((Cmp::Boundary, cert)) => {
                    if !boundary_candidates.iter().any(|(d, _)| *d == k) {
                        boundary_candidates.push((k, DimensionWitness::Subset(cert)));
                    }
                }
                _ => {}
            }
        }
    }
    if !boundary_candidates.is_empty() {
        return Ok(boundary_only(boundary_candidates));
    }
    Err(Error::NoConvergence { starts: InversionOptions::default().starts, best_residual: f64::NAN })
}
