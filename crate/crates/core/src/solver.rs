//! End-to-end solution of a three-point problem: normalize, classify, find a
//! 3-complex geodesic through the nodes, synthesize its left inverse, and
//! verify everything numerically.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::agler::agler_feasible;
use crate::classify::{dimension, Classification, CoordinateMap, DimensionWitness, FollowerCertificate};
use crate::error::{Error, Result};
use crate::geodesic::GeodesicParams;
use crate::hyperbolic::{mobius, normalize_problem, pseudo_hyperbolic, unit, BlaschkeProduct, DiscAutomorphism, ProblemTransform};
use crate::magic::{build_left_inverse, Association, RationalInnerFunction, WeightVector};
use crate::problem::{PickProblem, PolydiscPoint};
use crate::schur_pick::{blaschke_interpolate, extremal_scale_disc, is_solvable_disc, Verdict};
use crate::tolerances;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Samples of `|F|` taken while solving.
pub const DEFAULT_SAMPLES: usize = 1024;

/// The interpolating function, in normalized coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Interpolant {
    Magic { function: RationalInnerFunction },
    /// `F(z) = B(z_coord)`.
    OneVariable { dim: usize, coord: usize, blaschke: BlaschkeProduct },
}

impl Interpolant {
    pub fn dim(&self) -> usize {
        match self {
            Interpolant::Magic { function } => function.dim(),
            Interpolant::OneVariable { dim, .. } => *dim,
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: z.len() });
        }
        match self {
            Interpolant::Magic { function } => function.eval_coords(z),
            Interpolant::OneVariable { coord, blaschke, .. } => Ok(blaschke.eval(z[*coord])),
        }
    }

    pub fn active_variables(&self) -> Vec<usize> {
        match self {
            Interpolant::Magic { function } => function.active_variables(),
            Interpolant::OneVariable { coord, .. } => vec![*coord],
        }
    }
}

/// Holomorphic disc `f: 𝔻 → 𝔻ⁿ` with `f(0), f(x), f(y)` the normalized nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalDisc {
    pub x: Complex64,
    pub y: Complex64,
    pub coordinates: Vec<DiscCoordinate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiscCoordinate {
    /// `ω λ m_α(λ)`.
    Geodesic { alpha: Complex64, omega: Complex64 },
    /// `λ`.
    Identity,
    Follower { map: CoordinateMap },
}

impl ExtremalDisc {
    pub fn eval(&self, lambda: Complex64) -> Vec<Complex64> {
        self.coordinates
            .iter()
            .map(|c| match c {
                DiscCoordinate::Geodesic { alpha, omega } => omega * lambda * mobius(*alpha, lambda),
                DiscCoordinate::Identity => lambda,
                DiscCoordinate::Follower { map } => map.eval(lambda),
            })
            .collect()
    }

    fn from_geodesic(g: &GeodesicParams) -> Self {
        let coordinates =
            (0..g.dim()).map(|k| DiscCoordinate::Geodesic { alpha: g.alpha[k], omega: g.rotation(k) }).collect();
        Self { x: g.x, y: g.y, coordinates }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleInfo {
    /// Factor by which the normalized targets were away from extremal (≈ 1).
    pub scale: f64,
    /// Unimodular phase absorbed into the target normalization.
    pub phase: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `|F(zᵢ) − λᵢ|` on the original problem.
    pub interpolation: [f64; 3],
    /// `max |F(f(λ)) − b(λ)|` over sampled `λ` (0 without an extremal disc).
    pub left_inverse: f64,
    /// `max |F|` over sampled points of the polydisc.
    pub sup_norm_sample: f64,
    /// Distance of `γ` from the convex hull of the active `α` (0 when unused).
    pub convex_combination: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub problem: PickProblem,
    pub normalized_problem: PickProblem,
    pub transform: ProblemTransform,
    pub classification: Classification,
    pub geodesic: Option<GeodesicParams>,
    pub interpolant: Interpolant,
    pub extremal_disc: Option<ExtremalDisc>,
    /// `b = F ∘ f`.
    pub composed_blaschke: BlaschkeProduct,
    pub extremal_scale: ScaleInfo,
    pub residuals: Residuals,
}

impl SolveReport {
    /// The interpolant in the original coordinates.
    pub fn evaluate(&self, z: &PolydiscPoint) -> Result<Complex64> {
        if z.dim() != self.interpolant.dim() {
            return Err(Error::DimensionMismatch { expected: self.interpolant.dim(), got: z.dim() });
        }
        let v = self.interpolant.eval(self.transform.apply_point(z).coords())?;
        Ok(self.transform.invert_target(v))
    }

    /// [`Self::evaluate`] on raw coordinates, which may lie on the closed
    /// polydisc.
    pub fn evaluate_coords(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.interpolant.dim() {
            return Err(Error::DimensionMismatch { expected: self.interpolant.dim(), got: z.len() });
        }
        let mapped: Vec<Complex64> = self.transform.disc_maps.iter().zip(z).map(|(g, &c)| g.apply(c)).collect();
        Ok(self.transform.invert_target(self.interpolant.eval(&mapped)?))
    }

    pub fn is_boundary_case(&self) -> bool {
        self.classification.boundary_case
    }
}

/// Solves an extremal three-point problem.
pub fn solve(p: &PickProblem) -> Result<SolveReport> {
    let (normalized, transform) = normalize_problem(p)?;
    let classification = dimension(&normalized)?;
    let n = normalized.dim();

    let route = if classification.degenerate {
        degenerate_route(&normalized, classification.degenerate_pair.expect("degenerate pair"))?
    } else {
        match classification.witness.clone().expect("non-degenerate classification has a witness") {
            DimensionWitness::OneDimensional(cert) => one_dim_route(&normalized, cert.coord, &cert.followers)?,
            DimensionWitness::Full { geodesic } => {
                let disc = ExtremalDisc::from_geodesic(&geodesic);
                magic_route(&normalized, geodesic.clone(), &geodesic.alpha, &geodesic.omega, geodesic.t.clone(), disc)?
            }
            DimensionWitness::Reduced { geodesic, indices, weights } => {
                let mut t = vec![0.0; n];
                for (k, &i) in indices.iter().enumerate() {
                    t[i] = weights[k];
                }
                let t = WeightVector::normalized(&t)?;
                let disc = ExtremalDisc::from_geodesic(&geodesic);
                magic_route(&normalized, geodesic.clone(), &geodesic.alpha, &geodesic.omega, t, disc)?
            }
            DimensionWitness::Subset(cert) => {
                let g = &cert.geodesic;
                let mut alpha = vec![ZERO; n];
                let mut rotation = vec![ONE; n];
                let mut t = vec![0.0; n];
                for (k, &i) in cert.subset.iter().enumerate() {
                    alpha[i] = g.alpha[k];
                    rotation[i] = g.rotation(k) / g.rotation(0);
                    t[i] = g.t.values()[k];
                }
                // The first subset coordinate carries rotation 1 by construction.
                let omega: Vec<Complex64> = rotation[1..].to_vec();
                let mut coordinates = vec![DiscCoordinate::Identity; n];
                for (k, &i) in cert.subset.iter().enumerate() {
                    coordinates[i] = DiscCoordinate::Geodesic { alpha: g.alpha[k], omega: g.rotation(k) };
                }
                for f in &cert.followers {
                    coordinates[f.coord] = DiscCoordinate::Follower { map: f.map };
                }
                let disc = ExtremalDisc { x: g.x, y: g.y, coordinates };
                magic_route(&normalized, g.clone(), &alpha, &omega, WeightVector::normalized(&t)?, disc)?
            }
        }
    };

    let Route { interpolant, geodesic, disc, composed, scale, normalized: normalized_final, transform_rotation } = route;
    let transform = match transform_rotation {
        Some(r) => transform.rotate_targets(r),
        None => transform,
    };
    let mut report = SolveReport {
        problem: p.clone(),
        normalized_problem: normalized_final,
        transform,
        classification,
        geodesic,
        interpolant,
        extremal_disc: disc,
        composed_blaschke: composed,
        extremal_scale: scale,
        residuals: Residuals { interpolation: [0.0; 3], left_inverse: 0.0, sup_norm_sample: 0.0, convex_combination: 0.0 },
    };
    report.residuals = Residuals {
        interpolation: interpolation_residuals(&report)?,
        left_inverse: left_inverse_residual(&report)?,
        sup_norm_sample: sup_norm_sample(&report.interpolant, DEFAULT_SAMPLES)?,
        convex_combination: convex_combination_residual(&report),
    };
    if report.residuals.interpolation.iter().any(|&r| !(r <= tolerances::INTERPOLATION)) {
        return Err(Error::NoConvergence { starts: 0, best_residual: report.residuals.interpolation.iter().copied().fold(0.0, f64::max) });
    }
    Ok(report)
}

struct Route {
    interpolant: Interpolant,
    geodesic: Option<GeodesicParams>,
    disc: Option<ExtremalDisc>,
    composed: BlaschkeProduct,
    scale: ScaleInfo,
    normalized: PickProblem,
    transform_rotation: Option<Complex64>,
}

fn automorphism_as_blaschke(g: &DiscAutomorphism) -> Result<BlaschkeProduct> {
    BlaschkeProduct::new(g.rotation, vec![g.center])
}

/// A two-point subproblem is extremal: interpolate it by an automorphism of
/// one coordinate attaining the polydisc distance and check the third value.
fn degenerate_route(p: &PickProblem, (i, j): (usize, usize)) -> Result<Route> {
    let n = p.dim();
    let m = 3 - i - j;
    let dist = |k: usize| pseudo_hyperbolic(p.nodes[i][k], p.nodes[j][k]);
    let target_dist = pseudo_hyperbolic(p.targets[i], p.targets[j]);
    for k in 0..n {
        if (dist(k) - target_dist).abs() > tolerances::DECISION {
            continue;
        }
        let g = DiscAutomorphism::through_two_points(p.nodes[i][k], p.targets[i], p.nodes[j][k], p.targets[j]);
        if (g.apply(p.nodes[m][k]) - p.targets[m]).norm() > tolerances::INTERPOLATION {
            continue;
        }
        let blaschke = automorphism_as_blaschke(&g)?;
        let interpolant = Interpolant::OneVariable { dim: n, coord: k, blaschke: blaschke.clone() };
        return Ok(Route {
            interpolant,
            geodesic: None,
            disc: identity_disc(p, k),
            composed: blaschke,
            scale: ScaleInfo { scale: 1.0, phase: ONE },
            normalized: p.clone(),
            transform_rotation: None,
        });
    }
    Err(Error::IncompatibleDegenerateThirdValue)
}

/// `λ ↦ (…, λ, …)` at coordinate `k` with the others as followers, when the
/// follower conditions hold.
fn identity_disc(p: &PickProblem, k: usize) -> Option<ExtremalDisc> {
    let (x, y) = (p.nodes[1][k], p.nodes[2][k]);
    if x.norm() == 0.0 || y.norm() == 0.0 {
        return None;
    }
    let mut coordinates = vec![DiscCoordinate::Identity; p.dim()];
    for j in (0..p.dim()).filter(|&j| j != k) {
        let (a, b) = (p.nodes[1][j] / x, p.nodes[2][j] / y);
        let map = if (a - b).norm() <= tolerances::IDENTITY && (a.norm() - 1.0).abs() <= tolerances::IDENTITY {
            CoordinateMap::Rotation(unit(a))
        } else if a.norm() < 1.0 && b.norm() < 1.0 && pseudo_hyperbolic(a, b) <= pseudo_hyperbolic(x, y) + tolerances::DECISION {
            CoordinateMap::Schur(crate::schur_pick::TwoPointSchur::through(x, a, y, b))
        } else {
            return None;
        };
        coordinates[j] = DiscCoordinate::Follower { map };
    }
    Some(ExtremalDisc { x, y, coordinates })
}

fn one_dim_route(p: &PickProblem, k: usize, followers: &[FollowerCertificate]) -> Result<Route> {
    let n = p.dim();
    let nodes = [p.nodes[0][k], p.nodes[1][k], p.nodes[2][k]];
    let solvability = is_solvable_disc(&nodes, &p.targets)?;
    match solvability.verdict {
        Verdict::Extremal => {}
        Verdict::StrictlySolvable => {
            return Err(Error::NotExtremalDatum { scale: extremal_scale_disc(&nodes, &p.targets)? })
        }
        Verdict::Unsolvable => return Err(Error::UnsolvableDatum { scale: extremal_scale_disc(&nodes, &p.targets)? }),
    }
    let blaschke = blaschke_interpolate(nodes, p.targets)?;
    let disc = if n == 1 {
        Some(ExtremalDisc { x: nodes[1], y: nodes[2], coordinates: vec![DiscCoordinate::Identity] })
    } else {
        let mut coordinates = vec![DiscCoordinate::Identity; n];
        for f in followers {
            coordinates[f.coord] = DiscCoordinate::Follower { map: f.map };
        }
        Some(ExtremalDisc { x: nodes[1], y: nodes[2], coordinates })
    };
    Ok(Route {
        interpolant: Interpolant::OneVariable { dim: n, coord: k, blaschke: blaschke.clone() },
        geodesic: None,
        disc,
        composed: blaschke,
        scale: ScaleInfo { scale: 1.0, phase: ONE },
        normalized: p.clone(),
        transform_rotation: None,
    })
}

/// Left inverse of a geodesic through the nodes. The targets must equal
/// `c · (x m_γ(x), y m_γ(y))` with `|c| = 1`; `c` is absorbed into the
/// target normalization.
fn magic_route(
    p: &PickProblem,
    geodesic: GeodesicParams,
    alpha: &[Complex64],
    omega: &[Complex64],
    t: WeightVector,
    disc: ExtremalDisc,
) -> Result<Route> {
    let gamma = t.combine(alpha);
    let star = (disc.x * mobius(gamma, disc.x), disc.y * mobius(gamma, disc.y));
    let (sigma, tau) = (p.targets[1], p.targets[2]);
    let c = if sigma.norm() >= tau.norm() { star.0 / sigma } else { star.1 / tau };
    let scale = c.norm();
    if scale > 1.0 + tolerances::DECISION {
        return Err(Error::NotExtremalDatum { scale });
    }
    if scale < 1.0 - tolerances::DECISION {
        return Err(Error::UnsolvableDatum { scale });
    }
    let phase = unit(c);
    let mut normalized = p.clone();
    normalized.targets = [ZERO, star.0, star.1];

    let mut last = Error::DegenerateCombination { var: 0 };
    for assoc in [Association::LeftComb, Association::RightComb] {
        match build_left_inverse(alpha, omega, &t, &assoc) {
            Ok(function) => {
                return Ok(Route {
                    interpolant: Interpolant::Magic { function },
                    geodesic: Some(geodesic),
                    disc: Some(disc),
                    composed: BlaschkeProduct::lambda_times_mobius(gamma),
                    scale: ScaleInfo { scale, phase },
                    normalized,
                    transform_rotation: Some(phase),
                });
            }
            Err(e @ Error::DegenerateCombination { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn interpolation_residuals(r: &SolveReport) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = (r.evaluate(&r.problem.nodes[i])? - r.problem.targets[i]).norm();
    }
    Ok(out)
}

/// Deterministic spiral of `count` points in the disc of radius `rmax`.
fn spiral(count: usize, rmax: f64) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let r = rmax * ((k as f64 + 0.5) / count as f64).sqrt();
            Complex64::from_polar(r, k as f64 * 2.399_963_229_728_653)
        })
        .collect()
}

fn left_inverse_residual(r: &SolveReport) -> Result<f64> {
    let Some(disc) = &r.extremal_disc else { return Ok(0.0) };
    let mut worst: f64 = 0.0;
    for l in spiral(50, 0.98) {
        let v = r.interpolant.eval(&disc.eval(l))?;
        worst = worst.max((v - r.composed_blaschke.eval(l)).norm());
    }
    Ok(worst)
}

/// Quasi-random points of `𝔻ⁿ`: half in the interior, half on shells close
/// to the distinguished boundary.
pub fn polydisc_samples(n: usize, count: usize) -> Vec<Vec<Complex64>> {
    const SHELLS: [f64; 3] = [0.99, 0.999, 0.999_999];
    // Additive recurrence with irrational steps (one radius and one angle per coordinate).
    let steps: Vec<f64> = (0..2 * n).map(|k| ((k + 2) as f64).sqrt().fract()).collect();
    (0..count)
        .map(|i| {
            (0..n)
                .map(|k| {
                    let u = (0.5 + i as f64 * steps[2 * k]).fract();
                    let v = (0.5 + i as f64 * steps[2 * k + 1]).fract();
                    let r = if i % 2 == 0 { u.sqrt() } else { SHELLS[(i / 2 + k) % 3] };
                    Complex64::from_polar(r, std::f64::consts::TAU * v)
                })
                .collect()
        })
        .collect()
}

pub fn sup_norm_sample(f: &Interpolant, count: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for z in polydisc_samples(f.dim(), count) {
        worst = worst.max(f.eval(&z)?.norm());
    }
    Ok(worst)
}

fn active_alphas(r: &SolveReport) -> Option<(Vec<Complex64>, Complex64)> {
    let Interpolant::Magic { function } = &r.interpolant else { return None };
    let disc = r.extremal_disc.as_ref()?;
    let mut alphas = Vec::new();
    for v in function.active_variables() {
        if let DiscCoordinate::Geodesic { alpha, .. } = disc.coordinates[v] {
            alphas.push(alpha);
        }
    }
    Some((alphas, r.composed_blaschke.zeros().iter().copied().find(|z| z.norm() > 0.0).unwrap_or(ZERO)))
}

/// Distance from `γ` to the convex hull of the active `α`, by a barycentric
/// solve on at most three points.
pub fn convex_hull_residual(points: &[Complex64], gamma: Complex64) -> f64 {
    match points {
        [] => f64::INFINITY,
        [a] => (gamma - a).norm(),
        [a, b] => {
            let d = a - b;
            if d.norm() == 0.0 {
                return (gamma - a).norm();
            }
            let s = ((gamma - b) * d.conj()).re / d.norm_sqr();
            let recon = a * s + b * (1.0 - s);
            (gamma - recon).norm() + (-s).max(s - 1.0).max(0.0) * d.norm()
        }
        [a, b, c] => {
            let det = ((b - a).conj() * (c - a)).im;
            if det.abs() < 1e-14 {
                return convex_hull_residual(&[*a, *b], gamma)
                    .min(convex_hull_residual(&[*a, *c], gamma))
                    .min(convex_hull_residual(&[*b, *c], gamma));
            }
            let u = ((b - a).conj() * (gamma - a)).im / det;
            let v = ((gamma - a).conj() * (c - a)).im / det;
            let bary = [1.0 - u - v, v, u];
            let recon = a * bary[0] + b * bary[1] + c * bary[2];
            let negative = bary.iter().fold(0.0f64, |m, &w| m.max(-w));
            (gamma - recon).norm() + negative
        }
        _ => f64::INFINITY,
    }
}

fn convex_combination_residual(r: &SolveReport) -> f64 {
    match active_alphas(r) {
        Some((alphas, gamma)) => convex_hull_residual(&alphas, gamma),
        None => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AglerCheck {
    pub feasible_below: bool,
    pub infeasible_above: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub interpolation_max: f64,
    pub interpolation_ok: bool,
    /// `None` when the sample budget is zero.
    pub sup_norm: Option<f64>,
    pub sup_norm_ok: bool,
    pub left_inverse_max: f64,
    pub left_inverse_ok: bool,
    pub convex_combination: f64,
    pub convex_combination_ok: bool,
    /// Fit of `F ∘ f` by a degree-≤2 Blaschke product through three samples,
    /// checked at twenty more; `None` when the report has no extremal disc.
    pub blaschke_fit_residual: Option<f64>,
    pub blaschke_fit_degree: Option<usize>,
    pub blaschke_fit_ok: bool,
    pub agler: Option<AglerCheck>,
    pub all_passed: bool,
}

/// Recomputes every check on `r` from scratch.
pub fn verify(r: &SolveReport, sample_budget: usize) -> VerificationSummary {
    verify_with(r, sample_budget, tolerances::INTERPOLATION)
}

/// [`verify`] with residual checks against `tolerance`. A zero budget runs
/// only the algebraic checks (no boundary sampling, no Agler search).
pub fn verify_with(r: &SolveReport, sample_budget: usize, tolerance: f64) -> VerificationSummary {
    let interpolation_max = interpolation_residuals(r).map(|v| v.iter().copied().fold(0.0, f64::max)).unwrap_or(f64::INFINITY);
    let interpolation_ok = interpolation_max <= tolerance;
    let sup_norm = (sample_budget > 0).then(|| sup_norm_sample(&r.interpolant, sample_budget).unwrap_or(f64::INFINITY));
    let sup_norm_ok = sup_norm.map_or(true, |v| v <= 1.0 + tolerance);
    let left_inverse_max = left_inverse_residual(r).unwrap_or(f64::INFINITY);
    let left_inverse_ok = left_inverse_max <= tolerance;
    let convex_combination = convex_combination_residual(r);
    let convex_combination_ok = convex_combination <= 1e-10;
    let (blaschke_fit_residual, blaschke_fit_degree, blaschke_fit_ok) = match blaschke_fit(r) {
        Some((res, degree)) => (Some(res), degree, res <= tolerance && degree.is_some_and(|d| d <= 2)),
        None => (None, None, true),
    };
    let agler = (sample_budget > 0 && r.normalized_problem.dim() == 2).then(|| agler_check(&r.normalized_problem));
    let agler_ok = agler.map_or(true, |a| a.feasible_below && a.infeasible_above);
    let all_passed = interpolation_ok && sup_norm_ok && left_inverse_ok && convex_combination_ok && blaschke_fit_ok && agler_ok;
    VerificationSummary {
        interpolation_max,
        interpolation_ok,
        sup_norm,
        sup_norm_ok,
        left_inverse_max,
        left_inverse_ok,
        convex_combination,
        convex_combination_ok,
        blaschke_fit_residual,
        blaschke_fit_degree,
        blaschke_fit_ok,
        agler,
        all_passed,
    }
}

fn agler_check(p: &PickProblem) -> AglerCheck {
    let scaled = |s: f64| p.targets.map(|t| t * s);
    let below = agler_feasible(&p.nodes, &scaled(0.99)).map(|o| o.is_feasible()).unwrap_or(false);
    let above = agler_feasible(&p.nodes, &scaled(1.01)).map(|o| !o.is_feasible()).unwrap_or(false);
    AglerCheck { feasible_below: below, infeasible_above: above }
}

/// Best degree-≤2 Blaschke fit of `λ ↦ F(f(λ))`: interpolate three samples
/// and measure the error at twenty others. `None` without an extremal disc.
fn blaschke_fit(r: &SolveReport) -> Option<(f64, Option<usize>)> {
    let disc = r.extremal_disc.as_ref()?;
    Some(fit_degree_two(|l| r.interpolant.eval(&disc.eval(l))))
}

/// Fits `h` through `h(0), h(0.5), h(−0.4i)` and tests twenty more points.
/// Returns an infinite residual if those three values are not an extremal
/// disc datum (then `h` is not a Blaschke product of degree ≤ 2).
pub fn fit_degree_two(h: impl Fn(Complex64) -> Result<Complex64>) -> (f64, Option<usize>) {
    let nodes = [ZERO, Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.4)];
    let Ok(values) = nodes.iter().map(|&l| h(l)).collect::<Result<Vec<_>>>() else { return (f64::INFINITY, None) };
    let Ok(b) = blaschke_interpolate(nodes, [values[0], values[1], values[2]]) else { return (f64::INFINITY, None) };
    let mut worst: f64 = 0.0;
    for l in spiral(20, 0.95) {
        match h(l) {
            Ok(v) => worst = worst.max((v - b.eval(l)).norm()),
            Err(_) => return (f64::INFINITY, None),
        }
    }
    (worst, Some(b.degree()))
}

/// `max |F(ψ_{ω,sα}(λ)) − λ m_{sγ}(λ)|` over the grid.
pub fn uniqueness_variety_sample(g: &GeodesicParams, f: &RationalInnerFunction, s_grid: &[f64], lambda_grid: &[Complex64]) -> f64 {
    variety_residual_grid(g, f, s_grid, lambda_grid).into_iter().map(|(_, _, r)| r).fold(0.0, f64::max)
}

/// Residual at each `(s, λ)` of the uniqueness-variety identity.
pub fn variety_residual_grid(
    g: &GeodesicParams,
    f: &RationalInnerFunction,
    s_grid: &[f64],
    lambda_grid: &[Complex64],
) -> Vec<(f64, Complex64, f64)> {
    let gamma = g.gamma();
    let mut out = Vec::with_capacity(s_grid.len() * lambda_grid.len());
    for &s in s_grid {
        let scaled = GeodesicParams { alpha: g.alpha.iter().map(|a| a * s).collect(), ..g.clone() };
        for &l in lambda_grid {
            let residual = match f.eval_coords(&scaled.psi(l)) {
                Ok(v) => (v - l * mobius(gamma * s, l)).norm(),
                Err(_) => f64::INFINITY,
            };
            out.push((s, l, residual));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::phi_map;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_geodesic() -> GeodesicParams {
        GeodesicParams::new(
            c(0.5, 0.2),
            c(-0.3, 0.6),
            vec![c(0.3, 0.0), c(0.0, -0.5)],
            WeightVector::new(vec![0.4, 0.6]).unwrap(),
            vec![c(0.0, 1.0)],
        )
        .unwrap()
    }

    fn problem_from(g: &GeodesicParams, k: f64) -> PickProblem {
        let (z, w, _) = phi_map(g);
        let gamma = g.gamma();
        PickProblem::normalized_form(z, w, g.x * mobius(gamma, g.x) * k, g.y * mobius(gamma, g.y) * k).unwrap()
    }

    #[test]
    fn manufactured_bidisc_solves() {
        let g = sample_geodesic();
        let r = solve(&problem_from(&g, 1.0)).unwrap();
        assert!(r.residuals.interpolation.iter().all(|&v| v <= 1e-9));
        assert!(r.residuals.left_inverse <= 1e-9);
        assert!(r.residuals.sup_norm_sample <= 1.0 + 1e-9);
        assert_eq!(r.composed_blaschke.degree(), 2);
        let v = verify(&r, 500);
        assert!(v.all_passed, "{v:?}");
    }

    #[test]
    fn half_scale_is_not_extremal() {
        let err = solve(&problem_from(&sample_geodesic(), 0.5)).unwrap_err();
        let Error::NotExtremalDatum { scale } = err else { panic!("{err:?}") };
        assert!((scale - 2.0).abs() < 1e-8);
    }

    #[test]
    fn disc_problem_delegates() {
        let nodes = [c(0.2, 0.0), c(0.5, 0.0), c(-0.1, 0.0)];
        let b = |l: Complex64| l * mobius(c(0.1, 0.2), l);
        let p = PickProblem::new(
            nodes.map(|z| PolydiscPoint::new(vec![z]).unwrap()),
            nodes.map(b),
        )
        .unwrap();
        let r = solve(&p).unwrap();
        assert!(matches!(r.interpolant, Interpolant::OneVariable { .. }));
        assert!(r.residuals.interpolation.iter().all(|&v| v <= 1e-9));
    }

    #[test]
    fn tampered_interpolant_fails_verification() {
        let g = sample_geodesic();
        let mut r = solve(&problem_from(&g, 1.0)).unwrap();
        let Interpolant::Magic { function } = &mut r.interpolant else { panic!() };
        for p in function.tree.params_mut() {
            p.s += 1e-3;
        }
        let v = verify(&r, 0);
        assert!(!v.left_inverse_ok);
        assert!(v.sup_norm.is_none());
    }

    #[test]
    fn variety_sampler() {
        let g = sample_geodesic();
        let f = build_left_inverse(&g.alpha, &g.omega, &g.t, &Association::LeftComb).unwrap();
        let s_grid: Vec<f64> = (0..10).map(|k| k as f64 / 9.0).collect();
        assert!(uniqueness_variety_sample(&g, &f, &s_grid, &spiral(50, 0.95)) <= 1e-9);
        let at_one = uniqueness_variety_sample(&g, &f, &[1.0], &spiral(50, 0.95));
        let direct = spiral(50, 0.95)
            .into_iter()
            .map(|l| (f.eval_coords(&g.psi(l)).unwrap() - l * mobius(g.gamma(), l)).norm())
            .fold(0.0, f64::max);
        assert!((at_one - direct).abs() < 1e-15);
    }

    #[test]
    fn degenerate_projection_problem() {
        let z = PolydiscPoint::new(vec![c(0.5, 0.0), c(0.1, 0.2)]).unwrap();
        let w = PolydiscPoint::new(vec![c(-0.3, 0.1), c(0.2, -0.1)]).unwrap();
        let rot = c(0.6, 0.8);
        let p = PickProblem::normalized_form(z.clone(), w.clone(), z[0] * rot, w[0] * rot).unwrap();
        let r = solve(&p).unwrap();
        assert!(r.classification.degenerate);
        assert!(r.residuals.interpolation.iter().all(|&v| v <= 1e-9));

        let bad = PickProblem::normalized_form(z.clone(), w, z[0] * rot, c(0.05, 0.0)).unwrap();
        assert_eq!(solve(&bad).unwrap_err(), Error::IncompatibleDegenerateThirdValue);
    }
}
