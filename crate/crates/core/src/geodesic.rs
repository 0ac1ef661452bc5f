//! 3-complex geodesics `ψ_{ω,α}(λ) = (λm_{α₁}(λ), ω₁λm_{α₂}(λ), …)`, the map
//!
//! ```text
//! Φ(x, y, α, t, ω) = (ψ(x), ψ(y), [x m_{t·α}(x) : y m_{t·α}(y)])
//! ```
//!
//! and its numerical inversion.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{mobius, unit};
use crate::magic::WeightVector;
use crate::problem::PolydiscPoint;
use crate::tolerances;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicParams {
    pub x: Complex64,
    pub y: Complex64,
    pub alpha: Vec<Complex64>,
    pub t: WeightVector,
    /// `n − 1` rotations; the first coordinate is never rotated.
    pub omega: Vec<Complex64>,
}

impl GeodesicParams {
    pub fn new(x: Complex64, y: Complex64, alpha: Vec<Complex64>, t: WeightVector, omega: Vec<Complex64>) -> Result<Self> {
        let n = alpha.len();
        if n == 0 || t.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: t.len() });
        }
        if omega.len() + 1 != n {
            return Err(Error::DimensionMismatch { expected: n - 1, got: omega.len() });
        }
        for (name, v) in [("x", x), ("y", y)] {
            if !(v.norm() < 1.0) {
                return Err(Error::OutsideDisc(format!("{name} = {v}")));
            }
        }
        if x.norm() == 0.0 || y.norm() == 0.0 || x == y {
            return Err(Error::InvalidParameters("need x ≠ 0, y ≠ 0, x ≠ y".into()));
        }
        if let Some(a) = alpha.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::OutsideDisc(format!("α = {a}")));
        }
        if let Some(w) = omega.iter().find(|w| (w.norm() - 1.0).abs() > 1e-9) {
            return Err(Error::InvalidParameters(format!("ω = {w} not unimodular")));
        }
        let omega = omega.into_iter().map(unit).collect();
        Ok(Self { x, y, alpha, t, omega })
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// `γ = t · α`.
    pub fn gamma(&self) -> Complex64 {
        self.t.combine(&self.alpha)
    }

    /// Rotation of coordinate `k`, with `ω₀ = 1`.
    pub fn rotation(&self, k: usize) -> Complex64 {
        if k == 0 {
            ONE
        } else {
            self.omega[k - 1]
        }
    }

    pub fn psi(&self, lambda: Complex64) -> Vec<Complex64> {
        (0..self.dim()).map(|k| self.rotation(k) * lambda * mobius(self.alpha[k], lambda)).collect()
    }

    /// The other preimage `(−x, −y, −α, t, ω)` of the same data.
    pub fn mirrored(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            alpha: self.alpha.iter().map(|a| -a).collect(),
            t: self.t.clone(),
            omega: self.omega.clone(),
        }
    }

    /// Canonical representative: `Re x > 0`, or `Im x > 0` when `Re x ≈ 0`.
    pub fn gauged(&self) -> (Self, bool) {
        let flip = if self.x.re.abs() <= tolerances::IDENTITY { self.x.im < 0.0 } else { self.x.re < 0.0 };
        if flip {
            (self.mirrored(), true)
        } else {
            (self.clone(), false)
        }
    }

    /// Largest coordinate discrepancy; `t` is skipped when `compare_t` is false.
    pub fn max_diff(&self, other: &Self, compare_t: bool) -> f64 {
        let mut d = (self.x - other.x).norm().max((self.y - other.y).norm());
        for (a, b) in self.alpha.iter().zip(&other.alpha) {
            d = d.max((a - b).norm());
        }
        for (a, b) in self.omega.iter().zip(&other.omega) {
            d = d.max((a - b).norm());
        }
        if compare_t {
            for (a, b) in self.t.values().iter().zip(other.t.values()) {
                d = d.max((a - b).abs());
            }
        }
        d.max((self.gamma() - other.gamma()).norm())
    }

    /// Membership in the parameter set `X` for `n ≤ 3`: interior `t` and
    /// distinct (`n = 2`) or non-co-linear (`n = 3`) `α`.
    pub fn is_interior(&self, margin: f64) -> bool {
        if self.t.min() <= margin {
            return false;
        }
        match self.dim() {
            2 => (self.alpha[0] - self.alpha[1]).norm() > margin,
            3 => triangle_area(self.alpha[0], self.alpha[1], self.alpha[2]) > margin,
            _ => true,
        }
    }
}

pub fn triangle_area(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    0.5 * ((b - a).conj() * (c - a)).im.abs()
}

/// A point `[σ : τ]` of ℙ¹, stored with its largest-modulus component equal to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveTarget {
    pub sigma: Complex64,
    pub tau: Complex64,
}

impl ProjectiveTarget {
    pub fn new(sigma: Complex64, tau: Complex64) -> Result<Self> {
        let scale = if sigma.norm() >= tau.norm() { sigma } else { tau };
        if scale.norm() == 0.0 || !scale.norm().is_finite() {
            return Err(Error::InvalidParameters("projective target [0 : 0]".into()));
        }
        Ok(Self { sigma: sigma / scale, tau: tau / scale })
    }

    /// Chordal distance `|σ τ' − τ σ'| / (|(σ, τ)| |(σ', τ')|)`.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        chordal(self.sigma, self.tau, other.sigma, other.tau).norm()
    }
}

fn chordal(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let na = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let nc = (c.norm_sqr() + d.norm_sqr()).sqrt();
    (a * d - b * c) / (na * nc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionDiagnostics {
    /// Max-norm of the real residual vector at the returned parameters.
    pub residual_norm: f64,
    pub iterations: usize,
    /// 1-based index of the successful start.
    pub starts_used: usize,
    /// True when the solver's raw answer was replaced by its mirror image.
    pub sign_flipped: bool,
    /// Smallest over largest singular value of the real Jacobian.
    pub jacobian_ratio: f64,
}

pub fn geodesic_eval(g: &GeodesicParams, lambda: Complex64) -> PolydiscPoint {
    PolydiscPoint::from_vec_unchecked(g.psi(lambda))
}

pub fn phi_map(g: &GeodesicParams) -> (PolydiscPoint, PolydiscPoint, ProjectiveTarget) {
    let gamma = g.gamma();
    let xi = ProjectiveTarget::new(g.x * mobius(gamma, g.x), g.y * mobius(gamma, g.y))
        .expect("x m_γ(x) and y m_γ(y) cannot both vanish for x ≠ y");
    (geodesic_eval(g, g.x), geodesic_eval(g, g.y), xi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InversionOptions {
    pub starts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    /// Accept solutions whose `t` touches the simplex boundary. Always true
    /// for `n ≥ 4`, where `t` is not determined by the data.
    pub allow_boundary_t: bool,
    /// Factor by which the start sequence is continued when no start lands
    /// in the parameter domain (near-singular data can send every default
    /// start to an outside preimage). 1 disables it.
    pub escalation: usize,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self { starts: 64, max_iterations: 200, tolerance: tolerances::INVERSION_RESIDUAL, allow_boundary_t: false, escalation: 4 }
    }
}

/// Recovers gauged `(x, y, α, t, ω)` with `Φ = (z, w, ξ)`.
pub fn invert_phi(z: &PolydiscPoint, w: &PolydiscPoint, xi: &ProjectiveTarget) -> Result<(GeodesicParams, InversionDiagnostics)> {
    invert_phi_with(z, w, xi, &InversionOptions::default())
}

pub fn invert_phi_with(
    z: &PolydiscPoint,
    w: &PolydiscPoint,
    xi: &ProjectiveTarget,
    opts: &InversionOptions,
) -> Result<(GeodesicParams, InversionDiagnostics)> {
    let data = Data::new(z, w, xi)?;
    let n = data.n;
    let allow_boundary = opts.allow_boundary_t || n >= 4;
    let mut best = f64::INFINITY;
    let mut boundary_hit = false;
    let total = opts.starts * opts.escalation.max(1);
    let first_pass = starting_points(&data, opts.starts).len();
    for (index, start) in starting_points(&data, total).into_iter().enumerate() {
        if index >= first_pass && boundary_hit {
            break;
        }
        let Some(out) = levenberg_marquardt(&data, start, opts) else { continue };
        best = best.min(out.residual);
        if out.residual > opts.tolerance {
            continue;
        }
        let (x, y, alpha, mut t, omega) = data.raw(&out.p);
        let mut t_min = t.iter().copied().fold(f64::INFINITY, f64::min);
        if t_min < -tolerances::DECISION {
            // Only γ = t·α enters Φ; for n ≥ 4 re-express it with t ≥ 0.
            let gamma: Complex64 = t.iter().zip(&alpha).map(|(t, a)| a * *t).sum();
            match (n >= 4).then(|| convex_weights(&alpha, gamma)).flatten() {
                Some(repaired) => {
                    t = repaired;
                    t_min = 0.0;
                }
                None => continue,
            }
        }
        let Ok(t) = WeightVector::normalized(&t) else { continue };
        let Ok(g) = GeodesicParams::new(x, y, alpha, t, omega) else { continue };
        if !allow_boundary && t_min <= tolerances::DECISION {
            boundary_hit = true;
            continue;
        }
        let (gauged, sign_flipped) = g.gauged();
        let jacobian_ratio = jacobian_ratio(&data, &data.pack(&gauged));
        let diag = InversionDiagnostics {
            residual_norm: out.residual,
            iterations: out.iterations,
            starts_used: index + 1,
            sign_flipped,
            jacobian_ratio,
        };
        return Ok((gauged, diag));
    }
    if boundary_hit {
        return Err(Error::LowerDimensional);
    }
    Err(Error::NoConvergence { starts: total, best_residual: best })
}

/// One damped Newton run from `start`, without gauge fixing.
pub fn solve_from_start(
    z: &PolydiscPoint,
    w: &PolydiscPoint,
    xi: &ProjectiveTarget,
    start: &GeodesicParams,
) -> Result<(GeodesicParams, InversionDiagnostics)> {
    let data = Data::new(z, w, xi)?;
    if start.dim() != data.n {
        return Err(Error::DimensionMismatch { expected: data.n, got: start.dim() });
    }
    let opts = InversionOptions::default();
    let out = levenberg_marquardt(&data, data.pack(start), &opts)
        .filter(|o| o.residual <= opts.tolerance)
        .ok_or(Error::NoConvergence { starts: 1, best_residual: f64::NAN })?;
    let g = data.unpack(&out.p);
    let diag = InversionDiagnostics {
        residual_norm: out.residual,
        iterations: out.iterations,
        starts_used: 1,
        sign_flipped: false,
        jacobian_ratio: jacobian_ratio(&data, &out.p),
    };
    Ok((g, diag))
}

/// Singular values of the real Jacobian of `Φ` at `g`, descending.
pub fn jacobian_singular_values(g: &GeodesicParams) -> Vec<f64> {
    let (z, w, xi) = phi_map(g);
    let data = Data { n: g.dim(), z: z.into_coords(), w: w.into_coords(), xi };
    let j = data.jacobian(&data.pack(g));
    let mut sv: Vec<f64> = j.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Max-norm residual of `Φ(g)` against `(z, w, ξ)`, chordal on `ξ`.
pub fn phi_residual(g: &GeodesicParams, z: &PolydiscPoint, w: &PolydiscPoint, xi: &ProjectiveTarget) -> f64 {
    let (zz, ww, xx) = phi_map(g);
    zz.max_abs_diff(z).max(ww.max_abs_diff(w)).max(xx.chordal_distance(xi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalScale {
    pub scale: f64,
    /// Unimodular `c / |c|` where `(σ*, τ*) = c·(σ, τ)`.
    pub phase: Complex64,
    pub extremal_targets: (Complex64, Complex64),
    pub geodesic: GeodesicParams,
    pub diagnostics: InversionDiagnostics,
}

/// The factor `s > 0` for which `0 ↦ 0, z ↦ s·c·σ, w ↦ s·c·τ` (some `|c| = 1`)
/// is extremal.
pub fn extremal_scale(z: &PolydiscPoint, w: &PolydiscPoint, sigma: Complex64, tau: Complex64) -> Result<ExtremalScale> {
    extremal_scale_with(z, w, sigma, tau, &InversionOptions::default())
}

pub fn extremal_scale_with(
    z: &PolydiscPoint,
    w: &PolydiscPoint,
    sigma: Complex64,
    tau: Complex64,
    opts: &InversionOptions,
) -> Result<ExtremalScale> {
    let xi = ProjectiveTarget::new(sigma, tau)?;
    let (g, diagnostics) = invert_phi_with(z, w, &xi, opts)?;
    let gamma = g.gamma();
    let targets = (g.x * mobius(gamma, g.x), g.y * mobius(gamma, g.y));
    let ratio = |star: Complex64, v: Complex64| if v.norm() > 0.0 { Some(star / v) } else { None };
    let (rs, rt) = (ratio(targets.0, sigma), ratio(targets.1, tau));
    let c = match (rs, rt) {
        (Some(a), Some(b)) => {
            if (a.norm() - b.norm()).abs() > tolerances::DECISION * a.norm().max(b.norm()) {
                return Err(Error::InconsistentRatio { sigma_ratio: a.norm(), tau_ratio: b.norm() });
            }
            if sigma.norm() >= tau.norm() {
                a
            } else {
                b
            }
        }
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => unreachable!("ProjectiveTarget rejects [0 : 0]"),
    };
    Ok(ExtremalScale { scale: c.norm(), phase: unit(c), extremal_targets: targets, geodesic: g, diagnostics })
}

// ---------------------------------------------------------------------------

struct Data {
    n: usize,
    z: Vec<Complex64>,
    w: Vec<Complex64>,
    xi: ProjectiveTarget,
}

impl Data {
    fn new(z: &PolydiscPoint, w: &PolydiscPoint, xi: &ProjectiveTarget) -> Result<Self> {
        let n = z.dim();
        if w.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.dim() });
        }
        if n < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: n });
        }
        if z.max_abs_diff(w) <= tolerances::IDENTITY {
            return Err(Error::DegenerateData("z = w".into()));
        }
        let zero = PolydiscPoint::origin(n);
        if z.max_abs_diff(&zero) == 0.0 || w.max_abs_diff(&zero) == 0.0 {
            return Err(Error::DegenerateData("a node coincides with the origin".into()));
        }
        Ok(Self { n, z: z.coords().to_vec(), w: w.coords().to_vec(), xi: *xi })
    }

    fn unknowns(&self) -> usize {
        4 * self.n + 2
    }

    fn pack(&self, g: &GeodesicParams) -> DVector<f64> {
        let n = self.n;
        let mut p = DVector::zeros(self.unknowns());
        p[0] = g.x.re;
        p[1] = g.x.im;
        p[2] = g.y.re;
        p[3] = g.y.im;
        for k in 0..n {
            p[4 + 2 * k] = g.alpha[k].re;
            p[5 + 2 * k] = g.alpha[k].im;
        }
        for k in 0..n - 1 {
            p[4 + 2 * n + k] = g.t.values()[k];
            p[3 + 3 * n + k] = g.omega[k].arg();
        }
        p
    }

    /// Parameters without validation (iterates may be slightly off the simplex).
    fn raw(&self, p: &DVector<f64>) -> (Complex64, Complex64, Vec<Complex64>, Vec<f64>, Vec<Complex64>) {
        let n = self.n;
        let x = Complex64::new(p[0], p[1]);
        let y = Complex64::new(p[2], p[3]);
        let alpha: Vec<Complex64> = (0..n).map(|k| Complex64::new(p[4 + 2 * k], p[5 + 2 * k])).collect();
        let mut t: Vec<f64> = (0..n - 1).map(|k| p[4 + 2 * n + k]).collect();
        t.push(1.0 - t.iter().sum::<f64>());
        let omega: Vec<Complex64> = (0..n - 1).map(|k| Complex64::from_polar(1.0, p[3 + 3 * n + k])).collect();
        (x, y, alpha, t, omega)
    }

    fn unpack(&self, p: &DVector<f64>) -> GeodesicParams {
        let (x, y, alpha, t, omega) = self.raw(p);
        let t = WeightVector::normalized(&t).expect("feasible iterate has positive weights");
        GeodesicParams { x, y, alpha, t, omega }
    }

    fn residual(&self, p: &DVector<f64>) -> DVector<f64> {
        let n = self.n;
        let (x, y, alpha, t, omega) = self.raw(p);
        let gamma: Complex64 = t.iter().zip(&alpha).map(|(t, a)| a * *t).sum();
        let rot = |k: usize| if k == 0 { ONE } else { omega[k - 1] };
        let mut r = DVector::zeros(self.unknowns());
        for k in 0..n {
            let dz = rot(k) * x * mobius(alpha[k], x) - self.z[k];
            let dw = rot(k) * y * mobius(alpha[k], y) - self.w[k];
            r[2 * k] = dz.re;
            r[2 * k + 1] = dz.im;
            r[2 * n + 2 * k] = dw.re;
            r[2 * n + 2 * k + 1] = dw.im;
        }
        let dx = chordal(x * mobius(gamma, x), y * mobius(gamma, y), self.xi.sigma, self.xi.tau);
        r[4 * n] = dx.re;
        r[4 * n + 1] = dx.im;
        r
    }

    /// Central finite differences.
    fn jacobian(&self, p: &DVector<f64>) -> DMatrix<f64> {
        let m = self.unknowns();
        let mut j = DMatrix::zeros(m, m);
        let mut q = p.clone();
        for c in 0..m {
            let h = 1e-7 * p[c].abs().max(1.0);
            q[c] = p[c] + h;
            let plus = self.residual(&q);
            q[c] = p[c] - h;
            let minus = self.residual(&q);
            q[c] = p[c];
            j.set_column(c, &((plus - minus) / (2.0 * h)));
        }
        j
    }
}

/// Weights on at most three of the `alpha` with `Σ tₖαₖ = gamma`, if `gamma`
/// lies in their convex hull.
fn convex_weights(alpha: &[Complex64], gamma: Complex64) -> Option<Vec<f64>> {
    let n = alpha.len();
    let tol = 1e-12;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (alpha[i], alpha[j], alpha[k]);
                let det = ((b - a).conj() * (c - a)).im;
                if det.abs() < 1e-14 {
                    continue;
                }
                let u = ((b - a).conj() * (gamma - a)).im / det;
                let v = ((gamma - a).conj() * (c - a)).im / det;
                let (wa, wb, wc) = (1.0 - u - v, v, u);
                if wa >= -tol && wb >= -tol && wc >= -tol {
                    let mut t = vec![0.0; n];
                    t[i] = wa.max(0.0);
                    t[j] = wb.max(0.0);
                    t[k] = wc.max(0.0);
                    let sum: f64 = t.iter().sum();
                    t.iter_mut().for_each(|v| *v /= sum);
                    return Some(t);
                }
            }
        }
    }
    None
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn jacobian_ratio(data: &Data, p: &DVector<f64>) -> f64 {
    let sv = data.jacobian(p).singular_values();
    let (lo, hi) = (sv.min(), sv.max());
    if hi > 0.0 {
        lo / hi
    } else {
        0.0
    }
}

struct LmOutcome {
    p: DVector<f64>,
    residual: f64,
    iterations: usize,
}

fn levenberg_marquardt(data: &Data, mut p: DVector<f64>, opts: &InversionOptions) -> Option<LmOutcome> {
    if !data.residual(&p).iter().all(|v| v.is_finite()) {
        return None;
    }
    let m = data.unknowns();
    let mut r = data.residual(&p);
    let mut cost = r.norm_squared();
    let mut mu: Option<f64> = None;
    let mut nu = 2.0;
    let mut checkpoint = cost;
    let mut polish = 0;
    for iter in 0..opts.max_iterations {
        let res = max_abs(&r);
        if res <= opts.tolerance {
            // A few extra steps drive the residual to rounding level.
            polish += 1;
            if polish > 4 || res < 1e-15 {
                return Some(LmOutcome { p, residual: res, iterations: iter });
            }
        }
        if iter % 25 == 24 {
            if cost > 0.25 * checkpoint && res > 1e-6 {
                return None;
            }
            checkpoint = cost;
        }
        let j = data.jacobian(&p);
        let jt = j.transpose();
        let a = &jt * &j;
        let g = &jt * &r;
        let mu_val = *mu.get_or_insert_with(|| 1e-3 * (0..m).map(|i| a[(i, i)]).fold(0.0, f64::max).max(1e-12));
        let mut damped = a.clone();
        for i in 0..m {
            damped[(i, i)] += mu_val * a[(i, i)].max(1e-9);
        }
        let Some(chol) = damped.cholesky() else {
            mu = Some(mu_val * 10.0);
            continue;
        };
        let step = chol.solve(&(-&g));
        let mut accepted = false;
        let mut scale = 1.0;
        for _ in 0..30 {
            let cand = &p + &step * scale;
            let rc = data.residual(&cand);
            if rc.iter().all(|v| v.is_finite()) {
                let cc = rc.norm_squared();
                if cc < cost {
                    let actual = cost - cc;
                    let predicted = -(2.0 * step.dot(&g) * scale + (step.transpose() * &a * &step)[0] * scale * scale);
                    let rho = if predicted > 0.0 { actual / predicted } else { 0.0 };
                    let shrink = (1.0 / 3.0f64).max(1.0 - (2.0 * rho - 1.0).powi(3));
                    mu = Some(mu_val * shrink);
                    nu = 2.0;
                    p = cand;
                    r = rc;
                    cost = cc;
                    accepted = true;
                }
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            mu = Some(mu_val * nu);
            nu *= 2.0;
            if mu_val > 1e16 {
                let res = max_abs(&r);
                return (res <= opts.tolerance).then_some(LmOutcome { p, residual: res, iterations: iter });
            }
        }
    }
    let res = max_abs(&r);
    Some(LmOutcome { p, residual: res, iterations: opts.max_iterations })
}

/// Deterministic seeds: `x` on a golden-ratio sequence in the annulus
/// `max|z_k| < |x| < 1`, then `α₁` and `y` from the first coordinate and the
/// remaining `(α_k, ω_k)` from two-point automorphism estimates.
fn starting_points(data: &Data, count: usize) -> Vec<DVector<f64>> {
    let n = data.n;
    let r0 = data.z.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let clamp = |v: Complex64, r: f64| if v.norm() >= r { v / v.norm() * r } else { v };
    let mut out = Vec::new();
    for i in 0..count {
        let u = (i as f64 * 0.618_033_988_749_894_9) % 1.0;
        let v = (i as f64 * 0.754_877_666_246_692_7 + 0.5) % 1.0;
        let radius = (r0 * r0 + (1.0 - r0 * r0) * u).sqrt() * 0.999;
        let x = Complex64::from_polar(radius, std::f64::consts::TAU * v);
        // m_α(x) = z₁/x  ⇔  α = (c − d c̄)/(1 − |d|²), c = a + x, d = a x.
        let a = clamp(data.z[0] / x, 0.999);
        let (c, d) = (a + x, a * x);
        let a1 = (c - d * c.conj()) / (1.0 - d.norm_sqr());
        if !(a1.norm() < 1.0) {
            continue;
        }
        // y m_{α₁}(y) = w₁  ⇔  y² − (α₁ + w₁ᾱ₁) y + w₁ = 0.
        let b = a1 + data.w[0] * a1.conj();
        let disc = (b * b - data.w[0] * 4.0).sqrt();
        for y in [(b + disc) * 0.5, (b - disc) * 0.5] {
            let y = clamp(y, 0.99);
            if y.norm() == 0.0 {
                continue;
            }
            let mut alpha = vec![a1];
            let mut omega = Vec::new();
            for k in 1..n {
                let a = clamp(data.z[k] / x, 0.999);
                let b = clamp(data.w[k] / y, 0.999);
                let q = mobius(a, b) / mobius(x, y);
                let e = if q.norm() > 0.0 { unit(q) } else { ONE };
                let ak = mobius(x, e.conj() * a);
                let l0 = if ak.norm() < 1e-3 { Complex64::new(0.3, 0.0) } else { Complex64::new(0.0, 0.0) };
                let f = mobius(a, e * mobius(x, l0));
                alpha.push(clamp(ak, 0.999));
                omega.push(unit(f / mobius(ak, l0)));
            }
            let g = GeodesicParams { x, y, alpha, t: WeightVector::uniform(n), omega };
            out.push(data.pack(&g));
        }
    }
    out
}
