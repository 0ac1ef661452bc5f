#![allow(dead_code)]

use polypick::geodesic::{phi_map, GeodesicParams};
use polypick::hyperbolic::{mobius, DiscAutomorphism, ProblemTransform};
use polypick::magic::WeightVector;
use polypick::{Complex64, PickProblem, PolydiscPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the annulus `rmin ≤ |z| ≤ rmax`.
pub fn rd(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> Complex64 {
    let r = (rmin * rmin + (rmax * rmax - rmin * rmin) * rng.gen::<f64>()).sqrt();
    Complex64::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU)
}

pub fn unimodular(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU)
}

pub fn simplex(rng: &mut ChaCha8Rng, n: usize) -> WeightVector {
    let raw: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().ln()).collect();
    WeightVector::normalized(&raw).unwrap()
}

/// Geodesic parameters well inside the region where the parametrization is
/// a local diffeomorphism.
pub fn random_interior(rng: &mut ChaCha8Rng, n: usize) -> GeodesicParams {
    loop {
        let (x, y) = (rd(rng, 0.2, 0.9), rd(rng, 0.2, 0.9));
        if (x - y).norm() < 0.2 {
            continue;
        }
        let alpha: Vec<_> = (0..n).map(|_| rd(rng, 0.0, 0.9)).collect();
        let t = simplex(rng, n);
        if t.min() < 0.05 {
            continue;
        }
        let omega: Vec<_> = (1..n).map(|_| unimodular(rng)).collect();
        let g = GeodesicParams::new(x, y, alpha, t, omega).unwrap();
        if g.is_interior(if n == 3 { 0.02 } else { 0.1 }) {
            return g;
        }
    }
}

/// `λ ↦ λ m_γ(λ)` at the two non-zero parameters.
pub fn extremal_targets(g: &GeodesicParams) -> (Complex64, Complex64) {
    let gamma = g.gamma();
    (g.x * mobius(gamma, g.x), g.y * mobius(gamma, g.y))
}

/// The normalized extremal problem through the geodesic's nodes.
pub fn problem_from_geodesic(g: &GeodesicParams) -> PickProblem {
    let (z, w, _) = phi_map(g);
    let (sigma, tau) = extremal_targets(g);
    PickProblem::normalized_form(z, w, sigma, tau).unwrap()
}

/// A random coordinatewise automorphism of the problem.
pub fn scramble(rng: &mut ChaCha8Rng, p: &PickProblem) -> PickProblem {
    let t = ProblemTransform {
        disc_maps: (0..p.dim()).map(|_| DiscAutomorphism::new(rd(rng, 0.0, 0.5), unimodular(rng)).unwrap()).collect(),
        target_map: DiscAutomorphism::new(rd(rng, 0.0, 0.5), unimodular(rng)).unwrap(),
    };
    t.apply_problem(p)
}

/// Schur function `c · m_b` with `|c| ≤ cmax < 1`: neither unimodular nor an
/// automorphism.
pub fn random_schur(rng: &mut ChaCha8Rng, cmax: f64) -> impl Fn(Complex64) -> Complex64 {
    let c = rd(rng, 0.2, cmax);
    let b = rd(rng, 0.0, 0.8);
    move |l| c * mobius(b, l)
}

pub fn point(v: Vec<Complex64>) -> PolydiscPoint {
    PolydiscPoint::new(v).unwrap()
}

/// Tridisc problem through `λ ↦ (λ, λφ₁(λ), λφ₂(λ))` (coordinates then
/// permuted so the dominant one sits at `dominant`), targets a degree-2
/// Blaschke product of the first coordinate.
pub fn one_dimensional_tridisc(rng: &mut ChaCha8Rng, dominant: usize) -> PickProblem {
    loop {
        let (x, y) = (rd(rng, 0.3, 0.9), rd(rng, 0.3, 0.9));
        if (x - y).norm() < 0.2 {
            continue;
        }
        let (p1, p2) = (random_schur(rng, 0.7), random_schur(rng, 0.7));
        let a = rd(rng, 0.2, 0.8);
        let disc = |l: Complex64| vec![l, l * p1(l), l * p2(l)];
        let (z, w) = (disc(x), disc(y));
        let mut order = vec![1, 2];
        order.insert(dominant, 0);
        let p = PickProblem::normalized_form(
            point(order.iter().map(|&k| z[k]).collect()),
            point(order.iter().map(|&k| w[k]).collect()),
            x * mobius(a, x),
            y * mobius(a, y),
        )
        .unwrap();
        return p;
    }
}

/// Tridisc problem through `λ ↦ (λm_{α₁}(λ), ωλm_{α₂}(λ), λφ(λ))`, with the
/// follower moved to position `follower` and targets `λm_γ(λ)`.
pub fn two_dimensional_tridisc(rng: &mut ChaCha8Rng, follower: usize) -> (PickProblem, GeodesicParams) {
    let g = random_interior(rng, 2);
    let phi = random_schur(rng, 0.6);
    let disc = |l: Complex64| {
        let mut v = g.psi(l);
        v.insert(follower, l * phi(l));
        v
    };
    let (sigma, tau) = extremal_targets(&g);
    (PickProblem::normalized_form(point(disc(g.x)), point(disc(g.y)), sigma, tau).unwrap(), g)
}

pub const PERMUTATIONS_3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Spiral of `count` points in the disc of radius `rmax`.
pub fn spiral(count: usize, rmax: f64) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let r = rmax * ((k as f64 + 0.5) / count as f64).sqrt();
            Complex64::from_polar(r, k as f64 * 2.399_963_229_728_653)
        })
        .collect()
}
