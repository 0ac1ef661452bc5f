//! Spectra of small Hermitian matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix of order 1, 2 or 3, ascending.
///
/// Only the upper triangle and the real part of the diagonal are read.
///
/// # Panics
/// If the matrix is not square or has order above 3.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    assert!(m.is_square(), "matrix must be square");
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
            let b = m[(0, 1)].norm();
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
            vec![mean - radius, mean + radius]
        }
        3 => eig3(m),
        n => panic!("spectrum only for order <= 3, got {n}"),
    }
}

pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m)[0]
}

// The trigonometric closed form loses half the digits near a repeated root,
// which is exactly the rank-one case extremal Pick matrices live in, so the
// third order goes through a backward-stable iterative solver instead.
fn eig3(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = DMatrix::from_fn(3, 3, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => m[(i, j)],
        std::cmp::Ordering::Equal => Complex64::new(m[(i, i)].re, 0.0),
        std::cmp::Ordering::Greater => m[(j, i)].conj(),
    });
    let mut out: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_spectrum() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(3.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]));
        let ev = hermitian_eigenvalues(&m);
        for (got, want) in ev.iter().zip([-1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn matches_characteristic_polynomial() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[c(2.0, 0.0), c(0.5, 1.0), c(-0.3, 0.2), c(0.5, -1.0), c(1.0, 0.0), c(0.7, 0.0), c(-0.3, -0.2), c(0.7, 0.0), c(-0.5, 0.0)],
        );
        for lam in hermitian_eigenvalues(&m) {
            let shifted = &m - DMatrix::<Complex64>::identity(3, 3) * c(lam, 0.0);
            assert!(shifted.determinant().norm() < 1e-12);
        }
        let ev = hermitian_eigenvalues(&m);
        let trace: f64 = ev.iter().sum();
        assert!((trace - 2.5).abs() < 1e-13);
    }

    #[test]
    fn two_by_two_rank_one() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let ev = hermitian_eigenvalues(&m);
        assert!(ev[0].abs() < 1e-15 && (ev[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn three_by_three_double_root() {
        let u = [c(1.0, 0.0), Complex64::from_polar(1.0, 0.4), Complex64::from_polar(1.0, -2.1)];
        let m = DMatrix::from_fn(3, 3, |i, j| u[i].conj() * u[j]);
        let ev = hermitian_eigenvalues(&m);
        assert!(ev[0].abs() < 1e-14 && ev[1].abs() < 1e-14 && (ev[2] - 3.0).abs() < 1e-14, "{ev:?}");
    }
}
