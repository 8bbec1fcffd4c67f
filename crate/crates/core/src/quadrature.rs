//! Quadrature fallback paths: Gauss-Hermite rules for Gaussian-weighted
//! integrals (tensor grids after whitening, dims <= 3) and adaptive Simpson
//! for one-dimensional integrands. The plane-wave algebra in [`crate::gaussalg`]
//! is the primary exact path; quadrature exists for general functions and as
//! an independent cross-check.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specmat;

/// Gauss-Hermite nodes and weights for the weight e^{-x^2}, computed by
/// Golub-Welsch on the Jacobi matrix of the Hermite recurrence.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let node = eig.eigenvalues[i];
            let w = std::f64::consts::PI.sqrt() * eig.eigenvectors[(0, i)].powi(2);
            (node, w)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// Standard-normal nodes and weights: integrates f against N(0,1) exactly
/// for polynomials of degree < 2n.
pub fn gauss_hermite_normal(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (nodes, weights) = gauss_hermite(n);
    let c = std::f64::consts::PI.sqrt();
    (
        nodes.iter().map(|x| x * std::f64::consts::SQRT_2).collect(),
        weights.iter().map(|w| w / c).collect(),
    )
}

/// Expectation of `f` under the centered Gaussian with the given covariance,
/// by a tensor Gauss-Hermite grid after whitening x = C^{1/2} u.
/// Supports dimensions 1 through 3.
pub fn gaussian_expectation<F>(
    covariance: &DMatrix<f64>,
    nodes_per_axis: usize,
    f: F,
) -> Result<Complex64>
where
    F: Fn(&DVector<f64>) -> Complex64,
{
    let d = covariance.nrows();
    if d == 0 || d > 3 {
        return Err(Error::InvalidInput(format!(
            "Gauss-Hermite tensor grid supports dims 1..=3, got {d}"
        )));
    }
    if specmat::min_symmetric_eigenvalue(covariance) <= 0.0 {
        return Err(Error::Ordering(
            "covariance must be positive-definite".into(),
        ));
    }
    let half = specmat::sqrt_psd(covariance)?;
    let (nodes, weights) = gauss_hermite_normal(nodes_per_axis);
    let n = nodes.len();
    let mut total = Complex64::new(0.0, 0.0);
    let mut idx = vec![0usize; d];
    loop {
        let mut u = DVector::<f64>::zeros(d);
        let mut w = 1.0;
        for (axis, &i) in idx.iter().enumerate() {
            u[axis] = nodes[i];
            w *= weights[i];
        }
        let x = &half * u;
        total += f(&x) * w;
        // advance the multi-index
        let mut axis = 0;
        loop {
            idx[axis] += 1;
            if idx[axis] < n {
                break;
            }
            idx[axis] = 0;
            axis += 1;
            if axis == d {
                return Ok(total);
            }
        }
    }
}

/// Adaptive Simpson quadrature for a scalar integrand on [a, b].
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    // pre-split so a locally concentrated integrand cannot fool the
    // coarse error estimate into stopping at the first level
    const PANELS: usize = 8;
    let h = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|k| {
            let lo = a + k as f64 * h;
            let hi = lo + h;
            let m = 0.5 * (lo + hi);
            step(f, lo, hi, f(lo), f(m), f(hi), tol / PANELS as f64, 40)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let whole = (fa + 4.0 * fm + fb) * (b - a) / 6.0;
    let left = (fa + 4.0 * flm + fm) * (m - a) / 6.0;
    let right = (fm + 4.0 * frm + fb) * (b - m) / 6.0;
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() < 15.0 * tol {
        return refined + (refined - whole) / 15.0;
    }
    step(f, a, m, fa, flm, fm, tol / 2.0, depth - 1)
        + step(f, m, b, fm, frm, fb, tol / 2.0, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_integrates_moments() {
        let (nodes, weights) = gauss_hermite_normal(20);
        // E[x^2] = 1, E[x^4] = 3 under the standard normal
        let m2: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * x * x).sum();
        let m4: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m2 - 1.0).abs() < 1e-12);
        assert!((m4 - 3.0).abs() < 1e-11);
    }

    #[test]
    fn gaussian_expectation_characteristic_function() {
        // E[e^{i xi x}] = e^{-sigma^2 xi^2 / 2}
        let cov = DMatrix::from_element(1, 1, 1.0);
        let xi = 1.0;
        let val = gaussian_expectation(&cov, 64, |x| Complex64::new(0.0, xi * x[0]).exp()).unwrap();
        assert!((val - Complex64::new((-0.5f64).exp(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn simpson_matches_closed_form() {
        let v = adaptive_simpson(&|x: f64| x.exp(), 0.0, 1.0, 1e-12);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-11);
    }
}
