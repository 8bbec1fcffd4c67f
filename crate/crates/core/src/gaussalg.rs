//! Exact Gaussian-Fourier function algebra. A [`TrigPoly`] is a finite
//! complex combination of plane waves x -> e^{i<xi,x>}; this family is closed
//! under the Ornstein-Uhlenbeck semigroup, the Gaussian multiplier
//! intertwiners, and their adjoints, so all of those operators act in closed
//! form. Inner products in the Gaussian-weighted L^2 space reduce to the
//! characteristic function of the weight.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specmat;

/// Frequencies equal within this per-coordinate tolerance are merged.
pub const FREQ_MERGE_TOL: f64 = 1e-12;

/// One plane-wave term: coeff * e^{i <freq, x>}.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub freq: DVector<f64>,
}

/// Finite complex linear combination of plane waves on R^d.
/// Terms are kept canonical: zero coefficients pruned, equal frequencies
/// merged, terms sorted lexicographically by frequency.
#[derive(Debug, Clone)]
pub struct TrigPoly {
    dim: usize,
    terms: Vec<Term>,
}

fn freq_cmp(a: &DVector<f64>, b: &DVector<f64>) -> std::cmp::Ordering {
    for i in 0..a.len() {
        match a[i].partial_cmp(&b[i]).unwrap() {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

fn freq_close(a: &DVector<f64>, b: &DVector<f64>, tol: f64) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= tol)
}

impl TrigPoly {
    pub fn new(dim: usize, terms: Vec<(Complex64, DVector<f64>)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be >= 1".into()));
        }
        for (c, xi) in &terms {
            if xi.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "frequency of length {} in dimension {dim}",
                    xi.len()
                )));
            }
            if !c.re.is_finite() || !c.im.is_finite() || xi.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("non-finite term".into()));
            }
        }
        let mut poly = TrigPoly {
            dim,
            terms: terms
                .into_iter()
                .map(|(coeff, freq)| Term { coeff, freq })
                .collect(),
        };
        poly.canonicalize();
        Ok(poly)
    }

    /// The constant function with the given value (the xi = 0 term).
    pub fn constant(dim: usize, value: Complex64) -> Self {
        TrigPoly::new(dim, vec![(value, DVector::zeros(dim))]).unwrap()
    }

    /// A single plane wave e^{i<xi,x>}.
    pub fn plane_wave(xi: DVector<f64>) -> Self {
        let dim = xi.len();
        TrigPoly::new(dim, vec![(Complex64::new(1.0, 0.0), xi)]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn canonicalize(&mut self) {
        self.terms.sort_by(|a, b| freq_cmp(&a.freq, &b.freq));
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for term in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if freq_close(&last.freq, &term.freq, FREQ_MERGE_TOL) => {
                    last.coeff += term.coeff;
                }
                _ => merged.push(term),
            }
        }
        merged.retain(|t| t.coeff.norm() > 0.0);
        self.terms = merged;
    }

    /// Pointwise evaluation.
    pub fn eval(&self, x: &DVector<f64>) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coeff * Complex64::new(0.0, t.freq.dot(x)).exp())
            .sum()
    }

    /// Maps each term (c, xi) to (c * factor(xi), warp(xi)).
    fn map_terms<Fc, Fw>(&self, factor: Fc, warp: Fw) -> TrigPoly
    where
        Fc: Fn(&DVector<f64>) -> Complex64,
        Fw: Fn(&DVector<f64>) -> DVector<f64>,
    {
        let mut out = TrigPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * factor(&t.freq),
                    freq: warp(&t.freq),
                })
                .collect(),
        };
        out.canonicalize();
        out
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        let mut terms: Vec<Term> = self.terms.clone();
        terms.extend(other.terms.iter().map(|t| Term {
            coeff: -t.coeff,
            freq: t.freq.clone(),
        }));
        let mut out = TrigPoly {
            dim: self.dim,
            terms,
        };
        out.canonicalize();
        out
    }

    pub fn scale(&self, c: Complex64) -> TrigPoly {
        self.map_terms(|_| c, |xi| xi.clone())
    }
}

/// A centered Gaussian reference density given by its covariance.
#[derive(Debug, Clone)]
pub struct GaussianWeight {
    covariance: DMatrix<f64>,
}

impl GaussianWeight {
    pub fn new(covariance: DMatrix<f64>) -> Result<Self> {
        specmat::check_symmetric(&covariance, "covariance")?;
        if specmat::min_symmetric_eigenvalue(&covariance) <= specmat::LOEWNER_TOL {
            return Err(Error::Ordering(
                "covariance must be positive-definite".into(),
            ));
        }
        Ok(GaussianWeight { covariance })
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn dim(&self) -> usize {
        self.covariance.nrows()
    }
}

fn quad_form(m: &DMatrix<f64>, xi: &DVector<f64>) -> f64 {
    (m * xi).dot(xi)
}

/// Ornstein-Uhlenbeck semigroup action on a plane-wave combination:
/// each term (c, xi) maps to (c e^{-<Q_t xi, xi>/2}, e^{-tB^T} xi).
pub fn ou_apply(
    b: &DMatrix<f64>,
    qinf: &DMatrix<f64>,
    t: f64,
    f: &TrigPoly,
) -> Result<TrigPoly> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("t must be >= 0, got {t}")));
    }
    if f.dim() != b.nrows() {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    let qt = specmat::gramian_at(b, qinf, t)?;
    let decay = specmat::matrix_exponential(&b.transpose(), -t)?;
    Ok(f.map_terms(
        |xi| Complex64::new((-0.5 * quad_form(&qt, xi)).exp(), 0.0),
        |xi| &decay * xi,
    ))
}

/// Gaussian multiplier intertwiner between the reference covariances
/// `qinf_source` (the larger one) and `qinf_target`:
/// (c, xi) -> (c e^{-<(Qsrc - Qtgt) xi, xi>/2}, xi).
pub fn multiplier_apply(
    qinf_source: &DMatrix<f64>,
    qinf_target: &DMatrix<f64>,
    f: &TrigPoly,
) -> Result<TrigPoly> {
    specmat::check_symmetric(qinf_source, "Qinf_source")?;
    specmat::check_symmetric(qinf_target, "Qinf_target")?;
    let gap = qinf_source - qinf_target;
    if specmat::min_symmetric_eigenvalue(&gap) < -specmat::LOEWNER_TOL {
        return Err(Error::Ordering(
            "source covariance must dominate target covariance in the Loewner order".into(),
        ));
    }
    if f.dim() != gap.nrows() {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    Ok(f.map_terms(
        |xi| Complex64::new((-0.5 * quad_form(&gap, xi)).exp(), 0.0),
        |xi| xi.clone(),
    ))
}

/// Adjoint of the diagonal-scaling intertwiner between the diagonal
/// covariances D_delta and D_alpha:
/// (c, xi) -> (c e^{-<D_{delta(alpha-delta)/alpha} xi, xi>/2}, D_{delta/alpha} xi).
pub fn adjoint_scaled_apply(alpha: &[f64], delta: &[f64], f: &TrigPoly) -> Result<TrigPoly> {
    if alpha.len() != delta.len() || alpha.len() != f.dim() {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    for (&a, &dl) in alpha.iter().zip(delta.iter()) {
        if !(dl > 0.0) || dl > a {
            return Err(Error::InvalidInput(format!(
                "require alpha_i >= delta_i > 0, got alpha={a}, delta={dl}"
            )));
        }
    }
    let weights: Vec<f64> = alpha
        .iter()
        .zip(delta.iter())
        .map(|(&a, &dl)| dl * (a - dl) / a)
        .collect();
    let scales: Vec<f64> = alpha
        .iter()
        .zip(delta.iter())
        .map(|(&a, &dl)| dl / a)
        .collect();
    Ok(f.map_terms(
        |xi| {
            let q: f64 = xi
                .iter()
                .zip(weights.iter())
                .map(|(x, w)| w * x * x)
                .sum();
            Complex64::new((-0.5 * q).exp(), 0.0)
        },
        |xi| DVector::from_iterator(xi.len(), xi.iter().zip(scales.iter()).map(|(x, s)| x * s)),
    ))
}

/// L^2 inner product against a Gaussian weight, in closed form through the
/// characteristic function:
/// <f, g> = sum_{j,k} c_j conj(d_k) e^{-<C (xi_j - eta_k), xi_j - eta_k>/2}.
pub fn inner_product(f: &TrigPoly, g: &TrigPoly, weight: &GaussianWeight) -> Result<Complex64> {
    if f.dim() != weight.dim() || g.dim() != weight.dim() {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    let c = weight.covariance();
    let mut acc = Complex64::new(0.0, 0.0);
    for tf in f.terms() {
        for tg in g.terms() {
            let diff = &tf.freq - &tg.freq;
            let w = (-0.5 * quad_form(c, &diff)).exp();
            acc += tf.coeff * tg.coeff.conj() * w;
        }
    }
    Ok(acc)
}

/// Weighted L^2 norm.
pub fn norm(f: &TrigPoly, weight: &GaussianWeight) -> Result<f64> {
    let ip = inner_product(f, f, weight)?;
    Ok(ip.re.max(0.0).sqrt())
}

/// Projection onto the constants: the weighted mean of f as a constant
/// plane-wave combination.
pub fn equilibrium_project(f: &TrigPoly, weight: &GaussianWeight) -> Result<TrigPoly> {
    if f.dim() != weight.dim() {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    let c = weight.covariance();
    let value: Complex64 = f
        .terms()
        .iter()
        .map(|t| t.coeff * (-0.5 * quad_form(c, &t.freq)).exp())
        .sum();
    Ok(TrigPoly::constant(f.dim(), value))
}

/// Residual metric between two plane-wave combinations: after canonical
/// sorting, the max over matched terms of |delta coeff| + ||delta freq||_inf;
/// an unmatched term contributes its coefficient modulus.
pub fn trig_residual(f: &TrigPoly, g: &TrigPoly) -> f64 {
    // frequencies of matched terms agree to far better than this in practice
    const MATCH_TOL: f64 = 1e-6;
    let mut residual: f64 = 0.0;
    let mut used = vec![false; g.terms().len()];
    for tf in f.terms() {
        let mut best: Option<(usize, f64)> = None;
        for (k, tg) in g.terms().iter().enumerate() {
            if used[k] {
                continue;
            }
            let dist = (&tf.freq - &tg.freq).amax();
            if dist <= MATCH_TOL && best.map_or(true, |(_, d)| dist < d) {
                best = Some((k, dist));
            }
        }
        match best {
            Some((k, dfreq)) => {
                used[k] = true;
                residual = residual.max((tf.coeff - g.terms()[k].coeff).norm() + dfreq);
            }
            None => residual = residual.max(tf.coeff.norm()),
        }
    }
    for (k, tg) in g.terms().iter().enumerate() {
        if !used[k] {
            residual = residual.max(tg.coeff.norm());
        }
    }
    residual
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature;
    use proptest::prelude::*;
    use rand::{Rng as _, SeedableRng as _};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scalar_weight(q: f64) -> GaussianWeight {
        GaussianWeight::new(DMatrix::from_element(1, 1, q)).unwrap()
    }

    fn random_poly(rng: &mut ChaCha8Rng, dim: usize, nterms: usize) -> TrigPoly {
        let terms = (0..nterms)
            .map(|_| {
                (
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    DVector::from_fn(dim, |_, _| rng.gen_range(-2.0..2.0)),
                )
            })
            .collect();
        TrigPoly::new(dim, terms).unwrap()
    }

    #[test]
    fn terms_merge_and_prune() {
        let xi = DVector::from_vec(vec![1.0, 0.0]);
        let poly = TrigPoly::new(
            2,
            vec![
                (c(1.0, 0.0), xi.clone()),
                (c(2.0, 0.0), xi.clone()),
                (c(-3.0, 0.0), xi),
            ],
        )
        .unwrap();
        assert!(poly.is_zero());
    }

    #[test]
    fn ou_apply_identity_at_zero() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 2.0]);
        let q = DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 1.0]));
        let qinf = specmat::solve_lyapunov(&b, &q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_poly(&mut rng, 2, 3);
        let pf = ou_apply(&b, &qinf, 0.0, &f).unwrap();
        assert!(trig_residual(&f, &pf) < 1e-14);
    }

    #[test]
    fn ou_apply_fixes_constants() {
        let b = DMatrix::from_element(1, 1, 1.0);
        let qinf = DMatrix::from_element(1, 1, 1.0);
        let one = TrigPoly::constant(1, c(1.0, 0.0));
        for &t in &[0.0, 0.5, 3.0] {
            let pf = ou_apply(&b, &qinf, t, &one).unwrap();
            assert!(trig_residual(&one, &pf) < 1e-14);
        }
    }

    #[test]
    fn ou_apply_scalar_closed_form_vs_kernel_quadrature() {
        // scalar B = 1, Q = 2 => Qinf = 1; P_t e_{i xi} has coefficient
        // e^{-(1 - e^{-2t})/2} and frequency e^{-t} xi at xi = 1.
        let b = DMatrix::from_element(1, 1, 1.0);
        let qinf = DMatrix::from_element(1, 1, 1.0);
        let t = 0.5;
        let f = TrigPoly::plane_wave(DVector::from_vec(vec![1.0]));
        let pf = ou_apply(&b, &qinf, t, &f).unwrap();
        assert_eq!(pf.terms().len(), 1);
        let expected_coeff = (-(1.0 - (-2.0 * t as f64).exp()) / 2.0).exp();
        assert!((pf.terms()[0].coeff - c(expected_coeff, 0.0)).norm() < 1e-12);
        assert!((pf.terms()[0].freq[0] - (-t as f64).exp()).abs() < 1e-12);

        // kernel-representation oracle: P_t f(x) = E[f(e^{-t}x - Y)], Y ~ N(0, Q_t)
        let qt = specmat::gramian_at(&b, &qinf, t).unwrap();
        for &x in &[-1.3, 0.0, 0.7, 2.1] {
            let xv = DVector::from_vec(vec![x]);
            let oracle = quadrature::gaussian_expectation(&qt, 64, |y| {
                f.eval(&DVector::from_vec(vec![(-t as f64).exp() * x - y[0]]))
            })
            .unwrap();
            assert!((pf.eval(&xv) - oracle).norm() < 1e-6);
        }
    }

    #[test]
    fn ou_apply_rejects_negative_time() {
        let b = DMatrix::from_element(1, 1, 1.0);
        let qinf = DMatrix::from_element(1, 1, 1.0);
        let f = TrigPoly::constant(1, c(1.0, 0.0));
        assert!(ou_apply(&b, &qinf, -0.1, &f).is_err());
    }

    #[test]
    fn multiplier_identity_and_constants() {
        let q = DMatrix::from_element(1, 1, 1.0);
        let f = TrigPoly::plane_wave(DVector::from_vec(vec![1.3]));
        let out = multiplier_apply(&q, &q, &f).unwrap();
        assert!(trig_residual(&f, &out) < 1e-14);
        let one = TrigPoly::constant(1, c(2.0, 1.0));
        let big = DMatrix::from_element(1, 1, 5.0);
        let out = multiplier_apply(&big, &q, &one).unwrap();
        assert!(trig_residual(&one, &out) < 1e-14);
    }

    #[test]
    fn multiplier_scalar_gap_value() {
        // unit gap at xi = 1: factor e^{-1/2}
        let src = DMatrix::from_element(1, 1, 2.0);
        let tgt = DMatrix::from_element(1, 1, 1.0);
        let f = TrigPoly::plane_wave(DVector::from_vec(vec![1.0]));
        let out = multiplier_apply(&src, &tgt, &f).unwrap();
        assert!((out.terms()[0].coeff.re - (-0.5f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn multiplier_rejects_wrong_order() {
        let src = DMatrix::from_element(1, 1, 1.0);
        let tgt = DMatrix::from_element(1, 1, 2.0);
        let f = TrigPoly::plane_wave(DVector::from_vec(vec![1.0]));
        assert!(matches!(
            multiplier_apply(&src, &tgt, &f),
            Err(Error::Ordering(_))
        ));
    }

    #[test]
    fn adjoint_scaled_identity_when_equal() {
        let f = TrigPoly::plane_wave(DVector::from_vec(vec![1.0, -0.5]));
        let out = adjoint_scaled_apply(&[2.0, 3.0], &[2.0, 3.0], &f).unwrap();
        assert!(trig_residual(&f, &out) < 1e-14);
    }

    #[test]
    fn adjoint_scaled_scalar_closed_form() {
        // alpha = 2, delta = 1, xi = 1: factor e^{-1/4}, frequency 1/2
        let f = TrigPoly::plane_wave(DVector::from_vec(vec![1.0]));
        let out = adjoint_scaled_apply(&[2.0], &[1.0], &f).unwrap();
        assert!((out.terms()[0].coeff.re - (-0.25f64).exp()).abs() < 1e-14);
        assert!((out.terms()[0].freq[0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn adjoint_scaled_matches_convolution_oracle() {
        // evaluate (f rho_delta) * rho_{alpha-delta} / rho_alpha pointwise
        let (alpha, delta) = (2.0f64, 1.0f64);
        let f = TrigPoly::plane_wave(DVector::from_vec(vec![1.0]));
        let out = adjoint_scaled_apply(&[alpha], &[delta], &f).unwrap();
        let rho = |v: f64, x: f64| (-x * x / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
        for &x in &[-1.0, 0.3, 1.7] {
            let re = quadrature::adaptive_simpson(
                &|y: f64| (y.cos()) * rho(delta, y) * rho(alpha - delta, x - y),
                -14.0,
                14.0,
                1e-12,
            ) / rho(alpha, x);
            let im = quadrature::adaptive_simpson(
                &|y: f64| (y.sin()) * rho(delta, y) * rho(alpha - delta, x - y),
                -14.0,
                14.0,
                1e-12,
            ) / rho(alpha, x);
            let oracle = c(re, im);
            let val = out.eval(&DVector::from_vec(vec![x]));
            assert!((val - oracle).norm() < 1e-8, "x={x}: {val} vs {oracle}");
        }
    }

    #[test]
    fn adjoint_scaled_rejects_bad_params() {
        let f = TrigPoly::plane_wave(DVector::from_vec(vec![1.0]));
        assert!(adjoint_scaled_apply(&[1.0], &[2.0], &f).is_err());
        assert!(adjoint_scaled_apply(&[1.0], &[0.0], &f).is_err());
    }

    #[test]
    fn inner_product_basics() {
        let w = scalar_weight(1.0);
        let one = TrigPoly::constant(1, c(1.0, 0.0));
        let ip = inner_product(&one, &one, &w).unwrap();
        assert!((ip - c(1.0, 0.0)).norm() < 1e-15);
        let e1 = TrigPoly::plane_wave(DVector::from_vec(vec![1.0]));
        let ip = inner_product(&e1, &e1, &w).unwrap();
        assert!((ip - c(1.0, 0.0)).norm() < 1e-15);
        let ip = inner_product(&e1, &one, &w).unwrap();
        assert!((ip - c((-0.5f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn inner_product_matches_gauss_hermite_oracle() {
        let w = scalar_weight(1.0);
        let e1 = TrigPoly::plane_wave(DVector::from_vec(vec![1.0]));
        let one = TrigPoly::constant(1, c(1.0, 0.0));
        let oracle = quadrature::gaussian_expectation(w.covariance(), 64, |x| {
            e1.eval(x) * one.eval(x).conj()
        })
        .unwrap();
        let exact = inner_product(&e1, &one, &w).unwrap();
        assert!((exact - oracle).norm() < 1e-12);
    }

    #[test]
    fn equilibrium_project_fixed_point_and_single_wave() {
        let w = scalar_weight(1.0);
        let one = TrigPoly::constant(1, c(0.7, -0.1));
        let p = equilibrium_project(&one, &w).unwrap();
        assert!(trig_residual(&one, &p) < 1e-14);
        let e1 = TrigPoly::plane_wave(DVector::from_vec(vec![1.0]));
        let p = equilibrium_project(&e1, &w).unwrap();
        assert!((p.terms()[0].coeff.re - (-0.5f64).exp()).abs() < 1e-14);
        // idempotency on a random combination
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_poly(&mut rng, 1, 4);
        let p1 = equilibrium_project(&f, &w).unwrap();
        let p2 = equilibrium_project(&p1, &w).unwrap();
        assert!(trig_residual(&p1, &p2) < 1e-14);
    }

    #[test]
    fn ou_contraction_and_invariance() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 2.0]);
        let q = DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 1.0]));
        let qinf = specmat::solve_lyapunov(&b, &q).unwrap();
        let w = GaussianWeight::new(qinf.clone()).unwrap();
        let one = TrigPoly::constant(2, c(1.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let f = random_poly(&mut rng, 2, 5);
            let nf = norm(&f, &w).unwrap();
            for &t in &[0.1, 1.0, 10.0] {
                let pf = ou_apply(&b, &qinf, t, &f).unwrap();
                assert!(norm(&pf, &w).unwrap() <= nf + 1e-10);
                // invariant measure: <P_t f, 1> = <f, 1>
                let lhs = inner_product(&pf, &one, &w).unwrap();
                let rhs = inner_product(&f, &one, &w).unwrap();
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn multiplier_norm_contraction() {
        // || Lambda f ||_{target} <= || f ||_{source}, equality on constants
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let src_c = DMatrix::from_row_slice(2, 2, &[3.0, 0.5, 0.5, 2.0]);
        let tgt_c = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.2, 0.8]);
        let wsrc = GaussianWeight::new(src_c.clone()).unwrap();
        let wtgt = GaussianWeight::new(tgt_c.clone()).unwrap();
        for _ in 0..10 {
            let f = random_poly(&mut rng, 2, 4);
            let lf = multiplier_apply(&src_c, &tgt_c, &f).unwrap();
            assert!(norm(&lf, &wtgt).unwrap() <= norm(&f, &wsrc).unwrap() + 1e-10);
        }
        let one = TrigPoly::constant(2, c(1.0, 0.0));
        let lone = multiplier_apply(&src_c, &tgt_c, &one).unwrap();
        assert!((norm(&lone, &wtgt).unwrap() - norm(&one, &wsrc).unwrap()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn semigroup_law_on_trig_polys(seed in 0u64..500, s in 0.0f64..3.0, t in 0.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 2.0]);
            let q = DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 1.0]));
            let qinf = specmat::solve_lyapunov(&b, &q).unwrap();
            let f = random_poly(&mut rng, 2, 3);
            let two_step = ou_apply(&b, &qinf, t, &ou_apply(&b, &qinf, s, &f).unwrap()).unwrap();
            let one_step = ou_apply(&b, &qinf, s + t, &f).unwrap();
            prop_assert!(trig_residual(&two_step, &one_step) < 1e-10);
        }

        #[test]
        fn inner_product_conjugate_symmetric(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = scalar_weight(1.0);
            let f = random_poly(&mut rng, 1, 3);
            let g = random_poly(&mut rng, 1, 3);
            let fg = inner_product(&f, &g, &w).unwrap();
            let gf = inner_product(&g, &f, &w).unwrap();
            prop_assert!((fg - gf.conj()).norm() < 1e-12);
            let ff = inner_product(&f, &f, &w).unwrap();
            prop_assert!(ff.im.abs() < 1e-12 && ff.re >= -1e-12);
        }
    }
}
