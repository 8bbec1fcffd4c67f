//! Non-local Jacobi semigroup parameters and multiplier analysis: admissible
//! (gamma_1, mu, h) data, the Bernstein functions phi_i, moments of the
//! invariant beta density, the classical Jacobi spectrum, the composite
//! multiplier F_m, and the hypocoercive constant/threshold check.
//!
//! Everything is one-dimensional per factor; d-dimensional quantities
//! tensorize as products and are never computed multivariately.

use crate::error::{Error, Result};
use crate::exec;
use crate::quadrature;

/// Jump-density specification. The canonical parametric family is
/// h(y) = c * y^{-1-theta} on (1, infinity) with c >= 0, theta > 0, for which
/// every admissibility integral is available in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HSpec {
    pub c: f64,
    pub theta: f64,
}

impl HSpec {
    /// The zero jump density (classical Jacobi factor).
    pub fn zero() -> Self {
        HSpec { c: 0.0, theta: 1.0 }
    }

    pub fn new(c: f64, theta: f64) -> Result<Self> {
        // -(e^y h(e^y))' = c theta e^{-theta y} dy is a nonnegative finite
        // measure exactly when c >= 0 and theta > 0
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::InvalidInput(format!("require c >= 0, got {c}")));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidInput(format!("require theta > 0, got {theta}")));
        }
        Ok(HSpec { c, theta })
    }

    /// Total mass int_1^inf h(y) dy = c / theta.
    pub fn tail_mass(&self) -> f64 {
        self.c / self.theta
    }

    /// int_1^inf y^{-u} h(y) dy = c / (u + theta), in closed form.
    pub fn laplace_tail(&self, u: f64) -> f64 {
        self.c / (u + self.theta)
    }

    /// Same integral by adaptive quadrature (substituting y = e^s); the
    /// fallback path for non-canonical densities and a cross-check oracle.
    pub fn laplace_tail_quadrature(&self, u: f64) -> f64 {
        let c = self.c;
        let theta = self.theta;
        // int_0^inf c e^{-(u + theta) s} ds, truncated where the tail is negligible
        let rate = u + theta;
        let cut = 40.0 / rate.max(0.1);
        quadrature::adaptive_simpson(&|s: f64| c * (-rate * s).exp(), 0.0, cut, 1e-12)
    }
}

/// The Bernstein function of one non-local Jacobi factor:
/// phi(u) = (mu - 1) + u - int_1^inf y^{-u} h(y) dy.
#[derive(Debug, Clone, Copy)]
pub struct BernsteinPhi {
    pub mu: f64,
    pub hspec: HSpec,
}

impl BernsteinPhi {
    pub fn eval(&self, u: f64) -> f64 {
        (self.mu - 1.0) + u - self.hspec.laplace_tail(u)
    }
}

/// Validated parameters (gamma_1, mu, h_1..h_d) of a non-local Jacobi
/// semigroup: gamma_1 > mu_i > 1 + int_1^inf h_i(y) dy per coordinate.
#[derive(Debug, Clone)]
pub struct NonLocalJacobiModel {
    gamma1: f64,
    mu: Vec<f64>,
    hspecs: Vec<HSpec>,
}

impl NonLocalJacobiModel {
    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }
    pub fn hspecs(&self) -> &[HSpec] {
        &self.hspecs
    }
    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn phi(&self, i: usize) -> BernsteinPhi {
        BernsteinPhi {
            mu: self.mu[i],
            hspec: self.hspecs[i],
        }
    }
}

pub fn build_jacobi_model(
    gamma1: f64,
    mu: &[f64],
    hspecs: &[HSpec],
) -> Result<NonLocalJacobiModel> {
    if mu.is_empty() || mu.len() != hspecs.len() {
        return Err(Error::InvalidInput(
            "mu and h specifications must be nonempty and of equal length".into(),
        ));
    }
    if !(gamma1 > 0.0) || !gamma1.is_finite() {
        return Err(Error::InvalidInput(format!("require gamma_1 > 0, got {gamma1}")));
    }
    for (i, (&mu_i, h)) in mu.iter().zip(hspecs.iter()).enumerate() {
        HSpec::new(h.c, h.theta)?;
        let tail = h.tail_mass();
        if !(mu_i > 1.0 + tail) {
            return Err(Error::Hypothesis(format!(
                "coordinate {i}: require mu_i > 1 + int h_i = {}, got mu_i = {mu_i}",
                1.0 + tail
            )));
        }
        if !(gamma1 > mu_i) {
            return Err(Error::Hypothesis(format!(
                "coordinate {i}: require gamma_1 > mu_i, got gamma_1 = {gamma1}, mu_i = {mu_i}"
            )));
        }
    }
    let model = NonLocalJacobiModel {
        gamma1,
        mu: mu.to_vec(),
        hspecs: hspecs.to_vec(),
    };
    // sanity: phi nonnegative and nondecreasing on a sample grid
    for i in 0..model.dim() {
        let phi = model.phi(i);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..20 {
            let u = 2.0 * gamma1 * k as f64 / 19.0;
            let v = phi.eval(u);
            if v < -1e-12 || v + 1e-12 < prev {
                return Err(Error::Hypothesis(format!(
                    "coordinate {i}: phi is not nonnegative nondecreasing at u = {u}"
                )));
            }
            prev = v;
        }
    }
    Ok(model)
}

/// n-th moment of the invariant beta_i density:
/// int_0^1 x^n beta_i(x) dx = prod_{k=1}^n phi_i(k) / (k + gamma_1 - 1).
pub fn beta_moment(model: &NonLocalJacobiModel, i: usize, n: usize) -> f64 {
    let phi = model.phi(i);
    (1..=n)
        .map(|k| phi.eval(k as f64) / (k as f64 + model.gamma1() - 1.0))
        .product()
}

/// Spectrum of the classical Jacobi generator: gamma_n = n(n-1) + gamma_1 n.
pub fn jacobi_eigenvalue(gamma1: f64, n: usize) -> f64 {
    let nf = n as f64;
    nf * (nf - 1.0) + gamma1 * nf
}

fn check_multiplier_param(gamma1: f64, m: f64) -> Result<()> {
    if !(m >= 1.0) || !(m < gamma1) {
        return Err(Error::Hypothesis(format!(
            "multiplier parameter must satisfy max(mu) <= m < gamma_1 (with m >= 1); got m = {m}, gamma_1 = {gamma1}"
        )));
    }
    Ok(())
}

/// Composite multiplier evaluated at the spectral index n:
/// F_m(n) = (1)_n / (m)_n * (gamma_1 - m)_n / (gamma_1 - 1)_n,
/// computed as a running product of per-index ratios.
pub fn f_m_eval(gamma1: f64, m: f64, n: usize) -> Result<f64> {
    check_multiplier_param(gamma1, m)?;
    let mut f = 1.0;
    for k in 0..n {
        let kf = k as f64;
        f *= (1.0 + kf) / (m + kf) * (gamma1 - m + kf) / (gamma1 - 1.0 + kf);
    }
    Ok(f)
}

/// log F_m(n) for n = 0..=nmax as a cumulative sum, for large-n sweeps.
pub fn f_m_log_table(gamma1: f64, m: f64, nmax: usize) -> Result<Vec<f64>> {
    check_multiplier_param(gamma1, m)?;
    let mut table = Vec::with_capacity(nmax + 1);
    let mut acc = 0.0;
    table.push(acc);
    for k in 0..nmax {
        let kf = k as f64;
        acc += ((1.0 + kf) / (m + kf)).ln() + ((gamma1 - m + kf) / (gamma1 - 1.0 + kf)).ln();
        table.push(acc);
    }
    Ok(table)
}

/// Result of the hypocoercive multiplier bound sweep.
#[derive(Debug, Clone)]
pub struct HypoBoundReport {
    /// Envelope constant C = m (gamma_1 - 1) / (gamma_1 - m).
    pub envelope_c: f64,
    /// Time threshold t0 = max(0, log(gamma_1 (m+1) / (2 (gamma_1 - m + 1)))) / gamma_1.
    pub t0: f64,
    /// Rows (t, sup_value, envelope, margin).
    pub rows: Vec<(f64, f64, f64, f64)>,
    /// Worst value of sup - envelope over the grid.
    pub max_violation: f64,
    pub pass: bool,
}

/// Envelope constant of the hypocoercive estimate.
pub fn hypo_envelope_constant(gamma1: f64, m: f64) -> Result<f64> {
    check_multiplier_param(gamma1, m)?;
    Ok(m * (gamma1 - 1.0) / (gamma1 - m))
}

/// Time threshold above which the multiplier bound chain is valid.
pub fn hypo_time_threshold(gamma1: f64, m: f64) -> Result<f64> {
    check_multiplier_param(gamma1, m)?;
    Ok((gamma1 * (m + 1.0) / (2.0 * (gamma1 - m + 1.0))).ln().max(0.0) / gamma1)
}

/// Checks sup_{1 <= n <= N} e^{-gamma_n t} / F_m(n) <= C e^{-gamma_1 t}
/// over the time grid. Grid points must lie at or above the threshold t0.
pub fn hypo_bound_check(
    gamma1: f64,
    m: f64,
    t_grid: &[f64],
    n_max: usize,
) -> Result<HypoBoundReport> {
    if n_max < 100 {
        return Err(Error::InvalidInput(format!(
            "spectral truncation must be >= 100, got {n_max}"
        )));
    }
    let envelope_c = hypo_envelope_constant(gamma1, m)?;
    let t0 = hypo_time_threshold(gamma1, m)?;
    if t_grid.is_empty() {
        return Err(Error::InvalidInput("empty time grid".into()));
    }
    if t_grid.iter().any(|&t| t < t0 - 1e-12) {
        return Err(Error::InvalidInput(format!(
            "time grid must stay above the threshold t0 = {t0}"
        )));
    }
    let log_f = f_m_log_table(gamma1, m, n_max)?;
    let rows: Vec<(f64, f64, f64, f64)> = exec::map(t_grid, |&t| {
        let sup = (1..=n_max)
            .map(|n| (-jacobi_eigenvalue(gamma1, n) * t - log_f[n]).exp())
            .fold(0.0f64, f64::max);
        let envelope = envelope_c * (-gamma1 * t).exp();
        (t, sup, envelope, envelope - sup)
    });
    let max_violation = rows
        .iter()
        .map(|r| r.1 - r.2)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(HypoBoundReport {
        envelope_c,
        t0,
        rows,
        max_violation,
        pass: max_violation <= 1e-10,
    })
}

/// Default time grid [t0, t0 + 5] for the bound sweep.
pub fn default_bound_grid(gamma1: f64, m: f64, points: usize) -> Result<Vec<f64>> {
    let t0 = hypo_time_threshold(gamma1, m)?;
    let n = points.max(2);
    Ok((0..n).map(|k| t0 + 5.0 * k as f64 / (n - 1) as f64).collect())
}

// ---------------------------------------------------------------------------
// classical Jacobi factor: diagonal action on orthogonal polynomials

/// Polynomials in one variable, dense monomial coefficients, low degree.
pub type Poly = Vec<f64>;

/// Moments of the Beta(mu, gamma_1 - mu) density on [0,1]:
/// M_k = prod_{j=0}^{k-1} (mu + j) / (gamma_1 + j).
fn beta_weight_moments(gamma1: f64, mu: f64, up_to: usize) -> Vec<f64> {
    let mut m = Vec::with_capacity(up_to + 1);
    m.push(1.0);
    for j in 0..up_to {
        let jf = j as f64;
        m.push(m[j] * (mu + jf) / (gamma1 + jf));
    }
    m
}

fn poly_inner(p: &[f64], q: &[f64], moments: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            acc += a * b * moments[i + j];
        }
    }
    acc
}

/// Orthogonal polynomial basis of the Beta(mu, gamma_1 - mu) weight, by
/// modified Gram-Schmidt on monomials with closed-form moments. Returns
/// monomial coefficient vectors pi_0 .. pi_deg.
pub fn jacobi_basis(gamma1: f64, mu: f64, deg: usize) -> Result<Vec<Poly>> {
    if !(mu > 0.0) || !(gamma1 - mu > 0.0) {
        return Err(Error::InvalidInput(
            "beta weight requires mu > 0 and gamma_1 - mu > 0".into(),
        ));
    }
    let moments = beta_weight_moments(gamma1, mu, 2 * deg);
    let mut basis: Vec<Poly> = Vec::with_capacity(deg + 1);
    for n in 0..=deg {
        let mut p = vec![0.0; n + 1];
        p[n] = 1.0;
        for _pass in 0..2 {
            // re-orthogonalize once for numerical hygiene at higher degrees
            for q in basis.iter() {
                let coef = poly_inner(&p, q, &moments) / poly_inner(q, q, &moments);
                for (pi, qi) in p.iter_mut().zip(q.iter()) {
                    *pi -= coef * qi;
                }
            }
        }
        basis.push(p);
    }
    Ok(basis)
}

/// Applies the classical Jacobi semigroup factor at time t to a polynomial:
/// expand in the orthogonal basis, scale degree-n coefficient by
/// e^{-gamma_n t}, re-expand.
pub fn classical_jacobi_apply(gamma1: f64, mu: f64, t: f64, p: &[f64]) -> Result<Poly> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("t must be >= 0, got {t}")));
    }
    let deg = p.len().saturating_sub(1);
    if deg > 50 {
        return Err(Error::InvalidInput(format!(
            "degree {deg} exceeds the supported maximum of 50"
        )));
    }
    let basis = jacobi_basis(gamma1, mu, deg)?;
    let moments = beta_weight_moments(gamma1, mu, 2 * deg);
    let mut out = vec![0.0; deg + 1];
    for (n, q) in basis.iter().enumerate() {
        let coef = poly_inner(p, q, &moments) / poly_inner(q, q, &moments);
        let scaled = coef * (-jacobi_eigenvalue(gamma1, n) * t).exp();
        for (oi, qi) in out.iter_mut().zip(q.iter()) {
            *oi += scaled * qi;
        }
    }
    Ok(out)
}

/// Weighted L^2 norm of a polynomial against the Beta(mu, gamma_1 - mu) weight.
pub fn classical_jacobi_norm(gamma1: f64, mu: f64, p: &[f64]) -> Result<f64> {
    if !(mu > 0.0) || !(gamma1 - mu > 0.0) {
        return Err(Error::InvalidInput(
            "beta weight requires mu > 0 and gamma_1 - mu > 0".into(),
        ));
    }
    let deg = p.len().saturating_sub(1);
    let moments = beta_weight_moments(gamma1, mu, 2 * deg);
    Ok(poly_inner(p, p, &moments).max(0.0).sqrt())
}

/// Weighted mean of a polynomial (its projection onto constants).
pub fn classical_jacobi_mean(gamma1: f64, mu: f64, p: &[f64]) -> f64 {
    let moments = beta_weight_moments(gamma1, mu, p.len());
    p.iter().enumerate().map(|(i, &a)| a * moments[i]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model_h0(gamma1: f64, mu: f64) -> NonLocalJacobiModel {
        build_jacobi_model(gamma1, &[mu], &[HSpec::zero()]).unwrap()
    }

    #[test]
    fn phi_linear_when_h_zero() {
        let m = model_h0(3.0, 2.0);
        let phi = m.phi(0);
        for &u in &[0.0, 0.7, 1.0, 2.5] {
            assert!((phi.eval(u) - (1.0 + u)).abs() < 1e-14);
        }
    }

    #[test]
    fn boundary_violation_rejected() {
        // int h = 2 >= mu - 1 = 1
        let h = HSpec::new(2.0, 1.0).unwrap();
        assert!(matches!(
            build_jacobi_model(3.0, &[2.0], &[h]),
            Err(Error::Hypothesis(_))
        ));
        // mu above gamma_1
        assert!(matches!(
            build_jacobi_model(3.0, &[3.5], &[HSpec::zero()]),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn phi_with_canonical_h() {
        let h = HSpec::new(0.5, 1.0).unwrap();
        let m = build_jacobi_model(3.0, &[2.0], &[h]).unwrap();
        let phi = m.phi(0);
        // phi(1) = 1 + 1 - 0.5/2 = 1.75
        assert!((phi.eval(1.0) - 1.75).abs() < 1e-14);
        // quadrature oracle for the tail integral
        for &u in &[0.0, 1.0, 3.0] {
            let exact = h.laplace_tail(u);
            let quad = h.laplace_tail_quadrature(u);
            assert!((exact - quad).abs() < 1e-10);
        }
    }

    #[test]
    fn beta_moments_match_beta_distribution_when_h_zero() {
        // closed-form Beta(mu, gamma_1 - mu) moments: prod (mu+k-1)/(gamma_1+k-1)
        for &(g, mu) in &[(3.0, 2.0), (5.0, 1.5), (4.0, 2.5), (10.0, 3.0), (2.5, 1.2)] {
            let m = model_h0(g, mu);
            assert!((beta_moment(&m, 0, 0) - 1.0).abs() < 1e-15);
            let mut oracle = 1.0;
            for n in 1..=10usize {
                let k = n as f64;
                oracle *= (mu + k - 1.0) / (g + k - 1.0);
                assert!(
                    (beta_moment(&m, 0, n) - oracle).abs() < 1e-12,
                    "gamma1={g}, mu={mu}, n={n}"
                );
            }
        }
        // the h = 0, gamma_1 = 3, mu = 2 first moment is the Beta(2,1) mean
        let m = model_h0(3.0, 2.0);
        assert!((beta_moment(&m, 0, 1) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn moment_monotonicity_and_hankel() {
        let h = HSpec::new(0.4, 2.0).unwrap();
        let m = build_jacobi_model(4.0, &[2.0], &[h]).unwrap();
        let mut prev = 1.0;
        let moments: Vec<f64> = (0..=30).map(|n| beta_moment(&m, 0, n)).collect();
        for &v in &moments {
            assert!(v > 0.0 && v <= prev + 1e-15);
            prev = v;
        }
        // 3x3 Hankel matrices of the moment sequence are PSD
        for s in 0..4 {
            let h3 = nalgebra::DMatrix::from_fn(3, 3, |i, j| moments[s + i + j]);
            let min = crate::specmat::min_symmetric_eigenvalue(&h3);
            assert!(min >= -1e-12, "shift {s}: min eig {min}");
        }
    }

    #[test]
    fn jacobi_spectrum() {
        assert_eq!(jacobi_eigenvalue(3.0, 0), 0.0);
        assert_eq!(jacobi_eigenvalue(3.0, 1), 3.0);
        assert_eq!(jacobi_eigenvalue(3.0, 4), 24.0);
        for n in 0..50 {
            assert!(jacobi_eigenvalue(2.5, n + 1) > jacobi_eigenvalue(2.5, n));
        }
    }

    #[test]
    fn f_m_values() {
        assert!((f_m_eval(3.0, 2.0, 0).unwrap() - 1.0).abs() < 1e-15);
        // m = 1: both Pochhammer ratios cancel
        for n in 0..20 {
            assert!((f_m_eval(3.0, 1.0, n).unwrap() - 1.0).abs() < 1e-13);
        }
        assert!((f_m_eval(3.0, 2.0, 1).unwrap() - 0.25).abs() < 1e-15);
        // in (0,1], nonincreasing
        let mut prev = 1.0;
        for n in 0..200 {
            let v = f_m_eval(5.0, 3.0, n).unwrap();
            assert!(v > 0.0 && v <= prev + 1e-15);
            prev = v;
        }
        assert!(f_m_eval(3.0, 3.5, 1).is_err());
        assert!(f_m_eval(3.0, 0.5, 1).is_err());
    }

    #[test]
    fn f_m_log_table_consistent() {
        let table = f_m_log_table(3.0, 2.0, 50).unwrap();
        for n in (0..=50).step_by(7) {
            let direct = f_m_eval(3.0, 2.0, n).unwrap();
            assert!((table[n].exp() - direct).abs() < 1e-12 * direct.max(1e-30));
        }
    }

    #[test]
    fn hypo_bound_reference_case() {
        // gamma_1 = 3, m = 2: C = 4, t0 = log(9/4)/3
        let c = hypo_envelope_constant(3.0, 2.0).unwrap();
        assert!((c - 4.0).abs() < 1e-14);
        let t0 = hypo_time_threshold(3.0, 2.0).unwrap();
        assert!((t0 - (2.25f64).ln() / 3.0).abs() < 1e-15);
        let grid = default_bound_grid(3.0, 2.0, 60).unwrap();
        let report = hypo_bound_check(3.0, 2.0, &grid, 1000).unwrap();
        assert!(report.pass, "violation {}", report.max_violation);
        // the n = 1 term achieves the envelope: e^{-3t}/F(1) = 4 e^{-3t}
        let f1 = f_m_eval(3.0, 2.0, 1).unwrap();
        assert!((1.0 / f1 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn hypo_bound_m_to_one_limit() {
        // m = 1: C = 1 and F = 1, sup = e^{-gamma_1 t}, exact equality
        let grid = default_bound_grid(3.0, 1.0, 20).unwrap();
        let report = hypo_bound_check(3.0, 1.0, &grid, 200).unwrap();
        assert!((report.envelope_c - 1.0).abs() < 1e-14);
        for (_, sup, env, _) in &report.rows {
            assert!((sup - env).abs() < 1e-12);
        }
    }

    #[test]
    fn hypo_bound_parameter_sweep() {
        for &g in &[2.5, 3.0, 5.0, 10.0] {
            for k in 1..=5 {
                let m = 1.0 + (g - 1.0) * k as f64 / 6.0;
                let grid = default_bound_grid(g, m, 25).unwrap();
                let report = hypo_bound_check(g, m, &grid, 10_000).unwrap();
                assert!(report.pass, "gamma1={g}, m={m}: violation {}", report.max_violation);
            }
        }
    }

    // symbolic oracle: the generator -x(1-x) p'' + (gamma_1 x - mu) p'
    fn generator_apply(gamma1: f64, mu: f64, p: &[f64]) -> Poly {
        let deg = p.len() - 1;
        let mut out = vec![0.0; deg + 1];
        // p'' term: -x(1-x) p'' = (x^2 - x) p''
        for (i, &a) in p.iter().enumerate() {
            if i >= 2 {
                let c2 = a * (i * (i - 1)) as f64;
                out[i] += c2; // x^2 * x^{i-2}
                out[i - 1] -= c2; // -x * x^{i-2}
            }
            if i >= 1 {
                let c1 = a * i as f64;
                out[i] += gamma1 * c1; // gamma_1 x * x^{i-1}
                out[i - 1] -= mu * c1; // -mu * x^{i-1}
            }
        }
        out
    }

    #[test]
    fn classical_semigroup_eigenfunction() {
        // p1(x) = x - mu/gamma_1 satisfies A p1 = gamma_1 p1, so
        // P_t p1 = e^{-gamma_1 t} p1
        let (g, mu) = (3.0, 2.0);
        let p1 = vec![-mu / g, 1.0];
        let ap = generator_apply(g, mu, &p1);
        for (a, e) in ap.iter().zip(p1.iter()) {
            assert!((a - g * e).abs() < 1e-13);
        }
        let t = 0.8;
        let pt = classical_jacobi_apply(g, mu, t, &p1).unwrap();
        for (v, e) in pt.iter().zip(p1.iter()) {
            assert!((v - (-g * t).exp() * e).abs() < 1e-12);
        }
    }

    #[test]
    fn classical_semigroup_trivial_cases() {
        let p = vec![0.3, -1.0, 2.0, 0.5];
        let same = classical_jacobi_apply(3.0, 2.0, 0.0, &p).unwrap();
        for (a, b) in same.iter().zip(p.iter()) {
            assert!((a - b).abs() < 1e-11);
        }
        let one = classical_jacobi_apply(3.0, 2.0, 2.0, &[1.0]).unwrap();
        assert!((one[0] - 1.0).abs() < 1e-13);
        assert!(classical_jacobi_apply(3.0, 2.0, 1.0, &vec![1.0; 60]).is_err());
    }

    #[test]
    fn classical_semigroup_coercive() {
        // mean-zero polynomials decay at least as fast as e^{-gamma_1 t}
        let (g, mu) = (4.0, 1.7);
        let raw = vec![0.0, 1.0, -2.0, 0.7, 0.2];
        let mean = classical_jacobi_mean(g, mu, &raw);
        let mut p = raw.clone();
        p[0] -= mean;
        assert!(classical_jacobi_mean(g, mu, &p).abs() < 1e-14);
        let n0 = classical_jacobi_norm(g, mu, &p).unwrap();
        for &t in &[0.1, 0.5, 1.5] {
            let pt = classical_jacobi_apply(g, mu, t, &p).unwrap();
            let nt = classical_jacobi_norm(g, mu, &pt).unwrap();
            assert!(nt <= (-g * t).exp() * n0 + 1e-10, "t={t}");
        }
    }
}
