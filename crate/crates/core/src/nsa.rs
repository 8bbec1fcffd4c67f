//! Finite-dimensional laboratory for non-self-adjoint resolutions of
//! identity F_Omega = Lambda E_Omega Lambda^dagger, their functional
//! calculus, similarity-orbit convergence with N-uniform envelopes, and the
//! Laguerre-type multiplier bound.
//!
//! Quasi-affinities that are not bijections exist only in infinite
//! dimensions; this sandbox tests (a) bijective Lambda with controlled
//! ill-conditioning and (b) truncation families whose envelope is uniform in
//! the truncation size while the similarity constant diverges. Borel sets are
//! index subsets of the finite spectrum.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Tolerance used to decide whether a spectrum point is zero / whether two
/// spectrum points coincide.
const SPECTRUM_TOL: f64 = 1e-9;

/// Operator (spectral) norm via singular values.
pub fn op_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0f64, |a, &s| a.max(s))
}

/// Condition number sigma_max / sigma_min.
pub fn condition_number(m: &CMat) -> Result<f64> {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().fold(0.0f64, |a, &s| a.max(s));
    let smin = sv.iter().fold(f64::INFINITY, |a, &s| a.min(s));
    if smin <= 1e-300 || smin <= 1e-15 * smax {
        return Err(Error::Singular("matrix numerically singular".into()));
    }
    Ok(smax / smin)
}

fn gauss_sample(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; only used for test-vector factories
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn complex_gauss(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(gauss_sample(rng), gauss_sample(rng))
}

/// Haar-ish random unitary: QR of a complex Ginibre matrix.
pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| complex_gauss(rng));
    g.qr().q()
}

/// Random unit vector (normalized complex Gaussian), per the sampling
/// convention of the convergence checks.
pub fn random_unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> CVec {
    loop {
        let v = CVec::from_fn(dim, |_, _| complex_gauss(rng));
        let n = v.norm();
        if n > 1e-8 {
            return v / Complex64::from(n);
        }
    }
}

/// A normal reference operator given by its spectrum and a unitary
/// eigenframe: A~ = U diag(gamma) U*, with Re gamma_k >= 0 and 0 in the
/// spectrum. Spectral projectors are realized by selecting spectrum indices.
#[derive(Debug, Clone)]
pub struct NormalModel {
    spectrum: Vec<Complex64>,
    frame: CMat,
}

impl NormalModel {
    pub fn with_frame(spectrum: &[Complex64], frame: CMat) -> Result<Self> {
        let dim = spectrum.len();
        if dim == 0 || frame.nrows() != dim || frame.ncols() != dim {
            return Err(Error::InvalidInput("frame/spectrum size mismatch".into()));
        }
        let uu = frame.adjoint() * &frame;
        let eye = CMat::identity(dim, dim);
        if op_norm(&(uu - eye)) > 1e-10 {
            return Err(Error::InvalidInput("frame is not unitary".into()));
        }
        for &g in spectrum {
            if !g.re.is_finite() || !g.im.is_finite() {
                return Err(Error::InvalidInput("non-finite spectrum point".into()));
            }
            if g.re < -SPECTRUM_TOL {
                return Err(Error::InvalidInput(format!(
                    "spectrum point {g} has negative real part"
                )));
            }
        }
        if !spectrum.iter().any(|g| g.norm() <= SPECTRUM_TOL) {
            return Err(Error::InvalidInput("spectrum must contain 0".into()));
        }
        if !spectrum.iter().any(|g| g.re > SPECTRUM_TOL) {
            return Err(Error::InvalidInput(
                "spectrum must contain a point with positive real part".into(),
            ));
        }
        Ok(NormalModel {
            spectrum: spectrum.to_vec(),
            frame,
        })
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }
    pub fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }
    pub fn frame(&self) -> &CMat {
        &self.frame
    }

    /// Spectral gap: min { Re gamma : Re gamma > 0 }.
    pub fn gap(&self) -> f64 {
        self.spectrum
            .iter()
            .filter(|g| g.re > SPECTRUM_TOL)
            .map(|g| g.re)
            .fold(f64::INFINITY, f64::min)
    }

    /// Applies a scalar function of the spectrum: U diag(v) U*.
    pub fn spectral_function(&self, values: &[Complex64]) -> CMat {
        let d = CMat::from_diagonal(&CVec::from_row_slice(values));
        &self.frame * d * self.frame.adjoint()
    }

    pub fn a_tilde(&self) -> CMat {
        self.spectral_function(&self.spectrum)
    }

    /// Spectral projector E_Omega for an index subset.
    pub fn e_omega(&self, omega: &[usize]) -> CMat {
        let mut ind = vec![Complex64::new(0.0, 0.0); self.dim()];
        for &k in omega {
            ind[k] = Complex64::new(1.0, 0.0);
        }
        self.spectral_function(&ind)
    }

    /// Indices of the zero spectrum points.
    pub fn zero_indices(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| self.spectrum[k].norm() <= SPECTRUM_TOL)
            .collect()
    }

    /// Reference semigroup e^{-t A~} = U diag(e^{-gamma t}) U* (exact).
    pub fn semigroup(&self, t: f64) -> CMat {
        let vals: Vec<Complex64> = self.spectrum.iter().map(|&g| (-g * t).exp()).collect();
        self.spectral_function(&vals)
    }

    /// Groups equal spectrum points: (value, member indices).
    pub fn distinct_points(&self) -> Vec<(Complex64, Vec<usize>)> {
        let mut groups: Vec<(Complex64, Vec<usize>)> = Vec::new();
        for (k, &g) in self.spectrum.iter().enumerate() {
            if let Some(entry) = groups.iter_mut().find(|(v, _)| (*v - g).norm() <= SPECTRUM_TOL) {
                entry.1.push(k);
            } else {
                groups.push((g, vec![k]));
            }
        }
        groups
    }
}

/// Reproducible random sandbox: given spectrum, seeded random unitary frame.
pub fn build_sandbox(spectrum: &[Complex64], seed: u64) -> Result<NormalModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_unitary(spectrum.len(), &mut rng);
    NormalModel::with_frame(spectrum, u)
}

/// Moore-Penrose pseudo-inverse via SVD, with a relative singular-value
/// cutoff. Safe for condition numbers well beyond 1e6.
pub fn pseudo_inverse(l: &CMat) -> CMat {
    if l.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        // contract says finite entries; degrade loudly rather than silently
        panic!("pseudo_inverse: non-finite entries");
    }
    let svd = l.clone().svd(true, true);
    let u = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    let cut = smax * 1e-13 * (l.nrows().max(l.ncols()) as f64);
    let r = svd.singular_values.len();
    let mut sinv = CMat::zeros(r, r);
    for i in 0..r {
        let s = svd.singular_values[i];
        if s > cut {
            sinv[(i, i)] = Complex64::new(1.0 / s, 0.0);
        }
    }
    vt.adjoint() * sinv * u.adjoint()
}

/// A non-self-adjoint resolution of identity F_Omega = Lambda E_Omega
/// Lambda^dagger, attached to a normal model and an intertwiner Lambda.
#[derive(Debug, Clone)]
pub struct NsaFamily {
    model: NormalModel,
    lambda: CMat,
    lambda_dagger: CMat,
}

impl NsaFamily {
    /// Verifies the proper condition: Lambda has trivial kernel, or
    /// range(Lambda*) is invariant under every spectral projector.
    pub fn new(model: NormalModel, lambda: CMat) -> Result<Self> {
        if lambda.nrows() != model.dim() || lambda.ncols() != model.dim() {
            return Err(Error::InvalidInput("intertwiner dimension mismatch".into()));
        }
        let svd = lambda.clone().svd(false, true);
        let smax = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
        let cut = smax * 1e-12 * model.dim() as f64;
        let rank = svd.singular_values.iter().filter(|&&s| s > cut).count();
        if rank < model.dim() {
            // projector onto range(Lambda*) = span of leading right singular vectors
            let vt = svd.v_t.as_ref().unwrap();
            let vr = vt.rows(0, rank).adjoint();
            let proj = &vr * vr.adjoint();
            let eye = CMat::identity(model.dim(), model.dim());
            for (_, idx) in model.distinct_points() {
                let e = model.e_omega(&idx);
                let resid = op_norm(&((&eye - &proj) * &e * &proj));
                if resid > 1e-10 {
                    return Err(Error::Properness(format!(
                        "range(Lambda*) not invariant under a spectral projector (residual {resid:.3e})"
                    )));
                }
            }
        }
        let lambda_dagger = pseudo_inverse(&lambda);
        Ok(NsaFamily {
            model,
            lambda,
            lambda_dagger,
        })
    }

    pub fn model(&self) -> &NormalModel {
        &self.model
    }
    pub fn lambda(&self) -> &CMat {
        &self.lambda
    }
    pub fn lambda_dagger(&self) -> &CMat {
        &self.lambda_dagger
    }

    /// F_Omega = Lambda E_Omega Lambda^dagger.
    pub fn projection(&self, omega: &[usize]) -> CMat {
        &self.lambda * self.model.e_omega(omega) * &self.lambda_dagger
    }

    /// Orthogonal projection onto range(Lambda) (equals F over the full
    /// spectrum when Lambda is injective).
    pub fn range_projection(&self) -> CMat {
        &self.lambda * &self.lambda_dagger
    }

    /// Non-self-adjointness of F_Omega, reported as ||F - F*||.
    pub fn asymmetry(&self, omega: &[usize]) -> f64 {
        let f = self.projection(omega);
        op_norm(&(&f - f.adjoint()))
    }
}

/// Lambda m(A~) Lambda^dagger: the functional calculus of the family,
/// equal to the finite sum sum_k m(gamma_k) F_{gamma_k}.
pub fn functional_integral(family: &NsaFamily, m_values: &[Complex64]) -> CMat {
    family.lambda() * family.model().spectral_function(m_values) * family.lambda_dagger()
}

/// Worst scaled residual of the resolution-of-identity axioms
/// (multiplicativity, additivity, F over the full spectrum) on random index
/// subsets. Every identity is a sandwich by Lambda and Lambda^dagger, whose
/// backward error grows like eps * kappa(Lambda); residuals are therefore
/// scaled by the factor sizes and by the conditioning
/// kappa = ||Lambda|| ||Lambda^dagger||, so ill-conditioned families
/// (kappa >= 1e6) are judged against their attainable accuracy.
pub fn family_axiom_residual(family: &NsaFamily, rng: &mut ChaCha8Rng) -> f64 {
    let dim = family.model().dim();
    let kappa = op_norm(&family.lambda) * op_norm(&family.lambda_dagger);
    let mut worst: f64 = 0.0;
    // random index subsets
    let subsets: Vec<Vec<usize>> = (0..6)
        .map(|_| (0..dim).filter(|_| rng.gen::<bool>()).collect())
        .collect();
    for a in &subsets {
        for b in &subsets {
            let fa = family.projection(a);
            let fb = family.projection(b);
            let cap: Vec<usize> = a.iter().copied().filter(|k| b.contains(k)).collect();
            let fcap = family.projection(&cap);
            let scale = (1.0 + op_norm(&fa) * op_norm(&fb)) * (1.0 + kappa);
            worst = worst.max(op_norm(&(&fa * &fb - &fcap)) / scale);
            let cup: Vec<usize> = {
                let mut u = a.clone();
                u.extend(b.iter().copied().filter(|k| !a.contains(k)));
                u
            };
            let setminus: Vec<usize> = b.iter().copied().filter(|k| !a.contains(k)).collect();
            let fcup = family.projection(&cup);
            let fsm = family.projection(&setminus);
            let scale2 = (1.0 + op_norm(&fa) + op_norm(&fsm)) * (1.0 + kappa);
            worst = worst.max(op_norm(&(&fa + &fsm - &fcup)) / scale2);
        }
    }
    let all: Vec<usize> = (0..dim).collect();
    let f_all = family.projection(&all);
    worst = worst.max(op_norm(&(&f_all - family.range_projection())) / (1.0 + kappa));
    worst = worst.max(op_norm(&family.projection(&[])) / (1.0 + kappa));
    worst
}

/// Report of the total-variation bounds on the spectral measure
/// d<F_gamma f, g>.
#[derive(Debug, Clone)]
pub struct VariationReport {
    /// sum_k |<F_{gamma_k} f, g>|.
    pub total_variation: f64,
    /// sum_k |m(gamma_k)| |<F_{gamma_k} f, g>| with m normalized by
    /// ||Lambda|| ||LambdaTilde||.
    pub weighted_variation: f64,
    /// The normalization factor ||Lambda|| ||LambdaTilde|| applied to m.
    pub norm_factor: f64,
    /// ||f|| ||g|| — the normalized-multiplier bound.
    pub bound_normalized: f64,
    /// ||Lambda^dagger f|| ||Lambda|| ||g|| — the raw total-variation bound.
    pub bound_raw: f64,
    pub pass_normalized: bool,
    pub pass_raw: bool,
}

/// Checks both displayed total-variation bounds for a vector pair (f, g)
/// with f in range(Lambda).
pub fn variation_bound_check(
    family: &NsaFamily,
    m_values: &[Complex64],
    f: &CVec,
    g: &CVec,
) -> Result<VariationReport> {
    if m_values.len() != family.model().dim() {
        return Err(Error::InvalidInput("multiplier length mismatch".into()));
    }
    let proj_f = family.range_projection() * f;
    // the projector itself carries eps * kappa(Lambda) of pseudo-inverse
    // noise, so membership is judged relative to the conditioning
    let kappa = op_norm(&family.lambda) * op_norm(&family.lambda_dagger);
    if (&proj_f - f).norm() > 1e-10 * (1.0 + kappa) * f.norm().max(1.0) {
        return Err(Error::Domain("f is not in range(Lambda)".into()));
    }
    // LambdaTilde = m(A~) Lambda^dagger per the two-sided construction
    let lambda_tilde = family.model().spectral_function(m_values) * family.lambda_dagger();
    let norm_factor = op_norm(family.lambda()) * op_norm(&lambda_tilde);
    let mut total_variation = 0.0;
    let mut weighted = 0.0;
    for (value, idx) in family.model().distinct_points() {
        let mass = (family.projection(&idx) * f).dotc(g).norm();
        total_variation += mass;
        // m is constant on the group by construction
        let _ = value;
        let m = m_values[idx[0]];
        weighted += (m / Complex64::from(norm_factor.max(1e-300))).norm() * mass;
    }
    let bound_normalized = f.norm() * g.norm();
    let bound_raw = (family.lambda_dagger() * f).norm() * op_norm(family.lambda()) * g.norm();
    Ok(VariationReport {
        total_variation,
        weighted_variation: weighted,
        norm_factor,
        bound_normalized,
        bound_raw,
        pass_normalized: weighted <= bound_normalized + 1e-10,
        pass_raw: total_variation <= bound_raw + 1e-10,
    })
}

/// A two-sided intertwining pair: P Lambda = Lambda P~ and
/// LambdaTilde P = P~ LambdaTilde with m(A~) = LambdaTilde Lambda.
#[derive(Debug, Clone)]
pub struct IntertwinerPair {
    lambda: CMat,
    lambda_tilde: CMat,
    m_values: Vec<Complex64>,
}

impl IntertwinerPair {
    /// Builds the pair from a given invertible Lambda and multiplier,
    /// setting LambdaTilde = m(A~) Lambda^{-1} and verifying
    /// m(A~) = LambdaTilde Lambda.
    pub fn from_lambda(model: &NormalModel, lambda: CMat, m_values: &[Complex64]) -> Result<Self> {
        if m_values.len() != model.dim() {
            return Err(Error::InvalidInput("multiplier length mismatch".into()));
        }
        let lambda_tilde = model.spectral_function(m_values) * pseudo_inverse(&lambda);
        let pair = IntertwinerPair {
            lambda,
            lambda_tilde,
            m_values: m_values.to_vec(),
        };
        let m_mat = model.spectral_function(m_values);
        let resid = op_norm(&(&pair.lambda_tilde * &pair.lambda - &m_mat));
        let scale = 1.0 + op_norm(&pair.lambda_tilde) * op_norm(&pair.lambda);
        if resid / scale > 1e-10 {
            return Err(Error::Hypothesis(format!(
                "m(A~) = LambdaTilde Lambda fails, scaled residual {:.3e}",
                resid / scale
            )));
        }
        Ok(pair)
    }

    pub fn lambda(&self) -> &CMat {
        &self.lambda
    }
    pub fn lambda_tilde(&self) -> &CMat {
        &self.lambda_tilde
    }
    pub fn m_values(&self) -> &[Complex64] {
        &self.m_values
    }

    /// Target semigroup P_t = Lambda e^{-t A~} Lambda^{-1}.
    pub fn target_semigroup(&self, model: &NormalModel, t: f64) -> CMat {
        &self.lambda * model.semigroup(t) * pseudo_inverse(&self.lambda)
    }

    /// Residual of the intertwining P_t Lambda = Lambda e^{-t A~}.
    pub fn intertwining_residual(&self, model: &NormalModel, t: f64) -> f64 {
        let lhs = self.target_semigroup(model, t) * &self.lambda;
        let rhs = &self.lambda * model.semigroup(t);
        op_norm(&(lhs - rhs)) / (1.0 + op_norm(&self.lambda))
    }

    /// Residual of the commutation m(A~) e^{-t A~} = e^{-t A~} m(A~).
    pub fn commutation_residual(&self, model: &NormalModel, t: f64) -> f64 {
        let m = &self.lambda_tilde * &self.lambda;
        let s = model.semigroup(t);
        op_norm(&(&m * &s - &s * &m)) / (1.0 + op_norm(&m))
    }

    /// Recovers m by diagonalizing LambdaTilde Lambda in the eigenframe.
    pub fn recover_m(&self, model: &NormalModel) -> Vec<Complex64> {
        let m = model.frame().adjoint() * &self.lambda_tilde * &self.lambda * model.frame();
        (0..model.dim()).map(|k| m[(k, k)]).collect()
    }

    pub fn kappa(&self) -> Result<f64> {
        condition_number(&self.lambda)
    }
}

/// Constructs an invertible Lambda with prescribed multiplier: singular
/// structure s_k = max(|m_k|, eps) in the eigenframe, twisted by a fixed
/// deterministic unitary so the target semigroup is genuinely non-normal;
/// LambdaTilde = m(A~) Lambda^{-1}. Requires |m_k| in (0, 1].
pub fn two_sided_construct(
    model: &NormalModel,
    m_values: &[Complex64],
    eps: f64,
) -> Result<IntertwinerPair> {
    if m_values.len() != model.dim() {
        return Err(Error::InvalidInput("multiplier length mismatch".into()));
    }
    if !(eps > 0.0) || eps > 1.0 {
        return Err(Error::InvalidInput(format!(
            "conditioning parameter must lie in (0, 1], got {eps}"
        )));
    }
    for (k, m) in m_values.iter().enumerate() {
        let a = m.norm();
        if a == 0.0 {
            return Err(Error::InvalidInput(format!(
                "m(gamma_{k}) = 0: a strictly invertible construction needs nonzero m"
            )));
        }
        if a > 1.0 + 1e-12 {
            return Err(Error::InvalidInput(format!(
                "|m(gamma_{k})| = {a} exceeds 1"
            )));
        }
    }
    let s: Vec<Complex64> = m_values
        .iter()
        .map(|m| Complex64::from(m.norm().max(eps)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e5);
    let w = random_unitary(model.dim(), &mut rng);
    let lambda = w * model.spectral_function(&s);
    IntertwinerPair::from_lambda(model, lambda, m_values)
}

/// Adjoint setup per the corollary on adjoint semigroups: the pair
/// (LambdaTilde*, conj m) intertwines P* with the conjugated reference model.
pub fn adjoint_setup(model: &NormalModel, pair: &IntertwinerPair) -> Result<(NormalModel, IntertwinerPair)> {
    let conj_spectrum: Vec<Complex64> = model.spectrum().iter().map(|g| g.conj()).collect();
    let adj_model = NormalModel::with_frame(&conj_spectrum, model.frame().clone())?;
    let conj_m: Vec<Complex64> = pair.m_values().iter().map(|m| m.conj()).collect();
    let adj_pair = IntertwinerPair::from_lambda(&adj_model, pair.lambda_tilde().adjoint(), &conj_m)?;
    Ok((adj_model, adj_pair))
}

/// One grid row of the convergence report.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub t: f64,
    /// max over sampled f of ||P_t f - P_inf f|| / ||f - P_inf f||.
    pub max_ratio: f64,
    /// multiplier envelope ||M_t||_inf (normalized m).
    pub envelope_multiplier: f64,
    /// similarity envelope kappa(Lambda) e^{-gamma_1 t}.
    pub envelope_similarity: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub norm_factor: f64,
    pub kappa: f64,
    pub gap: f64,
    /// number of degenerate samples skipped (f with no fluctuation part)
    pub skipped: usize,
    /// ratios within the multiplier envelope everywhere
    pub pass: bool,
    /// grid points where the multiplier envelope beats the similarity one
    pub multiplier_tighter: usize,
}

/// Monte-Carlo check of the hypocoercive estimate
/// ||P_t f - P_inf f|| <= ||M_t||_inf ||f - P_inf f|| with P_inf = F_{{0}},
/// against the similarity bound kappa(Lambda) e^{-gamma_1 t}.
pub fn general_convergence_check(
    model: &NormalModel,
    pair: &IntertwinerPair,
    t_grid: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    if t_grid.is_empty() || n_samples == 0 {
        return Err(Error::InvalidInput("empty grid or sample budget".into()));
    }
    let dim = model.dim();
    let gap = model.gap();
    let kappa = pair.kappa()?;
    let lambda_inv = pseudo_inverse(pair.lambda());
    let p_inf = pair.lambda() * model.e_omega(&model.zero_indices()) * &lambda_inv;
    let norm_factor = op_norm(pair.lambda()) * op_norm(pair.lambda_tilde());
    // samples drawn once, sequentially, so results do not depend on the
    // parallel schedule
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<CVec> = (0..n_samples).map(|_| random_unit_vector(dim, &mut rng)).collect();
    let mut fluct: Vec<(CVec, f64)> = Vec::with_capacity(n_samples);
    let mut skipped = 0usize;
    for f in samples {
        let base = &f - &p_inf * &f;
        let n = base.norm();
        if n <= 1e-12 {
            skipped += 1;
        } else {
            fluct.push((f, n));
        }
    }
    let m_values = pair.m_values();
    let rows: Vec<ConvergenceRow> = exec::map(t_grid, |&t| {
        let p_t = pair.lambda() * model.semigroup(t) * &lambda_inv;
        let mut max_ratio = 0.0f64;
        for (f, base) in &fluct {
            let dev = (&p_t * f - &p_inf * f).norm();
            max_ratio = max_ratio.max(dev / base);
        }
        let envelope_multiplier = model
            .spectrum()
            .iter()
            .zip(m_values.iter())
            .filter(|(g, _)| g.re >= gap - SPECTRUM_TOL)
            .map(|(g, m)| (-g.re * t).exp() / m.norm() * norm_factor)
            .fold(0.0f64, f64::max);
        ConvergenceRow {
            t,
            max_ratio,
            envelope_multiplier,
            envelope_similarity: kappa * (-gap * t).exp(),
        }
    });
    let pass = rows
        .iter()
        .all(|r| r.max_ratio <= r.envelope_multiplier + 1e-10);
    let multiplier_tighter = rows
        .iter()
        .filter(|r| r.envelope_multiplier <= r.envelope_similarity)
        .count();
    Ok(ConvergenceReport {
        rows,
        norm_factor,
        kappa,
        gap,
        skipped,
        pass,
        multiplier_tighter,
    })
}

// ---------------------------------------------------------------------------
// Laguerre-type multiplier sequence

/// log m_n for n = 0..=nmax, where m_n^2 = Gamma(n+1) Gamma(m+1) /
/// Gamma(n+m+1), computed as a cumulative product of ratios.
pub fn laguerre_m_log(m_param: f64, nmax: usize) -> Result<Vec<f64>> {
    if !(m_param >= 0.0) || !m_param.is_finite() {
        return Err(Error::InvalidInput(format!(
            "multiplier parameter must be >= 0, got {m_param}"
        )));
    }
    let mut out = Vec::with_capacity(nmax + 1);
    let mut acc = 0.0;
    out.push(acc);
    for n in 1..=nmax {
        let nf = n as f64;
        acc += 0.5 * (nf / (nf + m_param)).ln();
        out.push(acc);
    }
    Ok(out)
}

pub fn laguerre_m(m_param: f64, n: usize) -> Result<f64> {
    Ok(laguerre_m_log(m_param, n)?[n].exp())
}

#[derive(Debug, Clone)]
pub struct LaguerreReport {
    /// minimal T such that the envelope holds for t >= T (bisection, 1e-9)
    pub t_min: f64,
    /// rows (t, sup_value, envelope, margin)
    pub rows: Vec<(f64, f64, f64, f64)>,
    pub pass: bool,
}

/// Checks sup_{1<=n<=N} (m_n e^{n t})^{-1} <= sqrt(m+1) e^{-t} on the grid
/// and locates the minimal valid T by bisection.
pub fn laguerre_multiplier_bound(
    m_param: f64,
    t_grid: &[f64],
    n_max: usize,
) -> Result<LaguerreReport> {
    if n_max < 1000 {
        return Err(Error::InvalidInput(format!(
            "spectral truncation must be >= 1000, got {n_max}"
        )));
    }
    let log_m = laguerre_m_log(m_param, n_max)?;
    let half_log = 0.5 * (m_param + 1.0).ln();
    // bound at time t <=> max_{n>=2} [-(n-1) t - log m_n] <= half_log;
    // each term is decreasing in t, so the predicate is monotone
    let excess = |t: f64| -> f64 {
        (2..=n_max)
            .map(|n| -((n - 1) as f64) * t - log_m[n])
            .fold(f64::NEG_INFINITY, f64::max)
            - half_log
    };
    let t_min = if excess(0.0) <= 0.0 {
        0.0
    } else {
        let mut hi = 1.0;
        while excess(hi) > 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(Error::InvalidInput("bound threshold search diverged".into()));
            }
        }
        let mut lo = 0.0;
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if excess(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let rows: Vec<(f64, f64, f64, f64)> = exec::map(t_grid, |&t| {
        let sup = (1..=n_max)
            .map(|n| (-(n as f64) * t - log_m[n]).exp())
            .fold(0.0f64, f64::max);
        let envelope = (m_param + 1.0).sqrt() * (-t).exp();
        (t, sup, envelope, envelope - sup)
    });
    let pass = rows
        .iter()
        .filter(|r| r.0 >= t_min - 1e-9)
        .all(|r| r.3 >= -1e-12);
    Ok(LaguerreReport { t_min, rows, pass })
}

/// Laguerre truncation family of size n: spectrum gamma_k = k, multiplier
/// m_k from the Laguerre sequence, seeded random frame.
pub fn laguerre_truncation(m_param: f64, n: usize, seed: u64) -> Result<(NormalModel, IntertwinerPair)> {
    let spectrum: Vec<Complex64> = (0..n).map(|k| Complex64::new(k as f64, 0.0)).collect();
    let model = build_sandbox(&spectrum, seed)?;
    let log_m = laguerre_m_log(m_param, n.saturating_sub(1))?;
    let m_values: Vec<Complex64> = log_m.iter().map(|&lm| Complex64::from(lm.exp())).collect();
    let pair = two_sided_construct(&model, &m_values, 1e-12)?;
    Ok((model, pair))
}
