//! Hypoelliptic Ornstein-Uhlenbeck models and their convergence analysis:
//! validation of the diagonalizability/positivity/hypoellipticity hypotheses,
//! construction of the alpha/delta sandwich semigroups and intertwiners in
//! the diagonal frame, closed-form verification of the intertwining and
//! composition identities on plane waves, and decay curves checked against
//! the hypocoercive envelope kappa * e^{-gamma_1 t}.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec;
use crate::gaussalg::{
    adjoint_scaled_apply, equilibrium_project, inner_product, multiplier_apply, norm, ou_apply,
    trig_residual, GaussianWeight, TrigPoly,
};
use crate::specmat::{self, EigenStructure};

/// A validated Ornstein-Uhlenbeck model (Q, B) with real positive
/// diagonalizable drift spectrum and hypoelliptic diffusion.
#[derive(Debug, Clone)]
pub struct OuModel {
    q: DMatrix<f64>,
    b: DMatrix<f64>,
    eig: EigenStructure,
    qinf: DMatrix<f64>,
    gap: f64,
    hypoelliptic: bool,
    /// Q expressed in the diagonal frame: V Q V^T.
    qhat: DMatrix<f64>,
    /// Qinf expressed in the diagonal frame: V Qinf V^T.
    qhat_inf: DMatrix<f64>,
    /// Whether B has a repeated eigenvalue (flagged in reports; the sandwich
    /// formulas apply verbatim).
    repeated_eigenvalues: bool,
}

impl OuModel {
    pub fn dim(&self) -> usize {
        self.b.nrows()
    }
    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }
    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }
    pub fn qinf(&self) -> &DMatrix<f64> {
        &self.qinf
    }
    pub fn eig(&self) -> &EigenStructure {
        &self.eig
    }
    /// Spectral gap gamma_1 = min eigenvalue of B.
    pub fn gap(&self) -> f64 {
        self.gap
    }
    pub fn hypoelliptic(&self) -> bool {
        self.hypoelliptic
    }
    /// Diffusion matrix in the diagonal frame, V Q V^T.
    pub fn qhat(&self) -> &DMatrix<f64> {
        &self.qhat
    }
    /// Invariant covariance in the diagonal frame, V Qinf V^T.
    pub fn qhat_inf(&self) -> &DMatrix<f64> {
        &self.qhat_inf
    }
    /// Drift eigenvalues, i.e. the diagonal of the drift in the diagonal frame.
    pub fn b_diag(&self) -> &[f64] {
        &self.eig.eigenvalues
    }
    pub fn repeated_eigenvalues(&self) -> bool {
        self.repeated_eigenvalues
    }
    /// Hypocoercive prefactor kappa(V Qinf V^T).
    pub fn kappa(&self) -> f64 {
        let eigs = self.qhat_inf.symmetric_eigenvalues();
        let max = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    }
}

/// Builds and validates an OU model from (Q, B).
pub fn build_model(q: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<OuModel> {
    specmat::check_symmetric(q, "Q")?;
    specmat::check_square(b, "B")?;
    if q.nrows() != b.nrows() {
        return Err(Error::InvalidInput("B and Q dimensions differ".into()));
    }
    if specmat::min_symmetric_eigenvalue(q) < -specmat::PSD_CLIP {
        return Err(Error::InvalidInput("Q is not positive semi-definite".into()));
    }
    let eig = specmat::eigen_decompose_real_spectrum(b)?;
    let gap = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if gap <= 0.0 {
        return Err(Error::Hypothesis(format!(
            "sigma(B) must lie in (0, infinity); found eigenvalue {gap}"
        )));
    }
    let hypoelliptic = specmat::kalman_hypoelliptic(b, q)?;
    if !hypoelliptic {
        return Err(Error::Hypothesis(
            "ker Q contains an invariant subspace of B^T (Kalman rank test failed)".into(),
        ));
    }
    let qinf = specmat::solve_lyapunov(b, q)?;
    let v = &eig.similarity;
    let qhat = v * q * v.transpose();
    let qhat_inf = v * &qinf * v.transpose();
    let mut sorted = eig.eigenvalues.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let repeated = sorted.windows(2).any(|w| (w[1] - w[0]).abs() < 1e-10);
    Ok(OuModel {
        q: q.clone(),
        b: b.clone(),
        eig,
        qinf,
        gap,
        hypoelliptic,
        qhat: (qhat.clone() + qhat.transpose()) * 0.5,
        qhat_inf: (qhat_inf.clone() + qhat_inf.transpose()) * 0.5,
        repeated_eigenvalues: repeated,
    })
}

/// The alpha/delta sandwich data of an OU model, computed in the diagonal
/// frame where the drift is D_b.
#[derive(Debug, Clone)]
pub struct SandwichData {
    pub alpha: Vec<f64>,
    pub delta: Vec<f64>,
    /// Diffusion matrix of the alpha reference semigroup, D_{2 b alpha}.
    pub qalpha: DMatrix<f64>,
    /// Diffusion matrix of the delta reference semigroup, D_{2 b delta}.
    pub qdelta: DMatrix<f64>,
    /// Invariant covariance D_alpha of the alpha semigroup.
    pub d_alpha: DMatrix<f64>,
    /// Invariant covariance D_delta of the delta semigroup.
    pub d_delta: DMatrix<f64>,
    /// Time shift t* = log(kappa) / gamma_1 at which the composed
    /// intertwiners reproduce the alpha semigroup.
    pub tstar: f64,
    /// kappa(V Qinf V^T).
    pub kappa: f64,
}

/// Constructs the sandwich covariances
/// alpha_i = q_min (q_max/q_min)^{b_i/b_min}, delta_i = q_min,
/// where q_max, q_min are the extreme eigenvalues of V Qinf V^T.
pub fn sandwich_construct(model: &OuModel) -> Result<SandwichData> {
    let qhat_inf = model.qhat_inf();
    let eigs = qhat_inf.symmetric_eigenvalues();
    let q_max = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let q_min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    let b = model.b_diag();
    let b_min = model.gap();
    let kappa = q_max / q_min;

    let alpha: Vec<f64> = b
        .iter()
        .map(|&bi| q_min * (q_max / q_min).powf(bi / b_min))
        .collect();
    let delta = vec![q_min; b.len()];
    let qalpha = DMatrix::from_diagonal(&DVector::from_iterator(
        b.len(),
        b.iter().zip(alpha.iter()).map(|(&bi, &ai)| 2.0 * bi * ai),
    ));
    let qdelta = DMatrix::from_diagonal(&DVector::from_iterator(
        b.len(),
        b.iter().map(|&bi| 2.0 * bi * q_min),
    ));
    let d_alpha = DMatrix::from_diagonal(&DVector::from_vec(alpha.clone()));
    let d_delta = DMatrix::from_diagonal(&DVector::from_vec(delta.clone()));
    let tstar = kappa.ln() / b_min;
    Ok(SandwichData {
        alpha,
        delta,
        qalpha,
        qdelta,
        d_alpha,
        d_delta,
        tstar,
        kappa,
    })
}

fn diag(b: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_vec(b.to_vec()))
}

/// The intertwiner from the alpha reference onto the model:
/// multiplier with Gaussian gap D_alpha - Qinf-hat.
fn lambda_alpha(model: &OuModel, sandwich: &SandwichData, f: &TrigPoly) -> Result<TrigPoly> {
    multiplier_apply(&sandwich.d_alpha, model.qhat_inf(), f)
}

/// The composed map Lambda_{delta,alpha}^* Lambda_delta from the model onto
/// the alpha reference.
fn lambda_chain(model: &OuModel, sandwich: &SandwichData, f: &TrigPoly) -> Result<TrigPoly> {
    let mid = multiplier_apply(model.qhat_inf(), &sandwich.d_delta, f)?;
    adjoint_scaled_apply(&sandwich.alpha, &sandwich.delta, &mid)
}

/// Verifies the intertwining identities
/// P_t Lambda_alpha = Lambda_alpha P^{(alpha)}_t and
/// P^{(alpha)}_t (Lambda^*_{delta,alpha} Lambda_delta) =
/// (Lambda^*_{delta,alpha} Lambda_delta) P_t
/// on the given plane waves, in the diagonal frame.
/// Returns the maximum term residual over both chains and all frequencies.
pub fn verify_intertwinings(
    model: &OuModel,
    sandwich: &SandwichData,
    t: f64,
    xis: &[DVector<f64>],
) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("t must be >= 0, got {t}")));
    }
    let b_d = diag(model.b_diag());
    let mut worst: f64 = 0.0;
    for xi in xis {
        let e = TrigPoly::plane_wave(xi.clone());
        // alpha chain
        let lhs = ou_apply(&b_d, model.qhat_inf(), t, &lambda_alpha(model, sandwich, &e)?)?;
        let rhs = lambda_alpha(
            model,
            sandwich,
            &ou_apply(&b_d, &sandwich.d_alpha, t, &e)?,
        )?;
        worst = worst.max(trig_residual(&lhs, &rhs));
        // delta chain
        let lhs = ou_apply(&b_d, &sandwich.d_alpha, t, &lambda_chain(model, sandwich, &e)?)?;
        let rhs = lambda_chain(model, sandwich, &ou_apply(&b_d, model.qhat_inf(), t, &e)?)?;
        worst = worst.max(trig_residual(&lhs, &rhs));
    }
    Ok(worst)
}

/// Verifies the composition identity
/// Lambda^*_{delta,alpha} Lambda_delta Lambda_alpha = P^{(alpha)}_{t*}
/// on the given plane waves, together with the Gramian identity
/// Q^{(alpha)}_{t*} = D_{(alpha^2 - delta^2)/alpha}.
/// Returns the maximum residual.
pub fn verify_composition(
    model: &OuModel,
    sandwich: &SandwichData,
    xis: &[DVector<f64>],
) -> Result<f64> {
    let b_d = diag(model.b_diag());
    let mut worst: f64 = 0.0;
    for xi in xis {
        let e = TrigPoly::plane_wave(xi.clone());
        let lhs = lambda_chain(model, sandwich, &lambda_alpha(model, sandwich, &e)?)?;
        let rhs = ou_apply(&b_d, &sandwich.d_alpha, sandwich.tstar, &e)?;
        worst = worst.max(trig_residual(&lhs, &rhs));
    }
    // Gramian cross-check
    let q_tstar = specmat::gramian_at(&b_d, &sandwich.d_alpha, sandwich.tstar)?;
    let expected = diag(
        &sandwich
            .alpha
            .iter()
            .zip(sandwich.delta.iter())
            .map(|(&a, &dl)| (a * a - dl * dl) / a)
            .collect::<Vec<_>>(),
    );
    worst = worst.max((q_tstar - expected).norm());
    Ok(worst)
}

/// A sampled decay curve t -> ||P_t f - Pinf f|| / ||f - Pinf f|| with its
/// theoretical envelope C e^{-rate t}.
#[derive(Debug, Clone)]
pub struct DecayCurve {
    pub ts: Vec<f64>,
    pub ratios: Vec<f64>,
    pub envelope_c: f64,
    pub envelope_rate: f64,
}

impl DecayCurve {
    pub fn envelope(&self, t: f64) -> f64 {
        self.envelope_c * (-self.envelope_rate * t).exp()
    }
    /// Smallest margin envelope(t) - ratio(t) over the sampled grid.
    pub fn min_margin(&self) -> f64 {
        self.ts
            .iter()
            .zip(self.ratios.iter())
            .map(|(&t, &r)| self.envelope(t) - r)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Computes the exact decay curve of f under the model semigroup in the
/// weighted L^2 norm of the invariant measure.
pub fn decay_curve(model: &OuModel, f: &TrigPoly, ts: &[f64]) -> Result<DecayCurve> {
    if ts.is_empty() || ts.windows(2).any(|w| w[1] <= w[0]) || ts[0] < 0.0 {
        return Err(Error::InvalidInput(
            "ts must be a nonnegative strictly increasing grid".into(),
        ));
    }
    let weight = GaussianWeight::new(model.qinf().clone())?;
    let mean = equilibrium_project(f, &weight)?;
    let fluct = f.sub(&mean);
    let base = norm(&fluct, &weight)?;
    if base <= 1e-14 {
        return Err(Error::Degenerate(
            "f equals its equilibrium projection; decay ratio undefined".into(),
        ));
    }
    let ratios = exec::map(ts, |&t| {
        let pf = ou_apply(model.b(), model.qinf(), t, &fluct).expect("validated inputs");
        norm(&pf, &weight).expect("validated inputs") / base
    });
    Ok(DecayCurve {
        ts: ts.to_vec(),
        ratios,
        envelope_c: model.kappa(),
        envelope_rate: model.gap(),
    })
}

/// Default test function: the sum of `nterms` random plane waves with
/// frequencies bounded by `max_freq`, drawn reproducibly from `seed`.
pub fn random_test_function(dim: usize, nterms: usize, max_freq: f64, seed: u64) -> TrigPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = (0..nterms)
        .map(|_| {
            (
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                DVector::from_fn(dim, |_, _| rng.gen_range(-max_freq..max_freq)),
            )
        })
        .collect();
    TrigPoly::new(dim, terms).expect("valid random terms")
}

/// Fluctuation inner product <f - Pinf f, f - Pinf f>, exposed for reports.
pub fn fluctuation_norm(model: &OuModel, f: &TrigPoly) -> Result<f64> {
    let weight = GaussianWeight::new(model.qinf().clone())?;
    let mean = equilibrium_project(f, &weight)?;
    norm(&f.sub(&mean), &weight)
}

/// Cross-check used by reports: <P_t f, 1> stays equal to <f, 1>.
pub fn invariance_defect(model: &OuModel, f: &TrigPoly, t: f64) -> Result<f64> {
    let weight = GaussianWeight::new(model.qinf().clone())?;
    let one = TrigPoly::constant(model.dim(), Complex64::new(1.0, 0.0));
    let pf = ou_apply(model.b(), model.qinf(), t, f)?;
    let lhs = inner_product(&pf, &one, &weight)?;
    let rhs = inner_product(f, &one, &weight)?;
    Ok((lhs - rhs).norm())
}
