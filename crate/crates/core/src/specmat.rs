//! Dense real spectral core: matrix exponentials, algebraic Lyapunov solves,
//! controllability Gramians, the Kalman-type hypoellipticity rank test, and
//! condition numbers. Everything here is sized for small dense problems
//! (d up to ~10) and is a pure function of its inputs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Singular values below `RANK_TOL * sigma_max` count as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Symmetric eigenvalues above `-PSD_CLIP` are clipped to zero when taking
/// matrix square roots; anything more negative is rejected.
pub const PSD_CLIP: f64 = 1e-12;

/// Loewner comparison X > Y holds when the smallest eigenvalue of X - Y
/// exceeds this threshold.
pub const LOEWNER_TOL: f64 = 1e-12;

pub fn check_finite(a: &DMatrix<f64>, name: &str) -> Result<()> {
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("{name} has non-finite entries")));
    }
    Ok(())
}

pub fn check_square(a: &DMatrix<f64>, name: &str) -> Result<()> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::InvalidInput(format!(
            "{name} must be square and non-empty, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    check_finite(a, name)
}

pub fn check_symmetric(a: &DMatrix<f64>, name: &str) -> Result<()> {
    check_square(a, name)?;
    let scale = a.norm().max(1.0);
    if (a - a.transpose()).norm() > 1e-12 * scale {
        return Err(Error::InvalidInput(format!("{name} is not symmetric")));
    }
    Ok(())
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_symmetric_eigenvalue(a: &DMatrix<f64>) -> f64 {
    let sym = (a + a.transpose()) * 0.5;
    sym.symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Loewner test X > Y: min eigenvalue of X - Y above `LOEWNER_TOL`.
pub fn loewner_gt(x: &DMatrix<f64>, y: &DMatrix<f64>) -> bool {
    min_symmetric_eigenvalue(&(x - y)) > LOEWNER_TOL
}

/// Loewner test X >= Y up to the clipping tolerance.
pub fn loewner_ge(x: &DMatrix<f64>, y: &DMatrix<f64>) -> bool {
    min_symmetric_eigenvalue(&(x - y)) >= -PSD_CLIP
}

/// Computes e^{tA} for real square A. `t` may be negative.
pub fn matrix_exponential(a: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    check_square(a, "A")?;
    if !t.is_finite() {
        return Err(Error::InvalidInput("t must be finite".into()));
    }
    Ok((a * t).exp())
}

/// Solves B X + X B^T = Q for X, assuming all eigenvalues of B have positive
/// real part and Q is symmetric PSD. Solved algebraically through the
/// Kronecker vectorization (I (x) B + B (x) I) vec X = vec Q, which is exact
/// for the small dense systems handled here.
pub fn solve_lyapunov(b: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_square(b, "B")?;
    check_symmetric(q, "Q")?;
    let d = b.nrows();
    if q.nrows() != d {
        return Err(Error::InvalidInput("B and Q dimensions differ".into()));
    }
    if min_symmetric_eigenvalue(q) < -PSD_CLIP {
        return Err(Error::InvalidInput("Q is not positive semi-definite".into()));
    }
    let eigs = b.complex_eigenvalues();
    if let Some(bad) = eigs.iter().find(|z| z.re <= 0.0) {
        return Err(Error::Stability(format!(
            "B has eigenvalue {bad} with non-positive real part; sigma(B) must lie in the open right half-plane"
        )));
    }

    // vec(B X) = (I (x) B) vec X, vec(X B^T) = (B (x) I) vec X.
    let eye = DMatrix::<f64>::identity(d, d);
    let big = eye.kronecker(b) + b.kronecker(&eye);
    let rhs = DVector::from_iterator(d * d, q.iter().cloned());
    let lu = big.lu();
    let x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("Lyapunov operator is singular".into()))?;
    let mut sol = DMatrix::from_iterator(d, d, x.iter().cloned());
    // symmetrize away rounding
    sol = (&sol + sol.transpose()) * 0.5;
    Ok(sol)
}

/// Controllability Gramian at time t: Q_t = Qinf - e^{-tB} Qinf e^{-tB^T}.
pub fn gramian_at(b: &DMatrix<f64>, qinf: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    check_square(b, "B")?;
    check_symmetric(qinf, "Qinf")?;
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("t must be >= 0, got {t}")));
    }
    let e = matrix_exponential(b, -t)?;
    let qt = qinf - &e * qinf * e.transpose();
    Ok((&qt + qt.transpose()) * 0.5)
}

/// Symmetric PSD square root. Eigenvalues in [-PSD_CLIP, 0) are clipped to
/// zero; more negative eigenvalues are rejected.
pub fn sqrt_psd(q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_symmetric(q, "Q")?;
    let sym = (q + q.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut vals = eig.eigenvalues.clone();
    for v in vals.iter_mut() {
        if *v < 0.0 {
            if *v < -PSD_CLIP * q.norm().max(1.0) {
                return Err(Error::InvalidInput(format!(
                    "matrix has negative eigenvalue {v}, not PSD"
                )));
            }
            *v = 0.0;
        }
    }
    let sqrt_d = DMatrix::from_diagonal(&vals.map(f64::sqrt));
    Ok(&eig.eigenvectors * sqrt_d * eig.eigenvectors.transpose())
}

/// Numerical rank with threshold `RANK_TOL * sigma_max`.
pub fn numerical_rank(a: &DMatrix<f64>) -> usize {
    let svd = a.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > RANK_TOL * smax)
        .count()
}

/// Kalman-type hypoellipticity test: true iff
/// rank [Q^{1/2}, B Q^{1/2}, ..., B^{d-1} Q^{1/2}] = d,
/// equivalently ker Q contains no invariant subspace of B^T.
pub fn kalman_hypoelliptic(b: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<bool> {
    check_square(b, "B")?;
    let d = b.nrows();
    if q.nrows() != d || q.ncols() != d {
        return Err(Error::InvalidInput("B and Q dimensions differ".into()));
    }
    let qh = sqrt_psd(q)?;
    let mut blocks = DMatrix::<f64>::zeros(d, d * d);
    let mut cur = qh;
    for k in 0..d {
        blocks.view_mut((0, k * d), (d, d)).copy_from(&cur);
        cur = b * cur;
    }
    Ok(numerical_rank(&blocks) == d)
}

/// Condition number kappa(V) = sigma_max / sigma_min.
pub fn condition_number(v: &DMatrix<f64>) -> Result<f64> {
    check_square(v, "V")?;
    let svd = v.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let smin = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if smin <= RANK_TOL * smax || smax == 0.0 {
        return Err(Error::Singular(format!(
            "sigma_min = {smin} below tolerance relative to sigma_max = {smax}"
        )));
    }
    Ok(smax / smin)
}

/// Eigendecomposition of a real matrix with real spectrum:
/// V A V^{-1} = diag(eigenvalues).
#[derive(Debug, Clone)]
pub struct EigenStructure {
    /// Eigenvalues, sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// Similarity matrix V with V A V^{-1} diagonal.
    pub similarity: DMatrix<f64>,
    /// V^{-1}; its columns are unit-norm eigenvectors of A.
    pub inverse_similarity: DMatrix<f64>,
}

/// Diagonalizes a real matrix whose spectrum is real, by clustering the
/// eigenvalues and extracting each eigenspace as an SVD null space.
/// Fails when the eigenvalues are not (numerically) real or the matrix is
/// defective.
pub fn eigen_decompose_real_spectrum(a: &DMatrix<f64>) -> Result<EigenStructure> {
    check_square(a, "A")?;
    let d = a.nrows();
    let scale = a.norm().max(1.0);
    let complex_eigs = a.complex_eigenvalues();
    for z in complex_eigs.iter() {
        if z.im.abs() > 1e-10 * scale {
            return Err(Error::Hypothesis(format!(
                "eigenvalue {z} has non-negligible imaginary part; real spectrum required"
            )));
        }
    }
    let mut vals: Vec<f64> = complex_eigs.iter().map(|z| z.re).collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());

    // cluster numerically equal eigenvalues
    let cluster_tol = 1e-8 * scale;
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for v in &vals {
        match clusters.last_mut() {
            Some((c, n)) if (*v - *c).abs() <= cluster_tol => {
                *c = (*c * *n as f64 + *v) / (*n as f64 + 1.0);
                *n += 1;
            }
            _ => clusters.push((*v, 1)),
        }
    }

    let mut eigenvalues = Vec::with_capacity(d);
    let mut w = DMatrix::<f64>::zeros(d, d); // columns = eigenvectors
    let mut col = 0usize;
    for (lambda, mult) in &clusters {
        let shifted = a - DMatrix::<f64>::identity(d, d) * *lambda;
        let svd = shifted.svd(false, true);
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let vt = svd.v_t.as_ref().unwrap();
        // right singular vectors with near-zero singular value span the eigenspace
        let mut basis: Vec<usize> = (0..d)
            .filter(|&i| svd.singular_values[i] <= (RANK_TOL * smax).max(1e-10 * scale))
            .collect();
        basis.sort_by(|&i, &j| {
            svd.singular_values[i]
                .partial_cmp(&svd.singular_values[j])
                .unwrap()
        });
        if basis.len() < *mult {
            return Err(Error::Hypothesis(format!(
                "matrix is not diagonalizable: eigenvalue {lambda} has multiplicity {mult} but eigenspace dimension {}",
                basis.len()
            )));
        }
        for &i in basis.iter().take(*mult) {
            let vcol = vt.row(i).transpose();
            w.set_column(col, &(&vcol / vcol.norm()));
            eigenvalues.push(*lambda);
            col += 1;
        }
    }

    let w_inv = w
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Hypothesis("eigenvector matrix is singular".into()))?;
    // V A V^{-1} = D with V = W^{-1}
    let similarity = w_inv;
    let inverse_similarity = w;

    let diag = DMatrix::from_diagonal(&DVector::from_vec(eigenvalues.clone()));
    let residual =
        (&inverse_similarity * &diag * &similarity - a).norm() / scale;
    if residual > 1e-8 {
        return Err(Error::Hypothesis(format!(
            "similarity reconstruction residual {residual} too large; matrix treated as non-diagonalizable"
        )));
    }
    Ok(EigenStructure {
        eigenvalues,
        similarity,
        inverse_similarity,
    })
}

/// Complex eigenvalues of a real matrix, as a convenience re-export.
pub fn complex_eigenvalues(a: &DMatrix<f64>) -> Vec<Complex64> {
    a.complex_eigenvalues().iter().cloned().collect()
}
