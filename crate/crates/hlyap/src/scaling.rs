//! Explicit diagonal Lyapunov solutions built from Perron scalings.
//!
//! For a matrix `A` whose negation has an M-matrix block comparison (a
//! strict H⁺ negation), the comparison matrix `𝓜(A)` admits strictly
//! positive right and left vectors `v, w` with `𝓜(A)v ≫ 0` and
//! `𝓜(A)ᵀw ≫ 0`. Out of that single eigenpair fall two certificates:
//!
//! * `X = P_v P_w⁻¹` is a block-diagonal solution of the Lyapunov
//!   inequality `AX + XAᵀ ≺ 0`, and the negated slack is itself H⁺;
//! * `Y = P_v P_w` makes the negated slack of the rescaled matrix
//!   `Ã = P_w A P_w⁻¹` diagonally dominant with nonnegative diagonal,
//!   which is exactly the linear (DD⁺) certificate an LP can search for.
//!
//! Here `P_v = diag(v)`, `P_w = diag(w)`, expanded blockwise when the
//! partition is coarser than scalar.

use serde::{Deserialize, Serialize};

use crate::classes::{
    comparison_matrix, is_ddp, is_h_plus, m_matrix_positive_vector, positive_vector_lp,
};
use crate::matrix::{lyapunov_slack, sym_eig_bounds, DenseMatrix, Partition};
use crate::{Error, Result};

/// Positive right/left scaling vectors for the comparison matrix, one
/// component per partition block, together with the dominant eigenvalue
/// `lambda` of `−𝓜(A)` (negative precisely when the comparison matrix is a
/// nonsingular M-matrix).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingPair {
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub lambda: f64,
}

/// Construction that produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMethod {
    /// Ratio of Perron scalings, `X = P_v P_w⁻¹`.
    PerronDiagonal,
    /// Trace-minimizing LP over the DD⁺ cone (possibly after rescaling).
    ScaledLp,
    /// Coupled algebraic Riccati equations for a two-block small-gain split.
    Riccati,
    /// LP over a pursued cone basis.
    BasisPursuit,
}

/// A block-diagonal Lyapunov candidate plus the spectral evidence needed to
/// accept it: the smallest eigenvalue of `X` and the largest eigenvalue of
/// the slack `AX + XAᵀ`. Valid iff the former is positive and the latter
/// negative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub method: CertificateMethod,
    #[serde(rename = "X")]
    pub x: DenseMatrix,
    #[serde(rename = "min_eig_X")]
    pub min_eig_x: f64,
    pub max_eig_slack: f64,
    pub partition: Partition,
}

impl Certificate {
    /// Packages a candidate `x`, computing the spectral evidence against
    /// `a` (callers working in rescaled coordinates pass the rescaled
    /// matrix).
    pub fn from_candidate(
        method: CertificateMethod,
        x: DenseMatrix,
        partition: Partition,
        a: &DenseMatrix,
    ) -> Result<Self> {
        a.require_square("certificate")?;
        partition.require_total(a.nrows())?;
        x.require_same_shape(a, "certificate candidate")?;
        let xe = sym_eig_bounds(&x.symmetrized()?)?;
        let slack = lyapunov_slack(a, &x, None)?; // −(AX + XAᵀ)
        let se = sym_eig_bounds(&slack.scaled(-1.0).symmetrized()?)?;
        Ok(Self {
            method,
            x,
            min_eig_x: xe.min,
            max_eig_slack: se.max,
            partition,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.min_eig_x > 0.0 && self.max_eig_slack < 0.0
    }
}

/// Independent re-examination of a [`Certificate`] against the system
/// matrix it claims to certify.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidityReport {
    /// All checks below passed.
    pub valid: bool,
    /// Smallest eigenvalue of the symmetrized candidate, recomputed.
    pub min_eig_x: f64,
    /// Largest eigenvalue of `AX + XAᵀ`, recomputed.
    pub max_eig_slack: f64,
    /// Every entry outside the block diagonal is exactly zero.
    pub alpha_diagonal_ok: bool,
    /// The candidate is symmetric within floating-point tolerance.
    pub symmetric_ok: bool,
}

/// Expands per-block weights to per-coordinate weights.
pub(crate) fn expand_blocks(values: &[f64], alpha: &Partition) -> Vec<f64> {
    let mut out = Vec::with_capacity(alpha.total());
    for (b, &k) in alpha.sizes().iter().enumerate() {
        out.extend(std::iter::repeat(values[b]).take(k));
    }
    out
}

fn max_normalize(v: &mut [f64]) {
    let max = v.iter().copied().fold(0.0_f64, f64::max);
    if max > 0.0 {
        for x in v.iter_mut() {
            *x /= max;
        }
    }
}

/// Positive vector for `M` verified to satisfy `Mv ≫ 0`; eigenvector route
/// first, feasibility LP second.
fn verified_positive_vector(m: &DenseMatrix) -> Result<Vec<f64>> {
    let strictly_scaled = |v: &[f64]| -> bool {
        let n = m.nrows();
        (0..n).all(|i| (0..n).map(|j| m.get(i, j) * v[j]).sum::<f64>() > 0.0)
            && v.iter().all(|&x| x > 0.0)
    };
    let v = m_matrix_positive_vector(m)?;
    if strictly_scaled(&v) {
        return Ok(v);
    }
    let v = positive_vector_lp(m)?;
    if strictly_scaled(&v) {
        return Ok(v);
    }
    Err(Error::IrreducibilityFallback(
        "no strictly positive vector with M v ≫ 0 was found".into(),
    ))
}

/// Right and left positive scalings of the block comparison matrix under
/// the given partition.
///
/// Requires the negation of `a` to be strictly H⁺: every diagonal block
/// definite in the comparison sense and `min Re λ(𝓜(A))` above tolerance.
pub fn perron_scalings_blocks(a: &DenseMatrix, alpha: &Partition) -> Result<ScalingPair> {
    let cm = comparison_matrix(a, alpha)?;
    let min_re = cm.min_real_eig()?;
    if min_re <= cm.default_tol() {
        return Err(Error::NotHPlus(format!(
            "comparison matrix has minimal real eigenvalue {min_re:.3e}, \
             not above tolerance {:.3e}",
            cm.default_tol()
        )));
    }
    let m = cm.entries();
    let mut v = verified_positive_vector(m)?;
    let mut w = verified_positive_vector(&m.transpose())?;
    max_normalize(&mut v);
    max_normalize(&mut w);
    Ok(ScalingPair {
        v,
        w,
        lambda: -min_re,
    })
}

/// Scalar-partition Perron scalings: one weight per coordinate.
pub fn perron_scalings(a: &DenseMatrix) -> Result<ScalingPair> {
    perron_scalings_blocks(a, &Partition::scalar(a.nrows())?)
}

fn diag_lyapunov_impl(a: &DenseMatrix, alpha: &Partition) -> Result<Certificate> {
    let pair = perron_scalings_blocks(a, alpha)?;
    let ratios: Vec<f64> = pair
        .v
        .iter()
        .zip(&pair.w)
        .map(|(vi, wi)| vi / wi)
        .collect();
    let x = DenseMatrix::from_diag(&expand_blocks(&ratios, alpha));
    let cert = Certificate::from_candidate(CertificateMethod::PerronDiagonal, x, alpha.clone(), a)?;
    // The negated slack must itself be H⁺ — stronger than mere negative
    // definiteness, and part of what this construction guarantees.
    let neg_slack = lyapunov_slack(a, &cert.x, None)?;
    if !is_h_plus(&neg_slack, alpha, None)? {
        return Err(Error::Numerical(
            "negated Lyapunov slack of the Perron-diagonal candidate lost its H⁺ structure"
                .into(),
        ));
    }
    Ok(cert)
}

/// Diagonal Lyapunov solution `X = P_v P_w⁻¹` with `AX + XAᵀ ≺ 0`;
/// additionally guarantees the negated slack is H⁺.
pub fn diag_lyapunov(a: &DenseMatrix) -> Result<Certificate> {
    diag_lyapunov_impl(a, &Partition::scalar(a.nrows())?)
}

/// Block-diagonal variant of [`diag_lyapunov`]: `X` is constant on each
/// partition block.
pub fn diag_lyapunov_blocks(a: &DenseMatrix, alpha: &Partition) -> Result<Certificate> {
    diag_lyapunov_impl(a, alpha)
}

/// Diagonal rescaling under which the Lyapunov slack becomes diagonally
/// dominant. Returns the transform `P_w` and a certificate for
/// `Y = P_v P_w` stated in the rescaled coordinates `Ã = P_w A P_w⁻¹`.
pub fn scaled_dd_certificate(a: &DenseMatrix) -> Result<(DenseMatrix, Certificate)> {
    scaled_dd_certificate_blocks(a, &Partition::scalar(a.nrows())?)
}

/// Blockwise variant of [`scaled_dd_certificate`].
pub fn scaled_dd_certificate_blocks(
    a: &DenseMatrix,
    alpha: &Partition,
) -> Result<(DenseMatrix, Certificate)> {
    let pair = perron_scalings_blocks(a, alpha)?;
    let w_coords = expand_blocks(&pair.w, alpha);
    let p_w = DenseMatrix::from_diag(&w_coords);
    let a_tilde = rescale_similarity(a, &w_coords);
    let products: Vec<f64> = pair
        .v
        .iter()
        .zip(&pair.w)
        .map(|(vi, wi)| vi * wi)
        .collect();
    let y = DenseMatrix::from_diag(&expand_blocks(&products, alpha));
    let cert =
        Certificate::from_candidate(CertificateMethod::PerronDiagonal, y, alpha.clone(), &a_tilde)?;
    let neg_slack = lyapunov_slack(&a_tilde, &cert.x, None)?;
    if !is_ddp(&neg_slack, 0.0)? {
        return Err(Error::Numerical(
            "rescaled Lyapunov slack failed its diagonal-dominance guarantee".into(),
        ));
    }
    Ok((p_w, cert))
}

/// Computes `diag(w) · A · diag(w)⁻¹`.
pub(crate) fn rescale_similarity(a: &DenseMatrix, w: &[f64]) -> DenseMatrix {
    let n = a.nrows();
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, a.get(i, j) * w[i] / w[j]);
        }
    }
    out
}

/// Recomputes a certificate's spectral evidence and structural claims from
/// scratch. Failures are carried in the report, not raised as errors.
pub fn verify_certificate(
    a: &DenseMatrix,
    cert: &Certificate,
    alpha: &Partition,
) -> Result<ValidityReport> {
    a.require_square("verify_certificate")?;
    alpha.require_total(a.nrows())?;
    cert.x.require_same_shape(a, "verify_certificate")?;

    let x = &cert.x;
    let symmetric_ok = x.asymmetry()? <= 1e-9 * 1.0_f64.max(x.max_abs());
    let alpha_diagonal_ok = alpha_off_block_zero(x, alpha);

    let xe = sym_eig_bounds(&x.symmetrized()?)?;
    let slack = lyapunov_slack(a, x, None)?.scaled(-1.0); // AX + XAᵀ
    let se = sym_eig_bounds(&slack.symmetrized()?)?;

    Ok(ValidityReport {
        valid: xe.min > 0.0 && se.max < 0.0 && alpha_diagonal_ok && symmetric_ok,
        min_eig_x: xe.min,
        max_eig_slack: se.max,
        alpha_diagonal_ok,
        symmetric_ok,
    })
}

/// True when every entry of `x` outside the block diagonal of `alpha` is
/// exactly zero.
pub(crate) fn alpha_off_block_zero(x: &DenseMatrix, alpha: &Partition) -> bool {
    let offsets = alpha.offsets();
    let sizes = alpha.sizes();
    let block_of = |i: usize| -> usize {
        // offsets are sorted; linear scan is fine at these sizes
        let mut b = 0;
        while b + 1 < offsets.len() && i >= offsets[b + 1] {
            b += 1;
        }
        b
    };
    let _ = sizes;
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            if block_of(i) != block_of(j) && x.get(i, j) != 0.0 {
                return false;
            }
        }
    }
    true
}
