//! Comparison matrices and the matrix-class predicates built on them:
//! Metzler, H+/H-matrix membership, diagonally dominant with positive
//! diagonal (DD+), scaled diagonal dominance, and the block Gershgorin
//! covering bound.
//!
//! The block comparison matrix of `A` under a partition `α` has
//! `σ_min(A_ii)` on the diagonal and `-‖A_ij‖₂` off it; its spectrum decides
//! every class test in this module.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::matrix::{
    complex_eigenvalues, max_singular_value, min_singular_value, DenseMatrix, Partition,
};
use crate::{lp, Error, Result};

/// Block comparison matrix together with the partition it was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonMatrix {
    entries: DenseMatrix,
    partition: Partition,
}

impl ComparisonMatrix {
    /// Entry matrix over block indices (`k x k` for `k` blocks).
    pub fn entries(&self) -> &DenseMatrix {
        &self.entries
    }

    /// Partition the comparison matrix was derived from.
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Builds a comparison matrix from raw entries, validating the sign
    /// pattern (diagonal ≥ 0, off-diagonal ≤ 0).
    pub fn from_entries(entries: DenseMatrix, partition: Partition) -> Result<Self> {
        entries.require_square("comparison matrix")?;
        if entries.nrows() != partition.block_count() {
            return Err(Error::Partition(format!(
                "comparison matrix of order {} with {} blocks",
                entries.nrows(),
                partition.block_count()
            )));
        }
        for i in 0..entries.nrows() {
            for j in 0..entries.ncols() {
                let v = entries.get(i, j);
                if i == j && v < 0.0 {
                    return Err(Error::Dimension(format!(
                        "comparison matrix diagonal entry ({i},{i}) = {v} is negative"
                    )));
                }
                if i != j && v > 0.0 {
                    return Err(Error::Dimension(format!(
                        "comparison matrix off-diagonal entry ({i},{j}) = {v} is positive"
                    )));
                }
            }
        }
        Ok(Self { entries, partition })
    }

    /// Default eigenvalue tolerance for H-matrix tests on this matrix.
    pub fn default_tol(&self) -> f64 {
        1e-9 * self.entries.max_abs()
    }

    /// Smallest real part over the spectrum of the comparison matrix.
    pub fn min_real_eig(&self) -> Result<f64> {
        let eigs = complex_eigenvalues(&self.entries)?;
        Ok(eigs.iter().map(|l| l.re).fold(f64::INFINITY, f64::min))
    }
}

/// Positive scaling vector certifying scaled diagonal dominance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SddScalings {
    pub d: Vec<f64>,
}

/// Block comparison matrix of `A` under partition `α`:
/// `M_ii = σ_min(A_ii)`, `M_ij = -‖A_ij‖₂` for `i ≠ j`.
pub fn comparison_matrix(a: &DenseMatrix, alpha: &Partition) -> Result<ComparisonMatrix> {
    a.require_square("comparison_matrix")?;
    alpha.require_total(a.nrows())?;
    let k = alpha.block_count();
    let mut m = DenseMatrix::zeros(k, k);
    if alpha.is_scalar() {
        // Scalar partition: norms reduce to absolute values.
        for i in 0..k {
            for j in 0..k {
                let v = a.get(i, j).abs();
                m.set(i, j, if i == j { v } else { -v });
            }
        }
    } else {
        for i in 0..k {
            for j in 0..k {
                let block = alpha.block_of(a, i, j)?;
                if i == j {
                    m.set(i, i, min_singular_value(&block)?);
                } else {
                    m.set(i, j, -max_singular_value(&block)?);
                }
            }
        }
    }
    ComparisonMatrix::from_entries(m, alpha.clone())
}

/// True iff every off-diagonal entry of `A` is nonnegative.
pub fn is_metzler(a: &DenseMatrix) -> Result<bool> {
    a.require_square("is_metzler")?;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if i != j && a.get(i, j) < 0.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn diagonal_blocks_definite(a: &DenseMatrix, cm: &ComparisonMatrix) -> bool {
    let alpha = cm.partition();
    if alpha.is_scalar() {
        // Scalar case: H+ demands strictly positive diagonal entries of A
        // itself (σ_min would erase the sign).
        (0..a.nrows()).all(|i| a.get(i, i) > 0.0)
    } else {
        (0..alpha.block_count()).all(|i| cm.entries().get(i, i) > 0.0)
    }
}

/// Weak H+ membership: `min Re λ(𝓜^α(A)) ≥ -tol` and all diagonal blocks
/// nonsingular (strictly positive diagonal in the scalar case).
///
/// `tol = None` uses `1e-9 · ‖𝓜‖_max`.
pub fn is_h_plus(a: &DenseMatrix, alpha: &Partition, tol: Option<f64>) -> Result<bool> {
    let cm = comparison_matrix(a, alpha)?;
    let tol = tol.unwrap_or_else(|| cm.default_tol());
    Ok(cm.min_real_eig()? >= -tol && diagonal_blocks_definite(a, &cm))
}

/// Strict H+ membership: `min Re λ(𝓜^α(A)) > tol` (nonsingular M-matrix)
/// and the same diagonal-block condition as [`is_h_plus`].
pub fn is_h_plus_strict(a: &DenseMatrix, alpha: &Partition, tol: Option<f64>) -> Result<bool> {
    let cm = comparison_matrix(a, alpha)?;
    let tol = tol.unwrap_or_else(|| cm.default_tol());
    Ok(cm.min_real_eig()? > tol && diagonal_blocks_definite(a, &cm))
}

/// DD+ membership with margin: `a_ii ≥ η + Σ_{j≠i}|a_ij|` and
/// `a_ii ≥ η + Σ_{j≠i}|a_ji|` for every row/column pair.
///
/// `η = 0` tests the closure of the cone; positive `η` the strict interior.
pub fn is_ddp(a: &DenseMatrix, eta: f64) -> Result<bool> {
    a.require_square("is_ddp")?;
    let n = a.nrows();
    for i in 0..n {
        let mut row = 0.0;
        let mut col = 0.0;
        for j in 0..n {
            if j != i {
                row += a.get(i, j).abs();
                col += a.get(j, i).abs();
            }
        }
        let d = a.get(i, i);
        if d < eta + row || d < eta + col {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Inverse iteration for the Perron direction of a nonsingular M-matrix.
///
/// `M⁻¹` of a nonsingular M-matrix is entrywise nonnegative, so power
/// iteration on `M⁻¹` converges to the eigenvector of `λ_min(M)` at rate
/// `λ_min/λ_next` — independent of how close `λ_min` sits to zero, which is
/// where a shifted forward iteration stalls. Returns the vector normalized
/// to unit max-entry together with the `λ_min(M)` estimate. `None` when `M`
/// is singular or the limit fails strict positivity — reducible comparison
/// matrices do that. The iterate is returned even when the fixed-point
/// tolerance is not met: every caller independently re-validates the
/// strict-scaling inequalities, which is the acceptance test that matters.
pub(crate) fn perron_power(m: &DenseMatrix) -> Option<(Vec<f64>, f64)> {
    let n = m.nrows();
    let lu = m.to_na().full_piv_lu();
    let mut x = nalgebra::DVector::from_element(n, 1.0 / n as f64);
    let mut mu = 0.0_f64; // dominant eigenvalue of M⁻¹
    for _ in 0..1_000 {
        let y = lu.solve(&x)?;
        let maxy = y.amax();
        if !maxy.is_finite() || maxy <= 0.0 {
            return None;
        }
        let ynorm = y / maxy;
        let delta = (&ynorm - &x).amax();
        x = ynorm;
        mu = maxy;
        if delta <= 1e-14 {
            break;
        }
    }
    let min = x.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= 1e-9 || mu <= 0.0 {
        return None;
    }
    Some((x.iter().copied().collect(), 1.0 / mu))
}

/// Feasibility-LP fallback for a positive vector with `M v ≥ ε·1`,
/// `ε ≤ v ≤ 1`. Tries a ladder of `ε` values because very ill-conditioned
/// M-matrices admit positive vectors only at tiny margins.
pub(crate) fn positive_vector_lp(m: &DenseMatrix) -> Result<Vec<f64>> {
    let n = m.nrows();
    for eps in [1e-6, 1e-9, 1e-12] {
        let mut p = lp::LpProblem::new(n);
        for j in 0..n {
            p.set_bounds(j, eps, 1.0);
            p.set_objective(j, 1.0);
        }
        for i in 0..n {
            // M v ≥ ε  ⇔  -M v ≤ -ε
            let coeffs: Vec<f64> = (0..n).map(|j| -m.get(i, j)).collect();
            p.add_ub_row(&coeffs, -eps)?;
        }
        let sol = lp::solve_lp(&p, lp::LpOptions::default())?;
        if sol.status == lp::LpStatus::Optimal {
            return Ok(sol.x);
        }
    }
    Err(Error::IrreducibilityFallback(
        "feasibility LP for a positive scaling vector found no point".into(),
    ))
}

/// Positive vector `v` with `M v ≫ 0` for a nonsingular M-matrix `M`:
/// Perron route first, LP fallback second. The caller is responsible for
/// gating on the spectrum of `M`.
pub(crate) fn m_matrix_positive_vector(m: &DenseMatrix) -> Result<Vec<f64>> {
    if let Some((v, _)) = perron_power(m) {
        return Ok(v);
    }
    positive_vector_lp(m)
}

/// Positive scalings `d` with `d_i M_ii > Σ_{j≠i} d_j |M_ij|`, normalized to
/// `Σ d_i = n`. Errors with [`Error::Infeasible`] unless `M` is a
/// nonsingular M-matrix (minimal real eigenvalue above tolerance).
pub fn sdd_scalings(m: &ComparisonMatrix) -> Result<SddScalings> {
    let tol = m.default_tol();
    let min_eig = m.min_real_eig()?;
    if min_eig <= tol {
        return Err(Error::Infeasible(format!(
            "comparison matrix has min real eigenvalue {min_eig:.6e} ≤ {tol:.3e}"
        )));
    }
    let entries = m.entries();
    let n = entries.nrows();
    let mut d = m_matrix_positive_vector(entries)?;
    let dominance_ok = |d: &[f64]| -> bool {
        (0..n).all(|i| {
            let lhs = d[i] * entries.get(i, i);
            let rhs: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| d[j] * entries.get(i, j).abs())
                .sum();
            lhs > rhs
        })
    };
    if !dominance_ok(&d) {
        // Perron vector of a barely-nonsingular M-matrix can miss strictness
        // in floating point; the LP margin route is the robust fallback.
        d = positive_vector_lp(entries)?;
        if !dominance_ok(&d) {
            return Err(Error::Numerical(
                "scaling vector failed strict dominance after LP fallback".into(),
            ));
        }
    }
    let sum: f64 = d.iter().sum();
    let scale = n as f64 / sum;
    Ok(SddScalings {
        d: d.into_iter().map(|v| v * scale).collect(),
    })
}

/// Block Gershgorin covering index for an eigenvalue `λ` of `A`: the first
/// block `i` with `σ_min(λI - A_ii) ≤ Σ_{j≠i} ‖A_ij‖₂ + tol`.
///
/// Every true eigenvalue is covered; failure to find an index indicates a
/// numerical breakdown and is reported as an error.
pub fn gershgorin_cover_check(
    a: &DenseMatrix,
    alpha: &Partition,
    lambda: Complex<f64>,
) -> Result<usize> {
    a.require_square("gershgorin_cover_check")?;
    alpha.require_total(a.nrows())?;
    let cm = comparison_matrix(a, alpha)?;
    let tol = 1e-7 * a.max_abs().max(1.0);
    let offs = alpha.offsets();
    for (i, &k) in alpha.sizes().iter().enumerate() {
        let block = DMatrix::<Complex<f64>>::from_fn(k, k, |r, c| {
            let shift = if r == c { lambda } else { Complex::new(0.0, 0.0) };
            shift - Complex::new(a.get(offs[i] + r, offs[i] + c), 0.0)
        });
        let sigma_min = block
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let radius: f64 = (0..alpha.block_count())
            .filter(|&j| j != i)
            .map(|j| -cm.entries().get(i, j))
            .sum();
        if sigma_min <= radius + tol {
            return Ok(i);
        }
    }
    Err(Error::Numerical(format!(
        "no Gershgorin block covers eigenvalue {lambda}; this violates the covering bound"
    )))
}
