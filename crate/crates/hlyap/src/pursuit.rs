//! Iterative basis refinement for the trace-minimization relaxation.
//!
//! A single diagonally-dominant relaxation can be far from the true
//! semidefinite optimum: the DD⁺ cone is anchored to the coordinate axes.
//! The refinement loop recenters it. After solving over `K(L_k)` — slacks of
//! the form `L_kᵀ Q L_k` with `Q` diagonally dominant — the optimal slack is
//! factored and the factor becomes `L_{k+1}`, so the previous optimum sits at
//! `Q = I`, deep inside the next cone. Objectives are nonincreasing along the
//! way and every iterate is a verified stability certificate in its own
//! right.
//!
//! Starting points are tried in a fixed order: the identity basis (the plain
//! DD⁺ program), the Perron-scaling basis (feasible whenever the negated
//! system matrix is strictly H⁺), and finally a caller-supplied basis.

use serde::{Deserialize, Serialize};

use crate::cones::{tracemin_cone_weighted, ConeSpec};
use crate::matrix::{
    cholesky_or_ldl, lyapunov_slack, sym_eig_bounds, DenseMatrix, FactorMode, Partition,
};
use crate::scaling::{expand_blocks, perron_scalings_blocks, Certificate, CertificateMethod};
use crate::{Error, Result};

/// Tuning knobs for [`basis_pursuit_tracemin`].
#[derive(Debug, Clone)]
pub struct PursuitOptions {
    /// Strictness margin passed to every cone program.
    pub eta: f64,
    /// Hard cap on refinement iterations.
    pub max_iters: usize,
    /// Basis columns with `|diagonal| ≤ tau · max` are dropped.
    pub tau: f64,
    /// Stop once the relative objective improvement falls below this.
    pub rel_improvement: f64,
    /// Preferred slack factorization; Cholesky falls back to LDL
    /// automatically when the slack is on the cone boundary.
    pub decomp: FactorMode,
    /// Last-resort starting basis when the built-in ladder fails.
    pub initial_basis: Option<DenseMatrix>,
}

impl Default for PursuitOptions {
    fn default() -> Self {
        Self {
            eta: 0.0,
            max_iters: 20,
            tau: 1e-8,
            rel_improvement: 1e-8,
            decomp: FactorMode::Cholesky,
            initial_basis: None,
        }
    }
}

/// One refinement step: the basis it ran with and the optimum it reached.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PursuitIteration {
    pub k: usize,
    pub objective: f64,
    /// Rows of the basis the step optimized over.
    pub basis_rows: usize,
    /// Columns of the slack factor discarded when this basis was formed.
    pub dropped_columns: usize,
    /// Whether the basis came from the LDL fallback rather than Cholesky.
    pub used_ldl: bool,
}

/// Full record of a refinement run: every iteration plus the certificate of
/// the final (best) iterate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisPursuitTrace {
    pub iterations: Vec<PursuitIteration>,
    #[serde(rename = "final")]
    pub final_certificate: Certificate,
}

impl BasisPursuitTrace {
    /// Objective of the last iteration.
    pub fn final_objective(&self) -> f64 {
        self.iterations
            .last()
            .map(|it| it.objective)
            .unwrap_or(f64::NAN)
    }
}

/// Builds the next basis from a lower-triangular slack factor: row `r` of
/// the basis is column `j` of the factor, skipping columns whose diagonal is
/// below `tau` times the largest. Returns `None` when nothing survives (a
/// numerically zero slack).
fn basis_from_factor(f: &DenseMatrix, tau: f64) -> (Option<DenseMatrix>, usize) {
    let n = f.nrows();
    let max_diag = (0..n).map(|j| f.get(j, j).abs()).fold(0.0_f64, f64::max);
    let kept: Vec<usize> = (0..n)
        .filter(|&j| f.get(j, j).abs() > tau * max_diag)
        .collect();
    let dropped = n - kept.len();
    if kept.is_empty() {
        return (None, dropped);
    }
    let mut l = DenseMatrix::zeros(kept.len(), n);
    for (r, &j) in kept.iter().enumerate() {
        for i in 0..n {
            l.set(r, i, f.get(i, j));
        }
    }
    (Some(l), dropped)
}

/// Per-iterate acceptance check: the candidate must be positive definite and
/// the offset-inclusive slack `AX + XAᵀ + Q` must be negative semidefinite
/// up to a scale-relative tolerance.
fn check_iterate(a: &DenseMatrix, x: &DenseMatrix, q: &DenseMatrix, k: usize) -> Result<()> {
    let xe = sym_eig_bounds(&x.symmetrized()?)?;
    if xe.min <= 0.0 {
        return Err(Error::Numerical(format!(
            "iteration {k}: candidate is not positive definite (min eigenvalue {:.3e})",
            xe.min
        )));
    }
    let neg_slack = lyapunov_slack(a, x, Some(q))?.scaled(-1.0); // AX + XAᵀ + Q
    let se = sym_eig_bounds(&neg_slack.symmetrized()?)?;
    let tol = 1e-7 * 1.0_f64.max(a.max_abs());
    if se.max > tol {
        return Err(Error::Numerical(format!(
            "iteration {k}: slack violation {:.3e} exceeds tolerance {:.3e}",
            se.max, tol
        )));
    }
    Ok(())
}

/// Trace minimization with iterative cone refinement.
///
/// Solves the relaxed program over `K(L_0)`, refactors the optimal slack
/// into the next basis, and repeats until the objective stalls, the basis
/// empties, or `max_iters` is reached. The iterate sequence has
/// nonincreasing objectives; the first iteration over the identity basis
/// solves exactly the same LP as [`crate::cones::tracemin_ddp`].
pub fn basis_pursuit_tracemin(
    a: &DenseMatrix,
    alpha: &Partition,
    q: &DenseMatrix,
    opts: &PursuitOptions,
) -> Result<BasisPursuitTrace> {
    a.require_square("basis_pursuit_tracemin")?;
    alpha.require_total(a.nrows())?;
    if opts.max_iters == 0 {
        return Err(Error::Dimension("max_iters must be at least 1".into()));
    }
    let n = a.nrows();

    // Starting-basis ladder.
    let mut rungs: Vec<DenseMatrix> = vec![DenseMatrix::identity(n)];
    if let Ok(pair) = perron_scalings_blocks(a, alpha) {
        let w = expand_blocks(&pair.w, alpha);
        rungs.push(DenseMatrix::from_diag(
            &w.iter().map(|wi| 1.0 / wi).collect::<Vec<_>>(),
        ));
    }
    if let Some(l0) = &opts.initial_basis {
        rungs.push(l0.clone());
    }

    let mut start = None;
    for (rung, l0) in rungs.into_iter().enumerate() {
        let spec = ConeSpec::kofl(l0.clone(), opts.eta);
        match tracemin_cone_weighted(a, alpha, q, &spec, None) {
            Ok((x, objective)) => {
                start = Some((l0, x, objective));
                break;
            }
            Err(Error::Infeasible(_)) => continue,
            // A bad caller-supplied basis is the caller's mistake; the
            // built-in rungs are always well-formed.
            Err(Error::RankDeficientBasis(msg)) if rung == 2 => {
                return Err(Error::RankDeficientBasis(msg))
            }
            Err(e) => return Err(e),
        }
    }
    let Some((mut basis, mut x, mut objective)) = start else {
        return Err(Error::NoInitialPoint(
            "no starting basis admits a feasible relaxation (tried identity, \
             Perron scalings, and any caller-supplied basis)"
                .into(),
        ));
    };

    let mut iterations: Vec<PursuitIteration> = Vec::new();
    let mut dropped = 0usize;
    let mut used_ldl = false;
    loop {
        let k = iterations.len();
        check_iterate(a, &x, q, k)?;
        iterations.push(PursuitIteration {
            k,
            objective,
            basis_rows: basis.nrows(),
            dropped_columns: dropped,
            used_ldl,
        });

        if iterations.len() >= opts.max_iters {
            break;
        }
        if k > 0 {
            let prev = iterations[k - 1].objective;
            if prev - objective < opts.rel_improvement * 1.0_f64.max(prev.abs()) {
                break;
            }
        }

        // Refactor the optimal slack into the next basis.
        let slack = lyapunov_slack(a, &x, Some(q))?.symmetrized()?;
        let (factor, next_used_ldl) = match opts.decomp {
            FactorMode::Cholesky => match cholesky_or_ldl(&slack, FactorMode::Cholesky) {
                Ok(out) => (out.factor, false),
                Err(Error::NotPositiveDefinite { .. }) => {
                    (cholesky_or_ldl(&slack, FactorMode::Ldl)?.factor, true)
                }
                Err(e) => return Err(e),
            },
            FactorMode::Ldl => (cholesky_or_ldl(&slack, FactorMode::Ldl)?.factor, true),
        };
        let (next_basis, next_dropped) = basis_from_factor(&factor, opts.tau);
        let Some(next_basis) = next_basis else {
            break; // slack numerically zero: nothing left to refine
        };

        let spec = ConeSpec::kofl(next_basis.clone(), opts.eta);
        match tracemin_cone_weighted(a, alpha, q, &spec, None) {
            Ok((next_x, next_obj)) => {
                basis = next_basis;
                x = next_x;
                objective = next_obj;
                dropped = next_dropped;
                used_ldl = next_used_ldl;
            }
            // The refined cone can lose feasibility — or the LP its
            // conditioning — right at the convergence boundary; the current
            // iterate stands as the answer.
            Err(Error::Infeasible(_))
            | Err(Error::RankDeficientBasis(_))
            | Err(Error::Numerical(_)) => break,
            Err(e) => return Err(e),
        }
    }

    let final_certificate =
        Certificate::from_candidate(CertificateMethod::BasisPursuit, x, alpha.clone(), a)?;
    Ok(BasisPursuitTrace {
        iterations,
        final_certificate,
    })
}
