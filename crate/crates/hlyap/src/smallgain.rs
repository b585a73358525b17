//! Block-diagonal Lyapunov certificates from small-gain Riccati equations.
//!
//! For a two-block partition of a Hurwitz matrix, the off-diagonal coupling
//! defines a feedback loop between the transfer functions
//! `K₁(s) = −(sI − A₁₁)⁻¹A₁₂` and `K₂(s) = (sI − A₂₂)⁻¹A₂₁`. When the loop
//! gain `‖K₁‖∞·‖K₂‖∞` is below one, a pair of quadratic matrix equations
//! produces positive definite blocks `X₁, X₂` whose direct sum solves the
//! Lyapunov inequality `AX + XAᵀ ≺ 0`. This module also exposes the H∞ norm
//! computation (Hamiltonian bisection), the underlying stabilizing Riccati
//! solver, and a sufficient stability test that feeds comparison-matrix
//! scalings into the same construction.

use nalgebra as na;
use serde::{Deserialize, Serialize};

use crate::classes::{comparison_matrix, sdd_scalings};
use crate::matrix::{
    complex_eigenvalues, lyapunov_slack, max_singular_value, min_singular_value,
    spectral_abscissa, sym_eig_bounds, DenseMatrix, Partition,
};
use crate::scaling::{Certificate, CertificateMethod};
use crate::schur::ordered_schur_stable_first;
use crate::{Error, Result};

/// A linear time-invariant system `ẋ = Ax + Bu`, `y = Cx + Du`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpace {
    #[serde(rename = "A")]
    pub a: DenseMatrix,
    #[serde(rename = "B")]
    pub b: DenseMatrix,
    #[serde(rename = "C")]
    pub c: DenseMatrix,
    #[serde(rename = "D")]
    pub d: DenseMatrix,
}

impl StateSpace {
    pub fn new(a: DenseMatrix, b: DenseMatrix, c: DenseMatrix, d: DenseMatrix) -> Result<Self> {
        a.require_square("state matrix")?;
        let n = a.nrows();
        if b.nrows() != n {
            return Err(Error::Dimension(format!(
                "input matrix has {} rows, state dimension is {n}",
                b.nrows()
            )));
        }
        if c.ncols() != n {
            return Err(Error::Dimension(format!(
                "output matrix has {} columns, state dimension is {n}",
                c.ncols()
            )));
        }
        if d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return Err(Error::Dimension(format!(
                "feedthrough is {}x{}, expected {}x{}",
                d.nrows(),
                d.ncols(),
                c.nrows(),
                b.ncols()
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// System with zero feedthrough (`D = 0`).
    pub fn strictly_proper(a: DenseMatrix, b: DenseMatrix, c: DenseMatrix) -> Result<Self> {
        let d = DenseMatrix::zeros(c.nrows(), b.ncols());
        Self::new(a, b, c, d)
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }
}

/// Largest singular value of the frequency response `C(jωI − A)⁻¹B + D`.
fn frequency_gain(sys: &StateSpace, omega: f64) -> Result<f64> {
    type CMat = na::DMatrix<na::Complex<f64>>;
    let n = sys.order();
    let to_c = |m: &DenseMatrix| -> CMat {
        CMat::from_fn(m.nrows(), m.ncols(), |i, j| {
            na::Complex::new(m.get(i, j), 0.0)
        })
    };
    let mut m = to_c(&sys.a).scale(-1.0);
    for i in 0..n {
        m[(i, i)] += na::Complex::new(0.0, omega);
    }
    let x = m.lu().solve(&to_c(&sys.b)).ok_or_else(|| {
        Error::Numerical(format!("resolvent is singular at frequency {omega:.6e}"))
    })?;
    let g = to_c(&sys.c) * x + to_c(&sys.d);
    let sv = g.svd(false, false).singular_values;
    Ok(sv.iter().fold(0.0_f64, |acc, s| acc.max(*s)))
}

/// Whether the level-γ Hamiltonian of the system has eigenvalues on the
/// imaginary axis — the exact test for `γ ≤ ‖G‖∞` when `A` is Hurwitz and
/// `γ > σ_max(D)`.
fn hamiltonian_on_axis(sys: &StateSpace, gamma: f64) -> Result<bool> {
    let n = sys.order();
    let bt = sys.b.transpose();
    let ct = sys.c.transpose();
    let mut h = DenseMatrix::zeros(2 * n, 2 * n);
    if sys.d.max_abs() == 0.0 {
        // [[A, BBᵀ/γ], [−CᵀC/γ, −Aᵀ]]
        h.set_block(0, 0, &sys.a)?;
        h.set_block(0, n, &sys.b.matmul(&bt)?.scaled(1.0 / gamma))?;
        h.set_block(n, 0, &ct.matmul(&sys.c)?.scaled(-1.0 / gamma))?;
        h.set_block(n, n, &sys.a.transpose().scaled(-1.0))?;
    } else {
        // General feedthrough: R = γ²I − DᵀD must be positive definite.
        let m = sys.d.ncols();
        let dt = sys.d.transpose();
        let mut r = dt.matmul(&sys.d)?.scaled(-1.0);
        for i in 0..m {
            r.set(i, i, r.get(i, i) + gamma * gamma);
        }
        let r_na = r.to_na();
        let Some(r_inv) = r_na.clone().try_inverse() else {
            return Ok(true); // γ ≤ σ_max(D): below the norm by definition
        };
        if sym_eig_bounds(&r)?.min <= 0.0 {
            return Ok(true);
        }
        let r_inv = DenseMatrix::from_na(&r_inv);
        let a_hat = sys
            .a
            .add(&sys.b.matmul(&r_inv)?.matmul(&dt)?.matmul(&sys.c)?)?;
        let g_blk = sys.b.matmul(&r_inv)?.matmul(&bt)?;
        let mut inner = sys.d.matmul(&r_inv)?.matmul(&dt)?;
        for i in 0..inner.nrows() {
            inner.set(i, i, inner.get(i, i) + 1.0);
        }
        let q_blk = ct.matmul(&inner)?.matmul(&sys.c)?.scaled(-1.0);
        h.set_block(0, 0, &a_hat)?;
        h.set_block(0, n, &g_blk)?;
        h.set_block(n, 0, &q_blk)?;
        h.set_block(n, n, &a_hat.transpose().scaled(-1.0))?;
    }
    let axis_tol = 1e-9 * 1.0_f64.max(h.max_abs());
    let eigs = complex_eigenvalues(&h)?;
    Ok(eigs.iter().any(|l| l.re.abs() <= axis_tol))
}

/// H∞ norm of the transfer function `G(s) = C(sI − A)⁻¹B + D`, computed by
/// bisection on the imaginary-axis eigenvalue test of the associated
/// Hamiltonian. The result `γ*` satisfies `|γ* − ‖G‖∞| ≤ tol·max(1, γ*)`.
///
/// Requires `A` Hurwitz ([`Error::NotHurwitz`] otherwise).
pub fn hinf_norm(sys: &StateSpace, tol: f64) -> Result<f64> {
    let abscissa = spectral_abscissa(&sys.a)?;
    if abscissa >= 0.0 {
        return Err(Error::NotHurwitz(format!(
            "state matrix has spectral abscissa {abscissa:.6e}"
        )));
    }
    let tol = tol.max(1e-12);
    let d_gain = if sys.d.max_abs() == 0.0 {
        0.0
    } else {
        max_singular_value(&sys.d)?
    };
    if sys.b.max_abs() == 0.0 || sys.c.max_abs() == 0.0 {
        return Ok(d_gain); // transfer function is the constant D
    }

    // Certified lower bound: the gain attained on a frequency sample set
    // (DC, resonances of A, and a log-spaced sweep).
    let eigs = complex_eigenvalues(&sys.a)?;
    let scale = eigs
        .iter()
        .map(|l| l.norm())
        .fold(1.0_f64, f64::max);
    let mut omegas = vec![0.0];
    for l in &eigs {
        if l.im.abs() > 1e-12 * scale {
            omegas.push(l.im.abs());
        }
    }
    for k in 0..=24 {
        omegas.push(scale * 10f64.powf(-3.0 + 6.0 * k as f64 / 24.0));
    }
    let mut lo = d_gain;
    for w in &omegas {
        lo = lo.max(frequency_gain(sys, *w)?);
    }

    // Upper bound by doubling until the Hamiltonian clears the axis.
    let mut hi = (2.0 * lo).max(1e-8);
    let mut doublings = 0;
    while hamiltonian_on_axis(sys, hi)? {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Numerical(
                "H-infinity upper bound search failed to terminate".into(),
            ));
        }
    }
    let mut iters = 0;
    while hi - lo > tol * 1.0_f64.max(hi) {
        let mid = 0.5 * (lo + hi);
        if hamiltonian_on_axis(sys, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
        if iters > 400 {
            return Err(Error::Numerical(
                "H-infinity bisection failed to converge".into(),
            ));
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Stabilizing solution of `AX + XAᵀ + gX² + W = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiccatiSolution {
    /// Symmetric solution with `A + gX` Hurwitz.
    #[serde(rename = "X")]
    pub x: DenseMatrix,
    /// Frobenius norm of `AX + XAᵀ + gX² + W` at the returned solution.
    pub residual: f64,
    /// Spectral abscissa of `A + gX` (always negative).
    pub closed_loop_abscissa: f64,
    /// The solution has a (numerically) nontrivial kernel — expected when
    /// `W = 0`, where `X = 0` solves the equation.
    pub degenerate_kernel: bool,
}

/// Solves `AX + XAᵀ + gX² + W = 0` for the symmetric `X` making `A + gX`
/// Hurwitz, via the stable invariant subspace of the Hamiltonian
/// `M = [[Aᵀ, gI], [−W, −A]]`.
///
/// `W` must be symmetric positive semidefinite and `g > 0`. When `M` has
/// eigenvalues on the imaginary axis no stabilizing solution exists and
/// [`Error::ImaginaryAxisEigenvalues`] is returned.
pub fn riccati_stabilizing(a: &DenseMatrix, g: f64, w: &DenseMatrix) -> Result<RiccatiSolution> {
    a.require_square("riccati_stabilizing")?;
    w.require_same_shape(a, "riccati_stabilizing")?;
    w.require_symmetric("quadratic equation constant term")?;
    if !(g > 0.0) {
        return Err(Error::Numerical(format!(
            "quadratic coefficient must be positive, got {g}"
        )));
    }
    let n = a.nrows();
    let w_eigs = sym_eig_bounds(w)?;
    if w_eigs.min < -1e-9 * 1.0_f64.max(w.max_abs()) {
        return Err(Error::Numerical(format!(
            "constant term must be positive semidefinite (min eigenvalue {:.6e})",
            w_eigs.min
        )));
    }

    let mut m = DenseMatrix::zeros(2 * n, 2 * n);
    m.set_block(0, 0, &a.transpose())?;
    m.set_block(0, n, &DenseMatrix::identity(n).scaled(g))?;
    m.set_block(n, 0, &w.scaled(-1.0))?;
    m.set_block(n, n, &a.scaled(-1.0))?;

    let axis_tol = 1e-9 * 1.0_f64.max(m.max_abs());
    let min_abs_re = complex_eigenvalues(&m)?
        .iter()
        .map(|l| l.re.abs())
        .fold(f64::INFINITY, f64::min);
    if min_abs_re <= axis_tol {
        return Err(Error::ImaginaryAxisEigenvalues { min_abs_re });
    }

    let os = ordered_schur_stable_first(&m)?;
    if os.stable_count != n {
        return Err(Error::Numerical(format!(
            "Hamiltonian stable subspace has dimension {} instead of {n}",
            os.stable_count
        )));
    }
    let u1 = os.u.block(0, 0, n, n)?;
    let u2 = os.u.block(n, 0, n, n)?;
    // X·U₁ = U₂  ⟺  U₁ᵀ·Xᵀ = U₂ᵀ
    let xt = u1
        .transpose()
        .to_na()
        .lu()
        .solve(&u2.transpose().to_na())
        .ok_or_else(|| {
            Error::Numerical("stable subspace has no symmetric graph representation".into())
        })?;
    let x = DenseMatrix::from_na(&xt).transpose().symmetrized()?;

    // Residual gate: ‖AX + XAᵀ + gX² + W‖_F relative to the data scale.
    let residual = lyapunov_slack(a, &x, Some(w))?
        .scaled(-1.0)
        .add(&x.matmul(&x)?.scaled(g))?
        .fro_norm();
    let res_scale = a.fro_norm() * x.fro_norm() + w.fro_norm();
    if residual > 1e-8 * res_scale {
        return Err(Error::Numerical(format!(
            "Riccati residual {residual:.3e} exceeds 1e-8 relative bound ({res_scale:.3e})"
        )));
    }
    let closed_loop = a.add(&x.scaled(g))?;
    let closed_loop_abscissa = spectral_abscissa(&closed_loop)?;
    if closed_loop_abscissa >= 0.0 {
        return Err(Error::Numerical(format!(
            "closed loop is not Hurwitz (abscissa {closed_loop_abscissa:.6e})"
        )));
    }
    let xe = sym_eig_bounds(&x)?;
    let degenerate_kernel = xe.min <= 1e-10 * 1.0_f64.max(xe.max.abs());
    Ok(RiccatiSolution {
        x,
        residual,
        closed_loop_abscissa,
        degenerate_kernel,
    })
}

/// Solves the Lyapunov equation `AX + XAᵀ + W = 0` by vectorization
/// (Kronecker form); intended for the small blocks of the decoupled path.
fn lyapunov_solve(a: &DenseMatrix, w: &DenseMatrix) -> Result<DenseMatrix> {
    a.require_square("lyapunov_solve")?;
    w.require_same_shape(a, "lyapunov_solve")?;
    let n = a.nrows();
    let a_na = a.to_na();
    let eye = na::DMatrix::<f64>::identity(n, n);
    let sys = eye.kronecker(&a_na) + a_na.kronecker(&eye);
    let rhs = na::DVector::from_fn(n * n, |k, _| -w.get(k % n, k / n));
    let x = sys.lu().solve(&rhs).ok_or_else(|| {
        Error::Numerical("Lyapunov operator is singular (A and −Aᵀ share eigenvalues)".into())
    })?;
    let mut out = DenseMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            out.set(i, j, x[j * n + i]);
        }
    }
    out.symmetrized()
}

/// Solves the block equation `blk·X + X·blkᵀ + g·X² + W = 0` and, when the
/// solution is singular (the coupling does not excite every state of the
/// block), retries with `W + εI`. The inflation is kept inside the
/// small-gain budget — solvability needs `g·(k² + ε·r²) < 1` where `k` is
/// the coupling gain and `r` the block resolvent peak — so the regularized
/// equation stays solvable and its solution is strictly positive definite.
/// Returns the solution together with the ε used (zero when none).
fn riccati_block_strict(
    blk: &DenseMatrix,
    g: f64,
    w: &DenseMatrix,
    k_norm: f64,
) -> Result<(RiccatiSolution, f64)> {
    let sol = riccati_stabilizing(blk, g, w)?;
    let xe = sym_eig_bounds(&sol.x)?;
    // The assembled certificate's slack margin along a weakly excited
    // direction scales with g·(min eig X)², so a solution that is positive
    // definite only at rounding level still yields a slack on the boundary.
    // Treat anything below 1e−6 relative as unexcited and regularize.
    if xe.min > 1e-6 * 1.0_f64.max(xe.max.abs()) {
        return Ok((sol, 0.0));
    }
    let m = blk.nrows();
    let resolvent = StateSpace::strictly_proper(
        blk.clone(),
        DenseMatrix::identity(m),
        DenseMatrix::identity(m),
    )?;
    let r = hinf_norm(&resolvent, 1e-9)?;
    let avail = (1.0 / g - k_norm * k_norm) / (r * r);
    let eps = 0.25 * avail;
    if !(eps > 0.0) {
        return Err(Error::Numerical(
            "no gain margin left to regularize a singular block solution".into(),
        ));
    }
    let mut wp = w.clone();
    for i in 0..m {
        wp.set(i, i, wp.get(i, i) + eps);
    }
    let sol = riccati_stabilizing(blk, g, &wp)?;
    let xe = sym_eig_bounds(&sol.x)?;
    if xe.min <= 0.0 {
        return Err(Error::Numerical(format!(
            "block solution stayed singular after regularization (min eig {:.6e})",
            xe.min
        )));
    }
    Ok((sol, eps))
}

/// Proof data accompanying a small-gain certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmallGainReport {
    /// The block-diagonal Lyapunov certificate.
    pub certificate: Certificate,
    /// `‖K₁‖∞ = ‖(sI − A₁₁)⁻¹A₁₂‖∞`.
    pub k1_norm: f64,
    /// `‖K₂‖∞ = ‖(sI − A₂₂)⁻¹A₂₁‖∞`.
    pub k2_norm: f64,
    /// Loop gain `‖K₁‖∞·‖K₂‖∞` (strictly below one on success).
    pub gain_product: f64,
    /// Loop-scaling level used by the Riccati construction; `None` on the
    /// decoupled path.
    pub gamma: Option<f64>,
    /// Strictified level for the second block (`k₂ < μ < γ`); `None` on the
    /// decoupled path.
    pub mu: Option<f64>,
    /// Riccati solutions for the two blocks, in order; empty on the
    /// decoupled path. The second entry solves the equation at level `μ`
    /// before the `γ⁻²` rescaling that forms the certificate block.
    pub riccati: Vec<RiccatiSolution>,
    /// Per-block `εI` inflation applied to the constant terms when a
    /// coupling fails to excite the whole block (zeros otherwise); empty on
    /// the decoupled path.
    pub regularizations: Vec<f64>,
    /// The coupling was numerically zero on at least one side, so the
    /// blocks were certified by independent Lyapunov equations instead.
    pub decoupled_fallback: bool,
}

/// Builds a block-diagonal Lyapunov certificate for a two-block partition
/// from the small-gain loop between the coupling transfer functions.
///
/// `gamma` overrides the loop-scaling level; it must satisfy
/// `‖K₂‖∞ < γ < 1/‖K₁‖∞` (the default is the geometric mean
/// `√(‖K₂‖∞/‖K₁‖∞)`, which balances the two margins). Errors:
/// [`Error::NotHurwitzBlock`] when a diagonal block is unstable,
/// [`Error::SmallGainViolated`] when the loop gain reaches one (or a
/// caller-supplied `gamma` pushes either scaled gain to one).
pub fn blockdiag_smallgain(
    a: &DenseMatrix,
    alpha: &Partition,
    gamma: Option<f64>,
) -> Result<SmallGainReport> {
    a.require_square("blockdiag_smallgain")?;
    alpha.require_total(a.nrows())?;
    if alpha.block_count() != 2 {
        return Err(Error::Partition(format!(
            "small-gain construction requires exactly two blocks, got {}",
            alpha.block_count()
        )));
    }
    let a11 = alpha.block_of(a, 0, 0)?;
    let a12 = alpha.block_of(a, 0, 1)?;
    let a21 = alpha.block_of(a, 1, 0)?;
    let a22 = alpha.block_of(a, 1, 1)?;
    for (idx, blk) in [(0usize, &a11), (1, &a22)] {
        let abscissa = spectral_abscissa(blk)?;
        if abscissa >= 0.0 {
            return Err(Error::NotHurwitzBlock {
                block: idx,
                abscissa,
            });
        }
    }
    let n1 = a11.nrows();
    let n2 = a22.nrows();
    let c12 = if a12.max_abs() == 0.0 {
        0.0
    } else {
        max_singular_value(&a12)?
    };
    let c21 = if a21.max_abs() == 0.0 {
        0.0
    } else {
        max_singular_value(&a21)?
    };

    if c12 <= 1e-12 || c21 <= 1e-12 {
        // (Effectively) triangular coupling: independent Lyapunov solutions
        // for the blocks, with diagonal scalings absorbing the remaining
        // one-sided coupling.
        let x1 = lyapunov_solve(&a11, &DenseMatrix::identity(n1))?;
        let x2 = lyapunov_solve(&a22, &DenseMatrix::identity(n2))?;
        let e12 = max_singular_value(&a12.matmul(&x2)?)?;
        let e21 = max_singular_value(&x1.matmul(&a21.transpose())?)?;
        let s1 = 1.0 + 2.0 * e12 * e12;
        let s2 = 1.0 + 2.0 * e21 * e21;
        let mut x = DenseMatrix::zeros(a.nrows(), a.nrows());
        x.set_block(0, 0, &x1.scaled(s1))?;
        x.set_block(n1, n1, &x2.scaled(s2))?;
        let certificate =
            Certificate::from_candidate(CertificateMethod::Riccati, x, alpha.clone(), a)?;
        if !certificate.is_valid() {
            return Err(Error::Numerical(
                "decoupled Lyapunov certificate failed validation".into(),
            ));
        }
        let hinf_tol = 1e-9;
        let k1_norm = if c12 == 0.0 {
            0.0
        } else {
            hinf_norm(
                &StateSpace::strictly_proper(a11, a12, DenseMatrix::identity(n1))?,
                hinf_tol,
            )?
        };
        let k2_norm = if c21 == 0.0 {
            0.0
        } else {
            hinf_norm(
                &StateSpace::strictly_proper(a22, a21, DenseMatrix::identity(n2))?,
                hinf_tol,
            )?
        };
        return Ok(SmallGainReport {
            certificate,
            k1_norm,
            k2_norm,
            gain_product: k1_norm * k2_norm,
            gamma: None,
            mu: None,
            riccati: Vec::new(),
            regularizations: Vec::new(),
            decoupled_fallback: true,
        });
    }

    let hinf_tol = 1e-9;
    let k1_norm = hinf_norm(
        &StateSpace::strictly_proper(a11.clone(), a12.clone(), DenseMatrix::identity(n1))?,
        hinf_tol,
    )?;
    let k2_norm = hinf_norm(
        &StateSpace::strictly_proper(a22.clone(), a21.clone(), DenseMatrix::identity(n2))?,
        hinf_tol,
    )?;
    let gain_product = k1_norm * k2_norm;
    if gain_product >= 1.0 {
        return Err(Error::SmallGainViolated {
            product: gain_product,
        });
    }
    let gamma_val = match gamma {
        Some(g) => {
            let scaled = (g * k1_norm).max(k2_norm / g);
            if !(g > 0.0) || scaled >= 1.0 {
                return Err(Error::SmallGainViolated { product: scaled });
            }
            g
        }
        None => (k2_norm / k1_norm).sqrt(),
    };
    // Strictify the second level: k₂ < μ < γ, placed halfway.
    let mu = 0.5 * (gamma_val + k2_norm);

    let w1 = a12.matmul(&a12.transpose())?.symmetrized()?;
    let (r1, eps1) = riccati_block_strict(&a11, gamma_val * gamma_val, &w1, k1_norm)?;
    let w2 = a21.matmul(&a21.transpose())?.symmetrized()?;
    let (r2, eps2) = riccati_block_strict(&a22, 1.0 / (mu * mu), &w2, k2_norm)?;

    let mut x = DenseMatrix::zeros(a.nrows(), a.nrows());
    x.set_block(0, 0, &r1.x)?;
    x.set_block(n1, n1, &r2.x.scaled(1.0 / (gamma_val * gamma_val)))?;
    let certificate = Certificate::from_candidate(CertificateMethod::Riccati, x, alpha.clone(), a)?;
    if !certificate.is_valid() {
        return Err(Error::Numerical(format!(
            "small-gain certificate failed validation (min eig X = {:.6e}, max eig slack = {:.6e})",
            certificate.min_eig_x, certificate.max_eig_slack
        )));
    }
    Ok(SmallGainReport {
        certificate,
        k1_norm,
        k2_norm,
        gain_product,
        gamma: Some(gamma_val),
        mu: Some(mu),
        riccati: vec![r1, r2],
        regularizations: vec![eps1, eps2],
        decoupled_fallback: false,
    })
}

/// Evidence backing a [`StabilityVerdict::Stable`] answer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityProof {
    /// Positive scalings certifying strict dominance of the block
    /// comparison matrix.
    pub scalings: Vec<f64>,
    /// Spectral abscissa of each diagonal block (all negative).
    pub block_abscissas: Vec<f64>,
    /// H∞ norm of each block resolvent `(sI − A_ii)⁻¹`.
    pub resolvent_norms: Vec<f64>,
    /// Smallest real part over the spectrum of the comparison matrix.
    pub comparison_min_eig: f64,
}

/// Outcome of the sufficient block-stability test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum StabilityVerdict {
    /// The test succeeded; `A` is Hurwitz with the attached evidence.
    Stable(StabilityProof),
    /// The sufficient conditions do not hold; nothing is claimed about `A`.
    Inconclusive { reason: String },
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityVerdict::Stable(_))
    }
}

/// Sufficient test for Hurwitz stability of a partitioned matrix: every
/// diagonal block must be Hurwitz with its resolvent norm attained at zero
/// frequency (within `1e-7`), and the block comparison matrix must admit
/// positive dominance scalings. A `Stable` verdict is a proof; an
/// `Inconclusive` verdict makes no claim.
pub fn alpha_h_stability_check(a: &DenseMatrix, alpha: &Partition) -> Result<StabilityVerdict> {
    a.require_square("alpha_h_stability_check")?;
    alpha.require_total(a.nrows())?;
    let k = alpha.block_count();
    let mut block_abscissas = Vec::with_capacity(k);
    for i in 0..k {
        let blk = alpha.block_of(a, i, i)?;
        let abscissa = spectral_abscissa(&blk)?;
        if abscissa >= 0.0 {
            return Ok(StabilityVerdict::Inconclusive {
                reason: format!("diagonal block {i} is not Hurwitz (abscissa {abscissa:.6e})"),
            });
        }
        block_abscissas.push(abscissa);
    }
    let cm = comparison_matrix(a, alpha)?;
    let comparison_min_eig = cm.min_real_eig()?;
    let scalings = match sdd_scalings(&cm) {
        Ok(s) => s.d,
        Err(Error::Infeasible(msg)) | Err(Error::Numerical(msg)) => {
            return Ok(StabilityVerdict::Inconclusive {
                reason: format!("comparison matrix admits no dominance scalings: {msg}"),
            });
        }
        Err(e) => return Err(e),
    };
    let mut resolvent_norms = Vec::with_capacity(k);
    for i in 0..k {
        let blk = alpha.block_of(a, i, i)?;
        let m = blk.nrows();
        let resolvent = StateSpace::strictly_proper(
            blk.clone(),
            DenseMatrix::identity(m),
            DenseMatrix::identity(m),
        )?;
        let norm = hinf_norm(&resolvent, 1e-9)?;
        let zero_freq = 1.0 / min_singular_value(&blk)?;
        if norm > zero_freq + 1e-7 {
            return Ok(StabilityVerdict::Inconclusive {
                reason: format!(
                    "block {i} resolvent peaks at {norm:.6e}, above its zero-frequency \
                     gain {zero_freq:.6e}"
                ),
            });
        }
        resolvent_norms.push(norm);
    }
    Ok(StabilityVerdict::Stable(StabilityProof {
        scalings,
        block_abscissas,
        resolvent_norms,
        comparison_min_eig,
    }))
}

/// Runs [`alpha_h_stability_check`] on a two-block partition and, on a
/// `Stable` verdict, converts its dominance scalings `d` into the
/// loop-scaling level `γ = d₂/d₁` for [`blockdiag_smallgain`]. This turns
/// the comparison-matrix proof directly into a constructive block-diagonal
/// certificate.
pub fn smallgain_from_scalings(a: &DenseMatrix, alpha: &Partition) -> Result<SmallGainReport> {
    if alpha.block_count() != 2 {
        return Err(Error::Partition(format!(
            "scaling-driven construction requires exactly two blocks, got {}",
            alpha.block_count()
        )));
    }
    match alpha_h_stability_check(a, alpha)? {
        StabilityVerdict::Stable(proof) => {
            let gamma = proof.scalings[1] / proof.scalings[0];
            blockdiag_smallgain(a, alpha, Some(gamma))
        }
        StabilityVerdict::Inconclusive { reason } => Err(Error::NotHPlus(format!(
            "stability check is inconclusive: {reason}"
        ))),
    }
}
