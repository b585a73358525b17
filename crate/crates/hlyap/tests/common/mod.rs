//! Shared brute-force oracles for the integration suites.
//!
//! Everything here is deliberately independent of the library's own
//! numerics: the LP oracle enumerates polytope vertices directly, the
//! frequency oracle evaluates transfer-function gains through a private
//! real-embedded Gaussian elimination, and both only touch the library for
//! plain data types.

#![allow(dead_code)]

use hlyap::matrix::{max_singular_value, DenseMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

// ── explicit LP form + vertex enumeration ────────────────────────────────

/// A small LP in explicit form: minimize `c·x` subject to `G x ≤ h`,
/// `E x = f`, and finite box bounds `l ≤ x ≤ u` (which keep the feasible
/// set bounded, so the optimum — if any — is attained at a vertex).
#[derive(Clone, Debug)]
pub struct ExplicitLp {
    pub c: Vec<f64>,
    pub g: Vec<Vec<f64>>,
    pub h: Vec<f64>,
    pub e: Vec<Vec<f64>>,
    pub f: Vec<f64>,
    pub l: Vec<f64>,
    pub u: Vec<f64>,
}

impl ExplicitLp {
    pub fn nvars(&self) -> usize {
        self.c.len()
    }
}

/// Gaussian elimination with partial pivoting; `None` for (near-)singular
/// systems. Oracle-private on purpose — no shared code with the library.
fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
    let mut rhs = b.to_vec();
    let scale: f64 = m
        .iter()
        .flat_map(|r| r.iter().map(|v| v.abs()))
        .fold(1.0, f64::max);
    for col in 0..n {
        let (piv, pval) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if pval <= 1e-11 * scale {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in (col + 1)..n {
            let factor = m[r][col] / m[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[r][k] -= factor * m[col][k];
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in (row + 1)..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Optimal value by enumerating every vertex of the (bounded) feasible
/// polytope: all full-rank choices of `n` active constraints among the
/// equality rows (always active), inequality rows, and box bounds.
/// `None` means the feasible set is empty.
pub fn vertex_enumeration_optimum(lp: &ExplicitLp) -> Option<f64> {
    let n = lp.nvars();
    let m_eq = lp.e.len();
    assert!(m_eq <= n, "more equalities than variables");

    // Candidate active rows beyond the equalities: each as (coeffs, rhs).
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for (gr, &hr) in lp.g.iter().zip(&lp.h) {
        rows.push((gr.clone(), hr));
    }
    for j in 0..n {
        let mut lo = vec![0.0; n];
        lo[j] = 1.0;
        rows.push((lo.clone(), lp.l[j]));
        rows.push((lo, lp.u[j]));
    }

    let need = n - m_eq;
    let feas_tol = 1e-7;
    let mut best: Option<f64> = None;
    let mut combo: Vec<usize> = (0..need).collect();
    let total = rows.len();
    if need > total {
        return None;
    }
    loop {
        // Assemble the active system [E; chosen] x = [f; rhs].
        let mut a_sys: Vec<Vec<f64>> = lp.e.clone();
        let mut b_sys: Vec<f64> = lp.f.clone();
        for &idx in &combo {
            a_sys.push(rows[idx].0.clone());
            b_sys.push(rows[idx].1);
        }
        if let Some(x) = dense_solve(&a_sys, &b_sys) {
            let feasible = lp
                .g
                .iter()
                .zip(&lp.h)
                .all(|(gr, &hr)| dot(gr, &x) <= hr + feas_tol)
                && lp
                    .e
                    .iter()
                    .zip(&lp.f)
                    .all(|(er, &fr)| (dot(er, &x) - fr).abs() <= feas_tol)
                && x.iter()
                    .zip(lp.l.iter().zip(&lp.u))
                    .all(|(&xi, (&li, &ui))| xi >= li - feas_tol && xi <= ui + feas_tol);
            if feasible {
                let value = dot(&lp.c, &x);
                best = Some(match best {
                    Some(b) => b.min(value),
                    None => value,
                });
            }
        }
        // Next lexicographic combination of `need` indices out of `total`.
        if need == 0 {
            break;
        }
        let mut i = need;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if combo[i] != i + total - need {
                break;
            }
        }
        if combo[i] == i + total - need {
            break;
        }
        combo[i] += 1;
        for k in (i + 1)..need {
            combo[k] = combo[k - 1] + 1;
        }
    }
    best
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the explicit LP through the library's simplex engine.
/// `Ok(None)` means the engine reported infeasibility.
pub fn library_lp_optimum(lp: &ExplicitLp) -> hlyap::Result<Option<f64>> {
    use hlyap::lp::{solve_lp, LpOptions, LpProblem, LpStatus};
    let n = lp.nvars();
    let mut p = LpProblem::new(n);
    for j in 0..n {
        p.set_bounds(j, lp.l[j], lp.u[j]);
        p.set_objective(j, lp.c[j]);
    }
    for (gr, &hr) in lp.g.iter().zip(&lp.h) {
        p.add_ub_row(gr, hr)?;
    }
    for (er, &fr) in lp.e.iter().zip(&lp.f) {
        let coeffs: Vec<(usize, f64)> = er
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(j, &v)| (j, v))
            .collect();
        p.add_eq_sparse(coeffs, fr)?;
    }
    let sol = solve_lp(&p, LpOptions::default())?;
    Ok(match sol.status {
        LpStatus::Optimal => Some(sol.objective),
        LpStatus::Infeasible => None,
        LpStatus::Unbounded => {
            panic!("box-bounded LP reported unbounded; the bounds make that impossible")
        }
    })
}

/// Seeded random explicit LP with up to 5 variables, a handful of
/// inequality rows, and occasionally one equality row.
pub fn random_explicit_lp(seed: u64) -> ExplicitLp {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.random_range(2..=5usize);
    let m_ub = rng.random_range(1..=6usize);
    let m_eq = if n >= 3 && rng.random_bool(0.4) { 1 } else { 0 };
    let coeff = |rng: &mut StdRng| -> f64 {
        let v: f64 = rng.random_range(-3.0..3.0);
        // Quantize a little so degenerate/aligned rows show up regularly.
        (v * 4.0).round() / 4.0
    };
    let c: Vec<f64> = (0..n).map(|_| coeff(&mut rng)).collect();
    let g: Vec<Vec<f64>> = (0..m_ub)
        .map(|_| (0..n).map(|_| coeff(&mut rng)).collect())
        .collect();
    // Right-hand sides biased positive so the box-interior is often (not
    // always) feasible; infeasible instances stay in the mix on purpose.
    let h: Vec<f64> = (0..m_ub).map(|_| rng.random_range(-1.0..6.0)).collect();
    let e: Vec<Vec<f64>> = (0..m_eq)
        .map(|_| (0..n).map(|_| coeff(&mut rng)).collect())
        .collect();
    let f: Vec<f64> = (0..m_eq).map(|_| rng.random_range(-2.0..2.0)).collect();
    let l: Vec<f64> = (0..n)
        .map(|_| if rng.random_bool(0.5) { 0.0 } else { -2.0 })
        .collect();
    let u: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..5.0)).collect();
    ExplicitLp { c, g, h, e, f, l, u }
}

// ── frequency-grid H∞ oracle ─────────────────────────────────────────────

/// Gain `σ_max(C (jωI − A)⁻¹ B + D)` evaluated through a real embedding:
/// the complex solve becomes a `2n×2n` real system and the complex SVD a
/// real one of twice the size (same singular values, doubled).
pub fn frequency_gain_oracle(
    a: &DenseMatrix,
    b: &DenseMatrix,
    c: &DenseMatrix,
    d: &DenseMatrix,
    omega: f64,
) -> f64 {
    let n = a.nrows();
    let m_in = b.ncols();
    let p_out = c.nrows();
    // (jωI − A)(Xr + jXi) = B  ⇔  [[−A, −ωI],[ωI, −A]]·[Xr; Xi] = [B; 0]
    let mut sys = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            sys[i][j] = -a.get(i, j);
            sys[n + i][n + j] = -a.get(i, j);
        }
        sys[i][n + i] = -omega;
        sys[n + i][i] = omega;
    }
    // Column-by-column solve for each input channel.
    let mut gr = vec![vec![0.0; m_in]; p_out]; // real part of C·X + D
    let mut gi = vec![vec![0.0; m_in]; p_out];
    for col in 0..m_in {
        let mut rhs = vec![0.0; 2 * n];
        for i in 0..n {
            rhs[i] = b.get(i, col);
        }
        let x = dense_solve(&sys, &rhs).expect("resolvent system is nonsingular off the spectrum");
        for row in 0..p_out {
            let mut re = d.get(row, col);
            let mut im = 0.0;
            for k in 0..n {
                re += c.get(row, k) * x[k];
                im += c.get(row, k) * x[n + k];
            }
            gr[row][col] = re;
            gi[row][col] = im;
        }
    }
    // σ_max of the complex gain = σ_max of [[Gr, −Gi],[Gi, Gr]].
    let mut embed = DenseMatrix::zeros(2 * p_out, 2 * m_in);
    for i in 0..p_out {
        for j in 0..m_in {
            embed.set(i, j, gr[i][j]);
            embed.set(i, m_in + j, -gi[i][j]);
            embed.set(p_out + i, j, gi[i][j]);
            embed.set(p_out + i, m_in + j, gr[i][j]);
        }
    }
    max_singular_value(&embed).expect("embedded gain matrix has singular values")
}

/// Dense-grid supremum of the frequency response: a broad geometric sweep
/// plus fine clusters around every eigenfrequency of `A`, plus ω = 0.
pub fn grid_hinf_oracle(
    a: &DenseMatrix,
    b: &DenseMatrix,
    c: &DenseMatrix,
    d: &DenseMatrix,
) -> f64 {
    let mut omegas: Vec<f64> = vec![0.0];
    let scale = a.max_abs().max(1e-6);
    let (lo, hi) = (1e-3 * scale, 1e3 * scale);
    let base = 2000usize;
    for k in 0..=base {
        omegas.push(lo * (hi / lo).powf(k as f64 / base as f64));
    }
    // Fine clusters around each eigenfrequency: resonance peaks have
    // half-width ~|Re λ|, so the cluster spacing must be well below that
    // relative to ω for the supremum to resolve to three digits.
    if let Ok(eigs) = hlyap::matrix::complex_eigenvalues(a) {
        for lam in eigs {
            let w0 = lam.im.abs();
            if w0 > 0.0 {
                omegas.push(w0);
                for k in 0..=2400usize {
                    omegas.push(w0 * 0.5 * 4.0_f64.powf(k as f64 / 2400.0));
                }
            }
        }
    }
    omegas
        .into_iter()
        .map(|w| frequency_gain_oracle(a, b, c, d, w))
        .fold(0.0, f64::max)
}
