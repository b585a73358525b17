//! Benchmark system families and reference oracles.
//!
//! Two structured families exercise the solvers end to end: a spatially
//! discretized heat equation (symmetric tridiagonal, known spectrum) and a
//! cyclic negative-feedback cascade whose comparison-matrix membership has
//! an exact product criterion with the classic `sec(π/n)ⁿ` diagonal-
//! stability threshold. Seeded random generators provide reproducible test
//! corpora, and a brute-force grid oracle independently corroborates
//! diagonal stability claims on small systems.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classes::{is_h_plus, is_h_plus_strict};
use crate::matrix::{lyapunov_slack, spectral_abscissa, sym_eig_bounds, DenseMatrix, Partition};
use crate::smallgain::{hinf_norm, StateSpace};
use crate::{Error, Result};

/// Discretized one-dimensional heat equation with a point actuator and a
/// point sensor: `A = α(n+1)²·tridiag(−1, 2, −1)`, `B = e_{⌈n/3⌉}`,
/// `C = e_{⌈2n/3⌉}ᵀ` (1-based placement).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeatSystem {
    pub n: usize,
    pub alpha: f64,
    #[serde(rename = "A")]
    pub a: DenseMatrix,
    #[serde(rename = "B")]
    pub b: DenseMatrix,
    #[serde(rename = "C")]
    pub c: DenseMatrix,
}

impl HeatSystem {
    /// Spectrum of `A` in closed form: `α(n+1)²(2 − 2cos(kπ/(n+1)))` for
    /// `k = 1…n`, returned in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let scale = self.alpha * ((n + 1) * (n + 1)) as f64;
        let mut eigs: Vec<f64> = (1..=n)
            .map(|k| {
                let theta = k as f64 * std::f64::consts::PI / (n + 1) as f64;
                scale * (2.0 - 2.0 * theta.cos())
            })
            .collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        eigs
    }
}

/// Heat system with the standard diffusion coefficient `α = −0.01`.
pub fn heat_system(n: usize) -> Result<HeatSystem> {
    heat_system_with_alpha(n, -0.01)
}

/// Heat system with an explicit diffusion coefficient (`α < 0` makes `A`
/// Hurwitz). Requires `n ≥ 2`.
pub fn heat_system_with_alpha(n: usize, alpha: f64) -> Result<HeatSystem> {
    if n < 2 {
        return Err(Error::Dimension(format!(
            "heat system needs at least two grid points, got {n}"
        )));
    }
    let scale = alpha * ((n + 1) * (n + 1)) as f64;
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        a.set(i, i, 2.0 * scale);
        if i + 1 < n {
            a.set(i, i + 1, -scale);
            a.set(i + 1, i, -scale);
        }
    }
    let mut b = DenseMatrix::zeros(n, 1);
    b.set(n.div_ceil(3) - 1, 0, 1.0);
    let mut c = DenseMatrix::zeros(1, n);
    c.set(0, (2 * n).div_ceil(3) - 1, 1.0);
    Ok(HeatSystem { n, alpha, a, b, c })
}

/// Negative-feedback cascade of first-order lags `β_i/(s + α_i)`: the state
/// matrix has `−α_i` on the diagonal, `β_{i+1}` on the subdiagonal, and
/// `−β₁` in the top-right corner closing the loop.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CyclicSystem {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    #[serde(rename = "A")]
    pub a: DenseMatrix,
}

/// Builds the cyclic cascade; all parameters must be positive and at least
/// two stages are required (a one-stage loop has no off-diagonal cycle).
pub fn cyclic_system(alphas: &[f64], betas: &[f64]) -> Result<CyclicSystem> {
    if alphas.len() != betas.len() {
        return Err(Error::Dimension(format!(
            "{} time constants vs {} gains",
            alphas.len(),
            betas.len()
        )));
    }
    let n = alphas.len();
    if n < 2 {
        return Err(Error::Dimension(
            "cyclic cascade needs at least two stages".into(),
        ));
    }
    if alphas.iter().chain(betas.iter()).any(|v| !(*v > 0.0)) {
        return Err(Error::Dimension(
            "cascade time constants and gains must be positive".into(),
        ));
    }
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        a.set(i, i, -alphas[i]);
    }
    for i in 0..n - 1 {
        a.set(i + 1, i, betas[i + 1]);
    }
    a.set(0, n - 1, -betas[0]);
    Ok(CyclicSystem {
        alphas: alphas.to_vec(),
        betas: betas.to_vec(),
        a,
    })
}

/// Loop-gain classification of a cyclic cascade.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HplusThreshold {
    /// `Πβ / Πα`, the cascade loop gain.
    pub ratio: f64,
    /// `−A` is a (strict) H+ matrix — exactly when the ratio is below one.
    pub is_hplus: bool,
    /// Diagonal-stability threshold for the ratio: `sec(π/n)ⁿ` (infinite
    /// for `n = 2`, where every Hurwitz matrix is diagonally stable).
    pub diag_stability_bound: f64,
}

/// Classifies a cyclic cascade: computes the loop-gain ratio, cross-checks
/// the product criterion `ratio < 1` against the comparison-matrix H+ test,
/// and reports the `sec(π/n)ⁿ` diagonal-stability threshold.
pub fn hplus_threshold(sys: &CyclicSystem) -> Result<HplusThreshold> {
    let n = sys.alphas.len();
    let ratio = sys
        .betas
        .iter()
        .zip(sys.alphas.iter())
        .map(|(b, a)| b / a)
        .product::<f64>();
    let is_hplus = ratio < 1.0;
    // Strict membership (nonsingular comparison matrix): the ratio
    // criterion is an exact equivalence for it, and a ratio of exactly one
    // lands on the singular boundary, outside the class.
    let spectral = is_h_plus_strict(&sys.a.scaled(-1.0), &Partition::scalar(n)?, None)?;
    if spectral != is_hplus {
        return Err(Error::Numerical(format!(
            "loop-gain criterion (ratio {ratio:.9e}) disagrees with the spectral H+ test; \
             the system sits on the classification boundary"
        )));
    }
    Ok(HplusThreshold {
        ratio,
        is_hplus,
        diag_stability_bound: secant_bound(n),
    })
}

/// `cos(π/n)` with exact algebraic values where they exist; general `n`
/// corrects the libm cosine for the representation error of `π/n` (libm's
/// own rounding can still leave an ulp of error).
fn cos_pi_over(n: usize) -> f64 {
    match n {
        3 => 0.5,
        4 => std::f64::consts::FRAC_1_SQRT_2,
        6 => 3.0_f64.sqrt() / 2.0,
        _ => {
            // True π = PI + PI_TAIL to ~1e−32.
            const PI_TAIL: f64 = 1.224_646_799_147_353_2e-16;
            let nf = n as f64;
            let x = std::f64::consts::PI / nf;
            // e = π/n − x, assembled from the division remainder and the
            // representation tail of π itself.
            let rem = (-x).mul_add(nf, std::f64::consts::PI);
            let e = (rem + PI_TAIL) / nf;
            x.cos() - x.sin() * e
        }
    }
}

/// Diagonal-stability threshold `sec(π/n)ⁿ` for the cyclic cascade ratio.
/// Returns infinity for `n ≤ 2` (every two-stage Hurwitz cascade is
/// diagonally stable; the secant blows up at π/2).
pub fn secant_bound(n: usize) -> f64 {
    if n <= 2 {
        return f64::INFINITY;
    }
    (1.0 / cos_pi_over(n)).powi(n as i32)
}

/// Seeded random Hurwitz matrix whose negation is a strict H+ matrix:
/// off-diagonal entries are sampled freely and each diagonal entry is
/// pushed below the negated absolute row sum by a margin in `(0.1, 1)`.
/// Deterministic for a fixed `(n, seed)` pair; both postconditions are
/// asserted before returning.
pub fn random_hplus_hurwitz(n: usize, seed: u64) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::Dimension("matrix dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                a.set(i, j, rng.random_range(-1.0..1.0));
            }
        }
    }
    for i in 0..n {
        let row_sum: f64 = (0..n)
            .filter(|&j| j != i)
            .map(|j| a.get(i, j).abs())
            .sum();
        a.set(i, i, -(row_sum + rng.random_range(0.1..1.0)));
    }
    if !is_h_plus(&a.scaled(-1.0), &Partition::scalar(n)?, None)? {
        return Err(Error::Numerical(
            "generated matrix failed the H+ postcondition".into(),
        ));
    }
    if spectral_abscissa(&a)? >= 0.0 {
        return Err(Error::Numerical(
            "generated matrix failed the Hurwitz postcondition".into(),
        ));
    }
    Ok(a)
}

/// Seeded random two-block system for the small-gain construction: block
/// sizes up to six, Hurwitz diagonal blocks, and coupling loop gain
/// `‖K₁‖∞·‖K₂‖∞ < 0.95` (resampled until all three hold). Deterministic
/// for a fixed seed.
pub fn random_two_block(seed: u64) -> Result<(DenseMatrix, Partition)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..500 {
        let n1 = rng.random_range(1..=6usize);
        let n2 = rng.random_range(1..=6usize);
        let n = n1 + n2;
        let mut a = DenseMatrix::zeros(n, n);
        let coupling = rng.random_range(0.1..0.5);
        for i in 0..n {
            for j in 0..n {
                let on_diag_block = (i < n1) == (j < n1);
                let mag = if on_diag_block { 1.0 } else { coupling };
                a.set(i, j, rng.random_range(-mag..mag));
            }
        }
        for i in 0..n {
            let block = if i < n1 { 0..n1 } else { n1..n };
            let row_sum: f64 = block
                .filter(|&j| j != i)
                .map(|j| a.get(i, j).abs() + a.get(j, i).abs())
                .sum();
            a.set(i, i, a.get(i, i) - 0.25 * row_sum - rng.random_range(1.0..2.5));
        }
        let a11 = DenseMatrix::from_row_major(
            n1,
            n1,
            (0..n1)
                .flat_map(|i| (0..n1).map(move |j| (i, j)))
                .map(|(i, j)| a.get(i, j))
                .collect(),
        )?;
        let a22 = DenseMatrix::from_row_major(
            n2,
            n2,
            (0..n2)
                .flat_map(|i| (0..n2).map(move |j| (i, j)))
                .map(|(i, j)| a.get(n1 + i, n1 + j))
                .collect(),
        )?;
        if spectral_abscissa(&a11)? >= -1e-3 || spectral_abscissa(&a22)? >= -1e-3 {
            continue;
        }
        let alpha = Partition::new(vec![n1, n2])?;
        let a12 = alpha.block_of(&a, 0, 1)?;
        let a21 = alpha.block_of(&a, 1, 0)?;
        let k1 = if a12.max_abs() == 0.0 {
            0.0
        } else {
            hinf_norm(
                &StateSpace::strictly_proper(a11, a12, DenseMatrix::identity(n1))?,
                1e-9,
            )?
        };
        let k2 = if a21.max_abs() == 0.0 {
            0.0
        } else {
            hinf_norm(
                &StateSpace::strictly_proper(a22, a21, DenseMatrix::identity(n2))?,
                1e-9,
            )?
        };
        if k1 * k2 < 0.95 {
            return Ok((a, alpha));
        }
    }
    Err(Error::Numerical(
        "two-block sampler failed to hit the loop-gain target".into(),
    ))
}

/// Brute-force diagonal-stability oracle: scans diagonal `X` over a lattice
/// of 40 log-spaced points per entry in `[1e−3, 1e3]` and returns the first
/// `X ≻ 0` with `max_eig(AX + XAᵀ) < 0`. One-sided by construction — it can
/// miss certificates but never fabricates one. Exponential in `n`, so the
/// dimension is capped at three.
pub fn diag_stability_grid(a: &DenseMatrix) -> Result<Option<DenseMatrix>> {
    a.require_square("diag_stability_grid")?;
    let n = a.nrows();
    if n == 0 || n > 3 {
        return Err(Error::Dimension(format!(
            "grid oracle scans 40^n lattice points; dimension {n} is out of its 1..=3 range"
        )));
    }
    const POINTS: usize = 40;
    let lattice: Vec<f64> = (0..POINTS)
        .map(|k| 10f64.powf(-3.0 + 6.0 * k as f64 / (POINTS - 1) as f64))
        .collect();
    let mut idx = vec![0usize; n];
    loop {
        let x = DenseMatrix::from_diag(&idx.iter().map(|&k| lattice[k]).collect::<Vec<_>>());
        // lyapunov_slack returns −(AX + XAᵀ); stability means it is PD.
        if sym_eig_bounds(&lyapunov_slack(a, &x, None)?)?.min > 0.0 {
            return Ok(Some(x));
        }
        let mut carry = 0;
        loop {
            idx[carry] += 1;
            if idx[carry] < POINTS {
                break;
            }
            idx[carry] = 0;
            carry += 1;
            if carry == n {
                return Ok(None);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::sym_eigenvalues;

    #[test]
    fn heat_three_point_matrix() {
        let sys = heat_system(3).unwrap();
        let expected = DenseMatrix::from_row_major(
            3,
            3,
            vec![
                -0.32, 0.16, 0.0, //
                0.16, -0.32, 0.16, //
                0.0, 0.16, -0.32,
            ],
        )
        .unwrap();
        assert!(sys.a.sub(&expected).unwrap().max_abs() <= 1e-15);
        assert_eq!(sys.b.get(0, 0), 1.0);
        assert_eq!(sys.b.get(1, 0), 0.0);
        assert_eq!(sys.c.get(0, 1), 1.0);
        assert_eq!(sys.c.get(0, 0), 0.0);
    }

    #[test]
    fn heat_two_point_placement() {
        let sys = heat_system(2).unwrap();
        assert_eq!(sys.b.get(0, 0), 1.0);
        assert_eq!(sys.c.get(0, 1), 1.0);
    }

    #[test]
    fn heat_rejects_single_point() {
        assert!(heat_system(1).is_err());
    }

    #[test]
    fn heat_is_metzler_and_hurwitz() {
        for n in [2, 5, 17, 40] {
            let sys = heat_system(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        assert!(sys.a.get(i, j) >= 0.0);
                    }
                }
            }
            assert!(spectral_abscissa(&sys.a).unwrap() < 0.0);
        }
    }

    #[test]
    fn heat_spectrum_matches_closed_form() {
        for n in [5, 10, 50] {
            let sys = heat_system(n).unwrap();
            let computed = sym_eigenvalues(&sys.a).unwrap();
            let closed = sys.eigenvalues();
            let scale = sys.a.max_abs();
            for (c, e) in computed.iter().zip(closed.iter()) {
                assert!((c - e).abs() <= 1e-9 * scale.max(1.0), "n={n}: {c} vs {e}");
            }
        }
    }

    #[test]
    fn cyclic_two_stage_structure() {
        let sys = cyclic_system(&[1.5, 2.5], &[0.5, 0.75]).unwrap();
        let expected =
            DenseMatrix::from_row_major(2, 2, vec![-1.5, -0.5, 0.75, -2.5]).unwrap();
        assert_eq!(sys.a.data(), expected.data());
    }

    #[test]
    fn cyclic_three_stage_example() {
        let sys = cyclic_system(&[1.0, 1.0, 1.0], &[1.0, 1.0, 0.9]).unwrap();
        let expected = DenseMatrix::from_row_major(
            3,
            3,
            vec![-1.0, 0.0, -1.0, 1.0, -1.0, 0.0, 0.0, 0.9, -1.0],
        )
        .unwrap();
        assert_eq!(sys.a.data(), expected.data());
        let th = hplus_threshold(&sys).unwrap();
        assert!((th.ratio - 0.9).abs() <= 1e-12);
        assert!(th.is_hplus);
    }

    #[test]
    fn cyclic_rejects_bad_parameters() {
        assert!(cyclic_system(&[1.0], &[1.0]).is_err());
        assert!(cyclic_system(&[1.0, -1.0], &[1.0, 1.0]).is_err());
        assert!(cyclic_system(&[1.0, 1.0], &[1.0, 0.0]).is_err());
        assert!(cyclic_system(&[1.0, 1.0], &[1.0]).is_err());
    }

    #[test]
    fn secant_bound_classic_value_is_exact() {
        assert_eq!(secant_bound(3), 8.0);
        assert_eq!(secant_bound(2), f64::INFINITY);
    }

    #[test]
    fn secant_bound_decreases_toward_one() {
        let mut prev = secant_bound(3);
        for n in 4..=50 {
            let b = secant_bound(n);
            assert!(b < prev - 1e-12, "bound not decreasing at n={n}");
            assert!(b > 1.0);
            prev = b;
        }
        assert!(prev < 1.11, "bound at n=50 should be near one, got {prev}");
    }

    #[test]
    fn two_stage_large_ratio_is_still_diagonally_stable() {
        // Ratio 4 ≥ 1 defeats the H+ test, but every Hurwitz two-stage
        // cascade is diagonally stable; the grid oracle confirms.
        let sys = cyclic_system(&[1.0, 1.0], &[2.0, 2.0]).unwrap();
        let th = hplus_threshold(&sys).unwrap();
        assert!((th.ratio - 4.0).abs() <= 1e-12);
        assert!(!th.is_hplus);
        assert_eq!(th.diag_stability_bound, f64::INFINITY);
        assert!(spectral_abscissa(&sys.a).unwrap() < 0.0);
        assert!(diag_stability_grid(&sys.a).unwrap().is_some());
    }

    #[test]
    fn ratio_exactly_one_is_not_hplus() {
        let sys = cyclic_system(&[1.0, 1.0, 1.0, 1.0], &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let th = hplus_threshold(&sys).unwrap();
        assert_eq!(th.ratio, 1.0);
        assert!(!th.is_hplus);
    }

    #[test]
    fn grid_oracle_splits_ratios_seven_and_nine() {
        let b7 = 7.0_f64.powf(1.0 / 3.0);
        let sys7 = cyclic_system(&[1.0; 3], &[b7; 3]).unwrap();
        assert!(diag_stability_grid(&sys7.a).unwrap().is_some());

        let b9 = 9.0_f64.powf(1.0 / 3.0);
        let sys9 = cyclic_system(&[1.0; 3], &[b9; 3]).unwrap();
        assert!(diag_stability_grid(&sys9.a).unwrap().is_none());
    }

    #[test]
    fn grid_oracle_certificate_is_genuine() {
        let b7 = 7.0_f64.powf(1.0 / 3.0);
        let sys = cyclic_system(&[1.0; 3], &[b7; 3]).unwrap();
        let x = diag_stability_grid(&sys.a).unwrap().unwrap();
        let slack = lyapunov_slack(&sys.a, &x, None).unwrap();
        assert!(sym_eig_bounds(&slack).unwrap().min > 0.0);
        for i in 0..3 {
            assert!(x.get(i, i) > 0.0);
        }
    }

    #[test]
    fn grid_oracle_dimension_cap() {
        assert!(diag_stability_grid(&DenseMatrix::identity(4)).is_err());
    }

    #[test]
    fn random_hplus_family_is_deterministic_and_valid() {
        for seed in [0u64, 7, 1234] {
            let a = random_hplus_hurwitz(6, seed).unwrap();
            let b = random_hplus_hurwitz(6, seed).unwrap();
            assert_eq!(a.data(), b.data());
            assert!(spectral_abscissa(&a).unwrap() < 0.0);
            assert!(is_h_plus(&a.scaled(-1.0), &Partition::scalar(6).unwrap(), None).unwrap());
        }
        let one = random_hplus_hurwitz(1, 3).unwrap();
        assert!(one.get(0, 0) < 0.0);
    }

    #[test]
    fn random_two_block_hits_gain_target() {
        for seed in [1u64, 42] {
            let (a, alpha) = random_two_block(seed).unwrap();
            let (b, _) = random_two_block(seed).unwrap();
            assert_eq!(a.data(), b.data());
            assert_eq!(alpha.block_count(), 2);
            assert!(alpha.sizes().iter().all(|&s| s >= 1 && s <= 6));
            for i in 0..2 {
                let blk = alpha.block_of(&a, i, i).unwrap();
                assert!(spectral_abscissa(&blk).unwrap() < 0.0);
            }
        }
    }

    #[test]
    fn loop_gain_equivalence_random_cascades() {
        let mut rng = ChaCha8Rng::seed_from_u64(5150);
        let mut checked = 0;
        while checked < 30 {
            let n = rng.random_range(2..8usize);
            let alphas: Vec<f64> = (0..n).map(|_| rng.random_range(0.3..2.0)).collect();
            let betas: Vec<f64> = (0..n).map(|_| rng.random_range(0.3..2.0)).collect();
            let ratio: f64 = betas
                .iter()
                .zip(alphas.iter())
                .map(|(b, a)| b / a)
                .product();
            if (ratio - 1.0).abs() < 0.05 {
                continue; // stay off the classification boundary
            }
            let sys = cyclic_system(&alphas, &betas).unwrap();
            let th = hplus_threshold(&sys).unwrap();
            assert_eq!(th.is_hplus, ratio < 1.0);
            checked += 1;
        }
    }
}
