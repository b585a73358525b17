//! Ordered real Schur decomposition.
//!
//! Produces `M = U·T·Uᵀ` with orthogonal `U` and quasi-upper-triangular `T`
//! whose diagonal blocks are arranged stable-eigenvalues-first, so the
//! leading columns of `U` span the stable invariant subspace. Built on an
//! unordered Schur factorization, followed by splitting any 2×2 diagonal
//! block that carries real eigenvalues and a sequence of orthogonal adjacent
//! block swaps (small Sylvester solve + QR per swap).

use nalgebra as na;

use crate::matrix::DenseMatrix;
use crate::{Error, Result};

pub(crate) struct OrderedSchur {
    /// Orthogonal similarity with stable-subspace columns first.
    pub u: DenseMatrix,
    /// Quasi-upper-triangular factor (consumed by the ordering checks).
    #[cfg_attr(not(test), allow(dead_code))]
    pub t: DenseMatrix,
    /// Number of eigenvalues with negative real part (leading block rows).
    pub stable_count: usize,
}

/// Diagonal-block layout of a quasi-triangular matrix: block start indices
/// and sizes (1 or 2).
fn block_layout(t: &DenseMatrix, sub_tol: f64) -> Vec<(usize, usize)> {
    let n = t.nrows();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t.get(i + 1, i).abs() > sub_tol {
            blocks.push((i, 2));
            i += 2;
        } else {
            blocks.push((i, 1));
            i += 1;
        }
    }
    blocks
}

/// Real part shared by the eigenvalue(s) of a diagonal block. For a 2×2
/// block with a complex pair this is half the trace; 2×2 blocks with real
/// eigenvalues are split before this is consulted.
fn block_re(t: &DenseMatrix, start: usize, size: usize) -> f64 {
    if size == 1 {
        t.get(start, start)
    } else {
        (t.get(start, start) + t.get(start + 1, start + 1)) / 2.0
    }
}

/// Applies the plane rotation with first column `(c, s)` to rows/columns
/// `(i, i+1)` of `t` and columns of `u`.
fn apply_rotation(t: &mut DenseMatrix, u: &mut DenseMatrix, i: usize, c: f64, s: f64) {
    let n = t.nrows();
    // T ← GᵀT on rows i, i+1
    for col in 0..n {
        let a = t.get(i, col);
        let b = t.get(i + 1, col);
        t.set(i, col, c * a + s * b);
        t.set(i + 1, col, -s * a + c * b);
    }
    // T ← TG on columns i, i+1
    for row in 0..n {
        let a = t.get(row, i);
        let b = t.get(row, i + 1);
        t.set(row, i, c * a + s * b);
        t.set(row, i + 1, -s * a + c * b);
    }
    for row in 0..u.nrows() {
        let a = u.get(row, i);
        let b = u.get(row, i + 1);
        u.set(row, i, c * a + s * b);
        u.set(row, i + 1, -s * a + c * b);
    }
}

/// Rotates any 2×2 diagonal block whose eigenvalues are real into upper
/// triangular form, so every surviving 2×2 block is a complex pair.
fn split_real_blocks(t: &mut DenseMatrix, u: &mut DenseMatrix, sub_tol: f64) {
    let n = t.nrows();
    let mut i = 0;
    while i + 1 < n {
        if t.get(i + 1, i).abs() <= sub_tol {
            t.set(i + 1, i, 0.0);
            i += 1;
            continue;
        }
        let (a, b) = (t.get(i, i), t.get(i, i + 1));
        let (c, d) = (t.get(i + 1, i), t.get(i + 1, i + 1));
        let disc = (a - d) * (a - d) + 4.0 * b * c;
        if disc < 0.0 {
            i += 2; // genuine complex pair
            continue;
        }
        // Real eigenvalues: rotate the eigenvector of the better-separated
        // one into the leading position.
        let mid = (a + d) / 2.0;
        let half = disc.sqrt() / 2.0;
        let lambda = if a - d >= 0.0 { mid + half } else { mid - half };
        let (v1, v2) = (lambda - d, c);
        let norm = (v1 * v1 + v2 * v2).sqrt();
        if norm > 0.0 {
            apply_rotation(t, u, i, v1 / norm, v2 / norm);
        }
        t.set(i + 1, i, 0.0);
        i += 1;
    }
}

/// Full QR of a tall `m×k` matrix via Householder reflections; returns the
/// square orthogonal factor (`m ≤ 4` in practice).
fn full_qr_q(z: &DenseMatrix) -> DenseMatrix {
    let m = z.nrows();
    let k = z.ncols();
    let mut r = z.clone();
    let mut q = DenseMatrix::identity(m);
    for col in 0..k.min(m) {
        // Householder vector for column `col`, rows col..m
        let mut v: Vec<f64> = (col..m).map(|i| r.get(i, col)).collect();
        let alpha = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign * alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // Apply H = I − 2vvᵀ/‖v‖² to R (left) and accumulate into Q (right).
        for c in 0..k {
            let dot: f64 = (col..m).map(|i| v[i - col] * r.get(i, c)).sum();
            let f = 2.0 * dot / vnorm2;
            for i in col..m {
                r.set(i, c, r.get(i, c) - f * v[i - col]);
            }
        }
        for row in 0..m {
            let dot: f64 = (col..m).map(|i| v[i - col] * q.get(row, i)).sum();
            let f = 2.0 * dot / vnorm2;
            for i in col..m {
                q.set(row, i, q.get(row, i) - f * v[i - col]);
            }
        }
    }
    q
}

/// Swaps the adjacent diagonal blocks at `(i, p)` and `(i+p, q)` with an
/// orthogonal similarity (Sylvester solve + QR), updating `t` and `u`.
fn swap_adjacent(
    t: &mut DenseMatrix,
    u: &mut DenseMatrix,
    i: usize,
    p: usize,
    q: usize,
) -> Result<()> {
    let n = t.nrows();
    let w = p + q;
    // Solve A₁₁X − XA₂₂ = A₁₂ (Kronecker system of size pq ≤ 4).
    let mut sys = na::DMatrix::<f64>::zeros(p * q, p * q);
    let mut rhs = na::DVector::<f64>::zeros(p * q);
    // Unknown X is p×q, vectorized column-major: x_{rc} ↦ index c*p + r.
    for c in 0..q {
        for r in 0..p {
            let row = c * p + r;
            rhs[row] = t.get(i + r, i + p + c);
            for rr in 0..p {
                sys[(row, c * p + rr)] += t.get(i + r, i + rr); // A11 X
            }
            for cc in 0..q {
                sys[(row, cc * p + r)] -= t.get(i + p + cc, i + p + c); // −X A22
            }
        }
    }
    let lu = sys.full_piv_lu();
    let Some(x) = lu.solve(&rhs) else {
        return Err(Error::Numerical(
            "block swap failed: adjacent eigenvalue clusters are too close".into(),
        ));
    };
    // Z = [−X; I_q], full QR, then apply the orthogonal factor to the
    // window rows/columns of T and columns of U.
    let mut z = DenseMatrix::zeros(w, q);
    for c in 0..q {
        for r in 0..p {
            z.set(r, c, -x[c * p + r]);
        }
        z.set(p + c, c, 1.0);
    }
    let g = full_qr_q(&z);
    // T ← ĜᵀTĜ restricted to the window
    let mut rows = DenseMatrix::zeros(w, n);
    for r in 0..w {
        for col in 0..n {
            let mut acc = 0.0;
            for k in 0..w {
                acc += g.get(k, r) * t.get(i + k, col);
            }
            rows.set(r, col, acc);
        }
    }
    for r in 0..w {
        for col in 0..n {
            t.set(i + r, col, rows.get(r, col));
        }
    }
    let mut cols = DenseMatrix::zeros(n, w);
    for row in 0..n {
        for c in 0..w {
            let mut acc = 0.0;
            for k in 0..w {
                acc += t.get(row, i + k) * g.get(k, c);
            }
            cols.set(row, c, acc);
        }
    }
    for row in 0..n {
        for c in 0..w {
            t.set(row, i + c, cols.get(row, c));
        }
    }
    for row in 0..u.nrows() {
        let mut acc = vec![0.0; w];
        for c in 0..w {
            for k in 0..w {
                acc[c] += u.get(row, i + k) * g.get(k, c);
            }
        }
        for c in 0..w {
            u.set(row, i + c, acc[c]);
        }
    }
    // The swapped-out block now leads; zero the subdiagonal fill exactly.
    for r in q..w {
        for c in 0..q {
            t.set(i + r, i + c, 0.0);
        }
    }
    Ok(())
}

/// Ordered real Schur decomposition with stable eigenvalues leading.
pub(crate) fn ordered_schur_stable_first(m: &DenseMatrix) -> Result<OrderedSchur> {
    m.require_square("ordered_schur_stable_first")?;
    let n = m.nrows();
    if n == 0 {
        return Ok(OrderedSchur {
            u: DenseMatrix::zeros(0, 0),
            t: DenseMatrix::zeros(0, 0),
            stable_count: 0,
        });
    }
    let scale = 1.0_f64.max(m.max_abs());
    let schur = na::linalg::Schur::try_new(m.to_na(), 1e-14, 100_000).ok_or_else(|| {
        Error::Numerical("Schur iteration failed to converge".into())
    })?;
    let (q, t_na) = schur.unpack();
    let mut t = DenseMatrix::from_na(&t_na);
    let mut u = DenseMatrix::from_na(&q);
    // Scrub strictly-lower noise below the first subdiagonal.
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            t.set(i, j, 0.0);
        }
    }
    let sub_tol = 1e-12 * scale;
    split_real_blocks(&mut t, &mut u, sub_tol);

    // Bubble stable blocks to the front with adjacent swaps.
    loop {
        let blocks = block_layout(&t, sub_tol);
        let mut swapped = false;
        for bi in 0..blocks.len().saturating_sub(1) {
            let (s1, p) = blocks[bi];
            let (_, qsz) = blocks[bi + 1];
            let re1 = block_re(&t, s1, p);
            let re2 = block_re(&t, s1 + p, qsz);
            if re1 >= 0.0 && re2 < 0.0 {
                swap_adjacent(&mut t, &mut u, s1, p, qsz)?;
                swapped = true;
                break; // layout changed; rescan
            }
        }
        if !swapped {
            break;
        }
    }

    let blocks = block_layout(&t, sub_tol);
    let mut stable_count = 0;
    let mut seen_unstable = false;
    for &(start, size) in &blocks {
        if block_re(&t, start, size) < 0.0 {
            if seen_unstable {
                return Err(Error::Numerical(
                    "block reordering left a stable block behind an unstable one".into(),
                ));
            }
            stable_count += size;
        } else {
            seen_unstable = true;
        }
    }

    // Independent validation: the factorization must still reproduce M and
    // U must be orthogonal.
    let ut_m_u = {
        let mu = m.matmul(&u)?;
        u.transpose().matmul(&mu)?
    };
    let resid = ut_m_u.sub(&t)?.max_abs();
    if resid > 1e-7 * scale {
        return Err(Error::Numerical(format!(
            "ordered Schur residual {resid:.3e} exceeds tolerance"
        )));
    }
    let ortho = u.transpose().matmul(&u)?.sub(&DenseMatrix::identity(n))?.max_abs();
    if ortho > 1e-10 * n as f64 {
        return Err(Error::Numerical(format!(
            "accumulated transform lost orthogonality ({ortho:.3e})"
        )));
    }
    Ok(OrderedSchur { u, t, stable_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::complex_eigenvalues;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn assert_ordered(m: &DenseMatrix) {
        let os = ordered_schur_stable_first(m).unwrap();
        // Reconstruction
        let rec = os.u.matmul(&os.t).unwrap().matmul(&os.u.transpose()).unwrap();
        let err = rec.sub(m).unwrap().max_abs();
        assert!(err <= 1e-8 * 1.0_f64.max(m.max_abs()), "reconstruction {err:.3e}");
        // Stable count agrees with the eigenvalue count.
        let expected = complex_eigenvalues(m)
            .unwrap()
            .iter()
            .filter(|l| l.re < 0.0)
            .count();
        assert_eq!(os.stable_count, expected, "stable count");
        // Leading diagonal blocks are the stable ones.
        let blocks = block_layout(&os.t, 1e-12 * 1.0_f64.max(m.max_abs()));
        let mut unstable_seen = false;
        for &(s, sz) in &blocks {
            let re = block_re(&os.t, s, sz);
            if re < 0.0 {
                assert!(!unstable_seen, "stable block after unstable block");
            } else {
                unstable_seen = true;
            }
        }
    }

    #[test]
    fn splits_two_by_two_real_blocks() {
        // Eigenvalues ±2; many Schur implementations leave this as one
        // 2×2 block, which the splitter must triangularize.
        let m = DenseMatrix::from_row_major(2, 2, vec![0.0, 4.0, 1.0, 0.0]).unwrap();
        let os = ordered_schur_stable_first(&m).unwrap();
        assert_eq!(os.stable_count, 1);
        assert!((os.t.get(0, 0) + 2.0).abs() <= 1e-10);
        assert!((os.t.get(1, 1) - 2.0).abs() <= 1e-10);
        assert_eq!(os.t.get(1, 0), 0.0);
    }

    #[test]
    fn orders_mixed_spectrum() {
        // Diagonalizable with eigenvalues −3, 1, −1, 2 scattered.
        let m = DenseMatrix::from_row_major(
            4,
            4,
            vec![
                1.0, 2.0, 0.0, 1.0, //
                0.0, -3.0, 1.0, 0.0, //
                0.0, 0.0, 2.0, 1.0, //
                0.0, 0.0, 0.0, -1.0,
            ],
        )
        .unwrap();
        assert_ordered(&m);
    }

    #[test]
    fn keeps_complex_pairs_together() {
        // Spectrum {−1 ± 2i, 3}: one stable complex pair, one unstable real.
        let m = DenseMatrix::from_row_major(
            3,
            3,
            vec![3.0, 1.0, 0.5, 0.0, -1.0, 2.0, 0.0, -2.0, -1.0],
        )
        .unwrap();
        let os = ordered_schur_stable_first(&m).unwrap();
        assert_eq!(os.stable_count, 2);
        assert_ordered(&m);
    }

    #[test]
    fn random_matrices_round_trip() {
        let mut rng = StdRng::seed_from_u64(71);
        for _ in 0..50 {
            let n = rng.random_range(2..9);
            let mut m = DenseMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, rng.random_range(-2.0..2.0));
                }
            }
            assert_ordered(&m);
        }
    }

    #[test]
    fn hamiltonian_scalar_example() {
        // M = [[−1, 1], [−1/4, 1]]: stable eigenvalue −√0.75 with graph
        // x = 1 − √0.75, the stabilizing root of x² − 2x + 1/4 = 0.
        let m = DenseMatrix::from_row_major(2, 2, vec![-1.0, 1.0, -0.25, 1.0]).unwrap();
        let os = ordered_schur_stable_first(&m).unwrap();
        assert_eq!(os.stable_count, 1);
        let x = os.u.get(1, 0) / os.u.get(0, 0);
        assert!((x - (1.0 - 0.75_f64.sqrt())).abs() <= 1e-12, "x = {x}");
    }

    #[test]
    fn repeated_eigenvalues_survive() {
        // Defective block with eigenvalue −1 twice plus an unstable 2.
        let m = DenseMatrix::from_row_major(
            3,
            3,
            vec![2.0, 1.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, -1.0],
        )
        .unwrap();
        let os = ordered_schur_stable_first(&m).unwrap();
        assert_eq!(os.stable_count, 2);
        assert_ordered(&m);
    }

    #[test]
    fn already_ordered_is_untouched_fast_path() {
        let m = DenseMatrix::from_diag(&[-2.0, -1.0, 3.0]);
        let os = ordered_schur_stable_first(&m).unwrap();
        assert_eq!(os.stable_count, 2);
    }
}
