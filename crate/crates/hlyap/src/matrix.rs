//! Dense row-major matrices, block partitions, and the handful of dense
//! linear-algebra kernels the rest of the crate is built on.
//!
//! The spectral routines (eigenvalues, singular values) delegate to
//! `nalgebra`; triangular factorizations are implemented here because the
//! callers need failure diagnostics (failing pivot index, zeroed directions)
//! that off-the-shelf factorizations do not report.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dense, row-major, `f64` matrix.
///
/// All public constructors reject non-finite entries; all public operations
/// validate dimensions and return [`Error::Dimension`] instead of panicking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Diagonal matrix from the given entries.
    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "row-major data has {} entries, expected {}x{} = {}",
                data.len(),
                rows,
                cols,
                rows * cols
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Dimension(format!("non-finite entry {bad}")));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged row lengths".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Self::from_row_major(r, c, data)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    /// Raw row-major entries.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what} requires a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub(crate) fn require_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what} requires equal shapes, got {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other, "add")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other, "sub")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "matmul of {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// `(A + Aᵀ)/2`.
    pub fn symmetrized(&self) -> Result<Self> {
        self.require_square("symmetrized")?;
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..i {
                let v = 0.5 * (self.get(i, j) + self.get(j, i));
                out.set(i, j, v);
                out.set(j, i, v);
            }
        }
        Ok(out)
    }

    /// Largest absolute entry (`‖·‖_max`); zero for empty matrices.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm.
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Result<f64> {
        self.require_square("trace")?;
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    /// Maximum absolute asymmetry `‖A − Aᵀ‖_max`.
    pub fn asymmetry(&self) -> Result<f64> {
        self.require_square("asymmetry")?;
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        Ok(worst)
    }

    /// Errors unless `‖A − Aᵀ‖_max ≤ 1e-9 · max(1, ‖A‖_max)`.
    pub fn require_symmetric(&self, what: &str) -> Result<()> {
        let skew = self.asymmetry()?;
        let tol = 1e-9 * self.max_abs().max(1.0);
        if skew > tol {
            return Err(Error::NotSymmetric(format!(
                "{what}: ||A - A'||_max = {skew:.3e} exceeds {tol:.3e}"
            )));
        }
        Ok(())
    }

    /// Copies the `r x c` block with top-left corner `(i0, j0)`.
    pub fn block(&self, i0: usize, j0: usize, r: usize, c: usize) -> Result<Self> {
        if i0 + r > self.rows || j0 + c > self.cols {
            return Err(Error::Dimension(format!(
                "block ({i0},{j0})+{r}x{c} exceeds {}x{}",
                self.rows, self.cols
            )));
        }
        let mut out = Self::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                out.set(i, j, self.get(i0 + i, j0 + j));
            }
        }
        Ok(out)
    }

    /// Writes `block` into `self` with top-left corner `(i0, j0)`.
    pub fn set_block(&mut self, i0: usize, j0: usize, block: &Self) -> Result<()> {
        if i0 + block.rows > self.rows || j0 + block.cols > self.cols {
            return Err(Error::Dimension(format!(
                "set_block ({i0},{j0})+{}x{} exceeds {}x{}",
                block.rows, block.cols, self.rows, self.cols
            )));
        }
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(i0 + i, j0 + j, block.get(i, j));
            }
        }
        Ok(())
    }

    /// `diag(d) · A` (scales row `i` by `d[i]`).
    pub fn scale_rows(&self, d: &[f64]) -> Result<Self> {
        if d.len() != self.rows {
            return Err(Error::Dimension(format!(
                "scale_rows with {} factors on {} rows",
                d.len(),
                self.rows
            )));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j) * d[i]);
            }
        }
        Ok(out)
    }

    /// `A · diag(d)` (scales column `j` by `d[j]`).
    pub fn scale_cols(&self, d: &[f64]) -> Result<Self> {
        if d.len() != self.cols {
            return Err(Error::Dimension(format!(
                "scale_cols with {} factors on {} cols",
                d.len(),
                self.cols
            )));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j) * d[j]);
            }
        }
        Ok(out)
    }

    pub(crate) fn to_na(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_na(m: &DMatrix<f64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, m[(i, j)]);
            }
        }
        out
    }
}

/// Contiguous block partition of the index set `{0, …, n-1}`.
///
/// A partition with sizes `[k₁, …, k_N]` tiles an `n x n` matrix into `N²`
/// blocks `A_ij` of shape `kᵢ x kⱼ`, with `Σ kᵢ = n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<usize>,
}

impl Partition {
    /// Builds a partition from block sizes; every size must be positive.
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Partition("no blocks".into()));
        }
        if blocks.iter().any(|&k| k == 0) {
            return Err(Error::Partition("zero-sized block".into()));
        }
        Ok(Self { blocks })
    }

    /// The all-scalar partition `{1, …, 1}` of order `n`.
    pub fn scalar(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    /// Block sizes.
    pub fn sizes(&self) -> &[usize] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Total dimension `Σ kᵢ`.
    pub fn total(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// True when every block is scalar.
    pub fn is_scalar(&self) -> bool {
        self.blocks.iter().all(|&k| k == 1)
    }

    /// Start offset of each block.
    pub fn offsets(&self) -> Vec<usize> {
        let mut offs = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for &k in &self.blocks {
            offs.push(acc);
            acc += k;
        }
        offs
    }

    /// Errors unless the partition tiles an `n x n` matrix.
    pub fn require_total(&self, n: usize) -> Result<()> {
        if self.total() == n {
            Ok(())
        } else {
            Err(Error::Partition(format!(
                "partition totals {}, matrix has order {n}",
                self.total()
            )))
        }
    }

    /// Copies block `(i, j)` out of `m`.
    pub fn block_of(&self, m: &DenseMatrix, i: usize, j: usize) -> Result<DenseMatrix> {
        m.require_square("block_of")?;
        self.require_total(m.nrows())?;
        let offs = self.offsets();
        m.block(offs[i], offs[j], self.blocks[i], self.blocks[j])
    }
}

/// Extremal eigenvalues of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymEigSummary {
    pub min: f64,
    pub max: f64,
}

/// Largest real part over the spectrum of a square matrix.
///
/// The eigenvalues are taken from the real Schur form, so complex pairs are
/// handled without forming complex arithmetic on the caller's side.
pub fn spectral_abscissa(a: &DenseMatrix) -> Result<f64> {
    a.require_square("spectral_abscissa")?;
    if a.nrows() == 0 {
        return Err(Error::Dimension("spectral_abscissa of empty matrix".into()));
    }
    let eigs = complex_eigenvalues(a)?;
    Ok(eigs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Full complex spectrum of a square real matrix.
pub fn complex_eigenvalues(a: &DenseMatrix) -> Result<Vec<Complex<f64>>> {
    a.require_square("complex_eigenvalues")?;
    let na = a.to_na();
    let eigs = na.complex_eigenvalues();
    Ok(eigs.iter().copied().collect())
}

/// Extremal eigenvalues of a symmetric matrix.
///
/// The input must be symmetric within `1e-9 · max(1, ‖S‖_max)`; it is
/// symmetrized by averaging before factorization so roundoff-level skew
/// cannot leak into the eigensolver.
pub fn sym_eig_bounds(s: &DenseMatrix) -> Result<SymEigSummary> {
    s.require_symmetric("sym_eig_bounds")?;
    if s.nrows() == 0 {
        return Err(Error::Dimension("sym_eig_bounds of empty matrix".into()));
    }
    let sym = s.symmetrized()?;
    let eig = nalgebra::SymmetricEigen::new(sym.to_na());
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &l in eig.eigenvalues.iter() {
        min = min.min(l);
        max = max.max(l);
    }
    Ok(SymEigSummary { min, max })
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(s: &DenseMatrix) -> Result<Vec<f64>> {
    s.require_symmetric("sym_eigenvalues")?;
    let sym = s.symmetrized()?;
    let eig = nalgebra::SymmetricEigen::new(sym.to_na());
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// Smallest singular value of a (possibly rectangular) matrix.
pub fn min_singular_value(b: &DenseMatrix) -> Result<f64> {
    if b.nrows() == 0 || b.ncols() == 0 {
        return Err(Error::Dimension("min_singular_value of empty matrix".into()));
    }
    let svd = b.to_na().svd(false, false);
    Ok(svd
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

/// Largest singular value (spectral norm `‖·‖₂`).
pub fn max_singular_value(b: &DenseMatrix) -> Result<f64> {
    if b.nrows() == 0 || b.ncols() == 0 {
        return Err(Error::Dimension("max_singular_value of empty matrix".into()));
    }
    let svd = b.to_na().svd(false, false);
    Ok(svd.singular_values.iter().copied().fold(0.0, f64::max))
}

/// Which triangular factorization [`cholesky_or_ldl`] performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorMode {
    /// Plain Cholesky; errors on the first non-positive pivot.
    Cholesky,
    /// Root-free LDLᵀ folded as `L·D^{1/2}`, with non-positive pivot
    /// directions zeroed out and reported instead of failing.
    Ldl,
}

/// Result of [`cholesky_or_ldl`]: a lower-triangular factor with
/// `F·Fᵀ ≈ S` (exactly the positive-semidefinite part of `S` in LDL mode).
#[derive(Debug, Clone)]
pub struct FactorOutcome {
    /// Lower-triangular factor.
    pub factor: DenseMatrix,
    /// Indices of directions whose pivot was non-positive and was zeroed
    /// (always empty in Cholesky mode).
    pub zeroed: Vec<usize>,
}

/// Lower-triangular factorization of a symmetric matrix.
///
/// In [`FactorMode::Cholesky`] the first non-positive pivot aborts with the
/// failing index. [`FactorMode::Ldl`] instead zeroes such directions and
/// reports them, which is what iterative refinement wants when its iterates
/// are only positive semidefinite up to roundoff.
pub fn cholesky_or_ldl(s: &DenseMatrix, mode: FactorMode) -> Result<FactorOutcome> {
    s.require_symmetric("cholesky_or_ldl")?;
    let a = s.symmetrized()?;
    let n = a.nrows();
    let mut f = DenseMatrix::zeros(n, n);
    let mut zeroed = Vec::new();
    // Pivot deadband for LDL mode: directions this close to zero carry no
    // reliable sign information and are dropped with the negative ones.
    let tol = 1e-14 * a.max_abs().max(1.0);
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= f.get(j, k) * f.get(j, k);
        }
        match mode {
            FactorMode::Cholesky => {
                if d <= 0.0 {
                    return Err(Error::NotPositiveDefinite { pivot: j, value: d });
                }
            }
            FactorMode::Ldl => {
                if d <= tol {
                    zeroed.push(j);
                    continue; // column stays zero
                }
            }
        }
        let root = d.sqrt();
        f.set(j, j, root);
        for i in (j + 1)..n {
            let mut v = a.get(i, j);
            for k in 0..j {
                v -= f.get(i, k) * f.get(j, k);
            }
            f.set(i, j, v / root);
        }
    }
    Ok(FactorOutcome { factor: f, zeroed })
}

/// `-(A·X + X·Aᵀ + Q)`, the Lyapunov slack every certificate is judged by.
pub fn lyapunov_slack(a: &DenseMatrix, x: &DenseMatrix, q: Option<&DenseMatrix>) -> Result<DenseMatrix> {
    let ax = a.matmul(x)?;
    let mut s = ax.add(&ax.transpose())?;
    // A X + (A X)ᵀ = A X + Xᵀ Aᵀ = A X + X Aᵀ for symmetric X; callers pass
    // symmetric X, but recompute faithfully for the general case.
    if x.asymmetry()? > 0.0 {
        let xat = x.matmul(&a.transpose())?;
        s = ax.add(&xat)?;
    }
    if let Some(q) = q {
        s = s.add(q)?;
    }
    Ok(s.scaled(-1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn m2(a: f64, b: f64, c: f64, d: f64) -> DenseMatrix {
        DenseMatrix::from_rows(&[vec![a, b], vec![c, d]]).unwrap()
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert!(DenseMatrix::from_rows(&[vec![1.0, f64::NAN]]).is_err());
        assert!(DenseMatrix::from_row_major(1, 2, vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn rejects_shape_mismatches() {
        let a = DenseMatrix::zeros(2, 3);
        let b = DenseMatrix::zeros(3, 2);
        assert!(matches!(a.add(&b), Err(Error::Dimension(_))));
        assert!(matches!(a.trace(), Err(Error::Dimension(_))));
        assert!(a.matmul(&b).is_ok());
        assert!(b.matmul(&b).is_err());
    }

    #[test]
    fn spectral_abscissa_examples() {
        // Pure rotation: eigenvalues ±i, abscissa 0.
        let rot = m2(0.0, 1.0, -1.0, 0.0);
        assert!(spectral_abscissa(&rot).unwrap().abs() <= 1e-12);
        // Double eigenvalue -3.
        let a = m2(-1.0, -2.0, 2.0, -5.0);
        assert!((spectral_abscissa(&a).unwrap() + 3.0).abs() <= 1e-9);
        // Non-square input errors.
        let r = DenseMatrix::zeros(2, 3);
        assert!(matches!(spectral_abscissa(&r), Err(Error::Dimension(_))));
    }

    #[test]
    fn sym_eig_bounds_example() {
        let s = m2(1.0, -2.0, -2.0, 5.0);
        let b = sym_eig_bounds(&s).unwrap();
        let r8 = 8.0_f64.sqrt();
        assert!((b.min - (3.0 - r8)).abs() <= 1e-12);
        assert!((b.max - (3.0 + r8)).abs() <= 1e-12);
    }

    #[test]
    fn sym_eig_bounds_rejects_asymmetric() {
        let s = m2(1.0, 1.0, 0.0, 1.0);
        assert!(matches!(sym_eig_bounds(&s), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn rayleigh_quotients_stay_within_bounds() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in [1usize, 2, 3, 5, 8, 13] {
            let mut s = DenseMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v: f64 = rng.random_range(-2.0..2.0);
                    s.set(i, j, v);
                    s.set(j, i, v);
                }
            }
            let b = sym_eig_bounds(&s).unwrap();
            for _ in 0..20 {
                let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let norm2: f64 = v.iter().map(|x| x * x).sum();
                if norm2 < 1e-12 {
                    continue;
                }
                let mut sv = vec![0.0; n];
                for i in 0..n {
                    for j in 0..n {
                        sv[i] += s.get(i, j) * v[j];
                    }
                }
                let quot = v.iter().zip(&sv).map(|(a, b)| a * b).sum::<f64>() / norm2;
                assert!(quot >= b.min - 1e-9 && quot <= b.max + 1e-9);
            }
        }
    }

    #[test]
    fn singular_value_examples() {
        let d = m2(3.0, 0.0, 0.0, 0.5);
        assert!((min_singular_value(&d).unwrap() - 0.5).abs() <= 1e-12);
        let row = DenseMatrix::from_rows(&[vec![0.5, 0.0]]).unwrap();
        assert!((min_singular_value(&row).unwrap() - 0.5).abs() <= 1e-12);
        let sing = m2(1.0, 1.0, 1.0, 1.0);
        assert!(min_singular_value(&sing).unwrap().abs() <= 1e-12);
        assert!((max_singular_value(&sing).unwrap() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn min_singular_value_matches_gram_eigenvalue() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let r = rng.random_range(1..6);
            let c = rng.random_range(1..6);
            let mut b = DenseMatrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    b.set(i, j, rng.random_range(-1.0..1.0));
                }
            }
            let smin = min_singular_value(&b).unwrap();
            let gram = if r <= c {
                b.matmul(&b.transpose()).unwrap()
            } else {
                b.transpose().matmul(&b).unwrap()
            };
            let lmin = sym_eig_bounds(&gram).unwrap().min.max(0.0);
            assert!(
                (smin - lmin.sqrt()).abs() <= 1e-10 * smin.max(1.0),
                "svd {smin} vs gram {}",
                lmin.sqrt()
            );
        }
    }

    #[test]
    fn cholesky_worked_example() {
        let s = m2(4.0, 2.0, 2.0, 2.0);
        let f = cholesky_or_ldl(&s, FactorMode::Cholesky).unwrap();
        let expect = m2(2.0, 0.0, 1.0, 1.0);
        assert!(f.factor.sub(&expect).unwrap().max_abs() <= 1e-14);
        assert!(f.zeroed.is_empty());
    }

    #[test]
    fn cholesky_reports_failing_pivot() {
        let s = DenseMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, -2.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ])
        .unwrap();
        match cholesky_or_ldl(&s, FactorMode::Cholesky) {
            Err(Error::NotPositiveDefinite { pivot, value }) => {
                assert_eq!(pivot, 1);
                assert!((value + 2.0).abs() <= 1e-14);
            }
            other => panic!("expected pivot failure, got {other:?}"),
        }
    }

    #[test]
    fn ldl_zeroes_negative_directions() {
        let s = m2(1.0, 0.0, 0.0, -1.0);
        let f = cholesky_or_ldl(&s, FactorMode::Ldl).unwrap();
        assert_eq!(f.zeroed, vec![1]);
        let expect = m2(1.0, 0.0, 0.0, 0.0);
        assert!(f.factor.sub(&expect).unwrap().max_abs() <= 1e-14);
    }

    #[test]
    fn cholesky_residual_on_random_positive_definite() {
        let mut rng = StdRng::seed_from_u64(23);
        for n in [2usize, 4, 9, 16] {
            let mut r = DenseMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    r.set(i, j, rng.random_range(-1.0..1.0));
                }
            }
            let mut s = r.matmul(&r.transpose()).unwrap();
            for i in 0..n {
                s.set(i, i, s.get(i, i) + 0.1);
            }
            let f = cholesky_or_ldl(&s, FactorMode::Cholesky).unwrap().factor;
            let resid = f.matmul(&f.transpose()).unwrap().sub(&s).unwrap();
            assert!(resid.fro_norm() <= 1e-10 * s.fro_norm());
        }
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![2, 0, 1]).is_err());
        let p = Partition::new(vec![2, 1]).unwrap();
        assert_eq!(p.total(), 3);
        assert_eq!(p.offsets(), vec![0, 2]);
        assert!(p.require_total(4).is_err());
        assert!(Partition::scalar(3).unwrap().is_scalar());
    }

    #[test]
    fn partition_block_extraction() {
        let a = DenseMatrix::from_rows(&[
            vec![-2.0, 0.0, 1.0],
            vec![0.0, -2.0, 0.0],
            vec![0.5, 0.0, -3.0],
        ])
        .unwrap();
        let p = Partition::new(vec![2, 1]).unwrap();
        let a12 = p.block_of(&a, 0, 1).unwrap();
        assert_eq!(a12.nrows(), 2);
        assert_eq!(a12.ncols(), 1);
        assert_eq!(a12.get(0, 0), 1.0);
        assert_eq!(a12.get(1, 0), 0.0);
    }

    #[test]
    fn lyapunov_slack_is_symmetric() {
        let a = m2(-1.0, -2.0, 2.0, -5.0);
        let s = lyapunov_slack(&a, &DenseMatrix::identity(2), None).unwrap();
        let expect = m2(2.0, 0.0, 0.0, 10.0);
        assert!(s.sub(&expect).unwrap().max_abs() <= 1e-14);
    }
}
