//! Constructive block-diagonal Lyapunov analysis.
//!
//! Given a Hurwitz matrix `A` and a partition of its index set, this crate
//! builds diagonal or block-diagonal solutions `X ≻ 0` of the Lyapunov
//! inequality `A X + X Aᵀ ≺ 0` and verifiable certificates for them, using
//! three constructive routes instead of semidefinite programming:
//!
//! * **Comparison-matrix scalings** — when the block comparison matrix of
//!   `-A` is a nonsingular M-matrix, its Perron vectors give a diagonal
//!   solution in closed form, and a diagonal similarity makes the Lyapunov
//!   slack strictly diagonally dominant ([`scaling`]).
//! * **Linear-programming relaxations** — trace-minimal solutions over the
//!   diagonally dominant cone and its factor-width-2 refinements, driven by
//!   a self-contained dense simplex solver ([`cones`], [`lp`], [`pursuit`]).
//! * **Small-gain Riccati coupling** — for two-block partitions, H∞ norms of
//!   the off-diagonal couplings certify a block-diagonal solution assembled
//!   from two algebraic Riccati equations ([`smallgain`]).
//!
//! The [`bench`] module generates the reference systems used throughout the
//! test-suite (heat chains, cyclic interconnections, random well-conditioned
//! corpora), and the `hlyap` binary exposes everything as a batch CLI.

pub mod bench;
pub mod classes;
pub mod cones;
pub mod lp;
pub mod matrix;
pub mod mmio;
pub mod pursuit;
pub mod scaling;
mod schur;
pub mod smallgain;

pub use matrix::{DenseMatrix, Partition};

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A matrix or vector had incompatible or non-square dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A matrix expected to be symmetric was not, beyond tolerance.
    #[error("matrix is not symmetric: {0}")]
    NotSymmetric(String),
    /// A partition does not tile the matrix it is paired with.
    #[error("invalid partition: {0}")]
    Partition(String),
    /// Cholesky factorization hit a non-positive pivot.
    #[error("matrix is not positive definite: leading minor {pivot} has non-positive pivot {value:.6e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    /// File parsing failed.
    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    /// File IO failed.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// The block comparison matrix is not an H+ matrix (or not strictly so
    /// where strictness is required).
    #[error("not an H+ matrix: {0}")]
    NotHPlus(String),
    /// A matrix required to be Hurwitz is not.
    #[error("not Hurwitz: {0}")]
    NotHurwitz(String),
    /// Positive scalings exist only for nonsingular M-matrices; this input
    /// has none.
    #[error("no positive scaling exists: {0}")]
    Infeasible(String),
    /// The Perron eigenvector had nonpositive components and the LP fallback
    /// also failed.
    #[error("irreducibility fallback failed: {0}")]
    IrreducibilityFallback(String),
    /// An H∞ norm or Riccati routine received a system whose `A` block is
    /// not Hurwitz.
    #[error("state matrix of block {block} is not Hurwitz (abscissa {abscissa:.6e})")]
    NotHurwitzBlock { block: usize, abscissa: f64 },
    /// The small-gain condition ‖K₁‖∞·‖K₂‖∞ < 1 fails.
    #[error("small-gain condition violated: ||K1||*||K2|| = {product:.6e} >= 1")]
    SmallGainViolated { product: f64 },
    /// A Riccati Hamiltonian has eigenvalues on the imaginary axis, so no
    /// stabilizing solution exists at this gain.
    #[error("Hamiltonian has imaginary-axis eigenvalues (min |Re| = {min_abs_re:.6e})")]
    ImaginaryAxisEigenvalues { min_abs_re: f64 },
    /// Basis pursuit could not find any feasible starting cone.
    #[error("no feasible initial point: {0}")]
    NoInitialPoint(String),
    /// A cone builder received a basis matrix of deficient row rank.
    #[error("cone basis is rank deficient: {0}")]
    RankDeficientBasis(String),
    /// An iterative kernel failed to converge or an internal consistency
    /// check tripped.
    #[error("internal numerical failure: {0}")]
    Numerical(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
