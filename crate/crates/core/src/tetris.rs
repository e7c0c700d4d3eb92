//! Spectral tetris: sparse construction of fusion frames whose frame
//! operator has a prescribed spectrum.
//!
//! The synthesis-style matrix `W` is filled top to bottom with unit-norm
//! rows so that column `j` ends up with squared norm `lambda_j` and distinct
//! columns stay orthogonal. Integer eigenvalue mass is spent on singleton
//! rows `e_j`; a fractional residual `r` in `(0, 1)` is spent by a two-row
//! hand-off block
//!
//! ```text
//! sqrt(r/2) e_j + sqrt(1 - r/2) e_{j+1}
//! sqrt(r/2) e_j - sqrt(1 - r/2) e_{j+1}
//! ```
//!
//! which deposits `r` in column `j` and `2 - r` in column `j+1`, so the next
//! eigenvalue is decremented by the carry. Rows are then dealt round-robin
//! to `N` subspaces; rows landing in the same subspace are `N` apart, and as
//! long as no column holds more than `N` nonzero rows the deal produces
//! orthonormal bases.
//!
//! Residual bookkeeping snaps values within [`INTEGER_SNAP_TOL`] of an
//! integer, so near-integer input spectra behave like exact ones and the
//! whole construction is deterministic: equal specs give bit-identical
//! matrices.

use std::fmt;

use crate::model::{FusionFrame, ModelError, SpectrumSpec, Subspace};
use crate::numerics::Matrix;
use crate::{DEFAULT_ORTHO_TOL, INTEGER_SNAP_TOL};

/// How a row of the construction matrix was emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// A standard basis vector spending one unit of a column's mass.
    Singleton,
    /// First row of a fractional hand-off block (the `+` sign).
    BlockUpper,
    /// Second row of a fractional hand-off block (the `-` sign).
    BlockLower,
}

/// Occupancy of one column of the construction matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnProfile {
    /// Number of nonzero entries in the column.
    pub nonzero_count: usize,
    /// Whether a hand-off block opens in this column.
    pub has_initial: bool,
    /// Whether a hand-off block from the previous column ends here.
    pub has_terminal: bool,
}

/// The construction matrix together with per-row provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct TetrisMatrix {
    matrix: Matrix,
    row_kinds: Vec<RowKind>,
}

impl TetrisMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn row_kinds(&self) -> &[RowKind] {
        &self.row_kinds
    }

    /// Per-column nonzero counts and block start/end flags.
    pub fn column_profiles(&self) -> Vec<ColumnProfile> {
        let m = self.matrix.cols();
        let mut profiles =
            vec![ColumnProfile { nonzero_count: 0, has_initial: false, has_terminal: false }; m];
        for i in 0..self.matrix.rows() {
            for j in 0..m {
                if self.matrix.get(i, j) != 0.0 {
                    profiles[j].nonzero_count += 1;
                }
            }
            // Each block row carries exactly two nonzeros: the opening
            // entry in some column j and the closing entry in j + 1.
            if self.row_kinds[i] == RowKind::BlockUpper {
                let row = self.matrix.row(i);
                let j = row.iter().position(|&x| x != 0.0).expect("block rows are nonzero");
                profiles[j].has_initial = true;
                profiles[j + 1].has_terminal = true;
            }
        }
        profiles
    }
}

/// A reason a spectrum cannot be realized by this construction.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Eigenvalue sum is not the integer `N * m`.
    FactorizationFailed { sum: f64, expected: f64 },
    /// Integer construction requires every eigenvalue to be an integer.
    NonIntegerEigenvalue { index: usize, value: f64 },
    /// The largest eigenvalue exceeds the subspace count, so some column
    /// would need more rows than the round-robin deal can keep orthogonal.
    LargestExceedsSubspaceCount { value: f64, count: usize },
    /// With fractional eigenvalues present, the smallest one must be >= 2
    /// to absorb the hand-off carries.
    LastEigenvalueBelowTwo { value: f64 },
    /// The first fractional eigenvalue must satisfy floor(lambda) <= N - 3.
    FractionalFloorTooLarge { index: usize, value: f64, limit: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FactorizationFailed { sum, expected } => {
                write!(
                    f,
                    "eigenvalue sum {sum} must equal subspace_count * subspace_dim = {expected}"
                )
            }
            Violation::NonIntegerEigenvalue { index, value } => {
                write!(f, "eigenvalue {value} at index {index} is not an integer")
            }
            Violation::LargestExceedsSubspaceCount { value, count } => {
                write!(f, "largest eigenvalue {value} exceeds the subspace count {count}")
            }
            Violation::LastEigenvalueBelowTwo { value } => {
                write!(f, "smallest eigenvalue {value} is below 2 while fractional eigenvalues are present")
            }
            Violation::FractionalFloorTooLarge { index, value, limit } => {
                write!(f, "first fractional eigenvalue {value} (index {index}) must have floor <= {limit}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TetrisError {
    /// The spectrum fails the preconditions; all violated ones are listed.
    Infeasible(Vec<Violation>),
    /// Bookkeeping ran off the rails: a residual went negative or a block
    /// wanted a column past the last one. Cannot happen for feasible specs.
    InternalOverrun { column: usize, residual: f64 },
    /// The emitted row count disagrees with `N * m`.
    RowCountMismatch { got: usize, expected: usize },
    /// Two rows dealt to the same subspace overlap in some column.
    OrthogonalityViolation { subspace: usize, row_a: usize, row_b: usize, column: usize },
    /// The spectrum itself was malformed (not descending, nonpositive, ...).
    InvalidSpectrum(ModelError),
}

impl fmt::Display for TetrisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TetrisError::Infeasible(violations) => {
                write!(f, "spectrum is not feasible:")?;
                for v in violations {
                    write!(f, " [{v}]")?;
                }
                Ok(())
            }
            TetrisError::InternalOverrun { column, residual } => {
                write!(f, "construction overran at column {column} (residual {residual})")
            }
            TetrisError::RowCountMismatch { got, expected } => {
                write!(f, "emitted {got} rows, expected {expected}")
            }
            TetrisError::OrthogonalityViolation { subspace, row_a, row_b, column } => write!(
                f,
                "rows {row_a} and {row_b} of subspace {subspace} overlap in column {column}"
            ),
            TetrisError::InvalidSpectrum(e) => write!(f, "invalid spectrum: {e}"),
        }
    }
}

impl std::error::Error for TetrisError {}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() <= INTEGER_SNAP_TOL
}

fn snap(x: f64) -> f64 {
    if near_integer(x) {
        x.round()
    } else {
        x
    }
}

/// Preconditions of the integer construction: integer eigenvalues, the sum
/// factorization, and `lambda_1 <= N`. Returns every violated condition.
pub fn check_integer_feasibility(spec: &SpectrumSpec) -> Vec<Violation> {
    let mut violations = Vec::new();
    if spec.factorization_residual() > INTEGER_SNAP_TOL {
        violations.push(Violation::FactorizationFailed {
            sum: spec.lambdas().iter().sum(),
            expected: spec.target_sum(),
        });
    }
    for (i, &l) in spec.lambdas().iter().enumerate() {
        if !near_integer(l) {
            violations.push(Violation::NonIntegerEigenvalue { index: i, value: l });
        }
    }
    let n = spec.num_subspaces();
    if spec.lambdas()[0] > n as f64 + INTEGER_SNAP_TOL {
        violations
            .push(Violation::LargestExceedsSubspaceCount { value: spec.lambdas()[0], count: n });
    }
    violations
}

/// Preconditions of the real construction. For an all-integer spectrum
/// these coincide with the integer case; with fractional eigenvalues the
/// hand-off blocks additionally require the smallest eigenvalue to be >= 2
/// and the first fractional one to satisfy `floor(lambda) <= N - 3`.
pub fn check_real_feasibility(spec: &SpectrumSpec) -> Vec<Violation> {
    let mut violations = Vec::new();
    if spec.factorization_residual() > INTEGER_SNAP_TOL {
        violations.push(Violation::FactorizationFailed {
            sum: spec.lambdas().iter().sum(),
            expected: spec.target_sum(),
        });
    }
    let n = spec.num_subspaces();
    if spec.lambdas()[0] > n as f64 + INTEGER_SNAP_TOL {
        violations
            .push(Violation::LargestExceedsSubspaceCount { value: spec.lambdas()[0], count: n });
    }
    let first_fractional = spec.lambdas().iter().position(|&l| !near_integer(l));
    if let Some(j0) = first_fractional {
        let last = *spec.lambdas().last().expect("spectrum is nonempty");
        if last < 2.0 - INTEGER_SNAP_TOL {
            violations.push(Violation::LastEigenvalueBelowTwo { value: last });
        }
        let limit = n as i64 - 3;
        let value = spec.lambdas()[j0];
        if (value.floor() as i64) > limit {
            violations.push(Violation::FractionalFloorTooLarge { index: j0, value, limit });
        }
    }
    violations
}

/// Emits the construction rows for a spectrum. Infallible bookkeeping is
/// not assumed: negative residuals and column overruns are reported, which
/// matters for callers probing past the sufficient conditions.
pub(crate) fn build_rows(spec: &SpectrumSpec) -> Result<(Matrix, Vec<RowKind>), TetrisError> {
    let m_cols = spec.lambdas().len();
    let expected_rows = spec.num_subspaces() * spec.subspace_dim();
    let mut residual: Vec<f64> = spec.lambdas().to_vec();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(expected_rows);
    let mut kinds: Vec<RowKind> = Vec::with_capacity(expected_rows);

    for j in 0..m_cols {
        loop {
            residual[j] = snap(residual[j]);
            let r = residual[j];
            if r < 0.0 {
                return Err(TetrisError::InternalOverrun { column: j, residual: r });
            }
            if r == 0.0 {
                break;
            }
            if r >= 1.0 {
                let mut row = vec![0.0; m_cols];
                row[j] = 1.0;
                rows.push(row);
                kinds.push(RowKind::Singleton);
                residual[j] = r - 1.0;
            } else {
                // 0 < r < 1: spend the residual with a hand-off block and
                // charge the carry 2 - r to the next column.
                if j + 1 == m_cols {
                    return Err(TetrisError::InternalOverrun { column: j, residual: r });
                }
                let a = (r / 2.0).sqrt();
                let b = (1.0 - r / 2.0).sqrt();
                let mut upper = vec![0.0; m_cols];
                upper[j] = a;
                upper[j + 1] = b;
                let mut lower = vec![0.0; m_cols];
                lower[j] = a;
                lower[j + 1] = -b;
                rows.push(upper);
                kinds.push(RowKind::BlockUpper);
                rows.push(lower);
                kinds.push(RowKind::BlockLower);
                residual[j] = 0.0;
                residual[j + 1] -= 2.0 - r;
                break;
            }
        }
    }

    if rows.len() != expected_rows {
        return Err(TetrisError::RowCountMismatch { got: rows.len(), expected: expected_rows });
    }
    Ok((Matrix::from_rows(&rows), kinds))
}

/// Deals the rows of the construction matrix round-robin to `n` subspaces:
/// row `k` (0-based) goes to subspace `k mod n`, so each subspace receives
/// `m` rows spaced `n` apart. Verifies that rows sharing a subspace have
/// disjoint supports, which makes every basis orthonormal.
pub fn assign_subspaces(t: &TetrisMatrix, n: usize, m: usize) -> Result<FusionFrame, TetrisError> {
    let w = t.matrix();
    if w.rows() != n * m {
        return Err(TetrisError::RowCountMismatch { got: w.rows(), expected: n * m });
    }
    let mut subspaces = Vec::with_capacity(n);
    for i in 0..n {
        let row_indices: Vec<usize> = (0..m).map(|k| i + k * n).collect();
        for a in 0..m {
            for b in (a + 1)..m {
                let (ra, rb) = (row_indices[a], row_indices[b]);
                for col in 0..w.cols() {
                    if w.get(ra, col) != 0.0 && w.get(rb, col) != 0.0 {
                        return Err(TetrisError::OrthogonalityViolation {
                            subspace: i,
                            row_a: ra,
                            row_b: rb,
                            column: col,
                        });
                    }
                }
            }
        }
        let columns: Vec<Vec<f64>> = row_indices.iter().map(|&r| w.row(r).to_vec()).collect();
        let basis = Matrix::from_columns(w.cols(), &columns);
        let subspace = Subspace::from_basis(basis, DEFAULT_ORTHO_TOL)
            .expect("disjoint unit-norm rows form an orthonormal basis");
        subspaces.push(subspace);
    }
    FusionFrame::unit_weights(subspaces).map_err(TetrisError::InvalidSpectrum)
}

/// Integer-spectrum construction: `lambda_j` copies of `e_j`, dealt
/// round-robin into `N` subspaces of dimension `m` with unit weights.
pub fn construct_integer(spec: &SpectrumSpec) -> Result<(TetrisMatrix, FusionFrame), TetrisError> {
    let violations = check_integer_feasibility(spec);
    if !violations.is_empty() {
        return Err(TetrisError::Infeasible(violations));
    }
    finish(spec)
}

/// Real-spectrum construction: singleton rows plus fractional hand-off
/// blocks, dealt round-robin into `N` subspaces of dimension `m`.
pub fn construct_real(spec: &SpectrumSpec) -> Result<(TetrisMatrix, FusionFrame), TetrisError> {
    let violations = check_real_feasibility(spec);
    if !violations.is_empty() {
        return Err(TetrisError::Infeasible(violations));
    }
    finish(spec)
}

fn finish(spec: &SpectrumSpec) -> Result<(TetrisMatrix, FusionFrame), TetrisError> {
    let (matrix, row_kinds) = build_rows(spec)?;
    let t = TetrisMatrix { matrix, row_kinds };
    let ff = assign_subspaces(&t, spec.num_subspaces(), spec.subspace_dim())?;
    Ok((t, ff))
}

/// The one-dimensional case: a unit-norm frame of `n` vectors in `R^M`
/// whose frame operator has the prescribed eigenvalues.
pub fn construct_frame_vectors(lambdas: &[f64], n: usize) -> Result<Vec<Vec<f64>>, TetrisError> {
    let spec = SpectrumSpec::new(lambdas.to_vec(), n, 1).map_err(TetrisError::InvalidSpectrum)?;
    let violations = check_real_feasibility(&spec);
    if !violations.is_empty() {
        return Err(TetrisError::Infeasible(violations));
    }
    let (matrix, _) = build_rows(&spec)?;
    Ok((0..matrix.rows()).map(|i| matrix.row(i).to_vec()).collect())
}
