//! Dense linear algebra kernels: a row-major matrix type, a cyclic Jacobi
//! eigensolver for symmetric matrices, Gram-Schmidt orthonormalization,
//! deterministic orthonormal basis completion, and a Cholesky solver for
//! symmetric positive-definite systems.
//!
//! Design notes:
//! * Pure `f64`, no external linear algebra backend. Target sizes are
//!   ambient dimensions in the tens-to-hundreds, where Jacobi's determinism
//!   and accuracy matter more than speed.
//! * Every routine is deterministic: identical inputs give bit-identical
//!   outputs, which the golden construction tests rely on.

use std::fmt;

/// Error type for the numerics layer.
#[derive(Debug, Clone, PartialEq)]
pub enum NumericsError {
    /// Matrix data contained NaN or an infinity, or had the wrong length.
    InvalidData {
        expected_len: usize,
        got_len: usize,
    },
    NonFinite,
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    NotSymmetric {
        residual: f64,
    },
    NotOrthonormal {
        residual: f64,
    },
    /// Jacobi sweeps failed to reduce the off-diagonal mass.
    NoConvergence {
        sweeps: usize,
    },
    /// A Cholesky pivot fell below tolerance: the operator is not
    /// positive-definite to working accuracy.
    SingularOperator {
        pivot: f64,
    },
}

impl fmt::Display for NumericsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericsError::InvalidData { expected_len, got_len } => {
                write!(
                    f,
                    "matrix data length {got_len} does not match shape ({expected_len} expected)"
                )
            }
            NumericsError::NonFinite => write!(f, "matrix entries must be finite"),
            NumericsError::ShapeMismatch { expected, got } => {
                write!(
                    f,
                    "shape mismatch: expected {}x{}, got {}x{}",
                    expected.0, expected.1, got.0, got.1
                )
            }
            NumericsError::NotSymmetric { residual } => {
                write!(f, "matrix is not symmetric (residual {residual:.3e})")
            }
            NumericsError::NotOrthonormal { residual } => {
                write!(f, "columns are not orthonormal (residual {residual:.3e})")
            }
            NumericsError::NoConvergence { sweeps } => {
                write!(f, "Jacobi rotations did not converge after {sweeps} sweeps")
            }
            NumericsError::SingularOperator { pivot } => {
                write!(f, "operator is not positive-definite (pivot {pivot:.3e})")
            }
        }
    }
}

impl std::error::Error for NumericsError {}

/// Dense row-major matrix of `f64`.
///
/// Rows must be positive; zero columns are allowed so that the orthonormal
/// completion of a square orthogonal matrix has a well-defined (empty)
/// result.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data, validating length and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, NumericsError> {
        assert!(rows > 0, "matrix must have at least one row");
        if data.len() != rows * cols {
            return Err(NumericsError::InvalidData {
                expected_len: rows * cols,
                got_len: data.len(),
            });
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(NumericsError::NonFinite);
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0, "matrix must have at least one row");
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from equally long rows. Panics on ragged input; meant
    /// for literals in tests and small fixed constructions.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        assert!(!rows.is_empty(), "need at least one row");
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    /// Builds a matrix whose j-th column is `columns[j]`.
    pub fn from_columns(ambient_dim: usize, columns: &[Vec<f64>]) -> Self {
        assert!(ambient_dim > 0);
        let mut m = Matrix::zeros(ambient_dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), ambient_dim, "column length mismatch");
            for i in 0..ambient_dim {
                m.set(i, j, c[i]);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        assert!(self.cols > 0, "cannot transpose a matrix with zero columns");
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `self * rhs`. Panics on inner dimension mismatch (caller bug).
    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += aik * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn scaled(&self, c: f64) -> Matrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x *= c;
        }
        out
    }

    /// `self += c * other`, in place.
    pub fn add_assign_scaled(&mut self, other: &Matrix, c: f64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (x, y) in self.data.iter_mut().zip(other.data.iter()) {
            *x += c * y;
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(other.data.iter()) {
            *x -= y;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(other.data.iter()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    /// `max |A - A^T|`, zero for symmetric matrices.
    pub fn symmetry_residual(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                r = r.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        r
    }

    /// `max |Q^T Q - I|`: how far the columns are from orthonormal.
    pub fn gram_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for a in 0..self.cols {
            for b in a..self.cols {
                let mut g = 0.0;
                for i in 0..self.rows {
                    g += self.get(i, a) * self.get(i, b);
                }
                let target = if a == b { 1.0 } else { 0.0 };
                r = r.max((g - target).abs());
            }
        }
        r
    }

    /// Concatenates columns: `[left | right]`.
    pub fn hstack(left: &Matrix, right: &Matrix) -> Matrix {
        assert_eq!(left.rows, right.rows, "row counts must agree");
        let mut out = Matrix::zeros(left.rows, left.cols + right.cols);
        for i in 0..left.rows {
            for j in 0..left.cols {
                out.set(i, j, left.get(i, j));
            }
            for j in 0..right.cols {
                out.set(i, left.cols + j, right.get(i, j));
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Eigendecomposition of a symmetric matrix: `values[j]` belongs to column
/// `j` of `vectors`. Values are sorted descending.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

const MAX_JACOBI_SWEEPS: usize = 100;

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// `tol` gates the symmetry check on entry (`max |A - A^T| <= tol`); the
/// iteration itself runs to machine precision. Eigenvalues are returned in
/// descending order with the corresponding eigenvector columns permuted
/// alongside; ties keep the solver's order, so results are deterministic.
pub fn sym_eig(a: &Matrix, tol: f64) -> Result<SymEig, NumericsError> {
    assert_eq!(a.rows(), a.cols(), "eigendecomposition needs a square matrix");
    let n = a.rows();
    let sym_res = a.symmetry_residual();
    if sym_res > tol {
        return Err(NumericsError::NotSymmetric { residual: sym_res });
    }

    let mut m = a.clone();
    // Work on the symmetrized copy so roundoff asymmetry cannot drift.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m.get(i, j) + m.get(j, i));
            m.set(i, j, avg);
            m.set(j, i, avg);
        }
    }
    let mut q = Matrix::identity(n);
    if n == 1 {
        return Ok(sorted_eig(vec![m.get(0, 0)], q));
    }

    let scale = m.max_abs().max(1.0);
    let stop = 1e-15 * scale;
    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for r in (p + 1)..n {
                off = off.max(m.get(p, r).abs());
            }
        }
        if off <= stop {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apq = m.get(p, r);
                if apq == 0.0 {
                    continue;
                }
                // Symmetric Schur rotation zeroing m[p][r].
                let tau = (m.get(r, r) - m.get(p, p)) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkr = m.get(k, r);
                    m.set(k, p, c * mkp - s * mkr);
                    m.set(k, r, s * mkp + c * mkr);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mrk = m.get(r, k);
                    m.set(p, k, c * mpk - s * mrk);
                    m.set(r, k, s * mpk + c * mrk);
                }
                m.set(p, r, 0.0);
                m.set(r, p, 0.0);

                for k in 0..n {
                    let qkp = q.get(k, p);
                    let qkr = q.get(k, r);
                    q.set(k, p, c * qkp - s * qkr);
                    q.set(k, r, s * qkp + c * qkr);
                }
            }
        }
    }
    if !converged {
        return Err(NumericsError::NoConvergence { sweeps: MAX_JACOBI_SWEEPS });
    }

    let values: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    Ok(sorted_eig(values, q))
}

fn sorted_eig(values: Vec<f64>, vectors: Matrix) -> SymEig {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable descending sort keeps the solver's order among equal values.
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
    let sorted_values: Vec<f64> = order.iter().map(|&j| values[j]).collect();
    let mut sorted_vectors = Matrix::zeros(vectors.rows(), n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..vectors.rows() {
            sorted_vectors.set(i, dst, vectors.get(i, src));
        }
    }
    SymEig { values: sorted_values, vectors: sorted_vectors }
}

/// Modified Gram-Schmidt with re-orthogonalization. Vectors whose residual
/// after projection has norm `<= tol` are dropped, so rank-deficient input
/// simply yields fewer columns. Returns a matrix with orthonormal columns
/// (possibly zero of them).
pub fn gram_schmidt(ambient_dim: usize, vectors: &[Vec<f64>], tol: f64) -> Matrix {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        assert_eq!(v.len(), ambient_dim, "vector length must match ambient dimension");
        let mut r = v.clone();
        // Two projection passes keep orthogonality near machine precision.
        for _ in 0..2 {
            for b in &basis {
                let coeff = dot(&r, b);
                for (ri, bi) in r.iter_mut().zip(b.iter()) {
                    *ri -= coeff * bi;
                }
            }
        }
        let n = norm2(&r);
        if n > tol {
            for x in &mut r {
                *x /= n;
            }
            basis.push(r);
        }
    }
    Matrix::from_columns(ambient_dim, &basis)
}

/// Completes the orthonormal columns of `q` (L x M) to an orthonormal basis
/// of `R^L`, returning the L x (L - M) block of new columns.
///
/// Candidates are the standard basis vectors; each step picks the one with
/// the largest residual after projection onto the current span (ties go to
/// the smallest index), so the result is deterministic.
pub fn orthonormal_completion(q: &Matrix, tol: f64) -> Result<Matrix, NumericsError> {
    let res = q.gram_residual();
    if res > tol {
        return Err(NumericsError::NotOrthonormal { residual: res });
    }
    let l = q.rows();
    let m = q.cols();
    assert!(m <= l, "cannot have more orthonormal columns than rows");

    let mut basis: Vec<Vec<f64>> = (0..m).map(|j| q.col(j)).collect();
    let mut added: Vec<Vec<f64>> = Vec::new();
    for _ in 0..l - m {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for i in 0..l {
            let mut r = vec![0.0; l];
            r[i] = 1.0;
            for _ in 0..2 {
                for b in &basis {
                    let coeff = dot(&r, b);
                    for (ri, bi) in r.iter_mut().zip(b.iter()) {
                        *ri -= coeff * bi;
                    }
                }
            }
            let n = norm2(&r);
            if best.as_ref().map_or(true, |(bn, _)| n > *bn) {
                best = Some((n, r));
            }
        }
        let (n, mut r) = best.expect("ambient dimension is positive");
        debug_assert!(n > 0.5f64.sqrt() / l as f64, "every step has a usable candidate");
        for x in &mut r {
            *x /= n;
        }
        basis.push(r.clone());
        added.push(r);
    }
    Ok(Matrix::from_columns(l, &added))
}

/// Cholesky factorization of a symmetric positive-definite matrix, kept for
/// repeated solves against the same operator.
#[derive(Debug, Clone)]
pub struct SpdFactor {
    lower: Matrix,
}

impl SpdFactor {
    /// Factors `s = L L^T`. Fails with `SingularOperator` when a pivot
    /// drops to `tol` or below, and with `NotSymmetric` on asymmetric input.
    pub fn new(s: &Matrix, tol: f64) -> Result<Self, NumericsError> {
        assert_eq!(s.rows(), s.cols());
        let sym_res = s.symmetry_residual();
        if sym_res > tol.max(1e-12) {
            return Err(NumericsError::NotSymmetric { residual: sym_res });
        }
        let n = s.rows();
        let mut lower = Matrix::zeros(n, n);
        for j in 0..n {
            let mut d = s.get(j, j);
            for k in 0..j {
                d -= lower.get(j, k) * lower.get(j, k);
            }
            if d <= tol {
                return Err(NumericsError::SingularOperator { pivot: d });
            }
            let dj = d.sqrt();
            lower.set(j, j, dj);
            for i in (j + 1)..n {
                let mut v = s.get(i, j);
                for k in 0..j {
                    v -= lower.get(i, k) * lower.get(j, k);
                }
                lower.set(i, j, v / dj);
            }
        }
        Ok(SpdFactor { lower })
    }

    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    /// Solves `S x = b` by forward and back substitution.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n, "right-hand side length must match");
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut v = b[i];
            for k in 0..i {
                v -= self.lower.get(i, k) * y[k];
            }
            y[i] = v / self.lower.get(i, i);
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut v = y[i];
            for k in (i + 1)..n {
                v -= self.lower.get(k, i) * x[k];
            }
            x[i] = v / self.lower.get(i, i);
        }
        x
    }
}

/// One-shot solve of `S x = b` for symmetric positive-definite `S`.
pub fn solve_spd(s: &Matrix, b: &[f64], tol: f64) -> Result<Vec<f64>, NumericsError> {
    Ok(SpdFactor::new(s, tol)?.solve(b))
}

/// `tr(A B)` for A (p x q) and B (q x p).
pub fn trace_product(a: &Matrix, b: &Matrix) -> Result<f64, NumericsError> {
    if a.cols() != b.rows() || a.rows() != b.cols() {
        return Err(NumericsError::ShapeMismatch {
            expected: (a.cols(), a.rows()),
            got: (b.rows(), b.cols()),
        });
    }
    let mut t = 0.0;
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            t += a.get(i, k) * b.get(k, i);
        }
    }
    Ok(t)
}
