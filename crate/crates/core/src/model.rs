//! Core model types: subspaces with orthonormal bases, weighted families,
//! fusion frames, prescribed spectra, and frame verification.

use std::fmt;

use crate::numerics::{self, trace_product, Matrix, NumericsError};

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    AmbientMismatch { left: usize, right: usize },
    EmptyFrame,
    EmptyBasis,
    DimTooLarge { dim: usize, ambient: usize },
    NotOrthonormal { residual: f64 },
    BadWeight { weight: f64 },
    NotDescending { index: usize },
    NonPositiveEigenvalue { index: usize, value: f64 },
    ZeroCount,
    Numerics(NumericsError),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::AmbientMismatch { left, right } => {
                write!(f, "ambient dimensions differ: {left} vs {right}")
            }
            ModelError::EmptyFrame => write!(f, "a fusion frame needs at least one subspace"),
            ModelError::EmptyBasis => write!(f, "a subspace needs at least one basis vector"),
            ModelError::DimTooLarge { dim, ambient } => {
                write!(f, "subspace dimension {dim} exceeds ambient dimension {ambient}")
            }
            ModelError::NotOrthonormal { residual } => {
                write!(f, "basis is not orthonormal (residual {residual:.3e})")
            }
            ModelError::BadWeight { weight } => {
                write!(f, "weights must be finite and positive, got {weight}")
            }
            ModelError::NotDescending { index } => {
                write!(f, "eigenvalues must be sorted descending (violated at index {index})")
            }
            ModelError::NonPositiveEigenvalue { index, value } => {
                write!(f, "eigenvalues must be strictly positive, got {value} at index {index}")
            }
            ModelError::ZeroCount => write!(f, "subspace count and dimension must be positive"),
            ModelError::Numerics(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ModelError {}

impl From<NumericsError> for ModelError {
    fn from(e: NumericsError) -> Self {
        ModelError::Numerics(e)
    }
}

/// A linear subspace of `R^M`, stored as a matrix whose columns form an
/// orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Wraps an `M x m` matrix with orthonormal columns, `1 <= m <= M`.
    pub fn from_basis(basis: Matrix, tol: f64) -> Result<Self, ModelError> {
        if basis.cols() == 0 {
            return Err(ModelError::EmptyBasis);
        }
        if basis.cols() > basis.rows() {
            return Err(ModelError::DimTooLarge { dim: basis.cols(), ambient: basis.rows() });
        }
        let residual = basis.gram_residual();
        if residual > tol {
            return Err(ModelError::NotOrthonormal { residual });
        }
        Ok(Subspace { basis })
    }

    /// The span of arbitrary vectors: orthonormalizes them, dropping
    /// dependent ones. Fails only when the span is trivial.
    pub fn span(ambient_dim: usize, vectors: &[Vec<f64>], tol: f64) -> Result<Self, ModelError> {
        let basis = numerics::gram_schmidt(ambient_dim, vectors, tol);
        if basis.cols() == 0 {
            return Err(ModelError::EmptyBasis);
        }
        Ok(Subspace { basis })
    }

    /// Span of a set of standard basis vectors (0-based indices).
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let cols: Vec<Vec<f64>> = indices
            .iter()
            .map(|&i| {
                assert!(i < ambient_dim);
                let mut e = vec![0.0; ambient_dim];
                e[i] = 1.0;
                e
            })
            .collect();
        Subspace { basis: Matrix::from_columns(ambient_dim, &cols) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// The orthogonal projection `P = U U^T` onto this subspace.
    pub fn projection(&self) -> Matrix {
        self.basis.matmul(&self.basis.transpose())
    }
}

/// A subspace together with a positive weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSubspace {
    subspace: Subspace,
    weight: f64,
}

impl WeightedSubspace {
    pub fn new(subspace: Subspace, weight: f64) -> Result<Self, ModelError> {
        if !weight.is_finite() || weight <= 0.0 {
            return Err(ModelError::BadWeight { weight });
        }
        Ok(WeightedSubspace { subspace, weight })
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

/// A finite family of weighted subspaces of a common `R^M`.
///
/// Construction only checks shape (nonempty, shared ambient dimension);
/// whether the family actually frames the space is a spectral question
/// answered by [`validate`] or [`frame_bounds`].
#[derive(Debug, Clone, PartialEq)]
pub struct FusionFrame {
    members: Vec<WeightedSubspace>,
}

impl FusionFrame {
    pub fn new(members: Vec<WeightedSubspace>) -> Result<Self, ModelError> {
        let first = members.first().ok_or(ModelError::EmptyFrame)?;
        let ambient = first.subspace().ambient_dim();
        for m in &members {
            if m.subspace().ambient_dim() != ambient {
                return Err(ModelError::AmbientMismatch {
                    left: ambient,
                    right: m.subspace().ambient_dim(),
                });
            }
        }
        Ok(FusionFrame { members })
    }

    pub fn unit_weights(subspaces: Vec<Subspace>) -> Result<Self, ModelError> {
        let members = subspaces
            .into_iter()
            .map(|s| WeightedSubspace::new(s, 1.0))
            .collect::<Result<Vec<_>, _>>()?;
        FusionFrame::new(members)
    }

    pub fn members(&self) -> &[WeightedSubspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty families
    }

    pub fn ambient_dim(&self) -> usize {
        self.members[0].subspace().ambient_dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.subspace().dim()).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.weight()).collect()
    }

    pub fn weight_sq_sum(&self) -> f64 {
        self.members.iter().map(|m| m.weight() * m.weight()).sum()
    }
}

/// A prescribed frame-operator spectrum: `M` eigenvalues (descending,
/// positive) to be realized by `num_subspaces` subspaces of dimension
/// `subspace_dim`.
///
/// The eigenvalue sum of a realizable spectrum must equal the integer
/// `num_subspaces * subspace_dim`. The values are stored verbatim, so a
/// spectrum survives serialization bit for bit; sums within
/// [`crate::INTEGER_SNAP_TOL`] of the integer count as matching, and
/// larger gaps are reported by the feasibility checks.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSpec {
    lambdas: Vec<f64>,
    num_subspaces: usize,
    subspace_dim: usize,
}

impl SpectrumSpec {
    pub fn new(
        lambdas: Vec<f64>,
        num_subspaces: usize,
        subspace_dim: usize,
    ) -> Result<Self, ModelError> {
        if num_subspaces == 0 || subspace_dim == 0 {
            return Err(ModelError::ZeroCount);
        }
        if lambdas.is_empty() {
            return Err(ModelError::EmptyFrame);
        }
        for (i, &l) in lambdas.iter().enumerate() {
            if !l.is_finite() || l <= 0.0 {
                return Err(ModelError::NonPositiveEigenvalue { index: i, value: l });
            }
            if i > 0 && l > lambdas[i - 1] {
                return Err(ModelError::NotDescending { index: i });
            }
        }
        Ok(SpectrumSpec { lambdas, num_subspaces, subspace_dim })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn num_subspaces(&self) -> usize {
        self.num_subspaces
    }

    pub fn subspace_dim(&self) -> usize {
        self.subspace_dim
    }

    /// `num_subspaces * subspace_dim` as a float: the required eigenvalue sum.
    pub fn target_sum(&self) -> f64 {
        (self.num_subspaces * self.subspace_dim) as f64
    }

    /// `|sum(lambdas) - num_subspaces * subspace_dim|`.
    pub fn factorization_residual(&self) -> f64 {
        (self.lambdas.iter().sum::<f64>() - self.target_sum()).abs()
    }
}

/// The fusion frame operator `S = sum_i v_i^2 P_i`.
pub fn fusion_frame_operator(ff: &FusionFrame) -> Matrix {
    let m = ff.ambient_dim();
    let mut s = Matrix::zeros(m, m);
    for member in ff.members() {
        s.add_assign_scaled(&member.subspace().projection(), member.weight() * member.weight());
    }
    s
}

/// Optimal frame bounds `(A, B)`: the extreme eigenvalues of the frame
/// operator. `A <= 0` (up to roundoff) means the family does not span.
pub fn frame_bounds(ff: &FusionFrame) -> (f64, f64) {
    let s = fusion_frame_operator(ff);
    let eig = numerics::sym_eig(&s, 1e-8).expect("frame operator is symmetric by construction");
    (*eig.values.last().expect("ambient dimension is positive"), eig.values[0])
}

/// Convention used for squared chordal distances throughout: the ambient
/// dimension minus the trace of the product of projections. Note that the
/// self-distance of an `m`-dimensional subspace is `M - m`, not zero.
pub const CHORDAL_CONVENTION: &str = "d^2(U, V) = ambient_dim - tr(P_U P_V)";

/// Squared chordal distance between two subspaces of the same ambient
/// space, under [`CHORDAL_CONVENTION`].
pub fn chordal_distance_sq(a: &Subspace, b: &Subspace) -> Result<f64, ModelError> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(ModelError::AmbientMismatch { left: a.ambient_dim(), right: b.ambient_dim() });
    }
    let t = trace_product(&a.projection(), &b.projection())?;
    Ok(a.ambient_dim() as f64 - t)
}

/// Residual magnitudes recorded while verifying a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    /// Worst `max |U^T U - I|` over all member bases.
    pub basis_orthonormality: f64,
    /// `max |S - S^T|` of the frame operator.
    pub operator_symmetry: f64,
    /// Worst eigenpair residual `|S q - lambda q|_2`.
    pub eigen: f64,
    /// `|sum(lambda) - sum v_i^2 m_i|` (trace identity).
    pub trace_identity: f64,
}

/// Everything [`validate`] establishes about a family of weighted subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub ambient_dim: usize,
    pub dims: Vec<usize>,
    pub weights: Vec<f64>,
    /// Frame operator eigenvalues, descending.
    pub spectrum: Vec<f64>,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_fusion_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    /// Pairwise squared chordal distances (see `chordal_convention`).
    pub chordal_sq: Matrix,
    pub chordal_convention: &'static str,
    pub residuals: Residuals,
    /// Tolerance the flags were decided at.
    pub tol: f64,
}

/// Verifies a family of weighted subspaces: spectrum, optimal bounds,
/// tightness flags, pairwise chordal distances, and numeric residuals.
pub fn validate(ff: &FusionFrame, tol: f64) -> VerificationReport {
    let m = ff.ambient_dim();
    let n = ff.len();
    let s = fusion_frame_operator(ff);
    let eig =
        numerics::sym_eig(&s, tol.max(1e-10)).expect("frame operator is symmetric by construction");

    let mut basis_res: f64 = 0.0;
    for member in ff.members() {
        basis_res = basis_res.max(member.subspace().basis().gram_residual());
    }
    let mut eigen_res: f64 = 0.0;
    for (j, &lambda) in eig.values.iter().enumerate() {
        let v = eig.vectors.col(j);
        let sv = s.matvec(&v);
        let r: f64 = sv
            .iter()
            .zip(v.iter())
            .map(|(x, y)| (x - lambda * y) * (x - lambda * y))
            .sum::<f64>()
            .sqrt();
        eigen_res = eigen_res.max(r);
    }
    let weighted_trace: f64 = ff
        .members()
        .iter()
        .map(|mem| mem.weight() * mem.weight() * mem.subspace().dim() as f64)
        .sum();
    let trace_identity = (eig.values.iter().sum::<f64>() - weighted_trace).abs();

    let mut chordal_sq = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = chordal_distance_sq(ff.members()[i].subspace(), ff.members()[j].subspace())
                .expect("members share the ambient space");
            chordal_sq.set(i, j, d);
        }
    }

    let lower = *eig.values.last().expect("spectrum is nonempty");
    let upper = eig.values[0];
    let is_fusion_frame = lower > tol;
    let is_tight = is_fusion_frame && (upper - lower) <= tol * upper.abs().max(1.0);
    let is_parseval = is_tight && (lower - 1.0).abs() <= tol && (upper - 1.0).abs() <= tol;

    VerificationReport {
        ambient_dim: m,
        dims: ff.dims(),
        weights: ff.weights(),
        spectrum: eig.values,
        lower_bound: lower,
        upper_bound: upper,
        is_fusion_frame,
        is_tight,
        is_parseval,
        chordal_sq,
        chordal_convention: CHORDAL_CONVENTION,
        residuals: Residuals {
            basis_orthonormality: basis_res,
            operator_symmetry: s.symmetry_residual(),
            eigen: eigen_res,
            trace_identity,
        },
        tol,
    }
}
