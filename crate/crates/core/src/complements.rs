//! Complements of fusion frames: the spatial complement (orthogonal
//! complements of the subspaces) and the Naimark complement of a Parseval
//! fusion frame, together with the dilation that embeds a Parseval fusion
//! frame into an orthogonal projection and the flattening of a Parseval
//! fusion frame into an ordinary Parseval frame of weighted basis vectors.

use std::fmt;

use crate::model::{fusion_frame_operator, FusionFrame, ModelError, Subspace, WeightedSubspace};
use crate::numerics::{orthonormal_completion, sym_eig, Matrix, NumericsError};

#[derive(Debug, Clone, PartialEq)]
pub enum ComplementError {
    /// A subspace equals the ambient space, so its orthogonal complement
    /// is the zero space.
    FullSubspace {
        index: usize,
        dim: usize,
    },
    /// The optimal upper bound reaches the total squared weight, which
    /// happens exactly when the subspaces share a common direction; the
    /// complement family then fails to span.
    NontrivialIntersection {
        upper_bound: f64,
        total_weight: f64,
    },
    /// The operator is not the identity within tolerance.
    NotParseval {
        residual: f64,
    },
    /// The frame is not tight within tolerance, so no weight rescaling
    /// can make it Parseval.
    NotTight {
        lower_bound: f64,
        upper_bound: f64,
    },
    /// A weight is 1 or larger; the complement weight sqrt(1 - v^2)
    /// would vanish.
    WeightNotBelowOne {
        index: usize,
        weight: f64,
    },
    /// An internal identity of the dilation failed to hold numerically.
    DilationCheckFailed {
        check: &'static str,
        residual: f64,
    },
    Numerics(NumericsError),
    Model(ModelError),
}

impl fmt::Display for ComplementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplementError::FullSubspace { index, dim } => {
                write!(f, "subspace {index} has dimension {dim} equal to the ambient space")
            }
            ComplementError::NontrivialIntersection { upper_bound, total_weight } => write!(
                f,
                "subspaces have a nontrivial common intersection: upper bound {upper_bound} reaches the total squared weight {total_weight}"
            ),
            ComplementError::NotParseval { residual } => {
                write!(f, "frame is not Parseval: operator differs from the identity by {residual}")
            }
            ComplementError::NotTight { lower_bound, upper_bound } => {
                write!(f, "frame bounds {lower_bound} and {upper_bound} are not equal")
            }
            ComplementError::WeightNotBelowOne { index, weight } => {
                write!(f, "weight {weight} of subspace {index} is not below 1")
            }
            ComplementError::DilationCheckFailed { check, residual } => {
                write!(f, "dilation check {check} failed with residual {residual}")
            }
            ComplementError::Numerics(e) => write!(f, "numerical failure: {e}"),
            ComplementError::Model(e) => write!(f, "invalid frame: {e}"),
        }
    }
}

impl std::error::Error for ComplementError {}

impl From<NumericsError> for ComplementError {
    fn from(e: NumericsError) -> Self {
        ComplementError::Numerics(e)
    }
}

impl From<ModelError> for ComplementError {
    fn from(e: ModelError) -> Self {
        ComplementError::Model(e)
    }
}

/// Replaces every subspace by its orthogonal complement, keeping the
/// weights. The new operator is `(sum of squared weights) I - S`, so the
/// spectrum reflects around half the total weight and eigenvectors are
/// shared. Requires every subspace to be proper and the family to have
/// trivial common intersection, detected as the upper bound staying below
/// the total squared weight.
pub fn spatial_complement(ff: &FusionFrame, tol: f64) -> Result<FusionFrame, ComplementError> {
    let ambient = ff.ambient_dim();
    for (i, ws) in ff.members().iter().enumerate() {
        if ws.subspace().dim() == ambient {
            return Err(ComplementError::FullSubspace { index: i, dim: ambient });
        }
    }
    let total = ff.weight_sq_sum();
    let eig = sym_eig(&fusion_frame_operator(ff), tol.max(1e-12))?;
    let upper = eig.values[0];
    if upper >= total - tol {
        return Err(ComplementError::NontrivialIntersection {
            upper_bound: upper,
            total_weight: total,
        });
    }
    let members = ff
        .members()
        .iter()
        .map(|ws| {
            let completion = orthonormal_completion(ws.subspace().basis(), tol.max(1e-10))?;
            let subspace = Subspace::from_basis(completion, tol.max(1e-10))?;
            Ok(WeightedSubspace::new(subspace, ws.weight())?)
        })
        .collect::<Result<Vec<_>, ComplementError>>()?;
    Ok(FusionFrame::new(members)?)
}

/// Divides every weight of a tight fusion frame by the square root of its
/// frame bound, producing a Parseval fusion frame over the same subspaces.
pub fn rescale_to_parseval(ff: &FusionFrame, tol: f64) -> Result<FusionFrame, ComplementError> {
    let eig = sym_eig(&fusion_frame_operator(ff), tol.max(1e-12))?;
    let (upper, lower) = (eig.values[0], *eig.values.last().expect("nonempty spectrum"));
    if upper - lower > tol * upper.abs().max(1.0) {
        return Err(ComplementError::NotTight { lower_bound: lower, upper_bound: upper });
    }
    let scale = 1.0 / upper.sqrt();
    let members = ff
        .members()
        .iter()
        .map(|ws| Ok(WeightedSubspace::new(ws.subspace().clone(), ws.weight() * scale)?))
        .collect::<Result<Vec<_>, ComplementError>>()?;
    Ok(FusionFrame::new(members)?)
}

/// Stacked analysis blocks: an `L x M` isometry whose rows, in consecutive
/// groups of the subspace dimensions, are the weighted transposed bases
/// `v_i U_i^T`. `L` is the sum of the subspace dimensions.
fn analysis_embedding(ff: &FusionFrame) -> Matrix {
    let m = ff.ambient_dim();
    let l: usize = ff.dims().iter().sum();
    let mut t = Matrix::zeros(l, m);
    let mut row = 0;
    for ws in ff.members() {
        let basis = ws.subspace().basis();
        let v = ws.weight();
        for c in 0..basis.cols() {
            for r in 0..m {
                t.set(row, r, v * basis.get(r, c));
            }
            row += 1;
        }
    }
    t
}

fn parseval_residual(ff: &FusionFrame) -> f64 {
    let s = fusion_frame_operator(ff);
    s.max_abs_diff(&Matrix::identity(s.rows()))
}

fn check_parseval(ff: &FusionFrame, tol: f64) -> Result<(), ComplementError> {
    let residual = parseval_residual(ff);
    if residual > tol {
        return Err(ComplementError::NotParseval { residual });
    }
    Ok(())
}

fn check_weights_below_one(ff: &FusionFrame, tol: f64) -> Result<(), ComplementError> {
    for (i, ws) in ff.members().iter().enumerate() {
        let v = ws.weight();
        if 1.0 - v * v <= tol {
            return Err(ComplementError::WeightNotBelowOne { index: i, weight: v });
        }
    }
    Ok(())
}

/// Naimark complement of a Parseval fusion frame.
#[derive(Debug, Clone)]
pub struct NaimarkComplement {
    /// Dimension `L` of the space the frame dilates into; the complement
    /// lives in `L - M` dimensions.
    pub dilation_dim: usize,
    pub complement: FusionFrame,
}

/// Builds the Naimark complement: the analysis embedding `T` is completed
/// to an orthogonal `L x L` matrix `[T | G]`, and row group `i` of `G`,
/// normalized, spans the `i`-th complement subspace with weight
/// `sqrt(1 - v_i^2)`. The complement is again Parseval with the same
/// subspace dimensions, now in dimension `L - M`.
pub fn naimark_complement(
    ff: &FusionFrame,
    tol: f64,
) -> Result<NaimarkComplement, ComplementError> {
    check_parseval(ff, tol)?;
    check_weights_below_one(ff, tol)?;
    let t = analysis_embedding(ff);
    let l = t.rows();
    let g = orthonormal_completion(&t, tol.max(1e-10))?;
    let mut members = Vec::with_capacity(ff.len());
    let mut row = 0;
    for ws in ff.members() {
        let dim = ws.subspace().dim();
        let v = ws.weight();
        let new_weight = (1.0 - v * v).sqrt();
        // Rows of [T | G] are orthonormal and group rows of T have Gram
        // v^2 I, so group rows of G have Gram (1 - v^2) I.
        let columns: Vec<Vec<f64>> =
            (row..row + dim).map(|r| g.row(r).iter().map(|x| x / new_weight).collect()).collect();
        let basis = Matrix::from_columns(g.cols(), &columns);
        let subspace = Subspace::from_basis(basis, tol.max(1e-10))?;
        members.push(WeightedSubspace::new(subspace, new_weight)?);
        row += dim;
    }
    Ok(NaimarkComplement { dilation_dim: l, complement: FusionFrame::new(members)? })
}

/// Ordinary Parseval frame unpacked from a Parseval fusion frame.
#[derive(Debug, Clone)]
pub struct LocalParsevalFrame {
    /// The weighted local basis vectors `v_i f_ij`, subspace by subspace.
    pub vectors: Vec<Vec<f64>>,
    /// Positions in `vectors` contributed by each subspace.
    pub partition: Vec<std::ops::Range<usize>>,
}

/// Flattens a Parseval fusion frame into an ordinary Parseval frame for
/// the ambient space: every orthonormal basis vector of every subspace,
/// scaled by the subspace weight, joins one flat list. The summed outer
/// products of the list equal the identity, and dividing a group by its
/// weight recovers the local orthonormal basis.
pub fn local_parseval_frame(
    ff: &FusionFrame,
    tol: f64,
) -> Result<LocalParsevalFrame, ComplementError> {
    check_parseval(ff, tol)?;
    let m = ff.ambient_dim();
    let mut vectors = Vec::new();
    let mut partition = Vec::with_capacity(ff.len());
    for ws in ff.members() {
        let basis = ws.subspace().basis();
        let v = ws.weight();
        let start = vectors.len();
        for c in 0..basis.cols() {
            vectors.push((0..m).map(|r| v * basis.get(r, c)).collect());
        }
        partition.push(start..vectors.len());
    }
    Ok(LocalParsevalFrame { vectors, partition })
}

/// Dilation of a Parseval fusion frame to an orthogonal projection.
#[derive(Debug, Clone)]
pub struct NaimarkDilation {
    /// Dimension `L` of the dilation space.
    pub dilation_dim: usize,
    /// The `L x M` isometry stacking the weighted transposed bases.
    pub embedding: Matrix,
    /// Rank-`M` orthogonal projection `T T^T` on the dilation space.
    pub projection: Matrix,
    /// Row ranges of the dilation space belonging to each subspace.
    pub partition: Vec<std::ops::Range<usize>>,
    /// Isometries `L_i = P[:, J_i] / v_i` mapping subspace coordinates
    /// into the dilation space.
    pub isometries: Vec<Matrix>,
    /// Largest entry of `P^2 - P`.
    pub projection_residual: f64,
    /// Largest entry of `P - P^T`.
    pub symmetry_residual: f64,
    /// Distance of `tr P` from the ambient dimension.
    pub trace_residual: f64,
    /// Largest Gram residual among the isometries.
    pub isometry_residual: f64,
    /// Largest entry of `[v_1 L_1 | ... | v_N L_N] - P`.
    pub reassembly_residual: f64,
}

/// Dilates a Parseval fusion frame: the columns of the projection
/// `P = T T^T` in row group `J_i`, divided by `v_i`, are isometries whose
/// weighted assembly recovers `P` column block by column block. Every
/// claimed identity is measured and must hold within `tol`.
pub fn naimark_dilation(ff: &FusionFrame, tol: f64) -> Result<NaimarkDilation, ComplementError> {
    check_parseval(ff, tol)?;
    let m = ff.ambient_dim();
    let t = analysis_embedding(ff);
    let l = t.rows();
    let p = t.matmul(&t.transpose());

    let projection_residual = p.matmul(&p).max_abs_diff(&p);
    let symmetry_residual = p.symmetry_residual();
    let trace = (0..l).map(|i| p.get(i, i)).sum::<f64>();
    let trace_residual = (trace - m as f64).abs();

    let mut partition = Vec::with_capacity(ff.len());
    let mut isometries = Vec::with_capacity(ff.len());
    let mut isometry_residual: f64 = 0.0;
    let mut reassembly_residual: f64 = 0.0;
    let mut row = 0;
    for ws in ff.members() {
        let dim = ws.subspace().dim();
        let v = ws.weight();
        let range = row..row + dim;
        let columns: Vec<Vec<f64>> =
            range.clone().map(|j| (0..l).map(|r| p.get(r, j) / v).collect()).collect();
        let li = Matrix::from_columns(l, &columns);
        isometry_residual = isometry_residual.max(li.gram_residual());
        for (k, j) in range.clone().enumerate() {
            for r in 0..l {
                let diff = (v * li.get(r, k) - p.get(r, j)).abs();
                reassembly_residual = reassembly_residual.max(diff);
            }
        }
        partition.push(range);
        isometries.push(li);
        row += dim;
    }

    let checks = [
        ("projection idempotence", projection_residual),
        ("projection symmetry", symmetry_residual),
        ("projection trace", trace_residual),
        ("isometry Gram", isometry_residual),
        ("weighted reassembly", reassembly_residual),
    ];
    for (check, residual) in checks {
        if residual > tol {
            return Err(ComplementError::DilationCheckFailed { check, residual });
        }
    }

    Ok(NaimarkDilation {
        dilation_dim: l,
        embedding: t,
        projection: p,
        partition,
        isometries,
        projection_residual,
        symmetry_residual,
        trace_residual,
        isometry_residual,
        reassembly_residual,
    })
}
