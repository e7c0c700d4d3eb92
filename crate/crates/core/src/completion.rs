//! Completions: enlarging a family of subspaces until the fusion frame
//! operator becomes a multiple of the identity.
//!
//! Tight completion works on unit-weight frames with equal subspace
//! dimensions: the spectrum `lambda` of the current operator is filled up
//! to `A I` by constructing a second frame with spectrum `A - lambda` in
//! the operator's own eigenbasis. Shift completion instead extends each
//! subspace basis to a full orthonormal basis and takes all of its cyclic
//! block shifts, which is always possible but adds many more subspaces.

use std::fmt;

use crate::model::{
    fusion_frame_operator, FusionFrame, ModelError, SpectrumSpec, Subspace, WeightedSubspace,
};
use crate::numerics::{orthonormal_completion, sym_eig, Matrix, NumericsError};
use crate::tetris::{check_real_feasibility, construct_real, TetrisError, Violation};
use crate::INTEGER_SNAP_TOL;

#[derive(Debug, Clone, PartialEq)]
pub enum CompletionError {
    /// Tight completion needs every subspace to have the same dimension.
    MixedDimensions {
        index: usize,
        dim: usize,
        expected: usize,
    },
    /// Tight completion needs unit weights.
    NotUnitWeight {
        index: usize,
        weight: f64,
    },
    /// No constant satisfies the admissibility conditions. Happens when
    /// the subspaces already fill the ambient space.
    NoAdmissibleConstant,
    /// The requested constant is not a positive whole number.
    ConstantNotIntegral {
        constant: f64,
    },
    /// The requested constant times the eigenvalue count is not an
    /// integer multiple of the subspace dimension, so no whole number of
    /// subspaces can realize it.
    ConstantNotCommensurate {
        constant: f64,
    },
    /// The requested constant needs a nonpositive number of new
    /// subspaces; the frame is already at or above that level.
    ConstantTooSmall {
        constant: f64,
        minimum_new: i64,
    },
    /// The residual spectrum cannot be realized by the sparse
    /// construction; the violated conditions are listed.
    Infeasible {
        constant: f64,
        violations: Vec<Violation>,
    },
    Construction(TetrisError),
    Numerics(NumericsError),
    Model(ModelError),
}

impl fmt::Display for CompletionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompletionError::MixedDimensions { index, dim, expected } => {
                write!(f, "subspace {index} has dimension {dim}, expected {expected}")
            }
            CompletionError::NotUnitWeight { index, weight } => {
                write!(f, "subspace {index} has weight {weight}, expected 1")
            }
            CompletionError::NoAdmissibleConstant => {
                write!(f, "no tightness constant is admissible for this frame")
            }
            CompletionError::ConstantNotIntegral { constant } => {
                write!(f, "constant {constant} is not a positive whole number")
            }
            CompletionError::ConstantNotCommensurate { constant } => {
                write!(f, "constant {constant} does not correspond to a whole number of subspaces")
            }
            CompletionError::ConstantTooSmall { constant, minimum_new } => write!(
                f,
                "constant {constant} would add {minimum_new} subspaces; it must add at least one"
            ),
            CompletionError::Infeasible { constant, violations } => {
                write!(f, "residual spectrum for constant {constant} is not constructible:")?;
                for v in violations {
                    write!(f, " [{v}]")?;
                }
                Ok(())
            }
            CompletionError::Construction(e) => write!(f, "construction failed: {e}"),
            CompletionError::Numerics(e) => write!(f, "numerical failure: {e}"),
            CompletionError::Model(e) => write!(f, "invalid frame: {e}"),
        }
    }
}

impl std::error::Error for CompletionError {}

impl From<NumericsError> for CompletionError {
    fn from(e: NumericsError) -> Self {
        CompletionError::Numerics(e)
    }
}

impl From<ModelError> for CompletionError {
    fn from(e: ModelError) -> Self {
        CompletionError::Model(e)
    }
}

impl From<TetrisError> for CompletionError {
    fn from(e: TetrisError) -> Self {
        CompletionError::Construction(e)
    }
}

/// Admissibility of a tightness constant `a` for a unit-weight frame of
/// `n` subspaces of dimension `m` in ambient dimension `ambient` with
/// largest eigenvalue `lambda_max`: `a` must be a positive whole number
/// making the completed count `n0 = a * ambient / m` whole, at least 2
/// above the largest eigenvalue, and at most `lambda_max + n0 - (n + 3)`.
pub fn admissible_tight_constant(
    lambda_max: f64,
    ambient: usize,
    n: usize,
    m: usize,
    a: f64,
) -> bool {
    if a < 1.0 - INTEGER_SNAP_TOL || (a - a.round()).abs() > INTEGER_SNAP_TOL {
        return false;
    }
    let n0_real = a * ambient as f64 / m as f64;
    let n0 = n0_real.round();
    if (n0_real - n0).abs() > INTEGER_SNAP_TOL * n0_real.abs().max(1.0) {
        return false;
    }
    lambda_max + 2.0 <= a + INTEGER_SNAP_TOL
        && a <= lambda_max + n0 - (n + 3) as f64 + INTEGER_SNAP_TOL
}

/// Smallest admissible tightness constant, found by scanning the whole
/// numbers upward from 1. Returns the constant and the completed count
/// `n0 = a * ambient / m`. `None` when `m >= ambient`, where the upper
/// condition can never meet the lower one.
pub fn minimal_tight_constant(
    lambda_max: f64,
    ambient: usize,
    n: usize,
    m: usize,
) -> Option<(f64, usize)> {
    if m >= ambient {
        return None;
    }
    // Every commensurate whole number past both bounds is admissible,
    // and commensurate values recur at least every m steps, so the scan
    // terminates within the cap.
    let lower = (lambda_max + 2.0).ceil();
    let balance = ((n + 3) * m) as f64 / (ambient - m) as f64;
    let cap = lower.max(balance).max(1.0) as usize + m + 1;
    for a in 1..=cap {
        if admissible_tight_constant(lambda_max, ambient, n, m, a as f64) {
            return Some((a as f64, a * ambient / m));
        }
    }
    None
}

/// Result of a tight completion.
#[derive(Debug, Clone)]
pub struct TightCompletion {
    /// The realized tightness constant.
    pub constant: f64,
    /// The newly constructed subspaces, as a unit-weight fusion frame.
    pub added: FusionFrame,
    /// Original and added subspaces together; `A`-tight.
    pub combined: FusionFrame,
}

fn check_unit_weights_equal_dims(ff: &FusionFrame, tol: f64) -> Result<usize, CompletionError> {
    let expected = ff.dims()[0];
    for (i, ws) in ff.members().iter().enumerate() {
        if (ws.weight() - 1.0).abs() > tol {
            return Err(CompletionError::NotUnitWeight { index: i, weight: ws.weight() });
        }
        if ws.subspace().dim() != expected {
            return Err(CompletionError::MixedDimensions {
                index: i,
                dim: ws.subspace().dim(),
                expected,
            });
        }
    }
    Ok(expected)
}

fn apply_map(ff: &FusionFrame, q: &Matrix, tol: f64) -> Result<FusionFrame, CompletionError> {
    let members = ff
        .members()
        .iter()
        .map(|ws| {
            let basis = q.matmul(ws.subspace().basis());
            let subspace = Subspace::from_basis(basis, tol)?;
            Ok(WeightedSubspace::new(subspace, ws.weight())?)
        })
        .collect::<Result<Vec<_>, CompletionError>>()?;
    Ok(FusionFrame::new(members)?)
}

/// Completes a unit-weight, equi-dimensional fusion frame to an `A`-tight
/// one by adding subspaces. With `constant` absent the smallest admissible
/// `A` is used. The residual spectrum `A - lambda`, taken descending and
/// paired with the reversed eigenvectors of the operator, is built by the
/// sparse construction and rotated into the operator's eigenbasis.
pub fn tight_completion(
    ff: &FusionFrame,
    constant: Option<f64>,
    tol: f64,
) -> Result<TightCompletion, CompletionError> {
    let m = check_unit_weights_equal_dims(ff, tol)?;
    let ambient = ff.ambient_dim();
    let n = ff.len();
    let eig = sym_eig(&fusion_frame_operator(ff), tol.max(1e-12))?;
    let lambda_max = eig.values[0];

    let (a, n0) = match constant {
        Some(a) => {
            if a < 1.0 - INTEGER_SNAP_TOL || (a - a.round()).abs() > INTEGER_SNAP_TOL {
                return Err(CompletionError::ConstantNotIntegral { constant: a });
            }
            let a = a.round();
            let n0_real = a * ambient as f64 / m as f64;
            let n0 = n0_real.round();
            if (n0_real - n0).abs() > INTEGER_SNAP_TOL * n0_real.abs().max(1.0) {
                return Err(CompletionError::ConstantNotCommensurate { constant: a });
            }
            (a, n0 as usize)
        }
        None => minimal_tight_constant(lambda_max, ambient, n, m)
            .ok_or(CompletionError::NoAdmissibleConstant)?,
    };
    if n0 <= n {
        return Err(CompletionError::ConstantTooSmall {
            constant: a,
            minimum_new: n0 as i64 - n as i64,
        });
    }
    let n1 = n0 - n;

    // Residual eigenvalues in descending order; the operator's are
    // descending, so reversing A - lambda sorts it.
    let mu: Vec<f64> = eig.values.iter().rev().map(|l| a - l).collect();
    let spec = SpectrumSpec::new(mu, n1, m)?;
    let violations = check_real_feasibility(&spec);
    if !violations.is_empty() {
        return Err(CompletionError::Infeasible { constant: a, violations });
    }
    let (_, added_coords) = construct_real(&spec)?;

    // Column j of the eigenvector matrix belongs to the j-th descending
    // eigenvalue; the residual construction is diagonal in reversed
    // order, so reverse the columns before rotating.
    let reversed: Vec<Vec<f64>> = (0..ambient).rev().map(|j| eig.vectors.col(j)).collect();
    let q = Matrix::from_columns(ambient, &reversed);
    let added = apply_map(&added_coords, &q, tol.max(1e-10))?;

    let mut members = ff.members().to_vec();
    members.extend(added.members().iter().cloned());
    let combined = FusionFrame::new(members)?;
    Ok(TightCompletion { constant: a, added, combined })
}

/// Result of a shift completion.
#[derive(Debug, Clone)]
pub struct ShiftCompletion {
    /// The realized tightness constant: the sum of subspace dimensions.
    pub constant: f64,
    /// All cyclic shifts, inputs first (shift zero), with unit weights.
    pub frame: FusionFrame,
}

/// Completes any family of subspaces to a tight fusion frame: each
/// subspace basis is extended to a full orthonormal basis of the ambient
/// space, and for every cyclic shift `k` the block of `dim` consecutive
/// basis vectors starting at `k` spans one new subspace. Every basis
/// vector is covered `dim` times across the shifts, so the `n * ambient`
/// subspaces form a tight frame with constant equal to the sum of the
/// input dimensions. Shift zero reproduces the inputs verbatim.
pub fn shift_completion(
    subspaces: &[Subspace],
    tol: f64,
) -> Result<ShiftCompletion, CompletionError> {
    if subspaces.is_empty() {
        return Err(CompletionError::Model(ModelError::EmptyFrame));
    }
    let ambient = subspaces[0].ambient_dim();
    let mut members = Vec::with_capacity(subspaces.len() * ambient);
    let mut order = Vec::new();
    for (i, subspace) in subspaces.iter().enumerate() {
        let dim = subspace.dim();
        let full = if dim == ambient {
            subspace.basis().clone()
        } else {
            let extra = orthonormal_completion(subspace.basis(), tol.max(1e-10))?;
            Matrix::hstack(subspace.basis(), &extra)
        };
        for k in 0..ambient {
            let shifted = if k == 0 {
                subspace.clone()
            } else {
                let columns: Vec<Vec<f64>> =
                    (0..dim).map(|j| full.col((k + j) % ambient)).collect();
                Subspace::from_basis(Matrix::from_columns(ambient, &columns), tol.max(1e-10))?
            };
            order.push((i, k));
            members.push(WeightedSubspace::new(shifted, 1.0)?);
        }
    }
    // Reorder so all shift-zero members lead, matching the input order.
    let mut leading = Vec::with_capacity(members.len());
    for (pos, _) in order.iter().enumerate().filter(|(_, &(_, k))| k == 0) {
        leading.push(members[pos].clone());
    }
    for (pos, _) in order.iter().enumerate().filter(|(_, &(_, k))| k != 0) {
        leading.push(members[pos].clone());
    }
    let constant = subspaces.iter().map(|s| s.dim()).sum::<usize>() as f64;
    Ok(ShiftCompletion { constant, frame: FusionFrame::new(leading)? })
}
