//! Measurement and reconstruction with fusion frames.
//!
//! A signal `f` is measured per subspace, either as the weighted
//! projection `v_i P_i f` (full mode, ambient-length blocks) or as the
//! weighted coordinates `v_i U_i^T f` (reduced mode, blocks of the
//! subspace dimensions). Reconstruction applies the inverse frame
//! operator: `f = S^{-1} (sum of v_i times the measured contributions)`.
//! The inverse is applied through a cached Cholesky factorization, so one
//! [`Reconstructor`] serves many measurement vectors.

use std::fmt;

use crate::model::{fusion_frame_operator, FusionFrame};
use crate::numerics::{NumericsError, SpdFactor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementMode {
    /// Blocks are weighted projections, each of ambient length.
    Full,
    /// Blocks are weighted basis coordinates, of the subspace dimensions.
    Reduced,
}

/// Per-subspace measurements of one signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurements {
    pub mode: MeasurementMode,
    pub blocks: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReconstructError {
    /// Signal length does not match the ambient dimension.
    SignalLength { got: usize, expected: usize },
    /// Wrong number of measurement blocks for the frame.
    BlockCount { got: usize, expected: usize },
    /// A block has the wrong length for its subspace and mode.
    BlockLength { index: usize, got: usize, expected: usize },
    /// The operator could not be factorized; the family is not a fusion
    /// frame within tolerance.
    Numerics(NumericsError),
}

impl fmt::Display for ReconstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReconstructError::SignalLength { got, expected } => {
                write!(f, "signal has length {got}, ambient dimension is {expected}")
            }
            ReconstructError::BlockCount { got, expected } => {
                write!(f, "got {got} measurement blocks, frame has {expected} subspaces")
            }
            ReconstructError::BlockLength { index, got, expected } => {
                write!(f, "block {index} has length {got}, expected {expected}")
            }
            ReconstructError::Numerics(e) => write!(f, "operator factorization failed: {e}"),
        }
    }
}

impl std::error::Error for ReconstructError {}

impl From<NumericsError> for ReconstructError {
    fn from(e: NumericsError) -> Self {
        ReconstructError::Numerics(e)
    }
}

/// Measures a signal against every subspace.
pub fn measure(
    ff: &FusionFrame,
    signal: &[f64],
    mode: MeasurementMode,
) -> Result<Measurements, ReconstructError> {
    let ambient = ff.ambient_dim();
    if signal.len() != ambient {
        return Err(ReconstructError::SignalLength { got: signal.len(), expected: ambient });
    }
    let blocks = ff
        .members()
        .iter()
        .map(|ws| {
            let basis = ws.subspace().basis();
            let v = ws.weight();
            // Coordinates c = v U^T f; full mode lifts them back through
            // U, which is the weighted projection.
            let coords: Vec<f64> = (0..basis.cols())
                .map(|c| v * (0..ambient).map(|r| basis.get(r, c) * signal[r]).sum::<f64>())
                .collect();
            match mode {
                MeasurementMode::Reduced => coords,
                MeasurementMode::Full => basis.matvec(&coords),
            }
        })
        .collect();
    Ok(Measurements { mode, blocks })
}

/// Reusable reconstruction context holding the factorized frame operator.
pub struct Reconstructor {
    frame: FusionFrame,
    factor: SpdFactor,
}

impl Reconstructor {
    /// Factorizes the frame operator once. Fails when the family is not a
    /// fusion frame (the operator is singular within `tol`).
    pub fn new(ff: &FusionFrame, tol: f64) -> Result<Self, ReconstructError> {
        let factor = SpdFactor::new(&fusion_frame_operator(ff), tol)?;
        Ok(Reconstructor { frame: ff.clone(), factor })
    }

    pub fn frame(&self) -> &FusionFrame {
        &self.frame
    }

    /// Recovers the signal from its measurements.
    pub fn reconstruct(&self, measurements: &Measurements) -> Result<Vec<f64>, ReconstructError> {
        let ff = &self.frame;
        let ambient = ff.ambient_dim();
        if measurements.blocks.len() != ff.len() {
            return Err(ReconstructError::BlockCount {
                got: measurements.blocks.len(),
                expected: ff.len(),
            });
        }
        let mut assembled = vec![0.0; ambient];
        for (i, (ws, block)) in ff.members().iter().zip(&measurements.blocks).enumerate() {
            let basis = ws.subspace().basis();
            let v = ws.weight();
            let expected = match measurements.mode {
                MeasurementMode::Full => ambient,
                MeasurementMode::Reduced => basis.cols(),
            };
            if block.len() != expected {
                return Err(ReconstructError::BlockLength { index: i, got: block.len(), expected });
            }
            match measurements.mode {
                MeasurementMode::Full => {
                    for (r, x) in block.iter().enumerate() {
                        assembled[r] += v * x;
                    }
                }
                MeasurementMode::Reduced => {
                    let lifted = basis.matvec(block);
                    for (r, x) in lifted.iter().enumerate() {
                        assembled[r] += v * x;
                    }
                }
            }
        }
        Ok(self.factor.solve(&assembled))
    }
}

/// One-shot reconstruction; prefer [`Reconstructor`] for repeated use.
pub fn reconstruct(
    ff: &FusionFrame,
    measurements: &Measurements,
    tol: f64,
) -> Result<Vec<f64>, ReconstructError> {
    Reconstructor::new(ff, tol)?.reconstruct(measurements)
}
