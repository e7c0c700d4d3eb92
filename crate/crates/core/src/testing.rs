//! Deterministic generators for tests and examples.
//!
//! Everything here is seeded and reproducible: the same seed gives the same
//! frames on every platform, so tests can freeze expected values. Not a
//! cryptographic generator.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::model::{FusionFrame, SpectrumSpec, Subspace, WeightedSubspace};
use crate::numerics::{gram_schmidt, norm2, Matrix};
use crate::DEFAULT_ORTHO_TOL;

/// Splitmix-style pseudo random generator with a 64-bit state.
#[derive(Debug, Clone)]
pub struct TestRng {
    state: u64,
}

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform().max(f64::MIN_POSITIVE);
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }

    /// Uniform integer in `[0, n)`. Modulo bias is irrelevant at test sizes.
    pub fn usize_below(&mut self, n: usize) -> usize {
        assert!(n > 0, "usize_below needs a positive bound");
        (self.next_u64() % n as u64) as usize
    }
}

/// Symmetric matrix with entries of magnitude up to `scale`.
pub fn random_symmetric(rng: &mut TestRng, n: usize, scale: f64) -> Matrix {
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = scale * rng.range(-1.0, 1.0);
            a.set(i, j, x);
            a.set(j, i, x);
        }
    }
    a
}

pub fn random_vector(rng: &mut TestRng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * rng.normal()).collect()
}

pub fn random_unit_vector(rng: &mut TestRng, n: usize) -> Vec<f64> {
    loop {
        let v = random_vector(rng, n, 1.0);
        let norm = norm2(&v);
        if norm > 1e-6 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// `ambient x dim` matrix with orthonormal columns drawn from normalized
/// Gaussian vectors. Retries on the measure-zero event of a rank drop.
pub fn random_orthonormal(rng: &mut TestRng, ambient: usize, dim: usize) -> Matrix {
    assert!(dim <= ambient, "cannot fit {dim} orthonormal vectors in dimension {ambient}");
    for _ in 0..64 {
        let vectors: Vec<Vec<f64>> = (0..dim).map(|_| random_vector(rng, ambient, 1.0)).collect();
        let q = gram_schmidt(ambient, &vectors, 1e-8);
        if q.cols() == dim {
            return q;
        }
    }
    panic!("failed to draw {dim} independent vectors in dimension {ambient}");
}

/// Random orthogonal matrix (determinant may be either sign).
pub fn random_orthogonal(rng: &mut TestRng, n: usize) -> Matrix {
    random_orthonormal(rng, n, n)
}

pub fn random_subspace(rng: &mut TestRng, ambient: usize, dim: usize) -> Subspace {
    Subspace::from_basis(random_orthonormal(rng, ambient, dim), DEFAULT_ORTHO_TOL)
        .expect("generated basis is orthonormal")
}

/// Fusion frame with random subspaces of the given dimensions and weights
/// drawn uniformly from `weight_range`.
pub fn random_fusion_frame(
    rng: &mut TestRng,
    ambient: usize,
    dims: &[usize],
    weight_range: (f64, f64),
) -> FusionFrame {
    let members = dims
        .iter()
        .map(|&d| {
            let w = rng.range(weight_range.0, weight_range.1);
            WeightedSubspace::new(random_subspace(rng, ambient, d), w)
                .expect("weights from a positive range are valid")
        })
        .collect();
    FusionFrame::new(members).expect("generated members share the ambient dimension")
}

/// Three lines in the plane spanned by `e1`, `(e1 + e2) / sqrt(2)` and
/// `e2`, with unit weights. Frame operator `[[1.5, 0.5], [0.5, 1.5]]`,
/// optimal bounds `(1, 2)`.
pub fn three_line_frame() -> FusionFrame {
    let line = |x: f64, y: f64| {
        Subspace::from_basis(Matrix::from_columns(2, &[vec![x, y]]), DEFAULT_ORTHO_TOL).unwrap()
    };
    FusionFrame::unit_weights(vec![
        line(1.0, 0.0),
        line(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        line(0.0, 1.0),
    ])
    .unwrap()
}

/// Applies the orthogonal map `q` to every subspace, keeping the weights.
/// The frame operator transforms by conjugation, so the spectrum is kept.
pub fn rotate_fusion_frame(ff: &FusionFrame, q: &Matrix) -> FusionFrame {
    let members = ff
        .members()
        .iter()
        .map(|ws| {
            let rotated = q.matmul(ws.subspace().basis());
            let subspace = Subspace::from_basis(rotated, DEFAULT_ORTHO_TOL)
                .expect("orthogonal maps preserve orthonormal bases");
            WeightedSubspace::new(subspace, ws.weight()).expect("weight is unchanged")
        })
        .collect();
    FusionFrame::new(members).expect("rotation preserves the ambient dimension")
}

/// Shape of a sampled spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecShape {
    /// Every eigenvalue an integer.
    Integer,
    /// Eigenvalues perturbed off the integers almost surely.
    Continuous,
    /// Integer spectrum with one fractional transfer between two entries.
    Mixed,
}

/// Samples a spectrum that satisfies the construction's sufficient
/// conditions by keeping every eigenvalue inside `[2, N - 2.2]` (fractional
/// shapes) or `[2, N]` (integer shape) while preserving the exact sum
/// `N * m`. Dimensions are drawn so that such a window exists, with the
/// ambient dimension capped at 10.
pub fn random_feasible_spec(rng: &mut TestRng, shape: SpecShape) -> SpectrumSpec {
    let n = 6 + rng.usize_below(4);
    let m = 1 + rng.usize_below(3);
    let total = (n * m) as f64;
    let (lo, hi) = match shape {
        SpecShape::Integer => (2.0, n as f64),
        _ => (2.0, n as f64 - 2.2),
    };
    // Window [lo, hi] must admit num_cols values averaging total/num_cols.
    let min_cols = (total / hi).ceil() as usize;
    let max_cols = ((total / lo).floor() as usize).min(10);
    assert!(min_cols <= max_cols);
    let num_cols = min_cols + rng.usize_below(max_cols - min_cols + 1);

    let mut lambdas = match shape {
        SpecShape::Integer => {
            let base = n * m / num_cols;
            let rem = n * m % num_cols;
            let mut v: Vec<f64> = (0..num_cols)
                .map(|j| if j < rem { (base + 1) as f64 } else { base as f64 })
                .collect();
            for _ in 0..(4 * num_cols) {
                let a = rng.usize_below(num_cols);
                let b = rng.usize_below(num_cols);
                if a != b && v[a] - 1.0 >= lo && v[b] + 1.0 <= hi {
                    v[a] -= 1.0;
                    v[b] += 1.0;
                }
            }
            v
        }
        SpecShape::Continuous => {
            let mut v = vec![total / num_cols as f64; num_cols];
            for _ in 0..(4 * num_cols) {
                let a = rng.usize_below(num_cols);
                let b = rng.usize_below(num_cols);
                if a == b {
                    continue;
                }
                let room = (v[a] - lo).min(hi - v[b]);
                if room > 0.0 {
                    let delta = rng.range(0.0, room);
                    v[a] -= delta;
                    v[b] += delta;
                }
            }
            v
        }
        SpecShape::Mixed => {
            let mut v = {
                let base = n * m / num_cols;
                let rem = n * m % num_cols;
                let mut v: Vec<f64> = (0..num_cols)
                    .map(|j| if j < rem { (base + 1) as f64 } else { base as f64 })
                    .collect();
                for _ in 0..(4 * num_cols) {
                    let a = rng.usize_below(num_cols);
                    let b = rng.usize_below(num_cols);
                    if a != b && v[a] - 1.0 >= lo && v[b] + 1.0 <= hi {
                        v[a] -= 1.0;
                        v[b] += 1.0;
                    }
                }
                v
            };
            if num_cols >= 2 {
                // One fractional hand-off between two distinct entries,
                // sized so both stay inside the window.
                let a = rng.usize_below(num_cols);
                let b = (a + 1 + rng.usize_below(num_cols - 1)) % num_cols;
                let room = (v[a] - lo).min(hi - v[b]);
                if room > 0.2 {
                    let delta = rng.range(0.1, room.min(0.9));
                    v[a] -= delta;
                    v[b] += delta;
                }
            }
            v
        }
    };
    lambdas.sort_by(|x, y| y.partial_cmp(x).unwrap());
    SpectrumSpec::new(lambdas, n, m).expect("sampled spectrum is well formed")
}

/// Unit-weight fusion frame with equal subspace dimensions whose spectrum
/// has spread below one, produced by the sparse construction and hidden
/// behind a random rotation. Suitable input for tight completion.
pub fn random_narrow_spread_frame(rng: &mut TestRng) -> FusionFrame {
    let n = 7 + rng.usize_below(3);
    let m = 1 + rng.usize_below(3);
    let total = (n * m) as f64;
    // Column count window where base + offsets stay inside [2, N - 2.2]
    // for offsets in [0, 0.9): need 2.9 <= total / M <= N - 3.1.
    let min_cols = (total / (n as f64 - 3.1)).ceil() as usize;
    let max_cols = (total / 2.9).floor() as usize;
    assert!(min_cols <= max_cols);
    let num_cols = min_cols + rng.usize_below(max_cols - min_cols + 1);

    let offsets: Vec<f64> = (0..num_cols).map(|_| rng.range(0.0, 0.9)).collect();
    let shift = (total - offsets.iter().sum::<f64>()) / num_cols as f64;
    let mut lambdas: Vec<f64> = offsets.iter().map(|o| o + shift).collect();
    // Restore the exact sum after rounding drift; the correction is a few
    // ulps and cannot move the spread past one.
    let drift = total - lambdas.iter().sum::<f64>();
    lambdas[0] += drift;
    lambdas.sort_by(|x, y| y.partial_cmp(x).unwrap());

    let spec = SpectrumSpec::new(lambdas, n, m).expect("sampled spectrum is well formed");
    let (_, ff) = crate::tetris::construct_real(&spec).expect("sampled spectrum is feasible");
    let ambient = ff.ambient_dim();
    rotate_fusion_frame(&ff, &random_orthogonal(rng, ambient))
}

/// Parseval fusion frame built from two random orthogonal matrices: the
/// rows of each, grouped in blocks of `subspace_dim`, span the subspaces,
/// and every weight is `1 / sqrt(2)`. Requires `subspace_dim` to divide
/// `ambient`. Total dimension count is `2 * ambient`.
pub fn random_two_block_parseval(
    rng: &mut TestRng,
    ambient: usize,
    subspace_dim: usize,
) -> FusionFrame {
    assert!(ambient % subspace_dim == 0, "subspace_dim must divide ambient");
    let mut members = Vec::new();
    for _ in 0..2 {
        let q = random_orthogonal(rng, ambient);
        push_row_blocks(&mut members, &q, subspace_dim, FRAC_1_SQRT_2);
    }
    FusionFrame::new(members).expect("blocks share the ambient dimension")
}

/// Parseval fusion frame with two distinct weights `u` and
/// `w = sqrt(1/2 - u^2)`: two orthogonal-matrix row partitions carry weight
/// `u` and two carry `w`, so the operator is `2 (u^2 + w^2) I = I`. The
/// window for `u` sits above `1/2`, which keeps `u` and `w` apart.
pub fn random_varied_weight_parseval(
    rng: &mut TestRng,
    ambient: usize,
    subspace_dim: usize,
) -> FusionFrame {
    assert!(ambient % subspace_dim == 0, "subspace_dim must divide ambient");
    let u = rng.range(0.52, 0.65);
    let w = (0.5 - u * u).sqrt();
    let mut members = Vec::new();
    for &weight in &[u, u, w, w] {
        let q = random_orthogonal(rng, ambient);
        push_row_blocks(&mut members, &q, subspace_dim, weight);
    }
    FusionFrame::new(members).expect("blocks share the ambient dimension")
}

fn push_row_blocks(
    members: &mut Vec<WeightedSubspace>,
    q: &Matrix,
    subspace_dim: usize,
    weight: f64,
) {
    let ambient = q.rows();
    for start in (0..ambient).step_by(subspace_dim) {
        let columns: Vec<Vec<f64>> =
            (start..start + subspace_dim).map(|r| q.row(r).to_vec()).collect();
        let basis = Matrix::from_columns(ambient, &columns);
        let subspace = Subspace::from_basis(basis, DEFAULT_ORTHO_TOL)
            .expect("rows of an orthogonal matrix are orthonormal");
        members.push(WeightedSubspace::new(subspace, weight).expect("weight is positive"));
    }
}
