//! Property tests for the library invariants: eigensolver contracts,
//! orthonormalization, operator identities, the sparse construction's
//! structural guarantees, and reconstruction round trips.

use proptest::prelude::*;

use fusion_frames::model::{chordal_distance_sq, frame_bounds, fusion_frame_operator};
use fusion_frames::numerics::{
    dot, gram_schmidt, norm2, orthonormal_completion, solve_spd, sym_eig, Matrix,
};
use fusion_frames::reconstruct::{measure, reconstruct, MeasurementMode};
use fusion_frames::testing::{
    random_feasible_spec, random_fusion_frame, random_subspace, random_vector, SpecShape, TestRng,
};
use fusion_frames::tetris::construct_real;

fn symmetric_from_upper(n: usize, upper: &[f64]) -> Matrix {
    let mut a = Matrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            a.set(i, j, upper[k]);
            a.set(j, i, upper[k]);
            k += 1;
        }
    }
    a
}

fn spec_shape(k: usize) -> SpecShape {
    match k % 3 {
        0 => SpecShape::Integer,
        1 => SpecShape::Continuous,
        _ => SpecShape::Mixed,
    }
}

proptest! {
    #[test]
    fn sym_eig_diagonalizes(
        n in 2usize..6,
        entries in proptest::collection::vec(-10.0f64..10.0, 15),
    ) {
        let a = symmetric_from_upper(n, &entries[..n * (n + 1) / 2]);
        let eig = sym_eig(&a, 1e-10).unwrap();
        let scale = a.max_abs().max(1.0);

        // Eigenvalues must come out descending.
        for w in eig.values.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        // Eigenvectors are orthonormal and satisfy A q = lambda q.
        prop_assert!(eig.vectors.gram_residual() <= 1e-12);
        for (j, &lambda) in eig.values.iter().enumerate() {
            let q = eig.vectors.col(j);
            let aq = a.matvec(&q);
            let res: f64 = aq
                .iter()
                .zip(&q)
                .map(|(x, y)| (x - lambda * y).abs())
                .fold(0.0, f64::max);
            prop_assert!(res <= 1e-9 * scale, "eigenpair residual {res}");
        }
    }

    #[test]
    fn gram_schmidt_output_is_orthonormal_and_spanning(
        seed in any::<u64>(),
        ambient in 2usize..6,
        count in 1usize..7,
    ) {
        let mut rng = TestRng::new(seed);
        let vectors: Vec<Vec<f64>> =
            (0..count).map(|_| random_vector(&mut rng, ambient, 2.0)).collect();
        let q = gram_schmidt(ambient, &vectors, 1e-10);
        prop_assert!(q.cols() <= ambient.min(count));
        if q.cols() > 0 {
            prop_assert!(q.gram_residual() <= 1e-10);
        }
        // Every input lies in the span of the output.
        for v in &vectors {
            let coeffs: Vec<f64> = (0..q.cols()).map(|c| dot(&q.col(c), v)).collect();
            let back = q.matvec(&coeffs);
            let res: f64 = v
                .iter()
                .zip(&back)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            prop_assert!(res <= 1e-7 * (1.0 + norm2(v)), "residual {res}");
        }
    }

    #[test]
    fn completion_extends_to_an_orthogonal_matrix(
        seed in any::<u64>(),
        ambient in 2usize..7,
    ) {
        let mut rng = TestRng::new(seed);
        let dim = 1 + rng.usize_below(ambient - 1);
        let u = random_subspace(&mut rng, ambient, dim);
        let extra = orthonormal_completion(u.basis(), 1e-10).unwrap();
        prop_assert_eq!(extra.cols(), ambient - dim);
        let full = Matrix::hstack(u.basis(), &extra);
        prop_assert!(full.gram_residual() <= 1e-10);
    }

    #[test]
    fn solve_spd_round_trips(
        seed in any::<u64>(),
        n in 1usize..7,
    ) {
        let mut rng = TestRng::new(seed);
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, rng.range(-3.0, 3.0));
            }
        }
        // A^T A + I/2 is symmetric positive definite.
        let mut s = a.transpose().matmul(&a);
        for i in 0..n {
            s.set(i, i, s.get(i, i) + 0.5);
        }
        let b = random_vector(&mut rng, n, 2.0);
        let x = solve_spd(&s, &b, 1e-12).unwrap();
        let back = s.matvec(&x);
        let scale = s.max_abs().max(1.0) * (norm2(&x) + 1.0);
        let res: f64 = back.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        prop_assert!(res <= 1e-9 * scale, "residual {res}");
    }

    #[test]
    fn operator_quadratic_form_matches_projection_sum(
        seed in any::<u64>(),
    ) {
        let mut rng = TestRng::new(seed);
        let ambient = 2 + rng.usize_below(4);
        let n = 2 + rng.usize_below(4);
        let dims: Vec<usize> = (0..n).map(|_| 1 + rng.usize_below(ambient)).collect();
        let ff = random_fusion_frame(&mut rng, ambient, &dims, (0.3, 1.8));
        let f = random_vector(&mut rng, ambient, 1.5);

        let s = fusion_frame_operator(&ff);
        let sf = s.matvec(&f);
        let quad = dot(&sf, &f);
        let mut sum = 0.0;
        for ws in ff.members() {
            let p = ws.subspace().projection();
            let pf = p.matvec(&f);
            sum += ws.weight() * ws.weight() * dot(&pf, &pf);
        }
        let scale = quad.abs().max(1.0);
        prop_assert!((quad - sum).abs() <= 1e-10 * scale);

        // Trace identity: tr S = sum of v_i^2 m_i.
        let trace: f64 = (0..ambient).map(|i| s.get(i, i)).sum();
        let weighted: f64 = ff
            .members()
            .iter()
            .map(|ws| ws.weight() * ws.weight() * ws.subspace().dim() as f64)
            .sum();
        prop_assert!((trace - weighted).abs() <= 1e-10 * weighted.max(1.0));
    }

    #[test]
    fn chordal_distance_is_symmetric_and_bounded(
        seed in any::<u64>(),
    ) {
        let mut rng = TestRng::new(seed);
        let ambient = 2 + rng.usize_below(4);
        let dim_a = 1 + rng.usize_below(ambient);
        let dim_b = 1 + rng.usize_below(ambient);
        let a = random_subspace(&mut rng, ambient, dim_a);
        let b = random_subspace(&mut rng, ambient, dim_b);
        let dab = chordal_distance_sq(&a, &b).unwrap();
        let dba = chordal_distance_sq(&b, &a).unwrap();
        prop_assert!((dab - dba).abs() <= 1e-11);
        // tr(P_a P_b) lies in [0, min(dim a, dim b)].
        let m = ambient as f64;
        prop_assert!(dab <= m + 1e-11);
        prop_assert!(dab >= m - (a.dim().min(b.dim()) as f64) - 1e-11);
    }

    #[test]
    fn construction_output_is_structurally_sound(
        seed in any::<u64>(),
        shape_pick in 0usize..3,
    ) {
        let mut rng = TestRng::new(seed);
        let spec = random_feasible_spec(&mut rng, spec_shape(shape_pick));
        let (t, ff) = construct_real(&spec).unwrap();
        let w = t.matrix();
        let m = spec.lambdas().len();
        let n = spec.num_subspaces();
        let dim = spec.subspace_dim();
        prop_assert_eq!((w.rows(), w.cols()), (n * dim, m));

        // Unit-norm rows with at most two nonzero entries.
        for i in 0..w.rows() {
            let row = w.row(i);
            let norm: f64 = row.iter().map(|x| x * x).sum::<f64>();
            prop_assert!((norm - 1.0).abs() <= 1e-12, "row {i} norm {norm}");
            let nonzeros = row.iter().filter(|&&x| x != 0.0).count();
            prop_assert!(nonzeros >= 1 && nonzeros <= 2);
        }

        // Columns are orthogonal with squared norms equal to the spectrum.
        let gram = w.transpose().matmul(w);
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    prop_assert!((gram.get(i, i) - spec.lambdas()[i]).abs() <= 1e-9);
                } else {
                    prop_assert!(gram.get(i, j).abs() <= 1e-10);
                }
            }
        }

        // Every subspace has the prescribed dimension, weights are 1, and
        // the operator eigenvalues match the prescription.
        prop_assert!(ff.dims().iter().all(|&d| d == dim));
        prop_assert!(ff.weights().iter().all(|&v| v == 1.0));
        let eig = sym_eig(&fusion_frame_operator(&ff), 1e-10).unwrap();
        for (got, want) in eig.values.iter().zip(spec.lambdas()) {
            prop_assert!((got - want).abs() <= 1e-9, "eigenvalue {got} vs {want}");
        }

        // The construction is a pure function of the spectrum.
        let (t2, _) = construct_real(&spec).unwrap();
        let bits_equal = t
            .matrix()
            .data()
            .iter()
            .zip(t2.matrix().data())
            .all(|(x, y)| x.to_bits() == y.to_bits());
        prop_assert!(bits_equal);
    }

    #[test]
    fn column_profiles_follow_the_partial_sum_rule(
        seed in any::<u64>(),
        shape_pick in 0usize..3,
    ) {
        let mut rng = TestRng::new(seed);
        let spec = random_feasible_spec(&mut rng, spec_shape(shape_pick));
        let (t, _) = construct_real(&spec).unwrap();
        let profiles = t.column_profiles();
        let expected = expected_profiles(spec.lambdas());
        for (j, (got, want)) in profiles.iter().zip(&expected).enumerate() {
            prop_assert_eq!(got.nonzero_count, want.0, "column {}", j);
            prop_assert_eq!(got.has_initial, want.1, "column {}", j);
            prop_assert_eq!(got.has_terminal, want.2, "column {}", j);
        }
    }

    #[test]
    fn reconstruction_round_trips_on_random_frames(
        seed in any::<u64>(),
        reduced in any::<bool>(),
    ) {
        let mut rng = TestRng::new(seed);
        let ambient = 2 + rng.usize_below(4);
        let mut dims: Vec<usize> = Vec::new();
        while dims.iter().sum::<usize>() < ambient {
            dims.push(1 + rng.usize_below(ambient));
        }
        dims.push(1 + rng.usize_below(ambient));
        let ff = random_fusion_frame(&mut rng, ambient, &dims, (0.4, 1.6));
        let (lower, _) = frame_bounds(&ff);
        // Spanning failures have measure zero; guard regardless.
        prop_assume!(lower > 1e-6);

        let f = random_vector(&mut rng, ambient, 2.0);
        let mode = if reduced { MeasurementMode::Reduced } else { MeasurementMode::Full };
        let meas = measure(&ff, &f, mode).unwrap();
        let got = reconstruct(&ff, &meas, 1e-10).unwrap();
        let scale = f.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        let res: f64 = f.iter().zip(&got).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(res <= 1e-9 * scale, "round trip residual {res}");
    }
}

/// Independent per-column occupancy rule, stated through partial sums:
/// with `S_j` the j-th partial sum of the spectrum and `t_j` its
/// fractional part (snapped at 1e-9), column `j` ends a hand-off block
/// iff `t_{j-1} > 0`, starts one iff `t_j > 0`, and its nonzero count is
/// the singleton count plus two per block:
///
/// - neither: `lambda_j`
/// - ends only: `floor(lambda_j) + 1`
/// - starts only: `floor(lambda_j) + 2`
/// - both: `floor(lambda_j) + 2` if `t_j >= t_{j-1}`, else
///   `floor(lambda_j) + 3`
fn expected_profiles(lambdas: &[f64]) -> Vec<(usize, bool, bool)> {
    fn snapped_frac(x: f64) -> f64 {
        let f = x - x.floor();
        if f <= 1e-9 || f >= 1.0 - 1e-9 {
            0.0
        } else {
            f
        }
    }
    let mut out = Vec::with_capacity(lambdas.len());
    let mut partial = 0.0;
    let mut t_prev = 0.0;
    for &l in lambdas {
        partial += l;
        let t_cur = snapped_frac(partial);
        let terminal = t_prev > 0.0;
        let initial = t_cur > 0.0;
        let floor = (l + 1e-9).floor() as usize;
        let count = match (terminal, initial) {
            (false, false) => l.round() as usize,
            (true, false) => floor + 1,
            (false, true) => floor + 2,
            (true, true) => {
                // An integer eigenvalue passes the block through with
                // t_cur = t_prev; compare with slack so float drift in
                // the partial sums cannot flip the branch.
                if t_cur >= t_prev - 1e-9 {
                    floor + 2
                } else {
                    floor + 3
                }
            }
        };
        out.push((count, initial, terminal));
        t_prev = t_cur;
    }
    out
}
