//! Brute-force oracles used to cross-check the library's numerics.
//!
//! Everything here is deliberately independent of the implementations under
//! test: eigenvalues come from characteristic polynomial root finding, frame
//! bounds from scanning the Rayleigh quotient over a grid of unit vectors.

#![allow(dead_code)]

use fusion_frames::Matrix;

/// Eigenvalues of a symmetric matrix with `n <= 4`, sorted descending,
/// computed from the characteristic polynomial.
///
/// Coefficients come from Newton's identities on the power sums
/// `tr(A^k)`; roots from closed forms (n <= 3) or from bisection between
/// the (real) critical points of the quartic (n = 4).
pub fn charpoly_eigenvalues(a: &Matrix) -> Vec<f64> {
    assert_eq!(a.rows(), a.cols(), "oracle needs a square matrix");
    let n = a.rows();
    let mut roots = match n {
        1 => vec![a.get(0, 0)],
        2 => {
            let tr = a.get(0, 0) + a.get(1, 1);
            let det = a.get(0, 0) * a.get(1, 1) - a.get(0, 1) * a.get(1, 0);
            let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
            vec![(tr + disc) / 2.0, (tr - disc) / 2.0]
        }
        3 => {
            // Monic cubic x^3 + b x^2 + c x + d from traces.
            let s1 = trace_power(a, 1);
            let s2 = trace_power(a, 2);
            let s3 = trace_power(a, 3);
            let e1 = s1;
            let e2 = (e1 * s1 - s2) / 2.0;
            let e3 = (e2 * s1 - e1 * s2 + s3) / 3.0;
            monic_cubic_roots(-e1, e2, -e3).to_vec()
        }
        4 => {
            let s1 = trace_power(a, 1);
            let s2 = trace_power(a, 2);
            let s3 = trace_power(a, 3);
            let s4 = trace_power(a, 4);
            let e1 = s1;
            let e2 = (e1 * s1 - s2) / 2.0;
            let e3 = (e2 * s1 - e1 * s2 + s3) / 3.0;
            let e4 = (e3 * s1 - e2 * s2 + e1 * s3 - s4) / 4.0;
            quartic_roots_real(e1, e2, e3, e4, gershgorin_radius(a))
        }
        _ => panic!("charpoly oracle only handles n <= 4"),
    };
    roots.sort_by(|x, y| y.partial_cmp(x).unwrap());
    roots
}

fn trace_power(a: &Matrix, k: usize) -> f64 {
    let mut p = Matrix::identity(a.rows());
    for _ in 0..k {
        p = p.matmul(a);
    }
    (0..a.rows()).map(|i| p.get(i, i)).sum()
}

fn gershgorin_radius(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut r: f64 = 0.0;
    for i in 0..n {
        let row_sum: f64 = (0..n).map(|j| a.get(i, j).abs()).sum();
        r = r.max(row_sum);
    }
    r
}

/// All-real roots of x^3 + b x^2 + c x + d (trigonometric form), ascending.
fn monic_cubic_roots(b: f64, c: f64, d: f64) -> [f64; 3] {
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let scale = (b.abs() + c.abs() + d.abs()).max(1.0);
    if p > -1e-14 * scale * scale {
        // Near-degenerate: a (numerically) triple root.
        return [shift, shift, shift];
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let phi = arg.acos() / 3.0;
    let mut roots = [
        m * phi.cos() + shift,
        m * (phi - 2.0 * std::f64::consts::PI / 3.0).cos() + shift,
        m * (phi + 2.0 * std::f64::consts::PI / 3.0).cos() + shift,
    ];
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

/// Roots of x^4 - e1 x^3 + e2 x^2 - e3 x + e4 when all four are real:
/// bisection on the monotone intervals delimited by the derivative's roots.
fn quartic_roots_real(e1: f64, e2: f64, e3: f64, e4: f64, radius: f64) -> Vec<f64> {
    let p = |x: f64| (((x - e1) * x + e2) * x - e3) * x + e4;
    let crit = monic_cubic_roots(-3.0 * e1 / 4.0, e2 / 2.0, -e3 / 4.0);
    let lo = -radius - 1.0;
    let hi = radius + 1.0;
    let ends = [lo, crit[0], crit[1], crit[2], hi];

    let mut roots = Vec::new();
    for w in ends.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (fa, fb) = (p(a), p(b));
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() * fb.signum() < 0.0 {
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if p(mid).signum() == fa.signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }
    // Sign changes miss double roots, which sit exactly at critical points.
    let scale = radius.max(1.0).powi(4);
    for c in crit {
        while roots.len() < 4 && p(c).abs() <= 1e-7 * scale {
            roots.push(c);
        }
    }
    assert_eq!(roots.len(), 4, "quartic oracle lost a root");
    roots
}

/// Extremes of the Rayleigh quotient <S f, f> over unit vectors, scanned on
/// a dense grid. Only feasible for ambient dimension <= 3; accuracy is
/// limited by the grid spacing (quadratic near the extremes, so ~1e-4).
pub fn rayleigh_extremes_grid(s: &Matrix) -> (f64, f64) {
    let n = s.rows();
    assert_eq!(n, s.cols());
    let quad = |f: &[f64]| {
        let sf = s.matvec(f);
        f.iter().zip(sf.iter()).map(|(x, y)| x * y).sum::<f64>()
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    match n {
        1 => {
            lo = s.get(0, 0);
            hi = lo;
        }
        2 => {
            let steps = 6000;
            for k in 0..steps {
                let t = std::f64::consts::PI * k as f64 / steps as f64;
                let q = quad(&[t.cos(), t.sin()]);
                lo = lo.min(q);
                hi = hi.max(q);
            }
        }
        3 => {
            let (pol, azi) = (700, 1400);
            for i in 0..=pol {
                let th = std::f64::consts::PI * i as f64 / pol as f64;
                for j in 0..azi {
                    let ph = 2.0 * std::f64::consts::PI * j as f64 / azi as f64;
                    let f = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
                    let q = quad(&f);
                    lo = lo.min(q);
                    hi = hi.max(q);
                }
            }
        }
        _ => panic!("grid oracle only handles n <= 3"),
    }
    (lo, hi)
}

pub fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!((got - want).abs() <= tol, "{what}: got {got}, want {want} (tol {tol})");
}
