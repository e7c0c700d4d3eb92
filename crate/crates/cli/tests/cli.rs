//! End-to-end checks of the command line interface: exit codes, file
//! round trips, and report formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fusion_frames::io;
use fusion_frames::model::{frame_bounds, fusion_frame_operator};
use fusion_frames::numerics::Matrix;

fn fftool() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fftool"))
}

fn run(args: &[&str], paths: &[(&str, &Path)]) -> Output {
    let mut cmd = fftool();
    for a in args {
        cmd.arg(a);
    }
    for (flag, path) in paths {
        cmd.arg(flag).arg(path);
    }
    cmd.output().expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stderr_text(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).to_string()
}

fn stdout_text(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: tempfile::tempdir().expect("temp dir") }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).expect("fixture written");
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

const GOLDEN_SPECTRUM: &str = "spectrum\nnum_subspaces 8\nsubspace_dim 1\nlambdas 2.75 2.75 2.5\n";

/// Constructs the reference frame and returns the document path.
fn golden_frame(ws: &Workspace) -> PathBuf {
    let spectrum = ws.file("golden.spectrum", GOLDEN_SPECTRUM);
    let out = ws.path("golden.frame");
    let output =
        run(&["construct", "--mode", "frame"], &[("--spectrum", &spectrum), ("--out", &out)]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));
    out
}

#[test]
fn construct_writes_frame_and_matrix_documents() {
    let ws = Workspace::new();
    let spectrum = ws.file("s.spectrum", GOLDEN_SPECTRUM);
    let frame = ws.path("s.frame");
    let matrix = ws.path("s.csv");
    let output = run(
        &["construct"],
        &[("--spectrum", &spectrum), ("--out", &frame), ("--out-matrix", &matrix)],
    );
    assert_eq!(code(&output), 0);
    assert!(stderr_text(&output).contains("constructed 8 subspaces"));

    let ff = io::parse_fusion_frame(&std::fs::read_to_string(&frame).unwrap()).unwrap();
    assert_eq!(ff.len(), 8);
    assert_eq!(ff.ambient_dim(), 3);
    let w = io::parse_matrix(&std::fs::read_to_string(&matrix).unwrap()).unwrap();
    assert_eq!((w.rows(), w.cols()), (8, 3));

    // The document round trips byte for byte through the library.
    let text = std::fs::read_to_string(&frame).unwrap();
    assert_eq!(io::format_fusion_frame(&ff), text);
}

#[test]
fn missing_and_malformed_inputs_exit_one() {
    let ws = Workspace::new();
    let out = ws.path("unused.frame");
    let missing =
        run(&["construct"], &[("--spectrum", &ws.path("absent.spectrum")), ("--out", &out)]);
    assert_eq!(code(&missing), 1);

    let malformed = ws.file("bad.spectrum", "spectrum\nnum_subspaces eight\n");
    let output = run(&["construct"], &[("--spectrum", &malformed), ("--out", &out)]);
    assert_eq!(code(&output), 1);
    assert!(stderr_text(&output).contains("line 2"), "stderr: {}", stderr_text(&output));
}

#[test]
fn infeasible_spectra_exit_two_with_named_violations() {
    let ws = Workspace::new();
    let spectrum =
        ws.file("bad.spectrum", "spectrum\nnum_subspaces 3\nsubspace_dim 1\nlambdas 2.5 0.5\n");
    let output = run(
        &["construct", "--mode", "integer"],
        &[("--spectrum", &spectrum), ("--out", &ws.path("out.frame"))],
    );
    assert_eq!(code(&output), 2);
    let err = stderr_text(&output);
    assert!(err.contains("not feasible"), "stderr: {err}");
    assert!(err.contains("not an integer"), "stderr: {err}");
}

#[test]
fn verify_reports_text_and_json() {
    let ws = Workspace::new();
    let frame = golden_frame(&ws);

    let text = run(&["verify"], &[("--frame", &frame)]);
    assert_eq!(code(&text), 0);
    let report = stdout_text(&text);
    for key in ["ambient_dim 3", "subspace_count 8", "is_fusion_frame true", "is_tight false"] {
        assert!(report.contains(key), "missing {key:?} in:\n{report}");
    }

    let json = run(&["verify", "--json"], &[("--frame", &frame)]);
    assert_eq!(code(&json), 0);
    let body = stdout_text(&json);
    for key in ["\"ambient_dim\":3", "\"is_fusion_frame\":true", "\"spectrum\":["] {
        assert!(body.contains(key), "missing {key:?} in:\n{body}");
    }
    assert_eq!(body.matches('{').count(), body.matches('}').count());
}

#[test]
fn verify_rejects_non_spanning_families_with_exit_three() {
    let ws = Workspace::new();
    let doc = "fusionframe\nambient_dim 2\nsubspace_count 1\nsubspace\nweight 1\nbasis 1 0\n";
    let frame = ws.file("line.frame", doc);
    let output = run(&["verify"], &[("--frame", &frame)]);
    assert_eq!(code(&output), 3);
    assert!(stderr_text(&output).contains("not a fusion frame"));
    // The report is still printed before the failure is signalled.
    assert!(stdout_text(&output).contains("is_fusion_frame false"));
}

#[test]
fn tol_flag_loosens_classification() {
    let ws = Workspace::new();
    let frame = golden_frame(&ws);
    let strict = run(&["verify"], &[("--frame", &frame)]);
    assert!(stdout_text(&strict).contains("is_tight false"));
    // Bounds are (2.5, 2.75); a quarter of slack makes them "equal".
    let loose = run(&["verify", "--tol", "0.3"], &[("--frame", &frame)]);
    assert_eq!(code(&loose), 0);
    assert!(stdout_text(&loose).contains("is_tight true"));
}

#[test]
fn spatial_complement_round_trips_through_files() {
    let ws = Workspace::new();
    let frame = golden_frame(&ws);
    let out = ws.path("complement.frame");
    let output = run(&["complement", "spatial"], &[("--frame", &frame), ("--out", &out)]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));

    let comp = io::parse_fusion_frame(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(comp.len(), 8);
    assert!(comp.dims().iter().all(|&d| d == 2));
    // Operator of the complement: 8 I - S has eigenvalues (5.5, 5.25, 5.25).
    let (lower, upper) = frame_bounds(&comp);
    assert!((lower - 5.25).abs() <= 1e-9 && (upper - 5.5).abs() <= 1e-9);
}

#[test]
fn spatial_complement_names_the_intersection_condition() {
    let ws = Workspace::new();
    let doc = "fusionframe\nambient_dim 3\nsubspace_count 2\n\
               subspace\nweight 1\nbasis 1 0 0\nbasis 0 1 0\n\
               subspace\nweight 1\nbasis 1 0 0\nbasis 0 0 1\n";
    let frame = ws.file("intersecting.frame", doc);
    let output =
        run(&["complement", "spatial"], &[("--frame", &frame), ("--out", &ws.path("out.frame"))]);
    assert_eq!(code(&output), 2);
    assert!(stderr_text(&output).contains("intersect"), "stderr: {}", stderr_text(&output));
}

#[test]
fn naimark_complement_requires_parseval_input() {
    let ws = Workspace::new();
    let frame = golden_frame(&ws);
    let output =
        run(&["complement", "naimark"], &[("--frame", &frame), ("--out", &ws.path("out.frame"))]);
    assert_eq!(code(&output), 2);
    assert!(stderr_text(&output).to_lowercase().contains("parseval"));
}

#[test]
fn naimark_complement_rescales_tight_input() {
    // Two orthonormal bases of the plane: 2-tight with unit weights.
    let ws = Workspace::new();
    let doc = "fusionframe\nambient_dim 2\nsubspace_count 4\n\
               subspace\nweight 1\nbasis 1 0\n\
               subspace\nweight 1\nbasis 0 1\n\
               subspace\nweight 1\nbasis 0.7071067811865476 0.7071067811865476\n\
               subspace\nweight 1\nbasis 0.7071067811865476 -0.7071067811865476\n";
    let frame = ws.file("tight.frame", doc);
    let out = ws.path("out.frame");
    let output = run(&["complement", "naimark"], &[("--frame", &frame), ("--out", &out)]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));
    assert!(stderr_text(&output).contains("rescaled"));

    let comp = io::parse_fusion_frame(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(comp.ambient_dim(), 2);
    assert_eq!(comp.len(), 4);
    let (lower, upper) = frame_bounds(&comp);
    assert!((lower - 1.0).abs() <= 1e-9 && (upper - 1.0).abs() <= 1e-9);
}

#[test]
fn tight_completion_writes_added_and_combined() {
    let ws = Workspace::new();
    let frame = golden_frame(&ws);
    let added_path = ws.path("added.frame");
    let combined_path = ws.path("combined.frame");
    let output = run(
        &["complete", "tight"],
        &[("--frame", &frame), ("--out-added", &added_path), ("--out-combined", &combined_path)],
    );
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));
    assert!(stderr_text(&output).contains("7 subspaces added, 15 total"));

    let added = io::parse_fusion_frame(&std::fs::read_to_string(&added_path).unwrap()).unwrap();
    assert_eq!(added.len(), 7);
    let combined =
        io::parse_fusion_frame(&std::fs::read_to_string(&combined_path).unwrap()).unwrap();
    let s = fusion_frame_operator(&combined);
    assert!(s.max_abs_diff(&Matrix::identity(3).scaled(5.0)) <= 1e-9);

    // An explicit constant below the minimum is refused.
    let refused = run(
        &["complete", "tight", "--A", "3"],
        &[
            ("--frame", &frame),
            ("--out-added", &ws.path("a.frame")),
            ("--out-combined", &ws.path("c.frame")),
        ],
    );
    assert_eq!(code(&refused), 2);
}

#[test]
fn shift_completion_through_the_cli() {
    let ws = Workspace::new();
    let frame = golden_frame(&ws);
    let out = ws.path("shifts.frame");
    let output = run(&["complete", "shifts"], &[("--frame", &frame), ("--out", &out)]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));

    let sc = io::parse_fusion_frame(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sc.len(), 24);
    let (lower, upper) = frame_bounds(&sc);
    assert!((lower - 8.0).abs() <= 1e-9 && (upper - 8.0).abs() <= 1e-9);

    // Weighted inputs are rejected.
    let doc = "fusionframe\nambient_dim 2\nsubspace_count 2\n\
               subspace\nweight 0.5\nbasis 1 0\nsubspace\nweight 1\nbasis 0 1\n";
    let weighted = ws.file("weighted.frame", doc);
    let refused =
        run(&["complete", "shifts"], &[("--frame", &weighted), ("--out", &ws.path("x.frame"))]);
    assert_eq!(code(&refused), 2);
    assert!(stderr_text(&refused).contains("weight"));
}

#[test]
fn reconstruct_prints_vector_and_residual() {
    let ws = Workspace::new();
    let frame = golden_frame(&ws);
    let signal = ws.file("signal.csv", "0.25,-1.5,2\n");

    for extra in [&[][..], &["--reduced"][..]] {
        let mut args = vec!["reconstruct"];
        args.extend_from_slice(extra);
        let output = run(&args, &[("--frame", &frame), ("--signal", &signal)]);
        assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));
        let out = stdout_text(&output);
        let mut lines = out.lines();
        let vector = io::parse_vector(lines.next().expect("vector line")).unwrap();
        assert_eq!(vector.len(), 3);
        for (got, want) in vector.iter().zip(&[0.25, -1.5, 2.0]) {
            assert!((got - want).abs() <= 1e-9);
        }
        let residual_line = lines.next().expect("residual line");
        let value: f64 = residual_line.strip_prefix("residual ").expect("prefix").parse().unwrap();
        assert!(value <= 1e-9);
    }

    // A signal of the wrong length is a precondition failure.
    let short = ws.file("short.csv", "1,2\n");
    let output = run(&["reconstruct"], &[("--frame", &frame), ("--signal", &short)]);
    assert_eq!(code(&output), 2);
}
