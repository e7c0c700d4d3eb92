//! Command-line front end for the fusion frame library.
//!
//! Every subcommand is a thin adapter over a library call: files are
//! parsed, the call is made, results go to files or standard output, and
//! diagnostics go to standard error. Exit codes are stable: 0 on success,
//! 1 on I/O or parse errors, 2 on infeasible or precondition failures,
//! 3 on verification failures.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fusion_frames::complements::{
    naimark_complement, rescale_to_parseval, spatial_complement, ComplementError,
};
use fusion_frames::completion::{shift_completion, tight_completion};
use fusion_frames::io;
use fusion_frames::model::validate;
use fusion_frames::reconstruct::{measure, MeasurementMode, Reconstructor};
use fusion_frames::tetris::{construct_integer, construct_real, TetrisError};
use fusion_frames::{FusionFrame, VerificationReport};

#[derive(Parser)]
#[command(name = "fftool", version, about = "Construct, transform and verify fusion frames")]
struct Cli {
    /// Tolerance for spectral checks and preconditions.
    #[arg(long, global = true, default_value_t = fusion_frames::DEFAULT_SPECTRAL_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a fusion frame with prescribed operator eigenvalues.
    Construct {
        /// Spectrum document (eigenvalues, subspace count, dimension).
        #[arg(long)]
        spectrum: PathBuf,
        /// Which construction to run; `frame` is the one-dimensional case.
        #[arg(long, value_enum, default_value_t = Mode::Real)]
        mode: Mode,
        /// Output fusion frame document.
        #[arg(long)]
        out: PathBuf,
        /// Optional CSV output of the construction matrix.
        #[arg(long)]
        out_matrix: Option<PathBuf>,
    },
    /// Verify a fusion frame document and report its properties.
    Verify {
        #[arg(long)]
        frame: PathBuf,
        /// Emit the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Derive a complement fusion frame.
    #[command(subcommand)]
    Complement(ComplementCmd),
    /// Complete a family of subspaces to a tight fusion frame.
    #[command(subcommand)]
    Complete(CompleteCmd),
    /// Measure a signal against a frame, reconstruct it, and report the
    /// round-trip residual.
    Reconstruct {
        #[arg(long)]
        frame: PathBuf,
        /// Signal vector (CSV).
        #[arg(long)]
        signal: PathBuf,
        /// Use reduced measurements (basis coordinates) instead of full
        /// projections.
        #[arg(long)]
        reduced: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Integer,
    Real,
    Frame,
}

#[derive(Subcommand)]
enum ComplementCmd {
    /// Orthogonal complements of the subspaces, same weights.
    Spatial {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Naimark complement of a Parseval fusion frame.
    Naimark {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum CompleteCmd {
    /// Add subspaces until the operator is a multiple of the identity.
    Tight {
        #[arg(long)]
        frame: PathBuf,
        /// Tightness constant; the minimal admissible one when absent.
        #[arg(long = "A")]
        constant: Option<f64>,
        /// Output document for the added subspaces.
        #[arg(long)]
        out_added: PathBuf,
        /// Output document for the combined tight frame.
        #[arg(long)]
        out_combined: PathBuf,
    },
    /// All cyclic shifts of completed orthonormal bases.
    Shifts {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A diagnostic message plus the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure { code: 1, message: format!("{}: {e}", path.display()) }
    }

    fn precondition(e: impl std::fmt::Display) -> Self {
        Failure { code: 2, message: e.to_string() }
    }

    fn verification(message: String) -> Self {
        Failure { code: 3, message }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn load_frame(path: &Path) -> Result<FusionFrame, Failure> {
    io::parse_fusion_frame(&read(path)?).map_err(|e| Failure::io(path, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("fftool: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tol = cli.tol;
    match cli.command {
        Command::Construct { spectrum, mode, out, out_matrix } => {
            let spec =
                io::parse_spectrum(&read(&spectrum)?).map_err(|e| Failure::io(&spectrum, e))?;
            if matches!(mode, Mode::Frame) && spec.subspace_dim() != 1 {
                return Err(Failure::precondition(format!(
                    "frame mode needs subspace_dim 1, document has {}",
                    spec.subspace_dim()
                )));
            }
            let result = match mode {
                Mode::Integer => construct_integer(&spec),
                Mode::Real | Mode::Frame => construct_real(&spec),
            };
            let (t, ff) = result.map_err(|e| match e {
                TetrisError::Infeasible(violations) => {
                    let mut message = String::from("spectrum is not feasible:");
                    for v in &violations {
                        let _ = write!(message, "\n  - {v}");
                    }
                    Failure { code: 2, message }
                }
                other => Failure::precondition(other),
            })?;
            write(&out, &io::format_fusion_frame(&ff))?;
            if let Some(path) = out_matrix {
                write(&path, &io::format_matrix(t.matrix()))?;
            }
            eprintln!(
                "constructed {} subspaces of dimension {} in dimension {}",
                ff.len(),
                spec.subspace_dim(),
                ff.ambient_dim()
            );
            Ok(())
        }
        Command::Verify { frame, json } => {
            let ff = load_frame(&frame)?;
            let report = validate(&ff, tol);
            if json {
                println!("{}", json_report(&report));
            } else {
                print!("{}", text_report(&report));
            }
            if report.is_fusion_frame {
                Ok(())
            } else {
                Err(Failure::verification(format!(
                    "not a fusion frame: lower bound {} is not positive at tolerance {}",
                    io::format_number(report.lower_bound),
                    io::format_number(report.tol)
                )))
            }
        }
        Command::Complement(cmd) => match cmd {
            ComplementCmd::Spatial { frame, out } => {
                let ff = load_frame(&frame)?;
                let comp = spatial_complement(&ff, tol).map_err(Failure::precondition)?;
                write(&out, &io::format_fusion_frame(&comp))?;
                eprintln!("spatial complement with {} subspaces written", comp.len());
                Ok(())
            }
            ComplementCmd::Naimark { frame, out } => {
                let ff = load_frame(&frame)?;
                // A tight input is rescaled to Parseval first; anything
                // else keeps the original diagnostic.
                let nc = match naimark_complement(&ff, tol) {
                    Ok(nc) => nc,
                    Err(e @ ComplementError::NotParseval { .. }) => {
                        match rescale_to_parseval(&ff, tol) {
                            Ok(parseval) => {
                                eprintln!("tight input rescaled to a Parseval frame");
                                naimark_complement(&parseval, tol).map_err(Failure::precondition)?
                            }
                            Err(_) => return Err(Failure::precondition(e)),
                        }
                    }
                    Err(e) => return Err(Failure::precondition(e)),
                };
                write(&out, &io::format_fusion_frame(&nc.complement))?;
                eprintln!(
                    "naimark complement in dimension {} (dilation dimension {}) written",
                    nc.complement.ambient_dim(),
                    nc.dilation_dim
                );
                Ok(())
            }
        },
        Command::Complete(cmd) => match cmd {
            CompleteCmd::Tight { frame, constant, out_added, out_combined } => {
                let ff = load_frame(&frame)?;
                let tc = tight_completion(&ff, constant, tol).map_err(Failure::precondition)?;
                write(&out_added, &io::format_fusion_frame(&tc.added))?;
                write(&out_combined, &io::format_fusion_frame(&tc.combined))?;
                eprintln!(
                    "tight completion at constant {}: {} subspaces added, {} total",
                    io::format_number(tc.constant),
                    tc.added.len(),
                    tc.combined.len()
                );
                Ok(())
            }
            CompleteCmd::Shifts { frame, out } => {
                let ff = load_frame(&frame)?;
                for (i, ws) in ff.members().iter().enumerate() {
                    if (ws.weight() - 1.0).abs() > tol {
                        return Err(Failure::precondition(format!(
                            "shift completion works on unweighted subspaces; subspace {i} has weight {}",
                            ws.weight()
                        )));
                    }
                }
                let subspaces: Vec<_> =
                    ff.members().iter().map(|ws| ws.subspace().clone()).collect();
                let sc = shift_completion(&subspaces, tol).map_err(Failure::precondition)?;
                write(&out, &io::format_fusion_frame(&sc.frame))?;
                eprintln!(
                    "shift completion with {} subspaces, tight at constant {}",
                    sc.frame.len(),
                    io::format_number(sc.constant)
                );
                Ok(())
            }
        },
        Command::Reconstruct { frame, signal, reduced } => {
            let ff = load_frame(&frame)?;
            let f = io::parse_vector(&read(&signal)?).map_err(|e| Failure::io(&signal, e))?;
            let mode = if reduced { MeasurementMode::Reduced } else { MeasurementMode::Full };
            let rec = Reconstructor::new(&ff, tol).map_err(Failure::precondition)?;
            let meas = measure(&ff, &f, mode).map_err(Failure::precondition)?;
            let got = rec.reconstruct(&meas).map_err(Failure::precondition)?;
            let scale = f.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
            let residual =
                f.iter().zip(&got).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max) / scale;
            print!("{}", io::format_vector(&got));
            println!("residual {}", io::format_number(residual));
            Ok(())
        }
    }
}

fn join_counts(values: &[usize]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn join_numbers(values: &[f64]) -> String {
    values.iter().map(|&v| io::format_number(v)).collect::<Vec<_>>().join(" ")
}

fn text_report(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ambient_dim {}", r.ambient_dim);
    let _ = writeln!(out, "subspace_count {}", r.dims.len());
    let _ = writeln!(out, "dims {}", join_counts(&r.dims));
    let _ = writeln!(out, "weights {}", join_numbers(&r.weights));
    let _ = writeln!(out, "spectrum {}", join_numbers(&r.spectrum));
    let _ = writeln!(out, "lower_bound {}", io::format_number(r.lower_bound));
    let _ = writeln!(out, "upper_bound {}", io::format_number(r.upper_bound));
    let _ = writeln!(out, "is_fusion_frame {}", r.is_fusion_frame);
    let _ = writeln!(out, "is_tight {}", r.is_tight);
    let _ = writeln!(out, "is_parseval {}", r.is_parseval);
    let _ = writeln!(out, "chordal_convention {}", r.chordal_convention);
    for i in 0..r.chordal_sq.rows() {
        let _ = writeln!(out, "chordal_sq {}", join_numbers(r.chordal_sq.row(i)));
    }
    let _ = writeln!(
        out,
        "residual basis_orthonormality {}",
        io::format_number(r.residuals.basis_orthonormality)
    );
    let _ = writeln!(
        out,
        "residual operator_symmetry {}",
        io::format_number(r.residuals.operator_symmetry)
    );
    let _ = writeln!(out, "residual eigen {}", io::format_number(r.residuals.eigen));
    let _ =
        writeln!(out, "residual trace_identity {}", io::format_number(r.residuals.trace_identity));
    let _ = writeln!(out, "tol {}", io::format_number(r.tol));
    out
}

fn json_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn json_numbers(values: &[f64]) -> String {
    let inner: Vec<String> = values.iter().map(|&v| io::format_number(v)).collect();
    format!("[{}]", inner.join(","))
}

fn json_report(r: &VerificationReport) -> String {
    let dims: Vec<String> = r.dims.iter().map(|d| d.to_string()).collect();
    let chordal: Vec<String> =
        (0..r.chordal_sq.rows()).map(|i| json_numbers(r.chordal_sq.row(i))).collect();
    format!(
        concat!(
            "{{\"ambient_dim\":{},\"dims\":[{}],\"weights\":{},\"spectrum\":{},",
            "\"lower_bound\":{},\"upper_bound\":{},",
            "\"is_fusion_frame\":{},\"is_tight\":{},\"is_parseval\":{},",
            "\"chordal_convention\":\"{}\",\"chordal_sq\":[{}],",
            "\"residuals\":{{\"basis_orthonormality\":{},\"operator_symmetry\":{},",
            "\"eigen\":{},\"trace_identity\":{}}},\"tol\":{}}}"
        ),
        r.ambient_dim,
        dims.join(","),
        json_numbers(&r.weights),
        json_numbers(&r.spectrum),
        io::format_number(r.lower_bound),
        io::format_number(r.upper_bound),
        r.is_fusion_frame,
        r.is_tight,
        r.is_parseval,
        json_escape(r.chordal_convention),
        chordal.join(","),
        io::format_number(r.residuals.basis_orthonormality),
        io::format_number(r.residuals.operator_symmetry),
        io::format_number(r.residuals.eigen),
        io::format_number(r.residuals.trace_identity),
        io::format_number(r.tol),
    )
}
