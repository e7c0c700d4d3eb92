//! Text document formats for fusion frames, spectra, matrices and
//! vectors.
//!
//! Numbers are written with 17 significant digits, which round-trips
//! every finite double exactly: parsing a formatted document recovers the
//! original values bit for bit, and re-formatting a parsed document
//! reproduces it byte for byte. Parsers skip blank lines and lines
//! starting with `#`; writers never emit either.
//!
//! Fusion frame document:
//!
//! ```text
//! fusionframe
//! ambient_dim 3
//! subspace_count 2
//! subspace
//! weight 1.0000000000000000e0
//! basis 1.0000000000000000e0 0.0000000000000000e0 0.0000000000000000e0
//! subspace
//! ...
//! ```
//!
//! Each `basis` line is one orthonormal basis column of the subspace,
//! with `ambient_dim` entries. Documents store bases, not projections.
//!
//! Spectrum document:
//!
//! ```text
//! spectrum
//! num_subspaces 8
//! subspace_dim 1
//! lambdas 2.7500000000000000e0 2.7500000000000000e0 2.5000000000000000e0
//! ```
//!
//! Matrices are comma-separated rows, one row per line; a vector is a
//! single comma-separated line (parsing flattens multiple lines).

use std::fmt;

use crate::model::{FusionFrame, SpectrumSpec, Subspace, WeightedSubspace};
use crate::numerics::Matrix;

/// Orthonormality tolerance applied to bases read from documents.
pub const DOCUMENT_ORTHO_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum DocumentError {
    /// Structural problem at a 1-based source line.
    Parse { line: usize, message: String },
    /// The document parsed but violates a model invariant.
    Invariant { message: String },
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocumentError::Parse { line, message } => write!(f, "line {line}: {message}"),
            DocumentError::Invariant { message } => write!(f, "invariant violated: {message}"),
        }
    }
}

impl std::error::Error for DocumentError {}

fn parse_err(line: usize, message: impl Into<String>) -> DocumentError {
    DocumentError::Parse { line, message: message.into() }
}

fn invariant_err(message: impl fmt::Display) -> DocumentError {
    DocumentError::Invariant { message: message.to_string() }
}

/// Canonical number rendering: 17 significant digits, exponent form.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_number(token: &str, line: usize) -> Result<f64, DocumentError> {
    let x: f64 =
        token.parse().map_err(|_| parse_err(line, format!("expected a number, got {token:?}")))?;
    if !x.is_finite() {
        return Err(parse_err(line, format!("non-finite number {token:?}")));
    }
    Ok(x)
}

fn parse_count(token: &str, line: usize) -> Result<usize, DocumentError> {
    token.parse().map_err(|_| parse_err(line, format!("expected a count, got {token:?}")))
}

/// Significant lines with their original 1-based numbers.
fn significant_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.split_once(char::is_whitespace) {
        Some((k, rest)) => (k, rest.trim()),
        None => (line, ""),
    }
}

pub fn parse_fusion_frame(text: &str) -> Result<FusionFrame, DocumentError> {
    let lines = significant_lines(text);
    let mut it = lines.iter().copied().peekable();

    let (ln, header) = it.next().ok_or_else(|| parse_err(1, "empty document"))?;
    if header != "fusionframe" {
        return Err(parse_err(ln, format!("expected header \"fusionframe\", got {header:?}")));
    }
    let (ln, line) = it.next().ok_or_else(|| parse_err(ln, "missing ambient_dim"))?;
    let ambient = match split_keyword(line) {
        ("ambient_dim", rest) => parse_count(rest, ln)?,
        (k, _) => return Err(parse_err(ln, format!("expected ambient_dim, got {k:?}"))),
    };
    if ambient == 0 {
        return Err(parse_err(ln, "ambient_dim must be positive"));
    }
    let (ln, line) = it.next().ok_or_else(|| parse_err(ln, "missing subspace_count"))?;
    let count = match split_keyword(line) {
        ("subspace_count", rest) => parse_count(rest, ln)?,
        (k, _) => return Err(parse_err(ln, format!("expected subspace_count, got {k:?}"))),
    };

    let mut members = Vec::with_capacity(count);
    let mut last_line = ln;
    while let Some((ln, line)) = it.next() {
        if line != "subspace" {
            return Err(parse_err(ln, format!("expected \"subspace\", got {line:?}")));
        }
        let (ln, line) = it.next().ok_or_else(|| parse_err(ln, "missing weight"))?;
        let weight = match split_keyword(line) {
            ("weight", rest) => parse_number(rest, ln)?,
            (k, _) => return Err(parse_err(ln, format!("expected weight, got {k:?}"))),
        };
        let mut columns: Vec<Vec<f64>> = Vec::new();
        let mut basis_line = ln;
        while let Some(&(ln, line)) = it.peek() {
            let (key, rest) = split_keyword(line);
            if key != "basis" {
                break;
            }
            it.next();
            basis_line = ln;
            let column = rest
                .split_whitespace()
                .map(|t| parse_number(t, ln))
                .collect::<Result<Vec<f64>, _>>()?;
            if column.len() != ambient {
                return Err(parse_err(
                    ln,
                    format!("basis column has {} entries, ambient_dim is {ambient}", column.len()),
                ));
            }
            columns.push(column);
        }
        if columns.is_empty() {
            return Err(parse_err(basis_line, "subspace has no basis lines"));
        }
        let basis = Matrix::from_columns(ambient, &columns);
        let subspace = Subspace::from_basis(basis, DOCUMENT_ORTHO_TOL).map_err(invariant_err)?;
        members.push(WeightedSubspace::new(subspace, weight).map_err(invariant_err)?);
        last_line = basis_line;
    }
    if members.len() != count {
        return Err(parse_err(
            last_line,
            format!("subspace_count is {count} but {} subspaces follow", members.len()),
        ));
    }
    FusionFrame::new(members).map_err(invariant_err)
}

pub fn format_fusion_frame(ff: &FusionFrame) -> String {
    let mut out = String::new();
    out.push_str("fusionframe\n");
    out.push_str(&format!("ambient_dim {}\n", ff.ambient_dim()));
    out.push_str(&format!("subspace_count {}\n", ff.len()));
    for ws in ff.members() {
        out.push_str("subspace\n");
        out.push_str(&format!("weight {}\n", format_number(ws.weight())));
        let basis = ws.subspace().basis();
        for c in 0..basis.cols() {
            let entries: Vec<String> =
                (0..basis.rows()).map(|r| format_number(basis.get(r, c))).collect();
            out.push_str(&format!("basis {}\n", entries.join(" ")));
        }
    }
    out
}

pub fn parse_spectrum(text: &str) -> Result<SpectrumSpec, DocumentError> {
    let lines = significant_lines(text);
    let mut it = lines.iter().copied();

    let (ln, header) = it.next().ok_or_else(|| parse_err(1, "empty document"))?;
    if header != "spectrum" {
        return Err(parse_err(ln, format!("expected header \"spectrum\", got {header:?}")));
    }
    let mut num_subspaces: Option<usize> = None;
    let mut subspace_dim: Option<usize> = None;
    let mut lambdas: Option<Vec<f64>> = None;
    for (ln, line) in it {
        let (key, rest) = split_keyword(line);
        match key {
            "num_subspaces" => num_subspaces = Some(parse_count(rest, ln)?),
            "subspace_dim" => subspace_dim = Some(parse_count(rest, ln)?),
            "lambdas" => {
                let values = rest
                    .split_whitespace()
                    .map(|t| parse_number(t, ln))
                    .collect::<Result<Vec<f64>, _>>()?;
                if values.is_empty() {
                    return Err(parse_err(ln, "lambdas line has no values"));
                }
                lambdas = Some(values);
            }
            other => return Err(parse_err(ln, format!("unknown key {other:?}"))),
        }
    }
    let missing = |what: &str| parse_err(lines.len().max(1), format!("missing {what}"));
    let lambdas = lambdas.ok_or_else(|| missing("lambdas"))?;
    let num_subspaces = num_subspaces.ok_or_else(|| missing("num_subspaces"))?;
    let subspace_dim = subspace_dim.ok_or_else(|| missing("subspace_dim"))?;
    SpectrumSpec::new(lambdas, num_subspaces, subspace_dim).map_err(invariant_err)
}

pub fn format_spectrum(spec: &SpectrumSpec) -> String {
    let lambdas: Vec<String> = spec.lambdas().iter().map(|&l| format_number(l)).collect();
    format!(
        "spectrum\nnum_subspaces {}\nsubspace_dim {}\nlambdas {}\n",
        spec.num_subspaces(),
        spec.subspace_dim(),
        lambdas.join(" ")
    )
}

pub fn parse_matrix(text: &str) -> Result<Matrix, DocumentError> {
    let lines = significant_lines(text);
    if lines.is_empty() {
        return Err(parse_err(1, "empty matrix"));
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(lines.len());
    let mut width: Option<usize> = None;
    for (ln, line) in lines {
        let row =
            line.split(',').map(|t| parse_number(t.trim(), ln)).collect::<Result<Vec<f64>, _>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(
                    ln,
                    format!("row has {} entries, previous rows have {w}", row.len()),
                ));
            }
            _ => {}
        }
        rows.push(row);
    }
    Ok(Matrix::from_rows(&rows))
}

pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        let entries: Vec<String> = m.row(r).iter().map(|&x| format_number(x)).collect();
        out.push_str(&entries.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>, DocumentError> {
    let lines = significant_lines(text);
    if lines.is_empty() {
        return Err(parse_err(1, "empty vector"));
    }
    let mut values = Vec::new();
    for (ln, line) in lines {
        for token in line.split(',') {
            values.push(parse_number(token.trim(), ln)?);
        }
    }
    Ok(values)
}

pub fn format_vector(v: &[f64]) -> String {
    let entries: Vec<String> = v.iter().map(|&x| format_number(x)).collect();
    format!("{}\n", entries.join(","))
}
