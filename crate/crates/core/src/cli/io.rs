//! Input parsers and output writers for the batch front end.
//!
//! All floats are written with 17 significant digits so that a value read
//! back parses to the same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::CliError;
use crate::clustering::LabelVector;
use crate::graph::Dataset;
use crate::linalg::{DenseMatrix, SymmetricMatrix};
use crate::solver::SolveTrace;

/// Formats `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: 0,
        message: format!("cannot read file: {e}"),
    })
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn parse_fields(path: &Path, line_no: usize, line: &str) -> Result<Vec<f64>, CliError> {
    line.split(',')
        .enumerate()
        .map(|(col, tok)| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    parse_err(
                        path,
                        line_no,
                        format!("field {} is not a finite number: {tok:?}", col + 1),
                    )
                })
        })
        .collect()
}

/// Non-empty lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Headerless `n x n` comma-separated similarity matrix.
pub fn read_dense_csv(path: &Path) -> Result<SymmetricMatrix, CliError> {
    let text = read(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (line_no, line) in content_lines(&text) {
        let row = parse_fields(path, line_no, line)?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected {w} fields, found {}", row.len()),
                ))
            }
            _ => {}
        }
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(parse_err(path, 0, "empty matrix"));
    }
    if width != Some(n) {
        return Err(parse_err(
            path,
            0,
            format!(
                "matrix must be square, got {n} rows of {} fields",
                width.unwrap_or(0)
            ),
        ));
    }
    let dense = DenseMatrix::from_rows(&rows).map_err(|e| parse_err(path, 0, e.to_string()))?;
    SymmetricMatrix::new(dense).map_err(|e| parse_err(path, 0, e.to_string()))
}

/// Samples as rows. An optional header row is recognized by non-numeric
/// fields; when its last column is `label`, that column holds integer
/// ground-truth classes.
pub fn read_features_csv(path: &Path) -> Result<Dataset, CliError> {
    let text = read(path)?;
    let mut lines = content_lines(&text).peekable();
    let mut has_label = false;
    if let Some(&(_, first)) = lines.peek() {
        let is_header = first.split(',').any(|t| t.trim().parse::<f64>().is_err());
        if is_header {
            has_label = first
                .rsplit(',')
                .next()
                .is_some_and(|t| t.trim().eq_ignore_ascii_case("label"));
            lines.next();
        }
    }
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut width = None;
    for (line_no, line) in lines {
        let mut row = parse_fields(path, line_no, line)?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected {w} fields, found {}", row.len()),
                ))
            }
            _ => {}
        }
        if has_label {
            let raw = row.pop().unwrap_or(f64::NAN);
            if raw < 0.0 || raw.fract() != 0.0 {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("label must be a non-negative integer, got {raw}"),
                ));
            }
            labels.push(raw as usize);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(path, 0, "no samples"));
    }
    if rows[0].is_empty() {
        return Err(parse_err(path, 0, "no feature columns"));
    }
    let x = DenseMatrix::from_rows(&rows).map_err(|e| parse_err(path, 0, e.to_string()))?;
    let truth = if has_label {
        Some(LabelVector::new(labels).map_err(|e| parse_err(path, 0, e.to_string()))?)
    } else {
        None
    };
    Dataset::new(x, truth).map_err(|e| parse_err(path, 0, e.to_string()))
}

/// `%%MatrixMarket matrix coordinate real symmetric`, 1-based lower triangle.
pub fn read_matrix_market(path: &Path) -> Result<SymmetricMatrix, CliError> {
    let text = read(path)?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, banner) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "missing MatrixMarket banner"))?;
    let banner_tokens: Vec<String> = banner.split_whitespace().map(str::to_lowercase).collect();
    if banner_tokens
        != [
            "%%matrixmarket",
            "matrix",
            "coordinate",
            "real",
            "symmetric",
        ]
    {
        return Err(parse_err(
            path,
            1,
            "expected banner '%%MatrixMarket matrix coordinate real symmetric'",
        ));
    }
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = body
        .next()
        .ok_or_else(|| parse_err(path, 0, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| parse_err(path, size_line, "size line must be 'rows cols entries'"))?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(parse_err(
            path,
            size_line,
            "size line must be 'rows cols entries'",
        ));
    };
    if rows != cols || rows == 0 {
        return Err(parse_err(
            path,
            size_line,
            format!("symmetric matrix must be square and non-empty, got {rows}x{cols}"),
        ));
    }
    let n = rows;
    let mut m = DenseMatrix::zeros(n, n);
    let mut seen = vec![false; n * n];
    let mut count = 0;
    for (line_no, line) in body {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(path, line_no, "entry must be 'row col value'"));
        }
        let idx = |t: &str| -> Result<usize, CliError> {
            t.parse::<usize>()
                .ok()
                .filter(|&v| v >= 1 && v <= n)
                .ok_or_else(|| parse_err(path, line_no, format!("index {t:?} outside 1..={n}")))
        };
        let (i, j) = (idx(toks[0])? - 1, idx(toks[1])? - 1);
        let v = toks[2]
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| {
                parse_err(path, line_no, format!("value {:?} is not finite", toks[2]))
            })?;
        if i < j {
            return Err(parse_err(
                path,
                line_no,
                format!("entry ({}, {}) lies above the diagonal", i + 1, j + 1),
            ));
        }
        if std::mem::replace(&mut seen[i * n + j], true) {
            return Err(parse_err(
                path,
                line_no,
                format!("duplicate entry ({}, {})", i + 1, j + 1),
            ));
        }
        m[(i, j)] = v;
        m[(j, i)] = v;
        count += 1;
    }
    if count != nnz {
        return Err(parse_err(
            path,
            0,
            format!("size line announces {nnz} entries, found {count}"),
        ));
    }
    SymmetricMatrix::new(m).map_err(|e| parse_err(path, 0, e.to_string()))
}

pub fn matrix_to_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn labels_to_csv(labels: &LabelVector) -> String {
    let mut out = String::new();
    for l in labels.as_slice() {
        let _ = writeln!(out, "{l}");
    }
    out
}

pub const TRACE_HEADER: &str = "iter,objective,rel_error,stepsize,lipschitz,split_gap,wall_ms";

/// Trace CSV. Columns that do not apply to the solver are left empty, as is
/// `wall_ms` unless `with_time` is set.
pub fn trace_to_csv(trace: &SolveTrace, with_time: bool) -> String {
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in &trace.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.iter,
            fmt_f64(r.objective),
            fmt_f64(r.rel_error),
            opt(r.stepsize),
            opt(r.lipschitz),
            opt(r.split_gap),
            opt(with_time.then_some(r.wall_ms)),
        );
    }
    out
}
