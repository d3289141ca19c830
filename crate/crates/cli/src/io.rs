//! CSV ingestion and report writers.
//!
//! Data files carry a header `left,right[,trunc],<covariates...>`; `right`
//! accepts `inf`. Floats are written in their shortest round-trip form.

use crate::error::{CliError, Result};
use icpen_core::simulation::MidpointRecord;
use icpen_core::Dataset;
use std::fs;
use std::io::Write;
use std::path::Path;

pub fn fmt_f64(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:?}")
    }
}

/// `None` for the missing-value markers `NA`, `NaN` and the empty string.
fn parse_cell(s: &str) -> std::result::Result<Option<f64>, String> {
    match s {
        "" | "NA" | "na" | "NaN" | "nan" => Ok(None),
        _ => s
            .parse::<f64>()
            .map(Some)
            .map_err(|_| format!("cannot parse '{s}' as a number")),
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file))
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    parse_error(path, line, e.to_string())
}

/// Reads a data file without validating it. With `allow_missing`,
/// covariate cells marked missing become NaN; otherwise they are errors.
pub fn read_dataset_raw(path: &Path, allow_missing: bool) -> Result<Dataset> {
    let mut rdr = csv_reader(path)?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.len() < 3 || header[0] != "left" || header[1] != "right" {
        return Err(parse_error(
            path,
            1,
            "header must start with left,right and name at least one covariate",
        ));
    }
    let has_trunc = header[2] == "trunc";
    let first_cov = if has_trunc { 3 } else { 2 };
    let names: Vec<String> = header[first_cov..].to_vec();
    if names.is_empty() {
        return Err(parse_error(path, 1, "no covariate columns"));
    }
    let p = names.len();
    let (mut left, mut right, mut trunc) = (Vec::new(), Vec::new(), Vec::new());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let required = |k: usize, what: &str| -> Result<f64> {
            match parse_cell(&rec[k]) {
                Ok(Some(v)) => Ok(v),
                Ok(None) => Err(parse_error(path, line, format!("missing {what}"))),
                Err(m) => Err(parse_error(path, line, format!("{what}: {m}"))),
            }
        };
        left.push(required(0, "left")?);
        right.push(required(1, "right")?);
        if has_trunc {
            trunc.push(required(2, "trunc")?);
        }
        let mut row = Vec::with_capacity(p);
        for (k, name) in names.iter().enumerate() {
            let cell = &rec[first_cov + k];
            match parse_cell(cell) {
                Ok(Some(v)) => row.push(v),
                Ok(None) if allow_missing => row.push(f64::NAN),
                Ok(None) => {
                    return Err(parse_error(path, line, format!("missing value for {name}")))
                }
                Err(m) => return Err(parse_error(path, line, format!("{name}: {m}"))),
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_error(path, 1, "no data rows"));
    }
    let n = rows.len();
    let mut z = vec![0.0; n * p];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            z[j * n + i] = *v;
        }
    }
    let trunc = has_trunc.then_some(trunc);
    Ok(Dataset::from_columns(left, right, trunc, z)?.with_names(names)?)
}

/// Reads and validates a data file. Violations are reported with the file
/// line of the offending row.
pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let data = read_dataset_raw(path, false)?;
    let violations = data.validate();
    if violations.is_empty() {
        return Ok(data);
    }
    let details = violations
        .iter()
        .map(|v| format!("  line {}: {}", v.subject + 2, v.message))
        .collect::<Vec<_>>()
        .join("\n");
    Err(CliError::Validation {
        path: path.to_path_buf(),
        count: violations.len(),
        details,
    })
}

fn create(path: &Path) -> Result<fs::File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::File::create(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = create(path)?;
    f.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))
}

/// Writes rows of already formatted cells.
pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let io = |e: csv::Error| CliError::io(path, std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_dataset(path: &Path, data: &Dataset) -> Result<()> {
    let trunc = data.has_truncation();
    let mut header = vec!["left".to_string(), "right".to_string()];
    if trunc {
        header.push("trunc".into());
    }
    header.extend(data.names().iter().cloned());
    let rows: Vec<Vec<String>> = (0..data.n())
        .map(|i| {
            let mut r = vec![fmt_f64(data.left()[i]), fmt_f64(data.right()[i])];
            if trunc {
                r.push(fmt_f64(data.truncation()[i]));
            }
            r.extend((0..data.p()).map(|j| fmt_f64(data.column(j)[i])));
            r
        })
        .collect();
    write_csv(path, &header, &rows)
}

/// `time,event,<covariates...>` for right-censored fitters.
pub fn write_midpoint(path: &Path, data: &Dataset, records: &[MidpointRecord]) -> Result<()> {
    let mut header = vec!["time".to_string(), "event".to_string()];
    header.extend(data.names().iter().cloned());
    let rows: Vec<Vec<String>> = records
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut r = vec![fmt_f64(m.time), u8::from(m.event).to_string()];
            r.extend((0..data.p()).map(|j| fmt_f64(data.column(j)[i])));
            r
        })
        .collect();
    write_csv(path, &header, &rows)
}

/// Penalty factors from a sidecar file: one line of numbers, or a header
/// of covariate names followed by one line of numbers.
pub fn read_penalty_factors(path: &Path, names: &[String]) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let cells = |l: &str| l.split(',').map(|c| c.trim().to_string()).collect::<Vec<_>>();
    let numbers = |line: usize, l: &str| -> Result<Vec<f64>> {
        cells(l)
            .iter()
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|_| parse_error(path, line as u64, format!("bad penalty factor '{c}'")))
            })
            .collect()
    };
    let Some(&(first_line, first)) = lines.first() else {
        return Err(parse_error(path, 1, "empty penalty-factor file"));
    };
    let factors = if let Ok(v) = numbers(first_line, first) {
        v
    } else {
        let head = cells(first);
        let Some(&(line, values)) = lines.get(1) else {
            return Err(parse_error(path, first_line as u64, "header without values"));
        };
        let vals = numbers(line, values)?;
        if vals.len() != head.len() {
            return Err(parse_error(path, line as u64, "value count differs from header"));
        }
        let mut out = vec![1.0; names.len()];
        for (h, v) in head.iter().zip(vals) {
            let j = names
                .iter()
                .position(|n| n == h)
                .ok_or_else(|| parse_error(path, first_line as u64, format!("unknown covariate '{h}'")))?;
            out[j] = v;
        }
        out
    };
    if factors.len() != names.len() {
        return Err(parse_error(
            path,
            first_line as u64,
            format!("expected {} penalty factors, got {}", names.len(), factors.len()),
        ));
    }
    Ok(factors)
}

/// Factor vector with the named covariates set to 0.
pub fn unpenalized_factors(names: &[String], unpenalized: &[String]) -> Result<Vec<f64>> {
    let mut out = vec![1.0; names.len()];
    for u in unpenalized {
        let j = names
            .iter()
            .position(|n| n == u)
            .ok_or_else(|| CliError::Usage(format!("--unpenalized: unknown covariate '{u}'")))?;
        out[j] = 0.0;
    }
    Ok(out)
}

/// Rows of numbers under a header, as in estimate and truth files.
pub fn read_matrix(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv_reader(path)?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let row = rec
            .iter()
            .map(|c| match parse_cell(c) {
                Ok(Some(v)) => Ok(v),
                Ok(None) => Err(parse_error(path, line, "missing value")),
                Err(m) => Err(parse_error(path, line, m)),
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// True coefficients, either as `name,beta` rows or as a one-row matrix
/// headed by the coefficient names.
pub fn read_truth(path: &Path) -> Result<(Vec<String>, Vec<f64>)> {
    let mut rdr = csv_reader(path)?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != ["name", "beta"] {
        let (names, rows) = read_matrix(path)?;
        return match rows.as_slice() {
            [row] => Ok((names, row.clone())),
            _ => Err(CliError::Usage(format!(
                "{}: a wide truth file needs exactly one row, found {}",
                path.display(),
                rows.len()
            ))),
        };
    }
    let (mut names, mut beta) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let value = match parse_cell(&rec[1]) {
            Ok(Some(v)) => v,
            Ok(None) => return Err(parse_error(path, line, "missing value")),
            Err(m) => return Err(parse_error(path, line, m)),
        };
        names.push(rec[0].to_string());
        beta.push(value);
    }
    Ok((names, beta))
}
