//! CSV files: a format line, a `# params:` line, a header row, then rows of
//! numbers written with 17 significant digits.

use std::collections::HashSet;
use std::path::Path;
use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::{ConvergenceRecord, ConvergenceRow, HarnessError, RunRecord, RunRow, Snapshot};
use crate::field::Field;
use crate::grid::TorusGrid;
use crate::model::{Scheme, SolutionFields};

pub const FORMAT_LINE: &str = "# zakharov-trig v1";
const PARAMS_PREFIX: &str = "# params:";
pub const CONVERGENCE_HEADER: [&str; 5] = ["tau", "err_E", "err_u", "err_uprime", "err_composite"];
pub const RUN_HEADER: [&str; 7] = ["t", "l2_E", "hamiltonian", "dev_l2", "dev_H", "mean_u", "mean_uprime"];
pub const SNAPSHOT_HEADER: [&str; 6] = ["x", "Re_E", "Im_E", "u", "uprime", "abs_E"];

/// A parsed file before it is interpreted as a particular record.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub params: Vec<(String, String)>,
    pub rows: Vec<Vec<f64>>,
}

fn format_err(context: &str, message: impl Into<String>) -> HarnessError {
    HarnessError::Format {
        context: context.to_string(),
        message: message.into(),
    }
}

fn render(params: &[(String, String)], header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = format!("{FORMAT_LINE}\n{PARAMS_PREFIX}");
    for (k, v) in params {
        out.push_str(&format!(" {k}={v}"));
    }
    out.push('\n');
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    // in-memory writes cannot fail
    w.write_record(header).expect("header");
    for row in rows {
        w.write_record(row.iter().map(|x| format!("{x:.16e}"))).expect("row");
    }
    let body = w.into_inner().expect("flush");
    out.push_str(std::str::from_utf8(&body).expect("ascii"));
    out
}

fn parse_table(text: &str, header: &[&str], context: &str) -> Result<CsvTable, HarnessError> {
    let mut lines = text.splitn(3, '\n');
    let first = lines.next().unwrap_or("").trim_end_matches('\r');
    if first != FORMAT_LINE {
        return Err(format_err(context, format!("first line must be '{FORMAT_LINE}'")));
    }
    let second = lines.next().unwrap_or("").trim_end_matches('\r');
    let Some(rest) = second.strip_prefix(PARAMS_PREFIX) else {
        return Err(format_err(context, format!("second line must start with '{PARAMS_PREFIX}'")));
    };
    let mut params = Vec::new();
    let mut seen = HashSet::new();
    for item in rest.split_whitespace() {
        let Some((k, v)) = item.split_once('=') else {
            return Err(format_err(context, format!("parameter '{item}' is not key=value")));
        };
        if k.is_empty() || !seen.insert(k.to_string()) {
            return Err(format_err(context, format!("empty or repeated parameter key '{k}'")));
        }
        params.push((k.to_string(), v.to_string()));
    }

    let body = lines.next().unwrap_or("");
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
    let found = reader.headers().map_err(|e| format_err(context, e.to_string()))?;
    if found.iter().ne(header.iter().copied()) {
        return Err(format_err(
            context,
            format!("header must be '{}', found '{}'", header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format_err(context, e.to_string()))?;
        let row = record
            .iter()
            .zip(header)
            .map(|(cell, name)| {
                cell.trim().parse::<f64>().map_err(|_| {
                    format_err(context, format!("row {}: column {name}: '{cell}' is not a number", i + 1))
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    Ok(CsvTable { params, rows })
}

fn param<'a>(params: &'a [(String, String)], key: &str, context: &str) -> Result<&'a str, HarnessError> {
    params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| format_err(context, format!("missing parameter '{key}'")))
}

fn param_f64(params: &[(String, String)], key: &str, context: &str) -> Result<f64, HarnessError> {
    let v = param(params, key, context)?;
    v.parse()
        .map_err(|_| format_err(context, format!("parameter {key}='{v}' is not a number")))
}

fn write_file(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

fn read_file(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

pub fn convergence_csv(record: &ConvergenceRecord) -> String {
    let rows: Vec<Vec<f64>> = record
        .rows
        .iter()
        .map(|r| vec![r.tau, r.err_e, r.err_u, r.err_uprime, r.err_composite])
        .collect();
    render(&record.params, &CONVERGENCE_HEADER, &rows)
}

pub fn parse_convergence(text: &str) -> Result<ConvergenceRecord, HarnessError> {
    let context = "convergence CSV";
    let table = parse_table(text, &CONVERGENCE_HEADER, context)?;
    let scheme: Scheme = param(&table.params, "scheme", context)?
        .parse()
        .map_err(|e: String| format_err(context, e))?;
    let problem = param(&table.params, "problem", context)?.to_string();
    let s_index = param_f64(&table.params, "s", context)?;
    let rows = table
        .rows
        .iter()
        .map(|r| ConvergenceRow {
            tau: r[0],
            err_e: r[1],
            err_u: r[2],
            err_uprime: r[3],
            err_composite: r[4],
        })
        .collect();
    let record = ConvergenceRecord {
        scheme,
        problem,
        s_index,
        params: table.params,
        rows,
    };
    record.validate()?;
    Ok(record)
}

pub fn write_convergence(record: &ConvergenceRecord, path: &Path) -> Result<(), HarnessError> {
    write_file(path, &convergence_csv(record))
}

pub fn read_convergence(path: &Path) -> Result<ConvergenceRecord, HarnessError> {
    parse_convergence(&read_file(path)?).map_err(|e| with_path(e, path))
}

pub fn run_csv(record: &RunRecord) -> String {
    let rows: Vec<Vec<f64>> = record
        .rows
        .iter()
        .map(|r| vec![r.t, r.l2_e, r.hamiltonian, r.dev_l2, r.dev_h, r.mean_u, r.mean_uprime])
        .collect();
    render(&record.params, &RUN_HEADER, &rows)
}

pub fn parse_run(text: &str) -> Result<RunRecord, HarnessError> {
    let table = parse_table(text, &RUN_HEADER, "run CSV")?;
    let rows = table
        .rows
        .iter()
        .map(|r| RunRow {
            t: r[0],
            l2_e: r[1],
            hamiltonian: r[2],
            dev_l2: r[3],
            dev_h: r[4],
            mean_u: r[5],
            mean_uprime: r[6],
        })
        .collect();
    let record = RunRecord {
        params: table.params,
        rows,
    };
    record.validate()?;
    Ok(record)
}

pub fn write_run(record: &RunRecord, path: &Path) -> Result<(), HarnessError> {
    write_file(path, &run_csv(record))
}

pub fn read_run(path: &Path) -> Result<RunRecord, HarnessError> {
    parse_run(&read_file(path)?).map_err(|e| with_path(e, path))
}

pub fn snapshot_csv(snapshot: &Snapshot) -> String {
    let grid = snapshot.fields.grid().clone();
    let f = snapshot.fields.to_physical();
    let mut params = snapshot.params.clone();
    for (key, value) in [("K", grid.modes().to_string()), ("L", super::fmt_param(grid.length()))] {
        if !params.iter().any(|(k, _)| k == key) {
            params.push((key.to_string(), value));
        }
    }
    let rows: Vec<Vec<f64>> = (0..grid.modes())
        .map(|j| {
            let e = f.e.values()[j];
            vec![
                grid.point(j),
                e.re,
                e.im,
                f.u.values()[j].re,
                f.uprime.values()[j].re,
                e.norm(),
            ]
        })
        .collect();
    render(&params, &SNAPSHOT_HEADER, &rows)
}

/// Reads a snapshot back into fields. `K` and `L` come from the params line,
/// `t` and `step` default to 0 when absent.
pub fn parse_snapshot(text: &str) -> Result<Snapshot, HarnessError> {
    let context = "snapshot CSV";
    let table = parse_table(text, &SNAPSHOT_HEADER, context)?;
    let modes: usize = param(&table.params, "K", context)?
        .parse()
        .map_err(|_| format_err(context, "parameter K is not a mode count"))?;
    let length = param_f64(&table.params, "L", context)?;
    if table.rows.len() != modes {
        return Err(format_err(
            context,
            format!("expected {modes} rows for K = {modes}, found {}", table.rows.len()),
        ));
    }
    let grid: Arc<TorusGrid> = TorusGrid::new(length, modes)?;
    for (j, row) in table.rows.iter().enumerate() {
        if !((row[0] - grid.point(j)).abs() <= 1e-9 * length.max(1.0)) {
            return Err(format_err(context, format!("row {}: x = {} is off the grid", j + 1, row[0])));
        }
    }
    let column = |c: usize| -> Vec<Complex64> { table.rows.iter().map(|r| Complex64::from(r[c])).collect() };
    let e: Vec<Complex64> = table.rows.iter().map(|r| Complex64::new(r[1], r[2])).collect();
    let physical = |v: Vec<Complex64>| {
        Field::from_values(&grid, crate::field::Repr::Physical, v).map_err(crate::model::ModelError::from)
    };
    let fields = SolutionFields::new(physical(e)?, physical(column(3))?, physical(column(4))?)?;
    let t = match table.params.iter().find(|(k, _)| k == "t") {
        Some(_) => param_f64(&table.params, "t", context)?,
        None => 0.0,
    };
    let step = match table.params.iter().find(|(k, _)| k == "step") {
        Some((_, v)) => v.parse().map_err(|_| format_err(context, "parameter step is not a count"))?,
        None => 0,
    };
    Ok(Snapshot {
        t,
        step,
        params: table.params,
        fields,
    })
}

pub fn write_snapshot(snapshot: &Snapshot, path: &Path) -> Result<(), HarnessError> {
    write_file(path, &snapshot_csv(snapshot))
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot, HarnessError> {
    parse_snapshot(&read_file(path)?).map_err(|e| with_path(e, path))
}

fn with_path(e: HarnessError, path: &Path) -> HarnessError {
    match e {
        HarnessError::Format { message, .. } => HarnessError::Format {
            context: path.display().to_string(),
            message,
        },
        other => other,
    }
}
