//! Experiment drivers: convergence studies, conservation runs, soliton
//! snapshots and the CSV files they produce.

mod conservation;
mod convergence;
mod fit;
mod io;

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use thiserror::Error;

use crate::grid::{GridError, TorusGrid};
use crate::integrators::IntegratorError;
use crate::model::{example1_data, soliton_exact, ModelError, SolitonParams, SolutionFields};

pub use conservation::{
    conservation_run, soliton_snapshots, ConservationSpec, RunRecord, RunRow, Snapshot, StepSize,
};
pub use convergence::{
    convergence_studies, convergence_study, reference_solution, ConvergenceRecord, ConvergenceRow,
    ConvergenceSpec, Reference, REFERENCE_AGREEMENT, REFERENCE_REFINEMENT,
};
pub use fit::{fit_order, OrderFit, ROUNDING_FLOOR};
pub use io::{
    convergence_csv, parse_convergence, parse_run, parse_snapshot, read_convergence, read_run,
    read_snapshot, run_csv, snapshot_csv,
    write_convergence, write_run, write_snapshot, CsvTable, CONVERGENCE_HEADER, FORMAT_LINE,
    RUN_HEADER, SNAPSHOT_HEADER,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Integrator(#[from] IntegratorError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{0}")]
    InvalidInput(String),
    #[error("fewer than two usable rows for an order fit ({usable} of {total})")]
    TooFewRows { usable: usize, total: usize },
    #[error("references disagree: {difference:e} > {tolerance:e}")]
    ReferenceDisagreement { difference: f64, tolerance: f64 },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {message}")]
    Format { context: String, message: String },
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// True when the failure is a numerical blow-up rather than bad input.
    pub fn is_divergence(&self) -> bool {
        matches!(self, HarnessError::Integrator(IntegratorError::Divergence { .. }))
    }
}

/// Initial data of an experiment.
#[derive(Debug, Clone)]
pub enum Problem {
    /// The smooth data of the first numerical example, normalized per component.
    Example1,
    /// The travelling soliton, whose exact solution is known.
    Soliton(SolitonParams),
    /// Data supplied on a fixed grid, usually read from a snapshot file.
    Custom(Arc<SolutionFields>),
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::Example1 => "example1",
            Problem::Soliton(_) => "soliton",
            Problem::Custom(_) => "custom",
        }
    }

    /// Initial data sampled on `grid`.
    pub fn initial_data(&self, grid: &Arc<TorusGrid>) -> Result<SolutionFields, HarnessError> {
        match self {
            Problem::Example1 => Ok(example1_data(grid)),
            Problem::Soliton(p) => Ok(soliton_exact(p, grid, 0.0)?),
            Problem::Custom(data) => {
                if !data.grid().same_as(grid) {
                    return Err(HarnessError::InvalidInput(format!(
                        "custom data lives on K = {}, L = {}, not K = {}, L = {}",
                        data.grid().modes(),
                        data.grid().length(),
                        grid.modes(),
                        grid.length()
                    )));
                }
                Ok((**data).clone())
            }
        }
    }

    /// Exact solution at time `t`, where one is known.
    pub fn exact(&self, grid: &Arc<TorusGrid>, t: f64) -> Result<Option<SolutionFields>, HarnessError> {
        match self {
            Problem::Soliton(p) => Ok(Some(soliton_exact(p, grid, t)?)),
            _ => Ok(None),
        }
    }

    /// `key=value` pairs identifying the problem in a params line.
    pub(crate) fn params(&self) -> Vec<(String, String)> {
        let mut out = vec![("problem".to_string(), self.name().to_string())];
        if let Problem::Soliton(p) = self {
            out.push(("B".into(), fmt_param(p.b())));
            out.push(("C".into(), fmt_param(p.c())));
        }
        out
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Shortest representation that parses back to the same `f64`.
pub(crate) fn fmt_param(x: f64) -> String {
    format!("{x:?}")
}
