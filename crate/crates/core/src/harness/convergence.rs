use std::sync::Arc;

use rayon::prelude::*;

use super::{fit_order, fmt_param, HarnessError, OrderFit, Problem};
use crate::grid::TorusGrid;
use crate::integrators::{run, steps_for, Method, Rk4Oracle, RunOptions};
use crate::model::{component_errors, composite_error, Scheme, SolutionFields};

/// Ratio between the smallest studied step and the reference step.
pub const REFERENCE_REFINEMENT: f64 = 100.0;
/// Largest admissible `||.||_(0)` gap between the two computed references.
pub const REFERENCE_AGREEMENT: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct ConvergenceSpec {
    pub problem: Problem,
    pub taus: Vec<f64>,
    pub modes: usize,
    pub length: f64,
    pub t_end: f64,
    pub s_index: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub tau: f64,
    pub err_e: f64,
    pub err_u: f64,
    pub err_uprime: f64,
    pub err_composite: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub scheme: Scheme,
    pub problem: String,
    pub s_index: f64,
    /// Every `key=value` pair of the params line, in order.
    pub params: Vec<(String, String)>,
    /// Sorted by strictly decreasing `tau`.
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceRecord {
    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Order fit of the composite error.
    pub fn fit(&self) -> Result<OrderFit, HarnessError> {
        self.fit_by(|r| r.err_composite)
    }

    pub fn fit_by(&self, err: impl Fn(&ConvergenceRow) -> f64) -> Result<OrderFit, HarnessError> {
        let rows: Vec<(f64, f64)> = self.rows.iter().map(|r| (r.tau, err(r))).collect();
        fit_order(&rows)
    }

    /// Checks the record invariants: strictly decreasing steps, nonnegative errors.
    pub fn validate(&self) -> Result<(), HarnessError> {
        for w in self.rows.windows(2) {
            if !(w[1].tau < w[0].tau) {
                return Err(HarnessError::InvalidInput(format!(
                    "step sizes must strictly decrease ({} then {})",
                    w[0].tau, w[1].tau
                )));
            }
        }
        for r in &self.rows {
            let errs = [r.err_e, r.err_u, r.err_uprime, r.err_composite];
            if !(r.tau > 0.0) || errs.iter().any(|e| !(*e >= 0.0)) {
                return Err(HarnessError::InvalidInput(format!("invalid row at tau = {}", r.tau)));
            }
        }
        Ok(())
    }
}

/// The solution every cell of a study is compared against.
#[derive(Debug, Clone)]
pub enum Reference {
    Exact(SolutionFields),
    /// RK4 oracle result, cross-checked by the second-order scheme at the same step.
    Computed {
        fields: SolutionFields,
        tau: f64,
        agreement: f64,
    },
}

impl Reference {
    pub fn fields(&self) -> &SolutionFields {
        match self {
            Reference::Exact(f) => f,
            Reference::Computed { fields, .. } => fields,
        }
    }

    fn params(&self) -> Vec<(String, String)> {
        match self {
            Reference::Exact(_) => vec![("reference".into(), "exact".into())],
            Reference::Computed { tau, agreement, .. } => vec![
                ("reference".into(), "rk4".into()),
                ("tau_ref".into(), fmt_param(*tau)),
                ("ref_agreement".into(), fmt_param(*agreement)),
            ],
        }
    }
}

fn checked_taus(taus: &[f64], t_end: f64) -> Result<Vec<f64>, HarnessError> {
    if taus.len() < 4 {
        return Err(HarnessError::InvalidInput(format!(
            "a convergence study needs at least 4 step sizes, got {}",
            taus.len()
        )));
    }
    let mut sorted = taus.to_vec();
    for &tau in &sorted {
        steps_for(tau, t_end)?;
    }
    sorted.sort_by(|a, b| b.total_cmp(a));
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(HarnessError::InvalidInput("step sizes must be distinct".into()));
    }
    Ok(sorted)
}

/// Exact solution when known, otherwise the dual RK4 / second-order reference
/// at `min(taus)/100`, capped by the RK4 stability bound and shrunk to divide `t_end`.
pub fn reference_solution(
    problem: &Problem,
    grid: &Arc<TorusGrid>,
    taus: &[f64],
    t_end: f64,
) -> Result<Reference, HarnessError> {
    if let Some(exact) = problem.exact(grid, t_end)? {
        return Ok(Reference::Exact(exact));
    }
    let data = problem.initial_data(grid)?;
    let smallest = taus.iter().copied().fold(f64::INFINITY, f64::min);
    let target = (smallest / REFERENCE_REFINEMENT).min(Rk4Oracle::max_step(grid));
    if t_end == 0.0 {
        return Ok(Reference::Computed {
            fields: data,
            tau: target,
            agreement: 0.0,
        });
    }
    let tau = t_end / (t_end / target).ceil();
    let once = u64::MAX;
    let options = RunOptions {
        sample_every: once,
        ..Default::default()
    };
    let (oracle, check) = rayon::join(
        || run(Method::Rk4, &data, tau, t_end, options),
        || run(Method::Trig(Scheme::SecondOrder), &data, tau, t_end, options),
    );
    let oracle = oracle?.final_fields;
    let agreement = composite_error(&oracle, &check?.final_fields, 0.0)?;
    if !(agreement <= REFERENCE_AGREEMENT) {
        return Err(HarnessError::ReferenceDisagreement {
            difference: agreement,
            tolerance: REFERENCE_AGREEMENT,
        });
    }
    Ok(Reference::Computed {
        fields: oracle,
        tau,
        agreement,
    })
}

/// Runs every `(scheme, tau)` cell against one shared reference. Records
/// come back in the order of `schemes`, rows by decreasing `tau`.
pub fn convergence_studies(
    spec: &ConvergenceSpec,
    schemes: &[Scheme],
) -> Result<Vec<ConvergenceRecord>, HarnessError> {
    let taus = checked_taus(&spec.taus, spec.t_end)?;
    if !spec.s_index.is_finite() {
        return Err(HarnessError::InvalidInput("norm index must be finite".into()));
    }
    let grid = TorusGrid::new(spec.length, spec.modes)?;
    let data = spec.problem.initial_data(&grid)?;
    let reference = reference_solution(&spec.problem, &grid, &taus, spec.t_end)?;

    let cells: Vec<(Scheme, f64)> = schemes
        .iter()
        .flat_map(|&s| taus.iter().map(move |&t| (s, t)))
        .collect();
    let options = RunOptions {
        sample_every: u64::MAX,
        ..Default::default()
    };
    let rows = cells
        .par_iter()
        .map(|&(scheme, tau)| {
            let out = run(Method::Trig(scheme), &data, tau, spec.t_end, options)?;
            let c = component_errors(&out.final_fields, reference.fields(), spec.s_index)?;
            Ok(ConvergenceRow {
                tau,
                err_e: c.e,
                err_u: c.u,
                err_uprime: c.uprime,
                err_composite: c.total(),
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    Ok(schemes
        .iter()
        .zip(rows.chunks(taus.len()))
        .map(|(&scheme, rows)| {
            let mut params = vec![("scheme".to_string(), scheme.name().to_string())];
            params.extend(spec.problem.params());
            params.extend([
                ("s".to_string(), fmt_param(spec.s_index)),
                ("K".to_string(), spec.modes.to_string()),
                ("L".to_string(), fmt_param(spec.length)),
                ("T".to_string(), fmt_param(spec.t_end)),
            ]);
            params.extend(reference.params());
            ConvergenceRecord {
                scheme,
                problem: spec.problem.name().to_string(),
                s_index: spec.s_index,
                params,
                rows: rows.to_vec(),
            }
        })
        .collect())
}

pub fn convergence_study(
    spec: &ConvergenceSpec,
    scheme: Scheme,
) -> Result<ConvergenceRecord, HarnessError> {
    Ok(convergence_studies(spec, &[scheme])?.remove(0))
}
