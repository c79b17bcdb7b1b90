use super::{fmt_param, HarnessError, Problem};
use crate::grid::TorusGrid;
use crate::integrators::{run, steps_for, Integrator, Method, RunOptions};
use crate::model::SolutionFields;

/// Either a literal step or a CFL number `tau / dx^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    Tau(f64),
    Cfl(f64),
}

impl StepSize {
    /// The step actually taken. A literal step must divide `t_end`; a CFL
    /// step is shrunk or stretched to the nearest divisor.
    pub fn resolve(self, dx: f64, t_end: f64) -> Result<f64, HarnessError> {
        match self {
            StepSize::Tau(tau) => {
                steps_for(tau, t_end)?;
                Ok(tau)
            }
            StepSize::Cfl(cfl) => {
                if !(cfl.is_finite() && cfl > 0.0) {
                    return Err(HarnessError::InvalidInput(format!("CFL {cfl} is not positive")));
                }
                let tau = cfl * dx * dx;
                if t_end == 0.0 {
                    return Ok(tau);
                }
                let n = (t_end / tau).round().max(1.0);
                Ok(t_end / n)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConservationSpec {
    pub method: Method,
    pub problem: Problem,
    pub step: StepSize,
    pub modes: usize,
    pub length: f64,
    pub t_end: f64,
    pub sample_every: u64,
    pub dealias: bool,
    /// `false` switches the nonlinear coupling off.
    pub coupled: bool,
}

impl ConservationSpec {
    fn options(&self) -> RunOptions {
        RunOptions {
            sample_every: self.sample_every,
            keep_snapshots: false,
            dealias: self.dealias,
            coupled: self.coupled,
        }
    }

    fn params(&self, grid: &TorusGrid, tau: f64) -> Vec<(String, String)> {
        let mut p = vec![("scheme".to_string(), self.method.name().to_string())];
        p.extend(self.problem.params());
        p.extend([
            ("K".to_string(), self.modes.to_string()),
            ("L".to_string(), fmt_param(self.length)),
            ("T".to_string(), fmt_param(self.t_end)),
            ("tau".to_string(), fmt_param(tau)),
            ("CFL".to_string(), fmt_param(tau / (grid.dx() * grid.dx()))),
            ("dealias".to_string(), self.dealias.to_string()),
            ("coupled".to_string(), self.coupled.to_string()),
        ]);
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRow {
    pub t: f64,
    pub l2_e: f64,
    pub hamiltonian: f64,
    pub dev_l2: f64,
    pub dev_h: f64,
    pub mean_u: f64,
    pub mean_uprime: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub params: Vec<(String, String)>,
    /// Sorted by strictly increasing `t`.
    pub rows: Vec<RunRow>,
}

impl RunRecord {
    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// `max_n |‖E^n‖ − ‖E^0‖| / ‖E^0‖`, or the absolute drift for zero data.
    pub fn max_relative_l2_drift(&self) -> f64 {
        let Some(first) = self.rows.first() else {
            return 0.0;
        };
        let scale = if first.l2_e > 0.0 { first.l2_e } else { 1.0 };
        self.rows.iter().map(|r| r.dev_l2.abs()).fold(0.0, f64::max) / scale
    }

    /// Largest `|dev_H|` over the first and the second half of the time interval.
    pub fn energy_deviation_halves(&self) -> (f64, f64) {
        let Some(last) = self.rows.last() else {
            return (0.0, 0.0);
        };
        let mid = 0.5 * last.t;
        self.rows.iter().fold((0.0, 0.0), |(a, b), r| {
            if r.t <= mid {
                (f64::max(a, r.dev_h.abs()), b)
            } else {
                (a, f64::max(b, r.dev_h.abs()))
            }
        })
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        for w in self.rows.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(HarnessError::InvalidInput(format!(
                    "times must strictly increase ({} then {})",
                    w[0].t, w[1].t
                )));
            }
        }
        Ok(())
    }
}

/// One trajectory with `L^2` and energy deviations from the initial values.
pub fn conservation_run(spec: &ConservationSpec) -> Result<RunRecord, HarnessError> {
    let grid = TorusGrid::new(spec.length, spec.modes)?;
    let tau = spec.step.resolve(grid.dx(), spec.t_end)?;
    let data = spec.problem.initial_data(&grid)?;
    let traj = run(spec.method, &data, tau, spec.t_end, spec.options())?;
    let d0 = traj.samples[0].diagnostics;
    let rows = traj
        .samples
        .iter()
        .map(|s| {
            let d = s.diagnostics;
            RunRow {
                t: s.t,
                l2_e: d.l2_e,
                hamiltonian: d.hamiltonian.value,
                dev_l2: d.l2_e - d0.l2_e,
                dev_h: d.hamiltonian.value - d0.hamiltonian.value,
                mean_u: d.mean_u,
                mean_uprime: d.mean_uprime,
            }
        })
        .collect();
    Ok(RunRecord {
        params: spec.params(&grid, tau),
        rows,
    })
}

/// Solution fields at one instant of a run.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub step: u64,
    pub params: Vec<(String, String)>,
    pub fields: SolutionFields,
}

/// Snapshots of one trajectory at the steps closest to each requested time.
/// Times are visited in increasing order; the recorded `t` is the one reached.
pub fn soliton_snapshots(spec: &ConservationSpec, times: &[f64]) -> Result<Vec<Snapshot>, HarnessError> {
    if let Some(bad) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(HarnessError::InvalidInput(format!("snapshot time {bad} is not >= 0")));
    }
    let mut times = times.to_vec();
    times.sort_by(f64::total_cmp);
    let horizon = times.last().copied().unwrap_or(0.0).max(spec.t_end);
    let grid = TorusGrid::new(spec.length, spec.modes)?;
    let tau = spec.step.resolve(grid.dx(), horizon)?;
    let data = spec.problem.initial_data(&grid)?;
    let mut integrator = Integrator::new(spec.method, &data, tau, spec.options())?;
    let base = spec.params(&grid, tau);
    let mut out = Vec::with_capacity(times.len());
    for t in times {
        let step = (t / tau).round() as u64;
        integrator.advance_to(step)?;
        let t = integrator.time();
        let mut params = base.clone();
        params.push(("t".into(), fmt_param(t)));
        params.push(("step".into(), step.to_string()));
        out.push(Snapshot {
            t,
            step,
            params,
            fields: integrator.fields().to_physical(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Scheme;

    #[test]
    fn cfl_step_divides_final_time() {
        let dx = 20.0 * std::f64::consts::PI / 512.0;
        let tau = StepSize::Cfl(3.2).resolve(dx, 20.0).unwrap();
        assert!((tau - 3.2 * dx * dx).abs() / tau < 0.01);
        assert_eq!(steps_for(tau, 20.0).unwrap() as f64 * tau, 20.0);
        assert!(StepSize::Tau(0.3).resolve(dx, 1.0).is_err());
        assert!(StepSize::Cfl(-1.0).resolve(dx, 1.0).is_err());
    }

    #[test]
    fn zero_data_has_zero_deviations() {
        let g = TorusGrid::periodic_2pi(16).unwrap();
        let spec = ConservationSpec {
            method: Method::Trig(Scheme::SecondOrder),
            problem: Problem::Custom(std::sync::Arc::new(SolutionFields::zeros(&g))),
            step: StepSize::Tau(0.1),
            modes: 16,
            length: g.length(),
            t_end: 1.0,
            sample_every: 1,
            dealias: false,
            coupled: true,
        };
        let r = conservation_run(&spec).unwrap();
        assert_eq!(r.rows.len(), 11);
        r.validate().unwrap();
        assert!(r.rows.iter().all(|r| r.dev_l2 == 0.0 && r.dev_h == 0.0));
        assert_eq!(r.param("tau"), Some("0.1"));
    }
}
