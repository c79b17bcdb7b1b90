//! The acceptance suite, runnable from tests and from the command line.
//!
//! Each criterion returns a [`CriterionReport`]; a criterion passes when
//! every check holds and it finishes inside its time budget.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

use crate::field::{Field, Repr};
use crate::grid::TorusGrid;
use crate::harness::{
    conservation_run, convergence_studies, ConservationSpec, ConvergenceSpec,
    HarnessError, Problem, StepSize,
};
use crate::integrators::{run, step_first_order, step_second_order, Method, PropagatorSet, RunOptions};
use crate::model::{
    composite_error, elliptic_residual, example1_data, init_from, initial_time_derivative,
    soliton_exact, Scheme, SolitonParams, SolutionFields, ZakharovState,
};
use crate::multiplier::Multiplier;

pub const ELLIPTIC_TOLERANCE: f64 = 1e-12;
pub const LINEAR_TOLERANCE: f64 = 1e-12;
pub const LINEAR_STEPS: u64 = 1000;
pub const LINEAR_TAU: f64 = 0.1;
pub const MULTIPLIER_SAMPLES: usize = 100_000;
pub const ZERO_MODE_TOLERANCE: f64 = 1e-12;
pub const SOLITON_MODES: usize = 512;
pub const SOLITON_B: f64 = 0.5;
pub const SOLITON_C: f64 = 0.15;
pub const CONVERGENCE_TAUS: [f64; 4] = [4e-3, 2e-3, 1e-3, 5e-4];
pub const FIRST_ORDER_SLOPE: (f64, f64) = (0.85, 1.15);
pub const SECOND_ORDER_SLOPE: (f64, f64) = (1.75, 2.25);
pub const EXAMPLE1_MODES: usize = 256;
pub const GRID_INDEPENDENCE_TAU: f64 = 1e-3;
pub const GRID_INDEPENDENCE_CHANGE: f64 = 0.05;
pub const CONSERVATION_CFL: f64 = 5.0;
pub const CONSERVATION_T: f64 = 20.0;
pub const L2_DRIFT_BOUND: f64 = 1e-2;
pub const DRIFT_HALVING_RATIO: (f64, f64) = (1.5, 3.0);
pub const ENERGY_GROWTH_BOUND: f64 = 2.0;
pub const ZERO_MODE_RECURSION_TOLERANCE: f64 = 1e-14;
pub const ENERGY_SPACE_SLOPE: f64 = 0.85;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {}: {}: {} ({:.2} s of {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

/// Outcome of the numerical checks of one criterion, before timing.
struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(checks: &[(bool, String)]) -> Self {
        Verdict {
            passed: checks.iter().all(|c| c.0),
            detail: checks
                .iter()
                .map(|(ok, s)| if *ok { s.clone() } else { format!("{s} [violated]") })
                .collect::<Vec<_>>()
                .join("; "),
        }
    }
}

fn timed(
    id: u32,
    title: &'static str,
    budget_secs: u64,
    check: impl FnOnce() -> Result<Verdict, HarnessError>,
) -> CriterionReport {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_secs);
    let (mut passed, mut detail) = match outcome {
        Ok(v) => (v.passed, v.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > budget {
        passed = false;
        detail.push_str("; over time budget");
    }
    CriterionReport {
        id,
        title,
        passed,
        detail,
        elapsed,
        budget,
    }
}

fn in_range(x: f64, (lo, hi): (f64, f64)) -> bool {
    (lo..=hi).contains(&x)
}

fn soliton_problem() -> Result<Problem, HarnessError> {
    Ok(Problem::Soliton(SolitonParams::new(SOLITON_B, SOLITON_C)?))
}

fn soliton_length() -> f64 {
    20.0 * PI
}

pub fn elliptic_identity() -> CriterionReport {
    timed(1, "elliptic identity of the initial data", 1, || {
        let example = example1_data(&TorusGrid::periodic_2pi(1024)?);
        let grid = TorusGrid::new(soliton_length(), SOLITON_MODES)?;
        let soliton = soliton_exact(&SolitonParams::new(SOLITON_B, SOLITON_C)?, &grid, 0.0)?;
        let checks = [("example1", example), ("soliton", soliton)].map(|(name, d)| {
            let f = initial_time_derivative(&d.e, &d.u);
            let r = elliptic_residual(&d.e, &d.u, &f);
            (r <= ELLIPTIC_TOLERANCE, format!("{name} residual {r:.2e}"))
        });
        Ok(Verdict::new(&checks))
    })
}

fn random_modes(grid: &Arc<TorusGrid>, rng: &mut ChaCha8Rng) -> Field {
    let mut f = Field::zeros(grid, Repr::Spectral);
    for (j, &k) in grid.wavenumbers().iter().enumerate() {
        let amp = 1.0 / (1.0 + k * k);
        f.values_mut()[j] = Complex64::new(rng.gen_range(-amp..amp), rng.gen_range(-amp..amp));
    }
    f.real_part()
}

pub fn linear_exactness() -> CriterionReport {
    timed(2, "exact wave propagation with E = 0", 5, || {
        let grid = TorusGrid::periodic_2pi(64)?;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u0 = random_modes(&grid, &mut rng).into_spectral();
        let u1 = random_modes(&grid, &mut rng).into_spectral();
        let data = SolutionFields::new(Field::zeros(&grid, Repr::Spectral), u0.clone(), u1.clone())?;
        let t = LINEAR_STEPS as f64 * LINEAR_TAU;
        let mut exact_u = Field::zeros(&grid, Repr::Spectral);
        let mut exact_v = Field::zeros(&grid, Repr::Spectral);
        for (j, &k) in grid.wavenumbers().iter().enumerate() {
            let a = k.abs();
            let (c, s) = ((a * t).cos(), (a * t).sin());
            let sin_over = if a == 0.0 { t } else { s / a };
            exact_u.values_mut()[j] = c * u0.values()[j] + sin_over * u1.values()[j];
            exact_v.values_mut()[j] = -a * s * u0.values()[j] + c * u1.values()[j];
        }
        let mut checks = Vec::new();
        for scheme in [Scheme::FirstOrder, Scheme::SecondOrder] {
            let out = run(
                Method::Trig(scheme),
                &data,
                LINEAR_TAU,
                t,
                RunOptions {
                    sample_every: u64::MAX,
                    ..Default::default()
                },
            )?
            .final_fields
            .to_spectral();
            let err = (&out.u - &exact_u)
                .max_abs()
                .max((&out.uprime - &exact_v).max_abs())
                .max(out.e.max_abs());
            checks.push((err <= LINEAR_TOLERANCE, format!("{scheme} max mode error {err:.2e}")));
        }
        Ok(Verdict::new(&checks))
    })
}

pub fn multiplier_bounds() -> CriterionReport {
    timed(3, "multiplier bounds and zero-mode limits", 5, || {
        let grid = TorusGrid::periodic_2pi(1024)?;
        let kmax = grid.max_wavenumber();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (mut d1, mut sinc, mut cosq, mut d2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for _ in 0..MULTIPLIER_SAMPLES {
            // (0, 1]
            let tau = 1.0 - rng.gen::<f64>();
            let kappa = rng.gen_range(1..=kmax as i64) as f64 * if rng.gen() { 1.0 } else { -1.0 };
            d1 = d1.max(Multiplier::D1 { tau }.eval(kappa).norm());
            sinc = sinc.max(Multiplier::Sinc { tau }.eval(kappa).norm());
            cosq = cosq.max(Multiplier::OneMinusCosOverArg { tau }.eval(kappa).norm());
            d2 = d2.max((tau * Multiplier::D2 { tau }.eval(kappa) * kappa * kappa).norm() / tau);
        }
        let mut checks = vec![
            (d1 <= 2.0, format!("max |D1| {d1:.4}")),
            (sinc <= 1.0, format!("max |sinc| {sinc:.4}")),
            (cosq <= 2.0, format!("max |(1-cos x)/x| {cosq:.4}")),
            (d2 <= 3.0, format!("max |tau D2 kappa^2|/tau {d2:.4}")),
        ];
        let tau = 0.5;
        let limits = [
            (Multiplier::D1 { tau }, Complex64::new(-1.0, 0.0)),
            (Multiplier::D2 { tau }, Complex64::new(0.0, -tau / 2.0)),
            (Multiplier::Sinc { tau }, Complex64::new(1.0, 0.0)),
            (Multiplier::SinOverAbs { tau }, Complex64::new(tau, 0.0)),
            (Multiplier::OneMinusCosOverArg { tau }, Complex64::new(0.0, 0.0)),
            (Multiplier::AbsTimesSin { tau }, Complex64::new(0.0, 0.0)),
            (Multiplier::WaveSource { tau }, Complex64::new(0.0, 0.0)),
        ];
        let worst = limits
            .iter()
            .map(|(m, lim)| (m.zero_mode() - lim).norm())
            .fold(0.0, f64::max);
        checks.push((worst <= ZERO_MODE_TOLERANCE, format!("zero-mode limits within {worst:.1e}")));
        Ok(Verdict::new(&checks))
    })
}

fn soliton_spec(modes: usize, taus: Vec<f64>, s_index: f64) -> Result<ConvergenceSpec, HarnessError> {
    Ok(ConvergenceSpec {
        problem: soliton_problem()?,
        taus,
        modes,
        length: soliton_length(),
        t_end: 1.0,
        s_index,
    })
}

fn slope_checks(
    spec: &ConvergenceSpec,
) -> Result<Vec<(bool, String)>, HarnessError> {
    let records = convergence_studies(spec, &[Scheme::FirstOrder, Scheme::SecondOrder])?;
    records
        .iter()
        .zip([FIRST_ORDER_SLOPE, SECOND_ORDER_SLOPE])
        .map(|(r, bracket)| {
            let slope = r.fit()?.slope;
            Ok((
                in_range(slope, bracket),
                format!("{} slope {slope:.4} in [{}, {}]", r.scheme, bracket.0, bracket.1),
            ))
        })
        .collect()
}

pub fn soliton_convergence() -> CriterionReport {
    timed(4, "soliton convergence orders", 120, || {
        let spec = soliton_spec(SOLITON_MODES, CONVERGENCE_TAUS.to_vec(), 0.0)?;
        Ok(Verdict::new(&slope_checks(&spec)?))
    })
}

pub fn example1_convergence() -> CriterionReport {
    timed(5, "example 1 convergence against the dual reference", 180, || {
        let spec = ConvergenceSpec {
            problem: Problem::Example1,
            taus: CONVERGENCE_TAUS.to_vec(),
            modes: EXAMPLE1_MODES,
            length: 2.0 * PI,
            t_end: 1.0,
            s_index: 0.0,
        };
        Ok(Verdict::new(&slope_checks(&spec)?))
    })
}

pub fn grid_independence() -> CriterionReport {
    timed(6, "error independent of the grid size", 60, || {
        let problem = soliton_problem()?;
        let err = |modes: usize| -> Result<f64, HarnessError> {
            let grid = TorusGrid::new(soliton_length(), modes)?;
            let data = problem.initial_data(&grid)?;
            let options = RunOptions {
                sample_every: u64::MAX,
                ..Default::default()
            };
            let out = run(Method::Trig(Scheme::FirstOrder), &data, GRID_INDEPENDENCE_TAU, 1.0, options)?;
            let exact = problem.exact(&grid, 1.0)?.expect("soliton has an exact solution");
            Ok(composite_error(&out.final_fields, &exact, 0.0)?)
        };
        let (coarse, fine) = rayon::join(|| err(SOLITON_MODES), || err(2 * SOLITON_MODES));
        let (coarse, fine) = (coarse?, fine?);
        let change = (fine - coarse).abs() / coarse;
        Ok(Verdict::new(&[(
            change <= GRID_INDEPENDENCE_CHANGE,
            format!("K=512 error {coarse:.4e}, K=1024 error {fine:.4e}, change {:.2}%", 100.0 * change),
        )]))
    })
}

pub fn conservation_drift() -> CriterionReport {
    timed(7, "conservation drift at CFL 5", 120, || {
        let spec = |scheme: Scheme, cfl: f64| -> Result<ConservationSpec, HarnessError> {
            Ok(ConservationSpec {
                method: Method::Trig(scheme),
                problem: soliton_problem()?,
                step: StepSize::Cfl(cfl),
                modes: SOLITON_MODES,
                length: soliton_length(),
                t_end: CONSERVATION_T,
                sample_every: 1,
                dealias: false,
                coupled: true,
            })
        };
        let cells = [
            (Scheme::FirstOrder, CONSERVATION_CFL),
            (Scheme::FirstOrder, CONSERVATION_CFL / 2.0),
            (Scheme::SecondOrder, CONSERVATION_CFL),
        ];
        let records = {
            use rayon::prelude::*;
            cells
                .par_iter()
                .map(|&(s, c)| conservation_run(&spec(s, c)?))
                .collect::<Result<Vec<_>, _>>()?
        };
        let mut checks = Vec::new();
        for (record, (scheme, _)) in records.iter().zip(cells).filter(|(_, c)| c.1 == CONSERVATION_CFL) {
            let drift = record.max_relative_l2_drift();
            checks.push((
                drift <= L2_DRIFT_BOUND,
                format!("{scheme} max relative L2 drift {drift:.3e} <= {L2_DRIFT_BOUND:e}"),
            ));
            let (first, second) = record.energy_deviation_halves();
            checks.push((
                second <= ENERGY_GROWTH_BOUND * first,
                format!("{scheme} max |dev_H| halves {first:.3e} then {second:.3e}"),
            ));
        }
        let ratio = records[0].max_relative_l2_drift() / records[1].max_relative_l2_drift();
        checks.push((
            in_range(ratio, DRIFT_HALVING_RATIO),
            format!(
                "first-order drift ratio under halved tau {ratio:.3} in [{}, {}]",
                DRIFT_HALVING_RATIO.0, DRIFT_HALVING_RATIO.1
            ),
        ));
        Ok(Verdict::new(&checks))
    })
}

fn step(state: &ZakharovState, props: &PropagatorSet) -> Result<ZakharovState, HarnessError> {
    Ok(match state.scheme() {
        Scheme::FirstOrder => step_first_order(state, props)?,
        Scheme::SecondOrder => step_second_order(state, props)?,
    })
}

pub fn zero_mode_recursions() -> CriterionReport {
    timed(8, "zero-mode recursions", 1, || {
        let grid = TorusGrid::periodic_2pi(64)?;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut e = random_modes(&grid, &mut rng);
        let im = random_modes(&grid, &mut rng);
        for (a, b) in e.values_mut().iter_mut().zip(im.values()) {
            *a += Complex64::new(0.0, 1.0) * b.re;
        }
        let u = random_modes(&grid, &mut rng);
        let v = random_modes(&grid, &mut rng);
        let data = SolutionFields::new(e, u, v)?;
        let tau = 0.01;
        let mut checks = Vec::new();
        for scheme in [Scheme::FirstOrder, Scheme::SecondOrder] {
            let props = PropagatorSet::new(&grid, tau)?;
            let mut s = init_from(&data, scheme, tau)?;
            let mut worst = 0.0f64;
            for _ in 0..100 {
                let next = step(&s, &props)?;
                let du = next.u().mean() - s.u().mean() - tau * s.uprime().mean();
                let dv = next.uprime().mean() - s.uprime().mean();
                worst = worst.max(du.norm()).max(dv.norm());
                s = next;
            }
            checks.push((
                worst <= ZERO_MODE_RECURSION_TOLERANCE,
                format!("{scheme} worst per-step defect {worst:.1e}"),
            ));
        }
        Ok(Verdict::new(&checks))
    })
}

pub fn energy_space_order() -> CriterionReport {
    timed(9, "first-order convergence in the energy space", 60, || {
        let spec = soliton_spec(SOLITON_MODES, CONVERGENCE_TAUS.to_vec(), -1.0)?;
        let record = convergence_studies(&spec, &[Scheme::FirstOrder])?.remove(0);
        let slope = record.fit()?.slope;
        Ok(Verdict::new(&[(
            slope >= ENERGY_SPACE_SLOPE,
            format!("s = -1 slope {slope:.4} >= {ENERGY_SPACE_SLOPE}"),
        )]))
    })
}

/// Every criterion in order.
pub fn criteria() -> [fn() -> CriterionReport; 9] {
    [
        elliptic_identity,
        linear_exactness,
        multiplier_bounds,
        soliton_convergence,
        example1_convergence,
        grid_independence,
        conservation_drift,
        zero_mode_recursions,
        energy_space_order,
    ]
}

pub fn run_all() -> Vec<CriterionReport> {
    criteria().iter().map(|c| c()).collect()
}

