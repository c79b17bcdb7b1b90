use std::fmt;
use std::str::FromStr;

use super::{step_first_order, step_second_order, IntegratorError, PropagatorSet, Rk4Oracle};
use crate::model::{diagnostics, init_from, Diagnostics, Scheme, SolutionFields, ZakharovState};

/// Any of the available time steppers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Trig(Scheme),
    Rk4,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Trig(s) => s.name(),
            Method::Rk4 => "rk4",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rk4" => Ok(Method::Rk4),
            other => other
                .parse::<Scheme>()
                .map(Method::Trig)
                .map_err(|_| format!("unknown scheme '{other}' (expected first, second or rk4)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub sample_every: u64,
    pub keep_snapshots: bool,
    pub dealias: bool,
    pub coupled: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            sample_every: 1,
            keep_snapshots: false,
            dealias: false,
            coupled: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub step: u64,
    pub t: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub method: Method,
    pub tau: f64,
    pub steps: u64,
    pub samples: Vec<Sample>,
    pub snapshots: Vec<(f64, SolutionFields)>,
    pub final_fields: SolutionFields,
}

/// Number of steps of size `tau` that reach `t_end`, if `tau` divides it.
pub fn steps_for(tau: f64, t_end: f64) -> Result<u64, IntegratorError> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(IntegratorError::InvalidRun(format!("step size {tau} is not positive")));
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(IntegratorError::InvalidRun(format!("final time {t_end} is not >= 0")));
    }
    let n = (t_end / tau).round();
    if (n * tau - t_end).abs() > 1e-9 * t_end.max(1.0) {
        return Err(IntegratorError::InvalidRun(format!(
            "tau = {tau} does not divide T = {t_end}"
        )));
    }
    Ok(n as u64)
}

/// A running trajectory of any [`Method`].
pub struct Integrator {
    stepper: Stepper,
    tau: f64,
}

enum Stepper {
    Trig {
        state: ZakharovState,
        props: PropagatorSet,
    },
    Rk4 {
        oracle: Rk4Oracle,
        fields: SolutionFields,
        n: u64,
    },
}

impl Integrator {
    pub fn new(
        method: Method,
        data: &SolutionFields,
        tau: f64,
        options: RunOptions,
    ) -> Result<Self, IntegratorError> {
        let grid = data.grid();
        let stepper = match method {
            Method::Trig(scheme) => Stepper::Trig {
                state: init_from(data, scheme, tau)?,
                props: PropagatorSet::new(grid, tau)?
                    .with_dealias(options.dealias)
                    .with_coupling(options.coupled),
            },
            Method::Rk4 => {
                if options.dealias || !options.coupled {
                    return Err(IntegratorError::InvalidRun(
                        "the RK4 oracle supports neither dealiasing nor decoupling".into(),
                    ));
                }
                Stepper::Rk4 {
                    oracle: Rk4Oracle::new(grid, tau)?,
                    fields: data.to_spectral(),
                    n: 0,
                }
            }
        };
        Ok(Self { stepper, tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn steps(&self) -> u64 {
        match &self.stepper {
            Stepper::Trig { state, .. } => state.steps(),
            Stepper::Rk4 { n, .. } => *n,
        }
    }

    pub fn time(&self) -> f64 {
        self.steps() as f64 * self.tau
    }

    pub fn fields(&self) -> SolutionFields {
        match &self.stepper {
            Stepper::Trig { state, .. } => state.solution(),
            Stepper::Rk4 { fields, .. } => fields.clone(),
        }
    }

    pub fn advance(&mut self) -> Result<(), IntegratorError> {
        match &mut self.stepper {
            Stepper::Trig { state, props } => {
                *state = match state.scheme() {
                    Scheme::FirstOrder => step_first_order(state, props)?,
                    Scheme::SecondOrder => step_second_order(state, props)?,
                };
            }
            Stepper::Rk4 { oracle, fields, n } => {
                *n += 1;
                let next = oracle.step(fields)?;
                super::ensure_finite(&[("E", &next.e), ("u", &next.u), ("u'", &next.uprime)], *n)?;
                *fields = next;
            }
        }
        Ok(())
    }

    /// Advances until the step counter reaches `n`.
    pub fn advance_to(&mut self, n: u64) -> Result<(), IntegratorError> {
        while self.steps() < n {
            self.advance()?;
        }
        Ok(())
    }
}

/// Advances `data` to `t_end` with steps of size `tau`, recording
/// diagnostics at step 0, every `sample_every` steps and at the last step.
pub fn run(
    method: Method,
    data: &SolutionFields,
    tau: f64,
    t_end: f64,
    options: RunOptions,
) -> Result<Trajectory, IntegratorError> {
    if options.sample_every == 0 {
        return Err(IntegratorError::InvalidRun("sample_every must be >= 1".into()));
    }
    let steps = steps_for(tau, t_end)?;
    let mut stepper = Integrator::new(method, data, tau, options)?;

    let mut samples = Vec::new();
    let mut snapshots = Vec::new();
    let mut record = |n: u64, fields: SolutionFields| {
        let t = n as f64 * tau;
        samples.push(Sample {
            step: n,
            t,
            diagnostics: diagnostics(&fields),
        });
        if options.keep_snapshots {
            snapshots.push((t, fields));
        }
    };
    record(0, stepper.fields());
    for n in 1..=steps {
        stepper.advance()?;
        if n % options.sample_every == 0 || n == steps {
            record(n, stepper.fields());
        }
    }
    Ok(Trajectory {
        method,
        tau,
        steps,
        samples,
        snapshots,
        final_fields: stepper.fields(),
    })
}
