//! Time steppers for the Zakharov system.
//!
//! The two trigonometric schemes advance a [`ZakharovState`] with exact
//! linear propagators and filtered nonlinear terms, so they carry no
//! step-size restriction tied to the grid. The RK4 method-of-lines stepper
//! is an independent oracle for problems without a closed-form solution.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use thiserror::Error;

use crate::field::{Field, FieldError, Repr};
use crate::grid::TorusGrid;
use crate::model::{ModelError, Scheme};
use crate::multiplier::{Multiplier, MultiplierTable};

mod first_order;
mod rk4;
mod run;
mod second_order;

pub use first_order::step_first_order;
pub use rk4::{Rk4Oracle, RK4_STABILITY_FACTOR};
pub use run::{run, steps_for, Integrator, Method, RunOptions, Sample, Trajectory};
pub use second_order::step_second_order;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegratorError {
    #[error("state was initialized for the {found} scheme, stepper is {expected}")]
    SchemeMismatch { expected: Scheme, found: Scheme },
    #[error("state step size {state} differs from propagator step size {propagators}")]
    StepSizeMismatch { state: f64, propagators: f64 },
    #[error("state and propagators live on different grids")]
    GridMismatch,
    #[error("non-finite values in {field} at step {step}")]
    Divergence { field: &'static str, step: u64 },
    #[error("RK4 step {tau} exceeds the stability bound {max_tau}; use tau <= {max_tau}")]
    OracleUnstable { tau: f64, max_tau: f64 },
    #[error("invalid run: {0}")]
    InvalidRun(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<FieldError> for IntegratorError {
    fn from(e: FieldError) -> Self {
        IntegratorError::Model(e.into())
    }
}

/// Per-mode multipliers for one step size, sampled once and reused every step.
#[derive(Debug, Clone)]
pub struct PropagatorSet {
    grid: Arc<TorusGrid>,
    tau: f64,
    pub(crate) schroedinger: MultiplierTable,
    pub(crate) d1: MultiplierTable,
    pub(crate) d2: MultiplierTable,
    pub(crate) cos: MultiplierTable,
    pub(crate) sin_over_abs: MultiplierTable,
    pub(crate) abs_sin: MultiplierTable,
    pub(crate) one_minus_cos_over_arg: MultiplierTable,
    pub(crate) sinc: MultiplierTable,
    pub(crate) wave_source: MultiplierTable,
    pub(crate) inverse_helmholtz: MultiplierTable,
    pub(crate) laplacian: MultiplierTable,
    coupled: bool,
    dealias: bool,
}

impl PropagatorSet {
    pub fn new(grid: &Arc<TorusGrid>, tau: f64) -> Result<Self, IntegratorError> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(ModelError::InvalidStep(tau).into());
        }
        let table = |m| MultiplierTable::new(grid, m);
        Ok(Self {
            grid: Arc::clone(grid),
            tau,
            schroedinger: table(Multiplier::Schroedinger { tau }),
            d1: table(Multiplier::D1 { tau }),
            d2: table(Multiplier::D2 { tau }),
            cos: table(Multiplier::Cos { tau }),
            sin_over_abs: table(Multiplier::SinOverAbs { tau }),
            abs_sin: table(Multiplier::AbsTimesSin { tau }),
            one_minus_cos_over_arg: table(Multiplier::OneMinusCosOverArg { tau }),
            sinc: table(Multiplier::Sinc { tau }),
            wave_source: table(Multiplier::WaveSource { tau }),
            inverse_helmholtz: table(Multiplier::InverseHelmholtz),
            laplacian: table(Multiplier::Laplacian),
            coupled: true,
            dealias: false,
        })
    }

    /// Filters every nonlinear product with the two-thirds rule.
    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    /// Switches the coupling terms off: `E` then follows the free
    /// Schroedinger flow and `u` the free wave equation.
    pub fn with_coupling(mut self, coupled: bool) -> Self {
        self.coupled = coupled;
        self
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn is_coupled(&self) -> bool {
        self.coupled
    }

    pub fn dealiased(&self) -> bool {
        self.dealias
    }

    /// Every table with its symbol, for inspection.
    pub fn tables(&self) -> [&MultiplierTable; 11] {
        [
            &self.schroedinger,
            &self.d1,
            &self.d2,
            &self.cos,
            &self.sin_over_abs,
            &self.abs_sin,
            &self.one_minus_cos_over_arg,
            &self.sinc,
            &self.wave_source,
            &self.inverse_helmholtz,
            &self.laplacian,
        ]
    }

    /// Spectral form of a collocation product, dealiased when requested.
    pub(crate) fn spectral(&self, product: Field) -> Field {
        let f = product.into_spectral();
        if self.dealias {
            f.dealias()
        } else {
            f
        }
    }

    /// `|E|^2` in spectral form, or zero when the coupling is off.
    pub(crate) fn intensity(&self, e_phys: &Field) -> Field {
        if self.coupled {
            self.spectral(e_phys.abs_sq())
        } else {
            Field::zeros(&self.grid, Repr::Spectral)
        }
    }

    /// `sum_i a_i * b_i` formed on the collocation points, spectral result;
    /// zero when the coupling is off.
    pub(crate) fn coupling(&self, terms: &[(&Field, &Field)]) -> Field {
        if !self.coupled {
            return Field::zeros(&self.grid, Repr::Spectral);
        }
        let mut acc = vec![Complex64::new(0.0, 0.0); self.grid.modes()];
        for (a, b) in terms {
            debug_assert_eq!(a.repr(), Repr::Physical);
            debug_assert_eq!(b.repr(), Repr::Physical);
            for ((s, x), y) in acc.iter_mut().zip(a.values()).zip(b.values()) {
                *s += x * y;
            }
        }
        let f = Field::from_values(&self.grid, Repr::Physical, acc)
            .expect("accumulator sized from grid");
        self.spectral(f)
    }
}

pub(crate) fn check_compatible(
    state: &crate::model::ZakharovState,
    props: &PropagatorSet,
    expected: Scheme,
) -> Result<(), IntegratorError> {
    if state.scheme() != expected {
        return Err(IntegratorError::SchemeMismatch {
            expected,
            found: state.scheme(),
        });
    }
    if state.tau() != props.tau {
        return Err(IntegratorError::StepSizeMismatch {
            state: state.tau(),
            propagators: props.tau,
        });
    }
    if !state.grid().same_as(&props.grid) {
        return Err(IntegratorError::GridMismatch);
    }
    Ok(())
}

pub(crate) fn ensure_finite(fields: &[(&'static str, &Field)], step: u64) -> Result<(), IntegratorError> {
    for (name, f) in fields {
        if !f.is_finite() {
            return Err(IntegratorError::Divergence { field: name, step });
        }
    }
    Ok(())
}

/// Multiplies spectral `f` by a table and a scalar.
pub(crate) fn apply(f: &Field, table: &MultiplierTable, scalar: f64) -> Field {
    let mut out = f.apply_table(table);
    if scalar != 1.0 {
        for v in out.values_mut() {
            *v *= scalar;
        }
    }
    out
}

/// Subtracts one from physical values, the `u - 1` of the elliptic equation.
pub(crate) fn minus_one(u_phys: &Field) -> Field {
    let mut out = u_phys.clone();
    for v in out.values_mut() {
        *v -= 1.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_mode_entries_equal_limits() {
        let g = TorusGrid::new(2.0 * PI, 16).unwrap();
        let tau = 0.25;
        let p = PropagatorSet::new(&g, tau).unwrap();
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(p.schroedinger.values()[0], c(1.0, 0.0));
        assert_eq!(p.d1.values()[0], c(-1.0, 0.0));
        assert_eq!(p.d2.values()[0], c(0.0, -tau / 2.0));
        assert_eq!(p.cos.values()[0], c(1.0, 0.0));
        assert_eq!(p.sin_over_abs.values()[0], c(tau, 0.0));
        assert_eq!(p.abs_sin.values()[0], c(0.0, 0.0));
        assert_eq!(p.one_minus_cos_over_arg.values()[0], c(0.0, 0.0));
        assert_eq!(p.sinc.values()[0], c(1.0, 0.0));
        assert_eq!(p.inverse_helmholtz.values()[0], c(1.0, 0.0));
        assert_eq!(p.wave_source.values()[0], c(0.0, 0.0));
    }

    #[test]
    fn rejects_bad_step() {
        let g = TorusGrid::new(2.0 * PI, 16).unwrap();
        assert!(PropagatorSet::new(&g, 0.0).is_err());
        assert!(PropagatorSet::new(&g, f64::INFINITY).is_err());
    }
}
