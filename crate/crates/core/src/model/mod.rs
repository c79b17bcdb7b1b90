//! The Zakharov system `i E_t + Delta E = u E`, `u_tt - Delta u = Delta |E|^2`
//! on the torus: integrator state, initial data and conserved quantities.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use thiserror::Error;

use crate::field::{Field, FieldError, Repr};
use crate::grid::TorusGrid;
use crate::multiplier::Multiplier;

mod data;
mod diagnostics;

pub use data::{example1_data, soliton_exact, SolitonParams};
pub use diagnostics::{
    composite_error, component_errors, diagnostics, hamiltonian, l2_norm_e, ComponentErrors,
    Diagnostics, Hamiltonian, MEAN_ZERO_TOLERANCE,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("step size must be finite and positive, got {0}")]
    InvalidStep(f64),
    #[error("invalid soliton parameters B={b}, C={c}: need B > 0 and |C| < 1")]
    InvalidSoliton { b: f64, c: f64 },
    #[error("torus too small for the solitary wave: {0}")]
    DomainTooSmall(String),
}

/// Which trigonometric integrator a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    FirstOrder,
    SecondOrder,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::FirstOrder => "first",
            Scheme::SecondOrder => "second",
        }
    }

    pub fn order(self) -> u32 {
        match self {
            Scheme::FirstOrder => 1,
            Scheme::SecondOrder => 2,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" | "1" => Ok(Scheme::FirstOrder),
            "second" | "2" => Ok(Scheme::SecondOrder),
            other => Err(format!("unknown scheme '{other}' (expected first or second)")),
        }
    }
}

/// The physical unknowns `(E, u, u')` at one instant.
#[derive(Debug, Clone)]
pub struct SolutionFields {
    pub e: Field,
    pub u: Field,
    pub uprime: Field,
}

impl SolutionFields {
    pub fn new(e: Field, u: Field, uprime: Field) -> Result<Self, ModelError> {
        e.check_grid(&u)?;
        e.check_grid(&uprime)?;
        Ok(Self { e, u, uprime })
    }

    pub fn zeros(grid: &Arc<TorusGrid>) -> Self {
        Self {
            e: Field::zeros(grid, Repr::Spectral),
            u: Field::zeros(grid, Repr::Spectral),
            uprime: Field::zeros(grid, Repr::Spectral),
        }
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        self.e.grid()
    }

    pub fn check_grid(&self, other: &SolutionFields) -> Result<(), ModelError> {
        self.e.check_grid(&other.e)?;
        Ok(())
    }

    pub fn to_spectral(&self) -> Self {
        Self {
            e: self.e.to_spectral(),
            u: self.u.to_spectral(),
            uprime: self.uprime.to_spectral(),
        }
    }

    pub fn to_physical(&self) -> Self {
        Self {
            e: self.e.to_physical(),
            u: self.u.to_physical(),
            uprime: self.uprime.to_physical(),
        }
    }

    /// Translates every component by `m` grid points.
    pub fn shift(&self, m: isize) -> Self {
        Self {
            e: self.e.shift(m),
            u: self.u.shift(m),
            uprime: self.uprime.shift(m),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.e.is_finite() && self.u.is_finite() && self.uprime.is_finite()
    }
}

/// Everything a trigonometric integrator carries from one step to the next.
///
/// All fields are kept in spectral form. `s_f` accumulates `tau * sum F^k`;
/// for the first-order scheme it also contains `E_0`, for the second-order
/// scheme it does not (the second-order scheme keeps `E_0` separately and
/// carries the filtered integral `i_f` instead).
#[derive(Debug, Clone)]
pub struct ZakharovState {
    pub(crate) scheme: Scheme,
    pub(crate) tau: f64,
    pub(crate) e: Field,
    pub(crate) u: Field,
    pub(crate) uprime: Field,
    pub(crate) f: Field,
    pub(crate) s_f: Field,
    pub(crate) i_f: Field,
    pub(crate) e0: Field,
    pub(crate) n: u64,
}

impl ZakharovState {
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn steps(&self) -> u64 {
        self.n
    }

    /// `n * tau`, never accumulated.
    pub fn time(&self) -> f64 {
        self.n as f64 * self.tau
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        self.e.grid()
    }

    pub fn e(&self) -> &Field {
        &self.e
    }

    pub fn u(&self) -> &Field {
        &self.u
    }

    pub fn uprime(&self) -> &Field {
        &self.uprime
    }

    /// `F = dE/dt`.
    pub fn f(&self) -> &Field {
        &self.f
    }

    pub fn s_f(&self) -> &Field {
        &self.s_f
    }

    /// Filtered approximation of `E_0 + int F`; equal to `E_0` for the first-order scheme.
    pub fn i_f(&self) -> &Field {
        &self.i_f
    }

    pub fn e0(&self) -> &Field {
        &self.e0
    }

    pub fn solution(&self) -> SolutionFields {
        SolutionFields {
            e: self.e.clone(),
            u: self.u.clone(),
            uprime: self.uprime.clone(),
        }
    }
}

/// `F^0 = i (Delta E^0 - u^0 E^0)`, in spectral form.
pub fn initial_time_derivative(e0: &Field, u0: &Field) -> Field {
    let lap = e0.apply_multiplier(&Multiplier::Laplacian);
    let ue = u0.product(e0).into_spectral();
    (&lap - &ue).scale(I)
}

/// Builds the starting state of either scheme from `(E_0, u_0, u_1)`.
pub fn init_state(
    e0: &Field,
    u0: &Field,
    u1: &Field,
    scheme: Scheme,
    tau: f64,
) -> Result<ZakharovState, ModelError> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(ModelError::InvalidStep(tau));
    }
    e0.check_grid(u0)?;
    e0.check_grid(u1)?;
    let e = e0.to_spectral();
    let f = initial_time_derivative(&e, u0);
    let (s_f, i_f) = match scheme {
        Scheme::FirstOrder => (&e + &f.scale(Complex64::from(tau)), e.clone()),
        Scheme::SecondOrder => (f.scale(Complex64::from(tau)), e.clone()),
    };
    Ok(ZakharovState {
        scheme,
        tau,
        e0: e.clone(),
        e,
        u: u0.to_spectral(),
        uprime: u1.to_spectral(),
        f,
        s_f,
        i_f,
        n: 0,
    })
}

pub fn init_from(data: &SolutionFields, scheme: Scheme, tau: f64) -> Result<ZakharovState, ModelError> {
    init_state(&data.e, &data.u, &data.uprime, scheme, tau)
}

/// Relative residual of `(1 - Delta) E = i F - (u - 1) E`.
pub fn elliptic_residual(e: &Field, u: &Field, f: &Field) -> f64 {
    let lhs = e.apply_multiplier(&Multiplier::Helmholtz);
    let mut u_minus_one = u.to_physical();
    for v in u_minus_one.values_mut() {
        *v -= 1.0;
    }
    let rhs = &f.scale(I).into_spectral() - &u_minus_one.product(e).into_spectral();
    (&lhs - &rhs).sobolev_norm(0.0) / lhs.sobolev_norm(0.0).max(f64::MIN_POSITIVE)
}
