//! Fourier pseudo-spectral solver for the Zakharov system on the 1-D torus.
//!
//! The crate is organized bottom-up:
//!
//! * [`grid`], [`field`] and [`multiplier`]: torus geometry, transforms,
//!   Fourier multipliers with finite zero-mode limits and Sobolev norms.
//! * [`model`]: integrator state, initial data (a smooth test problem and
//!   the solitary wave) and the conserved quantities.
//! * [`integrators`]: the first- and second-order trigonometric schemes and
//!   an RK4 method-of-lines reference.
//! * [`harness`]: convergence and conservation studies and their CSV files.
//! * [`config`]: the flat `key=value` run configuration.
//! * [`selftest`]: the acceptance checks, shared by the test suite and the CLI.

pub mod config;
pub mod field;
pub mod grid;
pub mod harness;
pub mod integrators;
pub mod model;
pub mod multiplier;
pub mod selftest;

pub use field::{Field, Repr};
pub use grid::TorusGrid;
pub use integrators::{Method, PropagatorSet};
pub use model::{Scheme, SolitonParams, SolutionFields, ZakharovState};
pub use rustfft::num_complex::Complex64;
