//! Uniform collocation grid on the one-dimensional torus.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("torus length must be finite and positive, got {0}")]
    InvalidLength(f64),
    #[error("mode count must be a power of two >= 8, got {0}")]
    InvalidModes(usize),
}

/// The torus `[-L/2, L/2)` sampled at `K` equispaced points.
///
/// Holds the signed wavenumbers `2*pi*k/L` in FFT storage order together
/// with the forward and inverse transform plans, so a grid is built once
/// and shared behind an `Arc` by every field that lives on it.
pub struct TorusGrid {
    length: f64,
    modes: usize,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl TorusGrid {
    pub fn new(length: f64, modes: usize) -> Result<Arc<Self>, GridError> {
        if !(length.is_finite() && length > 0.0) {
            return Err(GridError::InvalidLength(length));
        }
        if modes < 8 || !modes.is_power_of_two() {
            return Err(GridError::InvalidModes(modes));
        }
        let wavenumbers = (0..modes)
            .map(|j| 2.0 * PI * signed_index(j, modes) as f64 / length)
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(modes);
        let inverse = planner.plan_fft_inverse(modes);
        Ok(Arc::new(Self {
            length,
            modes,
            wavenumbers,
            forward,
            inverse,
        }))
    }

    /// The standard `2*pi` torus.
    pub fn periodic_2pi(modes: usize) -> Result<Arc<Self>, GridError> {
        Self::new(2.0 * PI, modes)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dx(&self) -> f64 {
        self.length / self.modes as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.modes).map(move |j| self.point(j))
    }

    /// Wavenumbers in FFT storage order; index 0 is exactly zero.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Signed mode index `k` in `-K/2..K/2` for storage slot `j`.
    pub fn signed_index(&self, j: usize) -> i64 {
        signed_index(j, self.modes)
    }

    /// Storage slot of the signed mode `k`, if it is represented.
    pub fn slot(&self, k: i64) -> Option<usize> {
        let half = (self.modes / 2) as i64;
        if k < -half || k >= half {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((k + self.modes as i64) as usize)
        }
    }

    /// Largest represented `|kappa|`.
    pub fn max_wavenumber(&self) -> f64 {
        PI * self.modes as f64 / self.length
    }

    /// Two grids are interchangeable when they describe the same torus.
    pub fn same_as(&self, other: &TorusGrid) -> bool {
        self.modes == other.modes && self.length == other.length
    }

    pub(crate) fn forward_plan(&self) -> &Arc<dyn Fft<f64>> {
        &self.forward
    }

    pub(crate) fn inverse_plan(&self) -> &Arc<dyn Fft<f64>> {
        &self.inverse
    }
}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid")
            .field("length", &self.length)
            .field("modes", &self.modes)
            .finish()
    }
}

fn signed_index(j: usize, modes: usize) -> i64 {
    if j < modes / 2 {
        j as i64
    } else {
        j as i64 - modes as i64
    }
}
