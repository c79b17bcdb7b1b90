use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::IntegratorError;
use crate::field::Field;
use crate::grid::TorusGrid;
use crate::model::SolutionFields;
use crate::multiplier::{Multiplier, MultiplierTable};

/// Largest admissible `tau / dx^2` for the RK4 oracle.
///
/// The Schroedinger part has spectrum `-i kappa^2` up to `kappa_max = pi/dx`
/// and classical RK4 is stable on the imaginary axis up to `2 sqrt(2)`, so
/// `tau kappa_max^2 = 0.25 pi^2 ~ 2.47` leaves a margin.
pub const RK4_STABILITY_FACTOR: f64 = 0.25;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Classical RK4 on the method-of-lines system
/// `E_t = i Delta E - i u E`, `u_t = v`, `v_t = Delta u + Delta |E|^2`.
///
/// Used only as a reference; it shares no code path with the
/// trigonometric schemes beyond the transforms.
#[derive(Debug, Clone)]
pub struct Rk4Oracle {
    grid: Arc<TorusGrid>,
    tau: f64,
    laplacian: MultiplierTable,
}

impl Rk4Oracle {
    pub fn new(grid: &Arc<TorusGrid>, tau: f64) -> Result<Self, IntegratorError> {
        let max_tau = Self::max_step(grid);
        if !(tau.is_finite() && tau > 0.0) || tau > max_tau {
            return Err(IntegratorError::OracleUnstable { tau, max_tau });
        }
        Ok(Self {
            grid: Arc::clone(grid),
            tau,
            laplacian: MultiplierTable::new(grid, Multiplier::Laplacian),
        })
    }

    pub fn max_step(grid: &TorusGrid) -> f64 {
        RK4_STABILITY_FACTOR * grid.dx() * grid.dx()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    fn rhs(&self, y: &SolutionFields) -> SolutionFields {
        let e_p = y.e.to_physical();
        let u_p = y.u.to_physical();
        let lap_e = y.e.apply_table(&self.laplacian);
        let ue = u_p.product(&e_p).into_spectral();
        let e = (&lap_e - &ue).scale(I);
        let source = &y.u + &e_p.abs_sq().into_spectral();
        SolutionFields {
            e,
            u: y.uprime.clone(),
            uprime: source.apply_table(&self.laplacian),
        }
    }

    /// One RK4 step; input in any representation, output spectral.
    pub fn step(&self, y: &SolutionFields) -> Result<SolutionFields, IntegratorError> {
        if !y.grid().same_as(&self.grid) {
            return Err(IntegratorError::GridMismatch);
        }
        let y = y.to_spectral();
        let h = self.tau;
        let axpy = |base: &SolutionFields, k: &SolutionFields, a: f64| SolutionFields {
            e: &base.e + &(&k.e * a),
            u: &base.u + &(&k.u * a),
            uprime: &base.uprime + &(&k.uprime * a),
        };
        let k1 = self.rhs(&y);
        let k2 = self.rhs(&axpy(&y, &k1, 0.5 * h));
        let k3 = self.rhs(&axpy(&y, &k2, 0.5 * h));
        let k4 = self.rhs(&axpy(&y, &k3, h));
        let combine = |a: &Field, b: &Field, c: &Field, d: &Field| {
            let mut out = a.clone();
            for (((o, b), c), d) in out
                .values_mut()
                .iter_mut()
                .zip(b.values())
                .zip(c.values())
                .zip(d.values())
            {
                *o = (*o + 2.0 * b + 2.0 * c + d) * (h / 6.0);
            }
            out
        };
        let next = SolutionFields {
            e: &y.e + &combine(&k1.e, &k2.e, &k3.e, &k4.e),
            u: &y.u + &combine(&k1.u, &k2.u, &k3.u, &k4.u),
            uprime: &y.uprime + &combine(&k1.uprime, &k2.uprime, &k3.uprime, &k4.uprime),
        };
        Ok(next)
    }

    /// Advances `n` steps, failing on the first non-finite component.
    pub fn advance(&self, y: &SolutionFields, n: u64) -> Result<SolutionFields, IntegratorError> {
        let mut cur = y.to_spectral();
        for step in 1..=n {
            cur = self.step(&cur)?;
            super::ensure_finite(&[("E", &cur.e), ("u", &cur.u), ("u'", &cur.uprime)], step)?;
        }
        Ok(cur)
    }
}
