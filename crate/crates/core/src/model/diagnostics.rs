//! Conserved quantities and error norms.

use rustfft::num_complex::Complex64;

use super::{ModelError, SolutionFields, ZakharovState};
use crate::field::Field;

/// Largest `|mean(u')|` for which the energy is a conserved quantity.
pub const MEAN_ZERO_TOLERANCE: f64 = 1e-8;

/// Energy value together with its validity flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian {
    pub value: f64,
    /// Imaginary part picked up by `int u |E|^2` when `u` is not exactly real.
    pub imag_residue: f64,
    /// Set when `u'` has a nonzero mean, in which case `value` is not conserved.
    pub mean_zero_warning: bool,
}

/// `H = int |grad E|^2 + u |E|^2 + 1/2 ||nabla|^{-1} u'|^2 + 1/2 u^2 dx`.
///
/// Derivative terms are evaluated spectrally, the coupling term on the
/// collocation points. `|nabla|^{-1}` drops the zero mode of `u'`.
pub fn hamiltonian(fields: &SolutionFields) -> Hamiltonian {
    let grid = fields.grid();
    let l = grid.length();
    let e_hat = fields.e.to_spectral();
    let u_hat = fields.u.to_spectral();
    let v_hat = fields.uprime.to_spectral();
    let mut gradient = 0.0;
    let mut kinetic = 0.0;
    let mut potential = 0.0;
    for (j, &k) in grid.wavenumbers().iter().enumerate() {
        let k2 = k * k;
        gradient += k2 * e_hat.values()[j].norm_sqr();
        if k != 0.0 {
            kinetic += v_hat.values()[j].norm_sqr() / k2;
        }
        potential += u_hat.values()[j].norm_sqr();
    }
    let e_phys = fields.e.to_physical();
    let u_phys = fields.u.to_physical();
    let coupling: Complex64 = u_phys
        .values()
        .iter()
        .zip(e_phys.values())
        .map(|(u, e)| u * e.norm_sqr())
        .sum::<Complex64>()
        * grid.dx();
    let value = l * gradient + coupling.re + 0.5 * l * kinetic + 0.5 * l * potential;
    Hamiltonian {
        value,
        imag_residue: coupling.im.abs(),
        mean_zero_warning: v_hat.values()[0].norm() > MEAN_ZERO_TOLERANCE,
    }
}

/// `||E||_{L^2}`.
pub fn l2_norm_e(fields: &SolutionFields) -> f64 {
    fields.e.sobolev_norm(0.0)
}

/// Per-step diagnostics recorded along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub l2_e: f64,
    pub hamiltonian: Hamiltonian,
    pub mean_u: f64,
    pub mean_uprime: f64,
}

impl Diagnostics {
    pub fn is_finite(&self) -> bool {
        self.l2_e.is_finite()
            && self.hamiltonian.value.is_finite()
            && self.mean_u.is_finite()
            && self.mean_uprime.is_finite()
    }
}

pub fn diagnostics(fields: &SolutionFields) -> Diagnostics {
    Diagnostics {
        l2_e: l2_norm_e(fields),
        hamiltonian: hamiltonian(fields),
        mean_u: fields.u.mean().re,
        mean_uprime: fields.uprime.mean().re,
    }
}

impl ZakharovState {
    pub fn diagnostics(&self) -> Diagnostics {
        diagnostics(&self.solution())
    }
}

/// Error split by component: `||E||_{s+2}`, `||u||_{s+1}`, `||u'||_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentErrors {
    pub e: f64,
    pub u: f64,
    pub uprime: f64,
}

impl ComponentErrors {
    /// The composite norm `||(E, u, u')||_[s]`.
    pub fn total(&self) -> f64 {
        self.e + self.u + self.uprime
    }
}

pub fn component_errors(
    a: &SolutionFields,
    b: &SolutionFields,
    s: f64,
) -> Result<ComponentErrors, ModelError> {
    a.e.check_grid(&b.e)?;
    a.u.check_grid(&b.u)?;
    a.uprime.check_grid(&b.uprime)?;
    let diff = |x: &Field, y: &Field, order: f64| (x - y).sobolev_norm(order);
    Ok(ComponentErrors {
        e: diff(&a.e, &b.e, s + 2.0),
        u: diff(&a.u, &b.u, s + 1.0),
        uprime: diff(&a.uprime, &b.uprime, s),
    })
}

/// `||E_a - E_b||_{s+2} + ||u_a - u_b||_{s+1} + ||u'_a - u'_b||_s`.
pub fn composite_error(a: &SolutionFields, b: &SolutionFields, s: f64) -> Result<f64, ModelError> {
    Ok(component_errors(a, b, s)?.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldError;
    use crate::grid::TorusGrid;
    use std::f64::consts::PI;

    #[test]
    fn zero_state_has_zero_energy() {
        let g = TorusGrid::periodic_2pi(32).unwrap();
        let h = hamiltonian(&SolutionFields::zeros(&g));
        assert_eq!(h.value, 0.0);
        assert!(!h.mean_zero_warning);
    }

    #[test]
    fn pure_wave_energy() {
        // E = 0, u = cos x, u' = 0: H = 1/2 int cos^2 = pi/2
        let g = TorusGrid::periodic_2pi(32).unwrap();
        let mut f = SolutionFields::zeros(&g);
        f.u = Field::from_real_fn(&g, f64::cos);
        let h = hamiltonian(&f);
        assert!((h.value - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn velocity_mean_sets_warning() {
        let g = TorusGrid::periodic_2pi(32).unwrap();
        let mut f = SolutionFields::zeros(&g);
        f.uprime = Field::from_real_fn(&g, |_| 0.1);
        assert!(hamiltonian(&f).mean_zero_warning);
    }

    #[test]
    fn composite_norm_of_unit_mode() {
        let g = TorusGrid::periodic_2pi(32).unwrap();
        let mut a = SolutionFields::zeros(&g);
        a.e = Field::from_fn(&g, |x| Complex64::from_polar(1.0, x));
        let b = SolutionFields::zeros(&g);
        let err = composite_error(&a, &b, 0.0).unwrap();
        assert!((err - (2.0 * PI).sqrt()).abs() < 1e-12);
        assert_eq!(composite_error(&a, &a, 0.0).unwrap(), 0.0);
        let other = TorusGrid::periodic_2pi(64).unwrap();
        assert_eq!(
            composite_error(&a, &SolutionFields::zeros(&other), 0.0).unwrap_err(),
            ModelError::Field(FieldError::GridMismatch)
        );
    }
}
