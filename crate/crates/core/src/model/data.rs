//! Initial data and exact solutions.

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::{ModelError, SolutionFields};
use crate::field::Field;
use crate::grid::TorusGrid;

/// The smooth, non-symmetric data used for the convergence study on the
/// `2*pi` torus, each component normalized in its natural norm:
/// `||E_0||_2 = ||u_0||_1 = ||u_1||_0 = 1`.
pub fn example1_data(grid: &Arc<TorusGrid>) -> SolutionFields {
    let e = Field::from_fn(grid, |x| {
        let s2 = (2.0 * x).sin();
        Complex64::new(s2 * (4.0 * x).cos() / (2.0 - x.cos() * s2), s2 * x.cos())
    });
    let u = Field::from_real_fn(grid, |x| {
        let s2 = (2.0 * x).sin();
        x.sin() * (2.0 * x).cos() / (2.0 - s2 * s2)
    });
    let uprime = Field::from_real_fn(grid, |x| {
        let c2 = (2.0 * x).cos();
        x.sin() / (2.0 - c2 * c2)
    });
    let normalize = |f: Field, s: f64| {
        let n = f.sobolev_norm(s);
        f.scale(Complex64::from(1.0 / n))
    };
    SolutionFields {
        e: normalize(e, 2.0),
        u: normalize(u, 1.0),
        uprime: normalize(uprime, 0.0),
    }
}

/// Solitary-wave parameters: amplitude/width `B` and speed `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    b: f64,
    c: f64,
}

impl SolitonParams {
    pub fn new(b: f64, c: f64) -> Result<Self, ModelError> {
        if !(b.is_finite() && c.is_finite() && b > 0.0 && c.abs() < 1.0) {
            return Err(ModelError::InvalidSoliton { b, c });
        }
        Ok(Self { b, c })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Peak modulus `sqrt(2 B^2 (1 - C^2))`.
    pub fn amplitude(&self) -> f64 {
        (2.0 * self.b * self.b * (1.0 - self.c * self.c)).sqrt()
    }

    fn check_domain(&self, grid: &TorusGrid, t: f64) -> Result<(), ModelError> {
        let half = 0.5 * grid.length();
        if self.b * half < 15.0 {
            return Err(ModelError::DomainTooSmall(format!(
                "B*L/2 = {:.3} < 15",
                self.b * half
            )));
        }
        let centre = self.c * t;
        let margin = 5.0 / self.b;
        if centre <= -half + margin || centre >= half - margin {
            return Err(ModelError::DomainTooSmall(format!(
                "centre C*t = {centre:.3} is within 5/B of the boundary at +-{half:.3}"
            )));
        }
        Ok(())
    }

    /// `(E, u, u_t)` of the solitary wave on the real line at `(t, x)`.
    pub fn eval_on_line(&self, t: f64, x: f64) -> (Complex64, f64, f64) {
        let (b, c) = (self.b, self.c);
        let xi = b * (x - c * t);
        let sech = 1.0 / xi.cosh();
        let phase = c * x / 2.0 - (c * c / 4.0 - b * b) * t;
        let e = Complex64::from_polar(self.amplitude() * sech, phase);
        let u = -2.0 * b * b * sech * sech;
        let ut = -4.0 * b.powi(3) * c * xi.tanh() * sech * sech;
        (e, u, ut)
    }
}

/// Periodic images summed on each side of the torus when sampling the solitary wave.
const SOLITON_IMAGES: i32 = 2;

/// The solitary wave at time `t`, sampled on the grid.
///
/// The line solution is periodized by summing its translates by multiples
/// of `L`. The exponential tails overlap only at the level `exp(-B L)`, so
/// the periodized wave solves the torus problem to that accuracy, whereas
/// the bare line profile has a phase jump of size `sech(B L/2)` across the
/// boundary.
pub fn soliton_exact(
    params: &SolitonParams,
    grid: &Arc<TorusGrid>,
    t: f64,
) -> Result<SolutionFields, ModelError> {
    params.check_domain(grid, t)?;
    let l = grid.length();
    let n = grid.modes();
    let mut e = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut ut = Vec::with_capacity(n);
    for x in grid.points() {
        let (mut es, mut us, mut uts) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
        for m in -SOLITON_IMAGES..=SOLITON_IMAGES {
            let (ei, ui, uti) = params.eval_on_line(t, x + m as f64 * l);
            es += ei;
            us += ui;
            uts += uti;
        }
        e.push(es);
        u.push(Complex64::from(us));
        ut.push(Complex64::from(uts));
    }
    use crate::field::Repr::Physical;
    Ok(SolutionFields {
        e: Field::from_values(grid, Physical, e)?,
        u: Field::from_values(grid, Physical, u)?,
        uprime: Field::from_values(grid, Physical, ut)?,
    })
}
