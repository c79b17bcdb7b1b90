//! Complex fields on the torus with a physical/spectral dual representation.
//!
//! Spectral coefficients follow the series convention
//! `f(x_j) = sum_k fhat(k) exp(i kappa_k x_j)` with `x_j = -L/2 + j L/K`,
//! so a constant function has `fhat(0)` equal to that constant and the
//! collocation integral `dx * sum |f_j|^2` equals `L * sum |fhat(k)|^2`.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use thiserror::Error;

use crate::grid::TorusGrid;
use crate::multiplier::{Multiplier, MultiplierTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("expected {expected} values for the grid, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("fields live on different grids")]
    GridMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repr {
    Physical,
    Spectral,
}

#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<TorusGrid>,
    repr: Repr,
    values: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: &Arc<TorusGrid>, repr: Repr) -> Self {
        Self {
            grid: Arc::clone(grid),
            repr,
            values: vec![Complex64::new(0.0, 0.0); grid.modes()],
        }
    }

    pub fn from_values(
        grid: &Arc<TorusGrid>,
        repr: Repr,
        values: Vec<Complex64>,
    ) -> Result<Self, FieldError> {
        if values.len() != grid.modes() {
            return Err(FieldError::LengthMismatch {
                expected: grid.modes(),
                got: values.len(),
            });
        }
        Ok(Self {
            grid: Arc::clone(grid),
            repr,
            values,
        })
    }

    /// Samples `f` at the collocation points.
    pub fn from_fn(grid: &Arc<TorusGrid>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().map(f).collect();
        Self {
            grid: Arc::clone(grid),
            repr: Repr::Physical,
            values,
        }
    }

    pub fn from_real_fn(grid: &Arc<TorusGrid>, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::from(f(x)))
    }

    /// A single Fourier mode `amplitude * exp(i kappa_k x)` in spectral form.
    pub fn mode(grid: &Arc<TorusGrid>, k: i64, amplitude: Complex64) -> Self {
        let mut f = Self::zeros(grid, Repr::Spectral);
        let slot = grid
            .slot(k)
            .unwrap_or_else(|| panic!("mode {k} is not represented on {grid:?}"));
        f.values[slot] = amplitude;
        f
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn same_grid(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid.same_as(&other.grid)
    }

    pub fn check_grid(&self, other: &Field) -> Result<(), FieldError> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(FieldError::GridMismatch)
        }
    }

    pub fn into_spectral(mut self) -> Self {
        if self.repr == Repr::Spectral {
            return self;
        }
        self.grid.forward_plan().process(&mut self.values);
        let scale = 1.0 / self.grid.modes() as f64;
        // x_0 = -L/2 contributes exp(i pi k) = (-1)^k to every coefficient
        for (j, v) in self.values.iter_mut().enumerate() {
            *v *= if j % 2 == 0 { scale } else { -scale };
        }
        self.repr = Repr::Spectral;
        self
    }

    pub fn into_physical(mut self) -> Self {
        if self.repr == Repr::Physical {
            return self;
        }
        for (j, v) in self.values.iter_mut().enumerate() {
            if j % 2 == 1 {
                *v = -*v;
            }
        }
        self.grid.inverse_plan().process(&mut self.values);
        self.repr = Repr::Physical;
        self
    }

    pub fn to_spectral(&self) -> Self {
        self.clone().into_spectral()
    }

    pub fn to_physical(&self) -> Self {
        self.clone().into_physical()
    }

    pub fn into_repr(self, repr: Repr) -> Self {
        match repr {
            Repr::Physical => self.into_physical(),
            Repr::Spectral => self.into_spectral(),
        }
    }

    /// Spectral coefficient of the signed mode `k`.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let slot = self.grid.slot(k).expect("mode out of range");
        match self.repr {
            Repr::Spectral => self.values[slot],
            Repr::Physical => self.to_spectral().values[slot],
        }
    }

    /// Spatial mean, i.e. the zero-mode coefficient.
    pub fn mean(&self) -> Complex64 {
        match self.repr {
            Repr::Spectral => self.values[0],
            Repr::Physical => self.values.iter().sum::<Complex64>() / self.values.len() as f64,
        }
    }

    /// Applies `m` mode by mode; the result is spectral.
    pub fn apply_multiplier(&self, m: &Multiplier) -> Self {
        let mut out = self.to_spectral();
        for (v, &k) in out.values.iter_mut().zip(self.grid.wavenumbers()) {
            *v *= m.eval(k);
        }
        out
    }

    /// Applies a pre-sampled multiplier; the result is spectral.
    pub fn apply_table(&self, table: &MultiplierTable) -> Self {
        let mut out = self.to_spectral();
        debug_assert_eq!(out.values.len(), table.values().len());
        for (v, m) in out.values.iter_mut().zip(table.values()) {
            *v *= m;
        }
        out
    }

    /// Collocation product of two fields, returned in physical form.
    ///
    /// No dealiasing is applied; see [`Field::dealias`].
    pub fn product(&self, other: &Field) -> Self {
        assert!(self.same_grid(other), "product of fields on different grids");
        let a = self.to_physical();
        let b = other.to_physical();
        let values = a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect();
        Self {
            grid: Arc::clone(&self.grid),
            repr: Repr::Physical,
            values,
        }
    }

    /// `|f|^2` on the collocation points.
    pub fn abs_sq(&self) -> Self {
        let mut out = self.to_physical();
        for v in &mut out.values {
            *v = Complex64::from(v.norm_sqr());
        }
        out
    }

    /// Zeroes every mode with `|k| > K/3` (the two-thirds rule); result is spectral.
    pub fn dealias(&self) -> Self {
        let mut out = self.to_spectral();
        let cutoff = (self.grid.modes() / 3) as i64;
        for (j, v) in out.values.iter_mut().enumerate() {
            if self.grid.signed_index(j).abs() > cutoff {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// `||f||_s = || <nabla>^s f ||_{L^2}` with the zero mode entering unweighted.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let spec = self.to_spectral();
        let sum: f64 = spec
            .values
            .iter()
            .zip(self.grid.wavenumbers())
            .map(|(c, &k)| {
                let w = if k == 0.0 { 1.0 } else { k.abs().powf(2.0 * s) };
                w * c.norm_sqr()
            })
            .sum();
        (self.grid.length() * sum).sqrt()
    }

    /// `sqrt(dx * sum |f_j|^2)` on the collocation points.
    pub fn l2_norm_collocation(&self) -> f64 {
        let phys = self.to_physical();
        let sum: f64 = phys.values.iter().map(|v| v.norm_sqr()).sum();
        (self.grid.dx() * sum).sqrt()
    }

    /// Largest `|Im f_j|` on the collocation points.
    pub fn max_imag(&self) -> f64 {
        self.to_physical()
            .values
            .iter()
            .fold(0.0, |m, v| m.max(v.im.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Drops the imaginary part on the collocation points.
    pub fn real_part(&self) -> Self {
        let mut out = self.to_physical();
        for v in &mut out.values {
            v.im = 0.0;
        }
        out
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= alpha;
        }
        out
    }

    /// Circular shift of the physical samples by `m` grid points, `f(x - m dx)`.
    pub fn shift(&self, m: isize) -> Self {
        let phys = self.to_physical();
        let n = phys.values.len() as isize;
        let values = (0..n)
            .map(|j| phys.values[(j - m).rem_euclid(n) as usize])
            .collect();
        Self {
            grid: Arc::clone(&self.grid),
            repr: Repr::Physical,
            values,
        }
    }

    fn zip_with(&self, other: &Field, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert!(self.same_grid(other), "arithmetic on fields from different grids");
        let rhs;
        let rhs_values = if other.repr == self.repr {
            &other.values
        } else {
            rhs = other.clone().into_repr(self.repr);
            &rhs.values
        };
        let values = self.values.iter().zip(rhs_values).map(|(&a, &b)| op(a, b)).collect();
        Self {
            grid: Arc::clone(&self.grid),
            repr: self.repr,
            values,
        }
    }
}

impl Add for &Field {
    type Output = Field;
    fn add(self, rhs: &Field) -> Field {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Field {
    type Output = Field;
    fn sub(self, rhs: &Field) -> Field {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for Field {
    type Output = Field;
    fn add(self, rhs: Field) -> Field {
        &self + &rhs
    }
}

impl Sub for Field {
    type Output = Field;
    fn sub(self, rhs: Field) -> Field {
        &self - &rhs
    }
}

impl Mul<Complex64> for &Field {
    type Output = Field;
    fn mul(self, rhs: Complex64) -> Field {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Field {
    type Output = Field;
    fn mul(self, rhs: f64) -> Field {
        self.scale(Complex64::from(rhs))
    }
}

impl Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.scale(Complex64::from(-1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_field(grid: &Arc<TorusGrid>, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.modes())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Field::from_values(grid, Repr::Physical, values).unwrap()
    }

    #[test]
    fn constant_has_only_zero_mode() {
        let g = TorusGrid::new(3.0, 16).unwrap();
        let f = Field::from_real_fn(&g, |_| 1.0).into_spectral();
        assert!((f.values()[0] - 1.0).norm() < 1e-15);
        assert!(f.values()[1..].iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn single_mode_lands_in_its_slot() {
        let g = TorusGrid::new(5.0, 32).unwrap();
        let l = g.length();
        let f = Field::from_fn(&g, |x| Complex64::from_polar(1.0, 2.0 * PI * x / l)).into_spectral();
        for (j, c) in f.values().iter().enumerate() {
            let expected = if j == 1 { 1.0 } else { 0.0 };
            assert!((c - expected).norm() < 1e-14, "slot {j}: {c}");
        }
        let neg = Field::from_fn(&g, |x| Complex64::from_polar(2.0, -6.0 * PI * x / l));
        assert!((neg.coefficient(-3) - 2.0).norm() < 1e-14);
    }

    #[test]
    fn round_trip_and_parseval() {
        let g = TorusGrid::new(7.0, 128).unwrap();
        let f = random_field(&g, 7);
        let back = f.to_spectral().into_physical();
        let scale = f.max_abs();
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).norm() <= 1e-12 * scale);
        }
        let coll = f.l2_norm_collocation();
        let spec = f.sobolev_norm(0.0);
        assert!((coll - spec).abs() <= 1e-12 * coll);
    }

    #[test]
    fn sobolev_norms_of_modes() {
        let g = TorusGrid::periodic_2pi(32).unwrap();
        let root = (2.0 * PI).sqrt();
        let one = Field::from_real_fn(&g, |_| 1.0);
        let e1 = Field::from_fn(&g, |x| Complex64::from_polar(1.0, x));
        let e2 = Field::from_fn(&g, |x| Complex64::from_polar(1.0, 2.0 * x));
        for s in [-1.0, 0.0, 0.5, 2.0, 3.0] {
            assert!((one.sobolev_norm(s) - root).abs() < 1e-12);
            assert!((e1.sobolev_norm(s) - root).abs() < 1e-12);
        }
        // |kappa|^{2s} = 16 for kappa = 2, s = 2
        assert!((e2.sobolev_norm(2.0) - 4.0 * root).abs() < 1e-12);
        assert!((e2.sobolev_norm(2.0) - 10.026513098524001).abs() < 1e-11);
    }

    #[test]
    fn products_of_resolved_modes() {
        let g = TorusGrid::periodic_2pi(8).unwrap();
        let e1 = Field::from_fn(&g, |x| Complex64::from_polar(1.0, x));
        let sq = e1.product(&e1).into_spectral();
        for (j, c) in sq.values().iter().enumerate() {
            let expected = if j == 2 { 1.0 } else { 0.0 };
            assert!((c - expected).norm() < 1e-14);
        }
        let one = Field::from_real_fn(&g, |_| 1.0);
        let p = e1.product(&one);
        for (a, b) in p.values().iter().zip(e1.values()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn dealias_drops_upper_third() {
        let g = TorusGrid::periodic_2pi(32).unwrap();
        let f = &Field::mode(&g, 10, Complex64::from(1.0)) + &Field::mode(&g, 11, Complex64::from(1.0));
        let d = f.dealias();
        assert_eq!(d.coefficient(10), Complex64::from(1.0));
        assert_eq!(d.coefficient(11), Complex64::from(0.0));
    }

    #[test]
    fn shift_is_translation() {
        let g = TorusGrid::periodic_2pi(16).unwrap();
        let f = Field::from_real_fn(&g, |x| x.sin());
        let s = f.shift(3);
        for (j, x) in g.points().enumerate() {
            assert!((s.values()[j].re - (x - 3.0 * g.dx()).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn from_values_checks_length() {
        let g = TorusGrid::periodic_2pi(8).unwrap();
        assert_eq!(
            Field::from_values(&g, Repr::Physical, vec![Complex64::from(0.0); 7]).unwrap_err(),
            FieldError::LengthMismatch { expected: 8, got: 7 }
        );
    }
}
