//! Fourier multiplier symbols.
//!
//! Every symbol is a function of the real wavenumber `kappa` and is
//! finite at `kappa = 0`. Symbols that are 0/0 at the origin switch to a
//! four-term Taylor expansion once the relevant argument (`tau*|kappa|` for
//! the wave propagators, `tau*kappa^2` for the Schroedinger filters) drops
//! below [`SERIES_THRESHOLD`].

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use crate::grid::TorusGrid;

/// Below this argument magnitude the singular symbols are evaluated by series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A diagonal operator in Fourier space, written in terms of the
/// operators `Delta` (symbol `-kappa^2`) and `|nabla|` (symbol `|kappa|`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    /// `Delta`: `-kappa^2`.
    Laplacian,
    /// `|nabla|`: `|kappa|`.
    AbsGradient,
    /// `|nabla|^{-1}` with the zero mode set to 0.
    InverseAbsGradient,
    /// `<nabla>^s`: `|kappa|^s` off zero, 1 on the zero mode, for any real `s`.
    Bracket { s: f64 },
    /// `e^{i tau Delta}`: `exp(-i tau kappa^2)`.
    Schroedinger { tau: f64 },
    /// `1 - Delta`: `1 + kappa^2`.
    Helmholtz,
    /// `(1 - Delta)^{-1}`: `1/(1 + kappa^2)`.
    InverseHelmholtz,
    /// `cos(tau |nabla|)`.
    Cos { tau: f64 },
    /// `sin(tau |nabla|)/|nabla|`, equal to `tau` at the zero mode.
    SinOverAbs { tau: f64 },
    /// `|nabla| sin(tau |nabla|)`, zero at the zero mode.
    AbsTimesSin { tau: f64 },
    /// `(1 - cos(tau |nabla|))/(tau |nabla|)`, zero at the zero mode.
    OneMinusCosOverArg { tau: f64 },
    /// `sin(tau |nabla|)/(tau |nabla|)`, one at the zero mode.
    Sinc { tau: f64 },
    /// `D1(tau Delta) = (1 - e^{i tau Delta})/(i tau Delta)`, `-1` at the zero mode.
    D1 { tau: f64 },
    /// `D2(tau Delta) = Delta^{-1}(1 + D1(tau Delta))`, `-i tau/2` at the zero mode.
    D2 { tau: f64 },
    /// `tau |nabla|^{-1} (1 - cos(tau|nabla|))/(tau|nabla|) Delta`, collapsed to
    /// `-(1 - cos(tau kappa))`; exactly zero at the zero mode.
    WaveSource { tau: f64 },
}

impl Multiplier {
    pub fn eval(&self, kappa: f64) -> Complex64 {
        let a = kappa.abs();
        let k2 = kappa * kappa;
        match *self {
            Multiplier::Laplacian => Complex64::from(-k2),
            Multiplier::AbsGradient => Complex64::from(a),
            Multiplier::InverseAbsGradient => {
                Complex64::from(if a == 0.0 { 0.0 } else { 1.0 / a })
            }
            Multiplier::Bracket { s } => Complex64::from(if a == 0.0 { 1.0 } else { a.powf(s) }),
            Multiplier::Schroedinger { tau } => Complex64::from_polar(1.0, -tau * k2),
            Multiplier::Helmholtz => Complex64::from(1.0 + k2),
            Multiplier::InverseHelmholtz => Complex64::from(1.0 / (1.0 + k2)),
            Multiplier::Cos { tau } => Complex64::from((tau * a).cos()),
            Multiplier::SinOverAbs { tau } => Complex64::from(tau * sinc(tau * a)),
            Multiplier::AbsTimesSin { tau } => Complex64::from(a * (tau * a).sin()),
            Multiplier::OneMinusCosOverArg { tau } => Complex64::from(one_minus_cos_over(tau * a)),
            Multiplier::Sinc { tau } => Complex64::from(sinc(tau * a)),
            Multiplier::D1 { tau } => d1(Complex64::new(0.0, -tau * k2)),
            Multiplier::D2 { tau } => d2(tau, kappa),
            Multiplier::WaveSource { tau } => {
                let x = tau * a;
                Complex64::from(-(x * one_minus_cos_over(x)))
            }
        }
    }

    /// Value the symbol takes on the zero mode.
    pub fn zero_mode(&self) -> Complex64 {
        self.eval(0.0)
    }
}

/// `sin(x)/x`.
fn sinc(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        x.sin() / x
    }
}

/// `(1 - cos x)/x`.
fn one_minus_cos_over(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        x / 2.0 * (1.0 - x2 / 12.0 * (1.0 - x2 / 30.0 * (1.0 - x2 / 56.0)))
    } else {
        2.0 * (0.5 * x).sin().powi(2) / x
    }
}

/// `(1 - e^z)/z` with `z = i tau Delta`, purely imaginary.
fn d1(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_THRESHOLD {
        -(1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0)
    } else {
        let theta = z.im;
        let one_minus_exp = Complex64::new(2.0 * (0.5 * theta).sin().powi(2), -theta.sin());
        one_minus_exp / z
    }
}

/// `(1 + D1)/(-kappa^2)`.
fn d2(tau: f64, kappa: f64) -> Complex64 {
    let k2 = kappa * kappa;
    let z = Complex64::new(0.0, -tau * k2);
    if z.norm() < SERIES_THRESHOLD {
        -I * tau * (0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0)
    } else {
        (1.0 + d1(z)) / (-k2)
    }
}

/// A multiplier sampled on every mode of a grid.
#[derive(Debug, Clone)]
pub struct MultiplierTable {
    symbol: Multiplier,
    values: Vec<Complex64>,
}

impl MultiplierTable {
    pub fn new(grid: &Arc<TorusGrid>, symbol: Multiplier) -> Self {
        let values = grid.wavenumbers().iter().map(|&k| symbol.eval(k)).collect();
        Self { symbol, values }
    }

    pub fn symbol(&self) -> Multiplier {
        self.symbol
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn zero_mode_limits() {
        let tau = 0.37;
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(Multiplier::Schroedinger { tau }.zero_mode(), c(1.0, 0.0));
        assert_eq!(Multiplier::SinOverAbs { tau }.zero_mode(), c(tau, 0.0));
        assert_eq!(Multiplier::D1 { tau }.zero_mode(), c(-1.0, 0.0));
        assert_eq!(Multiplier::D2 { tau }.zero_mode(), c(0.0, -tau / 2.0));
        assert_eq!(Multiplier::OneMinusCosOverArg { tau }.zero_mode(), c(0.0, 0.0));
        assert_eq!(Multiplier::AbsTimesSin { tau }.zero_mode(), c(0.0, 0.0));
        assert_eq!(Multiplier::Sinc { tau }.zero_mode(), c(1.0, 0.0));
        assert_eq!(Multiplier::Cos { tau }.zero_mode(), c(1.0, 0.0));
        assert_eq!(Multiplier::InverseHelmholtz.zero_mode(), c(1.0, 0.0));
        assert_eq!(Multiplier::InverseAbsGradient.zero_mode(), c(0.0, 0.0));
        assert_eq!(Multiplier::Bracket { s: -1.5 }.zero_mode(), c(1.0, 0.0));
        assert_eq!(Multiplier::WaveSource { tau }.zero_mode(), c(0.0, 0.0));
    }

    #[test]
    fn series_and_closed_form_agree_across_threshold() {
        // just below and just above the switch, in both argument scalings
        let tau = 1.0;
        for &x in &[0.9 * SERIES_THRESHOLD, 1.1 * SERIES_THRESHOLD] {
            let kappa = x / tau;
            let sym = [
                (Multiplier::SinOverAbs { tau }, Complex64::from((tau * kappa).sin() / kappa)),
                (Multiplier::Sinc { tau }, Complex64::from((tau * kappa).sin() / (tau * kappa))),
            ];
            for (m, exact) in sym {
                assert!(close(m.eval(kappa), exact, 1e-15), "{m:?}");
            }
            let half = 2.0 * (x / 2.0).sin().powi(2) / x;
            assert!((Multiplier::OneMinusCosOverArg { tau }.eval(kappa).re - half).abs() < 1e-15);
        }
        for &z in &[0.9 * SERIES_THRESHOLD, 1.1 * SERIES_THRESHOLD] {
            let kappa = (z / tau).sqrt();
            // D1(z) = -(e^z - 1)/z; expm1-style reference via the half-angle form
            let zc = Complex64::new(0.0, -z);
            let expm1 = Complex64::new(-2.0 * (z / 2.0).sin().powi(2), -z.sin());
            let d1_ref = -expm1 / zc;
            assert!(close(Multiplier::D1 { tau }.eval(kappa), d1_ref, 1e-15));
            let d2_ref = (1.0 + d1_ref) / (-(kappa * kappa));
            assert!(close(Multiplier::D2 { tau }.eval(kappa), d2_ref, 1e-10 * tau));
        }
    }

    #[test]
    fn free_flow_phase() {
        let tau = 0.1;
        let kappa = 3.0;
        let v = Multiplier::Schroedinger { tau }.eval(kappa);
        assert!(close(v, Complex64::from_polar(1.0, -0.9), 1e-15));
    }

    #[test]
    fn wave_source_matches_factored_form() {
        let tau = 0.3;
        for &kappa in &[0.5f64, 1.0, 7.0, -4.0] {
            let a = kappa.abs();
            let factored = tau / a * ((1.0 - (tau * a).cos()) / (tau * a)) * (-a * a);
            let v = Multiplier::WaveSource { tau }.eval(kappa);
            assert!((v.re - factored).abs() < 1e-14);
        }
    }
}
