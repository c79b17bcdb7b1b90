use rustfft::num_complex::Complex64;

use super::{apply, check_compatible, ensure_finite, minus_one, IntegratorError, PropagatorSet};
use crate::field::Field;
use crate::model::{Scheme, ZakharovState};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One step of the first-order trigonometric scheme.
///
/// ```text
/// F^{n+1}  = e^{i tau Delta} F^n + i tau D1 (u^n F^n + u'^n S^n)
/// u^{n+1}  = cos u^n + sin/|nabla| u'^n - (1 - cos(tau|nabla|)) |E^n|^2
/// u'^{n+1} = -|nabla| sin u^n + cos u'^n + tau sinc Delta |E^n|^2
/// S^{n+1}  = S^n + tau F^{n+1}
/// E^{n+1}  = (1 - Delta)^{-1} (i F^{n+1} - (u^{n+1} - 1) S^{n+1})
/// ```
///
/// The wave source term is the collapsed multiplier
/// `tau |nabla|^{-1} (1 - cos)/(tau |nabla|) Delta = -(1 - cos(tau |nabla|))`.
pub fn step_first_order(
    state: &ZakharovState,
    props: &PropagatorSet,
) -> Result<ZakharovState, IntegratorError> {
    check_compatible(state, props, Scheme::FirstOrder)?;
    let tau = props.tau();
    let step = state.n + 1;

    let u_p = state.u.to_physical();
    let v_p = state.uprime.to_physical();
    let f_p = state.f.to_physical();
    let s_p = state.s_f.to_physical();
    let e_p = state.e.to_physical();

    let nonlinear = props.coupling(&[(&u_p, &f_p), (&v_p, &s_p)]);
    let mut forcing = apply(&nonlinear, &props.d1, tau);
    for v in forcing.values_mut() {
        *v *= I;
    }
    let f = &apply(&state.f, &props.schroedinger, 1.0) + &forcing;

    let intensity = props.intensity(&e_p);
    let u = &(&apply(&state.u, &props.cos, 1.0) + &apply(&state.uprime, &props.sin_over_abs, 1.0))
        + &apply(&intensity, &props.wave_source, 1.0);

    let lap_intensity = apply(&intensity, &props.laplacian, 1.0);
    let uprime = &(&apply(&state.uprime, &props.cos, 1.0) - &apply(&state.u, &props.abs_sin, 1.0))
        + &apply(&lap_intensity, &props.sinc, tau);

    let s_f = &state.s_f + &f.scale(Complex64::from(tau));

    let e = elliptic_update(props, &f, &u, &s_f);

    ensure_finite(&[("F", &f), ("u", &u), ("u'", &uprime), ("E", &e)], step)?;
    Ok(ZakharovState {
        scheme: state.scheme,
        tau,
        e,
        u,
        uprime,
        f,
        s_f,
        i_f: state.i_f.clone(),
        e0: state.e0.clone(),
        n: step,
    })
}

/// `E = (1 - Delta)^{-1} (i F - (u - 1) S)` from spectral `F`, `u`, `S`.
pub(super) fn elliptic_update(props: &PropagatorSet, f: &Field, u: &Field, integral: &Field) -> Field {
    let rhs = if props.is_coupled() {
        let product = minus_one(&u.to_physical()).product(&integral.to_physical());
        &f.scale(I) - &props.spectral(product)
    } else {
        &f.scale(I) + integral
    };
    apply(&rhs, &props.inverse_helmholtz, 1.0)
}
