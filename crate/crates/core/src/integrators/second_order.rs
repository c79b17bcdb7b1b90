use rustfft::num_complex::Complex64;

use super::first_order::elliptic_update;
use super::{apply, check_compatible, ensure_finite, IntegratorError, PropagatorSet};
use crate::field::{Field, Repr};
use crate::model::{Scheme, ZakharovState};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One step of the second-order trigonometric scheme.
///
/// Evaluated in this order, since the `u'` update needs `E^{n+1}`:
///
/// ```text
/// F^{n+1}  = e^{i tau Delta} F + i tau D1 (u F + u' I)
///            + tau D2 (2 u' F + i u (Delta F - u F - u' I) + I Delta(u + |E|^2))
/// u^{n+1}  = cos u + sin/|nabla| u' + tau/2 sin/|nabla| Delta |E|^2
/// I^{n+1}  = I - tau D1 F + tau D2 (u F + u' (E_0 + S))
/// E^{n+1}  = (1 - Delta)^{-1} (i F^{n+1} - (u^{n+1} - 1) I^{n+1})
/// u'^{n+1} = -|nabla| sin u + cos u' + tau/2 (Delta |E^{n+1}|^2 + cos Delta |E|^2)
/// S^{n+1}  = S + tau F^{n+1}
/// ```
///
/// `I` is updated by its running form, so no history is stored.
pub fn step_second_order(
    state: &ZakharovState,
    props: &PropagatorSet,
) -> Result<ZakharovState, IntegratorError> {
    check_compatible(state, props, Scheme::SecondOrder)?;
    let tau = props.tau();
    let half = 0.5 * tau;
    let step = state.n + 1;

    let u_p = state.u.to_physical();
    let v_p = state.uprime.to_physical();
    let f_p = state.f.to_physical();
    let i_p = state.i_f.to_physical();
    let e_p = state.e.to_physical();

    // (1)
    let transport = props.coupling(&[(&u_p, &f_p), (&v_p, &i_p)]);
    let intensity = props.intensity(&e_p);
    let correction = if props.is_coupled() {
        // i (Delta F - u F - u' I), formed on the collocation points
        let lap_f = apply(&state.f, &props.laplacian, 1.0).into_physical();
        let inner = (&lap_f - &transport.to_physical()).scale(I);
        let lap_source = apply(&(&state.u + &intensity), &props.laplacian, 1.0).into_physical();
        let two_v = v_p.scale(Complex64::from(2.0));
        props.coupling(&[(&two_v, &f_p), (&u_p, &inner), (&i_p, &lap_source)])
    } else {
        Field::zeros(props.grid(), Repr::Spectral)
    };
    let first = transport.scale(I);
    let second = correction;
    let f = &(&apply(&state.f, &props.schroedinger, 1.0) + &apply(&first, &props.d1, tau))
        + &apply(&second, &props.d2, tau);

    // (2)
    let lap_intensity = apply(&intensity, &props.laplacian, 1.0);
    let u = &(&apply(&state.u, &props.cos, 1.0) + &apply(&state.uprime, &props.sin_over_abs, 1.0))
        + &apply(&lap_intensity, &props.sin_over_abs, half);

    // (3)
    let accumulated = (&state.e0 + &state.s_f).into_physical();
    let source = props.coupling(&[(&u_p, &f_p), (&v_p, &accumulated)]);
    let i_f = &(&state.i_f - &apply(&state.f, &props.d1, tau)) + &apply(&source, &props.d2, tau);

    // (4)
    let e = elliptic_update(props, &f, &u, &i_f);

    // (5)
    let lap_intensity_next = apply(&props.intensity(&e.to_physical()), &props.laplacian, 1.0);
    let trapezoid = &lap_intensity_next + &apply(&lap_intensity, &props.cos, 1.0);
    let uprime = &(&apply(&state.uprime, &props.cos, 1.0) - &apply(&state.u, &props.abs_sin, 1.0))
        + &trapezoid.scale(Complex64::from(half));

    // (6)
    let s_f = &state.s_f + &f.scale(Complex64::from(tau));

    ensure_finite(
        &[("F", &f), ("u", &u), ("u'", &uprime), ("I_F", &i_f), ("E", &e)],
        step,
    )?;
    Ok(ZakharovState {
        scheme: state.scheme,
        tau,
        e,
        u,
        uprime,
        f,
        s_f,
        i_f,
        e0: state.e0.clone(),
        n: step,
    })
}
