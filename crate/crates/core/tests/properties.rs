//! Property tests over random fields, symbols, records and configurations.

use std::sync::Arc;

use proptest::prelude::*;
use zakharov_core::config::{parse_config, Config};
use zakharov_core::harness::{
    convergence_csv, fit_order, parse_convergence, parse_run, run_csv, ConvergenceRecord, ConvergenceRow,
    RunRecord, RunRow,
};
use zakharov_core::integrators::{step_first_order, step_second_order};
use zakharov_core::model::init_from;
use zakharov_core::multiplier::Multiplier;
use zakharov_core::{Complex64, Field, Repr, Scheme, SolutionFields, TorusGrid};

fn grid_strategy() -> impl Strategy<Value = Arc<TorusGrid>> {
    (3u32..=7, 0.5f64..100.0).prop_map(|(p, l)| TorusGrid::new(l, 1 << p).unwrap())
}

fn field_on(grid: Arc<TorusGrid>) -> impl Strategy<Value = Field> {
    let n = grid.modes();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(move |v| {
        let values = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        Field::from_values(&grid, Repr::Physical, values).unwrap()
    })
}

fn field_pair() -> impl Strategy<Value = (Field, Field)> {
    grid_strategy().prop_flat_map(|g| (field_on(g.clone()), field_on(g)))
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_round_trip(f in grid_strategy().prop_flat_map(field_on)) {
        let back = f.to_spectral().to_physical();
        prop_assert!((&back - &f).max_abs() <= 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn parseval(f in grid_strategy().prop_flat_map(field_on)) {
        let l = f.grid().length();
        let spectral: f64 = l * f.to_spectral().values().iter().map(|c| c.norm_sqr()).sum::<f64>();
        let physical: f64 = f.grid().dx() * f.values().iter().map(|c| c.norm_sqr()).sum::<f64>();
        prop_assert!(close(spectral, physical, 1e-12));
        prop_assert!(close(f.sobolev_norm(0.0).powi(2), physical, 1e-12));
    }

    #[test]
    fn transform_is_linear((f, g) in field_pair(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let (a, b) = (Complex64::new(a, 0.5 * b), Complex64::from(b));
        let lhs = (f.scale(a) + g.scale(b)).into_spectral();
        let rhs = f.to_spectral().scale(a) + g.to_spectral().scale(b);
        prop_assert!((&lhs - &rhs).max_abs() <= 1e-13);
    }

    #[test]
    fn sobolev_norm_is_a_norm((f, g) in field_pair(), s in -2.0f64..3.0, a in -4.0f64..4.0) {
        let (nf, ng) = (f.sobolev_norm(s), g.sobolev_norm(s));
        let sum = (&f + &g).sobolev_norm(s);
        prop_assert!(sum <= (nf + ng) * (1.0 + 1e-12));
        let scaled = f.scale(Complex64::from(a)).sobolev_norm(s);
        prop_assert!(close(scaled, a.abs() * nf, 1e-12) || scaled < 1e-300);
    }

    #[test]
    fn grid_shift_preserves_norms(f in grid_strategy().prop_flat_map(field_on), m in -20isize..20) {
        let shifted = f.shift(m);
        prop_assert!(close(shifted.sobolev_norm(1.0), f.sobolev_norm(1.0), 1e-12));
        prop_assert!((&shifted.shift(-m) - &f).max_abs() <= 1e-12);
    }

    #[test]
    fn propagator_bounds(tau in 1e-8f64..2.0, kappa in -600.0f64..600.0) {
        let unit = [Multiplier::Schroedinger { tau }, Multiplier::D1 { tau }, Multiplier::Cos { tau },
                    Multiplier::Sinc { tau }];
        for m in unit {
            prop_assert!(m.eval(kappa).norm() <= 1.0 + 1e-12, "{m:?} at {kappa}");
        }
        let (phase, sin_over) = (unit[0].eval(kappa), Multiplier::SinOverAbs { tau }.eval(kappa));
        prop_assert!((phase.norm() - 1.0).abs() <= 1e-14);
        prop_assert!(sin_over.norm() <= tau * (1.0 + 1e-12));
        let d1 = Multiplier::D1 { tau }.eval(kappa);
        let z = Complex64::new(0.0, -tau * kappa * kappa);
        if z.norm() > 1e-3 {
            let direct = (Complex64::from(1.0) - z.exp()) / z;
            prop_assert!((d1 - direct).norm() <= 1e-12 / z.norm().min(1.0));
        }
    }

    #[test]
    fn fitted_slope_of_a_power_law(p in 0.5f64..4.0, c in 1e-6f64..1e3, tau0 in 1e-3f64..1.0, n in 2usize..8) {
        let rows: Vec<(f64, f64)> = (0..n)
            .map(|i| { let tau = tau0 / 2f64.powi(i as i32); (tau, c * tau.powf(p)) })
            .filter(|&(_, e)| e > 1e-13)
            .collect();
        prop_assume!(rows.len() >= 2);
        let fit = fit_order(&rows).unwrap();
        prop_assert!((fit.slope - p).abs() < 1e-9);
        prop_assert!((fit.r_squared - 1.0).abs() < 1e-9);
    }

    #[test]
    fn steps_commute_with_grid_shifts(seed in prop::collection::vec(-0.5f64..0.5, 24), m in -16isize..16,
                                      second in any::<bool>()) {
        let g = TorusGrid::periodic_2pi(32).unwrap();
        let smooth = |c: &[f64], real: bool| {
            let mut f = Field::zeros(&g, Repr::Spectral);
            for (i, k) in (-2i64..=1).enumerate() {
                let im = if real { 0.0 } else { c[2 * i + 1] };
                f.values_mut()[g.slot(k).unwrap()] = Complex64::new(c[2 * i], im);
            }
            if real { f.real_part() } else { f }
        };
        let data = SolutionFields::new(smooth(&seed[0..8], false), smooth(&seed[8..16], true),
                                       smooth(&seed[16..24], true)).unwrap();
        let scheme = if second { Scheme::SecondOrder } else { Scheme::FirstOrder };
        let tau = 0.01;
        let props = zakharov_core::PropagatorSet::new(&g, tau).unwrap();
        let step = |s| match scheme {
            Scheme::FirstOrder => step_first_order(&s, &props).unwrap(),
            Scheme::SecondOrder => step_second_order(&s, &props).unwrap(),
        };
        let a = step(step(init_from(&data, scheme, tau).unwrap()));
        let b = step(step(init_from(&data.shift(m), scheme, tau).unwrap()));
        for (x, y) in [(a.e(), b.e()), (a.u(), b.u()), (a.uprime(), b.uprime())] {
            prop_assert!((&x.to_physical().shift(m) - &y.to_physical()).max_abs() <= 1e-11);
        }
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e300f64..1e300,
        -1.0f64..1.0,
        Just(0.0),
        Just(f64::MIN_POSITIVE),
        Just(5e-324),
    ]
}

fn nonnegative() -> impl Strategy<Value = f64> {
    finite().prop_map(f64::abs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn convergence_record_round_trip(
        errors in prop::collection::vec((nonnegative(), nonnegative(), nonnegative(), nonnegative()), 0..12),
        s in finite(), second in any::<bool>(), start in 1e-6f64..10.0,
    ) {
        let rows = errors.iter().enumerate().map(|(i, &(e, u, v, c))| ConvergenceRow {
            tau: start / 2f64.powi(i as i32), err_e: e, err_u: u, err_uprime: v, err_composite: c,
        }).collect();
        let scheme = if second { Scheme::SecondOrder } else { Scheme::FirstOrder };
        let record = ConvergenceRecord {
            scheme,
            problem: "example1".into(),
            s_index: s,
            params: vec![("scheme".into(), scheme.to_string()), ("problem".into(), "example1".into()),
                         ("s".into(), format!("{s:?}")), ("K".into(), "64".into())],
            rows,
        };
        let text = convergence_csv(&record);
        prop_assert_eq!(parse_convergence(&text).unwrap(), record);
    }

    #[test]
    fn run_record_round_trip(values in prop::collection::vec(prop::array::uniform6(finite()), 0..12),
                             t0 in 0.0f64..1.0) {
        let rows = values.iter().enumerate().map(|(i, v)| RunRow {
            t: t0 + i as f64 * 0.125, l2_e: v[0], hamiltonian: v[1], dev_l2: v[2], dev_h: v[3],
            mean_u: v[4], mean_uprime: v[5],
        }).collect();
        let record = RunRecord { params: vec![("CFL".into(), "5.0".into())], rows };
        let text = run_csv(&record);
        prop_assert_eq!(&parse_run(&text).unwrap(), &record);
        prop_assert_eq!(run_csv(&parse_run(&text).unwrap()), text);
    }

    #[test]
    fn config_pairs_round_trip(k in 3u32..12, l in 0.1f64..1e3, tau in prop::option::of(1e-6f64..1.0),
                               t in 0.0f64..100.0, b in 0.1f64..2.0, c in -0.9f64..0.9,
                               dealias in any::<bool>(), coupled in any::<bool>(),
                               scheme in prop::sample::select(vec!["first", "second", "both", "rk4"])) {
        let step = match tau { Some(x) => format!("tau={x:?}"), None => "CFL=2.5".into() };
        let text = format!("scheme={scheme}\nK={}\nL={l:?}\n{step}\nT={t:?}\nB={b:?}\nC={c:?}\n\
                            dealias={dealias}\ncoupled={coupled}\ntimes=0,{t:?}\n", 1u64 << k);
        let mut config = Config::default();
        config.apply(&parse_config(&text).unwrap()).unwrap();
        let rendered: String = config.pairs().iter().map(|(k, v)| format!("{k}={v}\n")).collect();
        let mut back = Config::default();
        back.apply(&parse_config(&rendered).unwrap()).unwrap();
        prop_assert_eq!(back, config);
    }
}
