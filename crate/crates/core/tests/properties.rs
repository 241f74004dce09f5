use mkdv::io::{data_from_json, data_to_json};
use mkdv::phase::DeltaFunction;
use mkdv::reflectionless::{one_soliton, reconstruct_at};
use mkdv::scattering::*;
use mkdv::Complex64 as C;
use proptest::prelude::*;

fn smooth_data(a: f64, b: f64) -> ScatteringData {
    let mut d = ScatteringData::reflectionless(vec![], vec![]);
    d.grid = ZGrid::symmetric(3.0, 301);
    d.r = d.grid.nodes().iter().map(|&z| C::new(a * z, b) * (-z * z).exp()).collect();
    d
}

fn mode() -> impl Strategy<Value = DiscreteEigenpair> {
    let soliton = (0.1f64..2.0, -3.0f64..3.0, any::<bool>())
        .prop_map(|(z, lc, s)| DiscreteEigenpair::soliton(z, C::new(0.0, if s { lc.exp() } else { -lc.exp() })));
    let breather = (0.1f64..2.0, 0.1f64..2.0, -2.0f64..2.0, -2.0f64..2.0)
        .prop_map(|(xi, eta, re, im)| DiscreteEigenpair::breather(xi, eta, C::new(re, im)));
    prop_oneof![soliton, breather]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_exact(
        modes in prop::collection::vec(mode(), 0..4),
        r in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4..40),
        t in -50.0f64..50.0,
        zmax in 0.5f64..5.0,
    ) {
        let (solitons, breathers): (Vec<_>, Vec<_>) = modes.into_iter().partition(|m| m.is_soliton());
        let mut d = ScatteringData::reflectionless(solitons, breathers);
        d.grid = ZGrid::symmetric(zmax, r.len());
        d.r = r.into_iter().map(|(a, b)| C::new(a, b)).collect();
        d.t = t;
        d.sort();
        let text = data_to_json(&d).unwrap();
        let back = data_from_json(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(data_to_json(&back).unwrap(), text);
    }

    #[test]
    fn evolution_is_unitary_and_composes(a in -1.0f64..1.0, b in -1.0f64..1.0, t1 in -5.0f64..5.0, t2 in -5.0f64..5.0) {
        let d = smooth_data(a, b);
        let e = evolve_scattering(&evolve_scattering(&d, t1), t2);
        let direct = evolve_scattering(&d, t2);
        let n = d.r.len();
        for k in 0..n {
            prop_assert!((e.r[k].norm() - d.r[k].norm()).abs() <= 1e-15);
            prop_assert!((e.r[k] - direct.r[k]).norm() <= 1e-12);
            prop_assert!((e.r[n - 1 - k] + e.r[k].conj()).norm() <= 1e-12);
        }
    }

    #[test]
    fn delta_reflection_symmetry(a in -1.0f64..1.0, b in -1.0f64..1.0, z0 in 0.2f64..1.5, re in -2.0f64..2.0, im in 0.1f64..2.0) {
        let d = smooth_data(a, b);
        let delta = DeltaFunction::new(&d, z0, &[]).unwrap();
        let z = C::new(re, im);
        let p = delta.eval(z, None).unwrap() * delta.eval(z.conj(), None).unwrap().conj();
        prop_assert!((p - 1.0).norm() < 1e-9, "{p}");
        prop_assert!(delta.kappa <= 0.0);
    }

    #[test]
    fn pole_solver_matches_one_soliton(zeta in 0.2f64..1.5, lc in -2.0f64..2.0, sign in any::<bool>(), x in -4.0f64..4.0, t in 0.0f64..0.5) {
        let c = C::new(0.0, if sign { lc.exp() } else { -lc.exp() });
        let d = ScatteringData::reflectionless(vec![DiscreteEigenpair::soliton(zeta, c)], vec![]);
        let exact = one_soliton(zeta, c, x, t).unwrap();
        prop_assert!((reconstruct_at(&d, x, t).unwrap() - exact).abs() <= 1e-10 * (1.0 + exact.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transition_coefficients_are_unitary(amp in -1.5f64..1.5, x0 in -3.0f64..3.0, w in 0.5f64..2.0) {
        let p = PotentialSample::from_fn(-20.0, 20.0, 801, |x| amp * (-((x - x0) / w).powi(2)).exp());
        for s in transition_coefficients(&p, &ZGrid::symmetric(3.0, 24)).unwrap() {
            prop_assert!((s.a.norm_sqr() + s.b.norm_sqr() - 1.0).abs() < 1e-8);
        }
    }
}
