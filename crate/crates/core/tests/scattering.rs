use mkdv::reflectionless::{one_breather, reconstruct_profile};
use mkdv::scattering::*;
use mkdv::Complex64 as C;
use std::time::Instant;

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

fn grid() -> ZGrid {
    ZGrid::symmetric(4.0, 64)
}

#[test]
fn zero_potential_is_trivial() {
    let p = PotentialSample::from_fn(-10.0, 10.0, 201, |_| 0.0);
    let j = jost_solve(&p, C::new(0.5, 0.0)).unwrap();
    for i in 0..j.x.len() {
        let m = j.m_minus(i).unwrap();
        assert_eq!(m[0][0], C::new(1.0, 0.0));
        assert_eq!(m[1][0], C::new(0.0, 0.0));
    }
    let d = scatter(&p, &grid()).unwrap();
    assert!(d.solitons.is_empty() && d.breathers.is_empty() && d.max_abs_r() == 0.0);
}

#[test]
fn one_soliton_potential() {
    let t0 = Instant::now();
    let p = PotentialSample::from_fn(-16.0, 16.0, 1025, |x| 2.0 * sech(2.0 * x));
    let samples = transition_coefficients(&p, &grid()).unwrap();
    let maxb = samples.iter().map(|s| s.b.norm()).fold(0.0, f64::max);
    assert!(maxb < 1e-6, "max |b| = {maxb}");
    for s in &samples {
        assert!((s.a.norm_sqr() + s.b.norm_sqr() - 1.0).abs() < 1e-8);
    }
    let spec = find_discrete_spectrum(&p, &SearchBox::default_for(&p)).unwrap();
    eprintln!("spectrum {:?} in {:?}", spec.zeros, t0.elapsed());
    assert_eq!(spec.winding, 1);
    assert_eq!(spec.zeros.len(), 1);
    assert!((spec.zeros[0].z - C::new(0.0, 1.0)).norm() < 1e-7);
    let pairs = norming_constants(&p, &spec.zeros).unwrap();
    eprintln!("c = {} in {:?}", pairs[0].c, t0.elapsed());
    assert!((pairs[0].c.norm() - 2.0).abs() < 1e-5);
    assert!(pairs[0].c.im > 0.0);
    assert!(pairs[0].c.re.abs() <= 1e-8 * pairs[0].c.norm());
}

#[test]
fn translated_soliton_scales_c() {
    let p = PotentialSample::from_fn(-16.0, 16.0, 1025, |x| 2.0 * sech(2.0 * (x - 1.0)));
    let d = scatter(&p, &grid()).unwrap();
    assert_eq!(d.solitons.len(), 1);
    assert!((d.solitons[0].c.norm() - 2.0 * 2f64.exp()).abs() < 1e-4 * 2.0 * 2f64.exp());
}

#[test]
fn two_soliton_sech() {
    let t0 = Instant::now();
    let p = PotentialSample::from_fn(-24.0, 24.0, 1537, |x| 2.0 * sech(x));
    let spec = find_discrete_spectrum(&p, &SearchBox::default_for(&p)).unwrap();
    eprintln!("{:?} {:?}", spec.zeros, t0.elapsed());
    assert_eq!(spec.winding, 2);
    assert!((spec.zeros[0].z - C::new(0.0, 0.5)).norm() < 1e-6);
    assert!((spec.zeros[1].z - C::new(0.0, 1.5)).norm() < 1e-6);
}

#[test]
fn small_potential_has_no_spectrum() {
    let p = PotentialSample::from_fn(-20.0, 20.0, 801, |x| 0.1 * sech(x));
    let b = SearchBox { re_min: -3.0, re_max: 3.0, im_min: 1e-3, im_max: 3.0 };
    let spec = find_discrete_spectrum(&p, &b).unwrap();
    assert_eq!(spec.winding, 0);
}

#[test]
fn reflection_symmetry() {
    let p = PotentialSample::from_fn(-20.0, 21.0, 821, |x| sech(x) + 0.2 * sech(x - 1.0));
    let g = grid();
    let s = transition_coefficients(&p, &g).unwrap();
    let r: Vec<C> = s.iter().map(|s| reflection(s.a, s.b).unwrap()).collect();
    for k in 0..g.n {
        let d = r[g.n - 1 - k] + r[k].conj();
        assert!(d.norm() < 1e-8, "{d}");
    }
}

#[test]
fn breather_round_trip() {
    let t0 = Instant::now();
    let data = ScatteringData::reflectionless(vec![], vec![DiscreteEigenpair::breather(1.0, 1.0, C::new(1.0, 0.0))]);
    let xs: Vec<f64> = (0..1025).map(|i| -16.0 + i as f64 / 32.0).collect();
    let u = reconstruct_profile(&data, &xs, 0.0).unwrap();
    for (x, v) in xs.iter().zip(&u).step_by(50) {
        assert!((v - one_breather(1.0, 1.0, C::new(1.0, 0.0), *x, 0.0)).abs() < 1e-12);
    }
    let p = PotentialSample::new(&xs, u).unwrap();
    let d = scatter(&p, &grid()).unwrap();
    eprintln!("{:?} {:?}", d.breathers, t0.elapsed());
    assert_eq!(d.breathers.len(), 1);
    assert!(d.solitons.is_empty());
    assert!((d.breathers[0].z - C::new(1.0, 1.0)).norm() < 1e-6);
    assert!((d.breathers[0].c - C::new(1.0, 0.0)).norm() < 1e-4);
    assert!(d.max_abs_r() < 1e-5, "{}", d.max_abs_r());
}
