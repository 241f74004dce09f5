//! Acceptance suites. Each criterion builds its own oracle (closed forms,
//! the spectral PDE integrator or an identity) and reports measured values
//! against fixed tolerances.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{
    parabolic_constants, region1_breather_frame, region1_generic, region3_soliton_frame, region3_soliton_omega,
};
use crate::evolve::{init_from_fn, run, RunParams};
use crate::painleve::{calibrate_alpha, self_similar, solve_painleve, OracleProfile};
use crate::phase::{chi_of, eta0, kappa_of, DeltaFunction, Side};
use crate::reflectionless::{one_breather, one_soliton, reconstruct_at, reconstruct_profile};
use crate::scattering::{
    find_discrete_spectrum, reflection, scatter, transition_coefficients, DiscreteEigenpair, PotentialSample,
    ScatteringData, SearchBox, ZGrid,
};
use crate::specfun::{airy_ai, airy_ai_prime};
use crate::{Complex64 as C, Error, Result};

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "closed-form equivalence"),
    (2, "direct-scattering round trip"),
    (3, "unitarity and symmetry"),
    (4, "PDE oracle fidelity"),
    (5, "soliton-resolution phase shifts"),
    (6, "Region I amplitude law"),
    (7, "Region II self-similar profile"),
    (8, "breather-frame Region I"),
    (9, "parabolic-constant identities"),
    (10, "delta scalar RHP"),
    (11, "Painleve solver"),
    (12, "discrete-data stability"),
];

/// Criteria of the fast `closed-forms` suite.
pub const CLOSED_FORMS: [u32; 4] = [1, 9, 10, 11];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = "==")]
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub label: String,
    pub measured: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
}

impl Measurement {
    fn new(label: impl Into<String>, measured: f64, relation: Relation, tolerance: f64) -> Self {
        let passed = match relation {
            Relation::AtMost => measured <= tolerance,
            Relation::Below => measured < tolerance,
            Relation::Equal => measured == tolerance,
        };
        Measurement { label: label.into(), measured, relation, tolerance, passed }
    }

    fn at_most(label: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(label, measured, Relation::AtMost, tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub measurements: Vec<Measurement>,
    pub error: Option<String>,
    #[serde(skip)]
    pub seconds: f64,
}

impl CriterionResult {
    /// One line: id, verdict, name, the worst measurement and runtime.
    pub fn summary_line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let detail = match (&self.error, self.measurements.iter().find(|m| !m.passed).or(self.measurements.first())) {
            (Some(e), _) => format!("error: {e}"),
            (None, Some(m)) => {
                let rel = match m.relation {
                    Relation::AtMost => "<=",
                    Relation::Below => "<",
                    Relation::Equal => "==",
                };
                format!("{} = {:.3e} ({rel} {:.3e}), {} checks", m.label, m.measured, m.tolerance, self.measurements.len())
            }
            (None, None) => "no checks".into(),
        };
        format!("[{verdict}] {:>2} {:<32} {detail} [{:.1}s]", self.id, self.name, self.seconds)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub results: Vec<CriterionResult>,
}

pub fn suite_ids(name: &str) -> Result<Vec<u32>> {
    match name {
        "all" => Ok(CRITERIA.iter().map(|c| c.0).collect()),
        "closed-forms" => Ok(CLOSED_FORMS.to_vec()),
        list => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|id| (1..=12).contains(id))
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown suite or criterion {s:?}")))
            })
            .collect(),
    }
}

pub fn run_suite(ids: &[u32], seed: u64) -> SuiteReport {
    let results: Vec<CriterionResult> = ids.iter().map(|&id| run_criterion(id, seed)).collect();
    SuiteReport { seed, passed: results.iter().all(|r| r.passed), results }
}

pub fn run_criterion(id: u32, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1).to_string();
    let res = match id {
        1 => closed_forms(),
        2 => round_trip(),
        3 => unitarity(seed),
        4 => pde_fidelity(),
        5 => soliton_shifts(),
        6 => region1_amplitude(),
        7 => region2_profile(),
        8 => breather_frame(),
        9 => parabolic_identities(),
        10 => delta_rhp(),
        11 => painleve_solver(),
        12 => stability(),
        _ => Err(Error::InvalidArgument(format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    match res {
        Ok(measurements) => {
            let passed = !measurements.is_empty() && measurements.iter().all(|m| m.passed);
            CriterionResult { id, name, passed, measurements, error: None, seconds }
        }
        Err(e) => CriterionResult { id, name, passed: false, measurements: vec![], error: Some(e.to_string()), seconds },
    }
}

fn sup<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

fn closed_forms() -> Result<Vec<Measurement>> {
    let xs = linspace(-10.0, 10.0, 401);
    let mut out = Vec::new();
    let solitons = [(1.0, C::new(0.0, 2.0)), (0.6, C::new(0.0, -0.35)), (1.3, C::new(0.0, 40.0))];
    let breathers = [(1.0, 1.0, C::new(1.0, 0.0)), (0.8, 0.3, C::new(0.5, 1.0)), (0.4, 0.9, C::new(-2.0, 0.7))];
    for t in [0.0, 1.0, 5.0] {
        let mut worst = 0.0f64;
        for &(zeta, c) in &solitons {
            let data = ScatteringData::reflectionless(vec![DiscreteEigenpair::soliton(zeta, c)], vec![]);
            for &x in &xs {
                worst = worst.max((reconstruct_at(&data, x, t)? - one_soliton(zeta, c, x, t)?).abs());
            }
        }
        out.push(Measurement::at_most(format!("soliton sup error t={t}"), worst, 1e-12));
        let mut worst = 0.0f64;
        for &(xi, eta, c) in &breathers {
            let data = ScatteringData::reflectionless(vec![], vec![DiscreteEigenpair::breather(xi, eta, c)]);
            for &x in &xs {
                worst = worst.max((reconstruct_at(&data, x, t)? - one_breather(xi, eta, c, x, t)).abs());
            }
        }
        out.push(Measurement::at_most(format!("breather sup error t={t}"), worst, 1e-12));
    }
    Ok(out)
}

fn round_trip() -> Result<Vec<Measurement>> {
    let xs = linspace(-16.0, 16.0, 1025);
    let grid = ZGrid::symmetric(4.0, 64);
    let cases = [
        ("soliton", DiscreteEigenpair::soliton(1.0, C::new(0.0, 2.0))),
        ("breather", DiscreteEigenpair::breather(1.0, 1.0, C::new(1.0, 0.0))),
    ];
    let mut out = Vec::new();
    for (label, pair) in cases {
        let data = if pair.is_soliton() {
            ScatteringData::reflectionless(vec![pair], vec![])
        } else {
            ScatteringData::reflectionless(vec![], vec![pair])
        };
        let u = reconstruct_profile(&data, &xs, 0.0)?;
        let back = scatter(&PotentialSample::new(&xs, u)?, &grid)?;
        let found: Vec<&DiscreteEigenpair> = back.modes().collect();
        out.push(Measurement::new(format!("{label} eigenvalue count"), found.len() as f64, Relation::Equal, 1.0));
        if let Some(p) = found.first() {
            out.push(Measurement::at_most(format!("{label} |z error|"), (p.z - pair.z).norm(), 1e-6));
            out.push(Measurement::at_most(format!("{label} ||c| error|"), (p.c.norm() - pair.c.norm()).abs(), 1e-4));
        }
        out.push(Measurement::at_most(format!("{label} max |r|"), back.max_abs_r(), 1e-5));
    }
    Ok(out)
}

/// Sum of three Gaussian bumps with random signs, centres and widths.
fn random_potential(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 {
    let bumps: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| (rng.gen_range(-1.2..1.2), rng.gen_range(-3.0..3.0), rng.gen_range(0.6..2.0)))
        .collect();
    move |x| bumps.iter().map(|&(a, c, w)| a * (-((x - c) / w).powi(2)).exp()).sum()
}

fn unitarity(seed: u64) -> Result<Vec<Measurement>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = ZGrid::symmetric(4.0, 512);
    let mut out = Vec::new();
    for k in 0..5 {
        let f = random_potential(&mut rng);
        let pot = PotentialSample::from_fn(-20.0, 20.0, 1601, f);
        let samples = transition_coefficients(&pot, &grid)?;
        let unit = sup(samples.iter().map(|s| (s.a.norm_sqr() + s.b.norm_sqr() - 1.0).abs()));
        let r = samples.iter().map(|s| reflection(s.a, s.b)).collect::<Result<Vec<C>>>()?;
        let n = grid.n;
        let sym = sup((0..n).map(|i| (r[n - 1 - i] + r[i].conj()).norm()));
        out.push(Measurement::at_most(format!("potential {k} unitarity"), unit, 1e-8));
        out.push(Measurement::at_most(format!("potential {k} r symmetry"), sym, 1e-8));
    }
    // A sech(x) carries floor(A + 1/2) eigenvalues i(A − k − 1/2)
    for amp in [0.3, 1.0, 1.7, 2.8] {
        let pot = PotentialSample::from_fn(-30.0, 30.0, 2401, |x| amp * sech(x));
        let spec = find_discrete_spectrum(&pot, &SearchBox::default_for(&pot))?;
        let expected = (amp + 0.5).floor();
        out.push(Measurement::new(format!("A={amp} count - winding"), spec.zeros.len() as f64 - spec.winding as f64, Relation::Equal, 0.0));
        out.push(Measurement::new(format!("A={amp} winding"), spec.winding as f64, Relation::Equal, expected));
    }
    Ok(out)
}

fn pde_fidelity() -> Result<Vec<Measurement>> {
    let mut out = Vec::new();
    let c = C::new(0.0, 2.0);
    let s = init_from_fn(|x| one_soliton(1.0, c, x, 0.0).unwrap_or(0.0), 64.0, 2048)?;
    let res = run(s, &[5.0, 10.0], RunParams { dt: 1e-3, frame_velocity: 4.0 })?;
    let cp = &res.checkpoints[0];
    let err = sup(res.x.iter().zip(&cp.u).map(|(&x, u)| (u - one_soliton(1.0, c, x + 4.0 * cp.t, cp.t).unwrap_or(0.0)).abs()));
    out.push(Measurement::at_most("soliton sup error t=5", err, 1e-6));
    let m0 = res.conserved[0].momentum;
    let drift = sup(res.conserved.iter().map(|r| ((r.momentum - m0) / m0).abs()));
    out.push(Measurement::at_most("momentum relative drift T=10", drift, 1e-8));

    let (xi, eta, cb) = (0.5, 0.5, C::new(1.0, 0.0));
    let v = 4.0 * eta * eta - 12.0 * xi * xi;
    let period = 2.0 * PI / (16.0 * xi * (xi * xi + eta * eta));
    let s = init_from_fn(|x| one_breather(xi, eta, cb, x, 0.0), 64.0, 2048)?;
    let u0 = s.physical();
    let res = run(s, &[period], RunParams { dt: 1e-3, frame_velocity: v })?;
    let err = sup(u0.iter().zip(&res.checkpoints[0].u).map(|(a, b)| (a - b).abs()));
    out.push(Measurement::at_most("breather one-period return", err, 1e-5));
    Ok(out)
}

fn soliton_shifts() -> Result<Vec<Measurement>> {
    // slow ζ = 1/2 soliton near the origin, fast ζ = 1 soliton behind it
    let data = ScatteringData::reflectionless(
        vec![
            DiscreteEigenpair::soliton(0.5, C::new(0.0, 1.0)),
            DiscreteEigenpair::soliton(1.0, C::new(0.0, 2.0 * (-16.0f64).exp())),
        ],
        vec![],
    );
    let (l, n) = (256.0, 4096);
    let xs: Vec<f64> = (0..n).map(|j| -0.5 * l + j as f64 * l / n as f64).collect();
    let u0 = reconstruct_profile(&data, &xs, 0.0)?;
    let state = crate::evolve::init_state(&PotentialSample::new(&xs, u0)?, l, n)?;
    let t = 20.0;
    let res = run(state, &[t], RunParams { dt: 5e-4, frame_velocity: 0.0 })?;
    let u = &res.checkpoints[0].u;
    let mut out = Vec::new();
    // at t → +∞ only the slower soliton is shifted, backwards by log 9 / 2ζ
    let shift_target = [2.0 * (1.0f64 / 3.0).ln(), 0.0];
    for k in 0..2 {
        let p = data.solitons[k];
        let zeta = p.z.im;
        let omega = region3_soliton_omega(k, &data)?;
        let bare = (p.c.norm() / (2.0 * zeta)).ln();
        out.push(Measurement::at_most(
            format!("soliton {k} omega shift error"),
            ((omega - bare) - shift_target[k]).abs(),
            1e-12,
        ));
        let centre = 4.0 * zeta * zeta * t + omega / (2.0 * zeta);
        let mut worst = 0.0f64;
        for (&x, &v) in res.x.iter().zip(u) {
            if (x - centre).abs() <= 5.0 {
                let pred = region3_soliton_frame(0, x, t, &data)? + region3_soliton_frame(1, x, t, &data)?;
                worst = worst.max((v - pred).abs());
            }
        }
        out.push(Measurement::at_most(format!("soliton {k} frame sup error"), worst, 1e-3));
    }
    Ok(out)
}

/// Least-squares fit of u on [x0 − w, x0 + w] to (A + A'ξ)cos Φ + (B + B'ξ)sin Φ,
/// ξ = x − x0; returns (envelope, phase) at x0 with u ≈ env·cos(Φ + phase).
fn carrier_fit(x: &[f64], u: &[f64], x0: f64, w: f64, carrier: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut ata = nalgebra::Matrix4::<f64>::zeros();
    let mut atb = nalgebra::Vector4::<f64>::zeros();
    for (&xv, &uv) in x.iter().zip(u) {
        let xi = xv - x0;
        if xi.abs() > w {
            continue;
        }
        let (s, c) = carrier(xv).sin_cos();
        let row = nalgebra::Vector4::new(c, xi * c, s, xi * s);
        ata += row * row.transpose();
        atb += row * uv;
    }
    let sol = ata.lu().solve(&atb).unwrap_or_else(nalgebra::Vector4::zeros);
    let (a, b) = (sol[0], sol[2]);
    (a.hypot(b), (-b).atan2(a))
}

fn region1_amplitude() -> Result<Vec<Measurement>> {
    let amp0 = 0.4;
    let pot = PotentialSample::from_fn(-40.0, 40.0, 1601, |x| amp0 * sech(x));
    let data = scatter(&pot, &ZGrid::symmetric(3.0, 601))?;
    let times = [50.0, 100.0, 200.0];
    let s = init_from_fn(|x| amp0 * sech(x), 4096.0, 32768)?;
    let res = run(s, &times, RunParams { dt: 0.05, frame_velocity: 0.0 })?;
    let z0 = (0.5f64 / 12.0).sqrt();
    let kappa = kappa_of(data.r_at(z0)?);
    let mut env = Vec::new();
    let mut phase = Vec::new();
    let mut out = Vec::new();
    for cp in &res.checkpoints {
        let t = cp.t;
        let x0 = -0.5 * t;
        let carrier = |x: f64| 16.0 * t * (-x / (12.0 * t)).max(0.0).sqrt().powi(3);
        let (e, ph) = carrier_fit(&res.x, &cp.u, x0, 0.2 * x0.abs(), carrier);
        let predicted = (kappa.abs() / (3.0 * t * z0)).sqrt();
        out.push(Measurement::at_most(format!("envelope rel error t={t}"), (e / predicted - 1.0).abs(), 0.3));
        // the fitted phase should track the full formula too
        let formula = region1_generic(x0, t, &data)?;
        let fitted = e * (carrier(x0) + ph).cos();
        log::debug!("t={t}: fitted {fitted:.5} formula {formula:.5}");
        env.push(e);
        phase.push(ph);
    }
    for k in 0..times.len() - 1 {
        let ratio = env[k + 1] / env[k];
        out.push(Measurement::at_most(
            format!("envelope ratio t={}->{} rel error", times[k], times[k + 1]),
            (ratio / 0.5f64.sqrt() - 1.0).abs(),
            0.1,
        ));
    }
    // phase offset −κ log(192tz0³) + φ: slope in log t is −κ
    let mut slopes = Vec::new();
    for k in 0..times.len() - 1 {
        let mut d = phase[k + 1] - phase[k];
        d -= 2.0 * PI * (d / (2.0 * PI)).round();
        slopes.push(d / (times[k + 1] / times[k]).ln());
    }
    let slope = slopes.iter().sum::<f64>() / slopes.len() as f64;
    out.push(Measurement::at_most("log-phase slope rel error", (slope / -kappa - 1.0).abs(), 0.15));
    Ok(out)
}

fn region2_profile() -> Result<Vec<Measurement>> {
    let amp0 = 0.2;
    let pot = PotentialSample::from_fn(-40.0, 40.0, 1601, |x| amp0 * sech(x));
    let data = scatter(&pot, &ZGrid::symmetric(3.0, 301))?;
    let r0 = data.r_at(0.0)?;
    let (t_cal, t_test) = (30.0, 120.0);
    let s = init_from_fn(|x| amp0 * sech(x), 2048.0, 8192)?;
    let res = run(s, &[t_cal, t_test], RunParams { dt: 0.02, frame_velocity: 0.0 })?;
    let oracle = |k: usize| OracleProfile { t: res.checkpoints[k].t, x: res.x.clone(), u: res.checkpoints[k].u.clone() };
    let cal = calibrate_alpha(C::new(0.0, r0.im), &oracle(0))?;
    let sol = solve_painleve(cal.alpha, -4.5, 10.0)?;
    let err = |k: usize| -> Result<f64> {
        let o = oracle(k);
        let w = 4.0 * (3.0 * o.t).cbrt();
        let mut worst = 0.0f64;
        for (&x, &u) in o.x.iter().zip(&o.u) {
            if x.abs() <= w {
                worst = worst.max((self_similar(&sol, x, o.t)? - u).abs());
            }
        }
        Ok(worst)
    };
    let (e_cal, e_test) = (err(0)?, err(1)?);
    Ok(vec![
        Measurement::at_most("sup error t=120", e_test, 4.0 / t_test.sqrt()),
        Measurement::new("error(t=120) - error(t=30)", e_test - e_cal, Relation::Below, 0.0),
    ])
}

fn breather_frame() -> Result<Vec<Measurement>> {
    // breather (1, 1/2) plus a radiation packet centred on its stationary point
    let eps = 0.25;
    let zs = (11.0f64 / 12.0).sqrt();
    let (xi, eta, c) = (1.0, 0.5, C::new(1.0, 0.0));
    let u0 = move |x: f64| one_breather(xi, eta, c, x, 0.0) + eps * sech(x / 3.0) * (2.0 * zs * x).cos();
    let data = scatter(&PotentialSample::from_fn(-90.0, 90.0, 7201, u0), &ZGrid::symmetric(2.5, 501))?;
    let j = data
        .breathers
        .iter()
        .position(|b| (b.z - C::new(xi, eta)).norm() < 0.2)
        .ok_or_else(|| Error::InvalidArgument("perturbed breather not found".into()))?;
    let v = data.breathers[j].velocity();
    // this frame balances the carrier and envelope rates of the breather
    let (l, n, frame) = (1024.0, 8192, -13.0 / 3.0);
    let t = 80.0;
    let res = run(init_from_fn(u0, l, n)?, &[t], RunParams { dt: 4e-4, frame_velocity: frame })?;
    let mut xs = Vec::new();
    let mut us = Vec::new();
    for (&xf, &u) in res.x.iter().zip(&res.checkpoints[0].u) {
        let d = xf - (v - frame) * t;
        let d = d - l * (d / l).round();
        if d.abs() <= 6.0 {
            xs.push(d + v * t);
            us.push(u);
        }
    }
    let vals = region1_breather_frame(j, &xs, t, &data)?;
    let dressed = sup(vals.iter().zip(&us).map(|(p, u)| (u - p.breather).abs()));
    let corrected = sup(vals.iter().zip(&us).map(|(p, u)| (u - p.total()).abs()));
    Ok(vec![
        Measurement::new("corrected error - dressed-only error", corrected - dressed, Relation::Below, 0.0),
        Measurement::at_most("corrected / dressed-only error", corrected / dressed, 0.5),
        Measurement::at_most("corrected sup error t=80", corrected, 0.5 / t.sqrt()),
    ])
}

/// Odd-symmetric r with |r(z0)|² = e^{−2πκ} − 1, plus one soliton and one
/// breather so that η₀ is nontrivial.
fn data_with_kappa(kappa: f64, z0: f64) -> ScatteringData {
    let g0 = ((-2.0 * PI * kappa).exp() - 1.0).sqrt();
    let mut d = ScatteringData::reflectionless(
        vec![DiscreteEigenpair::soliton(0.8, C::new(0.0, 1.0))],
        vec![DiscreteEigenpair::breather(0.3, 0.6, C::new(1.0, 1.0))],
    );
    d.grid = ZGrid::symmetric(3.0, 601);
    d.r = d
        .grid
        .nodes()
        .iter()
        .map(|&z| C::new(0.2 * z, 1.0) * (g0 * (-(z * z - z0 * z0)).exp() / C::new(0.2 * z0, 1.0).norm()))
        .collect();
    d
}

fn parabolic_identities() -> Result<Vec<Measurement>> {
    let mut out = Vec::new();
    let z0 = 0.5;
    for kappa in [-0.05, -0.3, -1.0] {
        let d = data_with_kappa(kappa, z0);
        let r0 = d.r_at(z0)?;
        let k_eff = kappa_of(r0);
        let chi = (chi_of(&d, z0, C::new(z0, 0.0), None)?, chi_of(&d, z0, C::new(-z0, 0.0), None)?);
        let eta = (eta0(&d, z0, &d.breathers, true), eta0(&d, z0, &d.breathers, false));
        let pc = parabolic_constants(k_eff, r0, 10.0 * z0.powi(3), chi, eta)?;
        out.push(Measurement::at_most(format!("kappa={kappa} |b12 b21 - kappa|"), (pc.beta12 * pc.beta21 - k_eff).norm(), 1e-10));
        out.push(Measurement::at_most(format!("kappa={kappa} ||dA0| - 1|"), (pc.delta_a0.norm() - 1.0).abs(), 1e-10));
        out.push(Measurement::at_most(format!("kappa={kappa} ||dB0| - 1|"), (pc.delta_b0.norm() - 1.0).abs(), 1e-10));
        out.push(Measurement::at_most(format!("kappa={kappa} realised kappa error"), (k_eff - kappa).abs(), 1e-10));
    }
    Ok(out)
}

fn delta_rhp() -> Result<Vec<Measurement>> {
    let d = data_with_kappa(-0.3, 0.7);
    let z0 = 0.7;
    let df = DeltaFunction::new(&d, z0, &d.breathers)?;
    let mut jump = 0.0f64;
    for k in 1..=64 {
        let x = -z0 + 2.0 * z0 * k as f64 / 65.0;
        let p = df.eval(C::new(x, 0.0), Some(Side::Plus))?;
        let m = df.eval(C::new(x, 0.0), Some(Side::Minus))?;
        jump = jump.max((p / m - (1.0 + d.r_at(x)?.norm_sqr())).norm());
    }
    let mut sym = 0.0f64;
    for z in [C::new(0.2, 0.3), C::new(-1.1, 0.4), C::new(2.0, -0.5), C::new(0.0, 3.0), C::new(0.69, 1e-3)] {
        sym = sym.max((df.eval(z, None)? * df.eval(z.conj(), None)?.conj() - 1.0).norm());
    }
    let mut far = 0.0f64;
    for k in 0..8 {
        let z = C::from_polar(1e4, PI * (k as f64 + 0.5) / 8.0);
        far = far.max((df.eval(z, None)? - 1.0).norm());
    }
    Ok(vec![
        Measurement::at_most("max |delta+/delta- - (1+|r|^2)| at 64 points", jump, 1e-6),
        Measurement::at_most("max |delta(z) conj delta(conj z) - 1|", sym, 1e-9),
        Measurement::at_most("max |delta - 1| at |z|=1e4", far, 1e-3),
    ])
}

fn painleve_solver() -> Result<Vec<Measurement>> {
    let mut out = Vec::new();
    for alpha in [0.3, -0.55, 0.8] {
        let s = solve_painleve(alpha, -30.0, 12.0)?;
        out.push(Measurement::at_most(format!("alpha={alpha} ODE residual"), s.residual_max, 1e-8));
        let airy = sup(s.s_grid.iter().zip(&s.p).filter(|(&x, _)| x >= 8.0).map(|(&x, &p)| (p - alpha * airy_ai(x)).abs()));
        let airy_d = sup(s.s_grid.iter().zip(&s.dp).filter(|(&x, _)| x >= 8.0).map(|(&x, &p)| (p - alpha * airy_ai_prime(x)).abs()));
        out.push(Measurement::at_most(format!("alpha={alpha} |P - alpha Ai| for s>=8"), airy.max(airy_d), 1e-9));
        let neg = solve_painleve(-alpha, -30.0, 12.0)?;
        let odd = sup(s.p.iter().zip(&neg.p).map(|(a, b)| (a + b).abs()));
        out.push(Measurement::at_most(format!("alpha={alpha} odd symmetry"), odd, 1e-10));
    }
    Ok(out)
}

fn stability() -> Result<Vec<Measurement>> {
    let eps = 1e-3;
    let data = ScatteringData::reflectionless(
        vec![DiscreteEigenpair::soliton(1.0, C::new(0.0, 2.0))],
        vec![DiscreteEigenpair::breather(0.6, 0.8, C::new(1.0, -0.5))],
    );
    let xs = linspace(-20.0, 20.0, 1281);
    let u = reconstruct_profile(&data, &xs, 0.0)?;
    let grid = ZGrid::symmetric(3.0, 64);
    let base = scatter(&PotentialSample::new(&xs, u.clone())?, &grid)?;
    let bump: Vec<f64> = xs.iter().map(|&x| (-x * x / 4.0).exp() * (1.0 + 0.5 * x.sin())).collect();
    let mut out = Vec::new();
    for sign in [1.0, -1.0] {
        let pert: Vec<f64> = u.iter().zip(&bump).map(|(a, b)| a + sign * eps * b).collect();
        let moved = scatter(&PotentialSample::new(&xs, pert)?, &grid)?;
        out.push(Measurement::new(
            format!("sign {sign:+} soliton count"),
            moved.solitons.len() as f64,
            Relation::Equal,
            base.solitons.len() as f64,
        ));
        out.push(Measurement::new(
            format!("sign {sign:+} breather count"),
            moved.breathers.len() as f64,
            Relation::Equal,
            base.breathers.len() as f64,
        ));
        if moved.solitons.len() != base.solitons.len() || moved.breathers.len() != base.breathers.len() {
            continue;
        }
        let dz = sup(base.modes().zip(moved.modes()).map(|(a, b)| (a.z - b.z).norm()));
        let dc = sup(base.modes().zip(moved.modes()).map(|(a, b)| (a.c - b.c).norm()));
        out.push(Measurement::at_most(format!("sign {sign:+} max eigenvalue shift"), dz, 50.0 * eps));
        out.push(Measurement::at_most(format!("sign {sign:+} max norming-constant shift"), dc, 50.0 * eps));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_selection() {
        assert_eq!(suite_ids("all").unwrap().len(), 12);
        assert_eq!(suite_ids("closed-forms").unwrap(), CLOSED_FORMS.to_vec());
        assert_eq!(suite_ids("3, 9").unwrap(), vec![3, 9]);
        assert!(suite_ids("13").is_err());
        assert!(suite_ids("fast").is_err());
    }

    #[test]
    fn measurement_relations() {
        assert!(Measurement::at_most("a", 1.0, 1.0).passed);
        assert!(!Measurement::new("b", 0.0, Relation::Below, 0.0).passed);
        assert!(Measurement::new("c", 2.0, Relation::Equal, 2.0).passed);
        assert!(!Measurement::at_most("d", f64::NAN, 1.0).passed);
    }

    #[test]
    fn carrier_fit_recovers_envelope_and_phase() {
        let x = linspace(-60.0, -20.0, 2001);
        let carrier = |x: f64| 0.3 * x + 0.001 * x * x;
        let u: Vec<f64> = x.iter().map(|&x| 0.05 * (1.0 + 0.002 * (x + 40.0)) * (carrier(x) + 0.7).cos()).collect();
        let (e, ph) = carrier_fit(&x, &u, -40.0, 10.0, carrier);
        assert!((e - 0.05).abs() < 1e-12);
        assert!((ph - 0.7).abs() < 1e-12);
    }
}
