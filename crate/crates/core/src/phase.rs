//! Scalar phase machinery: θ, stationary points, κ, χ, δ(z), η₀, φ(z₀) and
//! the velocity-frame partitions of the discrete spectrum.

use num_complex::Complex64 as C;
use std::f64::consts::PI;

use crate::scattering::{DiscreteEigenpair, EigenKind, ScatteringData};
use crate::specfun::{cauchy_pv_integral, log_gamma, QuadratureRule};
use crate::{Error, Result};

const I: C = C::new(0.0, 1.0);

/// Frame quantities at (x, t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameContext {
    pub x: f64,
    pub t: f64,
    /// Stationary point √(−x/12t); zero for x ≥ 0.
    pub z0: f64,
    pub tau: f64,
    pub velocity: f64,
}

impl FrameContext {
    pub fn new(x: f64, t: f64) -> Result<Self> {
        if !(t > 0.0) || !x.is_finite() {
            return Err(Error::InvalidArgument(format!("frame needs t > 0, got ({x}, {t})")));
        }
        let z0 = if x < 0.0 { (-x / (12.0 * t)).sqrt() } else { 0.0 };
        Ok(FrameContext { x, t, z0, tau: z0 * z0 * z0 * t, velocity: x / t })
    }

    /// Stationary point; refused for x > 0 where the stationary points are
    /// imaginary.
    pub fn stationary_point(&self) -> Result<f64> {
        if self.x > 0.0 {
            return Err(Error::RegionMismatch { x: self.x, t: self.t, expected: "x ≤ 0" });
        }
        Ok(self.z0)
    }
}

/// θ(z) = 4tz³ + xz.
pub fn theta(ctx: &FrameContext, z: C) -> C {
    4.0 * ctx.t * z * z * z + ctx.x * z
}

/// κ = −log(1 + |r|²)/2π.
pub fn kappa_of(r_at_z0: C) -> f64 {
    -(r_at_z0.norm_sqr()).ln_1p() / (2.0 * PI)
}

/// Side of the cut [−z0, z0] for boundary values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// f(ζ) = log((1+|r(ζ)|²)/(1+|r(z0)|²)), the χ integrand numerator.
struct LogRatio<'a> {
    data: &'a ScatteringData,
    base: f64,
}

impl<'a> LogRatio<'a> {
    fn new(data: &'a ScatteringData, z0: f64) -> Result<Self> {
        if z0 > data.grid.zmax * (1.0 + 1e-12) {
            return Err(Error::InsufficientCoverage(z0));
        }
        let base = data.r_at(z0)?.norm_sqr().ln_1p();
        Ok(LogRatio { data, base })
    }

    fn at(&self, zeta: f64) -> f64 {
        self.data.r_at(zeta).map(|r| r.norm_sqr().ln_1p()).unwrap_or(0.0) - self.base
    }
}

/// χ(z) = (1/2πi)∫_{−z0}^{z0} log((1+|r(ζ)|²)/(1+|r(z0)|²)) dζ/(ζ − z).
///
/// For z on the open interval a side must be given and the boundary value
/// χ±(z) = PV/(2πi) ± f(z)/2 is returned. At z = ±z0 the integrand is regular.
pub fn chi_of(data: &ScatteringData, z0: f64, z: C, side: Option<Side>) -> Result<C> {
    if z0 <= 0.0 {
        return Ok(C::new(0.0, 0.0));
    }
    let f = LogRatio::new(data, z0)?;
    let scale = 1.0 / (2.0 * PI * I);
    let on_line = z.im.abs() <= 1e-12 * z0.max(1.0);
    let endpoint = on_line && ((z.re - z0).abs() <= 1e-12 * z0 || (z.re + z0).abs() <= 1e-12 * z0);
    if endpoint {
        let p = z.re.signum() * z0;
        let q = QuadratureRule::composite(32, 8, -z0, z0);
        let v = q.integrate_real(|s| f.at(s) / (s - p));
        return Ok(scale * v);
    }
    if on_line && z.re.abs() < z0 {
        let Some(side) = side else { return Err(Error::BranchCut(z)) };
        let pv = cauchy_pv_integral(|s| C::new(f.at(s), 0.0), -z0, z0, z.re)?;
        let half = 0.5 * f.at(z.re);
        return Ok(scale * pv + if side == Side::Plus { half } else { -half });
    }
    let xs = z.re.clamp(-z0, z0);
    let dist = (z - xs).norm();
    if dist >= 0.25 * z0 {
        let q = QuadratureRule::gauss_legendre(128, -z0, z0);
        return Ok(scale * q.integrate(|s| C::new(f.at(s), 0.0) / (s - z)));
    }
    // near the interval: subtract f(x*) and grade panels toward x*
    let fx = f.at(xs);
    let logs = (z0 - z).ln() - (-z0 - z).ln();
    let regular = |s: f64| C::new(f.at(s) - fx, 0.0) / (s - z);
    let mut acc = C::new(0.0, 0.0);
    for (lo, hi) in [(-z0, xs), (xs, z0)] {
        if hi - lo <= 0.0 {
            continue;
        }
        let toward_hi = hi == xs;
        let mut d = hi - lo;
        let mut edges = vec![d];
        while d > dist.max(1e-14) {
            d *= 0.25;
            edges.push(d);
        }
        edges.push(0.0);
        for w in edges.windows(2) {
            let (d1, d0) = (w[0], w[1]);
            let (a, b) = if toward_hi { (hi - d1, hi - d0) } else { (lo + d0, lo + d1) };
            acc += QuadratureRule::gauss_legendre(24, a, b).integrate(regular);
        }
    }
    Ok(scale * (acc + fx * logs))
}

/// Blaschke factor (z − zero)/(z − pole).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlaschkeFactor {
    pub zero: C,
    pub pole: C,
}

impl BlaschkeFactor {
    pub fn eval(&self, z: C) -> C {
        (z - self.zero) / (z - self.pole)
    }
}

/// Factors contributed by a mode: (z − z̄)/(z − z), and for breathers also
/// (z + z)/(z + z̄).
pub fn mode_factors(p: &DiscreteEigenpair) -> Vec<BlaschkeFactor> {
    let z = p.z;
    let mut v = vec![BlaschkeFactor { zero: z.conj(), pole: z }];
    if p.kind == EigenKind::BreatherRep {
        v.push(BlaschkeFactor { zero: -z, pole: -z.conj() });
    }
    v
}

/// δ(z): Blaschke product × ((z−z0)/(z+z0))^{iκ} × e^{χ(z)}.
#[derive(Debug, Clone)]
pub struct DeltaFunction<'a> {
    pub kappa: f64,
    pub z0: f64,
    pub blaschke: Vec<BlaschkeFactor>,
    data: Option<&'a ScatteringData>,
}

impl<'a> DeltaFunction<'a> {
    /// δ for the frame with stationary point z0: every soliton plus the
    /// breathers in `b_set`.
    pub fn new(data: &'a ScatteringData, z0: f64, b_set: &[DiscreteEigenpair]) -> Result<Self> {
        let kappa = if z0 > 0.0 { kappa_of(data.r_at(z0)?) } else { 0.0 };
        let mut blaschke = Vec::new();
        for p in data.solitons.iter().chain(b_set.iter().filter(|p| p.kind == EigenKind::BreatherRep)) {
            blaschke.extend(mode_factors(p));
        }
        Ok(DeltaFunction { kappa, z0, blaschke, data: Some(data) })
    }

    /// Pure Blaschke product over `modes` (the Region III ψ).
    pub fn blaschke_only(modes: &[DiscreteEigenpair]) -> DeltaFunction<'static> {
        DeltaFunction { kappa: 0.0, z0: 0.0, blaschke: modes.iter().flat_map(mode_factors).collect(), data: None }
    }

    pub fn blaschke_at(&self, z: C) -> C {
        self.blaschke.iter().map(|f| f.eval(z)).product()
    }

    /// ((z − z0)/(z + z0))^{iκ} with −π < arg < π; on the cut the side
    /// selects arg(z − z0) = ±π.
    pub fn power_at(&self, z: C, side: Option<Side>) -> Result<C> {
        if self.z0 <= 0.0 || self.kappa == 0.0 {
            return Ok(C::new(1.0, 0.0));
        }
        let on_cut = z.im.abs() <= 1e-12 && z.re.abs() < self.z0;
        let a1 = if on_cut {
            match side {
                Some(Side::Plus) => PI,
                Some(Side::Minus) => -PI,
                None => return Err(Error::BranchCut(z)),
            }
        } else {
            (z.im).atan2(z.re - self.z0)
        };
        let a2 = (z.im).atan2(z.re + self.z0);
        let logmod = ((z - self.z0).norm() / (z + self.z0).norm()).ln();
        Ok((I * self.kappa * C::new(logmod, a1 - a2)).exp())
    }

    pub fn chi_at(&self, z: C, side: Option<Side>) -> Result<C> {
        match self.data {
            Some(d) if self.z0 > 0.0 => chi_of(d, self.z0, z, side),
            _ => Ok(C::new(0.0, 0.0)),
        }
    }

    /// δ(z); `side` is required on the cut (−z0, z0).
    pub fn eval(&self, z: C, side: Option<Side>) -> Result<C> {
        Ok(self.blaschke_at(z) * self.power_at(z, side)? * self.chi_at(z, side)?.exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    RegionI,
    RegionIII,
}

/// Modes faster than a velocity frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FramePartition {
    /// Breathers faster than the frame.
    pub b_set: Vec<DiscreteEigenpair>,
    /// Region III: breathers and solitons faster than the frame.
    pub s_set: Vec<DiscreteEigenpair>,
    pub frame_velocity: f64,
}

fn partition(modes: Vec<DiscreteEigenpair>, v: f64, variant: Variant) -> FramePartition {
    let b_set: Vec<_> = modes
        .iter()
        .filter(|p| p.kind == EigenKind::BreatherRep && p.velocity() > v)
        .copied()
        .collect();
    let s_set = match variant {
        Variant::RegionI => vec![],
        Variant::RegionIII => modes.iter().filter(|p| p.velocity() > v).copied().collect(),
    };
    FramePartition { b_set, s_set, frame_velocity: v }
}

/// Partition at an arbitrary frame velocity; ties with a mode are rejected.
pub fn partition_sets(data: &ScatteringData, frame_velocity: f64, variant: Variant) -> Result<FramePartition> {
    if data.modes().any(|p| (p.velocity() - frame_velocity).abs() < 1e-6) {
        return Err(Error::VelocityTie(frame_velocity));
    }
    Ok(partition(data.modes().copied().collect(), frame_velocity, variant))
}

/// Partition in the frame of `mode` itself (the mode is excluded).
pub fn partition_for_mode(data: &ScatteringData, mode: &DiscreteEigenpair, variant: Variant) -> FramePartition {
    let others: Vec<_> = data.modes().filter(|p| (p.z - mode.z).norm() > 1e-12).copied().collect();
    partition(others, mode.velocity(), variant)
}

/// η₀(±z0): Blaschke product over all solitons and `b_set` at ±z0.
pub fn eta0(data: &ScatteringData, z0: f64, b_set: &[DiscreteEigenpair], plus: bool) -> C {
    let z = C::new(if plus { z0 } else { -z0 }, 0.0);
    data.solitons
        .iter()
        .chain(b_set.iter().filter(|p| p.kind == EigenKind::BreatherRep))
        .flat_map(mode_factors)
        .map(|f| f.eval(z))
        .product()
}

fn wrap(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// arg Γ(iκ) − π/4 − arg r(z0) − (1/π)∫ f(ζ)/(ζ − z0) dζ
/// − 4[Σ arg(z0 − z_k) + Σ_B arg(z0 − z_j) + Σ_B arg(z0 + z̄_j)], in (−π, π].
///
/// The integral is 2π·Im χ(z0) up to sign; together with the argument sums
/// this is 2 Im χ(z0) + 2 arg η₀(z0).
pub fn phi_at_z0(data: &ScatteringData, z0: f64, b_set: &[DiscreteEigenpair]) -> Result<f64> {
    let r0 = data.r_at(z0)?;
    if r0.norm() == 0.0 {
        return Err(Error::ReflectionZero);
    }
    let kappa = kappa_of(r0);
    // arg Γ(iκ) = arg Γ(1 + iκ) − arg(iκ), finite as κ → 0⁻
    let g = log_gamma(C::new(1.0, kappa))?.im - C::new(0.0, kappa).arg();
    let chi = chi_of(data, z0, C::new(z0, 0.0), None)?;
    let integral = -2.0 * PI * chi.im;
    let zc = C::new(z0, 0.0);
    let mut sum = 0.0;
    for p in &data.solitons {
        sum += (zc - p.z).arg();
    }
    for p in b_set.iter().filter(|p| p.kind == EigenKind::BreatherRep) {
        sum += (zc - p.z).arg() + (zc + p.z.conj()).arg();
    }
    Ok(wrap(g - PI / 4.0 - r0.arg() - integral / PI - 4.0 * sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::ZGrid;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn sample_data() -> ScatteringData {
        let mut d = ScatteringData::reflectionless(vec![], vec![]);
        d.grid = ZGrid::symmetric(2.0, 401);
        // odd-symmetric r(−z) = −conj r(z)
        d.r = d
            .grid
            .nodes()
            .iter()
            .map(|&z| c(0.3 * z * (-z * z).exp(), 0.5 * (-2.0 * z * z).exp() + 0.2))
            .collect();
        d
    }

    #[test]
    fn theta_values_and_stationarity() {
        let ctx = FrameContext::new(-12.0, 1.0).unwrap();
        assert!((ctx.z0 - 1.0).abs() < 1e-15);
        assert!((12.0 * ctx.t * ctx.z0 * ctx.z0 + ctx.x).abs() < 1e-12);
        assert_eq!(theta(&ctx, c(0.0, 0.0)), c(0.0, 0.0));
        assert!((theta(&ctx, c(1.0, 0.0)) - c(-8.0, 0.0)).norm() < 1e-14);
        assert!((theta(&ctx, c(-1.0, 0.0)) - c(8.0, 0.0)).norm() < 1e-14);
        let h = 1e-6;
        for z0 in [1.0, -1.0] {
            let d = (theta(&ctx, c(z0 + h, 0.0)) - theta(&ctx, c(z0 - h, 0.0))) / (2.0 * h);
            assert!(d.norm() < 1e-8);
        }
        assert!(FrameContext::new(5.0, 1.0).unwrap().stationary_point().is_err());
    }

    #[test]
    fn re_i_theta_on_breather_hyperbola() {
        // Re iθ(ξ+iη) = (4η² − 12ξ² + 12z0²) η t for x/t = −12 z0²; on the
        // velocity hyperbola 4η² − 12ξ² = x/t it vanishes
        let (xi, eta, t) = (0.8f64, 0.9f64, 2.0);
        let v = 4.0 * eta * eta - 12.0 * xi * xi;
        let ctx = FrameContext::new(v * t, t).unwrap();
        let z0sq = -v / 12.0;
        let re = (I * theta(&ctx, c(xi, eta))).re;
        let formula = (4.0 * eta * eta - 12.0 * xi * xi + 12.0 * z0sq) * eta * t;
        assert!((re - formula).abs() < 1e-12 && re.abs() < 1e-12);
        let faster = FrameContext::new((v - 1.0) * t, t).unwrap();
        assert!((I * theta(&faster, c(xi, eta))).re > 0.0);
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa_of(c(0.0, 0.0)), 0.0);
        let r = ((2.0 * PI).exp() - 1.0).sqrt();
        assert!((kappa_of(c(r, 0.0)) + 1.0).abs() < 1e-12);
        assert!(kappa_of(c(0.1, 0.0)) > kappa_of(c(0.0, 0.2)));
    }

    #[test]
    fn chi_vanishes_for_constant_modulus() {
        let mut d = ScatteringData::reflectionless(vec![], vec![]);
        d.grid = ZGrid::symmetric(1.0, 41);
        d.r = vec![c(0.0, 0.7); 41];
        assert!(chi_of(&d, 0.5, c(0.1, 0.3), None).unwrap().norm() < 1e-14);
    }

    #[test]
    fn chi_conjugate_symmetry_and_decay() {
        let d = sample_data();
        for &z in &[c(0.2, 0.3), c(1.5, 0.01), c(-0.3, -2.0), c(0.6, 1e-4)] {
            let a = chi_of(&d, 0.7, z, None).unwrap();
            let b = chi_of(&d, 0.7, z.conj(), None).unwrap();
            assert!((a + b.conj()).norm() < 1e-9, "{z}: {a} {b}");
        }
        let cs: Vec<f64> = [1e2, 1e3, 1e4]
            .iter()
            .map(|&m| chi_of(&d, 0.7, c(0.0, m), None).unwrap().norm() * m)
            .collect();
        assert!((cs[0] - cs[2]).abs() < 1e-3 * cs[2]);
    }

    #[test]
    fn chi_near_interval_is_continuous() {
        let d = sample_data();
        let x = 0.31;
        let plus = chi_of(&d, 0.7, c(x, 0.0), Some(Side::Plus)).unwrap();
        let near = chi_of(&d, 0.7, c(x, 1e-7), None).unwrap();
        assert!((plus - near).norm() < 1e-6, "{plus} {near}");
        let minus = chi_of(&d, 0.7, c(x, 0.0), Some(Side::Minus)).unwrap();
        let near = chi_of(&d, 0.7, c(x, -1e-7), None).unwrap();
        assert!((minus - near).norm() < 1e-6);
    }

    #[test]
    fn delta_jump_and_symmetry() {
        let mut d = sample_data();
        d.solitons = vec![DiscreteEigenpair::soliton(0.8, c(0.0, 1.0))];
        let b = [DiscreteEigenpair::breather(0.3, 0.6, c(1.0, 1.0))];
        let z0 = 0.7;
        let df = DeltaFunction::new(&d, z0, &b).unwrap();
        for k in 1..64 {
            let x = -z0 + 2.0 * z0 * k as f64 / 64.0;
            let p = df.eval(c(x, 0.0), Some(Side::Plus)).unwrap();
            let m = df.eval(c(x, 0.0), Some(Side::Minus)).unwrap();
            let want = 1.0 + d.r_at(x).unwrap().norm_sqr();
            assert!((p / m - want).norm() < 1e-6, "x = {x}");
        }
        for &z in &[c(0.2, 0.3), c(-1.1, 0.4), c(2.0, -0.5)] {
            let v = df.eval(z, None).unwrap() * df.eval(z.conj(), None).unwrap().conj();
            assert!((v - 1.0).norm() < 1e-9);
        }
        assert!((df.eval(c(0.0, 1e4), None).unwrap() - 1.0).norm() < 1e-3);
        assert!(matches!(df.eval(c(0.1, 0.0), None), Err(Error::BranchCut(_))));
    }

    #[test]
    fn power_modulus_bound() {
        let d = sample_data();
        let df = DeltaFunction::new(&d, 0.7, &[]).unwrap();
        let bound = (PI * df.kappa.abs()).exp();
        for i in -10..=10 {
            for j in [-2.0, -0.1, 1e-9, 0.1, 2.0] {
                let z = c(0.15 * i as f64, j);
                assert!(df.power_at(z, None).unwrap().norm() <= bound * (1.0 + 1e-10));
            }
        }
    }

    #[test]
    fn partitions() {
        let one = c(0.0, 1.0);
        let d = ScatteringData::reflectionless(
            vec![DiscreteEigenpair::soliton(0.5, one), DiscreteEigenpair::soliton(1.0, one)],
            vec![DiscreteEigenpair::breather(1.0, 0.5, one), DiscreteEigenpair::breather(0.2, 1.0, one)],
        );
        let p = partition_for_mode(&d, &d.solitons[0], Variant::RegionIII);
        assert_eq!(p.s_set.len(), 2); // ζ = 1 soliton and the v = 3.52 breather
        let p = partition_sets(&d, 0.0, Variant::RegionI).unwrap();
        assert_eq!(p.b_set.len(), 1);
        assert!(partition_sets(&d, 1.0, Variant::RegionIII).is_err());
        let top = partition_sets(&d, 10.0, Variant::RegionIII).unwrap();
        assert!(top.s_set.is_empty() && top.b_set.is_empty());
        let mut last = usize::MAX;
        for k in 0..40 {
            let v = -15.0 + 0.61 * k as f64;
            let n = partition_sets(&d, v, Variant::RegionIII).unwrap().s_set.len();
            assert!(n <= last);
            last = n;
        }
    }

    #[test]
    fn eta0_properties() {
        let mut d = ScatteringData::reflectionless(vec![], vec![]);
        assert_eq!(eta0(&d, 0.5, &[], true), c(1.0, 0.0));
        d.solitons = vec![DiscreteEigenpair::soliton(0.8, c(0.0, 1.0))];
        let b = [DiscreteEigenpair::breather(0.3, 0.6, c(1.0, 1.0))];
        let p = eta0(&d, 0.5, &b, true);
        let m = eta0(&d, 0.5, &b, false);
        assert!((p.norm() - 1.0).abs() < 1e-12);
        // η₀(−z0) = conj η₀(z0)^{-1}·… : the product is odd under z ↦ −z
        assert!((p * m - 1.0).norm() < 1e-12);
    }

    #[test]
    fn phi_special_cases() {
        let mut d = ScatteringData::reflectionless(vec![], vec![]);
        d.grid = ZGrid::symmetric(2.0, 801);
        // constant modulus, odd-symmetric: f ≡ 0 up to interpolation error
        d.r = d.grid.nodes().iter().map(|&z| c(0.0, 0.6) * (c(0.0, -z)).exp()).collect();
        let z0 = 1.0;
        let r0 = d.r_at(z0).unwrap();
        let kappa = kappa_of(r0);
        let base = log_gamma(c(0.0, kappa)).unwrap().im - PI / 4.0 - r0.arg();
        let phi = phi_at_z0(&d, z0, &[]).unwrap();
        assert!(wrap(phi - base).abs() < 1e-8);
        d.solitons = vec![DiscreteEigenpair::soliton(1.0, c(0.0, 1.0))];
        let shifted = phi_at_z0(&d, z0, &[]).unwrap();
        assert!(wrap(shifted - phi - PI).abs() < 1e-10);
    }
}
