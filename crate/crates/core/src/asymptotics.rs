//! Long-time profiles: region classification and the leading-order formulas
//! in the oscillatory (I), self-similar (II) and soliton (III) regions.

use std::borrow::Cow;
use std::f64::consts::PI;

use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::Serialize;

use crate::painleve::{self_similar, PainleveSolution};
use crate::phase::{
    chi_of, eta0, kappa_of, partition_for_mode, partition_sets, phi_at_z0, DeltaFunction, FrameContext, Variant,
};
use crate::reflectionless::{breather_matrix, one_breather, one_soliton};
use crate::scattering::{evolve_scattering, DiscreteEigenpair, ScatteringData};
use crate::specfun::gamma;
use crate::{Error, Result};

const I: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionTag {
    OscillatoryI,
    SelfSimilarII,
    SolitonIII,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModeRef {
    Soliton(usize),
    Breather(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionClass {
    pub tag: RegionTag,
    pub frame: Option<ModeRef>,
}

/// Declared error order of each evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ErrorOrder {
    /// t^{-3/4}
    OscillatoryI,
    /// t^{2/(3p) − 1/2}
    SelfSimilarII { p: f64 },
    /// t^{-1}
    SolitonIII,
}

impl ErrorOrder {
    pub fn for_tag(tag: RegionTag) -> Self {
        match tag {
            RegionTag::OscillatoryI => ErrorOrder::OscillatoryI,
            RegionTag::SelfSimilarII => ErrorOrder::SelfSimilarII { p: 8.0 },
            RegionTag::SolitonIII => ErrorOrder::SolitonIII,
        }
    }

    pub fn exponent(&self) -> f64 {
        match *self {
            ErrorOrder::OscillatoryI => -0.75,
            ErrorOrder::SelfSimilarII { p } => 2.0 / (3.0 * p) - 0.5,
            ErrorOrder::SolitonIII => -1.0,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            ErrorOrder::OscillatoryI => "t^-3/4".into(),
            ErrorOrder::SelfSimilarII { p } => format!("t^(2/(3*{p})-1/2)"),
            ErrorOrder::SolitonIII => "t^-1".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionOptions {
    pub c2: f64,
    pub frame_tol: f64,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions { c2: 1.0, frame_tol: 0.05 }
    }
}

/// Region of (x, t); `frame` is the mode whose velocity is closest to x/t
/// when within `frame_tol`.
pub fn classify_region(x: f64, t: f64, data: &ScatteringData, c2: f64, frame_tol: f64) -> RegionClass {
    let tag = if x.abs() <= c2 * t.cbrt() {
        RegionTag::SelfSimilarII
    } else if x < 0.0 {
        RegionTag::OscillatoryI
    } else {
        RegionTag::SolitonIII
    };
    let v = x / t;
    let solitons = data.solitons.iter().enumerate().map(|(k, p)| (ModeRef::Soliton(k), p));
    let breathers = data.breathers.iter().enumerate().map(|(k, p)| (ModeRef::Breather(k), p));
    let frame = solitons
        .chain(breathers)
        .map(|(m, p)| (m, (p.velocity() - v).abs()))
        .filter(|&(_, d)| d <= frame_tol)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(m, _)| m);
    RegionClass { tag, frame }
}

/// Data with norming constants and r referred to t = 0.
fn at_origin(data: &ScatteringData) -> Cow<'_, ScatteringData> {
    if data.t == 0.0 {
        Cow::Borrowed(data)
    } else {
        Cow::Owned(evolve_scattering(data, 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParabolicConstants {
    pub beta12: C,
    pub beta21: C,
    pub delta_a0: C,
    pub delta_b0: C,
}

/// β₁₂, β₂₁ and δ_A⁰, δ_B⁰ of the parabolic-cylinder model at ±z0.
pub fn parabolic_constants(
    kappa: f64,
    r_z0: C,
    tau: f64,
    chi_pm: (C, C),
    eta0_pm: (C, C),
) -> Result<ParabolicConstants> {
    if r_z0.norm() == 0.0 {
        return Err(Error::ReflectionZero);
    }
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!("tau = {tau} must be positive")));
    }
    let s = (2.0 * PI).sqrt() * (-PI * kappa / 2.0).exp();
    // 1/Γ(w) = w/Γ(1 + w) stays finite as κ → 0
    let rgamma = |w: C| -> Result<C> { Ok(w / gamma(1.0 + w)?) };
    let beta12 = s * C::from_polar(1.0, PI / 4.0) * rgamma(C::new(0.0, -kappa))? / r_z0;
    let beta21 = -s * C::from_polar(1.0, -PI / 4.0) * rgamma(C::new(0.0, kappa))? / r_z0.conj();
    // (192τ)^{∓iκ/2} e^{±8iτ}
    let ph = -0.5 * kappa * (192.0 * tau).ln() + 8.0 * tau;
    let delta_b0 = C::from_polar(1.0, ph) * chi_pm.0.exp() * eta0_pm.0;
    let delta_a0 = C::from_polar(1.0, -ph) * chi_pm.1.exp() * eta0_pm.1;
    Ok(ParabolicConstants { beta12, beta21, delta_a0, delta_b0 })
}

/// κ, r(z0), χ(±z0), η₀(±z0) and the parabolic constants at (x, t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryData {
    pub z0: f64,
    pub kappa: f64,
    pub r_z0: C,
    pub phi: f64,
    pub constants: Option<ParabolicConstants>,
}

fn stationary_data(data: &ScatteringData, ctx: &FrameContext, b_set: &[DiscreteEigenpair]) -> Result<StationaryData> {
    let z0 = ctx.stationary_point()?;
    let r_z0 = data.r_at(z0)?;
    let kappa = kappa_of(r_z0);
    if r_z0.norm() == 0.0 || z0 == 0.0 {
        return Ok(StationaryData { z0, kappa, r_z0, phi: 0.0, constants: None });
    }
    let chi = (
        chi_of(data, z0, C::new(z0, 0.0), None)?,
        chi_of(data, z0, C::new(-z0, 0.0), None)?,
    );
    let eta = (eta0(data, z0, b_set, true), eta0(data, z0, b_set, false));
    let constants = parabolic_constants(kappa, r_z0, ctx.tau, chi, eta)?;
    let phi = phi_at_z0(data, z0, b_set)?;
    Ok(StationaryData { z0, kappa, r_z0, phi, constants: Some(constants) })
}

/// Radiation-only Region I value at (x, t); `data` taken at t = 0.
fn region1_generic_origin(x: f64, t: f64, data: &ScatteringData) -> Result<f64> {
    let ctx = FrameContext::new(x, t)?;
    let z0 = ctx.stationary_point()?;
    let r0 = data.r_at(z0)?;
    if r0.norm() == 0.0 || z0 == 0.0 {
        return Ok(0.0);
    }
    let kappa = kappa_of(r0);
    let part = partition_sets(data, ctx.velocity, Variant::RegionI)?;
    let phi = phi_at_z0(data, z0, &part.b_set)?;
    let tau = ctx.tau;
    Ok((kappa.abs() / (3.0 * t * z0)).sqrt() * (16.0 * tau - kappa * (192.0 * tau).ln() + phi).cos())
}

/// √(|κ|/(3tz0)) cos(16tz0³ − κ log(192tz0³) + φ(z0)).
pub fn region1_generic(x: f64, t: f64, data: &ScatteringData) -> Result<f64> {
    if x >= 0.0 {
        return Err(Error::RegionMismatch { x, t, expected: "Region I (x < 0)" });
    }
    region1_generic_origin(x, t, &at_origin(data))
}

fn mat_mul(a: &[[C; 2]; 2], b: &[[C; 2]; 2]) -> [[C; 2]; 2] {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat_inv(a: &[[C; 2]; 2]) -> [[C; 2]; 2] {
    let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

/// Leading radiation correction 2[E₂,₁]₁₂ conjugated by the model matrices
/// m(±z0) (identity when there is no breather in the frame).
fn radiation_correction(
    st: &StationaryData,
    t: f64,
    m_plus: &[[C; 2]; 2],
    m_minus: &[[C; 2]; 2],
) -> f64 {
    let Some(pc) = st.constants else { return 0.0 };
    let zero = C::new(0.0, 0.0);
    let (db2, da2) = (pc.delta_b0 * pc.delta_b0, pc.delta_a0 * pc.delta_a0);
    let m_b = [[zero, -I * db2 * pc.beta12], [I * pc.beta21 / db2, zero]];
    let m_a = [[zero, I * da2 * pc.beta12.conj()], [-I * pc.beta21.conj() / da2, zero]];
    let e_b = mat_mul(&mat_mul(m_plus, &m_b), &mat_inv(m_plus));
    let e_a = mat_mul(&mat_mul(m_minus, &m_a), &mat_inv(m_minus));
    let pre = 1.0 / (48.0 * st.z0 * t).sqrt();
    2.0 * (pre * (e_b[0][1] + e_a[0][1])).re
}

/// Region I radiation through the parabolic-cylinder correction with trivial
/// conjugation; agrees with [`region1_generic`] identically.
pub fn region1_correction_form(x: f64, t: f64, data: &ScatteringData) -> Result<f64> {
    let data = at_origin(data);
    let ctx = FrameContext::new(x, t)?;
    let part = partition_sets(&data, ctx.velocity, Variant::RegionI)?;
    let st = stationary_data(&data, &ctx, &part.b_set)?;
    let id = [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(1.0, 0.0)]];
    Ok(radiation_correction(&st, t, &id, &id))
}

fn breather(data: &ScatteringData, ell: usize) -> Result<DiscreteEigenpair> {
    data.breathers
        .get(ell)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("no breather with index {ell}")))
}

fn soliton(data: &ScatteringData, ell: usize) -> Result<DiscreteEigenpair> {
    data.solitons
        .get(ell)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("no soliton with index {ell}")))
}

/// Terms of the breather-frame Region I formula at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreatherFrameValue {
    pub dressed_c: C,
    pub breather: f64,
    pub correction: f64,
}

impl BreatherFrameValue {
    pub fn total(&self) -> f64 {
        self.breather + self.correction
    }
}

fn region1_breather_origin(ell: usize, x: f64, t: f64, data: &ScatteringData) -> Result<BreatherFrameValue> {
    let mode = breather(data, ell)?;
    if !(mode.velocity() < 0.0) {
        return Err(Error::FrameMismatch);
    }
    let ctx = FrameContext::new(x, t)?;
    let z0 = ctx.stationary_point()?;
    let part = partition_for_mode(data, &mode, Variant::RegionI);
    let delta = DeltaFunction::new(data, z0, &part.b_set)?;
    let d = delta.eval(mode.z, None)?;
    let dressed_c = mode.c / (d * d);
    let u_br = one_breather(mode.z.re, mode.z.im, dressed_c, x, t);
    let st = stationary_data(data, &ctx, &part.b_set)?;
    let correction = if st.constants.is_some() {
        let m_plus = breather_matrix(&mode, dressed_c, x, t, C::new(z0, 0.0))?;
        let m_minus = breather_matrix(&mode, dressed_c, x, t, C::new(-z0, 0.0))?;
        radiation_correction(&st, t, &m_plus, &m_minus)
    } else {
        0.0
    };
    Ok(BreatherFrameValue { dressed_c, breather: u_br, correction })
}

/// Dressed breather u^(br)(x, t; c δ(z_ℓ)^{-2}) plus the radiation correction,
/// for a breather moving left.
pub fn region1_breather_frame_at(ell: usize, x: f64, t: f64, data: &ScatteringData) -> Result<BreatherFrameValue> {
    region1_breather_origin(ell, x, t, &at_origin(data))
}

/// [`region1_breather_frame_at`] on a window of x values.
pub fn region1_breather_frame(ell: usize, xs: &[f64], t: f64, data: &ScatteringData) -> Result<Vec<BreatherFrameValue>> {
    let data = at_origin(data);
    xs.par_iter().map(|&x| region1_breather_origin(ell, x, t, &data)).collect()
}

/// (3t)^{-1/3} P(x/(3t)^{1/3}).
pub fn region2(x: f64, t: f64, sol: &PainleveSolution) -> Result<f64> {
    self_similar(sol, x, t)
}

/// Dressed norming constant c ψ(z_ℓ)^{-2}, ψ the Blaschke product over the
/// modes faster than mode ℓ.
pub fn region3_dressed_constant(data: &ScatteringData, mode: &DiscreteEigenpair) -> C {
    let part = partition_for_mode(data, mode, Variant::RegionIII);
    let psi = DeltaFunction::blaschke_only(&part.s_set).blaschke_at(mode.z);
    mode.c / (psi * psi)
}

/// ω_ℓ = log(|c̃_ℓ|/2ζ_ℓ) with the faster-mode shifts.
pub fn region3_soliton_omega(ell: usize, data: &ScatteringData) -> Result<f64> {
    let data = at_origin(data);
    let mode = soliton(&data, ell)?;
    Ok((region3_dressed_constant(&data, &mode).norm() / (2.0 * mode.z.im)).ln())
}

fn region3_soliton_origin(ell: usize, x: f64, t: f64, data: &ScatteringData) -> Result<f64> {
    let mode = soliton(data, ell)?;
    let c = region3_dressed_constant(data, &mode);
    one_soliton(mode.z.im, C::new(0.0, c.im), x, t)
}

/// Phase-shifted soliton 2ζ ε sech(−2ζ(x − 4ζ²t) + ω_ℓ).
pub fn region3_soliton_frame(ell: usize, x: f64, t: f64, data: &ScatteringData) -> Result<f64> {
    region3_soliton_origin(ell, x, t, &at_origin(data))
}

fn region3_breather_origin(ell: usize, x: f64, t: f64, data: &ScatteringData) -> Result<f64> {
    let mode = breather(data, ell)?;
    if !(mode.velocity() > 0.0) {
        return Err(Error::FrameMismatch);
    }
    let c = region3_dressed_constant(data, &mode);
    Ok(one_breather(mode.z.re, mode.z.im, c, x, t))
}

/// Dressed breather c ψ(z_ℓ)^{-2} for a right-moving breather.
pub fn region3_breather_frame(ell: usize, x: f64, t: f64, data: &ScatteringData) -> Result<f64> {
    region3_breather_origin(ell, x, t, &at_origin(data))
}

/// Profile with per-node region classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticProfile {
    pub x_grid: Vec<f64>,
    pub u_values: Vec<f64>,
    pub regions: Vec<RegionClass>,
    pub t: f64,
}

impl AsymptoticProfile {
    pub fn error_order(&self, i: usize) -> ErrorOrder {
        ErrorOrder::for_tag(self.regions[i].tag)
    }
}

fn full_value(
    x: f64,
    t: f64,
    data: &ScatteringData,
    painleve: Option<&PainleveSolution>,
    opts: RegionOptions,
) -> Result<(f64, RegionClass)> {
    let class = classify_region(x, t, data, opts.c2, opts.frame_tol);
    let mut u = 0.0;
    for k in 0..data.solitons.len() {
        u += region3_soliton_origin(k, x, t, data)?;
    }
    let framed = match class.frame {
        Some(ModeRef::Breather(j)) if class.tag == RegionTag::OscillatoryI && data.breathers[j].velocity() < 0.0 => {
            Some(j)
        }
        _ => None,
    };
    for (j, mode) in data.breathers.iter().enumerate() {
        if Some(j) == framed {
            continue;
        }
        u += if mode.velocity() > 0.0 || x >= 0.0 {
            region3_breather_origin(j, x, t, data).or_else(|_| {
                // left-moving breather evaluated right of the origin: only
                // the Blaschke dressing survives
                let part = partition_for_mode(data, mode, Variant::RegionI);
                let d = DeltaFunction::new(data, 0.0, &part.b_set)?.eval(mode.z, None)?;
                Ok::<f64, Error>(one_breather(mode.z.re, mode.z.im, mode.c / (d * d), x, t))
            })?
        } else {
            let ctx = FrameContext::new(x, t)?;
            let part = partition_for_mode(data, mode, Variant::RegionI);
            let d = DeltaFunction::new(data, ctx.z0, &part.b_set)?.eval(mode.z, None)?;
            one_breather(mode.z.re, mode.z.im, mode.c / (d * d), x, t)
        };
    }
    u += match (class.tag, framed) {
        (RegionTag::OscillatoryI, Some(j)) => region1_breather_origin(j, x, t, data)?.total(),
        (RegionTag::OscillatoryI, None) => match region1_generic_origin(x, t, data) {
            Err(Error::VelocityTie(_)) => 0.0,
            other => other?,
        },
        (RegionTag::SelfSimilarII, _) => match painleve {
            Some(p) => region2(x, t, p)?,
            None => 0.0,
        },
        (RegionTag::SolitonIII, _) => 0.0,
    };
    Ok((u, class))
}

/// Superposition of soliton and breather terms (each dressed for its region)
/// and the radiation branch of each node's region.
pub fn full_profile(
    xs: &[f64],
    t: f64,
    data: &ScatteringData,
    painleve: Option<&PainleveSolution>,
    opts: RegionOptions,
) -> Result<AsymptoticProfile> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must be positive")));
    }
    let data = at_origin(data);
    let values: Vec<(f64, RegionClass)> =
        xs.par_iter().map(|&x| full_value(x, t, &data, painleve, opts)).collect::<Result<_>>()?;
    let (u_values, regions) = values.into_iter().unzip();
    Ok(AsymptoticProfile { x_grid: xs.to_vec(), u_values, regions, t })
}
