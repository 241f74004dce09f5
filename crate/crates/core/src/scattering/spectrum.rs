use num_complex::Complex64 as C;
use rayon::prelude::*;
use std::f64::consts::PI;

use super::data::{reflection, DiscreteEigenpair, EigenKind, ScatteringData, ZGrid};
use super::jost::{a_breve, a_breve_with_derivative, coefficients_at, jost_solve_tol, JOST_TOL};
use super::PotentialSample;
use crate::{Error, Result};

const I: C = C::new(0.0, 1.0);
// loose tolerance for winding samples, tight one for Newton and constants
const CONTOUR_TOL: f64 = 1e-8;
const NEWTON_TOL: f64 = 1e-12;
const SPLIT: f64 = 0.4713;

/// a(z), b(z) on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSample {
    pub z: f64,
    pub a: C,
    pub b: C,
}

/// Rectangle [re_min, re_max] × [im_min, im_max] in the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SearchBox {
    /// [−Z, Z] × [1e-3, Z] with Z = 2 + 2·max|u|.
    pub fn default_for(pot: &PotentialSample) -> Self {
        let z = 2.0 + 2.0 * pot.max_abs();
        SearchBox { re_min: -z, re_max: z, im_min: 1e-3, im_max: z }
    }

    fn contains(&self, z: C, slack: f64) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min - slack
            && z.im <= self.im_max + slack
    }

    fn center(&self) -> C {
        C::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    fn near_boundary(&self, z: C, frac: f64) -> bool {
        let w = (self.re_max - self.re_min) * frac;
        let h = (self.im_max - self.im_min) * frac;
        z.re - self.re_min < w || self.re_max - z.re < w || z.im - self.im_min < h || self.im_max - z.im < h
    }

    fn split(&self) -> (SearchBox, SearchBox) {
        let w = self.re_max - self.re_min;
        let h = self.im_max - self.im_min;
        if w >= h {
            let mut at = self.re_min + SPLIT * w;
            if at.abs() < 1e-3 * w {
                at = self.re_min + 0.5 * SPLIT * w;
            }
            (SearchBox { re_max: at, ..*self }, SearchBox { re_min: at, ..*self })
        } else {
            let at = self.im_min + SPLIT * h;
            (SearchBox { im_max: at, ..*self }, SearchBox { im_min: at, ..*self })
        }
    }
}

/// Result of the eigenvalue search.
#[derive(Debug, Clone)]
pub struct DiscreteSpectrum {
    /// Representatives with Re z ≥ 0; norming constants are zero here.
    pub zeros: Vec<DiscreteEigenpair>,
    /// Argument-principle count over the whole box (both halves).
    pub winding: i64,
    /// Zeros found within 5% of the box boundary.
    pub near_boundary: Vec<C>,
}

struct Searcher<'a> {
    pot: &'a PotentialSample,
}

impl Searcher<'_> {
    fn f(&self, z: C) -> Result<C> {
        a_breve(self.pot, z, CONTOUR_TOL)
    }

    fn edge(&self, za: C, zb: C) -> Result<f64> {
        let n = (((zb - za).norm() / 0.1).ceil() as usize).max(2);
        let pts: Vec<C> = (0..=n).map(|k| za + (zb - za) * (k as f64 / n as f64)).collect();
        let vals = pts.par_iter().map(|&z| self.f(z)).collect::<Result<Vec<C>>>()?;
        let mut total = 0.0;
        for k in 0..n {
            total += self.segment(pts[k], vals[k], pts[k + 1], vals[k + 1], 0)?;
        }
        Ok(total)
    }

    fn segment(&self, za: C, fa: C, zb: C, fb: C, depth: usize) -> Result<f64> {
        let ratio = fb / fa;
        let d = ratio.arg();
        if d.abs() <= 0.3 && ratio.norm().ln().abs() <= 0.7 {
            return Ok(d);
        }
        if depth >= 40 {
            if d.abs() > 0.5 * PI {
                return Err(Error::NonIntegerWinding(d / (2.0 * PI)));
            }
            return Ok(d);
        }
        let zm = 0.5 * (za + zb);
        let fm = self.f(zm)?;
        Ok(self.segment(za, fa, zm, fm, depth + 1)? + self.segment(zm, fm, zb, fb, depth + 1)?)
    }

    fn winding(&self, b: &SearchBox) -> Result<i64> {
        let c = [
            C::new(b.re_min, b.im_min),
            C::new(b.re_max, b.im_min),
            C::new(b.re_max, b.im_max),
            C::new(b.re_min, b.im_max),
        ];
        let mut total = 0.0;
        for k in 0..4 {
            total += self.edge(c[k], c[(k + 1) % 4])?;
        }
        let w = total / (2.0 * PI);
        if (w - w.round()).abs() > 0.1 {
            return Err(Error::NonIntegerWinding(w));
        }
        Ok(w.round() as i64)
    }

    fn newton(&self, mut z: C, max_step: f64) -> Result<Option<C>> {
        for _ in 0..60 {
            let (a, da) = a_breve_with_derivative(self.pot, z, NEWTON_TOL)?;
            if a.norm() <= 1e-10 {
                // one more step to land well inside the basin
                if da.norm() > 0.0 {
                    z -= a / da;
                }
                return Ok(Some(z));
            }
            if da.norm() == 0.0 {
                return Ok(None);
            }
            let mut step = a / da;
            if step.norm() > max_step {
                step *= max_step / step.norm();
            }
            z -= step;
            if z.im < -0.5 || !z.re.is_finite() {
                return Ok(None);
            }
        }
        Ok(None)
    }

    fn search(&self, b: &SearchBox, count: i64, out: &mut Vec<C>) -> Result<()> {
        if count <= 0 {
            return Ok(());
        }
        if count == 1 {
            if let Some(z) = self.newton(b.center(), 0.5 * b.diameter())? {
                if b.contains(z, 1e-9) {
                    out.push(z);
                    return Ok(());
                }
            }
        }
        if b.diameter() < 1e-8 {
            return Err(if count > 1 { Error::MultipleZero(b.center()) } else { Error::NewtonFailed(b.center()) });
        }
        let (l, r) = b.split();
        let cl = self.winding(&l)?;
        let cr = count - cl;
        if cr < 0 {
            return Err(Error::NonIntegerWinding(count as f64 - cl as f64));
        }
        self.search(&l, cl, out)?;
        self.search(&r, cr, out)
    }

    /// Real Newton for ζ on the imaginary axis, where ă(iζ) is real.
    fn snap_soliton(&self, zeta: f64) -> Result<f64> {
        let mut zeta = zeta;
        for _ in 0..30 {
            let (a, da) = a_breve_with_derivative(self.pot, C::new(0.0, zeta), NEWTON_TOL)?;
            let d = (I * da).re;
            if d == 0.0 {
                break;
            }
            let step = a.re / d;
            zeta -= step;
            if step.abs() < 1e-14 * zeta.abs().max(1.0) {
                break;
            }
        }
        Ok(zeta)
    }
}

/// Zeros of ă inside `bx`: argument-principle count, bisection until each
/// sub-box holds one zero, then Newton refinement.
pub fn find_discrete_spectrum(pot: &PotentialSample, bx: &SearchBox) -> Result<DiscreteSpectrum> {
    pot.check_decay()?;
    if bx.im_min < 1e-3 || bx.re_max <= bx.re_min || bx.im_max <= bx.im_min {
        return Err(Error::InvalidArgument(format!("search box {bx:?} must sit above Im z = 1e-3")));
    }
    if pot.is_zero() {
        return Ok(DiscreteSpectrum { zeros: vec![], winding: 0, near_boundary: vec![] });
    }
    let s = Searcher { pot };
    let winding = s.winding(bx)?;
    let mut raw = Vec::new();
    s.search(bx, winding, &mut raw)?;
    if raw.len() as i64 != winding {
        return Err(Error::NonIntegerWinding(raw.len() as f64));
    }
    for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            if (raw[i] - raw[j]).norm() < 1e-8 {
                return Err(Error::MultipleZero(raw[i]));
            }
        }
    }
    let mut zeros = Vec::new();
    let mut near = Vec::new();
    for z in raw {
        if bx.near_boundary(z, 0.05) {
            log::warn!("zero {z} lies within 5% of the search box boundary");
            near.push(z);
        }
        if z.re.abs() <= 1e-6 * z.norm().max(1.0) {
            let zeta = s.snap_soliton(z.im)?;
            zeros.push(DiscreteEigenpair { z: C::new(0.0, zeta), c: C::new(0.0, 0.0), kind: EigenKind::Soliton });
        } else if z.re > 0.0 {
            zeros.push(DiscreteEigenpair { z, c: C::new(0.0, 0.0), kind: EigenKind::BreatherRep });
        }
    }
    zeros.sort_by(|a, b| a.z.im.total_cmp(&b.z.im).then(a.z.re.total_cmp(&b.z.re)));
    Ok(DiscreteSpectrum { zeros, winding, near_boundary: near })
}

/// ă'(z) by the 32-point trapezoid rule on a circle of radius ρ.
pub fn a_breve_derivative_contour(pot: &PotentialSample, z: C, rho: f64) -> Result<C> {
    const N: usize = 32;
    let vals = (0..N)
        .into_par_iter()
        .map(|k| {
            let e = C::from_polar(1.0, 2.0 * PI * k as f64 / N as f64);
            Ok(a_breve(pot, z + rho * e, NEWTON_TOL)? / e)
        })
        .collect::<Result<Vec<C>>>()?;
    Ok(vals.iter().sum::<C>() / (N as f64 * rho))
}

/// Norming constants c = b/ă'(z) for each zero, converted to the stored
/// convention (see [`DiscreteEigenpair`]).
pub fn norming_constants(pot: &PotentialSample, zeros: &[DiscreteEigenpair]) -> Result<Vec<DiscreteEigenpair>> {
    // all zeros including mirrors, for the contour radius
    let mut all: Vec<C> = Vec::new();
    for p in zeros {
        all.push(p.z);
        if p.kind == EigenKind::BreatherRep {
            all.push(C::new(-p.z.re, p.z.im));
        }
    }
    let u = pot.values();
    let mass: f64 = u.iter().map(|v| v * v).sum();
    let centre = if mass > 0.0 {
        (0..pot.len()).map(|i| pot.x(i) * u[i] * u[i]).sum::<f64>() / mass
    } else {
        0.5 * (pot.xmin() + pot.xmax())
    };
    zeros
        .iter()
        .map(|p| {
            let z = p.z;
            let jp = jost_solve_tol(pot, z, NEWTON_TOL)?;
            // fit window around the bulk of u², narrow enough that e^{2ixz}
            // varies by at most 1e3 across it
            let n = jp.x.len();
            let half = (jp.x[n - 1] - jp.x[0]) / 6.0;
            let w = half.min((1e3f64).ln() / (2.0 * z.im));
            let (lo, hi) = fit_window(&jp.x, centre, w);
            let (mut num, mut den, mut wn) = (C::new(0.0, 0.0), 0.0, 0.0);
            let mut v = Vec::with_capacity(hi - lo);
            for i in lo..hi {
                let e = (2.0 * I * jp.x[i] * z).exp();
                let vi = [e * jp.m2_plus[i][0], e * jp.m2_plus[i][1]];
                let wi = jp.m1_minus[i];
                num += vi[0].conj() * wi[0] + vi[1].conj() * wi[1];
                den += vi[0].norm_sqr() + vi[1].norm_sqr();
                wn += wi[0].norm_sqr() + wi[1].norm_sqr();
                v.push((vi, wi));
            }
            let b = num / den;
            let res: f64 = v
                .iter()
                .map(|(vi, wi)| (wi[0] - b * vi[0]).norm_sqr() + (wi[1] - b * vi[1]).norm_sqr())
                .sum();
            let residual = (res / wn).sqrt();
            if residual > 1e-4 {
                return Err(Error::DependenceResidual { z, residual });
            }
            if residual > 1e-6 {
                log::warn!("Jost column proportionality residual {residual:e} at {z}");
            }
            let dist = all
                .iter()
                .filter(|w| (**w - z).norm() > 1e-12)
                .map(|w| (w - z).norm())
                .fold(f64::INFINITY, f64::min);
            let rho = 1e-2f64.min(0.5 * dist);
            let da = a_breve_derivative_contour(pot, z, rho)?;
            if da.norm() < 1e-8 {
                return Err(Error::MultipleZero(z));
            }
            let mut out = DiscreteEigenpair::from_rhp_constant(z, p.kind, b / da);
            if out.kind == EigenKind::Soliton {
                if out.c.re.abs() > 1e-6 * out.c.norm() {
                    log::warn!("soliton norming constant {} is not purely imaginary", out.c);
                }
                out.c = C::new(0.0, out.c.im);
            }
            Ok(out)
        })
        .collect()
}

fn fit_window(x: &[f64], centre: f64, w: f64) -> (usize, usize) {
    let lo = x.partition_point(|&v| v < centre - w);
    let hi = x.partition_point(|&v| v <= centre + w);
    if hi - lo >= 8 {
        (lo, hi)
    } else {
        let m = x.partition_point(|&v| v < centre).clamp(4, x.len() - 4);
        (m - 4, m + 4)
    }
}

/// a(z), b(z) at each grid node.
pub fn transition_coefficients(pot: &PotentialSample, grid: &ZGrid) -> Result<Vec<TransitionSample>> {
    grid.validate()?;
    pot.check_decay()?;
    grid.nodes()
        .into_par_iter()
        .map(|z| {
            if pot.is_zero() {
                return Ok(TransitionSample { z, a: C::new(1.0, 0.0), b: C::new(0.0, 0.0) });
            }
            let co = coefficients_at(pot, z, JOST_TOL)?;
            if co.spread > 1e-8 {
                log::warn!("determinants vary by {:e} across x at z = {z}", co.spread);
            }
            Ok(TransitionSample { z, a: co.a, b: co.b })
        })
        .collect()
}

/// Full direct scattering transform of a decaying potential.
pub fn scatter(pot: &PotentialSample, grid: &ZGrid) -> Result<ScatteringData> {
    scatter_in_box(pot, grid, &SearchBox::default_for(pot))
}

pub fn scatter_in_box(pot: &PotentialSample, grid: &ZGrid, bx: &SearchBox) -> Result<ScatteringData> {
    grid.validate()?;
    pot.check_decay()?;
    if pot.is_zero() {
        return Ok(ScatteringData { grid: *grid, r: vec![C::new(0.0, 0.0); grid.n], solitons: vec![], breathers: vec![], t: 0.0 });
    }
    let samples = transition_coefficients(pot, grid)?;
    let r = samples.iter().map(|s| reflection(s.a, s.b)).collect::<Result<Vec<C>>>()?;
    let spec = find_discrete_spectrum(pot, bx)?;
    let pairs = norming_constants(pot, &spec.zeros)?;
    let (solitons, breathers) = pairs.into_iter().partition(|p| p.kind == EigenKind::Soliton);
    let mut data = ScatteringData { grid: *grid, r, solitons, breathers, t: 0.0 };
    data.sort();
    Ok(data)
}
