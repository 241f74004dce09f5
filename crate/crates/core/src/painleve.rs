//! Real Ablowitz–Segur solutions of P'' = sP − 2P³ and calibration of the
//! Airy multiplier α against sampled profiles.

use crate::specfun::{airy_ai, airy_ai_prime, Dopri5};
use crate::{Error, Result};

const GRID_STEP: f64 = 0.01;
const ODE_TOL: f64 = 1e-13;
const BLOW_UP: f64 = 1e3;

/// P sampled on a uniform grid, with P' and the recorded ODE residual.
#[derive(Debug, Clone, PartialEq)]
pub struct PainleveSolution {
    pub alpha: f64,
    pub s_grid: Vec<f64>,
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
    pub residual_max: f64,
}

impl PainleveSolution {
    pub fn s_min(&self) -> f64 {
        self.s_grid[0]
    }

    pub fn s_max(&self) -> f64 {
        *self.s_grid.last().unwrap()
    }

    /// Cubic Hermite interpolation of P from the (P, P') samples.
    pub fn eval(&self, s: f64) -> Result<f64> {
        let (lo, hi) = (self.s_min(), self.s_max());
        if !(lo..=hi).contains(&s) {
            return Err(Error::OutsideGrid(s));
        }
        let h = self.s_grid[1] - lo;
        let i = (((s - lo) / h).floor() as usize).min(self.s_grid.len() - 2);
        let u = (s - self.s_grid[i]) / h;
        let (h00, h10) = ((1.0 + 2.0 * u) * (1.0 - u).powi(2), u * (1.0 - u).powi(2));
        let (h01, h11) = (u * u * (3.0 - 2.0 * u), u * u * (u - 1.0));
        Ok(h00 * self.p[i] + h10 * h * self.dp[i] + h01 * self.p[i + 1] + h11 * h * self.dp[i + 1])
    }
}

// 8th-order central first-derivative weights, offsets 1..=4
const D8: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

fn residual_max(s: &[f64], p: &[f64], dp: &[f64]) -> f64 {
    let h = s[1] - s[0];
    (4..s.len().saturating_sub(4))
        .map(|i| {
            let ddp: f64 = D8.iter().enumerate().map(|(k, w)| w * (dp[i + k + 1] - dp[i - k - 1])).sum::<f64>() / h;
            (ddp - s[i] * p[i] + 2.0 * p[i].powi(3)).abs()
        })
        .fold(0.0, f64::max)
}

/// Integrates P'' = sP − 2P³ downward from s_max, starting on α·Ai.
pub fn solve_painleve(alpha: f64, s_min: f64, s_max: f64) -> Result<PainleveSolution> {
    solve_painleve_tol(alpha, s_min, s_max, ODE_TOL)
}

pub fn solve_painleve_tol(alpha: f64, s_min: f64, s_max: f64, tol: f64) -> Result<PainleveSolution> {
    if !(alpha.abs() < 1.0) {
        return Err(Error::InvalidArgument(format!("|alpha| = {} must be < 1", alpha.abs())));
    }
    if s_max < 10.0 || s_min < -30.0 || s_min >= s_max {
        return Err(Error::InvalidArgument(format!("painleve grid [{s_min}, {s_max}]")));
    }
    let n = ((s_max - s_min) / GRID_STEP).round() as usize;
    let h = (s_max - s_min) / n as f64;
    let outputs: Vec<f64> = (0..=n).rev().map(|k| s_min + k as f64 * h).collect();
    let mut p = vec![0.0; n + 1];
    let mut dp = vec![0.0; n + 1];
    let mut blown: Option<f64> = None;
    let y0 = [alpha * airy_ai(s_max), alpha * airy_ai_prime(s_max)];
    Dopri5::new(tol).with_h_max(h).integrate_to(
        |s, y: &[f64; 2]| {
            let y0 = y[0].clamp(-2.0 * BLOW_UP, 2.0 * BLOW_UP);
            [y[1], s * y0 - 2.0 * y0 * y0 * y0]
        },
        s_max,
        y0,
        &outputs[1..],
        |idx, s, y| {
            if !(y[0].abs() <= BLOW_UP) && blown.is_none() {
                blown = Some(s);
            }
            p[n - 1 - idx] = y[0];
            dp[n - 1 - idx] = y[1];
        },
    )?;
    if let Some(s) = blown {
        return Err(Error::PainleveBlowUp(s));
    }
    p[n] = y0[0];
    dp[n] = y0[1];
    let s_grid: Vec<f64> = (0..=n).map(|k| s_min + k as f64 * h).collect();
    let residual_max = residual_max(&s_grid, &p, &dp);
    Ok(PainleveSolution { alpha, s_grid, p, dp, residual_max })
}

/// Prediction (3t)^{-1/3} P(x/(3t)^{1/3}).
pub fn self_similar(sol: &PainleveSolution, x: f64, t: f64) -> Result<f64> {
    let scale = (3.0 * t).cbrt();
    Ok(sol.eval(x / scale)? / scale)
}

/// Working guess for the α–r(0) map: Im r(0)/√(1+|r(0)|²), which is sin∫u
/// for r(0) = i tan∫u and matches the linear Airy limit α ≈ ∫u.
pub fn alpha_hypothesis(r0: crate::Complex64) -> f64 {
    r0.im / (1.0 + r0.norm_sqr()).sqrt()
}

/// A sampled profile u(x) at time t.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleProfile {
    pub t: f64,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub alpha: f64,
    /// Sup-norm misfit over the self-similar window.
    pub residual: f64,
    pub window: f64,
}

/// Sup-norm misfit of the α-profile against the oracle on |x| ≤ 4(3t)^{1/3}.
pub fn fit_residual(alpha: f64, oracle: &OracleProfile) -> Result<f64> {
    let scale = (3.0 * oracle.t).cbrt();
    let sol = solve_painleve(alpha, -4.5, 10.0)?;
    let mut worst = 0.0f64;
    for (&x, &u) in oracle.x.iter().zip(&oracle.u) {
        if x.abs() <= 4.0 * scale {
            worst = worst.max((self_similar(&sol, x, oracle.t)? - u).abs());
        }
    }
    Ok(worst)
}

/// Least-squares α on the self-similar window; the search brackets the
/// hypothesis value and refines with golden-section steps.
pub fn calibrate_alpha(r0: crate::Complex64, oracle: &OracleProfile) -> Result<Calibration> {
    if r0.re.abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!("r(0) = {r0} is not purely imaginary")));
    }
    let window = 4.0 * (3.0 * oracle.t).cbrt();
    let sq = |alpha: f64| -> Result<f64> {
        let sol = solve_painleve(alpha, -4.5, 10.0)?;
        let mut acc = 0.0;
        for (&x, &u) in oracle.x.iter().zip(&oracle.u) {
            if x.abs() <= window {
                acc += (self_similar(&sol, x, oracle.t)? - u).powi(2);
            }
        }
        Ok(acc)
    };
    // coarse scan then golden section on the best bracket
    let guess = alpha_hypothesis(r0);
    let lo = (guess - 0.3).max(-0.99);
    let hi = (guess + 0.3).min(0.99);
    let m = 24;
    let xs: Vec<f64> = (0..=m).map(|k| lo + (hi - lo) * k as f64 / m as f64).collect();
    let vals = xs.iter().map(|&a| sq(a)).collect::<Result<Vec<_>>>()?;
    let best = (0..=m).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap();
    let (mut a, mut b) = (xs[best.saturating_sub(1)], xs[(best + 1).min(m)]);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (sq(c)?, sq(d)?);
    while b - a > 1e-7 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = sq(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = sq(d)?;
        }
    }
    let alpha = 0.5 * (a + b);
    let residual = fit_residual(alpha, oracle)?;
    let bound = 5.0 / oracle.t.sqrt();
    if residual > bound {
        return Err(Error::FitFailure { residual, bound });
    }
    Ok(Calibration { alpha, residual, window })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_alpha_is_zero() {
        let s = solve_painleve(0.0, -30.0, 10.0).unwrap();
        assert!(s.p.iter().all(|&p| p == 0.0));
        assert_eq!(s.residual_max, 0.0);
    }

    #[test]
    fn residual_and_airy_boundary() {
        for alpha in [0.1, 0.5, -0.8] {
            let s = solve_painleve(alpha, -30.0, 12.0).unwrap();
            assert!(s.residual_max <= 1e-8, "alpha {alpha}: {}", s.residual_max);
            for (k, &x) in s.s_grid.iter().enumerate().filter(|(_, &x)| x >= 8.0) {
                assert!((s.p[k] - alpha * airy_ai(x)).abs() <= 1e-9, "{x}");
            }
        }
        let s = solve_painleve(0.5, -30.0, 10.0).unwrap();
        assert!((s.eval(8.0).unwrap() / airy_ai(8.0) - 0.5).abs() < 1e-8);
    }

    #[test]
    fn odd_in_alpha() {
        let a = solve_painleve(0.6, -30.0, 10.0).unwrap();
        let b = solve_painleve(-0.6, -30.0, 10.0).unwrap();
        for (p, q) in a.p.iter().zip(&b.p) {
            assert!((p + q).abs() <= 1e-10);
        }
    }

    #[test]
    fn bounded_oscillatory_envelope() {
        let s = solve_painleve(0.5, -30.0, 10.0).unwrap();
        // local energy E = P'² − sP² + P⁴ gives envelope² ≈ E/(−s)
        let e: Vec<f64> = s
            .s_grid
            .iter()
            .zip(s.p.iter().zip(&s.dp))
            .filter(|(&x, _)| (-30.0..=-15.0).contains(&x))
            .map(|(&x, (&p, &dp))| (dp * dp - x * p * p + p.powi(4)) / (-x) * (-x).sqrt())
            .collect();
        let (lo, hi) = e.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(hi / lo < 1.1, "{lo} {hi}");
        let tight = solve_painleve_tol(0.5, -30.0, 10.0, 1e-13).unwrap();
        let loose = solve_painleve_tol(0.5, -30.0, 10.0, 2e-13).unwrap();
        assert!((tight.p[0] - loose.p[0]).abs() <= 10.0 * 2e-13 * 1e3);
    }

    #[test]
    fn hermite_eval_matches_nodes_and_refuses_outside() {
        let s = solve_painleve(0.3, -10.0, 10.0).unwrap();
        assert_eq!(s.eval(s.s_grid[17]).unwrap(), s.p[17]);
        assert!(matches!(s.eval(-10.5), Err(Error::OutsideGrid(_))));
        assert!(solve_painleve(1.0, -10.0, 10.0).is_err());
    }

    #[test]
    fn self_similar_structure() {
        let s = solve_painleve(0.4, -30.0, 10.0).unwrap();
        let (x1, t1) = (1.3, 20.0);
        let lam = 2.0f64;
        let (x2, t2) = (lam * x1, lam.powi(3) * t1);
        let a = self_similar(&s, x1, t1).unwrap() * (3.0 * t1).cbrt();
        let b = self_similar(&s, x2, t2).unwrap() * (3.0 * t2).cbrt();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn calibrate_recovers_synthetic_alpha() {
        let t = 40.0;
        let sol = solve_painleve(0.37, -30.0, 10.0).unwrap();
        let x: Vec<f64> = (-200..=200).map(|k| k as f64 * 0.1).collect();
        let u = x.iter().map(|&x| self_similar(&sol, x, t).unwrap()).collect();
        let cal = calibrate_alpha(crate::Complex64::new(0.0, 0.4), &OracleProfile { t, x, u }).unwrap();
        assert!((cal.alpha - 0.37).abs() < 1e-6, "{}", cal.alpha);
        let zero = OracleProfile { t, x: vec![0.0, 1.0], u: vec![0.0, 0.0] };
        let cal = calibrate_alpha(crate::Complex64::new(0.0, 0.0), &zero).unwrap();
        assert!(cal.alpha.abs() < 1e-6 && cal.residual < 1e-6);
    }
}
