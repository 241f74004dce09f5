use num_complex::Complex64;

use crate::{Error, Result};

/// State vectors the integrator can advance.
pub trait OdeState: Clone {
    /// self + Σ cᵢ kᵢ
    fn lincomb(&self, terms: &[(f64, &Self)]) -> Self;
    /// max over components of |err| / (atol + rtol·max(|y0|, |y1|))
    fn scaled_error(err: &Self, y0: &Self, y1: &Self, tol: f64) -> f64;
}

impl<const N: usize> OdeState for [f64; N] {
    fn lincomb(&self, terms: &[(f64, &Self)]) -> Self {
        let mut out = *self;
        for (c, k) in terms {
            for i in 0..N {
                out[i] += c * k[i];
            }
        }
        out
    }
    fn scaled_error(err: &Self, y0: &Self, y1: &Self, tol: f64) -> f64 {
        (0..N)
            .map(|i| err[i].abs() / (tol * (1.0 + y0[i].abs().max(y1[i].abs()))))
            .fold(0.0, f64::max)
    }
}

impl<const N: usize> OdeState for [Complex64; N] {
    fn lincomb(&self, terms: &[(f64, &Self)]) -> Self {
        let mut out = *self;
        for (c, k) in terms {
            for i in 0..N {
                out[i] += k[i] * *c;
            }
        }
        out
    }
    fn scaled_error(err: &Self, y0: &Self, y1: &Self, tol: f64) -> f64 {
        (0..N)
            .map(|i| err[i].norm() / (tol * (1.0 + y0[i].norm().max(y1[i].norm()))))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    pub t: Vec<f64>,
    pub y: Vec<S>,
}

// Dormand–Prince 5(4) tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂ (fifth minus embedded fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive Dormand–Prince 5(4) integrator with FSAL and PI step control.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub tol: f64,
    pub h_max: f64,
    pub h_init: Option<f64>,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Dopri5 { tol, h_max: f64::INFINITY, h_init: None, max_steps: 10_000_000 }
    }

    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }

    fn check(&self) -> Result<()> {
        if !(1e-13..=1e-6).contains(&self.tol) {
            return Err(Error::InvalidArgument(format!(
                "ODE tolerance {} outside [1e-13, 1e-6]",
                self.tol
            )));
        }
        Ok(())
    }

    /// Integrates from `t0` through each of `t_out` (monotone in the direction
    /// of integration), landing exactly on every output time. `visit` receives
    /// each output state.
    pub fn integrate_to<S, F, V>(&self, rhs: F, t0: f64, y0: S, t_out: &[f64], visit: V) -> Result<S>
    where
        S: OdeState,
        F: FnMut(f64, &S) -> S,
        V: FnMut(usize, f64, &S),
    {
        self.drive(rhs, t0, y0, t_out, visit, |_, _| {})
    }

    fn drive<S, F, V, W>(&self, mut rhs: F, t0: f64, y0: S, t_out: &[f64], mut visit: V, mut on_step: W) -> Result<S>
    where
        S: OdeState,
        F: FnMut(f64, &S) -> S,
        V: FnMut(usize, f64, &S),
        W: FnMut(f64, &S),
    {
        self.check()?;
        let mut t = t0;
        let mut y = y0;
        let Some(&t_end) = t_out.last() else { return Ok(y) };
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let span = (t_end - t0).abs();
        let mut h = self
            .h_init
            .unwrap_or_else(|| (span * 1e-3).max(1e-6).min(0.01).min(self.h_max));
        let mut k1 = rhs(t, &y);
        let mut err_prev = 1e-4f64;
        let mut steps = 0usize;
        for (idx, &target) in t_out.iter().enumerate() {
            if (target - t) * dir < 0.0 {
                return Err(Error::InvalidArgument("output times not monotone".into()));
            }
            while (target - t) * dir > 0.0 {
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::StepUnderflow(t));
                }
                let remaining = (target - t).abs();
                let last = h >= remaining;
                let hs = if last { remaining } else { h };
                let ht = dir * hs;
                let k2 = rhs(t + C2 * ht, &y.lincomb(&[(ht * A21, &k1)]));
                let k3 = rhs(t + C3 * ht, &y.lincomb(&[(ht * A31, &k1), (ht * A32, &k2)]));
                let k4 = rhs(
                    t + C4 * ht,
                    &y.lincomb(&[(ht * A41, &k1), (ht * A42, &k2), (ht * A43, &k3)]),
                );
                let k5 = rhs(
                    t + C5 * ht,
                    &y.lincomb(&[(ht * A51, &k1), (ht * A52, &k2), (ht * A53, &k3), (ht * A54, &k4)]),
                );
                let k6 = rhs(
                    t + ht,
                    &y.lincomb(&[
                        (ht * A61, &k1),
                        (ht * A62, &k2),
                        (ht * A63, &k3),
                        (ht * A64, &k4),
                        (ht * A65, &k5),
                    ]),
                );
                let y_new = y.lincomb(&[
                    (ht * B1, &k1),
                    (ht * B3, &k3),
                    (ht * B4, &k4),
                    (ht * B5, &k5),
                    (ht * B6, &k6),
                ]);
                let t_new = if last { target } else { t + ht };
                let k7 = rhs(t_new, &y_new);
                let zero = y.lincomb(&[(-1.0, &y)]);
                let err_vec = zero.lincomb(&[
                    (ht * E1, &k1),
                    (ht * E3, &k3),
                    (ht * E4, &k4),
                    (ht * E5, &k5),
                    (ht * E6, &k6),
                    (ht * E7, &k7),
                ]);
                let err = S::scaled_error(&err_vec, &y, &y_new, self.tol);
                if !err.is_finite() {
                    h *= 0.1;
                    if h < 1e-14 {
                        return Err(Error::StepUnderflow(t));
                    }
                    continue;
                }
                if err <= 1.0 {
                    t = t_new;
                    y = y_new;
                    k1 = k7;
                    on_step(t, &y);
                    let e = err.max(1e-10);
                    let fac = 0.9 * e.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
                    if !last || fac < 1.0 {
                        h = (hs * fac.clamp(0.2, 5.0)).min(self.h_max);
                    }
                    err_prev = e;
                } else {
                    h = hs * (0.9 * err.powf(-0.2)).max(0.1);
                    if h < 1e-14 {
                        return Err(Error::StepUnderflow(t));
                    }
                }
            }
            visit(idx, t, &y);
        }
        Ok(y)
    }
}

/// Adaptive Dormand–Prince trajectory of y' = rhs(t, y) over `t_span`,
/// recording every accepted step.
pub fn ode_integrate<S, F>(rhs: F, y0: S, t_span: (f64, f64), tol: f64) -> Result<Trajectory<S>>
where
    S: OdeState,
    F: FnMut(f64, &S) -> S,
{
    let mut traj = Trajectory { t: vec![t_span.0], y: vec![y0.clone()] };
    Dopri5::new(tol).drive(rhs, t_span.0, y0, &[t_span.1], |_, _, _| {}, |t, y| {
        traj.t.push(t);
        traj.y.push(y.clone());
    })?;
    Ok(traj)
}
