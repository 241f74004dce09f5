use num_complex::Complex64 as C;

use super::PotentialSample;
use crate::specfun::Dopri5;
use crate::{Error, Result};

const I: C = C::new(0.0, 1.0);

/// Default local tolerance for Jost integrations.
pub const JOST_TOL: f64 = 1e-11;

/// Jost solutions sampled on the potential grid. The columns analytic in the
/// upper half plane (first column of m⁻, second column of m⁺) are always
/// present; the remaining two only for real z.
#[derive(Debug, Clone)]
pub struct JostPair {
    pub z: C,
    pub x: Vec<f64>,
    pub m1_minus: Vec<[C; 2]>,
    pub m2_plus: Vec<[C; 2]>,
    pub m1_plus: Option<Vec<[C; 2]>>,
    pub m2_minus: Option<Vec<[C; 2]>>,
}

impl JostPair {
    /// Full m⁻ at node i as [[m11, m12], [m21, m22]] (real z only).
    pub fn m_minus(&self, i: usize) -> Option<[[C; 2]; 2]> {
        let c2 = self.m2_minus.as_ref()?[i];
        let c1 = self.m1_minus[i];
        Some([[c1[0], c2[0]], [c1[1], c2[1]]])
    }

    pub fn m_plus(&self, i: usize) -> Option<[[C; 2]; 2]> {
        let c1 = self.m1_plus.as_ref()?[i];
        let c2 = self.m2_plus[i];
        Some([[c1[0], c2[0]], [c1[1], c2[1]]])
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Col {
    First,
    Second,
}

/// Right-hand side of the AKNS system for one column of m.
#[inline]
pub(crate) fn column_rhs(u: f64, z: C, col: Col, m: &[C; 2]) -> [C; 2] {
    let iu = I * u;
    match col {
        Col::First => [iu * m[1], 2.0 * I * z * m[1] + iu * m[0]],
        Col::Second => [-2.0 * I * z * m[0] + iu * m[1], iu * m[0]],
    }
}

/// Integrates one column from the end of the grid it is normalized at
/// (left end for m⁻, right end for m⁺) through the output points.
pub(crate) fn integrate_column(
    pot: &PotentialSample,
    z: C,
    col: Col,
    from_left: bool,
    outputs: &[f64],
    tol: f64,
    mut visit: impl FnMut(usize, &[C; 2]),
) -> Result<[C; 2]> {
    let y0 = match col {
        Col::First => [C::new(1.0, 0.0), C::new(0.0, 0.0)],
        Col::Second => [C::new(0.0, 0.0), C::new(1.0, 0.0)],
    };
    let t0 = if from_left { pot.xmin() } else { pot.xmax() };
    Dopri5::new(tol).integrate_to(
        |x, m| column_rhs(pot.eval(x), z, col, m),
        t0,
        y0,
        outputs,
        |k, _, y| visit(k, y),
    )
}

/// Column together with its z-derivative: [m_a, m_b, ∂z m_a, ∂z m_b].
fn integrate_column_variational(pot: &PotentialSample, z: C, col: Col, x_end: f64, tol: f64) -> Result<[C; 4]> {
    let (y0, t0) = match col {
        Col::First => ([C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)], pot.xmin()),
        Col::Second => ([C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)], pot.xmax()),
    };
    Dopri5::new(tol).integrate_to(
        |x, y: &[C; 4]| {
            let u = pot.eval(x);
            let m = column_rhs(u, z, col, &[y[0], y[1]]);
            let p = column_rhs(u, z, col, &[y[2], y[3]]);
            match col {
                Col::First => [m[0], m[1], p[0], p[1] + 2.0 * I * y[1]],
                Col::Second => [m[0], m[1], p[0] - 2.0 * I * y[0], p[1]],
            }
        },
        t0,
        y0,
        &[x_end],
        |_, _, _| {},
    )
}

pub(crate) fn interior_point(pot: &PotentialSample) -> f64 {
    let (a, b) = (pot.xmin(), pot.xmax());
    if a < 0.0 && b > 0.0 {
        0.0
    } else {
        0.5 * (a + b)
    }
}

fn det(a: &[C; 2], b: &[C; 2]) -> C {
    a[0] * b[1] - a[1] * b[0]
}

/// ă(z) = det[m₁⁻, m₂⁺] evaluated at an interior point, for Im z ≥ 0.
pub fn a_breve(pot: &PotentialSample, z: C, tol: f64) -> Result<C> {
    let xc = interior_point(pot);
    let m1 = integrate_column(pot, z, Col::First, true, &[xc], tol, |_, _| {})?;
    let m2 = integrate_column(pot, z, Col::Second, false, &[xc], tol, |_, _| {})?;
    Ok(det(&m1, &m2))
}

/// (ă(z), ă'(z)) from the variational equations.
pub fn a_breve_with_derivative(pot: &PotentialSample, z: C, tol: f64) -> Result<(C, C)> {
    let xc = interior_point(pot);
    let c1 = integrate_column_variational(pot, z, Col::First, xc, tol)?;
    let c2 = integrate_column_variational(pot, z, Col::Second, xc, tol)?;
    let a = c1[0] * c2[1] - c1[1] * c2[0];
    let da = c1[2] * c2[1] + c1[0] * c2[3] - c1[3] * c2[0] - c1[1] * c2[2];
    Ok((a, da))
}

/// Jost solutions on the whole grid. Requires Im z ≥ 0; for real z all four
/// columns are computed.
pub fn jost_solve(pot: &PotentialSample, z: C) -> Result<JostPair> {
    jost_solve_tol(pot, z, JOST_TOL)
}

pub fn jost_solve_tol(pot: &PotentialSample, z: C, tol: f64) -> Result<JostPair> {
    pot.check_decay()?;
    if z.im < 0.0 {
        return Err(Error::InvalidArgument(format!("jost_solve needs Im z ≥ 0, got {z}")));
    }
    let n = pot.len();
    let x = pot.x_grid();
    let rev: Vec<f64> = x.iter().rev().copied().collect();
    let run = |col: Col, from_left: bool| -> Result<Vec<[C; 2]>> {
        let mut out = vec![[C::new(0.0, 0.0); 2]; n];
        let pts = if from_left { &x } else { &rev };
        integrate_column(pot, z, col, from_left, pts, tol, |k, y| {
            let idx = if from_left { k } else { n - 1 - k };
            out[idx] = *y;
        })?;
        Ok(out)
    };
    let m1_minus = run(Col::First, true)?;
    let m2_plus = run(Col::Second, false)?;
    let (m1_plus, m2_minus) = if z.im == 0.0 {
        (Some(run(Col::First, false)?), Some(run(Col::Second, true)?))
    } else {
        (None, None)
    };
    Ok(JostPair { z, x, m1_minus, m2_plus, m1_plus, m2_minus })
}

/// a and b at a real z, evaluated at x = 0; `spread` is the drift of a, b
/// and ă between x = 0 and x = ±2.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Coefficients {
    pub a: C,
    pub b: C,
    pub spread: f64,
}

pub(crate) fn coefficients_at(pot: &PotentialSample, z: f64, tol: f64) -> Result<Coefficients> {
    let xc = interior_point(pot);
    let half = 0.5 * (pot.xmax() - pot.xmin());
    let d = 2.0f64.min(0.5 * half);
    let fwd = [xc - d, xc, xc + d];
    let bwd = [xc + d, xc, xc - d];
    let zc = C::new(z, 0.0);
    let mut m1m = [[C::new(0.0, 0.0); 2]; 3];
    let mut m2m = m1m;
    let mut m1p = m1m;
    let mut m2p = m1m;
    integrate_column(pot, zc, Col::First, true, &fwd, tol, |k, y| m1m[k] = *y)?;
    integrate_column(pot, zc, Col::Second, true, &fwd, tol, |k, y| m2m[k] = *y)?;
    integrate_column(pot, zc, Col::First, false, &bwd, tol, |k, y| m1p[2 - k] = *y)?;
    integrate_column(pot, zc, Col::Second, false, &bwd, tol, |k, y| m2p[2 - k] = *y)?;
    let at = |k: usize| {
        let x = fwd[k];
        let a = det(&m1p[k], &m2m[k]);
        let ab = det(&m1m[k], &m2p[k]);
        let b = (-2.0 * I * x * z).exp() * det(&m1m[k], &m1p[k]);
        (a, b, ab)
    };
    let (a, b, ab) = at(1);
    let mut spread: f64 = 0.0;
    for k in [0, 2] {
        let (a2, b2, ab2) = at(k);
        spread = spread.max((a2 - a).norm()).max((b2 - b).norm()).max((ab2 - ab).norm());
    }
    Ok(Coefficients { a, b, spread })
}
