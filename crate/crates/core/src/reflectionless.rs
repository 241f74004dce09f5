//! Exact solutions from purely discrete scattering data: closed-form soliton
//! and breather profiles and the finite Riemann–Hilbert (pole) system.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;

use crate::scattering::{DiscreteEigenpair, EigenKind, ScatteringData};
use crate::{Error, Result};

const I: C = C::new(0.0, 1.0);

/// u = 2ζε sech(−2ζ(x − 4ζ²t) + ω), ω = log(|c|/2ζ), ε = sign Im c.
pub fn one_soliton(zeta: f64, c: C, x: f64, t: f64) -> Result<f64> {
    if c.norm() == 0.0 || c.re.abs() > 1e-8 * c.norm() || !(zeta > 0.0) {
        return Err(Error::NonImaginaryNorming(c));
    }
    let eps = c.im.signum();
    let omega = (c.norm() / (2.0 * zeta)).ln();
    Ok(2.0 * zeta * eps / (-2.0 * zeta * (x - 4.0 * zeta * zeta * t) + omega).cosh())
}

/// Phases (ω₁, ω₂) of the one-breather profile for c = A + iB.
pub fn breather_phases(xi: f64, eta: f64, c: C) -> (f64, f64) {
    let (a, b) = (c.re, c.im);
    let w1 = (b * xi - a * eta).atan2(a * xi + b * eta);
    let w2 = -((xi / (2.0 * eta)).abs() * (c.norm_sqr() / (xi * xi + eta * eta)).sqrt()).ln();
    (w1, w2)
}

/// One-breather profile with eigenvalue ξ + iη and norming constant c.
pub fn one_breather(xi: f64, eta: f64, c: C, x: f64, t: f64) -> f64 {
    let (w1, w2) = breather_phases(xi, eta, c);
    let nu1 = 2.0 * xi * (x + 4.0 * (xi * xi - 3.0 * eta * eta) * t);
    let nu2 = 2.0 * eta * (x - 4.0 * (eta * eta - 3.0 * xi * xi) * t);
    let (a, b) = (nu2 + w2, nu1 + w1);
    let q = eta / xi;
    // divide through by cosh² to stay finite far from the core
    let th = a.tanh();
    let sech = 1.0 / a.cosh();
    let (sb, cb) = b.sin_cos();
    -4.0 * q * (xi * sb * sech + eta * th * cb * sech) / (1.0 + q * q * cb * cb * sech * sech)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    First,
    Second,
}

/// Poles of the reflectionless Riemann–Hilbert problem at fixed (x, t).
///
/// Each pole carries a residue weight w (stored as log w so that e^{±8tη³}
/// never overflows) and the column of M in which the pole sits.
#[derive(Debug, Clone)]
pub struct PoleSystem {
    pub poles: Vec<C>,
    pub log_weights: Vec<C>,
    pub columns: Vec<Column>,
    pub x: f64,
    pub t: f64,
}

impl PoleSystem {
    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    /// Weights w = exp(log w); may overflow to infinity for extreme (x, t).
    pub fn weights(&self) -> Vec<C> {
        self.log_weights.iter().map(|l| l.exp()).collect()
    }
}

fn theta(z: C, x: f64, t: f64) -> C {
    4.0 * t * z * z * z + x * z
}

/// Expands representatives into the full pole set at (x, t). With a dressing
/// d, every norming constant c is replaced by c·d(z)^{-2} first.
pub fn assemble_pole_system(
    solitons: &[DiscreteEigenpair],
    breathers: &[DiscreteEigenpair],
    x: f64,
    t: f64,
    dressing: Option<&dyn Fn(C) -> C>,
) -> Result<PoleSystem> {
    let mut entries: Vec<(C, C, Column)> = Vec::new();
    let dressed = |p: &DiscreteEigenpair| -> C {
        let p = match dressing {
            Some(d) => p.with_c(p.c / (d(p.z) * d(p.z))),
            None => *p,
        };
        p.rhp_constant()
    };
    for p in solitons.iter().chain(breathers) {
        let c = dressed(p);
        if c.norm() == 0.0 || !c.norm().is_finite() {
            return Err(Error::InvalidArgument(format!("norming constant {c} at {}", p.z)));
        }
        let z = p.z;
        let zb = z.conj();
        let lc = c.ln();
        let lcb = (-c.conj()).ln();
        entries.push((z, lc + 2.0 * I * theta(z, x, t), Column::First));
        entries.push((zb, lcb - 2.0 * I * theta(zb, x, t), Column::Second));
        if p.kind == EigenKind::BreatherRep {
            entries.push((-z, (-c).ln() - 2.0 * I * theta(-z, x, t), Column::Second));
            entries.push((-zb, c.conj().ln() + 2.0 * I * theta(-zb, x, t), Column::First));
        }
    }
    entries.sort_by(|a, b| a.0.im.total_cmp(&b.0.im).then(a.0.re.total_cmp(&b.0.re)));
    for w in entries.windows(2) {
        if (w[0].0 - w[1].0).norm() < 1e-10 {
            return Err(Error::PoleCollision(w[0].0));
        }
    }
    Ok(PoleSystem {
        poles: entries.iter().map(|e| e.0).collect(),
        log_weights: entries.iter().map(|e| e.1).collect(),
        columns: entries.iter().map(|e| e.2).collect(),
        x,
        t,
    })
}

/// Solution of the pole system: residues of M at every pole and the
/// reconstructed potential.
#[derive(Debug, Clone)]
pub struct DiscreteBCSolution {
    pub poles: Vec<C>,
    pub columns: Vec<Column>,
    /// Residue vector of the pole's column of M.
    pub residues: Vec<[C; 2]>,
    pub u: f64,
    pub condition: f64,
}

impl DiscreteBCSolution {
    /// M(z) = I + Σ residue/(z − pole), as [[M11, M12], [M21, M22]].
    pub fn m_at(&self, z: C) -> [[C; 2]; 2] {
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        let mut m = [[one, zero], [zero, one]];
        for ((p, col), w) in self.poles.iter().zip(&self.columns).zip(&self.residues) {
            let j = match col {
                Column::First => 0,
                Column::Second => 1,
            };
            m[0][j] += w[0] / (z - p);
            m[1][j] += w[1] / (z - p);
        }
        m
    }
}

/// Solves the residue conditions as a linear system. Unknowns are the
/// residues W_p = w_p·M_other(p); rows with |w_p| ≥ 1 are divided by w_p.
pub fn discrete_rhp_solve(sys: &PoleSystem) -> Result<DiscreteBCSolution> {
    let n = sys.len();
    if n == 0 {
        return Ok(DiscreteBCSolution {
            poles: vec![],
            columns: vec![],
            residues: vec![],
            u: 0.0,
            condition: 1.0,
        });
    }
    let mut a = DMatrix::<C>::zeros(n, n);
    let mut rhs = DMatrix::<C>::zeros(n, 2);
    for i in 0..n {
        let lw = sys.log_weights[i];
        let big = lw.re >= 0.0;
        // row i: coef·W_i − s·Σ_q W_q/(p_i − q) = s·e_other
        let (diag, s) = if big { ((-lw).exp(), C::new(1.0, 0.0)) } else { (C::new(1.0, 0.0), lw.exp()) };
        a[(i, i)] = diag;
        for q in 0..n {
            if sys.columns[q] != sys.columns[i] {
                a[(i, q)] = -s / (sys.poles[i] - sys.poles[q]);
            }
        }
        match sys.columns[i] {
            Column::First => rhs[(i, 1)] = s,
            Column::Second => rhs[(i, 0)] = s,
        }
    }
    let sv = a.clone().singular_values();
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= 1e12) {
        return Err(Error::SingularSystem(condition));
    }
    let lu = a.lu();
    let sol = lu.solve(&rhs).ok_or(Error::SingularSystem(condition))?;
    let residues: Vec<[C; 2]> = (0..n).map(|i| [sol[(i, 0)], sol[(i, 1)]]).collect();
    let mut u = C::new(0.0, 0.0);
    for i in 0..n {
        if sys.columns[i] == Column::Second {
            u += 2.0 * residues[i][0];
        }
    }
    if u.im.abs() > 1e-10 * (1.0 + u.re.abs()) {
        log::warn!("reconstructed u has imaginary part {:e}", u.im);
    }
    Ok(DiscreteBCSolution {
        poles: sys.poles.clone(),
        columns: sys.columns.clone(),
        residues,
        u: u.re,
        condition,
    })
}

/// Reflectionless potential u(x, t) from the discrete part of `data`
/// (norming constants are taken at time `data.t`).
pub fn reconstruct_at(data: &ScatteringData, x: f64, t: f64) -> Result<f64> {
    let sys = assemble_pole_system(&data.solitons, &data.breathers, x, t - data.t, None)?;
    Ok(discrete_rhp_solve(&sys)?.u)
}

/// Reflectionless potential on a grid of x values.
pub fn reconstruct_profile(data: &ScatteringData, xs: &[f64], t: f64) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    xs.par_iter().map(|&x| reconstruct_at(data, x, t)).collect()
}

/// m^(br)(z) for the single-breather problem with norming constant `dressed_c`.
pub fn breather_matrix(pair: &DiscreteEigenpair, dressed_c: C, x: f64, t: f64, z: C) -> Result<[[C; 2]; 2]> {
    let p = pair.with_c(dressed_c);
    let sys = assemble_pole_system(&[], &[p], x, t, None)?;
    if sys.poles.iter().any(|q| (q - z).norm() < 1e-6) {
        return Err(Error::PoleProximity(z));
    }
    Ok(discrete_rhp_solve(&sys)?.m_at(z))
}
