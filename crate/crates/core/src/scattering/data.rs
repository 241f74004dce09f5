use num_complex::Complex64 as C;

use crate::{Error, Result};

const I: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenKind {
    Soliton,
    BreatherRep,
}

/// Zero of ă in the upper half plane with its norming constant.
///
/// Norming constants are stored in the convention of the closed-form soliton
/// and breather profiles: a soliton `2ζ sech(2ζ x)` has c = 2ζ i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteEigenpair {
    pub z: C,
    pub c: C,
    pub kind: EigenKind,
}

impl DiscreteEigenpair {
    pub fn soliton(zeta: f64, c: C) -> Self {
        DiscreteEigenpair { z: C::new(0.0, zeta), c, kind: EigenKind::Soliton }
    }

    pub fn breather(xi: f64, eta: f64, c: C) -> Self {
        DiscreteEigenpair { z: C::new(xi, eta), c, kind: EigenKind::BreatherRep }
    }

    pub fn is_soliton(&self) -> bool {
        self.kind == EigenKind::Soliton
    }

    /// Group velocity: 4ζ² for solitons, 4η² − 12ξ² for breathers.
    pub fn velocity(&self) -> f64 {
        let (xi, eta) = (self.z.re, self.z.im);
        match self.kind {
            EigenKind::Soliton => 4.0 * eta * eta,
            EigenKind::BreatherRep => 4.0 * eta * eta - 12.0 * xi * xi,
        }
    }

    /// Residue constant in the Riemann–Hilbert gauge used by the solvers.
    pub(crate) fn rhp_constant(&self) -> C {
        match self.kind {
            EigenKind::Soliton => I * self.c,
            EigenKind::BreatherRep => -I * self.c,
        }
    }

    /// Inverse of [`rhp_constant`](Self::rhp_constant).
    pub(crate) fn from_rhp_constant(z: C, kind: EigenKind, c_rhp: C) -> Self {
        let c = match kind {
            EigenKind::Soliton => -I * c_rhp,
            EigenKind::BreatherRep => I * c_rhp,
        };
        DiscreteEigenpair { z, c, kind }
    }

    pub fn with_c(self, c: C) -> Self {
        DiscreteEigenpair { c, ..self }
    }
}

/// Symmetric uniform grid of spectral nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZGrid {
    pub zmin: f64,
    pub zmax: f64,
    pub n: usize,
}

impl ZGrid {
    pub fn symmetric(zmax: f64, n: usize) -> Self {
        ZGrid { zmin: -zmax, zmax, n }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 || !(self.zmax > self.zmin) || !self.zmin.is_finite() || !self.zmax.is_finite() {
            return Err(Error::InvalidArgument(format!("malformed z grid {self:?}")));
        }
        if (self.zmin + self.zmax).abs() > 1e-12 * self.zmax.abs().max(1.0) {
            return Err(Error::InvalidArgument("z grid must be symmetric about 0".into()));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.zmax - self.zmin) / (self.n - 1) as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        if k == self.n - 1 {
            self.zmax
        } else {
            self.zmin + k as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.node(k)).collect()
    }
}

/// Reflection coefficient on a grid plus the discrete spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringData {
    pub grid: ZGrid,
    pub r: Vec<C>,
    pub solitons: Vec<DiscreteEigenpair>,
    pub breathers: Vec<DiscreteEigenpair>,
    pub t: f64,
}

impl ScatteringData {
    pub fn reflectionless(solitons: Vec<DiscreteEigenpair>, breathers: Vec<DiscreteEigenpair>) -> Self {
        let grid = ZGrid::symmetric(1.0, 5);
        let mut d = ScatteringData { grid, r: vec![C::new(0.0, 0.0); grid.n], solitons, breathers, t: 0.0 };
        d.sort();
        d
    }

    /// Solitons by ζ ascending, breathers by velocity ascending.
    pub fn sort(&mut self) {
        self.solitons.sort_by(|a, b| a.z.im.total_cmp(&b.z.im));
        self.breathers.sort_by(|a, b| a.velocity().total_cmp(&b.velocity()));
    }

    pub fn modes(&self) -> impl Iterator<Item = &DiscreteEigenpair> {
        self.solitons.iter().chain(self.breathers.iter())
    }

    pub fn max_abs_r(&self) -> f64 {
        self.r.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn is_reflectionless(&self, threshold: f64) -> bool {
        self.max_abs_r() <= threshold
    }

    /// r(z) by cubic interpolation between grid nodes.
    pub fn r_at(&self, z: f64) -> Result<C> {
        let g = &self.grid;
        let h = g.step();
        let s = (z - g.zmin) / h;
        if s < -1e-9 || s > (g.n - 1) as f64 + 1e-9 {
            return Err(Error::InsufficientCoverage(z.abs()));
        }
        let s = s.clamp(0.0, (g.n - 1) as f64);
        let i = (s.floor() as usize).min(g.n - 2);
        let start = i.saturating_sub(1).min(g.n - 4);
        let p = s - start as f64;
        let mut acc = C::new(0.0, 0.0);
        for j in 0..4 {
            let mut l = 1.0;
            for m in 0..4 {
                if m != j {
                    l *= (p - m as f64) / (j as f64 - m as f64);
                }
            }
            acc += self.r[start + j] * l;
        }
        Ok(acc)
    }
}

/// Linear time evolution of scattering data from `data.t` to `t`:
/// r and every norming constant pick up e^{8i(t−t₀)z³}.
pub fn evolve_scattering(data: &ScatteringData, t: f64) -> ScatteringData {
    let dt = t - data.t;
    let factor = |z: C| (8.0 * I * dt * z * z * z).exp();
    let mut out = data.clone();
    for (k, r) in out.r.iter_mut().enumerate() {
        let z = data.grid.node(k);
        *r *= C::from_polar(1.0, 8.0 * dt * z * z * z);
    }
    for p in out.solitons.iter_mut().chain(out.breathers.iter_mut()) {
        p.c *= factor(p.z);
    }
    out.t = t;
    out
}

/// r = −b/ă with ă = conj(a) on the real line.
pub fn reflection(a: C, b: C) -> Result<C> {
    if a.norm() <= 1e-12 {
        return Err(Error::RealAxisZero(a.norm()));
    }
    Ok(-b / a.conj())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenericityReport {
    pub violations: Vec<String>,
}

impl GenericityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks distinct velocities, simple eigenvalues and no real-axis zeros.
pub fn validate_genericity(data: &ScatteringData) -> GenericityReport {
    let mut violations = Vec::new();
    let modes: Vec<&DiscreteEigenpair> = data.modes().collect();
    for (i, a) in modes.iter().enumerate() {
        if a.z.im <= 0.0 {
            violations.push(format!("eigenvalue {} not in the upper half plane", a.z));
        }
        if a.c.norm() == 0.0 {
            violations.push(format!("vanishing norming constant at {}", a.z));
        }
        for b in &modes[i + 1..] {
            if (a.z - b.z).norm() < 1e-10 {
                violations.push(format!("repeated eigenvalue {} (simplicity)", a.z));
            } else if (a.velocity() - b.velocity()).abs() < 1e-6 {
                violations.push(format!(
                    "modes {} and {} share velocity {}",
                    a.z,
                    b.z,
                    a.velocity()
                ));
            }
        }
    }
    // |ă|² = 1/(1+|r|²) on the real line
    for (k, r) in data.r.iter().enumerate() {
        let ab = 1.0 / (1.0 + r.norm_sqr()).sqrt();
        if ab < 1e-6 || !r.norm().is_finite() {
            violations.push(format!("|ă| = {ab:e} at z = {} (real-axis zero)", data.grid.node(k)));
        }
    }
    GenericityReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_arithmetic() {
        assert_eq!(reflection(C::new(1.0, 0.0), C::new(0.0, 0.0)).unwrap(), C::new(0.0, 0.0));
        let r = reflection(C::new(0.6, 0.0), C::new(0.0, 0.8)).unwrap();
        assert!((r - C::new(0.0, -4.0 / 3.0)).norm() < 1e-15);
        assert!(matches!(reflection(C::new(1e-13, 0.0), C::new(1.0, 0.0)), Err(Error::RealAxisZero(_))));
    }

    #[test]
    fn evolution_multipliers() {
        let mut d = ScatteringData::reflectionless(vec![DiscreteEigenpair::soliton(1.0, C::new(0.0, 2.0))], vec![]);
        d.r = d.grid.nodes().iter().map(|&z| C::new(0.1 * z, 0.2)).collect();
        assert_eq!(evolve_scattering(&d, 0.0), d);
        let e = evolve_scattering(&d, 0.1);
        assert!((e.solitons[0].c.im / 2.0 - 0.8f64.exp()).abs() < 1e-12);
        assert!((e.solitons[0].c.im / 2.0 - 2.2255).abs() < 1e-4);
        for (a, b) in d.r.iter().zip(&e.r) {
            assert!((a.norm() - b.norm()).abs() <= 1e-15);
        }
    }

    #[test]
    fn genericity_cases() {
        let empty = ScatteringData::reflectionless(vec![], vec![]);
        assert!(validate_genericity(&empty).passed());
        let one = C::new(0.0, 1.0);
        let s = vec![DiscreteEigenpair::soliton(0.5, one), DiscreteEigenpair::soliton(1.0, one)];
        let ok = ScatteringData::reflectionless(s.clone(), vec![DiscreteEigenpair::breather(1.0, 1.0, one)]);
        assert!(validate_genericity(&ok).passed());
        // 4η² − 12ξ² = 4 collides with the ζ = 1 soliton
        let clash = ScatteringData::reflectionless(
            s.clone(),
            vec![DiscreteEigenpair::breather(1.0, 2.0, one)],
        );
        let rep = validate_genericity(&clash);
        assert!(!rep.passed() && rep.violations[0].contains("velocity"));
        let dup = ScatteringData::reflectionless(vec![s[0], s[0]], vec![]);
        assert!(validate_genericity(&dup).violations[0].contains("simplicity"));
    }

    #[test]
    fn cubic_interpolation_of_r() {
        let mut d = ScatteringData::reflectionless(vec![], vec![]);
        d.grid = ZGrid::symmetric(2.0, 41);
        d.r = d.grid.nodes().iter().map(|&z| C::new(z * z * z - z, 0.5 * z)).collect();
        let v = d.r_at(0.123).unwrap();
        assert!((v - C::new(0.123f64.powi(3) - 0.123, 0.0615)).norm() < 1e-13);
        assert!(d.r_at(2.5).is_err());
    }
}
