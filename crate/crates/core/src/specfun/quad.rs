use num_complex::Complex64;
use std::sync::OnceLock;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    GaussLegendre,
    Trapezoid,
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: QuadratureKind,
}

fn legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn cached_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    static GL32: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static GL128: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match n {
        32 => GL32.get_or_init(|| legendre_unit(32)).clone(),
        128 => GL128.get_or_init(|| legendre_unit(128)).clone(),
        _ => legendre_unit(n),
    }
}

impl QuadratureRule {
    /// n-point Gauss–Legendre rule on [a, b].
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Self {
        assert!(n > 0 && b > a);
        let (x, w) = cached_unit(n);
        let (hm, hw) = (0.5 * (a + b), 0.5 * (b - a));
        QuadratureRule {
            nodes: x.iter().map(|&t| hm + hw * t).collect(),
            weights: w.iter().map(|&t| hw * t).collect(),
            kind: QuadratureKind::GaussLegendre,
        }
    }

    /// Composite Gauss–Legendre: `panels` equal panels of `n` nodes each.
    pub fn composite(n: usize, panels: usize, a: f64, b: f64) -> Self {
        let mut nodes = Vec::with_capacity(n * panels);
        let mut weights = Vec::with_capacity(n * panels);
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let r = Self::gauss_legendre(n, a + p as f64 * h, a + (p + 1) as f64 * h);
            nodes.extend(r.nodes);
            weights.extend(r.weights);
        }
        QuadratureRule { nodes, weights, kind: QuadratureKind::GaussLegendre }
    }

    /// Trapezoid rule with n nodes including both endpoints.
    pub fn trapezoid(n: usize, a: f64, b: f64) -> Self {
        assert!(n >= 2 && b > a);
        let h = (b - a) / (n - 1) as f64;
        let nodes = (0..n).map(|i| a + i as f64 * h).collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        QuadratureRule { nodes, weights, kind: QuadratureKind::Trapezoid }
    }

    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn integrate_real<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Principal value of ∫_a^b f(ζ)/(ζ − pole) dζ by singularity subtraction.
///
/// The regular part (f(ζ) − f(pole))/(ζ − pole) is integrated with composite
/// Gauss–Legendre on each side of the pole, and f(pole)·log|(b−pole)/(a−pole)|
/// is added back.
pub fn cauchy_pv_integral<F>(f: F, a: f64, b: f64, pole: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(b > a) {
        return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
    }
    let scale = (b - a).abs().max(1.0);
    if (pole - a).abs() <= 1e-14 * scale || (pole - b).abs() <= 1e-14 * scale {
        return Err(Error::PoleOnEndpoint { a, b, pole });
    }
    if pole < a || pole > b {
        return Err(Error::InvalidArgument(format!("pole {pole} outside [{a}, {b}]")));
    }
    let fp = f(pole);
    let regular = |z: f64| (f(z) - fp) / (z - pole);
    let panels = |len: f64| ((len / (b - a) * 16.0).ceil() as usize).max(2);
    let left = QuadratureRule::composite(32, panels(pole - a), a, pole).integrate(regular);
    let right = QuadratureRule::composite(32, panels(b - pole), pole, b).integrate(regular);
    Ok(left + right + fp * ((b - pole) / (pole - a)).ln())
}
