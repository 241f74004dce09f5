use crate::{Error, Result};

const STENCIL: usize = 8;
// barycentric weights (−1)^j C(7, j) for equispaced nodes
const BARY: [f64; STENCIL] = [1.0, -7.0, 21.0, -35.0, 35.0, -21.0, 7.0, -1.0];

/// Real potential sampled on a uniform grid. Off-grid values come from local
/// 8-point Lagrange interpolation; outside the grid the potential is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSample {
    x0: f64,
    h: f64,
    u: Vec<f64>,
}

impl PotentialSample {
    pub fn new(x: &[f64], u: Vec<f64>) -> Result<Self> {
        if x.len() != u.len() || x.len() < STENCIL {
            return Err(Error::InvalidArgument(format!(
                "potential needs matching x/u arrays of at least {STENCIL} points"
            )));
        }
        if u.iter().chain(x).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite potential sample".into()));
        }
        let n = x.len();
        let h = (x[n - 1] - x[0]) / (n - 1) as f64;
        if !(h > 0.0) {
            return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
        }
        for (i, &xi) in x.iter().enumerate() {
            if (xi - (x[0] + i as f64 * h)).abs() > 1e-6 * h {
                return Err(Error::InvalidArgument(format!("grid is not uniform at index {i}")));
            }
        }
        Ok(PotentialSample { x0: x[0], h, u })
    }

    /// Samples `f` at n uniform nodes on [xmin, xmax].
    pub fn from_fn(xmin: f64, xmax: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        assert!(n >= STENCIL && xmax > xmin);
        let h = (xmax - xmin) / (n - 1) as f64;
        let u = (0..n).map(|i| f(xmin + i as f64 * h)).collect();
        PotentialSample { x0: xmin, h, u }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    pub fn xmin(&self) -> f64 {
        self.x0
    }

    pub fn xmax(&self) -> f64 {
        self.x(self.u.len() - 1)
    }

    pub fn x_grid(&self) -> Vec<f64> {
        (0..self.u.len()).map(|i| self.x(i)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().all(|&v| v == 0.0)
    }

    /// Fails unless |u| ≤ 1e-8 at both grid ends.
    pub fn check_decay(&self) -> Result<()> {
        let end = self.u[0].abs().max(self.u[self.u.len() - 1].abs());
        if end > 1e-8 {
            return Err(Error::NotDecayed(end));
        }
        Ok(())
    }

    /// Interpolated value at x.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.u.len();
        let s = (x - self.x0) / self.h;
        if s < 0.0 || s > (n - 1) as f64 {
            return 0.0;
        }
        let i = s.floor() as usize;
        if s == i as f64 {
            return self.u[i];
        }
        let start = i.saturating_sub(STENCIL / 2 - 1).min(n - STENCIL);
        let (mut num, mut den) = (0.0, 0.0);
        for j in 0..STENCIL {
            let w = BARY[j] / (s - (start + j) as f64);
            num += w * self.u[start + j];
            den += w;
        }
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_accuracy() {
        let p = PotentialSample::from_fn(-20.0, 20.0, 801, |x| 1.0 / x.cosh());
        let mut err: f64 = 0.0;
        for k in 0..1000 {
            let x = -19.9 + 39.8 * k as f64 / 999.0 + 0.0123;
            err = err.max((p.eval(x) - 1.0 / x.cosh()).abs());
        }
        assert!(err < 1e-9, "{err}");
        assert_eq!(p.eval(-25.0), 0.0);
        assert_eq!(p.eval(p.x(10)), p.values()[10]);
    }

    #[test]
    fn rejects_bad_grids() {
        let x = [0.0, 1.0, 2.0, 3.5, 4.0, 5.0, 6.0, 7.0];
        assert!(PotentialSample::new(&x, vec![0.0; 8]).is_err());
        let x: Vec<f64> = (0..8).map(|i| i as f64).collect();
        assert!(PotentialSample::new(&x, vec![0.0; 7]).is_err());
        let p = PotentialSample::new(&x, vec![1.0; 8]).unwrap();
        assert!(matches!(p.check_decay(), Err(Error::NotDecayed(_))));
    }
}
