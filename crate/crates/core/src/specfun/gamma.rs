use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Error, Result};

// Lanczos coefficients for g = 671/128 (15 terms including the constant).
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn lanczos(z: Complex64) -> Complex64 {
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    for (j, c) in LANCZOS.iter().enumerate() {
        ser += c / (z + (j + 1) as f64);
    }
    let tmp = z + LANCZOS_G;
    (z + 0.5) * tmp.ln() - tmp + (SQRT_2PI * ser).ln() - z.ln()
}

/// log Γ(z), continuous on the right half plane and real for real z > 0.
///
/// Left of Re z = 1/2 the reflection formula is used, so the imaginary part
/// is only defined modulo 2π there; `exp(log_gamma(z))` is always Γ(z).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!("log_gamma of non-finite {z}")));
    }
    let n = z.re.round();
    if n <= 0.0 && (z - n).norm() <= 1e-14 {
        return Err(Error::GammaPole(n));
    }
    if z.re >= 0.5 {
        Ok(lanczos(z))
    } else {
        let s = (PI * z).sin();
        Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - lanczos(1.0 - z))
    }
}

/// Γ(z).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_one_is_one() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..20 {
            let g = gamma(c(n as f64, 0.0)).unwrap();
            assert!((g.re / f - 1.0).abs() < 1e-13, "n = {n}");
            f *= n as f64;
        }
        let half = gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn recurrence() {
        let z = c(0.3, 0.7);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-12);
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |Γ(iκ)|² = π / (κ sinh πκ)
        for &k in &[0.05, 0.3, 0.5, 1.0, 2.0] {
            let g = gamma(c(0.0, k)).unwrap();
            let exact = PI / (k * (PI * k).sinh());
            assert!((g.norm_sqr() / exact - 1.0).abs() < 1e-13, "κ = {k}");
        }
        let g = gamma(c(0.0, 0.5)).unwrap().norm_sqr();
        assert!((g - 2.7303).abs() < 1e-4);
    }

    #[test]
    fn reference_values() {
        // Γ(1+i) and Γ(0.5+3i), high-precision references
        let g = gamma(c(1.0, 1.0)).unwrap();
        let r = c(0.498_015_668_118_356_04, -0.154_949_828_301_810_68);
        assert!((g - r).norm() / r.norm() < 1e-13);
        let g = gamma(c(0.5, 3.0)).unwrap();
        let r = c(0.021_445_670_552_430_646, 0.006_865_364_837_261_678);
        assert!((g - r).norm() / r.norm() < 1e-12);
    }

    #[test]
    fn large_argument_stirling() {
        // log Γ(z) ≈ (z-1/2) log z - z + log(2π)/2 + 1/(12z) - 1/(360 z³) + 1/(1260 z⁵)
        for &z in &[c(40.0, 10.0), c(20.0, -30.0), c(3.0, 45.0)] {
            let st = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * z)
                - 1.0 / (360.0 * z.powi(3))
                + 1.0 / (1260.0 * z.powi(5))
                - 1.0 / (1680.0 * z.powi(7));
            let d = log_gamma(z).unwrap() - st;
            let wrapped = (d.im / (2.0 * PI)).round() * 2.0 * PI;
            assert!(d.re.abs() < 1e-12 && (d.im - wrapped).abs() < 1e-12, "z = {z}: {d}");
        }
    }

    #[test]
    fn poles_rejected() {
        assert!(matches!(log_gamma(c(0.0, 0.0)), Err(Error::GammaPole(_))));
        assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::GammaPole(_))));
        assert!(log_gamma(c(-3.0, 1e-10)).is_ok());
    }
}
