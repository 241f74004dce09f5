use std::f64::consts::PI;

const AI0: f64 = 0.355_028_053_887_817_239_26;
const AIP0: f64 = -0.258_819_403_792_806_798_41;

// Below these |s| the Maclaurin series is used; beyond, the asymptotic series.
const SWITCH_POS: f64 = 5.5;
const SWITCH_NEG: f64 = 6.9;

fn maclaurin(s: f64) -> (f64, f64) {
    let s3 = s * s * s;
    // Ai = Ai(0) f + Ai'(0) g with f = 1 + s³/6 + …, g = s + s⁴/12 + …
    let (mut f, mut g, mut fp, mut gp) = (1.0, s, 0.0, 1.0);
    let (mut tf, mut tg) = (1.0, s);
    let (mut df, mut dg) = (s * s / 2.0, 1.0);
    for k in 0..200 {
        let kf = k as f64;
        tf *= s3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        tg *= s3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        if k > 0 {
            df *= s3 / (3.0 * kf * (3.0 * kf + 2.0));
        }
        dg *= s3 / ((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        f += tf;
        g += tg;
        fp += df;
        gp += dg;
        let small = tf.abs() + tg.abs() + df.abs() + dg.abs();
        if small < 1e-18 * (f.abs() + g.abs() + fp.abs() + gp.abs()) {
            break;
        }
    }
    (AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
}

fn u_coeffs(n: usize) -> Vec<f64> {
    let mut u = vec![1.0; n];
    for k in 1..n {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}

/// Asymptotic expansion of (Ai(s), Ai'(s)) for large |s|, optimally truncated.
pub fn airy_asymptotic(s: f64) -> (f64, f64) {
    let x = s.abs();
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let u = u_coeffs(40);
    let v: Vec<f64> = u
        .iter()
        .enumerate()
        .map(|(k, &uk)| {
            let kf = k as f64;
            -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk
        })
        .collect();
    let q = x.powf(0.25);
    if s > 0.0 {
        let (mut su, mut sv) = (0.0, 0.0);
        let mut last = f64::INFINITY;
        let mut p = 1.0;
        for k in 0..u.len() {
            let tu = u[k] * p;
            if tu.abs() > last {
                break;
            }
            last = tu.abs();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            su += sign * tu;
            sv += sign * v[k] * p;
            p /= zeta;
        }
        let e = (-zeta).exp() / (2.0 * PI.sqrt());
        (e * su / q, -e * q * sv)
    } else {
        // even and odd partial sums, alternating in pairs
        let (mut ue, mut uo, mut ve, mut vo) = (0.0, 0.0, 0.0, 0.0);
        let mut last = f64::INFINITY;
        let mut p = 1.0;
        for k in 0..u.len() {
            let tu = u[k] * p;
            if tu.abs() > last {
                break;
            }
            last = tu.abs();
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                ue += sign * tu;
                ve += sign * v[k] * p;
            } else {
                uo += sign * tu;
                vo += sign * v[k] * p;
            }
            p /= zeta;
        }
        let ph = zeta + PI / 4.0;
        let (sn, cs) = ph.sin_cos();
        let ai = (sn * ue - cs * uo) / (PI.sqrt() * q);
        let aip = -q / PI.sqrt() * (cs * ve + sn * vo);
        (ai, aip)
    }
}

fn airy_pair(s: f64) -> (f64, f64) {
    if (s >= 0.0 && s <= SWITCH_POS) || (s < 0.0 && -s <= SWITCH_NEG) {
        maclaurin(s)
    } else {
        airy_asymptotic(s)
    }
}

/// Airy function Ai(s) for real s.
pub fn airy_ai(s: f64) -> f64 {
    airy_pair(s).0
}

/// Derivative Ai'(s) for real s.
pub fn airy_ai_prime(s: f64) -> f64 {
    airy_pair(s).1
}

#[cfg(test)]
mod tests {
    use super::*;

    // (s, Ai(s), Ai'(s)) at 30-digit precision
    const REF: [(f64, f64, f64); 22] = [
        (-40.0, -0.045933923437957249632, -1.389090875260718381),
        (-25.0, 0.16352657883042946949, 0.96237885138769741004),
        (-10.0, 0.040241238486443190689, 0.9962650441327900559),
        (-8.0, -0.052705050356386202622, 0.93556093819830655103),
        (-7.0, 0.18428083525050563728, -0.77100816841012654773),
        (-6.0, -0.32914517362982310523, 0.34593548728134289493),
        (-5.0, 0.35076100902411431979, 0.32719281855444313679),
        (-3.0, -0.37881429367765807435, 0.31458376921659881365),
        (-1.0, 0.5355608832923521188, -0.010160567116645209395),
        (0.0, 0.35502805388781723926, -0.25881940379280679841),
        (1.0, 0.13529241631288141552, -0.15914744129679321279),
        (2.5, 0.015725923380470489995, -0.026250881035903230365),
        (4.0, 0.00095156385120480187362, -0.0019586409502041789001),
        (5.0, 0.00010834442813607441735, -0.000247413890868462476),
        (5.5, 0.000033685311908599814425, -0.00008046339130556514338),
        (6.0, 9.9476943602528895702e-6, -0.000024765200397034954754),
        (6.5, 2.7958823432049135855e-6, -7.2319314666017925598e-6),
        (7.0, 7.4921288639971670808e-7, -2.0081508947387919912e-6),
        (8.0, 4.6922076160992316256e-8, -1.3414392979067865743e-7),
        (10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10),
        (20.0, 1.6916728686705403136e-27, -7.5863916257483549605e-27),
        (40.0, 6.3657426585529149096e-75, -4.0300179776006780423e-74),
    ];

    #[test]
    fn reference_values() {
        for &(s, ai, aip) in &REF {
            let (a, ap) = airy_pair(s);
            assert!((a - ai).abs() <= 1e-12, "Ai({s}): {a} vs {ai}");
            assert!((ap - aip).abs() <= 1e-11 * (1.0 + aip.abs()), "Ai'({s}): {ap} vs {aip}");
        }
    }

    #[test]
    fn value_at_zero_from_long_series() {
        assert!((airy_ai(0.0) - 0.355_028_053_8).abs() < 1e-10);
        assert!(airy_ai(10.0) < 1e-9 && airy_ai(10.0) > 0.0);
    }

    #[test]
    fn defining_ode() {
        let h = 1e-3;
        let s = 1.0;
        let d2 = (airy_ai(s + h) - 2.0 * airy_ai(s) + airy_ai(s - h)) / (h * h);
        assert!((d2 - s * airy_ai(s)).abs() < 1e-6);
    }

    #[test]
    fn overlap_at_switch_points() {
        for &s in &[SWITCH_POS, -SWITCH_NEG] {
            let (a, ap) = maclaurin(s);
            let (b, bp) = airy_asymptotic(s);
            assert!((a - b).abs() < 1e-11, "s = {s}: {a} vs {b}");
            assert!((ap - bp).abs() < 1e-10, "s = {s}: {ap} vs {bp}");
        }
    }

    #[test]
    fn asymptotic_agrees_beyond_eight() {
        for i in 0..=64 {
            let s = 8.0 + 0.5 * i as f64;
            let (b, _) = airy_asymptotic(s);
            assert!((airy_ai(s) - b).abs() < 1e-10);
        }
    }
}
