//! Scalar special-function helpers: Gamma ratios, terminating `₂F₁`, and the
//! Airy function `Ai` with its derivative.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `Γ(x)` for real `x`, infinite at non-positive integers.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `1/Γ(x)`, exactly zero at the poles `x = 0, -1, -2, …`.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else if x > 170.0 {
        (-libm::lgamma(x)).exp()
    } else {
        1.0 / gamma(x)
    }
}

/// `Γ(a + k) / Γ(a)` for `a > 0` and `a + k > 0`. The integer part of `k`
/// is applied as an explicit product so integer shifts are exact up to
/// rounding.
pub fn gamma_ratio(a: f64, k: f64) -> f64 {
    debug_assert!(a > 0.0 && a + k > 0.0);
    if k >= 0.0 {
        let n = k.floor();
        let f = k - n;
        let mut acc = if f == 0.0 {
            1.0
        } else {
            (libm::lgamma(a + f) - libm::lgamma(a)).exp()
        };
        let mut log_extra = 0.0;
        let mut x = a + f;
        for _ in 0..n as u64 {
            acc *= x;
            if acc > 1e280 {
                log_extra += acc.ln();
                acc = 1.0;
            }
            x += 1.0;
        }
        acc * log_extra.exp()
    } else {
        (libm::lgamma(a + k) - libm::lgamma(a)).exp()
    }
}

/// Terminating `₂F₁(-n, b; c; z) = Σ_{j=0}^{n} (-n)_j (b)_j / ((c)_j j!) z^j`.
pub fn hyp2f1_terminating(n: u64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut term = 1.0;
    for j in 0..n {
        let jf = j as f64;
        let den = (c + jf) * (jf + 1.0);
        if den == 0.0 {
            return Err(Error::Domain(format!(
                "(c)_j vanishes at c = {c}, j = {j} before the series terminates"
            )));
        }
        term *= (jf - n as f64) * (b + jf) * z / den;
        sum += term;
    }
    Ok(sum)
}

// Ai(0) = 3^{-2/3}/Γ(2/3), -Ai'(0) = 3^{-1/3}/Γ(1/3).
const AI0: f64 = 0.355_028_053_887_817_239_26;
const AIP0: f64 = 0.258_819_403_792_806_798_41;

/// Lower and upper limits of the supported `Ai` argument range.
pub const AIRY_RANGE: (f64, f64) = (-15.0, 20.0);
/// Maclaurin series is used on `[AIRY_SERIES_LO, AIRY_SERIES_HI]`,
/// asymptotic expansions outside. Chosen where both routes are below 1e-11
/// absolute error.
pub const AIRY_SERIES_LO: f64 = -7.0;
pub const AIRY_SERIES_HI: f64 = 6.0;

/// `(Ai(x), Ai'(x))` on [`AIRY_RANGE`].
pub fn airy_ai_pair(x: f64) -> Result<(f64, f64)> {
    let (lo, hi) = AIRY_RANGE;
    if !(lo..=hi).contains(&x) {
        return Err(Error::Range {
            what: "Airy argument",
            value: x,
            lo,
            hi,
        });
    }
    Ok(if x < AIRY_SERIES_LO {
        airy_asymptotic_negative(-x)
    } else if x > AIRY_SERIES_HI {
        airy_asymptotic_positive(x)
    } else {
        airy_maclaurin(x)
    })
}

pub fn airy_ai(x: f64) -> Result<f64> {
    airy_ai_pair(x).map(|p| p.0)
}

pub fn airy_ai_prime(x: f64) -> Result<f64> {
    airy_ai_pair(x).map(|p| p.1)
}

fn airy_maclaurin(x: f64) -> (f64, f64) {
    // Ai = AI0·f - AIP0·g with f = Σ 3^k (1/3)_k x^{3k}/(3k)!,
    // g = Σ 3^k (2/3)_k x^{3k+1}/(3k+1)!.
    let x3 = x * x * x;
    let (mut f, mut fp) = (1.0, 0.0);
    let (mut g, mut gp) = (x, 1.0);
    let (mut tf, mut tg) = (1.0, x);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / (k3 * (k3 - 1.0));
        tg *= x3 / ((k3 + 1.0) * k3);
        f += tf;
        fp += tf * k3 / x;
        g += tg;
        gp += tg * (k3 + 1.0) / x;
        if tf.abs() < 1e-18 * f.abs().max(1.0) && tg.abs() < 1e-18 * g.abs().max(1.0) {
            break;
        }
    }
    if x == 0.0 {
        fp = 0.0;
        gp = 1.0;
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

/// Coefficients `u_k` of the Airy asymptotic series and `v_k` of its
/// derivative, truncated where the terms at `zeta` stop decreasing.
fn asymptotic_terms(zeta: f64) -> (Vec<f64>, Vec<f64>) {
    let (mut u, mut v) = (vec![1.0], vec![1.0]);
    let mut uk = 1.0;
    let mut last = f64::INFINITY;
    let mut zk = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        uk *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        zk /= zeta;
        let size = uk * zk * (6.0 * kf + 1.0) / (6.0 * kf - 1.0);
        if size > last || size < 1e-17 {
            break;
        }
        last = size;
        u.push(uk);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
    }
    (u, v)
}

fn airy_asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = asymptotic_terms(zeta);
    let alt = |c: &[f64]| {
        c.iter().enumerate().rev().fold(0.0, |acc, (k, ck)| {
            acc + ck * (-1.0f64).powi(k as i32) * zeta.powi(-(k as i32))
        })
    };
    let pre = (-zeta).exp() / (2.0 * PI.sqrt());
    let x4 = x.powf(0.25);
    (pre / x4 * alt(&u), -pre * x4 * alt(&v))
}

fn airy_asymptotic_negative(x: f64) -> (f64, f64) {
    // Argument is -x with x > 0.
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = asymptotic_terms(zeta);
    let split = |c: &[f64]| {
        let (mut even, mut odd) = (0.0, 0.0);
        for (k, ck) in c.iter().enumerate().rev() {
            let term = ck * zeta.powi(-(k as i32));
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                even += sign * term;
            } else {
                odd += sign * term;
            }
        }
        (even, odd)
    };
    let (p, q) = split(&u);
    let (r, s) = split(&v);
    let phase = zeta + PI / 4.0;
    let (sn, cs) = phase.sin_cos();
    let x4 = x.powf(0.25);
    let ai = (sn * p - cs * q) / (PI.sqrt() * x4);
    let aip = -x4 / PI.sqrt() * (cs * r + sn * s);
    (ai, aip)
}

#[cfg(test)]
mod tests {
    use super::*;

    // (x, Ai(x), Ai'(x)) from 30-digit arbitrary-precision evaluation.
    const AIRY_REFERENCE: [(f64, f64, f64); 18] = [
        (-15.0, 0.27821749087082892953, 0.27237420430864202083),
        (-10.0, 0.040241238486443190689, 0.9962650441327900559),
        (-7.0, 0.18428083525050563728, -0.77100816841012654773),
        (-5.0, 0.35076100902411431979, 0.32719281855444313679),
        (-4.5, 0.29215278105595946688, -0.52336253231574770071),
        (-2.0, 0.22740742820168557599, 0.61825902074169104141),
        (-1.0, 0.5355608832923521188, -0.010160567116645209395),
        (0.0, 0.35502805388781723926, -0.25881940379280679841),
        (1.0, 0.13529241631288141552, -0.15914744129679321279),
        (2.0, 0.034924130423274379135, -0.053090384433653631704),
        (3.0, 0.0065911393574607191443, -0.011912976705951318474),
        (4.5, 0.00033025032351430898366, -0.00071786656755750888869),
        (5.0, 0.00010834442813607441735, -0.000247413890868462476),
        (6.0, 9.9476943602528895702e-6, -0.000024765200397034954754),
        (7.0, 7.4921288639971670808e-7, -2.0081508947387919912e-6),
        (10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10),
        (15.0, 2.164962520737992299e-18, -8.4205679540177727661e-18),
        (20.0, 1.6916728686705403136e-27, -7.5863916257483549605e-27),
    ];

    #[test]
    fn airy_matches_reference() {
        for &(x, ai, aip) in &AIRY_REFERENCE {
            let (a, ap) = airy_ai_pair(x).unwrap();
            assert!((a - ai).abs() < 1e-10, "Ai({x}) = {a}, want {ai}");
            assert!(
                (ap - aip).abs() < 1e-10 * x.abs().max(1.0).sqrt(),
                "Ai'({x}) = {ap}, want {aip}"
            );
        }
    }

    #[test]
    fn airy_routes_agree_at_switch_points() {
        for x in [AIRY_SERIES_HI, 6.5] {
            let (a, ap) = airy_maclaurin(x);
            let (b, bp) = airy_asymptotic_positive(x);
            assert!((a - b).abs() < 1e-11 && (ap - bp).abs() < 1e-10, "x = {x}");
        }
        for x in [-AIRY_SERIES_LO, 7.5] {
            let (a, ap) = airy_maclaurin(-x);
            let (b, bp) = airy_asymptotic_negative(x);
            assert!(
                (a - b).abs() < 1e-10 && (ap - bp).abs() < 1e-9,
                "x = {x}: {a} {b} {ap} {bp}"
            );
        }
    }

    #[test]
    fn airy_at_origin() {
        let ai0 = 3f64.powf(-2.0 / 3.0) / gamma(2.0 / 3.0);
        assert!((airy_ai(0.0).unwrap() - ai0).abs() < 1e-14);
        assert!((airy_ai(0.0).unwrap() - 0.3550280539).abs() < 1e-10);
    }

    #[test]
    fn airy_ode_by_finite_differences() {
        let h = 1e-3;
        for x in [-2.0, 0.0, 3.0] {
            let f = |t: f64| airy_ai(t).unwrap();
            let second = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            assert!((second - x * f(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn airy_positive_and_decreasing_on_positive_axis() {
        let mut prev = f64::INFINITY;
        for i in 0..=200 {
            let x = i as f64 * 0.1;
            let a = airy_ai(x).unwrap();
            assert!(a > 0.0 && a < prev, "x = {x}");
            prev = a;
        }
    }

    #[test]
    fn airy_range_enforced() {
        assert!(matches!(airy_ai(-15.5), Err(Error::Range { .. })));
        assert!(airy_ai(20.5).is_err());
    }

    #[test]
    fn gamma_ratio_matches_products() {
        assert!((gamma_ratio(0.5, 3.0) - 0.5 * 1.5 * 2.5).abs() < 1e-15);
        assert!((gamma_ratio(1.0, 0.5) - PI.sqrt() / 2.0).abs() < 1e-15);
        let big = gamma_ratio(1.5, 30.0);
        let direct: f64 = (0..30).map(|j| 1.5 + j as f64).product();
        assert!((big / direct - 1.0).abs() < 1e-14);
        assert!((gamma_ratio(1.0, -0.5) - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn reciprocal_gamma_poles() {
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-3.0), 0.0);
        assert!((recip_gamma(-1.5) - 3.0 / (4.0 * PI.sqrt())).abs() < 1e-14);
    }
}
