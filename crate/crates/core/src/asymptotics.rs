//! Large-`M̃` limit of the scaled density: the Thomas–Fermi profile, the
//! first `1/M̃²` correction (with endpoint atoms in two dimensions), their
//! Stieltjes transforms and the operators `A`, `B` linking successive orders.

use std::f64::consts::PI;

use num_traits::Zero;

use crate::density::{Residual, ShellDensity};
use crate::error::{Error, Result};
use crate::exact::{factorial, frac, int, pochhammer_half, pow2, ExactRational};
use crate::moments::POLE_GUARD;
use crate::series::Series;
use crate::shell::ShellSpec;
use crate::special::{gamma, gamma_ratio, recip_gamma};

/// Leading density `(2π)^{-d/2} Γ(d+1)/Γ(d/2+1) (1 - r²/2)^{d/2}` on
/// `r < √2`, normalised to unit mass.
pub fn tf_density(d: u32, r: f64) -> f64 {
    let u = 1.0 - r * r / 2.0;
    if r < 0.0 || u <= 0.0 {
        return 0.0;
    }
    let df = d as f64;
    (2.0 * PI).powf(-df / 2.0) * gamma(df + 1.0) / gamma(df / 2.0 + 1.0) * u.powf(df / 2.0)
}

/// `ρ_(1)(r) = (1/4π) (2 - r²)^{-5/2}` for `d = 1`, `0 < r < √2`.
pub fn correction_density_d1(r: f64) -> Result<f64> {
    if !(r >= 0.0 && r * r < 2.0) {
        return Err(Error::Domain(format!("r = {r} outside [0, √2)")));
    }
    Ok((2.0 - r * r).powf(-2.5) / (4.0 * PI))
}

/// `∫_{-√2}^{√2} r^{2k} ρ_(1)(|r|) dr` continued through the Beta integral:
/// `2^{k-3}/(2π) · Γ(k+½) Γ(-3/2) / Γ(k-1)`.
pub fn continued_moment_d1(k: f64) -> Result<f64> {
    let a = k + 0.5;
    if a <= 0.0 && (a - a.round()).abs() < POLE_GUARD {
        return Err(Error::Domain(format!("k = {k} is at a pole of Γ(k + 1/2)")));
    }
    let gamma_m32 = 4.0 * PI.sqrt() / 3.0;
    let pre = 2f64.powf(k - 3.0) / (2.0 * PI) * gamma_m32;
    if k > 1.0 {
        Ok(pre * gamma_ratio(k - 1.0, 1.5))
    } else {
        Ok(pre * gamma(a) * recip_gamma(k - 1.0))
    }
}

/// Integer-`k` value of [`continued_moment_d1`]: `2^{k-2} (½)_k / (3 (k-2)!)`,
/// zero for `k ≤ 1`.
pub fn continued_moment_d1_exact(k: u32) -> ExactRational {
    if k <= 1 {
        return ExactRational::zero();
    }
    pow2(k as i64 - 2) * pochhammer_half(1, k as u64)
        / (ExactRational::from_integer(factorial(k as u64 - 2)) * int(3))
}

/// Signed measure on `x = r² ∈ [0, 2]`: a polynomial density plus a point
/// mass and a `δ'` at the endpoint `x = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure1D {
    /// `poly[j]` multiplies `x^j`.
    pub poly: Vec<ExactRational>,
    pub delta_weight: ExactRational,
    pub delta_prime_weight: ExactRational,
}

impl AtomicMeasure1D {
    pub const ENDPOINT: i64 = 2;

    /// `∫ x^k dμ`; the `δ'(x-2)` term contributes `-k 2^{k-1}`.
    pub fn moment(&self, k: u32) -> ExactRational {
        let k = k as i64;
        let poly: ExactRational = self
            .poly
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let n = k + j as i64 + 1;
                c * pow2(n) / int(n)
            })
            .fold(ExactRational::zero(), |a, b| a + b);
        let atom = &self.delta_weight * pow2(k);
        let dipole = if k == 0 {
            ExactRational::zero()
        } else {
            &self.delta_prime_weight * int(-k) * pow2(k - 1)
        };
        poly + atom + dipole
    }

    /// Absolutely continuous part at `x`.
    pub fn density(&self, x: f64) -> f64 {
        if !(0.0..Self::ENDPOINT as f64).contains(&x) {
            return 0.0;
        }
        self.poly
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::exact::to_f64(c))
    }
}

/// `ρ̃_(1)` for `d = 2`: `¼(1 - x/2)` on `[0, 2]`, `-¼ δ(x-2)`, `-⅓ δ'(x-2)`.
pub fn correction_measure_d2() -> AtomicMeasure1D {
    AtomicMeasure1D {
        poly: vec![frac(1, 4), frac(-1, 8)],
        delta_weight: frac(-1, 4),
        delta_prime_weight: frac(-1, 3),
    }
}

/// Laurent coefficients of a Stieltjes transform: `coeffs[k] = μ_{k,l}^{(d)}`,
/// the coefficient of `x^{-k-1}` in `G(x) = ∫ ρ̃(s)/(x - s) ds` with `x = z²`.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesSeries {
    pub d: u32,
    pub l: u32,
    pub coeffs: Vec<ExactRational>,
}

/// Expands the closed-form transforms in `y = 1/x`:
///
/// * `(1,0)`: `1 - √(1-2y)`
/// * `(1,1)`: `¼ y³ (1-2y)^{-5/2}`
/// * `(2,0)`: `-L + L/(2y) + 1`
/// * `(2,1)`: `-(1/12)(3L - 3L/(2y) + 3y/(1-2y) - 4y²/(1-2y)² - 3)`
///
/// with `L = log(1-2y)`.
pub fn stieltjes_series(d: u32, l: u32, n_terms: usize) -> Result<StieltjesSeries> {
    let order = n_terms + 1;
    let one = Series::constant(int(1), order);
    let y = Series::<ExactRational>::variable(order);
    let one_minus_2y = &one - &y.scale(&int(2));
    let h = match (d, l) {
        (1, 0) => &one - &one_minus_2y.powf(&frac(1, 2)),
        (1, 1) => &(&y * &(&y * &y)).scale(&frac(1, 4)) * &one_minus_2y.powf(&frac(-5, 2)),
        (2, 0) => {
            let log = one_minus_2y.ln();
            &(&(-&log) + &log.shift(-1).scale(&frac(1, 2))) + &one
        }
        (2, 1) => {
            let log = one_minus_2y.ln();
            let inv = one_minus_2y.recip();
            let inner = &(&(&log.scale(&int(3)) - &log.shift(-1).scale(&frac(3, 2)))
                + &(&y * &inv).scale(&int(3)))
                - &(&(&(&y * &y) * &inv) * &inv).scale(&int(4));
            (&inner - &one.scale(&int(3))).scale(&frac(-1, 12))
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "closed-form Stieltjes transform available for (d, l) in {{1, 2}} x {{0, 1}}, not ({d}, {l})"
            )))
        }
    };
    Ok(StieltjesSeries {
        d,
        l,
        coeffs: (1..=n_terms).map(|k| h.coeff(k)).collect(),
    })
}

/// `A ρ = ⅛(ρ''' + ((d-1)/r) ρ'' - ((d-1)/r²) ρ')` from `[ρ, ρ', ρ'', ρ''']`.
pub fn operator_a(d: u32, r: f64, j: [f64; 4]) -> Residual {
    let dm1 = d as f64 - 1.0;
    let terms = [
        j[3] / 8.0,
        dm1 / r * j[2] / 8.0,
        -dm1 / (r * r) * j[1] / 8.0,
    ];
    Residual::from_terms(&terms)
}

/// `B ρ = (r²/2 - 1) ρ' - (rd/2) ρ`.
pub fn operator_b(d: u32, r: f64, j: [f64; 4]) -> Residual {
    Residual::from_terms(&[(r * r / 2.0 - 1.0) * j[1], -r * d as f64 / 2.0 * j[0]])
}

/// `[ρ, ρ', ρ'', ρ''']` of `c (1 - r²/2)^{a}`.
fn power_profile_jet(c: f64, a: f64, r: f64) -> [f64; 4] {
    let u = 1.0 - r * r / 2.0;
    [
        c * u.powf(a),
        -c * a * r * u.powf(a - 1.0),
        -c * a * u.powf(a - 1.0) + c * a * (a - 1.0) * r * r * u.powf(a - 2.0),
        c * a * (a - 1.0) * (3.0 * r * u.powf(a - 2.0) - (a - 2.0) * r.powi(3) * u.powf(a - 3.0)),
    ]
}

fn tf_jet(d: u32, r: f64) -> [f64; 4] {
    power_profile_jet(tf_density(d, 0.0), d as f64 / 2.0, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorCheck {
    /// `B ρ_(0) = 0`.
    BOnRho0,
    /// `A ρ_(0) = 0` in two dimensions.
    AOnRho0D2,
    /// `B ρ_(1) = A ρ_(0)` on `0 < r < √2` for `d = 2`, using the
    /// continuous part of `ρ_(1)`.
    CoupledL1D2,
}

/// Largest relative residual over an interior radial grid.
pub fn operator_ab_check(d: u32, which: OperatorCheck) -> Result<f64> {
    if which != OperatorCheck::BOnRho0 && d != 2 {
        return Err(Error::InvalidParameter(format!(
            "{which:?} is a two-dimensional identity, got d = {d}"
        )));
    }
    let (lo, hi) = (0.05, 2f64.sqrt() - 0.05);
    let n = 64;
    let mut worst = 0.0f64;
    for i in 0..=n {
        let r = lo + (hi - lo) * i as f64 / n as f64;
        let rho0 = tf_jet(d, r);
        let res = match which {
            OperatorCheck::BOnRho0 => operator_b(d, r, rho0),
            OperatorCheck::AOnRho0D2 => operator_a(d, r, rho0),
            OperatorCheck::CoupledL1D2 => {
                // ρ̃ = (Ω₂/2) ρ = π ρ, so ρ_(1) = (1/4π)(1 - r²/2) inside.
                let rho1 = power_profile_jet(1.0 / (4.0 * PI), 1.0, r);
                let b = operator_b(d, r, rho1);
                let a = operator_a(d, r, rho0);
                Residual {
                    value: b.value - a.value,
                    scale: b.scale.max(a.scale),
                }
            }
        };
        worst = worst.max(res.relative());
    }
    Ok(worst)
}

/// Residual of `B g = M̃^{-2} A g` for `g(r) = ρ(M̃^{1/2} r)`.
pub fn scaled_ode_check(spec: ShellSpec, r: f64) -> Result<Residual> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    let mt = spec.m_tilde_f64();
    let s = mt.sqrt();
    let raw = ShellDensity::new(spec).derivatives(s * r);
    let mut jet = [0.0; 4];
    for (n, v) in raw.iter().enumerate() {
        jet[n] = s.powi(n as i32) * v;
    }
    let b = operator_b(spec.d(), r, jet);
    let a = operator_a(spec.d(), r, jet);
    let w = mt.powi(-2);
    Ok(Residual {
        value: b.value - w * a.value,
        scale: b.scale.max(w * a.scale),
    })
}

/// `Ω_d ∫_0^√2 r^{2k+d-1} ρ_TF(r) dr` by quadrature.
pub fn tf_moment_numeric(d: u32, k: f64) -> Result<f64> {
    let quad = crate::quadrature::Quadrature::default();
    let p = 2.0 * k + d as f64 - 1.0;
    let est = quad.integrate(|r| r.powf(p) * tf_density(d, r), 0.0, 2f64.sqrt())?;
    Ok(crate::density::sphere_area(d) * est.value)
}
