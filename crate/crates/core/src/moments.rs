//! Normalised radial moments `m_{2k} = (1/N₀) ∫ ‖r‖^{2k} ρ(r) d^d r`.
//!
//! Integer `k` is handled exactly (closed form and the three-term
//! recurrence); real `k > -d/2` through the terminating hypergeometric
//! continuation.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    binomial, factorial, frac, hyp2f1_terminating, int, pochhammer_half, pow2, ExactRational,
};
use crate::shell::ShellSpec;
use crate::special;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Recurrence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub spec: ShellSpec,
    /// `values[k] = m_{2k}`.
    pub values: Vec<ExactRational>,
    pub provenance: Provenance,
}

impl MomentTable {
    pub fn closed_form(spec: ShellSpec, k_max: u32) -> Self {
        Self {
            spec,
            values: (0..=k_max).map(|k| moment_closed_form(spec, k)).collect(),
            provenance: Provenance::ClosedForm,
        }
    }

    pub fn recurrence(spec: ShellSpec, k_max: u32) -> Self {
        moment_recurrence_table(spec, k_max)
    }

    pub fn k_max(&self) -> u32 {
        self.values.len() as u32 - 1
    }
}

/// `m_{2k} = (d/2)_k / N₀ · Σ_{l=0}^{k} C(k, k-l) C(M+d, d+l) 2^l`.
pub fn moment_closed_form(spec: ShellSpec, k: u32) -> ExactRational {
    let (d, m) = (spec.d() as u64, spec.shell() as u64);
    let sum = (0..=k as i64).fold(ExactRational::zero(), |acc, l| {
        acc + binomial(k as u64, k as i64 - l) * binomial(m + d, d as i64 + l) * pow2(l)
    });
    pochhammer_half(spec.d(), k as u64) * sum / ExactRational::from_integer(spec.particle_number())
}

/// Builds `m_0 … m_{2k_max}` from `m_0 = 1` with
/// `2(k+d+1)/(2k+d) · m_{2k+2} = (2M+d+1) m_{2k} + k(k+d/2-1) m_{2k-2}`.
/// At `k = 0` the `m_{-2}` term carries a zero coefficient and is dropped.
pub fn moment_recurrence_table(spec: ShellSpec, k_max: u32) -> MomentTable {
    let d = spec.d() as i64;
    let two_mt = int(spec.two_m_tilde() as i64);
    let mut values = vec![ExactRational::one()];
    for k in 0..k_max as i64 {
        let mut rhs = &two_mt * &values[k as usize];
        if k > 0 {
            rhs += int(k) * (int(k) + frac(d, 2) - int(1)) * &values[k as usize - 1];
        }
        let next = rhs * int(2 * k + d) / int(2 * (k + d + 1));
        values.push(next);
    }
    MomentTable {
        spec,
        values,
        provenance: Provenance::Recurrence,
    }
}

/// Default guard band around the pole at `k = -d/2`.
pub const POLE_GUARD: f64 = 1e-6;

/// `m_{2k}` for real `k > -d/2`:
/// `Γ(d/2+k)/Γ(d/2) · ₂F₁(-M, -k; d+1; 2)`, the hypergeometric factor being a
/// polynomial of degree `M` in `k`.
pub fn moment_real_k(spec: ShellSpec, k: f64) -> Result<f64> {
    moment_real_k_guarded(spec, k, POLE_GUARD)
}

pub fn moment_real_k_guarded(spec: ShellSpec, k: f64, guard: f64) -> Result<f64> {
    let half_d = spec.d() as f64 / 2.0;
    if !(k > -half_d + guard) {
        return Err(Error::Domain(format!(
            "moment order k = {k} must exceed -d/2 = {} by at least {guard}",
            -half_d
        )));
    }
    let hyp = special::hyp2f1_terminating(spec.shell() as u64, -k, spec.d() as f64 + 1.0, 2.0)?;
    Ok(special::gamma_ratio(half_d, k) * hyp)
}

/// Meixner polynomial `M_n(x; β, c) = ₂F₁(-n, -x; β; 1 - 1/c)`.
pub fn meixner(n: u32, x: f64, beta: f64, c: f64) -> Result<f64> {
    if c == 0.0 {
        return Err(Error::InvalidParameter(
            "Meixner parameter c must be non-zero".into(),
        ));
    }
    special::hyp2f1_terminating(n as u64, -x, beta, 1.0 - 1.0 / c)
}

/// Residual of the Meixner difference equation in `x`,
/// `c(x+β)M_n(x+1) - (n(c-1) + x + (x+β)c)M_n(x) + x M_n(x-1)`, together with
/// the largest of the three term magnitudes.
pub fn meixner_difference_residual(n: u32, x: f64, beta: f64, c: f64) -> Result<(f64, f64)> {
    let up = c * (x + beta) * meixner(n, x + 1.0, beta, c)?;
    let mid = (n as f64 * (c - 1.0) + x + (x + beta) * c) * meixner(n, x, beta, c)?;
    let down = x * meixner(n, x - 1.0, beta, c)?;
    Ok((up - mid + down, up.abs().max(mid.abs()).max(down.abs())))
}

/// Checks `m_{2k}^{N₀(M)} / (d/2)_k = m_{2M}^{N₀(k)} / (d/2)_M` exactly.
pub fn reflection_check(d: u32, k: u32, m: u32) -> Result<bool> {
    let lhs = moment_closed_form(ShellSpec::new(d, m)?, k) / pochhammer_half(d, k as u64);
    let rhs = moment_closed_form(ShellSpec::new(d, k)?, m) / pochhammer_half(d, m as u64);
    Ok(lhs == rhs)
}

/// Angular factor `f_{p,d} = (d/2)_p · 4^p p! / (2p)!`.
pub fn f_coefficient(p: u32, d: u32) -> ExactRational {
    let p64 = p as u64;
    pochhammer_half(d, p64) * pow2(2 * p as i64) * ExactRational::from_integer(factorial(p64))
        / ExactRational::from_integer(factorial(2 * p64))
}

/// `2^k m_{2k}` in one dimension through `(2k)!/(2^k k!) · ₂F₁(-k, 1-N₀; 2; 2)`.
pub fn moment_d1_hypergeometric(m: u32, k: u32) -> ExactRational {
    let k64 = k as u64;
    let pre = ExactRational::from_integer(factorial(2 * k64))
        / (pow2(k as i64) * ExactRational::from_integer(factorial(k64)));
    let hyp = hyp2f1_terminating(k64, &int(-(m as i64)), &int(2), &int(2))
        .expect("c = 2 never produces a vanishing denominator");
    pre * hyp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::to_f64;

    fn spec(d: u32, m: u32) -> ShellSpec {
        ShellSpec::new(d, m).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(moment_closed_form(spec(2, 1), 1), frac(5, 3));
        assert_eq!(moment_closed_form(spec(1, 0), 2), frac(3, 4));
        assert_eq!(moment_closed_form(spec(3, 2), 0), int(1));
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(
            moment_recurrence_table(spec(1, 0), 2).values,
            vec![int(1), frac(1, 2), frac(3, 4)]
        );
        assert_eq!(
            moment_recurrence_table(spec(2, 1), 1).values,
            vec![int(1), frac(5, 3)]
        );
        assert_eq!(
            moment_recurrence_table(spec(1, 1), 1).values,
            vec![int(1), int(1)]
        );
    }

    #[test]
    fn closed_form_equals_recurrence() {
        for d in 1..=6 {
            for m in 0..=20 {
                let s = spec(d, m);
                let table = moment_recurrence_table(s, 30);
                for (k, v) in table.values.iter().enumerate() {
                    assert_eq!(*v, moment_closed_form(s, k as u32), "d={d} M={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn table_invariants() {
        let t = MomentTable::closed_form(spec(3, 4), 10);
        assert_eq!(t.values[0], int(1));
        assert!(t.values.iter().all(|v| *v > ExactRational::zero()));
        assert_eq!(t.k_max(), 10);
        assert_eq!(t.values, MomentTable::recurrence(spec(3, 4), 10).values);
    }

    #[test]
    fn one_dimensional_hypergeometric_form() {
        for m in 0..=10 {
            for k in 0..=12 {
                assert_eq!(
                    pow2(k as i64) * moment_closed_form(spec(1, m), k),
                    moment_d1_hypergeometric(m, k),
                    "M={m} k={k}"
                );
            }
        }
    }

    #[test]
    fn real_k_examples() {
        let exact = to_f64(&moment_closed_form(spec(1, 3), 2));
        let v = moment_real_k(spec(1, 3), 2.0).unwrap();
        assert!((v / exact - 1.0).abs() < 1e-12);
        let half = moment_real_k(spec(2, 0), 0.5).unwrap();
        assert!((half - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-14);
        assert!((half - 0.8862269).abs() < 1e-7);
    }

    #[test]
    fn real_k_matches_exact_at_integers() {
        for d in 1..=4 {
            for m in 0..=15 {
                for k in 0..=20 {
                    let exact = to_f64(&moment_closed_form(spec(d, m), k));
                    let v = moment_real_k(spec(d, m), k as f64).unwrap();
                    assert!(
                        (v / exact - 1.0).abs() < 1e-12,
                        "d={d} M={m} k={k}: {v} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn real_k_pole_guard() {
        assert!(matches!(
            moment_real_k(spec(1, 2), -0.5),
            Err(Error::Domain(_))
        ));
        assert!(moment_real_k(spec(2, 2), -1.0 + 1e-7).is_err());
        assert!(moment_real_k(spec(2, 2), -0.9).is_ok());
        assert!(moment_real_k_guarded(spec(2, 2), -0.9, 0.2).is_err());
    }

    #[test]
    fn real_k_satisfies_meixner_difference() {
        // d = 1, M = 2 at the non-integer point x = 1.5.
        let (res, scale) = meixner_difference_residual(2, 1.5, 2.0, -1.0).unwrap();
        assert!(res.abs() < 1e-10 * scale.max(1.0));
        let hyp = meixner(2, 1.5, 2.0, -1.0).unwrap();
        let m = moment_real_k(spec(1, 2), 1.5).unwrap();
        assert!((m - special::gamma_ratio(0.5, 1.5) * hyp).abs() < 1e-13 * m);
    }

    #[test]
    fn meixner_examples() {
        assert_eq!(meixner(0, 7.3, 3.0, -1.0).unwrap(), 1.0);
        // direct series: 1 + (-2)(-1)/(2·1)·2 + (-2)(-1)(-1)(0)/(2·3·2)·4 = 3
        assert!((meixner(2, 1.0, 2.0, -1.0).unwrap() - 3.0).abs() < 1e-15);
        let a = meixner(3, 2.0, 4.0, -1.0).unwrap();
        let b = meixner(2, 3.0, 4.0, -1.0).unwrap();
        assert!((a - b).abs() < 1e-14);
        assert!(meixner(3, 1.5, -1.0, -1.0).is_err());
        assert!(meixner(3, 1.5, 2.0, 0.0).is_err());
    }

    #[test]
    fn reflection_examples() {
        assert!(reflection_check(1, 3, 5).unwrap());
        assert!(reflection_check(2, 0, 4).unwrap());
        assert!(reflection_check(4, 2, 2).unwrap());
    }

    #[test]
    fn f_coefficient_examples() {
        assert_eq!(f_coefficient(1, 3), int(3));
        for d in 1..6 {
            assert_eq!(f_coefficient(0, d), int(1));
        }
        assert_eq!(f_coefficient(2, 1), int(1));
    }

    /// Exact forward differences of `m_{2k}` in `M` vanish beyond order `k`,
    /// and the order-`k` difference does not.
    #[test]
    fn moments_are_degree_k_polynomials_in_shell() {
        for d in 1..=4 {
            for k in 0..=8u32 {
                let mut vals: Vec<ExactRational> = (0..=k + 2)
                    .map(|m| moment_closed_form(spec(d, m), k))
                    .collect();
                for order in 1..=k + 1 {
                    vals = vals.windows(2).map(|w| &w[1] - &w[0]).collect();
                    if order == k {
                        assert!(vals.iter().all(|v| !v.is_zero()));
                    }
                }
                assert!(vals.iter().all(Zero::is_zero), "d={d} k={k}");
            }
        }
    }
}
