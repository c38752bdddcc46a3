//! Soft-edge profile
//! `F_d(s) = [Γ(d/2+1) 2^{4/3} π^{d/2}]^{-1} ∫_0^∞ u^{d/2} Ai(u + 2^{2/3} s) du`
//! and the scaling limit of the finite-`M` density near `r = √(2M̃)`.

use std::f64::consts::PI;

use crate::density::{Residual, ShellDensity};
use crate::error::{Error, Result};
use crate::quadrature::Quadrature;
use crate::shell::ShellSpec;
use crate::special::{airy_ai_pair, gamma, AIRY_RANGE, AIRY_SERIES_HI, AIRY_SERIES_LO};

/// `2^{2/3}`, the argument scale of the Airy kernel.
const EDGE_SCALE: f64 = 1.587_401_051_968_199_5;

/// Range of `s` for which `u + 2^{2/3}s` stays in the supported Airy range
/// with a non-empty integration interval.
pub fn supported_range() -> (f64, f64) {
    (AIRY_RANGE.0 / EDGE_SCALE, AIRY_RANGE.1 / EDGE_SCALE - 1.0)
}

fn prefactor(d: u32) -> f64 {
    let h = d as f64 / 2.0;
    1.0 / (gamma(h + 1.0) * 2f64.powf(4.0 / 3.0) * PI.powf(h))
}

fn check_args(d: u32, s: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    let (lo, hi) = supported_range();
    if !(lo..=hi).contains(&s) {
        return Err(Error::Range {
            what: "edge coordinate s",
            value: s,
            lo,
            hi,
        });
    }
    Ok(())
}

/// `∫_0^{u_max} u^{d/2} g(u + 2^{2/3}s) du`, with `u_max` where the Airy
/// argument reaches the top of its supported range (`Ai(20) ≈ 2e-27`).
/// Unit-spaced break points cover the oscillatory stretch; the Airy switch
/// points are breaks too so no panel straddles a change of method.
fn airy_moment(d: u32, s: f64, quad: &Quadrature, g: impl Fn(f64, f64, f64) -> f64) -> Result<f64> {
    let shift = EDGE_SCALE * s;
    let upper = AIRY_RANGE.1 - shift;
    let turning = (-shift).max(0.0);
    let mut pts: Vec<f64> = (0..)
        .map(|i| i as f64)
        .take_while(|&u| u < turning)
        .collect();
    pts.extend([
        turning,
        turning + 4.0,
        AIRY_SERIES_LO - shift,
        AIRY_SERIES_HI - shift,
        upper,
    ]);
    pts.retain(|&u| (0.0..=upper).contains(&u));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let h = d as f64 / 2.0;
    let err = std::cell::Cell::new(None);
    let est = quad.integrate_with_breaks(
        |u| {
            let x = u + shift;
            match airy_ai_pair(x) {
                Ok((ai, aip)) => u.powf(h) * g(x, ai, aip),
                Err(e) => {
                    err.set(Some(e));
                    0.0
                }
            }
        },
        &pts,
    )?;
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(est.value),
    }
}

/// Tolerances sit just above the ~1e-12 rounding noise of `Ai` near the
/// series switch point, below which the error estimate cannot settle.
fn edge_quadrature() -> Quadrature {
    Quadrature::with_tolerances(1e-11, 1e-10)
}

pub fn edge_profile(d: u32, s: f64) -> Result<f64> {
    edge_profile_with(d, s, &edge_quadrature())
}

pub fn edge_profile_with(d: u32, s: f64, quad: &Quadrature) -> Result<f64> {
    check_args(d, s)?;
    Ok(prefactor(d) * airy_moment(d, s, quad, |_, ai, _| ai)?)
}

/// `[F, F', F'', F''']`, differentiated under the integral with
/// `Ai'' = x Ai` and `Ai''' = Ai + x Ai'`.
pub fn edge_profile_jet(d: u32, s: f64) -> Result<[f64; 4]> {
    check_args(d, s)?;
    let quad = edge_quadrature();
    let c = prefactor(d);
    let a = EDGE_SCALE;
    Ok([
        c * airy_moment(d, s, &quad, |_, ai, _| ai)?,
        c * a * airy_moment(d, s, &quad, |_, _, aip| aip)?,
        c * a * a * airy_moment(d, s, &quad, |x, ai, _| x * ai)?,
        c * a * a * a * airy_moment(d, s, &quad, |x, ai, aip| ai + x * aip)?,
    ])
}

/// Residual of `-¼F''' + sF' - (d/2)F = 0`.
pub fn edge_ode_residual(d: u32, s: f64) -> Result<Residual> {
    let [f, f1, _, f3] = edge_profile_jet(d, s)?;
    Ok(Residual::from_terms(&[
        -f3 / 4.0,
        s * f1,
        -(d as f64) / 2.0 * f,
    ]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeProfileSamples {
    pub d: u32,
    pub s: Vec<f64>,
    pub values: Vec<f64>,
    pub rel_tol: f64,
}

pub fn edge_profile_samples(d: u32, s: &[f64]) -> Result<EdgeProfileSamples> {
    if s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "s grid must be strictly increasing".into(),
        ));
    }
    let quad = edge_quadrature();
    let values = s
        .iter()
        .map(|&x| edge_profile_with(d, x, &quad))
        .collect::<Result<_>>()?;
    Ok(EdgeProfileSamples {
        d,
        s: s.to_vec(),
        values,
        rel_tol: quad.rel_tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeConvergence {
    pub finite_value: f64,
    pub limit_value: f64,
    pub gap: f64,
}

/// Finite-`M` density in edge coordinates,
/// `2^{(5d-8)/6} M̃^{-d/6} ρ(√(2M̃)(1 + s/(2M̃^{2/3})))`, against `F_d(s)`.
pub fn edge_convergence(spec: ShellSpec, s: f64) -> Result<EdgeConvergence> {
    if spec.shell() < 4 {
        return Err(Error::InvalidParameter(format!(
            "edge scaling needs M >= 4, got M = {}",
            spec.shell()
        )));
    }
    let limit_value = edge_profile(spec.d(), s)?;
    let mt = spec.m_tilde_f64();
    let d = spec.d() as f64;
    let r = (2.0 * mt).sqrt() * (1.0 + s / (2.0 * mt.powf(2.0 / 3.0)));
    if r < 0.0 {
        return Err(Error::Domain(format!(
            "s = {s} maps to a negative radius at M = {}",
            spec.shell()
        )));
    }
    let finite_value =
        2f64.powf((5.0 * d - 8.0) / 6.0) * mt.powf(-d / 6.0) * ShellDensity::new(spec).value(r);
    Ok(EdgeConvergence {
        finite_value,
        limit_value,
        gap: (finite_value - limit_value).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::airy_ai;

    #[test]
    fn one_dimensional_closed_form() {
        // F_1(s) = Ai'(s)² - s Ai(s)².
        for s in [-5.0, -2.0, -0.5, 0.0, 1.0, 3.0] {
            let (ai, aip) = airy_ai_pair(s).unwrap();
            let want = aip * aip - s * ai * ai;
            let got = edge_profile(1, s).unwrap();
            assert!((got - want).abs() < 1e-9, "s={s}: {got} {want}");
        }
    }

    #[test]
    fn decays_to_the_right() {
        for d in 1..=3 {
            assert!(edge_profile(d, 6.0).unwrap() < 1e-6);
            let mut last = f64::INFINITY;
            for i in 0..=30 {
                let v = edge_profile(d, i as f64 * 0.2).unwrap();
                assert!(v > 0.0 && v < last, "d={d}");
                last = v;
            }
        }
    }

    #[test]
    fn bulk_growth() {
        // Thomas–Fermi matching: F_d(s) ~ c |s|^{d/2} as s → -∞.
        for d in 1..=2 {
            let ratios: Vec<f64> = [-6.0f64, -5.0, -4.0]
                .iter()
                .map(|&s| edge_profile(d, s).unwrap() / s.abs().powf(d as f64 / 2.0))
                .collect();
            let (lo, hi) = ratios
                .iter()
                .fold((f64::MAX, f64::MIN), |(a, b), &r| (a.min(r), b.max(r)));
            assert!(hi / lo < 1.15, "d={d}: {ratios:?}");
        }
    }

    #[test]
    fn tolerance_independent() {
        let a = edge_profile_with(2, 0.0, &Quadrature::with_tolerances(1e-9, 1e-8)).unwrap();
        let b = edge_profile_with(2, 0.0, &Quadrature::with_tolerances(1e-11, 1e-10)).unwrap();
        assert!(a > 0.0 && (a - b).abs() < 1e-8);
    }

    #[test]
    fn ode_examples() {
        for (d, s) in [(1, 0.0), (2, -2.0), (3, 1.5)] {
            let r = edge_ode_residual(d, s).unwrap();
            assert!(r.within(1e-6), "d={d} s={s}: {r:?}");
        }
    }

    #[test]
    fn jet_consistent_with_finite_differences() {
        let h = 1e-3;
        let [_, f1, f2, _] = edge_profile_jet(2, -1.0).unwrap();
        let f = |s| edge_profile(2, s).unwrap();
        assert!((f1 - (f(-1.0 + h) - f(-1.0 - h)) / (2.0 * h)).abs() < 1e-6);
        assert!((f2 - (f(-1.0 + h) - 2.0 * f(-1.0) + f(-1.0 - h)) / (h * h)).abs() < 1e-4);
    }

    #[test]
    fn range_errors() {
        assert!(edge_profile(1, -20.0).is_err());
        assert!(edge_profile(1, 13.0).is_err());
        assert!(edge_profile(0, 0.0).is_err());
        assert!(airy_ai(0.0).is_ok());
    }

    #[test]
    fn convergence_examples() {
        let s = |d, m| ShellSpec::new(d, m).unwrap();
        let g16 = edge_convergence(s(1, 16), 0.0).unwrap().gap;
        let g32 = edge_convergence(s(1, 32), 0.0).unwrap().gap;
        assert!(g32 < g16);

        let e = edge_convergence(s(2, 12), 2.0).unwrap();
        assert!(e.finite_value < 0.1 && e.limit_value < 0.1 && e.gap < e.finite_value);

        let v: Vec<f64> = [8, 16, 32]
            .iter()
            .map(|&m| edge_convergence(s(1, m), -1.0).unwrap().finite_value)
            .collect();
        let limit = edge_profile(1, -1.0).unwrap();
        assert!(
            (v[0] - limit).abs() > (v[1] - limit).abs()
                && (v[1] - limit).abs() > (v[2] - limit).abs()
        );

        assert!(edge_convergence(s(1, 3), 0.0).is_err());
    }
}
