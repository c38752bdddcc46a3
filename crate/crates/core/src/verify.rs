//! Cross-route verification suites. Each check compares two independent
//! computations over a parameter box and reports the worst discrepancy.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::asymptotics::{
    continued_moment_d1, continued_moment_d1_exact, correction_measure_d2, operator_ab_check,
    scaled_ode_check, stieltjes_series, OperatorCheck,
};
use crate::density::{
    density_via_generating_function, integro_residual_with, numeric_moment_with, ode_residual_with,
    ShellDensity,
};
use crate::edge::{edge_convergence, edge_ode_residual};
use crate::error::Result;
use crate::exact::{catalan, frac, int, pow2, to_f64};
use crate::fourier::{moments_from_transform, rho_hat, rho_hat_ode_residual, tail_transform_check};
use crate::moments::{
    meixner_difference_residual, moment_closed_form, moment_real_k, moment_recurrence_table,
    reflection_check,
};
use crate::mu::{build_mu_triangle, expansion_residual, extract_mu_by_interpolation};
use crate::quadrature::Quadrature;
use crate::shell::ShellSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }

    fn from_result(name: &'static str, r: Result<CheckOutcome>) -> Self {
        r.unwrap_or_else(|e| Self::new(name, false, format!("error: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Quick,
    Full,
}

/// Numeric contracts. Exact checks have no tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub density_oracle_rel: f64,
    pub normalization_rel: f64,
    pub density_ode: f64,
    pub fourier_ode: f64,
    pub integro: f64,
    pub tail_transform: f64,
    pub scaled_ode: f64,
    pub operator: f64,
    pub meixner: f64,
    pub edge_ode: f64,
    pub real_k_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            density_oracle_rel: 1e-10,
            normalization_rel: 1e-8,
            density_ode: 1e-8,
            fourier_ode: 1e-9,
            integro: 1e-6,
            tail_transform: 1e-10,
            scaled_ode: 1e-8,
            operator: 1e-12,
            meixner: 1e-10,
            edge_ode: 1e-6,
            real_k_rel: 1e-6,
        }
    }
}

fn specs(dims: &[u32], m_max: u32) -> impl Iterator<Item = ShellSpec> + '_ {
    dims.iter()
        .flat_map(move |&d| (0..=m_max).map(move |m| ShellSpec::new(d, m).expect("d >= 1")))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Worst relative residual seen so far, with its location.
#[derive(Default)]
struct Worst {
    value: f64,
    at: String,
    count: usize,
}

impl Worst {
    fn see(&mut self, v: f64, at: impl FnOnce() -> String) {
        self.count += 1;
        if v > self.value || v.is_nan() {
            self.value = v;
            self.at = at();
        }
    }

    fn within(&self, tol: f64) -> bool {
        self.value <= tol
    }

    fn describe(&self, tol: f64) -> String {
        if self.at.is_empty() {
            format!(
                "max {:.2e} over {} points (tol {tol:.0e})",
                self.value, self.count
            )
        } else {
            format!(
                "max {:.2e} at {} over {} points (tol {tol:.0e})",
                self.value, self.at, self.count
            )
        }
    }
}

/// Closed form = recurrence = Taylor coefficients of `ρ̂`, exactly.
pub fn check_exact_moments(dims: &[u32], m_max: u32, k_max: u32) -> CheckOutcome {
    let name = "exact moments: closed form = recurrence = transform";
    let mut cells = 0;
    for spec in specs(dims, m_max) {
        let rec = moment_recurrence_table(spec, k_max);
        let taylor = moments_from_transform(spec, k_max);
        for k in 0..=k_max {
            let closed = moment_closed_form(spec, k);
            if closed != rec.values[k as usize] || closed != taylor[k as usize] {
                return CheckOutcome::new(
                    name,
                    false,
                    format!("mismatch at d={} M={} k={k}", spec.d(), spec.shell()),
                );
            }
            cells += 1;
        }
    }
    CheckOutcome::new(name, true, format!("{cells} cells equal"))
}

/// Interpolated `μ_{k,l}` equal the triangle recurrence, wrong-parity
/// coefficients vanish, and the finite-`M` expansion is exact.
pub fn check_mu_interpolation(dims: &[u32], k_max: u32, expansion_shells: &[u32]) -> CheckOutcome {
    let name = "mu triangle: interpolation = recurrence";
    let run = || -> Result<CheckOutcome> {
        let mut cells = 0;
        for &d in dims {
            let tri = build_mu_triangle(d, k_max);
            for k in 0..=k_max {
                let mu = extract_mu_by_interpolation(d, k)?;
                for (l, v) in mu.iter().enumerate() {
                    if *v != tri.get(k as i64, l as i64) {
                        return Ok(CheckOutcome::new(
                            name,
                            false,
                            format!("mismatch at d={d} k={k} l={l}"),
                        ));
                    }
                    cells += 1;
                }
                for &m in expansion_shells {
                    if !expansion_residual(ShellSpec::new(d, m)?, k, &tri).is_zero() {
                        return Ok(CheckOutcome::new(
                            name,
                            false,
                            format!("expansion residual at d={d} M={m} k={k}"),
                        ));
                    }
                }
            }
            if let Some((k, l)) = tri.non_positive_cells().first() {
                return Ok(CheckOutcome::new(
                    name,
                    false,
                    format!("non-positive μ at d={d} k={k} l={l}"),
                ));
            }
        }
        Ok(CheckOutcome::new(
            name,
            true,
            format!("{cells} coefficients equal, parity clean"),
        ))
    };
    CheckOutcome::from_result(name, run())
}

pub fn check_catalan(k_max: u32) -> CheckOutcome {
    let name = "d=1 Catalan anchor";
    let tri = build_mu_triangle(1, k_max);
    let ok = (0..=k_max).all(|k| pow2(k as i64) * tri.get(k as i64, 0) == catalan(k as u64));
    CheckOutcome::new(name, ok, format!("2^k μ_(k,0) = C_k for k <= {k_max}"))
}

/// `m₂ = dM̃/(d+1)` and `m₄ = d/(d+1)(M̃² + (d+1)/4)`.
pub fn check_low_moments(dims: &[u32], m_max: u32) -> CheckOutcome {
    let name = "low moments m2, m4";
    for spec in specs(dims, m_max) {
        let d = int(spec.d() as i64);
        let mt = spec.m_tilde();
        let ratio = &d / (&d + int(1));
        let m2 = &ratio * &mt;
        let m4 = &ratio * (&mt * &mt + (&d + int(1)) / int(4));
        if moment_closed_form(spec, 1) != m2 || moment_closed_form(spec, 2) != m4 {
            return CheckOutcome::new(
                name,
                false,
                format!("mismatch at d={} M={}", spec.d(), spec.shell()),
            );
        }
    }
    CheckOutcome::new(name, true, format!("exact for d in {dims:?}, M <= {m_max}"))
}

/// Shell-sum density against the generating-function route, plus `∫ρ = N₀`.
pub fn check_density_oracles(
    dims: &[u32],
    m_max: u32,
    n_radii: usize,
    tol: &Tolerances,
) -> CheckOutcome {
    let name = "density: shell sum = generating function, normalization";
    let run = || -> Result<CheckOutcome> {
        let quad = Quadrature::default();
        let mut oracle = Worst::default();
        let mut norm = Worst::default();
        for spec in specs(dims, m_max) {
            let dens = ShellDensity::new(spec);
            for r in linspace(0.0, spec.turning_radius() + 1.0, n_radii) {
                let a = dens.value(r);
                let b = density_via_generating_function(spec, r);
                oracle.see((a - b).abs() / a.abs(), || {
                    format!("d={} M={} r={r:.3}", spec.d(), spec.shell())
                });
            }
            let total = numeric_moment_with(&dens, 0.0, &quad)?;
            norm.see((total - 1.0).abs(), || {
                format!("d={} M={}", spec.d(), spec.shell())
            });
        }
        let ok = oracle.within(tol.density_oracle_rel) && norm.within(tol.normalization_rel);
        Ok(CheckOutcome::new(
            name,
            ok,
            format!(
                "oracle {}; normalization {}",
                oracle.describe(tol.density_oracle_rel),
                norm.describe(tol.normalization_rel)
            ),
        ))
    };
    CheckOutcome::from_result(name, run())
}

/// Real-space third-order ODE, the integro-differential form, and the
/// Fourier-side ODE.
pub fn check_ode_residuals(
    dims: &[u32],
    m_max: u32,
    n_points: usize,
    tol: &Tolerances,
) -> CheckOutcome {
    let name = "ODE residuals: density, integro, transform";
    let run = || -> Result<CheckOutcome> {
        let quad = Quadrature::default();
        let (mut real, mut integro, mut fourier) =
            (Worst::default(), Worst::default(), Worst::default());
        for spec in specs(dims, m_max) {
            let dens = ShellDensity::new(spec);
            let at = |x: f64| move || format!("d={} M={} at {x:.3}", spec.d(), spec.shell());
            for r in linspace(0.05, spec.turning_radius() + 1.5, n_points) {
                real.see(ode_residual_with(&dens, r).relative(), at(r));
                integro.see(integro_residual_with(&dens, r, &quad)?.relative(), at(r));
            }
            for i in 0..n_points {
                let k = 10f64.powf(-2.0 + 3.0 * i as f64 / (n_points - 1).max(1) as f64);
                fourier.see(rho_hat_ode_residual(spec, k)?.relative(), at(k));
            }
        }
        let ok = real.within(tol.density_ode)
            && integro.within(tol.integro)
            && fourier.within(tol.fourier_ode);
        Ok(CheckOutcome::new(
            name,
            ok,
            format!(
                "density {}; integro {}; transform {}",
                real.describe(tol.density_ode),
                integro.describe(tol.integro),
                fourier.describe(tol.fourier_ode)
            ),
        ))
    };
    CheckOutcome::from_result(name, run())
}

/// Reflection symmetry (exact) and the Meixner difference equation at real
/// points `x = k`, with `β = d+1`, `c = -1`.
pub fn check_reflection_meixner(
    dims: &[u32],
    reflection_max: u32,
    meixner_m_max: u32,
    n_points: usize,
    tol: &Tolerances,
) -> CheckOutcome {
    let name = "reflection formula, Meixner difference equation";
    let run = || -> Result<CheckOutcome> {
        for &d in dims {
            for k in 0..=reflection_max {
                for m in 0..=reflection_max {
                    if !reflection_check(d, k, m)? {
                        return Ok(CheckOutcome::new(
                            name,
                            false,
                            format!("reflection fails at d={d} k={k} M={m}"),
                        ));
                    }
                }
            }
        }
        let mut worst = Worst::default();
        for spec in specs(dims, meixner_m_max) {
            for x in linspace(0.13, 9.87, n_points) {
                let (res, scale) =
                    meixner_difference_residual(spec.shell(), x, spec.d() as f64 + 1.0, -1.0)?;
                let rel = if scale == 0.0 {
                    res.abs()
                } else {
                    res.abs() / scale
                };
                worst.see(rel, || {
                    format!("d={} M={} x={x:.3}", spec.d(), spec.shell())
                });
            }
        }
        Ok(CheckOutcome::new(
            name,
            worst.within(tol.meixner),
            format!("reflection exact; Meixner {}", worst.describe(tol.meixner)),
        ))
    };
    CheckOutcome::from_result(name, run())
}

/// Continued `d = 1` correction moments and the `d = 2` atomic measure
/// reproduce `μ_{k,1}`.
pub fn check_correction_moments(k_max: u32) -> CheckOutcome {
    let name = "correction densities: moments = mu_(k,1)";
    let run = || -> Result<CheckOutcome> {
        let (t1, t2) = (build_mu_triangle(1, k_max), build_mu_triangle(2, k_max));
        let measure = correction_measure_d2();
        for k in 0..=k_max {
            let want1 = t1.get(k as i64, 1);
            if continued_moment_d1_exact(k) != want1 {
                return Ok(CheckOutcome::new(
                    name,
                    false,
                    format!("d=1 exact mismatch at k={k}"),
                ));
            }
            let f = continued_moment_d1(k as f64)?;
            if (f - to_f64(&want1)).abs() > 1e-12 * to_f64(&want1).max(1.0) {
                return Ok(CheckOutcome::new(
                    name,
                    false,
                    format!("d=1 Gamma continuation off at k={k}"),
                ));
            }
            if measure.moment(k) != t2.get(k as i64, 1) {
                return Ok(CheckOutcome::new(
                    name,
                    false,
                    format!("d=2 atomic measure mismatch at k={k}"),
                ));
            }
        }
        let spots = continued_moment_d1_exact(2) == frac(1, 4) && measure.moment(2) == frac(1, 2);
        Ok(CheckOutcome::new(
            name,
            spots,
            format!("exact for k <= {k_max}; spot values 1/4 (d=1), 1/2 (d=2) at k=2"),
        ))
    };
    CheckOutcome::from_result(name, run())
}

pub fn check_stieltjes(k_max: u32) -> CheckOutcome {
    let name = "Stieltjes series = mu rows";
    let run = || -> Result<CheckOutcome> {
        for d in 1..=2 {
            let tri = build_mu_triangle(d, k_max);
            for l in 0..=1 {
                let s = stieltjes_series(d, l, k_max as usize + 1)?;
                for k in 0..=k_max {
                    if s.coeffs[k as usize] != tri.get(k as i64, l as i64) {
                        return Ok(CheckOutcome::new(
                            name,
                            false,
                            format!("mismatch at d={d} l={l} k={k}"),
                        ));
                    }
                }
            }
        }
        Ok(CheckOutcome::new(
            name,
            true,
            format!("(d,l) in {{1,2}}x{{0,1}}, k <= {k_max}"),
        ))
    };
    CheckOutcome::from_result(name, run())
}

/// Edge ODE on an `s` grid and shrinking finite-`M` gaps as `M` doubles.
pub fn check_edge(
    ode_dims: &[u32],
    s_grid: &[f64],
    gap_dims: &[u32],
    gap_s: &[f64],
    gap_shells: &[u32],
    tol: &Tolerances,
) -> CheckOutcome {
    let name = "edge profile: ODE residual, finite-M convergence";
    let run = || -> Result<CheckOutcome> {
        let mut worst = Worst::default();
        for &d in ode_dims {
            for &s in s_grid {
                worst.see(edge_ode_residual(d, s)?.relative(), || {
                    format!("d={d} s={s:.2}")
                });
            }
        }
        let mut detail = format!("ODE {}", worst.describe(tol.edge_ode));
        let mut ok = worst.within(tol.edge_ode);
        for &d in gap_dims {
            for &s in gap_s {
                for &m in gap_shells {
                    let g1 = edge_convergence(ShellSpec::new(d, m)?, s)?.gap;
                    let g2 = edge_convergence(ShellSpec::new(d, 2 * m)?, s)?.gap;
                    if !(g2 < g1) {
                        ok = false;
                        let _ =
                            write!(detail, "; gap grew d={d} s={s} M={m}: {g1:.3e} -> {g2:.3e}");
                    }
                }
            }
        }
        if ok {
            detail.push_str("; gaps shrink");
        }
        Ok(CheckOutcome::new(name, ok, detail))
    };
    CheckOutcome::from_result(name, run())
}

/// Quadrature moments at non-integer `k` against the hypergeometric
/// continuation.
pub fn check_real_k(dims: &[u32], m_max: u32, ks: &[f64], tol: &Tolerances) -> CheckOutcome {
    let name = "real-k moments: quadrature = continuation";
    let run = || -> Result<CheckOutcome> {
        let quad = Quadrature::default();
        let mut worst = Worst::default();
        for spec in specs(dims, m_max) {
            let dens = ShellDensity::new(spec);
            for &k in ks {
                if k <= -(spec.d() as f64) / 2.0 {
                    continue;
                }
                let a = numeric_moment_with(&dens, k, &quad)?;
                let b = moment_real_k(spec, k)?;
                worst.see((a / b - 1.0).abs(), || {
                    format!("d={} M={} k={k}", spec.d(), spec.shell())
                });
            }
        }
        Ok(CheckOutcome::new(
            name,
            worst.within(tol.real_k_rel),
            worst.describe(tol.real_k_rel),
        ))
    };
    CheckOutcome::from_result(name, run())
}

/// Transform bounds, the tail-transform identity, the scaled ODE and the
/// operator identities of the limiting densities.
pub fn check_transform_and_operators(dims: &[u32], m_max: u32, tol: &Tolerances) -> CheckOutcome {
    let name = "transform bounds, tail identity, operators A/B";
    let run = || -> Result<CheckOutcome> {
        let (mut tail, mut scaled) = (Worst::default(), Worst::default());
        for spec in specs(dims, m_max) {
            let n0 = spec.particle_number_f64();
            if (rho_hat(spec, 0.0)?.value - n0).abs() > 1e-9 * n0 {
                return Ok(CheckOutcome::new(
                    name,
                    false,
                    format!("ρ̂(0) != N0 at d={} M={}", spec.d(), spec.shell()),
                ));
            }
            for k in linspace(0.0, 12.0, 49) {
                if rho_hat(spec, k)?.value.abs() > n0 * (1.0 + 1e-12) {
                    return Ok(CheckOutcome::new(
                        name,
                        false,
                        format!("|ρ̂| > N0 at d={} M={} k={k}", spec.d(), spec.shell()),
                    ));
                }
            }
            for k in [0.1, 0.8, 1.7, 3.2, 5.0] {
                tail.see(tail_transform_check(spec, k)?.relative(), || {
                    format!("d={} M={} k={k}", spec.d(), spec.shell())
                });
            }
            for r in [0.2, 0.6, 1.0, 1.3, 1.8] {
                scaled.see(scaled_ode_check(spec, r)?.relative(), || {
                    format!("d={} M={} r={r}", spec.d(), spec.shell())
                });
            }
        }
        let mut op = Worst::default();
        for &d in dims {
            op.see(operator_ab_check(d, OperatorCheck::BOnRho0)?, || {
                format!("B ρ0, d={d}")
            });
        }
        op.see(operator_ab_check(2, OperatorCheck::AOnRho0D2)?, || {
            "A ρ0, d=2".into()
        });
        op.see(operator_ab_check(2, OperatorCheck::CoupledL1D2)?, || {
            "B ρ1 = A ρ0, d=2".into()
        });
        let ok = tail.within(tol.tail_transform)
            && scaled.within(tol.scaled_ode)
            && op.within(tol.operator);
        Ok(CheckOutcome::new(
            name,
            ok,
            format!(
                "tail {}; scaled ODE {}; operators {}",
                tail.describe(tol.tail_transform),
                scaled.describe(tol.scaled_ode),
                op.describe(tol.operator)
            ),
        ))
    };
    CheckOutcome::from_result(name, run())
}

pub const REAL_K_SAMPLES: [f64; 10] = [-0.3, 0.25, 0.5, 0.75, 1.3, 1.5, 2.2, 2.5, 3.7, 4.5];

/// Runs every suite over `dims` (each clipped to the box the suite is
/// defined on).
pub fn run_suite(dims: &[u32], mode: Mode, tol: &Tolerances) -> Vec<CheckOutcome> {
    let clip = |max: u32| -> Vec<u32> {
        dims.iter()
            .copied()
            .filter(|&d| d >= 1 && d <= max)
            .collect()
    };
    let full = mode == Mode::Full;
    let pick = |q: u32, f: u32| if full { f } else { q };
    let s_grid = linspace(-5.0, 3.0, if full { 21 } else { 5 });
    let shells: &[u32] = if full { &[8, 16] } else { &[8] };
    let gap_s: &[f64] = if full { &[-1.0, 0.0, 1.0] } else { &[0.0] };
    let ks: &[f64] = if full {
        &REAL_K_SAMPLES
    } else {
        &REAL_K_SAMPLES[..4]
    };
    vec![
        check_exact_moments(&clip(6), pick(6, 20), pick(10, 30)),
        check_mu_interpolation(&clip(5), pick(8, 16), &[6, 10, 16]),
        check_catalan(pick(12, 20)),
        check_low_moments(&clip(6), pick(6, 12)),
        check_density_oracles(&clip(3), pick(4, 10), pick(8, 25) as usize, tol),
        check_ode_residuals(&clip(3), pick(4, 10), pick(8, 25) as usize, tol),
        check_reflection_meixner(
            &clip(4),
            pick(6, 15),
            pick(4, 8),
            pick(10, 50) as usize,
            tol,
        ),
        check_correction_moments(pick(8, 14)),
        check_stieltjes(pick(8, 14)),
        check_edge(&clip(3), &s_grid, &clip(2), gap_s, shells, tol),
        check_real_k(&clip(3), pick(3, 8), ks, tol),
        check_transform_and_operators(&clip(4), pick(4, 10), tol),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let out = run_suite(&[1, 2], Mode::Quick, &Tolerances::default());
        for o in &out {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
        assert_eq!(out.len(), 12);
    }

    #[test]
    fn tight_tolerance_fails_honestly() {
        let tol = Tolerances {
            density_ode: 0.0,
            ..Tolerances::default()
        };
        let o = check_ode_residuals(&[2], 3, 4, &tol);
        assert!(!o.passed);
        assert!(o.detail.contains("max"));
    }

    #[test]
    fn out_of_box_dimensions_are_skipped() {
        let o = check_exact_moments(&[], 3, 3);
        assert!(o.passed);
    }
}
