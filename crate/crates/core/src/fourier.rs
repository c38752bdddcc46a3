//! Fourier transform `ρ̂(k) = ∫ e^{i𝐤·𝐫} ρ(𝐫) d^d r = e^{-k²/4} L_M^{(d)}(k²/2)`,
//! its radial ODE, the Taylor-coefficient route to the moments, and the
//! transform of the tail integral `∫_r^∞ sρ(s) ds`.

use num_traits::{One, Zero};

use crate::density::{Residual, ShellDensity};
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, frac, int, to_f64, ExactRational};
use crate::moments::{f_coefficient, moment_closed_form};
use crate::quadrature::Quadrature;
use crate::shell::ShellSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformValue {
    pub spec: ShellSpec,
    pub k: f64,
    pub value: f64,
}

/// `L_n^{(α)}(x)` by the three-term recurrence
/// `(j+1) L_{j+1} = (2j+1+α-x) L_j - (j+α) L_{j-1}`. Negative `n` gives 0.
pub fn laguerre(n: i64, alpha: u32, x: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let a = alpha as f64;
    let (mut prev, mut cur) = (1.0, 1.0 + a - x);
    if n == 0 {
        return prev;
    }
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * cur - (jf + a) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Power-series coefficients of `L_n^{(α)}(x) = Σ_j C(n+α, n-j) (-x)^j / j!`.
pub fn laguerre_coefficients(n: u32, alpha: u32) -> Vec<ExactRational> {
    (0..=n as u64)
        .map(|j| {
            let sign = if j % 2 == 0 { int(1) } else { int(-1) };
            sign * binomial(n as u64 + alpha as u64, n as i64 - j as i64)
                / ExactRational::from_integer(factorial(j))
        })
        .collect()
}

pub fn rho_hat(spec: ShellSpec, k: f64) -> Result<TransformValue> {
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("frequency {k} must be non-negative")));
    }
    let value = (-k * k / 4.0).exp() * laguerre(spec.shell() as i64, spec.d(), k * k / 2.0);
    Ok(TransformValue { spec, k, value })
}

/// `[f, f', f'']` of `f(k) = e^{-k²/4} L(k²/2)` using
/// `dL_n^{(α)}/dx = -L_{n-1}^{(α+1)}`.
fn rho_hat_derivatives(spec: ShellSpec, k: f64) -> [f64; 3] {
    let (m, d) = (spec.shell() as i64, spec.d());
    let x = k * k / 2.0;
    let l0 = laguerre(m, d, x);
    let l1 = -laguerre(m - 1, d + 1, x);
    let l2 = laguerre(m - 2, d + 2, x);
    let g = (-k * k / 4.0).exp();
    [
        g * l0,
        g * (-k / 2.0 * l0 + k * l1),
        g * ((k * k / 4.0 - 0.5) * l0 + (1.0 - k * k) * l1 + k * k * l2),
    ]
}

/// Residual of `f'' + ((2d+1)/k) f' + (-k²/4 + d + 1 + 2M) f = 0`.
pub fn rho_hat_ode_residual(spec: ShellSpec, k: f64) -> Result<Residual> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("frequency {k} must be positive")));
    }
    let d = spec.d() as f64;
    let [f, f1, f2] = rho_hat_derivatives(spec, k);
    Ok(Residual::from_terms(&[
        f2,
        (2.0 * d + 1.0) / k * f1,
        (-k * k / 4.0 + d + 1.0 + 2.0 * spec.shell() as f64) * f,
    ]))
}

/// Exact coefficients `c_p = [k^{2p}] ρ̂(k)` for `p = 0..=p_max`, as the
/// Cauchy product of `e^{-q/4}` and `L_M^{(d)}(q/2)` in `q = k²`.
pub fn taylor_coefficients(spec: ShellSpec, p_max: u32) -> Vec<ExactRational> {
    let lag = laguerre_coefficients(spec.shell(), spec.d());
    let lag_q: Vec<ExactRational> = lag
        .iter()
        .enumerate()
        .map(|(j, c)| c * frac(1, 1i64 << j))
        .collect();
    let gauss: Vec<ExactRational> = (0..=p_max as u64)
        .map(|j| {
            let sign = if j % 2 == 0 { int(1) } else { int(-1) };
            sign / ExactRational::from_integer(
                factorial(j) * (num_bigint::BigInt::one() << (2 * j)),
            )
        })
        .collect();
    (0..=p_max as usize)
        .map(|p| {
            (0..=p.min(lag_q.len() - 1)).fold(ExactRational::zero(), |acc, j| {
                acc + &lag_q[j] * &gauss[p - j]
            })
        })
        .collect()
}

/// Moments recovered from the transform:
/// `m_{2p} = (1/N₀) f_{p,d} (2p)! (-1)^p [k^{2p}] ρ̂`.
pub fn moments_from_transform(spec: ShellSpec, p_max: u32) -> Vec<ExactRational> {
    let n0 = ExactRational::from_integer(spec.particle_number());
    taylor_coefficients(spec, p_max)
        .into_iter()
        .enumerate()
        .map(|(p, c)| {
            let sign = if p % 2 == 0 { int(1) } else { int(-1) };
            c * f_coefficient(p as u32, spec.d())
                * ExactRational::from_integer(factorial(2 * p as u64))
                * sign
                / &n0
        })
        .collect()
}

pub fn taylor_moment_check(spec: ShellSpec, p_max: u32) -> bool {
    moments_from_transform(spec, p_max)
        .iter()
        .enumerate()
        .all(|(p, m)| *m == moment_closed_form(spec, p as u32))
}

/// Exact value of the polynomial with coefficients `c` at the binary
/// rational `x`, rounded once at the end.
fn eval_exact(c: &[ExactRational], x: f64) -> f64 {
    let x = ExactRational::from_float(x).expect("finite argument");
    let v = c
        .iter()
        .rev()
        .fold(ExactRational::zero(), |acc, ci| acc * &x + ci);
    to_f64(&v)
}

/// Residual of `-(1/k) dρ̂/dk = e^{-k²/4} [½ L_M^{(d)}(k²/2) + L_{M-1}^{(d+1)}(k²/2)]`.
///
/// The left side differentiates the exact power series of `L_M^{(d)}`
/// directly; the right side uses the recurrence values.
pub fn tail_transform_check(spec: ShellSpec, k: f64) -> Result<Residual> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("frequency {k} must be positive")));
    }
    let (m, d) = (spec.shell(), spec.d());
    let x = k * k / 2.0;
    let c = laguerre_coefficients(m, d);
    let dc: Vec<ExactRational> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, cj)| cj * int(j as i64))
        .collect();
    let g = (-k * k / 4.0).exp();
    // d/dk [g L(k²/2)] = g (-k/2 L + k L_x)
    let lhs = g * (0.5 * eval_exact(&c, x) - eval_exact(&dc, x));
    let rhs = g * (0.5 * laguerre(m as i64, d, x) + laguerre(m as i64 - 1, d + 1, x));
    Ok(Residual {
        value: lhs - rhs,
        scale: lhs.abs().max(rhs.abs()),
    })
}

/// `ρ̂(k)` by quadrature of the radial kernel. Only `d = 1` (`2∫cos(kr)ρ`)
/// and `d = 3` (`4π∫r²ρ sin(kr)/(kr)`) are supported.
pub fn numeric_transform(spec: ShellSpec, k: f64, quad: &Quadrature) -> Result<f64> {
    let density = ShellDensity::new(spec);
    radial_transform(
        spec.d(),
        k,
        &|r| density.value(r),
        density.integration_limit(),
        quad,
    )
}

fn radial_transform(
    d: u32,
    k: f64,
    f: &dyn Fn(f64) -> f64,
    upper: f64,
    quad: &Quadrature,
) -> Result<f64> {
    let pts: Vec<f64> = (0..=8).map(|i| upper * i as f64 / 8.0).collect();
    match d {
        1 => Ok(2.0
            * quad
                .integrate_with_breaks(|r| (k * r).cos() * f(r), &pts)?
                .value),
        3 => {
            let kernel = |r: f64| {
                if k * r == 0.0 {
                    1.0
                } else {
                    (k * r).sin() / (k * r)
                }
            };
            let est = quad.integrate_with_breaks(|r| r * r * kernel(r) * f(r), &pts)?;
            Ok(4.0 * std::f64::consts::PI * est.value)
        }
        _ => Err(Error::InvalidParameter(format!(
            "numeric radial transform implemented for d = 1 and d = 3, not d = {d}"
        ))),
    }
}

/// `d = 1` transform of `T(r) = ∫_|r|^∞ sρ(s) ds` by nested quadrature, to
/// compare with `-(1/k) dρ̂/dk`.
pub fn tail_transform_numeric(spec: ShellSpec, k: f64) -> Result<f64> {
    if spec.d() != 1 {
        return Err(Error::InvalidParameter(
            "tail transform quadrature needs d = 1".into(),
        ));
    }
    let density = ShellDensity::new(spec);
    let inner = Quadrature::with_tolerances(1e-13, 1e-11);
    let outer = Quadrature::with_tolerances(1e-11, 1e-9);
    let failure = std::cell::Cell::new(None);
    let tail = |r: f64| match density.tail_integral(r, &inner) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let value = radial_transform(1, k, &tail, density.integration_limit(), &outer)?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}
