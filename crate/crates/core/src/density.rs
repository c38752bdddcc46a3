//! Finite-`N₀` density `ρ(r)` from Hermite-function shell sums, its analytic
//! radial derivatives, the generating-function oracle, the differential and
//! integro-differential identities it satisfies, and quadrature moments.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::Quadrature;
use crate::series::Series;
use crate::shell::ShellSpec;
use crate::special;

/// Buffer added to the turning radius `√(2M̃)` when truncating radial
/// integrals; the orbitals decay like a Gaussian beyond it.
pub const TAIL_BUFFER: f64 = 8.0;

/// Normalised oscillator eigenfunctions `ψ_0(x) … ψ_L(x)` and their first
/// derivatives at a single point.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    x: f64,
    psi: Vec<f64>,
    dpsi: Vec<f64>,
}

impl HermiteBasis {
    /// `ψ_{l+1} = x √(2/(l+1)) ψ_l - √(l/(l+1)) ψ_{l-1}`, started from
    /// `ψ_0 = π^{-1/4} e^{-x²/2}`; `ψ_l' = √(2l) ψ_{l-1} - x ψ_l`.
    pub fn new(max_level: usize, x: f64) -> Self {
        let mut psi = Vec::with_capacity(max_level + 1);
        psi.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
        if max_level >= 1 {
            psi.push(2f64.sqrt() * x * psi[0]);
        }
        for l in 1..max_level {
            let lf = l as f64;
            let next =
                x * (2.0 / (lf + 1.0)).sqrt() * psi[l] - (lf / (lf + 1.0)).sqrt() * psi[l - 1];
            psi.push(next);
        }
        let dpsi = (0..=max_level)
            .map(|l| {
                let lower = if l > 0 {
                    (2.0 * l as f64).sqrt() * psi[l - 1]
                } else {
                    0.0
                };
                lower - x * psi[l]
            })
            .collect();
        Self { x, psi, dpsi }
    }

    pub fn max_level(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn psi(&self, l: usize) -> f64 {
        self.psi[l]
    }

    pub fn dpsi(&self, l: usize) -> f64 {
        self.dpsi[l]
    }

    /// `ψ_l'' = (x² - 2l - 1) ψ_l`.
    pub fn d2psi(&self, l: usize) -> f64 {
        (self.x * self.x - 2.0 * l as f64 - 1.0) * self.psi[l]
    }

    /// `ψ_l''' = 2x ψ_l + (x² - 2l - 1) ψ_l'`.
    pub fn d3psi(&self, l: usize) -> f64 {
        2.0 * self.x * self.psi[l] + (self.x * self.x - 2.0 * l as f64 - 1.0) * self.dpsi[l]
    }

    /// `(ψ_l²)^{(n)}` for `n = 0..=3`.
    fn squared_derivatives(&self, l: usize) -> [f64; 4] {
        let (p, p1, p2, p3) = (self.psi(l), self.dpsi(l), self.d2psi(l), self.d3psi(l));
        [
            p * p,
            2.0 * p * p1,
            2.0 * (p1 * p1 + p * p2),
            6.0 * p1 * p2 + 2.0 * p * p3,
        ]
    }
}

pub fn hermite_psi(l: usize, x: f64) -> f64 {
    HermiteBasis::new(l, x).psi(l)
}

/// Density of one filled shell evaluated on the axis `(r, 0, …, 0)`.
///
/// The `d-1` transverse coordinates sit at the origin, so they contribute
/// only through the weights `w(t) = Σ_{l₂+…+l_d = t} Π ψ_{l_j}(0)²`, the
/// `(d-1)`-fold self-convolution of `ψ_a(0)²`. Their prefix sums `W` give
/// `ρ(r) = Σ_a ψ_a(r)² W(M - a)`.
#[derive(Debug, Clone)]
pub struct ShellDensity {
    spec: ShellSpec,
    cumulative: Vec<f64>,
}

impl ShellDensity {
    pub fn new(spec: ShellSpec) -> Self {
        let m = spec.shell() as usize;
        let at_origin = HermiteBasis::new(m, 0.0);
        let c: Vec<f64> = (0..=m).map(|a| at_origin.psi(a).powi(2)).collect();
        let mut w = vec![0.0; m + 1];
        w[0] = 1.0;
        for _ in 1..spec.d() {
            w = (0..=m)
                .map(|t| (0..=t).map(|a| c[a] * w[t - a]).sum())
                .collect();
        }
        let cumulative = w
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        Self { spec, cumulative }
    }

    pub fn spec(&self) -> ShellSpec {
        self.spec
    }

    pub fn value(&self, r: f64) -> f64 {
        self.derivatives(r)[0]
    }

    /// `[ρ, ρ', ρ'', ρ''']` at radius `r`, differentiated term by term.
    pub fn derivatives(&self, r: f64) -> [f64; 4] {
        let m = self.spec.shell() as usize;
        let basis = HermiteBasis::new(m, r);
        let mut out = [0.0; 4];
        for a in 0..=m {
            let w = self.cumulative[m - a];
            for (o, v) in out.iter_mut().zip(basis.squared_derivatives(a)) {
                *o += w * v;
            }
        }
        out
    }

    /// Truncation radius for integrals over `[r, ∞)`.
    pub fn integration_limit(&self) -> f64 {
        self.spec.turning_radius() + TAIL_BUFFER
    }

    /// `∫_r^∞ s ρ(s) ds`, truncated at [`Self::integration_limit`].
    pub fn tail_integral(&self, r: f64, quad: &Quadrature) -> Result<f64> {
        let upper = self.integration_limit();
        if r >= upper {
            return Ok(0.0);
        }
        let turning = self.spec.turning_radius();
        let mut pts = vec![r];
        if turning > r {
            pts.push(turning);
        }
        pts.push(upper);
        quad.integrate_with_breaks(|s| s * self.value(s), &pts)
            .map(|e| e.value)
    }
}

pub fn radial_density(spec: ShellSpec, r: f64) -> f64 {
    ShellDensity::new(spec).value(r)
}

/// Independent route: `ρ_M(r) = [t^M] π^{-d/2} (1-t)^{-1} (1-t²)^{-d/2}
/// exp(-r²(1-t)/(1+t))`, expanded as truncated power series in `t`.
pub fn density_via_generating_function(spec: ShellSpec, r: f64) -> f64 {
    let order = spec.shell() as usize;
    let half_d = spec.d() as f64 / 2.0;
    let one = Series::constant(1.0, order);
    let t = Series::<f64>::variable(order);
    let geometric = (&one - &t).recip();
    let transverse = (&one - &t).compose_monomial(&1.0, 2).powf(&-half_d);
    // -r²(1-t)/(1+t) = -r² + 2r² t/(1+t)
    let frac = &t * &(&one + &t).recip();
    let gaussian = frac.scale(&(2.0 * r * r)).exp();
    let product = &(&geometric * &transverse) * &gaussian;
    PI.powf(-half_d) * (-r * r).exp() * product.coeff(order)
}

pub fn density_derivatives(spec: ShellSpec, r: f64, order: u8) -> Result<f64> {
    if !(1..=3).contains(&order) {
        return Err(Error::InvalidParameter(format!(
            "derivative order {order} not in 1..=3"
        )));
    }
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    Ok(ShellDensity::new(spec).derivatives(r)[order as usize])
}

/// Value of an identity residual together with the magnitude of its largest
/// term, so that `|value| ≤ tol · scale` is the scale-free acceptance test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    pub fn from_terms(terms: &[f64]) -> Self {
        Self {
            value: terms.iter().sum(),
            scale: terms.iter().fold(0.0f64, |m, t| m.max(t.abs())),
        }
    }

    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.value.abs()
        } else {
            self.value.abs() / self.scale
        }
    }

    pub fn within(&self, tol: f64) -> bool {
        self.value.abs() <= tol * self.scale
    }
}

/// Third-order radial equation
/// `-⅛ρ''' - ⅛((d-1)/r)ρ'' + ((d-1)/(8r²) + r²/2 - M̃)ρ' - (d/2) r ρ = 0`.
pub fn ode_residual(spec: ShellSpec, r: f64) -> Result<Residual> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    Ok(ode_residual_with(&ShellDensity::new(spec), r))
}

pub fn ode_residual_with(density: &ShellDensity, r: f64) -> Residual {
    let spec = density.spec();
    let d = spec.d() as f64;
    let [rho, d1, d2, d3] = density.derivatives(r);
    Residual::from_terms(&[
        -d3 / 8.0,
        -(d - 1.0) / (8.0 * r) * d2,
        ((d - 1.0) / (8.0 * r * r) + r * r / 2.0 - spec.m_tilde_f64()) * d1,
        -d / 2.0 * r * rho,
    ])
}

/// Integro-differential form
/// `-⅛∇²ρ + (r²/2)ρ + ((d+2)/2)∫_r^∞ sρ(s)ds - M̃ρ = 0`.
pub fn integro_residual(spec: ShellSpec, r: f64) -> Result<Residual> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    integro_residual_with(&ShellDensity::new(spec), r, &Quadrature::default())
}

pub fn integro_residual_with(
    density: &ShellDensity,
    r: f64,
    quad: &Quadrature,
) -> Result<Residual> {
    let spec = density.spec();
    let d = spec.d() as f64;
    let [rho, d1, d2, _] = density.derivatives(r);
    let laplacian = d2 + (d - 1.0) / r * d1;
    let tail = density.tail_integral(r, quad)?;
    Ok(Residual::from_terms(&[
        -laplacian / 8.0,
        r * r / 2.0 * rho,
        (d + 2.0) / 2.0 * tail,
        -spec.m_tilde_f64() * rho,
    ]))
}

/// Surface area `Ω_d = 2π^{d/2}/Γ(d/2)` of the unit sphere in `ℝ^d`.
pub fn sphere_area(d: u32) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / special::gamma(d as f64 / 2.0)
}

/// `(Ω_d/N₀) ∫_0^∞ r^{2k+d-1} ρ(r) dr` by adaptive quadrature, for real
/// `k > -d/2`.
pub fn numeric_moment(spec: ShellSpec, k: f64) -> Result<f64> {
    numeric_moment_with(&ShellDensity::new(spec), k, &Quadrature::default())
}

pub fn numeric_moment_with(density: &ShellDensity, k: f64, quad: &Quadrature) -> Result<f64> {
    let spec = density.spec();
    let d = spec.d();
    let half_d = d as f64 / 2.0;
    if !(k > -half_d + crate::moments::POLE_GUARD) {
        return Err(Error::Domain(format!(
            "moment order k = {k} must exceed -d/2 = {}",
            -half_d
        )));
    }
    let power = 2.0 * k + d as f64 - 1.0;
    let turning = spec.turning_radius();
    let upper = density.integration_limit() + k.max(0.0).sqrt();
    let integrand = |r: f64| {
        if r == 0.0 {
            0.0
        } else {
            r.powf(power) * density.value(r)
        }
    };
    let est = quad.integrate_with_breaks(integrand, &[0.0, turning.min(1.0), turning, upper])?;
    Ok(sphere_area(d) * est.value / spec.particle_number_f64())
}

/// `∫_{ℝ^d} ρ`, which equals `N₀`.
pub fn total_particles(spec: ShellSpec) -> Result<f64> {
    Ok(numeric_moment(spec, 0.0)? * spec.particle_number_f64())
}

/// Two-dimensional density at a general point `(x, y)` from the raw shell
/// sum, used to check rotational invariance.
pub fn density_2d_cartesian(m: u32, x: f64, y: f64) -> f64 {
    let m = m as usize;
    let (bx, by) = (HermiteBasis::new(m, x), HermiteBasis::new(m, y));
    let mut acc = 0.0;
    for l1 in 0..=m {
        for l2 in 0..=m - l1 {
            acc += bx.psi(l1).powi(2) * by.psi(l2).powi(2);
        }
    }
    acc
}
