use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{binomial_int, frac, to_f64, ExactRational};

/// A completely filled oscillator shell: dimension `d` and shell label `M`,
/// i.e. every orbital with `l₁ + … + l_d ≤ M` occupied.
///
/// `M̃ = M + (d+1)/2` is kept as the integer `2M̃` so parity arguments stay
/// exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShellSpec {
    d: u32,
    m: u32,
}

impl ShellSpec {
    pub fn new(d: u32, m: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension d must be >= 1".into()));
        }
        Ok(Self { d, m })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Shell label `M`.
    pub fn shell(&self) -> u32 {
        self.m
    }

    /// `N₀ = C(M + d, d)`.
    pub fn particle_number(&self) -> BigInt {
        binomial_int((self.m + self.d) as u64, self.d as i64)
    }

    pub fn particle_number_f64(&self) -> f64 {
        to_f64(&ExactRational::from_integer(self.particle_number()))
    }

    pub fn two_m_tilde(&self) -> u64 {
        2 * self.m as u64 + self.d as u64 + 1
    }

    pub fn m_tilde(&self) -> ExactRational {
        frac(self.two_m_tilde() as i64, 2)
    }

    pub fn m_tilde_f64(&self) -> f64 {
        self.two_m_tilde() as f64 / 2.0
    }

    /// Radius of the classical turning point of the highest filled shell.
    pub fn turning_radius(&self) -> f64 {
        (2.0 * self.m_tilde_f64()).sqrt()
    }
}
