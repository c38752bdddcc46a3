//! Truncated power series `Σ_{n ≤ N} c_n t^n` over a field.
//!
//! Used with `f64` coefficients for the generating-function density and with
//! exact rationals for the Taylor/Laurent coefficient identities.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{FromPrimitive, Num, Zero};

pub trait Coefficient: Clone + Num + Neg<Output = Self> + FromPrimitive {}

impl<T: Clone + Num + Neg<Output = T> + FromPrimitive> Coefficient for T {}

fn from_i64<T: Coefficient>(n: i64) -> T {
    T::from_i64(n).expect("integer coefficient representable")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> Series<T> {
    /// Series truncated after `t^order`; missing coefficients are zero.
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        Self { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn constant(c: T, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// `t` itself.
    pub fn variable(order: usize) -> Self {
        Self::new(vec![T::zero(), T::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Multiplies by `t^k` (`k > 0`) or divides by `t^{-k}` (`k < 0`). A
    /// negative shift requires the dropped low coefficients to vanish.
    pub fn shift(&self, k: isize) -> Self {
        let order = self.order();
        if k >= 0 {
            let k = k as usize;
            Self::from_fn(
                order,
                |n| if n >= k { self.coeff(n - k) } else { T::zero() },
            )
        } else {
            let k = (-k) as usize;
            assert!(
                self.coeffs.iter().take(k).all(Zero::is_zero),
                "dividing by t^{k} requires vanishing low coefficients"
            );
            Self::from_fn(order - k, |n| self.coeff(n + k))
        }
    }

    /// `t ↦ c·t^k` substitution, e.g. `t ↦ t²`.
    pub fn compose_monomial(&self, c: &T, k: usize) -> Self {
        let order = self.order();
        let mut out = vec![T::zero(); order + 1];
        let mut cp = T::one();
        for (j, a) in self.coeffs.iter().enumerate() {
            if j * k > order {
                break;
            }
            out[j * k] = a.clone() * cp.clone();
            cp = cp * c.clone();
        }
        Self { coeffs: out }
    }

    pub fn recip(&self) -> Self {
        let c0 = self.coeffs[0].clone();
        assert!(!c0.is_zero(), "reciprocal needs a non-zero constant term");
        let order = self.order();
        let mut out: Vec<T> = Vec::with_capacity(order + 1);
        out.push(T::one() / c0.clone());
        for n in 1..=order {
            let mut acc = T::zero();
            for j in 1..=n {
                acc = acc + self.coeffs[j].clone() * out[n - j].clone();
            }
            out.push(-acc / c0.clone());
        }
        Self { coeffs: out }
    }

    /// `exp(g)` for `g` with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(self.coeffs[0].is_zero(), "exp needs a zero constant term");
        let order = self.order();
        let mut out: Vec<T> = Vec::with_capacity(order + 1);
        out.push(T::one());
        for n in 1..=order {
            let mut acc = T::zero();
            for j in 1..=n {
                acc = acc + from_i64::<T>(j as i64) * self.coeffs[j].clone() * out[n - j].clone();
            }
            out.push(acc / from_i64(n as i64));
        }
        Self { coeffs: out }
    }

    /// `log(f)` for `f` with constant term one.
    pub fn ln(&self) -> Self {
        assert!(self.coeffs[0].is_one(), "log needs constant term 1");
        let order = self.order();
        let mut out: Vec<T> = vec![T::zero(); order + 1];
        for n in 1..=order {
            let mut acc = from_i64::<T>(n as i64) * self.coeffs[n].clone();
            for j in 1..n {
                acc = acc - from_i64::<T>(j as i64) * out[j].clone() * self.coeffs[n - j].clone();
            }
            out[n] = acc / from_i64(n as i64);
        }
        Self { coeffs: out }
    }

    /// `f^α` for `f` with constant term one and arbitrary exponent `α`.
    pub fn powf(&self, alpha: &T) -> Self {
        assert!(self.coeffs[0].is_one(), "power needs constant term 1");
        let order = self.order();
        let mut out: Vec<T> = Vec::with_capacity(order + 1);
        out.push(T::one());
        let a1 = alpha.clone() + T::one();
        for n in 1..=order {
            let mut acc = T::zero();
            for j in 1..=n {
                let w = a1.clone() * from_i64(j as i64) - from_i64(n as i64);
                acc = acc + w * self.coeffs[j].clone() * out[n - j].clone();
            }
            out.push(acc / from_i64(n as i64));
        }
        Self { coeffs: out }
    }

    fn truncate_to(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }
}

impl<T: Coefficient> Add for &Series<T> {
    type Output = Series<T>;
    fn add(self, rhs: Self) -> Series<T> {
        let order = self.order().min(rhs.order());
        Series::from_fn(order, |n| self.coeff(n) + rhs.coeff(n))
    }
}

impl<T: Coefficient> Sub for &Series<T> {
    type Output = Series<T>;
    fn sub(self, rhs: Self) -> Series<T> {
        let order = self.order().min(rhs.order());
        Series::from_fn(order, |n| self.coeff(n) - rhs.coeff(n))
    }
}

impl<T: Coefficient> Mul for &Series<T> {
    type Output = Series<T>;
    fn mul(self, rhs: Self) -> Series<T> {
        let order = self.order().min(rhs.order());
        let (a, b) = (self.truncate_to(order), rhs.truncate_to(order));
        Series::from_fn(order, |n| {
            (0..=n).fold(T::zero(), |acc, j| {
                acc + a.coeffs[j].clone() * b.coeffs[n - j].clone()
            })
        })
    }
}

impl<T: Coefficient> Neg for &Series<T> {
    type Output = Series<T>;
    fn neg(self) -> Series<T> {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}
