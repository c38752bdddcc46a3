//! Exact rational primitives.
//!
//! `ExactRational` is `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator after each operation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type ExactRational = num_rational::BigRational;

pub fn int(n: i64) -> ExactRational {
    ExactRational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> ExactRational {
    ExactRational::from_integer(binomial_int(n, k))
}

pub fn binomial_int(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * j)
}

/// Rising factorial `(a)_k = a (a+1) ⋯ (a+k-1)` of a rational.
pub fn pochhammer(a: &ExactRational, k: u64) -> ExactRational {
    let mut acc = ExactRational::one();
    let mut term = a.clone();
    for _ in 0..k {
        acc *= &term;
        term += ExactRational::one();
    }
    acc
}

/// `(d/2)_k = Γ(d/2 + k) / Γ(d/2)`.
pub fn pochhammer_half(d: u32, k: u64) -> ExactRational {
    pochhammer(&frac(d as i64, 2), k)
}

pub fn catalan(k: u64) -> ExactRational {
    binomial(2 * k, k as i64) / int(k as i64 + 1)
}

pub fn pow2(e: i64) -> ExactRational {
    if e >= 0 {
        ExactRational::from_integer(BigInt::one() << e as usize)
    } else {
        ExactRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Terminating `₂F₁(-n, b; c; z)` summed exactly over its `n + 1` terms.
///
/// Returns `None` when a denominator `(c)_j` vanishes before the sum
/// terminates.
pub fn hyp2f1_terminating(
    n: u64,
    b: &ExactRational,
    c: &ExactRational,
    z: &ExactRational,
) -> Option<ExactRational> {
    let mut sum = ExactRational::one();
    let mut term = ExactRational::one();
    let minus_n = -int(n as i64);
    for j in 0..n {
        let jr = int(j as i64);
        let den = (c + &jr) * (&jr + ExactRational::one());
        if den.is_zero() {
            return None;
        }
        term = term * (&minus_n + &jr) * (b + &jr) * z / den;
        sum += &term;
    }
    Some(sum)
}

/// Nearest `f64` to an exact rational, robust to numerators and denominators
/// beyond the `f64` range.
pub fn to_f64(q: &ExactRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = q.numer().bits().max(q.denom().bits()) as i64 - 900;
    let (n, d) = if shift > 0 {
        (q.numer() >> shift as usize, q.denom() >> shift as usize)
    } else {
        (q.numer().clone(), q.denom().clone())
    };
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

/// Lowest-terms / positive-denominator check used by the invariant tests.
pub fn is_canonical(q: &ExactRational) -> bool {
    q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
}

/// Solves `A x = b` over the rationals with Bareiss fraction-free elimination
/// on the integer matrix `A` (augmented with `b`). Returns `None` when `A` is
/// singular.
pub fn solve_fraction_free(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<ExactRational>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![ExactRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = ExactRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= ExactRational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / ExactRational::from_integer(m[i][i].clone());
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dyck paths of semilength `k`, counted by brute force.
    fn dyck_paths(k: u32) -> u64 {
        (0u64..1 << (2 * k))
            .filter(|bits| {
                let mut h = 0i32;
                for i in 0..2 * k {
                    h += if bits >> i & 1 == 1 { 1 } else { -1 };
                    if h < 0 {
                        return false;
                    }
                }
                h == 0
            })
            .count() as u64
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), int(6));
        assert_eq!(binomial(3, 5), int(0));
        assert_eq!(binomial(3, -1), int(0));
        assert_eq!(binomial(10, 0), int(1));
    }

    #[test]
    fn pochhammer_half_values() {
        assert_eq!(pochhammer_half(1, 2), frac(3, 4));
        assert_eq!(pochhammer_half(2, 3), int(6));
        assert_eq!(pochhammer_half(1, 0), int(1));
    }

    #[test]
    fn catalan_matches_dyck_enumeration() {
        assert_eq!(catalan(0), int(1));
        assert_eq!(catalan(3), int(dyck_paths(3) as i64));
        assert_eq!(catalan(3), int(5));
        assert_eq!(catalan(5), int(42));
        for k in 0..8 {
            assert_eq!(catalan(k as u64), int(dyck_paths(k) as i64));
        }
    }

    #[test]
    fn pochhammer_and_catalan_recurrences() {
        for d in 1..=8 {
            for k in 0..=40u64 {
                let step = frac(d as i64, 2) + int(k as i64);
                assert_eq!(pochhammer_half(d, k + 1), pochhammer_half(d, k) * step);
            }
        }
        for k in 0..=40u64 {
            assert_eq!(
                int(k as i64 + 2) * catalan(k + 1),
                int(2 * (2 * k as i64 + 1)) * catalan(k)
            );
        }
    }

    #[test]
    fn arithmetic_stays_canonical() {
        let mut acc = frac(6, 4);
        assert!(is_canonical(&acc));
        for j in 1..30 {
            acc = acc * frac(2 * j, 3 * j + 1) - frac(j, 6);
            assert!(is_canonical(&acc));
        }
        assert!(is_canonical(&frac(3, -9)));
    }

    #[test]
    fn terminating_hypergeometric() {
        // 2F1(-2, -1; 2; 2) = 1 + 2 + 0
        let v = hyp2f1_terminating(2, &int(-1), &int(2), &int(2)).unwrap();
        assert_eq!(v, int(3));
        assert!(hyp2f1_terminating(3, &int(1), &int(-1), &int(2)).is_none());
        // Chu–Vandermonde: 2F1(-n, b; c; 1) = (c-b)_n / (c)_n
        let (b, c) = (frac(3, 2), frac(7, 3));
        for n in 0..10 {
            let lhs = hyp2f1_terminating(n, &b, &c, &int(1)).unwrap();
            let rhs = pochhammer(&(&c - &b), n) / pochhammer(&c, n);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn fraction_free_solve() {
        let a = vec![
            vec![BigInt::from(2), BigInt::from(1), BigInt::from(-1)],
            vec![BigInt::from(-3), BigInt::from(-1), BigInt::from(2)],
            vec![BigInt::from(-2), BigInt::from(1), BigInt::from(2)],
        ];
        let b = vec![BigInt::from(8), BigInt::from(-11), BigInt::from(-3)];
        let x = solve_fraction_free(&a, &b).unwrap();
        assert_eq!(x, vec![int(2), int(3), int(-1)]);
        let singular = vec![
            vec![BigInt::from(1), BigInt::from(2)],
            vec![BigInt::from(2), BigInt::from(4)],
        ];
        assert!(solve_fraction_free(&singular, &[BigInt::from(1), BigInt::from(1)]).is_none());
    }

    #[test]
    fn huge_rationals_convert() {
        let q = ExactRational::new(BigInt::one() << 2000usize, (BigInt::one() << 1999usize) * 3);
        assert!((to_f64(&q) - 2.0 / 3.0).abs() < 1e-15);
    }
}
