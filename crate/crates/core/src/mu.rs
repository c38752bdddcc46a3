//! Coefficients `μ_{k,l}` of the terminating expansion
//! `m_{2k} = Σ_{l ≤ ⌊k/2⌋} M̃^{k-2l} μ_{k,l}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    frac, int, pochhammer, pochhammer_half, pow2, solve_fraction_free, ExactRational,
};
use crate::moments::moment_closed_form;
use crate::shell::ShellSpec;

/// Triangle `μ_{k,l}`, `0 ≤ l ≤ ⌊k/2⌋`, `k ≤ k_max`. Entries outside the
/// triangle are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MuTriangle {
    d: u32,
    rows: Vec<Vec<ExactRational>>,
}

impl MuTriangle {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k_max(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    pub fn get(&self, k: i64, l: i64) -> ExactRational {
        if k < 0 || l < 0 {
            return ExactRational::zero();
        }
        self.rows
            .get(k as usize)
            .and_then(|row| row.get(l as usize))
            .cloned()
            .unwrap_or_else(ExactRational::zero)
    }

    pub fn row(&self, k: u32) -> &[ExactRational] {
        &self.rows[k as usize]
    }

    pub fn rows(&self) -> &[Vec<ExactRational>] {
        &self.rows
    }

    /// Cells with `k ≥ 2l` whose entry is not strictly positive.
    pub fn non_positive_cells(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                if *v <= ExactRational::zero() {
                    out.push((k as u32, l as u32));
                }
            }
        }
        out
    }
}

/// Fills the triangle from `μ_{0,0} = 1` with
/// `(k+d+1) μ_{k+1,l} = k(k+d/2)(k+d/2-1) μ_{k-1,l-1} + (2k+d) μ_{k,l}`.
pub fn build_mu_triangle(d: u32, k_max: u32) -> MuTriangle {
    let di = d as i64;
    let half_d = frac(di, 2);
    let mut tri = MuTriangle {
        d,
        rows: vec![vec![ExactRational::one()]],
    };
    for k in 0..k_max as i64 {
        let kr = int(k);
        let couple = &kr * (&kr + &half_d) * (&kr + &half_d - int(1));
        let next: Vec<ExactRational> = (0..=(k + 1) / 2)
            .map(|l| {
                (&couple * tri.get(k - 1, l - 1) + int(2 * k + di) * tri.get(k, l))
                    / int(k + di + 1)
            })
            .collect();
        tri.rows.push(next);
    }
    tri
}

/// `μ_{k,0} = 2^k (d/2)_k / (d+1)_k`.
pub fn mu_l0_closed(d: u32, k: u32) -> ExactRational {
    pow2(k as i64) * pochhammer_half(d, k as u64) / pochhammer(&int(d as i64 + 1), k as u64)
}

/// `μ_{k,1} = μ_{k,0} · k(k-1)(2k+3d-1)/24`.
pub fn mu_l1_closed(d: u32, k: u32) -> ExactRational {
    let (k, d) = (k as i64, d as i64);
    mu_l0_closed(d as u32, k as u32) * int(k * (k - 1) * (2 * k + 3 * d - 1)) / int(24)
}

/// `p_{k,l}` with `μ_{k,l} = μ_{k,0} p_{k,l}`:
/// `p_{k,0} = 1`, `p_{k,l} = ¼ Σ_{s=0}^{k-2} (s+1)(s+1+d) p_{s,l-1}`.
pub fn p_polynomial_value(d: u32, l: u32, k: u32) -> ExactRational {
    // Row-by-row in l; each row needs p_{s,l-1} for s < k.
    let mut prev: Vec<ExactRational> = vec![ExactRational::one(); k as usize + 1];
    for _ in 0..l {
        let mut cur = vec![ExactRational::zero(); k as usize + 1];
        let mut acc = ExactRational::zero();
        for kk in 2..=k as usize {
            let s = (kk - 2) as i64;
            acc += int((s + 1) * (s + 1 + d as i64)) * &prev[s as usize];
            cur[kk] = &acc / int(4);
        }
        prev = cur;
    }
    prev[k as usize].clone()
}

/// Recovers `μ_{k,0} … μ_{k,⌊k/2⌋}` by exact polynomial interpolation of
/// `m_{2k}` in `M̃` through the shells `M = 0..=k`.
///
/// Fails if a coefficient of `M̃^j` with `j ≢ k (mod 2)` is non-zero.
pub fn extract_mu_by_interpolation(d: u32, k: u32) -> Result<Vec<ExactRational>> {
    let n = k as usize + 1;
    // Unknowns b_j = c_j / 2^j are coefficients in x = 2M̃, an integer.
    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for m in 0..=k {
        let spec = ShellSpec::new(d, m)?;
        let x = BigInt::from(spec.two_m_tilde());
        let mut pw = BigInt::one();
        let mut row = Vec::with_capacity(n);
        for _ in 0..n {
            row.push(pw.clone());
            pw *= &x;
        }
        let value = moment_closed_form(spec, k);
        // Clear the denominator of this row's right-hand side.
        let den = value.denom().clone();
        rows.push(row.into_iter().map(|v| v * &den).collect::<Vec<_>>());
        rhs.push(value.numer().clone());
    }
    let b = solve_fraction_free(&rows, &rhs)
        .ok_or_else(|| Error::Identity("interpolation system is singular".into()))?;
    let coeffs: Vec<ExactRational> = b
        .into_iter()
        .enumerate()
        .map(|(j, bj)| bj * pow2(j as i64))
        .collect();
    for (j, c) in coeffs.iter().enumerate() {
        if (j as u32 + k) % 2 == 1 && !c.is_zero() {
            return Err(Error::Identity(format!(
                "coefficient of M̃^{j} in m_{{2·{k}}} (d={d}) is {c}, expected zero by parity"
            )));
        }
    }
    Ok((0..=k / 2)
        .map(|l| coeffs[(k - 2 * l) as usize].clone())
        .collect())
}

/// `M̃^{-k} m_{2k} - Σ_l M̃^{-2l} μ_{k,l}`, identically zero.
pub fn expansion_residual(spec: ShellSpec, k: u32, tri: &MuTriangle) -> ExactRational {
    let mt = spec.m_tilde();
    let mt_inv2 = (&mt * &mt).recip();
    let lhs = moment_closed_form(spec, k) / num_traits::pow(mt.clone(), k as usize);
    let mut rhs = ExactRational::zero();
    let mut w = ExactRational::one();
    for l in 0..=k / 2 {
        rhs += &w * tri.get(k as i64, l as i64);
        w *= &mt_inv2;
    }
    lhs - rhs
}
