//! Dimension counting: Gaussian binomials, covariant dimensions, Poincaré
//! series coefficients of free algebras and the per-degree bookkeeping row.

use std::collections::BTreeMap;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{pipeline, Error, Result};

/// Univariate polynomial in `T` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn one() -> Self {
        UniPoly::new(vec![BigInt::one()])
    }

    /// `1 - T^k`
    pub fn one_minus_power(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = BigInt::one();
        c[k] -= 1;
        UniPoly::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Exact division by a polynomial with constant term `±1`.
    pub fn div_exact(&self, divisor: &UniPoly) -> Result<UniPoly> {
        let lead0 = divisor.coeff(0);
        if !lead0.abs().is_one() {
            return Err(Error::Invariant("divisor must have constant term ±1".into()));
        }
        let Some(dd) = divisor.degree() else {
            return Err(Error::Invariant("division by zero polynomial".into()));
        };
        let Some(nd) = self.degree() else {
            return Ok(self.clone());
        };
        if nd < dd {
            return Err(Error::Invariant("inexact polynomial division".into()));
        }
        // long division from the constant term upward
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); nd - dd + 1];
        for k in 0..q.len() {
            let c = &rem[k] * &lead0;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::Invariant("inexact polynomial division".into()));
        }
        Ok(UniPoly::new(q))
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return UniPoly::new(vec![]);
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }
}

/// `prod_{k=1}^{i} (1 - T^(d+k)) / prod_{k=1}^{i} (1 - T^k)`.
pub fn gaussian_binomial(d: u32, i: u32) -> UniPoly {
    let mut num = UniPoly::one();
    let mut den = UniPoly::one();
    for k in 1..=i as usize {
        num = &num * &UniPoly::one_minus_power(d as usize + k);
        den = &den * &UniPoly::one_minus_power(k);
    }
    num.div_exact(&den).expect("Gaussian binomial division is exact")
}

/// Number of linearly independent covariants (all orders) of degree `i`:
/// the coefficient of `T^(floor(d*i/2))` in the Gaussian binomial.
pub fn dim_covariants(d: u32, i: u32) -> u64 {
    let g = gaussian_binomial(d, i);
    g.coeff((d * i / 2) as usize).to_u64().expect("dimension fits in u64")
}

/// Dimension of the degree-`i` semi-invariants of weight `w` (order
/// `d*i - 2w`), for every `w = 0..=floor(d*i/2)`.
pub fn block_dims(d: u32, i: u32) -> Vec<u64> {
    let g = gaussian_binomial(d, i);
    let top = (d * i / 2) as usize;
    (0..=top)
        .map(|w| {
            let cur = g.coeff(w);
            let prev = if w == 0 { BigInt::zero() } else { g.coeff(w - 1) };
            (cur - prev).to_u64().expect("block dimension is nonnegative")
        })
        .collect()
}

/// Coefficient of `T^i` in `1 / prod_k (1 - T^k)^(delta_k)` over the given
/// degrees `k < i`.
pub fn poincare_sigma(deltas: &BTreeMap<u32, u64>, i: u32) -> BigInt {
    poincare_series(deltas, i)[i as usize].clone()
}

/// Truncated series `1 / prod_k (1 - T^k)^(delta_k)` through `T^n`.
pub fn poincare_series(deltas: &BTreeMap<u32, u64>, n: u32) -> Vec<BigInt> {
    let n = n as usize;
    let mut s = vec![BigInt::zero(); n + 1];
    s[0] = BigInt::one();
    for (&k, &count) in deltas {
        let k = k as usize;
        if k == 0 || k > n {
            continue;
        }
        for _ in 0..count {
            // multiply by 1/(1 - T^k)
            for j in k..=n {
                let prev = s[j - k].clone();
                s[j] += prev;
            }
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub degree: u32,
    pub dim_c: u64,
    pub sigma: u64,
    pub dim_s: u64,
    pub delta: u64,
}

/// Assembles a row with `delta = dim_c - (sigma - dim_s)`; a negative count
/// is a pipeline inconsistency.
pub fn delta(degree: u32, dim_c: u64, sigma: u64, dim_s: u64) -> Result<DimensionRow> {
    let span = sigma.checked_sub(dim_s).ok_or_else(|| {
        pipeline(degree, format!("dim S = {dim_s} exceeds sigma = {sigma}"))
    })?;
    let delta = dim_c.checked_sub(span).ok_or_else(|| {
        pipeline(
            degree,
            format!("products span {span} > dim C = {dim_c}"),
        )
    })?;
    Ok(DimensionRow {
        degree,
        dim_c,
        sigma,
        dim_s,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gaussian_binomial_examples() {
        assert_eq!(gaussian_binomial(8, 2).coeff(8), BigInt::from(5));
        assert_eq!(gaussian_binomial(1, 1).coeffs(), b(&[1, 1]).as_slice());
        assert_eq!(gaussian_binomial(8, 3).coeff(12), BigInt::from(13));
    }

    #[test]
    fn printed_dimensions() {
        let want = [(2, 5), (3, 13), (4, 33), (5, 73), (6, 151), (7, 289), (9, 910), (10, 1514), (11, 2430), (12, 3788)];
        for (i, v) in want {
            assert_eq!(dim_covariants(8, i), v, "i = {i}");
        }
        assert_eq!(dim_covariants(2, 2), 2);
    }

    #[test]
    fn block_dims_sum_to_dimension() {
        for d in 1..=8 {
            for i in 1..=8 {
                let s: u64 = block_dims(d, i).iter().sum();
                assert_eq!(s, dim_covariants(d, i));
            }
        }
    }

    #[test]
    fn sigma_examples() {
        let mut deltas = BTreeMap::new();
        deltas.insert(1, 1);
        assert_eq!(poincare_sigma(&deltas, 2), BigInt::from(1));
        deltas.insert(2, 4);
        deltas.insert(3, 8);
        deltas.insert(4, 10);
        assert_eq!(poincare_sigma(&deltas, 5), BigInt::from(65));
        assert_eq!(poincare_sigma(&BTreeMap::new(), 1), BigInt::from(0));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(5, 73, 65, 3).unwrap().delta, 11);
        assert_eq!(delta(6, 151, 172, 30).unwrap().delta, 9);
        assert_eq!(delta(12, 3788, 14520, 10733).unwrap().delta, 1);
        assert!(matches!(delta(4, 10, 20, 0), Err(Error::Pipeline { .. })));
        assert!(delta(4, 10, 2, 3).is_err());
    }

    #[test]
    fn inexact_division_is_reported() {
        let p = UniPoly::new(b(&[1, 0, 1]));
        assert!(p.div_exact(&UniPoly::one_minus_power(1)).is_err());
    }
}
