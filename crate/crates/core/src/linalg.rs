//! Exact and modular linear algebra.
//!
//! Exact work is fraction-free (Bareiss) over the integers. The modular side
//! works in `F_p`, `p = 2^61 - 1`; a modular rank is a lower bound for the
//! rational rank, and [`rank_exact`] upgrades it to an exact answer by solving
//! for every non-pivot row over `Q` and checking the combination against the
//! rational matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::Rational;

pub mod fp {
    //! Arithmetic modulo the Mersenne prime `2^61 - 1`.

    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    pub const P: u64 = (1 << 61) - 1;

    #[inline]
    pub fn reduce128(v: u128) -> u64 {
        let lo = (v as u64) & P;
        let hi = (v >> 61) as u64;
        let s = lo + (hi & P) + (hi >> 61);
        let s = (s & P) + (s >> 61);
        if s >= P {
            s - P
        } else {
            s
        }
    }

    #[inline]
    pub fn add(a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= P {
            s - P
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + P - b
        }
    }

    #[inline]
    pub fn neg(a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            P - a
        }
    }

    #[inline]
    pub fn mul(a: u64, b: u64) -> u64 {
        reduce128(a as u128 * b as u128)
    }

    pub fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(a: u64) -> u64 {
        assert!(a != 0, "inverse of zero mod p");
        pow(a, P - 2)
    }

    pub fn from_i64(v: i64) -> u64 {
        let r = v.rem_euclid(P as i64);
        r as u64
    }

    pub fn from_bigint(v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(P)).to_u64().expect("reduced residue")
    }

    /// Reduces `num/den`; `None` if `p` divides the denominator.
    pub fn from_rational(r: &super::Rational) -> Option<u64> {
        let den = from_bigint(r.denom());
        if den == 0 {
            return None;
        }
        Some(mul(from_bigint(r.numer()), inv(den)))
    }
}

/// Row echelon basis over `F_p`, grown one vector at a time. Each stored row
/// has a unit at its pivot and zeros at every earlier pivot.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    width: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    pub fn new(width: usize) -> Self {
        ModEchelon {
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() >= self.width
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(c, _)| *c)
    }

    /// Reduces `v` against the basis in place; true if it became zero.
    pub fn reduce(&self, v: &mut [u64]) -> bool {
        debug_assert_eq!(v.len(), self.width);
        for (c, row) in &self.rows {
            let f = v[*c];
            if f == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row).skip(*c) {
                if r != 0 {
                    *x = fp::sub(*x, fp::mul(f, r));
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Inserts `v` if it is independent of the basis.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        if self.reduce(&mut v) {
            return false;
        }
        let c = v.iter().position(|&x| x != 0).expect("nonzero");
        let inv = fp::inv(v[c]);
        for x in v.iter_mut().skip(c) {
            *x = fp::mul(*x, inv);
        }
        self.rows.push((c, v));
        true
    }
}

pub fn rank_mod(rows: &[Vec<u64>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let mut e = ModEchelon::new(first.len());
    for r in rows {
        e.insert(r.clone());
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

/// Clears denominators row by row.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |a, c| a.lcm(c.denom()));
            row.iter().map(|c| (c * &l).to_integer()).collect()
        })
        .collect()
}

/// Fraction-free row echelon form. Returns the rank and, for each input row,
/// the integer combination of input rows it was turned into; rows at
/// positions `rank..` of the permuted result are zero, so their combinations
/// span the left nullspace.
#[allow(clippy::needless_range_loop)]
fn bareiss(rows: &[Vec<BigInt>], track: bool) -> (usize, Vec<Vec<BigInt>>) {
    let n = rows.len();
    if n == 0 {
        return (0, Vec::new());
    }
    let width = rows[0].len();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            if track {
                v.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            }
            v
        })
        .collect();
    let total = a[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..width {
        if rank == n {
            break;
        }
        let Some(p) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        for r in (rank + 1)..n {
            let f = a[r][col].clone();
            for c in 0..total {
                if c < col && c < width {
                    continue;
                }
                let v = (&pivot * &a[r][c] - &f * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
        }
        // rows above the pivot row keep their scale; only rows below change
        prev = pivot;
        rank += 1;
    }
    let combos = if track {
        a[rank..]
            .iter()
            .map(|row| {
                let v: Vec<BigInt> = row[width..].to_vec();
                let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
                if g.is_zero() || g.is_one() {
                    v
                } else {
                    v.into_iter().map(|x| x / &g).collect()
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    (rank, combos)
}

/// Exact rank by fraction-free elimination.
pub fn rank_bareiss(rows: &[Vec<BigInt>]) -> usize {
    bareiss(rows, false).0
}

/// Exact rank and a basis of `{ a : sum_j a_j row_j = 0 }`.
pub fn left_nullspace(rows: &[Vec<BigInt>]) -> (usize, Vec<Vec<BigInt>>) {
    bareiss(rows, true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankRoute {
    /// modular rank confirmed by exact dependency certificates
    Certified,
    /// modular answer rejected or unusable; full fraction-free elimination
    Bareiss,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRank {
    pub rank: usize,
    pub route: RankRoute,
}

/// Exact rank of a rational matrix: modular elimination proposes a rank and a
/// pivot set; every remaining row is expressed exactly through the pivot rows
/// and the relation is checked on all columns. Any failure falls back to
/// Bareiss elimination.
pub fn rank_exact(rows: &[Vec<Rational>]) -> ExactRank {
    if let Some(rank) = certified_modular_rank(rows) {
        return ExactRank {
            rank,
            route: RankRoute::Certified,
        };
    }
    ExactRank {
        rank: rank_bareiss(&integer_rows(rows)),
        route: RankRoute::Bareiss,
    }
}

#[allow(clippy::needless_range_loop)]
fn certified_modular_rank(rows: &[Vec<Rational>]) -> Option<usize> {
    let Some(first) = rows.first() else {
        return Some(0);
    };
    let width = first.len();
    let mut e = ModEchelon::new(width);
    let mut pivot_rows = Vec::new();
    let mut others = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let v: Option<Vec<u64>> = row.iter().map(fp::from_rational).collect();
        let v = v?;
        if e.insert(v) {
            pivot_rows.push(i);
        } else {
            others.push(i);
        }
    }
    let cols: Vec<usize> = e.pivots().collect();
    let r = cols.len();
    if r == 0 {
        return rows
            .iter()
            .all(|row| row.iter().all(Zero::is_zero))
            .then_some(0);
    }
    // B[k][j] = rows[pivot_rows[k]][cols[j]]; solve x B = v[cols]
    let b: Vec<Vec<Rational>> = pivot_rows
        .iter()
        .map(|&i| cols.iter().map(|&c| rows[i][c].clone()).collect())
        .collect();
    let binv = invert(&b)?;
    for &i in &others {
        let rhs: Vec<Rational> = cols.iter().map(|&c| rows[i][c].clone()).collect();
        let x: Vec<Rational> = (0..r)
            .map(|k| {
                rhs.iter()
                    .zip(&binv)
                    .fold(Rational::zero(), |acc, (v, brow)| acc + v * &brow[k])
            })
            .collect();
        for c in 0..width {
            let mut s = Rational::zero();
            for (k, &pi) in pivot_rows.iter().enumerate() {
                if !x[k].is_zero() && !rows[pi][c].is_zero() {
                    s += &x[k] * &rows[pi][c];
                }
            }
            if s != rows[i][c] {
                return None;
            }
        }
    }
    Some(r)
}

/// Gauss-Jordan inverse over `Q`; `None` if singular.
pub fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = row.clone();
            v.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            v
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            let pivot_row = a[col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Normalizes an integer vector to content 1 with a positive first nonzero
/// entry.
pub fn primitive_vector(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = v
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| if x.is_negative() { -BigInt::one() } else { BigInt::one() })
        .unwrap_or_else(BigInt::one);
    v.iter().map(|x| x / &g * &sign).collect()
}

pub fn to_i64(v: &BigInt) -> Option<i64> {
    v.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn rank_examples() {
        let id = q(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(rank_exact(&id).rank, 3);
        let zero = q(&[&[0, 0], &[0, 0]]);
        assert_eq!(rank_exact(&zero).rank, 0);
        assert_eq!(rank_bareiss(&integer_rows(&zero)), 0);
        assert_eq!(rank_exact(&[]).rank, 0);
    }

    #[test]
    fn nullspace_of_dependent_rows() {
        let rows = bi(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1], &[2, 2, 4]]);
        let (rank, null) = left_nullspace(&rows);
        assert_eq!(rank, 2);
        assert_eq!(null.len(), 2);
        for v in &null {
            for c in 0..3 {
                let s: BigInt = v.iter().zip(&rows).map(|(a, r)| a * &r[c]).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn mersenne_reduction() {
        assert_eq!(fp::mul(fp::P - 1, fp::P - 1), 1);
        assert_eq!(fp::mul(fp::inv(12345), 12345), 1);
        assert_eq!(fp::from_i64(-1), fp::P - 1);
        assert_eq!(fp::from_rational(&Rational::new(1.into(), 2.into())), Some(fp::inv(2)));
    }

    proptest! {
        #[test]
        fn exact_routes_agree(entries in proptest::collection::vec(-3i64..=3, 30), rows in 1usize..6) {
            let width = 30 / rows;
            let m: Vec<Vec<Rational>> = entries
                .chunks(width)
                .take(rows)
                .map(|c| c.iter().map(|&x| Rational::new(x.into(), (1 + x.abs()).into())).collect())
                .collect();
            let ex = rank_exact(&m);
            prop_assert_eq!(ex.rank, rank_bareiss(&integer_rows(&m)));
            let modular: Vec<Vec<u64>> = m
                .iter()
                .map(|r| r.iter().map(|c| fp::from_rational(c).unwrap()).collect())
                .collect();
            prop_assert_eq!(rank_mod(&modular), ex.rank);
        }

        #[test]
        fn dependent_rows_are_detected(a in proptest::collection::vec(-5i64..=5, 4), b in proptest::collection::vec(-5i64..=5, 4), s in -4i64..=4, t in -4i64..=4) {
            let c: Vec<i64> = a.iter().zip(&b).map(|(x, y)| s * x + t * y).collect();
            let rows = bi(&[&a, &b, &c]);
            let (rank, null) = left_nullspace(&rows);
            prop_assert!(rank <= 2);
            prop_assert_eq!(null.len(), 3 - rank);
        }
    }
}
