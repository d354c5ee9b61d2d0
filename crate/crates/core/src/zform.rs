//! Semi-invariants as Laurent polynomials in `t` over the Cayley coordinates.
//!
//! The kernel of `D1` is `Q[t, z2..zd][1/t] ∩ Q[X_d]`, so every semi-invariant
//! has a unique canonical form `F / t^s` with `F` over `t, z2..zd` and either
//! `s = 0` or `F` not divisible by `t`. The coordinate change is the slice map
//! `x1 -> 0`, `x_i -> z_i / t^(i-1)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{rat, Monomial, Poly, Rational, VarKind, VarSet};

fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let mut r: i64 = 1;
    for j in 0..k as i64 {
        r = r * (n as i64 - j) / (j + 1);
    }
    r
}

/// The Cayley polynomial `z_i` in X-coordinates,
/// `sum_{k=0}^{i-2} (-1)^k C(i,k) x_{i-k} x1^k t^{i-k-1} + (i-1)(-1)^{i+1} x1^i`.
pub(crate) fn cayley_poly(d: u32, i: u32) -> Poly {
    let vs = VarSet::x(d);
    let n = vs.len();
    let mut terms = Vec::new();
    for k in 0..=(i - 2) {
        let mut e = vec![0u16; n];
        e[(i - k) as usize] += 1;
        e[1] += k as u16;
        e[0] += (i - k - 1) as u16;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        terms.push((Monomial::from_exponents(e), rat(sign * binomial(i, k))));
    }
    let sign = if i % 2 == 1 { 1 } else { -1 };
    terms.push((
        Monomial::var(n, 1, i as u16),
        rat(sign * (i as i64 - 1)),
    ));
    Poly::from_terms(vs, terms)
}

/// A Laurent polynomial `numer / t^tpow`, canonical when `tpow = 0` or the
/// numerator is not divisible by `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub numer: Poly,
    pub tpow: u32,
}

impl Laurent {
    pub fn new(numer: Poly, tpow: u32) -> Self {
        let mut l = Laurent { numer, tpow };
        l.canonicalize();
        l
    }

    pub fn from_poly(p: Poly) -> Self {
        Laurent::new(p, 0)
    }

    pub fn zero(vars: VarSet) -> Self {
        Laurent {
            numer: Poly::zero(vars),
            tpow: 0,
        }
    }

    pub fn vars(&self) -> VarSet {
        self.numer.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    fn canonicalize(&mut self) {
        if self.numer.is_zero() {
            self.tpow = 0;
            return;
        }
        let k = self.numer.t_valuation().min(self.tpow);
        if k > 0 {
            self.numer = self.numer.div_t_pow(k).expect("valuation");
            self.tpow -= k;
        }
    }

    /// Rewrites both operands over the common denominator `t^max`.
    fn align(&self, other: &Laurent) -> (Poly, Poly, u32) {
        let s = self.tpow.max(other.tpow);
        (
            self.numer.mul_t_pow(s - self.tpow),
            other.numer.mul_t_pow(s - other.tpow),
            s,
        )
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let (a, b, s) = self.align(other);
        Laurent::new(&a + &b, s)
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        let (a, b, s) = self.align(other);
        Laurent::new(&a - &b, s)
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        Laurent::new(&self.numer * &other.numer, self.tpow + other.tpow)
    }

    pub fn scale(&self, c: &Rational) -> Laurent {
        Laurent::new(self.numer.scale(c), self.tpow)
    }

    /// The polynomial value, if the denominator is trivial.
    pub fn as_poly(&self) -> Option<&Poly> {
        (self.tpow == 0).then_some(&self.numer)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tpow {
            0 => write!(f, "{}", self.numer),
            1 => write!(f, "({})/t", self.numer),
            s => write!(f, "({})/t^{}", self.numer, s),
        }
    }
}

/// A semi-invariant in canonical Cayley form `numer / t^tpow`, numerator over
/// `Z(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZForm {
    inner: Laurent,
}

impl ZForm {
    pub fn new(numer: Poly, tpow: u32) -> Result<Self> {
        if numer.vars().kind != VarKind::Z {
            return Err(Error::Usage(format!(
                "ZForm numerator must be over Z(d), got {}",
                numer.vars().label()
            )));
        }
        Ok(ZForm {
            inner: Laurent::new(numer, tpow),
        })
    }

    pub fn zero(d: u32) -> Self {
        ZForm {
            inner: Laurent::zero(VarSet::z(d)),
        }
    }

    pub fn d(&self) -> u32 {
        self.inner.vars().d
    }

    pub fn numer(&self) -> &Poly {
        &self.inner.numer
    }

    pub fn tpow(&self) -> u32 {
        self.inner.tpow
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn as_laurent(&self) -> &Laurent {
        &self.inner
    }

    pub fn mul(&self, other: &ZForm) -> ZForm {
        ZForm {
            inner: self.inner.mul(&other.inner),
        }
    }

    /// Normalizes the numerator to its primitive part, returning the scalar
    /// that was divided out.
    pub fn primitive(&self) -> (ZForm, Rational) {
        let (p, c) = self.inner.numer.primitive_part();
        (
            ZForm {
                inner: Laurent {
                    numer: p,
                    tpow: self.inner.tpow,
                },
            },
            c,
        )
    }

    pub fn to_json(&self) -> ZFormJson {
        ZFormJson {
            tpow: self.tpow(),
            terms: self
                .numer()
                .terms()
                .rev()
                .map(|(m, c)| TermJson {
                    exponents: m.exponents().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(d: u32, j: &ZFormJson) -> Result<Self> {
        let vs = VarSet::z(d);
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exponents.len() != vs.len() {
                return Err(Error::Parse(format!(
                    "ZForm term has {} exponents, expected {}",
                    t.exponents.len(),
                    vs.len()
                )));
            }
            let num: BigInt = t
                .num
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator {:?}", t.num)))?;
            let den: BigInt = t
                .den
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator {:?}", t.den)))?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            terms.push((
                Monomial::from_exponents(t.exponents.clone()),
                Rational::new(num, den),
            ));
        }
        let zf = ZForm::new(Poly::from_terms(vs, terms), j.tpow)?;
        if zf.tpow() != j.tpow {
            return Err(Error::Parse("ZForm is not in canonical form".into()));
        }
        Ok(zf)
    }
}

impl fmt::Display for ZForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u16>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZFormJson {
    pub tpow: u32,
    pub terms: Vec<TermJson>,
}

/// Converts a semi-invariant from X-coordinates to its canonical Cayley form.
///
/// Fails with a witness term if `p` is not annihilated by `D1`.
pub fn x_to_z(p: &Poly) -> Result<ZForm> {
    let vs = p.vars();
    if vs.kind != VarKind::X {
        return Err(Error::Usage(format!("x_to_z expects X(d), got {}", vs.label())));
    }
    let d1p = crate::weitzenbock::d1(vs.d).apply(p)?;
    if let Some((m, c)) = d1p.leading_term() {
        let w = Poly::monomial(vs, m.clone(), c.clone());
        return Err(Error::NotSemiInvariant {
            witness: w.to_string(),
        });
    }
    Ok(slice_to_z(p))
}

/// The slice map without the kernel check; only meaningful on semi-invariants.
pub(crate) fn slice_to_z(p: &Poly) -> ZForm {
    let d = p.vars().d;
    let zs = VarSet::z(d);
    let restricted: Vec<_> = p.terms().filter(|(m, _)| m.exp(1) == 0).collect();
    // t-exponent of each term after x_i -> z_i / t^(i-1)
    let shifted: Vec<i64> = restricted
        .iter()
        .map(|(m, _)| {
            let down: i64 = (2..=d as usize)
                .map(|i| (i as i64 - 1) * m.exp(i) as i64)
                .sum();
            m.exp(0) as i64 - down
        })
        .collect();
    let s = shifted.iter().map(|&e| -e).max().unwrap_or(0).max(0);
    let terms = restricted.iter().zip(&shifted).map(|((m, c), &e)| {
        let mut ex = vec![0u16; zs.len()];
        ex[0] = (e + s) as u16;
        for i in 2..=d as usize {
            ex[i - 1] = m.exp(i);
        }
        (Monomial::from_exponents(ex), (*c).clone())
    });
    ZForm {
        inner: Laurent::new(Poly::from_terms(zs, terms), s as u32),
    }
}

/// Expands a Cayley form back into X-coordinates. Non-divisibility by the
/// stated power of `t` means the ZForm was corrupt.
pub fn z_to_x(f: &ZForm) -> Result<Poly> {
    let d = f.d();
    let xs = VarSet::x(d);
    let zs = VarSet::z(d);
    let mut images = Vec::with_capacity(zs.len());
    images.push(Poly::var(xs, 0));
    for i in 2..=d {
        images.push(cayley_poly(d, i));
    }
    let expanded = f.numer().substitute(xs, &images);
    expanded.div_t_pow(f.tpow()).ok_or_else(|| {
        Error::Invariant(format!(
            "ZForm numerator is not divisible by t^{} in X-coordinates",
            f.tpow()
        ))
    })
}

/// Rewrites an X-form polynomial over `t, x1, z2..zd` using
/// `x_i = (sum_{k=0}^{i-2} C(i,k) x1^k z_{i-k} + x1^i) / t^(i-1)`.
pub fn x_to_zx(p: &Poly) -> Laurent {
    let d = p.vars().d;
    let zx = VarSet::zx(d);
    let mut images = Vec::with_capacity(d as usize + 1);
    images.push(Laurent::from_poly(Poly::var(zx, 0)));
    images.push(Laurent::from_poly(Poly::var(zx, 1)));
    for i in 2..=d {
        let mut terms = Vec::new();
        for k in 0..=(i - 2) {
            let mut e = vec![0u16; zx.len()];
            e[1] = k as u16;
            e[(i - k) as usize] += 1;
            terms.push((Monomial::from_exponents(e), rat(binomial(i, k))));
        }
        terms.push((Monomial::var(zx.len(), 1, i as u16), Rational::one()));
        images.push(Laurent::new(Poly::from_terms(zx, terms), i - 1));
    }
    let mut acc = Laurent::zero(zx);
    for (m, c) in p.terms() {
        let mut prod = Laurent::from_poly(Poly::constant(zx, c.clone()));
        for (v, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                prod = prod.mul(&images[v]);
            }
        }
        acc = acc.add(&prod);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(d: u32, s: &str) -> Poly {
        Poly::parse(VarSet::x(d), s).unwrap()
    }

    fn z(d: u32, s: &str) -> Poly {
        Poly::parse(VarSet::z(d), s).unwrap()
    }

    #[test]
    fn x_to_z_examples() {
        let f = x_to_z(&x(8, "x2*t - x1^2")).unwrap();
        assert_eq!(f.tpow(), 0);
        assert_eq!(f.numer(), &z(8, "z2"));
        let f = x_to_z(&x(8, "x4*t - 4*x1*x3 + 3*x2^2")).unwrap();
        assert_eq!(f.tpow(), 2);
        assert_eq!(f.numer(), &z(8, "z4 + 3*z2^2"));
        assert_eq!(f.to_string(), "(3*z2^2 + z4)/t^2");
        let f = x_to_z(&x(8, "t")).unwrap();
        assert_eq!((f.numer().to_string(), f.tpow()), ("t".to_string(), 0));
    }

    #[test]
    fn x_to_z_rejects_non_kernel() {
        let err = x_to_z(&x(8, "x1")).unwrap_err();
        assert!(matches!(err, Error::NotSemiInvariant { .. }), "{err}");
    }

    #[test]
    fn z_to_x_examples() {
        let f = ZForm::new(z(8, "z2"), 0).unwrap();
        assert_eq!(z_to_x(&f).unwrap(), x(8, "x2*t - x1^2"));
        let f = ZForm::new(z(8, "z4 + 3*z2^2"), 2).unwrap();
        assert_eq!(z_to_x(&f).unwrap(), x(8, "x4*t - 4*x1*x3 + 3*x2^2"));
        let f = ZForm::new(z(8, "t"), 0).unwrap();
        assert_eq!(z_to_x(&f).unwrap(), x(8, "t"));
    }

    #[test]
    fn corrupt_zform_is_detected() {
        let f = ZForm::new(z(8, "z2"), 1).unwrap();
        assert!(matches!(z_to_x(&f), Err(Error::Invariant(_))));
    }

    #[test]
    fn slice_map_reproduces_cayley_list() {
        // t^(i-1) * sigma(x_i) = z_i, i.e. the slice of z_i is the variable z_i
        for d in 2..=10 {
            for i in 2..=d {
                let f = x_to_z(&cayley_poly(d, i)).unwrap();
                assert_eq!(f.tpow(), 0);
                let zs = VarSet::z(d);
                assert_eq!(f.numer(), &Poly::var(zs, zs.z_index(i).unwrap()));
            }
        }
    }

    #[test]
    fn x_to_zx_inverts_cayley_substitution() {
        let d = 6;
        let zx = VarSet::zx(d);
        for i in 2..=d {
            // x_i expressed through z's, then z's expanded back to X-form
            let xi = Poly::var(VarSet::x(d), i as usize);
            let l = x_to_zx(&xi);
            let mut images = vec![Poly::var(VarSet::x(d), 0), Poly::var(VarSet::x(d), 1)];
            for j in 2..=d {
                images.push(cayley_poly(d, j));
            }
            let back = l.numer.substitute(VarSet::x(d), &images).div_t_pow(l.tpow).unwrap();
            assert_eq!(back, xi, "x{i} over {}", zx.label());
        }
    }

    #[test]
    fn zform_json_round_trip() {
        let f = ZForm::new(z(8, "z8 + 28*z2*z6 - 56*z3*z5 + 35*z4^2"), 6).unwrap();
        let j = f.to_json();
        assert_eq!(ZForm::from_json(8, &j).unwrap(), f);
        let mut bad = j.clone();
        bad.terms[0].exponents.pop();
        assert!(ZForm::from_json(8, &bad).is_err());
    }
}
