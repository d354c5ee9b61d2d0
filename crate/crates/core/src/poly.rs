//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables live in a [`VarSet`]: the X-coordinates `t, x1..xd` of a binary
//! form of degree `d`, the Cayley coordinates `t, z2..zd`, or the mixed set
//! `t, x1, z2..zd` used when the derivation `D2` is expressed through the
//! Cayley polynomials.
//!
//! Monomials are ordered graded-lexicographically: total degree first, then
//! exponents compared from the highest-indexed variable downwards (so `t` is
//! the smallest variable and `xd` / `zd` the largest). Terms are stored in a
//! `BTreeMap`, so iteration is always in ascending monomial order and the
//! leading term is the last entry.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// `t, x1, ..., xd`
    X,
    /// `t, z2, ..., zd`
    Z,
    /// `t, x1, z2, ..., zd`
    Zx,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarSet {
    pub kind: VarKind,
    pub d: u32,
}

impl VarSet {
    pub fn x(d: u32) -> Self {
        VarSet { kind: VarKind::X, d }
    }

    pub fn z(d: u32) -> Self {
        VarSet { kind: VarKind::Z, d }
    }

    pub fn zx(d: u32) -> Self {
        VarSet { kind: VarKind::Zx, d }
    }

    pub fn len(&self) -> usize {
        match self.kind {
            VarKind::X | VarKind::Zx => self.d as usize + 1,
            VarKind::Z => self.d as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Weight of a variable: `wt(t) = 0`, `wt(x_i) = wt(z_i) = i`.
    pub fn weight(&self, var: usize) -> u32 {
        match self.kind {
            VarKind::X | VarKind::Zx => var as u32,
            VarKind::Z => {
                if var == 0 {
                    0
                } else {
                    var as u32 + 1
                }
            }
        }
    }

    pub fn name(&self, var: usize) -> String {
        if var == 0 {
            return "t".to_string();
        }
        match self.kind {
            VarKind::X => format!("x{var}"),
            VarKind::Z => format!("z{}", var + 1),
            VarKind::Zx if var == 1 => "x1".to_string(),
            VarKind::Zx => format!("z{var}"),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        (0..self.len()).find(|&i| self.name(i) == name)
    }

    /// Index of `z_i` in a Z or Zx variable set.
    pub fn z_index(&self, i: u32) -> Option<usize> {
        match self.kind {
            VarKind::Z if (2..=self.d).contains(&i) => Some(i as usize - 1),
            VarKind::Zx if (2..=self.d).contains(&i) => Some(i as usize),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        let k = match self.kind {
            VarKind::X => "X",
            VarKind::Z => "Z",
            VarKind::Zx => "ZX",
        };
        format!("{k}({})", self.d)
    }
}

/// Dense exponent vector over a [`VarSet`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, var: usize, exp: u16) -> Self {
        let mut e = vec![0; nvars];
        e[var] = exp;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u16>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exp(&self, var: usize) -> u16 {
        self.0[var]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn weight(&self, vars: &VarSet) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| vars.weight(i) * e as u32)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Divides by `var^k`, returning `None` if the exponent is too small.
    pub fn div_var(&self, var: usize, k: u16) -> Option<Monomial> {
        if self.0[var] < k {
            return None;
        }
        let mut e = self.0.clone();
        e[var] -= k;
        Some(Monomial(e))
    }

    fn with_exp(&self, var: usize, exp: u16) -> Monomial {
        let mut e = self.0.clone();
        e[var] = exp;
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree and weight of a homogeneous, isobaric polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grading {
    pub degree: u32,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grade {
    Homogeneous(Grading),
    Inhomogeneous,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(vars: VarSet) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: VarSet, c: Rational) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: VarSet) -> Self {
        Poly::constant(vars, Rational::one())
    }

    pub fn var(vars: VarSet, var: usize) -> Self {
        Poly::monomial(vars, Monomial::var(vars.len(), var, 1), Rational::one())
    }

    pub fn monomial(vars: VarSet, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.0.len(), vars.len());
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, merging repeats.
    pub fn from_terms<I>(vars: VarSet, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), vars.len());
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Poly::from_map(vars, acc)
    }

    fn from_map(vars: VarSet, acc: HashMap<Monomial, Rational>) -> Self {
        Poly {
            vars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn check_vars(&self, other: &Poly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VarsetMismatch {
                left: self.vars.label(),
                right: other.vars.label(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            match out.get_mut(m) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        out.remove(m);
                    }
                }
                None => {
                    out.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(Poly {
            vars: self.vars,
            terms: out,
        })
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.vars));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.len().max(other.len()) * 2);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.get_mut(&ma.mul(mb)) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(ma.mul(mb), c);
                    }
                }
            }
        }
        Ok(Poly::from_map(self.vars, acc))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.vars);
        }
        Poly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(var);
            (e > 0).then(|| (m.with_exp(var, e - 1), c * rat(e as i64)))
        });
        Poly::from_terms(self.vars, terms)
    }

    /// Sets `var = 0`.
    pub fn drop_var(&self, var: usize) -> Poly {
        Poly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(var) == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest `k` such that `t^k` divides every term (`t` is variable 0).
    pub fn t_valuation(&self) -> u32 {
        self.terms.keys().map(|m| m.exp(0) as u32).min().unwrap_or(0)
    }

    /// Exact division by `t^k`; `None` if some term is not divisible.
    pub fn div_t_pow(&self, k: u32) -> Option<Poly> {
        if k == 0 {
            return Some(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.div_var(0, k as u16)?, c.clone());
        }
        Some(Poly {
            vars: self.vars,
            terms,
        })
    }

    pub fn mul_t_pow(&self, k: u32) -> Poly {
        if k == 0 {
            return self.clone();
        }
        Poly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.with_exp(0, m.exp(0) + k as u16), c.clone()))
                .collect(),
        }
    }

    /// Reinterprets the polynomial in another variable set via an index map
    /// `old var -> new var`.
    pub fn embed(&self, target: VarSet, map: &[usize]) -> Poly {
        let n = target.len();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u16; n];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            (Monomial(e), c.clone())
        });
        Poly::from_terms(target, terms)
    }

    /// Ring substitution `var_i -> images[i]`, all images in `target`.
    /// Evaluated as a nested Horner scheme, last variable outermost, so every
    /// step multiplies by a single image.
    pub fn substitute(&self, target: VarSet, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.vars.len());
        if self.is_zero() {
            return Poly::zero(target);
        }
        let terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        let order: Vec<usize> = (0..images.len()).rev().collect();
        horner(target, &terms, &order, images)
    }

    pub fn grade(&self) -> Grade {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Grade::Homogeneous(Grading {
                degree: 0,
                weight: 0,
            });
        };
        let g = Grading {
            degree: first.degree(),
            weight: first.weight(&self.vars),
        };
        for m in it {
            if m.degree() != g.degree || m.weight(&self.vars) != g.weight {
                return Grade::Inhomogeneous;
            }
        }
        Grade::Homogeneous(g)
    }

    pub fn grading(&self) -> Option<Grading> {
        match self.grade() {
            Grade::Homogeneous(g) => Some(g),
            Grade::Inhomogeneous => None,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Splits `p = c * p'` with `p'` integral, content 1 and positive leading
    /// coefficient. The zero polynomial gives `(0, 1)`.
    pub fn primitive_part(&self) -> (Poly, Rational) {
        let Some((_, lead)) = self.leading_term() else {
            return (self.clone(), Rational::one());
        };
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if lead.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (self.scale(&inv), content)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the format produced by `Display`: a signed sum of terms
    /// `c*v^e*w`, with `c` an optional rational `n` or `n/m`.
    pub fn parse(vars: VarSet, s: &str) -> Result<Poly> {
        parse_poly(vars, s)
    }
}

fn horner(target: VarSet, terms: &[(&Monomial, &Rational)], order: &[usize], images: &[Poly]) -> Poly {
    let Some((&var, rest)) = order.split_first() else {
        let c: Rational = terms.iter().map(|(_, c)| (*c).clone()).sum();
        return Poly::constant(target, c);
    };
    let mut groups: BTreeMap<u16, Vec<(&Monomial, &Rational)>> = BTreeMap::new();
    for &(m, c) in terms {
        groups.entry(m.exp(var)).or_default().push((m, c));
    }
    let top = *groups.keys().next_back().expect("nonempty");
    let mut acc = Poly::zero(target);
    for e in (0..=top).rev() {
        if !acc.is_zero() {
            acc = &acc * &images[var];
        }
        if let Some(g) = groups.get(&e) {
            acc = &acc + &horner(target, g, rest, images);
        }
    }
    acc
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.vars.label(), self)
    }
}

fn fmt_monomial(vars: &VarSet, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for i in (0..vars.len()).rev() {
        match m.exp(i) {
            0 => {}
            1 => parts.push(vars.name(i)),
            e => parts.push(format!("{}^{}", vars.name(i), e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    /// Terms in descending monomial order, e.g. `x2*t - x1^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono = fmt_monomial(&self.vars, m);
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn parse_poly(vars: VarSet, s: &str) -> Result<Poly> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i <= bytes.len() {
        let at_sep = i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && i > start);
        if at_sep {
            terms.push(&s[start..i]);
            start = i;
        }
        i += 1;
    }
    let mut out = Vec::new();
    for term in terms {
        let (sign, body) = match term.as_bytes()[0] {
            b'-' => (-1, &term[1..]),
            b'+' => (1, &term[1..]),
            _ => (1, term),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        let mut coeff = rat(sign);
        let mut exps = vec![0u16; vars.len()];
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in {term:?}")));
            }
            if factor.as_bytes()[0].is_ascii_digit() {
                coeff *= parse_rational(factor)?;
                continue;
            }
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<u16>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            let v = vars
                .index_of(name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?} in {}", vars.label())))?;
            exps[v] += e;
        }
        out.push((Monomial(exps), coeff));
    }
    Ok(Poly::from_terms(vars, out))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

// Operators panic on a variable-set mismatch; use the `try_*` forms for
// checked arithmetic.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(d: u32, s: &str) -> Poly {
        Poly::parse(VarSet::x(d), s).unwrap()
    }

    #[test]
    fn add_examples() {
        let p = x(8, "x2*t") + x(8, "-x1^2");
        assert_eq!(p.to_string(), "x2*t - x1^2");
        let q = x(8, "3*x4*x1 - t");
        assert_eq!(&q + &Poly::zero(VarSet::x(8)), q);
        assert!((x(8, "x1^2") + x(8, "-x1^2")).is_zero());
    }

    #[test]
    fn varset_mismatch_is_an_error() {
        let a = Poly::var(VarSet::x(8), 1);
        let b = Poly::var(VarSet::z(8), 1);
        assert!(matches!(a.try_add(&b), Err(Error::VarsetMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(Error::VarsetMismatch { .. })));
    }

    #[test]
    fn mul_examples() {
        let z = Poly::parse(VarSet::z(8), "z2").unwrap();
        assert_eq!((&z * &z).to_string(), "z2^2");
        let p = x(8, "x2*t - x1^2");
        // expanded by hand
        assert_eq!(&p * &p, x(8, "x2^2*t^2 - 2*x1^2*x2*t + x1^4"));
        assert_eq!(&p * &Poly::one(VarSet::x(8)), p);
    }

    #[test]
    fn monomial_order_is_graded_lex_from_the_top_variable() {
        let vs = VarSet::x(8);
        let m = |s: &str| x(8, s).leading_term().unwrap().0.clone();
        assert!(m("x2*t") > m("x1^2"));
        assert!(m("x1^3") > m("x8*t"));
        assert!(m("x8") > m("x7"));
        assert!(m("x1") > m("t"));
        assert_eq!(vs.name(0), "t");
    }

    #[test]
    fn primitive_part_examples() {
        let (p, c) = x(8, "3/2*x1^2 - 3*x2*t").primitive_part();
        // leading term is x2*t under the fixed order
        assert_eq!(p, x(8, "2*x2*t - x1^2"));
        assert_eq!(c, rat_frac(-3, 2));
        let (p, c) = x(8, "x2*t - x1^2").primitive_part();
        assert_eq!(p, x(8, "x2*t - x1^2"));
        assert_eq!(c, rat(1));
        let (p, c) = Poly::constant(VarSet::x(8), rat(7)).primitive_part();
        assert_eq!(p, Poly::one(VarSet::x(8)));
        assert_eq!(c, rat(7));
        let (p, c) = Poly::zero(VarSet::x(8)).primitive_part();
        assert!(p.is_zero());
        assert_eq!(c, rat(1));
    }

    #[test]
    fn grade_examples() {
        assert_eq!(
            x(8, "x2*t - x1^2").grade(),
            Grade::Homogeneous(Grading { degree: 2, weight: 2 })
        );
        assert_eq!(
            x(8, "t").grade(),
            Grade::Homogeneous(Grading { degree: 1, weight: 0 })
        );
        assert_eq!(x(8, "x2*t + x1").grade(), Grade::Inhomogeneous);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Poly::parse(VarSet::x(3), "x4").is_err());
        assert!(Poly::parse(VarSet::x(3), "x1^").is_err());
        assert!(Poly::parse(VarSet::x(3), "1/0*t").is_err());
        assert!(Poly::parse(VarSet::x(3), "").is_err());
    }

    #[test]
    fn substitution_and_derivative() {
        let vs = VarSet::x(3);
        let p = x(3, "x1^2*t + 2*x3");
        assert_eq!(p.derivative(1), x(3, "2*x1*t"));
        let images = vec![
            Poly::var(vs, 0),
            x(3, "x2 + t"),
            Poly::var(vs, 2),
            Poly::zero(vs),
        ];
        assert_eq!(p.substitute(vs, &images), x(3, "x2^2*t + 2*x2*t^2 + t^3"));
    }
}
