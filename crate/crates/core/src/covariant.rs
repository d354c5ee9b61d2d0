//! Covariants, Roberts' correspondence and (semi)transvectants.
//!
//! A covariant of order `m` is stored as its coefficient list `c_0..c_m`,
//! `F = sum_j c_j Y1^(m-j) Y2^j`. The leading coefficient `c_0` is a
//! semi-invariant and determines the rest: `c_j = D2^j(c_0) / j!`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{usage, Error, Result};
use crate::poly::{rat, Poly, Rational, VarKind, VarSet};
use crate::weitzenbock::{d2, d2_images_in_z, is_semi_invariant, order_from_grading, Derivation};
use crate::zform::{slice_to_z, z_to_x, Laurent, ZForm};

pub(crate) fn falling(a: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for j in 0..k {
        r *= BigInt::from(a as i64 - j as i64);
    }
    r
}

pub(crate) fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling(n, k) / falling(k, k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covariant {
    d: u32,
    coeffs: Vec<Poly>,
}

impl Covariant {
    pub fn new(d: u32, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(usage("covariant needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| c.vars() != VarSet::x(d)) {
            return Err(usage(format!("covariant coefficients must be over X({d})")));
        }
        Ok(Covariant { d, coeffs })
    }

    /// The binary form itself, `t Y1^d + sum_i C(d,i) x_i Y1^(d-i) Y2^i`.
    pub fn basic_form(d: u32) -> Self {
        let vs = VarSet::x(d);
        let coeffs = (0..=d)
            .map(|i| Poly::var(vs, i as usize).scale(&Rational::from_integer(binom(d, i))))
            .collect();
        Covariant { d, coeffs }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Poly {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn mul(&self, other: &Covariant) -> Covariant {
        let vs = VarSet::x(self.d);
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![Poly::zero(vs); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Covariant { d: self.d, coeffs }
    }

    /// Checks `j * c_j = D2(c_{j-1})` for every `j` and `D2(c_m) = 0`.
    pub fn satisfies_roberts(&self) -> Result<bool> {
        let der = d2(self.d);
        for j in 1..self.coeffs.len() {
            let lhs = self.coeffs[j].scale(&rat(j as i64));
            if der.apply(&self.coeffs[j - 1])? != lhs {
                return Ok(false);
            }
        }
        Ok(der.apply(self.coeffs.last().unwrap())?.is_zero())
    }
}

/// A nonzero isobaric semi-invariant with cached grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiInvariant {
    xform: Poly,
    zform: ZForm,
    degree: u32,
    order: u32,
    pub name: Option<String>,
}

impl SemiInvariant {
    pub fn from_xform(p: Poly) -> Result<Self> {
        let vs = p.vars();
        if vs.kind != VarKind::X {
            return Err(usage(format!("semi-invariant must be over X(d), got {}", vs.label())));
        }
        if p.is_zero() {
            return Err(usage("zero is not a graded semi-invariant"));
        }
        if !is_semi_invariant(&p)? {
            return Err(Error::NotSemiInvariant {
                witness: crate::weitzenbock::d1(vs.d).apply(&p)?.to_string(),
            });
        }
        let g = p
            .grading()
            .ok_or_else(|| usage("semi-invariant is not homogeneous and isobaric"))?;
        let order = order_from_grading(vs.d, g.degree, g.weight)
            .ok_or_else(|| Error::Invariant("weight exceeds d*deg/2".into()))?;
        let zform = slice_to_z(&p);
        Ok(SemiInvariant {
            xform: p,
            zform,
            degree: g.degree,
            order,
            name: None,
        })
    }

    pub fn from_zform(z: ZForm) -> Result<Self> {
        let x = z_to_x(&z)?;
        let mut s = Self::from_xform(x)?;
        s.zform = z;
        Ok(s)
    }

    /// The leading coefficient `t` of the basic form.
    pub fn basic(d: u32) -> Self {
        let mut s = Self::from_xform(Poly::var(VarSet::x(d), 0)).expect("t is a semi-invariant");
        s.name = Some("t".into());
        s
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn d(&self) -> u32 {
        self.xform.vars().d
    }

    pub fn xform(&self) -> &Poly {
        &self.xform
    }

    pub fn zform(&self) -> &ZForm {
        &self.zform
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn weight(&self) -> u32 {
        (self.d() * self.degree - self.order) / 2
    }

    pub fn mul(&self, other: &SemiInvariant) -> SemiInvariant {
        SemiInvariant {
            xform: &self.xform * &other.xform,
            zform: self.zform.mul(&other.zform),
            degree: self.degree + other.degree,
            order: self.order + other.order,
            name: None,
        }
    }

    /// Rescales so the Cayley numerator is primitive with positive leading
    /// coefficient.
    pub fn normalized(&self) -> SemiInvariant {
        let (z, c) = self.zform.primitive();
        SemiInvariant {
            xform: self.xform.scale(&c.recip()),
            zform: z,
            degree: self.degree,
            order: self.order,
            name: self.name.clone(),
        }
    }
}

pub fn kappa(f: &Covariant) -> Result<SemiInvariant> {
    SemiInvariant::from_xform(f.leading().clone())
}

/// Roberts' reconstruction `c_j = D2^j(a) / j!`, `j = 0..ord(a)`.
pub fn kappa_inv(a: &SemiInvariant) -> Result<Covariant> {
    let d = a.d();
    let der = d2(d);
    let mut coeffs = vec![a.xform.clone()];
    let mut cur = a.xform.clone();
    for j in 1..=a.order {
        cur = der.apply(&cur)?;
        coeffs.push(cur.scale(&Rational::new(BigInt::one(), falling(j, j))));
    }
    if !der.apply(&cur)?.is_zero() {
        return Err(Error::Invariant(format!(
            "D2^{} does not vanish on a semi-invariant of order {}",
            a.order + 1,
            a.order
        )));
    }
    Covariant::new(d, coeffs)
}

/// `(F,G)^r = sum_i (-1)^i C(r,i) d^rF/dY1^(r-i)dY2^i * d^rG/dY1^i dY2^(r-i)`,
/// without any normalizing prefactor.
pub fn transvectant(f: &Covariant, g: &Covariant, r: u32) -> Result<Covariant> {
    if f.d != g.d {
        return Err(usage("transvectant of covariants of different forms"));
    }
    let (m, k) = (f.order(), g.order());
    if r > m.min(k) {
        return Err(usage(format!(
            "transvectant index {r} exceeds min(ord F, ord G) = {}",
            m.min(k)
        )));
    }
    let vs = VarSet::x(f.d);
    let n = (m + k - 2 * r) as usize;
    let mut out = vec![Poly::zero(vs); n + 1];
    for i in 0..=r {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let outer = Rational::from_integer(binom(r, i) * sign);
        // Y2-exponent e of d^rF/dY1^(r-i)dY2^i comes from c_{e+i}
        let df: Vec<Poly> = (0..=(m - r))
            .map(|e| {
                let j = e + i;
                let c = falling(j, i) * falling(m - j, r - i);
                f.coeffs[j as usize].scale(&Rational::from_integer(c))
            })
            .collect();
        let dg: Vec<Poly> = (0..=(k - r))
            .map(|e| {
                let j = e + r - i;
                let c = falling(j, r - i) * falling(k - j, i);
                g.coeffs[j as usize].scale(&Rational::from_integer(c))
            })
            .collect();
        for (e1, a) in df.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (e2, b) in dg.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let term = (a * b).scale(&outer);
                out[e1 + e2] = &out[e1 + e2] + &term;
            }
        }
    }
    Covariant::new(f.d, out)
}

pub fn order_of_semitransvectant(f: &SemiInvariant, g: &SemiInvariant, r: u32) -> Result<u32> {
    check_index(f, g, r)?;
    Ok(f.order + g.order - 2 * r)
}

fn check_index(f: &SemiInvariant, g: &SemiInvariant, r: u32) -> Result<()> {
    if f.d() != g.d() {
        return Err(usage("semitransvectant of semi-invariants of different forms"));
    }
    if r > f.order.min(g.order) {
        return Err(usage(format!(
            "semitransvectant index {r} exceeds min(ord f, ord g) = {}",
            f.order.min(g.order)
        )));
    }
    Ok(())
}

/// `[f,g]^r`: lift both to covariants, transvect, take the leading
/// coefficient and normalize it to a primitive integral Cayley numerator.
/// `None` when the transvectant vanishes identically.
pub fn semitransvectant(f: &SemiInvariant, g: &SemiInvariant, r: u32) -> Result<Option<SemiInvariant>> {
    check_index(f, g, r)?;
    let tv = transvectant(&kappa_inv(f)?, &kappa_inv(g)?, r)?;
    if tv.leading().is_zero() {
        return Ok(None);
    }
    let s = kappa(&tv)?;
    debug_assert_eq!(s.order, f.order + g.order - 2 * r);
    Ok(Some(s.normalized()))
}

fn z_to_zx(l: &Laurent) -> Laurent {
    let d = l.vars().d;
    let map: Vec<usize> = (0..d as usize).map(|k| if k == 0 { 0 } else { k + 1 }).collect();
    Laurent::new(l.numer.embed(VarSet::zx(d), &map), l.tpow)
}

/// Sets `x1 = 0` and drops back to the Cayley variables.
fn zx_slice(l: &Laurent) -> Laurent {
    let d = l.vars().d;
    let sliced = l.numer.drop_var(1);
    let map: Vec<usize> = (0..=d as usize)
        .map(|k| k.saturating_sub(1))
        .collect();
    Laurent::new(sliced.embed(VarSet::z(d), &map), l.tpow)
}

/// `D^j f |_{x1=0}` for `j = 0..=upto`. After step `j` only terms of
/// `x1`-degree at most `upto - j` can still reach the slice, since every
/// application lowers the `x1`-degree by at most one.
fn iterate_sliced(der: &Derivation, f: &ZForm, upto: u32) -> Result<Vec<Laurent>> {
    let mut cur = truncate_x1(&z_to_zx(f.as_laurent()), upto);
    let mut out = vec![zx_slice(&cur)];
    for step in 0..upto {
        cur = der.apply_laurent(&cur)?;
        cur = truncate_x1(&cur, upto - step - 1);
        out.push(zx_slice(&cur));
    }
    Ok(out)
}

fn truncate_x1(l: &Laurent, max: u32) -> Laurent {
    let kept = Poly::from_terms(
        l.vars(),
        l.numer
            .terms()
            .filter(|(m, _)| u32::from(m.exp(1)) <= max)
            .map(|(m, c)| (m.clone(), c.clone())),
    );
    Laurent::new(kept, l.tpow)
}

/// The same semitransvectant computed in Cayley coordinates:
/// `sum_i (-1)^i C(r,i) (D^i f / [m]_i)|_{x1=0} (D^(r-i) g / [k]_(r-i))|_{x1=0}`,
/// where `D` is `D2` acting on `t, x1, z2..zd`.
pub fn semitransvectant_fast(f: &SemiInvariant, g: &SemiInvariant, r: u32) -> Result<Option<SemiInvariant>> {
    check_index(f, g, r)?;
    match semitransvectant_zform(f.zform(), f.order, g.zform(), g.order, r)? {
        None => Ok(None),
        Some(z) => Ok(Some(SemiInvariant::from_zform(z)?.normalized())),
    }
}

/// Cayley-coordinate semitransvectant of semi-invariants given only by their
/// Z-forms and orders `m`, `k`; the result is primitive.
pub fn semitransvectant_zform(f: &ZForm, m: u32, g: &ZForm, k: u32, r: u32) -> Result<Option<ZForm>> {
    if f.d() != g.d() {
        return Err(usage("semitransvectant of semi-invariants of different forms"));
    }
    if r > m.min(k) {
        return Err(usage(format!(
            "semitransvectant index {r} exceeds min(ord f, ord g) = {}",
            m.min(k)
        )));
    }
    let d = f.d();
    let der = d2_images_in_z(d)?;
    let fs = iterate_sliced(&der, f, r)?;
    let gs = iterate_sliced(&der, g, r)?;
    let mut acc = Laurent::zero(VarSet::z(d));
    for i in 0..=r {
        let (a, b) = (&fs[i as usize], &gs[(r - i) as usize]);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let c = Rational::new(binom(r, i) * sign, falling(m, i) * falling(k, r - i));
        acc = acc.add(&a.mul(b).scale(&c));
    }
    if acc.is_zero() {
        return Ok(None);
    }
    Ok(Some(ZForm::new(acc.numer, acc.tpow)?.primitive().0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct FastClass {
    degrees: (u32, u32),
    orders: (u32, u32),
    r: u32,
}

/// Routes semitransvectants through the Cayley-coordinate formula once it has
/// agreed with the direct route on `samples` triples of the same
/// `(degree, order, r)` class. A disagreement pins the class to the direct
/// route and is recorded.
#[derive(Debug, Default)]
pub struct FastPathGate {
    samples: usize,
    agreed: HashMap<FastClass, usize>,
    disabled: HashMap<FastClass, String>,
}

impl FastPathGate {
    pub fn new(samples: usize) -> Self {
        FastPathGate {
            samples,
            ..Default::default()
        }
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &String> {
        self.disabled.values()
    }

    pub fn semitransvectant(
        &mut self,
        f: &SemiInvariant,
        g: &SemiInvariant,
        r: u32,
    ) -> Result<Option<SemiInvariant>> {
        let class = FastClass {
            degrees: (f.degree, g.degree),
            orders: (f.order, g.order),
            r,
        };
        if self.disabled.contains_key(&class) {
            return semitransvectant(f, g, r);
        }
        let seen = self.agreed.get(&class).copied().unwrap_or(0);
        if seen >= self.samples {
            return semitransvectant_fast(f, g, r);
        }
        let direct = semitransvectant(f, g, r)?;
        let fast = semitransvectant_fast(f, g, r)?;
        if same_up_to_sign(direct.as_ref(), fast.as_ref()) {
            *self.agreed.entry(class).or_insert(0) += 1;
        } else {
            let msg = format!(
                "fast route disagrees for degrees {:?}, orders {:?}, r = {r}",
                class.degrees, class.orders
            );
            log::warn!("{msg}");
            self.disabled.insert(class, msg);
        }
        Ok(direct)
    }
}

pub fn same_up_to_sign(a: Option<&SemiInvariant>, b: Option<&SemiInvariant>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => {
            a.zform() == b.zform() || a.xform() == &-b.xform()
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(d: u32, s: &str) -> Poly {
        Poly::parse(VarSet::x(d), s).unwrap()
    }

    fn si(d: u32, s: &str) -> SemiInvariant {
        SemiInvariant::from_xform(x(d, s)).unwrap()
    }

    #[test]
    fn kappa_of_basic_form_is_t() {
        let f = Covariant::basic_form(8);
        assert_eq!(kappa(&f).unwrap().xform(), &x(8, "t"));
        assert_eq!(kappa_inv(&SemiInvariant::basic(8)).unwrap(), f);
    }

    #[test]
    fn kappa_inv_examples() {
        let dv4 = si(8, "x8*t - 8*x1*x7 + 28*x2*x6 - 56*x3*x5 + 35*x4^2");
        let c = kappa_inv(&dv4).unwrap();
        assert_eq!(c.order(), 0);
        assert_eq!(c.leading(), dv4.xform());
        let dv3 = si(8, "x6*t - 6*x1*x5 + 15*x2*x4 - 10*x3^2");
        let c = kappa_inv(&dv3).unwrap();
        assert_eq!(c.coeffs().len(), 5);
        assert!(c.satisfies_roberts().unwrap());
        assert_eq!(kappa(&c).unwrap(), dv3);
    }

    #[test]
    fn self_transvectants_of_odd_index_vanish() {
        let f = Covariant::basic_form(6);
        for r in [1, 3, 5] {
            assert!(transvectant(&f, &f, r).unwrap().is_zero());
        }
        assert!(!transvectant(&f, &f, 2).unwrap().is_zero());
    }

    #[test]
    fn zeroth_transvectant_is_the_product() {
        let f = Covariant::basic_form(4);
        let g = kappa_inv(&si(4, "x2*t - x1^2")).unwrap();
        assert_eq!(transvectant(&f, &g, 0).unwrap(), f.mul(&g));
    }

    #[test]
    fn transvectant_index_is_checked() {
        let f = Covariant::basic_form(4);
        assert!(matches!(transvectant(&f, &f, 5), Err(Error::Usage(_))));
        let t = SemiInvariant::basic(4);
        assert!(semitransvectant(&t, &t, 5).is_err());
    }

    #[test]
    fn semitransvectants_of_the_form_with_itself() {
        let t = SemiInvariant::basic(8);
        let dv1 = semitransvectant(&t, &t, 2).unwrap().unwrap();
        assert_eq!(dv1.zform().to_string(), "z2");
        assert_eq!(dv1.order(), 12);
        let dv2 = semitransvectant(&t, &t, 4).unwrap().unwrap();
        assert_eq!(dv2.zform().to_string(), "(3*z2^2 + z4)/t^2");
        let dv3 = semitransvectant(&t, &t, 6).unwrap().unwrap();
        assert_eq!(dv3.zform().to_string(), "(15*z4*z2 - 10*z3^2 + z6)/t^4");
        let dv4 = semitransvectant(&t, &t, 8).unwrap().unwrap();
        assert_eq!(
            dv4.xform(),
            &x(8, "-8*x1*x7 + x8*t + 28*x2*x6 - 56*x3*x5 + 35*x4^2")
        );
        assert!(semitransvectant(&t, &t, 3).unwrap().is_none());
    }

    #[test]
    fn orders_of_semitransvectants() {
        let t = SemiInvariant::basic(8);
        let dv1 = semitransvectant(&t, &t, 2).unwrap().unwrap();
        assert_eq!(order_of_semitransvectant(&t, &t, 2).unwrap(), 12);
        assert_eq!(order_of_semitransvectant(&t, &t, 8).unwrap(), 0);
        assert_eq!(order_of_semitransvectant(&t, &dv1, 1).unwrap(), 18);
        let tr8 = semitransvectant(&t, &dv1, 1).unwrap().unwrap();
        assert_eq!(tr8.order(), 18);
        assert_eq!(tr8.degree(), 3);
    }

    #[test]
    fn fast_route_matches_direct_route_on_small_cases() {
        let t = SemiInvariant::basic(8);
        for r in [2, 4, 8] {
            let a = semitransvectant(&t, &t, r).unwrap();
            let b = semitransvectant_fast(&t, &t, r).unwrap();
            assert!(same_up_to_sign(a.as_ref(), b.as_ref()), "r = {r}");
        }
        let dv1 = semitransvectant(&t, &t, 2).unwrap().unwrap();
        let a = semitransvectant(&t, &dv1, 0).unwrap().unwrap();
        let b = semitransvectant_fast(&t, &dv1, 0).unwrap().unwrap();
        assert_eq!(a, b);
        assert_eq!(a, t.mul(&dv1).normalized());
    }

    #[test]
    fn gate_switches_to_fast_route_after_agreement() {
        let t = SemiInvariant::basic(6);
        let mut gate = FastPathGate::new(1);
        let a = gate.semitransvectant(&t, &t, 2).unwrap();
        let b = gate.semitransvectant(&t, &t, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(gate.disagreements().count(), 0);
    }
}
