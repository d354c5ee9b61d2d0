//! The derivations `D1`, `D2` of the sl2 action on `Q[t, x1..xd]`, the
//! semi-invariant test, nilpotency orders and the Cayley coordinates.
//!
//! X-coordinates are the ground truth: the action of `D2` on the Cayley
//! coordinates is obtained by applying `D2` to each `z_i` in X-form and
//! rewriting the result over `t, x1, z2..zd`.

use std::fmt;

use crate::error::{usage, Error, Result};
use crate::poly::{rat, Poly, VarKind, VarSet};
use crate::zform::{cayley_poly, x_to_zx, Laurent};

/// A derivation given by the images of the generators. Images may carry a
/// power of `t` in the denominator; the Leibniz rule extends it uniquely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    vars: VarSet,
    images: Vec<Laurent>,
}

impl Derivation {
    pub fn new(vars: VarSet, images: Vec<Laurent>) -> Result<Self> {
        if images.len() != vars.len() {
            return Err(usage(format!(
                "derivation over {} needs {} images, got {}",
                vars.label(),
                vars.len(),
                images.len()
            )));
        }
        if let Some(bad) = images.iter().find(|l| l.vars() != vars) {
            return Err(Error::VarsetMismatch {
                left: vars.label(),
                right: bad.vars().label(),
            });
        }
        Ok(Derivation { vars, images })
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn image(&self, var: usize) -> &Laurent {
        &self.images[var]
    }

    /// Applies the derivation to a polynomial. Fails if an image has a
    /// nontrivial denominator; use [`Derivation::apply_laurent`] then.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        if p.vars() != self.vars {
            return Err(Error::VarsetMismatch {
                left: self.vars.label(),
                right: p.vars().label(),
            });
        }
        let l = self.apply_laurent(&Laurent::from_poly(p.clone()))?;
        match l.as_poly() {
            Some(q) => Ok(q.clone()),
            None => Err(usage("derivation leaves the polynomial ring; use apply_laurent")),
        }
    }

    /// `D(N / t^s) = (sum_v dN/dv * D(v)) / t^s - s * N * D(t) / t^(s+1)`.
    pub fn apply_laurent(&self, f: &Laurent) -> Result<Laurent> {
        if f.vars() != self.vars {
            return Err(Error::VarsetMismatch {
                left: self.vars.label(),
                right: f.vars().label(),
            });
        }
        let mut acc = Laurent::zero(self.vars);
        for (v, img) in self.images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let dv = f.numer.derivative(v);
            if dv.is_zero() {
                continue;
            }
            acc = acc.add(&Laurent::new(dv, f.tpow).mul(img));
        }
        if f.tpow > 0 && !self.images[0].is_zero() {
            let corr = Laurent::new(f.numer.scale(&rat(f.tpow as i64)), f.tpow + 1)
                .mul(&self.images[0]);
            acc = acc.sub(&corr);
        }
        Ok(acc)
    }

    pub fn apply_pow(&self, p: &Poly, k: u32) -> Result<Poly> {
        let mut q = p.clone();
        for _ in 0..k {
            if q.is_zero() {
                break;
            }
            q = self.apply(&q)?;
        }
        Ok(q)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, img) in self.images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "D({}) = {}", self.vars.name(v), img)?;
        }
        Ok(())
    }
}

/// `D1 = t d/dx1 + 2 x1 d/dx2 + ... + d x_{d-1} d/dx_d`.
pub fn d1(d: u32) -> Derivation {
    let vs = VarSet::x(d);
    let mut images = vec![Laurent::zero(vs)];
    for i in 1..=d as usize {
        images.push(Laurent::from_poly(Poly::var(vs, i - 1).scale(&rat(i as i64))));
    }
    Derivation { vars: vs, images }
}

/// `D2 = d x1 d/dt + (d-1) x2 d/dx1 + ... + x_d d/dx_{d-1}`.
pub fn d2(d: u32) -> Derivation {
    let vs = VarSet::x(d);
    let mut images = Vec::with_capacity(vs.len());
    for i in 0..=d as usize {
        if i == d as usize {
            images.push(Laurent::zero(vs));
        } else {
            images.push(Laurent::from_poly(
                Poly::var(vs, i + 1).scale(&rat(d as i64 - i as i64)),
            ));
        }
    }
    Derivation { vars: vs, images }
}

pub fn is_semi_invariant(p: &Poly) -> Result<bool> {
    if p.vars().kind != VarKind::X {
        return Err(usage(format!("expected X(d), got {}", p.vars().label())));
    }
    Ok(d1(p.vars().d).apply(p)?.is_zero())
}

/// The Cayley semi-invariant `z_i` of degree `i` and weight `i`.
pub fn cayley_z(d: u32, i: u32) -> Result<Poly> {
    if !(2..=d).contains(&i) {
        return Err(usage(format!("cayley_z needs 2 <= i <= d, got d={d}, i={i}")));
    }
    Ok(cayley_poly(d, i))
}

/// `max { s : D2^s(p) != 0 }`.
pub fn nilpotency_order(p: &Poly) -> Result<u32> {
    if p.is_zero() {
        return Err(usage("nilpotency order of the zero polynomial"));
    }
    let d = p.vars().d;
    let cap = d * p.total_degree().unwrap_or(0) + 1;
    let der = d2(d);
    let mut q = p.clone();
    let mut s = 0;
    loop {
        let next = der.apply(&q)?;
        if next.is_zero() {
            break;
        }
        s += 1;
        if s > cap {
            return Err(Error::Invariant(format!(
                "D2 not nilpotent within {cap} steps"
            )));
        }
        q = next;
    }
    if let Some(g) = p.grading() {
        if d1(d).apply(p)?.is_zero() {
            let law = (d * g.degree) as i64 - 2 * g.weight as i64;
            if law != s as i64 {
                return Err(Error::Invariant(format!(
                    "order {s} disagrees with d*deg - 2*wt = {law}"
                )));
            }
        }
    }
    Ok(s)
}

/// Order of an isobaric semi-invariant by the grading law `d*deg - 2*wt`.
pub fn order_from_grading(d: u32, degree: u32, weight: u32) -> Option<u32> {
    (d * degree).checked_sub(2 * weight)
}

/// The derivation `D2` expressed over `t, x1, z2..zd` with denominators in
/// `t`, derived from its X-coordinate definition.
pub fn d2_images_in_z(d: u32) -> Result<Derivation> {
    if d < 2 {
        return Err(usage("d2_images_in_z needs d >= 2"));
    }
    let xs = VarSet::x(d);
    let zx = VarSet::zx(d);
    let dd = d2(d);
    let mut images = Vec::with_capacity(zx.len());
    images.push(x_to_zx(&dd.apply(&Poly::var(xs, 0))?));
    images.push(x_to_zx(&dd.apply(&Poly::var(xs, 1))?));
    for i in 2..=d {
        images.push(x_to_zx(&dd.apply(&cayley_poly(d, i))?));
    }
    Derivation::new(zx, images)
}
