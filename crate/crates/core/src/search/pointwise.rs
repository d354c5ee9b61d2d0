//! Covariants evaluated at random points of `F_p^(d+1)`.
//!
//! A covariant is represented at a point by the values of its coefficient
//! list. Transvectants and products act on these lists exactly as on the
//! symbolic coefficients, so a recipe can be evaluated without expanding any
//! polynomial.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covariant::{binom, falling};
use crate::linalg::fp;
use crate::poly::{Poly, VarSet};
use crate::zform::{cayley_poly, ZForm};

/// Deterministic, prefix-stable sequence of evaluation points. Each point
/// stores the coordinates `t, x1..xd` and the Cayley values `z2..zd`.
#[derive(Clone, Debug)]
pub struct Points {
    d: u32,
    rng: ChaCha8Rng,
    xs: Vec<Vec<u64>>,
    zs: Vec<Vec<u64>>,
    forms: Vec<Vec<u64>>,
    binoms: Vec<u64>,
    cayley: Vec<Poly>,
}

impl Points {
    pub fn new(d: u32, seed: u64) -> Self {
        Points {
            d,
            rng: ChaCha8Rng::seed_from_u64(seed),
            xs: Vec::new(),
            zs: Vec::new(),
            forms: Vec::new(),
            binoms: (0..=d).map(|j| fp::from_bigint(&binom(d, j))).collect(),
            cayley: (2..=d).map(|i| cayley_poly(d, i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Grows the pool to at least `n` points; returns the first new index.
    pub fn ensure(&mut self, n: usize) -> usize {
        let start = self.xs.len();
        while self.xs.len() < n {
            let x: Vec<u64> = (0..=self.d).map(|_| self.rng.gen_range(1..fp::P)).collect();
            let z: Vec<u64> = self
                .cayley
                .iter()
                .map(|c| eval_poly(c, &x).expect("Cayley polynomials are integral"))
                .collect();
            let form = x.iter().zip(&self.binoms).map(|(&a, &b)| fp::mul(a, b)).collect();
            self.xs.push(x);
            self.zs.push(z);
            self.forms.push(form);
        }
        start
    }

    pub fn x(&self, k: usize) -> &[u64] {
        &self.xs[k]
    }

    /// Value of the basic form's coefficient list, `C(d,j) x_j`.
    pub fn form(&self, k: usize) -> &[u64] {
        &self.forms[k]
    }

    /// Value of a Z-form; `None` only if `p` divides a coefficient
    /// denominator.
    pub fn eval_zform(&self, z: &ZForm, k: usize) -> Option<u64> {
        let x = &self.xs[k];
        let mut vals = Vec::with_capacity(self.d as usize);
        vals.push(x[0]);
        vals.extend_from_slice(&self.zs[k]);
        let num = eval_poly(z.numer(), &vals)?;
        Some(fp::mul(num, fp::inv(fp::pow(x[0], z.tpow() as u64))))
    }
}

/// Evaluates a polynomial at `vals` (one value per variable).
pub fn eval_poly(p: &Poly, vals: &[u64]) -> Option<u64> {
    debug_assert_eq!(vals.len(), p.vars().len());
    let mut acc = 0;
    for (m, c) in p.terms() {
        let mut v = fp::from_rational(c)?;
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                v = fp::mul(v, fp::pow(vals[i], e as u64));
            }
        }
        acc = fp::add(acc, v);
    }
    Some(acc)
}

/// Coefficient list of a product of covariants.
pub fn product(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fp::add(out[i + j], fp::mul(x, y));
        }
    }
    out
}

/// The first `len` coefficients of a product of covariants.
pub fn product_prefix(a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
    let n = (a.len() + b.len() - 1).min(len);
    let mut out = vec![0; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] = fp::add(out[i + j], fp::mul(x, y));
        }
    }
    out
}

/// Precomputed integer weights of the transvectant formula for fixed orders
/// `m`, `k` and index `r`.
#[derive(Clone, Debug)]
pub struct TransvectantKernel {
    m: u32,
    k: u32,
    r: u32,
    /// `(-1)^i C(r,i)` for `i = 0..=r`
    outer: Vec<u64>,
    /// `[j]_i [m-j]_(r-i)` indexed by `(i, e)` with `j = e + i`
    left: Vec<Vec<u64>>,
    /// `[j]_(r-i) [k-j]_i` indexed by `(i, e)` with `j = e + r - i`
    right: Vec<Vec<u64>>,
}

impl TransvectantKernel {
    pub fn new(m: u32, k: u32, r: u32) -> Self {
        assert!(r <= m.min(k), "transvectant index out of range");
        let outer = (0..=r)
            .map(|i| {
                let c = fp::from_bigint(&binom(r, i));
                if i % 2 == 0 {
                    c
                } else {
                    fp::neg(c)
                }
            })
            .collect();
        let left = (0..=r)
            .map(|i| {
                (0..=(m - r))
                    .map(|e| {
                        let j = e + i;
                        fp::from_bigint(&(falling(j, i) * falling(m - j, r - i)))
                    })
                    .collect()
            })
            .collect();
        let right = (0..=r)
            .map(|i| {
                (0..=(k - r))
                    .map(|e| {
                        let j = e + r - i;
                        fp::from_bigint(&(falling(j, r - i) * falling(k - j, i)))
                    })
                    .collect()
            })
            .collect();
        TransvectantKernel {
            m,
            k,
            r,
            outer,
            left,
            right,
        }
    }

    /// Full coefficient list of `(F, G)^r`.
    pub fn apply(&self, f: &[u64], g: &[u64]) -> Vec<u64> {
        debug_assert_eq!(f.len() as u32, self.m + 1);
        debug_assert_eq!(g.len() as u32, self.k + 1);
        let n = (self.m + self.k - 2 * self.r) as usize;
        let mut out = vec![0; n + 1];
        for i in 0..=self.r as usize {
            let df: Vec<u64> = self.left[i]
                .iter()
                .enumerate()
                .map(|(e, &c)| fp::mul(c, f[e + i]))
                .collect();
            let dg: Vec<u64> = self.right[i]
                .iter()
                .enumerate()
                .map(|(e, &c)| fp::mul(c, g[e + self.r as usize - i]))
                .collect();
            let o = self.outer[i];
            for (e1, &a) in df.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = fp::mul(a, o);
                for (e2, &b) in dg.iter().enumerate() {
                    out[e1 + e2] = fp::add(out[e1 + e2], fp::mul(a, b));
                }
            }
        }
        out
    }

    /// Leading coefficient only.
    pub fn leading(&self, f: &[u64], g: &[u64]) -> u64 {
        let mut acc = 0;
        for i in 0..=self.r as usize {
            let a = fp::mul(self.left[i][0], f[i]);
            let b = fp::mul(self.right[i][0], g[self.r as usize - i]);
            acc = fp::add(acc, fp::mul(self.outer[i], fp::mul(a, b)));
        }
        acc
    }
}

/// Evaluates an X-form at a point's coordinates `t, x1..xd`.
pub fn eval_x(p: &Poly, x: &[u64]) -> Option<u64> {
    debug_assert_eq!(p.vars(), VarSet::x(p.vars().d));
    eval_poly(p, x)
}
