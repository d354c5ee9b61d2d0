//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use covgen::linalg::{fp, rank_mod};
use covgen::poly::rat;
use covgen::{d1, Monomial, Poly, VarSet};
use num_bigint::BigInt;

pub fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, j| acc * (n - j) / (j + 1))
}

/// Partitions of `w` into at most `parts` parts, each at most `size`.
pub fn partitions(w: u32, parts: u32, size: u32) -> u64 {
    if w == 0 {
        return 1;
    }
    if parts == 0 || size == 0 {
        return 0;
    }
    // largest part equal to `size`, or all parts smaller
    let with = if w >= size { partitions(w - size, parts - 1, size) } else { 0 };
    with + partitions(w, parts, size - 1)
}

/// dim C_{d,i} as the total D1-kernel dimension over weights `w <= d*i/2`,
/// by brute-force elimination over all monomials.
pub fn d1_nullity_oracle(d: u32, i: u32) -> u64 {
    let xs = VarSet::x(d);
    let mut by_weight: Vec<Vec<Monomial>> = vec![Vec::new(); (d * i + 1) as usize];
    let mut exps = vec![0u16; xs.len()];
    fn rec(v: usize, left: u32, exps: &mut Vec<u16>, xs: VarSet, out: &mut Vec<Vec<Monomial>>) {
        if v + 1 == exps.len() {
            exps[v] = left as u16;
            let m = Monomial::from_exponents(exps.clone());
            out[m.weight(&xs) as usize].push(m);
            exps[v] = 0;
            return;
        }
        for e in 0..=left {
            exps[v] = e as u16;
            rec(v + 1, left - e, exps, xs, out);
        }
        exps[v] = 0;
    }
    rec(0, i, &mut exps, xs, &mut by_weight);
    let der = d1(d);
    let mut total = 0;
    for w in 0..=(d * i / 2) as usize {
        let monos = &by_weight[w];
        let images: Vec<Poly> = monos
            .iter()
            .map(|m| der.apply(&Poly::monomial(xs, m.clone(), rat(1))).unwrap())
            .collect();
        let targets: Vec<&Monomial> = if w == 0 { Vec::new() } else { by_weight[w - 1].iter().collect() };
        let rows: Vec<Vec<u64>> = images
            .iter()
            .map(|p| {
                targets
                    .iter()
                    .map(|m| fp::from_rational(&p.coeff(m)).unwrap())
                    .collect()
            })
            .collect();
        let rank = if targets.is_empty() { 0 } else { rank_mod(&rows) };
        total += (monos.len() - rank) as u64;
    }
    total
}
