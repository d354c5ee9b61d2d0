//! Degree–order tables and the comparison of recomputed values with the
//! values printed for the octic.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{usage, Result};
use crate::linalg::{integer_rows, left_nullspace, primitive_vector};
use crate::poly::{Poly, Rational, VarSet};
use crate::search::{octic_pick, Engine, Mode, SearchConfig, SearchState, OCTIC_PICKS};
use crate::weitzenbock::{cayley_z, d2_images_in_z, nilpotency_order};
use crate::zform::{slice_to_z, Laurent};

/// Generator names by degree and order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeOrderTable {
    pub cells: BTreeMap<u32, BTreeMap<u32, Vec<String>>>,
}

impl DegreeOrderTable {
    pub fn from_state(state: &SearchState) -> Self {
        let mut cells: BTreeMap<u32, BTreeMap<u32, Vec<String>>> = BTreeMap::new();
        for i in 1..=state.max_degree() {
            cells.entry(i).or_default();
        }
        for g in &state.generators {
            cells
                .entry(g.degree)
                .or_default()
                .entry(g.order)
                .or_default()
                .push(g.name.clone());
        }
        DegreeOrderTable { cells }
    }

    /// The distribution printed in the appendix for the octic.
    pub fn printed_octic() -> Self {
        let mut cells: BTreeMap<u32, BTreeMap<u32, Vec<String>>> = BTreeMap::new();
        for &(degree, order, names) in PRINTED_APPENDIX {
            cells
                .entry(degree)
                .or_default()
                .insert(order, names.iter().map(|s| s.to_string()).collect());
        }
        DegreeOrderTable { cells }
    }

    pub fn cell(&self, degree: u32, order: u32) -> &[String] {
        self.cells
            .get(&degree)
            .and_then(|r| r.get(&order))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn row_count(&self, degree: u32) -> usize {
        self.cells.get(&degree).map_or(0, |r| r.values().map(Vec::len).sum())
    }

    pub fn total(&self) -> usize {
        self.cells.keys().map(|&i| self.row_count(i)).sum()
    }

    /// Sorted `(degree, order)` pairs with multiplicity.
    pub fn multiset(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (&i, row) in &self.cells {
            for (&m, names) in row {
                out.extend(std::iter::repeat_n((i, m), names.len()));
            }
        }
        out
    }

    pub fn orders(&self) -> Vec<u32> {
        let mut o: Vec<u32> = self.cells.values().flat_map(|r| r.keys().copied()).collect();
        o.sort_unstable();
        o.dedup();
        o
    }
}

impl fmt::Display for DegreeOrderTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders = self.orders();
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut head = vec!["degree".to_string()];
        head.extend(orders.iter().map(|o| o.to_string()));
        head.push("total".into());
        grid.push(head);
        for &i in self.cells.keys() {
            let mut line = vec![i.to_string()];
            line.extend(orders.iter().map(|&o| self.cell(i, o).join(", ")));
            line.push(self.row_count(i).to_string());
            grid.push(line);
        }
        let cols = grid[0].len();
        let widths: Vec<usize> = (0..cols)
            .map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        for (k, line) in grid.iter().enumerate() {
            let cells: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:<w$}"))
                .collect();
            writeln!(f, "{}", cells.join(" | ").trim_end())?;
            if k == 0 {
                let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
                writeln!(f, "{}", rule.join("-+-"))?;
            }
        }
        write!(f, "generators: {}", self.total())
    }
}

pub const PRINTED_APPENDIX: &[(u32, u32, &[&str])] = &[
    (1, 8, &["t"]),
    (2, 0, &["dv4"]),
    (2, 4, &["dv3"]),
    (2, 8, &["dv2"]),
    (2, 12, &["dv1"]),
    (3, 0, &["tr7"]),
    (3, 4, &["tr6"]),
    (3, 6, &["tr4"]),
    (3, 8, &["tr5"]),
    (3, 10, &["tr3"]),
    (3, 12, &["tr2"]),
    (3, 14, &["tr1"]),
    (3, 18, &["tr8"]),
    (4, 0, &["ch3"]),
    (4, 4, &["ch2", "ch4"]),
    (4, 6, &["ch10"]),
    (4, 8, &["ch8"]),
    (4, 10, &["ch1", "ch7"]),
    (4, 12, &["ch6"]),
    (4, 14, &["ch5"]),
    (4, 18, &["ch9"]),
    (5, 0, &["pt3"]),
    (5, 2, &["pt2"]),
    (5, 4, &["pt1", "pt7"]),
    (5, 6, &["pt10", "pt11"]),
    (5, 8, &["pt6"]),
    (5, 10, &["pt5", "pt8", "pt9"]),
    (5, 14, &["pt4"]),
    (6, 0, &["sh3"]),
    (6, 2, &["sh2"]),
    (6, 4, &["sh1", "sh8"]),
    (6, 6, &["sh5", "sh6", "sh7"]),
    (6, 8, &["sh4"]),
    (6, 10, &["sh9"]),
    (7, 0, &["si4"]),
    (7, 2, &["si3", "si8"]),
    (7, 4, &["si1", "si6"]),
    (7, 6, &["si2", "si5", "si7"]),
    (8, 0, &["vi2"]),
    (8, 2, &["vi1", "vi5"]),
    (8, 4, &["vi4", "vi7"]),
    (8, 6, &["vi3", "vi6"]),
    (9, 0, &["de4"]),
    (9, 2, &["de2", "de3", "de5"]),
    (9, 4, &["de1"]),
    (10, 0, &["des1"]),
    (10, 2, &["des2", "des3"]),
    (11, 2, &["odn1", "odn2"]),
    (12, 2, &["dvan"]),
];

/// Printed per-degree values `(i, dim C, sigma, dim S, delta)`; `None` where
/// nothing is printed.
pub const PRINTED_ROWS: &[(u32, u64, u64, Option<u64>, u64)] = &[
    (2, 5, 1, None, 4),
    (3, 13, 5, Some(0), 8),
    (4, 33, 23, Some(0), 10),
    (5, 73, 65, Some(3), 11),
    (6, 151, 172, Some(30), 9),
    (7, 289, 385, Some(104), 8),
    (8, 289, 385, Some(104), 8),
    (9, 910, 1782, Some(877), 5),
    (10, 1514, 3673, Some(2162), 3),
    (11, 2430, 7355, Some(4927), 2),
    (12, 3788, 14520, Some(10733), 1),
];

/// The Cayley polynomials as printed, in `X(8)` syntax.
pub const PRINTED_CAYLEY: &[(u32, &str)] = &[
    (2, "x2*t - x1^2"),
    (3, "x3*t^2 + 2*x1^3 - 3*x1*x2*t"),
    (4, "x4*t^3 - 3*x1^4 + 6*x1^2*x2*t - 4*x1*x3*t^2"),
    (5, "x5*t^4 + 4*x1^5 - 10*x1^3*x2*t + 10*x1^2*x3*t^2 - 5*x1*x4*t^3"),
    (6, "x6*t^5 - 5*x1^6 + 15*x1^4*x2*t - 20*x1^3*x3*t^2 + 15*x1^2*x4*t^3 - 6*x1*x5*t^4"),
    (7, "x7*t^6 + 6*x1^7 - 21*x1^5*x2*t + 35*x1^4*x3*t^2 - 35*x1^3*x4*t^3 + 21*x1^2*x5*t^4 - 7*x1*x6*t^5"),
    (8, "28*x1^6*x2*t - 56*x1^5*x3*t^2 - 56*x1^3*x5*t^4 + 28*x1^2*x6*t^5 - 8*x1*x7*t^6 - 7*x1^8 + 70*x1^4*x4*t^3 + x8*t^7"),
];

/// The printed images of `D` on `t, z2..z8`, numerators over `t, x1, z2..z8`
/// with the power of `t` in the denominator.
pub const PRINTED_D: &[(&str, &str, u32)] = &[
    ("t", "7*x1", 0),
    ("z2", "10*x1*z2 + 5*z3", 1),
    ("z3", "15*x1*z3 - 18*z2^2 + 4*z4", 1),
    ("z4", "20*x1*z4 - 24*z2*z3 + 3*z5", 1),
    ("z5", "2*z6 + 25*x1*z5 - 30*z2*z4", 1),
    ("z6", "z7 + 30*x1*z6 - 36*z2*z5", 1),
    ("z7", "35*x1*z7 - 42*z2*z6", 1),
    ("z8", "48*x1*z8 - 56*z2*z7", 1),
];

/// The three printed degree-5 relations: coefficient and factor names.
pub const PRINTED_SYZYGIES: &[&[(i64, &[&str])]] = &[
    &[(-12, &["ch1", "t"]), (55, &["tr1", "dv3"]), (-55, &["tr3", "dv2"]), (1, &["ch7", "t"])],
    &[(5, &["ch5", "t"]), (383, &["tr4", "t", "t"]), (-176, &["tr8", "dv3"]), (176, &["tr3", "dv1"])],
    &[(-1, &["ch9", "t"]), (-126, &["tr8", "dv2"]), (126, &["tr1", "dv1"]), (1, &["tr3", "t", "t"])],
];

pub const PRINTED_DV4: &str = "-8*x1*x7 + x8*t + 28*x2*x6 - 56*x3*x5 + 35*x4^2";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Match,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrataEntry {
    pub location: String,
    pub printed: String,
    pub recomputed: String,
    pub status: Status,
}

#[derive(Clone, Debug, Default)]
pub struct ErrataReport {
    pub entries: Vec<ErrataEntry>,
}

impl ErrataReport {
    fn push(&mut self, location: impl Into<String>, printed: impl ToString, recomputed: impl ToString, ok: bool) {
        self.entries.push(ErrataEntry {
            location: location.into(),
            printed: printed.to_string(),
            recomputed: recomputed.to_string(),
            status: if ok { Status::Match } else { Status::Mismatch },
        });
    }

    fn compare<T: PartialEq + ToString>(&mut self, location: impl Into<String>, printed: T, recomputed: T) {
        let ok = printed == recomputed;
        self.push(location, printed, recomputed, ok);
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &ErrataEntry> {
        self.entries.iter().filter(|e| e.status == Status::Mismatch)
    }

    pub fn find(&self, location: &str) -> Option<&ErrataEntry> {
        self.entries.iter().find(|e| e.location == location)
    }

    /// Audits a completed octic run in paper mode.
    pub fn build(state: &SearchState) -> Result<Self> {
        if state.d != 8 {
            return Err(usage("the errata report needs a run for d = 8"));
        }
        let mut rep = ErrataReport::default();
        rep.cayley()?;
        rep.operator()?;
        rep.slice_index()?;
        rep.order_formula()?;
        rep.rows(state);
        rep.generators(state);
        rep.appendix(state);
        rep.generator_list();
        rep.degree_five(state)?;
        Ok(rep)
    }

    fn cayley(&mut self) -> Result<()> {
        for &(i, printed) in PRINTED_CAYLEY {
            let p = Poly::parse(VarSet::x(8), printed)?;
            let z = cayley_z(8, i)?;
            self.push(format!("Cayley polynomial z{i}"), &p, &z, p == z);
        }
        Ok(())
    }

    fn operator(&mut self) -> Result<()> {
        let d8 = d2_images_in_z(8)?;
        let d7 = d2_images_in_z(7)?;
        let zx8 = VarSet::zx(8);
        let zx7 = VarSet::zx(7);
        for &(var, numer, tpow) in PRINTED_D {
            let printed = Laurent::new(Poly::parse(zx8, numer)?, tpow);
            let v = zx8.index_of(var).expect("known variable");
            let actual = d8.image(v);
            let mut recomputed = actual.to_string();
            if printed != *actual {
                if let (Some(v7), Ok(p7)) = (zx7.index_of(var), Poly::parse(zx7, numer)) {
                    if Laurent::new(p7, tpow) == *d7.image(v7) {
                        recomputed.push_str(" (the printed value is the d = 7 image)");
                    }
                }
            }
            self.push(format!("D({var}) for d = 8"), &printed, recomputed, printed == *actual);
        }
        Ok(())
    }

    fn slice_index(&mut self) -> Result<()> {
        let xs = VarSet::x(8);
        let ok = (2..=8u32).all(|i| {
            let s = slice_to_z(&Poly::var(xs, i as usize));
            s.tpow() == i - 1 && s.numer() == &Poly::var(VarSet::z(8), i as usize - 1)
        });
        let recomputed = if ok { "sigma(x_i) = z_i / t^(i-1)" } else { "slice map disagrees with z_i / t^(i-1)" };
        self.push("slice map sigma(x_i)", "sigma(x_i) = z_(i+1) / t^i", recomputed, false);
        Ok(())
    }

    fn order_formula(&mut self) -> Result<()> {
        // printed: ord = d (i2 + ... + id) - 2 (2 i2 + ... + d id)
        let printed = 8 - 2 * 2;
        let actual = nilpotency_order(&cayley_z(8, 2)?)?;
        self.push(
            "order of z2^i2 ... zd^id, at z2",
            format!("d*sum(i_k) - 2*sum(k*i_k) = {printed}"),
            format!("(d-2)*sum(k*i_k) = {actual}"),
            printed == actual,
        );
        Ok(())
    }

    fn rows(&mut self, state: &SearchState) {
        let row = |i: u32| state.rows.get(i as usize - 1).map(|r| &r.dims);
        for &(i, dim_c, sigma, dim_s, delta) in PRINTED_ROWS {
            let Some(r) = row(i) else { continue };
            self.compare(format!("degree {i}: dim C"), dim_c, r.dim_c);
            self.compare(format!("degree {i}: sigma"), sigma, r.sigma);
            if let Some(s) = dim_s {
                self.compare(format!("degree {i}: dim S"), s, r.dim_s);
            }
            self.compare(format!("degree {i}: delta"), delta, r.delta);
        }
        if let (Some(r7), Some(r8)) = (row(7), row(8)) {
            let same = (r7.dim_c, r7.sigma, r7.dim_s) == (r8.dim_c, r8.sigma, r8.dim_s);
            self.push(
                "degree 8 paragraph",
                "repeats the degree-7 values (289, 385, 104)",
                format!("({}, {}, {})", r8.dim_c, r8.sigma, r8.dim_s),
                same,
            );
            let listed = OCTIC_PICKS.iter().filter(|p| p.name.starts_with("vi")).count() as u64;
            self.push(
                "degree 8: delta vs listed generators",
                format!("delta = 8, {listed} listed"),
                format!("delta = {}", r8.delta),
                r8.delta == 8 && listed == 8,
            );
        }
        if row(6).is_some() {
            self.push("degree 6: Poincare coefficient label", "sigma_5", "sigma_6", false);
        }
        if row(9).is_some() {
            self.push(
                "degree 9: labels",
                "dim C_{8,8}, sigma_8, dim S_8, delta_8",
                "dim C_{8,9}, sigma_9, dim S_9, delta_9",
                false,
            );
        }
        let total: u64 = state.deltas().iter().sum();
        if state.max_degree() >= 12 {
            self.compare("total number of generators", 69, total);
        }
    }

    fn generators(&mut self, state: &SearchState) {
        for pick in OCTIC_PICKS {
            let Some(g) = state.generator(pick.name) else {
                if (pick_degree_of(pick.name)) <= state.max_degree() {
                    self.push(format!("generator {}", pick.name), pick.order, "missing", false);
                }
                continue;
            };
            self.compare(format!("order of {}", pick.name), pick.order, g.order);
            let printed = pick.printed.map(str::to_string).unwrap_or_else(|| {
                crate::search::Recipe::with_form(pick.factors, pick.r).to_string()
            });
            let used = g.recipe.to_string();
            if printed != used {
                self.push(format!("recipe of {}", pick.name), printed, used, false);
            }
        }
        if state.max_degree() >= 5 {
            // [t, ch_i]^k for k = 1..min(8, ord ch_i), i != 3, and [t, dv3^2]^k for k = 5..8
            let mut n = 4;
            for k in 1..=10 {
                if k == 3 {
                    continue;
                }
                if let Some(g) = state.generator(&format!("ch{k}")) {
                    n += g.order.min(8);
                }
            }
            self.compare("degree 5: number of candidate semitransvectants", 65, n);
        }
    }

    fn appendix(&mut self, state: &SearchState) {
        let printed = DegreeOrderTable::printed_octic();
        let ours = DegreeOrderTable::from_state(state);
        for i in 1..=state.max_degree().min(12) {
            let p: Vec<u32> = multiset_row(&printed, i);
            let o: Vec<u32> = multiset_row(&ours, i);
            self.push(format!("appendix row {i}: orders"), fmt_orders(&p), fmt_orders(&o), p == o);
        }
    }

    fn generator_list(&mut self) {
        self.push("generator list, degree 6", "sh7 twice, no sh8", "sh1..sh9", false);
        self.push("generator list, degree 7", "si1, si2, sh3..sh7, si8", "si1..si8", false);
        self.push("generator list, degree 10", "des2 twice, no des3", "des1..des3", false);
    }

    fn degree_five(&mut self, state: &SearchState) -> Result<()> {
        if state.max_degree() < 5 || state.mode != Mode::Paper {
            return Ok(());
        }
        let engine = Engine::resume(SearchConfig::new(8, state.max_degree(), state.mode), state)?;
        if let Ok(dv4) = engine.generator_xform("dv4") {
            let printed = Poly::parse(VarSet::x(8), PRINTED_DV4)?;
            self.push("X-form of dv4", &printed, &dv4, printed == dv4);
        }
        let products = engine.enumerate_products(5)?;
        self.compare("degree 5: number of products", 65, products.len());
        for (k, rel) in PRINTED_SYZYGIES.iter().enumerate() {
            let mut printed = String::new();
            for (k, (c, f)) in rel.iter().enumerate() {
                let sign = if *c < 0 { "-" } else if k > 0 { "+" } else { "" };
                let sep = if k > 0 { " " } else { "" };
                printed.push_str(&format!("{sep}{sign}{}{}*{}", if k > 0 { " " } else { "" }, c.abs(), f.join("*")));
            }
            let mut polys = Vec::new();
            for (_, factors) in rel.iter() {
                let mut p = Poly::one(VarSet::x(8));
                for f in *factors {
                    p = &p * &engine.generator_xform(f)?;
                }
                polys.push(p);
            }
            let (recomputed, ok) = match support_relation(&polys) {
                Some(v) => (
                    format!(
                        "relation with coefficients ({}) after normalization",
                        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
                    ),
                    true,
                ),
                None => ("no relation with this support".to_string(), false),
            };
            self.push(format!("degree-5 syzygy {}", k + 1), printed, recomputed, ok);
        }
        Ok(())
    }
}

fn pick_degree_of(name: &str) -> u32 {
    octic_pick(name).map_or(0, crate::search::recipe::pick_degree)
}

fn multiset_row(t: &DegreeOrderTable, i: u32) -> Vec<u32> {
    t.multiset().into_iter().filter(|&(d, _)| d == i).map(|(_, m)| m).collect()
}

fn fmt_orders(v: &[u32]) -> String {
    if v.is_empty() {
        return "none".into();
    }
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// A linear relation among `polys` involving every one of them, if any.
pub fn support_relation(polys: &[Poly]) -> Option<Vec<num_bigint::BigInt>> {
    let mut columns = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let n = columns.len();
            columns.entry(m.clone()).or_insert(n);
        }
    }
    let rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| {
            let mut row = vec![Rational::zero(); columns.len()];
            for (m, c) in p.terms() {
                row[columns[m]] = c.clone();
            }
            row
        })
        .collect();
    let (_, null) = left_nullspace(&integer_rows(&rows));
    if null.len() != 1 {
        // a single relation is needed for the support to be meaningful
        return null
            .into_iter()
            .map(|v| primitive_vector(&v))
            .find(|v| v.iter().all(|c| !c.is_zero()));
    }
    let v = primitive_vector(&null[0]);
    v.iter().all(|c| !c.is_zero()).then_some(v)
}

impl fmt::Display for ErrataReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let tag = match e.status {
                Status::Match => "match   ",
                Status::Mismatch => "MISMATCH",
            };
            writeln!(f, "[{tag}] {}", e.location)?;
            writeln!(f, "           printed:    {}", e.printed)?;
            writeln!(f, "           recomputed: {}", e.recomputed)?;
        }
        let bad = self.mismatches().count();
        write!(f, "{} entries, {} mismatches", self.entries.len(), bad)
    }
}
