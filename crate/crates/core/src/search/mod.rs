//! Degree-by-degree construction of a minimal generating system.
//!
//! The degree-`i` semi-invariants split into weight blocks whose dimensions
//! come from the Gaussian binomial. Products of known generators and candidate
//! semitransvectants are compared block by block through their values at
//! random points modulo a large prime: a modular rank never exceeds the true
//! rank, so reaching the block dimension proves that the block is spanned.
//! The number of syzygies is therefore an upper bound that is exact with
//! overwhelming probability; up to `exact_max_degree` it is recomputed by
//! fraction-free elimination on the X-form expansions and any disagreement
//! aborts the run.
//!
//! Accepted generators are computed exactly in Cayley coordinates and checked
//! against their pointwise values.

mod checkpoint;
pub mod pointwise;
pub mod recipe;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::OnceLock;

use log::{debug, info, warn};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covariant::{semitransvectant, semitransvectant_zform, SemiInvariant};
use crate::enumerative::{block_dims, delta, dim_covariants, poincare_sigma, DimensionRow};
use crate::error::{pipeline, usage, Error, Result};
use crate::linalg::{fp, integer_rows, left_nullspace, primitive_vector, ModEchelon};
use crate::poly::{Monomial, Poly, Rational};
use crate::zform::{z_to_x, ZForm, ZFormJson};

pub use checkpoint::{load_state, save_state, SCHEMA};
use pointwise::{Points, TransvectantKernel};
pub use recipe::{octic_pick, octic_picks, PaperPick, Recipe, OCTIC_PICKS};

pub const DEFAULT_SEED: u64 = 0x5eed_c0de_2024;
const CHUNK: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// pinned octic recipes first, then the generic pool
    Paper,
    Generic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Paper => "paper",
            Mode::Generic => "generic",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Mode::Paper),
            "generic" => Ok(Mode::Generic),
            _ => Err(usage(format!("unknown mode {s:?} (expected paper or generic)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub d: u32,
    pub max_degree: u32,
    pub mode: Mode,
    pub threads: Option<usize>,
    /// degrees with exact syzygy bases
    pub exact_max_degree: u32,
    /// degrees where accepted generators are also computed through X-forms
    pub cross_check_degree: u32,
    /// also evaluate the two degrees after `max_degree`
    pub verify_completeness: bool,
    pub seed: u64,
    /// extra evaluation points per block beyond its dimension
    pub margin: usize,
    /// saved after every degree
    pub checkpoint: Option<PathBuf>,
}

impl SearchConfig {
    pub fn new(d: u32, max_degree: u32, mode: Mode) -> Self {
        SearchConfig {
            d,
            max_degree,
            mode,
            threads: None,
            exact_max_degree: 7,
            cross_check_degree: 4,
            verify_completeness: false,
            seed: DEFAULT_SEED,
            margin: 8,
            checkpoint: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub name: String,
    pub degree: u32,
    pub order: u32,
    pub recipe: Recipe,
    pub zform: ZFormJson,
}

/// How the syzygy count of a row was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    /// fraction-free elimination over the rationals
    Exact,
    /// rank modulo a large prime
    Modular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRow {
    #[serde(flatten)]
    pub dims: DimensionRow,
    pub syzygies: Certainty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchState {
    pub schema: String,
    pub d: u32,
    pub mode: Mode,
    pub seed: u64,
    pub rows: Vec<SearchRow>,
    pub generators: Vec<GeneratorRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub completeness: Vec<SearchRow>,
}

impl SearchState {
    pub fn max_degree(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn deltas(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.dims.delta).collect()
    }

    pub fn generators_of_degree(&self, i: u32) -> impl Iterator<Item = &GeneratorRecord> {
        self.generators.iter().filter(move |g| g.degree == i)
    }

    pub fn generator(&self, name: &str) -> Option<&GeneratorRecord> {
        self.generators.iter().find(|g| g.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let state: SearchState = serde_json::from_str(s)
            .map_err(|e| Error::Checkpoint(format!("not a {SCHEMA} document: {e}")))?;
        state.validate()?;
        Ok(state)
    }

    /// Structural checks: schema tag, contiguous rows, generator counts
    /// matching the rows, well-formed Z-forms with the recorded grading.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Checkpoint(m));
        if self.schema != SCHEMA {
            return bad(format!("schema {:?}, expected {SCHEMA:?}", self.schema));
        }
        if self.d == 0 {
            return bad("d must be at least 1".into());
        }
        for (k, row) in self.rows.iter().enumerate() {
            let i = k as u32 + 1;
            if row.dims.degree != i {
                return bad(format!("row {k} has degree {}, expected {i}", row.dims.degree));
            }
            let n = self.generators_of_degree(i).count() as u64;
            if n != row.dims.delta {
                return bad(format!("degree {i}: {n} generators but delta = {}", row.dims.delta));
            }
        }
        let mut seen = HashMap::new();
        for g in &self.generators {
            if g.degree == 0 || g.degree > self.max_degree() {
                return bad(format!("generator {} has degree {} outside the rows", g.name, g.degree));
            }
            if seen.insert(g.name.as_str(), ()).is_some() {
                return bad(format!("duplicate generator name {}", g.name));
            }
            let z = ZForm::from_json(self.d, &g.zform)
                .map_err(|e| Error::Checkpoint(format!("generator {}: {e}", g.name)))?;
            let (deg, wt) = zform_grading(&z)
                .ok_or_else(|| Error::Checkpoint(format!("generator {} is not graded", g.name)))?;
            if deg != g.degree || self.d * deg != g.order + 2 * wt {
                return bad(format!(
                    "generator {}: recorded degree/order {}/{} disagree with its Z-form",
                    g.name, g.degree, g.order
                ));
            }
        }
        if self.generators.windows(2).any(|w| w[0].degree > w[1].degree) {
            return bad("generators are not grouped by degree".into());
        }
        Ok(())
    }
}

/// `(degree, weight)` of a nonzero graded Z-form; `z_i` has degree and
/// weight `i`, `t` has degree 1 and weight 0.
pub fn zform_grading(z: &ZForm) -> Option<(u32, u32)> {
    let vars = z.numer().vars();
    let mut out = None;
    for (m, _) in z.numer().terms() {
        let weight = m.weight(&vars);
        let degree = (weight + u32::from(m.exp(0))).checked_sub(z.tpow())?;
        match out {
            None => out = Some((degree, weight)),
            Some(g) if g != (degree, weight) => return None,
            _ => {}
        }
    }
    out
}

/// A monomial in the generators: sorted generator indices with repetition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductMonomial {
    pub factors: Vec<usize>,
    pub degree: u32,
    pub order: u32,
    pub weight: u32,
}

impl ProductMonomial {
    /// Exponent vector over the first `n` generators.
    pub fn exponents(&self, n: usize) -> Vec<u32> {
        let mut e = vec![0; n];
        for &f in &self.factors {
            e[f] += 1;
        }
        e
    }

    pub fn names<'a>(&self, names: &[&'a str]) -> Vec<&'a str> {
        self.factors.iter().map(|&f| names[f]).collect()
    }

    pub fn display(&self, names: &[&str]) -> String {
        Recipe::product_of(&self.names(names)).to_string()
    }
}

/// Exact syzygies of degree `i`: coefficient vectors over `products`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyBasis {
    pub degree: u32,
    pub products: Vec<ProductMonomial>,
    pub basis: Vec<Vec<Rational>>,
    /// rank of the products in each weight block
    pub block_ranks: BTreeMap<u32, usize>,
}

impl SyzygyBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.products.len() - self.basis.len()
    }
}

/// `[t, product]^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub product: ProductMonomial,
    pub r: u32,
    pub order: u32,
    pub weight: u32,
}

struct Gen {
    record: GeneratorRecord,
    zform: ZForm,
    weight: u32,
    /// covariant coefficient values at each point
    values: Vec<Vec<u64>>,
    xform: OnceLock<Poly>,
}

struct Block {
    dim: usize,
    width: usize,
    products: Vec<usize>,
    echelon: ModEchelon,
}

impl Block {
    fn deficit(&self) -> usize {
        self.dim - self.echelon.rank()
    }
}

struct Analysis {
    blocks: BTreeMap<u32, Block>,
    row: DimensionRow,
}

struct Accepted {
    cand: Candidate,
    pin: Option<&'static PaperPick>,
    values: Vec<u64>,
}

pub struct Engine {
    cfg: SearchConfig,
    points: Points,
    gens: Vec<Gen>,
    by_name: HashMap<String, usize>,
    rows: Vec<SearchRow>,
    completeness: Vec<SearchRow>,
    syzygies: BTreeMap<u32, SyzygyBasis>,
}

impl Engine {
    pub fn new(cfg: SearchConfig) -> Result<Self> {
        if cfg.d == 0 {
            return Err(usage("d must be at least 1"));
        }
        Ok(Engine {
            points: Points::new(cfg.d, cfg.seed),
            cfg,
            gens: Vec::new(),
            by_name: HashMap::new(),
            rows: Vec::new(),
            completeness: Vec::new(),
            syzygies: BTreeMap::new(),
        })
    }

    /// Rebuilds an engine from a saved state. Every generator's recipe is
    /// re-evaluated and checked against its stored Z-form.
    pub fn resume(mut cfg: SearchConfig, state: &SearchState) -> Result<Self> {
        state.validate()?;
        if state.d != cfg.d {
            return Err(Error::Checkpoint(format!(
                "checkpoint is for d = {}, requested d = {}",
                state.d, cfg.d
            )));
        }
        if state.mode != cfg.mode {
            return Err(Error::Checkpoint(format!(
                "checkpoint was made in {} mode, requested {}",
                state.mode, cfg.mode
            )));
        }
        cfg.seed = state.seed;
        let mut e = Engine::new(cfg)?;
        for g in &state.generators {
            for r in g.recipe.references() {
                if !e.by_name.contains_key(r) {
                    return Err(Error::Checkpoint(format!(
                        "recipe of {} refers to unknown generator {r}",
                        g.name
                    )));
                }
            }
            let zform = ZForm::from_json(state.d, &g.zform)?;
            let (_, weight) = zform_grading(&zform).expect("validated");
            e.by_name.insert(g.name.clone(), e.gens.len());
            e.gens.push(Gen {
                record: g.clone(),
                zform,
                weight,
                values: Vec::new(),
                xform: OnceLock::new(),
            });
        }
        e.rows = state.rows.clone();
        // rows past the old maximum become stale once the search is extended
        if e.cfg.max_degree <= state.max_degree() {
            e.completeness = state.completeness.clone();
        }
        e.ensure_points(3)?;
        for j in 0..e.gens.len() {
            e.check_against_values(j, &e.gens[j].zform, 3)
                .map_err(|m| Error::Checkpoint(format!("generator {}: {m}", e.gens[j].record.name)))?;
        }
        Ok(e)
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    pub fn next_degree(&self) -> u32 {
        self.rows.len() as u32 + 1
    }

    pub fn rows(&self) -> &[SearchRow] {
        &self.rows
    }

    pub fn records(&self) -> impl Iterator<Item = &GeneratorRecord> {
        self.gens.iter().map(|g| &g.record)
    }

    pub fn names(&self) -> Vec<&str> {
        self.gens.iter().map(|g| g.record.name.as_str()).collect()
    }

    pub fn state(&self) -> SearchState {
        SearchState {
            schema: SCHEMA.into(),
            d: self.cfg.d,
            mode: self.cfg.mode,
            seed: self.cfg.seed,
            rows: self.rows.clone(),
            generators: self.gens.iter().map(|g| g.record.clone()).collect(),
            completeness: self.completeness.clone(),
        }
    }

    pub fn run(&mut self) -> Result<()> {
        while self.next_degree() <= self.cfg.max_degree {
            self.step()?;
            self.save_checkpoint()?;
        }
        if self.cfg.verify_completeness && self.completeness.is_empty() {
            for i in self.cfg.max_degree + 1..=self.cfg.max_degree + 2 {
                let a = self.analyze(i)?;
                if a.row.delta > 0 {
                    warn!("degree {i}: {} generators still missing", a.row.delta);
                } else {
                    info!("degree {i}: products span all covariants");
                }
                self.completeness.push(SearchRow {
                    dims: a.row,
                    syzygies: Certainty::Modular,
                });
            }
            self.save_checkpoint()?;
        }
        Ok(())
    }

    fn save_checkpoint(&self) -> Result<()> {
        if let Some(path) = &self.cfg.checkpoint {
            save_state(&self.state(), path)?;
        }
        Ok(())
    }

    /// Completes the next degree.
    pub fn step(&mut self) -> Result<()> {
        let i = self.next_degree();
        if i == 1 {
            return self.first_degree();
        }
        let mut a = self.analyze(i)?;
        let mut certainty = Certainty::Modular;
        if i <= self.cfg.exact_max_degree {
            let syz = self.syzygy_space(i)?;
            for (w, b) in &a.blocks {
                let exact = syz.block_ranks.get(w).copied().unwrap_or(0);
                if exact != b.echelon.rank() {
                    return Err(pipeline(
                        i,
                        format!(
                            "exact rank {exact} disagrees with modular rank {} in weight {w}",
                            b.echelon.rank()
                        ),
                    ));
                }
            }
            if syz.dim() as u64 != a.row.dim_s {
                return Err(pipeline(i, "exact and modular syzygy counts disagree"));
            }
            self.syzygies.insert(i, syz);
            certainty = Certainty::Exact;
        }
        info!(
            "degree {i}: dim C = {}, sigma = {}, dim S = {}, delta = {}",
            a.row.dim_c, a.row.sigma, a.row.dim_s, a.row.delta
        );
        let accepted = if a.row.delta > 0 {
            self.select(i, &mut a)?
        } else {
            Vec::new()
        };
        if accepted.len() as u64 != a.row.delta {
            return Err(pipeline(
                i,
                format!("accepted {} generators, expected {}", accepted.len(), a.row.delta),
            ));
        }
        self.admit(i, accepted)?;
        self.rows.push(SearchRow {
            dims: a.row,
            syzygies: certainty,
        });
        Ok(())
    }

    fn first_degree(&mut self) -> Result<()> {
        let d = self.cfg.d;
        let t = SemiInvariant::basic(d);
        let row = delta(1, dim_covariants(d, 1), 0, 0)?;
        self.push_generator(GeneratorRecord {
            name: "t".into(),
            degree: 1,
            order: d,
            recipe: Recipe::Form,
            zform: t.zform().to_json(),
        }, t.zform().clone(), 0)?;
        self.rows.push(SearchRow {
            dims: row,
            syzygies: Certainty::Exact,
        });
        Ok(())
    }

    fn push_generator(&mut self, record: GeneratorRecord, zform: ZForm, weight: u32) -> Result<()> {
        let n = self.points.len();
        let values = (0..n)
            .into_par_iter()
            .map(|k| self.eval_recipe(&record.recipe, k))
            .collect::<Result<Vec<_>>>()?;
        self.by_name.insert(record.name.clone(), self.gens.len());
        self.gens.push(Gen {
            record,
            zform,
            weight,
            values,
            xform: OnceLock::new(),
        });
        Ok(())
    }

    fn ensure_points(&mut self, n: usize) -> Result<()> {
        let start = self.points.ensure(n);
        let end = self.points.len();
        if start == end {
            return Ok(());
        }
        for j in 0..self.gens.len() {
            let recipe = &self.gens[j].record.recipe;
            let new = (start..end)
                .into_par_iter()
                .map(|k| self.eval_recipe(recipe, k))
                .collect::<Result<Vec<_>>>()?;
            self.gens[j].values.extend(new);
        }
        Ok(())
    }

    /// Coefficient values of the covariant a recipe describes, at point `k`.
    fn eval_recipe(&self, recipe: &Recipe, k: usize) -> Result<Vec<u64>> {
        match recipe {
            Recipe::Form => Ok(self.points.form(k).to_vec()),
            Recipe::Generator { name } => {
                let j = self.index(name)?;
                self.gens[j]
                    .values
                    .get(k)
                    .cloned()
                    .ok_or_else(|| Error::Invariant(format!("{name} has no value at point {k}")))
            }
            Recipe::Product { factors } => {
                let mut acc = vec![1];
                for f in factors {
                    acc = pointwise::product(&acc, &self.eval_recipe(f, k)?);
                }
                Ok(acc)
            }
            Recipe::Semitransvectant { left, right, r } => {
                let f = self.eval_recipe(left, k)?;
                let g = self.eval_recipe(right, k)?;
                let (m, n) = (f.len() as u32 - 1, g.len() as u32 - 1);
                if *r > m.min(n) {
                    return Err(usage(format!("{recipe}: index exceeds the orders {m}, {n}")));
                }
                Ok(TransvectantKernel::new(m, n, *r).apply(&f, &g))
            }
        }
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| usage(format!("unknown generator {name:?}")))
    }

    /// All monomials of degree `i` in the generators of degree `< i`, sorted
    /// index vectors in lexicographic order. Their number is checked against
    /// the Poincaré coefficient.
    pub fn enumerate_products(&self, i: u32) -> Result<Vec<ProductMonomial>> {
        let out = self.monomials(i, i - 1);
        let mut deltas = BTreeMap::new();
        for g in self.gens.iter().filter(|g| g.record.degree < i) {
            *deltas.entry(g.record.degree).or_insert(0u64) += 1;
        }
        let sigma = poincare_sigma(&deltas, i);
        if sigma != num_bigint::BigInt::from(out.len()) {
            return Err(pipeline(
                i,
                format!("enumerated {} products but sigma = {sigma}", out.len()),
            ));
        }
        Ok(out)
    }

    /// Monomials of degree `i` in the generators of degree at most `top`.
    fn monomials(&self, i: u32, top: u32) -> Vec<ProductMonomial> {
        let gens: Vec<(u32, u32, u32)> = self
            .gens
            .iter()
            .filter(|g| g.record.degree <= top)
            .map(|g| (g.record.degree, g.record.order, g.weight))
            .collect();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        products_rec(&gens, 0, i, &mut cur, &mut out);
        out
    }

    fn analyze(&mut self, i: u32) -> Result<Analysis> {
        let d = self.cfg.d;
        let dims = block_dims(d, i);
        let dim_c = dim_covariants(d, i);
        let products = self.enumerate_products(i)?;
        let margin = self.cfg.margin;
        let widest = dims.iter().max().copied().unwrap_or(0) as usize + margin;
        self.ensure_points(widest)?;
        let mut blocks: BTreeMap<u32, Block> = dims
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(w, &n)| {
                let width = n as usize + margin;
                (
                    w as u32,
                    Block {
                        dim: n as usize,
                        width,
                        products: Vec::new(),
                        echelon: ModEchelon::new(width),
                    },
                )
            })
            .collect();
        for (k, p) in products.iter().enumerate() {
            blocks
                .get_mut(&p.weight)
                .ok_or_else(|| pipeline(i, format!("product of weight {} in an empty block", p.weight)))?
                .products
                .push(k);
        }
        let this = &*self;
        blocks.par_iter_mut().for_each(|(_, b)| {
            for &k in &b.products {
                if b.echelon.rank() >= b.dim {
                    break;
                }
                b.echelon.insert(this.product_vector(&products[k], b.width));
            }
        });
        let mut rank = 0u64;
        for (w, b) in &blocks {
            if b.echelon.rank() > b.dim {
                return Err(Error::Invariant(format!(
                    "degree {i}, weight {w}: rank {} exceeds block dimension {}",
                    b.echelon.rank(),
                    b.dim
                )));
            }
            rank += b.echelon.rank() as u64;
        }
        let sigma = products.len() as u64;
        let row = delta(i, dim_c, sigma, sigma - rank)?;
        Ok(Analysis {
            blocks,
            row,
        })
    }

    fn product_vector(&self, p: &ProductMonomial, width: usize) -> Vec<u64> {
        (0..width)
            .map(|k| {
                p.factors
                    .iter()
                    .fold(1, |acc, &f| fp::mul(acc, self.gens[f].values[k][0]))
            })
            .collect()
    }

    fn candidate_vector(&self, c: &Candidate, width: usize) -> Vec<u64> {
        let r = c.r as usize;
        let kernel = TransvectantKernel::new(self.cfg.d, c.product.order, c.r);
        (0..width)
            .map(|k| {
                let mut w = vec![1];
                for &f in &c.product.factors {
                    w = pointwise::product_prefix(&w, &self.gens[f].values[k], r + 1);
                }
                kernel.leading(self.points.form(k), &w)
            })
            .collect()
    }

    /// Candidates `[t, w]^r` for degree `i`, `w` ranging over the degree
    /// `i-1` monomials in all generators found so far, sorted by `(r, product)`. A single generator admits
    /// `1 <= r <= min(d, ord w)`; a product of several admits
    /// `max ord(factor) <= r <= min(d, ord w)`. With `widened`, only the
    /// indices below those ranges (down to `r = 0`) are returned.
    pub fn candidate_semitransvectants(&self, i: u32, widened: bool) -> Result<Vec<Candidate>> {
        let d = self.cfg.d;
        if i < 2 || self.next_degree() < i {
            return Err(usage(format!("candidates for degree {i} need all generators of degree {}", i.saturating_sub(1))));
        }
        let products = self.monomials(i - 1, i - 1);
        let mut keyed = Vec::new();
        for (k, p) in products.into_iter().enumerate() {
            let top = d.min(p.order);
            let low = if p.factors.len() == 1 {
                1
            } else {
                p.factors.iter().map(|&f| self.gens[f].record.order).max().unwrap_or(0)
            };
            let range = if widened { 0..low.min(top + 1) } else { low..top + 1 };
            for r in range {
                keyed.push((
                    (r, k),
                    Candidate {
                        order: d + p.order - 2 * r,
                        weight: p.weight + r,
                        product: p.clone(),
                        r,
                    },
                ));
            }
        }
        keyed.sort_by_key(|(key, _)| *key);
        Ok(keyed.into_iter().map(|(_, c)| c).collect())
    }

    fn select(&self, i: u32, a: &mut Analysis) -> Result<Vec<Accepted>> {
        let mut accepted = Vec::new();
        if self.cfg.mode == Mode::Paper {
            if self.cfg.d == 8 {
                self.select_pinned(i, a, &mut accepted)?;
            } else {
                debug!("no pinned recipes for d = {}; using the generic pool", self.cfg.d);
            }
        }
        for widened in [false, true] {
            if total_deficit(&a.blocks) == 0 {
                break;
            }
            if widened {
                info!("degree {i}: widening the index range of the candidate pool");
            }
            let pool = self.candidate_semitransvectants(i, widened)?;
            self.select_from_pool(pool, a, &mut accepted);
        }
        if total_deficit(&a.blocks) > 0 {
            let defect: Vec<String> = a
                .blocks
                .iter()
                .filter(|(_, b)| b.deficit() > 0)
                .map(|(w, b)| {
                    format!(
                        "order {} (weight {w}): {} of {} missing",
                        self.cfg.d * i - 2 * w,
                        b.deficit(),
                        b.dim
                    )
                })
                .collect();
            return Err(pipeline(
                i,
                format!("candidate pool does not span the covariants; {}", defect.join("; ")),
            ));
        }
        Ok(accepted)
    }

    fn select_pinned(&self, i: u32, a: &mut Analysis, accepted: &mut Vec<Accepted>) -> Result<()> {
        let d = self.cfg.d;
        for pick in octic_picks(i) {
            let Some(product) = self.product_of_names(pick.factors) else {
                warn!("{}: recipe refers to a generator that was not found", pick.name);
                continue;
            };
            if pick.r > d.min(product.order) {
                info!(
                    "{}: [t, {}]^{} is undefined (order of the product is {}); filled from the pool",
                    pick.name,
                    product.display(&self.names()),
                    pick.r,
                    product.order
                );
                continue;
            }
            let cand = Candidate {
                order: d + product.order - 2 * pick.r,
                weight: product.weight + pick.r,
                r: pick.r,
                product,
            };
            if cand.order != pick.order {
                warn!("{}: recipe has order {}, listed as {}", pick.name, cand.order, pick.order);
            }
            let Some(block) = a.blocks.get_mut(&cand.weight).filter(|b| b.deficit() > 0) else {
                warn!("{}: its block is already spanned; not accepted", pick.name);
                continue;
            };
            let values = self.candidate_vector(&cand, block.width);
            if block.echelon.insert(values.clone()) {
                accepted.push(Accepted {
                    cand,
                    pin: Some(pick),
                    values,
                });
            } else {
                warn!("{}: lies in the span of products and earlier picks; not accepted", pick.name);
            }
        }
        Ok(())
    }

    fn select_from_pool(&self, pool: Vec<Candidate>, a: &mut Analysis, accepted: &mut Vec<Accepted>) {
        let mut rest = pool.into_iter().peekable();
        while total_deficit(&a.blocks) > 0 && rest.peek().is_some() {
            let mut chunk = Vec::with_capacity(CHUNK);
            for c in rest.by_ref() {
                if a.blocks.get(&c.weight).is_some_and(|b| b.deficit() > 0) {
                    chunk.push(c);
                    if chunk.len() == CHUNK {
                        break;
                    }
                }
            }
            let blocks = &a.blocks;
            let vectors: Vec<Vec<u64>> = chunk
                .par_iter()
                .map(|c| self.candidate_vector(c, blocks[&c.weight].width))
                .collect();
            for (cand, values) in chunk.into_iter().zip(vectors) {
                let b = a.blocks.get_mut(&cand.weight).expect("filtered");
                if b.deficit() > 0 && b.echelon.insert(values.clone()) {
                    accepted.push(Accepted {
                        cand,
                        pin: None,
                        values,
                    });
                }
            }
        }
    }

    fn product_of_names(&self, names: &[&str]) -> Option<ProductMonomial> {
        let mut factors = names
            .iter()
            .map(|n| self.by_name.get(*n).copied())
            .collect::<Option<Vec<_>>>()?;
        factors.sort_unstable();
        Some(self.product(factors))
    }

    fn product(&self, factors: Vec<usize>) -> ProductMonomial {
        let (mut degree, mut order, mut weight) = (0, 0, 0);
        for &f in &factors {
            degree += self.gens[f].record.degree;
            order += self.gens[f].record.order;
            weight += self.gens[f].weight;
        }
        ProductMonomial {
            factors,
            degree,
            order,
            weight,
        }
    }

    /// Names, computes exact forms for and records the accepted candidates.
    fn admit(&mut self, i: u32, accepted: Vec<Accepted>) -> Result<()> {
        let names = self.assign_names(i, &accepted);
        let d = self.cfg.d;
        let exact: Vec<ZForm> = accepted
            .par_iter()
            .map(|acc| self.exact_form(i, &acc.cand, &acc.values))
            .collect::<Result<_>>()?;
        let gnames = self.names().iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let gnames: Vec<&str> = gnames.iter().map(String::as_str).collect();
        let mut records: Vec<(usize, GeneratorRecord, ZForm, u32)> = accepted
            .iter()
            .zip(names)
            .zip(exact)
            .map(|((acc, name), z)| {
                let recipe = match acc.pin {
                    Some(p) => Recipe::with_form(p.factors, p.r),
                    None => Recipe::with_form(&acc.cand.product.names(&gnames), acc.cand.r),
                };
                let rank = octic_pick(&name)
                    .filter(|_| self.cfg.mode == Mode::Paper && d == 8)
                    .map(|p| OCTIC_PICKS.iter().position(|q| q.name == p.name).unwrap())
                    .unwrap_or(usize::MAX);
                let record = GeneratorRecord {
                    name,
                    degree: i,
                    order: acc.cand.order,
                    recipe,
                    zform: z.to_json(),
                };
                (rank, record, z, acc.cand.weight)
            })
            .collect();
        // paper names in table order, systematic names in acceptance order
        records.sort_by_key(|(rank, ..)| *rank);
        for (_, record, z, weight) in records {
            debug!("{} = {} (order {})", record.name, record.recipe, record.order);
            self.push_generator(record, z, weight)?;
        }
        Ok(())
    }

    fn assign_names(&self, i: u32, accepted: &[Accepted]) -> Vec<String> {
        let mut unresolved: Vec<&PaperPick> = if self.cfg.mode == Mode::Paper && self.cfg.d == 8 {
            octic_picks(i)
                .filter(|p| !accepted.iter().any(|a| a.pin.is_some_and(|q| q.name == p.name)))
                .collect()
        } else {
            Vec::new()
        };
        let mut systematic = 0;
        accepted
            .iter()
            .map(|a| {
                if let Some(p) = a.pin {
                    return p.name.to_string();
                }
                if let Some(pos) = unresolved.iter().position(|p| p.order == a.cand.order) {
                    return unresolved.remove(pos).name.to_string();
                }
                systematic += 1;
                format!("g{i}_{systematic}")
            })
            .collect()
    }

    /// The primitive Z-form of an accepted candidate, checked against its
    /// pointwise values and, at low degree, against the X-coordinate route.
    fn exact_form(&self, i: u32, c: &Candidate, values: &[u64]) -> Result<ZForm> {
        let d = self.cfg.d;
        let w = c
            .product
            .factors
            .iter()
            .map(|&f| self.gens[f].zform.clone())
            .reduce(|a, b| a.mul(&b))
            .ok_or_else(|| Error::Invariant("empty product".into()))?;
        let t = &self.gens[0].zform;
        let z = semitransvectant_zform(t, d, &w, c.product.order, c.r)?
            .ok_or_else(|| pipeline(i, "exact semitransvectant vanishes but its values do not"))?;
        match zform_grading(&z) {
            Some((deg, wt)) if deg == i && wt == c.weight => {}
            _ => return Err(pipeline(i, format!("semitransvectant {z} has the wrong grading"))),
        }
        let probe = values.len().min(3);
        let vals = &values[..probe];
        self.check_values(&z, vals).map_err(|m| pipeline(i, m))?;
        if i <= self.cfg.cross_check_degree {
            let direct = semitransvectant(&SemiInvariant::basic(d), &SemiInvariant::from_zform(w)?, c.r)?
                .ok_or_else(|| pipeline(i, "direct route gives zero"))?;
            if direct.zform() != &z {
                return Err(pipeline(i, format!("Cayley route {z} differs from direct route {}", direct.zform())));
            }
        }
        Ok(z)
    }

    fn check_against_values(&self, j: usize, z: &ZForm, n: usize) -> std::result::Result<(), String> {
        let vals: Vec<u64> = (0..n).map(|k| self.gens[j].values[k][0]).collect();
        self.check_values(z, &vals)
    }

    /// `z` must be a nonzero multiple of the given leading-coefficient values.
    fn check_values(&self, z: &ZForm, vals: &[u64]) -> std::result::Result<(), String> {
        let ex: Vec<u64> = (0..vals.len())
            .map(|k| self.points.eval_zform(z, k).ok_or("denominator divisible by p"))
            .collect::<std::result::Result<_, _>>()?;
        if ex.first().is_none_or(|&e| e == 0) || vals[0] == 0 {
            return Err("vanishes at the first evaluation point".into());
        }
        for k in 1..vals.len() {
            if fp::mul(ex[k], vals[0]) != fp::mul(ex[0], vals[k]) {
                return Err(format!("Z-form is not proportional to its recipe at point {k}"));
            }
        }
        Ok(())
    }

    fn generator_xform_at(&self, j: usize) -> Result<Poly> {
        if let Some(x) = self.gens[j].xform.get() {
            return Ok(x.clone());
        }
        let x = z_to_x(&self.gens[j].zform)?;
        let _ = self.gens[j].xform.set(x.clone());
        Ok(x)
    }

    pub fn generator_xform(&self, name: &str) -> Result<Poly> {
        self.generator_xform_at(self.index(name)?)
    }

    pub fn generator_zform(&self, name: &str) -> Result<&ZForm> {
        Ok(&self.gens[self.index(name)?].zform)
    }

    pub fn semi_invariant(&self, name: &str) -> Result<SemiInvariant> {
        let j = self.index(name)?;
        Ok(SemiInvariant::from_xform(self.generator_xform_at(j)?)?.named(name))
    }

    pub fn product_xform(&self, p: &ProductMonomial) -> Result<Poly> {
        let mut acc = Poly::one(crate::poly::VarSet::x(self.cfg.d));
        for &f in &p.factors {
            acc = &acc * &self.generator_xform_at(f)?;
        }
        Ok(acc)
    }

    pub fn syzygy_basis(&self, i: u32) -> Option<&SyzygyBasis> {
        self.syzygies.get(&i)
    }

    /// Exact syzygies among the degree-`i` products, block by block, each
    /// verified to contract to zero against the X-form products.
    pub fn syzygy_space(&self, i: u32) -> Result<SyzygyBasis> {
        let products = self.enumerate_products(i)?;
        let mut by_weight: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (k, p) in products.iter().enumerate() {
            by_weight.entry(p.weight).or_default().push(k);
        }
        let xforms: Vec<Poly> = products
            .par_iter()
            .map(|p| self.product_xform(p))
            .collect::<Result<_>>()?;
        let blocks: Vec<(u32, usize, Vec<Vec<Rational>>)> = by_weight
            .par_iter()
            .map(|(&w, members)| {
                let (rank, null) = block_nullspace(members.iter().map(|&k| &xforms[k]).collect());
                let mut vecs = Vec::with_capacity(null.len());
                for v in null {
                    let mut full = vec![Rational::zero(); products.len()];
                    let mut sum = Poly::zero(xforms[members[0]].vars());
                    for (&k, c) in members.iter().zip(&v) {
                        if !c.is_zero() {
                            sum = &sum + &xforms[k].scale(c);
                            full[k] = c.clone();
                        }
                    }
                    if !sum.is_zero() {
                        return Err(Error::Invariant(format!(
                            "degree {i}: syzygy does not contract to zero"
                        )));
                    }
                    vecs.push(full);
                }
                Ok((w, rank, vecs))
            })
            .collect::<Result<_>>()?;
        let mut basis = Vec::new();
        let mut block_ranks = BTreeMap::new();
        for (w, rank, vecs) in blocks {
            block_ranks.insert(w, rank);
            basis.extend(vecs);
        }
        Ok(SyzygyBasis {
            degree: i,
            products,
            basis,
            block_ranks,
        })
    }
}

fn products_rec(
    gens: &[(u32, u32, u32)],
    start: usize,
    remaining: u32,
    cur: &mut Vec<usize>,
    out: &mut Vec<ProductMonomial>,
) {
    for j in start..gens.len() {
        let deg = gens[j].0;
        if deg > remaining {
            break;
        }
        cur.push(j);
        if deg == remaining {
            let (mut order, mut weight) = (0, 0);
            for &f in cur.iter() {
                order += gens[f].1;
                weight += gens[f].2;
            }
            out.push(ProductMonomial {
                factors: cur.clone(),
                degree: cur.iter().map(|&f| gens[f].0).sum(),
                order,
                weight,
            });
        } else {
            products_rec(gens, j, remaining - deg, cur, out);
        }
        cur.pop();
    }
}

/// Rank and primitive integer left-nullspace vectors of the coefficient
/// matrix of `polys` over their X-monomials.
fn block_nullspace(polys: Vec<&Poly>) -> (usize, Vec<Vec<Rational>>) {
    let mut columns: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for p in &polys {
        for (m, _) in p.terms() {
            let n = columns.len();
            columns.entry(m).or_insert(n);
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
    let (rank, null) = left_nullspace(&integer_rows(&rows));
    let null = null
        .into_iter()
        .map(|v| primitive_vector(&v).into_iter().map(Rational::from_integer).collect())
        .collect();
    (rank, null)
}

fn total_deficit(blocks: &BTreeMap<u32, Block>) -> usize {
    blocks.values().map(Block::deficit).sum()
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| usage(format!("thread pool: {e}")))?
            .install(f),
    }
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchState> {
    in_pool(cfg.threads, || {
        let mut e = Engine::new(cfg.clone())?;
        e.run()?;
        Ok(e.state())
    })
}

/// Continues a saved search up to `cfg.max_degree`.
pub fn resume_search(cfg: &SearchConfig, state: &SearchState) -> Result<SearchState> {
    in_pool(cfg.threads, || {
        let mut e = Engine::resume(cfg.clone(), state)?;
        e.run()?;
        Ok(e.state())
    })
}

#[cfg(test)]
mod tests;
