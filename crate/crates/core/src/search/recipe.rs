//! Expression trees describing how a generator was built, and the pinned
//! recipes used for the octic in paper mode.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    /// the basic form `t`
    Form,
    Generator {
        name: String,
    },
    Product {
        factors: Vec<Recipe>,
    },
    Semitransvectant {
        left: Box<Recipe>,
        right: Box<Recipe>,
        r: u32,
    },
}

impl Recipe {
    pub fn generator(name: impl Into<String>) -> Self {
        Recipe::Generator { name: name.into() }
    }

    /// `[t, w]^r` with `w` the product of the named generators.
    pub fn with_form(factors: &[&str], r: u32) -> Self {
        Recipe::Semitransvectant {
            left: Box::new(Recipe::Form),
            right: Box::new(Self::product_of(factors)),
            r,
        }
    }

    pub fn product_of(factors: &[&str]) -> Self {
        if factors.len() == 1 {
            Recipe::generator(factors[0])
        } else {
            Recipe::Product {
                factors: factors.iter().map(|f| Recipe::generator(*f)).collect(),
            }
        }
    }

    /// Parses `name`, `a*b^2` (a product) or `t` (the form, or the generator
    /// of that name; both denote the same semi-invariant).
    pub fn parse_product(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let (name, exp) = match part.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {part:?}")))?,
                ),
                None => (part, 1),
            };
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Parse(format!("bad generator name {name:?}")));
            }
            for _ in 0..exp {
                factors.push(Recipe::generator(name));
            }
        }
        match factors.len() {
            0 => Err(Error::Parse("empty product".into())),
            1 => Ok(factors.pop().unwrap()),
            _ => Ok(Recipe::Product { factors }),
        }
    }

    /// Names of generators referenced anywhere in the tree.
    pub fn references(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Recipe::Form => {}
            Recipe::Generator { name } => out.push(name),
            Recipe::Product { factors } => factors.iter().for_each(|f| f.collect_refs(out)),
            Recipe::Semitransvectant { left, right, .. } => {
                left.collect_refs(out);
                right.collect_refs(out);
            }
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Form => write!(f, "t"),
            Recipe::Generator { name } => write!(f, "{name}"),
            Recipe::Product { factors } => {
                let mut i = 0;
                let mut first = true;
                while i < factors.len() {
                    let mut j = i + 1;
                    while j < factors.len() && factors[j] == factors[i] {
                        j += 1;
                    }
                    if !first {
                        write!(f, "*")?;
                    }
                    first = false;
                    if j - i > 1 {
                        write!(f, "{}^{}", factors[i], j - i)?;
                    } else {
                        write!(f, "{}", factors[i])?;
                    }
                    i = j;
                }
                Ok(())
            }
            Recipe::Semitransvectant { left, right, r } => write!(f, "[{left}, {right}]^{r}"),
        }
    }
}

/// A pinned generator for the octic: `[t, product]^r` with the order the
/// recipe is expected to produce.
#[derive(Clone, Copy, Debug)]
pub struct PaperPick {
    pub name: &'static str,
    pub factors: &'static [&'static str],
    pub r: u32,
    pub order: u32,
    /// the recipe as printed, where it differs from the one used
    pub printed: Option<&'static str>,
}

const fn pick(name: &'static str, factors: &'static [&'static str], r: u32, order: u32) -> PaperPick {
    PaperPick {
        name,
        factors,
        r,
        order,
        printed: None,
    }
}

const fn amended(
    name: &'static str,
    factors: &'static [&'static str],
    r: u32,
    order: u32,
    printed: &'static str,
) -> PaperPick {
    PaperPick {
        name,
        factors,
        r,
        order,
        printed: Some(printed),
    }
}

pub const OCTIC_PICKS: &[PaperPick] = &[
    pick("dv1", &["t"], 2, 12),
    pick("dv2", &["t"], 4, 8),
    pick("dv3", &["t"], 6, 4),
    pick("dv4", &["t"], 8, 0),
    pick("tr1", &["dv1"], 3, 14),
    pick("tr2", &["dv1"], 4, 12),
    pick("tr3", &["dv1"], 5, 10),
    pick("tr4", &["dv1"], 7, 6),
    pick("tr5", &["dv2"], 4, 8),
    pick("tr6", &["dv2"], 6, 4),
    pick("tr7", &["dv2"], 8, 0),
    pick("tr8", &["dv1"], 1, 18),
    pick("ch1", &["tr4"], 2, 10),
    pick("ch2", &["tr4"], 5, 4),
    pick("ch3", &["tr5"], 8, 0),
    pick("ch4", &["tr6"], 4, 4),
    pick("ch5", &["tr1"], 4, 14),
    pick("ch6", &["tr1"], 5, 12),
    pick("ch7", &["tr1"], 6, 10),
    pick("ch8", &["tr1"], 7, 8),
    pick("ch9", &["tr2"], 1, 18),
    pick("ch10", &["tr2"], 7, 6),
    pick("pt1", &["dv3", "dv3"], 6, 4),
    pick("pt2", &["dv3", "dv3"], 7, 2),
    pick("pt3", &["dv3", "dv3"], 8, 0),
    pick("pt4", &["ch1"], 2, 14),
    pick("pt5", &["ch1"], 4, 10),
    pick("pt6", &["ch1"], 5, 8),
    pick("pt7", &["ch1"], 7, 4),
    pick("pt8", &["ch2"], 1, 10),
    pick("pt9", &["ch4"], 1, 10),
    pick("pt10", &["ch4"], 3, 6),
    amended("pt11", &["dv3", "dv3"], 5, 6, "[t, dv2^3]^5"),
    pick("sh1", &["tr6", "dv3"], 6, 4),
    pick("sh2", &["tr6", "dv3"], 7, 2),
    pick("sh3", &["tr6", "dv3"], 8, 0),
    pick("sh4", &["pt5"], 5, 8),
    pick("sh5", &["pt6"], 5, 6),
    pick("sh6", &["pt8"], 6, 6),
    amended("sh7", &["pt9"], 6, 6, "[t, pt9]^4"),
    pick("sh8", &["pt9"], 7, 4),
    pick("sh9", &["pt10"], 2, 10),
    pick("si1", &["ch10", "dv3"], 7, 4),
    pick("si2", &["tr6", "tr6"], 5, 6),
    pick("si3", &["tr6", "tr6"], 7, 2),
    pick("si4", &["tr6", "tr6"], 8, 0),
    pick("si5", &["sh9"], 6, 6),
    pick("si6", &["sh9"], 7, 4),
    pick("si7", &["ch4", "dv3"], 5, 6),
    pick("si8", &["ch10", "dv3"], 8, 2),
    pick("vi1", &["ch4", "tr6"], 7, 2),
    pick("vi2", &["ch4", "tr6"], 8, 0),
    pick("vi3", &["ch2", "tr6"], 5, 6),
    pick("vi4", &["pt10", "dv3"], 7, 4),
    pick("vi5", &["pt10", "dv3"], 8, 2),
    pick("vi6", &["ch4", "tr6"], 5, 6),
    pick("vi7", &["ch4", "tr6"], 6, 4),
    pick("de1", &["vi2"], 6, 4),
    pick("de2", &["vi2"], 7, 2),
    pick("de3", &["sh2", "dv3"], 6, 2),
    pick("de4", &["pt1", "tr6"], 8, 0),
    pick("de5", &["ch4", "ch4"], 7, 2),
    pick("des1", &["pt1", "ch4"], 8, 0),
    pick("des2", &["si2", "dv3"], 8, 2),
    pick("des3", &["pt10", "ch4"], 8, 2),
    pick("odn1", &["si3", "tr6"], 6, 2),
    pick("odn2", &["vi7", "dv3"], 7, 2),
    pick("dvan", &["vi5", "tr6"], 6, 2),
];

/// Degree of a pinned pick, read off its name prefix.
pub fn pick_degree(p: &PaperPick) -> u32 {
    let prefix = p.name.trim_end_matches(|c: char| c.is_ascii_digit());
    match prefix {
        "dv" => 2,
        "tr" => 3,
        "ch" => 4,
        "pt" => 5,
        "sh" => 6,
        "si" => 7,
        "vi" => 8,
        "de" => 9,
        "des" => 10,
        "odn" => 11,
        "dvan" => 12,
        _ => unreachable!("unknown prefix {prefix}"),
    }
}

pub fn octic_picks(degree: u32) -> impl Iterator<Item = &'static PaperPick> {
    OCTIC_PICKS.iter().filter(move |p| pick_degree(p) == degree)
}

pub fn octic_pick(name: &str) -> Option<&'static PaperPick> {
    OCTIC_PICKS.iter().find(|p| p.name == name)
}
