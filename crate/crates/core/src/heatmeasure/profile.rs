//! Inverse-temperature profiles `β : D → (0, ∞)`, finitely supported
//! integer translations, and the transforms fed to the Kakutani analyzer.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dyadic::{ell, Dyadic, SDPartition};
use crate::error::{Error, Result};
use crate::thompson::{parse_expression, VElement};

/// A profile depending on `d` only through its level `ℓ(d)`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BetaProfile {
    Constant(f64),
    /// `β(d) = 2^{−ℓ(d)τ}`, the length of the largest s.d.i. at `d` to the power `τ`.
    Tau(f64),
    /// `β` read from a table by level; beyond the table the last entry is
    /// multiplied by `geom` per level, or repeated when `geom` is absent.
    EllTable { values: Vec<f64>, geom: Option<f64> },
}

impl BetaProfile {
    pub fn at_level(&self, level: u32) -> f64 {
        match self {
            BetaProfile::Constant(c) => *c,
            BetaProfile::Tau(tau) => (-(level as f64) * tau).exp2(),
            BetaProfile::EllTable { values, geom } => match values.get(level as usize) {
                Some(v) => *v,
                None => {
                    let last = *values.last().expect("nonempty table");
                    match geom {
                        Some(r) => last * r.powi((level as usize + 1 - values.len()) as i32),
                        None => last,
                    }
                }
            },
        }
    }

    pub fn eval(&self, d: &Dyadic) -> f64 {
        self.at_level(ell(d))
    }
}

impl fmt::Display for BetaProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaProfile::Constant(c) => write!(f, "const:{c}"),
            BetaProfile::Tau(t) => write!(f, "tau:{t}"),
            BetaProfile::EllTable { values, geom } => {
                let vals: Vec<String> = values.iter().map(f64::to_string).collect();
                write!(f, "ell:{}", vals.join(","))?;
                if let Some(r) = geom {
                    write!(f, ";geom:{r}")?;
                }
                Ok(())
            }
        }
    }
}

fn positive(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} `{s}`")))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{what} must be positive, got {s}")))
    }
}

impl FromStr for BetaProfile {
    type Err = Error;

    /// `const:<b>` | `tau:<τ>` | `ell:<b0>,…,<bK>[;geom:<r>]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(c) = s.strip_prefix("const:") {
            return Ok(BetaProfile::Constant(positive(c, "constant")?));
        }
        if let Some(t) = s.strip_prefix("tau:") {
            return Ok(BetaProfile::Tau(positive(t, "exponent")?));
        }
        if let Some(rest) = s.strip_prefix("ell:") {
            let (table, geom) = match rest.split_once(';') {
                Some((t, g)) => {
                    let r = g
                        .trim()
                        .strip_prefix("geom:")
                        .ok_or_else(|| Error::Parse(format!("expected `geom:<r>` after `;` in `{s}`")))?;
                    (t, Some(positive(r, "ratio")?))
                }
                None => (rest, None),
            };
            let values = table
                .split(',')
                .map(|v| positive(v, "table entry"))
                .collect::<Result<Vec<_>>>()?;
            return Ok(BetaProfile::EllTable { values, geom });
        }
        Err(Error::Parse(format!(
            "unknown profile `{s}`; expected const:<b>, tau:<t> or ell:<b0>,...[;geom:<r>]"
        )))
    }
}

/// A map `D → Z` constant on each half-open interval of a partition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZfrElement {
    partition: SDPartition,
    values: Vec<i64>,
}

impl ZfrElement {
    pub fn new(partition: SDPartition, values: Vec<i64>) -> Result<Self> {
        if values.len() != partition.len() {
            return Err(Error::Arity {
                expected: partition.len(),
                found: values.len(),
            });
        }
        Ok(ZfrElement { partition, values })
    }

    pub fn constant(k: i64) -> Self {
        ZfrElement {
            partition: SDPartition::trivial(),
            values: vec![k],
        }
    }

    pub fn eval(&self, d: &Dyadic) -> i64 {
        self.values[self.partition.locate(d)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn max_abs(&self) -> u64 {
        self.values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn partition(&self) -> &SDPartition {
        &self.partition
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

impl fmt::Display for ZfrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(i64::to_string).collect();
        write!(f, "{}@{}", self.partition, vals.join(","))
    }
}

impl FromStr for ZfrElement {
    type Err = Error;

    /// `<partition>@<v1>,<v2>,…`, e.g. `{0,1/2}@1,-2`.
    fn from_str(s: &str) -> Result<Self> {
        let (p, v) = s
            .split_once('@')
            .ok_or_else(|| Error::Parse(format!("expected `<partition>@<values>`, found `{s}`")))?;
        let partition: SDPartition = p.parse()?;
        let values = v
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad integer `{x}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        ZfrElement::new(partition, values)
    }
}

/// How the reference product measure is moved.
#[derive(Clone, PartialEq, Debug)]
pub enum Transform {
    /// Shift coordinate `d` by `g(d)`.
    Translate(ZfrElement),
    /// Precompose with the generator `A` (`x ↦ x/2` on `[0,1/2)`).
    Halve,
    /// Precompose with the rotation by `k/2^n`.
    Rotate(u32, i64),
    Precompose(VElement),
}

impl Transform {
    /// The Thompson element for the precomposition variants.
    pub fn element(&self) -> Option<VElement> {
        match self {
            Transform::Translate(_) => None,
            Transform::Halve => Some(VElement::generator_a()),
            Transform::Rotate(n, k) => Some(VElement::rotation(*n, *k)),
            Transform::Precompose(v) => Some(v.clone()),
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Translate(g) => write!(f, "translate:{g}"),
            Transform::Halve => f.write_str("halve"),
            Transform::Rotate(n, k) => write!(f, "rotate:{n},{k}"),
            Transform::Precompose(v) => write!(f, "precompose:{v}"),
        }
    }
}

impl FromStr for Transform {
    type Err = Error;

    /// `translate:<partition>@<values>` | `halve` | `rotate:<n>,<k>` | `precompose:<element>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "halve" {
            return Ok(Transform::Halve);
        }
        if let Some(g) = s.strip_prefix("translate:") {
            return Ok(Transform::Translate(g.parse()?));
        }
        if let Some(r) = s.strip_prefix("rotate:") {
            let (n, k) = r
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected `rotate:<n>,<k>`, found `{s}`")))?;
            let n: u32 = n.trim().parse().map_err(|_| Error::Parse(format!("bad level `{n}`")))?;
            let k: i64 = k.trim().parse().map_err(|_| Error::Parse(format!("bad step `{k}`")))?;
            if n > 30 {
                return Err(Error::InvalidParameter(format!("rotation level {n} is too large")));
            }
            return Ok(Transform::Rotate(n, k));
        }
        if let Some(e) = s.strip_prefix("precompose:") {
            return Ok(Transform::Precompose(parse_expression(e)?));
        }
        Err(Error::Parse(format!(
            "unknown transform `{s}`; expected translate:, halve, rotate: or precompose:"
        )))
    }
}
