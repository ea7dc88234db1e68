//! Exact dyadic rationals in `[0,1)`, standard dyadic intervals and
//! standard dyadic partitions.
//!
//! A [`Dyadic`] is stored in reduced form `a / 2^n` with `a` odd (or the pair
//! `(0, 0)` for zero), so structural equality is value equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A dyadic rational `numerator / 2^level` in `[0,1)`, canonically reduced.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Dyadic {
    numerator: BigUint,
    level: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            numerator: BigUint::zero(),
            level: 0,
        }
    }

    pub fn half() -> Self {
        Dyadic {
            numerator: BigUint::one(),
            level: 1,
        }
    }

    /// Reduce `numerator / 2^level` to canonical form.
    pub fn normalize(numerator: impl Into<BigUint>, level: u32) -> Result<Self> {
        let mut numerator = numerator.into();
        if numerator >= (BigUint::one() << level) {
            return Err(Error::OutOfRange(format!(
                "{numerator}/2^{level} is not in [0,1)"
            )));
        }
        if numerator.is_zero() {
            return Ok(Self::zero());
        }
        let tz = numerator.trailing_zeros().unwrap_or(0) as u32;
        let shift = tz.min(level);
        numerator >>= shift;
        Ok(Dyadic {
            numerator,
            level: level - shift,
        })
    }

    /// Convenience constructor for small values; panics when out of range.
    pub fn new(numerator: u64, level: u32) -> Self {
        Self::normalize(BigUint::from(numerator), level).expect("dyadic out of [0,1)")
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    /// Level of the reduced form, i.e. the smallest `n` with `2^n * self` integral.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Numerator of `self` written over `2^level`; `level` must be at least `self.level()`.
    pub fn numerator_at(&self, level: u32) -> BigUint {
        debug_assert!(level >= self.level);
        &self.numerator << (level - self.level)
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.numerator.to_f64().unwrap_or(f64::NAN);
        n * (-(self.level as f64)).exp2()
    }

    /// `(self + other) mod 1`.
    pub fn add_mod1(&self, other: &Dyadic) -> Dyadic {
        let level = self.level.max(other.level);
        let sum = self.numerator_at(level) + other.numerator_at(level);
        let modulus = BigUint::one() << level;
        Dyadic::normalize(sum % modulus, level).expect("reduced mod 1")
    }

    /// `(self - other) mod 1`.
    pub fn sub_mod1(&self, other: &Dyadic) -> Dyadic {
        let level = self.level.max(other.level);
        let modulus = BigUint::one() << level;
        let diff = self.numerator_at(level) + &modulus - other.numerator_at(level);
        Dyadic::normalize(diff % modulus, level).expect("reduced mod 1")
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let level = self.level.max(other.level);
        self.numerator_at(level).cmp(&other.numerator_at(level))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.numerator, BigUint::one() << self.level)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `0`, `a/b` with `b` a power of two, or `a/2^n`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid dyadic `{s}`"));
        let Some((num, den)) = s.split_once('/') else {
            let n: BigUint = s.parse().map_err(|_| bad())?;
            return Dyadic::normalize(n, 0);
        };
        let num: BigUint = num.trim().parse().map_err(|_| bad())?;
        let den = den.trim();
        let level = if let Some(exp) = den.strip_prefix("2^") {
            exp.parse::<u32>().map_err(|_| bad())?
        } else {
            let d: BigUint = den.parse().map_err(|_| bad())?;
            if d.is_zero() || (&d & (&d - 1u32)) != BigUint::zero() {
                return Err(bad());
            }
            d.trailing_zeros().unwrap_or(0) as u32
        };
        Dyadic::normalize(num, level)
    }
}

/// The standard dyadic interval `[index/2^level, (index+1)/2^level)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SDInterval {
    index: BigUint,
    level: u32,
}

impl SDInterval {
    pub fn unit() -> Self {
        SDInterval {
            index: BigUint::zero(),
            level: 0,
        }
    }

    pub fn new(index: impl Into<BigUint>, level: u32) -> Result<Self> {
        let index = index.into();
        if index >= (BigUint::one() << level) {
            return Err(Error::OutOfRange(format!(
                "interval index {index} too large for level {level}"
            )));
        }
        Ok(SDInterval { index, level })
    }

    pub fn index(&self) -> &BigUint {
        &self.index
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn left(&self) -> Dyadic {
        Dyadic::normalize(self.index.clone(), self.level).expect("index in range")
    }

    /// Right endpoint, or `None` when it is `1`.
    pub fn right(&self) -> Option<Dyadic> {
        let next = &self.index + 1u32;
        if next == (BigUint::one() << self.level) {
            None
        } else {
            Some(Dyadic::normalize(next, self.level).expect("index in range"))
        }
    }

    pub fn halves(&self) -> (SDInterval, SDInterval) {
        let left = &self.index << 1;
        let right = &left + 1u32;
        (
            SDInterval {
                index: left,
                level: self.level + 1,
            },
            SDInterval {
                index: right,
                level: self.level + 1,
            },
        )
    }

    /// Half-open containment of a point.
    pub fn contains(&self, d: &Dyadic) -> bool {
        let level = self.level.max(d.level());
        let shift = level - self.level;
        let lo = &self.index << shift;
        let hi = (&self.index + 1u32) << shift;
        let x = d.numerator_at(level);
        lo <= x && x < hi
    }

    pub fn contains_interval(&self, other: &SDInterval) -> bool {
        other.level >= self.level && (&other.index >> (other.level - self.level)) == self.index
    }

    /// Length as a power of two exponent: the interval has length `2^-level`.
    pub fn length_exponent(&self) -> u32 {
        self.level
    }
}

impl fmt::Display for SDInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.right() {
            Some(r) => write!(f, "({},{})", self.left(), r),
            None => write!(f, "({},1)", self.left()),
        }
    }
}

/// The largest standard dyadic interval whose left endpoint is `d`.
pub fn largest_sdi_at(d: &Dyadic) -> SDInterval {
    SDInterval {
        index: d.numerator().clone(),
        level: d.level(),
    }
}

/// `-log2` of the length of the largest s.d.i. starting at `d`.
pub fn ell(d: &Dyadic) -> u32 {
    largest_sdi_at(d).level()
}

/// All dyadics of level `<= max_level`, ascending.
pub fn enumerate_dyadics(max_level: u32) -> Vec<Dyadic> {
    let count = 1u64 << max_level;
    (0..count)
        .map(|j| Dyadic::normalize(BigUint::from(j), max_level).expect("in range"))
        .collect()
}

/// Dyadics whose reduced level is exactly `level` (the set with `ell = level`).
/// There is one such dyadic at level 0 and `2^(level-1)` otherwise.
pub fn dyadics_at_level(level: u32) -> Vec<Dyadic> {
    if level == 0 {
        return vec![Dyadic::zero()];
    }
    let count = 1u64 << (level - 1);
    (0..count)
        .map(|j| Dyadic {
            numerator: BigUint::from(2 * j + 1),
            level,
        })
        .collect()
}

/// A standard dyadic partition of `[0,1)`, stored by its breakpoints.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SDPartition {
    breakpoints: Vec<Dyadic>,
}

impl SDPartition {
    pub fn trivial() -> Self {
        SDPartition {
            breakpoints: vec![Dyadic::zero()],
        }
    }

    /// Validates that consecutive breakpoints bound standard dyadic intervals.
    pub fn new(breakpoints: Vec<Dyadic>) -> Result<Self> {
        if breakpoints.first() != Some(&Dyadic::zero()) {
            return Err(Error::InvalidPartition(
                "breakpoints must start at 0".into(),
            ));
        }
        for (i, left) in breakpoints.iter().enumerate() {
            let right = breakpoints.get(i + 1);
            if let Some(r) = right {
                if r <= left {
                    return Err(Error::InvalidPartition(
                        "breakpoints must be strictly increasing".into(),
                    ));
                }
            }
            interval_between(left, right).ok_or_else(|| {
                Error::InvalidPartition(format!(
                    "[{left}, {}) is not a standard dyadic interval",
                    right.map_or("1".to_string(), |r| r.to_string())
                ))
            })?;
        }
        Ok(SDPartition { breakpoints })
    }

    pub fn from_intervals(intervals: &[SDInterval]) -> Result<Self> {
        Self::new(intervals.iter().map(SDInterval::left).collect())
    }

    pub fn breakpoints(&self) -> &[Dyadic] {
        &self.breakpoints
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn intervals(&self) -> Vec<SDInterval> {
        self.breakpoints
            .iter()
            .enumerate()
            .map(|(i, l)| {
                interval_between(l, self.breakpoints.get(i + 1)).expect("validated partition")
            })
            .collect()
    }

    /// Index of the interval containing `d`.
    pub fn locate(&self, d: &Dyadic) -> usize {
        match self.breakpoints.binary_search(d) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    /// Union of breakpoints; the common refinement of two partitions.
    pub fn union(&self, other: &SDPartition) -> SDPartition {
        let mut all: Vec<Dyadic> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .cloned()
            .collect();
        all.sort();
        all.dedup();
        SDPartition::new(all).expect("union of partitions is a partition")
    }
}

impl fmt::Display for SDPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.breakpoints.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for SDPartition {
    type Err = Error;

    /// `{0,1/4,1/2}` (braces optional).
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let points = inner
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Dyadic>>>()?;
        SDPartition::new(points)
    }
}

/// The s.d.i. `[left, right)` (right = 1 when `None`), if it is one.
fn interval_between(left: &Dyadic, right: Option<&Dyadic>) -> Option<SDInterval> {
    let level = left.level().max(right.map_or(0, Dyadic::level));
    let lo = left.numerator_at(level);
    let hi = match right {
        Some(r) => r.numerator_at(level),
        None => BigUint::one() << level,
    };
    if hi <= lo {
        return None;
    }
    let len = &hi - &lo;
    if (&len & (&len - 1u32)) != BigUint::zero() {
        return None;
    }
    let k = len.trailing_zeros().unwrap_or(0) as u32;
    if !(&lo % &len).is_zero() {
        return None;
    }
    Some(SDInterval {
        index: lo >> k,
        level: level - k,
    })
}

/// A connected open arc of the torus `[0,1)`, running forward from `start`
/// to `end`. When `start == end` the arc is the torus minus that point.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DyadicArc {
    pub start: Dyadic,
    pub end: Dyadic,
}

impl DyadicArc {
    pub fn new(start: Dyadic, end: Dyadic) -> Self {
        DyadicArc { start, end }
    }

    /// Offset of `x` from `start` along the arc direction, in `[0,1)`.
    fn offset(&self, x: &Dyadic) -> Dyadic {
        x.sub_mod1(&self.start)
    }

    /// Arc length as a numerator over `2^level`, with the full-circle case as `2^level`.
    fn length_at(&self, level: u32) -> BigUint {
        if self.start == self.end {
            BigUint::one() << level
        } else {
            self.end.sub_mod1(&self.start).numerator_at(level)
        }
    }

    fn max_level(&self) -> u32 {
        self.start.level().max(self.end.level())
    }

    /// Open-arc membership.
    pub fn contains_point(&self, d: &Dyadic) -> bool {
        let off = self.offset(d);
        if off.is_zero() {
            return false;
        }
        let level = self.max_level().max(off.level());
        off.numerator_at(level) < self.length_at(level)
    }

    /// Whether the open interval `I` lies inside the arc.
    pub fn contains_interval(&self, interval: &SDInterval) -> bool {
        let off = self.offset(&interval.left());
        let level = self.max_level().max(off.level()).max(interval.level());
        let tail = off.numerator_at(level) + (BigUint::one() << (level - interval.level()));
        tail <= self.length_at(level)
    }

    pub fn is_disjoint(&self, other: &DyadicArc) -> bool {
        // Two open arcs are disjoint iff each one's start lies outside the other
        // and neither contains the other's interior.
        let full = |a: &DyadicArc| a.start == a.end;
        if full(self) || full(other) {
            return false;
        }
        !self.contains_point(&other.start)
            && !other.contains_point(&self.start)
            && self.start != other.start
    }
}

impl fmt::Display for DyadicArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

impl FromStr for DyadicArc {
    type Err = Error;

    /// `(a/2^n,b/2^m)`; an endpoint written `1` is read as `0`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("invalid arc `{s}`")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("invalid arc `{s}`")))?;
        let endpoint = |p: &str| -> Result<Dyadic> {
            if p.trim() == "1" {
                Ok(Dyadic::zero())
            } else {
                p.parse()
            }
        };
        Ok(DyadicArc::new(endpoint(a)?, endpoint(b)?))
    }
}

/// Intervals of `p` inside `arc`, and breakpoints of `p` inside `arc` or equal
/// to its left boundary.
pub fn localized_sets(p: &SDPartition, arc: &DyadicArc) -> (Vec<SDInterval>, Vec<Dyadic>) {
    let intervals = p
        .intervals()
        .into_iter()
        .filter(|i| arc.contains_interval(i))
        .collect();
    let boundary = p
        .breakpoints()
        .iter()
        .filter(|d| **d == arc.start || arc.contains_point(d))
        .cloned()
        .collect();
    (intervals, boundary)
}
