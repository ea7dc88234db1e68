//! Thompson's groups `F < T < V` as reduced tree-pair-permutation diagrams.
//!
//! An element is a triple `(domain, range, perm)`: the `k`-th leaf interval of
//! the domain tree is mapped affinely, with positive slope, onto the
//! `perm(k)`-th leaf interval of the range tree. Intervals are half-open
//! `[d, d')`, so the action on dyadics is exact and left-continuous.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::dyadic::{Dyadic, SDInterval};
use crate::error::{Error, Result};
use crate::forest::{leaf_containing, leq, Forest, Permutation, Tree};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VElement {
    domain: Tree,
    range: Tree,
    perm: Permutation,
}

/// Position of an element in the chain `F < T < V`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "identity")]
    Identity,
    F,
    #[serde(rename = "T_only")]
    TOnly,
    #[serde(rename = "V_only")]
    VOnly,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Identity => "identity",
            Classification::F => "F",
            Classification::TOnly => "T_only",
            Classification::VOnly => "V_only",
        })
    }
}

/// One affine piece: `domain` maps onto an s.d.i. of length
/// `2^slope_exponent * |domain|` starting at `image_left`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PLPiece {
    pub domain: SDInterval,
    pub slope_exponent: i32,
    pub image_left: Dyadic,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PLMap {
    pub pieces: Vec<PLPiece>,
}

impl VElement {
    pub fn identity() -> Self {
        VElement {
            domain: Tree::Leaf,
            range: Tree::Leaf,
            perm: Permutation::identity(1),
        }
    }

    /// Build and reduce a diagram in the single-permutation convention.
    pub fn new(domain: Tree, range: Tree, perm: Permutation) -> Result<Self> {
        if domain.leaves() != range.leaves() || perm.len() != domain.leaves() {
            return Err(Error::Arity {
                expected: domain.leaves(),
                found: if perm.len() != domain.leaves() {
                    perm.len()
                } else {
                    range.leaves()
                },
            });
        }
        Ok(VElement {
            domain,
            range,
            perm,
        }
        .reduced())
    }

    /// The fraction `(t, τ) / (s, σ)`: it sends the domain leaf `σ⁻¹(i)` onto
    /// the range leaf `τ⁻¹(i)`, so domain leaf `k` goes to `τ⁻¹(σ(k))`.
    pub fn from_pair(range: Tree, tau: Permutation, domain: Tree, sigma: Permutation) -> Result<Self> {
        if tau.len() != range.leaves() || sigma.len() != domain.leaves() {
            return Err(Error::Arity {
                expected: range.leaves(),
                found: tau.len(),
            });
        }
        if tau.len() != sigma.len() {
            return Err(Error::Arity {
                expected: tau.len(),
                found: sigma.len(),
            });
        }
        let perm = tau.inverse().after(&sigma);
        Self::new(domain, range, perm)
    }

    pub fn domain(&self) -> &Tree {
        &self.domain
    }

    pub fn range(&self) -> &Tree {
        &self.range
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    /// Leaf count of the reduced diagram.
    pub fn size(&self) -> usize {
        self.domain.leaves()
    }

    pub fn is_identity(&self) -> bool {
        self.domain.is_leaf()
    }

    /// The standard generator `A` of `F`: `x/2` on `[0,1/2)`, `x-1/4` on
    /// `[1/2,3/4)`, `2x-1` on `[3/4,1)`.
    pub fn generator_a() -> Self {
        VElement::new(
            "(* (* *))".parse().expect("tree"),
            "((* *) *)".parse().expect("tree"),
            Permutation::identity(3),
        )
        .expect("valid generator")
    }

    /// The standard generator `B` of `F`, acting as `A` on `[1/2,1)` and
    /// trivially on `[0,1/2)`.
    pub fn generator_b() -> Self {
        VElement::new(
            "(* (* (* *)))".parse().expect("tree"),
            "(* ((* *) *))".parse().expect("tree"),
            Permutation::identity(4),
        )
        .expect("valid generator")
    }

    /// `r_n^k`, rotation of the torus by `k / 2^n`.
    pub fn rotation(n: u32, k: i64) -> Self {
        let t = Tree::complete(n);
        let m = t.leaves();
        VElement {
            domain: t.clone(),
            range: t,
            perm: Permutation::cyclic(m, k),
        }
        .reduced()
    }

    fn reduced(mut self) -> Self {
        'outer: loop {
            let range_carets = self.range.carets();
            for k in self.domain.carets() {
                let j = self.perm.apply(k);
                if self.perm.apply(k + 1) == j + 1 && range_carets.contains(&j) {
                    let domain = self.domain.contract_caret(k).expect("caret exists");
                    let range = self.range.contract_caret(j).expect("caret exists");
                    let image = (0..self.perm.len())
                        .filter(|&a| a != k + 1)
                        .map(|a| {
                            let b = self.perm.apply(a);
                            if b > j {
                                b - 1
                            } else {
                                b
                            }
                        })
                        .collect();
                    self = VElement {
                        domain,
                        range,
                        perm: Permutation::new(image).expect("still a bijection"),
                    };
                    continue 'outer;
                }
            }
            return self;
        }
    }

    /// Same element written with range `p ∘ range`, unreduced.
    fn expand_range(&self, p: &Forest) -> (Tree, Tree, Permutation) {
        let range_offsets = p.offsets();
        let n = self.size();
        let domain_forest = Forest((0..n).map(|a| p.0[self.perm.apply(a)].clone()).collect());
        let mut image = Vec::with_capacity(p.leaves());
        for a in 0..n {
            let b = self.perm.apply(a);
            for r in 0..p.0[b].leaves() {
                image.push(range_offsets[b] + r);
            }
        }
        (
            crate::forest::compose_tree(&domain_forest, &self.domain).expect("arity"),
            crate::forest::compose_tree(p, &self.range).expect("arity"),
            Permutation::new(image).expect("bijection"),
        )
    }

    /// Same element written with domain `q ∘ domain`, unreduced.
    fn expand_domain(&self, q: &Forest) -> (Tree, Tree, Permutation) {
        let inv = self.inverse();
        let (r, d, p) = inv.expand_range(q);
        (d, r, p.inverse())
    }

    /// For a tree `t` refining the domain, the image tree `v(t)` and the map
    /// sending the position of each leaf of `t` to the position of its image.
    pub fn push_forward(&self, t: &Tree) -> Option<(Tree, Vec<usize>)> {
        let q = leq(&self.domain, t)?;
        let inv = self.perm.inverse();
        let image_forest = Forest((0..self.size()).map(|b| q.0[inv.apply(b)].clone()).collect());
        let out_offsets = image_forest.offsets();
        let mut map = Vec::with_capacity(t.leaves());
        for a in 0..self.size() {
            for r in 0..q.0[a].leaves() {
                map.push(out_offsets[self.perm.apply(a)] + r);
            }
        }
        let tree = crate::forest::compose_tree(&image_forest, &self.range).ok()?;
        Some((tree, map))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn multiply(&self, other: &VElement) -> VElement {
        let union = other.range.union(&self.domain);
        let p = leq(&other.range, &union).expect("subtree of union");
        let q = leq(&self.domain, &union).expect("subtree of union");
        let (d1, mid1, p1) = other.expand_range(&p);
        let (mid2, r2, p2) = self.expand_domain(&q);
        debug_assert_eq!(mid1, mid2);
        VElement {
            domain: d1,
            range: r2,
            perm: p2.after(&p1),
        }
        .reduced()
    }

    pub fn inverse(&self) -> VElement {
        VElement {
            domain: self.range.clone(),
            range: self.domain.clone(),
            perm: self.perm.inverse(),
        }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> VElement {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = VElement::identity();
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = base.multiply(&acc);
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base);
            }
        }
        acc
    }

    pub fn classify(&self) -> Classification {
        if self.is_identity() {
            Classification::Identity
        } else if self.perm.is_identity() {
            Classification::F
        } else if self.perm.cyclic_shift().is_some() {
            Classification::TOnly
        } else {
            Classification::VOnly
        }
    }

    /// Whether the element lies in `T` (cyclic leaf order preserved).
    pub fn in_t(&self) -> bool {
        self.perm.cyclic_shift().is_some()
    }

    pub fn as_pl_map(&self) -> PLMap {
        let dom = self.domain.leaf_intervals();
        let ran = self.range.leaf_intervals();
        PLMap {
            pieces: dom
                .into_iter()
                .enumerate()
                .map(|(k, interval)| {
                    let target = &ran[self.perm.apply(k)];
                    PLPiece {
                        slope_exponent: interval.level() as i32 - target.level() as i32,
                        image_left: target.left(),
                        domain: interval,
                    }
                })
                .collect(),
        }
    }

    /// Exact image of a dyadic point.
    pub fn act_dyadic(&self, d: &Dyadic) -> Dyadic {
        let k = leaf_containing(&self.domain, d);
        let source = &self.domain.leaf_intervals()[k];
        let target = &self.range.leaf_intervals()[self.perm.apply(k)];
        map_affine(source, target, d)
    }

    /// Images of `interval` under the affine pieces of the element, in order.
    pub fn act_interval(&self, interval: &SDInterval) -> Vec<SDInterval> {
        let dom = self.domain.leaf_intervals();
        let ran = self.range.leaf_intervals();
        let mut out = Vec::new();
        for (k, piece) in dom.iter().enumerate() {
            let target = &ran[self.perm.apply(k)];
            if piece.contains_interval(interval) {
                return vec![map_interval(piece, target, interval)];
            }
            if interval.contains_interval(piece) {
                out.push(target.clone());
            }
        }
        out
    }

    /// Whether the element restricted to `interval` is a single affine map.
    pub fn is_affine_on(&self, interval: &SDInterval) -> bool {
        self.domain
            .leaf_intervals()
            .iter()
            .any(|piece| piece.contains_interval(interval))
    }

    /// The rotation amount `c` (as a dyadic) if the element is `x ↦ x + c mod 1`.
    pub fn rotation_amount(&self) -> Option<Dyadic> {
        let map = self.as_pl_map();
        let first = map.pieces.first()?;
        let shift = first.image_left.sub_mod1(&first.domain.left());
        map.pieces
            .iter()
            .all(|p| p.slope_exponent == 0 && p.image_left.sub_mod1(&p.domain.left()) == shift)
            .then_some(shift)
    }
}

/// Image of `d ∈ source` under the increasing affine bijection `source → target`.
fn map_affine(source: &SDInterval, target: &SDInterval, d: &Dyadic) -> Dyadic {
    let level = d.level().max(source.level());
    let offset = d.numerator_at(level) - (source.index() << (level - source.level()));
    let out_level = level - source.level() + target.level();
    let numerator = (target.index() << (out_level - target.level())) + offset;
    Dyadic::normalize(numerator, out_level).expect("image stays inside target")
}

fn map_interval(source: &SDInterval, target: &SDInterval, sub: &SDInterval) -> SDInterval {
    let depth = sub.level() - source.level();
    let rel = sub.index() - (source.index() << depth);
    let index: BigUint = (target.index() << depth) + rel;
    SDInterval::new(index, target.level() + depth).expect("inside target")
}

impl fmt::Display for VElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{range: {}, domain: {}, perm: {}}}",
            self.range, self.domain, self.perm
        )
    }
}

impl FromStr for VElement {
    type Err = Error;

    /// `{range: <tree>, domain: <tree>, perm: [..]}`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("element must be wrapped in braces: `{s}`")))?;
        let mut range = None;
        let mut domain = None;
        let mut perm = None;
        for field in split_top_level(inner) {
            let (key, value) = field
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `key: value`, found `{field}`")))?;
            match key.trim() {
                "range" => range = Some(value.parse::<Tree>()?),
                "domain" => domain = Some(value.parse::<Tree>()?),
                "perm" => perm = Some(value.parse::<Permutation>()?),
                other => return Err(Error::Parse(format!("unknown field `{other}`"))),
            }
        }
        let range = range.ok_or_else(|| Error::Parse("missing `range`".into()))?;
        let domain = domain.ok_or_else(|| Error::Parse("missing `domain`".into()))?;
        let perm = perm.unwrap_or_else(|| Permutation::identity(domain.leaves()));
        VElement::new(domain, range, perm)
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !s[start..].trim().is_empty() {
        out.push(&s[start..]);
    }
    out
}

/// Parse a product expression such as `A^-1 * B * r3^2` or a braced
/// diagram. `g * h` applies `h` first. Atoms are `A`, `B`, `id`, `r<n>`,
/// `{range: .., domain: .., perm: ..}` and parenthesised expressions.
pub fn parse_expression(src: &str) -> Result<VElement> {
    let mut p = ExprParser { src, pos: 0 };
    let g = p.product()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(g)
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn product(&mut self) -> Result<VElement> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                let rhs = self.power()?;
                acc = acc.multiply(&rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<VElement> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let k: i64 = self.src[start..self.pos].parse().map_err(|_| {
            self.pos = start;
            self.error("expected an integer exponent")
        })?;
        Ok(base.pow(k))
    }

    fn atom(&mut self) -> Result<VElement> {
        self.skip_ws();
        match self.peek() {
            Some('A') => {
                self.pos += 1;
                Ok(VElement::generator_a())
            }
            Some('B') => {
                self.pos += 1;
                Ok(VElement::generator_b())
            }
            Some('r') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let n: u32 = self.src[start..self.pos]
                    .parse()
                    .map_err(|_| self.error("expected the rotation level after `r`"))?;
                if n > 30 {
                    return Err(self.error("rotation level too large"));
                }
                Ok(VElement::rotation(n, 1))
            }
            Some('i') if self.src[self.pos..].starts_with("id") => {
                self.pos += 2;
                Ok(VElement::identity())
            }
            Some('(') => {
                self.pos += 1;
                let g = self.product()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(g)
            }
            Some('{') => {
                let start = self.pos;
                let end = self.src[start..]
                    .find('}')
                    .ok_or_else(|| self.error("unclosed `{`"))?;
                self.pos = start + end + 1;
                self.src[start..self.pos].parse()
            }
            Some(c) => Err(self.error(&format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

pub fn multiply(g: &VElement, h: &VElement) -> VElement {
    g.multiply(h)
}

pub fn inverse(g: &VElement) -> VElement {
    g.inverse()
}

pub fn rotation(n: u32, k: i64) -> VElement {
    VElement::rotation(n, k)
}

/// Largest depth of a leaf in either tree; PL maps of two elements agree
/// everywhere iff they agree on dyadics of level `max_depth + 2`.
pub fn max_depth(g: &VElement) -> u32 {
    g.domain.depth().max(g.range.depth())
}

impl PLMap {
    /// Evaluate the PL map directly from its pieces.
    pub fn eval(&self, d: &Dyadic) -> Dyadic {
        let piece = self
            .pieces
            .iter()
            .find(|p| p.domain.contains(d))
            .expect("pieces tile [0,1)");
        let target_level = (piece.domain.level() as i32 - piece.slope_exponent) as u32;
        let target_index = piece.image_left.numerator_at(target_level.max(piece.image_left.level()))
            >> (target_level.max(piece.image_left.level()) - target_level);
        let target = SDInterval::new(target_index, target_level).expect("valid image");
        map_affine(&piece.domain, &target, d)
    }

    /// Total measure of the image pieces equals one.
    pub fn images_tile(&self) -> bool {
        let mut images: Vec<SDInterval> = self
            .pieces
            .iter()
            .map(|p| {
                let level = (p.domain.level() as i32 - p.slope_exponent) as u32;
                let idx = p.image_left.numerator_at(level.max(p.image_left.level()))
                    >> (level.max(p.image_left.level()) - level);
                SDInterval::new(idx, level).expect("valid image")
            })
            .collect();
        images.sort_by(|a, b| a.left().cmp(&b.left()));
        let mut cursor = Dyadic::zero();
        for (i, im) in images.iter().enumerate() {
            if im.left() != cursor {
                return false;
            }
            match im.right() {
                Some(r) => cursor = r,
                None => return i + 1 == images.len(),
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::enumerate_dyadics;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn tree(s: &str) -> Tree {
        s.parse().unwrap()
    }

    #[test]
    fn from_pair_identity_and_example() {
        let t = tree("((* *) *)");
        let id = VElement::from_pair(t.clone(), Permutation::identity(3), t.clone(), Permutation::identity(3)).unwrap();
        assert!(id.is_identity());

        let s = tree("(* (* *))");
        let g = VElement::from_pair(t, Permutation::identity(3), s, Permutation::identity(3)).unwrap();
        assert_eq!(g, VElement::generator_a());
        assert_eq!(g.act_dyadic(&d("0")), d("0"));
        assert_eq!(g.act_dyadic(&d("1/4")), d("1/8"));
        assert_eq!(g.act_dyadic(&d("1/2")), d("1/4"));
        assert_eq!(g.act_dyadic(&d("5/8")), d("3/8"));
        assert_eq!(g.act_dyadic(&d("3/4")), d("1/2"));
        assert_eq!(g.act_dyadic(&d("7/8")), d("3/4"));
    }

    #[test]
    fn unreduced_input_reduces() {
        // A with both trees expanded by an extra caret on the first leaf.
        let g = VElement::new(
            tree("((* *) (* *))"),
            tree("(((* *) *) *)"),
            Permutation::identity(4),
        )
        .unwrap();
        assert_eq!(g, VElement::generator_a());
        // Expand every leaf and check reduction back.
        let big = VElement::new(tree("((* *) ((* *) (* *)))"), tree("(((* *) (* *)) (* *))"), Permutation::identity(6)).unwrap();
        assert_eq!(big, VElement::generator_a());
        for x in enumerate_dyadics(6) {
            assert_eq!(big.act_dyadic(&x), VElement::generator_a().act_dyadic(&x));
        }
    }

    #[test]
    fn rotation_examples() {
        assert!(VElement::rotation(3, 0).is_identity());
        assert!(VElement::rotation(0, 5).is_identity());
        assert_eq!(VElement::rotation(2, 2), VElement::rotation(1, 1));
        assert_eq!(VElement::rotation(2, 1).act_dyadic(&d("3/4")), d("0"));
        assert_eq!(VElement::rotation(1, 1).act_dyadic(&d("1/4")), d("3/4"));
        let r1 = VElement::rotation(1, 1);
        assert!(r1.multiply(&r1).is_identity());
        assert_eq!(VElement::rotation(2, 1).inverse(), VElement::rotation(2, 3));
        assert_eq!(VElement::rotation(3, 1).rotation_amount(), Some(d("1/8")));
        assert_eq!(VElement::generator_a().rotation_amount(), None);
    }

    #[test]
    fn inverse_of_rotation_is_power() {
        for n in 1..=5u32 {
            let r = VElement::rotation(n, 1);
            assert_eq!(r.inverse(), r.pow((1i64 << n) - 1));
        }
    }

    #[test]
    fn classification() {
        assert_eq!(VElement::identity().classify(), Classification::Identity);
        assert_eq!(VElement::generator_a().classify(), Classification::F);
        for n in 1..5 {
            assert_eq!(VElement::rotation(n, 1).classify(), Classification::TOnly);
        }
        // Swap the two halves' sub-intervals in a non-cyclic pattern.
        let v = VElement::new(tree("((* *) *)"), tree("((* *) *)"), "[2,1,3]".parse().unwrap()).unwrap();
        assert_eq!(v.classify(), Classification::VOnly);
    }

    #[test]
    fn pl_map_examples() {
        let id = VElement::identity().as_pl_map();
        assert_eq!(id.pieces.len(), 1);
        assert_eq!(id.pieces[0].slope_exponent, 0);
        let r = VElement::rotation(3, 1).as_pl_map();
        assert_eq!(r.pieces.len(), 8);
        assert!(r.pieces.iter().all(|p| p.slope_exponent == 0));
        let a = VElement::generator_a().as_pl_map();
        let mut slopes: Vec<i32> = a.pieces.iter().map(|p| p.slope_exponent).collect();
        slopes.sort();
        assert_eq!(slopes, vec![-1, 0, 1]);
        assert!(a.images_tile());
        for x in enumerate_dyadics(5) {
            assert_eq!(a.eval(&x), VElement::generator_a().act_dyadic(&x));
        }
    }

    #[test]
    fn act_interval_examples() {
        let half = SDInterval::new(0u32, 1).unwrap();
        assert_eq!(VElement::identity().act_interval(&half), vec![half.clone()]);
        let a = VElement::generator_a();
        assert_eq!(a.act_interval(&half), vec![SDInterval::new(0u32, 2).unwrap()]);
        let shown: Vec<String> = a.inverse().act_interval(&half).iter().map(|i| i.to_string()).collect();
        assert_eq!(shown, ["(0,1/2)", "(1/2,3/4)"]);
    }

    #[test]
    fn text_round_trip() {
        let b = VElement::generator_b();
        let s = b.to_string();
        assert_eq!(s, "{range: (* ((* *) *)), domain: (* (* (* *))), perm: [1,2,3,4]}");
        assert_eq!(s.parse::<VElement>().unwrap(), b);
        assert!("{range: (* *)}".parse::<VElement>().is_err());
    }

    #[test]
    fn expressions() {
        assert!(parse_expression("A * A^-1").unwrap().is_identity());
        assert_eq!(parse_expression("r2^2").unwrap(), VElement::rotation(1, 1));
        assert_eq!(parse_expression("(A*B)^-1").unwrap(), VElement::generator_b().inverse().multiply(&VElement::generator_a().inverse()));
        assert_eq!(parse_expression(&VElement::generator_b().to_string()).unwrap(), VElement::generator_b());
        let err = parse_expression("A * Q").unwrap_err().to_string();
        assert!(err.contains("position 4"), "{err}");
    }

    #[test]
    fn product_matches_composition() {
        let a = VElement::generator_a();
        let b = VElement::generator_b();
        let ab = a.multiply(&b);
        for x in enumerate_dyadics(6) {
            assert_eq!(ab.act_dyadic(&x), a.act_dyadic(&b.act_dyadic(&x)));
        }
        assert!(a.multiply(&a.inverse()).is_identity());
    }
}
