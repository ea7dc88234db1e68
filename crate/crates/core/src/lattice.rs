//! Finite-level gauge theory with structure group `Z/kZ`.
//!
//! Configurations assign a group element to every leaf interval of a tree,
//! gauge fields assign one to every breakpoint. Crossed-product elements are
//! finite sums `Σ a_g λ_g` with dense coefficient arrays over `G^n`, indexed
//! little-endian (coordinate 0 varies fastest).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::GaussianRational;
use crate::dyadic::{Dyadic, DyadicArc, SDInterval};
use crate::error::{Error, Result};
use crate::forest::{compose_tree, leaf_breakpoints, leq, prune, Forest, Tree};
use crate::thompson::VElement;

/// Leaf cap for dense coefficient arrays.
pub const DEFAULT_MAX_LEAVES: usize = 10;
/// Hard cap on `k^n`.
pub const MAX_COEFFICIENTS: usize = 1 << 22;

/// The cyclic group `Z/kZ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GroupSpec {
    k: u32,
}

impl GroupSpec {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("modulus must be at least 1".into()));
        }
        Ok(GroupSpec { k })
    }

    pub fn modulus(&self) -> u32 {
        self.k
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.k as u64) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.k as u64 - (b % self.k) as u64) % self.k as u64) as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    pub fn reduce(&self, a: i64) -> u32 {
        a.rem_euclid(self.k as i64) as u32
    }

    fn check(&self, values: &[u32]) -> Result<()> {
        match values.iter().find(|&&v| v >= self.k) {
            Some(v) => Err(Error::OutOfRange(format!("{v} is not a residue mod {}", self.k))),
            None => Ok(()),
        }
    }

    /// Number of points of `G^n`, bounded by the dense-array caps.
    pub fn points(&self, n: usize) -> Result<usize> {
        if n > DEFAULT_MAX_LEAVES {
            return Err(Error::TooLarge(format!("{n} leaves exceeds the cap of {DEFAULT_MAX_LEAVES}")));
        }
        let mut total: usize = 1;
        for _ in 0..n {
            total = total
                .checked_mul(self.k as usize)
                .filter(|&t| t <= MAX_COEFFICIENTS)
                .ok_or_else(|| Error::TooLarge(format!("{}^{n} coefficients", self.k)))?;
        }
        Ok(total)
    }

    pub fn decode(&self, mut index: usize, n: usize) -> Vec<u32> {
        let k = self.k as usize;
        (0..n)
            .map(|_| {
                let d = index % k;
                index /= k;
                d as u32
            })
            .collect()
    }

    pub fn encode(&self, point: &[u32]) -> usize {
        point.iter().rev().fold(0, |acc, &d| acc * self.k as usize + d as usize)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zmod:{}", self.k)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let k = s
            .trim()
            .strip_prefix("zmod:")
            .ok_or_else(|| Error::Parse(format!("expected `zmod:<k>`, found `{s}`")))?
            .parse::<u32>()
            .map_err(|e| Error::Parse(format!("bad modulus in `{s}`: {e}")))?;
        GroupSpec::new(k)
    }
}

/// A group element on each leaf interval of a tree.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "LeafValues", into = "LeafValues")]
pub struct Config {
    group: GroupSpec,
    tree: Arc<Tree>,
    values: Vec<u32>,
}

/// A group element on each breakpoint of a tree; the value at `1` is the one at `0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "LeafValues", into = "LeafValues")]
pub struct GaugeField {
    group: GroupSpec,
    tree: Arc<Tree>,
    values: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct LeafValues {
    group: GroupSpec,
    tree: Tree,
    values: Vec<u32>,
}

macro_rules! leaf_valued {
    ($t:ident) => {
        impl $t {
            pub fn new(group: GroupSpec, tree: Tree, values: Vec<u32>) -> Result<Self> {
                if values.len() != tree.leaves() {
                    return Err(Error::Arity {
                        expected: tree.leaves(),
                        found: values.len(),
                    });
                }
                group.check(&values)?;
                Ok($t {
                    group,
                    tree: Arc::new(tree),
                    values,
                })
            }

            pub fn identity(group: GroupSpec, tree: Tree) -> Self {
                let n = tree.leaves();
                $t {
                    group,
                    tree: Arc::new(tree),
                    values: vec![0; n],
                }
            }

            pub fn group(&self) -> GroupSpec {
                self.group
            }

            pub fn tree(&self) -> &Tree {
                &self.tree
            }

            pub fn values(&self) -> &[u32] {
                &self.values
            }

            pub fn breakpoints(&self) -> Vec<Dyadic> {
                leaf_breakpoints(&self.tree)
            }
        }

        impl TryFrom<LeafValues> for $t {
            type Error = Error;
            fn try_from(r: LeafValues) -> Result<Self> {
                $t::new(r.group, r.tree, r.values)
            }
        }

        impl From<$t> for LeafValues {
            fn from(c: $t) -> LeafValues {
                LeafValues {
                    group: c.group,
                    tree: Arc::unwrap_or_clone(c.tree),
                    values: c.values,
                }
            }
        }
    };
}

leaf_valued!(Config);
leaf_valued!(GaugeField);

impl Config {
    pub fn intervals(&self) -> Vec<SDInterval> {
        self.tree.leaf_intervals()
    }
}

impl GaugeField {
    /// Value at a breakpoint, with `1` read as `0`.
    pub fn at(&self, d: Option<&Dyadic>) -> Option<u32> {
        let d = d.cloned().unwrap_or_else(Dyadic::zero);
        let bps = self.breakpoints();
        bps.binary_search(&d).ok().map(|i| self.values[i])
    }

    /// `s ∘ v⁻¹` on the breakpoints of `target`. Fails unless `v⁻¹` sends
    /// each breakpoint of `target` to a breakpoint of `s`.
    pub fn transport(&self, v: &VElement, target: &Tree) -> Result<GaugeField> {
        let vinv = v.inverse();
        let values = leaf_breakpoints(target)
            .iter()
            .map(|d| {
                let pre = vinv.act_dyadic(d);
                self.at(Some(&pre)).ok_or_else(|| {
                    Error::Shape(format!("preimage {pre} of {d} is not a breakpoint of the gauge field"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GaugeField::new(self.group, target.clone(), values)
    }

    /// Restriction to the breakpoints of a coarser tree.
    pub fn restrict(&self, coarse: &Tree) -> Result<GaugeField> {
        let values = leaf_breakpoints(coarse)
            .iter()
            .map(|d| {
                self.at(Some(d))
                    .ok_or_else(|| Error::Shape(format!("{d} is not a breakpoint of the gauge field")))
            })
            .collect::<Result<Vec<_>>>()?;
        GaugeField::new(self.group, coarse.clone(), values)
    }
}

/// Coarsen `x` along `f`, where `x.tree = f ∘ coarse`.
pub fn coarsen(x: &Config, f: &Forest) -> Result<Config> {
    let coarse = prune(&x.tree, f)?;
    let mut values = Vec::with_capacity(f.roots());
    let mut pos = 0;
    for t in f.trees() {
        let block = &x.values[pos..pos + t.leaves()];
        values.push(block.iter().fold(0, |acc, &v| x.group.add(acc, v)));
        pos += t.leaves();
    }
    Config::new(x.group, coarse, values)
}

/// Coarsen `x` onto a tree it refines.
pub fn coarsen_to(x: &Config, coarse: &Tree) -> Result<Config> {
    let f = leq(coarse, &x.tree)
        .ok_or_else(|| Error::Shape(format!("{} does not refine {coarse}", x.tree)))?;
    coarsen(x, &f)
}

/// Precomputed Jones action of `v` on configurations over a fixed tree.
///
/// The output lives on the largest tree, grown from the root, whose every
/// node `J` has `v⁻¹J` equal to a union of leaves of the input tree. Its value
/// on `J` is the sum of the input values over those leaves.
#[derive(Clone, Debug)]
pub struct JonesPlan {
    input: Tree,
    output: Arc<Tree>,
    sources: Vec<Vec<usize>>,
}

impl JonesPlan {
    pub fn new(v: &VElement, input: &Tree) -> Self {
        let vinv = v.inverse();
        let bps = leaf_breakpoints(input);
        let n = input.leaves();
        let determinable = |j: &SDInterval| -> Option<Vec<usize>> {
            let mut pieces = vinv.act_interval(j);
            pieces.sort_by_key(|p| p.left());
            let mut out = Vec::new();
            let mut i = 0;
            while i < pieces.len() {
                let start = pieces[i].left();
                let mut end = pieces[i].right();
                while i + 1 < pieces.len() && end.as_ref() == Some(&pieces[i + 1].left()) {
                    i += 1;
                    end = pieces[i].right();
                }
                let lo = bps.binary_search(&start).ok()?;
                let hi = match end {
                    None => n,
                    Some(e) => bps.binary_search(&e).ok()?,
                };
                out.extend(lo..hi);
                i += 1;
            }
            Some(out)
        };
        fn grow(
            j: SDInterval,
            src: Vec<usize>,
            det: &dyn Fn(&SDInterval) -> Option<Vec<usize>>,
            sources: &mut Vec<Vec<usize>>,
        ) -> Tree {
            let (l, r) = j.halves();
            if let (Some(sl), Some(sr)) = (det(&l), det(&r)) {
                let lt = grow(l, sl, det, sources);
                let rt = grow(r, sr, det, sources);
                Tree::node(lt, rt)
            } else {
                sources.push(src);
                Tree::Leaf
            }
        }
        let mut sources = Vec::new();
        let output = grow(SDInterval::unit(), (0..n).collect(), &determinable, &mut sources);
        JonesPlan {
            input: input.clone(),
            output: Arc::new(output),
            sources,
        }
    }

    pub fn output_tree(&self) -> &Tree {
        &self.output
    }

    pub fn apply(&self, x: &Config) -> Result<Config> {
        if *x.tree != self.input {
            return Err(Error::Shape(format!("plan built for {}, config on {}", self.input, x.tree)));
        }
        Ok(Config {
            group: x.group,
            tree: self.output.clone(),
            values: self
                .sources
                .iter()
                .map(|s| s.iter().fold(0, |acc, &i| x.group.add(acc, x.values[i])))
                .collect(),
        })
    }
}

/// `α(v)x`, with value `x(v⁻¹J)` on every interval `J` of the output tree.
pub fn jones_act_config(v: &VElement, x: &Config) -> Config {
    JonesPlan::new(v, &x.tree).apply(x).expect("plan matches its own tree")
}

/// `x_i ↦ s(d_i) + x_i − s(d_{i+1})`, with `s(1) = s(0)`.
pub fn gauge_act_config(s: &GaugeField, x: &Config) -> Result<Config> {
    if s.tree != x.tree || s.group != x.group {
        return Err(Error::Shape(format!("gauge field on {} but config on {}", s.tree, x.tree)));
    }
    let g = x.group;
    let n = x.values.len();
    let values = (0..n)
        .map(|i| g.sub(g.add(s.values[i], x.values[i]), s.values[(i + 1) % n]))
        .collect();
    Ok(Config {
        group: g,
        tree: x.tree.clone(),
        values,
    })
}

/// Suffix sums toward `1`: `H(x)(d_j) = x_j + … + x_{n-1}`.
pub fn holonomy(x: &Config) -> BTreeMap<Dyadic, u32> {
    let g = x.group;
    let mut acc = 0;
    let mut sums = vec![0; x.values.len()];
    for i in (0..x.values.len()).rev() {
        acc = g.add(acc, x.values[i]);
        sums[i] = acc;
    }
    x.breakpoints().into_iter().zip(sums).collect()
}

/// Inverse of [`holonomy`]: `x(d, d') = h(d) − h(d')`, or `h(d)` when `d' = 1`.
pub fn holonomy_inverse(group: GroupSpec, h: &BTreeMap<Dyadic, u32>) -> Result<Config> {
    let bps: Vec<Dyadic> = h.keys().cloned().collect();
    let tree = crate::forest::partition_to_tree(&crate::dyadic::SDPartition::new(bps)?)?;
    let vals: Vec<u32> = h.values().cloned().collect();
    group.check(&vals)?;
    let n = vals.len();
    let values = (0..n)
        .map(|i| if i + 1 < n { group.sub(vals[i], vals[i + 1]) } else { vals[i] })
        .collect();
    Config::new(group, tree, values)
}

/// A finite sum `Σ a_g λ_g` over the configurations of one tree.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct CrossedElement {
    group: GroupSpec,
    tree: Tree,
    terms: BTreeMap<Vec<u32>, Vec<GaussianRational>>,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    group: GroupSpec,
    tree: Tree,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    label: Vec<u32>,
    /// `[re, im]` pairs of rational strings.
    coeffs: Vec<[String; 2]>,
}

impl TryFrom<ElementRepr> for CrossedElement {
    type Error = Error;
    fn try_from(r: ElementRepr) -> Result<Self> {
        let parse = |s: &str| {
            s.parse::<BigRational>()
                .map_err(|e| Error::Parse(format!("bad rational `{s}`: {e}")))
        };
        let terms = r
            .terms
            .into_iter()
            .map(|t| {
                let coeffs = t
                    .coeffs
                    .iter()
                    .map(|[re, im]| Ok(Complex::new(parse(re)?, parse(im)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((t.label, coeffs))
            })
            .collect::<Result<Vec<_>>>()?;
        CrossedElement::from_terms(r.group, r.tree, terms)
    }
}

impl From<CrossedElement> for ElementRepr {
    fn from(x: CrossedElement) -> Self {
        ElementRepr {
            group: x.group,
            tree: x.tree,
            terms: x
                .terms
                .into_iter()
                .map(|(label, coeffs)| TermRepr {
                    label,
                    coeffs: coeffs.iter().map(|c| [c.re.to_string(), c.im.to_string()]).collect(),
                })
                .collect(),
        }
    }
}

fn gaussian(n: i64) -> GaussianRational {
    Complex::new(BigRational::from_integer(n.into()), BigRational::zero())
}

impl CrossedElement {
    pub fn zero(group: GroupSpec, tree: Tree) -> Result<Self> {
        group.points(tree.leaves())?;
        Ok(CrossedElement {
            group,
            tree,
            terms: BTreeMap::new(),
        })
    }

    pub fn one(group: GroupSpec, tree: Tree) -> Result<Self> {
        let n = tree.leaves();
        Self::lambda(group, tree, vec![0; n])
    }

    /// The translation `λ_g`.
    pub fn lambda(group: GroupSpec, tree: Tree, label: Vec<u32>) -> Result<Self> {
        let size = group.points(tree.leaves())?;
        Self::from_terms(group, tree, vec![(label, vec![gaussian(1); size])])
    }

    /// The multiplication operator by `a`.
    pub fn function(group: GroupSpec, tree: Tree, coeffs: Vec<GaussianRational>) -> Result<Self> {
        let n = tree.leaves();
        Self::from_terms(group, tree, vec![(vec![0; n], coeffs)])
    }

    pub fn from_terms(
        group: GroupSpec,
        tree: Tree,
        terms: Vec<(Vec<u32>, Vec<GaussianRational>)>,
    ) -> Result<Self> {
        let n = tree.leaves();
        let size = group.points(n)?;
        let mut out = CrossedElement {
            group,
            tree,
            terms: BTreeMap::new(),
        };
        for (label, coeffs) in terms {
            if label.len() != n {
                return Err(Error::Arity {
                    expected: n,
                    found: label.len(),
                });
            }
            if coeffs.len() != size {
                return Err(Error::Arity {
                    expected: size,
                    found: coeffs.len(),
                });
            }
            group.check(&label)?;
            out.accumulate(label, coeffs);
        }
        Ok(out)
    }

    fn accumulate(&mut self, label: Vec<u32>, coeffs: Vec<GaussianRational>) {
        match self.terms.get_mut(&label) {
            Some(existing) => {
                for (a, b) in existing.iter_mut().zip(coeffs) {
                    *a += b;
                }
                if existing.iter().all(Zero::is_zero) {
                    self.terms.remove(&label);
                }
            }
            None => {
                if !coeffs.iter().all(Zero::is_zero) {
                    self.terms.insert(label, coeffs);
                }
            }
        }
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn leaves(&self) -> usize {
        self.tree.leaves()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Vec<GaussianRational>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_shape(&self, other: &CrossedElement) -> Result<()> {
        if self.tree != other.tree || self.group != other.group {
            return Err(Error::Shape(format!(
                "elements on {} over {} and {} over {}",
                self.tree, self.group, other.tree, other.group
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &CrossedElement) -> Result<CrossedElement> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (g, a) in &other.terms {
            out.accumulate(g.clone(), a.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> CrossedElement {
        let mut out = CrossedElement {
            group: self.group,
            tree: self.tree.clone(),
            terms: BTreeMap::new(),
        };
        for (g, a) in &self.terms {
            out.accumulate(g.clone(), a.iter().map(|z| z * c).collect());
        }
        out
    }

    pub fn sub(&self, other: &CrossedElement) -> Result<CrossedElement> {
        self.add(&other.scale(&gaussian(-1)))
    }

    /// Index of `y − g` given the index of `y`.
    fn shift_index(&self, index: usize, g: &[u32]) -> usize {
        let y = self.group.decode(index, g.len());
        let shifted: Vec<u32> = y.iter().zip(g).map(|(&a, &b)| self.group.sub(a, b)).collect();
        self.group.encode(&shifted)
    }

    /// Coefficient array whose entry at `y` is `a(map(y))`.
    fn pull_back(&self, a: &[GaussianRational], n_out: usize, map: impl Fn(&[u32]) -> Vec<u32>) -> Vec<GaussianRational> {
        let total = self.group.points(n_out).expect("size checked by caller");
        (0..total)
            .map(|i| {
                let y = self.group.decode(i, n_out);
                a[self.group.encode(&map(&y))].clone()
            })
            .collect()
    }

    /// Agreement as elements of the inductive limit: both sides refined to a
    /// common tree.
    pub fn equivalent(&self, other: &CrossedElement) -> Result<bool> {
        let u = self.tree.union(&other.tree);
        Ok(refine_to(self, &u)? == refine_to(other, &u)?)
    }

    /// Leaf intervals whose coordinate some coefficient depends on, and
    /// breakpoints carrying a nonzero label.
    pub fn support(&self) -> (Vec<SDInterval>, Vec<Dyadic>) {
        let n = self.leaves();
        let intervals = self.tree.leaf_intervals();
        let bps = leaf_breakpoints(&self.tree);
        let mut coord = vec![false; n];
        let mut labels = vec![false; n];
        for (g, a) in &self.terms {
            for j in 0..n {
                labels[j] |= g[j] != 0;
                if coord[j] {
                    continue;
                }
                coord[j] = (0..a.len()).any(|i| {
                    let mut y = self.group.decode(i, n);
                    y[j] = 0;
                    a[i] != a[self.group.encode(&y)]
                });
            }
        }
        (
            (0..n).filter(|&j| coord[j]).map(|j| intervals[j].clone()).collect(),
            (0..n).filter(|&j| labels[j]).map(|j| bps[j].clone()).collect(),
        )
    }

    /// Whether the support lies in the arc `o`.
    pub fn supported_in(&self, o: &DyadicArc) -> bool {
        let (intervals, points) = self.support();
        intervals.iter().all(|i| o.contains_interval(i)) && points.iter().all(|d| o.contains_point(d))
    }
}

/// `(a λ_g)(b λ_h) = a · b(· − g) λ_{g+h}`.
pub fn multiply_elements(x: &CrossedElement, y: &CrossedElement) -> Result<CrossedElement> {
    x.same_shape(y)?;
    let grp = x.group;
    let mut out = CrossedElement::zero(grp, x.tree.clone())?;
    for (g, a) in &x.terms {
        for (h, b) in &y.terms {
            let coeffs: Vec<GaussianRational> = a
                .iter()
                .enumerate()
                .map(|(i, ai)| {
                    if ai.is_zero() {
                        ai.clone()
                    } else {
                        ai * &b[x.shift_index(i, g)]
                    }
                })
                .collect();
            let label = g.iter().zip(h).map(|(&p, &q)| grp.add(p, q)).collect();
            out.accumulate(label, coeffs);
        }
    }
    Ok(out)
}

/// `(a λ_g)* = ā(· + g) λ_{−g}`.
pub fn adjoint(x: &CrossedElement) -> CrossedElement {
    let grp = x.group;
    let mut out = CrossedElement::zero(grp, x.tree.clone()).expect("shape already valid");
    for (g, a) in &x.terms {
        let neg: Vec<u32> = g.iter().map(|&p| grp.neg(p)).collect();
        let coeffs = (0..a.len()).map(|i| a[x.shift_index(i, &neg)].conj()).collect();
        out.accumulate(neg, coeffs);
    }
    out
}

/// Image under the embedding along `f`: coefficients composed with the
/// coarsening map, labels extended by `0` on the new coordinates.
pub fn embed_element(x: &CrossedElement, f: &Forest) -> Result<CrossedElement> {
    if f.roots() != x.leaves() {
        return Err(Error::Shape(format!(
            "forest has {} roots but the element has {} leaves",
            f.roots(),
            x.leaves()
        )));
    }
    let tree = compose_tree(f, &x.tree)?;
    let n_out = tree.leaves();
    x.group.points(n_out)?;
    let grp = x.group;
    let offsets = f.offsets();
    let sizes: Vec<usize> = f.trees().iter().map(Tree::leaves).collect();
    let coarse = |y: &[u32]| -> Vec<u32> {
        offsets
            .iter()
            .zip(&sizes)
            .map(|(&o, &s)| y[o..o + s].iter().fold(0, |acc, &v| grp.add(acc, v)))
            .collect()
    };
    let mut out = CrossedElement::zero(grp, tree)?;
    for (g, a) in &x.terms {
        let mut label = vec![0; n_out];
        for (j, &o) in offsets.iter().enumerate() {
            label[o] = g[j];
        }
        out.accumulate(label, x.pull_back(a, n_out, coarse));
    }
    Ok(out)
}

/// Embed `x` into a tree refining its own.
pub fn refine_to(x: &CrossedElement, t: &Tree) -> Result<CrossedElement> {
    let f = leq(&x.tree, t).ok_or_else(|| Error::Shape(format!("{t} does not refine {}", x.tree)))?;
    embed_element(x, &f)
}

/// `Σ a_g(Z(s)⁻¹ ·) λ_g`, where `Z(s)⁻¹y_j = y_j − s(d_j) + s(d_{j+1})`.
pub fn gauge_act_element(s: &GaugeField, x: &CrossedElement) -> Result<CrossedElement> {
    if *s.tree != x.tree || s.group != x.group {
        return Err(Error::Shape(format!("gauge field on {} but element on {}", s.tree, x.tree)));
    }
    let grp = x.group;
    let n = x.leaves();
    let inv = |y: &[u32]| -> Vec<u32> {
        (0..n)
            .map(|j| grp.add(grp.sub(y[j], s.values[j]), s.values[(j + 1) % n]))
            .collect()
    };
    let mut out = CrossedElement::zero(grp, x.tree.clone())?;
    for (g, a) in &x.terms {
        out.accumulate(g.clone(), x.pull_back(a, n, inv));
    }
    Ok(out)
}

/// `α(v)(a λ_g) = a(v⁻¹ ·) λ_{vg}`, computed after refining `x` to the union
/// of its tree and the domain of `v`.
pub fn jones_act_element(v: &VElement, x: &CrossedElement) -> Result<CrossedElement> {
    let u = x.tree.union(v.domain());
    let refined = refine_to(x, &u)?;
    let (tree, map) = v.push_forward(&u).expect("union refines the domain");
    let n = map.len();
    let grp = x.group;
    let mut out = CrossedElement::zero(grp, tree)?;
    for (g, a) in &refined.terms {
        let mut label = vec![0; n];
        for (i, &m) in map.iter().enumerate() {
            label[m] = g[i];
        }
        let coeffs = refined.pull_back(a, n, |y| map.iter().map(|&m| y[m]).collect());
        out.accumulate(label, coeffs);
    }
    Ok(out)
}
