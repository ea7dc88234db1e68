//! Binary trees and forests as morphisms of the forest category, plus
//! symmetric forests (a forest followed by a permutation of its leaves).
//!
//! Leaves and roots are counted left to right. Permutations are stored
//! zero-based and printed one-based.

use std::fmt;
use std::str::FromStr;

use crate::dyadic::{Dyadic, SDInterval, SDPartition};
use crate::error::{Error, Result};

/// A finite rooted binary tree: every vertex has zero or two children.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    /// The tree with one caret, `Y`.
    pub fn caret() -> Tree {
        Tree::node(Tree::Leaf, Tree::Leaf)
    }

    pub fn node(left: Tree, right: Tree) -> Tree {
        Tree::Node(Box::new(left), Box::new(right))
    }

    /// The complete tree with `2^depth` leaves all at distance `depth` from the root.
    pub fn complete(depth: u32) -> Tree {
        if depth == 0 {
            Tree::Leaf
        } else {
            let sub = Tree::complete(depth - 1);
            Tree::node(sub.clone(), sub)
        }
    }

    /// Left comb with `leaves` leaves.
    pub fn left_comb(leaves: usize) -> Tree {
        assert!(leaves >= 1);
        (1..leaves).fold(Tree::Leaf, |t, _| Tree::node(t, Tree::Leaf))
    }

    /// Right comb with `leaves` leaves.
    pub fn right_comb(leaves: usize) -> Tree {
        assert!(leaves >= 1);
        (1..leaves).fold(Tree::Leaf, |t, _| Tree::node(Tree::Leaf, t))
    }

    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn depth(&self) -> u32 {
        match self {
            Tree::Leaf => 0,
            Tree::Node(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    /// The s.d.i. of every leaf, left to right.
    pub fn leaf_intervals(&self) -> Vec<SDInterval> {
        let mut out = Vec::with_capacity(self.leaves());
        self.collect_intervals(SDInterval::unit(), &mut out);
        out
    }

    fn collect_intervals(&self, at: SDInterval, out: &mut Vec<SDInterval>) {
        match self {
            Tree::Leaf => out.push(at),
            Tree::Node(l, r) => {
                let (a, b) = at.halves();
                l.collect_intervals(a, out);
                r.collect_intervals(b, out);
            }
        }
    }

    /// Leaf depths left to right; leaf `i` has length `2^-depth[i]`.
    pub fn leaf_depths(&self) -> Vec<u32> {
        fn go(t: &Tree, d: u32, out: &mut Vec<u32>) {
            match t {
                Tree::Leaf => out.push(d),
                Tree::Node(l, r) => {
                    go(l, d + 1, out);
                    go(r, d + 1, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, 0, &mut out);
        out
    }

    /// Positions `k` (zero-based) such that leaves `k` and `k+1` hang from a common caret.
    pub fn carets(&self) -> Vec<usize> {
        fn go(t: &Tree, offset: usize, out: &mut Vec<usize>) -> usize {
            match t {
                Tree::Leaf => 1,
                Tree::Node(l, r) => {
                    if l.is_leaf() && r.is_leaf() {
                        out.push(offset);
                        return 2;
                    }
                    let nl = go(l, offset, out);
                    nl + go(r, offset + nl, out)
                }
            }
        }
        let mut out = Vec::new();
        go(self, 0, &mut out);
        out
    }

    /// Replace the caret whose leaves are `k, k+1` by a single leaf.
    pub fn contract_caret(&self, k: usize) -> Option<Tree> {
        fn go(t: &Tree, k: usize, offset: usize) -> Option<Tree> {
            match t {
                Tree::Leaf => None,
                Tree::Node(l, r) => {
                    if l.is_leaf() && r.is_leaf() {
                        return (offset == k).then_some(Tree::Leaf);
                    }
                    let nl = l.leaves();
                    if k < offset + nl {
                        Some(Tree::node(go(l, k, offset)?, (**r).clone()))
                    } else {
                        Some(Tree::node((**l).clone(), go(r, k, offset + nl)?))
                    }
                }
            }
        }
        go(self, k, 0)
    }

    /// Union of two trees seen as rooted subtrees of the infinite binary tree.
    pub fn union(&self, other: &Tree) -> Tree {
        match (self, other) {
            (Tree::Leaf, t) | (t, Tree::Leaf) => t.clone(),
            (Tree::Node(a, b), Tree::Node(c, d)) => Tree::node(a.union(c), b.union(d)),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => write!(f, "*"),
            Tree::Node(l, r) => write!(f, "({l} {r})"),
        }
    }
}

impl FromStr for Tree {
    type Err = Error;

    /// Grammar `T ::= "*" | "(" T T ")"`, whitespace ignored.
    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_tree(&tokens, &mut pos, s)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!(
                "trailing input in tree at position {}",
                tokens[pos].0
            )));
        }
        Ok(tree)
    }
}

fn parse_tree(tokens: &[(usize, char)], pos: &mut usize, src: &str) -> Result<Tree> {
    let Some(&(at, c)) = tokens.get(*pos) else {
        return Err(Error::Parse(format!(
            "unexpected end of tree `{src}` at position {}",
            src.len()
        )));
    };
    *pos += 1;
    match c {
        '*' => Ok(Tree::Leaf),
        '(' => {
            let l = parse_tree(tokens, pos, src)?;
            let r = parse_tree(tokens, pos, src)?;
            match tokens.get(*pos) {
                Some((_, ')')) => {
                    *pos += 1;
                    Ok(Tree::node(l, r))
                }
                Some(&(p, c)) => Err(Error::Parse(format!(
                    "expected `)` at position {p}, found `{c}`"
                ))),
                None => Err(Error::Parse(format!(
                    "expected `)` at position {}",
                    src.len()
                ))),
            }
        }
        other => Err(Error::Parse(format!(
            "unexpected `{other}` at position {at} in tree"
        ))),
    }
}

/// An ordered sequence of trees: a morphism from `roots()` to `leaves()`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Forest(pub Vec<Tree>);

impl Forest {
    /// `I^{⊗n}`.
    pub fn identity(n: usize) -> Forest {
        Forest(vec![Tree::Leaf; n])
    }

    pub fn single(t: Tree) -> Forest {
        Forest(vec![t])
    }

    pub fn trees(&self) -> &[Tree] {
        &self.0
    }

    pub fn roots(&self) -> usize {
        self.0.len()
    }

    pub fn leaves(&self) -> usize {
        self.0.iter().map(Tree::leaves).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(Tree::is_leaf)
    }

    /// Leaf offset of each tree.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.0
            .iter()
            .map(|t| {
                let o = acc;
                acc += t.leaves();
                o
            })
            .collect()
    }

    /// Horizontal concatenation.
    pub fn tensor(&self, other: &Forest) -> Forest {
        let mut trees = self.0.clone();
        trees.extend(other.0.iter().cloned());
        Forest(trees)
    }

    /// `f_{j,n}`: `n` roots, the `j`-th (one-based) tree a single caret.
    pub fn elementary(j: usize, n: usize) -> Result<Forest> {
        if j == 0 || j > n {
            return Err(Error::OutOfRange(format!("f_{{{j},{n}}} needs 1 <= j <= n")));
        }
        let mut trees = vec![Tree::Leaf; n];
        trees[j - 1] = Tree::caret();
        Ok(Forest(trees))
    }

    /// Graft `top`'s trees onto this forest's leaves, left to right.
    fn graft_onto(&self, top: &[Tree]) -> Forest {
        let mut rest = top.iter();
        Forest(
            self.0
                .iter()
                .map(|t| graft(t, &mut rest))
                .collect(),
        )
    }

    /// Write this forest as `f_{j_k,n_k} ∘ ... ∘ f_{j_1,n_1}`; returns the
    /// one-based pairs `(j_1,n_1), ..., (j_k,n_k)` in order of application.
    pub fn factorize(&self) -> Vec<(usize, usize)> {
        let mut current: Vec<Tree> = self.0.clone();
        let mut steps = Vec::new();
        while let Some(j) = current.iter().position(|t| !t.is_leaf()) {
            steps.push((j + 1, current.len()));
            let Tree::Node(l, r) = current.remove(j) else {
                unreachable!()
            };
            current.insert(j, *r);
            current.insert(j, *l);
        }
        steps
    }
}

fn graft<'a>(t: &Tree, rest: &mut impl Iterator<Item = &'a Tree>) -> Tree {
    match t {
        Tree::Leaf => rest.next().expect("arity checked").clone(),
        Tree::Node(l, r) => {
            let l = graft(l, rest);
            let r = graft(r, rest);
            Tree::node(l, r)
        }
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Forest {
    type Err = Error;

    /// Comma-separated trees.
    fn from_str(s: &str) -> Result<Self> {
        let mut trees = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    trees.push(s[start..i].parse()?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        trees.push(s[start..].parse()?);
        Ok(Forest(trees))
    }
}

/// `g ∘ f`: `g` stacked on top of `f`, grafting tree `i` of `g` onto leaf `i` of `f`.
pub fn compose(g: &Forest, f: &Forest) -> Result<Forest> {
    if g.roots() != f.leaves() {
        return Err(Error::Arity {
            expected: f.leaves(),
            found: g.roots(),
        });
    }
    Ok(f.graft_onto(&g.0))
}

/// Compose a forest on top of a single tree.
pub fn compose_tree(g: &Forest, t: &Tree) -> Result<Tree> {
    let mut out = compose(g, &Forest::single(t.clone()))?;
    Ok(out.0.pop().expect("one root"))
}

pub fn tensor(f: &Forest, g: &Forest) -> Forest {
    f.tensor(g)
}

pub fn elementary(j: usize, n: usize) -> Result<Forest> {
    Forest::elementary(j, n)
}

pub fn tree_to_partition(t: &Tree) -> SDPartition {
    SDPartition::new(t.leaf_intervals().iter().map(SDInterval::left).collect())
        .expect("leaves of a tree form a standard dyadic partition")
}

pub fn partition_to_tree(p: &SDPartition) -> Result<Tree> {
    let intervals = p.intervals();
    let mut pos = 0;
    let tree = build_from_intervals(&intervals, &mut pos, &SDInterval::unit())?;
    if pos != intervals.len() {
        return Err(Error::InvalidPartition(format!("{p} is not a standard dyadic partition")));
    }
    Ok(tree)
}

fn build_from_intervals(intervals: &[SDInterval], pos: &mut usize, at: &SDInterval) -> Result<Tree> {
    let Some(next) = intervals.get(*pos) else {
        return Err(Error::InvalidPartition("partition ends early".into()));
    };
    if next == at {
        *pos += 1;
        return Ok(Tree::Leaf);
    }
    if !at.contains_interval(next) {
        return Err(Error::InvalidPartition(format!("{next} does not refine {at}")));
    }
    let (a, b) = at.halves();
    let l = build_from_intervals(intervals, pos, &a)?;
    let r = build_from_intervals(intervals, pos, &b)?;
    Ok(Tree::node(l, r))
}

/// Minimal `(p, q)` with `p ∘ t = q ∘ s`; both sides equal the union of `t` and `s`.
pub fn common_refinement(t: &Tree, s: &Tree) -> (Forest, Forest) {
    let u = t.union(s);
    let p = leq(t, &u).expect("t is a rooted subtree of the union");
    let q = leq(s, &u).expect("s is a rooted subtree of the union");
    (p, q)
}

/// The unique forest `f` with `f ∘ s = t`, if `s` is a rooted subtree of `t`.
pub fn leq(s: &Tree, t: &Tree) -> Option<Forest> {
    fn go(s: &Tree, t: &Tree, out: &mut Vec<Tree>) -> bool {
        match (s, t) {
            (Tree::Leaf, t) => {
                out.push(t.clone());
                true
            }
            (Tree::Node(..), Tree::Leaf) => false,
            (Tree::Node(a, b), Tree::Node(c, d)) => go(a, c, out) && go(b, d, out),
        }
    }
    let mut out = Vec::new();
    go(s, t, &mut out).then_some(Forest(out))
}

/// Remove the forest `f` from the top of `t`: the tree `s` with `f ∘ s = t`.
pub fn prune(t: &Tree, f: &Forest) -> Result<Tree> {
    fn go<'a>(t: &Tree, rest: &mut std::iter::Peekable<std::slice::Iter<'a, Tree>>) -> Option<Tree> {
        let next = *rest.peek()?;
        if next == t {
            rest.next();
            return Some(Tree::Leaf);
        }
        match t {
            Tree::Leaf => None,
            Tree::Node(l, r) => {
                let l = go(l, rest)?;
                let r = go(r, rest)?;
                Some(Tree::node(l, r))
            }
        }
    }
    let mut rest = f.0.iter().peekable();
    match go(t, &mut rest) {
        Some(s) if rest.next().is_none() => Ok(s),
        _ => Err(Error::Shape(format!("forest `{f}` does not sit on top of tree `{t}`"))),
    }
}

/// A bijection of `{0, .., m-1}`; `image[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation {
            image: (0..m).collect(),
        }
    }

    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParameter(format!("{image:?} is not a permutation")));
            }
        }
        Ok(Permutation { image })
    }

    /// From one-based images, as written in the text form.
    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if image.iter().any(|&i| i == 0) {
            return Err(Error::InvalidParameter("permutation entries are one-based".into()));
        }
        Self::new(image.iter().map(|i| i - 1).collect())
    }

    /// `i ↦ i + shift mod m`.
    pub fn cyclic(m: usize, shift: i64) -> Self {
        let s = shift.rem_euclid(m as i64) as usize;
        Permutation {
            image: (0..m).map(|i| (i + s) % m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// The shift `c` if this is `i ↦ i + c mod m`.
    pub fn cyclic_shift(&self) -> Option<usize> {
        let m = self.len();
        let c = *self.image.first()?;
        self.image
            .iter()
            .enumerate()
            .all(|(i, &j)| j == (i + c) % m)
            .then_some(c)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other` as functions: `i ↦ self(other(i))`.
    pub fn after(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            image: other.image.iter().map(|&j| self.image[j]).collect(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, j) in self.image.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        write!(f, "]")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// One-line one-based image list, e.g. `[2,3,1]`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("invalid permutation `{s}`")))?;
        let image = inner
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid permutation entry `{x}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_one_based(&image)
    }
}

/// A forest followed by a permutation of its leaves: leaf `i` ends at position `perm(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymmetricForest {
    pub forest: Forest,
    pub perm: Permutation,
}

impl SymmetricForest {
    pub fn new(forest: Forest, perm: Permutation) -> Result<Self> {
        if forest.leaves() != perm.len() {
            return Err(Error::Arity {
                expected: forest.leaves(),
                found: perm.len(),
            });
        }
        Ok(SymmetricForest { forest, perm })
    }

    pub fn identity(n: usize) -> Self {
        SymmetricForest {
            forest: Forest::identity(n),
            perm: Permutation::identity(n),
        }
    }
}

/// `τ(p)`: the `i`-th tree of the result is the `τ(i)`-th tree of `p`.
pub fn permute_trees(p: &Forest, tau: &Permutation) -> Forest {
    Forest((0..tau.len()).map(|i| p.0[tau.apply(i)].clone()).collect())
}

/// `S(p, τ)`: strand `i` of `τ` replaced by the leaves of tree `τ(i)` of `p`.
pub fn block_permutation(p: &Forest, tau: &Permutation) -> Permutation {
    let offsets = p.offsets();
    let mut image = Vec::with_capacity(p.leaves());
    for i in 0..tau.len() {
        let src = tau.apply(i);
        for r in 0..p.0[src].leaves() {
            image.push(offsets[src] + r);
        }
    }
    Permutation { image }
}

/// `(p,σ) ∘ (q,τ) = (τ(p) ∘ q, σ S(p,τ))`.
pub fn sym_compose(a: &SymmetricForest, b: &SymmetricForest) -> Result<SymmetricForest> {
    let (p, sigma) = (&a.forest, &a.perm);
    let (q, tau) = (&b.forest, &b.perm);
    if p.roots() != q.leaves() {
        return Err(Error::Arity {
            expected: q.leaves(),
            found: p.roots(),
        });
    }
    let forest = compose(&permute_trees(p, tau), q)?;
    let perm = sigma.after(&block_permutation(p, tau));
    Ok(SymmetricForest { forest, perm })
}

/// The breakpoint of leaf `i` of `t`, i.e. the left end of its interval.
pub fn leaf_breakpoints(t: &Tree) -> Vec<Dyadic> {
    t.leaf_intervals().iter().map(SDInterval::left).collect()
}

/// Index of the leaf interval of `t` containing `d`.
pub fn leaf_containing(t: &Tree, d: &Dyadic) -> usize {
    let mut node = t;
    let mut offset = 0;
    let mut at = SDInterval::unit();
    loop {
        match node {
            Tree::Leaf => return offset,
            Tree::Node(l, r) => {
                let (a, b) = at.halves();
                if a.contains(d) {
                    node = l;
                    at = a;
                } else {
                    offset += l.leaves();
                    node = r;
                    at = b;
                }
            }
        }
    }
}
