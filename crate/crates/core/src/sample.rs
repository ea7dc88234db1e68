//! Seeded random generators for trees, diagrams, configurations and elements.

use num_complex::Complex;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::GaussianRational;
use crate::dyadic::{DyadicArc, SDInterval};
use crate::forest::{Forest, Permutation, Tree};
use crate::lattice::{Config, CrossedElement, GaugeField, GroupSpec};
use crate::state::{LeafWeights, SpectralWeights};
use crate::thompson::VElement;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A tree with `leaves` leaves, grown by splitting random leaves of depth
/// below `max_depth`. Stops early if no leaf can be split.
pub fn tree_bounded(rng: &mut impl Rng, leaves: usize, max_depth: u32) -> Tree {
    fn split_nth(t: &Tree, target: &mut usize, depth: u32, max_depth: u32) -> Option<Tree> {
        match t {
            Tree::Leaf => {
                if depth < max_depth {
                    if *target == 0 {
                        return Some(Tree::caret());
                    }
                    *target -= 1;
                }
                None
            }
            Tree::Node(l, r) => {
                if let Some(nl) = split_nth(l, target, depth + 1, max_depth) {
                    return Some(Tree::node(nl, (**r).clone()));
                }
                split_nth(r, target, depth + 1, max_depth).map(|nr| Tree::node((**l).clone(), nr))
            }
        }
    }
    let mut t = Tree::Leaf;
    while t.leaves() < leaves.max(1) {
        let open = t.leaf_depths().iter().filter(|&&d| d < max_depth).count();
        if open == 0 {
            break;
        }
        let mut target = rng.gen_range(0..open);
        t = split_nth(&t, &mut target, 0, max_depth).expect("target is an open leaf");
    }
    t
}

pub fn tree(rng: &mut impl Rng, leaves: usize) -> Tree {
    tree_bounded(rng, leaves, u32::MAX)
}

/// A forest with `roots` trees and `carets` carets in total.
pub fn forest(rng: &mut impl Rng, roots: usize, carets: usize) -> Forest {
    let mut sizes = vec![1usize; roots];
    for _ in 0..carets {
        sizes[rng.gen_range(0..roots)] += 1;
    }
    Forest(sizes.into_iter().map(|s| tree(rng, s)).collect())
}

pub fn config(rng: &mut impl Rng, group: GroupSpec, t: &Tree) -> Config {
    let k = group.modulus();
    let values = (0..t.leaves()).map(|_| rng.gen_range(0..k)).collect();
    Config::new(group, t.clone(), values).expect("valid by construction")
}

pub fn gauge_field(rng: &mut impl Rng, group: GroupSpec, t: &Tree) -> GaugeField {
    let k = group.modulus();
    let values = (0..t.leaves()).map(|_| rng.gen_range(0..k)).collect();
    GaugeField::new(group, t.clone(), values).expect("valid by construction")
}

fn gaussian_int(rng: &mut impl Rng, bound: i64) -> GaussianRational {
    Complex::new(
        BigRational::from_integer(rng.gen_range(-bound..=bound).into()),
        BigRational::from_integer(rng.gen_range(-bound..=bound).into()),
    )
}

/// A sum of `terms` random `a_g λ_g` with Gaussian-integer coefficients in
/// `[−bound, bound]`.
pub fn element(rng: &mut impl Rng, group: GroupSpec, t: &Tree, terms: usize, bound: i64) -> CrossedElement {
    let n = t.leaves();
    let size = group.points(n).expect("caller keeps sizes small");
    let k = group.modulus();
    let terms = (0..terms)
        .map(|_| {
            let label = (0..n).map(|_| rng.gen_range(0..k)).collect();
            let coeffs = (0..size).map(|_| gaussian_int(rng, bound)).collect();
            (label, coeffs)
        })
        .collect();
    CrossedElement::from_terms(group, t.clone(), terms).expect("valid by construction")
}

/// An element whose coefficients depend only on leaves inside `o` and whose
/// labels sit on breakpoints inside `o`.
pub fn localized_element(
    rng: &mut impl Rng,
    group: GroupSpec,
    t: &Tree,
    o: &DyadicArc,
    terms: usize,
    bound: i64,
) -> CrossedElement {
    let n = t.leaves();
    let size = group.points(n).expect("caller keeps sizes small");
    let k = group.modulus();
    let intervals: Vec<SDInterval> = t.leaf_intervals();
    let inside: Vec<bool> = intervals.iter().map(|i| o.contains_interval(i)).collect();
    let label_ok: Vec<bool> = intervals.iter().map(|i| o.contains_point(&i.left())).collect();
    let terms = (0..terms)
        .map(|_| {
            let label: Vec<u32> = (0..n)
                .map(|j| if label_ok[j] { rng.gen_range(0..k) } else { 0 })
                .collect();
            // a function of the inside coordinates only
            let mut table = std::collections::HashMap::new();
            let coeffs = (0..size)
                .map(|i| {
                    let y = group.decode(i, n);
                    let key: Vec<u32> = (0..n).map(|j| if inside[j] { y[j] } else { 0 }).collect();
                    table.entry(key).or_insert_with(|| gaussian_int(rng, bound)).clone()
                })
                .collect();
            (label, coeffs)
        })
        .collect();
    CrossedElement::from_terms(group, t.clone(), terms).expect("valid by construction")
}

/// Which subgroup a random diagram is drawn from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Subgroup {
    F,
    T,
    V,
}

/// A random element from trees with `leaves` leaves of depth at most `max_depth`.
pub fn thompson_element(rng: &mut impl Rng, subgroup: Subgroup, leaves: usize, max_depth: u32) -> VElement {
    let domain = tree_bounded(rng, leaves, max_depth);
    let n = domain.leaves();
    let range = tree_bounded(rng, n, max_depth);
    let range = if range.leaves() == n { range } else { domain.clone() };
    let perm = match subgroup {
        Subgroup::F => Permutation::identity(n),
        Subgroup::T => Permutation::cyclic(n, rng.gen_range(0..n as i64)),
        Subgroup::V => {
            let mut image: Vec<usize> = (0..n).collect();
            image.shuffle(rng);
            Permutation::new(image).expect("shuffle is a bijection")
        }
    };
    VElement::new(domain, range, perm).expect("matching sizes")
}

/// Positive rational weights with small denominators.
pub fn weights(rng: &mut impl Rng, k: u32) -> SpectralWeights {
    let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    SpectralWeights::new(raw.into_iter().map(|r| BigRational::new(r.into(), total.into())).collect())
        .expect("normalized by construction")
}

/// Random weights on every leaf of `t`.
pub fn leaf_weights(rng: &mut impl Rng, k: u32, leaves: usize) -> LeafWeights {
    LeafWeights((0..leaves).map(|_| weights(rng, k)).collect())
}

/// Weights on the leaves of `f ∘ t` that agree with `coarse` on the first
/// sub-leaf of each block and are random elsewhere.
pub fn refined_weights(rng: &mut impl Rng, k: u32, coarse: &LeafWeights, f: &Forest) -> LeafWeights {
    let mut out = Vec::with_capacity(f.leaves());
    for (w, t) in coarse.0.iter().zip(f.trees()) {
        out.push(w.clone());
        for _ in 1..t.leaves() {
            out.push(weights(rng, k));
        }
    }
    LeafWeights(out)
}
