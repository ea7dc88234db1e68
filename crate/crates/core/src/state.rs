//! Heat-kernel type states on the finite-level crossed products.
//!
//! A probability vector `w` on the dual of `Z/kZ` gives the positive definite
//! function `h(g) = Σ_m w_m ζ_k^{mg}`. The state on a tree with per-leaf
//! weights is `ω(Σ a_g λ_g) = Σ_g mean(a_g) Π_j h_j(−g_j)`, evaluated exactly
//! in a cyclotomic field.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::forest::{leaf_breakpoints, Forest, Tree};
use crate::heatmeasure::{mass_set, BetaProfile};
use crate::lattice::{embed_element, gauge_act_element, jones_act_element, CrossedElement, GaugeField};
use crate::thompson::VElement;

/// A strictly positive probability vector on the characters of `Z/kZ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SpectralWeights {
    weights: Vec<BigRational>,
}

impl SpectralWeights {
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("weights must be nonempty".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidParameter(format!("weight {w} is not positive")));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
        }
        Ok(SpectralWeights { weights })
    }

    pub fn uniform(k: u32) -> Self {
        SpectralWeights {
            weights: vec![BigRational::new(1.into(), k.into()); k as usize],
        }
    }

    pub fn modulus(&self) -> u32 {
        self.weights.len() as u32
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }
}

impl fmt::Display for SpectralWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "w:{}", parts.join(","))
    }
}

impl FromStr for SpectralWeights {
    type Err = Error;

    /// `w:3/4,1/4`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix("w:")
            .ok_or_else(|| Error::Parse(format!("expected `w:<weights>`, found `{s}`")))?;
        let weights = body
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<BigRational>()
                    .map_err(|_| Error::Parse(format!("bad weight `{x}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        SpectralWeights::new(weights)
    }
}

/// `h(g) = Σ_m p_m ζ_k^{mg}` for any probability vector `p`, as values `h(0..k)`.
pub fn h_from_distribution(p: &[BigRational], field: &Arc<CyclotomicField>) -> Vec<Cyclotomic> {
    let k = p.len() as u32;
    (0..k as i64)
        .map(|g| {
            p.iter().enumerate().fold(Cyclotomic::zero(field), |acc, (m, w)| {
                acc + Cyclotomic::character(field, m as i64 * g, k).scale(w)
            })
        })
        .collect()
}

pub fn h_from_weights(w: &SpectralWeights) -> Vec<Cyclotomic> {
    h_from_distribution(&w.weights, &CyclotomicField::for_modulus(w.modulus()))
}

/// One weight vector per leaf, in breakpoint order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LeafWeights(pub Vec<SpectralWeights>);

impl LeafWeights {
    pub fn constant(w: &SpectralWeights, leaves: usize) -> Self {
        LeafWeights(vec![w.clone(); leaves])
    }
}

/// A map `D → Prob(Ĝ)`: a default vector with finitely many exceptions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightAssignment {
    pub default: SpectralWeights,
    pub overrides: BTreeMap<Dyadic, SpectralWeights>,
}

impl WeightAssignment {
    pub fn constant(w: SpectralWeights) -> Self {
        WeightAssignment {
            default: w,
            overrides: BTreeMap::new(),
        }
    }

    pub fn at(&self, d: &Dyadic) -> &SpectralWeights {
        self.overrides.get(d).unwrap_or(&self.default)
    }

    pub fn for_tree(&self, t: &Tree) -> LeafWeights {
        LeafWeights(leaf_breakpoints(t).iter().map(|d| self.at(d).clone()).collect())
    }
}

/// `ω_t(x)` as an exact element of `Q(ζ_N)`, `N = lcm(k, 4)`.
pub fn omega_t(x: &CrossedElement, lw: &LeafWeights) -> Result<Cyclotomic> {
    let k = x.group().modulus();
    let n = x.leaves();
    if lw.0.len() != n {
        return Err(Error::Arity {
            expected: n,
            found: lw.0.len(),
        });
    }
    if let Some(w) = lw.0.iter().find(|w| w.modulus() != k) {
        return Err(Error::Shape(format!("weights {w} do not match modulus {k}")));
    }
    let field = CyclotomicField::for_modulus(k);
    let mut cache: HashMap<&SpectralWeights, Vec<Cyclotomic>> = HashMap::new();
    for w in &lw.0 {
        cache
            .entry(w)
            .or_insert_with(|| h_from_distribution(&w.weights, &field));
    }
    let mut total = Cyclotomic::zero(&field);
    for (g, a) in x.terms() {
        let size = BigRational::from_integer(a.len().into());
        let sum = a
            .iter()
            .fold(Complex::new(BigRational::zero(), BigRational::zero()), |acc, z| acc + z);
        let mean = Complex::new(sum.re / &size, sum.im / &size);
        let mut value = Cyclotomic::from_gaussian(&field, &mean);
        for (j, &gj) in g.iter().enumerate() {
            let h = &cache[&lw.0[j]];
            value = &value * &h[((k - gj) % k) as usize];
        }
        total = total + value;
    }
    Ok(total)
}

/// `|a − b|`, with an exact zero test.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct Residual {
    pub value: f64,
    pub exact_zero: bool,
}

impl Residual {
    fn between(a: &Cyclotomic, b: &Cyclotomic) -> Self {
        let diff = a.clone() - b.clone();
        Residual {
            value: diff.to_complex().norm(),
            exact_zero: diff.is_zero(),
        }
    }
}

/// `|ω_{ft}(embed(x, f)) − ω_t(x)|`.
pub fn check_state_preserving(
    x: &CrossedElement,
    f: &Forest,
    lw_coarse: &LeafWeights,
    lw_fine: &LeafWeights,
) -> Result<Residual> {
    let fine = embed_element(x, f)?;
    Ok(Residual::between(&omega_t(&fine, lw_fine)?, &omega_t(x, lw_coarse)?))
}

/// `|ω_t(Z(s)x) − ω_t(x)|`.
pub fn check_gauge_invariance(x: &CrossedElement, s: &GaugeField, lw: &LeafWeights) -> Result<Residual> {
    let moved = gauge_act_element(s, x)?;
    Ok(Residual::between(&omega_t(&moved, lw)?, &omega_t(x, lw)?))
}

/// `|ω(α(v)x) − ω(x)|` with the weights read from `weights` at each breakpoint.
pub fn jones_residual(x: &CrossedElement, v: &VElement, weights: &WeightAssignment) -> Result<Residual> {
    let moved = jones_act_element(v, x)?;
    Ok(Residual::between(
        &omega_t(&moved, &weights.for_tree(moved.tree()))?,
        &omega_t(x, &weights.for_tree(x.tree()))?,
    ))
}

/// [`jones_residual`] with the same weights on every leaf.
pub fn check_jones_invariance(x: &CrossedElement, v: &VElement, w: &SpectralWeights) -> Result<Residual> {
    jones_residual(x, v, &WeightAssignment::constant(w.clone()))
}

/// Finitely many coordinates constrained to finite integer sets.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Cylinder {
    pub constraints: BTreeMap<Dyadic, Vec<i64>>,
}

/// `Σ c · Π_d m_{β(d)}(S_d)` over the given cylinders.
pub fn cylinder_state(b_coeffs: &[(Cylinder, Complex<f64>)], beta: &BetaProfile) -> Result<Complex<f64>> {
    let mut total = Complex::new(0.0, 0.0);
    for (cyl, c) in b_coeffs {
        let mut p = 1.0;
        for (d, set) in &cyl.constraints {
            p *= mass_set(beta.eval(d), set)?;
        }
        total += c * p;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::GroupSpec;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn weights_text() {
        let w: SpectralWeights = "w:3/4,1/4".parse().unwrap();
        assert_eq!(w.to_string(), "w:3/4,1/4");
        assert!("w:1/2,1/4".parse::<SpectralWeights>().is_err());
        assert!("w:1,0".parse::<SpectralWeights>().is_err());
        assert!("3/4,1/4".parse::<SpectralWeights>().is_err());
    }

    #[test]
    fn h_examples() {
        let w: SpectralWeights = "w:3/4,1/4".parse().unwrap();
        let h = h_from_weights(&w);
        assert_eq!(h[0].as_rational(), Some(q(1, 1)));
        assert_eq!(h[1].as_rational(), Some(q(1, 2)));
        for k in 1..=6 {
            let h = h_from_weights(&SpectralWeights::uniform(k));
            assert_eq!(h[0].as_rational(), Some(q(1, 1)));
            assert!(h[1..].iter().all(Cyclotomic::is_zero));
        }
        let field = CyclotomicField::for_modulus(3);
        let point = h_from_distribution(&[q(1, 1), q(0, 1), q(0, 1)], &field);
        assert!(point.iter().all(|v| v.as_rational() == Some(q(1, 1))));
    }

    #[test]
    fn omega_examples() {
        let g = GroupSpec::new(2).unwrap();
        let w: SpectralWeights = "w:3/4,1/4".parse().unwrap();
        let lw = LeafWeights::constant(&w, 1);
        let one = CrossedElement::one(g, Tree::Leaf).unwrap();
        assert_eq!(omega_t(&one, &lw).unwrap().as_rational(), Some(q(1, 1)));
        let lam = CrossedElement::lambda(g, Tree::Leaf, vec![1]).unwrap();
        assert_eq!(omega_t(&lam, &lw).unwrap().as_rational(), Some(q(1, 2)));
        let a = CrossedElement::function(
            g,
            Tree::Leaf,
            vec![Complex::new(q(3, 1), q(0, 1)), Complex::new(q(6, 1), q(0, 1))],
        )
        .unwrap();
        assert_eq!(omega_t(&a, &lw).unwrap().as_rational(), Some(q(9, 2)));
    }

    #[test]
    fn cylinders() {
        let beta = BetaProfile::Constant(2.0 * std::f64::consts::PI);
        let free = Cylinder::default();
        assert_eq!(cylinder_state(&[(free, Complex::new(1.0, 0.0))], &beta).unwrap(), Complex::new(1.0, 0.0));
        let mut c = Cylinder::default();
        c.constraints.insert(Dyadic::zero(), vec![0]);
        let v = cylinder_state(&[(c.clone(), Complex::new(1.0, 0.0))], &beta).unwrap();
        let direct: f64 = 1.0 + 2.0 * (1..8).map(|n| (-std::f64::consts::PI * (n * n) as f64).exp()).sum::<f64>();
        assert!((v.re - 1.0 / direct).abs() < 1e-15);
        assert!((v.re - 0.920444).abs() < 1e-5);
        c.constraints.insert(Dyadic::half(), vec![-1, 1]);
        let both = cylinder_state(&[(c, Complex::new(1.0, 0.0))], &beta).unwrap();
        let m1 = mass_set(beta.eval(&Dyadic::half()), &[-1, 1]).unwrap();
        assert!((both.re - v.re * m1).abs() < 1e-15);
        let mut empty = Cylinder::default();
        empty.constraints.insert(Dyadic::zero(), vec![]);
        assert_eq!(cylinder_state(&[(empty, Complex::new(1.0, 0.0))], &beta).unwrap(), Complex::new(0.0, 0.0));
    }
}
