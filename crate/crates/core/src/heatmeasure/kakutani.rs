//! Kakutani series for transformed product measures `⊗_d m_{β(d)}`, and
//! the related summability, semifiniteness and closure diagnostics.

use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::profile::{BetaProfile, Transform, ZfrElement};
use super::theta::{
    check_b, log_mass_interval, log_partition_function, neg_log_hellinger_pair, neg_log_hellinger_translate,
};
use crate::dyadic::{dyadics_at_level, ell, enumerate_dyadics, Dyadic};
use crate::error::{Error, Result};
use crate::thompson::{max_depth, VElement};

const SINGULAR_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Verdict {
    Equivalent,
    Singular,
    Inconclusive,
}

/// Why a verdict was reached.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Every term vanishes identically.
    AllTermsZero,
    /// Terms vanish beyond `last_level`; `total` is the exact series value.
    FiniteSupport { last_level: u32, total: f64 },
    /// The series lies in `[partial_sum, partial_sum + tail_bound]`.
    TailBound { level: u32, partial_sum: f64, tail_bound: f64 },
    /// Per-level sums that do not decrease over the final levels.
    LevelLowerBound { levels: Vec<u32>, sums: Vec<f64>, floor: f64 },
    Undecided { reason: String },
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct KakutaniReport {
    pub levels: u32,
    pub terms_by_level: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub max_term_by_level: Vec<f64>,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

/// `−log ρ(μ_d, ν_d)` for one coordinate.
pub fn kakutani_term(beta: &BetaProfile, transform: &Transform, d: &Dyadic) -> f64 {
    match transform {
        Transform::Translate(g) => {
            let k = g.eval(d);
            if k == 0 {
                0.0
            } else {
                neg_log_hellinger_translate(beta.eval(d), k).expect("profiles are positive")
            }
        }
        other => {
            let v = other.element().expect("precomposition variant");
            element_term(beta, &v, d)
        }
    }
}

fn element_term(beta: &BetaProfile, v: &VElement, d: &Dyadic) -> f64 {
    let image = v.act_dyadic(d);
    neg_log_hellinger_pair(beta.eval(&image), beta.eval(d)).expect("profiles are positive")
}

fn level_terms(beta: &BetaProfile, transform: &Transform, level: u32) -> (f64, f64) {
    let element = transform.element();
    let points = dyadics_at_level(level);
    let terms: Vec<f64> = points
        .par_iter()
        .map(|d| match &element {
            Some(v) => element_term(beta, v, d),
            None => kakutani_term(beta, transform, d),
        })
        .collect();
    (terms.iter().sum(), terms.iter().cloned().fold(0.0, f64::max))
}

/// `Σ_{n>level} |D_n| β_n` when a closed form is available.
fn profile_tail(beta: &BetaProfile, level: u32) -> Option<f64> {
    match beta {
        BetaProfile::Constant(_) => None,
        BetaProfile::Tau(tau) => {
            let x = (1.0 - tau).exp2();
            (x < 1.0).then(|| 0.5 * x.powi(level as i32 + 1) / (1.0 - x))
        }
        BetaProfile::EllTable { values, geom } => {
            let r = (*geom)?;
            if 2.0 * r >= 1.0 {
                return None;
            }
            let last = values.len() as u32 - 1;
            let count = |n: u32| if n == 0 { 1.0 } else { (n as f64 - 1.0).exp2() };
            let explicit: f64 = (level + 1..=last).map(|n| count(n) * beta.at_level(n)).sum();
            let from = level.max(last);
            // Σ_{n>from} 2^{n−1} b_K r^{n−K} = b_K 2^{K−1} (2r)^{from+1−K} / (1 − 2r)
            let b_k = values[last as usize];
            let tail = b_k * (last as f64 - 1.0).exp2() * (2.0 * r).powi((from + 1 - last) as i32) / (1.0 - 2.0 * r);
            Some(explicit + tail)
        }
    }
}

pub fn kakutani_series(beta: &BetaProfile, transform: &Transform, max_level: u32) -> KakutaniReport {
    let mut terms_by_level = Vec::new();
    let mut max_term_by_level = Vec::new();
    for level in 0..=max_level {
        let (sum, max) = level_terms(beta, transform, level);
        terms_by_level.push(sum);
        max_term_by_level.push(max);
    }
    let partial_sums: Vec<f64> = terms_by_level
        .iter()
        .scan(0.0, |acc, t| {
            *acc += t;
            Some(*acc)
        })
        .collect();
    let (verdict, evidence) = decide(beta, transform, max_level, &terms_by_level, &partial_sums);
    KakutaniReport {
        levels: max_level,
        terms_by_level,
        partial_sums,
        max_term_by_level,
        verdict,
        evidence,
    }
}

fn decide(
    beta: &BetaProfile,
    transform: &Transform,
    max_level: u32,
    by_level: &[f64],
    partial: &[f64],
) -> (Verdict, Evidence) {
    let last = *partial.last().expect("at least level 0");
    match transform {
        Transform::Translate(g) if g.is_zero() => return (Verdict::Equivalent, Evidence::AllTermsZero),
        Transform::Translate(g) => {
            // −log ρ(k_* m_b, m_b) ≤ KL / 2 = k² b / 4
            if let Some(tail) = profile_tail(beta, max_level) {
                let k = g.max_abs() as f64;
                return (
                    Verdict::Equivalent,
                    Evidence::TailBound {
                        level: max_level,
                        partial_sum: last,
                        tail_bound: k * k / 4.0 * tail,
                    },
                );
            }
        }
        _ => {
            if matches!(beta, BetaProfile::Constant(_)) {
                return (Verdict::Equivalent, Evidence::AllTermsZero);
            }
            let v = transform.element().expect("precomposition variant");
            let flat = v.as_pl_map().pieces.iter().all(|p| p.slope_exponent == 0);
            if flat {
                // piecewise translations by dyadics of level ≤ depth keep ℓ beyond it
                let depth = max_depth(&v);
                let total = if depth <= max_level {
                    partial[depth as usize]
                } else {
                    let extra: f64 = (max_level + 1..=depth).map(|n| level_terms(beta, transform, n).0).sum();
                    last + extra
                };
                return (
                    Verdict::Equivalent,
                    Evidence::FiniteSupport {
                        last_level: depth,
                        total,
                    },
                );
            }
        }
    }
    let n = by_level.len();
    if n >= 3 {
        let tail = &by_level[n - 3..];
        if tail[0] > SINGULAR_FLOOR && tail[0] <= tail[1] && tail[1] <= tail[2] {
            return (
                Verdict::Singular,
                Evidence::LevelLowerBound {
                    levels: (n as u32 - 3..n as u32).collect(),
                    sums: tail.to_vec(),
                    floor: tail[0],
                },
            );
        }
    }
    (
        Verdict::Inconclusive,
        Evidence::Undecided {
            reason: "no closed-form tail bound and per-level sums are not bounded below".into(),
        },
    )
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Summability {
    Summable { value: f64 },
    Divergent,
    NumericOnly { partial_sums: Vec<f64> },
}

/// Test `Σ_d β(d)^p < ∞`.
pub fn summability_test(beta: &BetaProfile, p: f64) -> Result<Summability> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("p must lie in (0,1], got {p}")));
    }
    Ok(match beta {
        BetaProfile::Constant(_) => Summability::Divergent,
        BetaProfile::Tau(tau) => {
            if p * tau > 1.0 {
                let x = (1.0 - p * tau).exp2();
                Summability::Summable {
                    value: 1.0 + 0.5 * x / (1.0 - x),
                }
            } else {
                Summability::Divergent
            }
        }
        BetaProfile::EllTable { values, geom } => {
            let count = |n: usize| if n == 0 { 1.0 } else { (n as f64 - 1.0).exp2() };
            let head: f64 = values.iter().enumerate().map(|(n, b)| count(n) * b.powf(p)).sum();
            match geom {
                Some(r) => {
                    let y = 2.0 * r.powf(p);
                    if y < 1.0 {
                        let k = values.len() - 1;
                        let b_k = values[k].powf(p);
                        let scale = if k == 0 { 0.5 } else { count(k) };
                        Summability::Summable {
                            value: head + b_k * scale * y / (1.0 - y),
                        }
                    } else {
                        Summability::Divergent
                    }
                }
                None => {
                    let mut acc = 0.0;
                    let partial_sums = (0..values.len() + 8)
                        .map(|n| {
                            acc += count(n) * beta.at_level(n as u32).powf(p);
                            acc
                        })
                        .collect();
                    Summability::NumericOnly { partial_sums }
                }
            }
        }
    })
}

/// `1 − |Σ_k exp(−k² b(1+it)/2)| / Z_b`.
pub fn semifinite_term(b: f64, t: f64) -> Result<f64> {
    check_b(b)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let c = Complex::new(b, b * t);
    let ln_z = log_partition_function(b)?;
    let stretch = (1.0 + t * t).sqrt();
    let ln_abs = if b * stretch >= 2.0 * std::f64::consts::PI {
        let mut sum = Complex::new(1.0f64, 0.0);
        let mut k = 1.0f64;
        loop {
            let term = (-c * (k * k / 2.0)).exp() * 2.0;
            if term.norm() < 1e-17 * sum.norm().max(1e-300) {
                break;
            }
            sum += term;
            k += 1.0;
        }
        sum.norm().ln()
    } else {
        // √(2π/c) Σ_n exp(−2π² n²/c)
        let inv = c.inv();
        let mut sum = Complex::new(1.0f64, 0.0);
        let mut n = 1.0f64;
        loop {
            let term = (-inv * (2.0 * std::f64::consts::PI.powi(2) * n * n)).exp() * 2.0;
            if term.norm() < 1e-17 {
                break;
            }
            sum += term;
            n += 1.0;
        }
        0.5 * (2.0 * std::f64::consts::PI / b).ln() - 0.25 * (1.0 + t * t).ln() + sum.norm().ln()
    };
    Ok((1.0 - (ln_abs - ln_z).exp()).max(0.0))
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SemifiniteReport {
    pub t: f64,
    /// `1 − (1+t²)^{−1/4}`, the term value as `β → 0`.
    pub limit: f64,
    pub terms_by_level: Vec<f64>,
    pub mean_term_by_level: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub divergent: bool,
}

pub fn semifinite_series(beta: &BetaProfile, t: f64, max_level: u32) -> Result<SemifiniteReport> {
    let limit = 1.0 - (1.0 + t * t).powf(-0.25);
    let mut terms_by_level = Vec::new();
    let mut mean_term_by_level = Vec::new();
    for level in 0..=max_level {
        // β depends on the level only
        let count = if level == 0 { 1.0 } else { (level as f64 - 1.0).exp2() };
        let term = semifinite_term(beta.at_level(level), t)?;
        terms_by_level.push(count * term);
        mean_term_by_level.push(term);
    }
    let partial_sums: Vec<f64> = terms_by_level
        .iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    let n = mean_term_by_level.len();
    let divergent = limit > 0.0 && n >= 3 && mean_term_by_level[n - 3..].iter().all(|&m| m >= limit / 2.0);
    Ok(SemifiniteReport {
        t,
        limit,
        terms_by_level,
        mean_term_by_level,
        partial_sums,
        divergent,
    })
}

/// Integer interval `X_d = {n : |e^{(2n−1)b/2} − 1| ≤ b^p}` as inclusive bounds.
pub fn closure_window(b: f64, p: f64) -> (Option<i64>, Option<i64>) {
    let bp = b.powf(p);
    let hi = (0.5 + bp.ln_1p() / b).floor() as i64;
    let lo = if bp >= 1.0 {
        None
    } else {
        Some((0.5 + (-bp).ln_1p() / b).ceil() as i64)
    };
    (lo, Some(hi))
}

/// Probability of the cylinder `Π_{d ∈ D(n)} X_d`, where `D(n)` holds the
/// dyadics of level at most `max_level` inside `(0, 2^{−n})`.
pub fn closure_diagnostic(beta: &BetaProfile, p: f64, n: u32, max_level: u32) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, 1/2), got {p}")));
    }
    let bound = Dyadic::normalize(1u32, n).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut log_mass = 0.0;
    for level in (n + 1)..=max_level {
        for d in dyadics_at_level(level) {
            if d >= bound {
                break;
            }
            let b = beta.eval(&d);
            let (lo, hi) = closure_window(b, p);
            log_mass += log_mass_interval(b, lo, hi)?;
        }
    }
    Ok(log_mass.exp())
}

/// Dyadics of level at most `max_level` whose `ℓ` changes under `r`.
pub fn rotation_support(r: &VElement, max_level: u32) -> Result<Vec<Dyadic>> {
    if r.rotation_amount().is_none() {
        return Err(Error::NotInSubgroup(format!("{r} is not a rotation")));
    }
    Ok(enumerate_dyadics(max_level)
        .into_par_iter()
        .filter(|d| ell(d) != ell(&r.act_dyadic(d)))
        .collect())
}

/// `d(g_* m)/dm` at `x`, over the coordinates of level at most `max_level`
/// where `g` is nonzero: `Π e^{(2 x_d k − k²) β(d)/2}` with `k = g(d)`.
pub fn radon_nikodym(g: &ZfrElement, beta: &BetaProfile, x: &BTreeMap<Dyadic, i64>, max_level: u32) -> Result<f64> {
    let mut log = 0.0;
    for d in enumerate_dyadics(max_level) {
        let k = g.eval(&d);
        if k == 0 {
            continue;
        }
        let n = *x
            .get(&d)
            .ok_or_else(|| Error::InvalidParameter(format!("no coordinate given at {d}")))?;
        let (n, k) = (n as f64, k as f64);
        log += (2.0 * n * k - k * k) * beta.eval(&d) / 2.0;
    }
    Ok(log.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heatmeasure::theta::mass_set;

    fn tau3() -> BetaProfile {
        BetaProfile::Tau(3.0)
    }

    #[test]
    fn known_verdicts() {
        let t = |s: &str| s.parse::<Transform>().unwrap();
        let r = kakutani_series(&tau3(), &t("translate:{0}@1"), 10);
        assert_eq!(r.verdict, Verdict::Equivalent);
        let r = kakutani_series(&BetaProfile::Constant(1.0), &t("translate:{0}@1"), 10);
        assert_eq!(r.verdict, Verdict::Singular);
        let r = kakutani_series(&tau3(), &t("halve"), 10);
        assert_eq!(r.verdict, Verdict::Singular);
        let ell: BetaProfile = "ell:1,0.5,0.3,0.2;geom:0.5".parse().unwrap();
        let r = kakutani_series(&ell, &t("rotate:3,1"), 8);
        assert_eq!(r.verdict, Verdict::Equivalent);
        assert!(matches!(r.evidence, Evidence::FiniteSupport { last_level: 3, .. }));
        assert!(r.terms_by_level[4..].iter().all(|&x| x == 0.0));
        assert!(r.partial_sums.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn halve_term_limit() {
        let expected = -0.5 * (2.0 / (2f64.powf(1.5) + 2f64.powf(-1.5))).ln();
        assert!((expected - 0.232219).abs() < 1e-4);
        let d = Dyadic::normalize(1u32, 12).unwrap();
        assert!((kakutani_term(&tau3(), &Transform::Halve, &d) - expected).abs() < 1e-9);
    }

    #[test]
    fn tail_bound_contains_series() {
        let t: Transform = "translate:{0,1/2}@1,-3".parse().unwrap();
        let short = kakutani_series(&tau3(), &t, 4);
        let long = kakutani_series(&tau3(), &t, 14);
        let Evidence::TailBound { partial_sum, tail_bound, .. } = short.evidence else {
            panic!("expected a tail bound");
        };
        let total = *long.partial_sums.last().unwrap();
        assert!(partial_sum <= total && total <= partial_sum + tail_bound);
        let ell: BetaProfile = "ell:1,0.3;geom:0.2".parse().unwrap();
        let short = kakutani_series(&ell, &t, 3);
        let long = kakutani_series(&ell, &t, 14);
        let Evidence::TailBound { partial_sum, tail_bound, .. } = short.evidence else {
            panic!("expected a tail bound");
        };
        let total = *long.partial_sums.last().unwrap();
        assert!(partial_sum <= total && total <= partial_sum + tail_bound);
    }

    #[test]
    fn summability() {
        let Summability::Summable { value } = summability_test(&tau3(), 0.4).unwrap() else {
            panic!()
        };
        let x = 2f64.powf(-0.2);
        assert!((value - (1.0 + 0.5 * x / (1.0 - x))).abs() < 1e-14);
        assert!((value - 4.36253).abs() < 1e-4);
        assert!(matches!(summability_test(&tau3(), 1.0).unwrap(), Summability::Summable { .. }));
        assert_eq!(summability_test(&BetaProfile::Tau(1.0), 1.0).unwrap(), Summability::Divergent);
        assert_eq!(summability_test(&BetaProfile::Constant(2.0), 0.5).unwrap(), Summability::Divergent);
        let ell: BetaProfile = "ell:1,0.5;geom:0.25".parse().unwrap();
        let Summability::Summable { value } = summability_test(&ell, 1.0).unwrap() else {
            panic!()
        };
        let brute: f64 = (0..60u32)
            .map(|n| if n == 0 { 1.0 } else { (n as f64 - 1.0).exp2() } * ell.at_level(n))
            .sum();
        assert!((value - brute).abs() < 1e-12);
        assert!(matches!(
            summability_test(&"ell:1,2".parse().unwrap(), 1.0).unwrap(),
            Summability::NumericOnly { .. }
        ));
        assert!(summability_test(&tau3(), 0.0).is_err());
    }

    #[test]
    fn semifinite() {
        for b in [1e-3, 0.1, 1.0, 10.0] {
            assert_eq!(semifinite_term(b, 0.0).unwrap(), 0.0);
        }
        let limit = 1.0 - 2f64.powf(-0.25);
        assert!((limit - 0.159104).abs() < 1e-6);
        assert!((semifinite_term(1e-6, 1.0).unwrap() - limit).abs() < 1e-9);
        // both branches agree near the switch
        let b = 2.0 * std::f64::consts::PI / 2f64.sqrt();
        let direct_side = semifinite_term(b * 1.0001, 1.0).unwrap();
        let poisson_side = semifinite_term(b * 0.9999, 1.0).unwrap();
        assert!((direct_side - poisson_side).abs() < 1e-4);
        let r = semifinite_series(&tau3(), 1.0, 9).unwrap();
        assert!(r.divergent);
        assert!(*r.partial_sums.last().unwrap() > 10.0);
    }

    #[test]
    fn closure() {
        let tau = tau3();
        assert_eq!(closure_diagnostic(&tau, 0.4, 5, 5).unwrap(), 1.0);
        let vals: Vec<f64> = (1..6).map(|n| closure_diagnostic(&tau, 0.4, n, 12).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]), "{vals:?}");
        assert!(closure_diagnostic(&tau, 0.6, 1, 4).is_err());
        let b = 1e-4;
        let (lo, hi) = closure_window(b, 0.4);
        assert!(lo.unwrap() <= -50 && hi.unwrap() >= 50);
        let direct = mass_set(b, &(lo.unwrap()..=hi.unwrap()).collect::<Vec<_>>()).unwrap();
        assert!((log_mass_interval(b, lo, hi).unwrap().exp() - direct).abs() < 1e-12);
    }

    #[test]
    fn rotation_supports() {
        assert!(rotation_support(&VElement::identity(), 6).unwrap().is_empty());
        let s = rotation_support(&VElement::rotation(1, 1), 6).unwrap();
        assert!(s.iter().all(|d| d.level() <= 1));
        let s = rotation_support(&VElement::rotation(2, 1), 8).unwrap();
        assert!(s.iter().all(|d| d.level() <= 2));
        assert!(rotation_support(&VElement::generator_a(), 4).is_err());
    }

    #[test]
    fn radon_nikodym_examples() {
        let x: BTreeMap<Dyadic, i64> = [(Dyadic::zero(), 0)].into_iter().collect();
        let zero = ZfrElement::constant(0);
        assert_eq!(radon_nikodym(&zero, &BetaProfile::Constant(1.0), &x, 3).unwrap(), 1.0);
        let two = ZfrElement::constant(2);
        assert!((radon_nikodym(&two, &BetaProfile::Constant(1.0), &x, 0).unwrap() - (-2f64).exp()).abs() < 1e-15);
        let one = ZfrElement::constant(1);
        let x3: BTreeMap<Dyadic, i64> = [(Dyadic::zero(), 3)].into_iter().collect();
        let b = 0.7;
        assert!((radon_nikodym(&one, &BetaProfile::Constant(b), &x3, 0).unwrap() - (5.0 * b / 2.0).exp()).abs() < 1e-12);
        assert!(radon_nikodym(&one, &BetaProfile::Constant(b), &x3, 1).is_err());
    }
}
