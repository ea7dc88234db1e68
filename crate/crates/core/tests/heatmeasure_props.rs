use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex;
use proptest::prelude::*;

use tglab::dyadic::{enumerate_dyadics, Dyadic, SDPartition};
use tglab::heatmeasure::{
    hellinger_pair, hellinger_translate, kakutani_series, mass, partition_function, radon_nikodym,
    rotation_support, semifinite_term, BetaProfile, Transform, ZfrElement,
};
use tglab::thompson::{rotation, VElement};

fn span(b: f64) -> i64 {
    (90.0 / b).sqrt().ceil() as i64 + 2
}

fn direct_z(b: f64) -> f64 {
    let n = span(b);
    (-n..=n).map(|j| (-(j * j) as f64 * b / 2.0).exp()).sum()
}

fn poisson_z(b: f64) -> f64 {
    let s: f64 = (-400i64..=400).map(|j| (-2.0 * PI * PI * (j * j) as f64 / b).exp()).sum();
    (2.0 * PI / b).sqrt() * s
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

#[test]
fn masses_sum_to_one() {
    for b in [1e-4, 1e-2, 1.0, 2.0 * PI, 50.0] {
        let n = span(b);
        let total: f64 = (-n..=n).map(|j| mass(b, j).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-11, "b = {b}: {total}");
    }
}

#[test]
fn rejects_bad_parameters() {
    for b in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        assert!(partition_function(b).is_err());
        assert!(mass(b, 0).is_err());
    }
    assert!("const:-1".parse::<BetaProfile>().is_err());
    assert!("ell:1,2;ratio:3".parse::<BetaProfile>().is_err());
}

#[test]
fn one_coordinate_radon_nikodym_has_unit_mean() {
    let g = ZfrElement::new(SDPartition::new(vec![Dyadic::zero(), Dyadic::half()]).unwrap(), vec![0, 3]).unwrap();
    let beta = BetaProfile::Tau(0.7);
    let b = beta.eval(&Dyadic::half());
    let n = span(b) + 6;
    let mean: f64 = (-n..=n)
        .map(|j| {
            let x = BTreeMap::from([(Dyadic::zero(), 0), (Dyadic::half(), j)]);
            mass(b, j).unwrap() * radon_nikodym(&g, &beta, &x, 1).unwrap()
        })
        .sum();
    assert!((mean - 1.0).abs() < 1e-12, "{mean}");
    // it is the ratio of the shifted mass to the original one
    let x = BTreeMap::from([(Dyadic::zero(), 0), (Dyadic::half(), 2)]);
    let ratio = mass(b, 2 - 3).unwrap() / mass(b, 2).unwrap();
    assert!(close(radon_nikodym(&g, &beta, &x, 1).unwrap(), ratio, 1e-12));
    assert!(radon_nikodym(&g, &beta, &BTreeMap::new(), 1).is_err());
}

#[test]
fn rotation_support_stays_on_the_grid() {
    for (n, k) in [(1, 1), (2, 1), (3, 5), (4, -3)] {
        let r = rotation(n, k);
        let grid = enumerate_dyadics(8);
        let support = rotation_support(&r, 8).unwrap();
        assert!(!support.is_empty());
        assert!(support.iter().all(|d| grid.contains(d)));
        assert!(support.windows(2).all(|w| w[0] < w[1]));
    }
    assert!(rotation_support(&rotation(3, 0), 8).unwrap().is_empty());
    assert!(rotation_support(&VElement::generator_a(), 8).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn poisson_identity(log_b in -1.5f64..2.5) {
        let b = 10f64.powf(log_b);
        let z = partition_function(b).unwrap();
        prop_assert!(close(z, direct_z(b), 1e-13), "{} vs {}", z, direct_z(b));
        prop_assert!(close(z, poisson_z(b), 1e-13), "{} vs {}", z, poisson_z(b));
        prop_assert!(close(mass(b, 3).unwrap(), mass(b, -3).unwrap(), 1e-15));
    }

    #[test]
    fn hellinger_bounds(log_b in -2.0f64..2.0, k in -6i64..=6, log_a in -2.0f64..2.0) {
        let (a, b) = (10f64.powf(log_a), 10f64.powf(log_b));
        let rho = hellinger_translate(b, k).unwrap();
        prop_assert!(rho > 0.0 && rho <= 1.0);
        prop_assert_eq!(rho == 1.0, k == 0);
        let n = span(b) + k.abs();
        let brute: f64 = (-n..=n).map(|j| (mass(b, j).unwrap() * mass(b, j - k).unwrap()).sqrt()).sum();
        prop_assert!((rho - brute).abs() < 1e-12, "{} vs {}", rho, brute);
        let pair = hellinger_pair(a, b).unwrap();
        prop_assert!(pair > 0.0 && pair <= 1.0);
        prop_assert!(close(pair, hellinger_pair(b, a).unwrap(), 1e-14));
        prop_assert!((hellinger_pair(a, a).unwrap() - 1.0).abs() < 1e-15);
        let n = span(a.min(b));
        let brute: f64 = (-n..=n).map(|j| (mass(a, j).unwrap() * mass(b, j).unwrap()).sqrt()).sum();
        prop_assert!((pair - brute).abs() < 1e-12, "{} vs {}", pair, brute);
    }

    #[test]
    fn kakutani_sums_never_decrease(tau in 0.1f64..2.5, which in 0u8..4, k in 1i64..4) {
        let beta = BetaProfile::Tau(tau);
        let transform = match which {
            0 => Transform::Translate(ZfrElement::constant(k)),
            1 => Transform::Halve,
            2 => Transform::Rotate(2, k),
            _ => Transform::Translate("{0,1/2}@0,1".parse().unwrap()),
        };
        let report = kakutani_series(&beta, &transform, 10);
        prop_assert!(report.terms_by_level.iter().all(|&t| t >= 0.0));
        prop_assert!(report.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(report.max_term_by_level.iter().all(|&t| t >= 0.0));
    }

    #[test]
    fn semifinite_terms(log_b in -1.0f64..1.5, t in -8.0f64..8.0) {
        let b = 10f64.powf(log_b);
        let n = span(b);
        let sum: Complex<f64> = (-n..=n)
            .map(|j| (-Complex::new(b, b * t) * ((j * j) as f64 / 2.0)).exp())
            .sum();
        let expected = 1.0 - sum.norm() / direct_z(b);
        let term = semifinite_term(b, t).unwrap();
        prop_assert!((term - expected).abs() < 1e-12, "{} vs {}", term, expected);
        prop_assert!((0.0..1.0).contains(&term));
        // small temperatures reach the limit
        let limit = 1.0 - (1.0 + t * t).powf(-0.25);
        for small in [1e-3, 1e-5, 1e-8] {
            prop_assert!((semifinite_term(small, t).unwrap() - limit).abs() < 1e-10);
        }
    }
}
