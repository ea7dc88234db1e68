mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;

use tglab::dyadic::{Dyadic, DyadicArc};
use tglab::forest::{compose_tree, leaf_breakpoints, Tree};
use tglab::lattice::{
    adjoint, coarsen, embed_element, gauge_act_config, gauge_act_element, holonomy, holonomy_inverse,
    jones_act_config, jones_act_element, multiply_elements, refine_to, Config, CrossedElement, GaugeField,
    GroupSpec,
};
use tglab::sample::{self, Subgroup};
use tglab::thompson::VElement;

fn group(k: u32) -> GroupSpec {
    GroupSpec::new(k).unwrap()
}

/// A gauge field on the union of `t` and the domain of `v`, so that both its
/// restriction to `t` and its transport along `v` are defined.
fn field_for(rng: &mut impl Rng, g: GroupSpec, t: &Tree, v: &VElement) -> GaugeField {
    sample::gauge_field(rng, g, &t.union(v.domain()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn holonomy_is_a_bijection(seed: u64, k in 1u32..=7, leaves in 1usize..=8) {
        let mut rng = sample::rng(seed);
        let g = group(k);
        let t = sample::tree(&mut rng, leaves);
        let x = sample::config(&mut rng, g, &t);
        prop_assert_eq!(holonomy_inverse(g, &holonomy(&x)).unwrap(), x);
        let h: BTreeMap<Dyadic, u32> = leaf_breakpoints(&t).into_iter().map(|d| (d, rng.gen_range(0..k))).collect();
        prop_assert_eq!(holonomy(&holonomy_inverse(g, &h).unwrap()), h);
    }

    #[test]
    fn holonomy_conjugates_the_gauge_action(seed: u64, k in 1u32..=7, leaves in 1usize..=8) {
        let mut rng = sample::rng(seed);
        let g = group(k);
        let t = sample::tree(&mut rng, leaves);
        let x = sample::config(&mut rng, g, &t);
        let s = sample::gauge_field(&mut rng, g, &t);
        let h = holonomy(&x);
        let moved = holonomy(&gauge_act_config(&s, &x).unwrap());
        let s0 = s.at(None).unwrap();
        for (d, value) in &h {
            prop_assert_eq!(moved[d], g.sub(g.add(s.at(Some(d)).unwrap(), *value), s0));
        }
    }

    #[test]
    fn coarsening_commutes_with_gauge(seed: u64, k in 1u32..=6) {
        let mut rng = sample::rng(seed);
        let g = group(k);
        let leaves = rng.gen_range(1..=4);
        let coarse = sample::tree(&mut rng, leaves);
        let carets = rng.gen_range(0..=4);
        let f = sample::forest(&mut rng, leaves, carets);
        let fine = compose_tree(&f, &coarse).unwrap();
        let x = sample::config(&mut rng, g, &fine);
        let s = sample::gauge_field(&mut rng, g, &fine);
        let left = coarsen(&gauge_act_config(&s, &x).unwrap(), &f).unwrap();
        let right = gauge_act_config(&s.restrict(&coarse).unwrap(), &coarsen(&x, &f).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn jones_and_gauge_on_configs(seed: u64, k in 1u32..=6) {
        let mut rng = sample::rng(seed);
        let g = group(k);
        let leaves = rng.gen_range(1..=6);
        let t = sample::tree(&mut rng, leaves);
        let vl = rng.gen_range(1..=5);
        let v = sample::thompson_element(&mut rng, Subgroup::T, vl, 4);
        let x = sample::config(&mut rng, g, &t);
        let field = field_for(&mut rng, g, &t, &v);
        let s = field.restrict(&t).unwrap();
        let vx = jones_act_config(&v, &x);
        let s_moved = field.transport(&v, vx.tree()).unwrap();
        prop_assert_eq!(
            jones_act_config(&v, &gauge_act_config(&s, &x).unwrap()),
            gauge_act_config(&s_moved, &vx).unwrap()
        );
        // the Jones action respects the group structure of configurations
        let w = sample::thompson_element(&mut rng, Subgroup::V, vl, 4);
        let on_fine = t.union(w.domain());
        let xf = sample::config(&mut rng, g, &on_fine);
        let once = jones_act_config(&w, &xf);
        prop_assert_eq!(jones_act_config(&w.inverse(), &once), xf);
    }

    #[test]
    fn jones_and_gauge_on_elements(seed: u64, k in 2u32..=3) {
        let mut rng = sample::rng(seed);
        let g = group(k);
        let leaves = rng.gen_range(1..=3);
        let t0 = sample::tree(&mut rng, leaves);
        let vl = rng.gen_range(1..=4);
        let v = sample::thompson_element(&mut rng, Subgroup::T, vl, 3);
        let t = t0.union(v.domain());
        let terms = rng.gen_range(1..=2);
        let x = refine_to(&sample::element(&mut rng, g, &t0, terms, 3), &t).unwrap();
        let s = sample::gauge_field(&mut rng, g, &t);
        let vx = jones_act_element(&v, &x).unwrap();
        let s_moved = s.transport(&v, vx.tree()).unwrap();
        let left = jones_act_element(&v, &gauge_act_element(&s, &x).unwrap()).unwrap();
        let right = gauge_act_element(&s_moved, &vx).unwrap();
        prop_assert!(left.equivalent(&right).unwrap());
    }

    #[test]
    fn algebra_matches_matrices(seed: u64, k in 1u32..=4, leaves in 1usize..=3) {
        let mut rng = sample::rng(seed);
        let g = group(k);
        let t = sample::tree(&mut rng, leaves);
        let x = sample::element(&mut rng, g, &t, 2, 3);
        let y = sample::element(&mut rng, g, &t, 2, 3);
        let z = sample::element(&mut rng, g, &t, 1, 3);
        let xy = multiply_elements(&x, &y).unwrap();
        prop_assert_eq!(common::matrix(&xy), common::mul(&common::matrix(&x), &common::matrix(&y)));
        prop_assert_eq!(common::matrix(&adjoint(&x)), common::dagger(&common::matrix(&x)));
        prop_assert_eq!(
            multiply_elements(&xy, &z).unwrap(),
            multiply_elements(&x, &multiply_elements(&y, &z).unwrap()).unwrap()
        );
        prop_assert_eq!(adjoint(&adjoint(&x)), x.clone());
        prop_assert_eq!(adjoint(&xy), multiply_elements(&adjoint(&y), &adjoint(&x)).unwrap());
        let one = CrossedElement::one(g, t.clone()).unwrap();
        prop_assert_eq!(multiply_elements(&one, &x).unwrap(), x.clone());
    }

    #[test]
    fn embedding_and_jones_are_homomorphisms(seed: u64, k in 2u32..=3) {
        let mut rng = sample::rng(seed);
        let g = group(k);
        let leaves = rng.gen_range(1..=3);
        let t = sample::tree(&mut rng, leaves);
        let x = sample::element(&mut rng, g, &t, 2, 3);
        let y = sample::element(&mut rng, g, &t, 2, 3);
        let xy = multiply_elements(&x, &y).unwrap();
        let carets = rng.gen_range(0..=2);
        let f = sample::forest(&mut rng, leaves, carets);
        let (ex, ey) = (embed_element(&x, &f).unwrap(), embed_element(&y, &f).unwrap());
        prop_assert_eq!(embed_element(&xy, &f).unwrap(), multiply_elements(&ex, &ey).unwrap());
        prop_assert_eq!(embed_element(&adjoint(&x), &f).unwrap(), adjoint(&ex));
        let vl = rng.gen_range(1..=3);
        let v = sample::thompson_element(&mut rng, Subgroup::V, vl, 3);
        let (vx, vy) = (jones_act_element(&v, &x).unwrap(), jones_act_element(&v, &y).unwrap());
        prop_assert!(jones_act_element(&v, &xy).unwrap().equivalent(&multiply_elements(&vx, &vy).unwrap()).unwrap());
        prop_assert!(jones_act_element(&v.inverse(), &vx).unwrap().equivalent(&x).unwrap());
    }

    #[test]
    fn localization_is_covariant(seed: u64, a in 0u64..8, len in 1u64..8) {
        let mut rng = sample::rng(seed);
        let g = group(2);
        let arc = DyadicArc::new(Dyadic::new(a, 3), Dyadic::new((a + len) % 8, 3));
        let t = Tree::complete(3);
        let x = sample::localized_element(&mut rng, g, &t, &arc, 2, 3);
        prop_assert!(x.supported_in(&arc));
        let vl = rng.gen_range(1..=5);
        let v = sample::thompson_element(&mut rng, Subgroup::T, vl, 3);
        let image = DyadicArc::new(v.act_dyadic(&arc.start), v.act_dyadic(&arc.end));
        prop_assert!(jones_act_element(&v, &x).unwrap().supported_in(&image));
    }
}

#[test]
fn json_round_trips() {
    let mut rng = sample::rng(5);
    let g = group(3);
    let t = sample::tree(&mut rng, 3);
    let x = sample::config(&mut rng, g, &t);
    let text = serde_json::to_string(&x).unwrap();
    assert_eq!(serde_json::from_str::<Config>(&text).unwrap(), x);
    let e = sample::element(&mut rng, g, &t, 2, 4);
    let text = serde_json::to_string(&e).unwrap();
    assert_eq!(serde_json::from_str::<CrossedElement>(&text).unwrap(), e);
    let bad = r#"{"group":"zmod:3","tree":"(* *)","values":[1]}"#;
    assert!(serde_json::from_str::<Config>(bad).is_err());
}
