use std::collections::BTreeSet;
use std::sync::Arc;

use conic_zariski::covers::gf2::Gf2Vec;
use conic_zariski::covers::{canonical_form, enumerate_pic2, tensor, Component, GluingData, NodalArrangement};
use conic_zariski::geometry::{Conic, ProjLine};
use conic_zariski::numeric::Tolerances;
use proptest::prelude::*;

fn component() -> impl Strategy<Value = Component> {
    prop_oneof![
        3 => proptest::array::uniform3(-2.0f64..2.0).prop_map(|v| Component::Line(ProjLine::from_f64(v, 128))),
        1 => proptest::array::uniform6(-2.0f64..2.0).prop_map(|k| Component::Conic(Conic::from_f64(k, 128))),
    ]
}

fn node_bound(cs: &[Component]) -> usize {
    let mut n = 0;
    for i in 0..cs.len() {
        for j in (i + 1)..cs.len() {
            n += (cs[i].degree() * cs[j].degree()) as usize;
        }
    }
    n
}

fn arrangement() -> impl Strategy<Value = NodalArrangement> {
    proptest::collection::vec(component(), 1..=6)
        .prop_filter("at most 14 nodes", |cs| node_bound(cs) <= 14)
        .prop_filter_map("nodal", |cs| {
            if cs.iter().any(|c| matches!(c, Component::Conic(q) if q.is_singular(1e-3))) {
                return None;
            }
            NodalArrangement::new(cs, &Tolerances::default()).ok()
        })
}

/// Orbits of all sign vectors under flips, by enumerating every flip
/// combination.
fn brute_force_classes(a: &NodalArrangement) -> usize {
    let n = a.node_count();
    let rows = a.incidence_matrix();
    let mut span = Vec::new();
    for mask in 0u64..(1 << rows.len()) {
        let mut v = Gf2Vec::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v.xor_assign(r);
            }
        }
        span.push(v);
    }
    let mut minima = BTreeSet::new();
    for x in 0u64..(1 << n) {
        let v = Gf2Vec::from_index(x, n);
        let m = span.iter().map(|s| v.xor(s)).min().unwrap();
        minima.insert(m);
    }
    minima.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn class_count_matches_brute_force(a in arrangement()) {
        let a = Arc::new(a);
        let classes = enumerate_pic2(&a);
        let rank = a.flip_space().rank();
        prop_assert_eq!(classes.len(), 1usize << (a.node_count() - rank));
        prop_assert_eq!(classes.len(), brute_force_classes(&a));
    }

    #[test]
    fn classes_form_a_group_under_tensor(a in arrangement()) {
        let a = Arc::new(a);
        prop_assume!(a.node_count() <= 10);
        let classes = enumerate_pic2(&a);
        prop_assert!(classes[0].is_trivial());
        for x in &classes {
            for y in &classes {
                let t = canonical_form(&tensor(&x.canonical, &y.canonical).unwrap());
                prop_assert!(classes.contains(&t));
            }
            // every element is its own inverse
            prop_assert!(canonical_form(&tensor(&x.canonical, &x.canonical).unwrap()).is_trivial());
        }
    }

    #[test]
    fn canonical_form_is_constant_on_orbits(a in arrangement(), x in any::<u64>(), mask in any::<u64>()) {
        let a = Arc::new(a);
        let n = a.node_count();
        prop_assume!(n > 0);
        let v = Gf2Vec::from_index(x & ((1u64 << n) - 1), n);
        let k = GluingData::new(a.clone(), v).unwrap();
        let mut f = k.clone();
        for i in 0..a.components().len() {
            if mask >> i & 1 == 1 {
                f = conic_zariski::covers::flip(&f, i);
            }
        }
        prop_assert_eq!(canonical_form(&k), canonical_form(&f));
    }
}
