use std::sync::Arc;

use descent_kit::bilimits::pseudopullback;
use descent_kit::descent::{classify, DescentClass};
use descent_kit::fincat::FullSubcategory;
use descent_kit::monadic::benabou_roubaud;
use descent_kit::theorems::{generate_instances, GenParams, Kind};
use descent_kit::{Category, DynCategory, FinFunction, FinSet, FinSetCat, Functor, PullbackCategory};
use proptest::prelude::*;

/// A map `range(e) → range(b)`, `b ≥ 1` whenever `e ≥ 1`.
fn map(max: usize) -> impl Strategy<Value = FinFunction> {
    (0..=max, 1..=max).prop_flat_map(|(e, b)| {
        prop::collection::vec(0..b, e).prop_map(move |v| {
            FinFunction::new(FinSet::range(e), FinSet::range(b), v).unwrap()
        })
    })
}

fn cospan(max: usize) -> impl Strategy<Value = (FinFunction, FinFunction)> {
    (0..=max, 0..=max, 1..=max).prop_flat_map(|(x, y, z)| {
        (prop::collection::vec(0..z, x), prop::collection::vec(0..z, y)).prop_map(move |(f, g)| {
            (
                FinFunction::new(FinSet::range(x), FinSet::range(z), f).unwrap(),
                FinFunction::new(FinSet::range(y), FinSet::range(z), g).unwrap(),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn effective_exactly_when_surjective(p in map(3)) {
        let hits = (0..p.cod().len()).all(|b| p.indices().contains(&b));
        let class = classify(&p, 3).unwrap().class;
        let expected = if hits { DescentClass::Effective } else { DescentClass::NotAlmost };
        prop_assert_eq!(class, expected);
    }

    #[test]
    fn pullback_is_the_set_of_matching_pairs((f, g) in cospan(3)) {
        let cone = FinSetCat.pullback(&f, &g).unwrap();
        let pairs: Vec<(usize, usize)> = (0..f.dom().len())
            .flat_map(|x| (0..g.dom().len()).map(move |y| (x, y)))
            .filter(|&(x, y)| f.apply(x) == g.apply(y))
            .collect();
        prop_assert_eq!(cone.apex.len(), pairs.len());
        let mut got: Vec<(usize, usize)> =
            (0..cone.apex.len()).map(|k| (cone.pr1.apply(k), cone.pr2.apply(k))).collect();
        got.sort();
        prop_assert_eq!(got, pairs);
    }

    #[test]
    fn descent_data_count_matches_algebras(p in map(2)) {
        let r = benabou_roubaud(&p, 2).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
        prop_assert_eq!(r.desc_objects, r.em_iso_classes);
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>()) {
        let params = GenParams { max_size: 3, exhaustive: false, samples: 8, seed };
        let labels = |k| -> Vec<String> {
            generate_instances(k, &params).unwrap().iter().map(|i| i.label()).collect()
        };
        prop_assert_eq!(labels(Kind::Galois), labels(Kind::Galois));
        prop_assert_eq!(labels(Kind::Embedding), labels(Kind::Embedding));
    }
}

/// `(c, d, φ) ↦ (d, c, φ⁻¹)` identifies `PsPb(F, G)` with `PsPb(G, F)`.
#[test]
fn pseudopullback_is_symmetric() {
    let sets: DynCategory<FinSet, FinFunction> = Arc::new(FinSetCat);
    let small: DynCategory<FinSet, FinFunction> = Arc::new(FullSubcategory::new(
        "FinSet≤1",
        sets.clone(),
        |x: &FinSet| x.len() <= 1,
    ));
    let j = Functor::inclusion(small, sets.clone());
    let id = Functor::identity(sets);
    let fg = pseudopullback(id.clone(), j.clone()).unwrap();
    let gf = pseudopullback(j, id).unwrap();

    let bound = 2;
    let left = fg.objects(bound).items;
    let right = gf.objects(bound).items;
    assert_eq!(left.len(), right.len());
    let swap = |x: &descent_kit::bilimits::CommaObj<FinSet, FinSet, FinFunction>| {
        gf.object(x.d.clone(), x.c.clone(), x.phi.inverse().unwrap())
            .expect("the swapped triple is an object")
    };
    for x in &left {
        assert!(right.contains(&swap(x)), "{x:?}");
        for y in &left {
            assert_eq!(fg.hom(x, y).len(), gf.hom(&swap(x), &swap(y)).len(), "{x:?} → {y:?}");
        }
    }
}
