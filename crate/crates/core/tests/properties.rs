mod common;

use std::sync::Arc;

use common::{desk_categories, naive_functors, preorder};
use fibkit::corpus;
use fibkit::fibration::{find_fibred_equivalence, fibrewise_op, straighten, unstraighten, yoneda};
use fibkit::fincat::{enumerate_functors, enumerate_nat_trans, find_isomorphism, slice};
use fibkit::nerve::{elements, nerve_adjunction_check, sieves};
use fibkit::oplax::{has_invertible_cell, oplax_base_change};
use fibkit::saturation::cofree_fibration;
use fibkit::{DisplayedCat, FibredCat, FinCat, FinFunctor, Obj, Presheaf};
use proptest::prelude::*;
use proptest::sample::{select, Index};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn any_cat() -> impl Strategy<Value = Arc<FinCat>> {
    select(desk_categories())
}

fn any_preorder() -> impl Strategy<Value = Arc<FinCat>> {
    (1usize..=3, 0u32..512)
        .prop_map(|(n, bits)| preorder(n, bits & ((1 << (n * n)) - 1)))
        .prop_filter("at most eight arrows", |c| c.n_arrows() <= 8)
}

fn small_pair_cat() -> impl Strategy<Value = Arc<FinCat>> {
    select(vec![
        corpus::terminal(),
        corpus::walking_arrow(),
        corpus::parallel_pair(),
        corpus::walking_iso(),
        corpus::idempotent(),
        corpus::three_chain(),
    ])
}

/// A displayed category over `𝟚` with a non-empty total.
fn displayed_over_two() -> impl Strategy<Value = DisplayedCat> {
    (any_cat(), any::<Index>()).prop_filter_map("no functor into 2", |(c, i)| {
        let two = corpus::walking_arrow();
        let fs = enumerate_functors(&c, &two).ok()?;
        (c.n_objects() > 0 && !fs.is_empty()).then(|| DisplayedCat::new(i.get(&fs).clone()))
    })
}

fn fibration_over_two() -> impl Strategy<Value = FibredCat> {
    displayed_over_two().prop_filter_map("not a fibration", |x| FibredCat::find(x).ok())
}

fn presheaf_on_two() -> impl Strategy<Value = Presheaf> {
    select(corpus::presheaves_on_two(2))
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn opposite_twice_is_isomorphic(c in any_cat()) {
        let cc = Arc::new(c.opposite().opposite());
        prop_assert!(find_isomorphism(&c, &cc).unwrap().is_some());
    }

    #[test]
    fn point_picks_objects(d in any_cat()) {
        prop_assert_eq!(enumerate_functors(&corpus::terminal(), &d).unwrap().len(), d.n_objects());
    }

    #[test]
    fn enumerated_transformations_are_natural(c in small_pair_cat(), d in small_pair_cat(), i in any::<Index>(), j in any::<Index>()) {
        let fs = enumerate_functors(&c, &d).unwrap();
        prop_assume!(!fs.is_empty());
        let (f, g) = (i.get(&fs), j.get(&fs));
        for t in enumerate_nat_trans(f, g).unwrap() {
            for a in c.arrows() {
                let left = d.compose(g.arr(a), t.component(c.src(a)));
                let right = d.compose(t.component(c.tgt(a)), f.arr(a));
                prop_assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn composites_of_functors_are_functors(c in small_pair_cat(), d in small_pair_cat(), i in any::<Index>(), j in any::<Index>()) {
        let fs = enumerate_functors(&c, &d).unwrap();
        let gs = enumerate_functors(&d, &c).unwrap();
        prop_assume!(!fs.is_empty() && !gs.is_empty());
        let (f, g) = (i.get(&fs), j.get(&gs));
        let gf = g.after(f);
        let valid = FinFunctor::new(c.clone(), c.clone(), gf.obj_map().to_vec(), gf.arr_map().to_vec());
        prop_assert!(valid.is_ok());
        prop_assert_eq!(gf.after(&FinFunctor::identity(&c)).key(), gf.key());
    }

    #[test]
    fn preorder_functors_match_brute_force(c in any_preorder(), d in any_preorder()) {
        prop_assert_eq!(enumerate_functors(&c, &d).unwrap().len(), naive_functors(&c, &d).len());
    }

    #[test]
    fn sieves_are_closed_and_include_the_maximal(c in any_cat()) {
        for x in c.objects() {
            let ss = sieves(&c, x).unwrap();
            prop_assert!(ss.iter().any(|s| s.arrows.len() == c.arrows_into(x).len()));
            prop_assert!(ss.iter().any(|s| s.arrows.is_empty()));
            for s in &ss {
                for &f in &s.arrows {
                    for &g in c.arrows_into(c.src(f)) {
                        prop_assert!(s.contains(c.compose(f, g)));
                    }
                }
            }
        }
    }

    #[test]
    fn elements_of_representables_are_slices(c in any_cat()) {
        for x in c.objects() {
            let el = elements(&Presheaf::representable(&c, x));
            prop_assert!(find_isomorphism(&el.cat, &slice(&c, x).cat).unwrap().is_some());
        }
    }

    #[test]
    fn chosen_lifts_are_cartesian(x in displayed_over_two()) {
        match FibredCat::find(x.clone()) {
            Ok(e) => {
                for &l in e.cleaving().sorted().values() {
                    prop_assert!(e.is_cartesian(l));
                }
            }
            Err(_) => prop_assert!(!x.is_fibration()),
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn nerve_adjunction_holds(x in presheaf_on_two(), dual in any::<bool>()) {
        let d = if dual { corpus::terminal() } else { corpus::walking_arrow() };
        let r = nerve_adjunction_check(&x, &d, std::slice::from_ref(&x), &[corpus::terminal()]).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn straightening_round_trips(e in fibration_over_two()) {
        let back = unstraighten(&straighten(&e).unwrap().ps).unwrap().fibred;
        prop_assert!(find_fibred_equivalence(&e, &back).unwrap().is_some());
    }

    #[test]
    fn fibrewise_op_is_an_involution(e in fibration_over_two()) {
        let twice = fibrewise_op(&fibrewise_op(&e).unwrap().fibred).unwrap().fibred;
        prop_assert!(find_fibred_equivalence(&e, &twice).unwrap().is_some());
    }

    #[test]
    fn oplax_base_change_is_split_and_cartesian(e in fibration_over_two(), i in 0usize..3) {
        let two = e.base();
        let p = [FibredCat::identity(two), yoneda(two, Obj(1)), corpus::fibrations_over_two()[3].clone()][i].clone();
        let n = oplax_base_change(&p, &e).unwrap();
        let stats = n.stats();
        prop_assert!(stats.lifts_cartesian && stats.split);
        for f in n.fibred.total().arrows() {
            prop_assert_eq!(n.fibred.is_cartesian(f), has_invertible_cell(&n, f));
        }
    }

    #[test]
    fn cofree_over_the_point_recovers_the_input(c in any_cat()) {
        let pt = corpus::terminal();
        let x = DisplayedCat::new(FinFunctor::to_terminal(&c, &pt));
        let n = cofree_fibration(&x).unwrap();
        prop_assert!(find_fibred_equivalence(&n.result, &FibredCat::find(x).unwrap()).unwrap().is_some());
    }
}
