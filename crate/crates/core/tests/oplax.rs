use fibkit::corpus;
use fibkit::fibration::{fib_hom, find_fibred_equivalence, fibrewise_op, yoneda};
use fibkit::oplax::{
    arrows_over_composite_bijection, has_invertible_cell, local_hom_on_1cell, local_hom_on_2cell, oplax_base_change,
    whisker_slice, OplaxBaseChange, SliceSums,
};
use fibkit::{DisplayedCat, FibFunctor, FibredCat, FinFunctor, Obj, VertNat};

fn bang_two() -> FibredCat {
    FibredCat::over_point(&corpus::walking_arrow())
}

/// The pairs `(p, E)` of the integrity suite.
fn instances() -> Vec<(FibredCat, FibredCat)> {
    let two = corpus::walking_arrow();
    let e_two = FibredCat::over_point(&two);
    let e_two_op = fibrewise_op(&e_two).unwrap().fibred;
    let p = bang_two();
    let e_over_pt = |e: &FibredCat| rehome(e, p.base());
    let yb = yoneda(&two, Obj(1));
    let fibs = corpus::fibrations_over_two();
    let mut out = vec![(p.clone(), e_over_pt(&e_two)), (p.clone(), e_over_pt(&e_two_op))];
    for e in [&fibs[2], &fibs[3], &fibs[4]] {
        out.push((yb.clone(), rehome(e, yb.base())));
    }
    out
}

/// The same fibred category with its base replaced by an equal category.
fn rehome(e: &FibredCat, base: &std::sync::Arc<fibkit::FinCat>) -> FibredCat {
    let d = e.display().retarget(e.total(), base);
    FibredCat::new(DisplayedCat::new(d), e.cleaving().clone()).unwrap()
}

#[test]
fn whisker_examples() {
    let two = corpus::walking_arrow();
    let p = bang_two();
    let w = whisker_slice(&p, two.identity(Obj(0))).unwrap();
    assert_eq!(*w.map(), FinFunctor::identity(w.dom().total()));
    let u = two.arrow("u").unwrap();
    let w = whisker_slice(&p, u).unwrap();
    let (s, t) = (w.dom().total(), w.cod().total());
    let x = s.object("(a,1_a)").unwrap();
    assert_eq!(t.object_name(w.map().obj(x)), "(a,u)");
    let three = corpus::three_chain();
    let q = FibredCat::over_point(&three);
    let sums = SliceSums::new(&q).unwrap();
    for (g, f) in three.composable_pairs() {
        let lhs = sums.whisker(g).map().after(sums.whisker(f).map());
        assert_eq!(lhs, *sums.whisker(three.compose(g, f)).map());
    }
}

#[test]
fn fibre_sizes_over_the_point() {
    let (p, e) = instances().remove(0);
    let n = oplax_base_change(&p, &e).unwrap();
    let st = n.stats();
    assert_eq!(st.fibre_objects, vec![("a".to_string(), 2), ("b".to_string(), 3)]);
    assert!(st.split && st.lifts_cartesian);
}

#[test]
fn identity_base_change_is_equivalent() {
    for e in corpus::fibrations_over_two() {
        let p = FibredCat::identity(e.base());
        let n = oplax_base_change(&p, &e).unwrap();
        assert!(find_fibred_equivalence(&n.fibred, &e).unwrap().is_some(), "{e:?}");
    }
}

#[test]
fn terminal_target_gives_singleton_fibres() {
    let pt = corpus::terminal();
    for a in corpus::small_categories() {
        let p = FibredCat::over_point(&a);
        let e = rehome(&FibredCat::over_point(&pt), p.base());
        let n = oplax_base_change(&p, &e).unwrap();
        for x in a.objects() {
            assert_eq!(n.fibred.objects_over(x).count(), 1);
        }
    }
}

#[test]
fn restriction_examples() {
    let (p, e) = instances().remove(0);
    let n = oplax_base_change(&p, &e).unwrap();
    let two = p.total();
    let u = two.arrow("u").unwrap();
    for x in n.fibred.total().objects() {
        let at = n.object(x).at;
        assert_eq!(n.restrict(x, two.identity(at)), x);
    }
    let over_b: Vec<Obj> = n.fibred.objects_over(Obj(1)).collect();
    let images: Vec<Obj> = over_b.iter().map(|&x| n.restrict(x, u)).collect();
    assert_eq!(images.len(), 3);
    let mut distinct = images.clone();
    distinct.sort();
    distinct.dedup();
    assert_eq!(distinct.len(), 2);
    for &x in &over_b {
        let r = n.restrict(x, u);
        let base = n.object(x).functor.map();
        let sb = n.sums.sum(Obj(1)).total();
        let au = sb.object("(a,u)").unwrap();
        let img = n.object(r).functor.map().obj(Obj(0));
        assert_eq!(img, base.obj(au));
    }
}

#[test]
fn restriction_is_strict() {
    let three = corpus::three_chain();
    let p = FibredCat::over_point(&three);
    let e = rehome(&FibredCat::over_point(&corpus::walking_arrow()), p.base());
    let n = oplax_base_change(&p, &e).unwrap();
    for (g, f) in three.composable_pairs() {
        for x in n.fibred.objects_over(three.tgt(g)) {
            assert_eq!(n.restrict(n.restrict(x, g), f), n.restrict(x, three.compose(g, f)));
        }
    }
}

#[test]
fn composite_bijection() {
    for (p, e) in instances() {
        let n = oplax_base_change(&p, &e).unwrap();
        let a = p.total();
        for (g, f) in a.composable_pairs() {
            for e0 in n.fibred.objects_over(a.src(f)) {
                for e2 in n.fibred.objects_over(a.tgt(g)) {
                    let c = arrows_over_composite_bijection(&n, e0, e2, f, g);
                    assert!(c.bijective);
                    assert_eq!(c.over_composite, c.into_restriction);
                }
            }
        }
    }
}

#[test]
fn lifts_are_cartesian_and_split() {
    for (p, e) in instances() {
        let n = oplax_base_change(&p, &e).unwrap();
        assert!(n.fibred.is_split(), "{:?}", n.fibred.split_failure());
        for (_, l) in n.fibred.cleaving().sorted() {
            assert!(n.fibred.is_cartesian(l));
        }
    }
}

#[test]
fn cartesian_iff_invertible_cell() {
    for (p, e) in instances() {
        let n = oplax_base_change(&p, &e).unwrap();
        for f in n.fibred.total().arrows() {
            assert_eq!(n.fibred.is_cartesian(f), has_invertible_cell(&n, f));
        }
    }
}

#[test]
fn fibres_match_hom_categories() {
    for (p, e) in instances() {
        let n = oplax_base_change(&p, &e).unwrap();
        let st = n.stats();
        for x in p.total().objects() {
            let h = fib_hom(n.sums.sum(x), &e).unwrap();
            assert_eq!(st.fibre_objects[x.0].1, h.cat.n_objects());
            assert_eq!(st.fibre_arrows[x.0].1, h.cat.n_arrows());
        }
    }
}

fn self_maps(e: &FibredCat) -> Vec<FibFunctor> {
    fibkit::fibration::enumerate_fibred_functors(e, e)
        .unwrap()
        .into_iter()
        .map(|m| FibFunctor::new(e.clone(), e.clone(), m).unwrap())
        .collect()
}

fn check_functoriality(n: &OplaxBaseChange) {
    let e = n.e.clone();
    let id = local_hom_on_1cell(n, n, &FibFunctor::identity(&e)).unwrap();
    assert_eq!(*id.map(), FinFunctor::identity(n.fibred.total()));
    let maps = self_maps(&e);
    for f in &maps {
        let nf = local_hom_on_1cell(n, n, f).unwrap();
        assert!(nf.preserves_cleaving());
        for g in &maps {
            let ng = local_hom_on_1cell(n, n, g).unwrap();
            let ngf = local_hom_on_1cell(n, n, &g.after(f)).unwrap();
            assert_eq!(*ngf.map(), ng.map().after(nf.map()));
        }
    }
    for f0 in &maps {
        for f1 in &maps {
            let (g0, g1) = (local_hom_on_1cell(n, n, f0).unwrap(), local_hom_on_1cell(n, n, f1).unwrap());
            for t in fibkit::fibration::enumerate_vertical(f0.map(), f1.map(), e.displayed()).unwrap() {
                let v = VertNat::new(f0.clone(), f1.clone(), t.components().to_vec()).unwrap();
                let lifted = local_hom_on_2cell(n, n, &v, &g0, &g1).unwrap();
                if t.is_identity() {
                    assert!(lifted.nat().is_identity());
                }
                for f2 in &maps {
                    let g2 = local_hom_on_1cell(n, n, f2).unwrap();
                    for t2 in fibkit::fibration::enumerate_vertical(f1.map(), f2.map(), e.displayed()).unwrap() {
                        let v2 = VertNat::new(f1.clone(), f2.clone(), t2.components().to_vec()).unwrap();
                        let lhs = local_hom_on_2cell(n, n, &v2.after(&v), &g0, &g2).unwrap();
                        let rhs = local_hom_on_2cell(n, n, &v2, &g1, &g2).unwrap().after(&lifted);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn local_hom_is_strictly_functorial() {
    for (p, e) in instances().into_iter().take(2) {
        check_functoriality(&oplax_base_change(&p, &e).unwrap());
    }
}
