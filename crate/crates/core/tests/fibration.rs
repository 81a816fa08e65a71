use std::sync::Arc;

use fibkit::corpus;
use fibkit::fibration::{
    compose_fibrations, find_cleaving, find_fibred_equivalence, fibrewise_ob, fibrewise_op, straighten, unstraighten,
    yoneda, PsFunctorToCat,
};
use fibkit::fincat::{find_isomorphism, slice};
use fibkit::{Arr, DisplayedCat, FibFunctor, FibredCat, FinCat, FinFunctor, Obj, Presheaf};

/// Brute force: count, for every (h, w) with display(h) = display(f) ∘ w,
/// the arrows g over w with f ∘ g = h.
fn cartesian_oracle(d: &DisplayedCat, f: Arr) -> bool {
    let (t, b) = (d.total(), d.base());
    let p = d.display();
    t.arrows().filter(|&h| t.tgt(h) == t.tgt(f)).all(|h| {
        b.arrows()
            .filter(|&w| b.src(w) == p.obj(t.src(h)) && b.tgt(w) == p.obj(t.src(f)))
            .filter(|&w| b.compose(p.arr(f), w) == p.arr(h))
            .all(|w| {
                t.arrows()
                    .filter(|&g| t.src(g) == t.src(h) && t.tgt(g) == t.src(f))
                    .filter(|&g| p.arr(g) == w && t.compose(f, g) == h)
                    .count()
                    == 1
            })
    })
}

fn to_point(c: &Arc<FinCat>) -> DisplayedCat {
    DisplayedCat::new(FinFunctor::to_terminal(c, &corpus::terminal()))
}

fn corpus_fibrations() -> Vec<FibredCat> {
    let mut out = corpus::fibrations_over_two();
    let three = corpus::three_chain();
    for x in three.objects() {
        out.push(yoneda(&three, x));
    }
    for c in corpus::small_categories() {
        out.push(FibredCat::over_point(&c));
    }
    out
}

fn fibred_equivalent(e: &FibredCat, f: &FibredCat) -> bool {
    find_fibred_equivalence(e, f).unwrap().is_some()
}

#[test]
fn identities_are_cartesian() {
    for e in corpus_fibrations() {
        for x in e.total().objects() {
            assert!(e.is_cartesian(e.total().identity(x)));
        }
    }
}

#[test]
fn cartesian_matches_oracle_on_corpus() {
    for e in corpus_fibrations() {
        for f in e.total().arrows() {
            assert_eq!(e.is_cartesian(f), cartesian_oracle(e.displayed(), f), "{:?} at {}", e, e.total().arrow_name(f));
        }
    }
    for c in corpus::small_categories() {
        let d = to_point(&c);
        for f in c.arrows() {
            assert_eq!(d.is_cartesian(f), cartesian_oracle(&d, f));
        }
    }
}

#[test]
fn triangle_in_domain_fibration_is_cartesian() {
    let two = corpus::walking_arrow();
    let e = yoneda(&two, Obj(1));
    let t = e.total();
    let tri = t.arrow("(u,1_b)").expect("the triangle from (a,u) to (b,1_b)");
    assert_eq!(t.object_name(t.src(tri)), "(a,u)");
    assert!(e.is_cartesian(tri));
    assert!(cartesian_oracle(e.displayed(), tri));
}

#[test]
fn arrow_over_point_is_not_cartesian() {
    // Over the point, cartesian means invertible; u : a → b in 𝟚 is not.
    let two = corpus::walking_arrow();
    let d = to_point(&two);
    let u = two.arrow("u").unwrap();
    assert!(!d.is_cartesian(u));
    let w = d.cartesian_failure(u).unwrap();
    assert_eq!((w.h.as_str(), w.factorisations), ("1_b", 0));
    let par = corpus::parallel_pair();
    let d = to_point(&par);
    let s = par.arrow("s").unwrap();
    assert!(!d.is_cartesian(s));
    assert!(!cartesian_oracle(&d, s));
}

#[test]
fn find_cleaving_examples() {
    let two = corpus::walking_arrow();
    let id = DisplayedCat::new(FinFunctor::identity(&two));
    let c = find_cleaving(&id).unwrap();
    for f in two.arrows() {
        assert_eq!(c.get(f, two.tgt(f)), Some(f));
    }
    let e = FibredCat::find(yoneda(&two, Obj(1)).displayed().clone()).unwrap();
    assert!(e.is_split());
    let pt = corpus::terminal();
    let at_b = FinFunctor::new(pt.clone(), two.clone(), vec![Obj(1)], vec![two.identity(Obj(1))]).unwrap();
    match find_cleaving(&DisplayedCat::new(at_b)) {
        Err(fibkit::Error::NotAFibration { arrow, object }) => assert_eq!((arrow.as_str(), object.as_str()), ("u", "pt")),
        other => panic!("expected a missing lift, got {other:?}"),
    }
}

#[test]
fn chosen_lifts_pass_the_oracle() {
    for e in corpus_fibrations() {
        for (_, l) in e.cleaving().sorted() {
            assert!(cartesian_oracle(e.displayed(), l));
        }
    }
}

#[test]
fn yoneda_examples() {
    let pt = corpus::terminal();
    let y = yoneda(&pt, Obj(0));
    assert!(fibred_equivalent(&y, &FibredCat::identity(&pt)));
    let two = corpus::walking_arrow();
    let yb = yoneda(&two, Obj(1));
    assert!(find_isomorphism(yb.total(), &two).unwrap().is_some());
    assert!(yb.display().is_isomorphism());
    let ya = yoneda(&two, Obj(0));
    assert_eq!((ya.total().n_objects(), ya.total().n_arrows()), (1, 1));
    assert_eq!(ya.over(Obj(0)), Obj(0));
}

#[test]
fn straighten_examples() {
    let two = corpus::walking_arrow();
    let s = straighten(&FibredCat::identity(&two)).unwrap();
    for x in two.objects() {
        assert_eq!(s.ps.fibre(x).n_objects(), 1);
        assert_eq!(s.ps.fibre(x).n_arrows(), 1);
    }
    let yb = yoneda(&two, Obj(1));
    let s = straighten(&yb).unwrap();
    let u = two.arrow("u").unwrap();
    let r = s.ps.reindex(u);
    let fb_b = &s.fibres[1];
    let fb_a = &s.fibres[0];
    let image = fb_a.total_obj(r.obj(fb_b.local_obj(yb.total().object("(b,1_b)").unwrap())));
    assert_eq!(yb.total().object_name(image), "(a,u)");
    for e in corpus_fibrations().into_iter().filter(FibredCat::is_split) {
        assert!(straighten(&e).unwrap().ps.is_strict());
    }
}

#[test]
fn round_trip_is_a_fibred_equivalence() {
    for e in corpus_fibrations() {
        let back = unstraighten(&straighten(&e).unwrap().ps).unwrap();
        assert!(fibred_equivalent(&back.fibred, &e), "{e:?}");
        assert!(fibred_equivalent(&e, &back.fibred), "{e:?}");
    }
}

#[test]
fn unstraighten_constant_point_is_identity_like() {
    let two = corpus::walking_arrow();
    let pt = corpus::terminal();
    let fibres = vec![pt.clone(), pt.clone()];
    let reindex = two.arrows().map(|_| FinFunctor::identity(&pt)).collect();
    let ps = PsFunctorToCat::strict(two.clone(), fibres, reindex).unwrap();
    let u = unstraighten(&ps).unwrap();
    assert!(u.fibred.display().is_isomorphism());
}

#[test]
fn unstraightened_presheaf_is_its_category_of_elements() {
    for x in corpus::presheaves_on_two(2) {
        let u = unstraighten(&PsFunctorToCat::from_presheaf(&x).unwrap()).unwrap();
        let t = u.fibred.total();
        let expected_arrows: usize = {
            let b = x.base();
            b.arrows().map(|f| x.size(b.tgt(f))).sum()
        };
        assert_eq!(t.n_objects(), x.sizes().iter().sum::<usize>());
        assert_eq!(t.n_arrows(), expected_arrows);
        assert!(u.fibred.is_split());
        let ob = fibrewise_ob(&u.fibred).unwrap();
        assert_eq!(ob.sizes(), x.sizes());
        for f in x.base().arrows() {
            assert_eq!(ob.action(f), x.action(f));
        }
    }
}

#[test]
fn fibrewise_op_examples() {
    let two = corpus::walking_arrow();
    let yb = yoneda(&two, Obj(1));
    let op = fibrewise_op(&yb).unwrap();
    assert!(fibred_equivalent(&op.fibred, &yb));
    let (_, proj) = corpus::product_projection();
    let product = FibredCat::find(DisplayedCat::new(proj)).unwrap();
    let op = fibrewise_op(&product).unwrap();
    let fibre = &op.straightening.ps.op().unwrap();
    let f0 = fibre.fibre(Obj(0));
    let orig = product.total();
    // The fibre over a is {00 → 01}; in the opposite the arrow runs 01 → 00.
    let a = f0.arrow("00_01").unwrap();
    assert_eq!(f0.object_name(f0.src(a)), "01");
    assert_eq!(orig.object_name(orig.src(orig.arrow("00_01").unwrap())), "00");
}

#[test]
fn fibrewise_op_is_an_involution() {
    for e in corpus_fibrations() {
        let twice = fibrewise_op(&fibrewise_op(&e).unwrap().fibred).unwrap().fibred;
        assert!(fibred_equivalent(&twice, &e), "{e:?}");
    }
}

#[test]
fn fibrewise_ob_examples() {
    let two = corpus::walking_arrow();
    let ob = fibrewise_ob(&FibredCat::identity(&two)).unwrap();
    assert_eq!(ob.sizes(), vec![1, 1]);
    let ob = fibrewise_ob(&yoneda(&two, Obj(1))).unwrap();
    assert_eq!(ob.sizes(), vec![1, 1]);
    let rep = Presheaf::representable(&two, Obj(1));
    assert_eq!(ob.sizes(), rep.sizes());
}

#[test]
fn compose_fibrations_examples() {
    let two = corpus::walking_arrow();
    let pt = corpus::terminal();
    let yb = yoneda(&two, Obj(1));
    let same = compose_fibrations(&yb, &FibredCat::identity(&two)).unwrap();
    assert_eq!(same.cleaving(), yb.cleaving());
    let same = compose_fibrations(&FibredCat::identity(yb.total()), &yb).unwrap();
    assert_eq!(same.cleaving(), yb.cleaving());
    let bang = FibredCat::over_point(&two);
    assert!(!bang.is_cartesian(two.arrow("u").unwrap()));
    let bang = FibredCat::find(to_point(yb.base())).unwrap();
    let composite = compose_fibrations(&yb, &bang).unwrap();
    assert!(Arc::ptr_eq(composite.base(), &pt) || **composite.base() == *pt);
    for (_, l) in composite.cleaving().sorted() {
        assert!(cartesian_oracle(composite.displayed(), l));
    }
    // Only isomorphisms are cartesian over the point.
    for f in composite.total().arrows() {
        assert_eq!(composite.is_cartesian(f), composite.total().is_iso(f));
    }
}

#[test]
fn pasting_lemma_on_corpus() {
    let three = corpus::three_chain();
    let s = slice(&three, Obj(2));
    let p = yoneda(&three, Obj(2));
    for x in s.cat.objects() {
        let q = yoneda(&s.cat, x);
        let c = compose_fibrations(&q, &p).unwrap();
        for (_, l) in c.cleaving().sorted() {
            assert!(cartesian_oracle(c.displayed(), l));
        }
    }
}

#[test]
fn cleavings_give_isomorphic_straightenings() {
    // Over the point with an isomorphism in the fibre there are several cleavings.
    let iso = corpus::walking_iso();
    let d = to_point(&iso);
    let first = FibredCat::find(d.clone()).unwrap();
    let mut lifts = std::collections::HashMap::new();
    lifts.insert((Arr(0), iso.object("a").unwrap()), iso.arrow("j").unwrap());
    lifts.insert((Arr(0), iso.object("b").unwrap()), iso.arrow("i").unwrap());
    let second = FibredCat::new(d, fibkit::fibration::Cleaving::from_map(lifts)).unwrap();
    assert!(!second.is_split());
    let (s1, s2) = (straighten(&first).unwrap(), straighten(&second).unwrap());
    assert!(find_isomorphism(s1.ps.fibre(Obj(0)), s2.ps.fibre(Obj(0))).unwrap().is_some());
    assert!(fibred_equivalent(&unstraighten(&s1.ps).unwrap().fibred, &unstraighten(&s2.ps).unwrap().fibred));
}

#[test]
fn fibred_functor_rejects_broken_lift() {
    let two = corpus::walking_arrow();
    let yb = yoneda(&two, Obj(1));
    let (_, proj) = corpus::product_projection();
    let product = FibredCat::find(DisplayedCat::new(proj)).unwrap();
    let (t, sq) = (yb.total(), product.total());
    let tri = t.arrow("(u,1_b)").unwrap();
    let mut obj = vec![Obj(0); 2];
    let mut arr = vec![Arr(0); 3];
    obj[t.object("(a,u)").unwrap().0] = sq.object("00").unwrap();
    obj[t.object("(b,1_b)").unwrap().0] = sq.object("11").unwrap();
    for x in t.objects() {
        arr[t.identity(x).0] = sq.identity(obj[x.0]);
    }
    arr[tri.0] = sq.arrow("00_11").unwrap();
    let m = FinFunctor::new(t.clone(), sq.clone(), obj.clone(), arr.clone()).unwrap();
    match FibFunctor::new(yb.clone(), product.clone(), m) {
        Err(fibkit::Error::NotFibred(why)) => assert!(why.contains("(u,1_b)") && why.contains("00_11"), "{why}"),
        other => panic!("expected rejection, got {other:?}"),
    }
    arr[tri.0] = sq.arrow("01_11").unwrap();
    obj[t.object("(a,u)").unwrap().0] = sq.object("01").unwrap();
    arr[t.identity(t.object("(a,u)").unwrap()).0] = sq.identity(sq.object("01").unwrap());
    let m = FinFunctor::new(t.clone(), sq.clone(), obj, arr).unwrap();
    assert!(FibFunctor::new(yb, product, m).is_ok());
}
