use fibkit::adjunction::{check_pseudo_naturality, check_transpose_equivalence, Transpose};
use fibkit::corpus;
use fibkit::fibration::{enumerate_fibred_functors, fib_hom, fibrewise_op, yoneda};
use fibkit::{FibFunctor, FibredCat, NatTrans, Obj};

fn bang_two() -> FibredCat {
    FibredCat::over_point(&corpus::walking_arrow())
}

/// `p = !: 𝟚 → 𝟙`, `E = y(b)` over `𝟚` and `F = 𝟚` over `𝟙`.
fn bang_instance() -> (FibredCat, FibredCat, FibredCat) {
    let p = bang_two();
    let e = yoneda(&corpus::walking_arrow(), Obj(1)).rehomed(p.total()).unwrap();
    let f = FibredCat::over_point(&corpus::walking_arrow()).rehomed(p.base()).unwrap();
    (p, e, f)
}

/// Every triple checked by the suite.
fn triples() -> Vec<(FibredCat, FibredCat, FibredCat)> {
    let fibs = corpus::fibrations_over_two();
    let id = FibredCat::identity(fibs[0].base());
    let mut out = Vec::new();
    for e in [&fibs[1], &fibs[2]] {
        for f in [&fibs[0], &fibs[2], &fibs[3]] {
            out.push((id.clone(), e.clone(), f.clone()));
        }
    }
    out.push(bang_instance());
    let (p, e, _) = bang_instance();
    let two = corpus::walking_arrow();
    let f_op = fibrewise_op(&FibredCat::over_point(&two)).unwrap().fibred.rehomed(p.base()).unwrap();
    out.push((p.clone(), e.clone(), f_op));
    let pt = FibredCat::over_point(&corpus::terminal()).rehomed(p.base()).unwrap();
    out.push((p.clone(), e, pt));
    let yb = yoneda(&two, Obj(1));
    let top = yb.total().object("(b,1_b)").unwrap();
    out.push((yb.clone(), yoneda(yb.total(), top), fibs[3].clone()));
    out.push((yb.clone(), FibredCat::identity(yb.total()), fibs[4].clone()));
    out
}

#[test]
fn empty_source_gives_terminal_hom_categories() {
    let (p, _, f) = bang_instance();
    let e = FibredCat::empty_over(p.total());
    let (w, report) = check_transpose_equivalence(&p, &e, &f).unwrap();
    assert_eq!((report.lhs_objects, report.lhs_arrows, report.rhs_objects, report.rhs_arrows), (1, 1, 1, 1));
    assert!(report.is_equivalence(), "{report:?}");
    assert_eq!(w.backward, vec![Obj(0)]);
}

#[test]
fn sharp_is_functorial_on_the_point_instance() {
    let (p, e, f) = bang_instance();
    let t = Transpose::new(&p, &e, &f).unwrap();
    let maps = enumerate_fibred_functors(&e, &t.nabla.fibred).unwrap();
    assert!(!maps.is_empty());
    for phi in &maps {
        let s = t.sharp(phi).unwrap();
        let m = s.map();
        let (d, c) = (m.dom(), m.cod());
        for (g, h) in d.composable_pairs() {
            assert_eq!(m.arr(d.compose(g, h)), c.compose(m.arr(g), m.arr(h)));
        }
        for x in d.objects() {
            assert_eq!(m.arr(d.identity(x)), c.identity(m.obj(x)));
        }
    }
}

#[test]
fn flat_then_sharp_recovers_up_to_the_witness() {
    let (p, e, f) = bang_instance();
    let t = Transpose::new(&p, &e, &f).unwrap();
    for psi in enumerate_fibred_functors(&t.sum, &f).unwrap() {
        let psi = FibFunctor::new(t.sum.clone(), f.clone(), psi).unwrap();
        let iso = t.eso_witness(&psi).unwrap();
        assert!(iso.is_invertible());
        assert!(iso.components().iter().all(|&c| f.is_vertical(c)));
        let flat = t.flat(psi.map()).unwrap();
        let again = t.flat(t.sharp(flat.map()).unwrap().map()).unwrap();
        assert_eq!(again.map(), flat.map());
    }
}

#[test]
fn sharp_on_2cells_preserves_identities_and_composites() {
    let (p, e, f) = bang_instance();
    let t = Transpose::new(&p, &e, &f).unwrap();
    let hom = fib_hom(&e, &t.nabla.fibred).unwrap();
    let sharp = |x: Obj| t.sharp(hom.functor(x)).unwrap();
    for x in hom.cat.objects() {
        let s = sharp(x);
        let id = t.sharp_2cell(hom.transformation(hom.cat.identity(x)), &s, &s).unwrap();
        assert_eq!(id, NatTrans::identity(s.map()));
    }
    for (g, h) in hom.cat.composable_pairs() {
        let (x, y, z) = (hom.cat.src(h), hom.cat.tgt(h), hom.cat.tgt(g));
        let (sx, sy, sz) = (sharp(x), sharp(y), sharp(z));
        let gh = t.sharp_2cell(hom.transformation(hom.cat.compose(g, h)), &sx, &sz).unwrap();
        let sg = t.sharp_2cell(hom.transformation(g), &sy, &sz).unwrap();
        let sh = t.sharp_2cell(hom.transformation(h), &sx, &sy).unwrap();
        assert_eq!(gh, sg.after(&sh));
    }
}

#[test]
fn identity_base_gives_isomorphic_hom_categories() {
    let fibs = corpus::fibrations_over_two();
    let p = FibredCat::identity(fibs[0].base());
    let (w, report) = check_transpose_equivalence(&p, &fibs[2], &fibs[3]).unwrap();
    assert!(report.is_equivalence(), "{report:?}");
    assert_eq!(report.lhs_objects, report.rhs_objects);
    assert!(fibkit::fincat::find_isomorphism(&w.lhs.cat, &w.rhs.cat).unwrap().is_some());
}

#[test]
fn point_instance_is_an_equivalence() {
    let (p, e, f) = bang_instance();
    let (w, report) = check_transpose_equivalence(&p, &e, &f).unwrap();
    assert!(report.is_equivalence(), "{report:?}");
    assert_eq!(w.lhs.cat.iso_class_count(), w.rhs.cat.iso_class_count());
    assert_eq!(w.iso_family.len(), report.rhs_objects);
}

#[test]
fn every_triple_is_an_equivalence() {
    for (p, e, f) in triples() {
        let (_, report) = check_transpose_equivalence(&p, &e, &f).unwrap();
        assert!(report.is_equivalence(), "{} {} {}: {report:?}", p.total().name(), e.total().name(), f.total().name());
    }
}

#[test]
fn pseudo_naturality_with_identities() {
    let (p, e, f) = bang_instance();
    let r = check_pseudo_naturality(&p, &FibFunctor::identity(&e), &FibFunctor::identity(&f)).unwrap();
    assert!(r.strict, "{r:?}");
    assert!(r.objects_checked > 0 && r.arrows_checked > 0);
}

#[test]
fn pseudo_naturality_on_the_nose() {
    let (p, _, f) = bang_instance();
    let two = corpus::walking_arrow();
    let e0 = yoneda(&two, Obj(1)).rehomed(p.total()).unwrap();
    let e1 = yoneda(&two, Obj(0)).rehomed(p.total()).unwrap();
    let pt = FibredCat::over_point(&corpus::terminal()).rehomed(p.base()).unwrap();
    for m in enumerate_fibred_functors(&e1, &e0).unwrap() {
        let e10 = FibFunctor::new(e1.clone(), e0.clone(), m).unwrap();
        for n in enumerate_fibred_functors(&f, &f).unwrap() {
            let f01 = FibFunctor::new(f.clone(), f.clone(), n).unwrap();
            let r = check_pseudo_naturality(&p, &e10, &f01).unwrap();
            assert!(r.strict, "{r:?}");
        }
        for n in enumerate_fibred_functors(&f, &pt).unwrap() {
            let f01 = FibFunctor::new(f.clone(), pt.clone(), n).unwrap();
            assert!(check_pseudo_naturality(&p, &e10, &f01).unwrap().strict);
        }
    }
}

#[test]
fn pseudo_naturality_respects_composites() {
    let (p, e, f) = bang_instance();
    let endos: Vec<FibFunctor> = enumerate_fibred_functors(&f, &f)
        .unwrap()
        .into_iter()
        .map(|m| FibFunctor::new(f.clone(), f.clone(), m).unwrap())
        .collect();
    let id = FibFunctor::identity(&e);
    for g in &endos {
        for h in &endos {
            let r = check_pseudo_naturality(&p, &id, &g.after(h)).unwrap();
            assert!(r.strict, "{r:?}");
        }
    }
}
