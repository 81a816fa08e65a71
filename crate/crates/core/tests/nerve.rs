use std::sync::Arc;

use fibkit::corpus;
use fibkit::fincat::{find_isomorphism, slice};
use fibkit::hslift::universe_category;
use fibkit::nerve::{
    elements, hs_universe_presheaf, nerve, nerve_adjunction_check, sieve_presheaf, sieves, universe_to_sieves,
};
use fibkit::{Arr, FinCat, Obj, Presheaf};

/// Every assignment of objects and arrows that respects sources, targets,
/// identities and composition.
fn naive_functor_count(c: &FinCat, d: &FinCat) -> usize {
    let n = c.n_objects();
    let mut count = 0;
    let mut obj = vec![0; n];
    loop {
        if n == 0 || obj.iter().all(|&v| v < d.n_objects()) {
            count += count_arrow_maps(c, d, &obj);
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            obj[i] += 1;
            if obj[i] < d.n_objects() {
                break;
            }
            obj[i] = 0;
            i += 1;
        }
        if d.n_objects() == 0 {
            return count;
        }
    }
}

fn count_arrow_maps(c: &FinCat, d: &FinCat, obj: &[usize]) -> usize {
    if c.n_objects() > 0 && d.n_objects() == 0 {
        return 0;
    }
    let arrows: Vec<Arr> = c.arrows().collect();
    let mut choice = vec![0usize; arrows.len()];
    let options: Vec<Vec<Arr>> = arrows
        .iter()
        .map(|&f| d.hom(Obj(obj[c.src(f).0]), Obj(obj[c.tgt(f).0])).to_vec())
        .collect();
    if options.iter().any(Vec::is_empty) {
        return 0;
    }
    let mut count = 0;
    loop {
        let img = |f: Arr| options[f.0][choice[f.0]];
        let ok = c.objects().all(|x| img(c.identity(x)) == d.identity(Obj(obj[x.0])))
            && c.composable_pairs().all(|(g, f)| img(c.compose(g, f)) == d.compose(img(g), img(f)));
        count += ok as usize;
        let mut i = 0;
        loop {
            if i == arrows.len() {
                return count;
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// All subsets of arrows into `c` that are closed under precomposition.
fn naive_sieve_count(cat: &FinCat, c: Obj) -> usize {
    let into: Vec<Arr> = cat.arrows().filter(|&f| cat.tgt(f) == c).collect();
    (0u32..1 << into.len())
        .filter(|mask| {
            let has = |f: Arr| into.iter().position(|&g| g == f).is_some_and(|i| mask >> i & 1 == 1);
            into.iter().all(|&f| !has(f) || cat.arrows().filter(|&g| cat.tgt(g) == cat.src(f)).all(|g| has(cat.compose(f, g))))
        })
        .count()
}

fn acceptance_categories() -> Vec<Arc<FinCat>> {
    vec![corpus::terminal(), corpus::walking_arrow(), corpus::square(), corpus::parallel_pair()]
}

#[test]
fn elements_examples() {
    for c in corpus::small_categories() {
        let el = elements(&Presheaf::terminal(&c));
        assert!(el.projection.is_isomorphism());
        assert_eq!(elements(&Presheaf::empty(&c)).cat.n_objects(), 0);
        for x in c.objects() {
            let el = elements(&Presheaf::representable(&c, x));
            let s = slice(&c, x);
            assert!(find_isomorphism(&el.cat, &s.cat).unwrap().is_some());
        }
    }
}

#[test]
fn representable_elements_match_slice_names() {
    let two = corpus::walking_arrow();
    let el = elements(&Presheaf::representable(&two, Obj(1)));
    let s = slice(&two, Obj(1));
    let names = |c: &FinCat| {
        let mut v = c.objects().map(|x| c.object_name(x).to_string()).collect::<Vec<_>>();
        v.sort();
        v
    };
    assert_eq!(names(&el.cat), names(&s.cat));
}

#[test]
fn nerve_counts_match_oracle() {
    let two = corpus::walking_arrow();
    for d in corpus::small_categories() {
        let pt = corpus::terminal();
        let nu = nerve(&pt, &d).unwrap();
        assert_eq!(nu.presheaf.size(Obj(0)), d.n_objects());
        for c in [two.clone(), corpus::three_chain()] {
            let nu = nerve(&c, &d).unwrap();
            for x in c.objects() {
                assert_eq!(nu.presheaf.size(x), naive_functor_count(&slice(&c, x).cat, &d));
            }
        }
    }
    let nu = nerve(&two, &two).unwrap();
    assert_eq!(nu.presheaf.sizes(), vec![2, 3]);
}

#[test]
fn nerve_restriction_is_precomposition() {
    let two = corpus::walking_arrow();
    let nu = nerve(&two, &two).unwrap();
    let u = two.arrow("u").unwrap();
    let (sa, sb) = (&nu.slices[0], &nu.slices[1]);
    for (i, f) in nu.functors[1].iter().enumerate() {
        let j = nu.presheaf.act(u, i);
        let g = nu.functor(Obj(0), j);
        let into_b = sb.object_of(u);
        assert_eq!(g.obj(sa.terminal()), f.obj(into_b));
    }
}

#[test]
fn nerve_adjunction_examples() {
    let pt = corpus::terminal();
    let two = corpus::walking_arrow();
    let r = nerve_adjunction_check(&Presheaf::terminal(&pt), &two, &[], &[]).unwrap();
    assert!(r.passed());
    assert_eq!((r.functors, r.morphisms), (2, 2));
    let r = nerve_adjunction_check(&Presheaf::representable(&two, Obj(1)), &two, &[], &[]).unwrap();
    assert!(r.passed());
    assert_eq!((r.functors, r.morphisms), (3, 3));
    let r = nerve_adjunction_check(&Presheaf::empty(&two), &two, &[], &[]).unwrap();
    assert!(r.passed());
    assert_eq!((r.functors, r.morphisms), (1, 1));
}

#[test]
fn nerve_adjunction_is_natural_on_small_presheaves() {
    let two = corpus::walking_arrow();
    let pt = corpus::terminal();
    let xs = corpus::presheaves_on_two(1);
    for x in &xs {
        for d in [pt.clone(), two.clone()] {
            let r = nerve_adjunction_check(x, &d, &xs, &[pt.clone(), two.clone()]).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.naturality_in_d > 0);
        }
    }
}

#[test]
fn sieve_examples() {
    let pt = corpus::terminal();
    assert_eq!(sieves(&pt, Obj(0)).unwrap().len(), 2);
    let two = corpus::walking_arrow();
    let names: Vec<String> = sieves(&two, Obj(1)).unwrap().iter().map(|s| s.name()).collect();
    assert_eq!(names, ["[]", "[u]", "[1_b,u]"]);
    assert_eq!(sieves(&two, Obj(0)).unwrap().len(), 2);
}

#[test]
fn sieves_match_oracle() {
    for c in corpus::small_categories().into_iter().chain([corpus::square()]) {
        for x in c.objects() {
            assert_eq!(sieves(&c, x).unwrap().len(), naive_sieve_count(&c, x));
        }
        sieve_presheaf(&c).unwrap();
    }
}

#[test]
fn universe_counts() {
    for k in 0..=3usize {
        let u = universe_category(k);
        let closed: usize = (0..=k).flat_map(|m| (0..=k).map(move |n| n.pow(m as u32))).sum();
        assert_eq!(u.carrier.n_arrows(), closed);
        let pointed: usize = (1..=k).flat_map(|m| (1..=k).map(move |n| m * n.pow(m as u32))).sum();
        assert_eq!(u.pointed.n_arrows(), pointed);
        assert_eq!(u.carrier.n_arrows(), naive_function_count(k));
    }
    let u1 = universe_category(1);
    assert!(find_isomorphism(&u1.carrier, &corpus::walking_arrow()).unwrap().is_some());
    assert_eq!((u1.pointed.n_objects(), u1.pointed.n_arrows()), (1, 1));
    assert_eq!(u1.carrier.object_name(u1.forget.obj(Obj(0))), "1");
    let u0 = universe_category(0);
    assert_eq!((u0.carrier.n_objects(), u0.pointed.n_objects()), (1, 0));
}

fn naive_function_count(k: usize) -> usize {
    let mut total = 0;
    for m in 0..=k {
        for n in 0..=k {
            let mut count = 0;
            let digits = m;
            let base = n.max(1);
            for code in 0..base.pow(digits as u32) {
                let mut c = code;
                let ok = (0..digits).all(|_| {
                    let v = c % base;
                    c /= base;
                    v < n
                });
                count += ok as usize;
            }
            total += count;
        }
    }
    total
}

#[test]
fn universe_values_match_sieves() {
    for c in acceptance_categories() {
        let hs = hs_universe_presheaf(&c, 1).unwrap();
        let omega = sieve_presheaf(&c).unwrap();
        assert_eq!(hs.universe.presheaf.sizes(), omega.sizes());
        let bij = universe_to_sieves(&c, &hs).unwrap();
        for x in c.objects() {
            let mut seen = bij[x.0].clone();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), omega.size(x));
        }
        for f in c.arrows() {
            for v in 0..hs.universe.presheaf.size(c.tgt(f)) {
                let lhs = bij[c.src(f).0][hs.universe.presheaf.act(f, v)];
                let rhs = omega.act(f, bij[c.tgt(f).0][v]);
                assert_eq!(lhs, rhs);
            }
        }
    }
    let two = corpus::walking_arrow();
    assert_eq!(hs_universe_presheaf(&two, 1).unwrap().universe.presheaf.sizes(), vec![2, 3]);
}

#[test]
fn universe_bound_zero() {
    for c in acceptance_categories() {
        let hs = hs_universe_presheaf(&c, 0).unwrap();
        assert!(hs.universe.presheaf.sizes().iter().all(|&n| n == 1));
        assert!(hs.pointed.presheaf.sizes().iter().all(|&n| n == 0));
    }
}
