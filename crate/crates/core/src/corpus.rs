//! Small named categories, presheaves and fibrations used as fixtures by the
//! test suites and the command-line examples.

use std::sync::Arc;

use crate::fibration::{yoneda, FibredCat};
use crate::fincat::{CatBuilder, FinCat, FinFunctor, Obj, Presheaf};

/// `𝟙`: one object `pt`.
pub fn terminal() -> Arc<FinCat> {
    Arc::new(FinCat::terminal())
}

pub fn empty() -> Arc<FinCat> {
    Arc::new(FinCat::empty())
}

/// `𝟚`: `u : a → b`.
pub fn walking_arrow() -> Arc<FinCat> {
    let mut b = CatBuilder::new("2");
    let a = b.object_with_identity("a").unwrap();
    let bb = b.object_with_identity("b").unwrap();
    b.arrow("u", a, bb).unwrap();
    Arc::new(b.build().unwrap())
}

/// `s, t : a ⇉ b`.
pub fn parallel_pair() -> Arc<FinCat> {
    let mut b = CatBuilder::new("Par");
    let a = b.object_with_identity("a").unwrap();
    let bb = b.object_with_identity("b").unwrap();
    b.arrow("s", a, bb).unwrap();
    b.arrow("t", a, bb).unwrap();
    Arc::new(b.build().unwrap())
}

/// `i : a ≅ b` with inverse `j`.
pub fn walking_iso() -> Arc<FinCat> {
    let mut b = CatBuilder::new("Iso");
    let a = b.object_with_identity("a").unwrap();
    let bb = b.object_with_identity("b").unwrap();
    let i = b.arrow("i", a, bb).unwrap();
    let j = b.arrow("j", bb, a).unwrap();
    let (ia, ib) = (b.identity_of(a).unwrap(), b.identity_of(bb).unwrap());
    b.set_compose(j, i, ia);
    b.set_compose(i, j, ib);
    Arc::new(b.build().unwrap())
}

/// One object with a non-identity idempotent `e`.
pub fn idempotent() -> Arc<FinCat> {
    let mut b = CatBuilder::new("Idem");
    let x = b.object_with_identity("x").unwrap();
    let e = b.arrow("e", x, x).unwrap();
    b.set_compose(e, e, e);
    Arc::new(b.build().unwrap())
}

/// `𝟚 ⊔ 𝟚`: `u1 : a1 → b1`, `u2 : a2 → b2`.
pub fn two_plus_two() -> Arc<FinCat> {
    let mut b = CatBuilder::new("2+2");
    for i in 1..=2 {
        let a = b.object_with_identity(format!("a{i}")).unwrap();
        let bb = b.object_with_identity(format!("b{i}")).unwrap();
        b.arrow(format!("u{i}"), a, bb).unwrap();
    }
    Arc::new(b.build().unwrap())
}

/// The poset generated by `covers`, with arrows named `lo_hi`.
pub fn poset(name: &str, objects: &[&str], covers: &[(&str, &str)]) -> Arc<FinCat> {
    let n = objects.len();
    let idx = |s: &str| objects.iter().position(|o| *o == s).expect("unknown poset element");
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(lo, hi) in covers {
        le[idx(lo)][idx(hi)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let mut b = CatBuilder::new(name);
    let objs: Vec<Obj> = objects.iter().map(|o| b.object_with_identity(*o).unwrap()).collect();
    let mut arr = vec![vec![None; n]; n];
    for i in 0..n {
        arr[i][i] = b.identity_of(objs[i]);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i][j] {
                arr[i][j] = Some(b.arrow(format!("{}_{}", objects[i], objects[j]), objs[i], objs[j]).unwrap());
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if let (Some(f), Some(g)) = (arr[i][j], arr[j][k]) {
                    b.set_compose(g, f, arr[i][k].expect("posets are transitive"));
                }
            }
        }
    }
    Arc::new(b.build().expect("posets are categories"))
}

/// The chain `x0 < x1 < x2`.
pub fn three_chain() -> Arc<FinCat> {
    poset("3", &["x0", "x1", "x2"], &[("x0", "x1"), ("x1", "x2")])
}

/// The commutative square `𝟚 × 𝟚` as a poset on `00, 01, 10, 11`.
pub fn square() -> Arc<FinCat> {
    poset(
        "Sq",
        &["00", "01", "10", "11"],
        &[("00", "01"), ("00", "10"), ("01", "11"), ("10", "11")],
    )
}

/// Every corpus category with at most three objects and eight arrows.
pub fn small_categories() -> Vec<Arc<FinCat>> {
    vec![
        empty(),
        terminal(),
        walking_arrow(),
        parallel_pair(),
        walking_iso(),
        idempotent(),
        three_chain(),
        poset("V", &["l", "r", "t"], &[("l", "t"), ("r", "t")]),
    ]
}

/// `𝟚 × 𝟚 → 𝟚`, the projection onto the first factor, whose fibres are `𝟚`.
pub fn product_projection() -> (Arc<FinCat>, FinFunctor) {
    let total = square();
    let base = walking_arrow();
    let first = |name: &str| if name.starts_with('0') { Obj(0) } else { Obj(1) };
    let obj: Vec<Obj> = total.objects().map(|x| first(total.object_name(x))).collect();
    let arr = total
        .arrows()
        .map(|f| {
            let (s, t) = (obj[total.src(f).0], obj[total.tgt(f).0]);
            base.hom(s, t)[0]
        })
        .collect();
    let p = FinFunctor::new(total.clone(), base, obj, arr).expect("projection is a functor");
    (total, p)
}

/// Fibrations over `𝟚` used throughout the tests: the identity, the two
/// representables, the constant family with fibre `𝟚`, and its fibrewise
/// opposite.
pub fn fibrations_over_two() -> Vec<FibredCat> {
    let two = walking_arrow();
    let (_, proj) = product_projection();
    let product = FibredCat::find(crate::fibration::DisplayedCat::new(proj)).expect("projection is a fibration");
    let product_op = crate::fibration::fibrewise_op(&product).expect("split fibrewise opposite").fibred;
    vec![
        FibredCat::identity(&two),
        yoneda(&two, Obj(0)),
        yoneda(&two, Obj(1)),
        product,
        product_op,
    ]
}

/// Every presheaf on `𝟚` whose values have at most `max` elements.
pub fn presheaves_on_two(max: usize) -> Vec<Presheaf> {
    let two = walking_arrow();
    let mut out = Vec::new();
    for m in 0..=max {
        for n in 0..=max {
            let count = (m as u32).pow(n as u32) as usize;
            for code in 0..count {
                let mut act = Vec::with_capacity(n);
                let mut c = code;
                for _ in 0..n {
                    act.push(c % m.max(1));
                    c /= m.max(1);
                }
                let sets = vec![
                    (0..m).map(|i| format!("x{i}")).collect::<Vec<_>>(),
                    (0..n).map(|i| format!("y{i}")).collect::<Vec<_>>(),
                ];
                let actions = vec![(0..m).collect(), (0..n).collect(), act];
                out.push(Presheaf::new(two.clone(), sets, actions).expect("valid presheaf"));
            }
        }
    }
    out
}
