use std::collections::HashMap;
use std::sync::Arc;

use super::{Arr, CatBuilder, FinCat, FinFunctor, Obj};
use crate::names::tuple;

/// The slice `C/c` with its projection to `C`.
///
/// Objects are the arrows into `c` in table order, named `(x,f)`. An arrow
/// `(g,f1)` is a triangle `g : (x, f1∘g) → (y, f1)`.
#[derive(Clone, Debug)]
pub struct Slice {
    pub base: Arc<FinCat>,
    pub apex: Obj,
    pub cat: Arc<FinCat>,
    pub projection: FinFunctor,
    object_arrows: Vec<Arr>,
    underlying: Vec<Arr>,
    obj_of: HashMap<Arr, Obj>,
    arr_of: HashMap<(Arr, Obj), Arr>,
}

pub fn slice(base: &Arc<FinCat>, apex: Obj) -> Slice {
    let c = base;
    let mut b = CatBuilder::new(format!("{}/{}", c.name(), c.object_name(apex)));
    let object_arrows: Vec<Arr> = c.arrows_into(apex).to_vec();
    let mut obj_of = HashMap::new();
    for &f in &object_arrows {
        let x = b
            .object(tuple(&[c.object_name(c.src(f)), c.arrow_name(f)]))
            .expect("slice object names are unique");
        obj_of.insert(f, x);
    }
    let mut underlying = Vec::new();
    let mut arr_of = HashMap::new();
    for g in c.arrows() {
        for (ti, &ft) in object_arrows.iter().enumerate() {
            if c.src(ft) != c.tgt(g) {
                continue;
            }
            let t = Obj(ti);
            let s = obj_of[&c.compose(ft, g)];
            let a = b
                .arrow(tuple(&[c.arrow_name(g), c.arrow_name(ft)]), s, t)
                .expect("slice arrow names are unique");
            if c.is_identity(g) {
                b.set_identity(t, a);
            }
            underlying.push(g);
            arr_of.insert((g, t), a);
        }
    }
    for (&(g2, t2), &a2) in &arr_of {
        let s2 = obj_of[&c.compose(object_arrows[t2.0], g2)];
        for g1 in c.arrows_into(c.src(g2)) {
            let a1 = arr_of[&(*g1, s2)];
            b.set_compose(a2, a1, arr_of[&(c.compose(g2, *g1), t2)]);
        }
    }
    let cat = Arc::new(b.build().expect("slices are categories"));
    let projection = FinFunctor::new_unchecked(
        cat.clone(),
        c.clone(),
        object_arrows.iter().map(|&f| c.src(f)).collect(),
        underlying.clone(),
    );
    Slice { base: c.clone(), apex, cat, projection, object_arrows, underlying, obj_of, arr_of }
}

impl Slice {
    /// The slice object `(src f, f)`.
    pub fn object_of(&self, f: Arr) -> Obj {
        self.obj_of[&f]
    }

    /// The triangle over `g` with codomain `t`.
    pub fn arrow_of(&self, g: Arr, t: Obj) -> Arr {
        self.arr_of[&(g, t)]
    }

    pub fn object_arrow(&self, x: Obj) -> Arr {
        self.object_arrows[x.0]
    }

    pub fn underlying(&self, a: Arr) -> Arr {
        self.underlying[a.0]
    }

    /// The terminal object `(c, 1_c)`.
    pub fn terminal(&self) -> Obj {
        self.obj_of[&self.base.identity(self.apex)]
    }

    /// The triangle `f : (x, f) → (c, 1_c)`.
    pub fn to_terminal(&self, x: Obj) -> Arr {
        self.arrow_of(self.object_arrow(x), self.terminal())
    }
}

/// Postcomposition `C/c0 → C/c1` with `c01 : c0 → c1`.
pub fn slice_functor(s0: &Slice, s1: &Slice, c01: Arr) -> FinFunctor {
    let c = &s0.base;
    assert!(c.src(c01) == s0.apex && c.tgt(c01) == s1.apex, "arrow does not connect the slices");
    let obj: Vec<Obj> = s0.cat.objects().map(|x| s1.object_of(c.compose(c01, s0.object_arrow(x)))).collect();
    let arr = s0
        .cat
        .arrows()
        .map(|a| s1.arrow_of(s0.underlying(a), obj[s0.cat.tgt(a).0]))
        .collect();
    FinFunctor::new_unchecked(s0.cat.clone(), s1.cat.clone(), obj, arr)
}
