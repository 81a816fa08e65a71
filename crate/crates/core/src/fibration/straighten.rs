//! Straightening a cloven fibration into a pseudofunctor and back.
//!
//! For a pseudofunctor `P : B^op → Cat` the coherence data are stored as
//! `unit[b] : P(1_b) ⇒ Id` and `comp[(g, f)] : P(f) ∘ P(g) ⇒ P(g ∘ f)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{Cleaving, DisplayedCat, FibFunctor, FibredCat};
use crate::error::{Error, Result};
use crate::fincat::functor::same_cat;
use crate::fincat::{Arr, CatBuilder, FinCat, FinFunctor, NatTrans, Obj, Presheaf, PresheafMorphism};
use crate::names::tuple;

/// The fibre over `b`: objects over `b` and arrows over `1_b`, keeping the
/// total category's names.
#[derive(Clone, Debug)]
pub struct Fibre {
    pub cat: Arc<FinCat>,
    pub objects: Vec<Obj>,
    pub arrows: Vec<Arr>,
    obj_local: HashMap<Obj, Obj>,
    arr_local: HashMap<Arr, Arr>,
}

impl Fibre {
    pub fn local_obj(&self, e: Obj) -> Obj {
        self.obj_local[&e]
    }

    pub fn local_arr(&self, f: Arr) -> Arr {
        self.arr_local[&f]
    }

    pub fn total_obj(&self, x: Obj) -> Obj {
        self.objects[x.0]
    }

    pub fn total_arr(&self, f: Arr) -> Arr {
        self.arrows[f.0]
    }
}

pub fn fibre(d: &DisplayedCat, b: Obj) -> Fibre {
    let t = d.total();
    let base = d.base();
    let mut builder = CatBuilder::new(format!("{}_{}", t.name(), base.object_name(b)));
    let objects: Vec<Obj> = d.objects_over(b).collect();
    let mut obj_local = HashMap::new();
    for &e in &objects {
        obj_local.insert(e, builder.object(t.object_name(e)).expect("total names are unique"));
    }
    let id = base.identity(b);
    let arrows: Vec<Arr> = t
        .arrows()
        .filter(|&f| d.over_arr(f) == id && obj_local.contains_key(&t.src(f)))
        .collect();
    let mut arr_local = HashMap::new();
    for &f in &arrows {
        let a = builder
            .arrow(t.arrow_name(f), obj_local[&t.src(f)], obj_local[&t.tgt(f)])
            .expect("total names are unique");
        arr_local.insert(f, a);
    }
    for &e in &objects {
        builder.set_identity(obj_local[&e], arr_local[&t.identity(e)]);
    }
    for &f in &arrows {
        for &g in t.arrows_out_of(t.tgt(f)) {
            if let Some(&lg) = arr_local.get(&g) {
                builder.set_compose(lg, arr_local[&f], arr_local[&t.compose(g, f)]);
            }
        }
    }
    let cat = Arc::new(builder.build().expect("fibres are subcategories"));
    Fibre { cat, objects, arrows, obj_local, arr_local }
}

/// A pseudofunctor `B^op → Cat` with finite values.
#[derive(Clone, Debug)]
pub struct PsFunctorToCat {
    base: Arc<FinCat>,
    fibres: Vec<Arc<FinCat>>,
    reindex: Vec<FinFunctor>,
    unit: Vec<NatTrans>,
    comp: BTreeMap<(Arr, Arr), NatTrans>,
}

impl PsFunctorToCat {
    /// Checks the types and invertibility of all coherence data and the
    /// unit and associativity laws.
    pub fn new(
        base: Arc<FinCat>,
        fibres: Vec<Arc<FinCat>>,
        reindex: Vec<FinFunctor>,
        unit: Vec<NatTrans>,
        comp: BTreeMap<(Arr, Arr), NatTrans>,
    ) -> Result<Self> {
        let b = &base;
        let bad = |msg: String| Err(Error::Incoherent(msg));
        if fibres.len() != b.n_objects() || reindex.len() != b.n_arrows() || unit.len() != b.n_objects() {
            return bad("data do not cover the base".into());
        }
        for f in b.arrows() {
            let r = &reindex[f.0];
            if !same_cat(r.dom(), &fibres[b.tgt(f).0]) || !same_cat(r.cod(), &fibres[b.src(f).0]) {
                return bad(format!("reindexing along `{}` has the wrong type", b.arrow_name(f)));
            }
        }
        for x in b.objects() {
            let u = &unit[x.0];
            if *u.src() != reindex[b.identity(x).0] || *u.tgt() != FinFunctor::identity(&fibres[x.0]) {
                return bad(format!("unit at `{}` has the wrong type", b.object_name(x)));
            }
            if !u.is_invertible() {
                return bad(format!("unit at `{}` is not invertible", b.object_name(x)));
            }
        }
        for (g, f) in b.composable_pairs() {
            let Some(c) = comp.get(&(g, f)) else {
                return bad(format!("no composition datum for ({}, {})", b.arrow_name(g), b.arrow_name(f)));
            };
            if *c.src() != reindex[f.0].after(&reindex[g.0]) || *c.tgt() != reindex[b.compose(g, f).0] {
                return bad(format!("composition datum ({}, {}) has the wrong type", b.arrow_name(g), b.arrow_name(f)));
            }
            if !c.is_invertible() {
                return bad(format!("composition datum ({}, {}) is not invertible", b.arrow_name(g), b.arrow_name(f)));
            }
        }
        let p = PsFunctorToCat { base, fibres, reindex, unit, comp };
        p.check_laws()?;
        Ok(p)
    }

    fn check_laws(&self) -> Result<()> {
        let b = &self.base;
        for f in b.arrows() {
            let (b0, b1) = (b.src(f), b.tgt(f));
            let pf = &self.reindex[f.0];
            for x in self.fibres[b1.0].objects() {
                if self.comp(b.identity(b1), f).component(x) != pf.arr(self.unit[b1.0].component(x)) {
                    return Err(Error::Incoherent(format!("left unit law fails at `{}`", b.arrow_name(f))));
                }
                if self.comp(f, b.identity(b0)).component(x) != self.unit[b0.0].component(pf.obj(x)) {
                    return Err(Error::Incoherent(format!("right unit law fails at `{}`", b.arrow_name(f))));
                }
            }
        }
        for (g, f) in b.composable_pairs() {
            for &h in b.arrows_out_of(b.tgt(g)) {
                let d = &self.fibres[b.src(f).0];
                for x in self.fibres[b.tgt(h).0].objects() {
                    let lhs = d.compose(
                        self.comp(b.compose(h, g), f).component(x),
                        self.reindex[f.0].arr(self.comp(h, g).component(x)),
                    );
                    let rhs = d.compose(
                        self.comp(h, b.compose(g, f)).component(x),
                        self.comp(g, f).component(self.reindex[h.0].obj(x)),
                    );
                    if lhs != rhs {
                        return Err(Error::Incoherent(format!(
                            "associativity fails at ({}, {}, {})",
                            b.arrow_name(h),
                            b.arrow_name(g),
                            b.arrow_name(f)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// A strict functor `B^op → Cat`, with identity coherence data.
    pub fn strict(base: Arc<FinCat>, fibres: Vec<Arc<FinCat>>, reindex: Vec<FinFunctor>) -> Result<Self> {
        let b = base.clone();
        let unit = b.objects().map(|x| NatTrans::identity(&reindex[b.identity(x).0])).collect::<Vec<_>>();
        for x in b.objects() {
            if reindex[b.identity(x).0] != FinFunctor::identity(&fibres[x.0]) {
                return Err(Error::Incoherent(format!("reindexing along the identity of `{}` is not the identity", b.object_name(x))));
            }
        }
        let mut comp = BTreeMap::new();
        for (g, f) in b.composable_pairs() {
            let composite = reindex[f.0].after(&reindex[g.0]);
            if composite != reindex[b.compose(g, f).0] {
                return Err(Error::Incoherent(format!(
                    "reindexing is not strictly functorial at ({}, {})",
                    b.arrow_name(g),
                    b.arrow_name(f)
                )));
            }
            comp.insert((g, f), NatTrans::identity(&reindex[b.compose(g, f).0]));
        }
        let unit = unit
            .into_iter()
            .enumerate()
            .map(|(i, u)| NatTrans::new_unchecked(u.src().clone(), FinFunctor::identity(&fibres[i]), u.components().to_vec()))
            .collect();
        PsFunctorToCat::new(base, fibres, reindex, unit, comp)
    }

    /// A presheaf as a functor into discrete categories.
    pub fn from_presheaf(x: &Presheaf) -> Result<Self> {
        let b = x.base().clone();
        let fibres: Vec<Arc<FinCat>> = b
            .objects()
            .map(|o| Arc::new(FinCat::discrete(format!("X({})", b.object_name(o)), x.set(o))))
            .collect();
        let reindex = b
            .arrows()
            .map(|f| {
                let (d, c) = (&fibres[b.tgt(f).0], &fibres[b.src(f).0]);
                let obj: Vec<Obj> = x.action(f).iter().map(|&v| Obj(v)).collect();
                let arr = d.objects().map(|o| c.identity(obj[o.0])).collect();
                FinFunctor::new(d.clone(), c.clone(), obj, arr)
            })
            .collect::<Result<Vec<_>>>()?;
        PsFunctorToCat::strict(b, fibres, reindex)
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn fibre(&self, b: Obj) -> &Arc<FinCat> {
        &self.fibres[b.0]
    }

    pub fn reindex(&self, f: Arr) -> &FinFunctor {
        &self.reindex[f.0]
    }

    pub fn unit(&self, b: Obj) -> &NatTrans {
        &self.unit[b.0]
    }

    pub fn comp(&self, g: Arr, f: Arr) -> &NatTrans {
        &self.comp[&(g, f)]
    }

    /// Whether all coherence data are identities.
    pub fn is_strict(&self) -> bool {
        self.unit.iter().all(|u| u.components().iter().all(|&a| u.src().cod().is_identity(a)))
            && self.comp.values().all(|c| c.components().iter().all(|&a| c.src().cod().is_identity(a)))
    }

    /// The fibrewise opposite: each fibre, reindexing and (inverted)
    /// coherence datum replaced by its opposite.
    pub fn op(&self) -> Result<Self> {
        let b = &self.base;
        let fibres: Vec<Arc<FinCat>> = self.fibres.iter().map(|c| Arc::new(c.opposite())).collect();
        let reindex: Vec<FinFunctor> = b
            .arrows()
            .map(|f| self.reindex[f.0].op(&fibres[b.tgt(f).0], &fibres[b.src(f).0]))
            .collect();
        let invert = |t: &NatTrans, src: FinFunctor, tgt: FinFunctor| -> Result<NatTrans> {
            let inv = t.inverse().ok_or_else(|| Error::Incoherent("coherence datum is not invertible".into()))?;
            NatTrans::new(src, tgt, inv.components().to_vec())
        };
        let unit = b
            .objects()
            .map(|x| invert(&self.unit[x.0], reindex[b.identity(x).0].clone(), FinFunctor::identity(&fibres[x.0])))
            .collect::<Result<Vec<_>>>()?;
        let mut comp = BTreeMap::new();
        for (&(g, f), c) in &self.comp {
            let src = reindex[f.0].after(&reindex[g.0]);
            comp.insert((g, f), invert(c, src, reindex[b.compose(g, f).0].clone())?);
        }
        PsFunctorToCat::new(b.clone(), fibres, reindex, unit, comp)
    }
}

/// The straightening of a cloven fibration, remembering how each fibre sits
/// in the total category.
#[derive(Clone, Debug)]
pub struct Straightening {
    pub ps: PsFunctorToCat,
    pub fibres: Vec<Fibre>,
}

pub fn straighten(e: &FibredCat) -> Result<Straightening> {
    let b = e.base().clone();
    let t = e.total().clone();
    let fibres: Vec<Fibre> = b.objects().map(|x| fibre(e.displayed(), x)).collect();
    let mut reindex = Vec::with_capacity(b.n_arrows());
    for f in b.arrows() {
        let (b0, b1) = (b.src(f), b.tgt(f));
        let (src, tgt) = (&fibres[b1.0], &fibres[b0.0]);
        let obj = src.objects.iter().map(|&x| tgt.local_obj(e.lift_domain(f, x))).collect();
        let arr = src
            .arrows
            .iter()
            .map(|&phi| {
                let (x, y) = (t.src(phi), t.tgt(phi));
                let h = t.compose(phi, e.lift(f, x));
                tgt.local_arr(e.gap(e.lift(f, y), h, b.identity(b0)))
            })
            .collect();
        reindex.push(FinFunctor::new(src.cat.clone(), tgt.cat.clone(), obj, arr)?);
    }
    let unit = b
        .objects()
        .map(|x| {
            let fb = &fibres[x.0];
            let comps = fb.objects.iter().map(|&o| fb.local_arr(e.lift(b.identity(x), o))).collect();
            NatTrans::new(reindex[b.identity(x).0].clone(), FinFunctor::identity(&fb.cat), comps)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut comp = BTreeMap::new();
    for (g, f) in b.composable_pairs() {
        let gf = b.compose(g, f);
        let fb0 = &fibres[b.src(f).0];
        let comps = fibres[b.tgt(g).0]
            .objects
            .iter()
            .map(|&x| {
                let lg = e.lift(g, x);
                let h = t.compose(lg, e.lift(f, t.src(lg)));
                fb0.local_arr(e.gap(e.lift(gf, x), h, b.identity(b.src(f))))
            })
            .collect();
        let src = reindex[f.0].after(&reindex[g.0]);
        comp.insert((g, f), NatTrans::new(src, reindex[gf.0].clone(), comps)?);
    }
    let cats = fibres.iter().map(|f| f.cat.clone()).collect();
    let ps = PsFunctorToCat::new(b, cats, reindex, unit, comp)?;
    Ok(Straightening { ps, fibres })
}

/// The Grothendieck construction of a pseudofunctor, with the origin of
/// every object and arrow.
///
/// The object `(b,e)` has `e` in the fibre over `b`; the arrow
/// `(b01,φ,e1)` goes from `(b0, e0)` to `(b1, e1)` where
/// `φ : e0 → P(b01)(e1)`.
#[derive(Clone, Debug)]
pub struct Unstraightened {
    pub fibred: FibredCat,
    pub objects: Vec<(Obj, Obj)>,
    pub arrows: Vec<(Arr, Arr, Obj)>,
    obj_index: HashMap<(Obj, Obj), Obj>,
    arr_index: HashMap<(Arr, Arr, Obj), Arr>,
}

impl Unstraightened {
    pub fn object(&self, b: Obj, e: Obj) -> Obj {
        self.obj_index[&(b, e)]
    }

    pub fn arrow(&self, b01: Arr, phi: Arr, e1: Obj) -> Arr {
        self.arr_index[&(b01, phi, e1)]
    }
}

pub fn unstraighten(p: &PsFunctorToCat) -> Result<Unstraightened> {
    let b = p.base().clone();
    let mut builder = CatBuilder::new(format!("Gr({})", b.name()));
    let mut objects = Vec::new();
    let mut obj_index = HashMap::new();
    for x in b.objects() {
        let fx = p.fibre(x);
        for e in fx.objects() {
            let o = builder.object(tuple(&[b.object_name(x), fx.object_name(e)]))?;
            objects.push((x, e));
            obj_index.insert((x, e), o);
        }
    }
    let mut arrows = Vec::new();
    let mut arr_index = HashMap::new();
    for f in b.arrows() {
        let (b0, b1) = (b.src(f), b.tgt(f));
        let (f0, f1) = (p.fibre(b0), p.fibre(b1));
        let pf = p.reindex(f);
        for e1 in f1.objects() {
            for e0 in f0.objects() {
                for &phi in f0.hom(e0, pf.obj(e1)) {
                    let name = tuple(&[b.arrow_name(f), f0.arrow_name(phi), f1.object_name(e1)]);
                    let a = builder.arrow(name, obj_index[&(b0, e0)], obj_index[&(b1, e1)])?;
                    arrows.push((f, phi, e1));
                    arr_index.insert((f, phi, e1), a);
                }
            }
        }
    }
    for x in b.objects() {
        let fx = p.fibre(x);
        for e in fx.objects() {
            let inv = fx.inverse(p.unit(x).component(e)).expect("units are invertible");
            builder.set_identity(obj_index[&(x, e)], arr_index[&(b.identity(x), inv, e)]);
        }
    }
    for (i, &(f, phi, e1)) in arrows.iter().enumerate() {
        let f0 = p.fibre(b.src(f));
        for &g in b.arrows_out_of(b.tgt(f)) {
            for (j, &(_, psi, e2)) in arrows.iter().enumerate().filter(|(_, a)| a.0 == g) {
                if p.fibre(b.tgt(f)).src(psi) != e1 {
                    continue;
                }
                let gf = b.compose(g, f);
                let chi = f0.compose(p.comp(g, f).component(e2), f0.compose(p.reindex(f).arr(psi), phi));
                builder.set_compose(Arr(j), Arr(i), arr_index[&(gf, chi, e2)]);
            }
        }
    }
    let total = Arc::new(builder.build()?);
    let display = FinFunctor::new(
        total.clone(),
        b.clone(),
        objects.iter().map(|&(x, _)| x).collect(),
        arrows.iter().map(|&(f, _, _)| f).collect(),
    )?;
    let mut lifts = HashMap::new();
    for f in b.arrows() {
        let f0 = p.fibre(b.src(f));
        for e1 in p.fibre(b.tgt(f)).objects() {
            let id = f0.identity(p.reindex(f).obj(e1));
            lifts.insert((f, obj_index[&(b.tgt(f), e1)]), arr_index[&(f, id, e1)]);
        }
    }
    let fibred = FibredCat::new(DisplayedCat::new(display), Cleaving::from_map(lifts))?;
    Ok(Unstraightened { fibred, objects, arrows, obj_index, arr_index })
}

/// `E^op` fibrewise, with the data needed to trace objects and arrows back
/// to `E`.
#[derive(Clone, Debug)]
pub struct FibrewiseOp {
    pub source: FibredCat,
    pub straightening: Straightening,
    pub unstraightened: Unstraightened,
    pub fibred: FibredCat,
}

impl FibrewiseOp {
    /// The object of the source corresponding to `x`.
    pub fn origin_object(&self, x: Obj) -> Obj {
        let (b, e) = self.unstraightened.objects[x.0];
        self.straightening.fibres[b.0].total_obj(e)
    }

    /// The base arrow and the vertical source arrow `P(b01)(e1) → e0`
    /// underlying `a`.
    pub fn origin_arrow(&self, a: Arr) -> (Arr, Arr) {
        let (f, phi, _) = self.unstraightened.arrows[a.0];
        let b0 = self.source.base().src(f);
        (f, self.straightening.fibres[b0.0].total_arr(phi))
    }

    /// The object `(b, e)` for a source object `e`.
    pub fn object_of(&self, e: Obj) -> Obj {
        let b = self.source.over(e);
        self.unstraightened.object(b, self.straightening.fibres[b.0].local_obj(e))
    }
}

pub fn fibrewise_op(e: &FibredCat) -> Result<FibrewiseOp> {
    let straightening = straighten(e)?;
    let unstraightened = unstraighten(&straightening.ps.op()?)?;
    let fibred = unstraightened.fibred.clone();
    Ok(FibrewiseOp { source: e.clone(), straightening, unstraightened, fibred })
}

/// The fibrewise opposite of a fibred functor `f : E → F`.
pub fn fibrewise_op_functor(f: &FibFunctor, src: &FibrewiseOp, tgt: &FibrewiseOp) -> Result<FibFunctor> {
    if !src.source.same(f.dom()) && src.source != *f.dom() || !tgt.source.same(f.cod()) && tgt.source != *f.cod() {
        return Err(Error::Mismatch("fibrewise opposites do not match the functor".into()));
    }
    let (e, ff) = (f.dom(), f.cod());
    let (te, tf) = (e.total(), ff.total());
    let b = e.base();
    let m = f.map();
    let obj: Vec<Obj> = src
        .fibred
        .total()
        .objects()
        .map(|x| tgt.object_of(m.obj(src.origin_object(x))))
        .collect();
    let mut arr = Vec::with_capacity(src.fibred.total().n_arrows());
    for a in src.fibred.total().arrows() {
        let (b01, phi) = src.origin_arrow(a);
        let b0 = b.src(b01);
        let e1 = src.origin_object(src.fibred.total().tgt(a));
        let c = ff.gap(ff.lift(b01, m.obj(e1)), m.arr(e.lift(b01, e1)), b.identity(b0));
        let c_inv = tf.inverse(c).ok_or_else(|| Error::NotFibred("comparison of lifts is not invertible".into()))?;
        let psi = tf.compose(m.arr(phi), c_inv);
        debug_assert_eq!(te.tgt(phi), src.origin_object(src.fibred.total().src(a)));
        let fb0 = &tgt.straightening.fibres[b0.0];
        let fe1 = tgt.straightening.fibres[b.tgt(b01).0].local_obj(m.obj(e1));
        arr.push(tgt.unstraightened.arrow(b01, fb0.local_arr(psi), fe1));
    }
    let map = FinFunctor::new(src.fibred.total().clone(), tgt.fibred.total().clone(), obj, arr)?;
    FibFunctor::new(src.fibred.clone(), tgt.fibred.clone(), map)
}

/// Objects of the fibres as a presheaf. Requires a split cleaving, since
/// reindexing of objects must be strictly functorial.
pub fn fibrewise_ob(e: &FibredCat) -> Result<Presheaf> {
    if let Some(why) = e.split_failure() {
        return Err(Error::NotSplit(why));
    }
    let b = e.base().clone();
    let t = e.total();
    let over: Vec<Vec<Obj>> = b.objects().map(|x| e.objects_over(x).collect()).collect();
    let sets = over
        .iter()
        .map(|os| os.iter().map(|&o| t.object_name(o).to_string()).collect())
        .collect();
    Presheaf::from_fn(b.clone(), sets, |f, v| {
        let d = e.lift_domain(f, over[b.tgt(f).0][v]);
        over[b.src(f).0].iter().position(|&o| o == d).expect("lifts stay over their base")
    })
}

/// The presheaf morphism induced by a fibred functor between split fibrations.
pub fn fibrewise_ob_morphism(f: &FibFunctor) -> Result<PresheafMorphism> {
    let (x, y) = (fibrewise_ob(f.dom())?, fibrewise_ob(f.cod())?);
    let b = f.dom().base();
    let over = |e: &FibredCat, o: Obj| e.objects_over(o).collect::<Vec<_>>();
    let comps = b
        .objects()
        .map(|o| {
            let targets = over(f.cod(), o);
            over(f.dom(), o)
                .into_iter()
                .map(|e| targets.iter().position(|&t| t == f.map().obj(e)).expect("fibred functors preserve fibres"))
                .collect()
        })
        .collect();
    PresheafMorphism::new(x, y, comps)
}
