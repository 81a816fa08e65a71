//! The oplax sum `Σ_p` and the oplax base change `∇_p` along a fibration
//! `p : A ↠ B`.
//!
//! A displayed object of `∇_p(E)` over `a` is a fibred functor
//! `e : Σ_p(y_A(a)) → E`. A displayed arrow `e0 → e1` over `a01` is a vertical
//! cell `e0 ⇒ e1 ∘ W(a01)`, where `W(a01) : Σ_p(y_A(a0)) → Σ_p(y_A(a1))`
//! postcomposes with `a01`. Cells compose as
//! `(e12 ∘ e01)_x = (e12)_{W(a01) x} ∘ (e01)_x`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibration::{
    compose_fibrations, enumerate_fibred_functors, enumerate_vertical, yoneda_with_slice, Cleaving, DisplayedCat,
    FibFunctor, FibredCat, VertNat,
};
use crate::fincat::functor::same_cat;
use crate::fincat::{slice_functor, Arr, CatBuilder, FinCat, FinFunctor, NatTrans, Obj, Slice};
use crate::names::{list, tuple};

/// `Σ_p(y_A(a))` for every `a`, with the whiskering functors between them.
#[derive(Clone, Debug)]
pub struct SliceSums {
    pub p: FibredCat,
    pub slices: Vec<Slice>,
    pub sums: Vec<FibredCat>,
    pub whiskers: Vec<FibFunctor>,
}

impl SliceSums {
    pub fn new(p: &FibredCat) -> Result<Self> {
        let a = p.total();
        let mut slices = Vec::with_capacity(a.n_objects());
        let mut sums = Vec::with_capacity(a.n_objects());
        for x in a.objects() {
            let (s, y) = yoneda_with_slice(a, x);
            sums.push(compose_fibrations(&y, p)?);
            slices.push(s);
        }
        let whiskers = a
            .arrows()
            .map(|f| {
                let (a0, a1) = (a.src(f), a.tgt(f));
                let map = slice_functor(&slices[a0.0], &slices[a1.0], f);
                FibFunctor::new(sums[a0.0].clone(), sums[a1.0].clone(), map)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SliceSums { p: p.clone(), slices, sums, whiskers })
    }

    pub fn sum(&self, a: Obj) -> &FibredCat {
        &self.sums[a.0]
    }

    pub fn whisker(&self, a01: Arr) -> &FibFunctor {
        &self.whiskers[a01.0]
    }
}

/// `W(a01) : Σ_p(y_A(a0)) → Σ_p(y_A(a1))`, sending `(a′, f)` to `(a′, a01 ∘ f)`.
pub fn whisker_slice(p: &FibredCat, a01: Arr) -> Result<FibFunctor> {
    Ok(SliceSums::new(p)?.whiskers[a01.0].clone())
}

/// A displayed object of `∇_p(E)` over `at`.
#[derive(Clone, Debug)]
pub struct OplaxObject {
    pub at: Obj,
    pub functor: FibFunctor,
}

/// A displayed arrow of `∇_p(E)`: a vertical cell `src ⇒ tgt ∘ W(along)`.
#[derive(Clone, Debug)]
pub struct OplaxArrow {
    pub along: Arr,
    pub src: Obj,
    pub tgt: Obj,
    pub cell: NatTrans,
}

/// `∇_p(E)` materialised, with its split cleaving.
#[derive(Clone, Debug)]
pub struct OplaxBaseChange {
    pub sums: SliceSums,
    pub e: FibredCat,
    pub objects: Vec<OplaxObject>,
    pub arrows: Vec<OplaxArrow>,
    pub fibred: FibredCat,
    obj_index: HashMap<(Obj, Vec<Obj>, Vec<Arr>), Obj>,
    arr_index: HashMap<(Arr, Obj, Obj, Vec<Arr>), Arr>,
}

/// Counts describing a materialised `∇_p(E)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OplaxStats {
    pub fibre_objects: Vec<(String, usize)>,
    pub fibre_arrows: Vec<(String, usize)>,
    pub objects: usize,
    pub arrows: usize,
    pub lifts: usize,
    pub lifts_cartesian: bool,
    pub split: bool,
}

impl OplaxBaseChange {
    pub fn object(&self, x: Obj) -> &OplaxObject {
        &self.objects[x.0]
    }

    pub fn arrow(&self, f: Arr) -> &OplaxArrow {
        &self.arrows[f.0]
    }

    /// The object whose functor is `f`, if `f` is a displayed object over `at`.
    pub fn object_of(&self, at: Obj, f: &FinFunctor) -> Option<Obj> {
        let (o, a) = f.key();
        self.obj_index.get(&(at, o, a)).copied()
    }

    pub fn arrow_of(&self, along: Arr, src: Obj, tgt: Obj, comps: &[Arr]) -> Option<Arr> {
        self.arr_index.get(&(along, src, tgt, comps.to_vec())).copied()
    }

    /// `a01^* e1 = e1 ∘ W(a01)`.
    pub fn restrict(&self, e1: Obj, a01: Arr) -> Obj {
        let o = &self.objects[e1.0];
        let a = self.sums.p.total();
        assert_eq!(a.tgt(a01), o.at, "restriction along an arrow into a different object");
        let f = o.functor.map().after(self.sums.whisker(a01).map());
        self.object_of(a.src(a01), &f).expect("restrictions are displayed objects")
    }

    pub fn stats(&self) -> OplaxStats {
        let a = self.sums.p.total();
        let t = self.fibred.total();
        let fibre_objects = a
            .objects()
            .map(|x| (a.object_name(x).to_string(), self.fibred.objects_over(x).count()))
            .collect();
        let fibre_arrows = a
            .objects()
            .map(|x| {
                let id = a.identity(x);
                (a.object_name(x).to_string(), t.arrows().filter(|&f| self.fibred.over_arr(f) == id).count())
            })
            .collect();
        let lifts = self.fibred.cleaving().sorted();
        OplaxStats {
            fibre_objects,
            fibre_arrows,
            objects: t.n_objects(),
            arrows: t.n_arrows(),
            lifts: lifts.len(),
            lifts_cartesian: lifts.values().all(|&l| self.fibred.is_cartesian(l)),
            split: self.fibred.is_split(),
        }
    }
}

/// `(e12 ∘ e01)_x = (e12)_{W(a01) x} ∘ (e01)_x`
fn paste_cells(t: &FinCat, w01: &FinFunctor, e01: &[Arr], e12: &[Arr]) -> Vec<Arr> {
    e01.iter().enumerate().map(|(x, &c)| t.compose(e12[w01.obj(Obj(x)).0], c)).collect()
}

pub fn oplax_base_change(p: &FibredCat, e: &FibredCat) -> Result<OplaxBaseChange> {
    if !same_cat(p.base(), e.base()) {
        return Err(Error::Mismatch(format!(
            "{} lives over {}, but the fibration ends in {}",
            e.total().name(),
            e.base().name(),
            p.base().name()
        )));
    }
    let sums = SliceSums::new(p)?;
    let a = p.total().clone();
    let et = e.total().clone();
    let mut b = CatBuilder::new(format!("Opl({},{})", a.name(), et.name()));
    let mut objects = Vec::new();
    let mut obj_index = HashMap::new();
    let mut over: Vec<Vec<Obj>> = vec![Vec::new(); a.n_objects()];
    for x in a.objects() {
        for map in enumerate_fibred_functors(sums.sum(x), e)? {
            let o = b.object(tuple(&[a.object_name(x), &map.table_name()]))?;
            let (ko, ka) = map.key();
            obj_index.insert((x, ko, ka), o);
            over[x.0].push(o);
            objects.push(OplaxObject { at: x, functor: FibFunctor::new_unchecked(sums.sum(x).clone(), e.clone(), map) });
        }
    }
    let name_of = |o: Obj| b_object_name(&objects, &a, o);
    let mut arrows = Vec::new();
    let mut arr_index = HashMap::new();
    for f in a.arrows() {
        let (a0, a1) = (a.src(f), a.tgt(f));
        let w = sums.whisker(f).map();
        for &s in &over[a0.0] {
            for &t in &over[a1.0] {
                let target = objects[t.0].functor.map().after(w);
                for cell in enumerate_vertical(objects[s.0].functor.map(), &target, e.displayed())? {
                    let comps: Vec<String> = cell.components().iter().map(|&c| et.arrow_name(c).to_string()).collect();
                    let name = tuple(&[a.arrow_name(f).to_string(), name_of(s), name_of(t), list(&comps)]);
                    let id = b.arrow(name, s, t)?;
                    if a.is_identity(f) && s == t && cell.components().iter().all(|&c| et.is_identity(c)) {
                        b.set_identity(s, id);
                    }
                    arr_index.insert((f, s, t, cell.components().to_vec()), id);
                    arrows.push(OplaxArrow { along: f, src: s, tgt: t, cell });
                }
            }
        }
    }
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
    for (i, r) in arrows.iter().enumerate() {
        out_of[r.src.0].push(i);
    }
    for (i, r01) in arrows.iter().enumerate() {
        let w01 = sums.whisker(r01.along).map();
        for &j in &out_of[r01.tgt.0] {
            let r12 = &arrows[j];
            let comps = paste_cells(&et, w01, r01.cell.components(), r12.cell.components());
            let along = a.compose(r12.along, r01.along);
            let h = arr_index
                .get(&(along, r01.src, r12.tgt, comps))
                .ok_or_else(|| Error::Mismatch("pasted cell is not a displayed arrow".into()))?;
            b.set_compose(Arr(j), Arr(i), *h);
        }
    }
    let total = Arc::new(b.build()?);
    let display = FinFunctor::new(
        total.clone(),
        a.clone(),
        objects.iter().map(|o| o.at).collect(),
        arrows.iter().map(|r| r.along).collect(),
    )?;
    let mut result = OplaxBaseChange {
        sums,
        e: e.clone(),
        objects,
        arrows,
        fibred: FibredCat::identity(&a),
        obj_index,
        arr_index,
    };
    let mut lifts = HashMap::new();
    for f in a.arrows() {
        for &t in &over[a.tgt(f).0] {
            let s = result.restrict(t, f);
            let comps: Vec<Arr> = result.objects[s.0].functor.map().obj_map().iter().map(|&y| et.identity(y)).collect();
            let l = result.arrow_of(f, s, t, &comps).expect("identity cells are displayed arrows");
            lifts.insert((f, t), l);
        }
    }
    result.fibred = FibredCat::new(DisplayedCat::new(display), Cleaving::from_map(lifts))?;
    Ok(result)
}

fn b_object_name(objects: &[OplaxObject], a: &FinCat, o: Obj) -> String {
    let x = &objects[o.0];
    tuple(&[a.object_name(x.at), &x.functor.map().table_name()])
}

/// The bijection between displayed arrows `e0 → e2` over `a12 ∘ a01` and
/// displayed arrows `e0 → a12^* e2` over `a01`, given by the identity on cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeBijection {
    pub over_composite: usize,
    pub into_restriction: usize,
    pub bijective: bool,
}

pub fn arrows_over_composite_bijection(
    n: &OplaxBaseChange,
    e0: Obj,
    e2: Obj,
    a01: Arr,
    a12: Arr,
) -> CompositeBijection {
    let a = n.sums.p.total();
    let a02 = a.compose(a12, a01);
    let r = n.restrict(e2, a12);
    let left: Vec<&OplaxArrow> = n.arrows.iter().filter(|x| x.along == a02 && x.src == e0 && x.tgt == e2).collect();
    let right: Vec<&OplaxArrow> = n.arrows.iter().filter(|x| x.along == a01 && x.src == e0 && x.tgt == r).collect();
    let mut bijective = left.len() == right.len();
    for l in &left {
        bijective &= n.arrow_of(a01, e0, r, l.cell.components()).is_some();
    }
    for x in &right {
        bijective &= n.arrow_of(a02, e0, e2, x.cell.components()).is_some();
    }
    CompositeBijection { over_composite: left.len(), into_restriction: right.len(), bijective }
}

/// `∇_p(f) : ∇_p(E) → ∇_p(F)`: postcomposition on objects, whiskering on cells.
pub fn local_hom_on_1cell(ne: &OplaxBaseChange, nf: &OplaxBaseChange, f: &FibFunctor) -> Result<FibFunctor> {
    if !ne.e.same(f.dom()) && ne.e != *f.dom() || !nf.e.same(f.cod()) && nf.e != *f.cod() {
        return Err(Error::Mismatch("functor does not connect the fibred categories".into()));
    }
    let obj = ne
        .objects
        .iter()
        .map(|o| {
            nf.object_of(o.at, &f.map().after(o.functor.map()))
                .ok_or_else(|| Error::NotFibred("postcomposite is not a displayed object".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let arr = ne
        .arrows
        .iter()
        .map(|r| {
            let comps: Vec<Arr> = r.cell.components().iter().map(|&c| f.map().arr(c)).collect();
            nf.arrow_of(r.along, obj[r.src.0], obj[r.tgt.0], &comps)
                .ok_or_else(|| Error::NotFibred("whiskered cell is not a displayed arrow".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let map = FinFunctor::new(ne.fibred.total().clone(), nf.fibred.total().clone(), obj, arr)?;
    FibFunctor::new(ne.fibred.clone(), nf.fibred.clone(), map)
}

/// `∇_p(f01)` at `e` is the whiskering `f01 ∘ e`, a vertical arrow over `1_a`.
pub fn local_hom_on_2cell(
    ne: &OplaxBaseChange,
    nf: &OplaxBaseChange,
    f01: &VertNat,
    g0: &FibFunctor,
    g1: &FibFunctor,
) -> Result<VertNat> {
    let a = ne.sums.p.total();
    let comps = ne
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let cell: Vec<Arr> = o.functor.map().obj_map().iter().map(|&y| f01.nat().component(y)).collect();
            let (s, t) = (g0.map().obj(Obj(i)), g1.map().obj(Obj(i)));
            nf.arrow_of(a.identity(o.at), s, t, &cell)
                .ok_or_else(|| Error::NotFibred("whiskered 2-cell is not a vertical arrow".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    VertNat::new(g0.clone(), g1.clone(), comps)
}

/// Whether every component of the cell of `f` is invertible in `E`.
pub fn has_invertible_cell(n: &OplaxBaseChange, f: Arr) -> bool {
    let et = n.e.total();
    n.arrows[f.0].cell.components().iter().all(|&c| et.is_iso(c))
}
