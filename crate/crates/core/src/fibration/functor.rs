use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use super::{DisplayedCat, FibredCat};
use crate::error::{Error, Result};
use crate::fincat::enumerate::{enumerate_functors_where, enumerate_nat_trans_where, search_functors_where};
use crate::fincat::equivalence::check_equivalence_with;
use crate::fincat::functor::same_cat;
use crate::fincat::{Arr, CatBuilder, EquivalenceReport, FinCat, FinFunctor, NatTrans, Obj};

/// A functor between fibred categories over the same base, strictly over
/// the base and preserving cartesian arrows.
#[derive(Clone, PartialEq)]
pub struct FibFunctor {
    dom: FibredCat,
    cod: FibredCat,
    map: FinFunctor,
}

impl FibFunctor {
    pub fn new(dom: FibredCat, cod: FibredCat, map: FinFunctor) -> Result<Self> {
        if !same_cat(dom.base(), cod.base()) {
            return Err(Error::Mismatch("fibred categories live over different bases".into()));
        }
        if !same_cat(map.dom(), dom.total()) || !same_cat(map.cod(), cod.total()) {
            return Err(Error::Mismatch("functor does not connect the total categories".into()));
        }
        let map = map.retarget(dom.total(), cod.total());
        let t = dom.total();
        for x in t.objects() {
            if cod.over(map.obj(x)) != dom.over(x) {
                return Err(Error::NotFibred(format!("`{}` leaves its fibre", t.object_name(x))));
            }
        }
        for f in t.arrows() {
            if cod.over_arr(map.arr(f)) != dom.over_arr(f) {
                return Err(Error::NotFibred(format!("`{}` changes its base arrow", t.arrow_name(f))));
            }
        }
        let mut lifts: Vec<Arr> = dom.cleaving().sorted().into_values().collect();
        lifts.dedup();
        let others = t.arrows().filter(|&f| dom.is_cartesian(f));
        for f in lifts.into_iter().chain(others) {
            if !cod.is_cartesian(map.arr(f)) {
                return Err(Error::NotFibred(format!(
                    "cartesian `{}` is sent to non-cartesian `{}`",
                    t.arrow_name(f),
                    cod.total().arrow_name(map.arr(f))
                )));
            }
        }
        Ok(FibFunctor { dom, cod, map })
    }

    pub(crate) fn new_unchecked(dom: FibredCat, cod: FibredCat, map: FinFunctor) -> Self {
        FibFunctor { dom, cod, map }
    }

    pub fn identity(e: &FibredCat) -> Self {
        FibFunctor { dom: e.clone(), cod: e.clone(), map: FinFunctor::identity(e.total()) }
    }

    pub fn dom(&self) -> &FibredCat {
        &self.dom
    }

    pub fn cod(&self) -> &FibredCat {
        &self.cod
    }

    pub fn map(&self) -> &FinFunctor {
        &self.map
    }

    /// `self ∘ first`
    pub fn after(&self, first: &FibFunctor) -> FibFunctor {
        FibFunctor { dom: first.dom.clone(), cod: self.cod.clone(), map: self.map.after(&first.map) }
    }

    /// Whether the chosen lifts are sent to chosen lifts.
    pub fn preserves_cleaving(&self) -> bool {
        self.dom
            .cleaving()
            .sorted()
            .into_iter()
            .all(|((b01, e), l)| self.cod.lift(b01, self.map.obj(e)) == self.map.arr(l))
    }
}

impl fmt::Debug for FibFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FibFunctor({:?})", self.map)
    }
}

/// A natural transformation between fibred functors with vertical components.
#[derive(Clone, PartialEq)]
pub struct VertNat {
    src: FibFunctor,
    tgt: FibFunctor,
    nat: NatTrans,
}

impl VertNat {
    pub fn new(src: FibFunctor, tgt: FibFunctor, comps: Vec<Arr>) -> Result<Self> {
        let nat = NatTrans::new(src.map.clone(), tgt.map.clone(), comps)?;
        if let Some(x) = src.dom.total().objects().find(|&x| !src.cod.is_vertical(nat.component(x))) {
            return Err(Error::NatTrans(format!(
                "component at `{}` is not vertical",
                src.dom.total().object_name(x)
            )));
        }
        Ok(VertNat { src, tgt, nat })
    }

    pub fn identity(f: &FibFunctor) -> Self {
        VertNat { src: f.clone(), tgt: f.clone(), nat: NatTrans::identity(&f.map) }
    }

    pub fn src(&self) -> &FibFunctor {
        &self.src
    }

    pub fn tgt(&self) -> &FibFunctor {
        &self.tgt
    }

    pub fn nat(&self) -> &NatTrans {
        &self.nat
    }

    pub fn after(&self, first: &VertNat) -> VertNat {
        VertNat { src: first.src.clone(), tgt: self.tgt.clone(), nat: self.nat.after(&first.nat) }
    }
}

impl fmt::Debug for VertNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertNat({:?})", self.nat)
    }
}

fn strict_over<'a>(x: &'a DisplayedCat, y: &'a DisplayedCat) -> (impl Fn(Obj, Obj) -> bool + 'a, impl Fn(Arr, Arr) -> bool + 'a) {
    (move |a: Obj, b: Obj| y.over(b) == x.over(a), move |f: Arr, g: Arr| y.over_arr(g) == x.over_arr(f))
}

/// All fibred functors `e → f` over the common base, in lexicographic order.
pub fn enumerate_fibred_functors(e: &FibredCat, f: &FibredCat) -> Result<Vec<FinFunctor>> {
    if !same_cat(e.base(), f.base()) {
        return Err(Error::Mismatch("fibred categories live over different bases".into()));
    }
    let (obj_ok, arr_ok) = strict_over(e.displayed(), f.displayed());
    enumerate_functors_where(e.total(), f.total(), obj_ok, |a, b| {
        arr_ok(a, b) && (!e.is_cartesian(a) || f.is_cartesian(b))
    })
}

/// All vertical natural transformations `s ⇒ t` between functors into `y`.
pub fn enumerate_vertical(s: &FinFunctor, t: &FinFunctor, y: &DisplayedCat) -> Result<Vec<NatTrans>> {
    enumerate_nat_trans_where(s, t, |_, a| y.is_vertical(a))
}

/// A hom-category materialised as a finite category. Objects are named
/// `f0, f1, …` and arrows `t0, t1, …` in enumeration order.
#[derive(Clone, Debug)]
pub struct FunctorCategory {
    pub cat: Arc<FinCat>,
    pub functors: Vec<FinFunctor>,
    pub transformations: Vec<NatTrans>,
    obj_index: HashMap<(Vec<Obj>, Vec<Arr>), Obj>,
    arr_index: HashMap<(Obj, Obj, Vec<Arr>), Arr>,
}

impl FunctorCategory {
    /// Builds the category whose objects are `functors` and whose arrows are
    /// the transformations produced by `hom`, composed vertically.
    pub fn build(
        name: impl Into<String>,
        functors: Vec<FinFunctor>,
        hom: impl Fn(&FinFunctor, &FinFunctor) -> Result<Vec<NatTrans>>,
    ) -> Result<Self> {
        let mut b = CatBuilder::new(name);
        let mut obj_index = HashMap::new();
        for (i, f) in functors.iter().enumerate() {
            let x = b.object(format!("f{i}"))?;
            obj_index.insert(f.key(), x);
        }
        let mut transformations = Vec::new();
        let mut arr_index = HashMap::new();
        let mut ends = Vec::new();
        for (i, s) in functors.iter().enumerate() {
            for (j, t) in functors.iter().enumerate() {
                for nat in hom(s, t)? {
                    let a = b.arrow(format!("t{}", transformations.len()), Obj(i), Obj(j))?;
                    if i == j && nat.is_identity() {
                        b.set_identity(Obj(i), a);
                    }
                    arr_index.insert((Obj(i), Obj(j), nat.components().to_vec()), a);
                    ends.push((Obj(i), Obj(j)));
                    transformations.push(nat);
                }
            }
        }
        for (fi, first) in transformations.iter().enumerate() {
            let (s, m) = ends[fi];
            for (gi, second) in transformations.iter().enumerate() {
                if ends[gi].0 != m {
                    continue;
                }
                let comp = second.after(first);
                let key = (s, ends[gi].1, comp.components().to_vec());
                let h = *arr_index.get(&key).ok_or_else(|| {
                    Error::Mismatch("vertical composite missing from the hom-category".into())
                })?;
                b.set_compose(Arr(gi), Arr(fi), h);
            }
        }
        let cat = Arc::new(b.build()?);
        Ok(FunctorCategory { cat, functors, transformations, obj_index, arr_index })
    }

    pub fn object_of(&self, f: &FinFunctor) -> Option<Obj> {
        self.obj_index.get(&f.key()).copied()
    }

    pub fn arrow_of(&self, t: &NatTrans) -> Option<Arr> {
        let s = self.object_of(t.src())?;
        let u = self.object_of(t.tgt())?;
        self.arr_index.get(&(s, u, t.components().to_vec())).copied()
    }

    pub fn functor(&self, x: Obj) -> &FinFunctor {
        &self.functors[x.0]
    }

    pub fn transformation(&self, a: Arr) -> &NatTrans {
        &self.transformations[a.0]
    }
}

/// `FIB(B)(e, f)`: fibred functors and vertical transformations.
pub fn fib_hom(e: &FibredCat, f: &FibredCat) -> Result<FunctorCategory> {
    let functors = enumerate_fibred_functors(e, f)?;
    let name = format!("FIB({},{})", e.total().name(), f.total().name());
    FunctorCategory::build(name, functors, |s, t| enumerate_vertical(s, t, f.displayed()))
}

/// `CAT/B(x, y)`: functors strictly over the base and vertical transformations.
pub fn displayed_hom(x: &DisplayedCat, y: &DisplayedCat) -> Result<FunctorCategory> {
    if !same_cat(x.base(), y.base()) {
        return Err(Error::Mismatch("displayed categories live over different bases".into()));
    }
    let (obj_ok, arr_ok) = strict_over(x, y);
    let functors = enumerate_functors_where(x.total(), y.total(), obj_ok, arr_ok)?;
    let name = format!("CAT/B({},{})", x.total().name(), y.total().name());
    FunctorCategory::build(name, functors, |s, t| enumerate_vertical(s, t, y))
}

/// Full, faithful and essentially surjective through vertical isomorphisms.
pub fn check_fibred_equivalence(f: &FibFunctor) -> EquivalenceReport {
    let cod = f.cod().clone();
    check_equivalence_with(f.map(), |g| cod.is_vertical(g))
}

/// The first fibred functor `e → f` (in search order) that is a fibred
/// equivalence, if any.
pub fn find_fibred_equivalence(e: &FibredCat, f: &FibredCat) -> Result<Option<FibFunctor>> {
    if !same_cat(e.base(), f.base()) {
        return Err(Error::Mismatch("fibred categories live over different bases".into()));
    }
    let b = e.base();
    let iso_classes_over = |x: &FibredCat, o: Obj| {
        let t = x.total();
        let mut reps: Vec<Obj> = Vec::new();
        for y in x.objects_over(o) {
            if !reps.iter().any(|&r| t.hom(r, y).iter().any(|&g| t.is_iso(g) && x.is_vertical(g))) {
                reps.push(y);
            }
        }
        reps.len()
    };
    if b.objects().any(|o| iso_classes_over(e, o) != iso_classes_over(f, o)) {
        return Ok(None);
    }
    let (obj_ok, arr_ok) = strict_over(e.displayed(), f.displayed());
    let mut found = None;
    search_functors_where(
        e.total(),
        f.total(),
        obj_ok,
        |a, g| arr_ok(a, g) && (!e.is_cartesian(a) || f.is_cartesian(g)),
        |map| {
            let candidate = FibFunctor::new_unchecked(e.clone(), f.clone(), map);
            if check_fibred_equivalence(&candidate).is_equivalence() {
                found = Some(candidate);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        },
    )?;
    Ok(found)
}
