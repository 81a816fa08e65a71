//! Categories of elements, the categorical nerve, sieves and the
//! Hofmann–Streicher universe of a presheaf category.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{
    enumerate_functors, enumerate_presheaf_morphisms, slice, slice_functor, Arr, CatBuilder, FinCat, FinFunctor, Obj,
    Presheaf, PresheafMorphism, Slice,
};
use crate::hslift::universe_category;
use crate::limits::Budget;
use crate::names::{list, tuple};

/// The category of elements of a presheaf with its projection.
///
/// The object `(c,x)` has `x ∈ X(c)`. The arrow `(f,x1)` goes from
/// `(c0, X(f)(x1))` to `(c1, x1)` for `f : c0 → c1`.
#[derive(Clone, Debug)]
pub struct Elements {
    pub cat: Arc<FinCat>,
    pub projection: FinFunctor,
    objects: Vec<(Obj, usize)>,
    obj_index: HashMap<(Obj, usize), Obj>,
    arr_index: HashMap<(Arr, usize), Arr>,
}

impl Elements {
    pub fn object(&self, c: Obj, x: usize) -> Obj {
        self.obj_index[&(c, x)]
    }

    pub fn arrow(&self, f: Arr, x1: usize) -> Arr {
        self.arr_index[&(f, x1)]
    }

    pub fn element(&self, e: Obj) -> (Obj, usize) {
        self.objects[e.0]
    }
}

pub fn elements(x: &Presheaf) -> Elements {
    let c = x.base();
    let mut b = CatBuilder::new(format!("el({})", c.name()));
    let mut objects = Vec::new();
    let mut obj_index = HashMap::new();
    for o in c.objects() {
        for (i, name) in x.set(o).iter().enumerate() {
            let e = b.object(tuple(&[c.object_name(o), name])).expect("element names are unique");
            objects.push((o, i));
            obj_index.insert((o, i), e);
        }
    }
    let mut arr_index = HashMap::new();
    let mut under = Vec::new();
    for f in c.arrows() {
        let (c0, c1) = (c.src(f), c.tgt(f));
        for (i, name) in x.set(c1).iter().enumerate() {
            let a = b
                .arrow(tuple(&[c.arrow_name(f), name]), obj_index[&(c0, x.act(f, i))], obj_index[&(c1, i)])
                .expect("element arrow names are unique");
            if c.is_identity(f) {
                b.set_identity(obj_index[&(c1, i)], a);
            }
            arr_index.insert((f, i), a);
            under.push(f);
        }
    }
    for (g, f) in c.composable_pairs() {
        for i in 0..x.size(c.tgt(g)) {
            b.set_compose(arr_index[&(g, i)], arr_index[&(f, x.act(g, i))], arr_index[&(c.compose(g, f), i)]);
        }
    }
    let cat = Arc::new(b.build().expect("categories of elements are categories"));
    let projection = FinFunctor::new(cat.clone(), c.clone(), objects.iter().map(|p| p.0).collect(), under)
        .expect("the projection is a functor");
    Elements { cat, projection, objects, obj_index, arr_index }
}

/// `∫m : ∫X → ∫Y` for a presheaf morphism `m : X ⇒ Y`.
pub fn elements_functor(m: &PresheafMorphism, ex: &Elements, ey: &Elements) -> FinFunctor {
    let c = m.src().base();
    let obj = ex.objects.iter().map(|&(o, i)| ey.object(o, m.apply(o, i))).collect();
    let mut arr = vec![Arr(0); ex.cat.n_arrows()];
    for (&(f, i), &a) in &ex.arr_index {
        arr[a.0] = ey.arrow(f, m.apply(c.tgt(f), i));
    }
    FinFunctor::new(ex.cat.clone(), ey.cat.clone(), obj, arr).expect("∫ is functorial")
}

type FunctorKey = (Vec<Obj>, Vec<Arr>);

/// `ν_C(D)` together with the slices and functors that make up its values.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub presheaf: Presheaf,
    pub slices: Vec<Slice>,
    pub functors: Vec<Vec<FinFunctor>>,
    index: Vec<HashMap<FunctorKey, usize>>,
}

impl Nerve {
    pub fn functor(&self, c: Obj, i: usize) -> &FinFunctor {
        &self.functors[c.0][i]
    }

    pub fn index_of(&self, c: Obj, f: &FinFunctor) -> Option<usize> {
        self.index[c.0].get(&f.key()).copied()
    }
}

/// `ν_C(D)(c) = Fun(C/c, D)`, restricted along `c01` by precomposition with
/// `C/c0 → C/c1`.
pub fn nerve(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Result<Nerve> {
    let slices: Vec<Slice> = c.objects().map(|o| slice(c, o)).collect();
    functor_presheaf(c, &slices, |s| enumerate_functors(&s.cat, d), |f, _, _| f.clone())
}

/// A presheaf whose value at `c` is a set of functors out of `C/c` (or its
/// opposite, via `adapt`), restricted by precomposition.
fn functor_presheaf(
    c: &Arc<FinCat>,
    slices: &[Slice],
    values: impl Fn(&Slice) -> Result<Vec<FinFunctor>>,
    adapt: impl Fn(&FinFunctor, Obj, Obj) -> FinFunctor,
) -> Result<Nerve> {
    let functors = slices.iter().map(values).collect::<Result<Vec<_>>>()?;
    let index: Vec<HashMap<_, _>> = functors
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(i, f)| (f.key(), i)).collect())
        .collect();
    let sets = functors.iter().map(|fs| fs.iter().map(FinFunctor::table_name).collect()).collect();
    let mut actions = Vec::with_capacity(c.n_arrows());
    for f in c.arrows() {
        let (c0, c1) = (c.src(f), c.tgt(f));
        let along = adapt(&slice_functor(&slices[c0.0], &slices[c1.0], f), c0, c1);
        let act = functors[c1.0]
            .iter()
            .map(|g| {
                let h = g.after(&along);
                index[c0.0].get(&h.key()).copied().ok_or_else(|| Error::Presheaf("restriction leaves the value set".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        actions.push(act);
    }
    let presheaf = Presheaf::new(c.clone(), sets, actions)?;
    Ok(Nerve { presheaf, slices: slices.to_vec(), functors, index })
}

/// The outcome of checking `∫_C ⊣ ν_C` at a pair `(X, D)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NerveAdjunctionReport {
    pub functors: usize,
    pub morphisms: usize,
    pub bijective: bool,
    pub naturality_in_x: usize,
    pub naturality_in_d: usize,
    pub failure: Option<String>,
}

impl NerveAdjunctionReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.failure.is_none()
    }
}

/// `F : ∫X → D` ↦ `x ↦ F ∘ (C/c → ∫X)`, where `C/c → ∫X` sends `(d, g)` to
/// `(d, X(g)(x))`.
pub fn transpose_to_nerve(
    x: &Presheaf,
    el: &Elements,
    nu: &Nerve,
    f: &FinFunctor,
) -> Result<PresheafMorphism> {
    let c = x.base();
    let mut comps = Vec::with_capacity(c.n_objects());
    for o in c.objects() {
        let s = &nu.slices[o.0];
        let mut comp = Vec::with_capacity(x.size(o));
        for v in 0..x.size(o) {
            let point = yoneda_point(x, el, s, v);
            let g = f.after(&point);
            comp.push(nu.index_of(o, &g).ok_or_else(|| Error::Mismatch("transpose leaves the nerve".into()))?);
        }
        comps.push(comp);
    }
    PresheafMorphism::new(x.clone(), nu.presheaf.clone(), comps)
}

/// The functor `C/c → ∫X` classifying `v ∈ X(c)`.
fn yoneda_point(x: &Presheaf, el: &Elements, s: &Slice, v: usize) -> FinFunctor {
    let obj = s.cat.objects().map(|t| {
        let g = s.object_arrow(t);
        el.object(s.base.src(g), x.act(g, v))
    });
    let arr = s.cat.arrows().map(|a| {
        let g1 = s.object_arrow(s.cat.tgt(a));
        el.arrow(s.underlying(a), x.act(g1, v))
    });
    FinFunctor::new_unchecked(s.cat.clone(), el.cat.clone(), obj.collect(), arr.collect())
}

/// `φ : X ⇒ ν(D)` ↦ `(c,x) ↦ φ_c(x)(c, 1_c)`, and on `(f, x1)` the image
/// under `φ_{c1}(x1)` of the triangle `(c0, f) → (c1, 1)`.
pub fn transpose_from_nerve(x: &Presheaf, el: &Elements, nu: &Nerve, phi: &PresheafMorphism, d: &Arc<FinCat>) -> Result<FinFunctor> {
    let c = x.base();
    let obj = el
        .objects
        .iter()
        .map(|&(o, v)| {
            let s = &nu.slices[o.0];
            nu.functor(o, phi.apply(o, v)).obj(s.terminal())
        })
        .collect();
    let mut arr = vec![Arr(0); el.cat.n_arrows()];
    for (&(f, v1), &a) in &el.arr_index {
        let c1 = c.tgt(f);
        let s = &nu.slices[c1.0];
        let tri = s.arrow_of(f, s.terminal());
        arr[a.0] = nu.functor(c1, phi.apply(c1, v1)).arr(tri);
    }
    FinFunctor::new(el.cat.clone(), d.clone(), obj, arr)
}

/// Checks that the two transposes are inverse bijections between
/// `Fun(∫X, D)` and `Ĉ(X, ν(D))`, natural in `X` along every morphism from
/// the `others` and in `D` along every functor into the `targets`.
pub fn nerve_adjunction_check(
    x: &Presheaf,
    d: &Arc<FinCat>,
    others: &[Presheaf],
    targets: &[Arc<FinCat>],
) -> Result<NerveAdjunctionReport> {
    let c = x.base();
    let el = elements(x);
    let nu = nerve(c, d)?;
    let fs = enumerate_functors(&el.cat, d)?;
    let ms = enumerate_presheaf_morphisms(x, &nu.presheaf)?;
    let mut report = NerveAdjunctionReport { functors: fs.len(), morphisms: ms.len(), ..Default::default() };
    let mut forward = Vec::with_capacity(fs.len());
    for f in &fs {
        let m = transpose_to_nerve(x, &el, &nu, f)?;
        let back = transpose_from_nerve(x, &el, &nu, &m, d)?;
        if back != *f {
            report.failure = Some(format!("{} does not survive the round trip", f.table_name()));
            return Ok(report);
        }
        forward.push(m);
    }
    for m in &ms {
        let f = transpose_from_nerve(x, &el, &nu, m, d)?;
        if transpose_to_nerve(x, &el, &nu, &f)? != *m {
            report.failure = Some("a morphism into the nerve does not survive the round trip".into());
            return Ok(report);
        }
    }
    report.bijective = fs.len() == ms.len();
    let mut budget = Budget::new("checking nerve naturality");
    for y in others.iter().filter(|y| y.base() == c) {
        let ey = elements(y);
        for n in enumerate_presheaf_morphisms(y, x)? {
            let int = elements_functor(&n, &ey, &el);
            for (f, m) in fs.iter().zip(&forward) {
                budget.tick()?;
                if transpose_to_nerve(y, &ey, &nu, &f.after(&int))? != m.after(&n) {
                    report.failure = Some(format!("naturality in X fails for {}", f.table_name()));
                    return Ok(report);
                }
                report.naturality_in_x += 1;
            }
        }
    }
    for e in targets {
        let nu_e = nerve(c, e)?;
        for g in enumerate_functors(d, e)? {
            let post = nerve_functor(&nu, &nu_e, &g)?;
            for (f, m) in fs.iter().zip(&forward) {
                budget.tick()?;
                if transpose_to_nerve(x, &el, &nu_e, &g.after(f))? != post.after(m) {
                    report.failure = Some(format!("naturality in D fails for {}", f.table_name()));
                    return Ok(report);
                }
                report.naturality_in_d += 1;
            }
        }
    }
    Ok(report)
}

/// `ν(G) : ν(D) ⇒ ν(E)`, postcomposition with `G : D → E`.
pub fn nerve_functor(nu_d: &Nerve, nu_e: &Nerve, g: &FinFunctor) -> Result<PresheafMorphism> {
    let c = nu_d.presheaf.base();
    let comps = c
        .objects()
        .map(|o| {
            nu_d.functors[o.0]
                .iter()
                .map(|h| nu_e.index_of(o, &g.after(h)).ok_or_else(|| Error::Mismatch("postcomposite leaves the nerve".into())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PresheafMorphism::new(nu_d.presheaf.clone(), nu_e.presheaf.clone(), comps)
}

/// A sieve on `at`: a set of arrows into `at` closed under precomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SieveSet {
    #[serde(skip)]
    pub base: Arc<FinCat>,
    #[serde(serialize_with = "serialize_obj")]
    pub at: Obj,
    pub arrows: Vec<Arr>,
}

fn serialize_obj<S: serde::Serializer>(o: &Obj, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(o.0 as u64)
}

impl SieveSet {
    pub fn contains(&self, f: Arr) -> bool {
        self.arrows.contains(&f)
    }

    /// `[f,g,…]` in table order.
    pub fn name(&self) -> String {
        list(&self.arrows.iter().map(|&f| self.base.arrow_name(f)).collect::<Vec<_>>())
    }

    /// `f*S = { g | f ∘ g ∈ S }`.
    pub fn pullback(&self, f: Arr) -> SieveSet {
        let c = &self.base;
        let arrows = c.arrows_into(c.src(f)).iter().copied().filter(|&g| self.contains(c.compose(f, g))).collect();
        SieveSet { base: c.clone(), at: c.src(f), arrows }
    }
}

/// All sieves on `c`, ordered by the binary number whose `i`-th digit records
/// membership of the `i`-th arrow into `c`.
pub fn sieves(cat: &Arc<FinCat>, c: Obj) -> Result<Vec<SieveSet>> {
    let into = cat.arrows_into(c);
    if into.len() >= 64 {
        return Err(Error::SearchLimit { limit: 1 << 63, context: "enumerating sieves".into() });
    }
    let mut budget = Budget::new("enumerating sieves");
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << into.len()) {
        budget.tick()?;
        let member = |f: Arr| into.iter().position(|&g| g == f).is_some_and(|i| mask >> i & 1 == 1);
        let closed = into.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).all(|(_, &f)| {
            cat.arrows_into(cat.src(f)).iter().all(|&g| member(cat.compose(f, g)))
        });
        if closed {
            let arrows = into.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &f)| f).collect();
            out.push(SieveSet { base: cat.clone(), at: c, arrows });
        }
    }
    Ok(out)
}

/// `Ω(c) = Sieve(c)`, acting by pullback.
pub fn sieve_presheaf(cat: &Arc<FinCat>) -> Result<Presheaf> {
    let all = cat.objects().map(|c| sieves(cat, c)).collect::<Result<Vec<_>>>()?;
    let sets = all.iter().map(|ss| ss.iter().map(SieveSet::name).collect()).collect();
    Presheaf::from_fn(cat.clone(), sets, |f, v| {
        let pulled = all[cat.tgt(f).0][v].pullback(f);
        all[cat.src(f).0].iter().position(|s| *s == pulled).expect("pullbacks of sieves are sieves")
    })
}

/// The lifted universe `U(c) = Fun((C/c)^op, U_k)`, its pointed version and
/// the projection between them.
#[derive(Clone, Debug)]
pub struct HsUniverse {
    pub universe: Nerve,
    pub pointed: Nerve,
    pub projection: PresheafMorphism,
}

pub fn hs_universe_presheaf(c: &Arc<FinCat>, k: usize) -> Result<HsUniverse> {
    let u = universe_category(k);
    let slices: Vec<Slice> = c.objects().map(|o| slice(c, o)).collect();
    let ops: Vec<Arc<FinCat>> = slices.iter().map(|s| Arc::new(s.cat.opposite())).collect();
    let op_of = |s: &Slice| ops[s.apex.0].clone();
    let adapt = |f: &FinFunctor, c0: Obj, c1: Obj| f.op(&ops[c0.0], &ops[c1.0]);
    let universe = functor_presheaf(c, &slices, |s| enumerate_functors(&op_of(s), &u.carrier), adapt)?;
    let pointed = functor_presheaf(c, &slices, |s| enumerate_functors(&op_of(s), &u.pointed), adapt)?;
    let comps = c
        .objects()
        .map(|o| {
            pointed.functors[o.0]
                .iter()
                .map(|h| universe.index_of(o, &u.forget.after(h)).expect("forgetting the point stays in U"))
                .collect()
        })
        .collect();
    let projection = PresheafMorphism::new(pointed.presheaf.clone(), universe.presheaf.clone(), comps)?;
    Ok(HsUniverse { universe, pointed, projection })
}

/// For `k = 1`: the functor `(C/c)^op → 𝟚` corresponding to each sieve is the
/// one whose preimage of the top object is the sieve. Returns, for every
/// object, the position of each universe element's sieve in [`sieves`].
pub fn universe_to_sieves(c: &Arc<FinCat>, hs: &HsUniverse) -> Result<Vec<Vec<usize>>> {
    let u = hs.universe.functors.first().and_then(|fs| fs.first()).map(|f| f.cod().clone());
    let mut out = Vec::new();
    for o in c.objects() {
        let ss = sieves(c, o)?;
        let s = &hs.universe.slices[o.0];
        let mut row = Vec::new();
        for f in &hs.universe.functors[o.0] {
            let top = u.as_ref().and_then(|u| u.object("1")).ok_or_else(|| Error::Mismatch("the universe has no top".into()))?;
            let arrows: Vec<Arr> = s.cat.objects().filter(|&t| f.obj(t) == top).map(|t| s.object_arrow(t)).collect();
            let mut arrows = arrows;
            arrows.sort();
            let pos = ss
                .iter()
                .position(|x| {
                    let mut a = x.arrows.clone();
                    a.sort();
                    a == arrows
                })
                .ok_or_else(|| Error::Mismatch(format!("{} does not classify a sieve", f.table_name())))?;
            row.push(pos);
        }
        out.push(row);
    }
    Ok(out)
}

/// How the `k = 1` universe compares with the sieve presheaf.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SieveAgreement {
    pub universe_sizes: Vec<(String, usize)>,
    pub sieve_counts: Vec<(String, usize)>,
    pub bijective: bool,
    pub natural: bool,
    pub failure: Option<String>,
}

impl SieveAgreement {
    pub fn passed(&self) -> bool {
        self.bijective && self.natural
    }
}

/// Checks that [`universe_to_sieves`] is a bijection at every object and
/// commutes with every restriction map.
pub fn check_sieve_agreement(c: &Arc<FinCat>, hs: &HsUniverse) -> Result<SieveAgreement> {
    let u = &hs.universe.presheaf;
    let omega = sieve_presheaf(c)?;
    let named = |p: &Presheaf| c.objects().map(|x| (c.object_name(x).to_string(), p.size(x))).collect();
    let mut report = SieveAgreement { universe_sizes: named(u), sieve_counts: named(&omega), ..Default::default() };
    let bij = match universe_to_sieves(c, hs) {
        Ok(b) => b,
        Err(e) => {
            report.failure = Some(e.to_string());
            return Ok(report);
        }
    };
    report.bijective = c.objects().all(|x| {
        let mut seen = bij[x.0].clone();
        seen.sort();
        seen.dedup();
        seen.len() == bij[x.0].len() && seen.len() == omega.size(x)
    });
    if !report.bijective {
        report.failure = Some("the universe and the sieves are not in bijection".into());
    }
    report.natural = true;
    'outer: for f in c.arrows() {
        for v in 0..u.size(c.tgt(f)) {
            if bij[c.src(f).0][u.act(f, v)] != omega.act(f, bij[c.tgt(f).0][v]) {
                report.natural = false;
                report.failure.get_or_insert_with(|| format!("restriction along {} does not commute", c.arrow_name(f)));
                break 'outer;
            }
        }
    }
    Ok(report)
}
