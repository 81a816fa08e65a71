//! Co-free fibrations on displayed categories, strict change of base, and
//! the comparison of saturation with oplax base change.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibration::{
    displayed_hom, find_fibred_equivalence, unstraighten, yoneda_with_slice, DisplayedCat, FibredCat, FunctorCategory,
    PsFunctorToCat,
};
use crate::fincat::functor::same_cat;
use crate::fincat::{slice_functor, Arr, CatBuilder, FinCat, FinFunctor, Obj, Slice};
use crate::names::tuple;
use crate::oplax::oplax_base_change;

/// `N_B(X)`, whose fibre over `b` is `CAT/B(B/b, X)`.
#[derive(Clone, Debug)]
pub struct CofreeFibration {
    pub base: Arc<FinCat>,
    pub input: DisplayedCat,
    pub slices: Vec<Slice>,
    pub fibres: Vec<FunctorCategory>,
    pub result: FibredCat,
}

pub fn cofree_fibration(x: &DisplayedCat) -> Result<CofreeFibration> {
    let b = x.base().clone();
    let mut slices = Vec::with_capacity(b.n_objects());
    let mut fibres = Vec::with_capacity(b.n_objects());
    for o in b.objects() {
        let (s, y) = yoneda_with_slice(&b, o);
        fibres.push(displayed_hom(y.displayed(), x)?);
        slices.push(s);
    }
    let reindex = b
        .arrows()
        .map(|f| {
            let (b0, b1) = (b.src(f), b.tgt(f));
            let along = slice_functor(&slices[b0.0], &slices[b1.0], f);
            let (from, to) = (&fibres[b1.0], &fibres[b0.0]);
            let obj = from
                .functors
                .iter()
                .map(|g| to.object_of(&g.after(&along)).ok_or_else(|| Error::Mismatch("restriction leaves the fibre".into())))
                .collect::<Result<Vec<_>>>()?;
            let arr = from
                .transformations
                .iter()
                .map(|t| to.arrow_of(&t.precompose(&along)).ok_or_else(|| Error::Mismatch("restriction leaves the fibre".into())))
                .collect::<Result<Vec<_>>>()?;
            FinFunctor::new(from.cat.clone(), to.cat.clone(), obj, arr)
        })
        .collect::<Result<Vec<_>>>()?;
    let ps = PsFunctorToCat::strict(b.clone(), fibres.iter().map(|f| f.cat.clone()).collect(), reindex)?;
    let result = unstraighten(&ps)?.fibred;
    Ok(CofreeFibration { base: b, input: x.clone(), slices, fibres, result })
}

/// The strict pullback `P ×_Q X` displayed over `P`.
#[derive(Clone, Debug)]
pub struct StrictPullback {
    pub displayed: DisplayedCat,
    pub objects: Vec<(Obj, Obj)>,
    pub arrows: Vec<(Arr, Arr)>,
}

pub fn strict_base_change(h: &FinFunctor, x: &DisplayedCat) -> Result<StrictPullback> {
    if !same_cat(h.cod(), x.base()) {
        return Err(Error::Mismatch(format!("{} does not end in {}", h.dom().name(), x.base().name())));
    }
    let (p, t) = (h.dom(), x.total());
    let mut b = CatBuilder::new(format!("{}x{}", p.name(), t.name()));
    let mut objects = Vec::new();
    let mut obj_index = HashMap::new();
    for a in p.objects() {
        for e in t.objects().filter(|&e| x.over(e) == h.obj(a)) {
            let o = b.object(tuple(&[p.object_name(a), t.object_name(e)]))?;
            obj_index.insert((a, e), o);
            objects.push((a, e));
        }
    }
    let mut arrows = Vec::new();
    let mut arr_index = HashMap::new();
    for f in p.arrows() {
        for g in t.arrows().filter(|&g| x.over_arr(g) == h.arr(f)) {
            let (Some(&s), Some(&u)) = (obj_index.get(&(p.src(f), t.src(g))), obj_index.get(&(p.tgt(f), t.tgt(g)))) else {
                continue;
            };
            let id = b.arrow(tuple(&[p.arrow_name(f), t.arrow_name(g)]), s, u)?;
            if p.is_identity(f) && t.is_identity(g) {
                b.set_identity(s, id);
            }
            arr_index.insert((f, g), id);
            arrows.push((f, g));
        }
    }
    for (i, &(f1, g1)) in arrows.iter().enumerate() {
        for (j, &(f2, g2)) in arrows.iter().enumerate() {
            if p.tgt(f1) == p.src(f2) && t.tgt(g1) == t.src(g2) {
                b.set_compose(Arr(j), Arr(i), arr_index[&(p.compose(f2, f1), t.compose(g2, g1))]);
            }
        }
    }
    let total = Arc::new(b.build()?);
    let display = FinFunctor::new(
        total,
        p.clone(),
        objects.iter().map(|o| o.0).collect(),
        arrows.iter().map(|a| a.0).collect(),
    )?;
    Ok(StrictPullback { displayed: DisplayedCat::new(display), objects, arrows })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub lifted_fibres: Vec<(String, usize)>,
    pub saturated_fibres: Vec<(String, usize)>,
    pub equivalent: bool,
    pub agrees_over_point: Option<bool>,
    pub failure: Option<String>,
}

fn fibre_counts(e: &FibredCat) -> Vec<(String, usize)> {
    let b = e.base();
    b.objects().map(|o| (b.object_name(o).to_string(), e.objects_over(o).count())).collect()
}

/// Compares `∇_h(N_Q(X))` with `N_P(Δ_h(X))`, and for `Q = 𝟙` also with
/// `∇_h(X)`.
pub fn check_saturation_factorisation(h: &FibredCat, x: &DisplayedCat) -> Result<SaturationReport> {
    let lifted = oplax_base_change(h, &cofree_fibration(x)?.result)?.fibred;
    let pulled = strict_base_change(h.display(), x)?;
    let saturated = cofree_fibration(&pulled.displayed)?.result;
    let mut report = SaturationReport {
        lifted_fibres: fibre_counts(&lifted),
        saturated_fibres: fibre_counts(&saturated),
        ..Default::default()
    };
    report.equivalent = find_fibred_equivalence(&lifted, &saturated)?.is_some();
    if !report.equivalent {
        report.failure = Some("no fibred equivalence between the lifted and the saturated fibration".into());
    }
    let q = h.base();
    if q.n_objects() == 1 && q.n_arrows() == 1 {
        let direct = oplax_base_change(h, &FibredCat::find(x.clone())?)?.fibred;
        let agrees = find_fibred_equivalence(&direct, &saturated)?.is_some();
        report.agrees_over_point = Some(agrees);
        if !agrees {
            report.failure.get_or_insert_with(|| "saturation disagrees with lifting over the point".into());
        }
    }
    Ok(report)
}

impl SaturationReport {
    pub fn passed(&self) -> bool {
        self.equivalent && self.agrees_over_point != Some(false)
    }
}
