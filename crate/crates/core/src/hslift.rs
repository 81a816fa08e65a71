//! Universes of small sets and relative Hofmann–Streicher lifting.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibration::{compose_fibrations, fibrewise_ob_morphism, fibrewise_op, fibrewise_op_functor, FibrewiseOp};
use crate::fibration::{Cleaving, DisplayedCat, FibFunctor, FibredCat};
use crate::fincat::{CatBuilder, FinCat, FinFunctor, Obj, Presheaf, PresheafMorphism};
use crate::nerve::{hs_universe_presheaf, HsUniverse, Nerve};
use crate::oplax::{local_hom_on_1cell, oplax_base_change, OplaxBaseChange};

/// The skeletal category of sets `{0,…,n-1}` with `n ≤ k`, its pointed
/// version and the functor forgetting the point.
#[derive(Clone, Debug)]
pub struct UniverseCat {
    pub bound: usize,
    pub carrier: Arc<FinCat>,
    pub pointed: Arc<FinCat>,
    pub forget: FinFunctor,
}

/// All functions `{0..m} → {0..n}` as value lists, lexicographically.
fn functions(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out.into_iter().flat_map(|f| (0..n).map(move |v| [f.clone(), vec![v]].concat())).collect();
    }
    out
}

fn function_name(m: usize, n: usize, values: &[usize]) -> String {
    let vals: Vec<String> = values.iter().map(usize::to_string).collect();
    format!("{m}->{n}:{}", vals.join(""))
}

/// Objects `0..=k`; the identity of `n` is `1_n` and any other function
/// `f : m → n` is named `m->n:` followed by its values.
pub fn universe_category(k: usize) -> UniverseCat {
    let mut b = CatBuilder::new(format!("Set{k}"));
    let objs: Vec<Obj> = (0..=k).map(|n| b.object_with_identity(n.to_string()).expect("fresh")).collect();
    let mut table = std::collections::HashMap::new();
    for m in 0..=k {
        for n in 0..=k {
            for f in functions(m, n) {
                let a = if m == n && f.iter().enumerate().all(|(i, &v)| i == v) {
                    b.identity_of(objs[m]).expect("identities exist")
                } else {
                    b.arrow(function_name(m, n, &f), objs[m], objs[n]).expect("fresh")
                };
                table.insert((m, n, f), a);
            }
        }
    }
    for ((m, n, f), &a) in &table {
        for l in 0..=k {
            for g in functions(*n, l) {
                let gf: Vec<usize> = f.iter().map(|&v| g[v]).collect();
                b.set_compose(table[&(*n, l, g)], a, table[&(*m, l, gf)]);
            }
        }
    }
    let carrier = Arc::new(b.build().expect("sets form a category"));

    let mut b = CatBuilder::new(format!("PtSet{k}"));
    let mut points = Vec::new();
    for n in 1..=k {
        for p in 0..n {
            points.push((n, p, b.object_with_identity(format!("{n}*{p}")).expect("fresh")));
        }
    }
    let mut ptable = std::collections::HashMap::new();
    let mut under = Vec::new();
    for &(m, p, x) in &points {
        for &(n, q, y) in &points {
            for f in functions(m, n).into_iter().filter(|f| f[p] == q) {
                let a = if x == y && f.iter().enumerate().all(|(i, &v)| i == v) {
                    b.identity_of(x).expect("identities exist")
                } else {
                    b.arrow(format!("{}*{p}{q}", function_name(m, n, &f)), x, y).expect("fresh")
                };
                ptable.insert((x, y, f.clone()), a);
                under.push((a, table[&(m, n, f)]));
            }
        }
    }
    for ((x, y, f), &a) in &ptable {
        for ((y2, z, g), &c) in &ptable {
            if y2 == y {
                let gf: Vec<usize> = f.iter().map(|&v| g[v]).collect();
                b.set_compose(c, a, ptable[&(*x, *z, gf)]);
            }
        }
    }
    let pointed = Arc::new(b.build().expect("pointed sets form a category"));
    under.sort();
    let obj = points.iter().map(|&(n, _, _)| objs[n]).collect();
    let arr = under.into_iter().map(|(_, f)| f).collect();
    let forget = FinFunctor::new(pointed.clone(), carrier.clone(), obj, arr).expect("forgetting points is functorial");
    UniverseCat { bound: k, carrier, pointed, forget }
}

/// A category as a fibred category over `𝟙`, the point being `base`.
pub fn over_point(c: &Arc<FinCat>, base: &Arc<FinCat>) -> Result<FibredCat> {
    if base.n_objects() != 1 || base.n_arrows() != 1 {
        return Err(Error::Mismatch(format!("{} is not terminal", base.name())));
    }
    let display = FinFunctor::to_terminal(c, base);
    let lifts = c.objects().map(|e| ((base.identity(Obj(0)), e), c.identity(e))).collect();
    FibredCat::new(DisplayedCat::new(display), Cleaving::from_map(lifts))
}

/// `∇^lax_p(E) = ∇_p(E^op)^op`, keeping every intermediate stage.
#[derive(Clone, Debug)]
pub struct LaxBaseChange {
    pub source_op: FibrewiseOp,
    pub oplax: OplaxBaseChange,
    pub result: FibrewiseOp,
    pub fibred: FibredCat,
}

pub fn lax_base_change(p: &FibredCat, e: &FibredCat) -> Result<LaxBaseChange> {
    let source_op = fibrewise_op(e)?;
    let oplax = oplax_base_change(p, &source_op.fibred)?;
    let result = fibrewise_op(&oplax.fibred)?;
    let fibred = result.fibred.clone();
    Ok(LaxBaseChange { source_op, oplax, result, fibred })
}

/// Relative Hofmann–Streicher lifting of `e` along `p`.
pub fn hs_lift(p: &FibredCat, e: &FibredCat) -> Result<LaxBaseChange> {
    lax_base_change(p, e)
}

/// `∇^lax_p(f)` for a fibred functor between the inputs of `src` and `tgt`.
pub fn lax_base_change_functor(f: &FibFunctor, src: &LaxBaseChange, tgt: &LaxBaseChange) -> Result<FibFunctor> {
    let f1 = fibrewise_op_functor(f, &src.source_op, &tgt.source_op)?;
    let f2 = local_hom_on_1cell(&src.oplax, &tgt.oplax, &f1)?;
    fibrewise_op_functor(&f2, &src.result, &tgt.result)
}

/// `Σ^lax_p(E) = Σ_p(E^op)^op`.
pub fn lax_sum(p: &FibredCat, e: &FibredCat) -> Result<FibredCat> {
    let op = fibrewise_op(e)?;
    Ok(fibrewise_op(&compose_fibrations(&op.fibred, p)?)?.fibred)
}

/// The lifted generic family over `A` next to the directly computed one, with
/// the componentwise bijections between them.
#[derive(Clone, Debug)]
pub struct GenericFamily {
    pub lifted: PresheafMorphism,
    pub direct: HsUniverse,
    pub universe_iso: Vec<Vec<usize>>,
    pub pointed_iso: Vec<Vec<usize>>,
    pub natural: bool,
}

/// The contravariant functor `(A/a)^op → C` encoded by an object of
/// `∇^lax_{!}(C)` lying over `a`.
fn trace_element(lift: &LaxBaseChange, x: Obj, target: &Nerve, op_slice: &Arc<FinCat>, c: &Arc<FinCat>) -> Option<usize> {
    let o = lift.result.origin_object(x);
    let m = lift.oplax.object(o).functor.map();
    let at = lift.oplax.object(o).at;
    let op = &lift.source_op;
    let obj = m.obj_map().iter().map(|&y| op.origin_object(y)).collect();
    let arr = m.arr_map().iter().map(|&g| op.origin_arrow(g).1).collect();
    let f = FinFunctor::new(op_slice.clone(), c.clone(), obj, arr).ok()?;
    target.index_of(at, &f)
}

fn is_natural_bijection(x: &Presheaf, y: &Presheaf, iso: &[Vec<usize>]) -> bool {
    let a = x.base();
    let bijective = a.objects().all(|o| {
        let mut seen = vec![false; y.size(o)];
        iso[o.0].len() == y.size(o) && iso[o.0].iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    });
    bijective
        && a.arrows().all(|f| {
            let (s, t) = (a.src(f), a.tgt(f));
            (0..x.size(t)).all(|v| iso[s.0][x.act(f, v)] == y.act(f, iso[t.0][v]))
        })
}

/// `ob(∇^lax_{!}(∂₁))` for the universe of sets of size at most `k`, compared
/// with the presheaf formula `Fun((A/−)^op, U_k)`.
pub fn hs_lift_generic_family(a: &Arc<FinCat>, k: usize) -> Result<GenericFamily> {
    let p = FibredCat::over_point(a);
    let u = universe_category(k);
    let pointed = over_point(&u.pointed, p.base())?;
    let carrier = over_point(&u.carrier, p.base())?;
    let forget = FibFunctor::new(pointed.clone(), carrier.clone(), u.forget.retarget(pointed.total(), carrier.total()))?;
    let lp = lax_base_change(&p, &pointed)?;
    let lc = lax_base_change(&p, &carrier)?;
    let lifted_forget = lax_base_change_functor(&forget, &lp, &lc)?;
    let lifted = fibrewise_ob_morphism(&lifted_forget)?;
    let direct = hs_universe_presheaf(a, k)?;
    let ops: Vec<Arc<FinCat>> = direct.universe.slices.iter().map(|s| Arc::new(s.cat.opposite())).collect();
    let iso_of = |lift: &LaxBaseChange, target: &Nerve, c: &Arc<FinCat>| -> Result<Vec<Vec<usize>>> {
        a.objects()
            .map(|o| {
                lift.fibred
                    .objects_over(o)
                    .map(|x| {
                        trace_element(lift, x, target, &ops[o.0], c).ok_or_else(|| {
                            Error::Mismatch(format!("{} is not a functor out of the opposite slice", lift.fibred.total().object_name(x)))
                        })
                    })
                    .collect()
            })
            .collect()
    };
    let universe_iso = iso_of(&lc, &direct.universe, &u.carrier)?;
    let pointed_iso = iso_of(&lp, &direct.pointed, &u.pointed)?;
    let natural = is_natural_bijection(lifted.tgt(), &direct.universe.presheaf, &universe_iso)
        && is_natural_bijection(lifted.src(), &direct.pointed.presheaf, &pointed_iso)
        && a.objects().all(|o| {
            (0..lifted.src().size(o))
                .all(|v| universe_iso[o.0][lifted.apply(o, v)] == direct.projection.apply(o, pointed_iso[o.0][v]))
        });
    Ok(GenericFamily { lifted, direct, universe_iso, pointed_iso, natural })
}

/// Size of one stage of an iterated lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageStats {
    pub base: String,
    pub fibre_objects: Vec<(String, usize)>,
    pub objects: usize,
    pub arrows: usize,
    pub split: bool,
}

#[derive(Clone, Debug)]
pub struct IteratedLift {
    pub stages: Vec<StageStats>,
    pub result: FibredCat,
}

fn stage_stats(e: &FibredCat) -> StageStats {
    let b = e.base();
    StageStats {
        base: b.name().to_string(),
        fibre_objects: b.objects().map(|x| (b.object_name(x).to_string(), e.objects_over(x).count())).collect(),
        objects: e.total().n_objects(),
        arrows: e.total().n_arrows(),
        split: e.is_split(),
    }
}

/// Lifts `e` along `A0 ↠ A1 ↠ … ↠ An`, starting from the last fibration.
pub fn iterated_lift(chain: &[FibredCat], e: &FibredCat) -> Result<IteratedLift> {
    let mut current = e.clone();
    let mut stages = Vec::with_capacity(chain.len());
    for p in chain.iter().rev() {
        current = current.rehomed(p.base())?;
        current = hs_lift(p, &current)?.fibred;
        stages.push(stage_stats(&current));
    }
    Ok(IteratedLift { stages, result: current })
}
