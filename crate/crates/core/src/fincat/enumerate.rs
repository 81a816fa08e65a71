//! Exhaustive enumeration of functors and natural transformations.
//!
//! Searches assign objects in table order and assign each arrow as soon as
//! both of its endpoints are fixed, checking every composition-table entry
//! at the first point where all three arrows involved are known. Results are
//! returned in lexicographic order of (object map, arrow map), respectively
//! of the component list.

use std::ops::ControlFlow;
use std::sync::Arc;

use super::{Arr, FinCat, FinFunctor, NatTrans, Obj};
use crate::error::Result;
use crate::limits::Budget;

#[derive(Clone, Copy)]
enum Var {
    Obj(Obj),
    Arr(Arr),
}

struct FunctorSearch<'a, O, A, V> {
    c: &'a Arc<FinCat>,
    d: &'a Arc<FinCat>,
    vars: Vec<Var>,
    checks: Vec<Vec<(Arr, Arr, Arr)>>,
    obj: Vec<Obj>,
    arr: Vec<Arr>,
    obj_ok: O,
    arr_ok: A,
    visit: V,
    budget: Budget,
}

impl<O, A, V> FunctorSearch<'_, O, A, V>
where
    O: Fn(Obj, Obj) -> bool,
    A: Fn(Arr, Arr) -> bool,
    V: FnMut(FinFunctor) -> ControlFlow<()>,
{
    fn consistent(&self, i: usize) -> bool {
        self.checks[i]
            .iter()
            .all(|&(g, f, h)| self.d.compose(self.arr[g.0], self.arr[f.0]) == self.arr[h.0])
    }

    fn go(&mut self, i: usize) -> Result<ControlFlow<()>> {
        if i == self.vars.len() {
            let f = FinFunctor::new_unchecked(self.c.clone(), self.d.clone(), self.obj.clone(), self.arr.clone());
            return Ok((self.visit)(f));
        }
        match self.vars[i] {
            Var::Obj(x) => {
                let (c, d) = (self.c, self.d);
                let id = c.identity(x);
                for y in d.objects() {
                    self.budget.tick()?;
                    if !(self.obj_ok)(x, y) || !(self.arr_ok)(id, d.identity(y)) {
                        continue;
                    }
                    self.obj[x.0] = y;
                    self.arr[id.0] = d.identity(y);
                    if self.consistent(i) && self.go(i + 1)?.is_break() {
                        return Ok(ControlFlow::Break(()));
                    }
                }
            }
            Var::Arr(f) => {
                let (x, y) = (self.obj[self.c.src(f).0], self.obj[self.c.tgt(f).0]);
                let d = self.d;
                for &g in d.hom(x, y) {
                    self.budget.tick()?;
                    if !(self.arr_ok)(f, g) {
                        continue;
                    }
                    self.arr[f.0] = g;
                    if self.consistent(i) && self.go(i + 1)?.is_break() {
                        return Ok(ControlFlow::Break(()));
                    }
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Visits every functor `c → d` whose object and arrow assignments satisfy
/// the predicates, in search order. The visitor may stop the search early.
pub fn search_functors_where(
    c: &Arc<FinCat>,
    d: &Arc<FinCat>,
    obj_ok: impl Fn(Obj, Obj) -> bool,
    arr_ok: impl Fn(Arr, Arr) -> bool,
    visit: impl FnMut(FinFunctor) -> ControlFlow<()>,
) -> Result<()> {
    let mut vars = Vec::new();
    let mut pos = vec![0usize; c.n_arrows()];
    for x in c.objects() {
        pos[c.identity(x).0] = vars.len();
        vars.push(Var::Obj(x));
        for f in c.non_identity_arrows() {
            if c.src(f).max(c.tgt(f)) == x {
                pos[f.0] = vars.len();
                vars.push(Var::Arr(f));
            }
        }
    }
    let mut checks = vec![Vec::new(); vars.len()];
    for (g, f) in c.composable_pairs() {
        if c.is_identity(g) || c.is_identity(f) {
            continue;
        }
        let h = c.compose(g, f);
        checks[pos[g.0].max(pos[f.0]).max(pos[h.0])].push((g, f, h));
    }
    let mut search = FunctorSearch {
        c,
        d,
        vars,
        checks,
        obj: vec![Obj(0); c.n_objects()],
        arr: vec![Arr(0); c.n_arrows()],
        obj_ok,
        arr_ok,
        visit,
        budget: Budget::new("enumerating functors"),
    };
    let _ = search.go(0)?;
    Ok(())
}

pub fn enumerate_functors_where(
    c: &Arc<FinCat>,
    d: &Arc<FinCat>,
    obj_ok: impl Fn(Obj, Obj) -> bool,
    arr_ok: impl Fn(Arr, Arr) -> bool,
) -> Result<Vec<FinFunctor>> {
    let mut out = Vec::new();
    search_functors_where(c, d, obj_ok, arr_ok, |f| {
        out.push(f);
        ControlFlow::Continue(())
    })?;
    out.sort_by(|a, b| a.obj_map().cmp(b.obj_map()).then_with(|| a.arr_map().cmp(b.arr_map())));
    Ok(out)
}

/// All functors `c → d`, in lexicographic order.
pub fn enumerate_functors(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Result<Vec<FinFunctor>> {
    enumerate_functors_where(c, d, |_, _| true, |_, _| true)
}

struct NatSearch<'a, P, V> {
    f: &'a FinFunctor,
    g: &'a FinFunctor,
    checks: Vec<Vec<Arr>>,
    comps: Vec<Arr>,
    ok: P,
    visit: V,
    budget: Budget,
}

impl<P, V> NatSearch<'_, P, V>
where
    P: Fn(Obj, Arr) -> bool,
    V: FnMut(NatTrans) -> ControlFlow<()>,
{
    fn go(&mut self, i: usize) -> Result<ControlFlow<()>> {
        let c = self.f.dom().clone();
        let d = self.f.cod().clone();
        if i == c.n_objects() {
            let t = NatTrans::new_unchecked(self.f.clone(), self.g.clone(), self.comps.clone());
            return Ok((self.visit)(t));
        }
        let x = Obj(i);
        for &a in d.hom(self.f.obj(x), self.g.obj(x)) {
            self.budget.tick()?;
            if !(self.ok)(x, a) {
                continue;
            }
            self.comps[i] = a;
            let natural = self.checks[i].iter().all(|&h| {
                let (s, t) = (c.src(h), c.tgt(h));
                d.compose(self.g.arr(h), self.comps[s.0]) == d.compose(self.comps[t.0], self.f.arr(h))
            });
            if natural && self.go(i + 1)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Visits every natural transformation `f ⇒ g` whose components satisfy
/// `ok`, in lexicographic order of components.
pub fn search_nat_trans_where(
    f: &FinFunctor,
    g: &FinFunctor,
    ok: impl Fn(Obj, Arr) -> bool,
    visit: impl FnMut(NatTrans) -> ControlFlow<()>,
) -> Result<()> {
    assert!(
        super::functor::same_cat(f.dom(), g.dom()) && super::functor::same_cat(f.cod(), g.cod()),
        "functors are not parallel"
    );
    let c = f.dom();
    let mut checks = vec![Vec::new(); c.n_objects()];
    for h in c.non_identity_arrows() {
        checks[c.src(h).0.max(c.tgt(h).0)].push(h);
    }
    let mut search = NatSearch {
        f,
        g,
        checks,
        comps: vec![Arr(0); c.n_objects()],
        ok,
        visit,
        budget: Budget::new("enumerating natural transformations"),
    };
    let _ = search.go(0)?;
    Ok(())
}

pub fn enumerate_nat_trans_where(
    f: &FinFunctor,
    g: &FinFunctor,
    ok: impl Fn(Obj, Arr) -> bool,
) -> Result<Vec<NatTrans>> {
    let mut out = Vec::new();
    search_nat_trans_where(f, g, ok, |t| {
        out.push(t);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// All natural transformations `f ⇒ g`, in lexicographic order of components.
pub fn enumerate_nat_trans(f: &FinFunctor, g: &FinFunctor) -> Result<Vec<NatTrans>> {
    enumerate_nat_trans_where(f, g, |_, _| true)
}
