use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use super::enumerate::search_functors_where;
use super::{Arr, FinCat, FinFunctor, Obj};
use crate::error::Result;

/// Fullness, faithfulness and essential surjectivity of a functor, with a
/// witness for each property that fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub full: bool,
    pub faithful: bool,
    pub essentially_surjective: bool,
    /// `(x, y, g)`: `g : F x → F y` has no preimage.
    pub not_full: Option<(String, String, String)>,
    /// Two parallel arrows with the same image.
    pub not_faithful: Option<(String, String)>,
    /// An object of the codomain isomorphic to no image object.
    pub not_essentially_surjective: Option<String>,
    /// For each codomain object `d`, an object `x` and an isomorphism `F x → d`.
    #[serde(skip)]
    pub iso_family: Option<Vec<(Obj, Arr)>>,
}

impl EquivalenceReport {
    pub fn is_equivalence(&self) -> bool {
        self.full && self.faithful && self.essentially_surjective
    }
}

pub fn check_equivalence(f: &FinFunctor) -> EquivalenceReport {
    check_equivalence_with(f, |_| true)
}

/// As [`check_equivalence`], but essential surjectivity may only use
/// isomorphisms accepted by `iso_ok`.
pub fn check_equivalence_with(f: &FinFunctor, iso_ok: impl Fn(Arr) -> bool) -> EquivalenceReport {
    let (c, d) = (f.dom(), f.cod());
    let mut not_full = None;
    let mut not_faithful = None;
    'outer: for x in c.objects() {
        for y in c.objects() {
            let hom = c.hom(x, y);
            let mut hit = vec![None::<Arr>; d.n_arrows()];
            for &a in hom {
                let b = f.arr(a);
                if let Some(prev) = hit[b.0] {
                    if not_faithful.is_none() {
                        not_faithful = Some((c.arrow_name(prev).to_string(), c.arrow_name(a).to_string()));
                    }
                } else {
                    hit[b.0] = Some(a);
                }
            }
            if not_full.is_none() {
                if let Some(&g) = d.hom(f.obj(x), f.obj(y)).iter().find(|g| hit[g.0].is_none()) {
                    not_full = Some((
                        c.object_name(x).to_string(),
                        c.object_name(y).to_string(),
                        d.arrow_name(g).to_string(),
                    ));
                }
            }
            if not_full.is_some() && not_faithful.is_some() {
                break 'outer;
            }
        }
    }
    let mut family = Vec::with_capacity(d.n_objects());
    let mut not_eso = None;
    for t in d.objects() {
        let found = c.objects().find_map(|x| {
            d.hom(f.obj(x), t).iter().copied().find(|&g| d.is_iso(g) && iso_ok(g)).map(|g| (x, g))
        });
        match found {
            Some(w) => family.push(w),
            None => {
                not_eso = Some(d.object_name(t).to_string());
                break;
            }
        }
    }
    EquivalenceReport {
        full: not_full.is_none(),
        faithful: not_faithful.is_none(),
        essentially_surjective: not_eso.is_none(),
        not_full,
        not_faithful,
        not_essentially_surjective: not_eso,
        iso_family: if family.len() == d.n_objects() { Some(family) } else { None },
    }
}

/// Some isomorphism of categories `c → d`, the first in search order.
pub fn find_isomorphism(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Result<Option<FinFunctor>> {
    if c.n_objects() != d.n_objects() || c.n_arrows() != d.n_arrows() {
        return Ok(None);
    }
    let mut found = None;
    search_functors_where(
        c,
        d,
        |x, y| c.arrows_into(x).len() == d.arrows_into(y).len() && c.arrows_out_of(x).len() == d.arrows_out_of(y).len(),
        |_, _| true,
        |f| {
            if f.is_isomorphism() {
                found = Some(f);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        },
    )?;
    Ok(found)
}
