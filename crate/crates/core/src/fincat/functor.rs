use std::fmt;
use std::sync::Arc;

use super::{Arr, FinCat, Obj};
use crate::error::{Error, Result};
use crate::names;

/// A functor between finite categories, stored as its object and arrow maps.
/// Equality is equality of the maps.
#[derive(Clone)]
pub struct FinFunctor {
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    obj: Vec<Obj>,
    arr: Vec<Arr>,
}

pub(crate) fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FinFunctor {
    pub fn new(dom: Arc<FinCat>, cod: Arc<FinCat>, obj: Vec<Obj>, arr: Vec<Arr>) -> Result<Self> {
        let bad = |msg: String| Err(Error::Functor(format!("{} -> {}: {msg}", dom.name(), cod.name())));
        if obj.len() != dom.n_objects() || arr.len() != dom.n_arrows() {
            return bad("maps do not cover the domain".into());
        }
        if obj.iter().any(|y| y.0 >= cod.n_objects()) || arr.iter().any(|g| g.0 >= cod.n_arrows()) {
            return bad("maps leave the codomain".into());
        }
        for f in dom.arrows() {
            let g = arr[f.0];
            if cod.src(g) != obj[dom.src(f).0] || cod.tgt(g) != obj[dom.tgt(f).0] {
                return bad(format!("image of `{}` has the wrong source or target", dom.arrow_name(f)));
            }
        }
        for x in dom.objects() {
            if arr[dom.identity(x).0] != cod.identity(obj[x.0]) {
                return bad(format!("identity of `{}` is not preserved", dom.object_name(x)));
            }
        }
        for (g, f) in dom.composable_pairs() {
            if arr[dom.compose(g, f).0] != cod.compose(arr[g.0], arr[f.0]) {
                return bad(format!(
                    "composite {} . {} is not preserved",
                    dom.arrow_name(g),
                    dom.arrow_name(f)
                ));
            }
        }
        Ok(FinFunctor { dom, cod, obj, arr })
    }

    pub(crate) fn new_unchecked(dom: Arc<FinCat>, cod: Arc<FinCat>, obj: Vec<Obj>, arr: Vec<Arr>) -> Self {
        debug_assert_eq!(obj.len(), dom.n_objects());
        debug_assert_eq!(arr.len(), dom.n_arrows());
        FinFunctor { dom, cod, obj, arr }
    }

    pub fn identity(c: &Arc<FinCat>) -> Self {
        FinFunctor {
            dom: c.clone(),
            cod: c.clone(),
            obj: c.objects().collect(),
            arr: c.arrows().collect(),
        }
    }

    pub fn constant(dom: &Arc<FinCat>, cod: &Arc<FinCat>, y: Obj) -> Self {
        FinFunctor {
            dom: dom.clone(),
            cod: cod.clone(),
            obj: vec![y; dom.n_objects()],
            arr: vec![cod.identity(y); dom.n_arrows()],
        }
    }

    /// The unique functor into a category with one object and one arrow.
    pub fn to_terminal(dom: &Arc<FinCat>, cod: &Arc<FinCat>) -> Self {
        assert!(cod.n_objects() == 1 && cod.n_arrows() == 1, "codomain is not terminal");
        FinFunctor::constant(dom, cod, Obj(0))
    }

    pub fn dom(&self) -> &Arc<FinCat> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCat> {
        &self.cod
    }

    pub fn obj(&self, x: Obj) -> Obj {
        self.obj[x.0]
    }

    pub fn arr(&self, f: Arr) -> Arr {
        self.arr[f.0]
    }

    pub fn obj_map(&self) -> &[Obj] {
        &self.obj
    }

    pub fn arr_map(&self) -> &[Arr] {
        &self.arr
    }

    /// `self ∘ first`
    pub fn after(&self, first: &FinFunctor) -> FinFunctor {
        assert!(same_cat(first.cod(), self.dom()), "functors are not composable");
        FinFunctor {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            obj: first.obj.iter().map(|&x| self.obj[x.0]).collect(),
            arr: first.arr.iter().map(|&f| self.arr[f.0]).collect(),
        }
    }

    /// The same maps read between the given opposite categories.
    pub fn op(&self, dom_op: &Arc<FinCat>, cod_op: &Arc<FinCat>) -> FinFunctor {
        FinFunctor {
            dom: dom_op.clone(),
            cod: cod_op.clone(),
            obj: self.obj.clone(),
            arr: self.arr.clone(),
        }
    }

    /// Replaces the recorded domain and codomain by equal categories.
    pub fn retarget(&self, dom: &Arc<FinCat>, cod: &Arc<FinCat>) -> FinFunctor {
        debug_assert!(same_cat(dom, &self.dom) && same_cat(cod, &self.cod));
        FinFunctor { dom: dom.clone(), cod: cod.clone(), obj: self.obj.clone(), arr: self.arr.clone() }
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = vec![false; self.cod.n_objects()];
        self.obj.iter().all(|y| !std::mem::replace(&mut seen[y.0], true))
    }

    pub fn is_isomorphism(&self) -> bool {
        if self.dom.n_objects() != self.cod.n_objects() || self.dom.n_arrows() != self.cod.n_arrows() {
            return false;
        }
        let mut seen = vec![false; self.cod.n_arrows()];
        self.is_injective_on_objects() && self.arr.iter().all(|g| !std::mem::replace(&mut seen[g.0], true))
    }

    /// Canonical name: object images then non-identity arrow images, in
    /// domain table order, e.g. `[x,y|f]`.
    pub fn table_name(&self) -> String {
        let mut s = String::from("[");
        for (i, y) in self.obj.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(self.cod.object_name(*y));
        }
        s.push('|');
        let mut first = true;
        for f in self.dom.non_identity_arrows() {
            if !first {
                s.push(',');
            }
            first = false;
            s.push_str(self.cod.arrow_name(self.arr[f.0]));
        }
        s.push(']');
        s
    }

    pub fn key(&self) -> (Vec<Obj>, Vec<Arr>) {
        (self.obj.clone(), self.arr.clone())
    }
}

impl PartialEq for FinFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.obj == other.obj
            && self.arr == other.arr
            && same_cat(&self.dom, &other.dom)
            && same_cat(&self.cod, &other.cod)
    }
}

impl Eq for FinFunctor {}

impl fmt::Debug for FinFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.table_name(), self.dom.name(), self.cod.name())
    }
}

/// A natural transformation, stored as its components.
#[derive(Clone, PartialEq, Eq)]
pub struct NatTrans {
    src: FinFunctor,
    tgt: FinFunctor,
    comps: Vec<Arr>,
}

impl NatTrans {
    pub fn new(src: FinFunctor, tgt: FinFunctor, comps: Vec<Arr>) -> Result<Self> {
        if !same_cat(src.dom(), tgt.dom()) || !same_cat(src.cod(), tgt.cod()) {
            return Err(Error::NatTrans("functors are not parallel".into()));
        }
        let (c, d) = (src.dom().clone(), src.cod().clone());
        if comps.len() != c.n_objects() || comps.iter().any(|g| g.0 >= d.n_arrows()) {
            return Err(Error::NatTrans("components do not match the domain".into()));
        }
        for x in c.objects() {
            let a = comps[x.0];
            if d.src(a) != src.obj(x) || d.tgt(a) != tgt.obj(x) {
                return Err(Error::NatTrans(format!(
                    "component at `{}` has the wrong source or target",
                    c.object_name(x)
                )));
            }
        }
        for f in c.arrows() {
            let (x, y) = (c.src(f), c.tgt(f));
            if d.compose(tgt.arr(f), comps[x.0]) != d.compose(comps[y.0], src.arr(f)) {
                return Err(Error::NatTrans(format!(
                    "naturality square at `{}` does not commute",
                    c.arrow_name(f)
                )));
            }
        }
        Ok(NatTrans { src, tgt, comps })
    }

    pub(crate) fn new_unchecked(src: FinFunctor, tgt: FinFunctor, comps: Vec<Arr>) -> Self {
        NatTrans { src, tgt, comps }
    }

    pub fn identity(f: &FinFunctor) -> Self {
        let d = f.cod();
        let comps = f.obj_map().iter().map(|&y| d.identity(y)).collect();
        NatTrans { src: f.clone(), tgt: f.clone(), comps }
    }

    pub fn src(&self) -> &FinFunctor {
        &self.src
    }

    pub fn tgt(&self) -> &FinFunctor {
        &self.tgt
    }

    pub fn component(&self, x: Obj) -> Arr {
        self.comps[x.0]
    }

    pub fn components(&self) -> &[Arr] {
        &self.comps
    }

    /// Vertical composite `self • first`.
    pub fn after(&self, first: &NatTrans) -> NatTrans {
        assert!(first.tgt == self.src, "transformations are not composable");
        let d = self.src.cod();
        let comps = self.comps.iter().zip(&first.comps).map(|(&b, &a)| d.compose(b, a)).collect();
        NatTrans { src: first.src.clone(), tgt: self.tgt.clone(), comps }
    }

    /// Whiskering `self ∘ h` (components at `h(x)`).
    pub fn precompose(&self, h: &FinFunctor) -> NatTrans {
        NatTrans {
            src: self.src.after(h),
            tgt: self.tgt.after(h),
            comps: h.obj_map().iter().map(|&x| self.comps[x.0]).collect(),
        }
    }

    /// Whiskering `k ∘ self` (components `k(α_x)`).
    pub fn postcompose(&self, k: &FinFunctor) -> NatTrans {
        NatTrans {
            src: k.after(&self.src),
            tgt: k.after(&self.tgt),
            comps: self.comps.iter().map(|&a| k.arr(a)).collect(),
        }
    }

    /// Horizontal composite `other * self : other.src ∘ self.src ⇒ other.tgt ∘ self.tgt`,
    /// where `other` acts after `self`.
    pub fn hcompose(&self, other: &NatTrans) -> NatTrans {
        let e = other.src.cod();
        let comps = self
            .src
            .dom()
            .objects()
            .map(|x| {
                let a = self.comps[x.0];
                e.compose(other.comps[self.tgt.obj(x).0], other.src.arr(a))
            })
            .collect();
        NatTrans { src: other.src.after(&self.src), tgt: other.tgt.after(&self.tgt), comps }
    }

    pub fn is_invertible(&self) -> bool {
        self.comps.iter().all(|&a| self.src.cod().is_iso(a))
    }

    pub fn inverse(&self) -> Option<NatTrans> {
        let d = self.src.cod();
        let comps = self.comps.iter().map(|&a| d.inverse(a)).collect::<Option<Vec<_>>>()?;
        Some(NatTrans { src: self.tgt.clone(), tgt: self.src.clone(), comps })
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.tgt && self.comps.iter().all(|&a| self.src.cod().is_identity(a))
    }

    pub fn components_name(&self) -> String {
        let d = self.src.cod();
        names::list(&self.comps.iter().map(|&a| d.arrow_name(a)).collect::<Vec<_>>())
    }
}

impl fmt::Debug for NatTrans {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} => {:?} via {}", self.src, self.tgt, self.components_name())
    }
}
