//! Displayed categories, cartesian arrows and cleavings.

mod functor;
mod straighten;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::functor::same_cat;
use crate::fincat::{slice, Arr, FinCat, FinFunctor, Obj, Slice};

pub use functor::{
    check_fibred_equivalence, displayed_hom, enumerate_fibred_functors, enumerate_vertical, fib_hom,
    find_fibred_equivalence, FibFunctor, FunctorCategory, VertNat,
};
pub use straighten::{
    fibre, fibrewise_ob, fibrewise_ob_morphism, fibrewise_op, fibrewise_op_functor, straighten, unstraighten,
    Fibre, FibrewiseOp, PsFunctorToCat, Straightening, Unstraightened,
};

struct DisplayedInner {
    display: FinFunctor,
    cartesian: OnceLock<Vec<bool>>,
}

/// A category together with a functor onto a base.
#[derive(Clone)]
pub struct DisplayedCat {
    inner: Arc<DisplayedInner>,
}

/// Why an arrow fails to be cartesian: the arrow `h` over `display(f)∘w`
/// has `factorisations` lifts of `w` through `f` instead of exactly one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartesianFailure {
    pub h: String,
    pub w: String,
    pub factorisations: usize,
}

impl DisplayedCat {
    pub fn new(display: FinFunctor) -> Self {
        DisplayedCat { inner: Arc::new(DisplayedInner { display, cartesian: OnceLock::new() }) }
    }

    pub fn total(&self) -> &Arc<FinCat> {
        self.inner.display.dom()
    }

    pub fn base(&self) -> &Arc<FinCat> {
        self.inner.display.cod()
    }

    pub fn display(&self) -> &FinFunctor {
        &self.inner.display
    }

    pub fn over(&self, e: Obj) -> Obj {
        self.inner.display.obj(e)
    }

    pub fn over_arr(&self, f: Arr) -> Arr {
        self.inner.display.arr(f)
    }

    pub fn objects_over(&self, b: Obj) -> impl Iterator<Item = Obj> + '_ {
        self.total().objects().filter(move |&e| self.over(e) == b)
    }

    pub fn is_vertical(&self, f: Arr) -> bool {
        self.base().is_identity(self.over_arr(f))
    }

    pub fn cartesian_failure(&self, f: Arr) -> Option<CartesianFailure> {
        let (t, b) = (self.total(), self.base());
        let (x, y) = (t.src(f), t.tgt(f));
        let pf = self.over_arr(f);
        for &h in t.arrows_into(y) {
            let z = t.src(h);
            for &w in b.hom(self.over(z), self.over(x)) {
                if b.compose(pf, w) != self.over_arr(h) {
                    continue;
                }
                let n = t
                    .hom(z, x)
                    .iter()
                    .filter(|&&g| self.over_arr(g) == w && t.compose(f, g) == h)
                    .count();
                if n != 1 {
                    return Some(CartesianFailure {
                        h: t.arrow_name(h).to_string(),
                        w: b.arrow_name(w).to_string(),
                        factorisations: n,
                    });
                }
            }
        }
        None
    }

    /// Decided by exhaustive search; results are cached per category.
    pub fn is_cartesian(&self, f: Arr) -> bool {
        self.inner
            .cartesian
            .get_or_init(|| self.total().arrows().map(|g| self.cartesian_failure(g).is_none()).collect())[f.0]
    }

    /// The unique `g` over `w` with `c ∘ g = h`, for cartesian `c`.
    pub fn factor(&self, c: Arr, h: Arr, w: Arr) -> Option<Arr> {
        let t = self.total();
        t.hom(t.src(h), t.src(c))
            .iter()
            .copied()
            .find(|&g| self.over_arr(g) == w && t.compose(c, g) == h)
    }

    /// Whether every `(b01, e)` has a cartesian lift.
    pub fn is_fibration(&self) -> bool {
        find_cleaving(self).is_ok()
    }
}

impl PartialEq for DisplayedCat {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.display == other.inner.display
    }
}

impl fmt::Debug for DisplayedCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DisplayedCat({} over {})", self.total().name(), self.base().name())
    }
}

/// A chosen cartesian lift for every pair `(b01, e)` with `e` over the
/// codomain of `b01`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cleaving {
    lifts: HashMap<(Arr, Obj), Arr>,
}

impl Cleaving {
    pub fn from_map(lifts: HashMap<(Arr, Obj), Arr>) -> Self {
        Cleaving { lifts }
    }

    pub fn get(&self, b01: Arr, e: Obj) -> Option<Arr> {
        self.lifts.get(&(b01, e)).copied()
    }

    /// Entries ordered by base arrow, then object.
    pub fn sorted(&self) -> BTreeMap<(Arr, Obj), Arr> {
        self.lifts.iter().map(|(&k, &v)| (k, v)).collect()
    }

    pub fn len(&self) -> usize {
        self.lifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lifts.is_empty()
    }
}

/// For every `(b01, e)` the least cartesian arrow over `b01` into `e`, in
/// table order. Fails at the first pair without one.
pub fn find_cleaving(d: &DisplayedCat) -> Result<Cleaving> {
    let (t, b) = (d.total(), d.base());
    let mut lifts = HashMap::new();
    for b01 in b.arrows() {
        for e in d.objects_over(b.tgt(b01)) {
            let lift = t
                .arrows_into(e)
                .iter()
                .copied()
                .find(|&f| d.over_arr(f) == b01 && d.is_cartesian(f))
                .ok_or_else(|| Error::NotAFibration {
                    arrow: b.arrow_name(b01).to_string(),
                    object: t.object_name(e).to_string(),
                })?;
            lifts.insert((b01, e), lift);
        }
    }
    Ok(Cleaving { lifts })
}

struct FibredInner {
    displayed: DisplayedCat,
    cleaving: Cleaving,
    split: bool,
}

/// A displayed category with a cleaving. Cheap to clone.
#[derive(Clone)]
pub struct FibredCat {
    inner: Arc<FibredInner>,
}

impl FibredCat {
    /// Checks that the cleaving is total and that every chosen lift lies
    /// over its base arrow, ends at its object and is cartesian.
    pub fn new(displayed: DisplayedCat, cleaving: Cleaving) -> Result<Self> {
        let (t, b) = (displayed.total(), displayed.base());
        let expected: usize = b.arrows().map(|b01| displayed.objects_over(b.tgt(b01)).count()).sum();
        if cleaving.len() != expected {
            return Err(Error::Cleaving(format!("{} lifts given, {} required", cleaving.len(), expected)));
        }
        for b01 in b.arrows() {
            for e in displayed.objects_over(b.tgt(b01)) {
                let name = || format!("lift({}, {})", b.arrow_name(b01), t.object_name(e));
                let Some(l) = cleaving.get(b01, e) else {
                    return Err(Error::Cleaving(format!("{} is missing", name())));
                };
                if displayed.over_arr(l) != b01 || t.tgt(l) != e {
                    return Err(Error::Cleaving(format!("{} = {} has the wrong type", name(), t.arrow_name(l))));
                }
                if let Some(w) = displayed.cartesian_failure(l) {
                    return Err(Error::Cleaving(format!(
                        "{} = {} is not cartesian: {} has {} factorisations over {}",
                        name(),
                        t.arrow_name(l),
                        w.h,
                        w.factorisations,
                        w.w
                    )));
                }
            }
        }
        let split = split_failure(&displayed, &cleaving).is_none();
        Ok(FibredCat { inner: Arc::new(FibredInner { displayed, cleaving, split }) })
    }

    /// [`find_cleaving`] packaged as a fibred category.
    pub fn find(displayed: DisplayedCat) -> Result<Self> {
        let cleaving = find_cleaving(&displayed)?;
        FibredCat::new(displayed, cleaving)
    }

    /// `id : B → B` with the base arrows as lifts.
    pub fn identity(base: &Arc<FinCat>) -> Self {
        let lifts = base.arrows().map(|f| ((f, base.tgt(f)), f)).collect();
        FibredCat::new(DisplayedCat::new(FinFunctor::identity(base)), Cleaving { lifts })
            .expect("identities are split fibrations")
    }

    /// A category as a fibred category over `𝟙`, lifting the identity by identities.
    pub fn over_point(c: &Arc<FinCat>) -> Self {
        let point = Arc::new(FinCat::terminal());
        let display = FinFunctor::to_terminal(c, &point);
        let lifts = c.objects().map(|e| ((Arr(0), e), c.identity(e))).collect();
        FibredCat::new(DisplayedCat::new(display), Cleaving { lifts }).expect("categories are fibred over the point")
    }

    /// The empty fibred category over `base`.
    pub fn empty_over(base: &Arc<FinCat>) -> Self {
        let total = Arc::new(FinCat::empty());
        let display = FinFunctor::new(total, base.clone(), Vec::new(), Vec::new()).expect("the empty functor");
        FibredCat::new(DisplayedCat::new(display), Cleaving::default()).expect("the empty category is fibred")
    }

    /// The same display and cleaving with the base replaced by an equal category.
    pub fn rehomed(&self, base: &Arc<FinCat>) -> Result<Self> {
        if **base != **self.base() {
            return Err(Error::Mismatch(format!("{} is not {}", base.name(), self.base().name())));
        }
        let display = self.display().retarget(self.total(), base);
        FibredCat::new(DisplayedCat::new(display), self.cleaving().clone())
    }

    pub fn displayed(&self) -> &DisplayedCat {
        &self.inner.displayed
    }

    pub fn cleaving(&self) -> &Cleaving {
        &self.inner.cleaving
    }

    pub fn total(&self) -> &Arc<FinCat> {
        self.inner.displayed.total()
    }

    pub fn base(&self) -> &Arc<FinCat> {
        self.inner.displayed.base()
    }

    pub fn display(&self) -> &FinFunctor {
        self.inner.displayed.display()
    }

    pub fn over(&self, e: Obj) -> Obj {
        self.inner.displayed.over(e)
    }

    pub fn over_arr(&self, f: Arr) -> Arr {
        self.inner.displayed.over_arr(f)
    }

    pub fn objects_over(&self, b: Obj) -> impl Iterator<Item = Obj> + '_ {
        self.inner.displayed.objects_over(b)
    }

    pub fn is_cartesian(&self, f: Arr) -> bool {
        self.inner.displayed.is_cartesian(f)
    }

    pub fn is_vertical(&self, f: Arr) -> bool {
        self.inner.displayed.is_vertical(f)
    }

    /// The chosen lift of `b01` at `e`.
    pub fn lift(&self, b01: Arr, e: Obj) -> Arr {
        self.inner.cleaving.get(b01, e).unwrap_or_else(|| {
            panic!(
                "no lift of {} at {}",
                self.base().arrow_name(b01),
                self.total().object_name(e)
            )
        })
    }

    pub fn lift_domain(&self, b01: Arr, e: Obj) -> Obj {
        self.total().src(self.lift(b01, e))
    }

    /// The unique arrow `g` over `w` with `lift(b, e) ∘ g = h`, where `b` is
    /// the base arrow of the lift.
    pub fn gap(&self, cartesian: Arr, h: Arr, w: Arr) -> Arr {
        self.inner.displayed.factor(cartesian, h, w).unwrap_or_else(|| {
            panic!(
                "{} does not factor through {}",
                self.total().arrow_name(h),
                self.total().arrow_name(cartesian)
            )
        })
    }

    /// Whether the chosen lifts are strictly functorial.
    pub fn is_split(&self) -> bool {
        self.inner.split
    }

    pub fn split_failure(&self) -> Option<String> {
        split_failure(&self.inner.displayed, &self.inner.cleaving)
    }

    pub fn same(&self, other: &FibredCat) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

fn split_failure(d: &DisplayedCat, c: &Cleaving) -> Option<String> {
    let (t, b) = (d.total(), d.base());
    for x in b.objects() {
        for e in d.objects_over(x) {
            if c.get(b.identity(x), e) != Some(t.identity(e)) {
                return Some(format!("the lift of {} at {} is not an identity", b.arrow_name(b.identity(x)), t.object_name(e)));
            }
        }
    }
    for (g, f) in b.composable_pairs() {
        for e in d.objects_over(b.tgt(g)) {
            let lg = c.get(g, e)?;
            let lf = c.get(f, t.src(lg))?;
            if c.get(b.compose(g, f), e) != Some(t.compose(lg, lf)) {
                return Some(format!(
                    "the lift of {} . {} at {} is not the composite of lifts",
                    b.arrow_name(g),
                    b.arrow_name(f),
                    t.object_name(e)
                ));
            }
        }
    }
    None
}

impl PartialEq for FibredCat {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
            || (self.inner.displayed == other.inner.displayed && self.inner.cleaving == other.inner.cleaving)
    }
}

impl fmt::Debug for FibredCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FibredCat({} over {})", self.total().name(), self.base().name())
    }
}

/// `∂₁ : A/a → A`, with the lift of `u` at `(x, f)` the triangle from `(src u, f∘u)`.
pub fn yoneda(a_cat: &Arc<FinCat>, a: Obj) -> FibredCat {
    yoneda_with_slice(a_cat, a).1
}

pub fn yoneda_with_slice(a_cat: &Arc<FinCat>, a: Obj) -> (Slice, FibredCat) {
    let s = slice(a_cat, a);
    let mut lifts = HashMap::new();
    for u in a_cat.arrows() {
        for t in s.cat.objects() {
            if a_cat.src(s.object_arrow(t)) == a_cat.tgt(u) {
                lifts.insert((u, t), s.arrow_of(u, t));
            }
        }
    }
    let fib = FibredCat::new(DisplayedCat::new(s.projection.clone()), Cleaving { lifts })
        .expect("domain fibrations are split fibrations");
    (s, fib)
}

/// The composite `p ∘ q` of a fibration `q` over `A` and `p : A ↠ B`, with
/// lifts computed first in `p`, then in `q`.
pub fn compose_fibrations(q: &FibredCat, p: &FibredCat) -> Result<FibredCat> {
    if !same_cat(q.base(), p.total()) {
        return Err(Error::Mismatch(format!(
            "{} lives over {}, not over {}",
            q.total().name(),
            q.base().name(),
            p.total().name()
        )));
    }
    let display = p.display().after(q.display());
    let displayed = DisplayedCat::new(display);
    let b = p.base();
    let mut lifts = HashMap::new();
    for b01 in b.arrows() {
        for e in displayed.objects_over(b.tgt(b01)) {
            let a01 = p.lift(b01, q.over(e));
            lifts.insert((b01, e), q.lift(a01, e));
        }
    }
    FibredCat::new(displayed, Cleaving { lifts })
}
