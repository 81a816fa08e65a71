//! Finite categories given by explicit tables.

mod builder;
pub mod enumerate;
pub mod equivalence;
pub(crate) mod functor;
mod presheaf;
mod slice;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use builder::CatBuilder;
pub use enumerate::{enumerate_functors, enumerate_nat_trans};
pub use equivalence::{check_equivalence, find_isomorphism, EquivalenceReport};
pub use functor::{FinFunctor, NatTrans};
pub use presheaf::{enumerate_presheaf_morphisms, Presheaf, PresheafMorphism};
pub use slice::{slice, slice_functor, Slice};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Obj(pub usize);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arr(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowInfo {
    pub name: String,
    pub src: Obj,
    pub tgt: Obj,
}

/// The first law a candidate category table breaks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawViolation {
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("object `{0}` has no identity arrow")]
    MissingIdentity(String),
    #[error("identity `{arrow}` of `{object}` is not an endo-arrow of it")]
    IdentityMistyped { object: String, arrow: String },
    #[error("unit law fails for ({arrow}, {identity}): composite is `{found}`")]
    UnitLaw { arrow: String, identity: String, found: String },
    #[error("composite {g} . {f} is given but {f} and {g} are not composable")]
    NotComposable { g: String, f: String },
    #[error("missing composite for the pair ({g}, {f})")]
    MissingComposite { g: String, f: String },
    #[error("composite {g} . {f} = {h} has the wrong source or target")]
    CompositeMistyped { g: String, f: String, h: String },
    #[error("associativity fails for ({h}, {g}, {f})")]
    Associativity { h: String, g: String, f: String },
}

const NONE: u32 = u32::MAX;

/// A validated finite category. Immutable once built.
#[derive(Clone)]
pub struct FinCat {
    name: String,
    objects: Vec<String>,
    arrows: Vec<ArrowInfo>,
    identities: Vec<Arr>,
    is_identity: Vec<bool>,
    compose: Vec<u32>,
    hom: Vec<Vec<Arr>>,
    into: Vec<Vec<Arr>>,
    out_of: Vec<Vec<Arr>>,
    inverses: Vec<Option<Arr>>,
    obj_index: HashMap<String, Obj>,
    arr_index: HashMap<String, Arr>,
}

impl FinCat {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> FinCat {
        let mut c = self.clone();
        c.name = name.into();
        c
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> + Clone {
        (0..self.objects.len()).map(Obj)
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arr> + Clone {
        (0..self.arrows.len()).map(Arr)
    }

    pub fn non_identity_arrows(&self) -> impl Iterator<Item = Arr> + '_ {
        self.arrows().filter(move |&f| !self.is_identity(f))
    }

    pub fn object_name(&self, x: Obj) -> &str {
        &self.objects[x.0]
    }

    pub fn arrow_name(&self, f: Arr) -> &str {
        &self.arrows[f.0].name
    }

    pub fn arrow_info(&self, f: Arr) -> &ArrowInfo {
        &self.arrows[f.0]
    }

    pub fn object(&self, name: &str) -> Option<Obj> {
        self.obj_index.get(name).copied()
    }

    pub fn arrow(&self, name: &str) -> Option<Arr> {
        self.arr_index.get(name).copied()
    }

    pub fn src(&self, f: Arr) -> Obj {
        self.arrows[f.0].src
    }

    pub fn tgt(&self, f: Arr) -> Obj {
        self.arrows[f.0].tgt
    }

    pub fn identity(&self, x: Obj) -> Arr {
        self.identities[x.0]
    }

    pub fn is_identity(&self, f: Arr) -> bool {
        self.is_identity[f.0]
    }

    /// `g ∘ f`, or `None` when the pair is not composable.
    pub fn try_compose(&self, g: Arr, f: Arr) -> Option<Arr> {
        let h = self.compose[g.0 * self.arrows.len() + f.0];
        (h != NONE).then_some(Arr(h as usize))
    }

    /// `g ∘ f`. Panics when the pair is not composable.
    pub fn compose(&self, g: Arr, f: Arr) -> Arr {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "{}: {} . {} is not composable",
                self.name,
                self.arrow_name(g),
                self.arrow_name(f)
            )
        })
    }

    /// Composes a path given in application order `fs[0]` first.
    pub fn compose_path(&self, fs: &[Arr]) -> Arr {
        let mut it = fs.iter();
        let mut acc = *it.next().expect("empty path");
        for &g in it {
            acc = self.compose(g, acc);
        }
        acc
    }

    pub fn hom(&self, x: Obj, y: Obj) -> &[Arr] {
        &self.hom[x.0 * self.objects.len() + y.0]
    }

    pub fn arrows_into(&self, y: Obj) -> &[Arr] {
        &self.into[y.0]
    }

    pub fn arrows_out_of(&self, x: Obj) -> &[Arr] {
        &self.out_of[x.0]
    }

    pub fn inverse(&self, f: Arr) -> Option<Arr> {
        self.inverses[f.0]
    }

    pub fn is_iso(&self, f: Arr) -> bool {
        self.inverses[f.0].is_some()
    }

    /// Some isomorphism `x → y`, least in table order.
    pub fn find_iso(&self, x: Obj, y: Obj) -> Option<Arr> {
        self.hom(x, y).iter().copied().find(|&f| self.is_iso(f))
    }

    /// All pairs `(g, f)` with `tgt f = src g`, ordered by `f` then `g`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (Arr, Arr)> + '_ {
        self.arrows()
            .flat_map(move |f| self.out_of[self.tgt(f).0].iter().map(move |&g| (g, f)))
    }

    pub fn opposite(&self) -> FinCat {
        let mut b = CatBuilder::new(format!("{}^op", self.name));
        for x in self.objects() {
            b.object(self.object_name(x)).expect("names are unique");
        }
        for f in self.arrows() {
            b.arrow(self.arrow_name(f), self.tgt(f), self.src(f)).expect("names are unique");
        }
        for x in self.objects() {
            b.set_identity(x, self.identity(x));
        }
        for (g, f) in self.composable_pairs() {
            b.set_compose(f, g, self.compose(g, f));
        }
        b.build().expect("the opposite of a category is a category")
    }

    pub fn terminal() -> FinCat {
        FinCat::discrete("1", &["pt"])
    }

    pub fn empty() -> FinCat {
        FinCat::discrete::<&str>("0", &[])
    }

    pub fn discrete<S: AsRef<str>>(name: impl Into<String>, objects: &[S]) -> FinCat {
        let mut b = CatBuilder::new(name);
        for o in objects {
            b.object_with_identity(o.as_ref()).expect("discrete object names must be unique");
        }
        b.build().expect("discrete categories are valid")
    }

    /// The classes of the isomorphism relation on objects, as a class index
    /// per object (classes numbered by first member).
    pub fn iso_classes(&self) -> Vec<usize> {
        let mut class = vec![usize::MAX; self.n_objects()];
        let mut next = 0;
        for x in self.objects() {
            if class[x.0] != usize::MAX {
                continue;
            }
            for y in self.objects() {
                if class[y.0] == usize::MAX && self.find_iso(x, y).is_some() {
                    class[y.0] = next;
                }
            }
            next += 1;
        }
        class
    }

    pub fn iso_class_count(&self) -> usize {
        self.iso_classes().iter().copied().max().map_or(0, |m| m + 1)
    }
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.arrows == other.arrows
            && self.identities == other.identities
            && self.compose == other.compose
    }
}

impl Eq for FinCat {}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({}: {} objects, {} arrows)",
            self.name,
            self.n_objects(),
            self.n_arrows()
        )
    }
}
