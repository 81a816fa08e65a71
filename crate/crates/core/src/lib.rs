//! Finite category theory kernel.
//!
//! Categories are explicit tables; every universal property used by the
//! constructions in this crate is decided by exhaustive search, bounded by a
//! per-thread search budget (see [`limits`]).

pub mod adjunction;
pub mod bifib;
pub mod corpus;
pub mod error;
pub mod fibration;
pub mod fincat;
pub mod hslift;
pub mod limits;
pub mod names;
pub mod nerve;
pub mod oplax;
pub mod saturation;

pub use error::{Error, Result};
pub use fincat::{Arr, CatBuilder, FinCat, FinFunctor, NatTrans, Obj, Presheaf, PresheafMorphism};

pub use fibration::{DisplayedCat, FibFunctor, FibredCat, VertNat};
