use thiserror::Error;

use crate::fincat::LawViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid category: {0}")]
    Category(#[from] LawViolation),
    #[error("invalid functor: {0}")]
    Functor(String),
    #[error("invalid natural transformation: {0}")]
    NatTrans(String),
    #[error("invalid presheaf: {0}")]
    Presheaf(String),
    #[error("search limit of {limit} candidate assignments exceeded while {context}")]
    SearchLimit { limit: u64, context: String },
    #[error("not a fibration: no cartesian lift of {arrow} at {object}")]
    NotAFibration { arrow: String, object: String },
    #[error("invalid cleaving: {0}")]
    Cleaving(String),
    #[error("cleaving is not split: {0}")]
    NotSplit(String),
    #[error("not a fibred functor: {0}")]
    NotFibred(String),
    #[error("incoherent pseudofunctor: {0}")]
    Incoherent(String),
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

impl Error {
    pub fn is_search_limit(&self) -> bool {
        matches!(self, Error::SearchLimit { .. })
    }
}
