use thiserror::Error;

use crate::finset::FinSetError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("duplicate morphism `{0}`")]
    DuplicateMorphism(String),
    #[error("object `{0}` has no identity")]
    MissingIdentity(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
}

/// Failures of chosen limits in a category with pullbacks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("cospan legs have different codomains: {0}")]
    CodomainMismatch(String),
    #[error("cone does not commute over the cospan")]
    NotCommuting,
    #[error("cone legs do not match the cospan: {0}")]
    BadCone(String),
    #[error(transparent)]
    FinSet(#[from] FinSetError),
}

/// Errors of the descent-theoretic constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error("the diagram is not augmented")]
    NotAugmented,
    #[error("refusing to build the comparison over an incoherent diagram: {0}")]
    Incoherent(String),
    #[error("rho is not an isomorphism d1(W) → d0(W): {0}")]
    BadRho(String),
    #[error("invalid descent datum: {0}")]
    InvalidDatum(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BilimitError {
    #[error("functors do not share a codomain: {0} vs {1}")]
    CodomainMismatch(String, String),
    #[error("malformed square: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("exhaustive generation is capped at size {ceiling}, got {requested}")]
    SizeCeiling { requested: usize, ceiling: usize },
    #[error("unknown harness kind `{0}`")]
    UnknownKind(String),
}
