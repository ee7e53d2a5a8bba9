//! Executable descent theory over finite categories.
//!
//! The crate builds, for a map `p: E → B` of finite sets (or any category
//! with chosen pullbacks), the truncated augmented pseudo-cosimplicial
//! diagram of slice categories, its descent category and comparison
//! functor, the Eilenberg–Moore comparison of the monad `p*Σ_p`, and
//! decides — always with witnesses — whether `p` is of almost, plain or
//! effective descent.

pub mod bilimits;
pub mod cosimplicial;
pub mod descent;
pub mod error;
pub mod fincat;
pub mod finset;
pub mod monadic;
pub mod slices;
pub mod tamper;
pub mod theorems;

pub use error::{BilimitError, DescentError, HarnessError, LimitError, TableError};
pub use fincat::{Category, Cell, DynCategory, Enumerated, Functor, NatIso, NatTrans};
pub use finset::{FinFunction, FinSet, FinSetCat};
pub use slices::{PullbackCategory, Slice, SliceMor};
pub use tamper::Tamper;
