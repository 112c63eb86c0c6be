//! Relations annotated by positive commutative monoids, semijoin functions
//! over them, and full reducers for acyclic schemas.
//!
//! The main entry points:
//!
//! * [`MonoidRef`]: builtin monoid families and validated finite tables.
//! * [`analysis`]: decision procedures (production property, 2×2
//!   transportation, cancellativity) and the verdicts derived from them.
//! * [`KRel`]: finitely supported annotated relations, marginals and
//!   consistency witnesses.
//! * [`Hypergraph`]: schemas, GYO reduction and running-intersection orderings.
//! * [`semijoin`]: the lattice and production semijoin constructions plus an
//!   axiom audit.
//! * [`reducer`]: compiling, running and verifying full-reducer programs.
//!
//! ```
//! use ksemijoin::{Elem, MonoidRef};
//!
//! let bag = MonoidRef::bag();
//! let split = bag
//!     .production_solve(&Elem::Nat(5), &[Elem::Nat(3), Elem::Nat(3)])
//!     .unwrap();
//! assert_eq!(split, Some(vec![Elem::Nat(3), Elem::Nat(2)]));
//! ```

pub mod analysis;
pub mod cli;

pub mod error;
pub mod krelation;
pub mod monoid;
pub mod reducer;
pub mod schema;
pub mod semijoin;

pub use error::{Error, Result};
pub use krelation::{AttrSet, Attribute, KRel, Tuple};
pub use monoid::{Elem, MonoidRef};
pub use reducer::{SemijoinProgram, Statement};
pub use schema::{Hypergraph, RIOrdering};
pub use semijoin::{SemijoinImpl, SemijoinKind};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/monoids.md")]
    mod monoids {}
    #[doc = include_str!("../../../book/src/relations.md")]
    mod relations {}
    #[doc = include_str!("../../../book/src/semijoins.md")]
    mod semijoins {}
    #[doc = include_str!("../../../book/src/deciding.md")]
    mod deciding {}
    #[doc = include_str!("../../../book/src/schemas.md")]
    mod schemas {}
    #[doc = include_str!("../../../book/src/reducers.md")]
    mod reducers {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
