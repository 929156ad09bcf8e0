//! Numerical Clifford-algebra and spinor engine.
//!
//! The crate implements the complex spinor representation of `Cl_n` with
//! matrix-free generator kernels, and on top of it:
//!
//! * [`analysis`]: isotropic kernels, nullity, purity classes and the
//!   almost-CR data `(D, J, D^perp, xi)` carried by a spinor;
//! * [`kahler`]: the Clifford action of a Kaehler form and its eigenspace
//!   decomposition;
//! * [`constructors`]: canonical spinors, seeded samplers and tensor products;
//! * [`harness`]: spinor files, randomized verification suites and reports.
//!
//! ```
//! use spinorlab::{analysis, constructors};
//!
//! let psi = constructors::psi_pure(8).unwrap();
//! let class = analysis::classify(&psi).unwrap();
//! assert_eq!(class.to_string(), "Pure, rank 4");
//! ```

pub mod analysis;
pub mod clifford;
pub mod constructors;
pub mod error;
pub mod harness;
pub mod kahler;

pub use clifford::{ComplexVector, Spinor, SpinorSpace, C64};
pub use error::{Result, SpinorError};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/representation.md")]
    mod representation {}
    #[doc = include_str!("../../../book/src/nullity.md")]
    mod nullity {}
    #[doc = include_str!("../../../book/src/cr-structures.md")]
    mod cr_structures {}
    #[doc = include_str!("../../../book/src/kaehler.md")]
    mod kaehler {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
