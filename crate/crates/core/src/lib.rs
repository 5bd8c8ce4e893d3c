#![no_std]

//! Ball spaces over finite and symbolic carriers.
//!
//! The crate is `no_std` with `alloc`. It covers:
//!
//! * a bounded ordinal notation `ω₁·a + ω·b + c` ([`ordinal`]),
//! * finite unions of ordinal-interval boxes with decidable set algebra ([`region`]),
//! * finite and parametric ball spaces, chain intersections, the `ci` operator and its
//!   rank, and certified refutation witnesses ([`ballspace`]),
//! * finite posets: width, Dilworth covers, directed decompositions ([`poset`]),
//! * finite ultrametric spaces with poset values and ultra-diameters ([`ultrametric`]),
//! * builders and verifiers for the two infinite counterexamples and the rank gadget,
//!   plus seeded instance generators ([`constructions`]).
//!
//! IO, JSON file formats and the command-line front end live in the `bsp` crate.

extern crate alloc;

pub mod ballspace;
pub mod bits;
pub mod constructions;
pub mod error;
pub mod ordinal;
pub mod poset;
pub mod region;
pub mod ultrametric;

#[cfg(feature = "oracle")]
pub mod oracle;

pub use bits::PointSet;
pub use error::Error;
pub use ordinal::{EndpointFn, IndexDomain, Ordinal, Sampler};
pub use region::{HiKind, Interval, OrdBox, Region};

pub type Result<T, E = Error> = core::result::Result<T, E>;
