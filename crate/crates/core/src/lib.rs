//! Exact enumeration of perfect unary forms `a·x²` over totally real number
//! fields, together with the explicit class-count bounds that control how
//! many homothety classes such forms can have.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that decides
//! membership, equality or rank is exact rational arithmetic; floating point
//! only appears in the log-unit lattice, where it generates candidates that
//! are then confirmed exactly, and in the closed-form bounds, which are
//! evaluated with a multi-precision float.
//!
//! Module map:
//!
//! * [`field`]: number fields, elements, traces, norms, certified embeddings.
//! * [`units`]: log embedding, log-unit lattice, unit reduction and
//!   equivalence witnesses.
//! * [`minima`]: trace-form Gram matrices, minimum and minimal vectors.
//! * [`voronoi`]: perfection, Voronoi cones, facets, neighbours and the
//!   class enumeration.
//! * [`bounds`]: Hermite-constant, reducibility and class-count bounds.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod bounds;
pub mod cone;
pub mod error;
pub mod field;
pub mod hp;
pub mod interval;
pub mod lattice;
pub mod linalg;
pub mod minima;
pub mod poly;
pub mod units;
pub mod voronoi;

pub use error::{Error, Result};
pub use field::{FieldElement, NumberField};
pub use minima::{MinimaRecord, TraceGram};
pub use units::LogUnitLattice;
pub use voronoi::{EnumerationLimits, EnumerationReport, PerfectClass};

/// Exact rationals used throughout.
pub type Q = num_rational::BigRational;
