//! Exact computational algebra over finitely generated abelian groups.
//!
//! The crate provides four layers that build on each other:
//!
//! - [`intlin`]: arbitrary-precision integer matrices, Smith/Hermite normal
//!   forms, lattice membership, and finitely generated abelian groups with
//!   homomorphisms presented by integer matrices.
//! - [`chain`]: bounded chain complexes of such groups, with validation,
//!   homology, and a seeded random generator.
//! - [`crossed`]: crossed complexes internal to abelian groups, the functors
//!   to and from chain complexes, the dimension-1 groupoid composition, the
//!   action of dimension 1 on higher dimensions, and both round-trip
//!   isomorphisms.
//! - [`cubical`] and [`nerve`]: cubical abelian groups with connections, the
//!   derived direction-wise groupoid compositions with their interchange and
//!   transport laws, and the nerve/normalization pair that realizes the
//!   equivalence with chain complexes.
//!
//! All arithmetic is exact; every law checked by this crate is checked as an
//! equality of homomorphisms on an explicitly presented group, never by
//! sampling.

pub mod chain;
pub mod crossed;
pub mod cubical;
pub mod intlin;
pub mod nerve;
pub mod report;

pub use report::{Report, Violation};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("homomorphism not well-defined on relations (relation column {column})")]
    IllFormedHom { column: usize },

    #[error("source/target mismatch: {0}")]
    Mismatch(String),

    #[error("elements not composable: {0}")]
    NotComposable(String),

    #[error("invalid chain complex: {0}")]
    InvalidChain(String),

    #[error("invalid crossed complex: {0}")]
    InvalidCrossed(String),

    #[error("bundle fails structural identities: {0}")]
    InvalidBundle(String),

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("degree out of range: {0}")]
    DegreeRange(String),

    #[error("not a bundle morphism: {0}")]
    NotBundleMorphism(String),

    #[error("cannot factor homomorphism through inclusion (generator {column})")]
    NotFactorable { column: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
