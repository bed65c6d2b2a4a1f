//! Exact integer linear algebra: matrices, Smith/Hermite-style normal
//! forms, lattice membership, and finitely generated abelian groups with
//! their homomorphisms. Everything downstream reduces to this module.

mod group;
mod hom;
mod matrix;
mod snf;

pub use group::{FGAbElement, FGAbGroup, IsoClass};
pub use hom::{hom_equal, kernel_of_hom, random_hom, DirectSum, FGAbHom};
pub use matrix::{random_unimodular, IntMatrix};
pub use snf::{column_echelon, integer_kernel, snf, solve_membership, ColumnEchelon, SmithForm};
