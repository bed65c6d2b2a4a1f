//! Finitely generated abelian groups presented by relation lattices.
//!
//! A group on `g` generators is the quotient of `Z^g` by the column lattice
//! of its relation matrix. Elements are coordinate vectors; two vectors name
//! the same element exactly when their difference lies in the lattice.
//! Normal forms of the relation matrix are computed lazily and cached; the
//! fill is idempotent so sharing a group across threads is safe.

use super::matrix::IntMatrix;
use super::snf::{column_echelon, snf, ColumnEchelon, SmithForm};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock};

pub struct FGAbGroup {
    generators: usize,
    relations: IntMatrix,
    smith: OnceLock<SmithForm>,
    echelon: OnceLock<ColumnEchelon>,
}

impl Clone for FGAbGroup {
    fn clone(&self) -> Self {
        FGAbGroup {
            generators: self.generators,
            relations: self.relations.clone(),
            smith: OnceLock::new(),
            echelon: OnceLock::new(),
        }
    }
}

/// Equality of presentations, not of isomorphism classes. Element
/// arithmetic requires identical presentations; use [`FGAbGroup::iso_class`]
/// to compare groups up to isomorphism.
impl PartialEq for FGAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.relations == other.relations
    }
}

impl Eq for FGAbGroup {}

impl fmt::Debug for FGAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FGAbGroup(generators: {}, relations: {:?})",
            self.generators, self.relations
        )
    }
}

impl FGAbGroup {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != generators {
            return Err(Error::Dimension(format!(
                "relation matrix has {} rows for a group on {} generators",
                relations.rows(),
                generators
            )));
        }
        Ok(FGAbGroup {
            generators,
            relations,
            smith: OnceLock::new(),
            echelon: OnceLock::new(),
        })
    }

    pub fn free(rank: usize) -> Self {
        FGAbGroup::new(rank, IntMatrix::zero(rank, 0)).unwrap()
    }

    pub fn trivial() -> Self {
        FGAbGroup::free(0)
    }

    /// Z/order on one generator; order 0 gives Z.
    pub fn cyclic(order: u64) -> Self {
        let relations = if order == 0 {
            IntMatrix::zero(1, 0)
        } else {
            IntMatrix::new(1, 1, vec![BigInt::from(order)])
        };
        FGAbGroup::new(1, relations).unwrap()
    }

    /// Direct sum of cyclic groups of the given orders plus a free part.
    pub fn from_orders(orders: &[u64], free_rank: usize) -> Self {
        let g = orders.len() + free_rank;
        let diag: Vec<BigInt> = orders.iter().map(|&o| BigInt::from(o)).collect();
        FGAbGroup::new(g, IntMatrix::diagonal(&diag, g, orders.len())).unwrap()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn smith(&self) -> &SmithForm {
        self.smith.get_or_init(|| snf(&self.relations))
    }

    pub fn echelon(&self) -> &ColumnEchelon {
        self.echelon.get_or_init(|| column_echelon(&self.relations))
    }

    /// Is `v` in the relation lattice, i.e. does it name the zero element?
    pub fn lattice_contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.generators, "coordinate length");
        self.echelon().contains(v)
    }

    /// Coefficients expressing `v` in terms of the relation columns.
    pub fn lattice_solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.generators, "coordinate length");
        self.echelon().solve_in_original(v)
    }

    /// Unique representative of the class of `coords`: transport to Smith
    /// coordinates, reduce componentwise modulo the invariant factors, and
    /// transport back.
    pub fn canonicalize_coords(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.generators, "coordinate length");
        let sf = self.smith();
        let mut y = sf.u.apply(coords);
        for (i, d) in sf.invariant_factors.iter().enumerate() {
            y[i] = y[i].mod_floor(d);
        }
        sf.u_inv.apply(&y)
    }

    /// Invariant factors of the relation matrix (including any 1s).
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.smith().invariant_factors
    }

    pub fn iso_class(&self) -> IsoClass {
        let sf = self.smith();
        IsoClass {
            torsion: sf
                .invariant_factors
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect(),
            free_rank: self.generators - sf.rank(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        let cls = self.iso_class();
        cls.torsion.is_empty() && cls.free_rank == 0
    }

    pub fn element(self: &Arc<Self>, coords: Vec<BigInt>) -> FGAbElement {
        assert_eq!(coords.len(), self.generators, "coordinate length");
        FGAbElement {
            group: Arc::clone(self),
            coords,
        }
    }

    pub fn element_from_i64(self: &Arc<Self>, coords: &[i64]) -> FGAbElement {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero_element(self: &Arc<Self>) -> FGAbElement {
        self.element(vec![BigInt::zero(); self.generators])
    }

    pub fn generator(self: &Arc<Self>, i: usize) -> FGAbElement {
        assert!(i < self.generators, "generator index");
        let mut coords = vec![BigInt::zero(); self.generators];
        coords[i] = BigInt::one();
        self.element(coords)
    }
}

/// Complete isomorphism invariant: invariant factors > 1 in divisibility
/// order, plus the free rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoClass {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl IsoClass {
    pub fn free(rank: usize) -> Self {
        IsoClass {
            torsion: Vec::new(),
            free_rank: rank,
        }
    }

    pub fn of_orders(orders: &[u64], free_rank: usize) -> Self {
        IsoClass {
            torsion: orders.iter().map(|&o| BigInt::from(o)).collect(),
            free_rank,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

impl fmt::Display for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of an [`FGAbGroup`], sharing the group by `Arc`.
#[derive(Clone)]
pub struct FGAbElement {
    group: Arc<FGAbGroup>,
    coords: Vec<BigInt>,
}

impl FGAbElement {
    pub fn group(&self) -> &Arc<FGAbGroup> {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn canonicalize(&self) -> FGAbElement {
        FGAbElement {
            group: Arc::clone(&self.group),
            coords: self.group.canonicalize_coords(&self.coords),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.group.lattice_contains(&self.coords)
    }

    pub fn scale(&self, k: &BigInt) -> FGAbElement {
        FGAbElement {
            group: Arc::clone(&self.group),
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }
}

fn same_group(a: &FGAbElement, b: &FGAbElement) -> bool {
    Arc::ptr_eq(&a.group, &b.group) || a.group == b.group
}

/// Semantic equality: same presentation and difference in the lattice.
impl PartialEq for FGAbElement {
    fn eq(&self, other: &Self) -> bool {
        same_group(self, other)
            && self
                .group
                .lattice_contains(&sub_coords(&self.coords, &other.coords))
    }
}

impl Eq for FGAbElement {}

fn sub_coords(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl Add for &FGAbElement {
    type Output = FGAbElement;
    fn add(self, rhs: &FGAbElement) -> FGAbElement {
        assert!(same_group(self, rhs), "element addition across groups");
        FGAbElement {
            group: Arc::clone(&self.group),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }
}

impl Sub for &FGAbElement {
    type Output = FGAbElement;
    fn sub(self, rhs: &FGAbElement) -> FGAbElement {
        assert!(same_group(self, rhs), "element subtraction across groups");
        FGAbElement {
            group: Arc::clone(&self.group),
            coords: sub_coords(&self.coords, &rhs.coords),
        }
    }
}

impl Neg for &FGAbElement {
    type Output = FGAbElement;
    fn neg(self) -> FGAbElement {
        FGAbElement {
            group: Arc::clone(&self.group),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for FGAbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FGAbElement{:?}", self.coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalize_cyclic() {
        let g = FGAbGroup::cyclic(6);
        assert_eq!(
            g.canonicalize_coords(&[BigInt::from(7)]),
            vec![BigInt::one()]
        );
        assert_eq!(
            g.canonicalize_coords(&[BigInt::from(-1)]),
            vec![BigInt::from(5)]
        );
    }

    #[test]
    fn canonicalize_free_is_identity() {
        let g = FGAbGroup::free(2);
        let coords = vec![BigInt::from(3), BigInt::from(-2)];
        assert_eq!(g.canonicalize_coords(&coords), coords);
    }

    #[test]
    fn canonicalize_mixed() {
        // Z/2 + Z presented with relation column (2,0).
        let g = FGAbGroup::new(2, IntMatrix::from_rows(&[&[2], &[0]])).unwrap();
        assert_eq!(
            g.canonicalize_coords(&[BigInt::from(5), BigInt::from(4)]),
            vec![BigInt::one(), BigInt::from(4)]
        );
    }

    #[test]
    fn canonicalize_idempotent_and_agrees_with_membership() {
        let g = FGAbGroup::new(
            3,
            IntMatrix::from_rows(&[&[2, 1, 4], &[0, 3, 2], &[4, 1, 0]]),
        )
        .unwrap();
        let coords: Vec<BigInt> = vec![7.into(), (-5).into(), 11.into()];
        let once = g.canonicalize_coords(&coords);
        let twice = g.canonicalize_coords(&once);
        assert_eq!(once, twice);
        assert!(g.lattice_contains(&sub_coords(&coords, &once)));
    }

    #[test]
    fn iso_class_reporting() {
        let g = FGAbGroup::from_orders(&[2, 6], 1);
        assert_eq!(g.iso_class(), IsoClass::of_orders(&[2, 6], 1));
        assert_eq!(g.iso_class().to_string(), "Z/2 + Z/6 + Z");
        assert_eq!(FGAbGroup::trivial().iso_class().to_string(), "0");
        assert_eq!(FGAbGroup::free(1).iso_class().to_string(), "Z");
        // A presentation with a unit invariant factor collapses.
        let h = FGAbGroup::new(2, IntMatrix::from_rows(&[&[1, 0], &[0, 4]])).unwrap();
        assert_eq!(h.iso_class(), IsoClass::of_orders(&[4], 0));
    }

    #[test]
    fn element_equality_mod_relations() {
        let g = Arc::new(FGAbGroup::cyclic(4));
        let a = g.element_from_i64(&[1]);
        let b = g.element_from_i64(&[5]);
        let c = g.element_from_i64(&[2]);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!((&(&a - &b)).is_zero());
        assert_eq!((&a + &a).canonicalize().coords(), c.coords());
    }

    #[test]
    fn trivial_group_detection() {
        assert!(FGAbGroup::trivial().is_trivial());
        assert!(FGAbGroup::cyclic(1).is_trivial());
        assert!(!FGAbGroup::cyclic(2).is_trivial());
        assert!(!FGAbGroup::free(1).is_trivial());
    }
}
