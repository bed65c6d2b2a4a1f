//! Homomorphisms between presented groups, with kernels, factorizations,
//! and finite direct sums.

use super::group::{FGAbElement, FGAbGroup};
use super::matrix::IntMatrix;
use super::snf::{column_echelon, integer_kernel};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

/// A homomorphism presented by a matrix acting on generator coordinates
/// (target generators × source generators). Construction through [`new`]
/// checks well-definedness: every source relation must map into the target
/// relation lattice.
///
/// [`new`]: FGAbHom::new
#[derive(Clone)]
pub struct FGAbHom {
    source: Arc<FGAbGroup>,
    target: Arc<FGAbGroup>,
    matrix: IntMatrix,
}

fn same_presentation(a: &Arc<FGAbGroup>, b: &Arc<FGAbGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl FGAbHom {
    pub fn new(
        source: Arc<FGAbGroup>,
        target: Arc<FGAbGroup>,
        matrix: IntMatrix,
    ) -> Result<Self> {
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(Error::Dimension(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators(),
                source.generators()
            )));
        }
        let rel = source.relations();
        for j in 0..rel.cols() {
            if !target.lattice_contains(&matrix.apply(&rel.column(j))) {
                return Err(Error::IllFormedHom { column: j });
            }
        }
        Ok(FGAbHom {
            source,
            target,
            matrix,
        })
    }

    /// For combinators whose output is well-defined by construction
    /// (composites, sums, canonical inclusions/projections).
    fn unchecked(source: Arc<FGAbGroup>, target: Arc<FGAbGroup>, matrix: IntMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), target.generators());
        debug_assert_eq!(matrix.cols(), source.generators());
        FGAbHom {
            source,
            target,
            matrix,
        }
    }

    pub fn zero(source: Arc<FGAbGroup>, target: Arc<FGAbGroup>) -> Self {
        let m = IntMatrix::zero(target.generators(), source.generators());
        FGAbHom::unchecked(source, target, m)
    }

    pub fn identity(group: &Arc<FGAbGroup>) -> Self {
        let m = IntMatrix::identity(group.generators());
        FGAbHom::unchecked(Arc::clone(group), Arc::clone(group), m)
    }

    pub fn source(&self) -> &Arc<FGAbGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FGAbGroup> {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, e: &FGAbElement) -> FGAbElement {
        assert!(
            same_presentation(e.group(), &self.source),
            "element not in the hom's source"
        );
        self.target.element(self.matrix.apply(e.coords()))
    }

    /// Composition in diagram order: `self.then(g)` is `g` after `self`.
    pub fn then(&self, next: &FGAbHom) -> FGAbHom {
        assert!(
            same_presentation(&self.target, &next.source),
            "composition source/target mismatch"
        );
        FGAbHom::unchecked(
            Arc::clone(&self.source),
            Arc::clone(&next.target),
            &next.matrix * &self.matrix,
        )
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.lattice_contains(&self.matrix.column(j)))
    }

    /// First source generator on which the two homs disagree modulo the
    /// target lattice, if any. `None` means the homs are equal.
    pub fn disagreement(&self, other: &FGAbHom) -> Result<Option<usize>> {
        if !same_presentation(&self.source, &other.source)
            || !same_presentation(&self.target, &other.target)
        {
            return Err(Error::Mismatch(
                "hom comparison requires identical source and target".into(),
            ));
        }
        let diff = &self.matrix - &other.matrix;
        Ok((0..diff.cols()).find(|&j| !self.target.lattice_contains(&diff.column(j))))
    }

    pub fn equals(&self, other: &FGAbHom) -> Result<bool> {
        Ok(self.disagreement(other)?.is_none())
    }

    /// A preimage of `e` under `self`, if one exists (exact, accounting for
    /// target relations).
    pub fn preimage(&self, e: &FGAbElement) -> Option<FGAbElement> {
        assert!(
            same_presentation(e.group(), &self.target),
            "element not in the hom's target"
        );
        let stacked = self.matrix.hstack(self.target.relations());
        let sol = column_echelon(&stacked).solve_in_original(e.coords())?;
        Some(self.source.element(sol[..self.source.generators()].to_vec()))
    }

    /// Factor `self: C -> B` through `inclusion: K -> B`, producing
    /// `h: C -> K` with `inclusion ∘ h = self`. Fails with the offending
    /// generator when some image is not in the inclusion's image.
    pub fn lift_through(&self, inclusion: &FGAbHom) -> Result<FGAbHom> {
        if !same_presentation(&self.target, &inclusion.target) {
            return Err(Error::Mismatch(
                "factorization requires a common target".into(),
            ));
        }
        let k = inclusion.source.generators();
        let stacked = inclusion.matrix.hstack(self.target.relations());
        let ech = column_echelon(&stacked);
        let mut lifted = IntMatrix::zero(k, self.matrix.cols());
        for j in 0..self.matrix.cols() {
            let sol = ech
                .solve_in_original(&self.matrix.column(j))
                .ok_or(Error::NotFactorable { column: j })?;
            for r in 0..k {
                lifted[(r, j)] = sol[r].clone();
            }
        }
        FGAbHom::new(
            Arc::clone(&self.source),
            Arc::clone(&inclusion.source),
            lifted,
        )
    }
}

impl Add for &FGAbHom {
    type Output = FGAbHom;
    fn add(self, rhs: &FGAbHom) -> FGAbHom {
        assert!(
            same_presentation(&self.source, &rhs.source)
                && same_presentation(&self.target, &rhs.target),
            "hom addition source/target mismatch"
        );
        FGAbHom::unchecked(
            Arc::clone(&self.source),
            Arc::clone(&self.target),
            &self.matrix + &rhs.matrix,
        )
    }
}

impl Sub for &FGAbHom {
    type Output = FGAbHom;
    fn sub(self, rhs: &FGAbHom) -> FGAbHom {
        assert!(
            same_presentation(&self.source, &rhs.source)
                && same_presentation(&self.target, &rhs.target),
            "hom subtraction source/target mismatch"
        );
        FGAbHom::unchecked(
            Arc::clone(&self.source),
            Arc::clone(&self.target),
            &self.matrix - &rhs.matrix,
        )
    }
}

impl Neg for &FGAbHom {
    type Output = FGAbHom;
    fn neg(self) -> FGAbHom {
        FGAbHom::unchecked(
            Arc::clone(&self.source),
            Arc::clone(&self.target),
            -&self.matrix,
        )
    }
}

impl fmt::Debug for FGAbHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FGAbHom({} gens -> {} gens, {:?})",
            self.source.generators(),
            self.target.generators(),
            self.matrix
        )
    }
}

/// Equality of homs as maps: equal matrices modulo the target lattice,
/// column-wise. Errors when sources or targets differ.
pub fn hom_equal(f: &FGAbHom, g: &FGAbHom) -> Result<bool> {
    f.equals(g)
}

/// Kernel of a homomorphism, as a presented group with an injective
/// inclusion into the source.
///
/// The inclusion's columns span exactly the coordinate vectors whose class
/// is killed by `f`; its relations are the coefficient vectors that land in
/// the source lattice, so the inclusion is injective by construction.
pub fn kernel_of_hom(f: &FGAbHom) -> (Arc<FGAbGroup>, FGAbHom) {
    let m = f.source().generators();
    // x with f(x) ≡ 0: pair the matrix with target relations and project.
    let paired = f.matrix().hstack(f.target().relations());
    let null = integer_kernel(&paired);
    let projected = null.submatrix(0..m, 0..null.cols());
    let span = column_echelon(&projected).h.drop_zero_columns();
    let k = span.cols();
    // Coefficients whose combination lies in the source lattice become
    // relations of the kernel presentation.
    let stacked = span.hstack(f.source().relations());
    let syzygies = integer_kernel(&stacked);
    let relations = syzygies.submatrix(0..k, 0..syzygies.cols());
    let kernel = Arc::new(FGAbGroup::new(k, relations).expect("kernel presentation dimensions"));
    let inclusion = FGAbHom::unchecked(Arc::clone(&kernel), Arc::clone(f.source()), span);
    (kernel, inclusion)
}

/// Finite direct sum with its canonical inclusions and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    summands: Vec<Arc<FGAbGroup>>,
    offsets: Vec<usize>,
    group: Arc<FGAbGroup>,
}

impl DirectSum {
    pub fn new(summands: Vec<Arc<FGAbGroup>>) -> DirectSum {
        let mut offsets = Vec::with_capacity(summands.len());
        let mut total = 0;
        for s in &summands {
            offsets.push(total);
            total += s.generators();
        }
        let blocks: Vec<&IntMatrix> = summands.iter().map(|s| s.relations()).collect();
        let relations = IntMatrix::block_diag(&blocks);
        let group = Arc::new(FGAbGroup::new(total, relations).expect("block presentation"));
        DirectSum {
            summands,
            offsets,
            group,
        }
    }

    pub fn group(&self) -> &Arc<FGAbGroup> {
        &self.group
    }

    pub fn arity(&self) -> usize {
        self.summands.len()
    }

    pub fn summand(&self, i: usize) -> &Arc<FGAbGroup> {
        &self.summands[i]
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn inclusion(&self, i: usize) -> FGAbHom {
        let g = self.summands[i].generators();
        let off = self.offsets[i];
        let m = IntMatrix::from_fn(self.group.generators(), g, |r, c| {
            if r == off + c {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        FGAbHom::unchecked(
            Arc::clone(&self.summands[i]),
            Arc::clone(&self.group),
            m,
        )
    }

    pub fn projection(&self, i: usize) -> FGAbHom {
        let g = self.summands[i].generators();
        let off = self.offsets[i];
        let m = IntMatrix::from_fn(g, self.group.generators(), |r, c| {
            if c == off + r {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        FGAbHom::unchecked(
            Arc::clone(&self.group),
            Arc::clone(&self.summands[i]),
            m,
        )
    }

    /// Assemble an element of the sum from one element per summand.
    pub fn tuple(&self, parts: &[FGAbElement]) -> FGAbElement {
        assert_eq!(parts.len(), self.summands.len(), "tuple arity");
        let mut coords = Vec::with_capacity(self.group.generators());
        for (part, summand) in parts.iter().zip(&self.summands) {
            assert!(
                part.group() == summand,
                "tuple component in the wrong group"
            );
            coords.extend_from_slice(part.coords());
        }
        self.group.element(coords)
    }
}

/// Random well-defined hom with small coefficients, deterministic per RNG
/// state. Built in Smith coordinates, where well-definedness constrains
/// each entry to a multiple of a fixed step, then conjugated back.
pub fn random_hom<R: Rng>(
    source: &Arc<FGAbGroup>,
    target: &Arc<FGAbGroup>,
    rng: &mut R,
    coeff_bound: i64,
) -> FGAbHom {
    assert!(coeff_bound >= 0);
    let ss = source.smith();
    let st = target.smith();
    let order = |sf: &super::snf::SmithForm, i: usize| -> BigInt {
        if i < sf.rank() {
            sf.invariant_factors[i].clone()
        } else {
            BigInt::zero()
        }
    };
    let mut m = IntMatrix::zero(target.generators(), source.generators());
    for j in 0..target.generators() {
        for i in 0..source.generators() {
            let di = order(ss, i);
            let ej = order(st, j);
            let step = if ej.is_zero() {
                if di.is_zero() {
                    BigInt::one()
                } else {
                    // Torsion cannot map to a free generator.
                    continue;
                }
            } else {
                &ej / di.gcd(&ej)
            };
            let coeff = BigInt::from(rng.gen_range(-coeff_bound..=coeff_bound));
            m[(j, i)] = step * coeff;
        }
    }
    let matrix = &(&st.u_inv * &m) * &ss.u;
    FGAbHom::new(Arc::clone(source), Arc::clone(target), matrix)
        .expect("Smith-coordinate construction is well-defined")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arc(g: FGAbGroup) -> Arc<FGAbGroup> {
        Arc::new(g)
    }

    #[test]
    fn rejects_ill_formed() {
        let z2 = arc(FGAbGroup::cyclic(2));
        let z = arc(FGAbGroup::free(1));
        let err = FGAbHom::new(Arc::clone(&z2), z, IntMatrix::from_rows(&[&[1]]));
        assert!(matches!(err, Err(Error::IllFormedHom { column: 0 })));
    }

    #[test]
    fn hom_equal_examples() {
        let z2 = arc(FGAbGroup::cyclic(2));
        let z = arc(FGAbGroup::free(1));
        let f = FGAbHom::new(
            Arc::clone(&z2),
            Arc::clone(&z2),
            IntMatrix::from_rows(&[&[1]]),
        )
        .unwrap();
        let g = FGAbHom::new(
            Arc::clone(&z2),
            Arc::clone(&z2),
            IntMatrix::from_rows(&[&[3]]),
        )
        .unwrap();
        assert!(hom_equal(&f, &g).unwrap());

        let h2 = FGAbHom::new(
            Arc::clone(&z),
            Arc::clone(&z2),
            IntMatrix::from_rows(&[&[2]]),
        )
        .unwrap();
        let h1 = FGAbHom::new(
            Arc::clone(&z),
            Arc::clone(&z2),
            IntMatrix::from_rows(&[&[1]]),
        )
        .unwrap();
        assert!(!hom_equal(&h2, &h1).unwrap());
        assert!(hom_equal(&h2, &h2).unwrap());
        assert!(hom_equal(&f, &h1).is_err());
    }

    #[test]
    fn kernel_of_times_three_on_z() {
        let z = arc(FGAbGroup::free(1));
        let f = FGAbHom::new(
            Arc::clone(&z),
            Arc::clone(&z),
            IntMatrix::from_rows(&[&[3]]),
        )
        .unwrap();
        let (k, inc) = kernel_of_hom(&f);
        assert!(k.is_trivial());
        assert!(inc.then(&f).is_zero());
    }

    #[test]
    fn kernel_of_doubling_on_z4() {
        let z4 = arc(FGAbGroup::cyclic(4));
        let f = FGAbHom::new(
            Arc::clone(&z4),
            Arc::clone(&z4),
            IntMatrix::from_rows(&[&[2]]),
        )
        .unwrap();
        let (k, inc) = kernel_of_hom(&f);
        assert_eq!(k.iso_class(), crate::intlin::IsoClass::of_orders(&[2], 0));
        assert!(inc.then(&f).is_zero());
        // The kernel is generated by the class of 2 in Z/4.
        let two = z4.element_from_i64(&[2]);
        assert_eq!(inc.apply(&k.generator(0)), two);
        // Universal property on all four elements.
        for c in 0..4 {
            let e = z4.element_from_i64(&[c]);
            let killed = f.apply(&e).is_zero();
            assert_eq!(inc.preimage(&e).is_some(), killed, "element {c}");
        }
    }

    #[test]
    fn kernel_of_sum_map() {
        let z2 = arc(FGAbGroup::free(2));
        let z = arc(FGAbGroup::free(1));
        let f = FGAbHom::new(
            Arc::clone(&z2),
            Arc::clone(&z),
            IntMatrix::from_rows(&[&[1, 1]]),
        )
        .unwrap();
        let (k, inc) = kernel_of_hom(&f);
        assert_eq!(k.iso_class(), crate::intlin::IsoClass::free(1));
        assert!(inc.then(&f).is_zero());
        let gen = inc.apply(&k.generator(0));
        let expected = z2.element_from_i64(&[1, -1]);
        assert!(gen == expected || gen == -&expected);
    }

    #[test]
    fn lift_through_kernel_inclusion() {
        let z2 = arc(FGAbGroup::free(2));
        let z = arc(FGAbGroup::free(1));
        let sum = FGAbHom::new(
            Arc::clone(&z2),
            Arc::clone(&z),
            IntMatrix::from_rows(&[&[1, 1]]),
        )
        .unwrap();
        let (_, inc) = kernel_of_hom(&sum);
        let f = FGAbHom::new(
            Arc::clone(&z),
            Arc::clone(&z2),
            IntMatrix::from_rows(&[&[2], &[-2]]),
        )
        .unwrap();
        let lifted = f.lift_through(&inc).unwrap();
        assert!(hom_equal(&lifted.then(&inc), &f).unwrap());

        let off_kernel = FGAbHom::new(
            Arc::clone(&z),
            Arc::clone(&z2),
            IntMatrix::from_rows(&[&[1], &[0]]),
        )
        .unwrap();
        assert!(matches!(
            off_kernel.lift_through(&inc),
            Err(Error::NotFactorable { column: 0 })
        ));
    }

    #[test]
    fn direct_sum_laws() {
        let parts = vec![
            arc(FGAbGroup::cyclic(4)),
            arc(FGAbGroup::free(2)),
            arc(FGAbGroup::cyclic(3)),
        ];
        let sum = DirectSum::new(parts.clone());
        assert_eq!(sum.group().generators(), 4);
        let id = FGAbHom::identity(sum.group());
        let mut assembled = FGAbHom::zero(Arc::clone(sum.group()), Arc::clone(sum.group()));
        for i in 0..sum.arity() {
            let pi = sum.projection(i);
            let inc = sum.inclusion(i);
            assert!(hom_equal(&inc.then(&pi), &FGAbHom::identity(&parts[i])).unwrap());
            if i > 0 {
                let other = sum.inclusion(i - 1).then(&sum.projection(i));
                assert!(other.is_zero());
            }
            assembled = &assembled + &pi.then(&inc);
        }
        assert!(hom_equal(&assembled, &id).unwrap());
    }

    #[test]
    fn random_homs_are_well_defined() {
        let groups = vec![
            arc(FGAbGroup::free(2)),
            arc(FGAbGroup::cyclic(4)),
            arc(FGAbGroup::from_orders(&[2, 6], 1)),
            arc(FGAbGroup::new(2, IntMatrix::from_rows(&[&[2, 1], &[4, 3]])).unwrap()),
            arc(FGAbGroup::trivial()),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for s in &groups {
            for t in &groups {
                for _ in 0..10 {
                    // `random_hom` would panic if construction failed.
                    let f = random_hom(s, t, &mut rng, 3);
                    assert_eq!(f.matrix().rows(), t.generators());
                }
            }
        }
    }

    #[test]
    fn random_hom_deterministic_per_seed() {
        let s = arc(FGAbGroup::from_orders(&[4], 1));
        let t = arc(FGAbGroup::from_orders(&[2], 2));
        let mut r1 = ChaCha8Rng::seed_from_u64(5);
        let mut r2 = ChaCha8Rng::seed_from_u64(5);
        let f1 = random_hom(&s, &t, &mut r1, 3);
        let f2 = random_hom(&s, &t, &mut r2, 3);
        assert_eq!(f1.matrix(), f2.matrix());
    }
}
