//! Bounded chain complexes of finitely generated abelian groups, chain
//! maps, homology, and seeded random generators for property tests.
//!
//! A complex stores groups for degrees `0..=top_degree` and one boundary
//! hom per degree `1..=top_degree`. Construction checks only the wiring;
//! the differential condition is the job of [`validate_chain`], so invalid
//! complexes can be represented, validated, and reported on.

use crate::intlin::{
    kernel_of_hom, random_hom, random_unimodular, DirectSum, FGAbGroup, FGAbHom,
};
use crate::{Error, Report, Result, Violation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct ChainComplex {
    groups: Vec<Arc<FGAbGroup>>,
    boundaries: Vec<FGAbHom>,
}

impl ChainComplex {
    /// `groups[n]` is the degree-`n` group; `boundaries[n-1]` maps degree
    /// `n` to degree `n-1`.
    pub fn new(groups: Vec<Arc<FGAbGroup>>, boundaries: Vec<FGAbHom>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::InvalidChain(
                "a complex needs at least a degree-0 group".into(),
            ));
        }
        if boundaries.len() + 1 != groups.len() {
            return Err(Error::InvalidChain(format!(
                "{} groups require {} boundaries, got {}",
                groups.len(),
                groups.len() - 1,
                boundaries.len()
            )));
        }
        for (i, d) in boundaries.iter().enumerate() {
            let n = i + 1;
            if d.source() != &groups[n] || d.target() != &groups[n - 1] {
                return Err(Error::InvalidChain(format!(
                    "boundary at degree {n} does not match the graded groups"
                )));
            }
        }
        Ok(ChainComplex { groups, boundaries })
    }

    pub fn single(group: Arc<FGAbGroup>) -> ChainComplex {
        ChainComplex {
            groups: vec![group],
            boundaries: Vec::new(),
        }
    }

    pub fn zero_complex(top: usize) -> ChainComplex {
        ChainComplex::single(Arc::new(FGAbGroup::trivial())).extend_to(top)
    }

    pub fn top_degree(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn group(&self, n: usize) -> &Arc<FGAbGroup> {
        &self.groups[n]
    }

    pub fn groups(&self) -> &[Arc<FGAbGroup>] {
        &self.groups
    }

    /// Boundary hom of degree `n`, for `1 <= n <= top_degree`.
    pub fn boundary(&self, n: usize) -> &FGAbHom {
        assert!(
            (1..=self.top_degree()).contains(&n),
            "boundary degree {n} out of range"
        );
        &self.boundaries[n - 1]
    }

    /// Degree-`n` group, extending by the zero group above the top. This is
    /// what makes complexes of different lengths comparable.
    pub fn group_or_zero(&self, n: usize) -> Arc<FGAbGroup> {
        if n <= self.top_degree() {
            Arc::clone(&self.groups[n])
        } else {
            Arc::new(FGAbGroup::trivial())
        }
    }

    /// Boundary of degree `n >= 1`, extending by zero homs above the top.
    pub fn boundary_or_zero(&self, n: usize) -> FGAbHom {
        assert!(n >= 1, "boundaries start at degree 1");
        if n <= self.top_degree() {
            self.boundaries[n - 1].clone()
        } else {
            FGAbHom::zero(self.group_or_zero(n), self.group_or_zero(n - 1))
        }
    }

    /// Pad with zero groups up to the requested top degree.
    pub fn extend_to(&self, top: usize) -> ChainComplex {
        assert!(top >= self.top_degree(), "extend_to cannot truncate");
        let mut groups = self.groups.clone();
        let mut boundaries = self.boundaries.clone();
        for n in self.top_degree() + 1..=top {
            let next = Arc::new(FGAbGroup::trivial());
            boundaries.push(FGAbHom::zero(Arc::clone(&next), Arc::clone(&groups[n - 1])));
            groups.push(next);
        }
        ChainComplex { groups, boundaries }
    }
}

/// Check the differential condition; an empty report means the complex is
/// valid. Violations name the degree and a witness generator.
pub fn validate_chain(a: &ChainComplex) -> Report {
    let mut report = Report::new();
    for n in 2..=a.top_degree() {
        let composite = a.boundary(n).then(a.boundary(n - 1));
        let zero = FGAbHom::zero(
            Arc::clone(composite.source()),
            Arc::clone(composite.target()),
        );
        if let Some(col) = composite
            .disagreement(&zero)
            .expect("composite endpoints match by construction")
        {
            report.push(Violation {
                law: "dd_zero".into(),
                indices: vec![n],
                witness: Some(format!(
                    "generator {col} of the degree-{n} group has nonzero boundary squared"
                )),
            });
        }
    }
    report
}

/// `Ker(boundary n) / Im(boundary n+1)` as a presented group. Degree 0 uses
/// the zero map out; the top degree has no incoming image.
pub fn homology(a: &ChainComplex, n: usize) -> Result<FGAbGroup> {
    if n > a.top_degree() {
        return Err(Error::DegreeRange(format!(
            "degree {n} exceeds top degree {}",
            a.top_degree()
        )));
    }
    let report = validate_chain(a);
    if let Some(v) = report.violations().first() {
        return Err(Error::InvalidChain(v.to_string()));
    }
    let out = if n == 0 {
        FGAbHom::zero(Arc::clone(a.group(0)), Arc::new(FGAbGroup::trivial()))
    } else {
        a.boundary(n).clone()
    };
    let (cycles, inclusion) = kernel_of_hom(&out);
    let relations = if n == a.top_degree() {
        cycles.relations().clone()
    } else {
        // Boundaries from above, rewritten in cycle coordinates, become
        // extra relations.
        let lifted = a.boundary(n + 1).lift_through(&inclusion)?;
        cycles.relations().hstack(lifted.matrix())
    };
    FGAbGroup::new(cycles.generators(), relations)
}

/// A degree-wise map of complexes commuting with the boundaries. The
/// component list always covers `max` of the two top degrees, padded with
/// zero homs through zero groups, so sources and targets of different
/// lengths compose cleanly.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: Vec<FGAbHom>,
}

impl ChainMap {
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: Vec<FGAbHom>,
    ) -> Result<Self> {
        let len = source.top_degree().max(target.top_degree()) + 1;
        if components.len() != len {
            return Err(Error::Dimension(format!(
                "chain map needs {len} components, got {}",
                components.len()
            )));
        }
        for (n, f) in components.iter().enumerate() {
            if f.source() != &source.group_or_zero(n) || f.target() != &target.group_or_zero(n) {
                return Err(Error::Mismatch(format!(
                    "component {n} does not match the graded groups"
                )));
            }
        }
        for n in 1..len {
            let lhs = components[n].then(&target.boundary_or_zero(n));
            let rhs = source.boundary_or_zero(n).then(&components[n - 1]);
            if !lhs.equals(&rhs)? {
                return Err(Error::Mismatch(format!(
                    "chain map fails to commute with boundaries at degree {n}"
                )));
            }
        }
        Ok(ChainMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(a: &ChainComplex) -> ChainMap {
        let components = (0..=a.top_degree())
            .map(|n| FGAbHom::identity(a.group(n)))
            .collect();
        ChainMap {
            source: a.clone(),
            target: a.clone(),
            components,
        }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn component(&self, n: usize) -> FGAbHom {
        if n < self.components.len() {
            self.components[n].clone()
        } else {
            FGAbHom::zero(self.source.group_or_zero(n), self.target.group_or_zero(n))
        }
    }

    pub fn then(&self, next: &ChainMap) -> Result<ChainMap> {
        let len = self.source.top_degree().max(next.target.top_degree()) + 1;
        let components = (0..len)
            .map(|n| self.component(n).then(&next.component(n)))
            .collect();
        ChainMap::new(self.source.clone(), next.target.clone(), components)
    }

    pub fn equals(&self, other: &ChainMap) -> Result<bool> {
        let len = self
            .components
            .len()
            .max(other.components.len());
        for n in 0..len {
            if !self.component(n).equals(&other.component(n))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Random group with bounded free rank and torsion, presented by a
/// scrambled (non-diagonal) relation matrix.
pub fn random_group<R: Rng>(rank_bound: usize, torsion_bound: u64, rng: &mut R) -> FGAbGroup {
    let free = rng.gen_range(0..=rank_bound);
    let torsion_count = if torsion_bound >= 2 {
        rng.gen_range(0..=rank_bound)
    } else {
        0
    };
    let orders: Vec<u64> = (0..torsion_count)
        .map(|_| rng.gen_range(2..=torsion_bound))
        .collect();
    let base = FGAbGroup::from_orders(&orders, free);
    let g = base.generators();
    let r = base.relations().cols();
    let (p, _) = random_unimodular(g, rng, 2 * g);
    let (q, _) = random_unimodular(r, rng, 2 * r);
    let relations = &(&p * base.relations()) * &q;
    FGAbGroup::new(g, relations).expect("scrambled presentation keeps dimensions")
}

/// Deterministic random complex. Each boundary is forced through the
/// kernel of the previous one, so the differential condition holds by
/// construction, not by rejection sampling.
pub fn random_complex(
    top: usize,
    rank_bound: usize,
    torsion_bound: u64,
    seed: u64,
) -> ChainComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_complex_with(top, rank_bound, torsion_bound, &mut rng)
}

pub fn random_complex_with<R: Rng>(
    top: usize,
    rank_bound: usize,
    torsion_bound: u64,
    rng: &mut R,
) -> ChainComplex {
    let groups: Vec<Arc<FGAbGroup>> = (0..=top)
        .map(|_| Arc::new(random_group(rank_bound, torsion_bound, rng)))
        .collect();
    let mut boundaries: Vec<FGAbHom> = Vec::new();
    for n in 1..=top {
        let d = if n == 1 {
            random_hom(&groups[1], &groups[0], rng, 2)
        } else {
            let (cycles, inclusion) = kernel_of_hom(&boundaries[n - 2]);
            random_hom(&groups[n], &cycles, rng, 2).then(&inclusion)
        };
        boundaries.push(d);
    }
    ChainComplex::new(groups, boundaries).expect("generator wiring is sound")
}

/// Random chain map into `target`, generated together with its random
/// source complex: in each degree the pair (boundary, component) is a
/// random map into the subgroup of (a', b) with vanishing source boundary
/// of a' and matching images, which makes both the differential condition
/// and the commuting squares hold by construction.
pub fn random_chain_map(
    target: &ChainComplex,
    rank_bound: usize,
    torsion_bound: u64,
    seed: u64,
) -> ChainMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = target.top_degree();
    let mut src_groups: Vec<Arc<FGAbGroup>> = Vec::new();
    let mut src_boundaries: Vec<FGAbHom> = Vec::new();
    let mut components: Vec<FGAbHom> = Vec::new();
    for n in 0..=top {
        let a_n = Arc::new(random_group(rank_bound, torsion_bound, &mut rng));
        if n == 0 {
            components.push(random_hom(&a_n, target.group(0), &mut rng, 2));
            src_groups.push(a_n);
            continue;
        }
        let dom = DirectSum::new(vec![
            Arc::clone(&src_groups[n - 1]),
            Arc::clone(target.group(n)),
        ]);
        let prev = if n >= 2 {
            Arc::clone(&src_groups[n - 2])
        } else {
            Arc::new(FGAbGroup::trivial())
        };
        let cod = DirectSum::new(vec![Arc::clone(&prev), Arc::clone(target.group(n - 1))]);
        let d_prev = if n >= 2 {
            src_boundaries[n - 2].clone()
        } else {
            FGAbHom::zero(Arc::clone(&src_groups[0]), prev)
        };
        let killing = dom.projection(0).then(&d_prev).then(&cod.inclusion(0));
        let matching = (&dom.projection(0).then(&components[n - 1])
            - &dom.projection(1).then(target.boundary(n)))
            .then(&cod.inclusion(1));
        let (pairs, into_dom) = kernel_of_hom(&(&killing + &matching));
        let h = random_hom(&a_n, &pairs, &mut rng, 2).then(&into_dom);
        src_boundaries.push(h.then(&dom.projection(0)));
        components.push(h.then(&dom.projection(1)));
        src_groups.push(a_n);
    }
    let source = ChainComplex::new(src_groups, src_boundaries)
        .expect("generated source complex wiring is sound");
    ChainMap::new(source, target.clone(), components)
        .expect("generated components commute by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::{IntMatrix, IsoClass};

    fn times_two_complex() -> ChainComplex {
        let z = || Arc::new(FGAbGroup::free(1));
        let groups = vec![z(), z(), z()];
        let d1 = FGAbHom::new(
            Arc::clone(&groups[1]),
            Arc::clone(&groups[0]),
            IntMatrix::from_rows(&[&[0]]),
        )
        .unwrap();
        let d2 = FGAbHom::new(
            Arc::clone(&groups[2]),
            Arc::clone(&groups[1]),
            IntMatrix::from_rows(&[&[2]]),
        )
        .unwrap();
        ChainComplex::new(groups, vec![d1, d2]).unwrap()
    }

    #[test]
    fn validate_accepts_times_two() {
        assert!(validate_chain(&times_two_complex()).is_clean());
    }

    #[test]
    fn validate_rejects_identity_squared() {
        let z = || Arc::new(FGAbGroup::free(1));
        let groups = vec![z(), z(), z()];
        let d = |s: &Arc<FGAbGroup>, t: &Arc<FGAbGroup>| {
            FGAbHom::new(Arc::clone(s), Arc::clone(t), IntMatrix::from_rows(&[&[1]])).unwrap()
        };
        let complex = ChainComplex::new(
            groups.clone(),
            vec![d(&groups[1], &groups[0]), d(&groups[2], &groups[1])],
        )
        .unwrap();
        let report = validate_chain(&complex);
        assert_eq!(report.violations().len(), 1);
        assert_eq!(report.violations()[0].law, "dd_zero");
        assert_eq!(report.violations()[0].indices, vec![2]);
        assert!(homology(&complex, 0).is_err());
    }

    #[test]
    fn validate_accepts_single_group() {
        let a = ChainComplex::single(Arc::new(FGAbGroup::cyclic(6)));
        assert!(validate_chain(&a).is_clean());
        assert_eq!(
            homology(&a, 0).unwrap().iso_class(),
            IsoClass::of_orders(&[6], 0)
        );
    }

    #[test]
    fn homology_regression_times_two() {
        let a = times_two_complex();
        assert_eq!(homology(&a, 0).unwrap().iso_class(), IsoClass::free(1));
        assert_eq!(
            homology(&a, 1).unwrap().iso_class(),
            IsoClass::of_orders(&[2], 0)
        );
        assert!(homology(&a, 2).unwrap().is_trivial());
        assert!(matches!(
            homology(&a, 3),
            Err(Error::DegreeRange(_))
        ));
    }

    #[test]
    fn homology_of_identity_complex_vanishes() {
        let z = || Arc::new(FGAbGroup::free(1));
        let groups = vec![z(), z()];
        let d1 = FGAbHom::new(
            Arc::clone(&groups[1]),
            Arc::clone(&groups[0]),
            IntMatrix::identity(1),
        )
        .unwrap();
        let a = ChainComplex::new(groups, vec![d1]).unwrap();
        assert!(homology(&a, 0).unwrap().is_trivial());
        assert!(homology(&a, 1).unwrap().is_trivial());
    }

    #[test]
    fn homology_with_zero_boundaries_returns_the_groups() {
        let groups = vec![
            Arc::new(FGAbGroup::from_orders(&[4], 1)),
            Arc::new(FGAbGroup::from_orders(&[2, 6], 0)),
        ];
        let d1 = FGAbHom::zero(Arc::clone(&groups[1]), Arc::clone(&groups[0]));
        let a = ChainComplex::new(groups.clone(), vec![d1]).unwrap();
        for n in 0..=1 {
            assert_eq!(
                homology(&a, n).unwrap().iso_class(),
                groups[n].iso_class()
            );
        }
    }

    #[test]
    fn random_complexes_validate_and_are_deterministic() {
        for seed in 0..20 {
            let a = random_complex(4, 2, 6, seed);
            assert_eq!(a.top_degree(), 4);
            assert!(validate_chain(&a).is_clean(), "seed {seed}");
            let b = random_complex(4, 2, 6, seed);
            for n in 1..=4 {
                assert_eq!(a.boundary(n).matrix(), b.boundary(n).matrix());
            }
        }
        let single = random_complex(0, 2, 6, 7);
        assert_eq!(single.top_degree(), 0);
        assert!(validate_chain(&single).is_clean());
    }

    #[test]
    fn random_chain_maps_commute() {
        for seed in 0..10 {
            let b = random_complex(3, 2, 6, seed);
            // Construction already validates; failure would panic.
            let f = random_chain_map(&b, 2, 6, seed + 1000);
            assert!(validate_chain(f.source()).is_clean());
            assert_eq!(f.target().top_degree(), 3);
        }
    }

    #[test]
    fn chain_map_composition_and_identity() {
        let b = random_complex(3, 2, 4, 11);
        let f = random_chain_map(&b, 2, 4, 12);
        let id_b = ChainMap::identity(&b);
        let id_a = ChainMap::identity(f.source());
        assert!(f.then(&id_b).unwrap().equals(&f).unwrap());
        assert!(id_a.then(&f).unwrap().equals(&f).unwrap());
    }

    #[test]
    fn extend_to_pads_with_zero_groups() {
        let a = times_two_complex();
        let padded = a.extend_to(5);
        assert_eq!(padded.top_degree(), 5);
        assert!(validate_chain(&padded).is_clean());
        for n in 3..=5 {
            assert!(padded.group(n).is_trivial());
            assert_eq!(
                homology(&padded, n).unwrap().iso_class(),
                IsoClass::free(0)
            );
        }
        assert_eq!(
            homology(&padded, 1).unwrap().iso_class(),
            IsoClass::of_orders(&[2], 0)
        );
    }

    /// Splicing an identity two-term complex into adjacent degrees as a
    /// direct summand leaves every homology group unchanged.
    #[test]
    fn homology_unchanged_by_identity_insertion() {
        for seed in 0..5 {
            let a = random_complex(3, 2, 5, seed);
            let k = 2;
            let z = Arc::new(FGAbGroup::free(1));
            let sum_k = DirectSum::new(vec![Arc::clone(a.group(k)), Arc::clone(&z)]);
            let sum_km1 = DirectSum::new(vec![Arc::clone(a.group(k - 1)), Arc::clone(&z)]);
            let mut groups: Vec<Arc<FGAbGroup>> = a.groups().to_vec();
            groups[k] = Arc::clone(sum_k.group());
            groups[k - 1] = Arc::clone(sum_km1.group());
            let mut boundaries = Vec::new();
            for n in 1..=a.top_degree() {
                let d = a.boundary(n);
                let modified = if n == k {
                    // d ⊕ id on the inserted summand.
                    &sum_k
                        .projection(0)
                        .then(d)
                        .then(&sum_km1.inclusion(0))
                        + &sum_k.projection(1).then(&sum_km1.inclusion(1))
                } else if n == k + 1 {
                    d.then(&sum_k.inclusion(0))
                } else if n == k - 1 {
                    sum_km1.projection(0).then(d)
                } else {
                    d.clone()
                };
                boundaries.push(modified);
            }
            let spliced = ChainComplex::new(groups, boundaries).unwrap();
            assert!(validate_chain(&spliced).is_clean());
            for n in 0..=a.top_degree() {
                assert_eq!(
                    homology(&spliced, n).unwrap().iso_class(),
                    homology(&a, n).unwrap().iso_class(),
                    "seed {seed}, degree {n}"
                );
            }
        }
    }

    /// Homology invariant factors survive a simultaneous unimodular change
    /// of generators in one degree.
    #[test]
    fn homology_stable_under_presentation_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for seed in 0..5 {
            let a = random_complex(3, 2, 5, seed);
            let k = 1 + (seed as usize) % 3;
            let g = a.group(k).generators();
            let (w, w_inv) = random_unimodular(g, &mut rng, 2 * g + 1);
            let changed = Arc::new(
                FGAbGroup::new(g, &w * a.group(k).relations()).unwrap(),
            );
            let mut groups: Vec<Arc<FGAbGroup>> = a.groups().to_vec();
            groups[k] = Arc::clone(&changed);
            let mut boundaries = Vec::new();
            for n in 1..=a.top_degree() {
                let d = a.boundary(n);
                let modified = if n == k {
                    FGAbHom::new(
                        Arc::clone(&changed),
                        Arc::clone(&groups[k - 1]),
                        d.matrix() * &w_inv,
                    )
                    .unwrap()
                } else if n == k + 1 {
                    FGAbHom::new(
                        Arc::clone(&groups[k + 1]),
                        Arc::clone(&changed),
                        &w * d.matrix(),
                    )
                    .unwrap()
                } else {
                    d.clone()
                };
                boundaries.push(modified);
            }
            let moved = ChainComplex::new(groups, boundaries).unwrap();
            assert!(validate_chain(&moved).is_clean());
            for n in 0..=a.top_degree() {
                assert_eq!(
                    homology(&moved, n).unwrap().iso_class(),
                    homology(&a, n).unwrap().iso_class(),
                    "seed {seed}, degree {n}"
                );
            }
        }
    }
}
