//! Crossed complexes internal to abelian groups, with the functors to and
//! from chain complexes and both natural isomorphisms of the round trip.
//!
//! A crossed complex here is a based tower: a degree-0 group, a degree-1
//! group carrying source, target, and unit homs (a groupoid object), and
//! higher groups each carrying a base projection, a degenerate section, and
//! a boundary. The axioms X1–X5 checked by [`validate_crossed`] are exactly
//! what the two functors need: the chain-to-crossed construction always
//! satisfies them, and they make the inverse construction well-defined.

use crate::chain::{validate_chain, ChainComplex, ChainMap};
use crate::intlin::{kernel_of_hom, DirectSum, FGAbElement, FGAbGroup, FGAbHom};
use crate::{Error, Report, Result, Violation};
use std::sync::Arc;

/// Degree-1 data: a groupoid object internal to abelian groups.
#[derive(Clone, Debug)]
pub struct Level1 {
    pub group: Arc<FGAbGroup>,
    /// Source of a 1-arrow (degree 1 → degree 0).
    pub source_map: FGAbHom,
    /// Target of a 1-arrow (degree 1 → degree 0).
    pub target_map: FGAbHom,
    /// Unit arrow at a point (degree 0 → degree 1).
    pub unit_map: FGAbHom,
}

/// Data for degrees two and up.
#[derive(Clone, Debug)]
pub struct UpperLevel {
    pub group: Arc<FGAbGroup>,
    /// Base point of an element (degree n → degree 0).
    pub base_map: FGAbHom,
    /// Degenerate element over a point (degree 0 → degree n).
    pub section: FGAbHom,
    /// Boundary (degree n → degree n-1).
    pub boundary: FGAbHom,
}

#[derive(Clone, Debug)]
pub struct InternalCrossedComplex {
    c0: Arc<FGAbGroup>,
    one: Level1,
    upper: Vec<UpperLevel>,
}

impl InternalCrossedComplex {
    /// Checks the wiring (sources and targets of every structure hom); the
    /// axioms themselves are the job of [`validate_crossed`], so invalid
    /// complexes can be represented and reported on.
    pub fn new(c0: Arc<FGAbGroup>, one: Level1, upper: Vec<UpperLevel>) -> Result<Self> {
        let endpoint = |name: &str, hom: &FGAbHom, s: &Arc<FGAbGroup>, t: &Arc<FGAbGroup>| {
            if hom.source() != s || hom.target() != t {
                Err(Error::InvalidCrossed(format!(
                    "{name} does not match the declared groups"
                )))
            } else {
                Ok(())
            }
        };
        endpoint("source map", &one.source_map, &one.group, &c0)?;
        endpoint("target map", &one.target_map, &one.group, &c0)?;
        endpoint("unit map", &one.unit_map, &c0, &one.group)?;
        let mut below = &one.group;
        for (i, level) in upper.iter().enumerate() {
            let n = i + 2;
            endpoint(&format!("base map at degree {n}"), &level.base_map, &level.group, &c0)?;
            endpoint(&format!("section at degree {n}"), &level.section, &c0, &level.group)?;
            endpoint(
                &format!("boundary at degree {n}"),
                &level.boundary,
                &level.group,
                below,
            )?;
            below = &level.group;
        }
        Ok(InternalCrossedComplex { c0, one, upper })
    }

    pub fn top_degree(&self) -> usize {
        1 + self.upper.len()
    }

    pub fn c0(&self) -> &Arc<FGAbGroup> {
        &self.c0
    }

    pub fn group(&self, n: usize) -> &Arc<FGAbGroup> {
        match n {
            0 => &self.c0,
            1 => &self.one.group,
            _ => &self.upper[n - 2].group,
        }
    }

    pub fn source_map(&self) -> &FGAbHom {
        &self.one.source_map
    }

    pub fn target_map(&self) -> &FGAbHom {
        &self.one.target_map
    }

    pub fn unit_map(&self) -> &FGAbHom {
        &self.one.unit_map
    }

    /// Base projection at degree `n >= 2`.
    pub fn base_map(&self, n: usize) -> &FGAbHom {
        &self.upper[n - 2].base_map
    }

    /// Section at degree `n >= 2`.
    pub fn section(&self, n: usize) -> &FGAbHom {
        &self.upper[n - 2].section
    }

    /// Boundary at degree `n >= 2`.
    pub fn boundary(&self, n: usize) -> &FGAbHom {
        &self.upper[n - 2].boundary
    }

    /// Section with the degree-1 convention: the unit map stands in at
    /// degree 1.
    pub fn section_or_unit(&self, n: usize) -> &FGAbHom {
        if n == 1 {
            &self.one.unit_map
        } else {
            self.section(n)
        }
    }

    /// Base with the degree-1 convention: the source map stands in.
    pub fn base_or_source(&self, n: usize) -> &FGAbHom {
        if n == 1 {
            &self.one.source_map
        } else {
            self.base_map(n)
        }
    }
}

/// Axioms:
/// - X1: source∘unit = target∘unit = id (degree 0).
/// - X2: base∘section = id (each degree ≥ 2).
/// - X3: source∘boundary₂ = target∘boundary₂ = base₂.
/// - X4: base∘boundary = base (degree ≥ 3); boundary∘section = section
///        one degree down (degree ≥ 2, unit at degree 1).
/// - X5: boundary∘boundary = section∘base (degree ≥ 3): the double
///        boundary is degenerate over the base point.
///
/// Violation indices are `[degree]`, plus a trailing 0/1 when a law has a
/// source and a target variant.
pub fn validate_crossed(c: &InternalCrossedComplex) -> Report {
    let mut report = Report::new();
    let id0 = FGAbHom::identity(&c.c0);
    let mut check = |law: &str, indices: Vec<usize>, lhs: &FGAbHom, rhs: &FGAbHom| {
        if let Some(col) = lhs
            .disagreement(rhs)
            .expect("axiom sides share endpoints by wiring")
        {
            report.push(Violation {
                law: law.into(),
                indices,
                witness: Some(format!("generator {col}")),
            });
        }
    };

    check("X1", vec![1, 0], &c.one.unit_map.then(&c.one.source_map), &id0);
    check("X1", vec![1, 1], &c.one.unit_map.then(&c.one.target_map), &id0);
    for n in 2..=c.top_degree() {
        check("X2", vec![n], &c.section(n).then(c.base_map(n)), &id0);
    }
    if c.top_degree() >= 2 {
        check(
            "X3",
            vec![2, 0],
            &c.boundary(2).then(&c.one.source_map),
            c.base_map(2),
        );
        check(
            "X3",
            vec![2, 1],
            &c.boundary(2).then(&c.one.target_map),
            c.base_map(2),
        );
    }
    for n in 2..=c.top_degree() {
        if n >= 3 {
            check(
                "X4",
                vec![n, 0],
                &c.boundary(n).then(c.base_map(n - 1)),
                c.base_map(n),
            );
        }
        check(
            "X4",
            vec![n, 1],
            &c.section(n).then(c.boundary(n)),
            c.section_or_unit(n - 1),
        );
    }
    for n in 3..=c.top_degree() {
        check(
            "X5",
            vec![n],
            &c.boundary(n).then(c.boundary(n - 1)),
            &c.base_map(n).then(c.section_or_unit(n - 2)),
        );
    }
    report
}

fn require_valid_chain(a: &ChainComplex) -> Result<()> {
    match validate_chain(a).violations().first() {
        Some(v) => Err(Error::InvalidChain(v.to_string())),
        None => Ok(()),
    }
}

fn require_valid_crossed(c: &InternalCrossedComplex) -> Result<()> {
    match validate_crossed(c).violations().first() {
        Some(v) => Err(Error::InvalidCrossed(v.to_string())),
        None => Ok(()),
    }
}

/// Crossed complex associated to a chain complex: degree n carries
/// `A₀ ⊕ Aₙ`, the source forgets the second factor, the target adds the
/// boundary of the second factor, and units/sections embed the first.
pub fn from_chain(a: &ChainComplex) -> Result<InternalCrossedComplex> {
    require_valid_chain(a)?;
    let top = a.top_degree().max(1);
    let padded = a.extend_to(top);
    let c0 = Arc::clone(padded.group(0));
    let sums: Vec<DirectSum> = (1..=top)
        .map(|n| DirectSum::new(vec![Arc::clone(&c0), Arc::clone(padded.group(n))]))
        .collect();

    let sum1 = &sums[0];
    let one = Level1 {
        group: Arc::clone(sum1.group()),
        source_map: sum1.projection(0),
        target_map: &sum1.projection(0) + &sum1.projection(1).then(padded.boundary(1)),
        unit_map: sum1.inclusion(0),
    };
    let mut upper = Vec::new();
    for n in 2..=top {
        let sum_n = &sums[n - 1];
        let sum_prev = &sums[n - 2];
        upper.push(UpperLevel {
            group: Arc::clone(sum_n.group()),
            base_map: sum_n.projection(0),
            section: sum_n.inclusion(0),
            boundary: &sum_n.projection(0).then(&sum_prev.inclusion(0))
                + &sum_n
                    .projection(1)
                    .then(padded.boundary(n))
                    .then(&sum_prev.inclusion(1)),
        });
    }
    InternalCrossedComplex::new(c0, one, upper)
}

/// The chain complex together with the kernel inclusions used to present
/// it; `inclusions[n-1]` embeds degree `n` into the crossed complex.
fn chain_with_inclusions(
    c: &InternalCrossedComplex,
) -> Result<(ChainComplex, Vec<FGAbHom>)> {
    require_valid_crossed(c)?;
    let mut groups = vec![Arc::clone(&c.c0)];
    let mut inclusions: Vec<FGAbHom> = Vec::new();
    let mut boundaries = Vec::new();
    for n in 1..=c.top_degree() {
        if n == 1 {
            let (k, inc) = kernel_of_hom(c.source_map());
            boundaries.push(inc.then(c.target_map()));
            groups.push(k);
            inclusions.push(inc);
        } else {
            let (k, inc) = kernel_of_hom(c.base_map(n));
            let restricted = inc
                .then(c.boundary(n))
                .lift_through(&inclusions[n - 2])?;
            boundaries.push(restricted);
            groups.push(k);
            inclusions.push(inc);
        }
    }
    let chain = ChainComplex::new(groups, boundaries)?;
    Ok((chain, inclusions))
}

/// Chain complex associated to a crossed complex: degree 1 is the kernel of
/// the source map with the target map as boundary; higher degrees are the
/// kernels of the base maps with the boundaries restricted.
pub fn to_chain(c: &InternalCrossedComplex) -> Result<ChainComplex> {
    chain_with_inclusions(c).map(|(chain, _)| chain)
}

/// Groupoid composition in degree 1: defined when the target of `c` equals
/// the source of `d`, as `c + d - unit(target c)`.
pub fn compose1(
    cx: &InternalCrossedComplex,
    c: &FGAbElement,
    d: &FGAbElement,
) -> Result<FGAbElement> {
    for e in [c, d] {
        if e.group() != &cx.one.group {
            return Err(Error::Mismatch(
                "compose1 operands must live in the degree-1 group".into(),
            ));
        }
    }
    let tc = cx.one.target_map.apply(c);
    let sd = cx.one.source_map.apply(d);
    if tc != sd {
        return Err(Error::NotComposable(format!(
            "target {:?} differs from source {:?}",
            tc.canonicalize(),
            sd.canonicalize()
        )));
    }
    Ok(&(c + d) - &cx.one.unit_map.apply(&tc))
}

/// Action of a degree-1 arrow on a degree-`n` element over its source:
/// `m - section(source c) + section(target c)`.
pub fn act(
    cx: &InternalCrossedComplex,
    n: usize,
    m: &FGAbElement,
    c: &FGAbElement,
) -> Result<FGAbElement> {
    if !(2..=cx.top_degree()).contains(&n) {
        return Err(Error::IndexRange(format!(
            "action needs 2 <= degree <= {}, got {n}",
            cx.top_degree()
        )));
    }
    if m.group() != cx.group(n) {
        return Err(Error::Mismatch(format!(
            "operand does not live in the degree-{n} group"
        )));
    }
    if c.group() != &cx.one.group {
        return Err(Error::Mismatch(
            "acting element must live in the degree-1 group".into(),
        ));
    }
    let base = cx.base_map(n).apply(m);
    let sc = cx.one.source_map.apply(c);
    if base != sc {
        return Err(Error::NotComposable(format!(
            "base {:?} differs from the source {:?} of the acting element",
            base.canonicalize(),
            sc.canonicalize()
        )));
    }
    let section = cx.section(n);
    let out = &(m - &section.apply(&sc)) + &section.apply(&cx.one.target_map.apply(c));
    Ok(out)
}

/// Degree-wise map of crossed complexes commuting with every structure
/// hom. Tops must agree; construction validates all commuting squares.
#[derive(Clone, Debug)]
pub struct CrossedMap {
    source: InternalCrossedComplex,
    target: InternalCrossedComplex,
    components: Vec<FGAbHom>,
}

impl CrossedMap {
    pub fn new(
        source: InternalCrossedComplex,
        target: InternalCrossedComplex,
        components: Vec<FGAbHom>,
    ) -> Result<Self> {
        if source.top_degree() != target.top_degree() {
            return Err(Error::Mismatch(format!(
                "crossed map needs equal tops, got {} and {}",
                source.top_degree(),
                target.top_degree()
            )));
        }
        let top = source.top_degree();
        if components.len() != top + 1 {
            return Err(Error::Dimension(format!(
                "crossed map needs {} components, got {}",
                top + 1,
                components.len()
            )));
        }
        for (n, f) in components.iter().enumerate() {
            if f.source() != source.group(n) || f.target() != target.group(n) {
                return Err(Error::Mismatch(format!(
                    "component {n} does not match the graded groups"
                )));
            }
        }
        let square = |name: &str, lhs: &FGAbHom, rhs: &FGAbHom| -> Result<()> {
            if lhs.equals(rhs)? {
                Ok(())
            } else {
                Err(Error::Mismatch(format!(
                    "crossed map fails to commute with the {name}"
                )))
            }
        };
        square(
            "source map",
            &components[1].then(target.source_map()),
            &source.source_map().then(&components[0]),
        )?;
        square(
            "target map",
            &components[1].then(target.target_map()),
            &source.target_map().then(&components[0]),
        )?;
        square(
            "unit map",
            &components[0].then(target.unit_map()),
            &source.unit_map().then(&components[1]),
        )?;
        for n in 2..=top {
            square(
                &format!("base map at degree {n}"),
                &components[n].then(target.base_map(n)),
                &source.base_map(n).then(&components[0]),
            )?;
            square(
                &format!("section at degree {n}"),
                &components[0].then(target.section(n)),
                &source.section(n).then(&components[n]),
            )?;
            square(
                &format!("boundary at degree {n}"),
                &components[n].then(target.boundary(n)),
                &source.boundary(n).then(&components[n - 1]),
            )?;
        }
        Ok(CrossedMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(c: &InternalCrossedComplex) -> CrossedMap {
        let components = (0..=c.top_degree())
            .map(|n| FGAbHom::identity(c.group(n)))
            .collect();
        CrossedMap {
            source: c.clone(),
            target: c.clone(),
            components,
        }
    }

    pub fn source(&self) -> &InternalCrossedComplex {
        &self.source
    }

    pub fn target(&self) -> &InternalCrossedComplex {
        &self.target
    }

    pub fn component(&self, n: usize) -> &FGAbHom {
        &self.components[n]
    }

    pub fn then(&self, next: &CrossedMap) -> Result<CrossedMap> {
        let components = (0..self.components.len())
            .map(|n| self.components[n].then(next.component(n)))
            .collect();
        CrossedMap::new(self.source.clone(), next.target.clone(), components)
    }

    pub fn equals(&self, other: &CrossedMap) -> Result<bool> {
        for n in 0..self.components.len() {
            if !self.components[n].equals(other.component(n))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Mutually inverse chain maps between `a` (zero-padded) and the round
/// trip through crossed complexes. The forward map embeds a degree-n
/// element as the kernel element (0, a); the backward map projects back.
pub fn unit_iso(a: &ChainComplex) -> Result<(ChainMap, ChainMap)> {
    let b = from_chain(a)?;
    let (r, inclusions) = chain_with_inclusions(&b)?;
    let top = r.top_degree();
    let padded = a.extend_to(top);
    let mut fwd = vec![FGAbHom::identity(padded.group(0))];
    let mut bwd = vec![FGAbHom::identity(r.group(0))];
    for n in 1..=top {
        let sum = DirectSum::new(vec![
            Arc::clone(padded.group(0)),
            Arc::clone(padded.group(n)),
        ]);
        fwd.push(sum.inclusion(1).lift_through(&inclusions[n - 1])?);
        bwd.push(inclusions[n - 1].then(&sum.projection(1)));
    }
    let forward = ChainMap::new(padded.clone(), r.clone(), fwd)?;
    let backward = ChainMap::new(r, padded, bwd)?;
    Ok((forward, backward))
}

/// Mutually inverse crossed maps between the round trip through chain
/// complexes and `c` itself. Forward: (x, b) maps to section(x) + b.
/// Backward: c maps to (base c, c - section(base c)).
pub fn counit_iso(c: &InternalCrossedComplex) -> Result<(CrossedMap, CrossedMap)> {
    let (r, inclusions) = chain_with_inclusions(c)?;
    let b2 = from_chain(&r)?;
    let top = c.top_degree();
    let mut fwd = vec![FGAbHom::identity(&c.c0)];
    let mut bwd = vec![FGAbHom::identity(&c.c0)];
    for n in 1..=top {
        let sum = DirectSum::new(vec![Arc::clone(&c.c0), Arc::clone(r.group(n))]);
        let inc = &inclusions[n - 1];
        let section = c.section_or_unit(n);
        let base = c.base_or_source(n);
        fwd.push(&sum.projection(0).then(section) + &sum.projection(1).then(inc));
        let into_kernel = (&FGAbHom::identity(c.group(n)) - &base.then(section))
            .lift_through(inc)?;
        bwd.push(&base.then(&sum.inclusion(0)) + &into_kernel.then(&sum.inclusion(1)));
    }
    let forward = CrossedMap::new(b2.clone(), c.clone(), fwd)?;
    let backward = CrossedMap::new(c.clone(), b2, bwd)?;
    Ok((forward, backward))
}

/// The crossed map induced degree-wise by a chain map: f₀ ⊕ fₙ.
pub fn from_chain_map(f: &ChainMap) -> Result<CrossedMap> {
    let top = f
        .source()
        .top_degree()
        .max(f.target().top_degree())
        .max(1);
    let ps = f.source().extend_to(top);
    let pt = f.target().extend_to(top);
    let cs = from_chain(&ps)?;
    let ct = from_chain(&pt)?;
    let mut components = vec![f.component(0)];
    for n in 1..=top {
        let sum_s = DirectSum::new(vec![Arc::clone(ps.group(0)), Arc::clone(ps.group(n))]);
        let sum_t = DirectSum::new(vec![Arc::clone(pt.group(0)), Arc::clone(pt.group(n))]);
        components.push(
            &sum_s
                .projection(0)
                .then(&f.component(0))
                .then(&sum_t.inclusion(0))
                + &sum_s
                    .projection(1)
                    .then(&f.component(n))
                    .then(&sum_t.inclusion(1)),
        );
    }
    CrossedMap::new(cs, ct, components)
}

/// The chain map induced by a crossed map, by restricting to the kernels.
pub fn to_chain_map(f: &CrossedMap) -> Result<ChainMap> {
    let (rs, inc_s) = chain_with_inclusions(f.source())?;
    let (rt, inc_t) = chain_with_inclusions(f.target())?;
    let mut components = vec![f.component(0).clone()];
    for n in 1..=f.source().top_degree() {
        components.push(
            inc_s[n - 1]
                .then(f.component(n))
                .lift_through(&inc_t[n - 1])?,
        );
    }
    ChainMap::new(rs, rt, components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{homology, random_chain_map, random_complex};
    use crate::intlin::{IntMatrix, IsoClass};
    use num_traits::Signed;

    /// A₁ = A₀ = Z with boundary ×2, extended by zeros above.
    fn doubling_complex(top: usize) -> ChainComplex {
        let groups = vec![Arc::new(FGAbGroup::free(1)), Arc::new(FGAbGroup::free(1))];
        let d1 = FGAbHom::new(
            Arc::clone(&groups[1]),
            Arc::clone(&groups[0]),
            IntMatrix::from_rows(&[&[2]]),
        )
        .unwrap();
        ChainComplex::new(groups, vec![d1]).unwrap().extend_to(top)
    }

    #[test]
    fn from_chain_passes_validation() {
        for seed in 0..10 {
            let a = random_complex(3, 2, 6, seed);
            let c = from_chain(&a).unwrap();
            assert!(validate_crossed(&c).is_clean(), "seed {seed}");
        }
        let single = ChainComplex::single(Arc::new(FGAbGroup::cyclic(5)));
        let c = from_chain(&single).unwrap();
        assert_eq!(c.top_degree(), 1);
        assert!(validate_crossed(&c).is_clean());
    }

    #[test]
    fn from_chain_target_map_matrix() {
        let c = from_chain(&doubling_complex(1)).unwrap();
        assert_eq!(
            c.target_map().matrix(),
            &IntMatrix::from_rows(&[&[1, 2]])
        );
        assert_eq!(c.source_map().matrix(), &IntMatrix::from_rows(&[&[1, 0]]));
    }

    #[test]
    fn validation_catches_broken_unit() {
        let a = doubling_complex(1);
        let good = from_chain(&a).unwrap();
        let broken = InternalCrossedComplex::new(
            Arc::clone(good.c0()),
            Level1 {
                group: Arc::clone(good.group(1)),
                source_map: good.source_map().clone(),
                target_map: good.target_map().clone(),
                unit_map: FGAbHom::zero(Arc::clone(good.c0()), Arc::clone(good.group(1))),
            },
            Vec::new(),
        )
        .unwrap();
        let report = validate_crossed(&broken);
        assert!(!report.is_clean());
        assert!(report.violations().iter().all(|v| v.law == "X1"));
    }

    #[test]
    fn all_zero_complex_is_valid() {
        let z = ChainComplex::zero_complex(3);
        let c = from_chain(&z).unwrap();
        assert!(validate_crossed(&c).is_clean());
        for n in 0..=3 {
            assert!(c.group(n).is_trivial());
        }
    }

    #[test]
    fn to_chain_recovers_doubling() {
        let a = doubling_complex(1);
        let c = from_chain(&a).unwrap();
        let r = to_chain(&c).unwrap();
        assert_eq!(r.group(1).iso_class(), IsoClass::free(1));
        // The restricted boundary acts as ×2 on the kernel generator.
        let mat = r.boundary(1).matrix();
        assert_eq!(mat.rows(), 1);
        assert_eq!(mat.cols(), 1);
        assert_eq!(mat[(0, 0)].clone().abs(), 2u32.into());
        assert_eq!(
            homology(&r, 0).unwrap().iso_class(),
            IsoClass::of_orders(&[2], 0)
        );
    }

    #[test]
    fn to_chain_on_reduced_complex_keeps_groups() {
        // Reduced: degree 0 is trivial, so kernels are everything.
        let c0 = Arc::new(FGAbGroup::trivial());
        let c1 = Arc::new(FGAbGroup::from_orders(&[4], 1));
        let c2 = Arc::new(FGAbGroup::free(1));
        let to_zero = |g: &Arc<FGAbGroup>| FGAbHom::zero(Arc::clone(g), Arc::clone(&c0));
        let boundary = FGAbHom::new(
            Arc::clone(&c2),
            Arc::clone(&c1),
            IntMatrix::from_rows(&[&[2], &[0]]),
        )
        .unwrap();
        let c = InternalCrossedComplex::new(
            Arc::clone(&c0),
            Level1 {
                group: Arc::clone(&c1),
                source_map: to_zero(&c1),
                target_map: to_zero(&c1),
                unit_map: FGAbHom::zero(Arc::clone(&c0), Arc::clone(&c1)),
            },
            vec![UpperLevel {
                group: Arc::clone(&c2),
                base_map: to_zero(&c2),
                section: FGAbHom::zero(Arc::clone(&c0), Arc::clone(&c2)),
                boundary,
            }],
        )
        .unwrap();
        assert!(validate_crossed(&c).is_clean());
        let r = to_chain(&c).unwrap();
        assert_eq!(r.group(1).iso_class(), c1.iso_class());
        assert_eq!(r.group(2).iso_class(), c2.iso_class());
    }

    #[test]
    fn to_chain_kernel_of_projection() {
        let z = Arc::new(FGAbGroup::free(1));
        let a = ChainComplex::new(
            vec![Arc::clone(&z), Arc::clone(&z)],
            vec![FGAbHom::zero(Arc::clone(&z), Arc::clone(&z))],
        )
        .unwrap();
        let c = from_chain(&a).unwrap();
        // Degree-1 group is Z² with source = first projection.
        assert_eq!(c.group(1).generators(), 2);
        let r = to_chain(&c).unwrap();
        assert_eq!(r.group(1).iso_class(), IsoClass::free(1));

        // Padding a single group up to degree 1 adjoins nothing.
        let single = from_chain(&ChainComplex::single(z)).unwrap();
        assert_eq!(single.group(1).generators(), 1);
        assert!(to_chain(&single).unwrap().group(1).is_trivial());
    }

    #[test]
    fn compose1_formula_on_doubling() {
        let cx = from_chain(&doubling_complex(1)).unwrap();
        let g1 = cx.group(1);
        let c = g1.element_from_i64(&[1, 3]);
        let d = g1.element_from_i64(&[7, 4]);
        let got = compose1(&cx, &c, &d).unwrap();
        assert_eq!(got, g1.element_from_i64(&[1, 7]));

        let bad = g1.element_from_i64(&[2, 4]);
        assert!(matches!(
            compose1(&cx, &c, &bad),
            Err(Error::NotComposable(_))
        ));
    }

    #[test]
    fn compose1_unit_laws() {
        let cx = from_chain(&doubling_complex(1)).unwrap();
        let g1 = cx.group(1);
        let d = g1.element_from_i64(&[5, -2]);
        let unit_at_source = cx.unit_map().apply(&cx.source_map().apply(&d));
        assert_eq!(compose1(&cx, &unit_at_source, &d).unwrap(), d);
        let unit_at_target = cx.unit_map().apply(&cx.target_map().apply(&d));
        assert_eq!(compose1(&cx, &d, &unit_at_target).unwrap(), d);
    }

    #[test]
    fn act_formula_on_doubling() {
        // Boundary ×2 in degree 1; degree 2 present with zero boundary.
        let groups = vec![
            Arc::new(FGAbGroup::free(1)),
            Arc::new(FGAbGroup::free(1)),
            Arc::new(FGAbGroup::free(1)),
        ];
        let d1 = FGAbHom::new(
            Arc::clone(&groups[1]),
            Arc::clone(&groups[0]),
            IntMatrix::from_rows(&[&[2]]),
        )
        .unwrap();
        let d2 = FGAbHom::zero(Arc::clone(&groups[2]), Arc::clone(&groups[1]));
        let a = ChainComplex::new(groups, vec![d1, d2]).unwrap();
        let cx = from_chain(&a).unwrap();
        let m = cx.group(2).element_from_i64(&[1, 5]);
        let c = cx.group(1).element_from_i64(&[1, 3]);
        assert_eq!(
            act(&cx, 2, &m, &c).unwrap(),
            cx.group(2).element_from_i64(&[7, 5])
        );

        let mismatched = cx.group(1).element_from_i64(&[2, 3]);
        assert!(matches!(
            act(&cx, 2, &m, &mismatched),
            Err(Error::NotComposable(_))
        ));

        // Trivial action whenever source and target of c agree.
        let loop_c = cx.group(1).element_from_i64(&[1, 0]);
        assert_eq!(act(&cx, 2, &m, &loop_c).unwrap(), m);
    }

    #[test]
    fn unit_iso_inverts_on_small_complexes() {
        for seed in 0..8 {
            let a = random_complex(2, 2, 6, seed);
            let (fwd, bwd) = unit_iso(&a).unwrap();
            let id_a = ChainMap::identity(fwd.source());
            let id_r = ChainMap::identity(fwd.target());
            assert!(fwd.then(&bwd).unwrap().equals(&id_a).unwrap(), "seed {seed}");
            assert!(bwd.then(&fwd).unwrap().equals(&id_r).unwrap(), "seed {seed}");
            for n in 0..=a.top_degree() {
                assert_eq!(
                    fwd.target().group_or_zero(n).iso_class(),
                    a.group(n).iso_class(),
                    "seed {seed}, degree {n}"
                );
            }
        }
    }

    #[test]
    fn unit_iso_on_torsion_group() {
        let a = ChainComplex::single(Arc::new(FGAbGroup::cyclic(4))).extend_to(1);
        let (fwd, _) = unit_iso(&a).unwrap();
        assert_eq!(
            fwd.target().group(0).iso_class(),
            IsoClass::of_orders(&[4], 0)
        );
    }

    #[test]
    fn unit_iso_on_zero_complex() {
        let (fwd, bwd) = unit_iso(&ChainComplex::zero_complex(2)).unwrap();
        assert!(fwd.then(&bwd).unwrap().equals(&ChainMap::identity(fwd.source())).unwrap());
    }

    #[test]
    fn counit_iso_inverts_on_generated_complexes() {
        for seed in 0..8 {
            let a = random_complex(2, 2, 6, seed);
            let c = from_chain(&a).unwrap();
            let (fwd, bwd) = counit_iso(&c).unwrap();
            let id_c = CrossedMap::identity(&c);
            let id_b = CrossedMap::identity(fwd.source());
            assert!(bwd.then(&fwd).unwrap().equals(&id_c).unwrap(), "seed {seed}");
            assert!(fwd.then(&bwd).unwrap().equals(&id_b).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn counit_forward_is_identity_matrix_on_split_example() {
        // C₁ = Z² with source = target = first projection.
        let c0 = Arc::new(FGAbGroup::free(1));
        let c1 = Arc::new(FGAbGroup::free(2));
        let pr1 = FGAbHom::new(
            Arc::clone(&c1),
            Arc::clone(&c0),
            IntMatrix::from_rows(&[&[1, 0]]),
        )
        .unwrap();
        let unit = FGAbHom::new(
            Arc::clone(&c0),
            Arc::clone(&c1),
            IntMatrix::from_rows(&[&[1], &[0]]),
        )
        .unwrap();
        let c = InternalCrossedComplex::new(
            c0,
            Level1 {
                group: c1,
                source_map: pr1.clone(),
                target_map: pr1,
                unit_map: unit,
            },
            Vec::new(),
        )
        .unwrap();
        let (fwd, bwd) = counit_iso(&c).unwrap();
        assert_eq!(fwd.component(1).matrix(), &IntMatrix::identity(2));
        assert_eq!(bwd.component(1).matrix(), &IntMatrix::identity(2));
    }

    #[test]
    fn counit_on_reduced_complex_is_identity_like() {
        let c0 = Arc::new(FGAbGroup::trivial());
        let c1 = Arc::new(FGAbGroup::cyclic(6));
        let z01 = FGAbHom::zero(Arc::clone(&c0), Arc::clone(&c1));
        let z10 = FGAbHom::zero(Arc::clone(&c1), Arc::clone(&c0));
        let c = InternalCrossedComplex::new(
            c0,
            Level1 {
                group: c1,
                source_map: z10.clone(),
                target_map: z10,
                unit_map: z01,
            },
            Vec::new(),
        )
        .unwrap();
        let (fwd, bwd) = counit_iso(&c).unwrap();
        assert!(bwd.then(&fwd).unwrap().equals(&CrossedMap::identity(&c)).unwrap());
    }

    #[test]
    fn functors_preserve_morphisms_and_triangles_hold() {
        for seed in 0..4 {
            let b = random_complex(2, 2, 5, seed);
            let f = random_chain_map(&b, 2, 5, seed + 500);
            // Functor on morphisms: construction validates the squares.
            let cf = from_chain_map(&f).unwrap();
            let back = to_chain_map(&cf).unwrap();
            assert_eq!(back.source().top_degree(), cf.source().top_degree());

            // Triangle at a chain complex A: crossing the unit map and then
            // applying the counit of the crossed image is the identity.
            let a = f.source().clone();
            let (unit_fwd, _) = unit_iso(&a).unwrap();
            let beta_unit = from_chain_map(&unit_fwd).unwrap();
            let (counit_fwd, _) = counit_iso(&from_chain(&a.extend_to(
                unit_fwd.source().top_degree(),
            )).unwrap())
            .unwrap();
            let composite = beta_unit.then(&counit_fwd).unwrap();
            let id = CrossedMap::identity(composite.source());
            assert!(composite.equals(&id).unwrap(), "seed {seed}");

            // Triangle at a crossed complex C: the unit at αC followed by α
            // of the counit is the identity.
            let c = from_chain(&b).unwrap();
            let (r, _) = (to_chain(&c).unwrap(), ());
            let (unit_r_fwd, _) = unit_iso(&r).unwrap();
            let (counit_c_fwd, _) = counit_iso(&c).unwrap();
            let alpha_counit = to_chain_map(&counit_c_fwd).unwrap();
            let composite = unit_r_fwd.then(&alpha_counit).unwrap();
            assert!(
                composite
                    .equals(&ChainMap::identity(composite.source()))
                    .unwrap(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn crossed_module_specialization() {
        // Reduced with top 2: the chain image is just the boundary map.
        let c0 = Arc::new(FGAbGroup::trivial());
        let c1 = Arc::new(FGAbGroup::cyclic(8));
        let c2 = Arc::new(FGAbGroup::free(1));
        let boundary = FGAbHom::new(
            Arc::clone(&c2),
            Arc::clone(&c1),
            IntMatrix::from_rows(&[&[2]]),
        )
        .unwrap();
        let c = InternalCrossedComplex::new(
            Arc::clone(&c0),
            Level1 {
                group: Arc::clone(&c1),
                source_map: FGAbHom::zero(Arc::clone(&c1), Arc::clone(&c0)),
                target_map: FGAbHom::zero(Arc::clone(&c1), Arc::clone(&c0)),
                unit_map: FGAbHom::zero(Arc::clone(&c0), Arc::clone(&c1)),
            },
            vec![UpperLevel {
                group: Arc::clone(&c2),
                base_map: FGAbHom::zero(Arc::clone(&c2), Arc::clone(&c0)),
                section: FGAbHom::zero(Arc::clone(&c0), Arc::clone(&c2)),
                boundary,
            }],
        )
        .unwrap();
        let r = to_chain(&c).unwrap();
        assert!(r.group(0).is_trivial());
        assert_eq!(r.group(1).iso_class(), IsoClass::of_orders(&[8], 0));
        assert_eq!(r.group(2).iso_class(), IsoClass::free(1));
        assert_eq!(
            homology(&r, 1).unwrap().iso_class(),
            IsoClass::of_orders(&[2], 0)
        );
    }
}
