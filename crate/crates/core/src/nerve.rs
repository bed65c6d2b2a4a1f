//! Cellular chains of cubes, the nerve of a chain complex, and the
//! normalization that recovers the complex from its nerve.
//!
//! The n-cube is treated combinatorially: a cell is a word over `{0,1,*}`
//! whose stars mark the free directions. [`cube_complex`] builds its
//! cellular chain complex, and [`cellular_operator`] realizes faces,
//! degeneracies, and connections as chain maps between cube complexes —
//! every such map is validated against the boundary, which makes the cell
//! level the single source of truth for all index and sign conventions.
//!
//! [`nerve`] then presents, for each degree, the group of chain maps from
//! the cube into a coefficient complex as an explicit kernel, with the
//! bundle structure given by precomposition. [`normalize`] extracts a
//! chain complex from any lawful bundle, and [`roundtrip_nerve`] exhibits
//! the natural isomorphism between a complex and the normalization of its
//! nerve.

use crate::chain::{validate_chain, ChainComplex, ChainMap};
use crate::cubical::{validate_identities, BundleMap, CubicalBundle};
use crate::intlin::{kernel_of_hom, DirectSum, FGAbGroup, FGAbHom, IntMatrix};
use crate::{Error, Report, Result, Violation};
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;
use std::sync::Arc;

/// Largest cube degree supported anywhere in this module.
const MAX_CUBE: usize = 6;

/// Largest nerve truncation supported.
const MAX_NERVE: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CubeSymbol {
    Zero,
    One,
    Star,
}

impl CubeSymbol {
    fn as_char(self) -> char {
        match self {
            CubeSymbol::Zero => '0',
            CubeSymbol::One => '1',
            CubeSymbol::Star => '*',
        }
    }
}

/// A cell of the n-cube: a word over `{0,1,*}`. The stars are the free
/// directions, so the dimension is the star count. Cells order
/// lexicographically with `0 < 1 < *`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CubeCell(Vec<CubeSymbol>);

impl CubeCell {
    pub fn new(symbols: Vec<CubeSymbol>) -> CubeCell {
        CubeCell(symbols)
    }

    /// Parses a word like `"0*1"`; any other character is rejected.
    pub fn parse(word: &str) -> Result<CubeCell> {
        word.chars()
            .map(|ch| match ch {
                '0' => Ok(CubeSymbol::Zero),
                '1' => Ok(CubeSymbol::One),
                '*' => Ok(CubeSymbol::Star),
                other => Err(Error::IndexRange(format!(
                    "invalid cube cell symbol {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(CubeCell)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.0.iter().filter(|s| **s == CubeSymbol::Star).count()
    }

    pub fn symbols(&self) -> &[CubeSymbol] {
        &self.0
    }

    /// Copy with position `p` (0-based) replaced.
    fn with(&self, p: usize, s: CubeSymbol) -> CubeCell {
        let mut w = self.0.clone();
        w[p] = s;
        CubeCell(w)
    }

    /// Copy with `s` inserted at slot `i` (1-based).
    fn insert(&self, i: usize, s: CubeSymbol) -> CubeCell {
        let mut w = self.0.clone();
        w.insert(i - 1, s);
        CubeCell(w)
    }

    /// Copy with slot `i` (1-based) removed.
    fn remove(&self, i: usize) -> CubeCell {
        let mut w = self.0.clone();
        w.remove(i - 1);
        CubeCell(w)
    }

    /// Number of stars strictly before position `p` (0-based): the sign
    /// exponent of the boundary term at `p`.
    fn stars_before(&self, p: usize) -> usize {
        self.0[..p]
            .iter()
            .filter(|s| **s == CubeSymbol::Star)
            .count()
    }
}

impl fmt::Display for CubeCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// The cellular chain complex of the n-cube: degree-k basis the cells of
/// dimension k in lexicographic order, boundary differentiating each star
/// with alternating signs.
pub struct CubeComplex {
    n: usize,
    cells: Vec<Vec<CubeCell>>,
    chain: ChainComplex,
}

impl CubeComplex {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Cells of dimension `k`, lexicographically sorted.
    pub fn cells(&self, k: usize) -> &[CubeCell] {
        &self.cells[k]
    }

    pub fn cell_index(&self, cell: &CubeCell) -> Option<usize> {
        self.cells[cell.dimension()].binary_search(cell).ok()
    }

    pub fn chain(&self) -> &ChainComplex {
        &self.chain
    }
}

/// Builds the cellular chain complex of the n-cube.
///
/// The boundary of a cell differentiates each star in turn:
/// `∂c = Σ_p (−1)^{ρ_p(c)} (c[p↦1] − c[p↦0])` over star positions `p`,
/// where `ρ_p` counts stars before `p`.
pub fn cube_complex(n: usize) -> Result<CubeComplex> {
    if n > MAX_CUBE {
        return Err(Error::DegreeRange(format!(
            "cube degree {n} exceeds the supported maximum {MAX_CUBE}"
        )));
    }
    let mut cells: Vec<Vec<CubeCell>> = vec![Vec::new(); n + 1];
    let mut all = vec![CubeCell(Vec::new())];
    for _ in 0..n {
        all = all
            .iter()
            .flat_map(|c| {
                [CubeSymbol::Zero, CubeSymbol::One, CubeSymbol::Star]
                    .into_iter()
                    .map(|s| {
                        let mut w = c.0.clone();
                        w.push(s);
                        CubeCell(w)
                    })
            })
            .collect();
    }
    all.sort();
    for c in all {
        cells[c.dimension()].push(c);
    }

    let groups: Vec<Arc<FGAbGroup>> = cells
        .iter()
        .map(|layer| Arc::new(FGAbGroup::free(layer.len())))
        .collect();
    let mut boundaries = Vec::new();
    for k in 1..=n {
        let mut m = IntMatrix::zero(cells[k - 1].len(), cells[k].len());
        for (col, c) in cells[k].iter().enumerate() {
            for p in 0..c.len() {
                if c.0[p] != CubeSymbol::Star {
                    continue;
                }
                let sign: BigInt = if c.stars_before(p) % 2 == 0 {
                    BigInt::from(1)
                } else {
                    BigInt::from(-1)
                };
                let up = cells[k - 1]
                    .binary_search(&c.with(p, CubeSymbol::One))
                    .expect("face cell enumerated");
                let down = cells[k - 1]
                    .binary_search(&c.with(p, CubeSymbol::Zero))
                    .expect("face cell enumerated");
                m[(up, col)] = &m[(up, col)] + &sign;
                m[(down, col)] = &m[(down, col)] - &sign;
            }
        }
        boundaries.push(
            FGAbHom::new(Arc::clone(&groups[k]), Arc::clone(&groups[k - 1]), m)
                .expect("free groups accept any matrix"),
        );
    }
    let chain = ChainComplex::new(groups, boundaries)?;
    Ok(CubeComplex { n, cells, chain })
}

/// The cellular maps whose precompositions give the bundle structure of a
/// nerve. `n` is the bundle degree the operator belongs to:
/// - `Face { i, alpha }`: `Q(n−1) → Q(n)`, inserting `alpha` at slot `i`;
/// - `Degeneracy { i }`: `Q(n) → Q(n−1)`, dropping slot `i` (cells with a
///   star there die);
/// - `Connection { i }`: `Q(n+1) → Q(n)`, merging slots `(i, i+1)` by the
///   max rule `(0,0)↦0`, `(0,1),(1,0),(1,1)↦1`, `(0,*),(*,0)↦*`, and
///   `(1,*),(*,1),(*,*)` dying.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellularOperator {
    Face { i: usize, alpha: usize },
    Degeneracy { i: usize },
    Connection { i: usize },
}

fn merge_max(a: CubeSymbol, b: CubeSymbol) -> Option<CubeSymbol> {
    use CubeSymbol::*;
    match (a, b) {
        (Zero, Zero) => Some(Zero),
        (Zero, One) | (One, Zero) | (One, One) => Some(One),
        (Zero, Star) | (Star, Zero) => Some(Star),
        (One, Star) | (Star, One) | (Star, Star) => None,
    }
}

/// Chain map between cube complexes sending each source cell to the given
/// image cell (or to zero). Construction verifies the boundary condition.
fn cell_map(
    source: &CubeComplex,
    target: &CubeComplex,
    image: impl Fn(&CubeCell) -> Option<CubeCell>,
) -> Result<ChainMap> {
    let top = source.n.max(target.n);
    let mut components = Vec::new();
    for k in 0..=top {
        let src = source.chain.group_or_zero(k);
        let tgt = target.chain.group_or_zero(k);
        let mut m = IntMatrix::zero(tgt.generators(), src.generators());
        if k <= source.n && k <= target.n {
            for (col, c) in source.cells(k).iter().enumerate() {
                if let Some(d) = image(c) {
                    assert_eq!(d.dimension(), k, "cell image must preserve dimension");
                    let row = target.cell_index(&d).expect("image cell enumerated");
                    m[(row, col)] = BigInt::from(1);
                }
            }
        }
        components.push(FGAbHom::new(src, tgt, m).expect("free groups accept any matrix"));
    }
    ChainMap::new(source.chain.clone(), target.chain.clone(), components)
}

/// Builds the cellular chain map for a bundle operator at degree `n`.
/// The chain-map equation is checked exactly during construction, so any
/// index or sign slip in the tables above is rejected here.
pub fn cellular_operator(op: CellularOperator, n: usize) -> Result<ChainMap> {
    match op {
        CellularOperator::Face { i, alpha } => {
            if n == 0 || n > MAX_CUBE || !(1..=n).contains(&i) || alpha > 1 {
                return Err(Error::IndexRange(format!(
                    "face ({i},{alpha}) at degree {n} out of range"
                )));
            }
            let symbol = if alpha == 0 {
                CubeSymbol::Zero
            } else {
                CubeSymbol::One
            };
            let source = cube_complex(n - 1)?;
            let target = cube_complex(n)?;
            cell_map(&source, &target, |c| Some(c.insert(i, symbol)))
        }
        CellularOperator::Degeneracy { i } => {
            if n == 0 || n > MAX_CUBE || !(1..=n).contains(&i) {
                return Err(Error::IndexRange(format!(
                    "degeneracy {i} at degree {n} out of range"
                )));
            }
            let source = cube_complex(n)?;
            let target = cube_complex(n - 1)?;
            cell_map(&source, &target, |c| {
                if c.0[i - 1] == CubeSymbol::Star {
                    None
                } else {
                    Some(c.remove(i))
                }
            })
        }
        CellularOperator::Connection { i } => {
            if n == 0 || n + 1 > MAX_CUBE || !(1..=n).contains(&i) {
                return Err(Error::IndexRange(format!(
                    "connection {i} at degree {n} out of range"
                )));
            }
            let source = cube_complex(n + 1)?;
            let target = cube_complex(n)?;
            cell_map(&source, &target, |c| {
                merge_max(c.0[i - 1], c.0[i]).map(|s| c.remove(i + 1).with(i - 1, s))
            })
        }
    }
}

/// Checks the whole identity table C1–C6 at the cell level, as equalities
/// of chain maps between cube complexes, for bundle degrees up to `top`.
/// This is the convention oracle: the bundle-level table of
/// `validate_identities` is the contravariant image of these equalities.
pub fn cellular_identity_table(top: usize) -> Result<Report> {
    let mut report = Report::new();
    let mut check = |law: &str, indices: Vec<usize>, lhs: &ChainMap, rhs: &ChainMap| -> Result<()> {
        if !lhs.equals(rhs)? {
            report.push(Violation {
                law: law.into(),
                indices,
                witness: None,
            });
        }
        Ok(())
    };
    let face = |i, alpha, n| cellular_operator(CellularOperator::Face { i, alpha }, n);
    let deg = |i, n| cellular_operator(CellularOperator::Degeneracy { i }, n);
    let conn = |i, n| cellular_operator(CellularOperator::Connection { i }, n);

    // Mirrors of the bundle table under precomposition: each bundle
    // composite L∘M corresponds to the cellular composite of M's map
    // followed by L's map read in the reverse order.
    for n in 2..=top {
        for j in 2..=n {
            for i in 1..j {
                for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    check(
                        "cell.C1",
                        vec![n, i, j, a, b],
                        &face(i, a, n - 1)?.then(&face(j, b, n)?)?,
                        &face(j - 1, b, n - 1)?.then(&face(i, a, n)?)?,
                    )?;
                }
            }
        }
    }
    for n in 1..=top {
        for j in 1..=n {
            for i in 1..=n {
                for a in 0..2 {
                    let lhs = face(i, a, n)?.then(&deg(j, n)?)?;
                    let rhs = match i.cmp(&j) {
                        std::cmp::Ordering::Less => deg(j - 1, n - 1)?.then(&face(i, a, n - 1)?)?,
                        std::cmp::Ordering::Equal => {
                            ChainMap::identity(cube_complex(n - 1)?.chain())
                        }
                        std::cmp::Ordering::Greater => {
                            deg(j, n - 1)?.then(&face(i - 1, a, n - 1)?)?
                        }
                    };
                    check("cell.C2", vec![n, i, j, a], &lhs, &rhs)?;
                }
            }
        }
    }
    for m in 0..top.saturating_sub(1) {
        for j in 1..=(m + 1) {
            for i in 1..=j {
                check(
                    "cell.C3",
                    vec![m, i, j],
                    &deg(i, m + 2)?.then(&deg(j, m + 1)?)?,
                    &deg(j + 1, m + 2)?.then(&deg(i, m + 1)?)?,
                )?;
            }
        }
    }
    for m in 1..top.saturating_sub(1) {
        for j in 1..=m {
            for i in 1..=j {
                check(
                    "cell.C4",
                    vec![m, i, j],
                    &conn(i, m + 1)?.then(&conn(j, m)?)?,
                    &conn(j + 1, m + 1)?.then(&conn(i, m)?)?,
                )?;
            }
        }
    }
    for m in 0..top.saturating_sub(1) {
        for j in 1..=(m + 1) {
            for i in 1..=(m + 1) {
                let lhs = conn(i, m + 1)?.then(&deg(j, m + 1)?)?;
                let rhs = match i.cmp(&j) {
                    std::cmp::Ordering::Less => deg(j + 1, m + 2)?.then(&conn(i, m)?)?,
                    std::cmp::Ordering::Equal => deg(i + 1, m + 2)?.then(&deg(i, m + 1)?)?,
                    std::cmp::Ordering::Greater => deg(j, m + 2)?.then(&conn(i - 1, m)?)?,
                };
                check("cell.C5", vec![m, i, j], &lhs, &rhs)?;
            }
        }
    }
    for m in 1..top {
        for j in 1..=m {
            for i in 1..=(m + 1) {
                for a in 0..2 {
                    let lhs = face(i, a, m + 1)?.then(&conn(j, m)?)?;
                    let rhs = if i < j {
                        conn(j - 1, m - 1)?.then(&face(i, a, m)?)?
                    } else if i == j || i == j + 1 {
                        if a == 0 {
                            ChainMap::identity(cube_complex(m)?.chain())
                        } else {
                            deg(j, m)?.then(&face(j, 1, m)?)?
                        }
                    } else {
                        conn(j, m - 1)?.then(&face(i - 1, a, m)?)?
                    };
                    check("cell.C6", vec![m, i, j, a], &lhs, &rhs)?;
                }
            }
        }
    }
    Ok(report)
}

/// One degree of a nerve: the group of chain maps `Q(n) → A`, presented
/// as the kernel of the chain condition inside the direct sum of one copy
/// of `A_{dim c}` per cell `c`, ordered by dimension then lexicographically.
pub struct NerveLevel {
    cube: CubeComplex,
    ambient: DirectSum,
    dim_offsets: Vec<usize>,
    group: Arc<FGAbGroup>,
    inclusion: FGAbHom,
}

impl NerveLevel {
    /// Summand index of a cell in the ambient direct sum.
    pub fn cell_slot(&self, cell: &CubeCell) -> usize {
        self.dim_offsets[cell.dimension()]
            + self.cube.cell_index(cell).expect("cell of this cube")
    }

    pub fn cube(&self) -> &CubeComplex {
        &self.cube
    }

    pub fn ambient(&self) -> &DirectSum {
        &self.ambient
    }

    pub fn group(&self) -> &Arc<FGAbGroup> {
        &self.group
    }

    pub fn inclusion(&self) -> &FGAbHom {
        &self.inclusion
    }

    /// Evaluation of chain maps at a cell: the hom picking out the value
    /// in `A_{dim cell}`.
    pub fn value_at(&self, cell: &CubeCell) -> FGAbHom {
        self.inclusion.then(&self.ambient.projection(self.cell_slot(cell)))
    }
}

fn require_valid_chain(a: &ChainComplex) -> Result<()> {
    match validate_chain(a).violations().first() {
        Some(v) => Err(Error::InvalidChain(v.to_string())),
        None => Ok(()),
    }
}

fn nerve_level(a: &ChainComplex, n: usize) -> Result<NerveLevel> {
    let cube = cube_complex(n)?;
    let mut summands = Vec::new();
    let mut dim_offsets = Vec::new();
    for k in 0..=n {
        dim_offsets.push(summands.len());
        for _ in cube.cells(k) {
            summands.push(a.group_or_zero(k));
        }
    }
    let ambient = DirectSum::new(summands);
    let slot = |cell: &CubeCell| {
        dim_offsets[cell.dimension()] + cube.cell_index(cell).expect("cell of this cube")
    };

    let mut constrained = Vec::new();
    for k in 1..=n {
        for _ in cube.cells(k) {
            constrained.push(a.group_or_zero(k - 1));
        }
    }
    let targets = DirectSum::new(constrained);
    let mut constraint = FGAbHom::zero(
        Arc::clone(ambient.group()),
        Arc::clone(targets.group()),
    );
    let mut out_slot = 0;
    for k in 1..=n {
        for c in cube.cells(k) {
            let mut violation = ambient.projection(slot(c)).then(&a.boundary_or_zero(k));
            for p in 0..c.len() {
                if c.0[p] != CubeSymbol::Star {
                    continue;
                }
                let diff = &ambient.projection(slot(&c.with(p, CubeSymbol::One)))
                    - &ambient.projection(slot(&c.with(p, CubeSymbol::Zero)));
                violation = if c.stars_before(p) % 2 == 0 {
                    &violation - &diff
                } else {
                    &violation + &diff
                };
            }
            constraint = &constraint + &violation.then(&targets.inclusion(out_slot));
            out_slot += 1;
        }
    }
    let (group, inclusion) = kernel_of_hom(&constraint);
    Ok(NerveLevel {
        cube,
        ambient,
        dim_offsets,
        group,
        inclusion,
    })
}

/// The nerve of a chain complex, truncated at `top`: an explicit cubical
/// bundle whose degree-n group is the chain maps `Q(n) → A` and whose
/// structure is precomposition with the cellular operators.
pub struct NerveBundle {
    bundle: CubicalBundle,
    levels: Vec<NerveLevel>,
    coefficients: ChainComplex,
}

impl NerveBundle {
    pub fn bundle(&self) -> &CubicalBundle {
        &self.bundle
    }

    pub fn level(&self, n: usize) -> &NerveLevel {
        &self.levels[n]
    }

    pub fn top_degree(&self) -> usize {
        self.levels.len() - 1
    }

    /// The (zero-padded) coefficient complex the nerve was built from.
    pub fn coefficients(&self) -> &ChainComplex {
        &self.coefficients
    }
}

/// The hom `K_from → K_to` induced by precomposition with a cellular map
/// `φ : Q(to) → Q(from)`.
fn induced_hom(levels: &[NerveLevel], from: usize, to: usize, cellular: &ChainMap) -> Result<FGAbHom> {
    let lf = &levels[from];
    let lt = &levels[to];
    let rows = lt.ambient.group().generators();
    let cols = lf.ambient.group().generators();
    let mut m = IntMatrix::zero(rows, cols);
    for k in 0..=from.min(to) {
        let phi = cellular.component(k);
        for (d_idx, d) in lt.cube.cells(k).iter().enumerate() {
            let row0 = lt.ambient.offset(lt.cell_slot(d));
            for (c_idx, c) in lf.cube.cells(k).iter().enumerate() {
                let entry = &phi.matrix()[(c_idx, d_idx)];
                if entry.is_zero() {
                    continue;
                }
                let col0 = lf.ambient.offset(lf.cell_slot(c));
                let gens = lf.ambient.summand(lf.cell_slot(c)).generators();
                for g in 0..gens {
                    m[(row0 + g, col0 + g)] = entry.clone();
                }
            }
        }
    }
    let ambient_map = FGAbHom::new(
        Arc::clone(lf.ambient.group()),
        Arc::clone(lt.ambient.group()),
        m,
    )?;
    lf.inclusion.then(&ambient_map).lift_through(&lt.inclusion)
}

/// Builds the nerve bundle of `a`, truncated at `top ≤ 4`.
pub fn nerve(a: &ChainComplex, top: usize) -> Result<NerveBundle> {
    if top > MAX_NERVE {
        return Err(Error::DegreeRange(format!(
            "nerve truncation {top} exceeds the supported maximum {MAX_NERVE}"
        )));
    }
    require_valid_chain(a)?;
    let padded = a.extend_to(top.max(a.top_degree()));
    let levels: Vec<NerveLevel> = (0..=top)
        .map(|n| nerve_level(&padded, n))
        .collect::<Result<_>>()?;
    let groups: Vec<Arc<FGAbGroup>> = levels.iter().map(|l| Arc::clone(&l.group)).collect();

    let mut faces = Vec::new();
    let mut degeneracies = Vec::new();
    for n in 1..=top {
        let mut face_row = Vec::new();
        let mut deg_row = Vec::new();
        for i in 1..=n {
            let mut pair = Vec::new();
            for alpha in 0..2 {
                let cellular = cellular_operator(CellularOperator::Face { i, alpha }, n)?;
                pair.push(induced_hom(&levels, n, n - 1, &cellular)?);
            }
            let [lo, hi]: [FGAbHom; 2] = pair.try_into().expect("two orientations");
            face_row.push([lo, hi]);
            let cellular = cellular_operator(CellularOperator::Degeneracy { i }, n)?;
            deg_row.push(induced_hom(&levels, n - 1, n, &cellular)?);
        }
        faces.push(face_row);
        degeneracies.push(deg_row);
    }
    let mut connections = Vec::new();
    for n in 1..top {
        let mut row = Vec::new();
        for i in 1..=n {
            let cellular = cellular_operator(CellularOperator::Connection { i }, n)?;
            row.push(induced_hom(&levels, n, n + 1, &cellular)?);
        }
        connections.push(row);
    }
    let bundle = CubicalBundle::new(groups, faces, degeneracies, connections)
        .map_err(|e| Error::InvalidBundle(format!("nerve wiring: {e}")))?;
    Ok(NerveBundle {
        bundle,
        levels,
        coefficients: padded,
    })
}

/// The bundle morphism induced by a chain map between the coefficient
/// complexes of two nerves of the same truncation: post-composition with
/// `f` on every cell value. Construction validates commuting with all
/// structure.
pub fn nerve_map(source: &NerveBundle, target: &NerveBundle, f: &ChainMap) -> Result<BundleMap> {
    if source.top_degree() != target.top_degree() {
        return Err(Error::Mismatch(
            "nerve map needs equal truncations".into(),
        ));
    }
    let top = source.top_degree();
    for k in 0..=top {
        if f.source().group_or_zero(k) != source.coefficients().group_or_zero(k)
            || f.target().group_or_zero(k) != target.coefficients().group_or_zero(k)
        {
            return Err(Error::Mismatch(format!(
                "chain map endpoints do not match the nerve coefficients at degree {k}"
            )));
        }
    }
    let mut components = Vec::new();
    for n in 0..=top {
        let ls = source.level(n);
        let lt = target.level(n);
        let rows = lt.ambient.group().generators();
        let cols = ls.ambient.group().generators();
        let mut m = IntMatrix::zero(rows, cols);
        for k in 0..=n {
            let fk = f.component(k);
            for (idx, c) in ls.cube.cells(k).iter().enumerate() {
                let _ = idx;
                let col0 = ls.ambient.offset(ls.cell_slot(c));
                let row0 = lt.ambient.offset(lt.cell_slot(c));
                for r in 0..fk.matrix().rows() {
                    for s in 0..fk.matrix().cols() {
                        let e = &fk.matrix()[(r, s)];
                        if !e.is_zero() {
                            m[(row0 + r, col0 + s)] = e.clone();
                        }
                    }
                }
            }
        }
        let ambient_map = FGAbHom::new(
            Arc::clone(ls.ambient.group()),
            Arc::clone(lt.ambient.group()),
            m,
        )?;
        components.push(ls.inclusion.then(&ambient_map).lift_through(&lt.inclusion)?);
    }
    BundleMap::new(source.bundle.clone(), target.bundle.clone(), components)
}

fn require_lawful(k: &CubicalBundle) -> Result<()> {
    match validate_identities(k).violations().first() {
        Some(v) => Err(Error::InvalidBundle(v.to_string())),
        None => Ok(()),
    }
}

/// Normalization with the per-degree inclusions into the bundle groups;
/// `inclusions[n]` embeds degree `n` (the identity at degree 0).
pub fn normalize_with_inclusions(k: &CubicalBundle) -> Result<(ChainComplex, Vec<FGAbHom>)> {
    require_lawful(k)?;
    let top = k.top_degree();
    let mut groups = vec![Arc::clone(k.group(0))];
    let mut inclusions = vec![FGAbHom::identity(k.group(0))];
    let mut boundaries = Vec::new();
    for n in 1..=top {
        // Joint kernel of every face except (1,1).
        let mut kept = Vec::new();
        for i in 1..=n {
            for alpha in 0..2 {
                if (i, alpha) != (1, 1) {
                    kept.push(k.face(n, i, alpha));
                }
            }
        }
        let targets = DirectSum::new(vec![Arc::clone(k.group(n - 1)); kept.len()]);
        let mut stack = FGAbHom::zero(Arc::clone(k.group(n)), Arc::clone(targets.group()));
        for (slot, f) in kept.into_iter().enumerate() {
            stack = &stack + &f.then(&targets.inclusion(slot));
        }
        let (g, inc) = kernel_of_hom(&stack);
        let d = inc.then(k.face(n, 1, 1)).lift_through(&inclusions[n - 1])?;
        groups.push(g);
        boundaries.push(d);
        inclusions.push(inc);
    }
    let chain = ChainComplex::new(groups, boundaries)?;
    if let Some(v) = validate_chain(&chain).violations().first() {
        return Err(Error::InvalidBundle(format!(
            "normalization produced an invalid complex: {v}"
        )));
    }
    Ok((chain, inclusions))
}

/// Extracts a chain complex from a lawful bundle: degree n is the joint
/// kernel of all faces except (1,1), and the boundary is the remaining
/// face restricted.
pub fn normalize(k: &CubicalBundle) -> Result<ChainComplex> {
    normalize_with_inclusions(k).map(|(chain, _)| chain)
}

/// The chain map between normalizations induced by a bundle morphism.
pub fn normalize_map(f: &BundleMap) -> Result<ChainMap> {
    let (ns, inc_s) = normalize_with_inclusions(f.source())?;
    let (nt, inc_t) = normalize_with_inclusions(f.target())?;
    let mut components = Vec::new();
    for n in 0..=f.source().top_degree() {
        components.push(
            inc_s[n]
                .then(f.component(n))
                .lift_through(&inc_t[n])?,
        );
    }
    ChainMap::new(ns, nt, components)
}

/// Natural isomorphism between a complex and the normalization of its
/// nerve, together with the report of the exactness checks.
pub struct NerveRoundTrip {
    /// From the (zero-padded) input complex into the normalization; sends
    /// `a` to the chain map supported on the all-star cell (value `a`)
    /// and its (1,1)-face (value `δa`).
    pub forward: ChainMap,
    /// Value-at-the-top-cell projection back.
    pub backward: ChainMap,
    pub report: Report,
}

/// Builds the round-trip isomorphism `A ≅ normalize(nerve(A, top))` and
/// verifies, exactly: mutual inverse in every degree (`roundtrip.iso`) and
/// naturality against deterministic pseudo-random chain maps into `A`
/// (`roundtrip.naturality`). Boundary compatibility of both directions at
/// sign +1 is enforced by chain-map construction.
pub fn roundtrip_nerve(a: &ChainComplex, top: usize) -> Result<NerveRoundTrip> {
    if top < a.top_degree() {
        return Err(Error::DegreeRange(format!(
            "truncation {top} is below the top degree {} of the complex",
            a.top_degree()
        )));
    }
    let nerve_a = nerve(a, top)?;
    let (norm, norm_incs) = normalize_with_inclusions(nerve_a.bundle())?;
    let padded = nerve_a.coefficients().clone();
    let (forward, backward) = roundtrip_components(&nerve_a, &norm, &norm_incs)?;

    let mut report = Report::new();
    for n in 0..=top {
        let there_back = forward.component(n).then(&backward.component(n));
        let back_there = backward.component(n).then(&forward.component(n));
        let ok = there_back.equals(&FGAbHom::identity(padded.group(n)))?
            && back_there.equals(&FGAbHom::identity(norm.group(n)))?;
        if !ok {
            report.push(Violation {
                law: "roundtrip.iso".into(),
                indices: vec![n],
                witness: None,
            });
        }
    }

    for seed in [101u64, 202u64] {
        let f = crate::chain::random_chain_map(&padded, 1, 4, seed);
        let nerve_s = nerve(f.source(), top)?;
        let induced = nerve_map(&nerve_s, &nerve_a, &f)?;
        let (norm_s, norm_s_incs) = normalize_with_inclusions(nerve_s.bundle())?;
        let (forward_s, _) = roundtrip_components(&nerve_s, &norm_s, &norm_s_incs)?;
        let through_norm = forward_s.then(&normalize_map(&induced)?)?;
        let through_a = f.then(&forward)?;
        for n in 0..=top {
            if !through_norm.component(n).equals(&through_a.component(n))? {
                report.push(Violation {
                    law: "roundtrip.naturality".into(),
                    indices: vec![n],
                    witness: Some(format!("seed {seed}")),
                });
            }
        }
    }

    Ok(NerveRoundTrip {
        forward,
        backward,
        report,
    })
}

fn roundtrip_components(
    nv: &NerveBundle,
    norm: &ChainComplex,
    norm_incs: &[FGAbHom],
) -> Result<(ChainMap, ChainMap)> {
    let padded = nv.coefficients().clone();
    let top = nv.top_degree();
    let mut fwd = Vec::new();
    let mut bwd = Vec::new();
    for n in 0..=top {
        let level = nv.level(n);
        let star_cell = CubeCell(vec![CubeSymbol::Star; n]);
        let star_slot = level.cell_slot(&star_cell);
        let mut into_ambient = level.ambient.inclusion(star_slot);
        if n >= 1 {
            let face_cell = {
                let mut w = vec![CubeSymbol::Star; n];
                w[0] = CubeSymbol::One;
                CubeCell(w)
            };
            let face_slot = level.cell_slot(&face_cell);
            into_ambient = &into_ambient
                + &padded.boundary(n).then(&level.ambient.inclusion(face_slot));
        }
        let eta = into_ambient
            .lift_through(&level.inclusion)?
            .lift_through(&norm_incs[n])?;
        fwd.push(eta);
        bwd.push(
            norm_incs[n]
                .then(&level.inclusion)
                .then(&level.ambient.projection(star_slot)),
        );
    }
    let forward = ChainMap::new(padded.clone(), norm.clone(), fwd)?;
    let backward = ChainMap::new(norm.clone(), padded, bwd)?;
    Ok((forward, backward))
}
