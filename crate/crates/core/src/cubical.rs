//! Cubical abelian groups with connections, and the groupoid compositions
//! they carry in every direction.
//!
//! A bundle is a truncated cubical object in abelian groups: groups
//! `K₀..K_N` with face, degeneracy, and connection homomorphisms subject to
//! the identity table C1–C6 of [`validate_identities`]. On any bundle
//! satisfying the table, each direction `i` acquires a composition
//! `g ∘ᵢ h = g − tᵢ(g) + h` with `sᵢ = εᵢ∂⁰ᵢ` and `tᵢ = εᵢ∂¹ᵢ`; the law
//! checkers verify groupoid structure, interchange, and the transport law
//! as exact homomorphism equalities on subgroups of composable tuples —
//! never by sampling.

use crate::intlin::{kernel_of_hom, DirectSum, FGAbElement, FGAbGroup, FGAbHom};
use crate::{Error, Report, Result, Violation};
use std::cmp::Ordering;
use std::sync::Arc;

/// Truncated cubical abelian group with connections.
///
/// Index conventions (all 1-based, matching the identity table):
/// - `face(n, i, α)`: `∂ᵅᵢ : Kₙ → Kₙ₋₁` for `1 ≤ i ≤ n`, `α ∈ {0, 1}`;
/// - `degeneracy(n, i)`: `εᵢ : Kₙ₋₁ → Kₙ` for `1 ≤ i ≤ n`;
/// - `connection(n, i)`: `Γᵢ : Kₙ → Kₙ₊₁` for `1 ≤ i ≤ n ≤ N−1`.
#[derive(Clone, Debug)]
pub struct CubicalBundle {
    groups: Vec<Arc<FGAbGroup>>,
    /// `faces[n-1][i-1][α]` is `∂ᵅᵢ` out of degree `n`.
    faces: Vec<Vec<[FGAbHom; 2]>>,
    /// `degeneracies[n-1][i-1]` is `εᵢ` into degree `n`.
    degeneracies: Vec<Vec<FGAbHom>>,
    /// `connections[n-1][i-1]` is `Γᵢ` out of degree `n`.
    connections: Vec<Vec<FGAbHom>>,
}

impl CubicalBundle {
    /// Checks arities and endpoints of every structural hom; the identity
    /// table itself is the job of [`validate_identities`], so broken
    /// bundles can be represented and reported on.
    pub fn new(
        groups: Vec<Arc<FGAbGroup>>,
        faces: Vec<Vec<[FGAbHom; 2]>>,
        degeneracies: Vec<Vec<FGAbHom>>,
        connections: Vec<Vec<FGAbHom>>,
    ) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::InvalidBundle("need at least degree 0".into()));
        }
        let top = groups.len() - 1;
        if faces.len() != top || degeneracies.len() != top {
            return Err(Error::InvalidBundle(format!(
                "need face and degeneracy families for degrees 1..={top}"
            )));
        }
        if connections.len() != top.saturating_sub(1) {
            return Err(Error::InvalidBundle(format!(
                "need connection families for degrees 1..={}",
                top.saturating_sub(1)
            )));
        }
        for n in 1..=top {
            if faces[n - 1].len() != n || degeneracies[n - 1].len() != n {
                return Err(Error::InvalidBundle(format!(
                    "degree {n} needs {n} face pairs and {n} degeneracies"
                )));
            }
            for (i, pair) in faces[n - 1].iter().enumerate() {
                for (alpha, f) in pair.iter().enumerate() {
                    if f.source() != &groups[n] || f.target() != &groups[n - 1] {
                        return Err(Error::InvalidBundle(format!(
                            "face {}^{alpha} at degree {n} has wrong endpoints",
                            i + 1
                        )));
                    }
                }
            }
            for (i, e) in degeneracies[n - 1].iter().enumerate() {
                if e.source() != &groups[n - 1] || e.target() != &groups[n] {
                    return Err(Error::InvalidBundle(format!(
                        "degeneracy {} into degree {n} has wrong endpoints",
                        i + 1
                    )));
                }
            }
        }
        for n in 1..top {
            if connections[n - 1].len() != n {
                return Err(Error::InvalidBundle(format!(
                    "degree {n} needs {n} connections"
                )));
            }
            for (i, c) in connections[n - 1].iter().enumerate() {
                if c.source() != &groups[n] || c.target() != &groups[n + 1] {
                    return Err(Error::InvalidBundle(format!(
                        "connection {} at degree {n} has wrong endpoints",
                        i + 1
                    )));
                }
            }
        }
        Ok(CubicalBundle {
            groups,
            faces,
            degeneracies,
            connections,
        })
    }

    pub fn top_degree(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn group(&self, n: usize) -> &Arc<FGAbGroup> {
        &self.groups[n]
    }

    /// `∂ᵅᵢ : Kₙ → Kₙ₋₁`.
    pub fn face(&self, n: usize, i: usize, alpha: usize) -> &FGAbHom {
        &self.faces[n - 1][i - 1][alpha]
    }

    /// `εᵢ : Kₙ₋₁ → Kₙ`.
    pub fn degeneracy(&self, n: usize, i: usize) -> &FGAbHom {
        &self.degeneracies[n - 1][i - 1]
    }

    /// `Γᵢ : Kₙ → Kₙ₊₁`.
    pub fn connection(&self, n: usize, i: usize) -> &FGAbHom {
        &self.connections[n - 1][i - 1]
    }

    fn direction_in_range(&self, n: usize, i: usize) -> Result<()> {
        if (1..=self.top_degree()).contains(&n) && (1..=n).contains(&i) {
            Ok(())
        } else {
            Err(Error::IndexRange(format!(
                "direction {i} at degree {n} is outside the bundle (top {})",
                self.top_degree()
            )))
        }
    }
}

/// Bundle with every group equal to `g` and every structural map the
/// identity. Satisfies the whole identity table.
pub fn constant_bundle(g: &Arc<FGAbGroup>, top: usize) -> CubicalBundle {
    let id = || FGAbHom::identity(g);
    let groups = vec![Arc::clone(g); top + 1];
    let faces = (1..=top)
        .map(|n| (1..=n).map(|_| [id(), id()]).collect())
        .collect();
    let degeneracies = (1..=top).map(|n| vec![id(); n]).collect();
    let connections = (1..top).map(|n| vec![id(); n]).collect();
    CubicalBundle::new(groups, faces, degeneracies, connections)
        .expect("constant bundle wiring")
}

/// Checks the identity table as exact hom equalities.
///
/// Violation indices list the source degree of the composite first, then
/// the direction indices, then any face orientations involved:
/// - C1 `[n, i, j, α, β]`: `∂ᵅᵢ∂ᵝⱼ = ∂ᵝⱼ₋₁∂ᵅᵢ` (i<j);
/// - C2 `[n, i, j, α]`: `∂ᵅᵢεⱼ = εⱼ₋₁∂ᵅᵢ` (i<j), `= id` (i=j), `= εⱼ∂ᵅᵢ₋₁` (i>j);
/// - C3 `[n, i, j]`: `εᵢεⱼ = εⱼ₊₁εᵢ` (i≤j);
/// - C4 `[n, i, j]`: `ΓᵢΓⱼ = Γⱼ₊₁Γᵢ` (i≤j);
/// - C5 `[n, i, j]`: `Γᵢεⱼ = εⱼ₊₁Γᵢ` (i<j), `= εᵢ₊₁εᵢ` (i=j), `= εⱼΓᵢ₋₁` (i>j);
/// - C6 `[n, i, j, α]`: `∂ᵅᵢΓⱼ = Γⱼ₋₁∂ᵅᵢ` (i<j), `∂⁰ⱼΓⱼ = ∂⁰ⱼ₊₁Γⱼ = id`,
///   `∂¹ⱼΓⱼ = ∂¹ⱼ₊₁Γⱼ = εⱼ∂¹ⱼ`, `= Γⱼ∂ᵅᵢ₋₁` (i>j+1).
pub fn validate_identities(k: &CubicalBundle) -> Report {
    let mut report = Report::new();
    let top = k.top_degree();
    let mut check = |law: &str, indices: Vec<usize>, lhs: &FGAbHom, rhs: &FGAbHom| {
        if let Some(col) = lhs
            .disagreement(rhs)
            .expect("identity sides share endpoints by wiring")
        {
            report.push(Violation {
                law: law.into(),
                indices,
                witness: Some(format!("generator {col}")),
            });
        }
    };

    // C1: composites of two faces out of degree n.
    for n in 2..=top {
        for j in 2..=n {
            for i in 1..j {
                for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    check(
                        "C1",
                        vec![n, i, j, a, b],
                        &k.face(n, j, b).then(k.face(n - 1, i, a)),
                        &k.face(n, i, a).then(k.face(n - 1, j - 1, b)),
                    );
                }
            }
        }
    }

    // C2: a face after a degeneracy, both through degree n.
    for n in 1..=top {
        for j in 1..=n {
            for i in 1..=n {
                for a in 0..2 {
                    let lhs = k.degeneracy(n, j).then(k.face(n, i, a));
                    let rhs = match i.cmp(&j) {
                        Ordering::Less => {
                            k.face(n - 1, i, a).then(k.degeneracy(n - 1, j - 1))
                        }
                        Ordering::Equal => FGAbHom::identity(k.group(n - 1)),
                        Ordering::Greater => {
                            k.face(n - 1, i - 1, a).then(k.degeneracy(n - 1, j))
                        }
                    };
                    check("C2", vec![n, i, j, a], &lhs, &rhs);
                }
            }
        }
    }

    // C3: two degeneracies up from degree m.
    for m in 0..top.saturating_sub(1) {
        for j in 1..=(m + 1) {
            for i in 1..=j {
                check(
                    "C3",
                    vec![m, i, j],
                    &k.degeneracy(m + 1, j).then(k.degeneracy(m + 2, i)),
                    &k.degeneracy(m + 1, i).then(k.degeneracy(m + 2, j + 1)),
                );
            }
        }
    }

    // C4: two connections up from degree m.
    for m in 1..top.saturating_sub(1) {
        for j in 1..=m {
            for i in 1..=j {
                check(
                    "C4",
                    vec![m, i, j],
                    &k.connection(m, j).then(k.connection(m + 1, i)),
                    &k.connection(m, i).then(k.connection(m + 1, j + 1)),
                );
            }
        }
    }

    // C5: a connection after a degeneracy, up from degree m.
    for m in 0..top.saturating_sub(1) {
        for j in 1..=(m + 1) {
            for i in 1..=(m + 1) {
                let lhs = k.degeneracy(m + 1, j).then(k.connection(m + 1, i));
                let rhs = match i.cmp(&j) {
                    Ordering::Less => k.connection(m, i).then(k.degeneracy(m + 2, j + 1)),
                    Ordering::Equal => {
                        k.degeneracy(m + 1, i).then(k.degeneracy(m + 2, i + 1))
                    }
                    Ordering::Greater => {
                        k.connection(m, i - 1).then(k.degeneracy(m + 2, j))
                    }
                };
                check("C5", vec![m, i, j], &lhs, &rhs);
            }
        }
    }

    // C6: a face after a connection out of degree m.
    for m in 1..top {
        for j in 1..=m {
            for i in 1..=(m + 1) {
                for a in 0..2 {
                    let lhs = k.connection(m, j).then(k.face(m + 1, i, a));
                    let rhs = if i < j {
                        k.face(m, i, a).then(k.connection(m - 1, j - 1))
                    } else if i == j || i == j + 1 {
                        if a == 0 {
                            FGAbHom::identity(k.group(m))
                        } else {
                            k.face(m, j, 1).then(k.degeneracy(m, j))
                        }
                    } else {
                        k.face(m, i - 1, a).then(k.connection(m - 1, j))
                    };
                    check("C6", vec![m, i, j, a], &lhs, &rhs);
                }
            }
        }
    }

    report
}

/// The endomorphisms `sᵢ = εᵢ∂⁰ᵢ` and `tᵢ = εᵢ∂¹ᵢ` of `Kₙ`: the fully
/// degenerate cubes on the two opposite faces in direction `i`.
pub fn source_target(k: &CubicalBundle, n: usize, i: usize) -> Result<(FGAbHom, FGAbHom)> {
    k.direction_in_range(n, i)?;
    let s = k.face(n, i, 0).then(k.degeneracy(n, i));
    let t = k.face(n, i, 1).then(k.degeneracy(n, i));
    Ok((s, t))
}

/// `g − tᵢ(g) + h` on homs into `Kₙ`: the composite of two families of
/// n-cubes expressed as one hom, so law checks stay exact.
fn compose_hom(k: &CubicalBundle, n: usize, i: usize, g: &FGAbHom, h: &FGAbHom) -> FGAbHom {
    let t = k.face(n, i, 1).then(k.degeneracy(n, i));
    &(g - &g.then(&t)) + h
}

/// Composition of `g` and `h` in direction `i`: defined when the positive
/// face of `g` equals the negative face of `h`, as `g − tᵢ(g) + h`.
pub fn compose_i(
    k: &CubicalBundle,
    n: usize,
    i: usize,
    g: &FGAbElement,
    h: &FGAbElement,
) -> Result<FGAbElement> {
    k.direction_in_range(n, i)?;
    for e in [g, h] {
        if e.group() != k.group(n) {
            return Err(Error::Mismatch(format!(
                "operands must live in the degree-{n} group"
            )));
        }
    }
    let gt = k.face(n, i, 1).apply(g);
    let hs = k.face(n, i, 0).apply(h);
    if gt != hs {
        return Err(Error::NotComposable(format!(
            "positive face {:?} differs from negative face {:?} in direction {i}",
            gt.canonicalize(),
            hs.canonicalize()
        )));
    }
    let t = k.face(n, i, 1).then(k.degeneracy(n, i));
    Ok(&(g - &t.apply(g)) + h)
}

/// Inverse for composition in direction `i`: `sᵢ(g) − g + tᵢ(g)`.
pub fn inverse_i(k: &CubicalBundle, n: usize, i: usize, g: &FGAbElement) -> Result<FGAbElement> {
    k.direction_in_range(n, i)?;
    if g.group() != k.group(n) {
        return Err(Error::Mismatch(format!(
            "operand must live in the degree-{n} group"
        )));
    }
    let (s, t) = source_target(k, n, i)?;
    Ok(&(&s.apply(g) - g) + &t.apply(g))
}

/// Subgroup of a direct power `Kₙ ⊕ … ⊕ Kₙ` cut out by face-matching
/// constraints, presented exactly via a kernel computation.
pub struct ComposableTupleSpace {
    degree: usize,
    directions: Vec<usize>,
    sum: DirectSum,
    group: Arc<FGAbGroup>,
    inclusion: FGAbHom,
}

impl ComposableTupleSpace {
    /// Each constraint `(a, b, dir)` imposes `∂¹_dir(xₐ) = ∂⁰_dir(x_b)`.
    fn cut_out(
        k: &CubicalBundle,
        n: usize,
        arity: usize,
        constraints: &[(usize, usize, usize)],
    ) -> ComposableTupleSpace {
        let sum = DirectSum::new(vec![Arc::clone(k.group(n)); arity]);
        let targets = DirectSum::new(vec![Arc::clone(k.group(n - 1)); constraints.len()]);
        let mut map = FGAbHom::zero(Arc::clone(sum.group()), Arc::clone(targets.group()));
        for (slot, &(a, b, dir)) in constraints.iter().enumerate() {
            let diff = &sum.projection(a).then(k.face(n, dir, 1))
                - &sum.projection(b).then(k.face(n, dir, 0));
            map = &map + &diff.then(&targets.inclusion(slot));
        }
        let (group, inclusion) = kernel_of_hom(&map);
        let mut directions: Vec<usize> = constraints.iter().map(|c| c.2).collect();
        directions.dedup();
        ComposableTupleSpace {
            degree: n,
            directions,
            sum,
            group,
            inclusion,
        }
    }

    /// Pairs `(g, h)` composable in direction `i`.
    pub fn pairs(k: &CubicalBundle, n: usize, i: usize) -> Result<ComposableTupleSpace> {
        k.direction_in_range(n, i)?;
        Ok(Self::cut_out(k, n, 2, &[(0, 1, i)]))
    }

    /// Triples `(g, h, l)` with consecutive composability in direction `i`.
    pub fn triples(k: &CubicalBundle, n: usize, i: usize) -> Result<ComposableTupleSpace> {
        k.direction_in_range(n, i)?;
        Ok(Self::cut_out(k, n, 3, &[(0, 1, i), (1, 2, i)]))
    }

    /// Quadruples `(g, h, k, l)` forming a composable square grid: rows
    /// composable in direction `i`, columns in direction `j`.
    pub fn quadruples(
        k: &CubicalBundle,
        n: usize,
        i: usize,
        j: usize,
    ) -> Result<ComposableTupleSpace> {
        k.direction_in_range(n, i)?;
        k.direction_in_range(n, j)?;
        Ok(Self::cut_out(
            k,
            n,
            4,
            &[(0, 1, i), (2, 3, i), (0, 2, j), (1, 3, j)],
        ))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn directions(&self) -> &[usize] {
        &self.directions
    }

    pub fn arity(&self) -> usize {
        self.sum.arity()
    }

    pub fn group(&self) -> &Arc<FGAbGroup> {
        &self.group
    }

    /// Inclusion into the ambient direct power.
    pub fn inclusion(&self) -> &FGAbHom {
        &self.inclusion
    }

    /// Projection of the subgroup onto the `idx`-th tuple entry.
    pub fn component(&self, idx: usize) -> FGAbHom {
        self.inclusion.then(&self.sum.projection(idx))
    }
}

fn record(report: &mut Report, law: &str, indices: Vec<usize>, lhs: &FGAbHom, rhs: &FGAbHom) {
    if let Some(col) = lhs
        .disagreement(rhs)
        .expect("law sides share endpoints by construction")
    {
        report.push(Violation {
            law: law.into(),
            indices,
            witness: Some(format!("generator {col}")),
        });
    }
}

/// Verifies the groupoid structure of `∘ᵢ` on `Kₙ`: associativity on the
/// triple space, unit and inverse laws, and the endomorphism identities
/// `sᵢsᵢ = sᵢ`, `tᵢtᵢ = tᵢ`, `sᵢtᵢ = tᵢ`, `tᵢsᵢ = sᵢ`. All checks are hom
/// equalities; violations carry indices `[n, i]`.
pub fn check_groupoid(k: &CubicalBundle, n: usize, i: usize) -> Report {
    k.direction_in_range(n, i)
        .expect("groupoid check needs a direction inside the bundle");
    let mut report = Report::new();
    let (s, t) = source_target(k, n, i).expect("range checked above");
    let id = FGAbHom::identity(k.group(n));

    record(&mut report, "groupoid.s_idempotent", vec![n, i], &s.then(&s), &s);
    record(&mut report, "groupoid.t_idempotent", vec![n, i], &t.then(&t), &t);
    record(&mut report, "groupoid.st", vec![n, i], &t.then(&s), &t);
    record(&mut report, "groupoid.ts", vec![n, i], &s.then(&t), &s);

    let unit_left = compose_hom(k, n, i, &s, &id);
    record(&mut report, "groupoid.unit_left", vec![n, i], &unit_left, &id);
    let unit_right = compose_hom(k, n, i, &id, &t);
    record(&mut report, "groupoid.unit_right", vec![n, i], &unit_right, &id);

    let inverse = &(&s - &id) + &t;
    let inv_left = compose_hom(k, n, i, &inverse, &id);
    record(&mut report, "groupoid.inverse_left", vec![n, i], &inv_left, &t);
    let inv_right = compose_hom(k, n, i, &id, &inverse);
    record(&mut report, "groupoid.inverse_right", vec![n, i], &inv_right, &s);

    let triples = ComposableTupleSpace::triples(k, n, i).expect("range checked above");
    let (x, y, z) = (
        triples.component(0),
        triples.component(1),
        triples.component(2),
    );
    let grouped_left = compose_hom(k, n, i, &compose_hom(k, n, i, &x, &y), &z);
    let grouped_right = compose_hom(k, n, i, &x, &compose_hom(k, n, i, &y, &z));
    record(&mut report, "groupoid.assoc", vec![n, i], &grouped_left, &grouped_right);

    report
}

/// Verifies `(g ∘ᵢ h) ∘ⱼ (k ∘ᵢ l) = (g ∘ⱼ k) ∘ᵢ (h ∘ⱼ l)` exactly on the
/// subgroup of grid-composable quadruples.
pub fn check_interchange(k: &CubicalBundle, n: usize, i: usize, j: usize) -> Report {
    assert!(i != j, "interchange needs two distinct directions");
    let quads = ComposableTupleSpace::quadruples(k, n, i, j)
        .expect("interchange check needs directions inside the bundle");
    let (g, h, kk, l) = (
        quads.component(0),
        quads.component(1),
        quads.component(2),
        quads.component(3),
    );
    let mut report = Report::new();
    let rows_first = compose_hom(
        k,
        n,
        j,
        &compose_hom(k, n, i, &g, &h),
        &compose_hom(k, n, i, &kk, &l),
    );
    let cols_first = compose_hom(
        k,
        n,
        i,
        &compose_hom(k, n, j, &g, &kk),
        &compose_hom(k, n, j, &h, &l),
    );
    record(&mut report, "interchange", vec![n, i, j], &rows_first, &cols_first);
    report
}

/// Verifies the transport law `Γᵢ(g ∘ᵢ h) = (Γᵢg ∘ᵢ₊₁ εᵢh) ∘ᵢ Γᵢh` exactly
/// on the composable-pair subgroup. Needs `n ≤ N−1` so the connection
/// exists.
pub fn check_transport(k: &CubicalBundle, n: usize, i: usize) -> Report {
    assert!(
        n < k.top_degree(),
        "transport at degree n needs a connection into degree n+1"
    );
    let pairs = ComposableTupleSpace::pairs(k, n, i)
        .expect("transport check needs a direction inside the bundle");
    let (g, h) = (pairs.component(0), pairs.component(1));
    let conn = k.connection(n, i);
    let lift = k.degeneracy(n + 1, i);
    let mut report = Report::new();
    let lhs = compose_hom(k, n, i, &g, &h).then(conn);
    let rhs = compose_hom(
        k,
        n + 1,
        i,
        &compose_hom(k, n + 1, i + 1, &g.then(conn), &h.then(lift)),
        &h.then(conn),
    );
    record(&mut report, "transport", vec![n, i], &lhs, &rhs);
    report
}

/// Degree-wise map of bundles commuting with all faces, degeneracies, and
/// connections. Construction rejects anything that does not commute.
#[derive(Clone, Debug)]
pub struct BundleMap {
    source: CubicalBundle,
    target: CubicalBundle,
    components: Vec<FGAbHom>,
}

impl BundleMap {
    pub fn new(
        source: CubicalBundle,
        target: CubicalBundle,
        components: Vec<FGAbHom>,
    ) -> Result<Self> {
        if source.top_degree() != target.top_degree() {
            return Err(Error::NotBundleMorphism(format!(
                "tops differ: {} and {}",
                source.top_degree(),
                target.top_degree()
            )));
        }
        let top = source.top_degree();
        if components.len() != top + 1 {
            return Err(Error::NotBundleMorphism(format!(
                "need {} components, got {}",
                top + 1,
                components.len()
            )));
        }
        for (n, f) in components.iter().enumerate() {
            if f.source() != source.group(n) || f.target() != target.group(n) {
                return Err(Error::NotBundleMorphism(format!(
                    "component {n} does not match the graded groups"
                )));
            }
        }
        let square = |name: String, lhs: &FGAbHom, rhs: &FGAbHom| -> Result<()> {
            if lhs.equals(rhs)? {
                Ok(())
            } else {
                Err(Error::NotBundleMorphism(format!(
                    "does not commute with {name}"
                )))
            }
        };
        for n in 1..=top {
            for i in 1..=n {
                for alpha in 0..2 {
                    square(
                        format!("face {i}^{alpha} at degree {n}"),
                        &components[n].then(target.face(n, i, alpha)),
                        &source.face(n, i, alpha).then(&components[n - 1]),
                    )?;
                }
                square(
                    format!("degeneracy {i} into degree {n}"),
                    &components[n - 1].then(target.degeneracy(n, i)),
                    &source.degeneracy(n, i).then(&components[n]),
                )?;
            }
        }
        for n in 1..top {
            for i in 1..=n {
                square(
                    format!("connection {i} at degree {n}"),
                    &components[n].then(target.connection(n, i)),
                    &source.connection(n, i).then(&components[n + 1]),
                )?;
            }
        }
        Ok(BundleMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(k: &CubicalBundle) -> BundleMap {
        BundleMap {
            source: k.clone(),
            target: k.clone(),
            components: (0..=k.top_degree())
                .map(|n| FGAbHom::identity(k.group(n)))
                .collect(),
        }
    }

    pub fn source(&self) -> &CubicalBundle {
        &self.source
    }

    pub fn target(&self) -> &CubicalBundle {
        &self.target
    }

    pub fn component(&self, n: usize) -> &FGAbHom {
        &self.components[n]
    }

    pub fn then(&self, next: &BundleMap) -> Result<BundleMap> {
        let components = (0..self.components.len())
            .map(|n| self.components[n].then(next.component(n)))
            .collect();
        BundleMap::new(self.source.clone(), next.target.clone(), components)
    }

    pub fn equals(&self, other: &BundleMap) -> Result<bool> {
        for n in 0..self.components.len() {
            if !self.components[n].equals(other.component(n))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Verifies that a bundle map sends compositions to compositions in every
/// direction, exactly on the source's composable-pair subgroups. The
/// structural commuting is already enforced by [`BundleMap::new`]; with
/// the derived composition this check is the linearity witness.
pub fn check_morphism_preserves(f: &BundleMap) -> Report {
    let mut report = Report::new();
    for n in 1..=f.source().top_degree() {
        for i in 1..=n {
            let pairs = ComposableTupleSpace::pairs(f.source(), n, i)
                .expect("directions iterate inside the bundle");
            let (g, h) = (pairs.component(0), pairs.component(1));
            let mapped_composite =
                compose_hom(f.source(), n, i, &g, &h).then(f.component(n));
            let composite_mapped = compose_hom(
                f.target(),
                n,
                i,
                &g.then(f.component(n)),
                &h.then(f.component(n)),
            );
            record(
                &mut report,
                "morphism.compose",
                vec![n, i],
                &mapped_composite,
                &composite_mapped,
            );
        }
    }
    report
}
