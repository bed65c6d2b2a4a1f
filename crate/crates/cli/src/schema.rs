//! JSON document formats for every object the tool reads or writes.
//!
//! All documents are JSON objects tagged by a `"kind"` field; unknown
//! fields are rejected. Matrices are row-major arrays of arrays of
//! decimal integer strings so that arbitrary precision survives the trip
//! through JSON — plain JSON numbers are accepted on input as a
//! convenience and re-emitted as strings. Serialization is canonical:
//! object keys are sorted, so parse followed by serialize is a fixed
//! point at the byte level.

use cubal::chain::ChainComplex;
use cubal::crossed::{InternalCrossedComplex, Level1, UpperLevel};
use cubal::cubical::CubicalBundle;
use cubal::intlin::{FGAbGroup, FGAbHom, IntMatrix};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// A document failed to parse or did not fit its schema. Always an input
/// error: commands map it to exit code 2.
#[derive(Debug)]
pub struct SchemaError(pub String);

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SchemaError {}

fn bad(msg: impl Into<String>) -> SchemaError {
    SchemaError(msg.into())
}

/// An integer in a document: written as a decimal string, read as either
/// a string or a plain (non-float) JSON number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a decimal integer string or integer")
            }
            fn visit_str<E: serde::de::Error>(self, s: &str) -> Result<JsonInt, E> {
                BigInt::from_str(s)
                    .map(JsonInt)
                    .map_err(|_| E::custom(format!("not a decimal integer: {s:?}")))
            }
            fn visit_i64<E: serde::de::Error>(self, n: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(n)))
            }
            fn visit_u64<E: serde::de::Error>(self, n: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(n)))
            }
            fn visit_f64<E: serde::de::Error>(self, n: f64) -> Result<JsonInt, E> {
                Err(E::custom(format!("matrix entries must be integers, got {n}")))
            }
        }
        d.deserialize_any(V)
    }
}

pub type MatrixDoc = Vec<Vec<JsonInt>>;

/// Reads a matrix whose shape is determined by the document itself
/// (used for bare matrix files). Ragged rows are rejected.
pub fn free_matrix(doc: &MatrixDoc) -> Result<IntMatrix, SchemaError> {
    let rows = doc.len();
    let cols = doc.first().map_or(0, Vec::len);
    for (r, row) in doc.iter().enumerate() {
        if row.len() != cols {
            return Err(bad(format!(
                "ragged matrix: row {r} has {} entries, row 0 has {cols}",
                row.len()
            )));
        }
    }
    Ok(IntMatrix::from_fn(rows, cols, |r, c| doc[r][c].0.clone()))
}

/// Reads a matrix that must have exactly the shape demanded by its
/// surroundings (a hom between known groups).
fn sized_matrix(
    doc: &MatrixDoc,
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<IntMatrix, SchemaError> {
    if doc.len() != rows {
        return Err(bad(format!("{what}: expected {rows} rows, got {}", doc.len())));
    }
    for (r, row) in doc.iter().enumerate() {
        if row.len() != cols {
            return Err(bad(format!(
                "{what}: row {r} has {} entries, expected {cols}",
                row.len()
            )));
        }
    }
    Ok(IntMatrix::from_fn(rows, cols, |r, c| doc[r][c].0.clone()))
}

pub fn matrix_to_doc(m: &IntMatrix) -> MatrixDoc {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| JsonInt(m[(r, c)].clone())).collect())
        .collect()
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub kind: String,
    pub generators: usize,
    /// One relator per row, `generators` entries each.
    pub relations: Vec<Vec<JsonInt>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub kind: String,
    pub source: GroupDoc,
    pub target: GroupDoc,
    pub matrix: MatrixDoc,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub kind: String,
    /// Degree n is `groups[n]`.
    pub groups: Vec<GroupDoc>,
    /// Boundary in degree n under the key `"n"`, for 1 ≤ n ≤ top.
    pub boundaries: BTreeMap<String, MatrixDoc>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct CrossedLevelDoc {
    pub group: GroupDoc,
    /// Source map (degree 1 only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d0: Option<MatrixDoc>,
    /// Target map (degree 1 only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d1: Option<MatrixDoc>,
    /// Unit (degree 1) or section (degree ≥ 2).
    pub eps: MatrixDoc,
    /// Base map (degree ≥ 2 only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<MatrixDoc>,
    /// Boundary (degree ≥ 2 only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<MatrixDoc>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct CrossedDoc {
    pub kind: String,
    #[serde(rename = "C0")]
    pub c0: GroupDoc,
    /// `levels[k]` describes degree k+1.
    pub levels: Vec<CrossedLevelDoc>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub kind: String,
    #[serde(rename = "N")]
    pub top: usize,
    pub groups: Vec<GroupDoc>,
    /// Operator matrices keyed `face:n:i:a`, `deg:n:i`, `conn:n:i`.
    pub ops: BTreeMap<String, MatrixDoc>,
}

#[derive(Clone, Debug)]
pub enum Document {
    Group(GroupDoc),
    Hom(HomDoc),
    Chain(ChainDoc),
    Crossed(CrossedDoc),
    Bundle(BundleDoc),
}

/// Parses any document, dispatching on its `"kind"` field. Syntax errors
/// carry the position reported by the JSON parser; schema errors name the
/// offending field.
pub fn parse_document(text: &str) -> Result<Document, SchemaError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| bad(format!("syntax error: {e}")))?;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| bad("document needs a string \"kind\" field"))?
        .to_string();
    let schema = |e: serde_json::Error| bad(format!("schema error in {kind} document: {e}"));
    match kind.as_str() {
        "group" => serde_json::from_value(value).map(Document::Group).map_err(schema),
        "hom" => serde_json::from_value(value).map(Document::Hom).map_err(schema),
        "chain" => serde_json::from_value(value).map(Document::Chain).map_err(schema),
        "crossed" => serde_json::from_value(value).map(Document::Crossed).map_err(schema),
        "bundle" => serde_json::from_value(value).map(Document::Bundle).map_err(schema),
        other => Err(bad(format!("unknown document kind {other:?}"))),
    }
}

/// Canonical serialization: keys sorted, two-space indentation, trailing
/// newline. Applying parse and serialize again reproduces the same bytes.
pub fn canonical_json<T: Serialize>(t: &T) -> String {
    let value = serde_json::to_value(t).expect("documents always serialize");
    let mut text = serde_json::to_string_pretty(&value).expect("values always serialize");
    text.push('\n');
    text
}

pub fn serialize_document(doc: &Document) -> String {
    match doc {
        Document::Group(d) => canonical_json(d),
        Document::Hom(d) => canonical_json(d),
        Document::Chain(d) => canonical_json(d),
        Document::Crossed(d) => canonical_json(d),
        Document::Bundle(d) => canonical_json(d),
    }
}

fn expect_kind(actual: &str, expected: &str) -> Result<(), SchemaError> {
    if actual == expected {
        Ok(())
    } else {
        Err(bad(format!("expected a {expected} document, found kind {actual:?}")))
    }
}

pub fn group_from_doc(doc: &GroupDoc) -> Result<Arc<FGAbGroup>, SchemaError> {
    expect_kind(&doc.kind, "group")?;
    let g = doc.generators;
    for (idx, relator) in doc.relations.iter().enumerate() {
        if relator.len() != g {
            return Err(bad(format!(
                "relator {idx} has {} entries for a group on {g} generators",
                relator.len()
            )));
        }
    }
    let relations = IntMatrix::from_fn(g, doc.relations.len(), |r, c| doc.relations[c][r].0.clone());
    FGAbGroup::new(g, relations)
        .map(Arc::new)
        .map_err(|e| bad(e.to_string()))
}

pub fn group_to_doc(g: &FGAbGroup) -> GroupDoc {
    let m = g.relations();
    GroupDoc {
        kind: "group".into(),
        generators: g.generators(),
        relations: (0..m.cols())
            .map(|c| (0..m.rows()).map(|r| JsonInt(m[(r, c)].clone())).collect())
            .collect(),
    }
}

fn hom_between(
    doc: &MatrixDoc,
    source: &Arc<FGAbGroup>,
    target: &Arc<FGAbGroup>,
    what: &str,
) -> Result<FGAbHom, SchemaError> {
    let m = sized_matrix(doc, target.generators(), source.generators(), what)?;
    FGAbHom::new(Arc::clone(source), Arc::clone(target), m)
        .map_err(|e| bad(format!("{what}: {e}")))
}

pub fn hom_from_doc(doc: &HomDoc) -> Result<FGAbHom, SchemaError> {
    expect_kind(&doc.kind, "hom")?;
    let source = group_from_doc(&doc.source)?;
    let target = group_from_doc(&doc.target)?;
    hom_between(&doc.matrix, &source, &target, "hom matrix")
}

pub fn hom_to_doc(f: &FGAbHom) -> HomDoc {
    HomDoc {
        kind: "hom".into(),
        source: group_to_doc(f.source()),
        target: group_to_doc(f.target()),
        matrix: matrix_to_doc(f.matrix()),
    }
}

pub fn chain_from_doc(doc: &ChainDoc) -> Result<ChainComplex, SchemaError> {
    expect_kind(&doc.kind, "chain")?;
    if doc.groups.is_empty() {
        return Err(bad("chain document needs at least the degree-0 group"));
    }
    let groups: Vec<Arc<FGAbGroup>> = doc
        .groups
        .iter()
        .map(group_from_doc)
        .collect::<Result<_, _>>()?;
    let top = groups.len() - 1;
    let expected: BTreeSet<String> = (1..=top).map(|n| n.to_string()).collect();
    for key in doc.boundaries.keys() {
        if !expected.contains(key) {
            return Err(bad(format!("unexpected boundary key {key:?}")));
        }
    }
    let mut boundaries = Vec::new();
    for n in 1..=top {
        let key = n.to_string();
        let m = doc
            .boundaries
            .get(&key)
            .ok_or_else(|| bad(format!("missing boundary {key:?}")))?;
        boundaries.push(hom_between(
            m,
            &groups[n],
            &groups[n - 1],
            &format!("boundary {n}"),
        )?);
    }
    ChainComplex::new(groups, boundaries).map_err(|e| bad(e.to_string()))
}

pub fn chain_to_doc(a: &ChainComplex) -> ChainDoc {
    ChainDoc {
        kind: "chain".into(),
        groups: (0..=a.top_degree()).map(|n| group_to_doc(a.group(n))).collect(),
        boundaries: (1..=a.top_degree())
            .map(|n| (n.to_string(), matrix_to_doc(a.boundary(n).matrix())))
            .collect(),
    }
}

pub fn crossed_from_doc(doc: &CrossedDoc) -> Result<InternalCrossedComplex, SchemaError> {
    expect_kind(&doc.kind, "crossed")?;
    let c0 = group_from_doc(&doc.c0)?;
    let Some((first, rest)) = doc.levels.split_first() else {
        return Err(bad("crossed document needs at least the degree-1 level"));
    };
    if first.p.is_some() || first.delta.is_some() {
        return Err(bad("degree-1 level takes d0/d1/eps, not p/delta"));
    }
    let g1 = group_from_doc(&first.group)?;
    let one = Level1 {
        group: Arc::clone(&g1),
        source_map: hom_between(
            first.d0.as_ref().ok_or_else(|| bad("degree-1 level needs d0"))?,
            &g1,
            &c0,
            "d0",
        )?,
        target_map: hom_between(
            first.d1.as_ref().ok_or_else(|| bad("degree-1 level needs d1"))?,
            &g1,
            &c0,
            "d1",
        )?,
        unit_map: hom_between(&first.eps, &c0, &g1, "eps at degree 1")?,
    };
    let mut upper = Vec::new();
    let mut below = g1;
    for (idx, level) in rest.iter().enumerate() {
        let degree = idx + 2;
        if level.d0.is_some() || level.d1.is_some() {
            return Err(bad(format!("degree-{degree} level takes p/eps/delta, not d0/d1")));
        }
        let g = group_from_doc(&level.group)?;
        upper.push(UpperLevel {
            group: Arc::clone(&g),
            base_map: hom_between(
                level.p.as_ref().ok_or_else(|| bad(format!("degree-{degree} level needs p")))?,
                &g,
                &c0,
                &format!("p at degree {degree}"),
            )?,
            section: hom_between(&level.eps, &c0, &g, &format!("eps at degree {degree}"))?,
            boundary: hom_between(
                level
                    .delta
                    .as_ref()
                    .ok_or_else(|| bad(format!("degree-{degree} level needs delta")))?,
                &g,
                &below,
                &format!("delta at degree {degree}"),
            )?,
        });
        below = g;
    }
    InternalCrossedComplex::new(c0, one, upper).map_err(|e| bad(e.to_string()))
}

pub fn crossed_to_doc(c: &InternalCrossedComplex) -> CrossedDoc {
    let mut levels = vec![CrossedLevelDoc {
        group: group_to_doc(c.group(1)),
        d0: Some(matrix_to_doc(c.source_map().matrix())),
        d1: Some(matrix_to_doc(c.target_map().matrix())),
        eps: matrix_to_doc(c.unit_map().matrix()),
        p: None,
        delta: None,
    }];
    for n in 2..=c.top_degree() {
        levels.push(CrossedLevelDoc {
            group: group_to_doc(c.group(n)),
            d0: None,
            d1: None,
            eps: matrix_to_doc(c.section(n).matrix()),
            p: Some(matrix_to_doc(c.base_map(n).matrix())),
            delta: Some(matrix_to_doc(c.boundary(n).matrix())),
        });
    }
    CrossedDoc {
        kind: "crossed".into(),
        c0: group_to_doc(c.c0()),
        levels,
    }
}

pub fn bundle_from_doc(doc: &BundleDoc) -> Result<CubicalBundle, SchemaError> {
    expect_kind(&doc.kind, "bundle")?;
    let top = doc.top;
    if doc.groups.len() != top + 1 {
        return Err(bad(format!(
            "bundle of top degree {top} needs {} groups, got {}",
            top + 1,
            doc.groups.len()
        )));
    }
    let groups: Vec<Arc<FGAbGroup>> = doc
        .groups
        .iter()
        .map(group_from_doc)
        .collect::<Result<_, _>>()?;
    let mut expected = BTreeSet::new();
    for n in 1..=top {
        for i in 1..=n {
            expected.insert(format!("face:{n}:{i}:0"));
            expected.insert(format!("face:{n}:{i}:1"));
            expected.insert(format!("deg:{n}:{i}"));
        }
    }
    for n in 1..top {
        for i in 1..=n {
            expected.insert(format!("conn:{n}:{i}"));
        }
    }
    for key in doc.ops.keys() {
        if !expected.contains(key) {
            return Err(bad(format!("unexpected op key {key:?}")));
        }
    }
    for key in &expected {
        if !doc.ops.contains_key(key) {
            return Err(bad(format!("missing op {key:?}")));
        }
    }
    let op = |key: String, s: &Arc<FGAbGroup>, t: &Arc<FGAbGroup>| {
        hom_between(&doc.ops[&key], s, t, &key)
    };
    let mut faces = Vec::new();
    let mut degeneracies = Vec::new();
    let mut connections = Vec::new();
    for n in 1..=top {
        let mut face_row = Vec::new();
        let mut deg_row = Vec::new();
        for i in 1..=n {
            face_row.push([
                op(format!("face:{n}:{i}:0"), &groups[n], &groups[n - 1])?,
                op(format!("face:{n}:{i}:1"), &groups[n], &groups[n - 1])?,
            ]);
            deg_row.push(op(format!("deg:{n}:{i}"), &groups[n - 1], &groups[n])?);
        }
        faces.push(face_row);
        degeneracies.push(deg_row);
    }
    for n in 1..top {
        let mut row = Vec::new();
        for i in 1..=n {
            row.push(op(format!("conn:{n}:{i}"), &groups[n], &groups[n + 1])?);
        }
        connections.push(row);
    }
    CubicalBundle::new(groups, faces, degeneracies, connections).map_err(|e| bad(e.to_string()))
}

pub fn bundle_to_doc(k: &CubicalBundle) -> BundleDoc {
    let top = k.top_degree();
    let mut ops = BTreeMap::new();
    for n in 1..=top {
        for i in 1..=n {
            for alpha in 0..2 {
                ops.insert(
                    format!("face:{n}:{i}:{alpha}"),
                    matrix_to_doc(k.face(n, i, alpha).matrix()),
                );
            }
            ops.insert(format!("deg:{n}:{i}"), matrix_to_doc(k.degeneracy(n, i).matrix()));
        }
    }
    for n in 1..top {
        for i in 1..=n {
            ops.insert(format!("conn:{n}:{i}"), matrix_to_doc(k.connection(n, i).matrix()));
        }
    }
    BundleDoc {
        kind: "bundle".into(),
        top,
        groups: (0..=top).map(|n| group_to_doc(k.group(n))).collect(),
        ops,
    }
}
