//! JSON documents and CSV emission.
//!
//! Every file is one JSON object with a `"type"` field. Rationals are written
//! as `"p/q"` strings (integers as `"p"`); on input plain JSON integers are
//! accepted too. Vertex and position indices are 1-based except conductance
//! graph vertices, which are numbered `0..vertices` with `v_0` the usual root.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graphs::{ConductanceGraph, DimerEdge, GrassmannSlice, PlanarBipartiteGraph, TreeEdge};
use crate::linalg::{parse_rational, Coloring, Rational, RationalMatrix};
use crate::measure::{ColoringDistribution, KDetMeasure};
use crate::pure::{GrassmannPair, PureEncoding};

/// A rational in a JSON document.
#[derive(Clone, Debug, PartialEq)]
pub struct Rat(pub Rational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => parse_rational(&s).map(Rat).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(Rat(Rational::from_integer(i.into()))),
        }
    }
}

pub type MatrixDoc = Vec<Vec<Rat>>;

fn matrix_doc(m: &RationalMatrix) -> MatrixDoc {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(Rat).collect())
        .collect()
}

fn matrix_from_doc(doc: MatrixDoc, cols_if_empty: usize) -> Result<RationalMatrix> {
    if doc.is_empty() {
        return Ok(RationalMatrix::zeros(0, cols_if_empty));
    }
    let rows: Vec<Vec<Rational>> = doc.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
    RationalMatrix::from_rows(rows).map_err(|e| Error::Schema(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BipartiteEdgeDoc {
    pub white: usize,
    pub black: usize,
    pub weight: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConductanceEdgeDoc {
    pub u: usize,
    pub v: usize,
    pub conductance: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbabilityDoc {
    pub coloring: String,
    pub probability: Rat,
}

fn zero_root() -> usize {
    0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Document {
    Measure {
        k: usize,
        n: usize,
        matrices: Vec<MatrixDoc>,
    },
    Distribution {
        k: usize,
        n: usize,
        probabilities: Vec<ProbabilityDoc>,
    },
    PureEncoding {
        blocks: Vec<usize>,
        #[serde(rename = "L")]
        l: MatrixDoc,
    },
    GrassmannPair {
        n1: usize,
        #[serde(rename = "A")]
        a: MatrixDoc,
        #[serde(rename = "B")]
        b: MatrixDoc,
    },
    GrassmannSlice {
        k: usize,
        n: usize,
        #[serde(rename = "G")]
        g: MatrixDoc,
    },
    BipartiteGraph {
        k: usize,
        /// Vertices on each side.
        side: usize,
        edges: Vec<BipartiteEdgeDoc>,
        #[serde(default)]
        faces: Vec<Vec<usize>>,
    },
    ConductanceGraph {
        k: usize,
        vertices: usize,
        #[serde(default = "zero_root")]
        root: usize,
        edges: Vec<ConductanceEdgeDoc>,
    },
    SignedMatrix {
        n: usize,
        #[serde(rename = "V")]
        v: MatrixDoc,
    },
    PureRows {
        rows: Vec<MatrixDoc>,
    },
}

impl Document {
    pub fn type_name(&self) -> &'static str {
        match self {
            Document::Measure { .. } => "measure",
            Document::Distribution { .. } => "distribution",
            Document::PureEncoding { .. } => "pure_encoding",
            Document::GrassmannPair { .. } => "grassmann_pair",
            Document::GrassmannSlice { .. } => "grassmann_slice",
            Document::BipartiteGraph { .. } => "bipartite_graph",
            Document::ConductanceGraph { .. } => "conductance_graph",
            Document::SignedMatrix { .. } => "signed_matrix",
            Document::PureRows { .. } => "pure_rows",
        }
    }

    fn wrong(&self, want: &str) -> Error {
        Error::Schema(format!("expected a {want} document, found {}", self.type_name()))
    }

    pub fn into_measure(self) -> Result<KDetMeasure> {
        let Document::Measure { k, n, matrices } = self else {
            return Err(self.wrong("measure"));
        };
        if matrices.len() != k || k == 0 {
            return Err(Error::Schema(format!("k = {k} but {} matrices given", matrices.len())));
        }
        let mats = matrices
            .into_iter()
            .map(|m| matrix_from_doc(m, n))
            .collect::<Result<Vec<_>>>()?;
        if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::Schema(format!("matrices must be {n}x{n}")));
        }
        KDetMeasure::new(mats)
    }

    pub fn into_distribution(self) -> Result<ColoringDistribution> {
        let Document::Distribution { k, n, probabilities } = self else {
            return Err(self.wrong("distribution"));
        };
        let mut map = std::collections::BTreeMap::new();
        for p in probabilities {
            let x: Coloring = p.coloring.parse()?;
            if x.len() != n || x.max_color().is_some_and(|c| c >= k) {
                return Err(Error::Schema(format!("coloring {} out of range", p.coloring)));
            }
            map.insert(x, p.probability.0);
        }
        Ok(ColoringDistribution::from_map(n, k, map))
    }

    pub fn into_pure_encoding(self) -> Result<PureEncoding> {
        let Document::PureEncoding { blocks, l } = self else {
            return Err(self.wrong("pure_encoding"));
        };
        PureEncoding::new(blocks, matrix_from_doc(l, 0)?)
    }

    pub fn into_grassmann_pair(self) -> Result<GrassmannPair> {
        let Document::GrassmannPair { n1, a, b } = self else {
            return Err(self.wrong("grassmann_pair"));
        };
        let p = GrassmannPair::new(matrix_from_doc(a, 0)?, matrix_from_doc(b, 0)?)?;
        if p.n1 != n1 {
            return Err(Error::Schema(format!("n1 = {n1} but A has {} rows", p.n1)));
        }
        Ok(p)
    }

    pub fn into_grassmann_slice(self) -> Result<GrassmannSlice> {
        let Document::GrassmannSlice { k, n, g } = self else {
            return Err(self.wrong("grassmann_slice"));
        };
        let g = matrix_from_doc(g, k * n)?;
        if g.rows() != n {
            return Err(Error::Schema(format!("n = {n} but G has {} rows", g.rows())));
        }
        GrassmannSlice::new(k, g)
    }

    pub fn into_bipartite_graph(self) -> Result<PlanarBipartiteGraph> {
        let Document::BipartiteGraph { k, side, edges, faces } = self else {
            return Err(self.wrong("bipartite_graph"));
        };
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                if e.white == 0 || e.black == 0 {
                    return Err(Error::Schema(format!("edge {}: vertices are 1-based", i + 1)));
                }
                Ok(DimerEdge {
                    white: e.white - 1,
                    black: e.black - 1,
                    split: split_or_default(e.split, &e.weight, k, i)?,
                    weight: e.weight.0,
                    sign: e.sign,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let faces = faces
            .into_iter()
            .map(|f| {
                f.into_iter()
                    .map(|e| {
                        e.checked_sub(1)
                            .ok_or_else(|| Error::Schema("face edges are 1-based".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PlanarBipartiteGraph::new(side, k, edges, faces)
    }

    pub fn into_conductance_graph(self) -> Result<ConductanceGraph> {
        let Document::ConductanceGraph {
            k,
            vertices,
            root,
            edges,
        } = self
        else {
            return Err(self.wrong("conductance_graph"));
        };
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                Ok(TreeEdge {
                    u: e.u,
                    v: e.v,
                    split: split_or_default(e.split, &e.conductance, k, i)?,
                    conductance: e.conductance.0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ConductanceGraph::new(vertices, root, k, edges)
    }

    pub fn into_signed_matrix(self) -> Result<RationalMatrix> {
        let Document::SignedMatrix { n, v } = self else {
            return Err(self.wrong("signed_matrix"));
        };
        let v = matrix_from_doc(v, n)?;
        if v.rows() != n || v.cols() != n {
            return Err(Error::Schema(format!("V must be {n}x{n}")));
        }
        Ok(v)
    }

    pub fn into_pure_rows(self) -> Result<Vec<RationalMatrix>> {
        let Document::PureRows { rows } = self else {
            return Err(self.wrong("pure_rows"));
        };
        rows.into_iter().map(|r| matrix_from_doc(r, 0)).collect()
    }
}

/// A missing split is allowed only with a single color.
fn split_or_default(split: Option<Vec<Rat>>, total: &Rat, k: usize, i: usize) -> Result<Vec<Rational>> {
    match split {
        Some(s) => Ok(s.into_iter().map(|x| x.0).collect()),
        None if k == 1 => Ok(vec![total.0.clone()]),
        None => Err(Error::Schema(format!("edge {} needs a split when k > 1", i + 1))),
    }
}

impl From<&KDetMeasure> for Document {
    fn from(m: &KDetMeasure) -> Self {
        Document::Measure {
            k: m.k(),
            n: m.n(),
            matrices: m.mats().iter().map(matrix_doc).collect(),
        }
    }
}

impl From<&ColoringDistribution> for Document {
    fn from(d: &ColoringDistribution) -> Self {
        Document::Distribution {
            k: d.k,
            n: d.n,
            probabilities: d
                .iter()
                .map(|(x, p)| ProbabilityDoc {
                    coloring: x.to_string(),
                    probability: Rat(p.clone()),
                })
                .collect(),
        }
    }
}

impl From<&PureEncoding> for Document {
    fn from(e: &PureEncoding) -> Self {
        Document::PureEncoding {
            blocks: e.blocks().to_vec(),
            l: matrix_doc(e.l()),
        }
    }
}

impl From<&GrassmannPair> for Document {
    fn from(p: &GrassmannPair) -> Self {
        Document::GrassmannPair {
            n1: p.n1,
            a: matrix_doc(&p.a),
            b: matrix_doc(&p.b),
        }
    }
}

impl From<&GrassmannSlice> for Document {
    fn from(g: &GrassmannSlice) -> Self {
        Document::GrassmannSlice {
            k: g.k(),
            n: g.n(),
            g: matrix_doc(g.g()),
        }
    }
}

impl From<&PlanarBipartiteGraph> for Document {
    fn from(g: &PlanarBipartiteGraph) -> Self {
        Document::BipartiteGraph {
            k: g.k(),
            side: g.side(),
            edges: g
                .edges()
                .iter()
                .map(|e| BipartiteEdgeDoc {
                    white: e.white + 1,
                    black: e.black + 1,
                    weight: Rat(e.weight.clone()),
                    sign: e.sign,
                    split: Some(e.split.iter().cloned().map(Rat).collect()),
                })
                .collect(),
            faces: g.faces().iter().map(|f| f.iter().map(|e| e + 1).collect()).collect(),
        }
    }
}

impl From<&ConductanceGraph> for Document {
    fn from(g: &ConductanceGraph) -> Self {
        Document::ConductanceGraph {
            k: g.k(),
            vertices: g.vertices(),
            root: g.root(),
            edges: g
                .edges()
                .iter()
                .map(|e| ConductanceEdgeDoc {
                    u: e.u,
                    v: e.v,
                    conductance: Rat(e.conductance.clone()),
                    split: Some(e.split.iter().cloned().map(Rat).collect()),
                })
                .collect(),
        }
    }
}

pub fn signed_matrix_document(v: &RationalMatrix) -> Document {
    Document::SignedMatrix {
        n: v.rows(),
        v: matrix_doc(v),
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

pub fn read_document(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.display().to_string()),
        _ => Error::Io(format!("{}: {e}", path.display())),
    })?;
    parse_document(&text)
}

/// Indented JSON with a trailing newline; arrays of scalars (matrix rows,
/// splits) stay on one line. Stable for a given document.
pub fn to_json(doc: &Document) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut s = String::new();
    write_value(&mut s, &value, 0);
    s.push('\n');
    s
}

fn write_value(out: &mut String, v: &serde_json::Value, depth: usize) {
    use serde_json::Value;
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (key, val)) in map.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(depth + 1), Value::String(key.clone()));
                write_value(out, val, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", pad(depth));
        }
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", pad(depth));
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
            let _ = write!(out, "[{}]", parts.join(", "));
        }
        other => out.push_str(&other.to_string()),
    }
}

pub fn write_document(path: &Path, doc: &Document) -> Result<()> {
    std::fs::write(path, to_json(doc)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// `coloring,probability` rows.
pub fn distribution_csv(d: &ColoringDistribution) -> String {
    let mut out = String::from("coloring,probability\n");
    for (x, p) in d.iter() {
        let _ = writeln!(out, "{x},{p}");
    }
    out
}

/// `permutation,probability` rows in one-line notation.
pub fn permutation_csv(rows: &[(Vec<usize>, Rational)]) -> String {
    let mut out = String::from("permutation,probability\n");
    for (sigma, p) in rows {
        let x = Coloring::from_one_based(sigma).expect("1-based permutation");
        let _ = writeln!(out, "{x},{p}");
    }
    out
}

/// One coloring per line under a `coloring` header.
pub fn samples_csv<'a>(samples: impl IntoIterator<Item = &'a Coloring>) -> String {
    let mut out = String::from("coloring\n");
    for x in samples {
        let _ = writeln!(out, "{x}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{three_dimer_graph, three_dimer_measure};
    use crate::linalg::rat;
    use crate::measure::{brute_force_dist, DEFAULT_CAP};

    #[test]
    fn measure_round_trip() {
        let m = three_dimer_measure();
        let text = to_json(&Document::from(&m));
        assert!(text.contains("\"type\": \"measure\""));
        assert!(text.contains("[\"2/3\", \"2/3\", \"0\"]"), "{text}");
        assert!(text.contains("\"-1/3\""));
        let back = parse_document(&text).unwrap();
        assert_eq!(to_json(&back), text);
        assert_eq!(back.into_measure().unwrap(), m);
    }

    #[test]
    fn integers_accepted() {
        let doc = parse_document(r#"{"type":"measure","k":1,"n":2,"matrices":[[[1,0],["0","1"]]]}"#).unwrap();
        assert_eq!(doc.into_measure().unwrap().mats()[0], RationalMatrix::identity(2));
    }

    #[test]
    fn schema_errors() {
        let err = parse_document(r#"{"type":"measure","k":1,"n":1,"matrices":[[["0.5"]]]}"#).unwrap_err();
        assert_eq!(err.name(), "SchemaViolation");
        let err = parse_document(r#"{"type":"nope"}"#).unwrap_err();
        assert_eq!(err.name(), "SchemaViolation");
        let doc = parse_document(r#"{"type":"signed_matrix","n":1,"V":[[1]]}"#).unwrap();
        assert_eq!(doc.into_measure().unwrap_err().name(), "SchemaViolation");
        let doc = parse_document(r#"{"type":"measure","k":2,"n":1,"matrices":[[["1"]]]}"#).unwrap();
        assert_eq!(doc.into_measure().unwrap_err().name(), "SchemaViolation");
        let err = parse_document(r#"{"type":"measure","k":1,"n":1,"matrices":[[[1]]],"extra":1}"#).unwrap_err();
        assert_eq!(err.name(), "SchemaViolation");
    }

    #[test]
    fn graph_round_trip() {
        let g = three_dimer_graph();
        let text = to_json(&Document::from(&g));
        let back = parse_document(&text).unwrap().into_bipartite_graph().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn csv_rows() {
        let d = brute_force_dist(&three_dimer_measure(), DEFAULT_CAP).unwrap();
        assert_eq!(
            distribution_csv(&d),
            "coloring,probability\n123,1/3\n132,1/3\n213,1/3\n"
        );
        let rows = vec![(vec![2, 1], rat(1, 2))];
        assert_eq!(permutation_csv(&rows), "permutation,probability\n21,1/2\n");
        let doc = Document::from(&d);
        assert_eq!(parse_document(&to_json(&doc)).unwrap().into_distribution().unwrap(), d);
    }

    #[test]
    fn missing_file() {
        let err = read_document(Path::new("/definitely/not/here.json")).unwrap_err();
        assert_eq!(err.name(), "FileNotFound");
    }
}
