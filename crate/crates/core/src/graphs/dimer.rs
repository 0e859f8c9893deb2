use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{has_perfect_matching, pattern_permutations};
use crate::error::{Error, Result};
use crate::linalg::{Coloring, Rational, RationalMatrix};
use crate::measure::{ColoringDistribution, KDetMeasure};

/// Largest side the dimer oracle enumerates by default.
pub const DIMER_ENUM_MAX: usize = 10;

/// Solutions spaces with at most this many free sign bits are searched for a
/// signing with the fewest minus signs.
const MIN_WEIGHT_SEARCH_BITS: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct DimerEdge {
    /// Zero-based white vertex.
    pub white: usize,
    /// Zero-based black vertex.
    pub black: usize,
    pub weight: Rational,
    pub sign: Option<i8>,
    /// Per-color weights summing to `weight`.
    pub split: Vec<Rational>,
}

/// Bipartite graph with a face list from a planar embedding. Faces list the
/// zero-based edge indices around each bounded face.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarBipartiteGraph {
    side: usize,
    k: usize,
    edges: Vec<DimerEdge>,
    faces: Vec<Vec<usize>>,
}

impl PlanarBipartiteGraph {
    pub fn new(side: usize, k: usize, edges: Vec<DimerEdge>, faces: Vec<Vec<usize>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("need at least one color".into()));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.white >= side || e.black >= side {
                return Err(Error::IndexOutOfRange {
                    index: e.white.max(e.black) + 1,
                    bound: side,
                });
            }
            if !e.weight.is_positive() {
                return Err(Error::InvalidInput(format!("edge {} has nonpositive weight", i + 1)));
            }
            if e.split.len() != k || e.split.iter().any(Signed::is_negative) {
                return Err(Error::InvalidInput(format!("edge {} has a bad color split", i + 1)));
            }
            if e.split.iter().fold(Rational::zero(), |a, b| a + b) != e.weight {
                return Err(Error::InvalidInput(format!(
                    "edge {} split does not sum to its weight",
                    i + 1
                )));
            }
            if e.sign.is_some_and(|s| s != 1 && s != -1) {
                return Err(Error::InvalidInput(format!("edge {} sign must be 1 or -1", i + 1)));
            }
            if edges[..i].iter().any(|f| f.white == e.white && f.black == e.black) {
                return Err(Error::InvalidInput(format!("edge {} is repeated", i + 1)));
            }
        }
        let signed = edges.iter().filter(|e| e.sign.is_some()).count();
        if signed != 0 && signed != edges.len() {
            return Err(Error::InvalidInput("give signs for all edges or none".into()));
        }
        for (f, face) in faces.iter().enumerate() {
            check_face(&edges, face).map_err(|msg| Error::InvalidInput(format!("face {}: {msg}", f + 1)))?;
        }
        Ok(PlanarBipartiteGraph { side, k, edges, faces })
    }

    /// Vertices per color class.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[DimerEdge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    fn edge_at(&self, w: usize, b: usize) -> Option<&DimerEdge> {
        self.edges.iter().find(|e| e.white == w && e.black == b)
    }

    fn allowed(&self) -> Vec<Vec<usize>> {
        let mut allowed = vec![Vec::new(); self.side];
        for e in &self.edges {
            allowed[e.white].push(e.black);
        }
        for a in &mut allowed {
            a.sort_unstable();
        }
        allowed
    }
}

/// A face must be a simple even cycle: every vertex on it meets exactly two
/// of its edges.
fn check_face(edges: &[DimerEdge], face: &[usize]) -> std::result::Result<(), String> {
    if face.len() < 4 || face.len() % 2 != 0 {
        return Err(format!("length {} is not an even cycle", face.len()));
    }
    let mut degree: BTreeMap<(bool, usize), usize> = BTreeMap::new();
    for &i in face {
        let e = edges.get(i).ok_or(format!("edge {} does not exist", i + 1))?;
        *degree.entry((true, e.white)).or_default() += 1;
        *degree.entry((false, e.black)).or_default() += 1;
    }
    if degree.values().any(|&d| d != 2) || degree.len() != face.len() {
        return Err("edges do not form a simple cycle".into());
    }
    Ok(())
}

fn face_rule_holds(face: &[usize], minus: impl Fn(usize) -> bool) -> bool {
    let count = face.iter().filter(|&&e| minus(e)).count();
    count % 2 == (face.len() / 2 + 1) % 2
}

/// Edge signs satisfying the face rule: a face of length `ℓ` carries
/// `ℓ/2 + 1` minus signs mod 2. Explicit signs are verified; otherwise the
/// parity constraints are solved over GF(2), preferring the fewest minus
/// signs when the solution space is small.
pub fn kasteleyn_signs(g: &PlanarBipartiteGraph) -> Result<Vec<i8>> {
    if g.edges.iter().all(|e| e.sign.is_some()) && !g.edges.is_empty() {
        let signs: Vec<i8> = g.edges.iter().map(|e| e.sign.unwrap_or(1)).collect();
        for (f, face) in g.faces.iter().enumerate() {
            if !face_rule_holds(face, |e| signs[e] < 0) {
                return Err(Error::FaceRuleViolated { face: f + 1 });
            }
        }
        return Ok(signs);
    }
    let m = g.edges.len();
    // rows: face incidence vectors with the parity as last entry
    let mut rows: Vec<Vec<bool>> = g
        .faces
        .iter()
        .map(|face| {
            let mut r = vec![false; m + 1];
            for &e in face {
                r[e] ^= true;
            }
            r[m] = (face.len() / 2 + 1) % 2 == 1;
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        let Some(p) = (row..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(row, p);
        for r in 0..rows.len() {
            if r != row && rows[r][col] {
                let src = rows[row].clone();
                for (x, y) in rows[r].iter_mut().zip(&src) {
                    *x ^= *y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if rows[row..].iter().any(|r| r[m]) {
        return Err(Error::NoSigningFound);
    }
    let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    let solve = |assignment: u64| -> Vec<bool> {
        let mut x = vec![false; m];
        for (b, &c) in free.iter().enumerate() {
            x[c] = assignment >> b & 1 == 1;
        }
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = free.iter().fold(rows[r][m], |acc, &f| acc ^ (rows[r][f] && x[f]));
        }
        x
    };
    let best = if free.len() <= MIN_WEIGHT_SEARCH_BITS {
        (0..1u64 << free.len())
            .map(&solve)
            .min_by_key(|x| (x.iter().filter(|&&b| b).count(), x.clone()))
            .expect("at least one assignment")
    } else {
        solve(0)
    };
    Ok(best.into_iter().map(|b| if b { -1 } else { 1 }).collect())
}

/// Signed weighted adjacency matrix, rows white and columns black.
pub fn kasteleyn_matrix(g: &PlanarBipartiteGraph) -> Result<RationalMatrix> {
    if !has_perfect_matching(&g.allowed()) {
        return Err(Error::NoPerfectMatching);
    }
    let signs = kasteleyn_signs(g)?;
    let mut k = RationalMatrix::zeros(g.side, g.side);
    for (e, s) in g.edges.iter().zip(signs) {
        k[(e.white, e.black)] = if s < 0 { -e.weight.clone() } else { e.weight.clone() };
    }
    Ok(k)
}

/// `A_i = (K_i K^{-1})ᵗ` where `K_i` scales each entry by the edge's share of
/// color `i`. Positions are white vertices.
pub fn dimer_measure(g: &PlanarBipartiteGraph) -> Result<KDetMeasure> {
    let k = kasteleyn_matrix(g)?;
    let inv = k.inverse()?;
    let mats = (0..g.k)
        .map(|i| {
            let mut ki = RationalMatrix::zeros(g.side, g.side);
            for e in &g.edges {
                ki[(e.white, e.black)] = &k[(e.white, e.black)] * &e.split[i] / &e.weight;
            }
            (&ki * &inv).transpose()
        })
        .collect();
    KDetMeasure::new(mats)
}

/// Weighted number of perfect matchings.
pub fn dimer_cover_weight(g: &PlanarBipartiteGraph) -> Rational {
    pattern_permutations(&g.allowed())
        .iter()
        .map(|sigma| cover_weight(g, sigma))
        .fold(Rational::zero(), |a, b| a + b)
}

fn cover_weight(g: &PlanarBipartiteGraph, sigma: &[usize]) -> Rational {
    sigma
        .iter()
        .enumerate()
        .map(|(w, &b)| g.edge_at(w, b).expect("pattern edge").weight.clone())
        .fold(Rational::one(), |a, b| a * b)
}

/// Enumerates matchings and independent edge colorings directly.
pub fn dimer_enum_oracle(g: &PlanarBipartiteGraph, max_side: usize) -> Result<ColoringDistribution> {
    if g.side > max_side {
        return Err(Error::TooLarge(format!("{} white vertices exceeds {max_side}", g.side)));
    }
    let covers = pattern_permutations(&g.allowed());
    if covers.is_empty() {
        return Err(Error::NoPerfectMatching);
    }
    let mut probs: BTreeMap<Coloring, Rational> = BTreeMap::new();
    let mut z = Rational::zero();
    for sigma in &covers {
        let edges: Vec<&DimerEdge> = sigma
            .iter()
            .enumerate()
            .map(|(w, &b)| g.edge_at(w, b).expect("pattern edge"))
            .collect();
        z += cover_weight(g, sigma);
        spread(&edges, &mut Vec::new(), Rational::one(), &mut probs);
    }
    probs.retain(|_, p| !p.is_zero());
    for p in probs.values_mut() {
        *p /= &z;
    }
    Ok(ColoringDistribution::from_map(g.side, g.k, probs))
}

/// Adds `Π split[x_w]` for every coloring `x` with nonzero weight.
pub(super) fn spread<E: SplitEdge>(
    edges: &[E],
    prefix: &mut Vec<usize>,
    acc: Rational,
    out: &mut BTreeMap<Coloring, Rational>,
) {
    let t = prefix.len();
    if t == edges.len() {
        *out.entry(Coloring::from_zero_based(prefix.clone()))
            .or_insert_with(Rational::zero) += acc;
        return;
    }
    for (c, w) in edges[t].split().iter().enumerate() {
        if !w.is_zero() {
            prefix.push(c);
            spread(edges, prefix, &acc * w, out);
            prefix.pop();
        }
    }
}

pub(super) trait SplitEdge {
    fn split(&self) -> &[Rational];
}

impl SplitEdge for &DimerEdge {
    fn split(&self) -> &[Rational] {
        &self.split
    }
}
