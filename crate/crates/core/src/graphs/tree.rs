use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

use super::dimer::{spread, SplitEdge};
use crate::error::{Error, Result};
use crate::linalg::{Coloring, Rational, RationalMatrix};
use crate::measure::{symmetric_sandwich, ColoringDistribution, FloatMeasure, KDetMeasure};

/// Largest vertex count the tree oracle enumerates by default.
pub const TREE_ENUM_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub conductance: Rational,
    /// Per-color conductances summing to `conductance`.
    pub split: Vec<Rational>,
}

impl SplitEdge for &TreeEdge {
    fn split(&self) -> &[Rational] {
        &self.split
    }
}

/// Undirected graph on vertices `0..vertices` with a root. Positions of the
/// measure are the non-root vertices in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConductanceGraph {
    vertices: usize,
    root: usize,
    k: usize,
    edges: Vec<TreeEdge>,
}

impl ConductanceGraph {
    pub fn new(vertices: usize, root: usize, k: usize, edges: Vec<TreeEdge>) -> Result<Self> {
        if root >= vertices {
            return Err(Error::IndexOutOfRange {
                index: root,
                bound: vertices,
            });
        }
        if k == 0 {
            return Err(Error::InvalidInput("need at least one color".into()));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertices || e.v >= vertices {
                return Err(Error::IndexOutOfRange {
                    index: e.u.max(e.v),
                    bound: vertices,
                });
            }
            if e.u == e.v {
                return Err(Error::InvalidInput(format!("edge {} is a loop", i + 1)));
            }
            if !e.conductance.is_positive() {
                return Err(Error::InvalidInput(format!(
                    "edge {} has nonpositive conductance",
                    i + 1
                )));
            }
            if e.split.len() != k || e.split.iter().any(Signed::is_negative) {
                return Err(Error::InvalidInput(format!("edge {} has a bad color split", i + 1)));
            }
            if e.split.iter().fold(Rational::zero(), |a, b| a + b) != e.conductance {
                return Err(Error::InvalidInput(format!(
                    "edge {} split does not sum to its conductance",
                    i + 1
                )));
            }
        }
        Ok(ConductanceGraph {
            vertices,
            root,
            k,
            edges,
        })
    }

    /// Convenience constructor: root 0 and every edge split evenly.
    pub fn even_split(vertices: usize, k: usize, edges: &[(usize, usize, Rational)]) -> Result<Self> {
        let share = Rational::from_integer((k as i64).into());
        let edges = edges
            .iter()
            .map(|(u, v, c)| TreeEdge {
                u: *u,
                v: *v,
                conductance: c.clone(),
                split: vec![c / &share; k],
            })
            .collect();
        Self::new(vertices, 0, k, edges)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    /// Non-root vertices in position order.
    pub fn positions(&self) -> Vec<usize> {
        (0..self.vertices).filter(|&v| v != self.root).collect()
    }

    /// Position index (zero-based) of a non-root vertex.
    pub fn position_of(&self, v: usize) -> Option<usize> {
        (v != self.root && v < self.vertices).then(|| if v < self.root { v } else { v - 1 })
    }

    /// `(edge index, other endpoint)` for every edge at `v`.
    pub fn incident(&self, v: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| match (e.u == v, e.v == v) {
                (true, _) => Some((i, e.v)),
                (_, true) => Some((i, e.u)),
                _ => None,
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![self.root];
        seen[self.root] = true;
        while let Some(v) = stack.pop() {
            for (_, u) in self.incident(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Reduced Laplacian and its per-color parts, rows and columns in position
/// order.
pub fn laplacian_parts(g: &ConductanceGraph) -> (RationalMatrix, Vec<RationalMatrix>) {
    let n = g.vertices - 1;
    let mut parts = vec![RationalMatrix::zeros(n, n); g.k];
    for e in &g.edges {
        let (pu, pv) = (g.position_of(e.u), g.position_of(e.v));
        for (part, c) in parts.iter_mut().zip(&e.split) {
            if let Some(a) = pu {
                part[(a, a)] += c;
            }
            if let Some(b) = pv {
                part[(b, b)] += c;
            }
            if let (Some(a), Some(b)) = (pu, pv) {
                part[(a, b)] -= c;
                part[(b, a)] -= c;
            }
        }
    }
    let total = parts.iter().fold(RationalMatrix::zeros(n, n), |acc, p| &acc + p);
    (total, parts)
}

/// `A_i = (Δ')^{-1} Δ'_i`.
pub fn tree_measure(g: &ConductanceGraph) -> Result<KDetMeasure> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (total, parts) = laplacian_parts(g);
    let inv = total.inverse()?;
    KDetMeasure::new(parts.iter().map(|p| &inv * p).collect())
}

/// `A_i = (Δ')^{-1/2} Δ'_i (Δ')^{-1/2}` in floating point.
pub fn tree_measure_symmetric(g: &ConductanceGraph, tol: f64) -> Result<FloatMeasure> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (_, parts) = laplacian_parts(g);
    let parts: Vec<DMatrix<f64>> = parts.iter().map(RationalMatrix::to_f64).collect();
    symmetric_sandwich(&parts, tol)
}

/// Visits every choice of one out-edge per non-root vertex that forms a
/// tree directed to the root. The callback gets edge indices in position
/// order.
fn for_each_rooted_tree(g: &ConductanceGraph, mut f: impl FnMut(&[usize])) {
    let positions = g.positions();
    let options: Vec<Vec<(usize, usize)>> = positions.iter().map(|&v| g.incident(v)).collect();
    let mut parent = vec![usize::MAX; g.vertices];
    let mut chosen = Vec::with_capacity(positions.len());
    fn reaches_root(v: usize, parent: &[usize], root: usize, limit: usize) -> bool {
        let mut cur = v;
        for _ in 0..=limit {
            if cur == root {
                return true;
            }
            cur = parent[cur];
            if cur == usize::MAX {
                return true;
            }
        }
        false
    }
    fn go(
        t: usize,
        g: &ConductanceGraph,
        positions: &[usize],
        options: &[Vec<(usize, usize)>],
        parent: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if t == positions.len() {
            f(chosen);
            return;
        }
        let v = positions[t];
        for &(e, u) in &options[t] {
            parent[v] = u;
            // a cycle can only close through the vertex just assigned
            if reaches_root(v, parent, g.root, positions.len()) {
                chosen.push(e);
                go(t + 1, g, positions, options, parent, chosen, f);
                chosen.pop();
            }
        }
        parent[v] = usize::MAX;
    }
    go(0, g, &positions, &options, &mut parent, &mut chosen, &mut f);
}

/// Weighted count of spanning trees by enumeration.
pub fn spanning_tree_weight(g: &ConductanceGraph, max_vertices: usize) -> Result<Rational> {
    if g.vertices > max_vertices {
        return Err(Error::TooLarge(format!(
            "{} vertices exceeds {max_vertices}",
            g.vertices
        )));
    }
    let mut total = Rational::zero();
    for_each_rooted_tree(g, |edges| {
        total += edges
            .iter()
            .fold(Rational::one(), |acc, &e| acc * &g.edges[e].conductance);
    });
    Ok(total)
}

/// Sums over rooted trees and independent edge colors, coloring each
/// non-root vertex by its out-edge.
pub fn tree_enum_oracle(g: &ConductanceGraph, max_vertices: usize) -> Result<ColoringDistribution> {
    if g.vertices > max_vertices {
        return Err(Error::TooLarge(format!(
            "{} vertices exceeds {max_vertices}",
            g.vertices
        )));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut probs: BTreeMap<Coloring, Rational> = BTreeMap::new();
    for_each_rooted_tree(g, |edges| {
        let refs: Vec<&TreeEdge> = edges.iter().map(|&e| &g.edges[e]).collect();
        spread(&refs, &mut Vec::new(), Rational::one(), &mut probs);
    });
    probs.retain(|_, p| !p.is_zero());
    let z = probs.values().fold(Rational::zero(), |a, b| a + b);
    for p in probs.values_mut() {
        *p /= &z;
    }
    Ok(ColoringDistribution::from_map(g.vertices - 1, g.k, probs))
}
