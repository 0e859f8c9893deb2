//! Random instances of every construction, for tests, examples and the
//! acceptance suite. All generators take an explicit RNG and return exact
//! data except the float sandwich measures.

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::graphs::{from_grassmannian, ConductanceGraph, DimerEdge, GrassmannSlice, PlanarBipartiteGraph, TreeEdge};
use crate::linalg::{rat, Coloring, Rational, RationalMatrix};
use crate::measure::{symmetric_sandwich, FloatMeasure, KDetMeasure};
use crate::perm::{perm_measure_from_matrix, pfaffian_signing_search, PermMeasure};
use crate::pure::{decode_to_measure, GrassmannPair, PureEncoding};

/// `p/q` with `p` in `-max..=max` and `q` in `1..=max`.
pub fn rational<R: Rng>(rng: &mut R, max: i64) -> Rational {
    rat(rng.gen_range(-max..=max), rng.gen_range(1..=max))
}

/// Strictly positive `p/q` with both in `1..=max`.
pub fn positive_rational<R: Rng>(rng: &mut R, max: i64) -> Rational {
    rat(rng.gen_range(1..=max), rng.gen_range(1..=max))
}

pub fn integer_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, max: i64) -> RationalMatrix {
    RationalMatrix::from_fn(rows, cols, |_, _| rat(rng.gen_range(-max..=max), 1))
}

/// Retries until the matrix is invertible.
pub fn invertible_matrix<R: Rng>(rng: &mut R, n: usize, max: i64) -> RationalMatrix {
    loop {
        let m = RationalMatrix::from_fn(n, n, |_, _| rational(rng, max));
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

/// Positive weights normalized to sum to one.
pub fn probability_vector<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    let w: Vec<Rational> = (0..k).map(|_| positive_rational(rng, 6)).collect();
    let total = w.iter().fold(Rational::zero(), |a, b| a + b);
    w.into_iter().map(|x| x / &total).collect()
}

/// `x_j^{e_i}` with increasing positive nodes and exponents: every minor is
/// positive.
pub fn tnn_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RationalMatrix {
    let mut nodes: Vec<i64> = (1..=(cols as i64 + 4)).collect();
    nodes.shuffle(rng);
    nodes.truncate(cols);
    nodes.sort_unstable();
    let mut exps: Vec<u32> = (0..(rows as u32 + 2)).collect();
    exps.shuffle(rng);
    exps.truncate(rows);
    exps.sort_unstable();
    RationalMatrix::from_fn(rows, cols, |i, j| rat(nodes[j].pow(exps[i]), 1))
}

/// Normalized slice of a totally positive point of the Grassmannian.
pub fn grassmannian_measure<R: Rng>(rng: &mut R, n: usize, k: usize) -> KDetMeasure {
    let g = GrassmannSlice::new(k, tnn_matrix(rng, n, n * k)).expect("full rank");
    from_grassmannian(&g).expect("positive minors").measure
}

/// `A_1 = (I + L)^{-1} L`, `A_2 = I - A_1` with `L = C Cᵗ`.
pub fn l_ensemble_measure<R: Rng>(rng: &mut R, n: usize) -> KDetMeasure {
    let c = integer_matrix(rng, n, n, 2);
    let l = &c * &c.transpose();
    let i = RationalMatrix::identity(n);
    let k = &(&i + &l).inverse().expect("I + L is positive definite") * &l;
    let rest = &i - &k;
    KDetMeasure::new(vec![k, rest]).expect("sums to I")
}

/// Independent colors: `A_i = diag(p_1(i), …, p_n(i))`.
pub fn diagonal_measure<R: Rng>(rng: &mut R, n: usize, k: usize) -> KDetMeasure {
    let probs: Vec<Vec<Rational>> = (0..n).map(|_| probability_vector(rng, k)).collect();
    let mats = (0..k)
        .map(|c| RationalMatrix::diagonal(&probs.iter().map(|p| p[c].clone()).collect::<Vec<_>>()))
        .collect();
    KDetMeasure::new(mats).expect("sums to I")
}

/// Rational orthogonal matrix `(I - S)(I + S)^{-1}` with `S` skew.
pub fn cayley_orthogonal<R: Rng>(rng: &mut R, n: usize) -> RationalMatrix {
    let mut s = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = rational(rng, 3);
            s[(j, i)] = -x.clone();
            s[(i, j)] = x;
        }
    }
    let i = RationalMatrix::identity(n);
    &(&i - &s) * &(&i + &s).inverse().expect("I + S is invertible for skew S")
}

/// Symmetric commuting measure `A_i = Q D_i Qᵗ`. Its color counts are a sum
/// of independent dice but single colorings may get negative mass.
pub fn commuting_measure<R: Rng>(rng: &mut R, n: usize, k: usize) -> KDetMeasure {
    let q = cayley_orthogonal(rng, n);
    let d = diagonal_measure(rng, n, k);
    let qt = q.transpose();
    KDetMeasure::new(d.mats().iter().map(|a| &(&q * a) * &qt).collect()).expect("sums to I")
}

/// Exact symmetric positive semidefinite matrices summing to `I`: scaled Gram
/// matrices `C Cᵗ / s` for the first `k − 1` colors and the remainder last.
/// Point probabilities need not be nonnegative.
pub fn psd_measure<R: Rng>(rng: &mut R, n: usize, k: usize) -> KDetMeasure {
    let grams: Vec<RationalMatrix> = (1..k)
        .map(|_| {
            let rank = rng.gen_range(1..=n);
            let c = integer_matrix(rng, n, rank, 2);
            &c * &c.transpose()
        })
        .collect();
    // the trace bounds the top eigenvalue, so the remainder stays definite
    let trace = grams
        .iter()
        .flat_map(|g| (0..n).map(move |i| g[(i, i)].clone()))
        .fold(Rational::one(), |a, b| a + b);
    let mut mats: Vec<RationalMatrix> = grams.iter().map(|g| g.scale(&trace.recip())).collect();
    let rest = mats.iter().fold(RationalMatrix::identity(n), |acc, a| &acc - a);
    mats.push(rest);
    KDetMeasure::new(mats).expect("sums to I")
}

/// Float symmetric measure `S^{-1/2} B_i S^{-1/2}` from random PSD `B_i`.
pub fn sandwich_measure<R: Rng>(rng: &mut R, n: usize, k: usize, tol: f64) -> Result<FloatMeasure> {
    let parts: Vec<DMatrix<f64>> = (0..k)
        .map(|_| {
            let rank = rng.gen_range(1..=n);
            let c = DMatrix::from_fn(n, rank, |_, _| rng.gen_range(-1.0..1.0));
            &c * c.transpose()
        })
        .collect();
    symmetric_sandwich(&parts, tol)
}

/// Connected graph: a random spanning tree plus each other pair with
/// probability `extra`.
pub fn connected_edges<R: Rng>(rng: &mut R, vertices: usize, extra: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..vertices).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (1..vertices)
        .map(|i| {
            let j = order[rng.gen_range(0..i)];
            (order[i].min(j), order[i].max(j))
        })
        .collect();
    for u in 0..vertices {
        for v in u + 1..vertices {
            if !edges.contains(&(u, v)) && rng.gen_bool(extra) {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// Random positive conductances split over `k` colors; a split entry is zero
/// with probability `zero`.
pub fn conductance_graph<R: Rng>(
    rng: &mut R,
    vertices: usize,
    k: usize,
    edges: &[(usize, usize)],
    zero: f64,
) -> ConductanceGraph {
    let edges = edges
        .iter()
        .map(|&(u, v)| {
            let mut split: Vec<Rational> = (0..k)
                .map(|_| {
                    if rng.gen_bool(zero) {
                        Rational::zero()
                    } else {
                        positive_rational(rng, 5)
                    }
                })
                .collect();
            if split.iter().all(Zero::is_zero) {
                split[rng.gen_range(0..k)] = Rational::one();
            }
            let conductance = split.iter().fold(Rational::zero(), |a, b| a + b);
            TreeEdge {
                u,
                v,
                conductance,
                split,
            }
        })
        .collect();
    ConductanceGraph::new(vertices, 0, k, edges).expect("valid graph")
}

/// Every connected simple graph on `2..=max_vertices` vertices, one per
/// isomorphism class. Brute force, so keep `max_vertices` small.
pub fn connected_graphs(max_vertices: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    for v in 2..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        let perms = permutations(v);
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            if !connected(v, &edges) {
                continue;
            }
            let canon = perms
                .iter()
                .map(|p| {
                    let mut e: Vec<(usize, usize)> =
                        edges.iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect();
                    e.sort_unstable();
                    e
                })
                .min()
                .expect("at least one permutation");
            if seen.insert(canon) {
                out.push((v, edges));
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(a) = stack.pop() {
        for &(x, y) in edges {
            let other = if x == a {
                y
            } else if y == a {
                x
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                stack.push(other);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// `rows × cols` square grid (`rows·cols` even) with unit-square faces,
/// random weights and splits. White vertices are those with `i + j` even.
pub fn grid_dimer_graph<R: Rng>(rng: &mut R, rows: usize, cols: usize, k: usize) -> PlanarBipartiteGraph {
    assert!(rows * cols % 2 == 0, "grid needs an even number of vertices");
    // index within its color class, row-major
    let class_index = |i: usize, j: usize| (i * cols + j) / 2;
    let mut edges = Vec::new();
    let mut edge_at = std::collections::HashMap::new();
    let mut add = |a: (usize, usize), b: (usize, usize), rng: &mut R| {
        let (w, bl) = if (a.0 + a.1) % 2 == 0 { (a, b) } else { (b, a) };
        let split: Vec<Rational> = (0..k).map(|_| positive_rational(rng, 4)).collect();
        let weight = split.iter().fold(Rational::zero(), |x, y| x + y);
        edge_at.insert((a.min(b), a.max(b)), edges.len());
        edges.push(DimerEdge {
            white: class_index(w.0, w.1),
            black: class_index(bl.0, bl.1),
            weight,
            sign: None,
            split,
        });
    };
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                add((i, j), (i, j + 1), rng);
            }
            if i + 1 < rows {
                add((i, j), (i + 1, j), rng);
            }
        }
    }
    let mut faces = Vec::new();
    for i in 0..rows.saturating_sub(1) {
        for j in 0..cols.saturating_sub(1) {
            let e = |a: (usize, usize), b: (usize, usize)| edge_at[&(a.min(b), a.max(b))];
            faces.push(vec![
                e((i, j), (i, j + 1)),
                e((i, j + 1), (i + 1, j + 1)),
                e((i + 1, j), (i + 1, j + 1)),
                e((i, j), (i + 1, j)),
            ]);
        }
    }
    PlanarBipartiteGraph::new(rows * cols / 2, k, edges, faces).expect("grid is a valid planar graph")
}

/// Grid dimer graph whose edges take the color of their black endpoint, so
/// the measure is pure. Every color is used when the grid has at least `k`
/// black vertices.
pub fn black_colored_dimer_graph<R: Rng>(rng: &mut R, rows: usize, cols: usize, k: usize) -> PlanarBipartiteGraph {
    let g = grid_dimer_graph(rng, rows, cols, 1);
    let mut colors: Vec<usize> = (0..g.side()).map(|b| b % k).collect();
    colors.shuffle(rng);
    let edges = g
        .edges()
        .iter()
        .map(|e| {
            let mut split = vec![Rational::zero(); k];
            split[colors[e.black]] = e.weight.clone();
            DimerEdge { split, ..e.clone() }
        })
        .collect();
    PlanarBipartiteGraph::new(g.side(), k, edges, g.faces().to_vec()).expect("same graph")
}

/// Random composition of `n` into `k` positive parts.
pub fn blocks<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    assert!(k >= 1 && k <= n);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    cuts.truncate(k - 1);
    cuts.sort_unstable();
    cuts.push(n);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let b = c - prev;
            prev = c;
            b
        })
        .collect()
}

pub fn pure_encoding<R: Rng>(rng: &mut R, blocks: Vec<usize>) -> PureEncoding {
    let n = blocks.iter().sum();
    PureEncoding::new(blocks, invertible_matrix(rng, n, 3)).expect("invertible L")
}

/// Pure measure with the given block sizes (not necessarily nonnegative).
pub fn pure_measure<R: Rng>(rng: &mut R, blocks: Vec<usize>) -> KDetMeasure {
    decode_to_measure(&pure_encoding(rng, blocks)).expect("decodes")
}

/// `(I A)`, `(I B)` with equal Plücker sign patterns: either both blocks
/// totally positive, or `B = A D` with `D` positive diagonal.
pub fn sign_compatible_pair<R: Rng>(rng: &mut R, n1: usize, n2: usize) -> GrassmannPair {
    let a = tnn_matrix(rng, n1, n2);
    let b = if rng.gen_bool(0.5) {
        tnn_matrix(rng, n1, n2)
    } else {
        let d: Vec<Rational> = (0..n2).map(|_| positive_rational(rng, 4)).collect();
        &a * &RationalMatrix::diagonal(&d)
    };
    GrassmannPair::new(a, b).expect("same shape")
}

/// Permutation measure on a random pattern containing the cycle
/// `σ(i) ∈ {i, i+1}`, signed by search. Retries non-Pfaffian patterns.
pub fn perm_measure<R: Rng>(rng: &mut R, n: usize, extra: f64) -> PermMeasure {
    loop {
        let w = RationalMatrix::from_fn(n, n, |i, j| {
            if j == i || j == (i + 1) % n || rng.gen_bool(extra) {
                positive_rational(rng, 4)
            } else {
                Rational::zero()
            }
        });
        if let Ok(v) = pfaffian_signing_search(&w) {
            return perm_measure_from_matrix(&v).expect("signed matrix is Pfaffian");
        }
    }
}

/// A random nonnegative measure: Grassmannian, diagonal, spanning-tree or
/// (for k = 2) L-ensemble. Commuting measures are left out since their point
/// probabilities can be negative.
pub fn valid_measure<R: Rng>(rng: &mut R, n: usize, k: usize) -> KDetMeasure {
    let choice = rng.gen_range(0..if k == 2 { 4 } else { 3 });
    match choice {
        0 => grassmannian_measure(rng, n, k),
        1 => diagonal_measure(rng, n, k),
        2 => {
            let edges = connected_edges(rng, n + 1, 0.4);
            crate::graphs::tree_measure(&conductance_graph(rng, n + 1, k, &edges, 0.2)).expect("connected")
        }
        _ => l_ensemble_measure(rng, n),
    }
}

/// Matrices with nonnegative mixed determinants that need normalizing.
pub fn unnormalized<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<RationalMatrix> {
    let m = grassmannian_measure(rng, n, k);
    let s = invertible_matrix(rng, n, 3);
    m.into_mats().iter().map(|a| &s * a).collect()
}

pub fn coloring<R: Rng>(rng: &mut R, n: usize, k: usize) -> Coloring {
    Coloring::from_zero_based((0..n).map(|_| rng.gen_range(0..k)).collect())
}
