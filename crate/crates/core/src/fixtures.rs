//! Small worked instances used by tests, examples and the shipped goldens.

use crate::graphs::{DimerEdge, PlanarBipartiteGraph};
use crate::linalg::{rat, RationalMatrix};
use crate::measure::KDetMeasure;

/// The signed adjacency matrix of the three-by-three dimer example.
/// Rows are white vertices, columns black vertices.
pub fn three_kasteleyn() -> RationalMatrix {
    RationalMatrix::from_i64(&[&[1, 1, 0], &[1, -1, 1], &[0, 1, 1]])
}

/// The three-by-three dimer graph with unit weights, its two square faces,
/// the displayed signs, and every edge taking the color of its black vertex.
pub fn three_dimer_graph() -> PlanarBipartiteGraph {
    let k = three_kasteleyn();
    let mut edges = Vec::new();
    for w in 0..3 {
        for b in 0..3 {
            let entry = &k[(w, b)];
            if *entry == rat(0, 1) {
                continue;
            }
            let mut split = vec![rat(0, 1); 3];
            split[b] = rat(1, 1);
            edges.push(DimerEdge {
                white: w,
                black: b,
                weight: rat(1, 1),
                sign: Some(if *entry < rat(0, 1) { -1 } else { 1 }),
                split,
            });
        }
    }
    // edges: w1b1 w1b2 w2b1 w2b2 w2b3 w3b2 w3b3
    PlanarBipartiteGraph::new(3, 3, edges, vec![vec![0, 1, 3, 2], vec![3, 4, 6, 5]])
        .expect("fixture graph is well formed")
}

/// The measure of the dimer example with black vertices colored r, g, b
/// (colors 1, 2, 3), entered as displayed rather than computed.
pub fn three_dimer_measure() -> KDetMeasure {
    let a_r = RationalMatrix::from_ratios(&[
        &[(2, 3), (2, 3), (0, 1)],
        &[(1, 3), (1, 3), (0, 1)],
        &[(-1, 3), (-1, 3), (0, 1)],
    ]);
    let a_g = RationalMatrix::from_ratios(&[
        &[(1, 3), (-1, 3), (1, 3)],
        &[(-1, 3), (1, 3), (-1, 3)],
        &[(1, 3), (-1, 3), (1, 3)],
    ]);
    let a_b = RationalMatrix::from_ratios(&[
        &[(0, 1), (-1, 3), (-1, 3)],
        &[(0, 1), (1, 3), (1, 3)],
        &[(0, 1), (2, 3), (2, 3)],
    ]);
    KDetMeasure::new(vec![a_r, a_g, a_b]).expect("displayed matrices sum to I")
}

/// Bipartite adjacency matrix of the Heawood graph; all-plus is a valid
/// signing.
pub fn heawood_matrix() -> RationalMatrix {
    RationalMatrix::from_i64(&[
        &[1, 0, 1, 0, 0, 0, 1],
        &[1, 1, 0, 1, 0, 0, 0],
        &[0, 1, 1, 0, 1, 0, 0],
        &[0, 0, 1, 1, 0, 1, 0],
        &[0, 0, 0, 1, 1, 0, 1],
        &[1, 0, 0, 0, 1, 1, 0],
        &[0, 1, 0, 0, 0, 1, 1],
    ])
}

/// Membership rule for the Heawood support, one-line notation, 1-based:
/// `σ(i) ∈ {i+1, i, i−2}` taken mod 7.
pub fn heawood_rule(sigma: &[usize]) -> bool {
    sigma.iter().enumerate().all(|(i0, &s)| {
        let i = i0 + 1;
        [i + 1, i, i + 5].iter().any(|&t| (t - 1) % 7 + 1 == s)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn kasteleyn_det() {
        assert_eq!(three_kasteleyn().det().unwrap(), rat(-3, 1));
    }

    #[test]
    fn heawood_rule_example() {
        assert!(heawood_rule(&[1, 7, 3, 2, 6, 4, 5]));
        assert!(heawood_rule(&[1, 2, 3, 4, 5, 6, 7]));
        assert!(!heawood_rule(&[2, 1, 3, 4, 5, 6, 7]));
    }
}
