//! Measures built from the three example families: Grassmannian slices,
//! dimer models on planar bipartite graphs, and rooted spanning trees.

mod dimer;
mod grassmann;
mod tree;

pub use dimer::{
    dimer_cover_weight, dimer_enum_oracle, dimer_measure, kasteleyn_matrix, kasteleyn_signs, DimerEdge,
    PlanarBipartiteGraph, DIMER_ENUM_MAX,
};
pub use grassmann::{from_grassmannian, slice_matrices, tnn_check, GrassmannSlice, TnnReport};
pub use tree::{
    laplacian_parts, spanning_tree_weight, tree_enum_oracle, tree_measure, tree_measure_symmetric, ConductanceGraph,
    TreeEdge, TREE_ENUM_MAX,
};

/// Every permutation `σ` with `allowed[r]` containing `σ[r]` for each row
/// `r`, in lexicographic order.
pub(crate) fn pattern_permutations(allowed: &[Vec<usize>]) -> Vec<Vec<usize>> {
    fn go(allowed: &[Vec<usize>], used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let r = cur.len();
        if r == allowed.len() {
            out.push(cur.clone());
            return;
        }
        for &c in &allowed[r] {
            if !used[c] {
                used[c] = true;
                cur.push(c);
                go(allowed, used, cur, out);
                cur.pop();
                used[c] = false;
            }
        }
    }
    let n = allowed.len();
    let mut out = Vec::new();
    go(allowed, &mut vec![false; n], &mut Vec::with_capacity(n), &mut out);
    out
}

/// Whether some permutation fits the pattern, by augmenting paths.
pub(crate) fn has_perfect_matching(allowed: &[Vec<usize>]) -> bool {
    fn augment(r: usize, allowed: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &c in &allowed[r] {
            if !seen[c] {
                seen[c] = true;
                if owner[c].is_none_or(|o| augment(o, allowed, seen, owner)) {
                    owner[c] = Some(r);
                    return true;
                }
            }
        }
        false
    }
    let n = allowed.len();
    let mut owner = vec![None; n];
    (0..n).all(|r| augment(r, allowed, &mut vec![false; n], &mut owner))
}
