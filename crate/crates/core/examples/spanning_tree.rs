//! Colored spanning trees: Kirchhoff's count and the determinantal measure
//! against enumeration, on a 4-cycle with a chord.

use multidet::graphs::{
    laplacian_parts, spanning_tree_weight, tree_enum_oracle, tree_measure, ConductanceGraph, TreeEdge,
};
use multidet::linalg::rat;
use multidet::measure::{brute_force_dist, DEFAULT_CAP};

fn edge(u: usize, v: usize, split: [i64; 2]) -> TreeEdge {
    let split: Vec<_> = split.iter().map(|&c| rat(c, 1)).collect();
    TreeEdge {
        u,
        v,
        conductance: &split[0] + &split[1],
        split,
    }
}

fn main() -> multidet::Result<()> {
    let g = ConductanceGraph::new(
        4,
        0,
        2,
        vec![
            edge(0, 1, [1, 0]),
            edge(1, 2, [1, 1]),
            edge(2, 3, [0, 2]),
            edge(3, 0, [1, 2]),
            edge(0, 2, [3, 1]),
        ],
    )?;
    let (reduced, _) = laplacian_parts(&g);
    println!("det of reduced Laplacian: {}", reduced.det()?);
    println!("weighted tree count:      {}", spanning_tree_weight(&g, 8)?);

    let m = tree_measure(&g)?;
    let exact = brute_force_dist(&m, DEFAULT_CAP)?;
    let oracle = tree_enum_oracle(&g, 8)?;
    println!("coloring,probability");
    for (x, p) in exact.iter() {
        println!("{x},{p}");
    }
    assert_eq!(exact, oracle);
    Ok(())
}
