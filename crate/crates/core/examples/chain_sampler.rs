//! Exact chain-rule sampling, compared with the exact distribution.
//!
//! ```text
//! cargo run --release --example chain_sampler -- 20000 7
//! ```

use std::collections::BTreeMap;

use multidet::graphs::{tree_measure, ConductanceGraph, TreeEdge};
use multidet::linalg::{rat, rational_to_f64};
use multidet::measure::{brute_force_dist, DEFAULT_CAP};
use multidet::sampler::{ChainSampler, SamplerState};

fn main() -> multidet::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);

    // 4-cycle, two colors, uneven splits
    let edge = |u, v, a, b| TreeEdge {
        u,
        v,
        conductance: rat(a + b, 1),
        split: vec![rat(a, 1), rat(b, 1)],
    };
    let g = ConductanceGraph::new(
        4,
        0,
        2,
        vec![edge(0, 1, 1, 0), edge(1, 2, 2, 1), edge(2, 3, 1, 3), edge(3, 0, 3, 1)],
    )?;
    let m = tree_measure(&g)?;
    let exact = brute_force_dist(&m, DEFAULT_CAP)?;

    let mut sampler = ChainSampler::new(&m);
    let mut state = SamplerState::new(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..samples {
        *counts.entry(sampler.sample(&mut state)?).or_insert(0usize) += 1;
    }
    println!("coloring,exact,empirical");
    for (x, p) in exact.iter() {
        let seen = counts.get(x).copied().unwrap_or(0) as f64 / samples as f64;
        println!("{x},{:.5},{seen:.5}", rational_to_f64(p));
    }
    Ok(())
}
