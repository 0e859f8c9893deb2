//! Wilson's algorithm on a large triangle of the triangular lattice with
//! wired boundary. Each vertex is colored by the direction of its outgoing
//! edge (1 horizontal, 2 slope √3, 3 slope −√3). Conductances at the edge
//! midpoint (x, y) are q^y, q^(x√3/2 − y/2) and q^(−x√3/2 − y/2) for the three
//! directions, rounded to six decimals.
//!
//! Prints `x,y,color` per interior vertex. `--config FILE` also writes the
//! graph so the CLI can sample it (`multidet sample FILE`).
//!
//! ```text
//! cargo run --release --example wilson_triangular -- --side 60 --q 0.95 > tree.csv
//! ```

use std::collections::HashMap;
use std::path::PathBuf;

use multidet::graphs::{ConductanceGraph, TreeEdge};
use multidet::io::{write_document, Document};
use multidet::linalg::{rat, Rational};
use multidet::sampler::{SamplerState, WilsonSampler};

const SQRT3: f64 = 1.732_050_807_568_877_2;

struct Grid {
    graph: ConductanceGraph,
    /// Plane coordinates of each non-root vertex, by vertex id.
    coords: Vec<(f64, f64)>,
}

fn rounded(c: f64) -> Rational {
    rat(((c * 1e6).round() as i64).max(1), 1_000_000)
}

/// Lattice point (a, b) sits at a + b/2, b√3/2, shifted so the centroid is
/// the origin. Boundary points all merge into vertex 0.
fn triangular_grid(side: usize, q: f64) -> multidet::Result<Grid> {
    let center = (side as f64 / 2.0, side as f64 * SQRT3 / 6.0);
    let place = |a: usize, b: usize| (a as f64 + b as f64 / 2.0 - center.0, b as f64 * SQRT3 / 2.0 - center.1);
    let boundary = |a: usize, b: usize| a == 0 || b == 0 || a + b == side;

    let mut id = HashMap::new();
    let mut coords = vec![(0.0, 0.0)];
    for b in 0..=side {
        for a in 0..=side - b {
            if !boundary(a, b) {
                id.insert((a, b), coords.len());
                coords.push(place(a, b));
            }
        }
    }
    let vertex = |a: usize, b: usize| if boundary(a, b) { 0 } else { id[&(a, b)] };

    let mut edges = Vec::new();
    for b in 0..=side {
        for a in 0..=side - b {
            let ends = [
                (a + 1 + b <= side).then(|| (a + 1, b)),
                (a + b < side).then(|| (a, b + 1)),
                (a > 0).then(|| (a - 1, b + 1)),
            ];
            for (class, end) in ends.into_iter().enumerate() {
                let Some((a2, b2)) = end else { continue };
                let (u, v) = (vertex(a, b), vertex(a2, b2));
                if u == v {
                    continue;
                }
                let (x0, y0) = place(a, b);
                let (x1, y1) = place(a2, b2);
                let (x, y) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
                let exponent = match class {
                    0 => y,
                    1 => x * SQRT3 / 2.0 - y / 2.0,
                    _ => -x * SQRT3 / 2.0 - y / 2.0,
                };
                let c = rounded(q.powf(exponent));
                let mut split = vec![Rational::from_integer(0.into()); 3];
                split[class] = c.clone();
                edges.push(TreeEdge {
                    u,
                    v,
                    conductance: c,
                    split,
                });
            }
        }
    }
    Ok(Grid {
        graph: ConductanceGraph::new(coords.len(), 0, 3, edges)?,
        coords,
    })
}

fn main() -> multidet::Result<()> {
    let mut side = 30;
    let mut q = 0.9;
    let mut seed = 1;
    let mut config: Option<PathBuf> = None;
    let mut args = std::env::args().skip(1);
    while let Some(flag) = args.next() {
        let value = args.next().unwrap_or_default();
        match flag.as_str() {
            "--side" => side = value.parse().expect("--side N"),
            "--q" => q = value.parse().expect("--q X"),
            "--seed" => seed = value.parse().expect("--seed N"),
            "--config" => config = Some(value.into()),
            other => panic!("unknown flag {other}"),
        }
    }

    let grid = triangular_grid(side, q)?;
    if let Some(path) = &config {
        write_document(path, &Document::from(&grid.graph))?;
    }
    let sampler = WilsonSampler::new(&grid.graph)?;
    let tree = sampler.sample(&mut SamplerState::new(seed));
    println!("x,y,color");
    for (v, &(x, y)) in grid.coords.iter().enumerate().skip(1) {
        let color = tree.edge_color[v].expect("non-root vertex") + 1;
        println!("{x:.4},{y:.4},{color}");
    }
    Ok(())
}
