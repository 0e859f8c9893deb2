//! Real zero set of det(x1 A1 + x2 A2 + x3 A3) on the chart x1 = 1, as CSV
//! for plotting.
//!
//! Default: spanning-tree measure on K8 with three colors and random
//! conductances. With `--interlace`, a symmetric positive semidefinite
//! measure on four positions is drawn together with its restriction to three,
//! and the two curves interlace. Restricting the (non-symmetric) tree measure
//! would not do: its marginals are not those of the symmetric form.
//! `--config DIR` also writes the inputs as JSON.
//!
//! ```text
//! cargo run --example vinnikov > curve.csv
//! cargo run --example vinnikov -- --interlace > pair.csv
//! ```

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multidet::graphs::tree_measure;
use multidet::io::{write_document, Document};
use multidet::linalg::{IndexSet, RationalMatrix};
use multidet::measure::{pencil_roots, KDetMeasure};
use multidet::random;

const TOL: f64 = 1e-9;

fn complete(vertices: usize) -> Vec<(usize, usize)> {
    (0..vertices)
        .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
        .collect()
}

fn floats(m: &KDetMeasure) -> Vec<DMatrix<f64>> {
    m.mats().iter().map(RationalMatrix::to_f64).collect()
}

/// Roots in x3 along the line (1, x2, ·).
fn roots(mats: &[DMatrix<f64>], x2: f64) -> Vec<f64> {
    let e = &mats[0] + &mats[1] * x2;
    let Ok((zs, _)) = pencil_roots(&e, &mats[2], TOL) else {
        return Vec::new();
    };
    let mut real: Vec<f64> = zs
        .iter()
        .filter(|z| z.im.abs() <= TOL.sqrt() * z.norm().max(1.0))
        .map(|z| z.re)
        .collect();
    real.sort_by(f64::total_cmp);
    real
}

fn main() -> multidet::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let interlace = args.iter().any(|a| a == "--interlace");
    let config = args.iter().position(|a| a == "--config").and_then(|i| args.get(i + 1));

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let dir = config.map(std::path::Path::new);
    let m = if interlace {
        let m = random::psd_measure(&mut rng, 4, 3);
        if let Some(dir) = dir {
            write_document(&dir.join("interlace_measure.json"), &Document::from(&m))?;
        }
        m
    } else {
        let g = random::conductance_graph(&mut rng, 8, 3, &complete(8), 0.0);
        let m = tree_measure(&g)?;
        if let Some(dir) = dir {
            write_document(&dir.join("k8_tree_graph.json"), &Document::from(&g))?;
            write_document(&dir.join("k8_tree_measure.json"), &Document::from(&m))?;
        }
        m
    };
    let mut curves = vec![("P", floats(&m))];
    if interlace {
        let r = m.restrict(&IndexSet::new(vec![1, 2, 3], m.n())?)?;
        curves.push(("restricted", floats(&r)));
    }

    println!("curve,x,y");
    let steps = 401;
    for s in 0..steps {
        let x2 = -20.0 + 40.0 * s as f64 / (steps - 1) as f64;
        for (name, mats) in &curves {
            for y in roots(mats, x2) {
                println!("{name},{x2},{y}");
            }
        }
    }
    Ok(())
}
