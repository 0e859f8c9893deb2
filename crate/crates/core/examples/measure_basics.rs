//! Build a measure from an unnormalized pair, then query it.
//!
//! ```text
//! cargo run --example measure_basics
//! ```

use multidet::linalg::{rat, Coloring, IndexSet, RationalMatrix};
use multidet::measure::{brute_force_dist, charpoly, normalize, validate, MarginalQuery, DEFAULT_CAP};

fn main() -> multidet::Result<()> {
    let b1 = RationalMatrix::from_i64(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]);
    let b2 = RationalMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 3]]);
    let norm = normalize(vec![b1, b2])?;
    let m = norm.measure;
    println!("det of the sum: {}", norm.det_sum);

    let report = validate(&m, DEFAULT_CAP)?;
    println!(
        "total {}, min {}, valid {}",
        report.total.clone().unwrap(),
        report.min,
        report.is_valid()
    );

    for (x, p) in brute_force_dist(&m, DEFAULT_CAP)?.iter() {
        println!("  Pr({x}) = {p}");
    }

    let q = MarginalQuery::new(vec![(1, 1), (3, 2)]);
    println!("Pr(x1 = 1, x3 = 2) = {}", m.marginal_prob(&q)?);

    let ends = m.restrict(&IndexSet::new(vec![1, 3], 3)?)?;
    println!(
        "restricted to {{1,3}}: Pr(12) = {}",
        ends.point_prob(&Coloring::from_one_based(&[1, 2])?)?
    );

    // merging both colors gives the trivial measure
    let merged = m.forget(&[1, 1])?;
    println!(
        "after forgetting colors: Pr(111) = {}",
        merged.point_prob(&Coloring::from_one_based(&[1, 1, 1])?)?
    );

    let p = charpoly(&m, DEFAULT_CAP)?;
    print!("characteristic polynomial:\n{p}");
    println!("value at (1/2, 1/2): {}", p.evaluate(&[rat(1, 2), rat(1, 2)]));
    Ok(())
}
