//! The three-vertex dimer example: Kasteleyn signs, the measure, and a check
//! against direct enumeration of matchings.

use multidet::fixtures::three_dimer_graph;
use multidet::graphs::{dimer_cover_weight, dimer_enum_oracle, dimer_measure, kasteleyn_matrix, kasteleyn_signs};
use multidet::measure::{brute_force_dist, DEFAULT_CAP};

fn main() -> multidet::Result<()> {
    let g = three_dimer_graph();
    println!("signs: {:?}", kasteleyn_signs(&g)?);
    println!("K =\n{}", kasteleyn_matrix(&g)?);
    println!("matching weight: {}", dimer_cover_weight(&g));

    let m = dimer_measure(&g)?;
    for (i, a) in m.mats().iter().enumerate() {
        println!("A_{} =\n{a}", i + 1);
    }

    let exact = brute_force_dist(&m, DEFAULT_CAP)?;
    let oracle = dimer_enum_oracle(&g, 8)?;
    for (x, p) in exact.iter() {
        println!("Pr({x}) = {p}  (matchings: {})", oracle.get(x));
    }
    assert_eq!(exact, oracle);
    Ok(())
}
