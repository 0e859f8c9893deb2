//! Permutation measure from the signed Heawood incidence matrix. Every
//! permutation in the support has probability 1/24.

use multidet::fixtures::{heawood_matrix, heawood_rule};
use multidet::perm::{perm_measure_from_matrix, support_enum};

fn main() -> multidet::Result<()> {
    let v = heawood_matrix();
    let pm = perm_measure_from_matrix(&v)?;
    let support = support_enum(&pm, 10)?;
    println!("{} permutations", support.len());
    for (sigma, p) in &support {
        let word: String = sigma.iter().map(|s| s.to_string()).collect();
        println!("{word} {p} rule={}", heawood_rule(sigma));
    }
    Ok(())
}
