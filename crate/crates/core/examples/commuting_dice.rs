//! Commuting symmetric matrices: the color counts are a sum of independent
//! dice, one per common eigenvector. Single colorings can still get negative
//! mass, so only the counts are compared.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multidet::linalg::rational_to_f64;
use multidet::measure::{color_count_dist, commuting_factorization, validate, DEFAULT_CAP};
use multidet::random::commuting_measure;

fn main() -> multidet::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = commuting_measure(&mut rng, 4, 3);
    let report = validate(&m, DEFAULT_CAP)?;
    println!("min point mass {} (valid {})", report.min, report.is_valid());

    let f = commuting_factorization(&m, 1e-12, DEFAULT_CAP)?;
    for (i, die) in f.dice.iter().enumerate() {
        let faces: Vec<String> = die.iter().map(|p| format!("{p:.4}")).collect();
        println!("die {}: {}", i + 1, faces.join(" "));
    }
    println!("counts,exact,dice");
    for (counts, p) in color_count_dist(&m, DEFAULT_CAP)? {
        let label: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
        println!(
            "{},{:.6},{:.6}",
            label.join(" "),
            rational_to_f64(&p),
            f.convolution.get(&counts).copied().unwrap_or(0.0)
        );
    }
    println!("max deviation {:e}", f.max_deviation);
    Ok(())
}
