//! A measure from a totally positive point of the Grassmannian: an n × kn
//! matrix whose columns are read off one color at a time.

use multidet::graphs::{from_grassmannian, slice_matrices, tnn_check, GrassmannSlice};
use multidet::linalg::{mixed_column_det, RationalMatrix};
use multidet::measure::{brute_force_dist, DEFAULT_CAP};

fn main() -> multidet::Result<()> {
    // Vandermonde rows 1, x, x^2 at nodes 1..6: all maximal minors positive
    let g = RationalMatrix::from_i64(&[&[1, 1, 1, 1, 1, 1], &[1, 2, 3, 4, 5, 6], &[1, 4, 9, 16, 25, 36]]);
    let slice = GrassmannSlice::new(2, g)?;
    let report = tnn_check(&slice, DEFAULT_CAP)?;
    println!(
        "{} minors, nonnegative {}, strictly positive {}",
        report.minors, report.nonnegative, report.strictly_positive
    );

    let raw = slice_matrices(&slice);
    let norm = from_grassmannian(&slice)?;
    let dist = brute_force_dist(&norm.measure, DEFAULT_CAP)?;
    println!("coloring,probability,minor");
    for (x, p) in dist.iter() {
        println!("{x},{p},{}", mixed_column_det(&raw, x)?);
    }
    println!("total {}", dist.total());
    Ok(())
}
