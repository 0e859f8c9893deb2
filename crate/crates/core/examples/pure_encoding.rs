//! Pure measures through one matrix L: probabilities are signed products of
//! block minors, and the matrices are projections.

use num_traits::{Signed, Zero};

use multidet::linalg::{Coloring, Rational, RationalMatrix};
use multidet::measure::{purity_check, triple_support_check};
use multidet::pure::{admissible_colorings, decode_to_measure, encode_from_measure, prob_via_minors, PureEncoding};

fn main() -> multidet::Result<()> {
    let l = RationalMatrix::from_i64(&[
        &[1, 0, 1, 2, 0, 1],
        &[0, 1, 1, 0, 1, 0],
        &[2, 1, 0, 1, 0, 0],
        &[0, 0, 1, 1, 1, 1],
        &[1, 1, 0, 0, 2, 1],
        &[0, 1, 0, 1, 0, 2],
    ]);
    let e = PureEncoding::new(vec![2, 2, 2], l)?;
    let m = decode_to_measure(&e)?;
    let report = purity_check(&m)?;
    println!("ranks {:?}, projections {:?}", report.ranks, report.projections);

    // a generic L gives signed values; nothing here needs nonnegativity
    let admissible = admissible_colorings(e.blocks());
    let values: Vec<Rational> = admissible.iter().map(|x| prob_via_minors(&e, x)).collect();
    let negative = values.iter().filter(|v| v.is_negative()).count();
    let total = values.iter().fold(Rational::zero(), |a, b| a + b);
    println!(
        "{} admissible colorings, {negative} negative, sum {total}",
        admissible.len()
    );
    for x in admissible.iter().take(6) {
        println!("  {x}: minors {} measure {}", prob_via_minors(&e, x), m.point_prob(x)?);
    }

    // any pure measure has the product identity on a triple of positions
    let base = Coloring::from_one_based(&[2, 1, 1, 3, 2, 3])?;
    let t = triple_support_check(&m, [1, 2, 4], &base)?;
    println!(
        "cyclic {:?} -> {}",
        t.cyclic.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        t.cyclic_product
    );
    println!(
        "anticyclic {:?} -> {}",
        t.anticyclic.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        t.anticyclic_product
    );
    println!("identity holds: {}", t.identity_holds());

    let back = encode_from_measure(&m)?;
    assert_eq!(decode_to_measure(&back)?, m);
    println!("q = {}, re-encoded q = {}", e.q(), back.q());
    Ok(())
}
