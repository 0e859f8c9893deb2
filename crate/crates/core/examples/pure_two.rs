//! Two-color pure measures from a sign-compatible pair (I A), (I B).

use multidet::linalg::{combinations, IndexSet, RationalMatrix};
use multidet::measure::{validate, DEFAULT_CAP};
use multidet::pure::{
    check_sign_compatible, complementary_minor_identity, decode_to_measure, det_i_plus_abt, pure2_from_pair,
    GrassmannPair,
};

fn main() -> multidet::Result<()> {
    let a = RationalMatrix::from_i64(&[&[1, 1, 1], &[1, 2, 4]]);
    // scaling the columns of A by positive numbers keeps every sign
    let b = RationalMatrix::from_i64(&[&[2, 1, 3], &[2, 2, 12]]);
    let pair = GrassmannPair::new(a, b.clone())?;
    let sign = check_sign_compatible(&pair);
    println!("compatible {} ({} nonzero pairs)", sign.compatible, sign.nonzero_pairs);
    if !sign.compatible {
        println!(
            "opposite signs at {}",
            sign.opposite.map(|j| j.to_string()).unwrap_or_default()
        );
        return Ok(());
    }

    let cb = det_i_plus_abt(&pair)?;
    println!(
        "det(I + A B^t) = {} over {} terms, min term {}",
        cb.value, cb.terms, cb.min_term
    );

    let e = pure2_from_pair(&pair)?;
    let m = decode_to_measure(&e)?;
    let report = validate(&m, DEFAULT_CAP)?;
    println!(
        "total {}, support {}, valid {}",
        report.total.clone().unwrap(),
        report.support_size.unwrap(),
        report.is_valid()
    );

    let n = pair.n();
    let all = combinations(n, 2).all(|j| {
        let j = IndexSet::new(j.iter().map(|i| i + 1).collect(), n).unwrap();
        complementary_minor_identity(&b, &j).unwrap().holds()
    });
    println!("complementary minors agree: {all}");
    Ok(())
}
