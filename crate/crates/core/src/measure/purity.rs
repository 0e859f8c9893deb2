use super::KDetMeasure;
use crate::error::{Error, Result};
use crate::linalg::{Coloring, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityReport {
    pub ranks: Vec<usize>,
    pub pure: bool,
    /// Whether every matrix is idempotent; only computed for pure measures.
    pub projections: Option<bool>,
}

/// Ranks of the matrices and, when they sum to `n`, a check that each one is
/// a projection. A pure measure with a non-idempotent matrix is reported as
/// [`Error::ProjectionViolation`], since it cannot arise from valid input.
pub fn purity_check(m: &KDetMeasure) -> Result<PurityReport> {
    let ranks: Vec<usize> = m.mats().iter().map(|a| a.rank()).collect();
    let pure = ranks.iter().sum::<usize>() == m.n();
    let projections = if pure {
        if let Some(index) = m.mats().iter().position(|a| &(a * a) != a) {
            return Err(Error::ProjectionViolation { index: index + 1 });
        }
        Some(true)
    } else {
        None
    };
    Ok(PurityReport {
        ranks,
        pure,
        projections,
    })
}

/// The six colorings obtained by permuting the base colors at three
/// positions, split into the cyclic class (containing the base) and the
/// anticyclic class, with the product of probabilities over each class.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleReport {
    pub cyclic: [Coloring; 3],
    pub anticyclic: [Coloring; 3],
    pub cyclic_probs: [Rational; 3],
    pub anticyclic_probs: [Rational; 3],
    pub cyclic_product: Rational,
    pub anticyclic_product: Rational,
}

impl TripleReport {
    /// The product identity: cyclic product equals minus the anticyclic one.
    pub fn identity_holds(&self) -> bool {
        self.cyclic_product == -self.anticyclic_product.clone()
    }

    pub fn cyclic_all_positive(&self) -> bool {
        self.cyclic_probs.iter().all(|p| p > &Rational::from_integer(0.into()))
    }

    pub fn anticyclic_all_positive(&self) -> bool {
        self.anticyclic_probs
            .iter()
            .all(|p| p > &Rational::from_integer(0.into()))
    }
}

/// `positions` are 1-based and distinct; `base` must carry three distinct
/// colors there.
pub fn triple_support_check(m: &KDetMeasure, positions: [usize; 3], base: &Coloring) -> Result<TripleReport> {
    let report = purity_check(m)?;
    if !report.pure {
        return Err(Error::NotPure {
            rank_sum: report.ranks.iter().sum(),
            n: m.n(),
        });
    }
    if m.k() < 3 {
        return Err(Error::InvalidInput("triple check needs k >= 3".into()));
    }
    if base.len() != m.n() {
        return Err(Error::SizeMismatch("base coloring length".into()));
    }
    for &p in &positions {
        if p == 0 || p > m.n() {
            return Err(Error::IndexOutOfRange { index: p, bound: m.n() });
        }
    }
    let [p1, p2, p3] = positions.map(|p| p - 1);
    let c = base.colors();
    let (a, b, d) = (c[p1], c[p2], c[p3]);
    if p1 == p2 || p2 == p3 || p1 == p3 || a == b || b == d || a == d {
        return Err(Error::InvalidInput(
            "positions and their base colors must be distinct".into(),
        ));
    }
    let place = |x: usize, y: usize, z: usize| base.with(p1, x).with(p2, y).with(p3, z);
    let cyclic = [place(a, b, d), place(b, d, a), place(d, a, b)];
    let anticyclic = [place(b, a, d), place(a, d, b), place(d, b, a)];
    let probs = |cs: &[Coloring; 3]| -> Result<[Rational; 3]> {
        Ok([m.point_prob(&cs[0])?, m.point_prob(&cs[1])?, m.point_prob(&cs[2])?])
    };
    let cyclic_probs = probs(&cyclic)?;
    let anticyclic_probs = probs(&anticyclic)?;
    let product = |ps: &[Rational; 3]| &ps[0] * &ps[1] * &ps[2];
    Ok(TripleReport {
        cyclic_product: product(&cyclic_probs),
        anticyclic_product: product(&anticyclic_probs),
        cyclic,
        anticyclic,
        cyclic_probs,
        anticyclic_probs,
    })
}
