//! k-determinantal measures on `[k]^n`.
//!
//! A measure is given by k square matrices summing to the identity; the
//! probability of a coloring `x` is the determinant of the matrix whose j-th
//! column is the j-th column of the matrix for color `x_j`.

mod charpoly;
mod enumerate;
mod purity;
mod spectral;

pub use charpoly::{charpoly, charpoly_by_enumeration, charpoly_by_interpolation, color_count_dist, CharPoly};
pub use enumerate::{
    brute_force_dist, validate, validate_with, ColoringDistribution, ValidationOptions, ValidationReport, DEFAULT_CAP,
};
pub use purity::{purity_check, triple_support_check, PurityReport, TripleReport};
pub use spectral::{
    commuting_factorization, interlaces, line_roots, line_roots_f64, pencil_roots, restrict_f64, symmetric_sandwich,
    CommutingFactorization, FloatMeasure, LineRoots, DEFAULT_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::linalg::{mixed_column_det, Coloring, IndexSet, Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct KDetMeasure {
    n: usize,
    mats: Vec<RationalMatrix>,
}

/// Result of [`normalize`]: the normalized measure together with the
/// determinant of the (unnormalized) matrix sum.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub measure: KDetMeasure,
    pub det_sum: Rational,
}

impl KDetMeasure {
    /// Checks shapes and that the matrices sum exactly to the identity.
    pub fn new(mats: Vec<RationalMatrix>) -> Result<Self> {
        let m = Self::new_unchecked(mats)?;
        let sum = sum_matrices(&m.mats, m.n);
        if sum != RationalMatrix::identity(m.n) {
            return Err(Error::NotIdentitySum);
        }
        Ok(m)
    }

    /// Shape-checked construction that skips the identity-sum check. Used to
    /// probe formulas on matrix tuples that are not measures.
    pub fn new_unchecked(mats: Vec<RationalMatrix>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::ShapeMismatch("need at least one matrix".into()));
        };
        let n = first.rows();
        if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::ShapeMismatch(format!("all matrices must be {n}x{n}")));
        }
        Ok(KDetMeasure { n, mats })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[RationalMatrix] {
        &self.mats
    }

    pub fn mat(&self, color: usize) -> &RationalMatrix {
        &self.mats[color]
    }

    pub fn into_mats(self) -> Vec<RationalMatrix> {
        self.mats
    }

    pub fn is_symmetric(&self) -> bool {
        self.mats.iter().all(RationalMatrix::is_symmetric)
    }

    /// Probability of a single coloring. Negative values are returned as is.
    pub fn point_prob(&self, x: &Coloring) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::SizeMismatch(format!(
                "coloring of length {} for n = {}",
                x.len(),
                self.n
            )));
        }
        mixed_column_det(&self.mats, x)
    }

    /// Probability that each queried position carries its queried color.
    pub fn marginal_prob(&self, q: &MarginalQuery) -> Result<Rational> {
        q.check(self.n, self.k())?;
        let pos: Vec<usize> = q.pairs.iter().map(|&(p, _)| p - 1).collect();
        let cols: Vec<usize> = q.pairs.iter().map(|&(_, c)| c - 1).collect();
        let size = pos.len();
        RationalMatrix::from_fn(size, size, |a, b| self.mats[cols[b]][(pos[a], pos[b])].clone()).det()
    }

    /// The measure restricted to the positions in `s`.
    pub fn restrict(&self, s: &IndexSet) -> Result<KDetMeasure> {
        let mats = self
            .mats
            .iter()
            .map(|m| m.submatrix(s, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(KDetMeasure { n: s.len(), mats })
    }

    /// Image under the color map `phi` (1-based targets, one per color). The
    /// number of target colors is the largest value in `phi`.
    pub fn forget(&self, phi: &[usize]) -> Result<KDetMeasure> {
        if phi.len() != self.k() {
            return Err(Error::SizeMismatch(format!(
                "color map has {} entries for k = {}",
                phi.len(),
                self.k()
            )));
        }
        let target = phi.iter().copied().max().unwrap_or(0);
        if phi.contains(&0) || (1..=target).any(|j| !phi.contains(&j)) {
            return Err(Error::NotSurjective { target });
        }
        let mats = (1..=target)
            .map(|j| {
                let parts: Vec<RationalMatrix> = phi
                    .iter()
                    .zip(&self.mats)
                    .filter(|(&t, _)| t == j)
                    .map(|(_, m)| m.clone())
                    .collect();
                sum_matrices(&parts, self.n)
            })
            .collect();
        Ok(KDetMeasure { n: self.n, mats })
    }
}

/// Normalizes an unnormalized tuple by left-multiplying with the inverse of
/// its sum. Point probabilities of the result are the mixed-column
/// determinants of `mats` divided by `det_sum`.
pub fn normalize(mats: Vec<RationalMatrix>) -> Result<Normalized> {
    let raw = KDetMeasure::new_unchecked(mats)?;
    let sum = sum_matrices(&raw.mats, raw.n);
    let det_sum = sum.det()?;
    let inv = sum.inverse().map_err(|_| Error::SingularSum)?;
    let mats = raw.mats.iter().map(|m| &inv * m).collect();
    Ok(Normalized {
        measure: KDetMeasure { n: raw.n, mats },
        det_sum,
    })
}

/// A marginal event: distinct 1-based positions, each with a 1-based color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalQuery {
    pairs: Vec<(usize, usize)>,
}

impl MarginalQuery {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        MarginalQuery { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn check(&self, n: usize, k: usize) -> Result<()> {
        for (t, &(p, c)) in self.pairs.iter().enumerate() {
            if p == 0 || p > n {
                return Err(Error::IndexOutOfRange { index: p, bound: n });
            }
            if c == 0 || c > k {
                return Err(Error::IndexOutOfRange { index: c, bound: k });
            }
            if self.pairs[..t].iter().any(|&(q, _)| q == p) {
                return Err(Error::InvalidInput(format!("position {p} queried twice")));
            }
        }
        Ok(())
    }

    pub fn matches(&self, x: &Coloring) -> bool {
        self.pairs.iter().all(|&(p, c)| x.colors()[p - 1] == c - 1)
    }
}

pub(crate) fn sum_matrices(mats: &[RationalMatrix], n: usize) -> RationalMatrix {
    mats.iter().fold(RationalMatrix::zeros(n, n), |acc, m| &acc + m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::three_dimer_measure;
    use crate::linalg::rat;

    fn col(s: &str) -> Coloring {
        s.parse().unwrap()
    }

    #[test]
    fn new_measure_examples() {
        let m = KDetMeasure::new(vec![RationalMatrix::identity(3)]).unwrap();
        assert_eq!(m.point_prob(&col("111")).unwrap(), rat(1, 1));
        assert!(three_dimer_measure().k() == 3);
        let id = RationalMatrix::identity(2);
        assert_eq!(KDetMeasure::new(vec![id.clone(), id]), Err(Error::NotIdentitySum));
        assert!(matches!(
            KDetMeasure::new(vec![RationalMatrix::identity(2), RationalMatrix::identity(3)]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn normalize_examples() {
        let one = RationalMatrix::from_i64(&[&[1]]);
        let out = normalize(vec![one.clone(), one]).unwrap();
        let half = RationalMatrix::from_ratios(&[&[(1, 2)]]);
        assert_eq!(out.measure.mats(), &[half.clone(), half]);
        assert_eq!(out.det_sum, rat(2, 1));
        let id = RationalMatrix::identity(2);
        assert!(matches!(normalize(vec![id.clone(), -&id]), Err(Error::SingularSum)));
    }

    #[test]
    fn point_prob_examples() {
        let m = three_dimer_measure();
        // colors r=1, g=2, b=3
        assert_eq!(m.point_prob(&col("132")).unwrap(), rat(1, 3));
        assert_eq!(m.point_prob(&col("111")).unwrap(), rat(0, 1));
        assert!(m.point_prob(&col("11")).is_err());
    }

    #[test]
    fn marginal_examples() {
        let m = three_dimer_measure();
        let q = MarginalQuery::new(vec![(1, 1)]);
        assert_eq!(m.marginal_prob(&q).unwrap(), rat(2, 3));
        let q = MarginalQuery::new(vec![(1, 1), (2, 3)]);
        assert_eq!(m.marginal_prob(&q).unwrap(), rat(1, 3));
        assert_eq!(m.marginal_prob(&MarginalQuery::new(vec![])).unwrap(), rat(1, 1));
        assert!(m.marginal_prob(&MarginalQuery::new(vec![(1, 1), (1, 2)])).is_err());
        assert!(m.marginal_prob(&MarginalQuery::new(vec![(4, 1)])).is_err());
    }

    #[test]
    fn restrict_examples() {
        let m = three_dimer_measure();
        assert_eq!(m.restrict(&IndexSet::full(3)).unwrap(), m);
        let one = m.restrict(&IndexSet::new(vec![1], 3).unwrap()).unwrap();
        let probs: Vec<Rational> = (1..=3)
            .map(|c| one.point_prob(&Coloring::from_one_based(&[c]).unwrap()).unwrap())
            .collect();
        assert_eq!(probs, vec![rat(2, 3), rat(1, 3), rat(0, 1)]);
        let empty = m.restrict(&IndexSet::empty()).unwrap();
        assert_eq!(empty.n(), 0);
        assert_eq!(empty.point_prob(&Coloring::from_zero_based(vec![])).unwrap(), rat(1, 1));
    }

    #[test]
    fn forget_examples() {
        let m = three_dimer_measure();
        assert_eq!(m.forget(&[1, 2, 3]).unwrap(), m);
        let two = m.forget(&[1, 2, 2]).unwrap();
        assert_eq!(two.k(), 2);
        assert_eq!(two.marginal_prob(&MarginalQuery::new(vec![(1, 1)])).unwrap(), rat(2, 3));
        let one = m.forget(&[1, 1, 1]).unwrap();
        assert_eq!(one.mats(), &[RationalMatrix::identity(3)]);
        assert_eq!(m.forget(&[1, 3, 3]), Err(Error::NotSurjective { target: 3 }));
    }
}
