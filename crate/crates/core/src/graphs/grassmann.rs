use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{binomial, combinations, IndexSet, Rational, RationalMatrix};
use crate::measure::{normalize, Normalized};

/// An `n × kn` matrix of rank `n`; color `i` reads columns `i, i+k, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannSlice {
    k: usize,
    g: RationalMatrix,
}

impl GrassmannSlice {
    pub fn new(k: usize, g: RationalMatrix) -> Result<Self> {
        if k == 0 || g.cols() != k * g.rows() {
            return Err(Error::BadShape {
                rows: g.rows(),
                cols: g.cols(),
            });
        }
        if g.rank() != g.rows() {
            return Err(Error::InvalidInput(format!(
                "slice matrix has rank {} < {}",
                g.rank(),
                g.rows()
            )));
        }
        Ok(GrassmannSlice { k, g })
    }

    pub fn n(&self) -> usize {
        self.g.rows()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn g(&self) -> &RationalMatrix {
        &self.g
    }
}

/// The unnormalized matrices `A_i`: column `j` of `A_i` is column
/// `(j−1)k + i` of `G`.
pub fn slice_matrices(g: &GrassmannSlice) -> Vec<RationalMatrix> {
    let n = g.n();
    let rows: Vec<usize> = (0..n).collect();
    (0..g.k)
        .map(|i| {
            let cols: Vec<usize> = (0..n).map(|j| j * g.k + i).collect();
            g.g.select(&rows, &cols)
        })
        .collect()
}

/// Normalized measure `A'_i = M^{-1} A_i` with `M = Σ A_i`.
pub fn from_grassmannian(g: &GrassmannSlice) -> Result<Normalized> {
    normalize(slice_matrices(g))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TnnReport {
    pub minors: usize,
    pub nonnegative: bool,
    pub strictly_positive: bool,
    /// First column set with a negative minor.
    pub witness: Option<(IndexSet, Rational)>,
}

/// Signs of all maximal minors; fails when there are more than `cap`.
pub fn tnn_check(g: &GrassmannSlice, cap: u128) -> Result<TnnReport> {
    let (n, cols) = (g.n(), g.g.cols());
    let count = binomial(cols, n);
    if count > cap {
        return Err(Error::TooManyMinors { count, cap });
    }
    let mut strictly_positive = true;
    let mut witness = None;
    let rows = IndexSet::full(n);
    for c in combinations(cols, n) {
        let set = IndexSet::from_zero_based(&c);
        let d = g.g.minor(&rows, &set)?;
        if d.is_zero() {
            strictly_positive = false;
        } else if d.is_negative() {
            strictly_positive = false;
            witness = Some((set, d));
            break;
        }
    }
    Ok(TnnReport {
        minors: count as usize,
        nonnegative: witness.is_none(),
        strictly_positive,
        witness,
    })
}
