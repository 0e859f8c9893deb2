//! Measures supported on permutations: `n` rank-one matrices `A_i = u_i v_iᵗ`
//! where `v_i` are the rows of a signed bipartite weight matrix `V` and
//! `u_i` the columns of `U = V^{-1}`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graphs::pattern_permutations;
use crate::linalg::{permutation_sign, Coloring, Rational, RationalMatrix};
use crate::measure::KDetMeasure;

/// Largest `n` for which [`support_enum`] runs by default.
pub const PERM_ENUM_MAX: usize = 9;

/// Largest number of free sign bits [`pfaffian_signing_search`] tries.
pub const SIGNING_SEARCH_BITS: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct PermMeasure {
    v: RationalMatrix,
    u: RationalMatrix,
    measure: KDetMeasure,
    /// Whether row 1 of `V` was negated to make `det U` positive.
    flipped: bool,
}

impl PermMeasure {
    pub fn n(&self) -> usize {
        self.v.rows()
    }

    pub fn v(&self) -> &RationalMatrix {
        &self.v
    }

    pub fn u(&self) -> &RationalMatrix {
        &self.u
    }

    pub fn measure(&self) -> &KDetMeasure {
        &self.measure
    }

    pub fn flipped(&self) -> bool {
        self.flipped
    }
}

fn nonzero_pattern(v: &RationalMatrix) -> Vec<Vec<usize>> {
    // row r of the pattern lists the rows of V usable at column r, so that a
    // pattern permutation is σ in one-line notation with V[σ(j)][j] ≠ 0
    (0..v.cols())
        .map(|j| (0..v.rows()).filter(|&i| !v[(i, j)].is_zero()).collect())
        .collect()
}

/// `sgn σ · Π_j V[σ(j)][j]` for a zero-based `σ`.
fn term(v: &RationalMatrix, sigma: &[usize]) -> Rational {
    let p = sigma
        .iter()
        .enumerate()
        .fold(Rational::one(), |acc, (j, &s)| acc * &v[(s, j)]);
    if permutation_sign(sigma) < 0 {
        -p
    } else {
        p
    }
}

fn one_line(sigma: &[usize]) -> String {
    Coloring::from_zero_based(sigma.to_vec()).to_string()
}

/// Checks that every nonzero term of the determinant expansion has the same
/// sign; the witness is the first term disagreeing with the first nonzero
/// one.
pub fn pfaffian_term_check(v: &RationalMatrix) -> Result<()> {
    if !v.is_square() {
        return Err(Error::NonSquare {
            rows: v.rows(),
            cols: v.cols(),
        });
    }
    let mut first_sign = 0i8;
    for sigma in pattern_permutations(&nonzero_pattern(v)) {
        let s = if term(v, &sigma).is_negative() { -1 } else { 1 };
        if first_sign == 0 {
            first_sign = s;
        } else if s != first_sign {
            return Err(Error::NotPfaffianSigning {
                witness: one_line(&sigma),
            });
        }
    }
    Ok(())
}

/// Builds the measure after verifying the term signs.
pub fn perm_measure_from_matrix(v: &RationalMatrix) -> Result<PermMeasure> {
    pfaffian_term_check(v)?;
    perm_measure_unchecked(v)
}

/// Builds the rank-one matrices without the term-sign check; probabilities
/// may then be negative.
pub fn perm_measure_unchecked(v: &RationalMatrix) -> Result<PermMeasure> {
    let mut v = v.clone();
    let mut u = v.inverse()?;
    let flipped = u.det()?.is_negative();
    if flipped {
        let n = v.rows();
        for j in 0..n {
            v[(0, j)] = -v[(0, j)].clone();
            u[(j, 0)] = -u[(j, 0)].clone();
        }
    }
    let n = v.rows();
    let mats = (0..n)
        .map(|i| RationalMatrix::from_fn(n, n, |r, c| &u[(r, i)] * &v[(i, c)]))
        .collect();
    let measure = KDetMeasure::new(mats)?;
    Ok(PermMeasure { v, u, measure, flipped })
}

/// `det U · sgn σ · Π_j V[σ(j)][j]` for `σ` in 1-based one-line notation.
pub fn perm_prob(pm: &PermMeasure, sigma: &[usize]) -> Result<Rational> {
    let n = pm.n();
    let mut seen = vec![false; n];
    for &s in sigma {
        if s == 0 || s > n || std::mem::replace(&mut seen[s - 1], true) {
            return Err(Error::InvalidInput(format!("{sigma:?} is not a permutation of 1..{n}")));
        }
    }
    if sigma.len() != n {
        return Err(Error::InvalidInput(format!("{sigma:?} is not a permutation of 1..{n}")));
    }
    let zero_based: Vec<usize> = sigma.iter().map(|s| s - 1).collect();
    Ok(pm.u.det()? * term(&pm.v, &zero_based))
}

/// All permutations with nonzero probability, 1-based, lexicographic.
pub fn support_enum(pm: &PermMeasure, max_n: usize) -> Result<Vec<(Vec<usize>, Rational)>> {
    if pm.n() > max_n {
        return Err(Error::TooLarge(format!("n = {} exceeds {max_n}", pm.n())));
    }
    let det_u = pm.u.det()?;
    Ok(pattern_permutations(&nonzero_pattern(&pm.v))
        .into_iter()
        .filter_map(|sigma| {
            let p = &det_u * term(&pm.v, &sigma);
            (!p.is_zero()).then(|| (sigma.iter().map(|s| s + 1).collect(), p))
        })
        .collect())
}

/// Searches sign patterns for a nonnegative weight matrix so that all
/// determinant terms agree in sign. Signs on a spanning forest of the
/// bipartite graph are fixed to plus, since flipping a whole row or column
/// never changes the answer; the remaining bits are searched exhaustively,
/// all-plus first.
pub fn pfaffian_signing_search(weights: &RationalMatrix) -> Result<RationalMatrix> {
    if !weights.is_square() {
        return Err(Error::NonSquare {
            rows: weights.rows(),
            cols: weights.cols(),
        });
    }
    if weights.entries().iter().any(Signed::is_negative) {
        return Err(Error::InvalidInput("weights must be nonnegative".into()));
    }
    let n = weights.rows();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !weights[(i, j)].is_zero())
        .collect();
    // union-find over rows 0..n and columns n..2n
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut free = Vec::new();
    for (idx, &(i, j)) in edges.iter().enumerate() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, n + j));
        if a == b {
            free.push(idx);
        } else {
            parent[a] = b;
        }
    }
    if free.len() > SIGNING_SEARCH_BITS {
        return Err(Error::TooLarge(format!(
            "{} free sign bits exceeds {SIGNING_SEARCH_BITS}",
            free.len()
        )));
    }
    let matchings = pattern_permutations(&nonzero_pattern(weights));
    if matchings.is_empty() {
        return Err(Error::NoPerfectMatching);
    }
    let bit_of = |i: usize, j: usize| -> Option<usize> { free.iter().position(|&f| edges[f] == (i, j)) };
    // each matching: base parity from its permutation sign, and the mask of
    // free bits it uses
    let terms: Vec<(bool, u32)> = matchings
        .iter()
        .map(|sigma| {
            let mask = sigma
                .iter()
                .enumerate()
                .filter_map(|(j, &i)| bit_of(i, j))
                .fold(0u32, |m, b| m | 1 << b);
            (permutation_sign(sigma) < 0, mask)
        })
        .collect();
    for assignment in 0..1u32 << free.len() {
        let parity = |&(base, mask): &(bool, u32)| base ^ ((assignment & mask).count_ones() % 2 == 1);
        let first = parity(&terms[0]);
        if terms.iter().all(|t| parity(t) == first) {
            let mut v = weights.clone();
            for (b, &f) in free.iter().enumerate() {
                if assignment >> b & 1 == 1 {
                    let (i, j) = edges[f];
                    v[(i, j)] = -v[(i, j)].clone();
                }
            }
            return Ok(v);
        }
    }
    Err(Error::NotPfaffian)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{heawood_matrix, heawood_rule};
    use crate::linalg::rat;
    use crate::measure::{brute_force_dist, DEFAULT_CAP};

    #[test]
    fn identity_point_mass() {
        let pm = perm_measure_from_matrix(&RationalMatrix::identity(3)).unwrap();
        assert_eq!(perm_prob(&pm, &[1, 2, 3]).unwrap(), rat(1, 1));
        assert_eq!(
            support_enum(&pm, PERM_ENUM_MAX).unwrap(),
            vec![(vec![1, 2, 3], rat(1, 1))]
        );
    }

    #[test]
    fn two_by_two() {
        let v = RationalMatrix::from_i64(&[&[1, 1], &[-1, 1]]);
        let pm = perm_measure_from_matrix(&v).unwrap();
        assert_eq!(pm.u().det().unwrap(), rat(1, 2));
        assert_eq!(perm_prob(&pm, &[1, 2]).unwrap(), rat(1, 2));
        assert_eq!(perm_prob(&pm, &[2, 1]).unwrap(), rat(1, 2));
    }

    #[test]
    fn heawood_support() {
        let pm = perm_measure_from_matrix(&heawood_matrix()).unwrap();
        let support = support_enum(&pm, PERM_ENUM_MAX).unwrap();
        assert_eq!(support.len(), 24);
        assert!(support.iter().all(|(s, p)| *p == rat(1, 24) && heawood_rule(s)));
        assert!(support.iter().any(|(s, _)| s == &[1, 7, 3, 2, 6, 4, 5]));
        assert_eq!(perm_prob(&pm, &[1, 7, 3, 2, 6, 4, 5]).unwrap(), rat(1, 24));
        assert_eq!(perm_prob(&pm, &[1, 2, 3, 4, 5, 6, 7]).unwrap(), rat(1, 24));
    }

    #[test]
    fn formula_matches_point_prob() {
        let v = RationalMatrix::from_i64(&[&[2, 1, 0], &[1, -1, 3], &[0, 1, 1]]);
        let pm = perm_measure_from_matrix(&v).unwrap();
        let dist = brute_force_dist(pm.measure(), DEFAULT_CAP).unwrap();
        for (x, p) in dist.iter() {
            let sigma = x.one_based();
            assert_eq!(perm_prob(&pm, &sigma).unwrap(), *p);
        }
        assert_eq!(dist.total(), rat(1, 1));
        for (i, a) in pm.measure().mats().iter().enumerate() {
            assert_eq!(a.rank(), 1, "A_{}", i + 1);
        }
        assert_eq!(pm.v() * pm.u(), RationalMatrix::identity(3));
    }

    #[test]
    fn negative_det_is_flipped() {
        let v = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let pm = perm_measure_from_matrix(&v).unwrap();
        assert!(pm.flipped());
        assert!(pm.u().det().unwrap().is_positive());
        assert_eq!(perm_prob(&pm, &[2, 1]).unwrap(), rat(1, 1));
    }

    #[test]
    fn bad_signing_witness() {
        let v = RationalMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            perm_measure_from_matrix(&v),
            Err(Error::Singular) | Err(Error::NotPfaffianSigning { .. })
        ));
        let v = RationalMatrix::from_i64(&[&[1, 1], &[1, 2]]);
        assert_eq!(
            perm_measure_from_matrix(&v),
            Err(Error::NotPfaffianSigning { witness: "21".into() })
        );
    }

    #[test]
    fn signing_search() {
        let heawood = perm_measure_from_matrix(&pfaffian_signing_search(&heawood_matrix()).unwrap());
        assert!(heawood.is_ok());
        assert_eq!(pfaffian_signing_search(&heawood_matrix()).unwrap(), heawood_matrix());
        let k33 = RationalMatrix::from_i64(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(pfaffian_signing_search(&k33), Err(Error::NotPfaffian));
        let square = RationalMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        let s = pfaffian_signing_search(&square).unwrap();
        assert!(pfaffian_term_check(&s).is_ok());
        assert!(!s.det().unwrap().is_zero());
        // 2x3 grid as a 3x3 biadjacency pattern
        let grid = RationalMatrix::from_i64(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 1]]);
        let s = pfaffian_signing_search(&grid).unwrap();
        let pm = perm_measure_from_matrix(&s).unwrap();
        assert_eq!(support_enum(&pm, 9).unwrap().len(), 3);
    }

    #[test]
    fn proportional_to_matching_weights() {
        let w = RationalMatrix::from_i64(&[&[2, 3, 0, 0], &[1, 5, 7, 0], &[0, 1, 1, 2], &[0, 0, 3, 1]]);
        let s = pfaffian_signing_search(&w).unwrap();
        let pm = perm_measure_from_matrix(&s).unwrap();
        let support = support_enum(&pm, 9).unwrap();
        let weight = |sigma: &[usize]| {
            sigma
                .iter()
                .enumerate()
                .fold(rat(1, 1), |acc, (j, &i)| acc * &w[(i - 1, j)])
        };
        let z = support.iter().fold(rat(0, 1), |acc, (s, _)| acc + weight(s));
        for (sigma, p) in &support {
            assert_eq!(*p, weight(sigma) / &z);
        }
    }

    #[test]
    fn not_a_permutation() {
        let pm = perm_measure_from_matrix(&RationalMatrix::identity(2)).unwrap();
        assert!(perm_prob(&pm, &[1, 1]).is_err());
        assert!(perm_prob(&pm, &[1]).is_err());
    }
}
