//! Pure measures through a single matrix `L`: the rows of `L` split into
//! consecutive blocks `U_1, …, U_k`, and the probability of a coloring with
//! the right color counts is a signed product of one maximal minor per block.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    binomial, coloring_signature, combinations, plucker_coords, Coloring, IndexSet, Rational, RationalMatrix,
};
use crate::measure::{purity_check, KDetMeasure};

#[derive(Clone, Debug, PartialEq)]
pub struct PureEncoding {
    blocks: Vec<usize>,
    l: RationalMatrix,
    q: Rational,
}

impl PureEncoding {
    /// `q` is derived as `1 / det L`.
    pub fn new(blocks: Vec<usize>, l: RationalMatrix) -> Result<Self> {
        if !l.is_square() {
            return Err(Error::NonSquare {
                rows: l.rows(),
                cols: l.cols(),
            });
        }
        if blocks.is_empty() || blocks.iter().sum::<usize>() != l.rows() {
            return Err(Error::SizeMismatch(format!(
                "block sizes {blocks:?} do not sum to {}",
                l.rows()
            )));
        }
        let d = l.det()?;
        if d.is_zero() {
            return Err(Error::Singular);
        }
        Ok(PureEncoding {
            blocks,
            l,
            q: d.recip(),
        })
    }

    pub fn n(&self) -> usize {
        self.l.rows()
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn l(&self) -> &RationalMatrix {
        &self.l
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// Rows of block `i` (zero-based block index), 1-based.
    pub fn block_rows(&self, i: usize) -> IndexSet {
        let start: usize = self.blocks[..i].iter().sum();
        IndexSet::new((start + 1..=start + self.blocks[i]).collect(), self.n()).expect("block rows are in range")
    }

    /// Rows of block `i` as a matrix.
    pub fn block(&self, i: usize) -> RationalMatrix {
        let start: usize = self.blocks[..i].iter().sum();
        let rows: Vec<usize> = (start..start + self.blocks[i]).collect();
        let cols: Vec<usize> = (0..self.n()).collect();
        self.l.select(&rows, &cols)
    }
}

/// Builds `M` from column-space bases of the images of the `A_i`.
pub fn encode_from_measure(m: &KDetMeasure) -> Result<PureEncoding> {
    let report = purity_check(m)?;
    if !report.pure {
        return Err(Error::NotPure {
            rank_sum: report.ranks.iter().sum(),
            n: m.n(),
        });
    }
    let bases: Vec<RationalMatrix> = m.mats().iter().map(RationalMatrix::column_space_basis).collect();
    let big_m = RationalMatrix::hstack(&bases)?;
    let l = big_m.inverse().map_err(|_| Error::DegenerateImages)?;
    PureEncoding::new(report.ranks, l)
}

/// `A_i = M E_i L` with `M = L^{-1}`.
pub fn decode_to_measure(e: &PureEncoding) -> Result<KDetMeasure> {
    let big_m = e.l.inverse()?;
    let n = e.n();
    let all: Vec<usize> = (0..n).collect();
    let mut start = 0;
    let mut mats = Vec::with_capacity(e.k());
    for &size in &e.blocks {
        let idx: Vec<usize> = (start..start + size).collect();
        mats.push(&big_m.select(&all, &idx) * &e.l.select(&idx, &all));
        start += size;
    }
    KDetMeasure::new(mats)
}

/// Signed product of block minors; zero when the color counts do not match
/// the blocks.
pub fn prob_via_minors(e: &PureEncoding, pi: &Coloring) -> Rational {
    if pi.len() != e.n() || pi.counts(e.k()) != e.blocks || pi.max_color().is_some_and(|c| c >= e.k()) {
        return Rational::zero();
    }
    let sign = coloring_signature(pi, &e.blocks).expect("counts checked");
    let mut value = e.q.clone();
    for i in 0..e.k() {
        let cols = IndexSet::from_zero_based(&pi.positions_of(i));
        value *= e.l.minor(&e.block_rows(i), &cols).expect("shapes match");
        if value.is_zero() {
            return value;
        }
    }
    if sign < 0 {
        -value
    } else {
        value
    }
}

/// All colorings using color `i` exactly `blocks[i]` times, lexicographic.
pub fn admissible_colorings(blocks: &[usize]) -> Vec<Coloring> {
    fn go(rest: &mut Vec<usize>, word: &mut Vec<usize>, n: usize, out: &mut Vec<Coloring>) {
        if word.len() == n {
            out.push(Coloring::from_zero_based(word.clone()));
            return;
        }
        for c in 0..rest.len() {
            if rest[c] > 0 {
                rest[c] -= 1;
                word.push(c);
                go(rest, word, n, out);
                word.pop();
                rest[c] += 1;
            }
        }
    }
    let n = blocks.iter().sum();
    let mut out = Vec::new();
    go(&mut blocks.to_vec(), &mut Vec::with_capacity(n), n, &mut out);
    out
}

/// Multinomial coefficient `n! / ∏ n_i!`.
pub fn multinomial(blocks: &[usize]) -> u128 {
    let mut total = 0;
    let mut acc = 1u128;
    for &b in blocks {
        total += b;
        acc = acc.saturating_mul(binomial(total, b));
    }
    acc
}

/// Two points of a Grassmannian given as `(I A)` and `(I B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannPair {
    pub n1: usize,
    pub a: RationalMatrix,
    pub b: RationalMatrix,
}

impl GrassmannPair {
    pub fn new(a: RationalMatrix, b: RationalMatrix) -> Result<Self> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::ShapeMismatch("A and B must have the same shape".into()));
        }
        Ok(GrassmannPair { n1: a.rows(), a, b })
    }

    pub fn n2(&self) -> usize {
        self.a.cols()
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2()
    }

    pub fn g1(&self) -> RationalMatrix {
        RationalMatrix::hstack(&[RationalMatrix::identity(self.n1), self.a.clone()]).expect("same rows")
    }

    pub fn g2(&self) -> RationalMatrix {
        RationalMatrix::hstack(&[RationalMatrix::identity(self.n1), self.b.clone()]).expect("same rows")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignReport {
    pub compatible: bool,
    /// Coordinates where both sides are nonzero.
    pub nonzero_pairs: usize,
    /// First column set with strictly opposite signs.
    pub opposite: Option<IndexSet>,
}

/// Compares the Plücker coordinates of `(I A)` and `(I B)` set by set.
pub fn check_sign_compatible(p: &GrassmannPair) -> SignReport {
    let c1 = plucker_coords(&p.g1()).expect("n1 <= n");
    let c2 = plucker_coords(&p.g2()).expect("n1 <= n");
    let mut nonzero_pairs = 0;
    let mut opposite = None;
    for (j, x) in &c1 {
        let y = &c2[j];
        if x.is_zero() || y.is_zero() {
            continue;
        }
        if x.is_positive() == y.is_positive() {
            nonzero_pairs += 1;
        } else if opposite.is_none() {
            opposite = Some(j.clone());
        }
    }
    SignReport {
        compatible: opposite.is_none() && nonzero_pairs > 0,
        nonzero_pairs,
        opposite,
    }
}

/// `L = [[I, A], [−Bᵗ, I]]` with blocks `(n1, n2)`.
pub fn pure2_from_pair(p: &GrassmannPair) -> Result<PureEncoding> {
    let report = check_sign_compatible(p);
    if !report.compatible {
        let msg = match report.opposite {
            Some(j) => format!("opposite signs at columns {j}"),
            None => "no pair of nonzero coordinates".into(),
        };
        return Err(Error::SignIncompatible(msg));
    }
    let top = p.g1();
    let bottom = RationalMatrix::hstack(&[-&p.b.transpose(), RationalMatrix::identity(p.n2())])?;
    PureEncoding::new(vec![p.n1, p.n2()], RationalMatrix::vstack(&[top, bottom])?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CauchyBinetReport {
    pub value: Rational,
    /// Sum of `A_S^T B_S^T` over all row sets `S` and column sets `T` of equal size.
    pub expansion: Rational,
    pub terms: usize,
    pub min_term: Rational,
    /// `(S, T)` of the first negative term.
    pub negative_term: Option<(IndexSet, IndexSet)>,
}

impl CauchyBinetReport {
    pub fn positive_with_nonnegative_terms(&self) -> bool {
        self.value.is_positive() && self.negative_term.is_none() && self.value == self.expansion
    }
}

/// `det(I + A Bᵗ)` together with its term-by-term Cauchy–Binet expansion.
pub fn det_i_plus_abt(p: &GrassmannPair) -> Result<CauchyBinetReport> {
    let n1 = p.n1;
    let n2 = p.n2();
    let value = (&RationalMatrix::identity(n1) + &(&p.a * &p.b.transpose())).det()?;
    let mut expansion = Rational::zero();
    let mut terms = 0;
    let mut min_term: Option<Rational> = None;
    let mut negative_term = None;
    for r in 0..=n1.min(n2) {
        for s in combinations(n1, r) {
            let s = IndexSet::from_zero_based(&s);
            for t in combinations(n2, r) {
                let t = IndexSet::from_zero_based(&t);
                let term = p.a.minor(&s, &t)? * p.b.minor(&s, &t)?;
                if term.is_negative() && negative_term.is_none() {
                    negative_term = Some((s.clone(), t.clone()));
                }
                if min_term.as_ref().is_none_or(|m| &term < m) {
                    min_term = Some(term.clone());
                }
                expansion += term;
                terms += 1;
            }
        }
    }
    Ok(CauchyBinetReport {
        value,
        expansion,
        terms,
        min_term: min_term.unwrap_or_else(Rational::one),
        negative_term,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplementReport {
    /// Minor of `(I B)` at columns `J`.
    pub lhs: Rational,
    /// Minor of `(−Bᵗ I)` at the complementary columns.
    pub rhs: Rational,
    pub sign: i8,
}

impl ComplementReport {
    pub fn holds(&self) -> bool {
        if self.sign < 0 {
            self.lhs == -self.rhs.clone()
        } else {
            self.lhs == self.rhs
        }
    }
}

/// Checks `(I B)^J = (−1)^{Σ (j_t − t)} (−Bᵗ I)^{J^c}`.
pub fn complementary_minor_identity(b: &RationalMatrix, j: &IndexSet) -> Result<ComplementReport> {
    let (n1, n2) = (b.rows(), b.cols());
    let n = n1 + n2;
    if j.len() != n1 {
        return Err(Error::SizeMismatch(format!("|J| = {} but n1 = {n1}", j.len())));
    }
    if let Some(&bad) = j.as_slice().iter().find(|&&x| x > n) {
        return Err(Error::IndexOutOfRange { index: bad, bound: n });
    }
    let s = RationalMatrix::hstack(&[RationalMatrix::identity(n1), b.clone()])?;
    let r = RationalMatrix::hstack(&[-&b.transpose(), RationalMatrix::identity(n2)])?;
    let lhs = s.minor(&IndexSet::full(n1), j)?;
    let rhs = r.minor(&IndexSet::full(n2), &j.complement(n))?;
    let sign = if j.displacement() % 2 == 0 { 1 } else { -1 };
    Ok(ComplementReport { lhs, rhs, sign })
}

/// Outcome of [`pure_k_from_rows`].
#[derive(Clone, Debug, PartialEq)]
pub enum PureKOutcome {
    Accepted(PureEncoding),
    Rejected { witness: Coloring, value: Rational },
}

/// Stacks `L_1, …, L_k` (each `n_i × n`) and checks every admissible product
/// of minors for nonnegativity. Rejects with the lexicographically first
/// negative coloring.
pub fn pure_k_from_rows(rows: &[RationalMatrix], cap: u128) -> Result<PureKOutcome> {
    let Some(first) = rows.first() else {
        return Err(Error::ShapeMismatch("no row blocks".into()));
    };
    let n = first.cols();
    if rows.iter().any(|r| r.cols() != n) {
        return Err(Error::ShapeMismatch("row blocks must share a column count".into()));
    }
    let blocks: Vec<usize> = rows.iter().map(RationalMatrix::rows).collect();
    if blocks.iter().sum::<usize>() != n {
        return Err(Error::ShapeMismatch(format!(
            "block sizes {blocks:?} do not sum to {n}"
        )));
    }
    let count = multinomial(&blocks);
    if count > cap {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    let l = RationalMatrix::vstack(rows)?;
    let e = match PureEncoding::new(blocks, l) {
        Err(Error::Singular) => return Err(Error::SingularStack),
        other => other?,
    };
    let coords: Vec<BTreeMap<IndexSet, Rational>> = rows.iter().map(|r| plucker_coords(r).expect("n_i <= n")).collect();
    for pi in admissible_colorings(e.blocks()) {
        let mut value = e.q.clone();
        for (i, c) in coords.iter().enumerate() {
            value *= &c[&IndexSet::from_zero_based(&pi.positions_of(i))];
        }
        if coloring_signature(&pi, e.blocks())? < 0 {
            value = -value;
        }
        if value.is_negative() {
            return Ok(PureKOutcome::Rejected { witness: pi, value });
        }
    }
    Ok(PureKOutcome::Accepted(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::three_dimer_measure;
    use crate::linalg::{mixed_column_det, rat};
    use crate::measure::{brute_force_dist, DEFAULT_CAP};

    fn col(s: &str) -> Coloring {
        s.parse().unwrap()
    }

    #[test]
    fn k1_encoding() {
        let m = KDetMeasure::new(vec![RationalMatrix::identity(3)]).unwrap();
        let e = encode_from_measure(&m).unwrap();
        assert_eq!(e.blocks(), &[3]);
        assert_eq!(e.q() * e.l().det().unwrap(), rat(1, 1));
        assert_eq!(prob_via_minors(&e, &col("111")), rat(1, 1));
    }

    #[test]
    fn dimer_round_trip() {
        let m = three_dimer_measure();
        let e = encode_from_measure(&m).unwrap();
        assert_eq!(e.blocks(), &[1, 1, 1]);
        for pi in admissible_colorings(&[1, 1, 1]) {
            assert_eq!(prob_via_minors(&e, &pi), m.point_prob(&pi).unwrap(), "{pi}");
        }
        let back = decode_to_measure(&e).unwrap();
        assert_eq!(back, m);
        assert_eq!(prob_via_minors(&e, &col("112")), rat(0, 1));
    }

    #[test]
    fn decode_examples() {
        let e = PureEncoding::new(vec![2], RationalMatrix::identity(2)).unwrap();
        assert_eq!(decode_to_measure(&e).unwrap().mats(), &[RationalMatrix::identity(2)]);
        let l = RationalMatrix::from_i64(&[&[1, 1], &[-1, 1]]);
        let e = PureEncoding::new(vec![1, 1], l).unwrap();
        assert_eq!(e.q(), &rat(1, 2));
        let m = decode_to_measure(&e).unwrap();
        assert_eq!(m.point_prob(&col("12")).unwrap(), rat(1, 2));
        assert_eq!(m.point_prob(&col("21")).unwrap(), rat(1, 2));
    }

    #[test]
    fn two_two_two_structure() {
        // a concrete invertible L; the (2,2,2) coloring 211323 picks columns
        // {2,3}, {1,5}, {4,6} with sign −1
        let l = RationalMatrix::from_i64(&[
            &[2, 1, 0, 1, 3, 1],
            &[1, 3, 1, 0, 1, 2],
            &[0, 1, 4, 1, 0, 1],
            &[1, 0, 1, 5, 1, 0],
            &[3, 1, 0, 1, 6, 1],
            &[1, 2, 1, 0, 1, 7],
        ]);
        let e = PureEncoding::new(vec![2, 2, 2], l.clone()).unwrap();
        let pi = col("211323");
        let set = |v: Vec<usize>| IndexSet::new(v, 6).unwrap();
        let expected = -e.q().clone()
            * l.minor(&set(vec![1, 2]), &set(vec![2, 3])).unwrap()
            * l.minor(&set(vec![3, 4]), &set(vec![1, 5])).unwrap()
            * l.minor(&set(vec![5, 6]), &set(vec![4, 6])).unwrap();
        assert_eq!(prob_via_minors(&e, &pi), expected);
        let m = decode_to_measure(&e).unwrap();
        assert_eq!(mixed_column_det(m.mats(), &pi).unwrap(), expected);
        let dist = brute_force_dist(&m, DEFAULT_CAP);
        // support, if valid, must have counts (2,2,2); negative values are
        // allowed here since L is arbitrary
        if let Ok(d) = dist {
            assert!(d.iter().all(|(x, _)| x.counts(3) == vec![2, 2, 2]));
        }
    }

    #[test]
    fn pure2_unit_example() {
        let p = GrassmannPair::new(RationalMatrix::from_i64(&[&[1]]), RationalMatrix::from_i64(&[&[1]])).unwrap();
        let e = pure2_from_pair(&p).unwrap();
        assert_eq!(e.l(), &RationalMatrix::from_i64(&[&[1, 1], &[-1, 1]]));
        assert_eq!(e.q(), &rat(1, 2));
        assert_eq!(prob_via_minors(&e, &col("12")), rat(1, 2));
        assert_eq!(prob_via_minors(&e, &col("21")), rat(1, 2));
    }

    #[test]
    fn pure2_general_ab() {
        let (a, b) = (rat(3, 2), rat(2, 5));
        let p = GrassmannPair::new(
            RationalMatrix::from_rows(vec![vec![a.clone()]]).unwrap(),
            RationalMatrix::from_rows(vec![vec![b.clone()]]).unwrap(),
        )
        .unwrap();
        let e = pure2_from_pair(&p).unwrap();
        let ab = &a * &b;
        let one = rat(1, 1);
        assert_eq!(prob_via_minors(&e, &col("12")), &one / (&one + &ab));
        assert_eq!(prob_via_minors(&e, &col("21")), &ab / (&one + &ab));
    }

    #[test]
    fn sign_compatibility() {
        let a = RationalMatrix::from_i64(&[&[1]]);
        let p = GrassmannPair::new(a.clone(), a.clone()).unwrap();
        assert!(check_sign_compatible(&p).compatible);
        let p = GrassmannPair::new(a, RationalMatrix::from_i64(&[&[-1]])).unwrap();
        let r = check_sign_compatible(&p);
        assert!(!r.compatible);
        assert_eq!(r.opposite, Some(IndexSet::new(vec![2], 2).unwrap()));
        assert!(matches!(pure2_from_pair(&p), Err(Error::SignIncompatible(_))));
    }

    #[test]
    fn det_i_plus_abt_examples() {
        let one = RationalMatrix::from_i64(&[&[1]]);
        let r = det_i_plus_abt(&GrassmannPair::new(one.clone(), one).unwrap()).unwrap();
        assert_eq!(r.value, rat(2, 1));
        assert!(r.positive_with_nonnegative_terms());
        let z = RationalMatrix::zeros(2, 3);
        let r = det_i_plus_abt(&GrassmannPair::new(z.clone(), z).unwrap()).unwrap();
        assert_eq!(r.value, rat(1, 1));
        assert_eq!(r.expansion, rat(1, 1));
        // C(5,2) terms in total
        assert_eq!(r.terms, 10);
    }

    #[test]
    fn complementary_examples() {
        let b = RationalMatrix::from_i64(&[&[7]]);
        let r = complementary_minor_identity(&b, &IndexSet::new(vec![1], 2).unwrap()).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.sign), (rat(1, 1), rat(1, 1), 1));
        assert!(r.holds());
        let r = complementary_minor_identity(&b, &IndexSet::new(vec![2], 2).unwrap()).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.sign), (rat(7, 1), rat(-7, 1), -1));
        assert!(r.holds());
        let b = RationalMatrix::from_i64(&[&[1, 2, -1], &[3, 0, 5]]);
        for s in combinations(5, 2) {
            let j = IndexSet::from_zero_based(&s);
            assert!(complementary_minor_identity(&b, &j).unwrap().holds(), "{j}");
        }
    }

    #[test]
    fn pure_k_rows() {
        let rows = [
            RationalMatrix::from_i64(&[&[1, 1]]),
            RationalMatrix::from_i64(&[&[1, 2]]),
        ];
        match pure_k_from_rows(&rows, DEFAULT_CAP).unwrap() {
            PureKOutcome::Rejected { witness, value } => {
                assert_eq!(witness, col("21"));
                assert_eq!(value, rat(-1, 1));
            }
            other => panic!("expected rejection, got {other:?}"),
        }
        let rows = [RationalMatrix::identity(3)];
        assert!(matches!(
            pure_k_from_rows(&rows, DEFAULT_CAP).unwrap(),
            PureKOutcome::Accepted(_)
        ));
        let e = encode_from_measure(&three_dimer_measure()).unwrap();
        let rows: Vec<RationalMatrix> = (0..3).map(|i| e.block(i)).collect();
        assert!(matches!(
            pure_k_from_rows(&rows, DEFAULT_CAP).unwrap(),
            PureKOutcome::Accepted(_)
        ));
        let rows = [
            RationalMatrix::from_i64(&[&[1, 1]]),
            RationalMatrix::from_i64(&[&[2, 2]]),
        ];
        assert_eq!(pure_k_from_rows(&rows, DEFAULT_CAP), Err(Error::SingularStack));
    }

    #[test]
    fn multinomial_counts() {
        assert_eq!(multinomial(&[2, 2, 2]), 90);
        assert_eq!(admissible_colorings(&[2, 2, 2]).len(), 90);
        assert_eq!(admissible_colorings(&[1, 2])[0], col("122"));
    }
}
