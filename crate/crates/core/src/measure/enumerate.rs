//! Exhaustive evaluation of a measure over all of `[k]^n`.
//!
//! The enumerator walks colorings depth first and keeps the chosen columns
//! in reduced form. As soon as a prefix of columns is linearly dependent
//! every extension has probability zero and the subtree is skipped.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{KDetMeasure, MarginalQuery};
use crate::error::{Error, Result};
use crate::linalg::{Coloring, Rational};

/// Default bound on `k^n` for exhaustive enumeration.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// Exact probabilities of the colorings with nonzero mass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringDistribution {
    pub n: usize,
    pub k: usize,
    probs: BTreeMap<Coloring, Rational>,
}

impl ColoringDistribution {
    /// Drops zero entries. Callers are responsible for nonnegativity.
    pub fn from_map(n: usize, k: usize, probs: BTreeMap<Coloring, Rational>) -> Self {
        let probs = probs.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        ColoringDistribution { n, k, probs }
    }

    pub fn get(&self, x: &Coloring) -> Rational {
        self.probs.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Coloring, &Rational)> {
        self.probs.iter()
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn total(&self) -> Rational {
        self.probs.values().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn event_prob(&self, q: &MarginalQuery) -> Rational {
        self.probs
            .iter()
            .filter(|(x, _)| q.matches(x))
            .fold(Rational::zero(), |a, (_, p)| a + p)
    }

    /// Marginal on the given zero-based positions, in that order.
    pub fn marginal(&self, positions: &[usize]) -> ColoringDistribution {
        let mut out: BTreeMap<Coloring, Rational> = BTreeMap::new();
        for (x, p) in &self.probs {
            let y = Coloring::from_zero_based(positions.iter().map(|&i| x.colors()[i]).collect());
            *out.entry(y).or_insert_with(Rational::zero) += p;
        }
        ColoringDistribution::from_map(positions.len(), self.k, out)
    }

    /// Image under a 1-based color map.
    pub fn pushforward(&self, phi: &[usize]) -> ColoringDistribution {
        let target = phi.iter().copied().max().unwrap_or(0);
        let mut out: BTreeMap<Coloring, Rational> = BTreeMap::new();
        for (x, p) in &self.probs {
            let y = Coloring::from_zero_based(x.colors().iter().map(|&c| phi[c] - 1).collect());
            *out.entry(y).or_insert_with(Rational::zero) += p;
        }
        ColoringDistribution::from_map(self.n, target, out)
    }

    /// Distribution of the vector of color counts.
    pub fn color_counts(&self) -> BTreeMap<Vec<usize>, Rational> {
        let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (x, p) in &self.probs {
            *out.entry(x.counts(self.k)).or_insert_with(Rational::zero) += p;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// False when the measure exceeded the cap and only random colorings
    /// were checked.
    pub exhaustive: bool,
    pub checked: u128,
    /// Exact total mass (exhaustive mode only).
    pub total: Option<Rational>,
    pub min: Rational,
    pub min_at: Option<Coloring>,
    /// Lexicographically first coloring with negative probability.
    pub negative_witness: Option<Coloring>,
    pub support_size: Option<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.negative_witness.is_none() && self.total.as_ref().is_none_or(|t| t.is_one())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ValidationOptions {
    pub cap: u128,
    /// Random colorings to check when `k^n` exceeds the cap. Zero turns the
    /// fallback off, in which case an oversized measure is an error.
    pub spot_checks: usize,
    pub seed: u64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            cap: DEFAULT_CAP,
            spot_checks: 0,
            seed: 0,
        }
    }
}

pub fn validate(m: &KDetMeasure, cap: u128) -> Result<ValidationReport> {
    validate_with(
        m,
        ValidationOptions {
            cap,
            ..Default::default()
        },
    )
}

pub fn validate_with(m: &KDetMeasure, opts: ValidationOptions) -> Result<ValidationReport> {
    let count = space_size(m.n(), m.k());
    if count > opts.cap {
        if opts.spot_checks == 0 {
            return Err(Error::EnumerationTooLarge { count, cap: opts.cap });
        }
        return spot_check(m, opts);
    }
    let values = nonzero_values(m);
    let total = values.iter().fold(Rational::zero(), |a, (_, p)| a + p);
    let mut min = None::<(Rational, Option<Coloring>)>;
    if (values.len() as u128) < count {
        min = Some((Rational::zero(), None));
    }
    for (x, p) in &values {
        if min.as_ref().is_none_or(|(v, _)| p < v) {
            min = Some((p.clone(), Some(x.clone())));
        }
    }
    let (min, min_at) = min.unwrap_or((Rational::zero(), None));
    let negative_witness = values.iter().find(|(_, p)| p.is_negative()).map(|(x, _)| x.clone());
    let support_size = values.iter().filter(|(_, p)| p.is_positive()).count();
    Ok(ValidationReport {
        exhaustive: true,
        checked: count,
        total: Some(total),
        min,
        min_at,
        negative_witness,
        support_size: Some(support_size),
    })
}

fn spot_check(m: &KDetMeasure, opts: ValidationOptions) -> Result<ValidationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut min: Option<(Rational, Coloring)> = None;
    let mut negative = None;
    for _ in 0..opts.spot_checks {
        let x = Coloring::from_zero_based((0..m.n()).map(|_| rng.gen_range(0..m.k())).collect());
        let p = m.point_prob(&x)?;
        if p.is_negative() && negative.is_none() {
            negative = Some(x.clone());
        }
        if min.as_ref().is_none_or(|(v, _)| &p < v) {
            min = Some((p, x));
        }
    }
    let (min, at) = min.map_or((Rational::zero(), None), |(v, x)| (v, Some(x)));
    Ok(ValidationReport {
        exhaustive: false,
        checked: opts.spot_checks as u128,
        total: None,
        min,
        min_at: at,
        negative_witness: negative,
        support_size: None,
    })
}

/// The full exact distribution. Fails if any coloring has negative mass.
pub fn brute_force_dist(m: &KDetMeasure, cap: u128) -> Result<ColoringDistribution> {
    let count = space_size(m.n(), m.k());
    if count > cap {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    let values = nonzero_values(m);
    if let Some((x, _)) = values.iter().find(|(_, p)| p.is_negative()) {
        return Err(Error::NegativeProbability(x.clone()));
    }
    Ok(ColoringDistribution::from_map(
        m.n(),
        m.k(),
        values.into_iter().collect(),
    ))
}

pub(crate) fn space_size(n: usize, k: usize) -> u128 {
    (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// Every coloring with a nonzero mixed-column determinant, in
/// lexicographic order.
pub(crate) fn nonzero_values(m: &KDetMeasure) -> Vec<(Coloring, Rational)> {
    let n = m.n();
    if n == 0 {
        return vec![(Coloring::from_zero_based(vec![]), Rational::one())];
    }
    let columns: Vec<Vec<Vec<Rational>>> = m.mats().iter().map(|a| (0..n).map(|j| a.column(j)).collect()).collect();
    (0..m.k())
        .into_par_iter()
        .flat_map_iter(|c0| {
            let mut out = Vec::new();
            let mut state = Echelon::new(n);
            let mut prefix = vec![c0];
            if state.push(&columns[c0][0]) {
                walk(&columns, &mut state, &mut prefix, &mut out);
            }
            out
        })
        .collect()
}

fn walk(
    columns: &[Vec<Vec<Rational>>],
    state: &mut Echelon,
    prefix: &mut Vec<usize>,
    out: &mut Vec<(Coloring, Rational)>,
) {
    let n = state.n;
    let j = prefix.len();
    if j == n {
        out.push((Coloring::from_zero_based(prefix.clone()), state.det()));
        return;
    }
    for (c, cols) in columns.iter().enumerate() {
        if state.push(&cols[j]) {
            prefix.push(c);
            walk(columns, state, prefix, out);
            prefix.pop();
            state.pop();
        }
    }
}

/// Columns reduced against their predecessors; column s vanishes at the
/// pivot rows of all earlier columns, so the determinant is the signed
/// product of pivots.
struct Echelon {
    n: usize,
    reduced: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(n: usize) -> Self {
        Echelon {
            n,
            reduced: Vec::with_capacity(n),
            pivots: Vec::with_capacity(n),
        }
    }

    /// Reduces and appends `v`; returns false (leaving the state unchanged)
    /// when `v` lies in the span of the current columns.
    fn push(&mut self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        for (r, &p) in self.reduced.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = &v[p] / &r[p];
            for (x, y) in v.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.reduced.push(v);
                self.pivots.push(p);
                true
            }
            None => false,
        }
    }

    fn pop(&mut self) {
        self.reduced.pop();
        self.pivots.pop();
    }

    fn det(&self) -> Rational {
        let sign = crate::linalg::permutation_sign(&self.pivots);
        let prod = self
            .reduced
            .iter()
            .zip(&self.pivots)
            .fold(Rational::one(), |acc, (r, &p)| acc * &r[p]);
        if sign < 0 {
            -prod
        } else {
            prod
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::three_dimer_measure;
    use crate::linalg::{all_colorings, rat, RationalMatrix};

    fn col(s: &str) -> Coloring {
        s.parse().unwrap()
    }

    #[test]
    fn pruned_enumeration_matches_direct_determinants() {
        let a = RationalMatrix::from_ratios(&[&[(1, 2), (1, 3)], &[(-1, 5), (2, 7)]]);
        let b = &RationalMatrix::identity(2) - &a;
        let m = KDetMeasure::new(vec![a, b]).unwrap();
        let fast: BTreeMap<Coloring, Rational> = nonzero_values(&m).into_iter().collect();
        for x in all_colorings(2, 2) {
            let direct = m.point_prob(&x).unwrap();
            assert_eq!(fast.get(&x).cloned().unwrap_or_else(Rational::zero), direct);
        }
    }

    #[test]
    fn three_dimer_distribution() {
        let d = brute_force_dist(&three_dimer_measure(), DEFAULT_CAP).unwrap();
        assert_eq!(d.support_size(), 3);
        for x in ["123", "132", "213"] {
            assert_eq!(d.get(&col(x)), rat(1, 3), "coloring {x}");
        }
        let report = validate(&three_dimer_measure(), DEFAULT_CAP).unwrap();
        assert_eq!(report.total, Some(rat(1, 1)));
        assert_eq!(report.min, rat(0, 1));
        assert!(report.negative_witness.is_none());
        assert!(report.is_valid());
    }

    #[test]
    fn negative_witness_found() {
        let id = RationalMatrix::identity(2);
        let m = KDetMeasure::new_unchecked(vec![id.scale(&rat(2, 1)), -&id]).unwrap();
        let report = validate(&m, DEFAULT_CAP).unwrap();
        // values: 11 -> 4, 12 -> -2, 21 -> -2, 22 -> 1
        assert_eq!(report.total, Some(rat(1, 1)));
        assert_eq!(report.negative_witness, Some(col("12")));
        assert_eq!(report.min, rat(-2, 1));
        assert!(!report.is_valid());
        assert_eq!(
            brute_force_dist(&m, DEFAULT_CAP),
            Err(Error::NegativeProbability(col("12")))
        );
    }

    #[test]
    fn trivial_and_product_measures() {
        let m = KDetMeasure::new(vec![RationalMatrix::identity(4)]).unwrap();
        let d = brute_force_dist(&m, DEFAULT_CAP).unwrap();
        assert_eq!(d.support_size(), 1);
        assert_eq!(d.get(&col("1111")), rat(1, 1));

        let half = RationalMatrix::identity(2).scale(&rat(1, 2));
        let m = KDetMeasure::new(vec![half.clone(), half]).unwrap();
        let d = brute_force_dist(&m, DEFAULT_CAP).unwrap();
        assert_eq!(d.support_size(), 4);
        assert!(d.iter().all(|(_, p)| *p == rat(1, 4)));
    }

    #[test]
    fn cap_enforced_and_spot_checks() {
        let m = three_dimer_measure();
        assert_eq!(
            brute_force_dist(&m, 10),
            Err(Error::EnumerationTooLarge { count: 27, cap: 10 })
        );
        let r = validate_with(
            &m,
            ValidationOptions {
                cap: 10,
                spot_checks: 50,
                seed: 7,
            },
        )
        .unwrap();
        assert!(!r.exhaustive);
        assert!(r.total.is_none());
        assert!(r.negative_witness.is_none());
    }
}
