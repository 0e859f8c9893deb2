use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{Rational, RationalMatrix};
use crate::error::{Error, Result};

/// Strictly increasing set of 1-based positions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Validates that `indices` is strictly increasing and within `1..=n`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::IndexOutOfRange { index: bad, bound: n });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "index set {indices:?} is not strictly increasing"
            )));
        }
        Ok(IndexSet(indices))
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        IndexSet((1..=n).collect())
    }

    pub(crate) fn from_zero_based(indices: &[usize]) -> Self {
        IndexSet(indices.iter().map(|i| i + 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i - 1).collect()
    }

    pub fn complement(&self, n: usize) -> IndexSet {
        IndexSet((1..=n).filter(|i| !self.0.contains(i)).collect())
    }

    /// Parity exponent Σ (j_t − t) for the t-th smallest element j_t.
    pub fn displacement(&self) -> usize {
        self.0.iter().enumerate().map(|(t, &j)| j - (t + 1)).sum()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (t, i) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A point of `[k]^n`. Colors are stored zero-based; every external
/// rendering is one-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coloring(Vec<usize>);

impl Coloring {
    pub fn new(colors: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&c) = colors.iter().find(|&&c| c >= k) {
            return Err(Error::InvalidInput(format!("color {} exceeds k = {k}", c + 1)));
        }
        Ok(Coloring(colors))
    }

    /// Unchecked constructor from zero-based colors.
    pub fn from_zero_based(colors: Vec<usize>) -> Self {
        Coloring(colors)
    }

    pub fn from_one_based(colors: &[usize]) -> Result<Self> {
        if colors.contains(&0) {
            return Err(Error::InvalidInput("colors are 1-based".into()));
        }
        Ok(Coloring(colors.iter().map(|c| c - 1).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|c| c + 1).collect()
    }

    pub fn max_color(&self) -> Option<usize> {
        self.0.iter().copied().max()
    }

    pub fn counts(&self, k: usize) -> Vec<usize> {
        let mut counts = vec![0; k];
        for &c in &self.0 {
            counts[c] += 1;
        }
        counts
    }

    /// Zero-based positions holding color `c`, increasing.
    pub fn positions_of(&self, c: usize) -> Vec<usize> {
        (0..self.0.len()).filter(|&j| self.0[j] == c).collect()
    }

    pub fn with(&self, position: usize, color: usize) -> Coloring {
        let mut v = self.0.clone();
        v[position] = color;
        Coloring(v)
    }
}

/// Digit string when every color is at most 9, otherwise dash separated.
impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&c| c < 9) {
            for c in &self.0 {
                write!(f, "{}", c + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|c| (c + 1).to_string()).collect();
            write!(f, "{}", parts.join("-"))
        }
    }
}

impl FromStr for Coloring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let colors: Option<Vec<usize>> = if s.contains('-') || s.contains(',') {
            s.split(['-', ',']).map(|p| p.trim().parse::<usize>().ok()).collect()
        } else {
            s.chars().map(|ch| ch.to_digit(10).map(|d| d as usize)).collect()
        };
        let colors = colors.ok_or_else(|| Error::InvalidInput(format!("bad coloring {s:?}")))?;
        Coloring::from_one_based(&colors)
    }
}

/// Iterates over `[k]^n` in lexicographic order (zero-based colors).
pub fn all_colorings(n: usize, k: usize) -> impl Iterator<Item = Coloring> {
    let mut current = if k == 0 && n > 0 { None } else { Some(vec![0usize; n]) };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let cur = current.as_mut().unwrap();
        let mut pos = n;
        loop {
            if pos == 0 {
                current = None;
                break;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < k {
                break;
            }
            cur[pos] = 0;
        }
        Some(Coloring(out))
    })
}

/// All `r`-element subsets of `0..n`, lexicographic, zero-based.
pub fn combinations(n: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current = if r <= n { Some((0..r).collect::<Vec<_>>()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let cur = current.as_mut().unwrap();
        let mut i = r;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if cur[i] < n - r + i {
                cur[i] += 1;
                for j in i + 1..r {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Sign of a zero-based permutation in one-line notation.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Signature of the permutation carrying the sorted word
/// `1^{n_1} 2^{n_2} … k^{n_k}` onto `coloring`: the j-th slot of color c in
/// the sorted word goes to the j-th smallest position of color c.
pub fn coloring_signature(coloring: &Coloring, block_sizes: &[usize]) -> Result<i8> {
    let k = block_sizes.len();
    if coloring.max_color().is_some_and(|c| c >= k) || coloring.counts(k) != block_sizes {
        return Err(Error::ColorCountMismatch);
    }
    let mut perm = Vec::with_capacity(coloring.len());
    for c in 0..k {
        perm.extend(coloring.positions_of(c));
    }
    Ok(permutation_sign(&perm))
}

/// Determinant of the matrix whose j-th column is column j of
/// `mats[coloring_j]`.
pub fn mixed_column_det(mats: &[RationalMatrix], coloring: &Coloring) -> Result<Rational> {
    let n = coloring.len();
    if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::SizeMismatch(format!(
            "mixed-column determinant needs {n}x{n} matrices"
        )));
    }
    if let Some(c) = coloring.max_color().filter(|&c| c >= mats.len()) {
        return Err(Error::SizeMismatch(format!(
            "color {} but only {} matrices",
            c + 1,
            mats.len()
        )));
    }
    let cols = coloring.colors();
    RationalMatrix::from_fn(n, n, |i, j| mats[cols[j]][(i, j)].clone()).det()
}

/// All maximal minors of an `r × n` matrix with `r ≤ n`, keyed by column set.
pub fn plucker_coords(m: &RationalMatrix) -> Result<BTreeMap<IndexSet, Rational>> {
    if m.rows() > m.cols() {
        return Err(Error::BadShape {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let rows: Vec<usize> = (0..m.rows()).collect();
    combinations(m.cols(), m.rows())
        .map(|cols| Ok((IndexSet::from_zero_based(&cols), m.select(&rows, &cols).det()?)))
        .collect()
}
