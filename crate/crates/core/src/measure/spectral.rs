//! Floating-point diagnostics for symmetric measures: roots of the
//! characteristic polynomial along positive lines, interlacing under
//! restriction, and the die-roll factorization of commuting measures.
//!
//! These are the only float code paths in the crate; every tolerance is an
//! explicit argument.

use std::collections::BTreeMap;

use nalgebra::{Complex, DMatrix};

use super::{color_count_dist, KDetMeasure};
use crate::error::{Error, Result};
use crate::linalg::{rational_to_f64, Coloring};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Roots of `t ↦ det(A_1 + t (u_2 A_2 + … + u_k A_k))`, sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct LineRoots {
    pub roots: Vec<f64>,
    /// Largest imaginary part seen before projecting to the real line.
    pub max_imag: f64,
    /// Roots lost to a degree drop (they sit at minus infinity).
    pub at_infinity: usize,
}

/// Matrices of a measure in floating point, e.g. the symmetric form of a
/// spanning-tree measure which involves a matrix square root.
#[derive(Clone, Debug)]
pub struct FloatMeasure {
    pub mats: Vec<DMatrix<f64>>,
}

impl FloatMeasure {
    pub fn n(&self) -> usize {
        self.mats.first().map_or(0, |m| m.nrows())
    }

    pub fn k(&self) -> usize {
        self.mats.len()
    }

    pub fn point_prob(&self, x: &Coloring) -> f64 {
        let n = self.n();
        let cols = x.colors();
        DMatrix::from_fn(n, n, |i, j| self.mats[cols[j]][(i, j)]).determinant()
    }
}

/// `S^{-1/2} B_i S^{-1/2}` for positive semidefinite `B_i` with positive
/// definite sum `S`.
pub fn symmetric_sandwich(parts: &[DMatrix<f64>], tol: f64) -> Result<FloatMeasure> {
    let Some(first) = parts.first() else {
        return Err(Error::ShapeMismatch("no matrices".into()));
    };
    let n = first.nrows();
    let mut sum = DMatrix::zeros(n, n);
    for p in parts {
        sum += p;
    }
    let eig = sum.symmetric_eigen();
    let top = eig.eigenvalues.amax().max(1.0);
    if eig.eigenvalues.iter().any(|&l| l <= tol * top) {
        return Err(Error::NumericalFailure("sum is not positive definite".into()));
    }
    let q = &eig.eigenvectors;
    let inv_sqrt = q * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt())) * q.transpose();
    let mats = parts
        .iter()
        .map(|p| {
            let a = &inv_sqrt * p * &inv_sqrt;
            (&a + a.transpose()) * 0.5
        })
        .collect();
    Ok(FloatMeasure { mats })
}

/// Roots of `t ↦ det(e + t f)` via the eigenvalues of `(e + s f)^{-1} f` for
/// a shift `s` making `e + s f` invertible. Eigenvalues with modulus at most
/// `tol` correspond to roots at infinity and are dropped.
pub fn pencil_roots(e: &DMatrix<f64>, f: &DMatrix<f64>, tol: f64) -> Result<(Vec<Complex<f64>>, usize)> {
    let n = e.nrows();
    for s in [1.0, 0.5, 2.0, -1.0, 0.25, 3.7, -2.3] {
        let c = e + f * s;
        let Some(lu) = Some(c.clone().lu()) else { continue };
        let Some(inv) = lu.try_inverse() else { continue };
        let cond = c.norm() * inv.norm();
        if !cond.is_finite() || cond > 1e12 {
            continue;
        }
        let g = inv * f;
        let eig = match g.try_schur(f64::EPSILON, SCHUR_MAX_ITER) {
            Some(schur) => schur.complex_eigenvalues().iter().copied().collect::<Vec<_>>(),
            None => match symmetric_pencil_eigs(&c, f) {
                Some(real) => real.into_iter().map(|l| Complex::new(l, 0.0)).collect(),
                None => continue,
            },
        };
        let mut roots = Vec::with_capacity(n);
        let mut dropped = 0;
        for lambda in eig {
            if lambda.norm() <= tol {
                dropped += 1;
            } else {
                roots.push(Complex::new(s, 0.0) - lambda.inv());
            }
        }
        return Ok((roots, dropped));
    }
    Err(Error::RootFindingFailure("no well-conditioned shift for pencil".into()))
}

/// Unbounded QR iteration can stall on clustered eigenvalues.
const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues of `c^{-1} f` through `L^{-1} f L^{-ᵗ}` when `c = L Lᵗ` is
/// positive definite and `f` symmetric; `None` otherwise.
fn symmetric_pencil_eigs(c: &DMatrix<f64>, f: &DMatrix<f64>) -> Option<Vec<f64>> {
    if (f - f.transpose()).amax() > 1e-12 * f.amax().max(1.0) {
        return None;
    }
    let chol = ((c + c.transpose()) * 0.5).cholesky()?;
    let l_inv = chol.l().try_inverse()?;
    let h = &l_inv * f * l_inv.transpose();
    Some(
        ((&h + h.transpose()) * 0.5)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect(),
    )
}

/// Roots along the line `t ↦ (1, t u_2, …, t u_k)` for float symmetric
/// matrices. Fails when a root has an imaginary part above `tol` (relative
/// to its modulus when that exceeds one) or is positive beyond `tol`.
pub fn line_roots_f64(mats: &[DMatrix<f64>], u: &[f64], tol: f64) -> Result<LineRoots> {
    let Some(first) = mats.first() else {
        return Err(Error::ShapeMismatch("no matrices".into()));
    };
    if u.len() + 1 != mats.len() {
        return Err(Error::SizeMismatch(format!(
            "direction has {} entries, expected {}",
            u.len(),
            mats.len() - 1
        )));
    }
    if u.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::InvalidInput("direction entries must be positive".into()));
    }
    let scale = mats.iter().map(|m| m.amax()).fold(1.0, f64::max);
    if mats.iter().any(|m| (m - m.transpose()).amax() > tol * scale) {
        return Err(Error::NotSymmetric);
    }
    let n = first.nrows();
    let mut b = DMatrix::zeros(n, n);
    for (m, &w) in mats[1..].iter().zip(u) {
        b += m * w;
    }
    let (complex, at_infinity) = pencil_roots(first, &b, tol)?;
    let mut max_imag: f64 = 0.0;
    let mut roots = Vec::with_capacity(complex.len());
    for z in complex {
        let rel = z.im.abs() / z.norm().max(1.0);
        max_imag = max_imag.max(rel);
        if rel > tol {
            return Err(Error::RootFindingFailure(format!("non-real root {z}")));
        }
        if z.re > tol {
            return Err(Error::RootFindingFailure(format!("positive root {}", z.re)));
        }
        roots.push(z.re);
    }
    roots.sort_by(f64::total_cmp);
    Ok(LineRoots {
        roots,
        max_imag,
        at_infinity,
    })
}

/// [`line_roots_f64`] on an exact measure, after checking symmetry exactly.
pub fn line_roots(m: &KDetMeasure, u: &[f64], tol: f64) -> Result<LineRoots> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mats: Vec<DMatrix<f64>> = m.mats().iter().map(|a| a.to_f64()).collect();
    line_roots_f64(&mats, u, tol)
}

/// Principal submatrices with zero-based index `drop` removed.
pub fn restrict_f64(mats: &[DMatrix<f64>], drop: usize) -> Vec<DMatrix<f64>> {
    mats.iter()
        .map(|m| m.clone().remove_row(drop).remove_column(drop))
        .collect()
}

/// Whether `child` (degree at most n−1) interlaces `parent` (degree at most
/// n). Missing roots are treated as minus infinity.
pub fn interlaces(parent: &LineRoots, child: &LineRoots, n: usize, tol: f64) -> bool {
    let pad = |r: &LineRoots, len: usize| -> Option<Vec<f64>> {
        let missing = len.checked_sub(r.roots.len())?;
        let mut v = vec![f64::NEG_INFINITY; missing];
        v.extend(&r.roots);
        Some(v)
    };
    let (Some(p), Some(c)) = (pad(parent, n), pad(child, n.saturating_sub(1))) else {
        return false;
    };
    c.iter()
        .enumerate()
        .all(|(i, &ci)| p[i] <= ci + tol && ci <= p[i + 1] + tol)
}

/// Die-roll description of a commuting symmetric measure.
#[derive(Clone, Debug)]
pub struct CommutingFactorization {
    /// One row per eigenvector: the probabilities of each color.
    pub dice: Vec<Vec<f64>>,
    /// Convolution of the dice, keyed by color-count vector.
    pub convolution: BTreeMap<Vec<usize>, f64>,
    /// Largest deviation from the exact color-count distribution.
    pub max_deviation: f64,
}

/// Simultaneously diagonalizes commuting symmetric matrices and checks that
/// the sum of independent dice reproduces the color-count distribution.
pub fn commuting_factorization(m: &KDetMeasure, tol: f64, cap: u128) -> Result<CommutingFactorization> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    for (i, a) in m.mats().iter().enumerate() {
        for b in &m.mats()[i + 1..] {
            if a * b != b * a {
                return Err(Error::NotCommuting);
            }
        }
    }
    let (n, k) = (m.n(), m.k());
    let floats: Vec<DMatrix<f64>> = m.mats().iter().map(|a| a.to_f64()).collect();
    // generic weights so joint eigenspaces are the eigenspaces of the mix
    let mut mix = DMatrix::zeros(n, n);
    for (j, a) in floats.iter().enumerate() {
        mix += a * (1.0 + 0.618_033_988_749_895 * (j as f64 + 1.0).sqrt());
    }
    let q = mix.symmetric_eigen().eigenvectors;
    let mut dice = vec![vec![0.0; k]; n];
    for (j, a) in floats.iter().enumerate() {
        let d = q.transpose() * a * &q;
        let off = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| d[(r, c)].abs())
            .fold(0.0, f64::max);
        if off > tol.sqrt() {
            return Err(Error::NumericalFailure(format!(
                "simultaneous diagonalization left off-diagonal {off:e}"
            )));
        }
        for (i, die) in dice.iter_mut().enumerate() {
            die[j] = d[(i, i)];
        }
    }
    let mut convolution: BTreeMap<Vec<usize>, f64> = BTreeMap::from([(vec![0; k], 1.0)]);
    for die in &dice {
        let mut next = BTreeMap::new();
        for (counts, p) in &convolution {
            for (j, &q) in die.iter().enumerate() {
                let mut c = counts.clone();
                c[j] += 1;
                *next.entry(c).or_insert(0.0) += p * q;
            }
        }
        convolution = next;
    }
    let exact = color_count_dist(m, cap)?;
    let mut max_deviation: f64 = 0.0;
    for (counts, p) in &convolution {
        let e = exact.get(counts).map_or(0.0, rational_to_f64);
        max_deviation = max_deviation.max((p - e).abs());
    }
    for (counts, e) in &exact {
        if !convolution.contains_key(counts) {
            max_deviation = max_deviation.max(rational_to_f64(e).abs());
        }
    }
    if max_deviation > tol {
        return Err(Error::FactorizationMismatch(max_deviation));
    }
    Ok(CommutingFactorization {
        dice,
        convolution,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, RationalMatrix};
    use crate::measure::DEFAULT_CAP;

    #[test]
    fn double_root_at_minus_one() {
        let half = RationalMatrix::identity(2).scale(&rat(1, 2));
        let m = KDetMeasure::new(vec![half.clone(), half]).unwrap();
        let r = line_roots(&m, &[1.0], DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.roots.len(), 2);
        for t in r.roots {
            assert!((t + 1.0).abs() < 1e-12, "root {t}");
        }
    }

    #[test]
    fn rejects_nonsymmetric() {
        let a = RationalMatrix::from_ratios(&[&[(1, 2), (1, 4)], &[(0, 1), (1, 2)]]);
        let b = &RationalMatrix::identity(2) - &a;
        let m = KDetMeasure::new(vec![a, b]).unwrap();
        assert_eq!(line_roots(&m, &[1.0], DEFAULT_TOLERANCE), Err(Error::NotSymmetric));
    }

    #[test]
    fn complex_roots_are_reported() {
        // symmetric-looking check bypassed: det([[1, -t], [t, 1]]) = 1 + t^2
        let e = DMatrix::identity(2, 2);
        let f = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let (roots, _) = pencil_roots(&e, &f, 1e-12).unwrap();
        assert!(roots.iter().all(|z| (z.im.abs() - 1.0).abs() < 1e-9));
    }

    #[test]
    fn degree_drop_roots_at_infinity() {
        // A_2 has rank one: P(t) = det(A_1 + t A_2) has degree one
        let a2 = RationalMatrix::from_ratios(&[&[(1, 2), (0, 1)], &[(0, 1), (0, 1)]]);
        let a1 = &RationalMatrix::identity(2) - &a2;
        let m = KDetMeasure::new(vec![a1, a2]).unwrap();
        let r = line_roots(&m, &[1.0], DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.at_infinity, 1);
        assert!((r.roots[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn interlacing_check() {
        let p = LineRoots {
            roots: vec![-3.0, -2.0, -1.0],
            max_imag: 0.0,
            at_infinity: 0,
        };
        let good = LineRoots {
            roots: vec![-2.5, -1.5],
            max_imag: 0.0,
            at_infinity: 0,
        };
        let bad = LineRoots {
            roots: vec![-2.5, -2.2],
            max_imag: 0.0,
            at_infinity: 0,
        };
        assert!(interlaces(&p, &good, 3, 1e-9));
        assert!(!interlaces(&p, &bad, 3, 1e-9));
    }

    #[test]
    fn diagonal_dice() {
        let a1 = RationalMatrix::diagonal(&[rat(1, 3), rat(1, 4)]);
        let a2 = &RationalMatrix::identity(2) - &a1;
        let m = KDetMeasure::new(vec![a1, a2]).unwrap();
        let f = commuting_factorization(&m, 1e-10, DEFAULT_CAP).unwrap();
        let mut dice = f.dice.clone();
        dice.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert!((dice[0][0] - 0.25).abs() < 1e-12 && (dice[0][1] - 0.75).abs() < 1e-12);
        assert!((dice[1][0] - 1.0 / 3.0).abs() < 1e-12);
        // P(two of color 1) = 1/12, one each = 1/3*3/4 + 2/3*1/4 = 5/12, none = 1/2
        assert!((f.convolution[&vec![2, 0]] - 1.0 / 12.0).abs() < 1e-12);
        assert!((f.convolution[&vec![1, 1]] - 5.0 / 12.0).abs() < 1e-12);
        assert!((f.convolution[&vec![0, 2]] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uniform_dice_multinomial() {
        let third = RationalMatrix::identity(3).scale(&rat(1, 3));
        let m = KDetMeasure::new(vec![third.clone(), third.clone(), third]).unwrap();
        let f = commuting_factorization(&m, 1e-10, DEFAULT_CAP).unwrap();
        // multinomial(3; 1/3,1/3,1/3) at (1,1,1) = 6/27
        assert!((f.convolution[&vec![1, 1, 1]] - 6.0 / 27.0).abs() < 1e-12);
        assert!((f.convolution[&vec![3, 0, 0]] - 1.0 / 27.0).abs() < 1e-12);
    }

    #[test]
    fn single_die_k1() {
        let m = KDetMeasure::new(vec![RationalMatrix::identity(3)]).unwrap();
        let f = commuting_factorization(&m, 1e-10, DEFAULT_CAP).unwrap();
        assert!(f.dice.iter().all(|d| (d[0] - 1.0).abs() < 1e-12));
    }

    #[test]
    fn non_commuting_rejected() {
        let a = RationalMatrix::from_ratios(&[&[(1, 2), (1, 4)], &[(1, 4), (1, 2)]]);
        let b = RationalMatrix::diagonal(&[rat(1, 3), rat(1, 5)]);
        let c = &(&RationalMatrix::identity(2) - &a) - &b;
        let m = KDetMeasure::new(vec![a, b, c]).unwrap();
        assert!(matches!(
            commuting_factorization(&m, 1e-10, DEFAULT_CAP),
            Err(Error::NotCommuting)
        ));
    }
}
