//! Multicirculant matrices, their spectra, and the exact decision of when
//! the interchange laws form a basis for the identities of a two-generated
//! finite abelian group.
//!
//! The matrix of interchange-law vectors is a level-2 multicirculant whose
//! eigenvalues are -1 + w^a x^a' + w^b x^b' over all m-th roots w and n-th
//! roots x of unity. Such an eigenvalue vanishes iff its two root terms are
//! the two primitive sixth roots of unity, which turns the zero test into a
//! pair of integer congruences. The congruence enumeration is the verdict of
//! record; a fraction-free integer rank computation and, for canonical
//! generators, the divisibility-by-six closed form cross-check it.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::group::GroupSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("component {index} is {value}, outside 0..{modulus}")]
    OutOfRange { index: usize, value: u64, modulus: u64 },
    #[error("top row has {got} entries but the index sequence yields {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("index sequence must be nonempty with positive entries")]
    BadSequence,
    #[error("malformed integer list `{0}`")]
    BadList(String),
}

/// A level-k multicirculant: an index sequence s and a top row indexed by
/// the product group of the Z_{s_i} through the mixed-radix bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulticirculantSpec {
    s: Vec<u64>,
    top_row: Vec<i64>,
}

/// Mixed-radix bijection onto 0..n-1: least significant component first.
pub fn star_index(x: &[u64], s: &[u64]) -> Result<u64, SpectralError> {
    if x.len() != s.len() {
        return Err(SpectralError::LengthMismatch { expected: s.len(), got: x.len() });
    }
    let mut index = 0u64;
    let mut stride = 1u64;
    for (i, (&xi, &si)) in x.iter().zip(s.iter()).enumerate() {
        if xi >= si {
            return Err(SpectralError::OutOfRange { index: i, value: xi, modulus: si });
        }
        index += xi * stride;
        stride *= si;
    }
    Ok(index)
}

fn unstar(mut index: u64, s: &[u64]) -> Vec<u64> {
    s.iter()
        .map(|&si| {
            let c = index % si;
            index /= si;
            c
        })
        .collect()
}

impl MulticirculantSpec {
    pub fn new(s: Vec<u64>, top_row: Vec<i64>) -> Result<MulticirculantSpec, SpectralError> {
        if s.is_empty() || s.contains(&0) {
            return Err(SpectralError::BadSequence);
        }
        let n: u64 = s.iter().product();
        if top_row.len() as u64 != n {
            return Err(SpectralError::LengthMismatch { expected: n as usize, got: top_row.len() });
        }
        Ok(MulticirculantSpec { s, top_row })
    }

    pub fn parse(s_text: &str, row_text: &str) -> Result<MulticirculantSpec, SpectralError> {
        let s: Result<Vec<u64>, _> = s_text.split(',').map(|p| p.trim().parse()).collect();
        let s = s.map_err(|_| SpectralError::BadList(s_text.to_string()))?;
        let row: Result<Vec<i64>, _> = row_text.split(',').map(|p| p.trim().parse()).collect();
        let row = row.map_err(|_| SpectralError::BadList(row_text.to_string()))?;
        MulticirculantSpec::new(s, row)
    }

    pub fn order(&self) -> usize {
        self.top_row.len()
    }

    pub fn sequence(&self) -> &[u64] {
        &self.s
    }

    pub fn top_row(&self) -> &[i64] {
        &self.top_row
    }
}

/// Expand the spec into the full matrix: entry (i, j) is the top-row entry
/// at the componentwise difference of the indices.
pub fn build_multicirculant(spec: &MulticirculantSpec) -> Vec<Vec<i64>> {
    let n = spec.order() as u64;
    (0..n)
        .map(|i| {
            let x = unstar(i, &spec.s);
            (0..n)
                .map(|j| {
                    let y = unstar(j, &spec.s);
                    let diff: Vec<u64> = x
                        .iter()
                        .zip(y.iter())
                        .zip(spec.s.iter())
                        .map(|((&xi, &yi), &si)| (yi + si - xi) % si)
                        .collect();
                    spec.top_row[star_index(&diff, &spec.s).unwrap() as usize]
                })
                .collect()
        })
        .collect()
}

/// The spectrum: one eigenvalue and eigenvector per tuple of roots of unity.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub determinant: Complex64,
    pub determinant_exact: BigInt,
}

/// Eigenpairs by the character construction: for each tuple of roots of
/// unity, the eigenvalue is the root-weighted sum of the top row and the
/// eigenvector has the product of root powers in each component.
pub fn eigenpairs(spec: &MulticirculantSpec) -> Vec<(Complex64, Vec<Complex64>)> {
    let n = spec.order() as u64;
    let k = spec.s.len();
    // primitive root powers per level
    let roots: Vec<Vec<Complex64>> = spec
        .s
        .iter()
        .map(|&si| {
            (0..si)
                .map(|p| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * p as f64 / si as f64))
                .collect()
        })
        .collect();
    (0..n)
        .map(|choice| {
            let js = unstar(choice, &spec.s);
            let character = |x: &[u64]| -> Complex64 {
                (0..k)
                    .map(|i| roots[i][(js[i] * x[i] % spec.s[i]) as usize])
                    .product()
            };
            let mut lambda = Complex64::zero();
            for t in 0..n {
                let x = unstar(t, &spec.s);
                lambda += Complex64::new(spec.top_row[t as usize] as f64, 0.0) * character(&x);
            }
            let vector: Vec<Complex64> = (0..n).map(|t| character(&unstar(t, &spec.s))).collect();
            (lambda, vector)
        })
        .collect()
}

/// Eigenvalues with the numeric determinant (product of eigenvalues) and
/// the exact integer determinant by fraction-free elimination.
pub fn eigenvalues(spec: &MulticirculantSpec) -> Spectrum {
    let eigenvalues: Vec<Complex64> = eigenpairs(spec).into_iter().map(|(l, _)| l).collect();
    let determinant = eigenvalues.iter().product();
    let matrix = build_multicirculant(spec);
    let determinant_exact = exact_determinant(&matrix);
    Spectrum { eigenvalues, determinant, determinant_exact }
}

/// Fraction-free Gaussian elimination over the integers. Returns the rank
/// and, for square matrices of full rank, the determinant (zero otherwise).
fn bareiss_big(matrix: &[Vec<i64>]) -> (usize, BigInt) {
    let rows = matrix.len();
    let cols = if rows == 0 { 0 } else { matrix[0].len() };
    let mut a: Vec<Vec<BigInt>> =
        matrix.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut prev = BigInt::one();
    let mut sign = 1i8;
    let mut rank = 0usize;
    let mut skipped_column = false;
    for col in 0..cols {
        if rank >= rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            skipped_column = true;
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = num / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    let det = if rows == cols && rank == rows && !skipped_column {
        let d = prev;
        if sign < 0 {
            -d
        } else {
            d
        }
    } else {
        BigInt::zero()
    };
    (rank, det)
}

/// i128 fast path of the same elimination; None on overflow.
fn bareiss_i128(matrix: &[Vec<i64>]) -> Option<(usize, i128)> {
    let rows = matrix.len();
    let cols = if rows == 0 { 0 } else { matrix[0].len() };
    let mut a: Vec<Vec<i128>> =
        matrix.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut prev: i128 = 1;
    let mut sign = 1i8;
    let mut rank = 0usize;
    let mut skipped_column = false;
    for col in 0..cols {
        if rank >= rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| a[r][col] != 0) else {
            skipped_column = true;
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = a[rank][col].checked_mul(a[r][c])?
                    .checked_sub(a[r][col].checked_mul(a[rank][c])?)?;
                a[r][c] = num / prev;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
    }
    let det = if rows == cols && rank == rows && !skipped_column {
        if sign < 0 {
            -prev
        } else {
            prev
        }
    } else {
        0
    };
    Some((rank, det))
}

/// Exact determinant of a square integer matrix.
pub fn exact_determinant(matrix: &[Vec<i64>]) -> BigInt {
    match bareiss_i128(matrix) {
        Some((_, det)) => BigInt::from(det),
        None => bareiss_big(matrix).1,
    }
}

/// Rank of an integer matrix over the rationals.
pub fn integer_rank(matrix: &[Vec<i64>]) -> usize {
    match bareiss_i128(matrix) {
        Some((rank, _)) => rank,
        None => bareiss_big(matrix).0,
    }
}

/// Index of a group element under the mixed-radix bijection for (m, n).
fn element_index(g: &GroupSpec, e: crate::group::GroupElement) -> usize {
    (e.i + e.j * g.m()) as usize
}

/// Top row of the interchange-law matrix: -1 at the identity, +1 at alpha
/// and at beta, entries accumulating when those coincide.
pub fn v_top_row(g: &GroupSpec) -> Vec<i64> {
    let mut row = vec![0i64; g.order() as usize];
    row[element_index(g, g.identity())] -= 1;
    row[element_index(g, g.alpha())] += 1;
    row[element_index(g, g.beta())] += 1;
    row
}

/// The matrix whose row for each group element h is -e_h + e_{alpha h} +
/// e_{beta h}; equal to the multicirculant generated by the identity row.
pub fn v_matrix(g: &GroupSpec) -> Vec<Vec<i64>> {
    let n = g.order() as usize;
    let mut rows = vec![vec![0i64; n]; n];
    for h in g.elements() {
        let row = &mut rows[element_index(g, h)];
        row[element_index(g, h)] -= 1;
        row[element_index(g, g.mul(g.alpha(), h))] += 1;
        row[element_index(g, g.mul(g.beta(), h))] += 1;
    }
    rows
}

/// Verdicts of the three decision methods. The exact congruence enumeration
/// is the verdict of record; the closed form applies only to the canonical
/// generators (1,0) and (0,1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisDecision {
    pub verdict: bool,
    pub congruence: bool,
    pub rank_full: bool,
    pub closed_form: Option<bool>,
}

/// Does some eigenvalue -1 + w^a x^a' + w^b x^b' vanish? A sum of two unit
/// complex numbers equals 1 only when they are e^{i pi/3} and e^{-i pi/3},
/// so vanishing reduces to a pair of congruences on the root exponents,
/// scaled by 6mn to stay in the integers.
fn congruence_zero_exists(g: &GroupSpec) -> bool {
    let (m, n) = (g.m() as u128, g.n() as u128);
    let (a, a1) = (g.alpha().i as u128, g.alpha().j as u128);
    let (b, b1) = (g.beta().i as u128, g.beta().j as u128);
    let modulus = 6 * m * n;
    let targets = [(m * n, 5 * m * n), (5 * m * n, m * n)];
    for j in 0..m {
        for k in 0..n {
            let first = (6 * n * a * j + 6 * m * a1 * k) % modulus;
            let second = (6 * n * b * j + 6 * m * b1 * k) % modulus;
            if targets.iter().any(|&(t1, t2)| first == t1 && second == t2) {
                return true;
            }
        }
    }
    false
}

/// Decide whether the interchange laws form a basis for the identities of
/// the group, reporting all three methods.
pub fn interchange_basis_decision(g: &GroupSpec) -> BasisDecision {
    let congruence = !congruence_zero_exists(g);
    let rank_full = integer_rank(&v_matrix(g)) == g.order() as usize;
    let canonical = g.alpha() == crate::group::GroupElement { i: 1 % g.m(), j: 0 }
        && g.beta() == crate::group::GroupElement { i: 0, j: 1 % g.n() };
    let closed_form = canonical.then(|| !(g.m().is_multiple_of(6) && g.n().is_multiple_of(6)));
    BasisDecision { verdict: congruence, congruence, rank_full, closed_form }
}

/// Relative agreement of the numeric and exact determinants.
pub fn determinant_agreement(spectrum: &Spectrum) -> f64 {
    let exact = spectrum.determinant_exact.to_f64().unwrap_or(f64::NAN);
    let diff = (spectrum.determinant - Complex64::new(exact, 0.0)).norm();
    diff / exact.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein_interchange_spec() -> MulticirculantSpec {
        MulticirculantSpec::new(vec![2, 2], vec![-1, 1, 1, 0]).unwrap()
    }

    #[test]
    fn star_index_examples() {
        assert_eq!(star_index(&[0, 0], &[2, 2]).unwrap(), 0);
        assert_eq!(star_index(&[1, 0], &[2, 2]).unwrap(), 1);
        assert_eq!(star_index(&[0, 1], &[2, 2]).unwrap(), 2);
        assert_eq!(star_index(&[1, 2], &[2, 3]).unwrap(), 5);
        assert!(matches!(
            star_index(&[2, 0], &[2, 2]),
            Err(SpectralError::OutOfRange { index: 0, value: 2, modulus: 2 })
        ));
        for t in 0..6u64 {
            assert_eq!(star_index(&unstar(t, &[2, 3]), &[2, 3]).unwrap(), t);
        }
    }

    #[test]
    fn builds_the_interchange_matrix() {
        let m = build_multicirculant(&klein_interchange_spec());
        assert_eq!(
            m,
            vec![
                vec![-1, 1, 1, 0],
                vec![1, -1, 0, 1],
                vec![1, 0, -1, 1],
                vec![0, 1, 1, -1],
            ]
        );
        let single = MulticirculantSpec::new(vec![1], vec![7]).unwrap();
        assert_eq!(build_multicirculant(&single), vec![vec![7]]);
        let circ = MulticirculantSpec::new(vec![3], vec![1, 2, 3]).unwrap();
        assert_eq!(
            build_multicirculant(&circ),
            vec![vec![1, 2, 3], vec![3, 1, 2], vec![2, 3, 1]]
        );
    }

    #[test]
    fn klein_spectrum() {
        let s = eigenvalues(&klein_interchange_spec());
        let mut reals: Vec<f64> = s.eigenvalues.iter().map(|l| l.re).collect();
        reals.sort_by(f64::total_cmp);
        let expected = [-3.0, -1.0, -1.0, 1.0];
        for (got, want) in reals.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        assert!(s.eigenvalues.iter().all(|l| l.im.abs() < 1e-9));
        assert_eq!(s.determinant_exact, BigInt::from(-3));
        assert!((s.determinant.re - -3.0).abs() < 1e-9);
    }

    #[test]
    fn tiny_spectra() {
        let single = MulticirculantSpec::new(vec![1], vec![5]).unwrap();
        let s = eigenvalues(&single);
        assert_eq!(s.eigenvalues.len(), 1);
        assert!((s.eigenvalues[0].re - 5.0).abs() < 1e-12);
        assert_eq!(s.determinant_exact, BigInt::from(5));

        let pair = MulticirculantSpec::new(vec![2], vec![3, 1]).unwrap();
        let s = eigenvalues(&pair);
        let mut reals: Vec<f64> = s.eigenvalues.iter().map(|l| l.re).collect();
        reals.sort_by(f64::total_cmp);
        assert!((reals[0] - 2.0).abs() < 1e-9 && (reals[1] - 4.0).abs() < 1e-9);
        assert_eq!(s.determinant_exact, BigInt::from(8));
    }

    #[test]
    fn v_matrix_examples() {
        let kl = GroupSpec::klein();
        assert_eq!(v_matrix(&kl), build_multicirculant(&klein_interchange_spec()));
        assert_eq!(v_top_row(&kl), vec![-1, 1, 1, 0]);

        let trivial = GroupSpec::new(1, 1, (0, 0), (0, 0)).unwrap();
        assert_eq!(v_matrix(&trivial), vec![vec![1]]);

        let doubled = GroupSpec::new(2, 1, (1, 0), (1, 0)).unwrap();
        assert_eq!(v_matrix(&doubled), vec![vec![-1, 2], vec![2, -1]]);
    }

    #[test]
    fn v_matrix_is_the_multicirculant_of_its_top_row() {
        for (m, n, alpha, beta) in [(2, 2, (1, 0), (0, 1)), (4, 2, (1, 1), (2, 1)), (3, 1, (1, 0), (2, 0))] {
            let g = GroupSpec::new(m, n, alpha, beta).unwrap();
            let spec = MulticirculantSpec::new(vec![m, n], v_top_row(&g)).unwrap();
            assert_eq!(v_matrix(&g), build_multicirculant(&spec));
        }
    }

    #[test]
    fn basis_decisions() {
        let kl = GroupSpec::klein();
        let d = interchange_basis_decision(&kl);
        assert!(d.verdict && d.congruence && d.rank_full);
        assert_eq!(d.closed_form, Some(true));

        let g66 = GroupSpec::new(6, 6, (1, 0), (0, 1)).unwrap();
        let d = interchange_basis_decision(&g66);
        assert!(!d.verdict && !d.congruence && !d.rank_full);
        assert_eq!(d.closed_form, Some(false));

        let g64 = GroupSpec::new(6, 4, (1, 0), (0, 1)).unwrap();
        let d = interchange_basis_decision(&g64);
        assert!(d.verdict && d.rank_full);
        assert_eq!(d.closed_form, Some(true));

        let trivial = GroupSpec::new(1, 1, (0, 0), (0, 0)).unwrap();
        let d = interchange_basis_decision(&trivial);
        assert!(d.verdict && d.congruence && d.rank_full);
        assert_eq!(d.closed_form, Some(true));

        // non-canonical generators get no closed form
        let g = GroupSpec::new(4, 2, (1, 1), (2, 1)).unwrap();
        assert_eq!(interchange_basis_decision(&g).closed_form, None);
    }

    #[test]
    fn elimination_agrees_between_integer_widths() {
        let mats: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2, 0], vec![0, 3]],
            vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]],
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![0, 0], vec![0, 0]],
        ];
        for m in mats {
            let (r_big, d_big) = bareiss_big(&m);
            let (r_small, d_small) = bareiss_i128(&m).unwrap();
            assert_eq!(r_big, r_small);
            assert_eq!(d_big, BigInt::from(d_small));
        }
        assert_eq!(exact_determinant(&[vec![1, 2], vec![3, 4]]), BigInt::from(-2));
        assert_eq!(integer_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(integer_rank(&[vec![1, 2, 3], vec![4, 5, 6]]), 2);
    }

    #[test]
    fn eigenvector_residuals_are_tiny() {
        let spec = klein_interchange_spec();
        let matrix = build_multicirculant(&spec);
        for (lambda, v) in eigenpairs(&spec) {
            for (i, row) in matrix.iter().enumerate() {
                let av: Complex64 = row
                    .iter()
                    .zip(v.iter())
                    .map(|(&a, &x)| Complex64::new(a as f64, 0.0) * x)
                    .sum();
                assert!((av - lambda * v[i]).norm() <= 1e-9);
            }
        }
    }
}
