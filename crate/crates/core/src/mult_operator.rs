//! Matrices of left/right multiplication and their determinants.
//!
//! Column `j` of an operator matrix is the image of the basis vector `e_j`.
//! Exact determinants use fraction-free (Bareiss) elimination over big
//! integers after clearing row denominators; float determinants use LU with
//! partial pivoting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cd_algebra::{BasisTable, CdElement, OctonionPair, MAX_TABLE_LEVEL};
use crate::error::{Result, SedError};
use crate::scalar::{Rational, Scalar};

/// Singular-pivot threshold for [`det_float`].
pub const FLOAT_PIVOT_TOL: f64 = 1e-13;

/// Dense square matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Scalar> OperatorMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![T::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(SedError::InvalidParameter("matrix is not square".into()));
        }
        Ok(Self { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.dim + j] = v;
    }

    fn add_at(&mut self, i: usize, j: usize, v: T, positive: bool) {
        let idx = i * self.dim + j;
        let cur = std::mem::replace(&mut self.entries[idx], T::zero());
        self.entries[idx] = if positive { cur + v } else { cur - v };
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn apply(&self, w: &[T]) -> Vec<T> {
        (0..self.dim).map(|i| crate::cd_algebra::dot(self.row(i), w)).collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.clone() * other.get(k, j).clone();
                    out.add_at(i, j, v, true);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|e| s.clone() * e.clone()).collect() }
    }

    pub fn to_f64(&self) -> OperatorMatrix<f64> {
        OperatorMatrix { dim: self.dim, entries: self.entries.iter().map(|e| e.to_f64()).collect() }
    }

    /// Places `block` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Self) {
        for i in 0..block.dim {
            for j in 0..block.dim {
                self.set(r + i, c + j, block.get(i, j).clone());
            }
        }
    }

    /// One row per line, entries separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_text()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_whitespace().map(T::parse_text).collect::<Result<Vec<T>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

impl<T: Scalar> fmt::Debug for OperatorMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorMatrix({})\n{}", self.dim, self.to_text())
    }
}

/// Matrix of `w ↦ v w`.
pub fn left_mult_matrix<T: Scalar>(v: &CdElement<T>) -> OperatorMatrix<T> {
    if v.level() <= MAX_TABLE_LEVEL {
        left_mult_matrix_with(v, BasisTable::cached(v.level()))
    } else {
        left_mult_matrix_reference(v)
    }
}

/// Left multiplication matrix built from an explicit basis table.
pub fn left_mult_matrix_with<T: Scalar>(v: &CdElement<T>, table: &BasisTable) -> OperatorMatrix<T> {
    assert_eq!(v.level(), table.level(), "table level must match the element");
    let n = v.dim();
    let mut m = OperatorMatrix::zeros(n);
    for (k, vk) in v.coeffs().iter().enumerate() {
        if vk.is_zero() {
            continue;
        }
        for j in 0..n {
            let (i, s) = table.product(k, j);
            m.add_at(i, j, vk.clone(), s > 0);
        }
    }
    m
}

/// Column-by-column evaluation of `v e_j` through the recursion.
pub fn left_mult_matrix_reference<T: Scalar>(v: &CdElement<T>) -> OperatorMatrix<T> {
    let n = v.dim();
    let mut m = OperatorMatrix::zeros(n);
    for j in 0..n {
        let col = v.multiply(&CdElement::basis(v.level(), j)).expect("same level");
        for (i, c) in col.into_coeffs().into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    m
}

/// Matrix of `w ↦ w v`.
pub fn right_mult_matrix<T: Scalar>(v: &CdElement<T>) -> OperatorMatrix<T> {
    if v.level() > MAX_TABLE_LEVEL {
        return right_mult_matrix_reference(v);
    }
    let table = BasisTable::cached(v.level());
    let n = v.dim();
    let mut m = OperatorMatrix::zeros(n);
    for (k, vk) in v.coeffs().iter().enumerate() {
        if vk.is_zero() {
            continue;
        }
        for j in 0..n {
            let (i, s) = table.product(j, k);
            m.add_at(i, j, vk.clone(), s > 0);
        }
    }
    m
}

pub fn right_mult_matrix_reference<T: Scalar>(v: &CdElement<T>) -> OperatorMatrix<T> {
    let n = v.dim();
    let mut m = OperatorMatrix::zeros(n);
    for j in 0..n {
        let col = CdElement::basis(v.level(), j).multiply(v).expect("same level");
        for (i, c) in col.into_coeffs().into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    m
}

/// Octonion conjugation as an 8×8 matrix, `diag(1, -1, ..., -1)`.
pub fn conjugation_matrix<T: Scalar>(dim: usize) -> OperatorMatrix<T> {
    let mut m = OperatorMatrix::zeros(dim);
    m.set(0, 0, T::one());
    for i in 1..dim {
        m.set(i, i, -T::one());
    }
    m
}

/// `M(v)` assembled from octonion blocks:
///
/// ```text
/// [ L_{v1}     -R_{v2} C ]
/// [ L_{v2} C    R_{v1}   ]
/// ```
///
/// where `C` is octonion conjugation. The conjugations come from the `w̄1`,
/// `w̄2` in the doubling rule.
pub fn sedenion_block_matrix<T: Scalar>(p: &OctonionPair<T>) -> OperatorMatrix<T> {
    let c = conjugation_matrix::<T>(8);
    let l1 = left_mult_matrix(&p.v1);
    let l2c = left_mult_matrix(&p.v2).matmul(&c);
    let r1 = right_mult_matrix(&p.v1);
    let r2c = right_mult_matrix(&p.v2).matmul(&c).scale(&-T::one());
    let mut m = OperatorMatrix::zeros(16);
    m.set_block(0, 0, &l1);
    m.set_block(0, 8, &r2c);
    m.set_block(8, 0, &l2c);
    m.set_block(8, 8, &r1);
    m
}

/// Clears the denominators of each row; returns the integer matrix and the
/// product of the row multipliers.
fn integer_rows(m: &OperatorMatrix<Rational>) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.dim())
        .map(|i| {
            let l = m.row(i).iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
            scale *= &l;
            m.row(i).iter().map(|e| e.numer() * (&l / e.denom())).collect()
        })
        .collect();
    (rows, scale)
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det_exact(m: &OperatorMatrix<Rational>) -> Rational {
    let n = m.dim();
    if n == 0 {
        return Rational::one();
    }
    let (mut a, scale) = integer_rows(m);
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    let det = if negate { -det } else { det };
    Rational::new(det, scale)
}

/// Float determinant by LU with partial pivoting. Returns exactly `0.0` when a
/// pivot falls below [`FLOAT_PIVOT_TOL`].
pub fn det_float(m: &OperatorMatrix<f64>) -> f64 {
    let n = m.dim();
    let mut a = m.rows();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))
            .expect("non-empty range");
        if a[p][k].abs() < FLOAT_PIVOT_TOL {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k];
        det *= pivot;
        let (top, rest) = a.split_at_mut(k + 1);
        let pr = &top[k];
        for row in rest.iter_mut() {
            let f = row[k] / pivot;
            if f == 0.0 {
                continue;
            }
            for (x, p) in row[k + 1..].iter_mut().zip(&pr[k + 1..]) {
                *x -= f * p;
            }
        }
    }
    det
}

/// Determinant in the scalar's own backend: Bareiss for rationals, LU for floats.
pub trait Determinant: Scalar {
    fn det(m: &OperatorMatrix<Self>) -> Self;
}

impl Determinant for Rational {
    fn det(m: &OperatorMatrix<Self>) -> Self {
        det_exact(m)
    }
}

impl Determinant for f64 {
    fn det(m: &OperatorMatrix<Self>) -> Self {
        det_float(m)
    }
}

/// Reduced row echelon form over the rationals; returns the pivot columns.
pub fn rref_exact(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pr = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pr) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_exact(m: &OperatorMatrix<Rational>) -> usize {
    rref_exact(&mut m.rows()).len()
}

/// Exact nullspace basis: one vector per free column, in increasing column
/// order, with a 1 in its free column.
pub fn nullspace_exact(m: &OperatorMatrix<Rational>) -> Vec<Vec<Rational>> {
    let n = m.dim();
    let mut rows = m.rows();
    let pivots = rref_exact(&mut rows);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[r][free].clone();
            }
            v
        })
        .collect()
}

/// Float nullspace by Gauss–Jordan elimination with partial pivoting. Columns
/// whose best pivot is below `rel_tol · max|m|` are treated as free.
pub fn nullspace_float(m: &OperatorMatrix<f64>, rel_tol: f64) -> Vec<Vec<f64>> {
    let n = m.dim();
    let mut a = m.rows();
    let scale = a.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    }
    let tol = rel_tol * scale;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == n {
            break;
        }
        let p = (r..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).expect("rows remain");
        if a[p][c].abs() <= tol {
            continue;
        }
        a.swap(r, p);
        let inv = 1.0 / a[r][c];
        for v in a[r].iter_mut() {
            *v *= inv;
        }
        let pr = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0.0 {
                let f = row[c];
                for (x, p) in row.iter_mut().zip(&pr) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0.0; n];
            v[free] = 1.0;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][free];
            }
            v
        })
        .collect()
}

/// Exact integer power.
pub fn rational_pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cd_algebra::{join, split};
    use crate::rng::SeededRng;
    use crate::scalar::ratio;

    type Q = Rational;

    /// Laplace expansion along the first row; the independent oracle for
    /// small determinants and for sparse 16×16 matrices.
    fn det_cofactor(m: &[Vec<Q>]) -> Q {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut total = Q::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Q>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
            let term = &m[0][j] * det_cofactor(&minor);
            total = if j % 2 == 0 { total + term } else { total - term };
        }
        total
    }

    fn random_sedenion(rng: &mut SeededRng) -> CdElement<Q> {
        CdElement::new(4, (0..16).map(|_| rng.rational(3, 3)).collect()).unwrap()
    }

    fn random_small(rng: &mut SeededRng, n: usize) -> OperatorMatrix<Q> {
        OperatorMatrix::from_rows((0..n).map(|_| (0..n).map(|_| rng.rational(5, 4)).collect()).collect()).unwrap()
    }

    #[test]
    fn identity_matrices() {
        for level in 0..=4 {
            let m = left_mult_matrix(&CdElement::<Q>::one(level));
            assert_eq!(m, OperatorMatrix::identity(1 << level));
            assert_eq!(right_mult_matrix(&CdElement::<Q>::one(level)), OperatorMatrix::identity(1 << level));
        }
        let two = CdElement::<Q>::one(4).scale(&ratio(2, 1));
        assert_eq!(left_mult_matrix(&two), OperatorMatrix::identity(16).scale(&ratio(2, 1)));
    }

    #[test]
    fn matrices_reproduce_products() {
        let mut rng = SeededRng::new(11);
        for _ in 0..10 {
            let v = random_sedenion(&mut rng);
            let l = left_mult_matrix(&v);
            let r = right_mult_matrix(&v);
            assert_eq!(l, left_mult_matrix_reference(&v));
            assert_eq!(r, right_mult_matrix_reference(&v));
            for _ in 0..50 {
                let w = random_sedenion(&mut rng);
                assert_eq!(l.apply(w.coeffs()), v.multiply(&w).unwrap().into_coeffs());
                assert_eq!(r.apply(w.coeffs()), w.multiply(&v).unwrap().into_coeffs());
            }
        }
    }

    #[test]
    fn float_matrices_reproduce_products() {
        let mut rng = SeededRng::new(12);
        let v = CdElement::<f64>::new(4, rng.normals::<16>().to_vec()).unwrap();
        let l = left_mult_matrix(&v);
        for _ in 0..50 {
            let w = CdElement::<f64>::new(4, rng.normals::<16>().to_vec()).unwrap();
            let direct = v.multiply(&w).unwrap();
            let via = l.apply(w.coeffs());
            let scale = direct.norm_sq().sqrt();
            for (a, b) in via.iter().zip(direct.coeffs()) {
                assert!((a - b).abs() <= 1e-12 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn right_mult_column_check() {
        let e1 = CdElement::<Q>::basis(3, 1);
        let e2 = CdElement::<Q>::basis(3, 2);
        let r = right_mult_matrix(&e1);
        assert_eq!(r.column(2), e2.multiply(&e1).unwrap().into_coeffs());
    }

    #[test]
    fn block_form_with_conjugation_matches() {
        let mut rng = SeededRng::new(13);
        for _ in 0..100 {
            let v = random_sedenion(&mut rng);
            assert_eq!(left_mult_matrix(&v), sedenion_block_matrix(&split(&v).unwrap()));
        }
    }

    #[test]
    fn block_form_without_conjugation_differs() {
        // [[L1, -R2], [L2, R1]] misses the conjugations: v = e8 already shows it.
        let p = split(&CdElement::<Q>::basis(4, 8)).unwrap();
        let mut printed = OperatorMatrix::<Q>::zeros(16);
        printed.set_block(0, 0, &left_mult_matrix(&p.v1));
        printed.set_block(0, 8, &right_mult_matrix(&p.v2).scale(&ratio(-1, 1)));
        printed.set_block(8, 0, &left_mult_matrix(&p.v2));
        printed.set_block(8, 8, &right_mult_matrix(&p.v1));
        assert_ne!(printed, left_mult_matrix(&join(&p)));
    }

    #[test]
    fn det_exact_basics() {
        assert_eq!(det_exact(&OperatorMatrix::identity(16)), ratio(1, 1));
        let two = OperatorMatrix::<Q>::identity(16).scale(&ratio(2, 1));
        assert_eq!(det_exact(&two), ratio(65536, 1));
        let mut rng = SeededRng::new(14);
        for n in 1..=6 {
            for _ in 0..5 {
                let m = random_small(&mut rng, n);
                assert_eq!(det_exact(&m), det_cofactor(&m.rows()));
            }
        }
    }

    #[test]
    fn det_exact_is_multiplicative() {
        let mut rng = SeededRng::new(15);
        for n in [2, 3, 5] {
            let a = random_small(&mut rng, n);
            let b = random_small(&mut rng, n);
            assert_eq!(det_exact(&a.matmul(&b)), det_exact(&a) * det_exact(&b));
        }
    }

    #[test]
    fn det_exact_handles_zero_pivots() {
        let m = OperatorMatrix::from_rows(vec![
            vec![ratio(0, 1), ratio(1, 1), ratio(2, 1)],
            vec![ratio(1, 2), ratio(0, 1), ratio(3, 1)],
            vec![ratio(4, 1), ratio(-5, 1), ratio(6, 1)],
        ])
        .unwrap();
        assert_eq!(det_exact(&m), det_cofactor(&m.rows()));
        let singular = OperatorMatrix::from_rows(vec![vec![ratio(1, 1), ratio(2, 1)], vec![ratio(2, 1), ratio(4, 1)]]).unwrap();
        assert_eq!(det_exact(&singular), ratio(0, 1));
    }

    #[test]
    fn det_of_small_sedenion_matches_cofactor_oracle() {
        // v1 = e0 + e1, v2 = 2 e0. The matrix is sparse enough for Laplace expansion.
        let v = CdElement::<Q>::from_i64s(4, &[1, 1, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let m = left_mult_matrix(&v);
        let oracle = det_cofactor(&m.rows());
        assert_eq!(oracle, ratio(1_679_616, 1));
        assert_eq!(det_exact(&m), oracle);
    }

    #[test]
    fn octonion_determinant_law() {
        let mut rng = SeededRng::new(16);
        for _ in 0..100 {
            let x = CdElement::<Q>::new(3, (0..8).map(|_| rng.rational(3, 3)).collect()).unwrap();
            let n4 = rational_pow(&x.norm_sq(), 4);
            assert_eq!(det_exact(&left_mult_matrix(&x)), n4);
            assert_eq!(det_exact(&right_mult_matrix(&x)), n4);
        }
    }

    #[test]
    fn homogeneity_and_symmetries() {
        let mut rng = SeededRng::new(17);
        for _ in 0..10 {
            let v = random_sedenion(&mut rng);
            let s = rng.rational(3, 3);
            let d = det_exact(&left_mult_matrix(&v));
            assert_eq!(det_exact(&left_mult_matrix(&v.scale(&s))), rational_pow(&s, 16) * &d);
            let p = split(&v).unwrap();
            assert_eq!(det_exact(&left_mult_matrix(&join(&p.swapped()))), d);
            assert_eq!(det_exact(&left_mult_matrix(&join(&p.with_negated_second()))), d);
        }
    }

    #[test]
    fn det_float_agrees_with_exact() {
        assert_eq!(det_float(&OperatorMatrix::identity(16)), 1.0);
        let zd = CdElement::<f64>::basis(4, 1).add(&CdElement::basis(4, 10)).unwrap();
        assert!(det_float(&left_mult_matrix(&zd)).abs() <= 1e-9);
        let mut rng = SeededRng::new(18);
        for _ in 0..100 {
            let v = random_sedenion(&mut rng);
            let exact = det_exact(&left_mult_matrix(&v)).to_f64();
            let float = det_float(&left_mult_matrix(&v.to_f64()));
            assert!((exact - float).abs() <= 1e-9 * exact.abs(), "{exact} vs {float}");
        }
        for n in [3, 7, 12] {
            let m = random_small(&mut rng, n);
            let exact = det_exact(&m).to_f64();
            let float = det_float(&m.to_f64());
            assert!((exact - float).abs() <= 1e-9 * exact.abs().max(1e-300));
        }
    }

    #[test]
    fn exact_nullspace() {
        let v = CdElement::<Q>::basis(4, 1).add(&CdElement::basis(4, 10)).unwrap();
        let m = left_mult_matrix(&v);
        let ns = nullspace_exact(&m);
        assert_eq!(ns.len(), 4);
        assert_eq!(rank_exact(&m), 12);
        for w in &ns {
            assert!(m.apply(w).iter().all(|x| x.is_zero()));
        }
        assert!(nullspace_exact(&OperatorMatrix::<Q>::identity(5)).is_empty());
    }

    #[test]
    fn float_nullspace() {
        let v = CdElement::<f64>::basis(4, 1).add(&CdElement::basis(4, 10)).unwrap();
        let m = left_mult_matrix(&v);
        let ns = nullspace_float(&m, 1e-10);
        assert_eq!(ns.len(), 4);
        for w in &ns {
            assert!(m.apply(w).iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn dump_round_trip() {
        let v = CdElement::<Q>::new(2, vec![ratio(1, 2), ratio(-1, 1), ratio(0, 1), ratio(3, 1)]).unwrap();
        let m = left_mult_matrix(&v);
        let text = m.to_text();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().next().unwrap(), "1/2 1 0 -3");
        assert_eq!(OperatorMatrix::<Q>::parse_text(&text).unwrap(), m);
    }
}
