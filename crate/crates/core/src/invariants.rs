//! Quartic invariants of a sedenion `v = v1 + v2 e8`, zero-divisor
//! classification, annihilators, and the Stiefel description of the
//! `D2 = 0` locus.
//!
//! Two quartics appear here:
//!
//! * `D2 = (|v1|² − |v2|²)² + 4⟨v1, v2⟩²`, in geometric and component form.
//! * `d2_full`, the quartic that actually satisfies
//!   `det M(v) = D1⁴ · d2_full²` for every sedenion. Writing `p = Re v1`,
//!   `q = Re v2`, `x = Im v1`, `y = Im v2`, `s = p² + q²`:
//!   `d2_full = (|x|² − |y|²)² + 4⟨x, y⟩² + 2s(|x|² + |y|²) + s²`.
//!   It agrees with `D2` exactly when `p = q = 0`.
//!
//! Zero divisors are the nonzero `v` with `d2_full(v) = 0`, i.e. `v1`, `v2`
//! pure imaginary, orthogonal and of equal norm. `D2 = 0` alone also admits
//! elements such as `e0 + e9`, for which `L_v` is invertible.

use rayon::prelude::*;
use serde::Serialize;

use crate::cd_algebra::{split, CdElement, OctonionPair, Sedenion, SEDENION_LEVEL};
use crate::error::{Result, SedError};
use crate::mult_operator::{left_mult_matrix, nullspace_exact, nullspace_float, Determinant};
use crate::scalar::{Rational, Scalar};

/// Default scale-invariant tolerance for the float zero-divisor tests.
pub const DEFAULT_ZD_TOL: f64 = 1e-10;
/// Tolerance on unit norms and orthogonality of a [`Frame`].
pub const FRAME_TOL: f64 = 1e-12;
/// Relative tolerance for the float factorization check.
pub const FLOAT_FACTOR_RTOL: f64 = 1e-9;

fn require_sedenion<T: Scalar>(v: &CdElement<T>) -> Result<OctonionPair<T>> {
    if v.level() != SEDENION_LEVEL {
        return Err(SedError::WrongLevel { expected: SEDENION_LEVEL, actual: v.level() });
    }
    split(v)
}

/// `(a, b, c) = (|v1|² + |v2|², |v1|² − |v2|², ⟨v1, v2⟩)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantTriple<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> InvariantTriple<T> {
    pub fn d1(&self) -> T {
        self.a.clone()
    }

    pub fn d2(&self) -> T {
        let four = T::from_i64(4);
        self.b.clone() * self.b.clone() + four * self.c.clone() * self.c.clone()
    }

    /// `a⁴ (b² + 4c²)²`.
    pub fn closed_form(&self) -> T {
        let a2 = self.a.clone() * self.a.clone();
        let d2 = self.d2();
        a2.clone() * a2 * d2.clone() * d2
    }
}

impl InvariantTriple<Rational> {
    /// `a ≥ 0`, `a ≥ |b|`, `4c² ≤ a² − b²`.
    pub fn is_realizable(&self) -> bool {
        let zero = Rational::from_i64(0);
        let four = Rational::from_i64(4);
        self.a >= zero
            && self.a >= self.b
            && self.a >= -self.b.clone()
            && &four * &self.c * &self.c <= &self.a * &self.a - &self.b * &self.b
    }
}

pub fn invariant_triple<T: Scalar>(v: &Sedenion<T>) -> Result<InvariantTriple<T>> {
    let p = require_sedenion(v)?;
    Ok(triple_of_pair(&p))
}

pub fn triple_of_pair<T: Scalar>(p: &OctonionPair<T>) -> InvariantTriple<T> {
    let n1 = p.v1.norm_sq();
    let n2 = p.v2.norm_sq();
    let c = p.v1.inner(&p.v2).expect("both octonions");
    InvariantTriple { a: n1.clone() + n2.clone(), b: n1 - n2, c }
}

/// `D1 = |v1|² + |v2|²`.
pub fn d1<T: Scalar>(v: &Sedenion<T>) -> Result<T> {
    Ok(invariant_triple(v)?.d1())
}

/// `D2 = (|v1|² − |v2|²)² + 4⟨v1, v2⟩²`.
pub fn d2_geometric<T: Scalar>(v: &Sedenion<T>) -> Result<T> {
    Ok(invariant_triple(v)?.d2())
}

/// `D2` expanded in the 16 coefficients `a_m`:
///
/// `Σ_{m,n} sgn(m,n) a_m² a_n² + 8 Σ_{0≤i<j≤7} a_i a_{i+8} a_j a_{j+8}`,
/// with `sgn(m,n) = −1` when `m`, `n` lie in different halves and
/// `|m − n| ≠ 8`, and `+1` otherwise.
pub fn d2_component<T: Scalar>(a: &[T; 16]) -> T {
    let sq: Vec<T> = a.iter().map(|x| x.clone() * x.clone()).collect();
    let mut total = T::zero();
    for m in 0..16 {
        for n in 0..16 {
            let cross = (m < 8) != (n < 8);
            let term = sq[m].clone() * sq[n].clone();
            total = if cross && m.abs_diff(n) != 8 { total - term } else { total + term };
        }
    }
    let mut mixed = T::zero();
    for i in 0..8 {
        for j in i + 1..8 {
            mixed = mixed + a[i].clone() * a[i + 8].clone() * a[j].clone() * a[j + 8].clone();
        }
    }
    total + T::from_i64(8) * mixed
}

/// The quartic with `det M(v) = D1⁴ · d2_full²` for all sedenions.
pub fn d2_full<T: Scalar>(v: &Sedenion<T>) -> Result<T> {
    let p = require_sedenion(v)?;
    let re1 = p.v1.real().clone();
    let re2 = p.v2.real().clone();
    let s = re1.clone() * re1.clone() + re2.clone() * re2.clone();
    let x = p.v1.norm_sq() - re1.clone() * re1.clone();
    let y = p.v2.norm_sq() - re2.clone() * re2.clone();
    let c = p.v1.inner(&p.v2)? - re1 * re2;
    let diff = x.clone() - y.clone();
    let two = T::from_i64(2);
    Ok(diff.clone() * diff + T::from_i64(4) * c.clone() * c + two * s.clone() * (x + y) + s.clone() * s)
}

/// One row of a factorization check.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport<T: Scalar> {
    pub v: Sedenion<T>,
    pub delta: T,
    pub d1: T,
    pub d2: T,
    pub holds: bool,
}

#[derive(Serialize)]
struct ReportLine<'a> {
    v: &'a str,
    delta: &'a str,
    d1: &'a str,
    d2: &'a str,
    holds: bool,
}

impl<T: Scalar> FactorizationReport<T> {
    /// `{"v": "...", "delta": "...", "d1": "...", "d2": "...", "holds": true}`
    pub fn to_json_line(&self) -> String {
        let v = self.v.to_text();
        let (delta, d1, d2) = (self.delta.to_text(), self.d1.to_text(), self.d2.to_text());
        serde_json::to_string(&ReportLine { v: &v, delta: &delta, d1: &d1, d2: &d2, holds: self.holds })
            .expect("plain strings serialize")
    }
}

/// Determinant of `M(v)` in the scalar's own backend.
pub fn delta<T: Determinant>(v: &Sedenion<T>) -> T {
    T::det(&left_mult_matrix(v))
}

fn agrees<T: Scalar>(lhs: &T, rhs: &T, scale: &T) -> bool {
    if T::EXACT {
        return lhs == rhs;
    }
    let (l, r, s) = (lhs.to_f64(), rhs.to_f64(), scale.to_f64());
    (l - r).abs() <= FLOAT_FACTOR_RTOL * l.abs().max(r.abs()).max(s)
}

/// Compares `det M(v)` with `D1⁴ D2²`: exactly for rationals, to relative
/// `1e-9` (against `max(|Δ|, |D1⁴D2²|, D1⁸)`) for floats.
pub fn check_factorization<T: Determinant>(v: &Sedenion<T>) -> Result<FactorizationReport<T>> {
    let t = invariant_triple(v)?;
    let delta = delta(v);
    let rhs = t.closed_form();
    let a4 = t.a.clone() * t.a.clone() * t.a.clone() * t.a.clone();
    let holds = agrees(&delta, &rhs, &(a4.clone() * a4));
    Ok(FactorizationReport { v: v.clone(), delta, d1: t.d1(), d2: t.d2(), holds })
}

/// As [`check_factorization`] with `d2_full` in place of `D2`; the `d2` field
/// of the report carries `d2_full`.
pub fn check_full_factorization<T: Determinant>(v: &Sedenion<T>) -> Result<FactorizationReport<T>> {
    let d1v = d1(v)?;
    let q = d2_full(v)?;
    let delta = delta(v);
    let a2 = d1v.clone() * d1v.clone();
    let rhs = a2.clone() * a2.clone() * q.clone() * q.clone();
    let holds = agrees(&delta, &rhs, &(a2.clone() * a2.clone() * a2.clone() * a2));
    Ok(FactorizationReport { v: v.clone(), delta, d1: d1v, d2: q, holds })
}

/// Runs [`check_factorization`] over a batch in parallel; output order
/// matches input order.
pub fn check_factorization_batch<T: Determinant>(vs: &[Sedenion<T>]) -> Result<Vec<FactorizationReport<T>>> {
    vs.par_iter().map(check_factorization).collect()
}

pub fn check_full_factorization_batch<T: Determinant>(vs: &[Sedenion<T>]) -> Result<Vec<FactorizationReport<T>>> {
    vs.par_iter().map(check_full_factorization).collect()
}

fn quartic_test<T: Scalar>(q: T, d1v: T, tol: f64) -> bool {
    if T::EXACT {
        return q.is_zero();
    }
    let d1v = d1v.to_f64();
    q.to_f64() <= tol * d1v * d1v
}

/// Zero-divisor test `d2_full(v) ≤ tol · D1(v)²`. The exact backend ignores
/// `tol` and tests `d2_full(v) = 0`.
pub fn is_zero_divisor<T: Scalar>(v: &Sedenion<T>, tol: f64) -> Result<bool> {
    require_sedenion(v)?;
    if v.is_zero() {
        return Err(SedError::ZeroElement);
    }
    Ok(quartic_test(d2_full(v)?, d1(v)?, tol))
}

/// `D2(v) ≤ tol · D1(v)²`: membership of the `D2 = 0` locus (the cone over
/// orthonormal 2-frames in R^8).
pub fn on_d2_locus<T: Scalar>(v: &Sedenion<T>, tol: f64) -> Result<bool> {
    require_sedenion(v)?;
    if v.is_zero() {
        return Err(SedError::ZeroElement);
    }
    Ok(quartic_test(d2_geometric(v)?, d1(v)?, tol))
}

/// Unit-norm annihilator from the float backend.
#[derive(Debug, Clone)]
pub struct Annihilator {
    pub w: Sedenion<f64>,
    /// `|v w|`.
    pub residual: f64,
    pub kernel_dim: usize,
}

/// First exact nullspace vector of `M(v)`, unnormalized.
#[derive(Debug, Clone)]
pub struct ExactAnnihilator {
    pub w: Sedenion<Rational>,
    pub kernel_dim: usize,
}

impl ExactAnnihilator {
    pub fn unit_f64(&self) -> Sedenion<f64> {
        let w = self.w.to_f64();
        let n = w.norm_sq().sqrt();
        w.scale(&(1.0 / n))
    }
}

/// Relative pivot threshold for the float nullspace of `M(v)`.
pub const NULLSPACE_RTOL: f64 = 1e-9;

pub fn find_annihilator(v: &Sedenion<f64>) -> Result<Annihilator> {
    if !is_zero_divisor(v, DEFAULT_ZD_TOL)? {
        return Err(SedError::NotZeroDivisor);
    }
    let m = left_mult_matrix(v);
    let kernel = nullspace_float(&m, NULLSPACE_RTOL);
    let first = kernel.first().ok_or(SedError::NotZeroDivisor)?;
    let norm = first.iter().map(|x| x * x).sum::<f64>().sqrt();
    let w = CdElement::new(SEDENION_LEVEL, first.iter().map(|x| x / norm).collect())?;
    let vw = v.multiply(&w)?;
    Ok(Annihilator { residual: vw.norm_sq().sqrt(), w, kernel_dim: kernel.len() })
}

pub fn find_annihilator_exact(v: &Sedenion<Rational>) -> Result<ExactAnnihilator> {
    if !is_zero_divisor(v, 0.0)? {
        return Err(SedError::NotZeroDivisor);
    }
    let kernel = nullspace_exact(&left_mult_matrix(v));
    let kernel_dim = kernel.len();
    let first = kernel.into_iter().next().ok_or(SedError::NotZeroDivisor)?;
    Ok(ExactAnnihilator { w: CdElement::new(SEDENION_LEVEL, first)?, kernel_dim })
}

/// Exact kernel dimension of `M(v)`.
pub fn kernel_dimension(v: &Sedenion<Rational>) -> usize {
    nullspace_exact(&left_mult_matrix(v)).len()
}

/// An orthonormal pair `(v1, v2)` in R^8: a point of `V_2(R^8)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub v1: [f64; 8],
    pub v2: [f64; 8],
}

pub(crate) fn dot8(a: &[f64; 8], b: &[f64; 8]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm8(a: &[f64; 8]) -> f64 {
    dot8(a, a).sqrt()
}

impl Frame {
    pub fn new(v1: [f64; 8], v2: [f64; 8]) -> Result<Self> {
        let f = Self { v1, v2 };
        let (n1, n2, o) = f.errors();
        if n1 > FRAME_TOL || n2 > FRAME_TOL || o > FRAME_TOL {
            return Err(SedError::InvalidFrame(format!(
                "norm errors {n1:.3e}, {n2:.3e}; orthogonality error {o:.3e}"
            )));
        }
        Ok(f)
    }

    /// Gram–Schmidt; `None` when the inputs are (numerically) dependent.
    pub fn orthonormalize(a: [f64; 8], b: [f64; 8]) -> Option<Self> {
        let na = norm8(&a);
        if na < 1e-8 {
            return None;
        }
        let u1 = a.map(|x| x / na);
        let proj = dot8(&b, &u1);
        let r: [f64; 8] = std::array::from_fn(|i| b[i] - proj * u1[i]);
        let nr = norm8(&r);
        if nr < 1e-8 {
            return None;
        }
        Some(Self { v1: u1, v2: r.map(|x| x / nr) })
    }

    /// `(| |v1| − 1 |, | |v2| − 1 |, |⟨v1, v2⟩|)`.
    pub fn errors(&self) -> (f64, f64, f64) {
        ((norm8(&self.v1) - 1.0).abs(), (norm8(&self.v2) - 1.0).abs(), dot8(&self.v1, &self.v2).abs())
    }
}

/// `Φ(r, (u1, u2)) = r u1 + (r u2) e8`.
pub fn stiefel_scale(r: f64, f: &Frame) -> Result<Sedenion<f64>> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(SedError::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    Frame::new(f.v1, f.v2)?;
    let coeffs: Vec<f64> = f.v1.iter().chain(&f.v2).map(|x| r * x).collect();
    CdElement::new(SEDENION_LEVEL, coeffs)
}

/// `Ψ(v) = (|v1|, (v1/|v1|, v2/|v2|))` for `v` on the `D2 = 0` locus.
pub fn stiefel_normalize(v: &Sedenion<f64>) -> Result<(f64, Frame)> {
    if !on_d2_locus(v, DEFAULT_ZD_TOL)? {
        return Err(SedError::NotOnLocus);
    }
    let p = require_sedenion(v)?;
    let r1 = p.v1.norm_sq().sqrt();
    let r2 = p.v2.norm_sq().sqrt();
    let v1: [f64; 8] = std::array::from_fn(|i| p.v1.coeffs()[i] / r1);
    let v2: [f64; 8] = std::array::from_fn(|i| p.v2.coeffs()[i] / r2);
    let frame = Frame::new(v1, v2).map_err(|_| SedError::NotOnLocus)?;
    Ok((r1, frame))
}

/// Rows `∇(|v1|² − |v2|²) = (2v1, −2v2)` and `∇⟨v1, v2⟩ = (v2, v1)`.
pub fn constraint_jacobian(v: &Sedenion<f64>) -> Result<[[f64; 16]; 2]> {
    let p = require_sedenion(v)?;
    let mut g = [[0.0; 16]; 2];
    for i in 0..8 {
        g[0][i] = 2.0 * p.v1.coeffs()[i];
        g[0][i + 8] = -2.0 * p.v2.coeffs()[i];
        g[1][i] = p.v2.coeffs()[i];
        g[1][i + 8] = p.v1.coeffs()[i];
    }
    Ok(g)
}

/// Numerical rank of a 2×16 matrix: singular values above `1e-8`.
pub fn rank_2xn(g: &[[f64; 16]; 2]) -> usize {
    let dot = |a: &[f64; 16], b: &[f64; 16]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let (p, q, r) = (dot(&g[0], &g[0]), dot(&g[0], &g[1]), dot(&g[1], &g[1]));
    // Eigenvalues of the Gram matrix [[p, q], [q, r]].
    let mean = 0.5 * (p + r);
    let disc = (0.25 * (p - r) * (p - r) + q * q).sqrt();
    [mean + disc, (mean - disc).max(0.0)].iter().filter(|&&l| l.sqrt() > 1e-8).count()
}

/// Rank of the constraint Jacobian at `Φ(1, f)`; 2 means the locus has
/// codimension 2 there.
pub fn codimension_check(f: &Frame) -> Result<usize> {
    Ok(rank_2xn(&constraint_jacobian(&stiefel_scale(1.0, f)?)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cd_algebra::join;
    use crate::rng::SeededRng;
    use crate::sampling::{exact_zero_divisor, random_frame, rational_sedenion};
    use crate::mult_operator::det_exact;
    use crate::scalar::ratio;

    type Q = Rational;

    fn q_el(vals: &[i64]) -> Sedenion<Q> {
        let mut v = vals.to_vec();
        v.resize(16, 0);
        CdElement::from_i64s(4, &v).unwrap()
    }

    fn e(i: usize) -> Sedenion<Q> {
        CdElement::basis(4, i)
    }

    #[test]
    fn d1_values() {
        assert_eq!(d1(&CdElement::<Q>::zero(4)).unwrap(), ratio(0, 1));
        let v = e(0).add(&e(1)).unwrap().add(&e(8)).unwrap();
        assert_eq!(d1(&v).unwrap(), ratio(3, 1));
        let mut rng = SeededRng::new(1);
        for _ in 0..100 {
            let v = rational_sedenion(&mut rng, 3, 3);
            assert_eq!(d1(&v).unwrap(), v.norm_sq());
        }
    }

    #[test]
    fn d2_geometric_values() {
        assert_eq!(d2_geometric(&e(1).add(&e(10)).unwrap()).unwrap(), ratio(0, 1));
        assert_eq!(d2_geometric(&e(0).add(&e(1)).unwrap().add(&e(8)).unwrap()).unwrap(), ratio(5, 1));
        assert_eq!(d2_geometric(&e(0)).unwrap(), ratio(1, 1));
    }

    #[test]
    fn d2_component_matches_geometric() {
        let zero: [Q; 16] = std::array::from_fn(|_| ratio(0, 1));
        assert_eq!(d2_component(&zero), ratio(0, 1));
        let v = e(0).add(&e(1)).unwrap().add(&e(8)).unwrap();
        let arr: [Q; 16] = v.coeffs().to_vec().try_into().unwrap();
        assert_eq!(d2_component(&arr), ratio(5, 1));
        let mut rng = SeededRng::new(2);
        for _ in 0..200 {
            let v = rational_sedenion(&mut rng, 3, 4);
            let arr: [Q; 16] = v.coeffs().to_vec().try_into().unwrap();
            assert_eq!(d2_component(&arr), d2_geometric(&v).unwrap());
        }
    }

    #[test]
    fn triples() {
        let t = invariant_triple(&e(0)).unwrap();
        assert_eq!((t.a, t.b, t.c), (ratio(1, 1), ratio(1, 1), ratio(0, 1)));
        let t = invariant_triple(&q_el(&[1, 1, 0, 0, 0, 0, 0, 0, 2])).unwrap();
        assert_eq!((t.a.clone(), t.b.clone(), t.c.clone()), (ratio(6, 1), ratio(-2, 1), ratio(2, 1)));
        assert_eq!(t.closed_form(), ratio(518_400, 1));
        let t = invariant_triple(&e(0).add(&e(1)).unwrap().add(&e(8)).unwrap()).unwrap();
        assert_eq!((t.a, t.b, t.c), (ratio(3, 1), ratio(1, 1), ratio(1, 1)));
        let mut rng = SeededRng::new(3);
        for _ in 0..100 {
            assert!(invariant_triple(&rational_sedenion(&mut rng, 3, 3)).unwrap().is_realizable());
        }
        assert!(!InvariantTriple { a: ratio(0, 1), b: ratio(1, 1), c: ratio(0, 1) }.is_realizable());
    }

    #[test]
    fn factorization_on_basic_elements() {
        let r = check_factorization(&e(0)).unwrap();
        assert_eq!((r.delta.clone(), r.d1.clone(), r.d2.clone()), (ratio(1, 1), ratio(1, 1), ratio(1, 1)));
        assert!(r.holds);
        let r = check_factorization(&e(1).add(&e(10)).unwrap()).unwrap();
        assert_eq!(r.delta, ratio(0, 1));
        assert_eq!(r.d2, ratio(0, 1));
        assert!(r.holds);
    }

    #[test]
    fn d2_factorization_fails_off_the_pure_imaginary_subspace() {
        // v1 = e0, v2 = e1: D2 = 0, but L_{e0 + e9} = I + L_{e9} with L_{e9}² = −I.
        let v = e(0).add(&e(9)).unwrap();
        let r = check_factorization(&v).unwrap();
        assert_eq!(r.d2, ratio(0, 1));
        assert_eq!(r.delta, ratio(256, 1));
        assert!(!r.holds);
        assert!(check_full_factorization(&v).unwrap().holds);
        // v1 = e0 + e1, v2 = 2 e0: closed form gives 518400, the determinant is 6^8.
        let r = check_factorization(&q_el(&[1, 1, 0, 0, 0, 0, 0, 0, 2])).unwrap();
        assert_eq!(r.delta, ratio(1_679_616, 1));
        assert!(!r.holds);
    }

    #[test]
    fn full_factorization_holds_exactly() {
        let mut rng = SeededRng::new(4);
        let vs: Vec<_> = (0..150).map(|_| rational_sedenion(&mut rng, 3, 3)).collect();
        for r in check_full_factorization_batch(&vs).unwrap() {
            assert!(r.holds, "{}", r.to_json_line());
        }
    }

    #[test]
    fn d2_factorization_holds_on_pure_imaginary_pairs() {
        let mut rng = SeededRng::new(5);
        for _ in 0..100 {
            let v = crate::sampling::pure_imaginary_sedenion(&mut rng, 3, 3);
            assert!(check_factorization(&v).unwrap().holds);
            assert_eq!(d2_full(&v).unwrap(), d2_geometric(&v).unwrap());
        }
    }

    #[test]
    fn float_factorization_report() {
        let v = e(1).add(&e(10)).unwrap().add(&e(3)).unwrap().to_f64();
        let r = check_full_factorization(&v).unwrap();
        assert!(r.holds);
        let j = check_factorization(&e(0).to_f64()).unwrap().to_json_line();
        assert_eq!(j, r#"{"v":"4:1.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0","delta":"1.0","d1":"1.0","d2":"1.0","holds":true}"#);
    }

    #[test]
    fn zero_divisor_predicate() {
        assert!(is_zero_divisor(&e(1).add(&e(10)).unwrap(), 0.0).unwrap());
        assert!(!is_zero_divisor(&e(0), 0.0).unwrap());
        assert!(!is_zero_divisor(&e(0).add(&e(9)).unwrap(), 0.0).unwrap());
        assert!(on_d2_locus(&e(0).add(&e(9)).unwrap(), 0.0).unwrap());
        assert_eq!(is_zero_divisor(&CdElement::<Q>::zero(4), 0.0), Err(SedError::ZeroElement));
        let v = e(3).add(&e(10)).unwrap().to_f64();
        for s in [1e-6, 0.5, 3.0, 1e6] {
            assert_eq!(is_zero_divisor(&v.scale(&s), DEFAULT_ZD_TOL).unwrap(), is_zero_divisor(&v, DEFAULT_ZD_TOL).unwrap());
        }
    }

    #[test]
    fn predicate_agrees_with_kernel() {
        let mut rng = SeededRng::new(6);
        let mut vs: Vec<Sedenion<Q>> = (0..20).map(|_| rational_sedenion(&mut rng, 2, 1)).collect();
        vs.extend((0..10).map(|_| exact_zero_divisor(&mut rng)));
        vs.push(e(0).add(&e(9)).unwrap());
        for v in &vs {
            let zd = is_zero_divisor(v, 0.0).unwrap();
            let singular = det_exact(&left_mult_matrix(v)) == ratio(0, 1);
            assert_eq!(zd, singular, "{v}");
            assert_eq!(zd, kernel_dimension(v) > 0, "{v}");
        }
    }

    #[test]
    fn homogeneity() {
        let mut rng = SeededRng::new(7);
        for _ in 0..20 {
            let v = rational_sedenion(&mut rng, 3, 3);
            let s = rng.rational(3, 3);
            let s2 = &s * &s;
            assert_eq!(d1(&v.scale(&s)).unwrap(), &s2 * d1(&v).unwrap());
            assert_eq!(d2_geometric(&v.scale(&s)).unwrap(), &s2 * &s2 * d2_geometric(&v).unwrap());
            assert_eq!(d2_full(&v.scale(&s)).unwrap(), &s2 * &s2 * d2_full(&v).unwrap());
        }
    }

    #[test]
    fn annihilators() {
        let v = e(1).add(&e(10)).unwrap();
        let a = find_annihilator(&v.to_f64()).unwrap();
        assert!(a.residual <= 1e-10);
        assert!((a.w.norm_sq() - 1.0).abs() < 1e-12);
        assert_eq!(a.kernel_dim, 4);
        let ex = find_annihilator_exact(&v).unwrap();
        assert!(v.multiply(&ex.w).unwrap().is_zero());
        assert!(!ex.w.is_zero());
        assert_eq!(find_annihilator(&e(0).to_f64()).unwrap_err(), SedError::NotZeroDivisor);
        assert_eq!(find_annihilator_exact(&e(0).add(&e(9)).unwrap()).unwrap_err(), SedError::NotZeroDivisor);
    }

    #[test]
    fn kernel_dimension_is_constant_on_zero_divisors() {
        let mut rng = SeededRng::new(8);
        let dims: Vec<usize> = (0..20).map(|_| kernel_dimension(&exact_zero_divisor(&mut rng))).collect();
        eprintln!("kernel dimensions of 20 exact zero divisors: {dims:?}");
        assert!(dims.iter().all(|&d| d == dims[0]));
    }

    #[test]
    fn stiefel_round_trips() {
        let v = e(1).add(&e(10)).unwrap().to_f64().scale(&3.0);
        let (r, f) = stiefel_normalize(&v).unwrap();
        assert!((r - 3.0).abs() < 1e-15);
        assert_eq!(f.v1, [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(f.v2, [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let mut rng = SeededRng::new(9);
        for _ in 0..100 {
            let f = random_frame(&mut rng);
            let r = 0.1 + 5.0 * rng.uniform();
            let v = stiefel_scale(r, &f).unwrap();
            let t = invariant_triple(&v).unwrap();
            assert!((t.a - 2.0 * r * r).abs() < 1e-12 * r * r);
            assert!(t.b.abs() < 1e-12 * r * r && t.c.abs() < 1e-12 * r * r);
            let (r2, f2) = stiefel_normalize(&v).unwrap();
            assert!((r2 - r).abs() <= 1e-12 * r);
            for i in 0..8 {
                assert!((f2.v1[i] - f.v1[i]).abs() <= 1e-12);
                assert!((f2.v2[i] - f.v2[i]).abs() <= 1e-12);
            }
            let back = stiefel_scale(r2, &f2).unwrap();
            for (a, b) in back.coeffs().iter().zip(v.coeffs()) {
                assert!((a - b).abs() <= 1e-12 * r);
            }
        }
    }

    #[test]
    fn stiefel_errors() {
        assert_eq!(stiefel_normalize(&e(0).to_f64()).unwrap_err(), SedError::NotOnLocus);
        let bad = Frame { v1: [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], v2: [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0] };
        assert!(matches!(stiefel_scale(1.0, &bad), Err(SedError::InvalidFrame(_))));
        let ok = Frame::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(stiefel_scale(-1.0, &ok).is_err());
    }

    #[test]
    fn codimension_is_two() {
        let f = Frame::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(codimension_check(&f).unwrap(), 2);
        let mut rng = SeededRng::new(10);
        for _ in 0..100 {
            assert_eq!(codimension_check(&random_frame(&mut rng)).unwrap(), 2);
        }
        // Parallel rows have rank 1.
        let mut g = [[0.0; 16]; 2];
        g[0][0] = 1.0;
        g[1][0] = 2.0;
        assert_eq!(rank_2xn(&g), 1);
    }

    #[test]
    fn symmetry_of_delta() {
        let mut rng = SeededRng::new(11);
        for _ in 0..10 {
            let p = split(&rational_sedenion(&mut rng, 3, 3)).unwrap();
            let d = delta(&join(&p));
            assert_eq!(delta(&join(&p.swapped())), d);
            assert_eq!(delta(&join(&p.with_negated_second())), d);
        }
    }
}
