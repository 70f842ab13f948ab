//! Seeded random inputs shared by tests, batch checks and the CLI.

use crate::cd_algebra::{CdElement, OctonionPair, Sedenion, OCTONION_LEVEL, SEDENION_LEVEL};
use crate::invariants::Frame;
use crate::rng::SeededRng;
use crate::scalar::{Rational, Scalar};

/// Sedenion with rational coefficients `p/q`, `q <= max_den`, in `[-range, range]`.
pub fn rational_sedenion(rng: &mut SeededRng, range: i64, max_den: i64) -> Sedenion<Rational> {
    CdElement::new(SEDENION_LEVEL, (0..16).map(|_| rng.rational(range, max_den)).collect()).expect("16 coefficients")
}

pub fn rational_octonion(rng: &mut SeededRng, range: i64, max_den: i64) -> CdElement<Rational> {
    CdElement::new(OCTONION_LEVEL, (0..8).map(|_| rng.rational(range, max_den)).collect()).expect("8 coefficients")
}

/// As [`rational_sedenion`] but with `Re v1 = Re v2 = 0`.
pub fn pure_imaginary_sedenion(rng: &mut SeededRng, range: i64, max_den: i64) -> Sedenion<Rational> {
    let mut coeffs: Vec<Rational> = (0..16).map(|_| rng.rational(range, max_den)).collect();
    coeffs[0] = Rational::from_i64(0);
    coeffs[8] = Rational::from_i64(0);
    CdElement::new(SEDENION_LEVEL, coeffs).expect("16 coefficients")
}

/// Uniformly distributed orthonormal 2-frame in R^8 (Gaussian draws, Gram–Schmidt).
pub fn random_frame(rng: &mut SeededRng) -> Frame {
    loop {
        let a: [f64; 8] = rng.normals();
        let b: [f64; 8] = rng.normals();
        if let Some(f) = Frame::orthonormalize(a, b) {
            return f;
        }
    }
}

/// Random frame with both vectors orthogonal to `e0`.
pub fn random_pure_imaginary_frame(rng: &mut SeededRng) -> Frame {
    loop {
        let mut a: [f64; 8] = rng.normals();
        let mut b: [f64; 8] = rng.normals();
        a[0] = 0.0;
        b[0] = 0.0;
        if let Some(f) = Frame::orthonormalize(a, b) {
            return f;
        }
    }
}

/// An exact zero divisor `x + (x e_k) e8` scaled by a random positive
/// rational, where `x` is a nonzero integer pure-imaginary octonion with
/// `x_k = 0`. For orthogonal pure imaginaries `x e_k` is pure imaginary,
/// orthogonal to `x`, and has the norm of `x`.
pub fn exact_zero_divisor(rng: &mut SeededRng) -> Sedenion<Rational> {
    loop {
        let k = rng.int_in(1, 7) as usize;
        let mut x: Vec<Rational> = (0..8).map(|_| Rational::from_i64(rng.int_in(-3, 3))).collect();
        x[0] = Rational::from_i64(0);
        x[k] = Rational::from_i64(0);
        let x = CdElement::new(OCTONION_LEVEL, x).expect("8 coefficients");
        if x.is_zero() {
            continue;
        }
        let y = x.multiply(&CdElement::basis(OCTONION_LEVEL, k)).expect("same level");
        let s = rng.rational(3, 3);
        let s = if s == Rational::from_i64(0) { Rational::from_i64(1) } else { s };
        let v = crate::cd_algebra::join(&OctonionPair { v1: x, v2: y });
        return v.scale(&s);
    }
}
