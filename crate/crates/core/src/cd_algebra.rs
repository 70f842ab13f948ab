//! Cayley–Dickson algebras of level `n` (dimension `2^n`).
//!
//! Multiplication is defined by the doubling rule
//!
//! ```text
//! (x1, x2)(y1, y2) = (x1 y1 - conj(y2) x2,  x2 conj(y1) + y2 x1)
//! ```
//!
//! applied recursively down to level 0, where it is multiplication of
//! scalars. Conjugation is `(x1, x2)* = (conj(x1), -x2)`. The recursion is the
//! reference definition; [`BasisTable`] caches the signed product of basis
//! elements for the hot paths and checks itself against the recursion when it
//! is built.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Result, SedError};
use crate::scalar::{looks_decimal, Rational, Scalar};

pub const OCTONION_LEVEL: u32 = 3;
pub const SEDENION_LEVEL: u32 = 4;
/// Largest level with a cached basis table.
pub const MAX_TABLE_LEVEL: u32 = 5;

/// An element of the level-`n` Cayley–Dickson algebra: `2^n` coefficients,
/// coefficient `m` multiplying basis element `e_m`.
#[derive(Clone, PartialEq)]
pub struct CdElement<T> {
    level: u32,
    coeffs: Vec<T>,
}

pub type Octonion<T> = CdElement<T>;
pub type Sedenion<T> = CdElement<T>;

impl<T: Scalar> CdElement<T> {
    pub fn new(level: u32, coeffs: Vec<T>) -> Result<Self> {
        if level > 16 || coeffs.len() != 1usize << level {
            return Err(SedError::CoefficientCount { level, len: coeffs.len() });
        }
        Ok(Self { level, coeffs })
    }

    /// Infers the level from the coefficient count, which must be a power of two.
    pub fn from_coeffs(coeffs: Vec<T>) -> Result<Self> {
        let len = coeffs.len();
        if !len.is_power_of_two() {
            return Err(SedError::CoefficientCount { level: 0, len });
        }
        Self::new(len.trailing_zeros(), coeffs)
    }

    pub fn zero(level: u32) -> Self {
        Self { level, coeffs: vec![T::zero(); 1 << level] }
    }

    pub fn one(level: u32) -> Self {
        Self::basis(level, 0)
    }

    /// The basis element `e_index`.
    pub fn basis(level: u32, index: usize) -> Self {
        let mut e = Self::zero(level);
        e.coeffs[index] = T::one();
        e
    }

    pub fn from_i64s(level: u32, values: &[i64]) -> Result<Self> {
        Self::new(level, values.iter().map(|&v| T::from_i64(v)).collect())
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn real(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_level(&self, other: &Self) -> Result<()> {
        if self.level != other.level {
            return Err(SedError::LevelMismatch { left: self.level, right: other.level });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| s.clone() * c.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CdElement<U> {
        CdElement { level: self.level, coeffs: self.coeffs.iter().map(f).collect() }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect();
        Self { level: self.level, coeffs }
    }

    pub fn to_f64(&self) -> CdElement<f64> {
        self.map(|c| c.to_f64())
    }

    /// `self · other` by the recursive doubling formula.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        Ok(Self { level: self.level, coeffs: mul_slices(&self.coeffs, &other.coeffs) })
    }

    pub fn conjugate(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for c in coeffs.iter_mut().skip(1) {
            *c = -c.clone();
        }
        Self { level: self.level, coeffs }
    }

    pub fn norm_sq(&self) -> T {
        dot(&self.coeffs, &self.coeffs)
    }

    pub fn inner(&self, other: &Self) -> Result<T> {
        self.check_level(other)?;
        Ok(dot(&self.coeffs, &other.coeffs))
    }

    /// Splits a level-`n` element into its two level-`n-1` halves,
    /// `v = v1 + v2 e_{2^(n-1)}`.
    pub fn halves(&self) -> Result<(Self, Self)> {
        if self.level == 0 {
            return Err(SedError::WrongLevel { expected: 1, actual: 0 });
        }
        let h = self.dim() / 2;
        let lo = Self { level: self.level - 1, coeffs: self.coeffs[..h].to_vec() };
        let hi = Self { level: self.level - 1, coeffs: self.coeffs[h..].to_vec() };
        Ok((lo, hi))
    }

    /// `level:c0,c1,...`
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.coeffs.iter().map(|c| c.to_text()).collect();
        format!("{}:{}", self.level, body.join(","))
    }

    /// Parses `level:c0,...,c_{2^n-1}`, or a bare comma list whose length
    /// fixes the level.
    pub fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once(':') {
            Some((lvl, body)) => {
                let level: u32 =
                    lvl.trim().parse().map_err(|_| SedError::Parse(format!("bad level in {s:?}")))?;
                Self::new(level, parse_list(body)?)
            }
            None => Self::from_coeffs(parse_list(s)?),
        }
    }
}

fn parse_list<T: Scalar>(body: &str) -> Result<Vec<T>> {
    body.split(',').map(T::parse_text).collect()
}

impl<T: Scalar> fmt::Debug for CdElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<T: Scalar> fmt::Display for CdElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Free-function form of [`CdElement::multiply`].
pub fn cd_multiply<T: Scalar>(x: &CdElement<T>, y: &CdElement<T>) -> Result<CdElement<T>> {
    x.multiply(y)
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn conj_slice<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut out = x.to_vec();
    for c in out.iter_mut().skip(1) {
        *c = -c.clone();
    }
    out
}

fn mul_slices<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    debug_assert_eq!(x.len(), y.len());
    if x.len() == 1 {
        return vec![x[0].clone() * y[0].clone()];
    }
    let h = x.len() / 2;
    let (x1, x2) = x.split_at(h);
    let (y1, y2) = y.split_at(h);
    let y1c = conj_slice(y1);
    let y2c = conj_slice(y2);
    let a = mul_slices(x1, y1);
    let b = mul_slices(&y2c, x2);
    let c = mul_slices(x2, &y1c);
    let d = mul_slices(y2, x1);
    let mut out = Vec::with_capacity(x.len());
    out.extend(a.into_iter().zip(b).map(|(p, q)| p - q));
    out.extend(c.into_iter().zip(d).map(|(p, q)| p + q));
    out
}

/// A sedenion presented as a pair of octonions, `v = v1 + v2 e8`.
#[derive(Clone, PartialEq)]
pub struct OctonionPair<T> {
    pub v1: Octonion<T>,
    pub v2: Octonion<T>,
}

impl<T: Scalar> fmt::Debug for OctonionPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}; {:?})", self.v1, self.v2)
    }
}

impl<T: Scalar> OctonionPair<T> {
    pub fn new(v1: Octonion<T>, v2: Octonion<T>) -> Result<Self> {
        for v in [&v1, &v2] {
            if v.level() != OCTONION_LEVEL {
                return Err(SedError::WrongLevel { expected: OCTONION_LEVEL, actual: v.level() });
            }
        }
        Ok(Self { v1, v2 })
    }

    pub fn from_slices(v1: &[T], v2: &[T]) -> Result<Self> {
        Self::new(
            CdElement::new(OCTONION_LEVEL, v1.to_vec())?,
            CdElement::new(OCTONION_LEVEL, v2.to_vec())?,
        )
    }

    pub fn swapped(&self) -> Self {
        Self { v1: self.v2.clone(), v2: self.v1.clone() }
    }

    pub fn with_negated_second(&self) -> Self {
        Self { v1: self.v1.clone(), v2: self.v2.neg() }
    }
}

/// Splits a sedenion into `(v1, v2)`: coefficients 0–7 and 8–15.
pub fn split<T: Scalar>(v: &Sedenion<T>) -> Result<OctonionPair<T>> {
    if v.level() != SEDENION_LEVEL {
        return Err(SedError::WrongLevel { expected: SEDENION_LEVEL, actual: v.level() });
    }
    let (v1, v2) = v.halves()?;
    Ok(OctonionPair { v1, v2 })
}

/// Concatenates `(v1, v2)` into the sedenion `v1 + v2 e8`.
pub fn join<T: Scalar>(p: &OctonionPair<T>) -> Sedenion<T> {
    let mut coeffs = p.v1.coeffs().to_vec();
    coeffs.extend_from_slice(p.v2.coeffs());
    CdElement { level: SEDENION_LEVEL, coeffs }
}

/// Signed structure constants: `e_i e_j = sign[i][j] · e_{index[i][j]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisTable {
    level: u32,
    index: Vec<u16>,
    sign: Vec<i8>,
}

impl BasisTable {
    /// Builds the table from the recursion and verifies it on dense elements.
    pub fn build(level: u32) -> Self {
        let n = 1usize << level;
        let mut index = vec![0u16; n * n];
        let mut sign = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                let p = CdElement::<i64s::I>::basis(level, i)
                    .multiply(&CdElement::basis(level, j))
                    .expect("same level");
                let mut hits = p.coeffs().iter().enumerate().filter(|(_, c)| c.0 != 0);
                let (k, c) = hits.next().expect("basis product is nonzero");
                assert!(hits.next().is_none(), "basis product is a single signed basis element");
                assert!(c.0 == 1 || c.0 == -1);
                index[i * n + j] = k as u16;
                sign[i * n + j] = c.0 as i8;
            }
        }
        let table = Self { level, index, sign };
        table.self_check();
        table
    }

    /// Process-wide cached table for `level <= MAX_TABLE_LEVEL`.
    pub fn cached(level: u32) -> &'static BasisTable {
        static TABLES: [OnceLock<BasisTable>; (MAX_TABLE_LEVEL + 1) as usize] =
            [const { OnceLock::new() }; (MAX_TABLE_LEVEL + 1) as usize];
        assert!(level <= MAX_TABLE_LEVEL, "no cached table above level {MAX_TABLE_LEVEL}");
        TABLES[level as usize].get_or_init(|| Self::build(level))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        1 << self.level
    }

    pub fn product(&self, i: usize, j: usize) -> (usize, i8) {
        let n = self.dim();
        (self.index[i * n + j] as usize, self.sign[i * n + j])
    }

    /// Multiplies via the table.
    pub fn multiply<T: Scalar>(&self, x: &CdElement<T>, y: &CdElement<T>) -> Result<CdElement<T>> {
        x.check_level(y)?;
        if x.level != self.level {
            return Err(SedError::LevelMismatch { left: x.level, right: self.level });
        }
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        for (i, xi) in x.coeffs.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coeffs.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let (k, s) = self.product(i, j);
                let term = xi.clone() * yj.clone();
                out[k] = if s > 0 { out[k].clone() + term } else { out[k].clone() - term };
            }
        }
        Ok(CdElement { level: self.level, coeffs: out })
    }

    /// A copy with the sign of `e_i e_j` flipped. Only for negative-control tests.
    pub fn corrupted(&self, i: usize, j: usize) -> Self {
        let mut t = self.clone();
        let n = t.dim();
        t.sign[i * n + j] = -t.sign[i * n + j];
        t
    }

    fn self_check(&self) {
        let n = self.dim() as i64;
        let x: CdElement<Rational> =
            CdElement::from_i64s(self.level, &(0..n).map(|k| 2 * k - n + 1).collect::<Vec<_>>()).unwrap();
        let y: CdElement<Rational> =
            CdElement::from_i64s(self.level, &(0..n).map(|k| (k * 7 % 5) - 2).collect::<Vec<_>>()).unwrap();
        let via_table = self.multiply(&x, &y).unwrap();
        let via_recursion = x.multiply(&y).unwrap();
        assert_eq!(via_table, via_recursion, "basis table disagrees with the recursion");
    }
}

/// Integer scalar used only to derive the basis table.
mod i64s {
    use std::ops::{Add, Mul, Neg, Sub};

    use num_traits::{One, Zero};

    use crate::error::{Result, SedError};
    use crate::scalar::Scalar;

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub struct I(pub i64);

    impl Add for I {
        type Output = I;
        fn add(self, o: I) -> I {
            I(self.0 + o.0)
        }
    }
    impl Sub for I {
        type Output = I;
        fn sub(self, o: I) -> I {
            I(self.0 - o.0)
        }
    }
    impl Mul for I {
        type Output = I;
        fn mul(self, o: I) -> I {
            I(self.0 * o.0)
        }
    }
    impl Neg for I {
        type Output = I;
        fn neg(self) -> I {
            I(-self.0)
        }
    }
    impl Zero for I {
        fn zero() -> I {
            I(0)
        }
        fn is_zero(&self) -> bool {
            self.0 == 0
        }
    }
    impl One for I {
        fn one() -> I {
            I(1)
        }
    }
    impl Scalar for I {
        const EXACT: bool = true;
        fn from_i64(v: i64) -> Self {
            I(v)
        }
        fn to_f64(&self) -> f64 {
            self.0 as f64
        }
        fn to_text(&self) -> String {
            self.0.to_string()
        }
        fn parse_text(s: &str) -> Result<Self> {
            s.trim().parse().map(I).map_err(|_| SedError::Parse(s.to_string()))
        }
    }
}

/// Parses a sedenion-or-smaller element from CLI text.
///
/// Accepted forms: `level:c0,...`, a bare comma list of `2^n` values, or a
/// basis expression such as `e1+e10`, `2e0-1/2e3`. Returns the exact form and
/// whether any coefficient was written as a decimal.
pub fn parse_element_text(s: &str, level_hint: u32) -> Result<(CdElement<Rational>, bool)> {
    let s = s.trim();
    let is_basis_expr = !s.contains(',') && !s.contains(':') && s.contains('e') && {
        // "1e-3" alone is a decimal, not a basis expression.
        s.char_indices().any(|(i, c)| {
            c == 'e' && s[i + 1..].chars().next().is_some_and(|d| d.is_ascii_digit()) && {
                let before = &s[..i];
                before.is_empty() || before.ends_with(['+', '-', '/']) || before.ends_with(|c: char| c.is_ascii_digit())
            }
        })
    };
    if is_basis_expr && !s.contains(['.']) {
        return parse_basis_expr(s, level_hint).map(|e| (e, false));
    }
    let body = s.split_once(':').map(|(_, b)| b).unwrap_or(s);
    let decimal = body.split(',').any(looks_decimal);
    Ok((CdElement::parse_text(s)?, decimal))
}

fn parse_basis_expr(s: &str, level: u32) -> Result<CdElement<Rational>> {
    let err = || SedError::Parse(format!("bad basis expression {s:?}"));
    let mut out = CdElement::<Rational>::zero(level);
    let mut rest: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if !rest.starts_with(['+', '-']) {
        rest.insert(0, '+');
    }
    let mut terms = Vec::new();
    let mut current = String::new();
    for c in rest.chars() {
        if (c == '+' || c == '-') && !current.is_empty() {
            terms.push(std::mem::take(&mut current));
        }
        current.push(c);
    }
    terms.push(current);
    for term in terms {
        let (sign, body) = term.split_at(1);
        let pos = body.rfind('e').ok_or_else(err)?;
        let (coef, idx) = (&body[..pos], &body[pos + 1..]);
        let idx: usize = idx.parse().map_err(|_| err())?;
        if idx >= out.dim() {
            return Err(SedError::Parse(format!("basis index e{idx} out of range for level {level}")));
        }
        let mut c = if coef.is_empty() { Rational::from_i64(1) } else { crate::scalar::parse_rational(coef)? };
        if sign == "-" {
            c = -c;
        }
        out.coeffs[idx] = out.coeffs[idx].clone() + c;
    }
    Ok(out)
}
