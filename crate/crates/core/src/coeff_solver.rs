//! Exact recovery of the degree-8 polynomial
//! `G(a,b,c) = α a⁴ + β a²b² + γ a²c² + δ b⁴ + ε b²c² + ζ c⁴`
//! from determinants evaluated at six octonion pairs.
//!
//! `det M(v)` is a function of `(a, b, c)` alone only when `v1` and `v2` are
//! pure imaginary, so the default pair set is drawn from that subspace.
//!
//! The six monomials have degree 8 in `v` while `det M(v)` has degree 16, so
//! fitting the determinant itself ([`FitTarget::Delta`]) returns a solution
//! that depends on the pairs and fails on held-out samples. The degree-matched
//! targets `√Δ = a²(b² + 4c²)` and `Δ / a⁴ = (b² + 4c²)²` are exact rationals
//! on every realizable pair and are recovered exactly.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::cd_algebra::{join, parse_element_text, CdElement, Octonion, OctonionPair, OCTONION_LEVEL};
use crate::error::{Result, SedError};
use crate::invariants::{triple_of_pair, InvariantTriple};
use crate::mult_operator::{det_exact, left_mult_matrix, rref_exact, OperatorMatrix};
use crate::rng::SeededRng;
use crate::sampling::{pure_imaginary_sedenion, rational_sedenion};
use crate::scalar::{Rational, Scalar};

/// Seed of the deterministic default pair generator.
pub const DEFAULT_PAIR_SEED: u64 = 1;
/// Integer coefficient bound of the default pair generator.
pub const DEFAULT_PAIR_RANGE: i64 = 2;
/// Monomial names in column order.
pub const MONOMIALS: [&str; 6] = ["a^4", "a^2 b^2", "a^2 c^2", "b^4", "b^2 c^2", "c^4"];
/// The coefficient vector `(α, β, γ, δ, ε, ζ) = (1, 0, 4, 0, 0, 0)` quoted for `G`.
pub const EXPECTED: [i64; 6] = [1, 0, 4, 0, 0, 0];
/// Coefficients of `√Δ = a²b² + 4a²c²` on pure-imaginary pairs.
pub const EXPECTED_SQRT_DELTA: [i64; 6] = [0, 1, 4, 0, 0, 0];
/// Coefficients of `Δ / a⁴ = b⁴ + 8b²c² + 16c⁴` on pure-imaginary pairs.
pub const EXPECTED_DELTA_OVER_A4: [i64; 6] = [0, 0, 0, 1, 8, 16];

/// Right-hand side of the linear system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitTarget {
    /// `det M(v)`.
    #[default]
    Delta,
    /// Exact square root of `det M(v)`.
    SqrtDelta,
    /// `det M(v) / a⁴`.
    DeltaOverA4,
}

impl FitTarget {
    pub fn value(self, p: &TestPair) -> Result<Rational> {
        match self {
            FitTarget::Delta => Ok(p.delta.clone()),
            FitTarget::SqrtDelta => exact_sqrt(&p.delta)
                .ok_or_else(|| SedError::InvalidParameter(format!("determinant {} is not a rational square", p.delta))),
            FitTarget::DeltaOverA4 => {
                if p.triple.a.is_zero() {
                    return Err(SedError::ZeroElement);
                }
                let a2 = &p.triple.a * &p.triple.a;
                Ok(&p.delta / (&a2 * &a2))
            }
        }
    }

    pub fn expected(self) -> [Rational; 6] {
        match self {
            FitTarget::Delta => EXPECTED,
            FitTarget::SqrtDelta => EXPECTED_SQRT_DELTA,
            FitTarget::DeltaOverA4 => EXPECTED_DELTA_OVER_A4,
        }
        .map(Rational::from_i64)
    }
}

impl std::fmt::Display for FitTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FitTarget::Delta => "delta",
            FitTarget::SqrtDelta => "sqrt-delta",
            FitTarget::DeltaOverA4 => "delta-over-a4",
        })
    }
}

impl std::str::FromStr for FitTarget {
    type Err = SedError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(FitTarget::Delta),
            "sqrt-delta" => Ok(FitTarget::SqrtDelta),
            "delta-over-a4" => Ok(FitTarget::DeltaOverA4),
            _ => Err(SedError::Parse(format!("unknown fit target {s:?} (delta, sqrt-delta, delta-over-a4)"))),
        }
    }
}

/// Nonnegative rational square root when numerator and denominator are squares.
pub fn exact_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer().sqrt(), x.denom().sqrt());
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

#[derive(Debug, Clone)]
pub struct TestPair {
    pub pair: OctonionPair<Rational>,
    pub triple: InvariantTriple<Rational>,
    pub delta: Rational,
}

impl TestPair {
    pub fn new(v1: Octonion<Rational>, v2: Octonion<Rational>) -> Result<Self> {
        let pair = OctonionPair::new(v1, v2)?;
        let triple = triple_of_pair(&pair);
        let delta = det_exact(&left_mult_matrix(&join(&pair)));
        Ok(Self { pair, triple, delta })
    }

    pub fn from_i64s(v1: &[i64], v2: &[i64]) -> Result<Self> {
        Self::new(CdElement::from_i64s(OCTONION_LEVEL, v1)?, CdElement::from_i64s(OCTONION_LEVEL, v2)?)
    }
}

/// `(a⁴, a²b², a²c², b⁴, b²c², c⁴)` at a triple.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialRow(pub [Rational; 6]);

impl MonomialRow {
    pub fn new(t: &InvariantTriple<Rational>) -> Self {
        let (a2, b2, c2) = (&t.a * &t.a, &t.b * &t.b, &t.c * &t.c);
        Self([&a2 * &a2, &a2 * &b2, &a2 * &c2, &b2 * &b2, &b2 * &c2, &c2 * &c2])
    }

    pub fn eval(&self, coeffs: &[Rational; 6]) -> Rational {
        self.0.iter().zip(coeffs).map(|(m, k)| m * k).sum()
    }
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub rows: Vec<MonomialRow>,
    pub rhs: Vec<Rational>,
}

impl LinearSystem {
    pub fn matrix(&self) -> OperatorMatrix<Rational> {
        OperatorMatrix::from_rows(self.rows.iter().map(|r| r.0.to_vec()).collect()).expect("6x6")
    }

    pub fn determinant(&self) -> Rational {
        det_exact(&self.matrix())
    }
}

/// Rows from the pairs' triples, right-hand side `det M(v)`.
pub fn build_system(pairs: &[TestPair]) -> Result<LinearSystem> {
    build_system_for(pairs, FitTarget::Delta)
}

pub fn build_system_for(pairs: &[TestPair], target: FitTarget) -> Result<LinearSystem> {
    if pairs.len() != 6 {
        return Err(SedError::InvalidParameter(format!("expected 6 test pairs, got {}", pairs.len())));
    }
    Ok(LinearSystem {
        rows: pairs.iter().map(|p| MonomialRow::new(&p.triple)).collect(),
        rhs: pairs.iter().map(|p| target.value(p)).collect::<Result<_>>()?,
    })
}

/// Rank of the rows and, for every row that depends on earlier ones, the
/// zero-based indices of a minimal dependent set containing it.
pub fn dependency_certificate(rows: &[Vec<Rational>]) -> (usize, Vec<Vec<usize>>) {
    let mut basis: Vec<usize> = Vec::new();
    let mut circuits = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        // Columns: the current basis rows, then the candidate row.
        let n = row.len();
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|k| basis.iter().map(|&b| rows[b][k].clone()).chain(std::iter::once(row[k].clone())).collect())
            .collect();
        let pivots = rref_exact(&mut aug);
        let last = basis.len();
        if pivots.contains(&last) {
            basis.push(i);
            continue;
        }
        // Unique representation over independent rows: its support plus `i` is a circuit.
        let mut circuit: Vec<usize> = pivots
            .iter()
            .enumerate()
            .filter(|(r, _)| !aug[*r][last].is_zero())
            .map(|(_, &col)| basis[col])
            .collect();
        circuit.push(i);
        circuit.sort_unstable();
        circuits.push(circuit);
    }
    (basis.len(), circuits)
}

/// Solves `A (α..ζ) = Δ` exactly. A singular `A` yields
/// [`SedError::SingularSystem`] with the rank and dependent-row circuits
/// (one-based row numbers).
pub fn solve_coefficients(pairs: &[TestPair]) -> Result<[Rational; 6]> {
    solve_coefficients_for(pairs, FitTarget::Delta)
}

pub fn solve_coefficients_for(pairs: &[TestPair], target: FitTarget) -> Result<[Rational; 6]> {
    let sys = build_system_for(pairs, target)?;
    if sys.determinant().is_zero() {
        let rows: Vec<Vec<Rational>> = sys.rows.iter().map(|r| r.0.to_vec()).collect();
        let (rank, circuits) = dependency_certificate(&rows);
        return Err(SedError::SingularSystem {
            rank,
            size: 6,
            dependent: circuits.into_iter().map(|c| c.into_iter().map(|i| i + 1).collect()).collect(),
        });
    }
    let mut aug: Vec<Vec<Rational>> = sys
        .rows
        .iter()
        .zip(&sys.rhs)
        .map(|(r, d)| r.0.iter().cloned().chain(std::iter::once(d.clone())).collect())
        .collect();
    rref_exact(&mut aug);
    Ok(std::array::from_fn(|i| aug[i][6].clone()))
}

/// The six pairs printed alongside the original coefficient derivation.
pub fn reference_pairs() -> Vec<TestPair> {
    let e = |i: usize, k: i64| {
        let mut v = [0i64; 8];
        v[i] = k;
        v
    };
    let add = |x: [i64; 8], y: [i64; 8]| -> [i64; 8] { std::array::from_fn(|i| x[i] + y[i]) };
    let zero = [0i64; 8];
    [
        (e(0, 1), zero),
        (e(0, 2), zero),
        (e(0, 1), e(1, 1)),
        (e(0, 1), e(1, 2)),
        (add(e(0, 1), e(1, 1)), add(e(0, 1), e(1, -1))),
        (add(e(0, 1), e(1, 1)), e(0, 2)),
    ]
    .iter()
    .map(|(a, b)| TestPair::from_i64s(a, b).expect("level-3 literals"))
    .collect()
}

fn random_pair(rng: &mut SeededRng, range: i64, pure_imaginary: bool) -> TestPair {
    let mut draw = || -> Octonion<Rational> {
        let mut c: Vec<i64> = (0..8).map(|_| rng.int_in(-range, range)).collect();
        if pure_imaginary {
            c[0] = 0;
        }
        CdElement::from_i64s(OCTONION_LEVEL, &c).expect("8 coefficients")
    };
    let v1 = draw();
    let v2 = draw();
    TestPair::new(v1, v2).expect("level-3 octonions")
}

/// Six pairs with integer coefficients in `[-range, range]`, redrawn until
/// `det A ≠ 0` and at least three pairs have `c ≠ 0`.
pub fn generate_pairs(seed: u64, range: i64, pure_imaginary: bool) -> Vec<TestPair> {
    let mut rng = SeededRng::new(seed);
    loop {
        let pairs: Vec<TestPair> = (0..6).map(|_| random_pair(&mut rng, range, pure_imaginary)).collect();
        let with_c = pairs.iter().filter(|p| !p.triple.c.is_zero()).count();
        if with_c >= 3 && !build_system(&pairs).expect("six pairs").determinant().is_zero() {
            return pairs;
        }
    }
}

/// Default pair set: pure-imaginary, seed [`DEFAULT_PAIR_SEED`].
pub fn default_pairs() -> Vec<TestPair> {
    generate_pairs(DEFAULT_PAIR_SEED, DEFAULT_PAIR_RANGE, true)
}

/// Six lines `v1 ; v2` (blank lines and `#` comments skipped); each element
/// in any form accepted by [`parse_element_text`] at level 3.
pub fn parse_pairs(text: &str) -> Result<Vec<TestPair>> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (l, r) = line
            .split_once(';')
            .ok_or_else(|| SedError::Parse(format!("line {}: expected `v1 ; v2`", n + 1)))?;
        let parse = |s: &str| -> Result<Octonion<Rational>> {
            let (el, _) = parse_element_text(s.trim(), OCTONION_LEVEL)?;
            // Lower Cayley–Dickson levels embed by zero padding.
            let el = if el.level() < OCTONION_LEVEL {
                let mut c = el.into_coeffs();
                c.resize(8, Rational::from_i64(0));
                CdElement::new(OCTONION_LEVEL, c)?
            } else {
                el
            };
            if el.level() != OCTONION_LEVEL {
                return Err(SedError::Parse(format!("line {}: expected an octonion, got level {}", n + 1, el.level())));
            }
            Ok(el)
        };
        pairs.push(TestPair::new(parse(l)?, parse(r)?)?);
    }
    if pairs.len() != 6 {
        return Err(SedError::Parse(format!("expected 6 pairs, found {}", pairs.len())));
    }
    Ok(pairs)
}

pub fn format_pairs(pairs: &[TestPair]) -> String {
    pairs.iter().map(|p| format!("{} ; {}\n", p.pair.v1.to_text(), p.pair.v2.to_text())).collect()
}

/// Which sedenions [`verify_closed_form`] samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleDomain {
    General,
    PureImaginary,
}

#[derive(Debug, Clone)]
pub struct ClosedFormReport {
    pub samples: usize,
    pub counterexamples: Vec<CdElement<Rational>>,
}

impl fmt::Display for ClosedFormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} samples, {} counterexamples", self.samples, self.counterexamples.len())
    }
}

/// Compares `det M(v)` with `a⁴(b² + 4c²)²` exactly on random rational
/// sedenions (coefficients `p/q`, `q ≤ 3`, in `[-3, 3]`).
pub fn verify_closed_form(samples: usize, seed: u64, domain: SampleDomain) -> ClosedFormReport {
    let mut rng = SeededRng::new(seed);
    let counterexamples = (0..samples)
        .map(|_| match domain {
            SampleDomain::General => rational_sedenion(&mut rng, 3, 3),
            SampleDomain::PureImaginary => pure_imaginary_sedenion(&mut rng, 3, 3),
        })
        .filter(|v| {
            let t = crate::invariants::invariant_triple(v).expect("sedenion");
            det_exact(&left_mult_matrix(v)) != t.closed_form()
        })
        .collect();
    ClosedFormReport { samples, counterexamples }
}

pub fn expected_coefficients() -> [Rational; 6] {
    EXPECTED.map(Rational::from_i64)
}

/// Number of fresh pure-imaginary integer pairs (coefficients in `[-3, 3]`)
/// on which `Σ coeffs · monomials` differs from the target.
pub fn holdout_failures(coeffs: &[Rational; 6], target: FitTarget, samples: usize, seed: u64) -> Result<usize> {
    let mut rng = SeededRng::new(seed);
    let mut failures = 0;
    for _ in 0..samples {
        let p = random_pair(&mut rng, 3, true);
        if p.triple.a.is_zero() {
            continue;
        }
        if MonomialRow::new(&p.triple).eval(coeffs) != target.value(&p)? {
            failures += 1;
        }
    }
    Ok(failures)
}

/// `G` written out from a coefficient vector, e.g. `a^4 + 4 a^2 c^2`.
pub fn format_polynomial(coeffs: &[Rational; 6]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .zip(MONOMIALS)
        .filter(|(k, _)| !k.is_zero())
        .map(|(k, m)| if k.is_one() { m.to_string() } else { format!("{} {m}", k.to_text()) })
        .collect();
    if terms.is_empty() { "0".into() } else { terms.join(" + ") }
}
