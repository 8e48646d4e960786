//! Circuit polynomials.
//!
//! A circuit polynomial has support `A ∪ {beta}` where `A` is an affinely
//! independent set of even exponent vectors carrying positive coefficients
//! and `beta` lies in the relative interior of `conv(A)`. With barycentric
//! weights `lambda` of `beta`, the circuit number is
//! `Theta = prod (c_alpha / lambda_alpha)^lambda_alpha`, and the polynomial is
//! nonnegative iff `|c_beta| <= Theta`, or `beta` is even and
//! `c_beta >= -Theta`.
//!
//! `Theta` is irrational in general. With `q` the common denominator of the
//! weights, `Theta^q` is rational, so every comparison here is done between
//! exact `q`-th powers.

mod barycentric;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use barycentric::{affinely_independent, barycentric_weights, BarycentricError};

use crate::polycore::{ExponentVector, SparsePolynomial};
use crate::rational::{common_denominator, ratio, serde_str, serde_vec, Rational};

/// Largest bounding box scanned for a lattice point in the relative interior
/// when the inner monomial is absent from the support.
const LATTICE_SCAN_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum NotACircuit {
    #[error("the zero polynomial is not a circuit polynomial")]
    ZeroPolynomial,
    #[error("outer exponent {exponent} is not even")]
    NonEvenOuterExponent { exponent: String },
    #[error("outer coefficient at {exponent} is not positive")]
    NegativeOuterCoefficient { exponent: String },
    #[error("outer support is affinely dependent")]
    AffineDependence,
    #[error("inner exponent {exponent} is not in the relative interior of the outer simplex")]
    OutsideRelativeInterior { exponent: String },
    #[error("more than one support point ({count}) can only be the inner exponent")]
    TooManyInnerPoints { count: usize },
    #[error("dimension mismatch in circuit data")]
    DimensionMismatch,
    #[error("circuit data is inconsistent: {detail}")]
    InvalidData { detail: String },
}

impl NotACircuit {
    pub fn code(&self) -> &'static str {
        match self {
            NotACircuit::ZeroPolynomial => "zero_polynomial",
            NotACircuit::NonEvenOuterExponent { .. } => "non_even_outer_exponent",
            NotACircuit::NegativeOuterCoefficient { .. } => "negative_outer_coefficient",
            NotACircuit::AffineDependence => "affine_dependence",
            NotACircuit::OutsideRelativeInterior { .. } => "outside_relative_interior",
            NotACircuit::TooManyInnerPoints { .. } => "too_many_inner_points",
            NotACircuit::DimensionMismatch => "dimension_mismatch",
            NotACircuit::InvalidData { .. } => "invalid_data",
        }
    }
}

/// A validated circuit polynomial.
///
/// `inner_coeff` is zero when `inner` is not in the support. The degenerate
/// monomial `c * x^beta` is stored with `outer = [beta]`, `weights = [1]` and
/// `inner_coeff = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuitData")]
pub struct CircuitData {
    n: usize,
    outer: Vec<ExponentVector>,
    #[serde(with = "serde_vec")]
    outer_coeffs: Vec<Rational>,
    inner: ExponentVector,
    #[serde(with = "serde_str")]
    inner_coeff: Rational,
    #[serde(with = "serde_vec")]
    weights: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawCircuitData {
    n: usize,
    outer: Vec<ExponentVector>,
    #[serde(with = "serde_vec")]
    outer_coeffs: Vec<Rational>,
    inner: ExponentVector,
    #[serde(with = "serde_str")]
    inner_coeff: Rational,
    #[serde(with = "serde_vec")]
    weights: Vec<Rational>,
}

impl TryFrom<RawCircuitData> for CircuitData {
    type Error = NotACircuit;

    fn try_from(raw: RawCircuitData) -> Result<Self, NotACircuit> {
        let m = raw.outer.len();
        if raw.outer_coeffs.len() != m || raw.weights.len() != m {
            return Err(NotACircuit::DimensionMismatch);
        }
        let mut rows: Vec<_> = raw
            .outer
            .into_iter()
            .zip(raw.outer_coeffs)
            .zip(raw.weights)
            .collect();
        rows.sort_by(|a, b| a.0 .0.cmp(&b.0 .0));
        let ((outer, outer_coeffs), weights): ((Vec<_>, Vec<_>), Vec<_>) = rows.into_iter().unzip();
        let c = CircuitData {
            n: raw.n,
            outer,
            outer_coeffs,
            inner: raw.inner,
            inner_coeff: raw.inner_coeff,
            weights,
        };
        c.validate()?;
        Ok(c)
    }
}

/// `Theta^q` together with `q`, the least common denominator of the weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitNumberPower {
    pub theta_q: Rational,
    pub q: u64,
}

impl CircuitNumberPower {
    /// Floating-point `Theta = theta_q^(1/q)`, for diagnostics only.
    pub fn theta_f64(&self) -> f64 {
        let ln = ln_rational(&self.theta_q);
        (ln / self.q as f64).exp()
    }
}

fn ln_rational(r: &Rational) -> f64 {
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn ln_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = v >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

impl CircuitData {
    /// Builds and validates circuit data, computing the barycentric weights.
    /// The outer points are stored in ascending graded lexicographic order.
    pub fn new(
        outer: Vec<ExponentVector>,
        outer_coeffs: Vec<Rational>,
        inner: ExponentVector,
        inner_coeff: Rational,
    ) -> Result<Self, NotACircuit> {
        let n = inner.dim();
        if outer.iter().any(|a| a.dim() != n) || outer.len() != outer_coeffs.len() {
            return Err(NotACircuit::DimensionMismatch);
        }
        let mut pairs: Vec<_> = outer.into_iter().zip(outer_coeffs).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (outer, outer_coeffs): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        if outer.len() == 1 && outer[0] == inner {
            let c = CircuitData {
                n,
                outer,
                outer_coeffs,
                inner,
                inner_coeff,
                weights: vec![Rational::one()],
            };
            c.validate()?;
            return Ok(c);
        }
        check_outer(&outer, &outer_coeffs)?;
        let weights = interior_weights(&outer, &inner)?;
        let c = CircuitData {
            n,
            outer,
            outer_coeffs,
            inner,
            inner_coeff,
            weights,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn outer(&self) -> &[ExponentVector] {
        &self.outer
    }

    pub fn outer_coeffs(&self) -> &[Rational] {
        &self.outer_coeffs
    }

    pub fn inner(&self) -> &ExponentVector {
        &self.inner
    }

    pub fn inner_coeff(&self) -> &Rational {
        &self.inner_coeff
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn is_degenerate(&self) -> bool {
        self.outer.len() == 1
    }

    /// Same outer and inner exponents, new coefficients.
    pub fn with_coeffs(
        &self,
        outer_coeffs: Vec<Rational>,
        inner_coeff: Rational,
    ) -> Result<Self, NotACircuit> {
        if outer_coeffs.len() != self.outer.len() {
            return Err(NotACircuit::DimensionMismatch);
        }
        if let Some(i) = outer_coeffs.iter().position(|c| !c.is_positive()) {
            return Err(NotACircuit::NegativeOuterCoefficient {
                exponent: self.outer[i].to_string(),
            });
        }
        let mut c = self.clone();
        c.outer_coeffs = outer_coeffs;
        c.inner_coeff = if self.is_degenerate() {
            Rational::zero()
        } else {
            inner_coeff
        };
        Ok(c)
    }

    /// Checks every structural invariant exactly.
    pub fn validate(&self) -> Result<(), NotACircuit> {
        let n = self.n;
        let m = self.outer.len();
        if n == 0
            || m == 0
            || self.inner.dim() != n
            || self.outer.iter().any(|a| a.dim() != n)
            || self.outer_coeffs.len() != m
            || self.weights.len() != m
        {
            return Err(NotACircuit::DimensionMismatch);
        }
        check_outer(&self.outer, &self.outer_coeffs)?;
        if !affinely_independent(&self.outer) {
            return Err(NotACircuit::AffineDependence);
        }
        let invalid = |detail: &str| NotACircuit::InvalidData {
            detail: detail.to_string(),
        };
        if self.weights.iter().any(|w| !w.is_positive()) {
            return Err(invalid("weights must be strictly positive"));
        }
        if self.weights.iter().sum::<Rational>() != Rational::one() {
            return Err(invalid("weights must sum to 1"));
        }
        for i in 0..n {
            let coord: Rational = self
                .outer
                .iter()
                .zip(&self.weights)
                .map(|(a, w)| w * Rational::from_integer(BigInt::from(a[i])))
                .sum();
            if coord != Rational::from_integer(BigInt::from(self.inner[i])) {
                return Err(invalid(
                    "weighted outer points must equal the inner exponent",
                ));
            }
        }
        if m == 1 && !self.inner_coeff.is_zero() {
            return Err(invalid("degenerate circuit carries no inner coefficient"));
        }
        if m >= 2 && self.outer.contains(&self.inner) {
            return Err(NotACircuit::OutsideRelativeInterior {
                exponent: self.inner.to_string(),
            });
        }
        Ok(())
    }

    pub fn to_polynomial(&self) -> SparsePolynomial {
        let mut terms: Vec<(ExponentVector, Rational)> = self
            .outer
            .iter()
            .cloned()
            .zip(self.outer_coeffs.iter().cloned())
            .collect();
        terms.push((self.inner.clone(), self.inner_coeff.clone()));
        SparsePolynomial::from_terms(self.n, terms).expect("circuit dimensions are consistent")
    }

    /// `(Theta^q, q)` with `q` the least common denominator of the weights.
    pub fn circuit_number_power(&self) -> CircuitNumberPower {
        let q_big = common_denominator(&self.weights);
        let q = q_big.to_u64().expect("weight denominator fits in u64");
        let q_rat = Rational::from_integer(q_big);
        let mut theta_q = Rational::one();
        for (c, w) in self.outer_coeffs.iter().zip(&self.weights) {
            let exp = (w * &q_rat).to_integer();
            let exp = exp.to_usize().expect("weight exponent fits in usize");
            theta_q *= num_traits::pow(c / w, exp);
        }
        CircuitNumberPower { theta_q, q }
    }

    pub fn is_nonnegative(&self) -> bool {
        if self.is_degenerate() {
            return true;
        }
        let cb = &self.inner_coeff;
        if self.inner.is_even() && !cb.is_negative() {
            return true;
        }
        let CircuitNumberPower { theta_q, q } = self.circuit_number_power();
        let lhs = num_traits::pow(cb.abs(), q as usize);
        lhs <= theta_q
    }

    /// Shrinks `c_beta` toward zero until the criterion holds, trying
    /// `c_beta * (1 - 2^(k-32))` for `k = 0..=32`; the last factor is zero.
    pub fn project_inner_coeff(&self) -> CircuitData {
        if self.is_nonnegative() {
            return self.clone();
        }
        let original = self.inner_coeff.clone();
        let mut c = self.clone();
        for k in 0..=32u32 {
            let factor =
                Rational::one() - Rational::new(BigInt::one(), BigInt::one() << (32 - k) as usize);
            c.inner_coeff = &original * factor;
            if c.is_nonnegative() {
                return c;
            }
        }
        unreachable!("a zero inner coefficient is always nonnegative")
    }

    /// Searches sign patterns and a geometric grid of ratio 5/4 for a point
    /// where the circuit polynomial is negative. At most `budget` exact
    /// evaluations are performed.
    pub fn find_negative_point(&self, budget: usize) -> Option<Vec<Rational>> {
        if self.is_degenerate() || (self.inner.is_even() && !self.inner_coeff.is_negative()) {
            return None;
        }
        let poly = self.to_polynomial();
        let n = self.n;
        // sign flips matter only on odd coordinates of beta
        let odd: Vec<usize> = (0..n).filter(|&i| self.inner[i] % 2 == 1).collect();
        let ratio_base = ratio(5, 4);
        let mut evaluations = 0usize;
        let max_shell = 64i64;
        for shell in 0..=max_shell {
            for ks in shell_vectors(n, shell) {
                let magnitudes: Vec<Rational> = ks
                    .iter()
                    .map(|&k| {
                        if k >= 0 {
                            num_traits::pow(ratio_base.clone(), k as usize)
                        } else {
                            num_traits::pow(ratio_base.recip(), (-k) as usize)
                        }
                    })
                    .collect();
                for mask in 0u64..(1u64 << odd.len()) {
                    if evaluations >= budget {
                        return None;
                    }
                    evaluations += 1;
                    let mut point = magnitudes.clone();
                    for (bit, &i) in odd.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            point[i] = -point[i].clone();
                        }
                    }
                    let v = poly.evaluate(&point).expect("point has dimension n");
                    if v.is_negative() {
                        return Some(point);
                    }
                }
            }
        }
        None
    }
}

/// Integer vectors of length `n` with max-norm exactly `shell`.
fn shell_vectors(n: usize, shell: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = vec![-shell; n];
    loop {
        if current.iter().map(|k| k.abs()).max().unwrap_or(0) == shell {
            out.push(current.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if current[i] < shell {
                current[i] += 1;
                break;
            }
            current[i] = -shell;
            i += 1;
        }
    }
}

fn check_outer(outer: &[ExponentVector], coeffs: &[Rational]) -> Result<(), NotACircuit> {
    for (a, c) in outer.iter().zip(coeffs) {
        if !a.is_even() {
            return Err(NotACircuit::NonEvenOuterExponent {
                exponent: a.to_string(),
            });
        }
        if !c.is_positive() {
            return Err(NotACircuit::NegativeOuterCoefficient {
                exponent: a.to_string(),
            });
        }
    }
    Ok(())
}

fn interior_weights(
    outer: &[ExponentVector],
    inner: &ExponentVector,
) -> Result<Vec<Rational>, NotACircuit> {
    if outer.contains(inner) {
        return Err(NotACircuit::OutsideRelativeInterior {
            exponent: inner.to_string(),
        });
    }
    match barycentric_weights(outer, inner) {
        Ok(w) if w.iter().all(Signed::is_positive) => Ok(w),
        Ok(_) | Err(BarycentricError::Inconsistent) => Err(NotACircuit::OutsideRelativeInterior {
            exponent: inner.to_string(),
        }),
        Err(BarycentricError::Dependent) => Err(NotACircuit::AffineDependence),
    }
}

fn split(
    f: &SparsePolynomial,
    inner: &ExponentVector,
) -> (Vec<ExponentVector>, Vec<Rational>, Rational) {
    let mut outer = Vec::new();
    let mut coeffs = Vec::new();
    for (e, c) in f.terms() {
        if e != inner {
            outer.push(e.clone());
            coeffs.push(c.clone());
        }
    }
    (outer, coeffs, f.coeff(inner))
}

/// Recognizes `f` as a circuit polynomial.
///
/// The inner exponent is the unique support point with a negative
/// coefficient or an odd exponent when there is one. Otherwise every support
/// point is tried in ascending graded-lex order; if none works and the whole
/// support is an affinely independent even set, the first lattice point of
/// its relative interior (graded-lex) is used with coefficient zero.
pub fn detect_circuit(f: &SparsePolynomial) -> Result<CircuitData, NotACircuit> {
    if f.is_zero() {
        return Err(NotACircuit::ZeroPolynomial);
    }
    if f.len() == 1 {
        let (e, c) = f.terms().next().expect("one term");
        check_outer(std::slice::from_ref(e), std::slice::from_ref(c))?;
        return CircuitData::new(
            vec![e.clone()],
            vec![c.clone()],
            e.clone(),
            Rational::zero(),
        );
    }
    let forced: Vec<&ExponentVector> = f
        .terms()
        .filter(|(e, c)| c.is_negative() || !e.is_even())
        .map(|(e, _)| e)
        .collect();
    match forced.len() {
        0 => {}
        1 => {
            let inner = forced[0].clone();
            let (outer, coeffs, cb) = split(f, &inner);
            if !affinely_independent(&outer) {
                return Err(NotACircuit::AffineDependence);
            }
            return CircuitData::new(outer, coeffs, inner, cb);
        }
        count => return Err(NotACircuit::TooManyInnerPoints { count }),
    }

    let mut first_err = None;
    for (inner, _) in f.terms() {
        let (outer, coeffs, cb) = split(f, inner);
        if !affinely_independent(&outer) {
            first_err.get_or_insert(NotACircuit::AffineDependence);
            continue;
        }
        match CircuitData::new(outer, coeffs, inner.clone(), cb) {
            Ok(c) => return Ok(c),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }

    let support = f.support();
    if affinely_independent(&support) {
        let coeffs: Vec<Rational> = f.terms().map(|(_, c)| c.clone()).collect();
        if let Some(inner) = interior_lattice_point(&support) {
            return CircuitData::new(support, coeffs, inner, Rational::zero());
        }
        return Err(NotACircuit::OutsideRelativeInterior {
            exponent: "(none)".to_string(),
        });
    }
    Err(first_err.unwrap_or(NotACircuit::AffineDependence))
}

/// First lattice point (graded-lex) strictly inside the simplex spanned by
/// `outer`, relative to its affine hull.
fn interior_lattice_point(outer: &[ExponentVector]) -> Option<ExponentVector> {
    let n = outer[0].dim();
    let lo: Vec<u32> = (0..n)
        .map(|i| outer.iter().map(|a| a[i]).min().unwrap())
        .collect();
    let hi: Vec<u32> = (0..n)
        .map(|i| outer.iter().map(|a| a[i]).max().unwrap())
        .collect();
    let volume: u64 = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| u64::from(h - l) + 1)
        .try_fold(1u64, |acc, s| acc.checked_mul(s))?;
    if volume > LATTICE_SCAN_LIMIT {
        return None;
    }
    let mut candidates = Vec::new();
    let mut current = lo.clone();
    'scan: loop {
        let e = ExponentVector::new(current.clone());
        if !outer.contains(&e) {
            if let Ok(w) = barycentric_weights(outer, &e) {
                if w.iter().all(Signed::is_positive) {
                    candidates.push(e);
                }
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                break 'scan;
            }
            if current[i] < hi[i] {
                current[i] += 1;
                break;
            }
            current[i] = lo[i];
            i += 1;
        }
    }
    candidates.into_iter().min()
}

impl fmt::Display for CircuitData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "outer = {{")?;
        for (i, (a, w)) in self.outer.iter().zip(&self.weights).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}:{w}")?;
        }
        write!(f, "}}, inner = {} (coeff {})", self.inner, self.inner_coeff)
    }
}
