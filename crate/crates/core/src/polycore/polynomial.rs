use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{ExponentVector, PolyError};
use crate::rational::{to_f64, Rational};

/// Sparse multivariate polynomial in `x1..xn` with exact rational
/// coefficients. No stored coefficient is zero; the zero polynomial is the
/// empty term map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    n: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl SparsePolynomial {
    pub fn zero(n: usize) -> Self {
        SparsePolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(ExponentVector::zero(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn monomial(exponent: ExponentVector, c: Rational) -> Self {
        let n = exponent.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        SparsePolynomial { n, terms }
    }

    /// The variable `x_{index+1}`.
    pub fn variable(n: usize, index: usize) -> Self {
        Self::monomial(ExponentVector::unit(n, index, 1), Rational::one())
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms,
    /// merging duplicates and dropping whatever cancels.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (ExponentVector, Rational)>,
    ) -> Result<Self, PolyError> {
        let mut p = SparsePolynomial::zero(n);
        for (e, c) in terms {
            if e.dim() != n {
                return Err(PolyError::DimensionMismatch {
                    expected: n,
                    found: e.dim(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, e: ExponentVector, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<ExponentVector, Rational> {
        &self.terms
    }

    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> u64 {
        self.terms
            .keys()
            .map(ExponentVector::degree)
            .max()
            .unwrap_or(0)
    }

    fn check_dim(&self, other: &SparsePolynomial) -> Result<(), PolyError> {
        if self.n != other.n {
            return Err(PolyError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &SparsePolynomial) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &SparsePolynomial) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &SparsePolynomial) -> Result<Self, PolyError> {
        self.check_dim(other)?;
        let mut out = SparsePolynomial::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return SparsePolynomial::zero(self.n);
        }
        SparsePolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// `self^k` by repeated squaring; `pow(0)` is 1.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = SparsePolynomial::one(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn check_point_len(&self, len: usize) -> Result<(), PolyError> {
        if len != self.n {
            return Err(PolyError::DimensionMismatch {
                expected: self.n,
                found: len,
            });
        }
        Ok(())
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        self.check_point_len(point.len())?;
        let powers: Vec<BTreeMap<u32, Rational>> = point
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let mut needed: Vec<u32> =
                    self.terms.keys().map(|e| e[i]).filter(|&a| a > 0).collect();
                needed.sort_unstable();
                needed.dedup();
                let mut row = BTreeMap::new();
                let mut prev = (0u32, Rational::one());
                for a in needed {
                    let v = &prev.1 * reduced_pow(x, a - prev.0);
                    row.insert(a, v.clone());
                    prev = (a, v);
                }
                row
            })
            .collect();
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &a) in e.entries().iter().enumerate() {
                if a > 0 {
                    term *= &powers[i][&a];
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Floating-point evaluation, for diagnostics and search only.
    pub fn evaluate_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        self.check_point_len(point.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.entries()
                    .iter()
                    .zip(point)
                    .fold(to_f64(c), |acc, (&a, &x)| acc * x.powi(a as i32))
            })
            .sum())
    }

    /// `h(x) = f(a_1 x_1, ..., a_n x_n)`: the coefficient at `alpha` is
    /// multiplied by `a^alpha`.
    pub fn rescale(&self, a: &[Rational]) -> Result<Self, PolyError> {
        self.check_point_len(a.len())?;
        if let Some(i) = a.iter().position(Zero::is_zero) {
            return Err(PolyError::ZeroScale { index: i });
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let factor = e
                    .entries()
                    .iter()
                    .zip(a)
                    .fold(Rational::one(), |acc, (&k, ai)| {
                        acc * num_traits::pow(ai.clone(), k as usize)
                    });
                (e.clone(), c * factor)
            })
            .collect();
        Ok(SparsePolynomial { n: self.n, terms })
    }
}

impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;

    /// Panics on dimension mismatch; use [`SparsePolynomial::try_add`] otherwise.
    fn add(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn sub(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        self.try_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn mul(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;

    fn neg(self) -> SparsePolynomial {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for SparsePolynomial {
    /// Terms in descending graded-lex order, e.g. `x1^4*x2^2 - 3*x1^2*x2^2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let mono = monomial_text(e);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn monomial_text(e: &ExponentVector) -> String {
    let mut factors = Vec::new();
    for (i, &a) in e.entries().iter().enumerate() {
        match a {
            0 => {}
            1 => factors.push(format!("x{}", i + 1)),
            _ => factors.push(format!("x{}^{a}", i + 1)),
        }
    }
    factors.join("*")
}

/// `x^k` without gcd normalization: powers of a reduced fraction stay reduced.
fn reduced_pow(x: &Rational, k: u32) -> Rational {
    Rational::new_raw(
        num_traits::pow(x.numer().clone(), k as usize),
        num_traits::pow(x.denom().clone(), k as usize),
    )
}
