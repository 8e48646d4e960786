//! A certified gap between a nonnegative polynomial and the SONC cone.
//!
//! For a rational `u > 1` the functional
//!
//! ```text
//! L[f] = f(1, 1..1) - f(u, 1..1) + f(u^2, 1..1) + f(u^3, 1..1)
//! ```
//!
//! is nonnegative on every nonnegative circuit polynomial, hence on the SONC
//! cone. The square `f = (x1 - 1)^2 (x1 - u^2)^2 (x1 - u^3)^(2(d-2))` vanishes
//! at three of the four points, so `L[f] = -f(u) < 0`. Whenever the four
//! points lie in `K`, every SONC `g` satisfies
//! `||g - f||_K >= max_j |g - f|(p_j) >= (L[g] - L[f]) / 4 >= f(u) / 4`.
//!
//! Everything on the certified path is exact. The weighted AM-GM estimate and
//! the log-convexity of `phi(t) = 1 - e^t + e^2t + e^3t` behind the
//! nonnegativity of `L` on circuits are irrational statements and are only
//! audited here in floating point, plus the exact polynomial identity that
//! makes the convexity argument work.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::circuit::CircuitData;
use crate::polycore::{BoxRegion, ExponentVector, PolyError, SparsePolynomial};
use crate::rational::{format_rational, int, to_f64, Rational};

/// Largest `k` scanned by [`choose_u`] for `u = 1 + 1/k`.
pub const MAX_U_DENOMINATOR: u64 = 1 << 20;

/// Signs of the four evaluations in `L`.
pub const SIGNS: [i64; 4] = [1, -1, 1, 1];

#[derive(Debug, Error)]
pub enum SeparationError {
    #[error("u must be greater than 1, got {0}")]
    UNotAboveOne(String),
    #[error("degree parameter d must be at least 3, got {0}")]
    DegreeTooSmall(u32),
    #[error("the all-ones point is not in the interior of K (rescale K first)")]
    OnesNotInterior,
    #[error("no u = 1 + 1/k with k <= {MAX_U_DENOMINATOR} keeps (u^3, 1, ..., 1) inside K")]
    NoAdmissibleU,
    #[error("evaluation point (u^{0}, 1, ..., 1) is not in K")]
    PointOutsideRegion(usize),
    #[error("dimension n must be at least 1")]
    ZeroDimension,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("claim violated: {0}")]
    ClaimViolated(String),
    #[error("witness cancellation failed: L[f] = {l}, f(u) = {fu}")]
    CancellationFailed { l: String, fu: String },
}

/// `L` for a fixed `u > 1` in `n` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingFunctional {
    n: usize,
    u: Rational,
    points: [Vec<Rational>; 4],
}

impl SeparatingFunctional {
    pub fn new(n: usize, u: Rational) -> Result<Self, SeparationError> {
        if n == 0 {
            return Err(SeparationError::ZeroDimension);
        }
        if u <= Rational::one() {
            return Err(SeparationError::UNotAboveOne(format_rational(&u)));
        }
        let points = std::array::from_fn(|j| {
            let mut p = vec![Rational::one(); n];
            p[0] = num_traits::pow(u.clone(), j);
            p
        });
        Ok(SeparatingFunctional { n, u, points })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    /// `(u^j, 1, ..., 1)` for `j = 0..4`.
    pub fn points(&self) -> &[Vec<Rational>; 4] {
        &self.points
    }

    pub fn points_in(&self, region: &BoxRegion) -> [bool; 4] {
        std::array::from_fn(|j| region.contains(&self.points[j]))
    }

    pub fn apply(&self, f: &SparsePolynomial) -> Result<Rational, PolyError> {
        let mut total = Rational::zero();
        for (p, s) in self.points.iter().zip(SIGNS) {
            let v = f.evaluate(p)?;
            if s > 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        Ok(total)
    }

    /// `L[x1^b] = 1 - u^b + u^2b + u^3b`, which is positive because
    /// `u^2b >= u^b` for `u >= 1`.
    pub fn monomial_value(&self, b: u32) -> Rational {
        let ub = num_traits::pow(self.u.clone(), b as usize);
        let u2b = &ub * &ub;
        let u3b = &u2b * &ub;
        let v = Rational::one() - ub + u2b + u3b;
        assert!(v.is_positive(), "L on a monomial must be positive");
        v
    }

    /// `max_j |g - f|(p_j)`, exact.
    pub fn four_point_gap(
        &self,
        f: &SparsePolynomial,
        g: &SparsePolynomial,
    ) -> Result<Rational, PolyError> {
        let diff = g.try_sub(f)?;
        if diff.n() != self.n {
            return Err(PolyError::DimensionMismatch {
                expected: self.n,
                found: diff.n(),
            });
        }
        let mut best = Rational::zero();
        for p in &self.points {
            let v = diff.evaluate(p)?.abs();
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }
}

/// Largest `u = 1 + 1/k` (`k <= 2^20`) with all four points in `K`.
pub fn choose_u(region: &BoxRegion) -> Result<Rational, SeparationError> {
    let n = region.n();
    if !region.contains_interior(&vec![Rational::one(); n]) {
        return Err(SeparationError::OnesNotInterior);
    }
    let hi = &region.intervals()[0].1;
    let cube_ok = |k: u64| {
        let u = Rational::one() + Rational::new(BigInt::one(), BigInt::from(k));
        let u3 = &u * &u * &u;
        (&u3 <= hi).then_some(u)
    };
    // start a little below the float estimate and scan upward exactly
    let hi_f = to_f64(hi);
    let est = if hi_f.is_finite() && hi_f > 1.0 {
        1.0 / (hi_f.cbrt() - 1.0)
    } else {
        1.0
    };
    let start = if est.is_finite() {
        (est.floor() as u64).saturating_sub(2).max(1)
    } else {
        1
    };
    if start > 1 && cube_ok(start).is_some() {
        // estimate was too high; fall back to a full scan
        return (1..=MAX_U_DENOMINATOR)
            .find_map(cube_ok)
            .ok_or(SeparationError::NoAdmissibleU);
    }
    (start..=MAX_U_DENOMINATOR)
        .find_map(cube_ok)
        .ok_or(SeparationError::NoAdmissibleU)
}

pub fn phi(t: f64) -> f64 {
    1.0 - t.exp() + (2.0 * t).exp() + (3.0 * t).exp()
}

fn univariate(coeffs: &[i64]) -> SparsePolynomial {
    SparsePolynomial::from_terms(
        1,
        coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| (ExponentVector::new(vec![k as u32]), int(c))),
    )
    .expect("univariate")
}

/// `phi'' phi - phi'^2` after `y = e^t`:
/// `(-y + 4y^2 + 9y^3)(1 - y + y^2 + y^3) - (-y + 2y^2 + 3y^3)^2`.
pub fn log_convexity_numerator() -> SparsePolynomial {
    let second = univariate(&[0, -1, 4, 9]);
    let value = univariate(&[1, -1, 1, 1]);
    let first = univariate(&[0, -1, 2, 3]);
    &(&second * &value) - &first.pow(2)
}

/// `y ((y-1)^4 + 2(y-1)^2 + 12(y-1) + 8)`, manifestly positive for `y >= 1`.
pub fn log_convexity_witness() -> SparsePolynomial {
    let y = SparsePolynomial::variable(1, 0);
    let z = &y - &SparsePolynomial::one(1);
    let inner = &(&(&z.pow(4) + &z.pow(2).scale(&int(2))) + &z.scale(&int(12)))
        + &SparsePolynomial::constant(1, int(8));
    &y * &inner
}

pub fn phi_identity_check() -> bool {
    log_convexity_numerator() == log_convexity_witness()
}

/// Smallest second difference of `ln phi` on `t0, t0 + h, ..., t1`.
pub fn log_phi_min_second_difference(t0: f64, t1: f64, h: f64) -> f64 {
    let steps = ((t1 - t0) / h).round() as usize;
    let values: Vec<f64> = (0..=steps).map(|i| phi(t0 + h * i as f64).ln()).collect();
    values
        .windows(3)
        .map(|w| (w[0] - 2.0 * w[1] + w[2]) / (h * h))
        .fold(f64::INFINITY, f64::min)
}

/// Exact `L[g]` next to the floating-point estimate
/// `(Theta + c_beta) * phi(beta_1 ln u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimBound {
    pub l_value: Rational,
    pub amgm_bound: f64,
}

/// Computes both sides and checks `L[g] >= bound - 1e-9 (1 + |bound|)`, and
/// `L[g] >= 0` exactly when `g` is nonnegative.
pub fn claim_lower_bound(
    functional: &SeparatingFunctional,
    circuit: &CircuitData,
) -> Result<ClaimBound, SeparationError> {
    let g = circuit.to_polynomial();
    let l_value = functional.apply(&g)?;
    let theta = circuit.circuit_number_power().theta_f64();
    let cb = to_f64(circuit.inner_coeff());
    let b1 = circuit.inner()[0];
    let ub = to_f64(functional.u()).powi(b1 as i32);
    let phi_b = 1.0 - ub + ub * ub + ub * ub * ub;
    let amgm_bound = (theta + cb) * phi_b;
    let l_f = to_f64(&l_value);
    if l_f < amgm_bound - 1e-9 * (1.0 + amgm_bound.abs()) {
        return Err(SeparationError::ClaimViolated(format!(
            "L[g] = {l_f:e} below AM-GM bound {amgm_bound:e} for {g}"
        )));
    }
    if circuit.is_nonnegative() && l_value.is_negative() {
        return Err(SeparationError::ClaimViolated(format!(
            "L[g] = {l_value} < 0 for nonnegative circuit {g}"
        )));
    }
    Ok(ClaimBound {
        l_value,
        amgm_bound,
    })
}

/// The square witness, kept together with its degree-`d` square root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub u: Rational,
    pub d: u32,
    pub factor: SparsePolynomial,
    pub poly: SparsePolynomial,
}

/// `f = h^2` with `h = (x1 - 1)(x1 - u^2)(x1 - u^3)^(d-2)` in `n` variables.
pub fn build_witness(u: &Rational, d: u32, n: usize) -> Result<Witness, SeparationError> {
    if d < 3 {
        return Err(SeparationError::DegreeTooSmall(d));
    }
    if u <= &Rational::one() {
        return Err(SeparationError::UNotAboveOne(format_rational(u)));
    }
    if n == 0 {
        return Err(SeparationError::ZeroDimension);
    }
    let x1 = SparsePolynomial::variable(n, 0);
    let root = |r: Rational| &x1 - &SparsePolynomial::constant(n, r);
    let u2 = u * u;
    let u3 = &u2 * u;
    let factor = &(&root(Rational::one()) * &root(u2)) * &root(u3).pow(d - 2);
    let poly = &factor * &factor;
    Ok(Witness {
        u: u.clone(),
        d,
        factor,
        poly,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    #[serde(with = "crate::rational::serde_str")]
    pub u: Rational,
    pub d: u32,
    pub n: usize,
    #[serde(rename = "K", serialize_with = "serialize_region")]
    pub region: BoxRegion,
    #[serde(serialize_with = "serialize_poly")]
    pub witness: SparsePolynomial,
    #[serde(serialize_with = "serialize_poly")]
    pub witness_factor: SparsePolynomial,
    #[serde(rename = "L_of_witness", with = "crate::rational::serde_str")]
    pub l_of_witness: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub witness_at_u: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub lower_bound: Rational,
    pub lower_bound_float: f64,
    #[serde(rename = "points_in_K")]
    pub points_in_region: [bool; 4],
}

fn serialize_poly<S: serde::Serializer>(p: &SparsePolynomial, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn serialize_region<S: serde::Serializer>(k: &BoxRegion, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(k.n()))?;
    for (lo, hi) in k.intervals() {
        seq.serialize_element(&[format_rational(lo), format_rational(hi)])?;
    }
    seq.end()
}

impl SeparationReport {
    pub fn functional(&self) -> SeparatingFunctional {
        SeparatingFunctional::new(self.n, self.u.clone()).expect("report holds a valid u")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Builds the witness for `K` and certifies `inf_{g SONC} ||g - f||_K >= f(u)/4`.
///
/// `u` defaults to [`choose_u`]; an explicit `u` only needs all four
/// evaluation points inside `K`.
pub fn separation_bound(
    region: &BoxRegion,
    d: u32,
    u: Option<Rational>,
) -> Result<SeparationReport, SeparationError> {
    if d < 3 {
        return Err(SeparationError::DegreeTooSmall(d));
    }
    let n = region.n();
    let u = match u {
        Some(u) => u,
        None => choose_u(region)?,
    };
    let functional = SeparatingFunctional::new(n, u.clone())?;
    let points_in_region = functional.points_in(region);
    if let Some(j) = points_in_region.iter().position(|ok| !ok) {
        return Err(SeparationError::PointOutsideRegion(j));
    }
    let witness = build_witness(&u, d, n)?;
    let l_of_witness = functional.apply(&witness.poly)?;
    let witness_at_u = witness.poly.evaluate(&functional.points()[1])?;
    if l_of_witness != -witness_at_u.clone() || !witness_at_u.is_positive() {
        return Err(SeparationError::CancellationFailed {
            l: format_rational(&l_of_witness),
            fu: format_rational(&witness_at_u),
        });
    }
    let lower_bound = -&l_of_witness / int(4);
    Ok(SeparationReport {
        u,
        d,
        n,
        region: region.clone(),
        witness: witness.poly,
        witness_factor: witness.factor,
        lower_bound_float: to_f64(&lower_bound),
        l_of_witness,
        witness_at_u,
        lower_bound,
        points_in_region,
    })
}

/// An interior point `a` of `K` with nonzero coordinates and the box
/// `H = {x : (a_1 x_1, ..., a_n x_n) in K}`, which has the all-ones point in
/// its interior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    pub point: Vec<Rational>,
    pub region: BoxRegion,
}

pub fn anchor(region: &BoxRegion) -> Anchor {
    let point: Vec<Rational> = region
        .intervals()
        .iter()
        .map(|(lo, hi)| {
            let one = Rational::one();
            if lo < &one && &one < hi {
                return one;
            }
            let mid = (lo + hi) / int(2);
            if mid.is_zero() {
                lo + (hi - lo) * Rational::new(BigInt::from(3), BigInt::from(4))
            } else {
                mid
            }
        })
        .collect();
    let rescaled = region
        .rescale_region(&point)
        .expect("anchor coordinates are nonzero");
    Anchor {
        point,
        region: rescaled,
    }
}

/// A separation report on the anchored box `H`, together with the witness
/// pulled back to `K` via `x -> x / a`. Norms agree: `||f_K - g||_K` equals
/// `||f_H - h||_H` for `h(x) = g(a x)`, and the SONC cone is preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchoredSeparation {
    pub anchor: Anchor,
    pub report: SeparationReport,
    pub witness_on_k: SparsePolynomial,
}

pub fn separation_bound_anchored(
    region: &BoxRegion,
    d: u32,
    u: Option<Rational>,
) -> Result<AnchoredSeparation, SeparationError> {
    let anchor = anchor(region);
    let report = separation_bound(&anchor.region, d, u)?;
    let inverse: Vec<Rational> = anchor.point.iter().map(Rational::recip).collect();
    let witness_on_k = report.witness.rescale(&inverse)?;
    Ok(AnchoredSeparation {
        anchor,
        report,
        witness_on_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::detect_circuit;
    use crate::polycore::parse;
    use crate::rational::{parse_rational, ratio};

    fn cube(n: usize, lo: &str, hi: &str) -> BoxRegion {
        BoxRegion::cube(n, parse_rational(lo).unwrap(), parse_rational(hi).unwrap()).unwrap()
    }

    #[test]
    fn choose_u_scans_unit_fractions() {
        assert_eq!(choose_u(&cube(1, "-2", "2")).unwrap(), ratio(5, 4));
        assert!(matches!(
            choose_u(&cube(1, "2", "3")),
            Err(SeparationError::OnesNotInterior)
        ));
        assert!(matches!(
            choose_u(&cube(2, "0", "1")),
            Err(SeparationError::OnesNotInterior)
        ));
        // hi = 100 admits k = 1
        assert_eq!(choose_u(&cube(1, "0", "100")).unwrap(), int(2));
    }

    #[test]
    fn choose_u_brute_force_oracle() {
        for (lo, hi) in [
            ("0.9", "1.05"),
            ("-1", "1.3"),
            ("0", "1.0001"),
            ("0.5", "3.375"),
        ] {
            let k = cube(3, lo, hi);
            let hi_r = parse_rational(hi).unwrap();
            let expected = (1..=MAX_U_DENOMINATOR)
                .map(|k| Rational::one() + ratio(1, k as i64))
                .find(|u| &(u * u * u) <= &hi_r)
                .unwrap();
            assert_eq!(choose_u(&k).unwrap(), expected, "K = [{lo}, {hi}]");
        }
    }

    #[test]
    fn choose_u_for_narrow_box() {
        // (62/61)^3 <= 21/20 < (61/60)^3
        assert_eq!(choose_u(&cube(2, "0.9", "1.05")).unwrap(), ratio(62, 61));
    }

    #[test]
    fn l_on_constants_and_monomials() {
        let f = SeparatingFunctional::new(1, ratio(5, 4)).unwrap();
        assert_eq!(f.apply(&SparsePolynomial::one(1)).unwrap(), int(2));
        assert_eq!(f.monomial_value(0), int(2));
        assert_eq!(f.monomial_value(1), ratio(209, 64));
        let x3 = parse("x1^3", 1).unwrap();
        assert_eq!(f.apply(&x3).unwrap(), f.monomial_value(3));
        let g = SeparatingFunctional::new(1, ratio(6, 5)).unwrap();
        let s = ratio(36, 25);
        assert_eq!(g.monomial_value(2), int(1) - &s + &s * &s + &s * &s * &s);
        assert!(SeparatingFunctional::new(1, int(1)).is_err());
    }

    #[test]
    fn l_on_motzkin() {
        let m = parse("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2).unwrap();
        for u in [ratio(5, 4), ratio(6, 5), ratio(101, 100), int(3)] {
            let f = SeparatingFunctional::new(2, u.clone()).unwrap();
            // M(t, 1) = (t^2 - 1)^2
            let sq = |v: Rational| (&v - int(1)) * (&v - int(1));
            let u2 = &u * &u;
            let expected = -sq(u2.clone()) + sq(&u2 * &u2) + sq(&u2 * &u2 * &u2);
            assert_eq!(f.apply(&m).unwrap(), expected);
            assert!(expected.is_positive());
        }
    }

    #[test]
    fn phi_and_identity() {
        assert_eq!(phi(0.0), 2.0);
        assert!(phi_identity_check());
        let one = [int(1)];
        assert_eq!(log_convexity_numerator().evaluate(&one).unwrap(), int(8));
        assert_eq!(log_convexity_witness().evaluate(&one).unwrap(), int(8));
        assert!(log_phi_min_second_difference(0.0, 2.0, 0.01) >= -1e-9);
    }

    #[test]
    fn claim_bound_examples() {
        let f = SeparatingFunctional::new(2, ratio(6, 5)).unwrap();
        let m =
            detect_circuit(&parse("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2).unwrap()).unwrap();
        let b = claim_lower_bound(&f, &m).unwrap();
        assert!(b.amgm_bound.abs() < 1e-9);
        assert!(b.l_value.is_positive());

        let f1 = SeparatingFunctional::new(1, ratio(5, 4)).unwrap();
        let deg = detect_circuit(&parse("7/2*x1^4", 1).unwrap()).unwrap();
        let b = claim_lower_bound(&f1, &deg).unwrap();
        assert_eq!(b.l_value, ratio(7, 2) * f1.monomial_value(4));

        // AM-GM side holds even for circuits that are not nonnegative
        let bad = detect_circuit(&parse("x1^4 - 3*x1^2 + 1", 1).unwrap()).unwrap();
        let b = claim_lower_bound(&f1, &bad).unwrap();
        assert!(b.amgm_bound < 0.0);
    }

    #[test]
    fn witness_structure() {
        let u = ratio(6, 5);
        let w = build_witness(&u, 3, 1).unwrap();
        assert_eq!(w.poly.degree(), 6);
        assert_eq!(w.factor.degree(), 3);
        assert_eq!(w.poly, &w.factor * &w.factor);
        for r in [int(1), &u * &u, &u * &u * &u] {
            assert!(w.poly.evaluate(&[r]).unwrap().is_zero());
        }
        assert_eq!(
            w.poly.evaluate(&[u.clone()]).unwrap(),
            ratio(156816, 244140625)
        );
        assert!(matches!(
            build_witness(&u, 2, 1),
            Err(SeparationError::DegreeTooSmall(2))
        ));
        assert!(matches!(
            build_witness(&int(1), 3, 1),
            Err(SeparationError::UNotAboveOne(_))
        ));
        let w3 = build_witness(&u, 5, 3).unwrap();
        assert_eq!(w3.poly.n(), 3);
        assert_eq!(w3.poly.degree(), 10);
    }

    #[test]
    fn bound_on_standard_box() {
        let k = cube(1, "-2", "2");
        let r = separation_bound(&k, 3, None).unwrap();
        assert_eq!(r.u, ratio(5, 4));
        let fu = r.witness.evaluate(&[ratio(5, 4)]).unwrap();
        assert_eq!(r.lower_bound, &fu / int(4));
        let r = separation_bound(&k, 3, Some(ratio(6, 5))).unwrap();
        assert_eq!(r.lower_bound, ratio(39204, 244140625));
        assert_eq!(r.l_of_witness, -ratio(156816, 244140625));
        assert!(matches!(
            separation_bound(&k, 3, Some(int(2))),
            Err(SeparationError::PointOutsideRegion(2))
        ));
        assert!(matches!(
            separation_bound(&k, 2, None),
            Err(SeparationError::DegreeTooSmall(2))
        ));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["lower_bound"], "39204/244140625");
        assert_eq!(json["K"][0][0], "-2");
    }

    #[test]
    fn four_point_gap_basics() {
        let f = SeparatingFunctional::new(1, ratio(5, 4)).unwrap();
        let w = build_witness(&ratio(5, 4), 3, 1).unwrap().poly;
        assert!(f.four_point_gap(&w, &w).unwrap().is_zero());
        let shifted = &w + &SparsePolynomial::one(1);
        assert_eq!(f.four_point_gap(&w, &shifted).unwrap(), int(1));
        assert!(f.four_point_gap(&w, &SparsePolynomial::one(2)).is_err());
    }

    #[test]
    fn anchoring_moves_ones_inside() {
        let k = BoxRegion::new(vec![(int(2), int(3)), (int(-4), int(4))]).unwrap();
        let a = anchor(&k);
        assert_eq!(a.point, vec![ratio(5, 2), int(1)]);
        assert!(a.region.contains_interior(&[int(1), int(1)]));
        let s = separation_bound_anchored(&k, 3, None).unwrap();
        // the pulled-back witness takes the same values at corresponding points
        let x = vec![ratio(1, 3), ratio(-2, 7)];
        let ax: Vec<Rational> = x.iter().zip(&a.point).map(|(xi, ai)| xi * ai).collect();
        assert_eq!(
            s.witness_on_k.evaluate(&ax).unwrap(),
            s.report.witness.evaluate(&x).unwrap()
        );
        let zero_mid = BoxRegion::new(vec![(int(-3), int(-1)), (int(-2), int(2))]).unwrap();
        let a = anchor(&zero_mid);
        assert_eq!(a.point, vec![int(-2), int(1)]);
        let neg = BoxRegion::new(vec![(int(-3), int(-2))]).unwrap();
        assert!(anchor(&neg).region.contains_interior(&[int(1)]));
    }
}
