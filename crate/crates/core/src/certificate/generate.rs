//! Random SONC certificates that verify by construction.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CertificateError, SoncCertificate};
use crate::circuit::{affinely_independent, barycentric_weights, CircuitData};
use crate::polycore::{ExponentVector, SparsePolynomial};
use crate::rational::Rational;

/// Attempts at drawing an interior point before the outer set is shrunk.
pub const INTERIOR_RETRIES: usize = 100;

/// How `c_beta` is drawn relative to the circuit number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerCoeffMode {
    /// Always inside the nonnegativity region (projected exactly).
    Nonnegative,
    /// Anywhere in `[-2 Theta, 2 Theta]`, boundary values included.
    Unconstrained,
}

#[derive(Debug, Clone)]
pub struct RandomSoncConfig {
    pub n: usize,
    pub max_degree: u32,
    pub pool: Vec<ExponentVector>,
    pub parts: usize,
}

impl RandomSoncConfig {
    /// Pool of every even lattice point of total degree at most `max_degree`.
    pub fn new(n: usize, max_degree: u32, parts: usize) -> Self {
        RandomSoncConfig {
            n,
            max_degree,
            pool: even_pool(n, max_degree),
            parts,
        }
    }
}

/// All `alpha in (2Z_{>=0})^n` with `|alpha| <= max_degree`, graded-lex order.
pub fn even_pool(n: usize, max_degree: u32) -> Vec<ExponentVector> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if prefix.len() == n {
            out.push(ExponentVector::new(prefix.clone()));
            return;
        }
        let mut e = 0;
        while e <= left {
            prefix.push(e);
            rec(n, left - e, prefix, out);
            prefix.pop();
            e += 2;
        }
    }
    let mut out = Vec::new();
    rec(n, max_degree, &mut Vec::with_capacity(n), &mut out);
    out.sort();
    out
}

fn check_pool(pool: &[ExponentVector]) -> Result<usize, CertificateError> {
    let Some(first) = pool.first() else {
        return Err(CertificateError::Pool("empty support pool".to_string()));
    };
    let n = first.dim();
    if pool.iter().any(|a| a.dim() != n) {
        return Err(CertificateError::Pool("mixed dimensions".to_string()));
    }
    if let Some(a) = pool.iter().find(|a| !a.is_even()) {
        return Err(CertificateError::Pool(format!("{a} is not even")));
    }
    Ok(n)
}

fn small_positive<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    Rational::new(
        BigInt::from(rng.random_range(1..=12)),
        BigInt::from(rng.random_range(1..=4)),
    )
}

/// Nearest multiple of `2^-16`.
fn dyadic16(x: f64) -> Rational {
    let scaled = (x * 65536.0).round();
    Rational::new(BigInt::from(scaled as i64), BigInt::from(65536))
}

/// Integer `q`-th root of `v >= 0` when it exists.
fn exact_int_root(v: &BigInt, q: u64) -> Option<BigInt> {
    if v.bits() > 900 || q == 0 {
        return None;
    }
    let guess = v.to_f64()?.powf(1.0 / q as f64).round();
    let g = BigInt::from(guess as i128);
    [g.clone() - 1, g.clone(), g + 1]
        .into_iter()
        .find(|cand| !cand.is_negative() && num_traits::pow(cand.clone(), q as usize) == *v)
}

/// `Theta` itself when it happens to be rational.
fn rational_theta(c: &CircuitData) -> Option<Rational> {
    let p = c.circuit_number_power();
    let num = exact_int_root(p.theta_q.numer(), p.q)?;
    let den = exact_int_root(p.theta_q.denom(), p.q)?;
    Some(Rational::new(num, den))
}

pub(crate) fn random_shape<R: Rng + ?Sized>(
    rng: &mut R,
    pool: &[ExponentVector],
    n: usize,
) -> Option<(Vec<ExponentVector>, ExponentVector)> {
    let mut distinct: Vec<ExponentVector> = pool.to_vec();
    distinct.sort();
    distinct.dedup();
    if distinct.len() < 2 {
        return None;
    }
    let k_max = (n + 1).min(distinct.len());
    let mut k = rng.random_range(2..=k_max);
    while k >= 2 {
        for _ in 0..INTERIOR_RETRIES {
            let outer: Vec<ExponentVector> = sample(rng, distinct.len(), k)
                .into_iter()
                .map(|i| distinct[i].clone())
                .collect();
            if !affinely_independent(&outer) {
                continue;
            }
            let w: Vec<f64> = (0..k)
                .map(|_| f64::from(rng.random_range(1..=6u32)))
                .collect();
            let total: f64 = w.iter().sum();
            let beta: Vec<u32> = (0..n)
                .map(|i| {
                    let x: f64 = outer
                        .iter()
                        .zip(&w)
                        .map(|(a, wi)| f64::from(a[i]) * wi)
                        .sum();
                    (x / total).round() as u32
                })
                .collect();
            let beta = ExponentVector::new(beta);
            if outer.contains(&beta) {
                continue;
            }
            if let Ok(lambda) = barycentric_weights(&outer, &beta) {
                if lambda.iter().all(Signed::is_positive) {
                    return Some((outer, beta));
                }
            }
        }
        k -= 1;
    }
    // any two distinct even points have an integral midpoint
    let idx = sample(rng, distinct.len(), 2);
    let (a, b) = (&distinct[idx.index(0)], &distinct[idx.index(1)]);
    let mid = ExponentVector::new((0..n).map(|i| (a[i] + b[i]) / 2).collect());
    Some((vec![a.clone(), b.clone()], mid))
}

/// Draws one circuit polynomial over `pool`. A degenerate monomial is
/// returned with probability 0.15, or always when the pool has one point.
pub fn sample_circuit<R: Rng + ?Sized>(
    rng: &mut R,
    pool: &[ExponentVector],
    mode: InnerCoeffMode,
) -> Result<CircuitData, CertificateError> {
    let n = check_pool(pool)?;
    let shape = if rng.random_bool(0.15) {
        None
    } else {
        random_shape(rng, pool, n)
    };
    let Some((outer, inner)) = shape else {
        let alpha = pool[rng.random_range(0..pool.len())].clone();
        let c = small_positive(rng);
        return CircuitData::new(vec![alpha.clone()], vec![c], alpha, Rational::zero())
            .map_err(|e| CertificateError::Pool(e.to_string()));
    };
    let coeffs: Vec<Rational> = outer.iter().map(|_| small_positive(rng)).collect();
    let base = CircuitData::new(outer, coeffs, inner.clone(), Rational::zero())
        .map_err(|e| CertificateError::Pool(e.to_string()))?;
    let coeffs = base.outer_coeffs().to_vec();
    let theta = base.circuit_number_power().theta_f64();

    let (lo, hi) = match (mode, inner.is_even()) {
        (InnerCoeffMode::Nonnegative, false) => (-1.0, 1.0),
        (InnerCoeffMode::Nonnegative, true) => (-1.0, 1.5),
        (InnerCoeffMode::Unconstrained, _) => (-2.0, 2.0),
    };
    let boundary = rng
        .random_bool(0.15)
        .then(|| rational_theta(&base))
        .flatten();
    let cb = match boundary {
        Some(t) => {
            let sign_negative = inner.is_even() || rng.random_bool(0.5);
            let mut v = if sign_negative { -t } else { t };
            if mode == InnerCoeffMode::Unconstrained && rng.random_bool(0.5) {
                // just past the boundary
                v *= Rational::new(BigInt::from(1_048_577), BigInt::from(1_048_576));
            }
            v
        }
        None => {
            let mut v = Rational::zero();
            for _ in 0..16 {
                v = dyadic16(rng.random_range(lo..hi) * theta);
                if !v.is_zero() {
                    break;
                }
            }
            if v.is_zero() {
                v = dyadic16(theta / 2.0);
            }
            v
        }
    };
    let circuit = base
        .with_coeffs(coeffs, cb)
        .map_err(|e| CertificateError::Pool(e.to_string()))?;
    Ok(match mode {
        InnerCoeffMode::Nonnegative => circuit.project_inner_coeff(),
        InnerCoeffMode::Unconstrained => circuit,
    })
}

/// A certificate whose target is the sum of `cfg.parts` random nonnegative
/// circuit polynomials drawn from `cfg.pool`. Deterministic in `seed`.
pub fn random_sonc(cfg: &RandomSoncConfig, seed: u64) -> Result<SoncCertificate, CertificateError> {
    if cfg.parts == 0 {
        return Err(CertificateError::NoParts);
    }
    let n = check_pool(&cfg.pool)?;
    if n != cfg.n {
        return Err(CertificateError::Pool(format!(
            "pool has dimension {n}, expected {}",
            cfg.n
        )));
    }
    if let Some(a) = cfg
        .pool
        .iter()
        .find(|a| a.degree() > u64::from(cfg.max_degree))
    {
        return Err(CertificateError::Pool(format!(
            "{a} exceeds the degree bound {}",
            cfg.max_degree
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::with_capacity(cfg.parts);
    for _ in 0..cfg.parts {
        let c = sample_circuit(&mut rng, &cfg.pool, InnerCoeffMode::Nonnegative)?;
        if c.inner_coeff().is_zero() && !c.is_degenerate() {
            // without its inner term the support may not be a circuit; the
            // outer monomials are nonnegative circuits on their own
            for (a, coeff) in c.outer().iter().zip(c.outer_coeffs()) {
                parts.push(SparsePolynomial::monomial(a.clone(), coeff.clone()));
            }
        } else {
            parts.push(c.to_polynomial());
        }
    }
    SoncCertificate::from_parts(cfg.n, parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify;

    #[test]
    fn pool_enumeration() {
        let pool = even_pool(2, 4);
        // (0,0) (0,2) (2,0) (0,4) (2,2) (4,0)
        assert_eq!(pool.len(), 6);
        assert!(pool.iter().all(ExponentVector::is_even));
        assert_eq!(even_pool(1, 6).len(), 4);
    }

    #[test]
    fn tiny_pool_gives_monomials_or_odd_middle() {
        let cfg = RandomSoncConfig {
            n: 1,
            max_degree: 2,
            pool: vec![ExponentVector::new(vec![0]), ExponentVector::new(vec![2])],
            parts: 1,
        };
        for seed in 0..50 {
            let cert = random_sonc(&cfg, seed).unwrap();
            for part in cert.parts() {
                let c = crate::circuit::detect_circuit(part).unwrap();
                if !c.is_degenerate() {
                    assert_eq!(c.inner(), &ExponentVector::new(vec![1]));
                }
            }
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = RandomSoncConfig::new(2, 8, 4);
        assert_eq!(random_sonc(&cfg, 7).unwrap(), random_sonc(&cfg, 7).unwrap());
        assert_ne!(random_sonc(&cfg, 7).unwrap(), random_sonc(&cfg, 8).unwrap());
    }

    #[test]
    fn generated_certificates_verify() {
        for (n, deg) in [(1, 8), (2, 8), (3, 6)] {
            let cfg = RandomSoncConfig::new(n, deg, 3);
            for seed in 0..40 {
                let r = verify(&random_sonc(&cfg, seed).unwrap());
                assert!(r.ok, "n={n} seed={seed}: {r:?}");
            }
        }
    }

    #[test]
    fn bad_pools() {
        assert!(matches!(
            random_sonc(
                &RandomSoncConfig {
                    n: 1,
                    max_degree: 4,
                    pool: vec![],
                    parts: 1
                },
                0
            ),
            Err(CertificateError::Pool(_))
        ));
        let odd = RandomSoncConfig {
            n: 1,
            max_degree: 4,
            pool: vec![ExponentVector::new(vec![3])],
            parts: 1,
        };
        assert!(matches!(
            random_sonc(&odd, 0),
            Err(CertificateError::Pool(_))
        ));
        let mut zero_parts = RandomSoncConfig::new(1, 4, 1);
        zero_parts.parts = 0;
        assert!(matches!(
            random_sonc(&zero_parts, 0),
            Err(CertificateError::NoParts)
        ));
    }

    #[test]
    fn unconstrained_mode_hits_both_verdicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pool = even_pool(2, 8);
        let (mut yes, mut no) = (0, 0);
        for _ in 0..200 {
            let c = sample_circuit(&mut rng, &pool, InnerCoeffMode::Unconstrained).unwrap();
            if c.is_nonnegative() {
                yes += 1;
            } else {
                no += 1;
            }
        }
        assert!(yes > 20 && no > 20, "yes={yes} no={no}");
    }
}
