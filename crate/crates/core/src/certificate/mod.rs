//! SONC membership certificates.
//!
//! A certificate is a target polynomial together with raw parts claimed to
//! be nonnegative circuit polynomials summing to it. The verifier trusts
//! nothing: it re-detects every circuit, re-computes every circuit number
//! and checks the sum exactly.

mod generate;

pub(crate) use generate::random_shape;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use generate::{
    even_pool, random_sonc, sample_circuit, InnerCoeffMode, RandomSoncConfig, INTERIOR_RETRIES,
};

use crate::circuit::{detect_circuit, CircuitData};
use crate::polycore::{parse, PolyError, SparsePolynomial};
use crate::rational::format_rational;

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("certificate has no parts")]
    NoParts,
    #[error("part {index} has dimension {found}, target has {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("polynomial {field}: {source}")]
    Parse {
        field: String,
        #[source]
        source: PolyError,
    },
    #[error("malformed certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("support pool cannot form a circuit: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoncCertificate {
    n: usize,
    target: SparsePolynomial,
    parts: Vec<SparsePolynomial>,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    n: usize,
    target: String,
    parts: Vec<String>,
}

impl SoncCertificate {
    pub fn new(
        target: SparsePolynomial,
        parts: Vec<SparsePolynomial>,
    ) -> Result<Self, CertificateError> {
        if parts.is_empty() {
            return Err(CertificateError::NoParts);
        }
        let n = target.n();
        if let Some((index, p)) = parts.iter().enumerate().find(|(_, p)| p.n() != n) {
            return Err(CertificateError::DimensionMismatch {
                index,
                expected: n,
                found: p.n(),
            });
        }
        Ok(SoncCertificate { n, target, parts })
    }

    /// A certificate whose target is the exact sum of `parts`.
    pub fn from_parts(n: usize, parts: Vec<SparsePolynomial>) -> Result<Self, CertificateError> {
        let mut target = SparsePolynomial::zero(n);
        for (index, p) in parts.iter().enumerate() {
            target = target
                .try_add(p)
                .map_err(|_| CertificateError::DimensionMismatch {
                    index,
                    expected: n,
                    found: p.n(),
                })?;
        }
        Self::new(target, parts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> &SparsePolynomial {
        &self.target
    }

    pub fn parts(&self) -> &[SparsePolynomial] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn total(&self) -> SparsePolynomial {
        self.parts
            .iter()
            .fold(SparsePolynomial::zero(self.n), |acc, p| &acc + p)
    }

    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        let raw: CertificateJson = serde_json::from_str(text)?;
        let target = parse(&raw.target, raw.n).map_err(|source| CertificateError::Parse {
            field: "target".to_string(),
            source,
        })?;
        let parts = raw
            .parts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                parse(t, raw.n).map_err(|source| CertificateError::Parse {
                    field: format!("parts[{i}]"),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(target, parts)
    }

    pub fn to_json(&self) -> String {
        let raw = CertificateJson {
            n: self.n,
            target: self.target.to_string(),
            parts: self.parts.iter().map(ToString::to_string).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("certificate serializes")
    }
}

/// Outcome for one part of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartReport {
    pub index: usize,
    pub polynomial: String,
    pub is_circuit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason_code: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonnegative: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_q: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuit: Option<CircuitData>,
}

impl PartReport {
    pub fn ok(&self) -> bool {
        self.is_circuit && self.nonnegative == Some(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub n: usize,
    pub parts: Vec<PartReport>,
    /// `target - sum(parts)`, exact.
    #[serde(serialize_with = "serialize_poly")]
    pub residual: SparsePolynomial,
    pub sum_matches: bool,
    /// Index of the first part that is not a nonnegative circuit.
    pub first_failure: Option<usize>,
}

fn serialize_poly<S: serde::Serializer>(p: &SparsePolynomial, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn check_part(index: usize, part: &SparsePolynomial) -> PartReport {
    let mut report = PartReport {
        index,
        polynomial: part.to_string(),
        is_circuit: false,
        reason: None,
        reason_code: None,
        nonnegative: None,
        theta_q: None,
        q: None,
        circuit: None,
    };
    match detect_circuit(part) {
        Ok(c) => {
            let power = c.circuit_number_power();
            report.is_circuit = true;
            report.nonnegative = Some(c.is_nonnegative());
            report.theta_q = Some(format_rational(&power.theta_q));
            report.q = Some(power.q);
            report.circuit = Some(c);
        }
        Err(e) => {
            report.reason_code = Some(e.code().to_string());
            report.reason = Some(e.to_string());
        }
    }
    report
}

/// Checks every part independently (in parallel) and the exact sum.
pub fn verify(cert: &SoncCertificate) -> VerificationReport {
    let parts: Vec<PartReport> = cert
        .parts
        .par_iter()
        .enumerate()
        .map(|(i, p)| check_part(i, p))
        .collect();
    let residual = cert
        .target
        .try_sub(&cert.total())
        .expect("dimensions checked");
    let first_failure = parts.iter().position(|p| !p.ok());
    let sum_matches = residual.is_zero();
    VerificationReport {
        ok: first_failure.is_none() && sum_matches,
        n: cert.n,
        parts,
        residual,
        sum_matches,
        first_failure,
    }
}
