//! Exact certification of nonnegativity via sums of nonnegative circuit
//! (SONC) polynomials, and a certified lower bound showing that some
//! nonnegative polynomials stay uniformly far from the SONC cone.
//!
//! - [`polycore`]: exact sparse polynomials, parsing, evaluation, rescaling.
//! - [`circuit`]: circuit detection, barycentric weights, circuit numbers and
//!   the exact nonnegativity criterion.
//! - [`certificate`]: verification and random generation of SONC
//!   decompositions.
//! - [`separation`]: the four-point functional, the square witness and the
//!   certified approximation gap.
//! - [`experiment`]: randomized search for SONC approximations of the witness.

pub mod certificate;
pub mod circuit;
pub mod experiment;
pub mod polycore;
pub mod rational;
pub mod separation;

pub use certificate::{random_sonc, verify, SoncCertificate, VerificationReport};
pub use circuit::{detect_circuit, CircuitData, NotACircuit};
pub use polycore::{parse, BoxRegion, ExponentVector, PolyError, SparsePolynomial};
pub use rational::Rational;
pub use separation::{SeparatingFunctional, SeparationReport};
