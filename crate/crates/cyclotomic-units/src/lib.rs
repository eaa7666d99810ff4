//! Exact-arithmetic construction and verification of explicit bases of
//! cyclotomic-unit groups.
//!
//! The library builds, for a conductor `n` (with `n >= 3`, `n != 2 mod 4`):
//!
//! * the Gold–Kim basis of the group of cyclotomic units of `Q(zeta_n)`
//!   modulo roots of unity, together with a terminating rewriting procedure
//!   that decomposes arbitrary unit symbols into it ([`goldkim`]);
//! * bases of the real-plus unit group built from absolute values of
//!   Gold–Kim elements ([`realplus`]);
//! * bases for totally deployed abelian subfields `K = K_1 ... K_r` given by
//!   per-prime degrees ([`deployed`]).
//!
//! Everything is verified along two independent routes: exact integer lattice
//! algebra (Smith/Hermite normal forms with transformation certificates) and
//! a high-precision floating-point embedding oracle ([`verify`], [`hp`]).

pub mod arith;
pub mod deployed;
pub mod galois;
pub mod goldkim;
pub mod hp;
pub mod realplus;
pub mod report;
pub mod subset;
pub mod symbols;
pub mod verify;

use thiserror::Error;

/// Arbitrary-precision integer used throughout.
pub type Z = num_bigint::BigInt;
/// Arbitrary-precision rational used for the subset algebra and linear solves.
pub type Q = num_rational::BigRational;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid conductor {0}: need n >= 3 and n != 2 (mod 4)")]
    InvalidConductor(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not a unit: {0}")]
    NotUnit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
