//! Exact commutative-algebra kernel for certifying F-singularities.
//!
//! The crate is `no_std` (with `alloc`). It provides sparse multivariate
//! polynomials over Q and F_p, a Buchberger Groebner engine, Frobenius
//! bracket powers and roots, Fedder/Glassbrenner-type splitting criteria,
//! absolute and relative test ideals, arithmetic models over Z and the
//! logic that turns checker outcomes into certificates.
#![no_std]

extern crate alloc;

pub mod arithmodels;
pub mod certify;
pub mod error;
pub mod fcriteria;
pub mod frobenius;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod testideals;

pub use error::{Error, Result};
pub use groebner::Ideal;
pub use poly::{CoefficientDomain, Monomial, MonomialOrder, Polynomial, Scalar};

/// Version string embedded in certificates.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
