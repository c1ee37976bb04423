//! Exact computation around p-adic exponential sums of integer polynomials.
//!
//! The crate enumerates value histograms of `f` over residue boxes mod `p^m`,
//! evaluates the normalized sums `E`, `E^0`, `E^y` and their valuation-strata
//! decomposition, assembles Igusa local zeta functions from user-supplied
//! resolution numerical data, reconstructs the sums from zeta coefficients,
//! estimates log-canonical thresholds from contact-locus point counts across
//! primes, and sweeps (p, m) grids against the `C m^(n-1) p^(-m sigma)`
//! decay bound.
//!
//! All combinatorial claims are made on exact integer data (histogram counts,
//! rational zeta coefficients); floating-point values only appear in derived
//! complex sums, with a stated 1e-9 absolute tolerance.

pub mod arith;
pub mod chars;
pub mod critical;
pub mod engine;
pub mod error;
pub mod lct;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
