//! Deciding order dominance for pairs of rationals.
//!
//! For a pair of rationals (alpha, beta), neither equal to +-1, this crate
//! decides whether the multiplicative order of alpha exceeds that of beta
//! modulo infinitely many primes. A single odd prime q satisfying a
//! three-part residue test certifies the pair; the [`criterion`] module
//! implements that test, [`census`] sweeps integer boxes and scans related
//! density statistics, and [`arith`] / [`symbols`] supply the underlying
//! exact number theory.

pub mod arith;
pub mod census;
pub mod cli;
pub mod criterion;
pub mod error;
pub mod symbols;

pub use error::{Error, Result};
