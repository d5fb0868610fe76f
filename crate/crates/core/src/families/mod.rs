//! The application families: Schur polynomials, bounded reverse plane partitions
//! (lozenge tilings) and domino tilings, each with a network builder and an
//! enumeration oracle.

mod domino;
mod lozenge;
mod schur;

pub use domino::*;
pub use lozenge::*;
pub use schur::*;

use thiserror::Error;

use crate::network::NetworkError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("more than {limit} objects to enumerate")]
    EnumerationLimit { limit: usize },
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Standard Fibonacci numbers, F(0) = 0, F(1) = 1.
pub fn fibonacci(k: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..k {
        let c = a + b;
        a = b;
        b = c;
    }
    a
}
