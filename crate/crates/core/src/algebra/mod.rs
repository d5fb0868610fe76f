//! Exact ring arithmetic: Laurent polynomials over ℤ, polynomials in `t` over them,
//! dense matrices with division-free determinants and characteristic polynomials.

mod matrix;
mod mpoly;
mod parse;
mod ring;
mod tpoly;
mod upoly;

pub use matrix::{Matrix, RingMatrix};
pub use mpoly::{MPoly, Monomial, Var};
pub use parse::{parse_mpoly, parse_mpoly_in};
pub use ring::Ring;
pub use tpoly::{TPoly, T_VAR};
pub use upoly::QPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid variable name {0:?}")]
    BadVarName(String),
    #[error("not divisible")]
    NotDivisible,
    #[error("division by zero")]
    DivByZero,
    #[error("negative power of non-monomial {0}")]
    NegativePower(String),
    #[error("no value supplied for variable {0}")]
    MissingValue(String),
    #[error("expected a polynomial in t without negative powers")]
    NotPolynomialInT,
}

/// Convenience: parse an expression, panicking on malformed input. Intended for literals.
pub fn p(s: &str) -> MPoly {
    parse_mpoly(s).unwrap_or_else(|e| panic!("bad polynomial literal {s:?}: {e}"))
}

/// Convenience: parse an expression in `t`, panicking on malformed input.
pub fn tp(s: &str) -> TPoly {
    TPoly::parse(s).unwrap_or_else(|e| panic!("bad polynomial literal {s:?}: {e}"))
}

/// Characteristic polynomial det(t·Id − M) of a constant matrix.
pub fn charpoly(m: &Matrix<MPoly>) -> TPoly {
    m.charpoly()
}

/// Division-free determinant.
pub fn det_division_free<R: Ring>(m: &Matrix<R>) -> R {
    m.det()
}

/// Exact multivariate division.
pub fn mpoly_exact_div(a: &MPoly, b: &MPoly) -> Result<MPoly, AlgebraError> {
    a.exact_div(b)
}
