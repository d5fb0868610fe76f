//! Annihilation checks, forward extension and Berlekamp–Massey minimal recurrences.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{MPoly, QPoly, TPoly};
use crate::paths::SequenceF;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecurrenceError {
    #[error("sequence of length {len} is too short for a degree-{degree} check")]
    Inconclusive { len: usize, degree: usize },
    #[error("recurrence polynomial must be monic with nonnegative t-powers")]
    NotMonic,
    #[error("minimal recurrence differs between windows: {0} vs {1}")]
    Unstable(String, String),
    #[error("need at least {need} terms after the dropped prefix, have {have}")]
    InsufficientData { need: usize, have: usize },
}

/// Outcome of applying Q as a shift operator to a finite sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceReport {
    pub holds: bool,
    /// ℓ*: first index from which every residual vanishes.
    pub first_valid_index: Option<usize>,
    /// residual(n) = Σ_k q_k f(n + k) for n = 0..len − deg Q.
    pub residuals: Vec<MPoly>,
}

impl fmt::Display for RecurrenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "holds: {}", self.holds)?;
        match self.first_valid_index {
            Some(l) => writeln!(f, "first_valid_index: {l}")?,
            None => writeln!(f, "first_valid_index: none")?,
        }
        for (n, r) in self.residuals.iter().enumerate() {
            writeln!(f, "residual[{n}] = {r}")?;
        }
        Ok(())
    }
}

/// Residuals of a monic recurrence with coefficients `q` (low to high) over any ring.
pub fn residuals<R: crate::algebra::Ring>(q: &[R], f: &[R]) -> Vec<R> {
    let d = q.len().saturating_sub(1);
    if f.len() < d + 1 {
        return Vec::new();
    }
    (0..=f.len() - d - 1)
        .map(|n| {
            let mut acc = R::zero();
            for (k, c) in q.iter().enumerate() {
                if !c.is_zero() {
                    acc.add_assign(&c.mul(&f[n + k]));
                }
            }
            acc
        })
        .collect()
}

/// ℓ* from a residual list; `holds` needs at least two vanishing residuals from ℓ* on.
fn first_valid<R: crate::algebra::Ring>(res: &[R]) -> (bool, Option<usize>) {
    let mut start = res.len();
    while start > 0 && res[start - 1].is_zero() {
        start -= 1;
    }
    if start == res.len() {
        return (false, None);
    }
    (res.len() - start >= 2, Some(start))
}

/// Checks whether the monic Q annihilates f beyond a finite prefix.
pub fn annihilates(q: &TPoly, f: &SequenceF) -> Result<RecurrenceReport, RecurrenceError> {
    annihilates_values(q, &f.values)
}

pub fn annihilates_values(q: &TPoly, f: &[MPoly]) -> Result<RecurrenceReport, RecurrenceError> {
    if !q.is_monic() {
        return Err(RecurrenceError::NotMonic);
    }
    let d = q.degree().unwrap_or(0) as usize;
    if f.len() < d + 2 {
        return Err(RecurrenceError::Inconclusive { len: f.len(), degree: d });
    }
    let res = residuals(&q.coeffs_low(), f);
    let (holds, first) = first_valid(&res);
    Ok(RecurrenceReport { holds, first_valid_index: first, residuals: res })
}

/// Rational version: (holds, ℓ*) for a monic rational recurrence.
pub fn annihilates_rational(q: &QPoly, f: &[BigRational]) -> Result<(bool, Option<usize>), RecurrenceError> {
    let d = q.degree().ok_or(RecurrenceError::NotMonic)?;
    if !q.lead().is_one() {
        return Err(RecurrenceError::NotMonic);
    }
    if f.len() < d + 2 {
        return Err(RecurrenceError::Inconclusive { len: f.len(), degree: d });
    }
    let res = residuals(q.coeffs(), f);
    Ok(first_valid(&res))
}

/// Extends `init` to length `len` with f(n + d) = −Σ_{k<d} q_k f(n + k).
pub fn extend(q: &QPoly, init: &[BigRational], len: usize) -> Result<Vec<BigRational>, RecurrenceError> {
    let d = q.degree().ok_or(RecurrenceError::NotMonic)?;
    if !q.lead().is_one() {
        return Err(RecurrenceError::NotMonic);
    }
    if init.len() < d {
        return Err(RecurrenceError::InsufficientData { need: d, have: init.len() });
    }
    let mut out: Vec<BigRational> = init.to_vec();
    while out.len() < len {
        let n = out.len() - d;
        let mut next = BigRational::zero();
        for k in 0..d {
            next -= &q.coeffs()[k] * &out[n + k];
        }
        out.push(next);
    }
    out.truncate(len.max(init.len()).min(out.len()));
    Ok(out)
}

/// Minimal annihilator of a sequence tail.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalRecurrence {
    /// Monic, with no factor t.
    pub poly: QPoly,
    /// Number of leading terms ignored (the dropped prefix plus any stripped t-factors).
    pub offset: usize,
}

/// Berlekamp–Massey over ℚ: the shortest connection polynomial, returned as the monic
/// characteristic polynomial t^L·C(1/t) together with the linear complexity L.
pub fn berlekamp_massey(s: &[BigRational]) -> (QPoly, usize) {
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = BigRational::one();
    for n in 0..s.len() {
        let mut disc = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            disc += &c[i] * &s[n - i];
        }
        if disc.is_zero() {
            m += 1;
            continue;
        }
        let coef = &disc / &bd;
        let old = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = old;
            bd = disc;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, BigRational::zero());
    let mut high: Vec<BigRational> = c;
    high.reverse();
    (QPoly::new(high), l)
}

fn tail_minimal(f: &[BigRational], drop: usize) -> Result<MinimalRecurrence, RecurrenceError> {
    let tail = &f[drop.min(f.len())..];
    let (poly, l) = berlekamp_massey(tail);
    if 2 * l + 2 > tail.len() {
        return Err(RecurrenceError::InsufficientData { need: 2 * l + 2, have: tail.len() });
    }
    let (poly, k) = poly.strip_t();
    Ok(MinimalRecurrence { poly, offset: drop + k })
}

/// Minimal recurrence of f beyond `drop` terms, cross-checked on the window starting one later.
pub fn minimal_recurrence(f: &[BigRational], drop: usize) -> Result<MinimalRecurrence, RecurrenceError> {
    let a = tail_minimal(f, drop)?;
    let b = tail_minimal(f, drop + 1)?;
    if a.poly != b.poly {
        return Err(RecurrenceError::Unstable(a.poly.to_string(), b.poly.to_string()));
    }
    Ok(a)
}
