//! Laurent polynomials in the distinguished variable `t` with [`MPoly`] coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::mpoly::{MPoly, Monomial, Var};
use super::parse::parse_mpoly;
use super::AlgebraError;

/// Name of the recurrence variable; reserved, never a weight variable.
pub const T_VAR: &str = "t";

#[derive(Clone, PartialEq, Eq, Default)]
pub struct TPoly {
    coeffs: BTreeMap<i32, MPoly>,
}

impl TPoly {
    pub fn zero() -> TPoly {
        TPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> TPoly {
        TPoly::constant(MPoly::one())
    }

    pub fn constant(c: MPoly) -> TPoly {
        TPoly::monomial(c, 0)
    }

    /// `c·t^k`.
    pub fn monomial(c: MPoly, k: i32) -> TPoly {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        TPoly { coeffs }
    }

    pub fn t() -> TPoly {
        TPoly::monomial(MPoly::one(), 1)
    }

    /// From coefficients listed by increasing power of t starting at t^0.
    pub fn from_coeffs_low(cs: Vec<MPoly>) -> TPoly {
        let coeffs = cs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i32, c))
            .collect();
        TPoly { coeffs }
    }

    /// From coefficients listed by decreasing power of t ending at t^0.
    pub fn from_coeffs_high(mut cs: Vec<MPoly>) -> TPoly {
        cs.reverse();
        TPoly::from_coeffs_low(cs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn lowdeg(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, k: i32) -> MPoly {
        self.coeffs.get(&k).cloned().unwrap_or_else(MPoly::zero)
    }

    pub fn coeff_ref(&self, k: i32) -> Option<&MPoly> {
        self.coeffs.get(&k)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i32, &MPoly)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn leading_coeff(&self) -> MPoly {
        self.coeffs.values().next_back().cloned().unwrap_or_else(MPoly::zero)
    }

    /// A genuine polynomial (no negative t-powers) with leading coefficient 1.
    pub fn is_monic(&self) -> bool {
        self.lowdeg().map(|l| l >= 0).unwrap_or(false) && self.leading_coeff().is_one()
    }

    /// Coefficients c_0..c_deg (requires lowdeg ≥ 0).
    pub fn coeffs_low(&self) -> Vec<MPoly> {
        let d = self.degree().unwrap_or(-1);
        (0..=d).map(|k| self.coeff(k)).collect()
    }

    /// Total number of (t-power, monomial) terms.
    pub fn num_terms(&self) -> usize {
        self.coeffs.values().map(|c| c.num_terms()).sum()
    }

    pub fn mul_t_power(&self, k: i32) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// `t^deg · p(1/t)`.
    pub fn reverse(&self, deg: i32) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (deg - e, c.clone())).collect(),
        }
    }

    /// Removes the largest power of t dividing the polynomial; returns it alongside.
    pub fn strip_t_power(&self) -> (TPoly, i32) {
        match self.lowdeg() {
            Some(l) if l != 0 => (self.mul_t_power(-l), l),
            _ => (self.clone(), 0),
        }
    }

    /// Substitutes t ↦ c·t, i.e. multiplies the t^k coefficient by c^k.
    pub fn scale_t(&self, c: &MPoly) -> Result<TPoly, AlgebraError> {
        let mut coeffs = BTreeMap::new();
        for (k, x) in &self.coeffs {
            let v = x.mul_ref(&c.pow_i(*k)?);
            if !v.is_zero() {
                coeffs.insert(*k, v);
            }
        }
        Ok(TPoly { coeffs })
    }

    /// Divides every coefficient by the leading one when that is a unit monomial.
    pub fn make_monic(&self) -> Result<TPoly, AlgebraError> {
        let lc = self.leading_coeff();
        if lc.is_one() {
            return Ok(self.clone());
        }
        let inv = lc.pow_i(-1)?;
        Ok(TPoly {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.mul_ref(&inv))).collect(),
        })
    }

    pub fn map_coeffs<F: FnMut(&MPoly) -> Result<MPoly, AlgebraError>>(
        &self,
        mut f: F,
    ) -> Result<TPoly, AlgebraError> {
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            let v = f(c)?;
            if !v.is_zero() {
                coeffs.insert(*k, v);
            }
        }
        Ok(TPoly { coeffs })
    }

    pub fn substitute(&self, map: &HashMap<Var, MPoly>) -> Result<TPoly, AlgebraError> {
        self.map_coeffs(|c| c.substitute(map))
    }

    /// Evaluates the MPoly coefficients at a rational point; returns c_0..c_deg.
    pub fn eval_coeffs(&self, point: &HashMap<Var, BigRational>) -> Result<Vec<BigRational>, AlgebraError> {
        let d = self.degree().unwrap_or(-1);
        if self.lowdeg().map(|l| l < 0).unwrap_or(false) {
            return Err(AlgebraError::NotPolynomialInT);
        }
        (0..=d).map(|k| self.coeff(k).eval(point)).collect()
    }

    /// Exact division by a monic divisor; `NotDivisible` if a remainder is left.
    pub fn exact_div(&self, b: &TPoly) -> Result<TPoly, AlgebraError> {
        let db = b.degree().ok_or(AlgebraError::DivByZero)?;
        let lb = b.leading_coeff();
        let mut rem = self.clone();
        let mut q = TPoly::zero();
        while let Some(dr) = rem.degree() {
            if dr < db || rem.lowdeg().unwrap() < b.lowdeg().unwrap() {
                return Err(AlgebraError::NotDivisible);
            }
            let c = rem.leading_coeff().exact_div(&lb)?;
            let step = TPoly::monomial(c, dr - db);
            rem = rem.sub_ref(&step.mul_ref(b));
            q = q.add_ref(&step);
        }
        Ok(q)
    }

    pub fn add_ref(&self, other: &TPoly) -> TPoly {
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            let v = match coeffs.get(k) {
                Some(x) => x.add_ref(c),
                None => c.clone(),
            };
            if v.is_zero() {
                coeffs.remove(k);
            } else {
                coeffs.insert(*k, v);
            }
        }
        TPoly { coeffs }
    }

    pub fn sub_ref(&self, other: &TPoly) -> TPoly {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.neg_ref())).collect(),
        }
    }

    pub fn mul_ref(&self, other: &TPoly) -> TPoly {
        let mut coeffs: BTreeMap<i32, MPoly> = BTreeMap::new();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let p = ca.mul_ref(cb);
                let e = coeffs.entry(ka + kb).or_insert_with(MPoly::zero);
                *e = e.add_ref(&p);
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        TPoly { coeffs }
    }

    pub fn scale(&self, c: &MPoly) -> TPoly {
        TPoly::constant(c.clone()).mul_ref(self)
    }

    /// Converts an [`MPoly`] that uses the variable `t` into a TPoly.
    pub fn from_mpoly_in_t(p: &MPoly) -> TPoly {
        let mut coeffs: BTreeMap<i32, Vec<(Monomial, BigInt)>> = BTreeMap::new();
        for (m, c) in p.terms() {
            let mut k = 0;
            let rest: Vec<(Var, i32)> = m
                .exps()
                .iter()
                .filter(|(v, e)| {
                    if v.name() == T_VAR {
                        k = *e;
                        false
                    } else {
                        true
                    }
                })
                .cloned()
                .collect();
            coeffs.entry(k).or_default().push((Monomial::from_pairs(rest), c.clone()));
        }
        TPoly {
            coeffs: coeffs
                .into_iter()
                .map(|(k, ts)| (k, MPoly::from_terms(ts)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Parses an expression in which `t` is the recurrence variable.
    pub fn parse(s: &str) -> Result<TPoly, AlgebraError> {
        Ok(TPoly::from_mpoly_in_t(&parse_mpoly(s)?))
    }
}

impl super::ring::Ring for TPoly {
    fn zero() -> Self {
        TPoly::zero()
    }
    fn one() -> Self {
        TPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn from_i64(n: i64) -> Self {
        TPoly::constant(MPoly::constant(n))
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Canonical printing, t-degree descending; multi-term coefficients are parenthesised.
impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (idx, (k, c)) in self.coeffs.iter().rev().enumerate() {
            let first = idx == 0;
            let tpart = match *k {
                0 => String::new(),
                1 => "t".to_string(),
                k => format!("t^{k}"),
            };
            let (neg, body) = if let Some((m, x)) = c.as_term() {
                let neg = x < &BigInt::zero();
                let absx = if neg { -x } else { x.clone() };
                let single = MPoly::term(absx, m.clone());
                let body = if tpart.is_empty() {
                    single.to_string()
                } else if single.is_one() {
                    tpart.clone()
                } else {
                    format!("{single}*{tpart}")
                };
                (neg, body)
            } else {
                let neg = c.terms()[0].1 < BigInt::zero();
                let shown = if neg { c.neg_ref() } else { c.clone() };
                let body = if tpart.is_empty() {
                    format!("({shown})")
                } else {
                    format!("({shown})*{tpart}")
                };
                (neg, body)
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}
