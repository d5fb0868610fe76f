//! Sparse multivariate Laurent polynomials with arbitrary-precision integer coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

/// An indeterminate. Cheap to clone; ordered and compared by name.
#[derive(Clone)]
pub struct Var(Arc<str>);

impl Var {
    /// Creates a variable, checking the name against `[a-zA-Z][a-zA-Z0-9_]*`.
    pub fn new(name: &str) -> Result<Var, AlgebraError> {
        if is_valid_name(name) {
            Ok(Var(Arc::from(name)))
        } else {
            Err(AlgebraError::BadVarName(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            Ordering::Equal
        } else {
            self.0.cmp(&other.0)
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A Laurent monomial: variables sorted by name, exponents nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(Var, i32)>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: Var, e: i32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { exps: vec![(v, e)] }
        }
    }

    /// Builds a monomial from arbitrary (variable, exponent) pairs, merging repeats.
    pub fn from_pairs<I: IntoIterator<Item = (Var, i32)>>(pairs: I) -> Monomial {
        let mut v: Vec<(Var, i32)> = pairs.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut exps: Vec<(Var, i32)> = Vec::with_capacity(v.len());
        for (var, e) in v {
            match exps.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => exps.push((var, e)),
            }
        }
        exps.retain(|p| p.1 != 0);
        Monomial { exps }
    }

    pub fn exps(&self) -> &[(Var, i32)] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|p| p.1 as i64).sum()
    }

    pub fn exponent(&self, v: &Var) -> i32 {
        self.exps
            .binary_search_by(|p| p.0.cmp(v))
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn has_negative(&self) -> bool {
        self.exps.iter().any(|p| p.1 < 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.exps.is_empty() {
            return other.clone();
        }
        if other.exps.is_empty() {
            return self.clone();
        }
        let (a, b) = (&self.exps, &other.exps);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { exps: out }
    }

    pub fn pow(&self, e: i32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|(v, x)| (v.clone(), x * e)).collect(),
        }
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }

    /// `self / other` when every exponent stays nonnegative wherever `self` was.
    fn divides_into(&self, other: &Monomial) -> bool {
        // true iff other / self has no negative exponents
        other.mul(&self.inv()).exps.iter().all(|p| p.1 >= 0)
    }

    /// Lexicographic comparison with a > b > c > … (earlier names dominate).
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(x), None) => return x.1.cmp(&0),
                (None, Some(y)) => return 0.cmp(&y.1),
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => return x.1.cmp(&0),
                    Ordering::Greater => return 0.cmp(&y.1),
                    Ordering::Equal => {
                        if x.1 != y.1 {
                            return x.1.cmp(&y.1);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic order: total degree first, then [`Monomial::lex_cmp`].
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A multivariate Laurent polynomial over ℤ in canonical form.
///
/// Terms are kept sorted by descending [`Monomial`] order with no zero coefficients,
/// so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> MPoly {
        MPoly::constant(BigInt::one())
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> MPoly {
        let c = c.into();
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn var(v: &Var) -> MPoly {
        MPoly::term(BigInt::one(), Monomial::var(v.clone(), 1))
    }

    pub fn term(c: BigInt, m: Monomial) -> MPoly {
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from unsorted, possibly repeated terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> MPoly {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        MPoly::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, BigInt>) -> MPoly {
        let mut terms: Vec<(Monomial, BigInt)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The value if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    /// The single term if this polynomial is a monomial times a coefficient.
    pub fn as_term(&self) -> Option<(&Monomial, &BigInt)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms
            .binary_search_by(|p| m.cmp(&p.0))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| BigInt::zero())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.exps().iter().map(|p| p.0.clone()))
            .collect()
    }

    /// Largest total degree over the terms (0 for the zero polynomial).
    pub fn total_degree(&self) -> i64 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: &Var) -> i32 {
        self.terms.iter().map(|t| t.0.exponent(v)).min().unwrap_or(0)
    }

    pub fn max_degree_in(&self, v: &Var) -> i32 {
        self.terms.iter().map(|t| t.0.exponent(v)).max().unwrap_or(0)
    }

    pub fn is_laurent(&self) -> bool {
        self.terms.iter().any(|t| t.0.has_negative())
    }

    /// True when every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|t| !t.1.is_negative())
    }

    pub fn scale(&self, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        if m.is_one() {
            return self.clone();
        }
        let mut terms: Vec<(Monomial, BigInt)> =
            self.terms.iter().map(|(x, c)| (x.mul(m), c.clone())).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { terms }
    }

    fn merge(&self, other: &MPoly, negate_other: bool) -> MPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate_other { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        MPoly { terms: out }
    }

    pub fn add_ref(&self, other: &MPoly) -> MPoly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        self.merge(other, false)
    }

    pub fn sub_ref(&self, other: &MPoly) -> MPoly {
        if other.is_zero() {
            return self.clone();
        }
        self.merge(other, true)
    }

    pub fn neg_ref(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul_ref(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        if let Some((m, c)) = other.as_term() {
            return self.mul_monomial(m).scale(c);
        }
        if let Some((m, c)) = self.as_term() {
            return other.mul_monomial(m).scale(c);
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(c) => *c += ca * cb,
                    None => {
                        acc.insert(m, ca * cb);
                    }
                }
            }
        }
        MPoly::from_map(acc)
    }

    pub fn pow(&self, e: u32) -> MPoly {
        <MPoly as super::ring::Ring>::pow(self, e)
    }

    /// Integer power allowing negative exponents on monomials.
    pub fn pow_i(&self, e: i32) -> Result<MPoly, AlgebraError> {
        if e >= 0 {
            return Ok(self.pow(e as u32));
        }
        match self.as_term() {
            Some((m, c)) if c.is_one() => Ok(MPoly::term(BigInt::one(), m.pow(e))),
            Some((m, c)) if (-c).is_one() => {
                let sign = if e % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                Ok(MPoly::term(sign, m.pow(e)))
            }
            _ => Err(AlgebraError::NegativePower(self.to_string())),
        }
    }

    /// Exact quotient `self / b`, or `NotDivisible`.
    pub fn exact_div(&self, b: &MPoly) -> Result<MPoly, AlgebraError> {
        if b.is_zero() {
            return Err(AlgebraError::DivByZero);
        }
        if self.is_zero() {
            return Ok(MPoly::zero());
        }
        if let Some((m, c)) = b.as_term() {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (x, y) in &self.terms {
                let (q, r) = y.div_rem(c);
                if !r.is_zero() {
                    return Err(AlgebraError::NotDivisible);
                }
                terms.push((x.mul(&m.inv()), q));
            }
            return Ok(MPoly { terms });
        }
        // Clear denominators so both operands are genuine polynomials with no
        // monomial content, then run ordinary division with respect to grlex.
        let (a_p, sa) = self.clear_negative();
        let (b_p, sb) = b.clear_negative();
        let mut rem = a_p;
        let mut quot: Vec<(Monomial, BigInt)> = Vec::new();
        let (lb_m, lb_c) = b_p.terms[0].clone();
        while let Some((lm, lc)) = rem.terms.first().cloned() {
            if !lb_m.divides_into(&lm) {
                return Err(AlgebraError::NotDivisible);
            }
            let (qc, r) = lc.div_rem(&lb_c);
            if !r.is_zero() {
                return Err(AlgebraError::NotDivisible);
            }
            let qm = lm.mul(&lb_m.inv());
            rem = rem.sub_ref(&b_p.mul_monomial(&qm).scale(&qc));
            quot.push((qm, qc));
        }
        let q = MPoly::from_terms(quot);
        // a = q_p·b_p with a_p = a·sa, b_p = b·sb, so a / b = q_p·sb / sa.
        Ok(q.mul_monomial(&sb.mul(&sa.inv())))
    }

    /// Returns (self·s, s) where s is the smallest monomial making every exponent nonnegative.
    fn clear_negative(&self) -> (MPoly, Monomial) {
        let vars = self.vars();
        let s = Monomial::from_pairs(
            vars.into_iter()
                .map(|v| {
                    let lo = self.min_degree_in(&v);
                    (v, -lo)
                })
                .filter(|p| p.1 != 0),
        );
        (self.mul_monomial(&s), s)
    }

    /// Evaluates at a rational point. Every variable must be assigned.
    pub fn eval(&self, point: &HashMap<Var, BigRational>) -> Result<BigRational, AlgebraError> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (v, e) in m.exps() {
                let x = point
                    .get(v)
                    .ok_or_else(|| AlgebraError::MissingValue(v.name().to_string()))?;
                if *e < 0 && x.is_zero() {
                    return Err(AlgebraError::DivByZero);
                }
                t *= num_traits::pow::Pow::pow(x, *e);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluates at a floating-point point (used by numeric oracles).
    pub fn eval_f64(&self, point: &HashMap<Var, f64>) -> Result<f64, AlgebraError> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = bigint_to_f64(c);
            for (v, e) in m.exps() {
                let x = point
                    .get(v)
                    .ok_or_else(|| AlgebraError::MissingValue(v.name().to_string()))?;
                t *= x.powi(*e);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Simultaneous substitution of polynomials for variables. Variables absent from the
    /// map are kept. Negative exponents require the image to be a unit monomial.
    pub fn substitute(&self, map: &HashMap<Var, MPoly>) -> Result<MPoly, AlgebraError> {
        let mut cache: HashMap<(Var, i32), MPoly> = HashMap::new();
        let mut out: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in &self.terms {
            let mut kept: Vec<(Var, i32)> = Vec::new();
            let mut prod = MPoly::constant(c.clone());
            for (v, e) in m.exps() {
                match map.get(v) {
                    None => kept.push((v.clone(), *e)),
                    Some(img) => {
                        let key = (v.clone(), *e);
                        let p = match cache.get(&key) {
                            Some(p) => p.clone(),
                            None => {
                                let p = img.pow_i(*e)?;
                                cache.insert(key, p.clone());
                                p
                            }
                        };
                        prod = prod.mul_ref(&p);
                    }
                }
            }
            let km = Monomial::from_pairs(kept);
            for (pm, pc) in prod.terms {
                *out.entry(pm.mul(&km)).or_insert_with(BigInt::zero) += pc;
            }
        }
        Ok(MPoly::from_map(out))
    }

    /// Renames variables (the map must be injective on the variables present).
    pub fn rename(&self, map: &HashMap<Var, Var>) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let pairs = m
                .exps()
                .iter()
                .map(|(v, e)| (map.get(v).cloned().unwrap_or_else(|| v.clone()), *e));
            (Monomial::from_pairs(pairs), c.clone())
        }))
    }
}

pub(crate) fn bigint_to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(if c.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

impl super::ring::Ring for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
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
        MPoly::constant(n)
    }
    fn is_one(&self) -> bool {
        MPoly::is_one(self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                self.$imp(rhs)
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                (&self).$imp(rhs)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.neg_ref()
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.neg_ref()
    }
}

impl From<i64> for MPoly {
    fn from(n: i64) -> MPoly {
        MPoly::constant(n)
    }
}

impl From<&Var> for MPoly {
    fn from(v: &Var) -> MPoly {
        MPoly::var(v)
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Canonical printing: terms by descending total degree, ties lexicographic.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}
