//! Dense univariate polynomials over ℚ, used after numeric substitution.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients `c[0] + c[1]·t + …`, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QPoly {
    c: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> QPoly {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero() -> QPoly {
        QPoly { c: Vec::new() }
    }

    pub fn one() -> QPoly {
        QPoly { c: vec![BigRational::one()] }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        QPoly::new(self.c.iter().map(|x| x / &l).collect())
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
                        + o.c.get(i).cloned().unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> QPoly {
        QPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    /// Euclidean division: (quotient, remainder).
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        let ld = d.lead();
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] / &ld;
            if !coef.is_zero() {
                for (j, dj) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * dj;
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Number of sign changes in the Sturm sequence evaluated at `x` (None = +∞).
    fn sign_changes(seq: &[QPoly], x: Option<&BigRational>) -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .map(|p| {
                let v = match x {
                    Some(x) => p.eval(x),
                    None => p.lead(),
                };
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .filter(|s| *s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Sturm sequence p, p', −rem(p, p'), …
    pub fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq.retain(|p| !p.is_zero());
        seq
    }

    /// Distinct real roots in the half-open interval (a, +∞), `a` not a root.
    pub fn count_roots_above(&self, a: &BigRational) -> usize {
        let seq = self.sturm_sequence();
        QPoly::sign_changes(&seq, Some(a)) - QPoly::sign_changes(&seq, None)
    }

    /// Strips factors of t; returns the reduced polynomial and the power removed.
    pub fn strip_t(&self) -> (QPoly, usize) {
        let k = self.c.iter().take_while(|x| x.is_zero()).count();
        (QPoly { c: self.c[k..].to_vec() }, k)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let sep = match (first, neg) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            f.write_str(sep)?;
            let t = match k {
                0 => String::new(),
                1 => "t".to_string(),
                k => format!("t^{k}"),
            };
            if t.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&t)?;
            } else if a.is_integer() {
                write!(f, "{a}*{t}")?;
            } else {
                write!(f, "({a})*{t}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
