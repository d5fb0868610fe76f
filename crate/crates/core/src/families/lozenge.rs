//! The lozenge network N_m, Carlitz q-Fibonacci polynomials, and reverse plane
//! partitions of the skew shapes Y(a, b, c, d, ℓ) with entries bounded by r.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{MPoly, Monomial, TPoly, Var};
use crate::network::{Edge, QuotientNetwork};
use crate::paths::{LiftedVertex, RVertex};

use super::FamilyError;

/// Default cap on memoised row states in [`rpp_oracle`].
pub const DEFAULT_RPP_STATE_LIMIT: usize = 1_000_000;

pub fn q_var() -> Var {
    Var::new("q").expect("valid name")
}

/// q^e as an [`MPoly`].
pub fn q_pow(e: i64) -> MPoly {
    MPoly::term(BigInt::one(), Monomial::var(q_var(), e as i32))
}

/// Σ c_k q^k from dense coefficients.
pub fn q_poly(coeffs: &[BigInt]) -> MPoly {
    MPoly::from_terms(
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Monomial::var(q_var(), k as i32), c.clone())),
    )
}

/// Vertices `k0 … k(m−1)` (k = j − i); edges k → k+1 of weight 1 and offset 1,
/// and k+1 → k of weight q^k and offset 0.
pub fn build_lozenge(m: usize) -> Result<QuotientNetwork, FamilyError> {
    if m < 2 {
        return Err(FamilyError::BadParameters("lozenge network needs m >= 2".into()));
    }
    let vertices = (0..m).map(|k| format!("k{k}")).collect();
    let mut edges = Vec::new();
    for k in 0..m - 1 {
        edges.push(Edge { tail: k, head: k + 1, offset: 1, weight: MPoly::one() });
        edges.push(Edge { tail: k + 1, head: k, offset: 0, weight: q_pow(k as i64) });
    }
    Ok(QuotientNetwork::from_parts(vertices, edges, true, vec![q_var()])?)
}

/// F_0 = 0, F_1 = 1, F_n = F_(n−1) + q^(n−3)·t·F_(n−2).
pub fn carlitz(n: usize) -> TPoly {
    let mut prev = TPoly::zero();
    let mut cur = TPoly::one();
    if n == 0 {
        return prev;
    }
    for k in 2..=n {
        let next = cur.add_ref(&prev.mul_ref(&TPoly::monomial(q_pow(k as i64 - 3), 1)));
        prev = cur;
        cur = next;
    }
    cur
}

/// t^d · F(−1/t).
pub fn reflect_negated(f: &TPoly, d: i32) -> TPoly {
    let mut out = TPoly::zero();
    for (k, c) in f.iter() {
        let c = if k % 2 == 0 { c.clone() } else { c.neg_ref() };
        out = out.add_ref(&TPoly::monomial(c, d - k));
    }
    out
}

/// Parameters of the plane-partition sequence; requires a + b = c + d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LozengeQuery {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub r: usize,
}

impl LozengeQuery {
    pub fn new(a: usize, b: usize, c: usize, d: usize, r: usize) -> Result<LozengeQuery, FamilyError> {
        if a == 0 || b == 0 || c == 0 || d == 0 || r == 0 || a + b != c + d {
            return Err(FamilyError::BadParameters(format!(
                "need positive a, b, c, d, r with a + b = c + d (got {a}, {b}, {c}, {d}, {r})"
            )));
        }
        Ok(LozengeQuery { a, b, c, d, r })
    }

    /// Width of the network that carries the r level curves: a + b + 2r − 1.
    pub fn m(&self) -> usize {
        self.a + self.b + 2 * self.r - 1
    }

    fn kk(&self) -> i64 {
        (self.a + self.b + 2 * self.r) as i64 - 2
    }

    /// Row extents [μ_i, λ_i) of Y(a, b, c, d, ℓ), top to bottom, in 0-based columns.
    pub fn rows(&self, l: usize) -> Vec<(usize, usize)> {
        let nrows = l + self.d;
        (0..nrows)
            .map(|i| {
                let lo = l.saturating_sub(i);
                let hi = if i < self.b { l + self.a } else { l + self.a - (i - self.b + 1) };
                (lo, hi)
            })
            .collect()
    }

    pub fn num_cols(&self, l: usize) -> usize {
        l + self.a
    }
}

/// Cover vertex of the lattice point (i, j): base j − i, shift −i.
fn lozenge_vertex(i: i64, j: i64) -> LiftedVertex {
    LiftedVertex::new((j - i) as usize, -i)
}

/// Level curves of an extended filling, mapped into N_m, with the total q-exponent.
///
/// `filling[i]` lists the entries of row i over its columns [μ_i, λ_i).
pub fn lozenge_paths(
    q: &LozengeQuery,
    l: usize,
    filling: &[Vec<u32>],
) -> Result<(Vec<Vec<LiftedVertex>>, i64), FamilyError> {
    let rows = q.rows(l);
    if filling.len() != rows.len() || filling.iter().zip(&rows).any(|(f, &(lo, hi))| f.len() != hi - lo) {
        return Err(FamilyError::BadParameters("filling does not match the shape".into()));
    }
    let (nr, nc) = (rows.len(), q.num_cols(l));
    let ext = |i: usize, c: usize| -> u32 {
        let (lo, hi) = rows[i];
        if c < lo {
            0
        } else if c >= hi {
            q.r as u32
        } else {
            filling[i][c - lo]
        }
    };
    let m = q.m() as i64;
    let shift = l as i64 + q.kk();
    let mut paths = Vec::with_capacity(q.r);
    let mut exponent = 0i64;
    for k in 1..=q.r as u32 {
        let off = k as i64 - 1;
        let to_net = |x: i64, y: i64| (x + off - shift, -(y + off));
        let mut pts: Vec<(i64, i64)> = vec![(nr as i64, 0)];
        let (mut x, mut y) = (nr as i64, 0i64);
        for c in 0..nc {
            let h = (0..nr).filter(|&i| ext(i, c) < k).count() as i64;
            while x > h {
                x -= 1;
                pts.push((x, y));
            }
            y += 1;
            pts.push((x, y));
            let (i, j) = to_net(x, y);
            exponent += j - i;
        }
        while x > 0 {
            x -= 1;
            pts.push((x, y));
        }
        let mut path = Vec::with_capacity(pts.len());
        for (x, y) in pts {
            let (i, j) = to_net(x, y);
            if j - i < 0 || j - i >= m {
                return Err(FamilyError::BadParameters(format!("level curve {k} leaves the strip")));
            }
            path.push(lozenge_vertex(i, j));
        }
        paths.push(path);
    }
    Ok((paths, exponent))
}

/// Endpoints of the level-curve r-path at ℓ = 0 (targets shift by ℓ), plus α and β
/// with wt(P̃(π₀)) = q^(α + ℓβ) for the all-zero filling π₀.
pub fn lozenge_endpoints_and_beta(q: &LozengeQuery) -> Result<(RVertex, RVertex, i64, i64), FamilyError> {
    let kk = q.kk();
    let (a, d) = (q.a as i64, q.d as i64);
    let u = (1..=q.r as i64).map(|k| LiftedVertex::new((kk - d - 2 * k + 2) as usize, kk - d - k + 1)).collect();
    let v = (1..=q.r as i64).map(|k| LiftedVertex::new((kk - a - 2 * k + 2) as usize, kk - k + 1)).collect();
    let zero = |l: usize| -> Vec<Vec<u32>> { q.rows(l).iter().map(|&(lo, hi)| vec![0; hi - lo]).collect() };
    let (_, e1) = lozenge_paths(q, 1, &zero(1))?;
    let (_, e2) = lozenge_paths(q, 2, &zero(2))?;
    let beta = e2 - e1;
    let alpha = e1 - beta;
    Ok((RVertex::new(u).expect("distinct"), RVertex::new(v).expect("distinct"), alpha, beta))
}

/// Σ_π q^|π| over reverse plane partitions of Y(a, b, c, d, ℓ) with entries in 0..=r,
/// by a row-by-row transfer with memoised row states.
pub fn rpp_oracle(q: &LozengeQuery, l: usize) -> Result<MPoly, FamilyError> {
    rpp_oracle_limited(q, l, DEFAULT_RPP_STATE_LIMIT)
}

pub fn rpp_oracle_limited(q: &LozengeQuery, l: usize, limit: usize) -> Result<MPoly, FamilyError> {
    let rows = q.rows(l);
    let mut memo: HashMap<(usize, Vec<u32>), Vec<BigInt>> = HashMap::new();
    let coeffs = rpp_rec(&rows, q.r as u32, 0, &[], &mut memo, limit)?;
    Ok(q_poly(&coeffs))
}

fn add_shifted(acc: &mut Vec<BigInt>, p: &[BigInt], by: usize) {
    if acc.len() < p.len() + by {
        acc.resize(p.len() + by, BigInt::zero());
    }
    for (k, c) in p.iter().enumerate() {
        acc[k + by] += c;
    }
}

fn rpp_rec(
    rows: &[(usize, usize)],
    r: u32,
    i: usize,
    prev: &[u32],
    memo: &mut HashMap<(usize, Vec<u32>), Vec<BigInt>>,
    limit: usize,
) -> Result<Vec<BigInt>, FamilyError> {
    if i == rows.len() {
        return Ok(vec![BigInt::one()]);
    }
    if let Some(v) = memo.get(&(i, prev.to_vec())) {
        return Ok(v.clone());
    }
    if memo.len() >= limit {
        return Err(FamilyError::EnumerationLimit { limit });
    }
    let (lo, hi) = rows[i];
    let prev_lo = if i == 0 { 0 } else { rows[i - 1].0 };
    // lower bound per column from the row above
    let bound: Vec<u32> = (lo..hi)
        .map(|c| if i > 0 && c >= prev_lo && c - prev_lo < prev.len() { prev[c - prev_lo] } else { 0 })
        .collect();
    let mut acc = Vec::new();
    let mut row = Vec::with_capacity(hi - lo);
    let mut choices: Vec<Vec<u32>> = Vec::new();
    fn gen(bound: &[u32], r: u32, row: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let c = row.len();
        if c == bound.len() {
            out.push(row.clone());
            return;
        }
        let start = bound[c].max(row.last().copied().unwrap_or(0));
        for v in start..=r {
            row.push(v);
            gen(bound, r, row, out);
            row.pop();
        }
    }
    gen(&bound, r, &mut row, &mut choices);
    for ch in choices {
        let s: u32 = ch.iter().sum();
        let sub = rpp_rec(rows, r, i + 1, &ch, memo, limit)?;
        add_shifted(&mut acc, &sub, s as usize);
    }
    memo.insert((i, prev.to_vec()), acc.clone());
    Ok(acc)
}

/// Every filling explicitly (small shapes only), rows as in [`lozenge_paths`].
pub fn rpp_fillings(q: &LozengeQuery, l: usize, limit: usize) -> Result<Vec<Vec<Vec<u32>>>, FamilyError> {
    let rows = q.rows(l);
    let mut out = Vec::new();
    let mut cur: Vec<Vec<u32>> = Vec::new();
    fn rec(
        rows: &[(usize, usize)],
        r: u32,
        cur: &mut Vec<Vec<u32>>,
        out: &mut Vec<Vec<Vec<u32>>>,
        limit: usize,
    ) -> Result<(), FamilyError> {
        let i = cur.len();
        if i == rows.len() {
            if out.len() >= limit {
                return Err(FamilyError::EnumerationLimit { limit });
            }
            out.push(cur.clone());
            return Ok(());
        }
        let (lo, hi) = rows[i];
        let bound: Vec<u32> = (lo..hi)
            .map(|c| {
                if i == 0 {
                    return 0;
                }
                let (plo, phi) = rows[i - 1];
                if c >= plo && c < phi {
                    cur[i - 1][c - plo]
                } else {
                    0
                }
            })
            .collect();
        let mut row = Vec::new();
        fn gen(bound: &[u32], r: u32, row: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            let c = row.len();
            if c == bound.len() {
                out.push(row.clone());
                return;
            }
            let start = bound[c].max(row.last().copied().unwrap_or(0));
            for v in start..=r {
                row.push(v);
                gen(bound, r, row, out);
                row.pop();
            }
        }
        let mut choices = Vec::new();
        gen(&bound, r, &mut row, &mut choices);
        for ch in choices {
            cur.push(ch);
            rec(rows, r, cur, out, limit)?;
            cur.pop();
        }
        Ok(())
    }
    rec(&rows, q.r as u32, &mut cur, &mut out, limit)?;
    Ok(out)
}

/// Gap-constrained sum H_r = Σ q^(i_1 + … + i_r) over 0 ≤ i_1 < … < i_r ≤ m − 2 with i_k + 1 < i_(k+1).
pub fn lozenge_h(m: usize, r: usize) -> MPoly {
    fn rec(start: usize, top: usize, left: usize, sum: i64, acc: &mut HashMap<i64, i64>) {
        if left == 0 {
            *acc.entry(sum).or_insert(0) += 1;
            return;
        }
        for i in start..=top {
            rec(i + 2, top, left - 1, sum + i as i64, acc);
        }
    }
    let mut acc = HashMap::new();
    if m >= 2 {
        rec(0, m - 2, r, 0, &mut acc);
    } else if r == 0 {
        acc.insert(0, 1);
    }
    MPoly::from_terms(acc.into_iter().map(|(e, c)| (Monomial::var(q_var(), e as i32), BigInt::from(c))))
}
