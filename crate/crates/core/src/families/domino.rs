//! Domino tilings of truncated Aztec diamonds in the strip 0 ≤ y ≤ m and the
//! network on black squares that carries them.
//!
//! Squares are named by their lower-left corner (a, b); the square is black when a + b
//! is odd. Lattice-point weights are w_(p,q) = x(p mod 2n)_q for 0 < q < m, else 1.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::algebra::{MPoly, Monomial, Var};
use crate::network::{Edge, QuotientNetwork};
use crate::paths::{LiftedVertex, RVertex};

use super::FamilyError;

/// Default cap on enumerated tilings.
pub const DEFAULT_TILING_LIMIT: usize = 2_000_000;

pub type Cell = (i64, i64);

/// A tiling as a list of dominoes, each a pair of adjacent cells.
pub type Tiling = Vec<(Cell, Cell)>;

pub fn is_black(c: Cell) -> bool {
    (c.0 + c.1).rem_euclid(2) == 1
}

pub fn domino_var(n: usize, p: i64, q: i64) -> Var {
    Var::new(&format!("x{}_{}", p.rem_euclid(2 * n as i64), q)).expect("valid name")
}

pub fn domino_vars(n: usize, m: usize) -> Vec<Var> {
    let mut out = Vec::new();
    for p in 0..2 * n as i64 {
        for q in 1..m as i64 {
            out.push(domino_var(n, p, q));
        }
    }
    out
}

/// Exponent map of a Laurent monomial in the lattice weights.
type WeightExps = BTreeMap<(i64, i64), i32>;

fn add_w(acc: &mut WeightExps, n: usize, m: usize, p: i64, q: i64, e: i32) {
    if q <= 0 || q >= m as i64 {
        return;
    }
    let key = (p.rem_euclid(2 * n as i64), q);
    let v = acc.entry(key).or_insert(0);
    *v += e;
    if *v == 0 {
        acc.remove(&key);
    }
}

fn exps_to_mpoly(n: usize, e: &WeightExps) -> MPoly {
    let mono = Monomial::from_pairs(e.iter().map(|(&(p, q), &x)| (domino_var(n, p, q), x)));
    MPoly::term(BigInt::from(1), mono)
}

/// Weight of the network edge from `tail` into the black square `head`, as exponents.
fn edge_exps(n: usize, m: usize, tail: Cell, head: Cell) -> Option<WeightExps> {
    let (i, j) = head;
    let mut e = WeightExps::new();
    match (head.0 - tail.0, head.1 - tail.1) {
        (1, 1) => {
            add_w(&mut e, n, m, i + 1, j + 1, 1);
            add_w(&mut e, n, m, i, j, -1);
        }
        (2, 0) => {
            add_w(&mut e, n, m, i + 1, j + 1, 1);
            add_w(&mut e, n, m, i + 1, j, 1);
            add_w(&mut e, n, m, i, j, -1);
            add_w(&mut e, n, m, i, j + 1, -1);
        }
        (1, -1) => {
            add_w(&mut e, n, m, i + 1, j, 1);
            add_w(&mut e, n, m, i, j + 1, -1);
        }
        _ => return None,
    }
    Some(e)
}

/// The network on black squares of the strip, period (2n, 0); vertex `s{a}_{b}` is the
/// black square with lower-left corner (a, b), 0 ≤ a < 2n.
pub fn build_domino(n: usize, m: usize) -> Result<QuotientNetwork, FamilyError> {
    if n == 0 || m < 2 {
        return Err(FamilyError::BadParameters("domino network needs n >= 1 and m >= 2".into()));
    }
    let base = domino_bases(n, m);
    let index: HashMap<Cell, usize> = base.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let vertices = base.iter().map(|&(a, b)| format!("s{a}_{b}")).collect();
    let period = 2 * n as i64;
    let mut edges = Vec::new();
    for &head in &base {
        for (da, db) in [(1, 1), (2, 0), (1, -1)] {
            let tail = (head.0 - da, head.1 - db);
            if tail.1 < 0 || tail.1 >= m as i64 {
                continue;
            }
            let tb = (tail.0.rem_euclid(period), tail.1);
            let weight = exps_to_mpoly(n, &edge_exps(n, m, tail, head).expect("edge shape"));
            edges.push(Edge {
                tail: index[&tb],
                head: index[&head],
                offset: -tail.0.div_euclid(period),
                weight,
            });
        }
    }
    Ok(QuotientNetwork::from_parts(vertices, edges, true, domino_vars(n, m))?)
}

/// Black base squares in vertex order (by row, then column).
pub fn domino_bases(n: usize, m: usize) -> Vec<Cell> {
    let mut out = Vec::new();
    for b in 0..m as i64 {
        for a in 0..2 * n as i64 {
            if is_black((a, b)) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Cover vertex of a black square of the strip.
pub fn domino_vertex(n: usize, m: usize, c: Cell) -> Option<LiftedVertex> {
    if !is_black(c) || c.1 < 0 || c.1 >= m as i64 {
        return None;
    }
    let period = 2 * n as i64;
    let base = (c.0.rem_euclid(period), c.1);
    let k = domino_bases(n, m).iter().position(|&x| x == base)?;
    Some(LiftedVertex::new(k, c.0.div_euclid(period)))
}

/// Cells of A_m(i, j, ℓ): squares whose centre lies within L¹-distance ℓ of (i, j).
pub fn aztec_region(m: usize, i: i64, j: i64, l: i64) -> Vec<Cell> {
    let mut out = Vec::new();
    for b in 0..m as i64 {
        for a in (i - l - 1)..=(i + l) {
            // |a + 1/2 − i| + |b + 1/2 − j| ≤ ℓ, doubled
            if (2 * a + 1 - 2 * i).abs() + (2 * b + 1 - 2 * j).abs() <= 2 * l {
                out.push((a, b));
            }
        }
    }
    out.sort();
    out
}

/// All domino tilings of a region, by covering the first free cell (column-major order).
pub fn domino_tilings(region: &[Cell], limit: usize) -> Result<Vec<Tiling>, FamilyError> {
    let mut cells = region.to_vec();
    cells.sort();
    let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut used = vec![false; cells.len()];
    let mut cur: Tiling = Vec::new();
    let mut out = Vec::new();
    fn rec(
        cells: &[Cell],
        index: &HashMap<Cell, usize>,
        used: &mut [bool],
        from: usize,
        cur: &mut Tiling,
        out: &mut Vec<Tiling>,
        limit: usize,
    ) -> Result<(), FamilyError> {
        let Some(k) = (from..cells.len()).find(|&k| !used[k]) else {
            if out.len() >= limit {
                return Err(FamilyError::EnumerationLimit { limit });
            }
            out.push(cur.clone());
            return Ok(());
        };
        let c = cells[k];
        used[k] = true;
        for nb in [(c.0, c.1 + 1), (c.0 + 1, c.1)] {
            if let Some(&k2) = index.get(&nb) {
                if !used[k2] {
                    used[k2] = true;
                    cur.push((c, nb));
                    rec(cells, index, used, k + 1, cur, out, limit)?;
                    cur.pop();
                    used[k2] = false;
                }
            }
        }
        used[k] = false;
        Ok(())
    }
    rec(&cells, &index, &mut used, 0, &mut cur, &mut out, limit)?;
    Ok(out)
}

/// Exponents of wt(T): interior lattice points get w^(#adjacent dominoes − 3).
fn tiling_exps(n: usize, m: usize, region: &[Cell], t: &Tiling) -> WeightExps {
    tiling_exps_impl(n, m, region, t, false)
}

fn tiling_exps_impl(n: usize, m: usize, region: &[Cell], t: &Tiling, boundary: bool) -> WeightExps {
    let mut owner: HashMap<Cell, usize> = HashMap::with_capacity(region.len());
    for (k, &(x, y)) in t.iter().enumerate() {
        owner.insert(x, k);
        owner.insert(y, k);
    }
    let mut e = WeightExps::new();
    let mut points: Vec<(i64, i64)> = region
        .iter()
        .flat_map(|&(a, b)| [(a, b), (a + 1, b), (a, b + 1), (a + 1, b + 1)])
        .collect();
    points.sort();
    points.dedup();
    for (p, q) in points {
        let around = [(p - 1, q - 1), (p, q - 1), (p - 1, q), (p, q)];
        let mut ids: Vec<usize> = around.iter().filter_map(|c| owner.get(c).copied()).collect();
        if !boundary && ids.len() < 4 {
            continue;
        }
        ids.sort_unstable();
        ids.dedup();
        add_w(&mut e, n, m, p, q, ids.len() as i32 - 3);
    }
    e
}

/// wt(T) as a Laurent monomial.
pub fn tiling_weight(n: usize, m: usize, region: &[Cell], t: &Tiling) -> MPoly {
    exps_to_mpoly(n, &tiling_exps(n, m, region, t))
}

/// wt(T) with boundary lattice points kept, each weighted by w^(#adjacent dominoes − 3).
///
/// With this weight the ratio to the path weight of the bijection is the same for every
/// tiling of a region; dropping boundary points breaks that at the region's edge.
pub fn tiling_weight_with_boundary(n: usize, m: usize, region: &[Cell], t: &Tiling) -> MPoly {
    exps_to_mpoly(n, &tiling_exps_impl(n, m, region, t, true))
}

/// Z_m(i, j, ℓ): the weighted tiling sum of A_m(i, j, ℓ), zero if untileable.
pub fn domino_z(n: usize, m: usize, i: i64, j: i64, l: i64) -> Result<MPoly, FamilyError> {
    let region = aztec_region(m, i, j, l);
    let tilings = domino_tilings(&region, DEFAULT_TILING_LIMIT)?;
    let mut acc: HashMap<WeightExps, i64> = HashMap::new();
    for t in &tilings {
        *acc.entry(tiling_exps(n, m, &region, t)).or_insert(0) += 1;
    }
    Ok(MPoly::from_terms(acc.into_iter().map(|(e, c)| {
        let mono = Monomial::from_pairs(e.iter().map(|(&(p, q), &x)| (domino_var(n, p, q), x)));
        (mono, BigInt::from(c))
    })))
}

/// f(ℓ) = Z_m(i + ℓ, j, ℓn + ℓ0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DominoQuery {
    pub n: usize,
    pub m: usize,
    pub i: i64,
    pub j: i64,
    pub l0: i64,
}

impl DominoQuery {
    pub fn new(n: usize, m: usize, i: i64, j: i64, l0: i64) -> Result<DominoQuery, FamilyError> {
        if n == 0 || m < 2 || j < 0 || j > m as i64 {
            return Err(FamilyError::BadParameters(format!("bad domino query n={n} m={m} j={j}")));
        }
        Ok(DominoQuery { n, m, i, j, l0 })
    }

    /// Arguments (i, j, ℓ) of Z_m for the sequence index ℓ.
    pub fn region_args(&self, l: i64) -> (i64, i64, i64) {
        (self.i + l, self.j, l * self.n as i64 + self.l0)
    }
}

/// f(ℓ) for a [`DominoQuery`], by enumeration.
pub fn domino_oracle(q: &DominoQuery, l: i64) -> Result<MPoly, FamilyError> {
    let (i, j, ll) = q.region_args(l);
    domino_z(q.n, q.m, i, j, ll)
}

/// r = min(m − j, ℓ) and the endpoints ũ_k = (i − ℓ + k − 1, j + k), ṽ_k = (i + ℓ − k − 1, j + k).
///
/// Requires i + j − ℓ even.
pub fn domino_endpoints(n: usize, m: usize, i: i64, j: i64, l: i64) -> Result<(RVertex, RVertex), FamilyError> {
    if (i + j - l).rem_euclid(2) != 0 {
        return Err(FamilyError::BadParameters("i + j − ℓ must be even".into()));
    }
    let r = (m as i64 - j).min(l).max(0);
    let mk = |a: i64, b: i64| {
        domino_vertex(n, m, (a, b)).ok_or_else(|| FamilyError::BadParameters(format!("({a}, {b}) is not a black square of the strip")))
    };
    let u = (0..r).map(|k| mk(i - l + k - 1, j + k)).collect::<Result<Vec<_>, _>>()?;
    let v = (0..r).map(|k| mk(i + l - k - 1, j + k)).collect::<Result<Vec<_>, _>>()?;
    Ok((RVertex::new(u).expect("distinct"), RVertex::new(v).expect("distinct")))
}

/// The local rule: for black S whose right neighbour S′ is in the region, follow the
/// domino of S′ to its black square S″ and add S → S″ unless S″ = S.
pub fn tiling_to_edges(region: &[Cell], t: &Tiling) -> Vec<(Cell, Cell)> {
    let mut partner: HashMap<Cell, Cell> = HashMap::with_capacity(region.len());
    for &(x, y) in t {
        partner.insert(x, y);
        partner.insert(y, x);
    }
    let mut out = Vec::new();
    for &w in region {
        if is_black(w) {
            continue;
        }
        let s = (w.0 - 1, w.1);
        let s2 = partner[&w];
        if s2 != s {
            out.push((s, s2));
        }
    }
    out.sort();
    out
}

/// Chains the local-rule edges into paths, each from a square with no incoming edge.
pub fn edges_to_paths(edges: &[(Cell, Cell)]) -> Option<Vec<Vec<Cell>>> {
    let mut next: HashMap<Cell, Cell> = HashMap::new();
    let mut heads: HashMap<Cell, usize> = HashMap::new();
    for &(a, b) in edges {
        if next.insert(a, b).is_some() {
            return None;
        }
        *heads.entry(b).or_insert(0) += 1;
    }
    if heads.values().any(|&k| k > 1) {
        return None;
    }
    let mut starts: Vec<Cell> = next.keys().copied().filter(|c| !heads.contains_key(c)).collect();
    starts.sort_by_key(|c| (c.1, c.0));
    let mut seen = 0;
    let mut paths = Vec::new();
    for s in starts {
        let mut p = vec![s];
        let mut cur = s;
        while let Some(&nx) = next.get(&cur) {
            p.push(nx);
            cur = nx;
            seen += 1;
        }
        paths.push(p);
    }
    (seen == edges.len()).then_some(paths)
}

/// Product of network edge weights along explicit cell paths.
pub fn cell_paths_weight(n: usize, m: usize, paths: &[Vec<Cell>]) -> Option<MPoly> {
    let mut e = WeightExps::new();
    for p in paths {
        for w in p.windows(2) {
            for ((pp, qq), x) in edge_exps(n, m, w[0], w[1])? {
                add_w(&mut e, n, m, pp, qq, x);
            }
        }
    }
    Some(exps_to_mpoly(n, &e))
}
