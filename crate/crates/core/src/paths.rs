//! Weighted path counts in the universal cover, LGV matrices and sequences, and a
//! brute-force enumeration of non-intersecting path tuples.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, MPoly, Matrix, Ring, Var};
use crate::network::{localize, NetworkError, QuotientNetwork};

/// Default cap on the number of shifts a DP window may span.
pub const DEFAULT_MAX_SHIFTS: i64 = 64;
/// Default cap on explicitly enumerated paths per (source, target) pair.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("state window spans {span} shifts, cap is {cap}")]
    WindowOverflow { span: i64, cap: i64 },
    #[error("more than {limit} paths to enumerate")]
    EnumerationLimit { limit: usize },
    #[error("bad lifted vertex {0:?}")]
    BadVertex(String),
    #[error("endpoint tuples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("repeated vertex in tuple: {0}")]
    Repeated(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A vertex of the universal cover: the lift of `base` translated by `shift` periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LiftedVertex {
    pub base: usize,
    pub shift: i64,
}

impl LiftedVertex {
    pub fn new(base: usize, shift: i64) -> LiftedVertex {
        LiftedVertex { base, shift }
    }

    pub fn shifted(self, by: i64) -> LiftedVertex {
        LiftedVertex { base: self.base, shift: self.shift + by }
    }

    /// Parses `label@shift` (shift defaults to 0).
    pub fn parse(net: &QuotientNetwork, s: &str) -> Result<LiftedVertex, PathError> {
        let s = s.trim();
        let (label, shift) = match s.rsplit_once('@') {
            Some((l, k)) => (l, k.trim().parse::<i64>().map_err(|_| PathError::BadVertex(s.to_string()))?),
            None => (s, 0),
        };
        let base = net.vertex_index(label.trim()).ok_or_else(|| PathError::BadVertex(s.to_string()))?;
        Ok(LiftedVertex { base, shift })
    }

    pub fn display<'a>(&self, net: &'a QuotientNetwork) -> String {
        format!("{}@{}", net.vertex_label(self.base), self.shift)
    }
}

/// An ordered tuple of distinct lifted vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RVertex(Vec<LiftedVertex>);

impl RVertex {
    pub fn new(vs: Vec<LiftedVertex>) -> Result<RVertex, PathError> {
        for (i, a) in vs.iter().enumerate() {
            if vs[..i].contains(a) {
                return Err(PathError::Repeated(format!("{}@{}", a.base, a.shift)));
            }
        }
        Ok(RVertex(vs))
    }

    /// Comma-separated `label@shift` items.
    pub fn parse(net: &QuotientNetwork, s: &str) -> Result<RVertex, PathError> {
        let vs = s
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| LiftedVertex::parse(net, x))
            .collect::<Result<Vec<_>, _>>()?;
        RVertex::new(vs)
    }

    pub fn vertices(&self) -> &[LiftedVertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every coordinate translated by `by` periods.
    pub fn shifted(&self, by: i64) -> RVertex {
        RVertex(self.0.iter().map(|v| v.shifted(by)).collect())
    }
}

/// f(0), …, f(L) together with a description of where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceF {
    pub values: Vec<MPoly>,
    pub meta: String,
}

impl SequenceF {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl fmt::Display for SequenceF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// The cover as seen by the DP: per-vertex shift windows between a source and a height bound.
struct Cover<'a> {
    net: &'a QuotientNetwork,
    k: i64,
    pi: Vec<i64>,
    out: Vec<Vec<usize>>,
}

impl<'a> Cover<'a> {
    fn new(net: &'a QuotientNetwork) -> Cover<'a> {
        let (k, pi) = net.cover_potential();
        let mut out = vec![Vec::new(); net.num_vertices()];
        for (i, e) in net.edges().iter().enumerate() {
            out[e.tail].push(i);
        }
        Cover { net, k, pi, out }
    }

    /// Height K·shift − π(base); strictly increasing along cover edges.
    fn height(&self, v: LiftedVertex) -> i64 {
        v.shift * self.k - self.pi[v.base]
    }

    /// Shift range of vertex `w` inside heights [lo, hi].
    fn range(&self, w: usize, lo: i64, hi: i64) -> (i64, i64) {
        let a = (lo + self.pi[w]).div_euclid(self.k) + i64::from((lo + self.pi[w]).rem_euclid(self.k) != 0);
        let b = (hi + self.pi[w]).div_euclid(self.k);
        (a, b)
    }

    fn check_span(&self, lo: i64, hi: i64, cap: i64) -> Result<(), PathError> {
        let span = (hi - lo).div_euclid(self.k) + 1;
        if span > cap {
            return Err(PathError::WindowOverflow { span, cap });
        }
        Ok(())
    }

    /// Weighted counts from `from` to every target, one sweep in height order.
    fn counts<R: Ring>(
        &self,
        weights: &[R],
        from: LiftedVertex,
        targets: &[LiftedVertex],
        cap: i64,
    ) -> Result<Vec<R>, PathError> {
        let lo = self.height(from);
        let hi = match targets.iter().map(|&t| self.height(t)).max() {
            Some(h) if h >= lo => h,
            _ => return Ok(targets.iter().map(|&t| if t == from { R::one() } else { R::zero() }).collect()),
        };
        self.check_span(lo, hi, cap)?;
        let n = self.net.num_vertices();
        let ranges: Vec<(i64, i64)> = (0..n).map(|w| self.range(w, lo, hi)).collect();
        let mut states: Vec<(i64, usize, i64)> = Vec::new();
        for (w, &(a, b)) in ranges.iter().enumerate() {
            for s in a..=b {
                states.push((s * self.k - self.pi[w], w, s));
            }
        }
        states.sort_unstable();
        let slot = |w: usize, s: i64| -> Option<usize> {
            let (a, b) = ranges[w];
            (s >= a && s <= b).then(|| (s - a) as usize)
        };
        let mut val: Vec<Vec<R>> = ranges
            .iter()
            .map(|&(a, b)| vec![R::zero(); if b >= a { (b - a + 1) as usize } else { 0 }])
            .collect();
        let edges = self.net.edges();
        if let Some(i) = slot(from.base, from.shift) {
            val[from.base][i] = R::one();
        }
        for &(_, w, s) in &states {
            let i = slot(w, s).expect("state in range");
            if val[w][i].is_zero() {
                continue;
            }
            let cur = val[w][i].clone();
            for &ei in &self.out[w] {
                let e = &edges[ei];
                if let Some(j) = slot(e.head, s + e.offset) {
                    let add = cur.mul(&weights[ei]);
                    val[e.head][j].add_assign(&add);
                }
            }
        }
        Ok(targets
            .iter()
            .map(|t| match slot(t.base, t.shift) {
                Some(i) if self.height(*t) >= lo => val[t.base][i].clone(),
                _ => R::zero(),
            })
            .collect())
    }
}

fn mpoly_weights(net: &QuotientNetwork) -> Vec<MPoly> {
    net.edges().iter().map(|e| e.weight.clone()).collect()
}

fn rational_weights(net: &QuotientNetwork, point: &HashMap<Var, BigRational>) -> Result<Vec<BigRational>, PathError> {
    net.edges().iter().map(|e| e.weight.eval(point).map_err(PathError::from)).collect()
}

/// Ñ(from, to): weighted count of cover paths, with the default window cap.
pub fn count_paths(net: &QuotientNetwork, from: LiftedVertex, to: LiftedVertex) -> Result<MPoly, PathError> {
    count_paths_capped(net, from, to, DEFAULT_MAX_SHIFTS)
}

pub fn count_paths_capped(
    net: &QuotientNetwork,
    from: LiftedVertex,
    to: LiftedVertex,
    cap: i64,
) -> Result<MPoly, PathError> {
    let cover = Cover::new(net);
    Ok(cover.counts(&mpoly_weights(net), from, &[to], cap)?.pop().expect("one target"))
}

/// Ñ(from, to + ℓ) for ℓ = 0..=lmax from a single DP sweep.
pub fn count_paths_sequence(
    net: &QuotientNetwork,
    from: LiftedVertex,
    to: LiftedVertex,
    lmax: usize,
) -> Result<SequenceF, PathError> {
    let cover = Cover::new(net);
    let targets: Vec<LiftedVertex> = (0..=lmax as i64).map(|l| to.shifted(l)).collect();
    let values = cover.counts(&mpoly_weights(net), from, &targets, DEFAULT_MAX_SHIFTS)?;
    Ok(SequenceF {
        values,
        meta: format!("paths {} -> {} + l, l = 0..{lmax}", from.display(net), to.display(net)),
    })
}

/// Ñ via the local form: A^(ℓ) = S^ℓ (Id − C)⁻¹ on a lift with offsets in {0, 1}.
///
/// Returns the values for targets `to + ℓ`, ℓ = 0..=lmax.
pub fn count_paths_local_series(
    net: &QuotientNetwork,
    from: LiftedVertex,
    to: LiftedVertex,
    lmax: usize,
) -> Result<Vec<MPoly>, PathError> {
    let (_, relabel, form) = localize(net)?;
    // (v, k) in the original lift is (v, k − z(v)) in the local one.
    let a = from.shift - relabel.z[from.base];
    let b0 = to.shift - relabel.z[to.base];
    let mut out = Vec::with_capacity(lmax + 1);
    let mut power = Matrix::<MPoly>::identity(net.num_vertices());
    let mut have = 0i64;
    for l in 0..=lmax as i64 {
        let gap = b0 + l - a;
        if gap < 0 {
            out.push(MPoly::zero());
            continue;
        }
        while have < gap {
            power = power.mul(&form.s);
            have += 1;
        }
        let m = power.mul(&form.c_inv);
        out.push(m.get(from.base, to.base).clone());
    }
    Ok(out)
}

fn check_tuples(ubf: &RVertex, vbf: &RVertex) -> Result<(), PathError> {
    if ubf.len() != vbf.len() {
        return Err(PathError::LengthMismatch(ubf.len(), vbf.len()));
    }
    Ok(())
}

/// The r×r matrix a_ij = Ñ(ũ_i, ṽ_j).
pub fn lgv_matrix(net: &QuotientNetwork, ubf: &RVertex, vbf: &RVertex) -> Result<Matrix<MPoly>, PathError> {
    check_tuples(ubf, vbf)?;
    let cover = Cover::new(net);
    let w = mpoly_weights(net);
    let rows = ubf
        .vertices()
        .iter()
        .map(|&u| cover.counts(&w, u, vbf.vertices(), DEFAULT_MAX_SHIFTS))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(rows))
}

/// Rows of all LGV matrices for ℓ = 0..=lmax, indexed [ℓ][i][j], over any ring.
fn lgv_entries<R: Ring + Send + Sync>(
    net: &QuotientNetwork,
    weights: &[R],
    ubf: &RVertex,
    vbf: &RVertex,
    lmax: usize,
) -> Result<Vec<Matrix<R>>, PathError> {
    check_tuples(ubf, vbf)?;
    let cover = Cover::new(net);
    let r = ubf.len();
    let targets: Vec<LiftedVertex> = (0..=lmax as i64)
        .flat_map(|l| vbf.vertices().iter().map(move |v| v.shifted(l)))
        .collect();
    let per_source = ubf
        .vertices()
        .par_iter()
        .map(|&u| cover.counts(weights, u, &targets, DEFAULT_MAX_SHIFTS))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((0..=lmax)
        .map(|l| Matrix::from_fn(r, |i, j| per_source[i][l * r + j].clone()))
        .collect())
}

/// f(ℓ) = det A(ũ𝐛, ṽ𝐛 + ℓ) for ℓ = 0..=lmax.
pub fn lgv_sequence(net: &QuotientNetwork, ubf: &RVertex, vbf: &RVertex, lmax: usize) -> Result<SequenceF, PathError> {
    let mats = lgv_entries(net, &mpoly_weights(net), ubf, vbf, lmax)?;
    let values: Vec<MPoly> = mats.par_iter().map(|m| m.det()).collect();
    let show = |t: &RVertex| t.vertices().iter().map(|v| v.display(net)).collect::<Vec<_>>().join(",");
    Ok(SequenceF {
        values,
        meta: format!("lgv {} -> {} + l, l = 0..{lmax}", show(ubf), show(vbf)),
    })
}

/// The LGV sequence with every weight evaluated at a rational point.
pub fn lgv_sequence_at(
    net: &QuotientNetwork,
    ubf: &RVertex,
    vbf: &RVertex,
    lmax: usize,
    point: &HashMap<Var, BigRational>,
) -> Result<Vec<BigRational>, PathError> {
    let w = rational_weights(net, point)?;
    let mats = lgv_entries(net, &w, ubf, vbf, lmax)?;
    Ok(mats.par_iter().map(|m| m.det()).collect())
}

/// One explicit cover path: its states in order and its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverPath {
    pub states: Vec<LiftedVertex>,
    pub weight: MPoly,
}

/// All cover paths from `from` to `to`, depth-first over states that can still reach `to`.
pub fn enumerate_paths(
    net: &QuotientNetwork,
    from: LiftedVertex,
    to: LiftedVertex,
    limit: usize,
) -> Result<Vec<CoverPath>, PathError> {
    let cover = Cover::new(net);
    let (lo, hi) = (cover.height(from), cover.height(to));
    if hi < lo {
        return Ok(Vec::new());
    }
    cover.check_span(lo, hi, DEFAULT_MAX_SHIFTS)?;
    // states that reach `to`, by a backward sweep in height order
    let n = net.num_vertices();
    let ranges: Vec<(i64, i64)> = (0..n).map(|w| cover.range(w, lo, hi)).collect();
    let mut states: Vec<(i64, usize, i64)> = Vec::new();
    for (w, &(a, b)) in ranges.iter().enumerate() {
        for s in a..=b {
            states.push((s * cover.k - cover.pi[w], w, s));
        }
    }
    states.sort_unstable();
    let mut reach: HashMap<LiftedVertex, bool> = HashMap::new();
    for &(_, w, s) in states.iter().rev() {
        let v = LiftedVertex::new(w, s);
        let ok = v == to
            || cover.out[w].iter().any(|&ei| {
                let e = &net.edges()[ei];
                reach.get(&LiftedVertex::new(e.head, s + e.offset)).copied().unwrap_or(false)
            });
        reach.insert(v, ok);
    }
    let mut out = Vec::new();
    if !reach.get(&from).copied().unwrap_or(false) {
        return Ok(out);
    }
    let mut stack = vec![from];
    fn dfs(
        net: &QuotientNetwork,
        cover: &Cover<'_>,
        reach: &HashMap<LiftedVertex, bool>,
        to: LiftedVertex,
        stack: &mut Vec<LiftedVertex>,
        w: MPoly,
        out: &mut Vec<CoverPath>,
        limit: usize,
    ) -> Result<(), PathError> {
        let v = *stack.last().expect("nonempty");
        if v == to {
            if out.len() >= limit {
                return Err(PathError::EnumerationLimit { limit });
            }
            out.push(CoverPath { states: stack.clone(), weight: w.clone() });
        }
        for &ei in &cover.out[v.base] {
            let e = &net.edges()[ei];
            let nx = LiftedVertex::new(e.head, v.shift + e.offset);
            if reach.get(&nx).copied().unwrap_or(false) {
                stack.push(nx);
                dfs(net, cover, reach, to, stack, w.mul_ref(&e.weight), out, limit)?;
                stack.pop();
            }
        }
        Ok(())
    }
    dfs(net, &cover, &reach, to, &mut stack, MPoly::one(), &mut out, limit)?;
    Ok(out)
}

/// Σ_σ sgn(σ) Σ wt over r-tuples of pairwise vertex-disjoint paths ũ_i → ṽ_σ(i).
pub fn enumerate_r_paths(net: &QuotientNetwork, ubf: &RVertex, vbf: &RVertex) -> Result<MPoly, PathError> {
    enumerate_r_paths_limited(net, ubf, vbf, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_r_paths_limited(
    net: &QuotientNetwork,
    ubf: &RVertex,
    vbf: &RVertex,
    limit: usize,
) -> Result<MPoly, PathError> {
    check_tuples(ubf, vbf)?;
    let r = ubf.len();
    let mut table: Vec<Vec<Vec<CoverPath>>> = Vec::with_capacity(r);
    for &u in ubf.vertices() {
        let row = vbf
            .vertices()
            .iter()
            .map(|&v| enumerate_paths(net, u, v, limit))
            .collect::<Result<Vec<_>, _>>()?;
        table.push(row);
    }
    let mut total = MPoly::zero();
    for (perm, sign) in permutations(r) {
        let lists: Vec<&Vec<CoverPath>> = (0..r).map(|i| &table[i][perm[i]]).collect();
        let mut used: Vec<LiftedVertex> = Vec::new();
        let mut acc = MPoly::zero();
        disjoint_tuples(&lists, 0, &mut used, &MPoly::one(), &mut acc);
        total = if sign > 0 { total.add_ref(&acc) } else { total.sub_ref(&acc) };
    }
    Ok(total)
}

fn disjoint_tuples(lists: &[&Vec<CoverPath>], i: usize, used: &mut Vec<LiftedVertex>, w: &MPoly, acc: &mut MPoly) {
    if i == lists.len() {
        *acc = acc.add_ref(w);
        return;
    }
    for p in lists[i] {
        if p.states.iter().any(|s| used.contains(s)) {
            continue;
        }
        let before = used.len();
        used.extend_from_slice(&p.states);
        disjoint_tuples(lists, i + 1, used, &w.mul_ref(&p.weight), acc);
        used.truncate(before);
    }
}

/// All permutations of 0..r with their signs, in lexicographic order.
pub fn permutations(r: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(r);
    let mut used = vec![false; r];
    fn rec(r: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i32)>) {
        if cur.len() == r {
            let inversions = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).filter(|&(i, j)| cur[i] > cur[j]).count();
            out.push((cur.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for x in 0..r {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(r, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    rec(r, &mut cur, &mut used, &mut out);
    out
}
