//! Simple cycles, cycle families and the characteristic polynomial Q_N(t).
//!
//! Q_N is normalised to be monic: Q_N(t) = Σ_C (−1)^r · t^(d − wind C) · wt(C) over all
//! families C of r pairwise vertex-disjoint simple cycles, d being the largest winding.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{Matrix, MPoly, TPoly};
use crate::network::{transfer_matrix, QuotientNetwork};

/// Default bound on the number of simple cycles before family enumeration gives up.
pub const DEFAULT_CYCLE_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharpolyError {
    #[error("{what} count exceeds limit {limit}")]
    SizeLimit { what: &'static str, limit: usize },
    #[error("planar network has a family with winding {winding} but {r} cycles")]
    PlanarFamily { r: usize, winding: i64 },
}

/// A simple directed cycle of the quotient, starting at its smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleCycle {
    pub vertices: Vec<usize>,
    /// Edge indices into [`QuotientNetwork::edges`], `edges[k]` leaves `vertices[k]`.
    pub edges: Vec<usize>,
    pub winding: i64,
    pub weight: MPoly,
}

/// Pairwise vertex-disjoint simple cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleFamily {
    /// Indices into the [`simple_cycles`] list.
    pub cycles: Vec<usize>,
    pub r: usize,
    pub winding: i64,
    pub weight: MPoly,
}

/// All simple cycles, sorted by (vertex sequence, edge sequence).
///
/// Vertex cycles come from Johnson's circuit search on the underlying simple digraph;
/// each is then expanded over the choices of parallel edges (distinct offsets).
pub fn simple_cycles(net: &QuotientNetwork) -> Vec<SimpleCycle> {
    let n = net.num_vertices();
    let adj = net.adjacency();
    let mut vertex_cycles: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        johnson_from(s, &adj, &mut vertex_cycles);
    }
    // edges_between[u][v] lists edge indices u → v
    let mut between: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; n];
    for (k, e) in net.edges().iter().enumerate() {
        between[e.tail][e.head].push(k);
    }
    let mut out = Vec::new();
    for vc in vertex_cycles {
        let len = vc.len();
        let choices: Vec<&Vec<usize>> = (0..len).map(|i| &between[vc[i]][vc[(i + 1) % len]]).collect();
        let mut idx = vec![0usize; len];
        loop {
            let edges: Vec<usize> = (0..len).map(|i| choices[i][idx[i]]).collect();
            let winding = edges.iter().map(|&k| net.edges()[k].offset).sum();
            let weight = edges
                .iter()
                .fold(MPoly::one(), |acc, &k| acc.mul_ref(&net.edges()[k].weight));
            out.push(SimpleCycle { vertices: vc.clone(), edges, winding, weight });
            // odometer over parallel-edge choices
            let mut pos = 0;
            loop {
                if pos == len {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == len {
                break;
            }
        }
    }
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices).then_with(|| a.edges.cmp(&b.edges)));
    out
}

/// Circuits through `s` using only vertices ≥ s (Johnson's blocked-set search).
fn johnson_from(s: usize, adj: &[Vec<usize>], out: &mut Vec<Vec<usize>>) {
    let n = adj.len();
    let mut blocked = vec![false; n];
    let mut bsets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut stack = vec![s];

    fn unblock(u: usize, blocked: &mut [bool], bsets: &mut [BTreeSet<usize>]) {
        blocked[u] = false;
        let ws: Vec<usize> = std::mem::take(&mut bsets[u]).into_iter().collect();
        for w in ws {
            if blocked[w] {
                unblock(w, blocked, bsets);
            }
        }
    }

    fn circuit(
        v: usize,
        s: usize,
        adj: &[Vec<usize>],
        blocked: &mut [bool],
        bsets: &mut [BTreeSet<usize>],
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        let mut found = false;
        blocked[v] = true;
        let mut succ: Vec<usize> = adj[v].iter().copied().filter(|&w| w >= s).collect();
        succ.sort_unstable();
        for &w in &succ {
            if w == s {
                out.push(stack.clone());
                found = true;
            } else if !blocked[w] {
                stack.push(w);
                if circuit(w, s, adj, blocked, bsets, stack, out) {
                    found = true;
                }
                stack.pop();
            }
        }
        if found {
            unblock(v, blocked, bsets);
        } else {
            for &w in &succ {
                bsets[w].insert(v);
            }
        }
        found
    }

    circuit(s, s, adj, &mut blocked, &mut bsets, &mut stack, out);
}

/// All cycle families (including the empty one) with the default cycle limit.
pub fn cycle_families(net: &QuotientNetwork) -> Result<Vec<CycleFamily>, CharpolyError> {
    cycle_families_with_limit(net, DEFAULT_CYCLE_LIMIT)
}

pub fn cycle_families_with_limit(net: &QuotientNetwork, limit: usize) -> Result<Vec<CycleFamily>, CharpolyError> {
    let cycles = simple_cycles(net);
    families_of(&cycles, limit)
}

/// Independent sets of the vertex-conflict graph of `cycles`, by ordered backtracking.
pub fn families_of(cycles: &[SimpleCycle], limit: usize) -> Result<Vec<CycleFamily>, CharpolyError> {
    if cycles.len() > limit {
        return Err(CharpolyError::SizeLimit { what: "simple cycle", limit });
    }
    let masks: Vec<Vec<u64>> = cycles
        .iter()
        .map(|c| {
            let top = c.vertices.iter().copied().max().unwrap_or(0);
            let mut m = vec![0u64; top / 64 + 1];
            for &v in &c.vertices {
                m[v / 64] |= 1 << (v % 64);
            }
            m
        })
        .collect();
    let disjoint = |a: &[u64], b: &[u64]| a.iter().zip(b).all(|(x, y)| x & y == 0);
    let union = |a: &[u64], b: &[u64]| {
        let mut out = vec![0u64; a.len().max(b.len())];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = a.get(i).copied().unwrap_or(0) | b.get(i).copied().unwrap_or(0);
        }
        out
    };

    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    struct Ctx<'a> {
        cycles: &'a [SimpleCycle],
        masks: &'a [Vec<u64>],
    }
    fn rec(
        ctx: &Ctx<'_>,
        start: usize,
        used: &[u64],
        weight: &MPoly,
        winding: i64,
        chosen: &mut Vec<usize>,
        out: &mut Vec<CycleFamily>,
        disjoint: &dyn Fn(&[u64], &[u64]) -> bool,
        union: &dyn Fn(&[u64], &[u64]) -> Vec<u64>,
    ) {
        out.push(CycleFamily { cycles: chosen.clone(), r: chosen.len(), winding, weight: weight.clone() });
        for j in start..ctx.cycles.len() {
            if disjoint(used, &ctx.masks[j]) {
                chosen.push(j);
                let w = weight.mul_ref(&ctx.cycles[j].weight);
                let u = union(used, &ctx.masks[j]);
                rec(ctx, j + 1, &u, &w, winding + ctx.cycles[j].winding, chosen, out, disjoint, union);
                chosen.pop();
            }
        }
    }
    let ctx = Ctx { cycles, masks: &masks };
    rec(&ctx, 0, &[], &MPoly::one(), 0, &mut chosen, &mut out, &disjoint, &union);
    Ok(out)
}

/// Largest family winding.
pub fn max_winding(families: &[CycleFamily]) -> i64 {
    families.iter().map(|f| f.winding).max().unwrap_or(0)
}

/// Q_N from an explicit family list: Σ (−1)^r t^(d − wind) wt, monic of degree d.
pub fn q_n_from_families(families: &[CycleFamily]) -> TPoly {
    let d = max_winding(families);
    let mut q = TPoly::zero();
    for f in families {
        let w = if f.r % 2 == 0 { f.weight.clone() } else { f.weight.neg_ref() };
        q = q.add_ref(&TPoly::monomial(w, (d - f.winding) as i32));
    }
    q
}

/// The alternating sum Σ (−1)^(d − r) t^(d − wind) wt, i.e. (−1)^d·Q_N.
pub fn q_n_alternating_from_families(families: &[CycleFamily]) -> TPoly {
    let d = max_winding(families);
    let q = q_n_from_families(families);
    if d % 2 == 0 {
        q
    } else {
        q.neg_ref()
    }
}

/// Q_N by cycle-family enumeration.
pub fn q_n_cycles(net: &QuotientNetwork) -> Result<TPoly, CharpolyError> {
    let fams = cycle_families(net)?;
    if net.planar_declared() {
        if let Some(f) = fams.iter().find(|f| f.winding != f.r as i64) {
            return Err(CharpolyError::PlanarFamily { r: f.r, winding: f.winding });
        }
    }
    Ok(q_n_from_families(&fams))
}

/// Result of the determinant route.
#[derive(Debug, Clone, PartialEq)]
pub struct QnDet {
    /// det(Id − B(t)).
    pub q_l: TPoly,
    /// t^d · Q_L(1/t) with d = deg Q_L.
    pub q_n: TPoly,
    pub d: i32,
    /// Power of t removed from the converted polynomial (0 on every valid network).
    pub stripped: i32,
}

/// Q_N by the transfer-matrix determinant.
pub fn q_n_det(net: &QuotientNetwork) -> QnDet {
    let b = transfer_matrix(net);
    let n = net.num_vertices();
    let id_minus_b = Matrix::<TPoly>::identity(n).sub(&b);
    let q_l = id_minus_b.det();
    let d = q_l.degree().unwrap_or(0);
    let (q_n, stripped) = q_l.reverse(d).strip_t_power();
    QnDet { q_l, q_n, d, stripped }
}

/// H_0, …, H_d read off a monic Q_N: H_r = (−1)^r · [t^(d−r)] Q_N.
pub fn h_coefficients(q_n: &TPoly) -> Vec<MPoly> {
    let d = q_n.degree().unwrap_or(0);
    (0..=d)
        .map(|r| {
            let c = q_n.coeff(d - r);
            if r % 2 == 0 {
                c
            } else {
                c.neg_ref()
            }
        })
        .collect()
}
