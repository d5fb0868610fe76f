//! Empirical checks of the positivity, real-rootedness and minimality conjectures.
//!
//! Every checker returns a [`ConjectureReport`] with the seed it used; each stored
//! counterexample carries enough data for [`replay`] to recompute it exactly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{MPoly, Matrix, QPoly, TPoly, Var};
use crate::charpoly::{h_coefficients, q_n_det, CharpolyError};
use crate::graph;
use crate::network::{localize, Edge, NetworkError, QuotientNetwork};
use crate::paths::{lgv_sequence_at, LiftedVertex, PathError, RVertex};
use crate::plethysm::{binomial, psi_schur, subsets, PartitionShape};
use crate::recurrence::{minimal_recurrence, RecurrenceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjectureError {
    #[error("network must be declared planar")]
    NotPlanar,
    #[error("network is not strongly connected")]
    NotStronglyConnected,
    #[error("no source-to-sink endpoint choice: {0}")]
    BadEndpoints(String),
    #[error("trial {trial}: minimal recurrence degree {degree} exceeds the proven bound {bound}")]
    TheoremViolation { trial: usize, degree: usize, bound: usize },
    #[error("witness does not belong to this checker: {0}")]
    BadWitness(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Charpoly(#[from] CharpolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conjecture {
    /// H_0, H_1, … is a Pólya frequency sequence (ψ(s_λ) ≥ 0).
    Polya,
    /// Q_N has only positive real roots.
    RealRoots,
    /// All minors of S are positive for some local lift.
    TotalPositivity,
    /// Q_N^(r) is the minimal recurrence of r-path sequences.
    Minimality,
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conjecture::Polya => "polya",
            Conjecture::RealRoots => "real_roots",
            Conjecture::TotalPositivity => "total_positivity",
            Conjecture::Minimality => "minimality",
        })
    }
}

/// A substitution stored as canonical strings, so witnesses survive JSON round trips.
pub type Point = BTreeMap<String, String>;

/// Full data of one negative finding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Polya { lambda: Vec<usize>, value: String },
    RealRoots { trial: usize, point: Point, coefficients: Vec<String>, positive_roots: usize, distinct_roots: usize },
    TotalPositivity { trial: usize, point: Point, rows: Vec<usize>, cols: Vec<usize>, value: String },
    Minimality {
        trial: usize,
        u: RVertex,
        v: RVertex,
        point: Point,
        length: usize,
        drop: usize,
        degree: usize,
        bound: usize,
        poly: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub conjecture: Conjecture,
    pub seed: u64,
    pub parameters: BTreeMap<String, String>,
    pub instances: usize,
    pub passed: usize,
    /// Instances that produced no usable evidence (zero sequence, unstable window, …).
    pub inconclusive: usize,
    pub counterexamples: Vec<Witness>,
    pub notes: Vec<String>,
}

impl ConjectureReport {
    fn new(conjecture: Conjecture, seed: u64) -> ConjectureReport {
        ConjectureReport {
            conjecture,
            seed,
            parameters: BTreeMap::new(),
            instances: 0,
            passed: 0,
            inconclusive: 0,
            counterexamples: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.parameters.insert(k.to_string(), v.to_string());
        self
    }

    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

impl fmt::Display for ConjectureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "conjecture: {}", self.conjecture)?;
        writeln!(f, "seed: {}", self.seed)?;
        for (k, v) in &self.parameters {
            writeln!(f, "{k}: {v}")?;
        }
        writeln!(
            f,
            "instances: {}  passed: {}  inconclusive: {}  counterexamples: {}",
            self.instances,
            self.passed,
            self.inconclusive,
            self.counterexamples.len()
        )?;
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        writeln!(f, "verdict: {}", if self.holds() { "no counterexample" } else { "COUNTEREXAMPLE" })
    }
}

/// Per-trial generator; trial k of seed s always sees the same stream.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

/// A positive rational p/q with 1 ≤ p ≤ 30, 1 ≤ q ≤ 7.
fn random_positive<R: Rng>(rng: &mut R) -> BigRational {
    let p: i64 = rng.gen_range(1..=30);
    let q: i64 = rng.gen_range(1..=7);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn random_point<R: Rng>(vars: &[Var], rng: &mut R) -> HashMap<Var, BigRational> {
    vars.iter().map(|v| (v.clone(), random_positive(rng))).collect()
}

pub fn point_to_strings(p: &HashMap<Var, BigRational>) -> Point {
    p.iter().map(|(v, x)| (v.name().to_string(), x.to_string())).collect()
}

pub fn point_from_strings(p: &Point) -> Result<HashMap<Var, BigRational>, ConjectureError> {
    p.iter()
        .map(|(k, v)| {
            let var = Var::new(k).map_err(|e| ConjectureError::BadWitness(e.to_string()))?;
            let x = BigRational::from_str(v).map_err(|e| ConjectureError::BadWitness(format!("{v}: {e}")))?;
            Ok((var, x))
        })
        .collect()
}

fn qpoly_strings(p: &QPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

// ---------------------------------------------------------------------------
// Pólya frequency

/// ψ(s_λ) for every λ with at most d rows and at most `max_minor` columns, i.e. every
/// minor of size ≤ `max_minor` of the Toeplitz matrix (H_(j−i)) up to skewing.
pub fn check_polya(net: &QuotientNetwork, max_minor: usize) -> Result<ConjectureReport, ConjectureError> {
    if !net.planar_declared() {
        return Err(ConjectureError::NotPlanar);
    }
    let q = q_n_det(net).q_n;
    let h = h_coefficients(&q);
    let d = h.len().saturating_sub(1);
    let shapes: Vec<PartitionShape> =
        PartitionShape::in_box(d, max_minor).into_iter().filter(|s| s.size() > 0).collect();
    let values: Vec<MPoly> = shapes.par_iter().map(|s| psi_schur(s, &h)).collect();
    let mut rep = ConjectureReport::new(Conjecture::Polya, 0).param("max_minor", max_minor).param("degree", d);
    for (s, v) in shapes.iter().zip(values) {
        rep.instances += 1;
        if v.is_nonnegative() {
            rep.passed += 1;
        } else {
            rep.counterexamples.push(Witness::Polya { lambda: s.parts().to_vec(), value: v.to_string() });
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Real roots

/// Outcome of the real-root test on one specialised Q_N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCount {
    pub poly: QPoly,
    /// Distinct roots of Q_N.
    pub distinct: usize,
    /// Distinct positive real roots (Sturm count).
    pub positive: usize,
}

impl RootCount {
    pub fn all_positive(&self) -> bool {
        self.positive == self.distinct
    }
}

/// Sturm count on the squarefree part of a rational polynomial.
pub fn count_positive_roots(p: &QPoly) -> RootCount {
    let sf = p.squarefree();
    let distinct = sf.degree().unwrap_or(0);
    let (reduced, zero_roots) = sf.strip_t();
    let positive = if reduced.degree().unwrap_or(0) == 0 { 0 } else { reduced.count_roots_above(&BigRational::zero()) };
    debug_assert!(zero_roots <= 1);
    RootCount { poly: p.clone(), distinct, positive }
}

fn real_roots_trial(q: &TPoly, point: &HashMap<Var, BigRational>) -> Result<RootCount, ConjectureError> {
    let coeffs = q.eval_coeffs(point).map_err(|e| ConjectureError::BadWitness(e.to_string()))?;
    Ok(count_positive_roots(&QPoly::new(coeffs)))
}

/// Substitutes random positive rationals and counts positive real roots of Q_N.
pub fn check_real_roots(net: &QuotientNetwork, trials: usize, seed: u64) -> Result<ConjectureReport, ConjectureError> {
    if !net.planar_declared() {
        return Err(ConjectureError::NotPlanar);
    }
    let q = q_n_det(net).q_n;
    let outcomes: Vec<Result<(HashMap<Var, BigRational>, RootCount), ConjectureError>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let point = random_point(net.vars(), &mut trial_rng(seed, k));
            let rc = real_roots_trial(&q, &point)?;
            Ok((point, rc))
        })
        .collect();
    let mut rep = ConjectureReport::new(Conjecture::RealRoots, seed)
        .param("trials", trials)
        .param("degree", q.degree().unwrap_or(0));
    for (k, o) in outcomes.into_iter().enumerate() {
        let (point, rc) = o?;
        rep.instances += 1;
        if rc.all_positive() {
            rep.passed += 1;
        } else {
            rep.counterexamples.push(Witness::RealRoots {
                trial: k,
                point: point_to_strings(&point),
                coefficients: qpoly_strings(&rc.poly),
                positive_roots: rc.positive,
                distinct_roots: rc.distinct,
            });
        }
    }
    Ok(rep)
}

/// Layered cylinder network: `cols × rows` vertices, every edge moves one column to the
/// right (wrapping with offset 1), and each cell between two columns and two rows carries
/// at most one diagonal, so the drawing has no crossings.
pub fn random_planar_network<R: Rng>(rng: &mut R, cols: usize, rows: usize) -> QuotientNetwork {
    assert!(cols >= 1 && rows >= 1, "empty layout");
    let idx = |c: usize, y: usize| y * cols + c;
    let vertices: Vec<String> = (0..rows).flat_map(|y| (0..cols).map(move |c| format!("p{c}_{y}"))).collect();
    let mut edges = Vec::new();
    let mut vars = Vec::new();
    let mut push = |tail: usize, head: usize, offset: i64, vars: &mut Vec<Var>| {
        let v = Var::new(&format!("w{}", vars.len())).expect("valid name");
        edges.push(Edge { tail, head, offset, weight: MPoly::var(&v) });
        vars.push(v);
    };
    for c in 0..cols {
        let (c2, off) = if c + 1 == cols { (0, 1) } else { (c + 1, 0) };
        for y in 0..rows {
            // keep every horizontal edge of row 0 so the network has a cycle
            if y == 0 || rng.gen_bool(0.8) {
                push(idx(c, y), idx(c2, y), off, &mut vars);
            }
        }
        for y in 0..rows.saturating_sub(1) {
            match rng.gen_range(0..3) {
                1 => push(idx(c, y), idx(c2, y + 1), off, &mut vars),
                2 => push(idx(c, y + 1), idx(c2, y), off, &mut vars),
                _ => {}
            }
        }
    }
    QuotientNetwork::from_parts(vertices, edges, true, vars).expect("layered networks are valid")
}

// ---------------------------------------------------------------------------
// Total positivity

/// Result of testing all minors of S at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TpOutcome {
    Positive,
    /// First non-positive minor in (size, rows, cols) order.
    NonPositive { rows: Vec<usize>, cols: Vec<usize>, value: BigRational },
}

/// Tests every minor of a rational matrix for strict positivity.
pub fn minors_positive(s: &Matrix<BigRational>) -> TpOutcome {
    let n = s.n();
    for k in 1..=n {
        let subs = subsets(n, k);
        for rows in &subs {
            for cols in &subs {
                let v = s.minor(rows, cols);
                if !v.is_positive() {
                    return TpOutcome::NonPositive { rows: rows.clone(), cols: cols.clone(), value: v };
                }
            }
        }
    }
    TpOutcome::Positive
}

/// S of the canonical local lift, specialised at `point`.
pub fn transfer_at(net: &QuotientNetwork, point: &HashMap<Var, BigRational>) -> Result<Matrix<BigRational>, ConjectureError> {
    let (_, _, form) = localize(net)?;
    form.s.try_map(|x| x.eval(point)).map_err(|e| ConjectureError::BadWitness(e.to_string()))
}

pub fn check_total_positivity(net: &QuotientNetwork, trials: usize, seed: u64) -> Result<ConjectureReport, ConjectureError> {
    let (_, _, form) = localize(net)?;
    let outcomes: Vec<Result<(HashMap<Var, BigRational>, TpOutcome), ConjectureError>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let point = random_point(net.vars(), &mut trial_rng(seed, k));
            let s = form.s.try_map(|x| x.eval(&point)).map_err(|e| ConjectureError::BadWitness(e.to_string()))?;
            Ok((point, minors_positive(&s)))
        })
        .collect();
    let mut rep = ConjectureReport::new(Conjecture::TotalPositivity, seed).param("trials", trials);
    if !net.planar_declared() {
        rep.notes.push("network is not declared planar, so it lies outside the conjecture's hypothesis".into());
    }
    for (k, o) in outcomes.into_iter().enumerate() {
        let (point, out) = o?;
        rep.instances += 1;
        match out {
            TpOutcome::Positive => rep.passed += 1,
            TpOutcome::NonPositive { rows, cols, value } => rep.counterexamples.push(Witness::TotalPositivity {
                trial: k,
                point: point_to_strings(&point),
                rows,
                cols,
                value: value.to_string(),
            }),
        }
    }
    if !rep.holds() {
        rep.notes.push(
            "only the canonical local lift was tested; the conjecture asks for some lift, so these findings are inconclusive for it"
                .into(),
        );
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Minimality

/// How endpoints are drawn in [`check_minimality`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointPolicy {
    /// The conjecture's hypothesis: strongly connected quotient, endpoints anywhere.
    StronglyConnected,
    /// Sources from the unique initial strong component, targets from the unique
    /// terminal one; every cyclic component must lie between them.
    SourceToSink,
}

fn endpoint_pools(net: &QuotientNetwork, policy: EndpointPolicy) -> Result<(Vec<usize>, Vec<usize>), ConjectureError> {
    let n = net.num_vertices();
    let adj = net.adjacency();
    let comps = graph::scc(n, &adj);
    match policy {
        EndpointPolicy::StronglyConnected => {
            if comps.len() != 1 {
                return Err(ConjectureError::NotStronglyConnected);
            }
            Ok(((0..n).collect(), (0..n).collect()))
        }
        EndpointPolicy::SourceToSink => {
            let mut comp_of = vec![0usize; n];
            for (c, vs) in comps.iter().enumerate() {
                for &v in vs {
                    comp_of[v] = c;
                }
            }
            let k = comps.len();
            let mut cadj = vec![Vec::new(); k];
            let mut indeg = vec![0usize; k];
            for (u, outs) in adj.iter().enumerate() {
                for &v in outs {
                    let (a, b) = (comp_of[u], comp_of[v]);
                    if a != b && !cadj[a].contains(&b) {
                        cadj[a].push(b);
                        indeg[b] += 1;
                    }
                }
            }
            let sources: Vec<usize> = (0..k).filter(|&c| indeg[c] == 0).collect();
            let sinks: Vec<usize> = (0..k).filter(|&c| cadj[c].is_empty()).collect();
            if sources.len() != 1 || sinks.len() != 1 {
                return Err(ConjectureError::BadEndpoints(format!(
                    "{} initial and {} terminal components",
                    sources.len(),
                    sinks.len()
                )));
            }
            let reach = |from: usize| {
                let mut seen = vec![false; k];
                let mut stack = vec![from];
                seen[from] = true;
                while let Some(c) = stack.pop() {
                    for &d in &cadj[c] {
                        if !seen[d] {
                            seen[d] = true;
                            stack.push(d);
                        }
                    }
                }
                seen
            };
            let from_src = reach(sources[0]);
            for c in 0..k {
                if !from_src[c] || !reach(c)[sinks[0]] {
                    return Err(ConjectureError::BadEndpoints(format!("component {c} is not between source and sink")));
                }
            }
            Ok((comps[sources[0]].clone(), comps[sinks[0]].clone()))
        }
    }
}

fn sample_rvertex<R: Rng>(pool: &[usize], r: usize, shift: i64, rng: &mut R) -> Option<RVertex> {
    if pool.len() < r {
        return None;
    }
    let mut picks: Vec<usize> = pool.choose_multiple(rng, r).copied().collect();
    picks.sort_unstable();
    RVertex::new(picks.into_iter().map(|b| LiftedVertex::new(b, shift)).collect()).ok()
}

/// Minimal recurrence of one LGV sequence; `None` when the sequence gives no evidence.
fn minimal_degree(
    net: &QuotientNetwork,
    u: &RVertex,
    v: &RVertex,
    point: &HashMap<Var, BigRational>,
    length: usize,
    drop: usize,
) -> Result<Option<QPoly>, ConjectureError> {
    let f = lgv_sequence_at(net, u, v, length - 1, point)?;
    if f[drop..].iter().all(|x| x.is_zero()) {
        return Ok(None);
    }
    match minimal_recurrence(&f, drop) {
        Ok(m) => Ok(Some(m.poly)),
        Err(RecurrenceError::Unstable(..)) | Err(RecurrenceError::InsufficientData { .. }) => Ok(None),
        Err(e) => Err(ConjectureError::BadWitness(e.to_string())),
    }
}

/// Compares the minimal recurrence degree of random r-path sequences with C(d, r).
pub fn check_minimality(
    net: &QuotientNetwork,
    r: usize,
    trials: usize,
    seed: u64,
    policy: EndpointPolicy,
) -> Result<ConjectureReport, ConjectureError> {
    let (src, dst) = endpoint_pools(net, policy)?;
    let local = localize(net).is_ok();
    let d = q_n_det(net).q_n.degree().unwrap_or(0) as usize;
    let bound = binomial(d, r);
    let drop = net.num_vertices() + r;
    let length = drop + 2 * bound + 3;
    type Outcome = (Option<(RVertex, RVertex, HashMap<Var, BigRational>)>, Option<QPoly>);
    let outcomes: Vec<Result<Outcome, ConjectureError>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let shift = rng.gen_range(0..=1);
            let (Some(u), Some(v)) = (sample_rvertex(&src, r, 0, &mut rng), sample_rvertex(&dst, r, shift, &mut rng)) else {
                return Ok((None, None));
            };
            let point = random_point(net.vars(), &mut rng);
            let poly = minimal_degree(net, &u, &v, &point, length, drop)?;
            Ok((Some((u, v, point)), poly))
        })
        .collect();
    let mut rep = ConjectureReport::new(Conjecture::Minimality, seed)
        .param("r", r)
        .param("trials", trials)
        .param("bound", bound)
        .param("policy", format!("{policy:?}"));
    for (k, o) in outcomes.into_iter().enumerate() {
        rep.instances += 1;
        let (ends, poly) = o?;
        let (Some((u, v, point)), Some(poly)) = (ends, poly) else {
            rep.inconclusive += 1;
            continue;
        };
        let degree = poly.degree().unwrap_or(0);
        if degree > bound && local {
            return Err(ConjectureError::TheoremViolation { trial: k, degree, bound });
        }
        if degree == bound {
            rep.passed += 1;
        } else {
            rep.counterexamples.push(Witness::Minimality {
                trial: k,
                u,
                v,
                point: point_to_strings(&point),
                length,
                drop,
                degree,
                bound,
                poly: poly.to_string(),
            });
        }
    }
    if !local {
        rep.notes.push("network is not local; degrees above the bound are reported, not raised".into());
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Replay

/// Recomputes a witness from scratch; true when the negative finding reproduces exactly.
pub fn replay(net: &QuotientNetwork, w: &Witness) -> Result<bool, ConjectureError> {
    match w {
        Witness::Polya { lambda, value } => {
            let shape = PartitionShape::new(lambda.clone()).map_err(|e| ConjectureError::BadWitness(e.to_string()))?;
            let h = h_coefficients(&q_n_det(net).q_n);
            let v = psi_schur(&shape, &h);
            Ok(!v.is_nonnegative() && &v.to_string() == value)
        }
        Witness::RealRoots { point, coefficients, positive_roots, distinct_roots, .. } => {
            let p = point_from_strings(point)?;
            let rc = real_roots_trial(&q_n_det(net).q_n, &p)?;
            Ok(!rc.all_positive()
                && &qpoly_strings(&rc.poly) == coefficients
                && rc.positive == *positive_roots
                && rc.distinct == *distinct_roots)
        }
        Witness::TotalPositivity { point, rows, cols, value, .. } => {
            let p = point_from_strings(point)?;
            let s = transfer_at(net, &p)?;
            let v = s.minor(rows, cols);
            Ok(!v.is_positive() && &v.to_string() == value)
        }
        Witness::Minimality { u, v, point, length, drop, degree, poly, .. } => {
            let p = point_from_strings(point)?;
            match minimal_degree(net, u, v, &p, *length, *drop)? {
                Some(q) => Ok(q.degree() == Some(*degree) && &q.to_string() == poly),
                None => Ok(false),
            }
        }
    }
}

/// Replays every witness of a report.
pub fn replay_report(net: &QuotientNetwork, rep: &ConjectureReport) -> Result<bool, ConjectureError> {
    for w in &rep.counterexamples {
        if !replay(net, w)? {
            return Ok(false);
        }
    }
    Ok(true)
}
