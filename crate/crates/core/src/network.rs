//! Finite quotients of cylindrical networks.
//!
//! A network is stored as its quotient digraph: every edge carries an integer offset
//! `k` meaning that, in the universal cover, the lift of its tail is joined to the lift
//! of its head translated by `k` periods. The total offset of a cycle is its winding
//! number and must be positive.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{parse_mpoly_in, AlgebraError, MPoly, Matrix, RingMatrix, TPoly, Var, T_VAR};
use crate::charpoly::simple_cycles;
use crate::graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("weight parse error on edge {edge}: {source}")]
    Parse { edge: usize, source: AlgebraError },
    #[error("invalid network: {0}")]
    Invalid(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("cycle {cycle:?} has non-positive winding {winding}")]
    NonPositiveWinding { cycle: Vec<String>, winding: i64 },
    #[error("network is not local: constraint cycle through {cycle:?}")]
    NotLocal { cycle: Vec<String> },
    #[error("offset-0 subgraph is not nilpotent")]
    NotNilpotent,
    #[error("planar network has cycle {cycle:?} with winding {winding}")]
    PlanarViolation { cycle: Vec<String>, winding: i64 },
    #[error("json: {0}")]
    Json(String),
}

/// On-disk description of a network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    #[serde(default)]
    pub vars: Vec<String>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub planar: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub offset: i64,
    pub weight: String,
}

impl NetworkSpec {
    pub fn from_json(s: &str) -> Result<NetworkSpec, NetworkError> {
        serde_json::from_str(s).map_err(|e| NetworkError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub offset: i64,
    pub weight: MPoly,
}

/// A validated quotient network. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientNetwork {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    planar: bool,
    vars: Vec<Var>,
}

/// Potentials `z` re-choosing the lift: offsets become ℓ + z(tail) − z(head).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftRelabel {
    pub z: Vec<i64>,
}

/// Offset-0 part `C`, offset-1 part `D` and transfer matrix `S = (Id − C)⁻¹·D` of a local lift.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalForm {
    pub c: Matrix<MPoly>,
    pub d: Matrix<MPoly>,
    pub s: Matrix<MPoly>,
    /// (Id − C)⁻¹ = Id + C + C² + …
    pub c_inv: Matrix<MPoly>,
}

/// Parses, merges parallel edges and validates the positive-winding axiom.
pub fn build_network(spec: &NetworkSpec) -> Result<QuotientNetwork, NetworkError> {
    let mut vars = Vec::with_capacity(spec.vars.len());
    for name in &spec.vars {
        if name == T_VAR {
            return Err(NetworkError::Invalid(format!("variable name {T_VAR:?} is reserved")));
        }
        let v = Var::new(name).map_err(|e| NetworkError::Invalid(e.to_string()))?;
        if vars.contains(&v) {
            return Err(NetworkError::Invalid(format!("duplicate variable {name:?}")));
        }
        vars.push(v);
    }
    let mut index = HashMap::new();
    for (i, v) in spec.vertices.iter().enumerate() {
        if v.is_empty() || v.contains(['@', ',']) || v.trim() != v {
            return Err(NetworkError::Invalid(format!("bad vertex label {v:?}")));
        }
        if index.insert(v.clone(), i).is_some() {
            return Err(NetworkError::Invalid(format!("duplicate vertex {v:?}")));
        }
    }
    let mut merged: BTreeMap<(usize, usize, i64), MPoly> = BTreeMap::new();
    let mut order: Vec<(usize, usize, i64)> = Vec::new();
    for (k, e) in spec.edges.iter().enumerate() {
        let tail = *index.get(&e.from).ok_or_else(|| NetworkError::UnknownVertex(e.from.clone()))?;
        let head = *index.get(&e.to).ok_or_else(|| NetworkError::UnknownVertex(e.to.clone()))?;
        let w = parse_mpoly_in(&e.weight, &vars).map_err(|source| NetworkError::Parse { edge: k, source })?;
        let key = (tail, head, e.offset);
        match merged.get_mut(&key) {
            Some(x) => *x = x.add_ref(&w),
            None => {
                order.push(key);
                merged.insert(key, w);
            }
        }
    }
    let edges = order
        .into_iter()
        .filter_map(|key| {
            let w = merged.remove(&key).expect("key present");
            (!w.is_zero()).then_some(Edge { tail: key.0, head: key.1, offset: key.2, weight: w })
        })
        .collect();
    let net = QuotientNetwork {
        vertices: spec.vertices.clone(),
        index,
        edges,
        planar: spec.planar,
        vars,
    };
    net.check_windings()?;
    Ok(net)
}

impl QuotientNetwork {
    /// Assembles a network from already-parsed parts (used by the family builders).
    pub fn from_parts(
        vertices: Vec<String>,
        edges: Vec<Edge>,
        planar: bool,
        vars: Vec<Var>,
    ) -> Result<QuotientNetwork, NetworkError> {
        let spec = NetworkSpec {
            vars: vars.iter().map(|v| v.name().to_string()).collect(),
            vertices: vertices.clone(),
            edges: edges
                .iter()
                .map(|e| EdgeSpec {
                    from: vertices[e.tail].clone(),
                    to: vertices[e.head].clone(),
                    offset: e.offset,
                    weight: e.weight.to_string(),
                })
                .collect(),
            planar,
        };
        build_network(&spec)
    }

    pub fn from_json(s: &str) -> Result<QuotientNetwork, NetworkError> {
        build_network(&NetworkSpec::from_json(s)?)
    }

    pub fn to_spec(&self) -> NetworkSpec {
        NetworkSpec {
            vars: self.vars.iter().map(|v| v.name().to_string()).collect(),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    from: self.vertices[e.tail].clone(),
                    to: self.vertices[e.head].clone(),
                    offset: e.offset,
                    weight: e.weight.to_string(),
                })
                .collect(),
            planar: self.planar,
        }
    }

    pub fn to_json(&self) -> String {
        self.to_spec().to_json()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_label(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn planar_declared(&self) -> bool {
        self.planar
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    /// Same network with the planarity flag replaced.
    pub fn with_planar(&self, planar: bool) -> QuotientNetwork {
        QuotientNetwork { planar, ..self.clone() }
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for e in &self.edges {
            if !adj[e.tail].contains(&e.head) {
                adj[e.tail].push(e.head);
            }
        }
        adj
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.num_vertices() > 0 && graph::scc(self.num_vertices(), &self.adjacency()).len() == 1
    }

    /// Rejects any cycle of total offset ≤ 0.
    ///
    /// With K = |V| + 1, a simple cycle has Σ(K·ℓ − 1) < 0 exactly when Σℓ ≤ 0,
    /// so a negative-cycle search on those weights decides the axiom.
    fn check_windings(&self) -> Result<(), NetworkError> {
        let k = self.num_vertices() as i64 + 1;
        let es: Vec<(usize, usize, i64)> =
            self.edges.iter().map(|e| (e.tail, e.head, e.offset * k - 1)).collect();
        match graph::potentials(self.num_vertices(), &es) {
            Ok(_) => Ok(()),
            Err(cyc) => Err(NetworkError::NonPositiveWinding {
                cycle: cyc.iter().map(|&i| self.vertices[self.edges[i].tail].clone()).collect(),
                winding: cyc.iter().map(|&i| self.edges[i].offset).sum(),
            }),
        }
    }

    /// Potential π with π(head) ≤ π(tail) + K·ℓ − 1 on every edge, K = |V| + 1.
    ///
    /// `K·shift − π(v)` then increases strictly along every edge of the cover.
    pub(crate) fn cover_potential(&self) -> (i64, Vec<i64>) {
        let k = self.num_vertices() as i64 + 1;
        let es: Vec<(usize, usize, i64)> =
            self.edges.iter().map(|e| (e.tail, e.head, e.offset * k - 1)).collect();
        let pi = graph::potentials(self.num_vertices(), &es).expect("validated network has no non-positive cycle");
        (k, pi)
    }

    /// Same network with weights specialised; variables not in `map` are kept.
    pub fn substitute_weights(&self, map: &HashMap<Var, MPoly>) -> Result<QuotientNetwork, NetworkError> {
        let mut vars: Vec<Var> = self.vars.iter().filter(|v| !map.contains_key(*v)).cloned().collect();
        for v in self.vars.iter().filter_map(|v| map.get(v)).flat_map(|p| p.vars()) {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let weight = e.weight.substitute(map).map_err(|source| NetworkError::Parse { edge: 0, source })?;
                Ok(Edge { weight, ..e.clone() })
            })
            .collect::<Result<Vec<_>, NetworkError>>()?;
        QuotientNetwork::from_parts(self.vertices.clone(), edges, self.planar, vars)
    }

    /// Applies a lift change.
    pub fn relabel(&self, r: &LiftRelabel) -> QuotientNetwork {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { offset: e.offset + r.z[e.tail] - r.z[e.head], ..e.clone() })
            .collect();
        QuotientNetwork { edges, ..self.clone() }
    }

    /// Whether every offset is 0 or 1.
    pub fn is_local_lift(&self) -> bool {
        self.edges.iter().all(|e| e.offset == 0 || e.offset == 1)
    }
}

/// B(t) with b_ij = Σ t^ℓ(e)·wt(e) over edges i → j.
pub fn transfer_matrix(net: &QuotientNetwork) -> RingMatrix {
    let n = net.num_vertices();
    let mut m = Matrix::<TPoly>::zeros(n);
    for e in &net.edges {
        let cur = m.get(e.tail, e.head).clone();
        let off = i32::try_from(e.offset).expect("offset fits in i32");
        m.set(e.tail, e.head, cur.add_ref(&TPoly::monomial(e.weight.clone(), off)));
    }
    m
}

/// Finds a lift with all offsets in {0, 1} and returns the relabelled network,
/// the potentials used, and the local form.
pub fn localize(net: &QuotientNetwork) -> Result<(QuotientNetwork, LiftRelabel, LocalForm), NetworkError> {
    // ℓ(e) − 1 ≤ z(head) − z(tail) ≤ ℓ(e) as difference constraints.
    let mut cons = Vec::with_capacity(2 * net.edges.len());
    for e in &net.edges {
        cons.push((e.tail, e.head, e.offset));
        cons.push((e.head, e.tail, 1 - e.offset));
    }
    let z = match graph::potentials(net.num_vertices(), &cons) {
        Ok(z) => z,
        Err(cyc) => {
            return Err(NetworkError::NotLocal {
                cycle: cyc.iter().map(|&i| net.vertices[cons[i].0].clone()).collect(),
            })
        }
    };
    let lo = z.iter().copied().min().unwrap_or(0);
    let relabel = LiftRelabel { z: z.iter().map(|x| x - lo).collect() };
    let local = net.relabel(&relabel);
    debug_assert!(local.is_local_lift());
    let form = local_form(&local)?;
    Ok((local, relabel, form))
}

/// Local form of a network whose offsets are already in {0, 1}.
pub fn local_form(net: &QuotientNetwork) -> Result<LocalForm, NetworkError> {
    if !net.is_local_lift() {
        return Err(NetworkError::Invalid("offsets must lie in {0, 1}".into()));
    }
    let n = net.num_vertices();
    let mut c = Matrix::<MPoly>::zeros(n);
    let mut d = Matrix::<MPoly>::zeros(n);
    for e in &net.edges {
        let target = if e.offset == 0 { &mut c } else { &mut d };
        let cur = target.get(e.tail, e.head).add_ref(&e.weight);
        target.set(e.tail, e.head, cur);
    }
    let mut c_inv = Matrix::<MPoly>::identity(n);
    let mut power = Matrix::<MPoly>::identity(n);
    for _ in 0..n {
        power = power.mul(&c);
        if power.is_zero() {
            break;
        }
        c_inv = c_inv.add(&power);
    }
    if !power.is_zero() {
        return Err(NetworkError::NotNilpotent);
    }
    let s = c_inv.mul(&d);
    Ok(LocalForm { c, d, s, c_inv })
}

/// Checks the necessary planarity condition: every simple cycle winds exactly once.
pub fn planar_sanity(net: &QuotientNetwork) -> Result<(), NetworkError> {
    for cyc in simple_cycles(net) {
        if cyc.winding != 1 {
            return Err(NetworkError::PlanarViolation {
                cycle: cyc.vertices.iter().map(|&v| net.vertices[v].clone()).collect(),
                winding: cyc.winding,
            });
        }
    }
    Ok(())
}
