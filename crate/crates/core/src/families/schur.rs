//! The Schur network: the grid ℤ × [n] with horizontal edges of weight x_j, unit
//! vertical edges, and period m along the rows.

use crate::algebra::{MPoly, Matrix, Var};
use crate::network::{Edge, QuotientNetwork};
use crate::paths::{LiftedVertex, RVertex};
use crate::plethysm::PartitionShape;

use super::FamilyError;

/// Parameters of a Schur sequence s_(λ + ℓ·m^r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurQuery {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub lambda: PartitionShape,
}

impl SchurQuery {
    pub fn new(n: usize, m: usize, r: usize, lambda: PartitionShape) -> Result<SchurQuery, FamilyError> {
        if n == 0 || m == 0 || r == 0 || r > n {
            return Err(FamilyError::BadParameters(format!("need 1 <= r <= n and m >= 1 (n={n}, m={m}, r={r})")));
        }
        if lambda.length() > r {
            return Err(FamilyError::BadParameters(format!("partition {:?} has more than {r} parts", lambda.parts())));
        }
        Ok(SchurQuery { n, m, r, lambda })
    }

    /// μ = m^r.
    pub fn mu(&self) -> PartitionShape {
        PartitionShape::new(vec![self.m; self.r]).expect("rectangle")
    }
}

pub fn schur_vars(n: usize) -> Vec<Var> {
    (1..=n).map(|j| Var::new(&format!("x{j}")).expect("valid name")).collect()
}

fn label(i: usize, j: usize) -> String {
    format!("v{i}_{j}")
}

/// The quotient on the m × n cylinder; vertex (i mod m, j) is labelled `v{i}_{j}`.
pub fn build_schur(n: usize, m: usize) -> Result<QuotientNetwork, FamilyError> {
    if n == 0 || m == 0 {
        return Err(FamilyError::BadParameters("n and m must be positive".into()));
    }
    let vars = schur_vars(n);
    let idx = |i: usize, j: usize| (j - 1) * m + i;
    let mut vertices = vec![String::new(); n * m];
    for j in 1..=n {
        for i in 0..m {
            vertices[idx(i, j)] = label(i, j);
        }
    }
    let mut edges = Vec::new();
    for j in 1..=n {
        for i in 0..m {
            edges.push(Edge {
                tail: idx(i, j),
                head: idx((i + 1) % m, j),
                offset: i64::from(i + 1 == m),
                weight: MPoly::var(&vars[j - 1]),
            });
            if j < n {
                edges.push(Edge { tail: idx(i, j), head: idx(i, j + 1), offset: 0, weight: MPoly::one() });
            }
        }
    }
    Ok(QuotientNetwork::from_parts(vertices, edges, true, vars)?)
}

/// The cover vertex (i, j) of the grid.
pub fn schur_vertex(m: usize, i: i64, j: usize) -> LiftedVertex {
    let m = m as i64;
    LiftedVertex::new((j - 1) * m as usize + i.rem_euclid(m) as usize, i.div_euclid(m))
}

/// ũ = ((1,1), …, (r,1)) and ṽ(λ) = ((λ_r + 1, n), …, (λ_1 + r, n)).
pub fn schur_endpoints(q: &SchurQuery) -> (RVertex, RVertex) {
    let u = (1..=q.r).map(|k| schur_vertex(q.m, k as i64, 1)).collect();
    let v = (1..=q.r)
        .map(|k| schur_vertex(q.m, (q.lambda.part(q.r - k) + k) as i64, q.n))
        .collect();
    (RVertex::new(u).expect("distinct"), RVertex::new(v).expect("distinct"))
}

/// Complete homogeneous polynomials h_0..=h_k in x_1..x_n.
pub fn complete_homogeneous(n: usize, k: usize) -> Vec<MPoly> {
    let vars = schur_vars(n);
    let mut h = vec![MPoly::zero(); k + 1];
    h[0] = MPoly::one();
    for v in &vars {
        let x = MPoly::var(v);
        for e in 1..=k {
            let add = h[e - 1].mul_ref(&x);
            h[e] = h[e].add_ref(&add);
        }
    }
    h
}

/// s_λ(x_1, …, x_n) by the Jacobi–Trudi determinant det[h_(λ_i − i + j)].
pub fn schur_oracle(lambda: &PartitionShape, n: usize) -> MPoly {
    let len = lambda.length();
    if len > n {
        return MPoly::zero();
    }
    if len == 0 {
        return MPoly::one();
    }
    let top = lambda.part(0) + len;
    let h = complete_homogeneous(n, top);
    Matrix::from_fn(len, |i, j| {
        let idx = lambda.part(i) as i64 - i as i64 + j as i64;
        if idx < 0 {
            MPoly::zero()
        } else {
            h[idx as usize].clone()
        }
    })
    .det()
}
