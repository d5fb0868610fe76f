//! Plethystic polynomials Q^(r) and Q^⟨r⟩ via compound and induced symmetric powers
//! of the companion matrix, and the specialisation ψ on Schur functions.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Matrix, MPoly, Ring, TPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlethysmError {
    #[error("rank {r} out of range for degree {d}")]
    BadRank { r: usize, d: usize },
    #[error("polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("parts must be weakly decreasing: {0:?}")]
    BadPartition(Vec<usize>),
}

/// A partition (weakly decreasing parts; trailing zeros allowed).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionShape {
    parts: Vec<usize>,
}

impl PartitionShape {
    pub fn new(parts: Vec<usize>) -> Result<PartitionShape, PlethysmError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PlethysmError::BadPartition(parts));
        }
        Ok(PartitionShape { parts })
    }

    pub fn empty() -> PartitionShape {
        PartitionShape { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.iter().filter(|&&p| p > 0).count()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> PartitionShape {
        let top = self.parts.first().copied().unwrap_or(0);
        PartitionShape {
            parts: (1..=top).map(|k| self.parts.iter().filter(|&&p| p >= k).count()).collect(),
        }
    }

    /// Part i (0-based), zero beyond the stored length.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Componentwise sum (parts padded with zeros).
    pub fn plus(&self, other: &PartitionShape) -> PartitionShape {
        let n = self.parts.len().max(other.parts.len());
        PartitionShape { parts: (0..n).map(|i| self.part(i) + other.part(i)).collect() }
    }

    /// All partitions fitting in a `rows × cols` box.
    pub fn in_box(rows: usize, cols: usize) -> Vec<PartitionShape> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rows: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<PartitionShape>) {
            let mut parts: Vec<usize> = cur.iter().copied().filter(|&p| p > 0).collect();
            parts.shrink_to_fit();
            if cur.last().map(|&p| p > 0).unwrap_or(true) {
                out.push(PartitionShape { parts });
            }
            if cur.len() == rows {
                return;
            }
            for p in 1..=max {
                cur.push(p);
                rec(rows, p, cur, out);
                cur.pop();
            }
        }
        rec(rows, cols, &mut cur, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

/// The companion matrix of a monic polynomial, as an explicit type.
#[derive(Debug, Clone, PartialEq)]
pub struct Companion {
    pub q: TPoly,
    pub matrix: Matrix<MPoly>,
}

/// Companion matrix: ones on the subdiagonal, last column −c_0, …, −c_(d−1).
pub fn companion(q: &TPoly) -> Result<Companion, PlethysmError> {
    if !q.is_monic() {
        return Err(PlethysmError::NotMonic(q.to_string()));
    }
    let d = q.degree().unwrap_or(0) as usize;
    let mut m = Matrix::<MPoly>::zeros(d);
    for i in 1..d {
        m.set(i, i - 1, MPoly::one());
    }
    for i in 0..d {
        m.set(i, d - 1, q.coeff(i as i32).neg_ref());
    }
    Ok(Companion { q: q.clone(), matrix: m })
}

/// Sorted r-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

/// Weakly increasing r-tuples from 0..n in lexicographic order.
pub fn multisets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

/// Λ^r M: entry (I, J) is the minor on rows I and columns J, subsets in lex order.
pub fn exterior_power<R: Ring>(m: &Matrix<R>, r: usize) -> Result<Matrix<R>, PlethysmError> {
    let n = m.n();
    if r > n {
        return Err(PlethysmError::BadRank { r, d: n });
    }
    let subs = subsets(n, r);
    Ok(Matrix::from_fn(subs.len(), |i, j| m.minor(&subs[i], &subs[j])))
}

/// Sym^r M on the monomial basis: column J holds the expansion of ∏_{j∈J} (M e_j).
pub fn symmetric_power<R: Ring>(m: &Matrix<R>, r: usize) -> Matrix<R> {
    let n = m.n();
    let basis = multisets(n, r);
    let pos: HashMap<&Vec<usize>, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut out = Matrix::<R>::zeros(basis.len());
    for (jcol, bj) in basis.iter().enumerate() {
        let mut acc: BTreeMap<Vec<usize>, R> = BTreeMap::new();
        acc.insert(Vec::new(), R::one());
        for &j in bj {
            let mut next: BTreeMap<Vec<usize>, R> = BTreeMap::new();
            for (ms, c) in &acc {
                for i in 0..n {
                    let a = m.get(i, j);
                    if a.is_zero() {
                        continue;
                    }
                    let mut k = ms.clone();
                    let at = k.partition_point(|&x| x <= i);
                    k.insert(at, i);
                    let v = c.mul(a);
                    match next.get_mut(&k) {
                        Some(x) => *x = x.add(&v),
                        None => {
                            next.insert(k, v);
                        }
                    }
                }
            }
            acc = next;
        }
        for (ms, c) in acc {
            if !c.is_zero() {
                out.set(pos[&ms], jcol, c);
            }
        }
    }
    out
}

/// Generic coefficient names `g0 … g(d−1)` for t^0 … t^(d−1) of a monic degree-d polynomial.
fn generic_vars(d: usize) -> Vec<Var> {
    (0..d).map(|i| Var::new(&format!("g{i}")).expect("valid name")).collect()
}

fn generic_companion(d: usize) -> (Matrix<MPoly>, Vec<Var>) {
    let vars = generic_vars(d);
    let mut m = Matrix::<MPoly>::zeros(d);
    for i in 1..d {
        m.set(i, i - 1, MPoly::one());
    }
    for i in 0..d {
        m.set(i, d - 1, MPoly::var(&vars[i]).neg_ref());
    }
    (m, vars)
}

fn specialise(generic: &TPoly, vars: &[Var], q: &TPoly) -> TPoly {
    let map: HashMap<Var, MPoly> =
        vars.iter().enumerate().map(|(i, v)| (v.clone(), q.coeff(i as i32))).collect();
    generic.substitute(&map).expect("generic plethysm coefficients are polynomials")
}

/// Q^(r) for the generic monic polynomial of degree d, in the variables g0…g(d−1).
pub fn generic_plee(d: usize, r: usize) -> Result<(TPoly, Vec<Var>), PlethysmError> {
    if r == 0 || r > d {
        return Err(PlethysmError::BadRank { r, d });
    }
    Ok(cached(Kind::Elementary, d, r, || {
        let (m, _) = generic_companion(d);
        exterior_power(&m, r).expect("rank checked").charpoly()
    }))
}

/// Q^⟨r⟩ for the generic monic polynomial of degree d.
pub fn generic_pleh(d: usize, r: usize) -> Result<(TPoly, Vec<Var>), PlethysmError> {
    if r == 0 {
        return Err(PlethysmError::BadRank { r, d });
    }
    Ok(cached(Kind::Homogeneous, d, r, || {
        let (m, _) = generic_companion(d);
        symmetric_power(&m, r).charpoly()
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Elementary,
    Homogeneous,
}

/// Generic plethysms depend only on (d, r), so each is computed once per process.
fn cached(kind: Kind, d: usize, r: usize, build: impl FnOnce() -> TPoly) -> (TPoly, Vec<Var>) {
    static CACHE: OnceLock<Mutex<HashMap<(Kind, usize, usize), TPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("cache lock").get(&(kind, d, r)) {
        return (p.clone(), generic_vars(d));
    }
    let p = build();
    cache.lock().expect("cache lock").insert((kind, d, r), p.clone());
    (p, generic_vars(d))
}

/// Q^(r): monic, degree C(d, r), roots the products of r distinct roots of Q.
pub fn q_plee(q: &TPoly, r: usize) -> Result<TPoly, PlethysmError> {
    if !q.is_monic() {
        return Err(PlethysmError::NotMonic(q.to_string()));
    }
    let d = q.degree().unwrap_or(0) as usize;
    if r == 1 && d >= 1 {
        return Ok(q.clone());
    }
    let (g, vars) = generic_plee(d, r)?;
    Ok(specialise(&g, &vars, q))
}

/// Q^⟨r⟩: monic, degree C(d + r − 1, r), roots the products of r roots with repetition.
pub fn q_pleh(q: &TPoly, r: usize) -> Result<TPoly, PlethysmError> {
    if !q.is_monic() {
        return Err(PlethysmError::NotMonic(q.to_string()));
    }
    let d = q.degree().unwrap_or(0) as usize;
    if r == 1 {
        return Ok(q.clone());
    }
    let (g, vars) = generic_pleh(d, r)?;
    Ok(specialise(&g, &vars, q))
}

/// ψ(s_λ) by the dual Jacobi–Trudi determinant det[H_(λ′_i − i + j)].
pub fn psi_schur(lambda: &PartitionShape, h: &[MPoly]) -> MPoly {
    let conj = lambda.conjugate();
    let k = conj.parts().len();
    let m = Matrix::from_fn(k, |i, j| {
        let idx = conj.part(i) as i64 - i as i64 + j as i64;
        if idx < 0 {
            MPoly::zero()
        } else {
            h.get(idx as usize).cloned().unwrap_or_else(MPoly::zero)
        }
    });
    m.det()
}

/// Binomial coefficient for small arguments.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
