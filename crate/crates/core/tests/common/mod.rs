#![allow(dead_code)]

use std::collections::HashMap;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;

use cylnet::algebra::{MPoly, Var};
use cylnet::network::{build_network, EdgeSpec, NetworkSpec, QuotientNetwork};

pub const TWO_VERTEX: &str = r#"{
  "vars": ["a", "b", "c", "d", "e"],
  "vertices": ["u", "v"],
  "edges": [
    { "from": "u", "to": "u", "offset": 1, "weight": "a" },
    { "from": "u", "to": "v", "offset": 1, "weight": "b" },
    { "from": "u", "to": "v", "offset": 0, "weight": "c" },
    { "from": "v", "to": "u", "offset": 1, "weight": "d" },
    { "from": "v", "to": "v", "offset": 1, "weight": "e" }
  ]
}"#;

pub fn two_vertex() -> QuotientNetwork {
    QuotientNetwork::from_json(TWO_VERTEX).unwrap()
}

pub fn var(name: &str) -> Var {
    Var::new(name).unwrap()
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn int_point(pairs: &[(&str, i64)]) -> HashMap<Var, BigRational> {
    pairs.iter().map(|&(v, x)| (var(v), rat(x))).collect()
}

/// Random local network: every edge has offset 0 or 1, offset-0 edges only go from a
/// lower to a higher vertex index, and each edge gets its own variable.
pub fn random_local_network<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> QuotientNetwork {
    loop {
        let nv = rng.gen_range(1..=max_vertices);
        let ne = rng.gen_range(1..=max_edges);
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::new();
        for _ in 0..ne {
            let from = rng.gen_range(0..nv);
            let to = rng.gen_range(0..nv);
            let offset = if from < to && rng.gen_bool(0.4) { 0 } else { 1 };
            if !seen.insert((from, to, offset)) {
                continue;
            }
            edges.push((from, to, offset));
        }
        let vars: Vec<String> = (0..edges.len()).map(|k| format!("w{k}")).collect();
        let spec = NetworkSpec {
            vars: vars.clone(),
            vertices: (0..nv).map(|i| format!("v{i}")).collect(),
            edges: edges
                .iter()
                .zip(&vars)
                .map(|(&(f, t, o), w)| EdgeSpec { from: format!("v{f}"), to: format!("v{t}"), offset: o, weight: w.clone() })
                .collect(),
            planar: false,
        };
        let net = build_network(&spec).unwrap();
        if !cylnet::charpoly::simple_cycles(&net).is_empty() {
            return net;
        }
    }
}

/// Random Laurent-free polynomial in x, y, z with small coefficients.
pub fn small_poly<R: Rng>(rng: &mut R) -> MPoly {
    let mut acc = MPoly::zero();
    for _ in 0..rng.gen_range(0..5) {
        let mut t = MPoly::constant(rng.gen_range(-4i64..=4));
        for name in ["x", "y", "z"] {
            t = t.mul_ref(&MPoly::var(&var(name)).pow(rng.gen_range(0..3)));
        }
        acc = acc.add_ref(&t);
    }
    acc
}

/// All complex roots of a polynomial with real coefficients (low to high), by Aberth iteration.
pub fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let c: Vec<f64> = coeffs.iter().map(|x| x / lead).collect();
    // Fujiwara's bound keeps the starting circle near the true root moduli.
    let radius = (1..=n).fold(0.0f64, |m, k| m.max(c[n - k].abs().powf(1.0 / k as f64))) * 2.0 + 1e-3;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &ck in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + ck;
        }
        (p, dp)
    };
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            z[i] -= w;
            delta = delta.max(w.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Greedy multiset match of complex numbers up to a relative tolerance.
pub fn multiset_close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let best = (0..b.len())
            .filter(|&j| !used[j])
            .min_by(|&i, &j| (b[i] - x).norm().partial_cmp(&(b[j] - x).norm()).unwrap());
        match best {
            Some(j) if (b[j] - x).norm() <= tol * (1.0 + x.norm()) => used[j] = true,
            _ => return false,
        }
    }
    true
}
