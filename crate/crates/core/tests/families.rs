mod common;

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cylnet::algebra::*;
use cylnet::charpoly::{cycle_families, q_n_cycles, q_n_det, simple_cycles};
use cylnet::families::*;
use cylnet::paths::{count_paths, lgv_matrix, lgv_sequence, RVertex};
use cylnet::plethysm::{q_plee, PartitionShape};
use cylnet::recurrence::annihilates_rational;
use common::*;

fn shape(parts: &[usize]) -> PartitionShape {
    PartitionShape::new(parts.to_vec()).unwrap()
}

/// Σ x^T over semistandard tableaux of shape λ with entries 1..=n.
fn ssyt_sum(lambda: &[usize], n: usize) -> MPoly {
    let cells: Vec<(usize, usize)> =
        lambda.iter().enumerate().flat_map(|(i, &len)| (0..len).map(move |j| (i, j))).collect();
    let mut filling: HashMap<(usize, usize), usize> = HashMap::new();
    fn rec(cells: &[(usize, usize)], k: usize, n: usize, f: &mut HashMap<(usize, usize), usize>, acc: &mut MPoly) {
        if k == cells.len() {
            let mono = f.values().fold(MPoly::one(), |m, &x| m.mul_ref(&MPoly::var(&var(&format!("x{x}")))));
            *acc = acc.add_ref(&mono);
            return;
        }
        let (i, j) = cells[k];
        let lo_row = if j > 0 { f[&(i, j - 1)] } else { 1 };
        let lo_col = if i > 0 { f[&(i - 1, j)] + 1 } else { 1 };
        for x in lo_row.max(lo_col)..=n {
            f.insert((i, j), x);
            rec(cells, k + 1, n, f, acc);
            f.remove(&(i, j));
        }
    }
    let mut acc = MPoly::zero();
    rec(&cells, 0, n, &mut filling, &mut acc);
    acc
}

#[test]
fn schur_oracle_basics() {
    assert_eq!(schur_oracle(&PartitionShape::empty(), 3), MPoly::one());
    assert_eq!(schur_oracle(&shape(&[1]), 2), p("x1+x2"));
    assert_eq!(schur_oracle(&shape(&[1, 1, 1]), 2), MPoly::zero());
    let s21 = schur_oracle(&shape(&[2, 1]), 3);
    assert_eq!(s21, ssyt_sum(&[2, 1], 3));
    let total: i64 = s21.terms().iter().map(|(_, c)| i64::try_from(c.clone()).unwrap()).sum();
    assert_eq!(total, 8);
    for lam in [vec![3], vec![2, 2], vec![3, 1, 1], vec![2, 2, 1]] {
        assert_eq!(schur_oracle(&shape(&lam), 3), ssyt_sum(&lam, 3), "{lam:?}");
    }
}

#[test]
fn schur_single_row_paths() {
    for m in 1..=3 {
        let net = build_schur(2, m).unwrap();
        let q = SchurQuery::new(2, m, 1, shape(&[2])).unwrap();
        let (u, v) = schur_endpoints(&q);
        assert_eq!(count_paths(&net, u.vertices()[0], v.vertices()[0]).unwrap(), p("x1^2+x1*x2+x2^2"));
    }
    assert_eq!(q_n_cycles(&build_schur(1, 4).unwrap()).unwrap(), tp("t - x1^4"));
}

#[test]
fn schur_query_validation() {
    assert!(SchurQuery::new(2, 1, 3, shape(&[1])).is_err());
    assert!(build_schur(0, 1).is_err());
}

#[test]
fn schur_sequence_matches_oracle() {
    let (n, m) = (3, 1);
    let net = build_schur(n, m).unwrap();
    let q = SchurQuery::new(n, m, 2, shape(&[2, 1])).unwrap();
    let (u, v) = schur_endpoints(&q);
    let f = lgv_sequence(&net, &u, &v, 4).unwrap();
    for (l, x) in f.values.iter().enumerate() {
        assert_eq!(x, &schur_oracle(&q.lambda.plus(&shape(&[l, l])), n));
    }
}

#[test]
fn carlitz_values() {
    assert_eq!(carlitz(0), TPoly::zero());
    assert_eq!(carlitz(1), TPoly::one());
    assert_eq!(carlitz(2), TPoly::one());
    assert_eq!(carlitz(4), tp("(1+q)*t + 1"));
    assert_eq!(carlitz(5), tp("q^2*t^2 + (1+q+q^2)*t + 1"));
}

#[test]
fn lozenge_q_n_is_reflected_carlitz() {
    for m in 2..=8 {
        let net = build_lozenge(m).unwrap();
        let q = q_n_cycles(&net).unwrap();
        let d = (m / 2) as i32;
        assert_eq!(q.degree(), Some(d));
        assert_eq!(q, reflect_negated(&carlitz(m + 1), d), "m={m}");
        assert_eq!(q, q_n_det(&net).q_n);
    }
    assert!(build_lozenge(1).is_err());
}

#[test]
fn rpp_trivial_cases() {
    let q = LozengeQuery::new(1, 1, 1, 1, 3).unwrap();
    // Y(1,1,1,1,0) is a single box
    assert_eq!(q.rows(0).iter().map(|(lo, hi)| hi - lo).sum::<usize>(), 1);
    assert_eq!(rpp_oracle(&q, 0).unwrap(), p("1+q+q^2+q^3"));
    assert!(LozengeQuery::new(2, 1, 1, 1, 1).is_err());
    assert!(matches!(rpp_oracle_limited(&LozengeQuery::new(3, 3, 3, 3, 3).unwrap(), 4, 5), Err(FamilyError::EnumerationLimit { .. })));
}

#[test]
fn rpp_oracle_counts_fillings() {
    let q = LozengeQuery::new(2, 1, 1, 2, 2).unwrap();
    for l in 0..=3 {
        let fillings = rpp_fillings(&q, l, 1_000_000).unwrap();
        let mut acc: HashMap<i32, i64> = HashMap::new();
        for f in &fillings {
            *acc.entry(f.iter().flatten().sum::<u32>() as i32).or_insert(0) += 1;
        }
        let want = MPoly::from_terms(acc.into_iter().map(|(e, c)| (Monomial::var(q_var(), e), c.into())));
        assert_eq!(rpp_oracle(&q, l).unwrap(), want);
    }
}

fn check_bijection(q: &LozengeQuery, l: usize) {
    let (u, v, alpha, beta) = lozenge_endpoints_and_beta(q).unwrap();
    let v = v.shifted(l as i64);
    let net = build_lozenge(q.m()).unwrap();
    let mut total = MPoly::zero();
    let mut images = BTreeSet::new();
    for f in rpp_fillings(q, l, 1_000_000).unwrap() {
        let size: i64 = f.iter().flatten().map(|&x| x as i64).sum();
        let (paths, exp) = lozenge_paths(q, l, &f).unwrap();
        assert_eq!(exp - size, alpha + beta * l as i64);
        for (k, path) in paths.iter().enumerate() {
            assert_eq!(path[0], u.vertices()[k]);
            assert_eq!(*path.last().unwrap(), v.vertices()[k]);
        }
        let all: Vec<_> = paths.iter().flatten().collect();
        assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), all.len(), "paths must be disjoint");
        assert!(images.insert(format!("{paths:?}")));
        total = total.add_ref(&q_pow(exp));
    }
    assert_eq!(total, lgv_matrix(&net, &u, &v).unwrap().det());
}

#[test]
fn lozenge_bijection_single_level() {
    check_bijection(&LozengeQuery::new(2, 1, 1, 2, 1).unwrap(), 2);
}

#[test]
fn lozenge_bijection_two_levels() {
    let q = LozengeQuery::new(2, 1, 1, 2, 2).unwrap();
    for l in 1..=3 {
        check_bijection(&q, l);
    }
}

#[test]
fn lozenge_baseline_is_consistent() {
    let q = LozengeQuery::new(2, 1, 1, 2, 2).unwrap();
    let (_, _, alpha, beta) = lozenge_endpoints_and_beta(&q).unwrap();
    for l in 1..=4 {
        let zero: Vec<Vec<u32>> = q.rows(l).iter().map(|&(lo, hi)| vec![0; hi - lo]).collect();
        let (_, e) = lozenge_paths(&q, l, &zero).unwrap();
        assert_eq!(e, alpha + beta * l as i64);
    }
}

/// Perfect matchings of a cell set by pairing the first free cell with a later neighbour.
fn matching_count(cells: &[Cell]) -> u64 {
    let mut sorted = cells.to_vec();
    sorted.sort_by_key(|&(a, b)| (b, a));
    let pos: HashMap<Cell, usize> = sorted.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    fn go(sorted: &[Cell], pos: &HashMap<Cell, usize>, used: u128, memo: &mut HashMap<u128, u64>) -> u64 {
        let Some(k) = (0..sorted.len()).find(|&k| used & (1 << k) == 0) else { return 1 };
        if let Some(&c) = memo.get(&used) {
            return c;
        }
        let (a, b) = sorted[k];
        let mut total = 0;
        for nb in [(a + 1, b), (a, b + 1)] {
            if let Some(&j) = pos.get(&nb) {
                if used & (1 << j) == 0 {
                    total += go(sorted, pos, used | (1 << k) | (1 << j), memo);
                }
            }
        }
        memo.insert(used, total);
        total
    }
    assert!(sorted.len() <= 128);
    go(&sorted, &pos, 0, &mut HashMap::new())
}

#[test]
fn domino_tiling_counts_match_matchings() {
    for (i, j, l) in [(1, 1, 0), (2, 1, 1), (3, 1, 2), (4, 1, 3), (2, 0, 2), (3, 2, 1), (5, 1, 4)] {
        let region = aztec_region(3, i, j, l);
        let tilings = domino_tilings(&region, 1_000_000).unwrap();
        assert_eq!(tilings.len() as u64, matching_count(&region), "({i},{j},{l})");
    }
}

#[test]
fn single_domino_has_weight_one() {
    let region = vec![(0, 1), (1, 1)];
    let tilings = domino_tilings(&region, 10).unwrap();
    assert_eq!(tilings.len(), 1);
    assert_eq!(tiling_weight(1, 3, &region, &tilings[0]), MPoly::one());
}

#[test]
fn domino_network_shape() {
    let net = build_domino(1, 3).unwrap();
    assert_eq!(net.num_vertices(), 3);
    assert!(build_domino(0, 3).is_err());
    assert!(build_domino(1, 1).is_err());
    for m in 2..=6 {
        let net = build_domino(1, m).unwrap();
        let q = q_n_cycles(&net).unwrap();
        assert_eq!(q.num_terms() as usize, cycle_families(&net).unwrap().len(), "m={m}");
    }
}

#[test]
fn domino_one_cycles_invert_to_cylinder_tilings() {
    let (n, m) = (1usize, 3usize);
    let net = build_domino(n, m).unwrap();
    let bases = domino_bases(n, m);
    let period = 2 * n as i64;
    let wrap = |c: Cell| (c.0.rem_euclid(period), c.1);
    for cyc in simple_cycles(&net).iter().filter(|c| c.winding == 1) {
        // white square right of each black tail pairs with the edge head; every other
        // white square pairs with its left neighbour
        let mut partner: HashMap<Cell, Cell> = HashMap::new();
        for &e in &cyc.edges {
            let edge = &net.edges()[e];
            let tail = bases[edge.tail];
            partner.insert(wrap((tail.0 + 1, tail.1)), bases[edge.head]);
        }
        let mut covered: HashMap<Cell, usize> = HashMap::new();
        for a in 0..period {
            for b in 0..m as i64 {
                let w = (a, b);
                if is_black(w) {
                    continue;
                }
                let s = *partner.get(&w).unwrap_or(&wrap((a - 1, b)));
                let adjacent = [(a - 1, b), (a + 1, b), (a, b - 1), (a, b + 1)].iter().any(|&c| wrap(c) == s && c.1 >= 0);
                assert!(adjacent, "domino {w:?}-{s:?} is not a domino");
                *covered.entry(s).or_insert(0) += 1;
            }
        }
        assert_eq!(covered.len(), bases.len());
        assert!(covered.values().all(|&k| k == 1));
    }
}

fn ratio_is_constant(n: usize, m: usize, i: i64, j: i64, l: i64) {
    let (u, v) = domino_endpoints(n, m, i, j, l).unwrap();
    let r = (m as i64 - j).min(l) as usize;
    assert_eq!(u.len(), r);
    let region = aztec_region(m, i, j, l);
    let mut taus = BTreeSet::new();
    let mut z_full = MPoly::zero();
    for t in domino_tilings(&region, 1_000_000).unwrap() {
        let paths = edges_to_paths(&tiling_to_edges(&region, &t)).unwrap();
        let starts: Vec<_> = paths.iter().map(|p| domino_vertex(n, m, p[0]).unwrap()).collect();
        let ends: Vec<_> = paths.iter().map(|p| domino_vertex(n, m, *p.last().unwrap()).unwrap()).collect();
        assert_eq!(RVertex::new(starts).unwrap(), u);
        assert_eq!(RVertex::new(ends).unwrap(), v);
        let w = cell_paths_weight(n, m, &paths).unwrap();
        let tw = tiling_weight_with_boundary(n, m, &region, &t);
        taus.insert(tw.mul_ref(&w.pow_i(-1).unwrap()).to_string());
        z_full = z_full.add_ref(&tw);
    }
    assert_eq!(taus.len(), 1, "({i},{j},{l}): {taus:?}");
    let tau = p(taus.iter().next().unwrap());
    if l < m as i64 - j {
        // fewer paths than rows above j: the determinant also counts paths that leave the region
        return;
    }
    let net = build_domino(n, m).unwrap();
    assert_eq!(z_full, lgv_matrix(&net, &u, &v).unwrap().det().mul_ref(&tau), "({i},{j},{l})");
}

#[test]
fn domino_bijection_and_constant_ratio() {
    for (i, j, l) in [(2, 1, 1), (3, 1, 2), (4, 1, 3), (5, 1, 2), (3, 2, 1), (4, 2, 2), (5, 2, 3)] {
        ratio_is_constant(1, 3, i, j, l);
    }
}

#[test]
fn domino_oracle_recurrence_single_path() {
    let net = build_domino(1, 3).unwrap();
    let q = q_n_cycles(&net).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let point: HashMap<Var, BigRational> = net.vars().iter().map(|v| (v.clone(), rat(rng.gen_range(2..30)))).collect();
    let qq = QPoly::new(q_plee(&q, 1).unwrap().eval_coeffs(&point).unwrap());
    let dq = DominoQuery::new(1, 3, 0, 2, 0).unwrap();
    let f: Vec<BigRational> = (1..=7).map(|l| domino_oracle(&dq, l).unwrap().eval(&point).unwrap()).collect();
    let (holds, _) = annihilates_rational(&qq, &f).unwrap();
    assert!(holds);
}

#[test]
fn domino_query_validation() {
    assert!(DominoQuery::new(1, 3, 0, 4, 0).is_err());
    assert!(domino_endpoints(1, 3, 1, 1, 1).is_err());
    let q = DominoQuery::new(1, 3, 1, 1, 0).unwrap();
    assert_eq!(q.region_args(2), (3, 1, 2));
}

#[test]
fn fibonacci_numbers() {
    let f: Vec<u64> = (0..10).map(fibonacci).collect();
    assert_eq!(f, vec![0, 1, 1, 2, 3, 5, 8, 13, 21, 34]);
}
