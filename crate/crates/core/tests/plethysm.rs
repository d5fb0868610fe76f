mod common;

use std::collections::HashMap;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cylnet::algebra::*;
use cylnet::charpoly::{h_coefficients, q_n_cycles};
use cylnet::families::build_schur;
use cylnet::plethysm::*;
use common::*;

fn int_matrix<R: Rng>(rng: &mut R, n: usize) -> Matrix<MPoly> {
    Matrix::from_fn(n, |_, _| MPoly::constant(rng.gen_range(-9i64..=9)))
}

fn float_coeffs(q: &TPoly) -> Vec<f64> {
    let d = q.degree().unwrap();
    (0..=d).map(|k| q.coeff(k).as_constant().map(|c| c.to_string().parse::<f64>().unwrap()).unwrap_or(0.0)).collect()
}

fn example_matrix() -> Matrix<MPoly> {
    Matrix::from_rows(vec![
        vec![p("a"), p("0"), p("d")],
        vec![p("0"), p("b"), p("e")],
        vec![p("0"), p("f"), p("c")],
    ])
}

#[test]
fn exterior_square_worked_example() {
    let got = exterior_power(&example_matrix(), 2).unwrap();
    let want = Matrix::from_rows(vec![
        vec![p("a*b"), p("a*e"), p("-b*d")],
        vec![p("a*f"), p("a*c"), p("-d*f")],
        vec![p("0"), p("0"), p("b*c-e*f")],
    ]);
    assert_eq!(got, want);
    let cp = charpoly(&got);
    let want_cp = tp("t - (b*c-e*f)").mul_ref(&tp("(t-a*b)*(t-a*c)").sub_ref(&tp("a^2*e*f")));
    assert_eq!(cp, want_cp);
}

#[test]
fn trivial_exterior_powers() {
    let m = example_matrix();
    assert_eq!(exterior_power(&m, 1).unwrap(), m);
    assert_eq!(exterior_power(&m, 0).unwrap(), Matrix::<MPoly>::identity(1));
    assert!(matches!(exterior_power(&m, 4), Err(PlethysmError::BadRank { .. })));
    assert_eq!(symmetric_power(&m, 1), m);
}

#[test]
fn exterior_power_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let a = int_matrix(&mut rng, 4);
        let b = int_matrix(&mut rng, 4);
        let lhs = exterior_power(&a.mul(&b), 2).unwrap();
        let rhs = exterior_power(&a, 2).unwrap().mul(&exterior_power(&b, 2).unwrap());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn symmetric_square_of_diagonal() {
    let m = Matrix::from_rows(vec![vec![p("g1"), p("0")], vec![p("0"), p("g2")]]);
    let want = Matrix::from_rows(vec![
        vec![p("g1^2"), p("0"), p("0")],
        vec![p("0"), p("g1*g2"), p("0")],
        vec![p("0"), p("0"), p("g2^2")],
    ]);
    assert_eq!(symmetric_power(&m, 2), want);
}

#[test]
fn symmetric_square_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let m = int_matrix(&mut rng, 3);
        let roots = complex_roots(&float_coeffs(&charpoly(&m)));
        let mut want = Vec::new();
        for i in 0..3 {
            for j in i..3 {
                want.push(roots[i] * roots[j]);
            }
        }
        let got = complex_roots(&float_coeffs(&charpoly(&symmetric_power(&m, 2))));
        assert!(multiset_close(&got, &want, 1e-6), "{got:?} vs {want:?}");
    }
}

#[test]
fn companion_realizes_q() {
    let q = tp("t^3 - a1*t^2 + a2*t - a3");
    assert_eq!(charpoly(&companion(&q).unwrap().matrix), q);
    assert!(companion(&tp("2*t + 1")).is_err());
}

#[test]
fn extreme_ranks() {
    let q = tp("t^3 - a1*t^2 + a2*t - a3");
    assert_eq!(q_plee(&q, 1).unwrap(), q);
    assert_eq!(q_plee(&q, 3).unwrap(), tp("t - a3"));
    assert_eq!(q_pleh(&q, 1).unwrap(), q);
    assert!(matches!(q_plee(&q, 4), Err(PlethysmError::BadRank { .. })));
}

#[test]
fn generic_cubic_second_elementary_plethysm() {
    let q = tp("t^3 - a1*t^2 + a2*t - a3");
    assert_eq!(q_plee(&q, 2).unwrap(), tp("t^3 - a2*t^2 + a1*a3*t - a3^2"));
}

#[test]
fn generic_cubic_second_homogeneous_plethysm() {
    let q = tp("t^3 - a1*t^2 + a2*t - a3");
    let h2 = q_pleh(&q, 2).unwrap();
    assert_eq!(h2.degree(), Some(6));
    assert_eq!(h2.coeff(5), p("a2 - a1^2"));
    assert!(h2.exact_div(&q_plee(&q, 2).unwrap()).is_ok());
}

#[test]
fn schur_plethysm_factors() {
    let q = q_n_cycles(&build_schur(3, 2).unwrap()).unwrap();
    let want = [(1, 2), (1, 3), (2, 3)]
        .iter()
        .fold(TPoly::one(), |acc, (i, j)| acc.mul_ref(&tp(&format!("t - x{i}^2*x{j}^2"))));
    assert_eq!(q_plee(&q, 2).unwrap(), want);
}

#[test]
fn degrees_and_monicity() {
    for d in 1..=4 {
        let (q, _) = generic_plee(d, 1).unwrap();
        for r in 1..=3 {
            let h = q_pleh(&q, r).unwrap();
            assert!(h.is_monic());
            assert_eq!(h.degree(), Some(binomial(d + r - 1, r) as i32));
            if r <= d {
                let e = q_plee(&q, r).unwrap();
                assert!(e.is_monic());
                assert_eq!(e.degree(), Some(binomial(d, r) as i32));
                let allowed: std::collections::BTreeSet<Var> = q.iter().flat_map(|(_, c)| c.vars()).collect();
                for (_, c) in e.iter().chain(h.iter()) {
                    assert!(c.vars().is_subset(&allowed));
                }
            }
        }
    }
}

#[test]
fn psi_on_columns_and_empty() {
    let h = h_coefficients(&q_n_cycles(&two_vertex()).unwrap());
    assert_eq!(psi_schur(&PartitionShape::empty(), &h), MPoly::one());
    for r in 0..h.len() {
        let col = PartitionShape::new(vec![1; r]).unwrap();
        assert_eq!(psi_schur(&col, &h), h[r]);
    }
}

#[test]
fn psi_matches_numeric_symmetric_functions() {
    let net = two_vertex();
    let q = q_n_cycles(&net).unwrap();
    let h = h_coefficients(&q);
    let pt = int_point(&[("a", 3), ("b", 2), ("c", 5), ("d", 1), ("e", 7)]);
    let fpt: HashMap<Var, f64> = pt.iter().map(|(k, v)| (k.clone(), v.to_string().parse().unwrap())).collect();
    let coeffs: Vec<f64> = q.iter().map(|(_, c)| c.eval_f64(&fpt).unwrap()).collect();
    let g = complex_roots(&coeffs);
    let e2 = g[0] * g[1];
    let h2 = g[0] * g[0] + g[0] * g[1] + g[1] * g[1];
    let value = |lambda: Vec<usize>| psi_schur(&PartitionShape::new(lambda).unwrap(), &h).eval_f64(&fpt).unwrap();
    assert!((Complex64::new(value(vec![1, 1]), 0.0) - e2).norm() < 1e-9);
    assert!((Complex64::new(value(vec![2]), 0.0) - h2).norm() < 1e-9);
    assert_eq!(psi_schur(&PartitionShape::new(vec![2]).unwrap(), &h), h[1].mul_ref(&h[1]).sub_ref(&h[0].mul_ref(&h[2])));
}

fn squarefree(q: &TPoly) -> bool {
    let c: Vec<num_rational::BigRational> =
        (0..=q.degree().unwrap()).map(|k| num_rational::BigRational::from_integer(q.coeff(k).as_constant().unwrap())).collect();
    let qp = QPoly::new(c);
    qp.squarefree().degree() == qp.degree()
}

fn monic_int_poly(coeffs: &[i64]) -> TPoly {
    let mut cs: Vec<MPoly> = coeffs.iter().map(|&c| MPoly::constant(c)).collect();
    cs.push(MPoly::one());
    TPoly::from_coeffs_low(cs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn numeric_roots_of_plethysms(coeffs in prop::collection::vec(-9i64..=9, 2..=4), r in 2usize..=3) {
        let q = monic_int_poly(&coeffs);
        let d = coeffs.len();
        let g = complex_roots(&float_coeffs(&q));
        let h = q_pleh(&q, r).unwrap();
        prop_assume!(squarefree(&h));
        prop_assert!(multiset_close(&complex_roots(&float_coeffs(&h)), &weak_products(&g, r), 1e-6));
        if r <= d {
            let e = q_plee(&q, r).unwrap();
            prop_assert!(multiset_close(&complex_roots(&float_coeffs(&e)), &strict_products(&g, r), 1e-6));
            prop_assert!(h.exact_div(&e).is_ok());
        }
    }
}

fn strict_products(g: &[Complex64], r: usize) -> Vec<Complex64> {
    subsets(g.len(), r).iter().map(|s| s.iter().map(|&i| g[i]).product()).collect()
}

fn weak_products(g: &[Complex64], r: usize) -> Vec<Complex64> {
    multisets(g.len(), r).iter().map(|s| s.iter().map(|&i| g[i]).product()).collect()
}
