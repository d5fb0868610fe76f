//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! The process exits 0 so the rest of `cargo test` keeps running; set
//! `CYLNET_ACCEPTANCE_STRICT=1` to turn any FAIL into a nonzero exit.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cylnet::algebra::*;
use cylnet::charpoly::{cycle_families, q_n_cycles, q_n_det, simple_cycles};
use cylnet::conjectures::*;
use cylnet::families::*;
use cylnet::paths::*;
use cylnet::plethysm::*;
use cylnet::recurrence::{annihilates, annihilates_rational, annihilates_values};
use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_two_vertex_golden() -> Outcome {
    let net = two_vertex();
    let want = tp("t^2 - (a+e+c*d)*t + (a*e-b*d)");
    let cyc = q_n_cycles(&net).map_err(|e| e.to_string())?;
    let det = q_n_det(&net).q_n;
    ensure(cyc == want, format!("cycles route gave {cyc}"))?;
    ensure(det == want, format!("det route gave {det}"))?;
    ensure(simple_cycles(&net).len() == 4, "expected 4 simple cycles")?;
    let fams = cycle_families(&net).map_err(|e| e.to_string())?;
    let ones = fams.iter().filter(|f| f.r == 1).count();
    let twos = fams.iter().filter(|f| f.r == 2).count();
    ensure((ones, twos, fams.len()) == (4, 1, 6), format!("{ones} one-cycle and {twos} two-cycle families"))?;
    Ok(format!("Q = {want}; families: {ones} single cycles, {twos} pair"))
}

fn c2_lgv_golden() -> Outcome {
    let net = two_vertex();
    let u = RVertex::parse(&net, "u@0,v@0").map_err(|e| e.to_string())?;
    let v = RVertex::parse(&net, "u@1,v@1").map_err(|e| e.to_string())?;
    let a = lgv_matrix(&net, &u, &v).map_err(|e| e.to_string())?;
    let want = Matrix::from_rows(vec![vec![p("a+c*d"), p("b+c*e+a*c+c^2*d")], vec![p("d"), p("e+c*d")]]);
    ensure(a == want, "LGV matrix differs")?;
    ensure(a.det() == p("a*e-b*d"), format!("det = {}", a.det()))?;
    let direct = enumerate_r_paths(&net, &u, &v).map_err(|e| e.to_string())?;
    ensure(direct == a.det(), format!("enumeration gave {direct}"))?;
    Ok("det = a*e - b*d, matches enumeration".into())
}

fn c3_exterior_golden() -> Outcome {
    let m = Matrix::from_rows(vec![
        vec![p("a"), p("0"), p("d")],
        vec![p("0"), p("b"), p("e")],
        vec![p("0"), p("f"), p("c")],
    ]);
    let got = exterior_power(&m, 2).map_err(|e| e.to_string())?;
    let want = Matrix::from_rows(vec![
        vec![p("a*b"), p("a*e"), p("-b*d")],
        vec![p("a*f"), p("a*c"), p("-d*f")],
        vec![p("0"), p("0"), p("b*c-e*f")],
    ]);
    ensure(got == want, "exterior square differs")?;
    let cp = charpoly(&got);
    let want_cp = tp("t - (b*c-e*f)").mul_ref(&tp("(t-a*b)*(t-a*c)").sub_ref(&tp("a^2*e*f")));
    ensure(cp == want_cp, format!("charpoly {cp}"))?;
    Ok("exterior square and its charpoly match".into())
}

fn float_coeffs(q: &TPoly) -> Vec<f64> {
    let d = q.degree().unwrap();
    (0..=d).map(|k| q.coeff(k).as_constant().map(|c| c.to_string().parse::<f64>().unwrap()).unwrap_or(0.0)).collect()
}

fn is_squarefree(q: &TPoly) -> bool {
    let c: Vec<BigRational> =
        (0..=q.degree().unwrap()).map(|k| BigRational::from_integer(q.coeff(k).as_constant().unwrap())).collect();
    let qp = QPoly::new(c);
    qp.squarefree().degree() == qp.degree()
}

fn c4_plethysm_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut accepted, mut rejected) = (0, 0);
    while accepted < 10 {
        let d = 3 + accepted % 2;
        let mut cs: Vec<MPoly> = (0..d).map(|_| MPoly::constant(rng.gen_range(-9i64..=9))).collect();
        cs.push(MPoly::one());
        let q = TPoly::from_coeffs_low(cs);
        let e = q_plee(&q, 2).map_err(|e| e.to_string())?;
        let h = q_pleh(&q, 2).map_err(|e| e.to_string())?;
        // repeated roots make the numeric comparison ill-conditioned
        if !is_squarefree(&h) {
            rejected += 1;
            continue;
        }
        accepted += 1;
        let g = complex_roots(&float_coeffs(&q));
        let mut strict = Vec::new();
        let mut weak = Vec::new();
        for i in 0..d {
            for j in i..d {
                weak.push(g[i] * g[j]);
                if i < j {
                    strict.push(g[i] * g[j]);
                }
            }
        }
        let re: Vec<Complex64> = complex_roots(&float_coeffs(&e));
        let rh: Vec<Complex64> = complex_roots(&float_coeffs(&h));
        ensure(multiset_close(&re, &strict, 1e-7), format!("strict products differ for {q}"))?;
        ensure(multiset_close(&rh, &weak, 1e-7), format!("weak products differ for {q}"))?;
        ensure(h.exact_div(&e).is_ok(), format!("plee does not divide pleh for {q}"))?;
    }
    let generic = q_plee(&tp("t^3 - a1*t^2 + a2*t - a3"), 2).map_err(|e| e.to_string())?;
    let c0 = generic.coeff(0);
    ensure(c0 == p("-a3^2"), format!("generic cubic constant term {c0}"))?;
    Ok(format!(
        "10 polynomials ({rejected} non-squarefree draws skipped); generic cubic plee constant term = {c0}, i.e. alpha3 squared"
    ))
}

fn c5_schur() -> Outcome {
    let net = build_schur(3, 2).map_err(|e| e.to_string())?;
    let q = q_n_cycles(&net).map_err(|e| e.to_string())?;
    ensure(q == tp("(t-x1^2)*(t-x2^2)*(t-x3^2)"), format!("Q = {q}"))?;
    let sq = SchurQuery::new(3, 2, 2, PartitionShape::new(vec![1, 0]).unwrap()).map_err(|e| e.to_string())?;
    let (u, v) = schur_endpoints(&sq);
    let f = lgv_sequence(&net, &u, &v, 6).map_err(|e| e.to_string())?;
    for l in 0..=6 {
        let lam = sq.lambda.plus(&PartitionShape::new(vec![2 * l, 2 * l]).unwrap());
        ensure(f.values[l] == schur_oracle(&lam, 3), format!("f({l}) differs from the Schur oracle"))?;
    }
    let q2 = q_plee(&q, 2).map_err(|e| e.to_string())?;
    ensure(q2 == tp("(t-x1^2*x2^2)*(t-x1^2*x3^2)*(t-x2^2*x3^2)"), format!("plee = {q2}"))?;
    let rep = annihilates(&q2, &f).map_err(|e| e.to_string())?;
    let star = rep.first_valid_index.ok_or("plee does not annihilate f")?;
    ensure(rep.holds && star <= 2, format!("l* = {star}"))?;
    Ok(format!("f(0..6) = s_(1+2l,2l)(x1,x2,x3); plee annihilates from l* = {star}"))
}

fn lozenge_annihilates(m: usize, lq: &LozengeQuery, beta: i64, rpp: &[MPoly]) -> Result<(bool, Option<usize>), String> {
    let q = q_n_cycles(&build_lozenge(m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let q2 = q_plee(&q, lq.r).map_err(|e| e.to_string())?.scale_t(&q_pow(beta)).map_err(|e| e.to_string())?;
    let q2 = q2.make_monic().map_err(|e| e.to_string())?;
    let rep = annihilates_values(&q2, rpp).map_err(|e| e.to_string())?;
    Ok((rep.holds, rep.first_valid_index))
}

fn c6_lozenge() -> Outcome {
    for m in 2..=8 {
        let net = build_lozenge(m).map_err(|e| e.to_string())?;
        let q = q_n_cycles(&net).map_err(|e| e.to_string())?;
        let want = reflect_negated(&carlitz(m + 1), (m / 2) as i32);
        ensure(q == want, format!("m={m}: Q = {q}, expected {want}"))?;
        ensure(q == q_n_det(&net).q_n, format!("m={m}: routes disagree"))?;
    }
    let q4 = q_n_cycles(&build_lozenge(4).unwrap()).map_err(|e| e.to_string())?;
    ensure(q4 == tp("t^2 - (1+q+q^2)*t + q^2"), format!("Q_4 = {q4}"))?;
    let lq = LozengeQuery::new(2, 1, 1, 2, 2).map_err(|e| e.to_string())?;
    let (_, _, _, beta) = lozenge_endpoints_and_beta(&lq).map_err(|e| e.to_string())?;
    let rpp: Vec<MPoly> = (1..=8).map(|l| rpp_oracle(&lq, l)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let (holds5, _) = lozenge_annihilates(5, &lq, beta, &rpp)?;
    let (holds_native, star) = lozenge_annihilates(lq.m(), &lq, beta, &rpp)?;
    let diag = format!(
        "Carlitz identity m=2..8 and Q_4 hold; beta = {beta}; with N_5 annihilation holds = {holds5}; \
         with N_{} (the width the query's endpoints live in) holds = {holds_native}, l* = {star:?}",
        lq.m()
    );
    if holds5 {
        Ok(diag)
    } else {
        Err(diag)
    }
}

fn c7_domino() -> Outcome {
    let net = build_domino(1, 3).map_err(|e| e.to_string())?;
    let q = q_n_cycles(&net).map_err(|e| e.to_string())?;
    let q2 = q_plee(&q, 2).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let point: HashMap<Var, BigRational> =
        net.vars().iter().map(|v| (v.clone(), BigRational::from_integer(rng.gen_range(1i64..=9).into()))).collect();
    let q2n = QPoly::new(q2.eval_coeffs(&point).map_err(|e| e.to_string())?);
    let mut notes = Vec::new();
    for (i, l0) in [(1i64, 0i64), (0, 1)] {
        let dq = DominoQuery::new(1, 3, i, 1, l0).map_err(|e| e.to_string())?;
        let f: Vec<BigRational> = (1..=7)
            .map(|l| domino_oracle(&dq, l).map_err(|e| e.to_string())?.eval(&point).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        let (holds, star) = annihilates_rational(&q2n, &f).map_err(|e| e.to_string())?;
        ensure(holds, format!("l0={l0}: plee does not annihilate Z"))?;
        notes.push(format!("l0={l0}: annihilated from l* = {}", star.unwrap() + 1));
    }
    let fib = |k: usize| -> usize { (0..k).fold((0usize, 1usize), |(a, b), _| (b, a + b)).0 };
    let mut counts = Vec::new();
    let mut count_ok = true;
    for m in 2..=6 {
        let qm = q_n_cycles(&build_domino(1, m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let terms = qm.num_terms();
        count_ok &= terms == fib(2 * m - 1);
        counts.push(format!("m={m}: {terms} terms vs F_{} = {}", 2 * m - 1, fib(2 * m - 1)));
    }
    let msg = format!("{}; term counts: {}", notes.join(", "), counts.join(", "));
    if count_ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c8_theorem_suite() -> Outcome {
    let results: Vec<Result<(usize, usize, usize), String>> = (0..25u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let net = random_local_network(&mut rng, 5, 10);
            let n = net.num_vertices();
            let q = q_n_cycles(&net).map_err(|e| e.to_string())?;
            ensure(q == q_n_det(&net).q_n, format!("network {seed}: routes disagree"))?;
            let d = q.degree().unwrap() as usize;
            let mut worst = (0usize, 0usize, 0usize);
            let len = d + n + 4;
            for a in 0..n {
                for b in 0..n {
                    let f = count_paths_sequence(&net, LiftedVertex::new(a, 0), LiftedVertex::new(b, 0), len)
                        .map_err(|e| e.to_string())?;
                    let rep = annihilates(&q, &f).map_err(|e| e.to_string())?;
                    ensure(rep.holds, format!("network {seed}: Q_N fails on ({a},{b})"))?;
                    worst.0 = worst.0.max(rep.first_valid_index.unwrap());
                }
            }
            if n < 2 || d == 0 {
                return Ok(worst);
            }
            // for d = 1 the strict plethysm is the empty product
            let plee = if d >= 2 { q_plee(&q, 2).map_err(|e| e.to_string())? } else { TPoly::one() };
            let pleh = q_pleh(&q, 2).map_err(|e| e.to_string())?;
            let len = pleh.degree().unwrap() as usize + 2 * n + 4;
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            for &(a, b) in &pairs {
                for &(c, e) in &pairs {
                    let u = RVertex::new(vec![LiftedVertex::new(a, 0), LiftedVertex::new(b, 0)]).unwrap();
                    let v = RVertex::new(vec![LiftedVertex::new(c, 0), LiftedVertex::new(e, 0)]).unwrap();
                    let f = lgv_sequence(&net, &u, &v, len).map_err(|e| e.to_string())?;
                    let rep = annihilates(&pleh, &f).map_err(|e| e.to_string())?;
                    ensure(rep.holds, format!("network {seed}: pleh fails on {u:?} -> {v:?}"))?;
                    worst.1 = worst.1.max(rep.first_valid_index.unwrap());
                    let rep = annihilates(&plee, &f).map_err(|e| e.to_string())?;
                    ensure(rep.holds, format!("network {seed}: plee fails on {u:?} -> {v:?}"))?;
                    worst.2 = worst.2.max(rep.first_valid_index.unwrap());
                }
            }
            Ok(worst)
        })
        .collect();
    let mut worst = (0, 0, 0);
    for r in results {
        let w = r?;
        worst = (worst.0.max(w.0), worst.1.max(w.1), worst.2.max(w.2));
    }
    Ok(format!(
        "25 networks; largest l*: single paths {}, pleh {}, plee {}",
        worst.0, worst.1, worst.2
    ))
}

fn replays(net: &cylnet::network::QuotientNetwork, rep: &ConjectureReport) -> Result<(), String> {
    if rep.counterexamples.is_empty() {
        return Ok(());
    }
    let back: ConjectureReport = serde_json::from_str(&rep.to_json()).map_err(|e| e.to_string())?;
    ensure(back == *rep, "report changed across a JSON round trip")?;
    ensure(replay_report(net, &back).map_err(|e| e.to_string())?, "counterexample does not replay")
}

fn c9_conjectures() -> Outcome {
    let mut nets = vec![
        ("schur(3,1)", build_schur(3, 1).unwrap()),
        ("schur(3,2)", build_schur(3, 2).unwrap()),
        ("schur(2,3)", build_schur(2, 3).unwrap()),
    ];
    for m in 2..=8 {
        nets.push(("lozenge", build_lozenge(m).unwrap()));
    }
    let mut shapes = 0;
    for (name, net) in &nets {
        let rep = check_polya(net, 3).map_err(|e| e.to_string())?;
        replays(net, &rep)?;
        ensure(rep.holds(), format!("{name}: negative Toeplitz minor"))?;
        shapes += rep.instances;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..20u64 {
        let net = random_planar_network(&mut rng, 2 + (k % 2) as usize, 2 + ((k / 2) % 2) as usize);
        let rep = check_real_roots(&net, 1, k).map_err(|e| e.to_string())?;
        replays(&net, &rep)?;
        ensure(rep.holds(), format!("generated network {k}: non-real or non-positive root"))?;
    }
    let schur = build_schur(3, 2).unwrap();
    for r in 1..=2 {
        let rep = check_minimality(&schur, r, 10, 1, EndpointPolicy::SourceToSink).map_err(|e| e.to_string())?;
        replays(&schur, &rep)?;
        ensure(rep.passed == rep.instances, format!("r={r}: {} of {} trials hit the bound", rep.passed, rep.instances))?;
    }
    let tp_net = build_schur(2, 1).unwrap();
    let tp = check_total_positivity(&tp_net, 5, 3).map_err(|e| e.to_string())?;
    replays(&tp_net, &tp)?;
    Ok(format!(
        "Polya: {shapes} shapes nonnegative; real roots: 20/20; minimality: r=1,2 at C(3,r) in 20/20; \
         {} total-positivity counterexamples replayed",
        tp.counterexamples.len()
    ))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("two-vertex characteristic polynomial", Duration::from_secs(1), c1_two_vertex_golden),
        ("LGV matrix of the two-vertex pair", Duration::from_secs(1), c2_lgv_golden),
        ("exterior square example", Duration::from_secs(1), c3_exterior_golden),
        ("plethysm root products", Duration::from_secs(5), c4_plethysm_oracle),
        ("Schur cylinder", Duration::from_secs(30), c5_schur),
        ("lozenge strip", Duration::from_secs(60), c6_lozenge),
        ("domino strip", Duration::from_secs(120), c7_domino),
        ("random local networks", Duration::from_secs(300), c8_theorem_suite),
        ("conjecture evidence", Duration::from_secs(300), c9_conjectures),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let dt = t0.elapsed();
        let out = match out {
            Ok(_) if dt > *budget => Err(format!("took {dt:.2?}, budget {budget:?}")),
            o => o,
        };
        match out {
            Ok(detail) => println!("PASS {} {name} [{dt:.2?}]: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name} [{dt:.2?}]: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 && std::env::var("CYLNET_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
