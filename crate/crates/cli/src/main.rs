use std::collections::{BTreeMap, HashMap};
use std::error::Error;
use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cylnet::algebra::{parse_mpoly, MPoly, TPoly, Var};
use cylnet::charpoly::{q_n_cycles, q_n_det};
use cylnet::conjectures::{
    check_minimality, check_polya, check_real_roots, check_total_positivity, point_from_strings, point_to_strings,
    replay_report, ConjectureReport, EndpointPolicy,
};
use cylnet::families::{
    build_domino, build_lozenge, build_schur, domino_z, rpp_oracle, schur_oracle, DominoQuery, LozengeQuery,
};
use cylnet::network::QuotientNetwork;
use cylnet::paths::{count_paths_sequence, lgv_sequence, RVertex, SequenceF};
use cylnet::plethysm::{q_plee, q_pleh, PartitionShape};
use cylnet::recurrence::{annihilates_values, minimal_recurrence, RecurrenceError};

const NETWORK_HELP: &str = "\
Networks are JSON files (or \"-\" for standard input):
  {\"vars\": [\"a\", ...], \"vertices\": [\"u\", ...],
   \"edges\": [{\"from\": \"u\", \"to\": \"v\", \"offset\": 1, \"weight\": \"a*b^-1\"}, ...],
   \"planar\": false}
Weights use integers, variables, + - * ^ (integer exponents) and parentheses.
Lifted vertices are written label@shift, r-vertices as comma lists: \"u@0,v@-1\".";

#[derive(Parser)]
#[command(name = "cylnet", version, about = "Cylindrical networks: characteristic polynomials, path sequences and recurrences", after_help = NETWORK_HELP)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Q_N by cycle families and by det(Id − B(t)), with an agreement verdict.
    #[command(after_help = NETWORK_HELP)]
    Qpoly {
        network: String,
    },
    /// Q_N^(r): roots are products of r distinct roots of Q_N.
    #[command(after_help = NETWORK_HELP)]
    Plee {
        network: String,
        #[arg(short)]
        r: usize,
    },
    /// Q_N^<r>: roots are products of r roots of Q_N with repetition.
    #[command(after_help = NETWORK_HELP)]
    Pleh {
        network: String,
        #[arg(short)]
        r: usize,
    },
    /// f(ℓ) = weighted count of r-paths from u to v + ℓ·g, one polynomial per line.
    #[command(after_help = NETWORK_HELP)]
    Paths {
        network: String,
        #[command(flatten)]
        ends: Endpoints,
    },
    /// Checks that a recurrence polynomial annihilates a path sequence.
    #[command(after_help = NETWORK_HELP)]
    Verify {
        network: String,
        #[command(flatten)]
        ends: Endpoints,
        /// Which polynomial to apply.
        #[arg(long, value_enum, default_value_t = PolyKind::Qn)]
        poly: PolyKind,
        /// Rank for plee/pleh (defaults to the number of endpoints).
        #[arg(short)]
        r: Option<usize>,
        /// Read the sequence from a file (one expression per line) instead of computing it.
        #[arg(long)]
        sequence: Option<String>,
    },
    /// Minimal recurrence (Berlekamp–Massey over ℚ) of a path sequence at substitution points.
    #[command(after_help = NETWORK_HELP)]
    Minimal {
        network: String,
        #[command(flatten)]
        ends: Endpoints,
        /// Leading terms to ignore.
        #[arg(long, default_value_t = 0)]
        drop: usize,
        /// Explicit point, e.g. "a=2,b=3/4"; unlisted variables are drawn at random.
        #[arg(long)]
        at: Option<String>,
        /// Number of random points.
        #[arg(long, default_value_t = 1)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Read the sequence from a file (one expression per line) instead of computing it.
        #[arg(long)]
        sequence: Option<String>,
    },
    /// Emits the network JSON of an application family.
    Family {
        #[command(subcommand)]
        which: FamilyCmd,
    },
    /// Brute-force oracles, printed as canonical polynomials.
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
    /// Seeded experiments on the positivity, real-root and minimality conjectures.
    ///
    /// The JSON report goes to standard output and a summary to standard error.
    #[command(after_help = NETWORK_HELP)]
    Conjecture {
        #[arg(value_enum)]
        which: ConjKind,
        network: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest Toeplitz minor for polya.
        #[arg(long, default_value_t = 3)]
        max_minor: usize,
        /// Path count for minimal.
        #[arg(short, default_value_t = 1)]
        r: usize,
        /// Endpoint policy for minimal.
        #[arg(long, value_enum, default_value_t = Policy::Strong)]
        policy: Policy,
        /// Replay the counterexamples of a stored report instead of running trials.
        #[arg(long)]
        replay: Option<String>,
    },
}

#[derive(Args)]
struct Endpoints {
    /// Source r-vertex, e.g. "u@0,v@-1".
    #[arg(long)]
    from: String,
    /// Target r-vertex at ℓ = 0.
    #[arg(long)]
    to: String,
    /// Last index ℓ.
    #[arg(long)]
    lmax: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolyKind {
    Qn,
    Plee,
    Pleh,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConjKind {
    Polya,
    Roots,
    Tp,
    Minimal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Policy {
    Strong,
    SourceSink,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// m × n cylinder carrying Schur polynomials in x1..xn.
    Schur {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        m: usize,
    },
    /// Strip of width m carrying bounded reverse plane partitions.
    Lozenge {
        #[arg(short)]
        m: usize,
    },
    /// Black squares of the height-m strip, period 2n.
    Domino {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        m: usize,
        /// JSON object mapping weight variables to expressions.
        #[arg(long)]
        weights: Option<String>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// s_λ(x1..xn) by Jacobi–Trudi.
    Schur {
        /// Parts, e.g. "3,1".
        #[arg(long)]
        lambda: String,
        #[arg(short)]
        n: usize,
    },
    /// Σ q^|π| over reverse plane partitions of Y(a,b,c,d,ℓ) with entries ≤ r, ℓ = 0..=lmax.
    Rpp {
        #[arg(short)]
        a: usize,
        #[arg(short)]
        b: usize,
        #[arg(short)]
        c: usize,
        #[arg(short)]
        d: usize,
        #[arg(short)]
        r: usize,
        #[arg(long)]
        lmax: usize,
    },
    /// Z_m(i + ℓ, j, ℓn + ℓ0) by tiling enumeration, ℓ = 0..=lmax.
    Domino {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        m: usize,
        #[arg(short)]
        i: i64,
        #[arg(short)]
        j: i64,
        #[arg(long, default_value_t = 0)]
        l0: i64,
        #[arg(long)]
        lmax: usize,
    },
}

/// Failures that map to exit status 1 rather than 2.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl Error for Failed {}

type Res = Result<bool, Box<dyn Error>>;

fn read_input(path: &str) -> Result<String, Box<dyn Error>> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?)
    }
}

fn load_network(path: &str) -> Result<QuotientNetwork, Box<dyn Error>> {
    Ok(QuotientNetwork::from_json(&read_input(path)?)?)
}

fn read_sequence(path: &str) -> Result<Vec<MPoly>, Box<dyn Error>> {
    read_input(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| parse_mpoly(l).map_err(|e| format!("{l:?}: {e}").into()))
        .collect()
}

fn endpoints(net: &QuotientNetwork, e: &Endpoints) -> Result<(RVertex, RVertex), Box<dyn Error>> {
    let u = RVertex::parse(net, &e.from)?;
    let v = RVertex::parse(net, &e.to)?;
    if u.len() != v.len() {
        return Err(format!("--from has {} vertices but --to has {}", u.len(), v.len()).into());
    }
    Ok((u, v))
}

fn sequence(net: &QuotientNetwork, e: &Endpoints) -> Result<SequenceF, Box<dyn Error>> {
    let (u, v) = endpoints(net, e)?;
    if u.len() == 1 {
        Ok(count_paths_sequence(net, u.vertices()[0], v.vertices()[0], e.lmax)?)
    } else {
        Ok(lgv_sequence(net, &u, &v, e.lmax)?)
    }
}

fn out(s: &str) {
    let mut o = io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = o.write_all(s.as_bytes());
    if !s.ends_with('\n') {
        let _ = o.write_all(b"\n");
    }
}

fn cmd_qpoly(fmt: Format, path: &str) -> Res {
    let net = load_network(path)?;
    let cyc = q_n_cycles(&net)?;
    let det = q_n_det(&net).q_n;
    let agree = cyc == det;
    match fmt {
        Format::Text => out(&format!("cycles: {cyc}\ndet:    {det}\n{}", if agree { "AGREE" } else { "DISAGREE" })),
        Format::Json => out(&json!({"cycles": cyc.to_string(), "det": det.to_string(), "agree": agree}).to_string()),
    }
    Ok(agree)
}

fn cmd_pleth(fmt: Format, path: &str, r: usize, exterior: bool) -> Res {
    let net = load_network(path)?;
    let q = q_n_det(&net).q_n;
    let p = if exterior { q_plee(&q, r)? } else { q_pleh(&q, r)? };
    match fmt {
        Format::Text => out(&p.to_string()),
        Format::Json => out(&json!({"r": r, "poly": p.to_string()}).to_string()),
    }
    Ok(true)
}

fn cmd_paths(fmt: Format, path: &str, e: &Endpoints) -> Res {
    let net = load_network(path)?;
    let f = sequence(&net, e)?;
    match fmt {
        Format::Text => out(&f.to_string()),
        Format::Json => {
            let vals: Vec<String> = f.values.iter().map(|v| v.to_string()).collect();
            out(&json!({"values": vals}).to_string())
        }
    }
    Ok(true)
}

fn recurrence_poly(net: &QuotientNetwork, kind: PolyKind, r: usize) -> Result<TPoly, Box<dyn Error>> {
    let q = q_n_det(net).q_n;
    Ok(match kind {
        PolyKind::Qn => q,
        PolyKind::Plee => q_plee(&q, r)?,
        PolyKind::Pleh => q_pleh(&q, r)?,
    })
}

fn cmd_verify(fmt: Format, path: &str, e: &Endpoints, kind: PolyKind, r: Option<usize>, seq: Option<&str>) -> Res {
    let net = load_network(path)?;
    let (u, _) = endpoints(&net, e)?;
    let values = match seq {
        Some(p) => read_sequence(p)?,
        None => sequence(&net, e)?.values,
    };
    let q = recurrence_poly(&net, kind, r.unwrap_or(u.len()))?;
    let rep = annihilates_values(&q, &values)?;
    match fmt {
        Format::Text => out(&format!("poly: {q}\n{rep}")),
        Format::Json => {
            let res: Vec<String> = rep.residuals.iter().map(|x| x.to_string()).collect();
            out(&json!({
                "poly": q.to_string(),
                "holds": rep.holds,
                "first_valid_index": rep.first_valid_index,
                "residuals": res,
            })
            .to_string())
        }
    }
    Ok(rep.holds)
}

fn parse_point(s: &str) -> Result<BTreeMap<String, String>, Box<dyn Error>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| format!("expected var=value, got {p:?}"))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_minimal(
    fmt: Format,
    path: &str,
    e: &Endpoints,
    drop: usize,
    at: Option<&str>,
    points: usize,
    seed: u64,
    seq: Option<&str>,
) -> Res {
    use rand::{Rng, SeedableRng};
    let net = load_network(path)?;
    let values = match seq {
        Some(p) => read_sequence(p)?,
        None => sequence(&net, e)?.values,
    };
    let fixed = match at {
        Some(s) => point_from_strings(&parse_point(s)?)?,
        None => HashMap::new(),
    };
    let mut vars: Vec<Var> = net.vars().to_vec();
    for v in values.iter().flat_map(|p| p.vars()) {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    let count = if at.is_some() && vars.iter().all(|v| fixed.contains_key(v)) { 1 } else { points.max(1) };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut ok = true;
    for _ in 0..count {
        let mut point = fixed.clone();
        for v in &vars {
            point.entry(v.clone()).or_insert_with(|| {
                num_rational::BigRational::new(rng.gen_range(1..=30i64).into(), rng.gen_range(1..=7i64).into())
            });
        }
        let f = values.iter().map(|p| p.eval(&point)).collect::<Result<Vec<_>, _>>()?;
        let res = minimal_recurrence(&f, drop);
        let shown = point_to_strings(&point);
        match res {
            Ok(m) => rows.push(json!({
                "point": shown,
                "poly": m.poly.to_string(),
                "degree": m.poly.degree(),
                "offset": m.offset,
            })),
            Err(err @ RecurrenceError::InsufficientData { .. }) => return Err(err.into()),
            Err(err) => {
                ok = false;
                rows.push(json!({"point": shown, "error": err.to_string()}));
            }
        }
    }
    match fmt {
        Format::Json => out(&serde_json::to_string_pretty(&rows)?),
        Format::Text => {
            for r in &rows {
                let pt: Vec<String> = r["point"]
                    .as_object()
                    .map(|o| o.iter().map(|(k, v)| format!("{k}={}", v.as_str().unwrap_or(""))).collect())
                    .unwrap_or_default();
                out(&format!("point: {}", pt.join(",")));
                match r.get("poly") {
                    Some(p) => out(&format!(
                        "minimal: {} (degree {}, offset {})",
                        p.as_str().unwrap_or(""),
                        r["degree"],
                        r["offset"]
                    )),
                    None => out(&format!("error: {}", r["error"].as_str().unwrap_or(""))),
                }
            }
        }
    }
    Ok(ok)
}

fn cmd_family(which: &FamilyCmd) -> Res {
    let net = match which {
        FamilyCmd::Schur { n, m } => build_schur(*n, *m)?,
        FamilyCmd::Lozenge { m } => build_lozenge(*m)?,
        FamilyCmd::Domino { n, m, weights } => {
            let net = build_domino(*n, *m)?;
            match weights {
                None => net,
                Some(p) => {
                    let raw: BTreeMap<String, String> = serde_json::from_str(&read_input(p)?)?;
                    let mut map = HashMap::new();
                    for (k, v) in raw {
                        map.insert(Var::new(&k)?, parse_mpoly(&v)?);
                    }
                    net.substitute_weights(&map)?
                }
            }
        }
    };
    out(&net.to_json());
    Ok(true)
}

fn print_values(fmt: Format, vals: &[MPoly]) {
    match fmt {
        Format::Text => {
            for v in vals {
                out(&v.to_string());
            }
        }
        Format::Json => {
            let s: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
            out(&json!({"values": s}).to_string());
        }
    }
}

fn cmd_oracle(fmt: Format, which: &OracleCmd) -> Res {
    let vals = match which {
        OracleCmd::Schur { lambda, n } => {
            let parts = lambda
                .split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()?;
            vec![schur_oracle(&PartitionShape::new(parts)?, *n)]
        }
        OracleCmd::Rpp { a, b, c, d, r, lmax } => {
            let q = LozengeQuery::new(*a, *b, *c, *d, *r)?;
            (0..=*lmax).map(|l| rpp_oracle(&q, l)).collect::<Result<Vec<_>, _>>()?
        }
        OracleCmd::Domino { n, m, i, j, l0, lmax } => {
            let q = DominoQuery::new(*n, *m, *i, *j, *l0)?;
            (0..=*lmax as i64)
                .map(|l| {
                    let (ii, jj, ll) = q.region_args(l);
                    domino_z(*n, *m, ii, jj, ll)
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    print_values(fmt, &vals);
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_conjecture(
    which: ConjKind,
    path: &str,
    trials: usize,
    seed: u64,
    max_minor: usize,
    r: usize,
    policy: Policy,
    replay: Option<&str>,
) -> Res {
    let net = load_network(path)?;
    if let Some(p) = replay {
        let rep: ConjectureReport = serde_json::from_str(&read_input(p)?)?;
        let ok = replay_report(&net, &rep)?;
        out(&json!({"replayed": rep.counterexamples.len(), "reproduced": ok}).to_string());
        eprintln!("{} counterexample(s) {}", rep.counterexamples.len(), if ok { "reproduced" } else { "did NOT reproduce" });
        return if ok { Ok(true) } else { Err(Box::new(Failed("replay mismatch".into()))) };
    }
    let rep = match which {
        ConjKind::Polya => check_polya(&net, max_minor)?,
        ConjKind::Roots => check_real_roots(&net, trials, seed)?,
        ConjKind::Tp => check_total_positivity(&net, trials, seed)?,
        ConjKind::Minimal => {
            let pol = match policy {
                Policy::Strong => EndpointPolicy::StronglyConnected,
                Policy::SourceSink => EndpointPolicy::SourceToSink,
            };
            check_minimality(&net, r, trials, seed, pol)?
        }
    };
    out(&rep.to_json());
    eprint!("{rep}");
    Ok(rep.holds())
}

fn run(cli: Cli) -> Res {
    let fmt = cli.format;
    match &cli.command {
        Command::Qpoly { network } => cmd_qpoly(fmt, network),
        Command::Plee { network, r } => cmd_pleth(fmt, network, *r, true),
        Command::Pleh { network, r } => cmd_pleth(fmt, network, *r, false),
        Command::Paths { network, ends } => cmd_paths(fmt, network, ends),
        Command::Verify { network, ends, poly, r, sequence } => {
            cmd_verify(fmt, network, ends, *poly, *r, sequence.as_deref())
        }
        Command::Minimal { network, ends, drop, at, points, seed, sequence } => {
            cmd_minimal(fmt, network, ends, *drop, at.as_deref(), *points, *seed, sequence.as_deref())
        }
        Command::Family { which } => cmd_family(which),
        Command::Oracle { which } => cmd_oracle(fmt, which),
        Command::Conjecture { which, network, trials, seed, max_minor, r, policy, replay } => {
            cmd_conjecture(*which, network, *trials, *seed, *max_minor, *r, *policy, replay.as_deref())
        }
    }
}

fn configure_threads() -> Result<(), Box<dyn Error>> {
    let Ok(v) = std::env::var("CYLNET_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("CYLNET_THREADS must be a non-negative integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<Failed>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
