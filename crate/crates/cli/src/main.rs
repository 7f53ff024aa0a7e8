//! Command-line front end: graph construction, polytope checks, shadow
//! rendering, certificate verification, rank bounds, closure-rank
//! derivations, and the reproduction manifest.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use stabrank::cert::{
    replay_certificate, verify_recursive, violates_symmetric_facet, CertificateParams,
    ClosedFormResolver, MembershipCertificate,
};
use stabrank::cg::{rank_bounds, run_upper_derivation, verify_lower_witness};
use stabrank::graph::{
    build_hk, build_lk, build_lk2, build_qls, cycle_graph, path_graph, petersen, Graph,
};
use stabrank::polytope::{
    alpha, b_inequality, classify_maximal_stable_sets, enumerate_stable_sets, is_facet, is_valid,
    symmetric_inequality,
};
use stabrank::rank::{
    analytic_bound, greedy_search, upper_bound_chain, Method, RankBoundReport,
};
use stabrank::real::{format_rat, parse_rat, Rat, DEFAULT_BITS};
use stabrank::shadow::{phi_frac, phi_stab, shadow_csv, shadow_svg};

/// Errors that should surface as exit code 2 (usage) rather than 1.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

macro_rules! usage {
    ($($arg:tt)+) => {
        return Err(anyhow::Error::new(UsageError(format!($($arg)+))))
    };
}

#[derive(Parser)]
#[command(name = "stabrank", version, about = "Verified rank bounds for stable set polytopes")]
struct Cli {
    /// Enclosure precision in bits (also via STABRANK_PREC_BITS).
    #[arg(long, global = true)]
    bits: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct graphs from the built-in families.
    Graph(GraphArgs),
    /// Stable set polytope checks on small graphs.
    Stab(StabArgs),
    /// Emit the 2-D shadow data (CSV or SVG).
    Shadow(ShadowArgs),
    /// Verify membership certificates.
    Certify(CertifyArgs),
    /// Rank lower bounds via slope sequences.
    Rank(RankArgs),
    /// Closure-rank bounds and derivations.
    Cg(CgArgs),
    /// Run the reproduction manifest.
    Repro(ReproArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Family spec: hk:<k>, lk:<base>:<k>, lk2:<base1>:<base2>:<k>,
    /// qls:<l>:<d1,d2,...>, petersen. Bases: p<n>, c<n>, q:<l>:<d,...>.
    #[arg(long)]
    family: String,
    /// Destroy this vertex (label) after construction.
    #[arg(long)]
    destroy: Option<String>,
    /// Delete these vertices (comma-separated labels) after construction.
    #[arg(long)]
    delete: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StabArgs {
    /// Graph to inspect: hk:<k> or a JSON file path.
    #[arg(long)]
    graph: String,
    /// Also classify maximal stable sets (three-layer family only).
    #[arg(long)]
    classify: bool,
    /// Check the dropped-pair facet for indices j, j' (three-layer family).
    #[arg(long, value_names = ["J", "JP"], num_args = 2)]
    facet: Option<Vec<usize>>,
    /// Check validity of the layer-symmetric inequality.
    #[arg(long)]
    symmetric: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShadowFormat {
    Csv,
    Svg,
}

#[derive(Args)]
struct ShadowArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: ShadowFormat,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Certificate JSON file to replay.
    #[arg(long, conflicts_with_all = ["example_h7", "k"])]
    file: Option<PathBuf>,
    /// Verify the built-in depth-2 example for k = 7.
    #[arg(long)]
    example_h7: bool,
    /// Build and verify a certificate from explicit parameters.
    #[arg(long, requires = "p", requires = "params")]
    k: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// Exact rationals a,b,c,d (comma-separated, e.g. "1553/10000,...").
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    k: usize,
    /// Sweep from k up to this value (JSONL output, resumable).
    #[arg(long)]
    sweep: Option<usize>,
    /// Starting margin above the terminal slope threshold.
    #[arg(long, default_value = "1/1000000")]
    eps: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CgMode {
    Lower,
    Upper,
    Both,
}

#[derive(Args)]
struct CgArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum, default_value = "both")]
    mode: CgMode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproArgs {
    /// Run the full manifest.
    #[arg(long, conflicts_with = "only")]
    all: bool,
    /// Run only these criterion ids (comma-separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<usize>,
    /// Directory for machine-readable outcomes.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn effective_bits(cli_bits: Option<u32>) -> u32 {
    cli_bits
        .or_else(|| {
            std::env::var("STABRANK_PREC_BITS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_BITS)
}

fn write_or_print(out: &Option<PathBuf>, contents: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, contents)
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn parse_base_graph(spec: &str) -> anyhow::Result<Graph> {
    if let Some(rest) = spec.strip_prefix('p') {
        if let Ok(n) = rest.parse::<usize>() {
            return Ok(path_graph(n)?);
        }
    }
    if let Some(rest) = spec.strip_prefix('c') {
        if let Ok(n) = rest.parse::<usize>() {
            return Ok(cycle_graph(n)?);
        }
    }
    if let Some(rest) = spec.strip_prefix("q:") {
        let (l, dists) = rest
            .split_once(':')
            .ok_or_else(|| anyhow!("expected q:<l>:<d1,d2,...>"))?;
        let l: usize = l.parse().context("bad string length")?;
        let set = dists
            .split(',')
            .map(|d| d.parse::<usize>().context("bad distance"))
            .collect::<anyhow::Result<std::collections::BTreeSet<_>>>()?;
        return Ok(build_qls(l, &set)?);
    }
    usage!("unknown base graph spec {spec:?} (use p<n>, c<n>, or q:<l>:<d,...>)")
}

fn build_family(spec: &str) -> anyhow::Result<Graph> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["hk", k] => Ok(build_hk(k.parse().context("bad k")?)?),
        ["lk", base, k] => Ok(build_lk(&parse_base_graph(base)?, k.parse().context("bad k")?)?),
        ["lk2", b1, b2, k] => Ok(build_lk2(
            &parse_base_graph(b1)?,
            &parse_base_graph(b2)?,
            k.parse().context("bad k")?,
        )?),
        ["qls", l, dists] => {
            let set = dists
                .split(',')
                .map(|d| d.parse::<usize>().context("bad distance"))
                .collect::<anyhow::Result<std::collections::BTreeSet<_>>>()?;
            Ok(build_qls(l.parse().context("bad l")?, &set)?)
        }
        ["petersen"] => Ok(petersen()),
        _ => usage!("unknown family {spec:?}"),
    }
}

fn load_graph(spec: &str) -> anyhow::Result<Graph> {
    if let Some(rest) = spec.strip_prefix("hk:") {
        return Ok(build_hk(rest.parse().context("bad k")?)?);
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading graph file {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    Ok(Graph::from_json(&value)?)
}

fn cmd_graph(args: &GraphArgs) -> anyhow::Result<()> {
    let mut g = build_family(&args.family)?;
    if let Some(v) = &args.destroy {
        g = g.destroy(v)?;
    }
    if let Some(list) = &args.delete {
        let labels: Vec<&str> = list.split(',').collect();
        g = g.delete(&labels)?;
    }
    let summary = serde_json::json!({
        "vertices": g.n(),
        "edges": g.edge_count(),
        "bipartite": g.is_bipartite(),
        "regular": g.is_regular(),
    });
    eprintln!("{summary}");
    write_or_print(&args.out, &serde_json::to_string_pretty(&g.to_json())?)
}

fn cmd_stab(args: &StabArgs) -> anyhow::Result<()> {
    let g = load_graph(&args.graph)?;
    let sets = enumerate_stable_sets(&g)?;
    let mut report = BTreeMap::new();
    report.insert("vertices".to_string(), serde_json::json!(g.n()));
    report.insert("stable_sets".to_string(), serde_json::json!(sets.len()));
    report.insert("alpha".to_string(), serde_json::json!(alpha(&g)?));

    let hk_k = if args.graph.starts_with("hk:") {
        Some(g.n() / 3)
    } else {
        None
    };
    if args.classify {
        let k = hk_k.ok_or_else(|| anyhow!("--classify needs a three-layer graph (hk:<k>)"))?;
        let classes = classify_maximal_stable_sets(k)?;
        report.insert(
            "maximal_classes".to_string(),
            serde_json::json!({
                "layer_type": classes.class_one.len(),
                "swap_type": classes.class_two.len(),
            }),
        );
    }
    if let Some(pair) = &args.facet {
        let k = hk_k.ok_or_else(|| anyhow!("--facet needs a three-layer graph (hk:<k>)"))?;
        let ineq = b_inequality(k, pair[0], pair[1])?;
        let facet = is_facet(&g, &ineq)?;
        report.insert(
            "facet".to_string(),
            serde_json::json!({
                "j": pair[0], "jp": pair[1], "is_facet": facet,
                "inequality": ineq.to_json(&g),
            }),
        );
        if !facet {
            anyhow::bail!("facet check failed for ({}, {})", pair[0], pair[1]);
        }
    }
    if args.symmetric {
        let k = hk_k.ok_or_else(|| anyhow!("--symmetric needs a three-layer graph (hk:<k>)"))?;
        let ineq = symmetric_inequality(k)?;
        let valid = is_valid(&g, &ineq)?;
        report.insert(
            "symmetric_valid".to_string(),
            serde_json::json!({ "valid": valid, "inequality": ineq.to_json(&g) }),
        );
        if !valid {
            anyhow::bail!("symmetric inequality is not valid");
        }
    }
    write_or_print(&args.out, &serde_json::to_string_pretty(&report)?)
}

fn cmd_shadow(args: &ShadowArgs) -> anyhow::Result<()> {
    let contents = match args.format {
        ShadowFormat::Csv => shadow_csv(args.k, args.samples)?,
        ShadowFormat::Svg => shadow_svg(args.k, args.samples)?,
    };
    eprintln!(
        "stab shadow vertices: {:?}",
        phi_stab(args.k)?
            .vertices
            .iter()
            .map(|(x, y)| format!("({}, {})", format_rat(x), format_rat(y)))
            .collect::<Vec<_>>()
    );
    eprintln!(
        "frac shadow vertices: {:?}",
        phi_frac(args.k)?
            .vertices
            .iter()
            .map(|(x, y)| format!("({}, {})", format_rat(x), format_rat(y)))
            .collect::<Vec<_>>()
    );
    write_or_print(&args.out, &contents)
}

fn cmd_certify(args: &CertifyArgs) -> anyhow::Result<()> {
    let cert: MembershipCertificate = if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        let cert = MembershipCertificate::from_json(&value)?;
        replay_certificate(&cert)?;
        cert
    } else if args.example_h7 {
        let params = stabrank::cert::example_h7_params();
        verify_recursive(&params, 2, &ClosedFormResolver)?
    } else if let (Some(k), Some(p), Some(raw)) = (args.k, args.p, &args.params) {
        let values = raw
            .split(',')
            .map(parse_rat)
            .collect::<stabrank::Result<Vec<Rat>>>()?;
        if values.len() != 4 {
            usage!("--params needs exactly four rationals a,b,c,d");
        }
        let params = CertificateParams::new(
            k,
            values[0].clone(),
            values[1].clone(),
            values[2].clone(),
            values[3].clone(),
        );
        if p == 1 {
            stabrank::cert::verify_first_level(&params)?;
            MembershipCertificate { params, p: 1, children: Vec::new() }
        } else {
            verify_recursive(&params, p, &ClosedFormResolver)?
        }
    } else {
        usage!("choose one of --file, --example-h7, or --k/--p/--params");
    };

    let k = cert.params.k;
    let violated = violates_symmetric_facet(k, &cert.params.a, &cert.params.b);
    println!(
        "certificate verified: point in relaxation level {} of the {k}-member; facet violated: {violated}{}",
        cert.p,
        if violated {
            format!(" => rank >= {}", cert.p + 1)
        } else {
            String::new()
        }
    );
    if let Some(path) = &args.out {
        std::fs::write(path, serde_json::to_string_pretty(&cert.to_json())?)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn rank_report(k: usize, eps: &Rat, bits: u32) -> anyhow::Result<RankBoundReport> {
    let verified = greedy_search(k, eps, bits)?;
    Ok(RankBoundReport::from_sequence(verified))
}

fn cmd_rank(args: &RankArgs, bits: u32) -> anyhow::Result<()> {
    let eps = parse_rat(&args.eps)?;
    match args.sweep {
        None => {
            let report = rank_report(args.k, &eps, bits)?;
            let mut value = report.to_json();
            if args.k <= 128 {
                let upper = upper_bound_chain(args.k)?;
                value["upper_bound"] = serde_json::json!({
                    "method": serde_json::to_value(Method::DestroyUpper)?,
                    "bound": upper,
                });
            }
            if args.k >= 4 {
                value["analytic_floor"] = serde_json::json!(analytic_bound(args.k)?);
            }
            println!(
                "rank({}) >= {} via slope sequence of length {}",
                args.k,
                report.bound,
                report.bound - 1
            );
            write_or_print(&args.out, &serde_json::to_string_pretty(&value)?)
        }
        Some(kmax) => {
            if kmax < args.k {
                usage!("--sweep bound below --k");
            }
            let out = args
                .out
                .clone()
                .ok_or_else(|| anyhow!("--sweep requires --out for the report store"))?;
            // Resume: keep rows whose k we already have.
            let mut existing: BTreeMap<usize, serde_json::Value> = BTreeMap::new();
            if out.exists() {
                for line in std::fs::read_to_string(&out)?.lines() {
                    if line.trim().is_empty() {
                        continue;
                    }
                    let value: serde_json::Value = serde_json::from_str(line)?;
                    if let Some(k) = value.get("k").and_then(|v| v.as_u64()) {
                        existing.insert(k as usize, value);
                    }
                }
            }
            let missing: Vec<usize> =
                (args.k..=kmax).filter(|k| !existing.contains_key(k)).collect();
            let computed: Vec<(usize, serde_json::Value)> = missing
                .par_iter()
                .map(|&k| {
                    let row = match rank_report(k, &eps, bits) {
                        Ok(r) => r.to_json(),
                        Err(e) => serde_json::json!({ "k": k, "error": e.to_string() }),
                    };
                    (k, row)
                })
                .collect();
            existing.extend(computed);
            let mut file = std::fs::File::create(&out)?;
            for row in existing.values() {
                writeln!(file, "{row}")?;
            }
            println!("sweep complete: {} rows in {}", existing.len(), out.display());
            Ok(())
        }
    }
}

fn cmd_cg(args: &CgArgs, bits: u32) -> anyhow::Result<()> {
    let mut value = serde_json::Map::new();
    match args.mode {
        CgMode::Lower | CgMode::Both => {
            let witness = verify_lower_witness(args.d)?;
            let (lower, upper) = rank_bounds(witness.k, bits)?;
            value.insert("lower_witness".into(), witness.to_json());
            value.insert(
                "bounds".into(),
                serde_json::json!({
                    "k": witness.k,
                    "lower_exclusive": format!("{lower}"),
                    "upper_inclusive": format!("{upper}"),
                }),
            );
            println!(
                "lower witness verified for d = {}: rank > {} for the {}-member",
                args.d, args.d, witness.k
            );
        }
        CgMode::Upper => {}
    }
    match args.mode {
        CgMode::Upper | CgMode::Both => {
            let derivation = run_upper_derivation(args.d.max(2))?;
            println!(
                "upper derivation verified for d = {}: floor {} = k - 1",
                derivation.d,
                format_rat(&derivation.floored_rhs)
            );
            value.insert("upper_derivation".into(), derivation.to_json());
        }
        CgMode::Lower => {}
    }
    write_or_print(&args.out, &serde_json::to_string_pretty(&serde_json::Value::Object(value))?)
}

fn cmd_repro(args: &ReproArgs) -> anyhow::Result<()> {
    if !args.all && args.only.is_empty() {
        usage!("choose --all or --only <ids>");
    }
    let outcomes = stabrank::repro::run(&args.only);
    let mut all_passed = true;
    println!("{:<4} {:<42} {:<6} {:>8}  detail", "id", "criterion", "status", "seconds");
    for o in &outcomes {
        all_passed &= o.passed;
        println!(
            "{:<4} {:<42} {:<6} {:>8.2}  {}",
            o.id,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.seconds,
            o.detail
        );
    }
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        let rows: Vec<serde_json::Value> = outcomes
            .iter()
            .map(|o| {
                serde_json::json!({
                    "id": o.id, "name": o.name, "passed": o.passed,
                    "seconds": o.seconds, "detail": o.detail,
                })
            })
            .collect();
        let path = dir.join("repro.json");
        std::fs::write(&path, serde_json::to_string_pretty(&rows)?)?;
        eprintln!("wrote {}", path.display());
    }
    if !all_passed {
        std::process::exit(1);
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let bits = effective_bits(cli.bits);
    let result = match &cli.command {
        Command::Graph(args) => cmd_graph(args),
        Command::Stab(args) => cmd_stab(args),
        Command::Shadow(args) => cmd_shadow(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Rank(args) => cmd_rank(args, bits),
        Command::Cg(args) => cmd_cg(args, bits),
        Command::Repro(args) => cmd_repro(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        let code = if e.downcast_ref::<UsageError>().is_some() { 2 } else { 1 };
        std::process::exit(code);
    }
}
