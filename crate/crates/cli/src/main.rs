use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use qhsing::families::{
    chain_data, check_saito_params, cycle_divisor, cycle_weights, fermat, orlik_randell_check,
    saito_family, ChainSpec, CycleSpec,
};
use qhsing::fixtures;
use qhsing::monodromy::{elementary_sets_check, saito_check};
use qhsing::orlik_graph::build_graph;
use qhsing::scan::{compute_record, run_scan, ScanConfig};
use qhsing::weight_systems::{check_conditions, ConditionReport};
use qhsing::{Error, WeightSystem};
use std::path::PathBuf;
use std::process::ExitCode;

/// Monodromy divisors, exponents and elementary-divisor graph conditions
/// of quasihomogeneous weight systems.
#[derive(Parser)]
#[command(name = "qhsing", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print D_w in Ψ and Λ form, μ, d_w, d_mon and the exponents.
    Divisor {
        /// `v1,...,vn:d` or `s1/t1,...,sn/tn`.
        ws: String,
        /// Print the full record as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate (C1), (C2) and their variants and the conjecture checks.
    Check {
        ws: String,
        #[arg(long)]
        json: bool,
    },
    /// Build the graph on a set of orders and evaluate its conditions.
    Graph {
        /// Comma-separated orders, e.g. `30,20,6,4`.
        m: String,
        /// Also print the graph in DOT format.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Generate a family member: `cycle:a1,..,an`, `chain:a1,..,an`,
    /// `fermat:t1,..,tn` or `ts:k,q1,q2`.
    Family { spec: String },
    /// Scan weight systems and write one JSON record per system.
    Scan(ScanArgs),
    /// Recompute the golden examples and report differences.
    Fixtures,
}

#[derive(Args)]
struct ScanArgs {
    /// Flat key=value file with the same keys as the flags.
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d_max: Option<u64>,
    #[arg(long)]
    mu_max: Option<u64>,
    /// exhaustive, saito, cycle, chain or fermat.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    resume: bool,
    #[arg(long)]
    allow_exhaustive_n4: bool,
}

const EXIT_COUNTEREXAMPLE: u8 = 3;

fn main() -> ExitCode {
    // exit quietly when piped into `head`
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Divisor { ws, json } => divisor(&ws, json)?,
        Command::Check { ws, json } => check(&ws, json)?,
        Command::Graph { m, dot, json } => graph(&m, dot, json)?,
        Command::Family { spec } => family(&spec)?,
        Command::Scan(args) => return scan(args),
        Command::Fixtures => return Ok(run_fixtures()),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_ws(text: &str) -> anyhow::Result<WeightSystem> {
    text.parse()
        .with_context(|| format!("cannot read weight system `{text}`"))
}

fn parse_list(text: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .map(|tok| {
            tok.trim().parse::<u64>().map_err(|_| Error::Parse {
                token: tok.trim().to_string(),
                reason: "expected a positive integer".into(),
            })
        })
        .collect()
}

fn divisor(text: &str, json: bool) -> anyhow::Result<()> {
    let ws = parse_ws(text)?;
    let record = compute_record(&ws)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&record)?);
        return Ok(());
    }
    println!("D = {} ; mu={}", record.divisor.psi_form(), record.mu);
    println!("Lambda form: {}", record.lambda_text);
    println!("ws={} weights={}", record.ws, record.weights.join(","));
    println!("d_w={}", record.d_w);
    match record.d_mon {
        Some(d) => println!("d_mon={d}"),
        None => println!("d_mon=undefined (not a characteristic polynomial)"),
    }
    if record.exponents.is_empty() {
        println!("exponents: rho is not a polynomial");
    } else {
        let hist: Vec<String> = record
            .exponents
            .iter()
            .map(|e| format!("{}^{}", e.alpha, e.count))
            .collect();
        println!("exponents: {}", hist.join(" "));
    }
    Ok(())
}

fn print_conditions(r: &ConditionReport) {
    println!(
        "C1={} C1'={} C2={} C1bar={} C1'bar={} C2bar={}",
        r.c1, r.c1_prime, r.c2, r.c1_bar, r.c1_prime_bar, r.c2_bar
    );
    for f in &r.witness_failures {
        let j: Vec<String> = f.subset.iter().map(|i| (i + 1).to_string()).collect();
        println!("  {} fails for J={{{}}}: {}", f.condition, j.join(","), f.detail);
    }
}

fn check(text: &str, json: bool) -> anyhow::Result<()> {
    let ws = parse_ws(text)?;
    let conditions = check_conditions(&ws)?;
    let elementary = elementary_sets_check(&ws)?;
    let saito = if conditions.c1 {
        Some(saito_check(&ws)?)
    } else {
        None
    };
    if json {
        let value = serde_json::json!({
            "ws": ws.reduce().to_string(),
            "conditions": conditions,
            "elementary_sets": elementary,
            "saito": saito,
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
        return Ok(());
    }
    println!("ws={}", ws.reduce());
    print_conditions(&conditions);
    println!(
        "elementary_sets={} ({} elementary divisors)",
        verdict_text(elementary.verdict)?,
        elementary.sets
    );
    for v in &elementary.distinct {
        println!(
            "  M_{}..M_{} = {:?}: I={} II={} strong={}",
            v.j_from, v.j_to, v.m, v.condition_i, v.condition_ii, v.strong
        );
    }
    if let Some(s) = saito {
        println!(
            "d_w={} order_d_w_or_half={} ({}) order_d_w={} ({})",
            s.d_w,
            s.order_or_half,
            verdict_text(s.order_or_half_verdict())?,
            s.order_present,
            verdict_text(s.order_verdict())?
        );
    }
    Ok(())
}

fn verdict_text(v: qhsing::monodromy::Verdict) -> anyhow::Result<String> {
    Ok(serde_json::to_value(v)?.as_str().unwrap_or_default().to_string())
}

fn graph(text: &str, dot: bool, json: bool) -> anyhow::Result<()> {
    let m = parse_list(text)?;
    let g = build_graph(&m)?;
    let report = g.report();
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!(
            "condition_I={} condition_II={}",
            report.condition_i, report.condition_ii
        );
        let tp: Vec<String> = report.tp.iter().map(|(p, ok)| format!("T_{p}={ok}")).collect();
        println!(
            "connected={} S_2={} {} strong={}",
            report.connected,
            report.s2,
            tp.join(" "),
            report.strong
        );
        for e in g.edges() {
            println!("  {} -> {} (p={})", e.from, e.to, e.prime);
        }
    }
    if dot {
        print!("{}", g.to_dot());
    }
    Ok(())
}

fn family(spec: &str) -> anyhow::Result<()> {
    let Some((kind, params)) = spec.split_once(':') else {
        bail!("malformed family `{spec}`: expected kind:params");
    };
    let params = parse_list(params)?;
    let (ws, divisor) = match kind {
        "cycle" => {
            let spec = CycleSpec::new(params)?;
            (cycle_weights(&spec)?, cycle_divisor(&spec)?)
        }
        "chain" => {
            let spec = ChainSpec::chain(params)?;
            let data = chain_data(&spec)?;
            println!("beta={:?} alpha={:?}", data.beta, data.alpha);
            println!("orlik_randell={}", orlik_randell_check(&spec)?);
            (data.weights, data.divisor)
        }
        "fermat" => {
            let ws = fermat(&params)?;
            let d = qhsing::weight_systems::divisor_d(&ws);
            (ws, d)
        }
        "ts" => {
            let [k, q1, q2] = params[..] else {
                bail!("malformed family `{spec}`: ts takes k,q1,q2");
            };
            let k = u32::try_from(k).context("k out of range")?;
            check_saito_params(k, q1, q2)?;
            let ws = saito_family(k, q1, q2)?;
            let d = qhsing::weight_systems::divisor_d(&ws);
            (ws, d)
        }
        other => bail!("unknown family `{other}` (expected cycle, chain, fermat or ts)"),
    };
    let weights: Vec<String> = ws.normalize().iter().map(ToString::to_string).collect();
    println!("weights={}", weights.join(","));
    println!("ws={}", ws.reduce());
    println!("D = {}", divisor.lambda_form());
    println!("mu={}", divisor.degree());
    Ok(())
}

fn scan(args: ScanArgs) -> anyhow::Result<ExitCode> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            ScanConfig::from_config_text(&text)?
        }
        None => ScanConfig::default(),
    };
    if let Some(n) = args.n {
        cfg.n = Some(n);
    }
    if let Some(d) = args.d_max {
        cfg.d_max = Some(d);
    }
    if let Some(mu) = args.mu_max {
        cfg.mu_max = mu;
    }
    if let Some(mode) = &args.mode {
        cfg.mode = mode.parse()?;
    }
    if let Some(jobs) = args.jobs {
        cfg.jobs = jobs;
    }
    if let Some(out) = args.out {
        cfg.out = Some(out);
    }
    cfg.resume |= args.resume;
    cfg.allow_exhaustive_n4 |= args.allow_exhaustive_n4;

    let outcome = run_scan(&cfg)?;
    for r in outcome.records.iter().filter(|r| r.is_counterexample()) {
        println!("counterexample: {}", serde_json::to_string(r)?);
    }
    println!("{}", serde_json::to_string_pretty(&outcome.summary)?);
    Ok(if outcome.summary.found_counterexample() {
        ExitCode::from(EXIT_COUNTEREXAMPLE)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_fixtures() -> ExitCode {
    let results = fixtures::run_all();
    for r in &results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("{status} {} ({} checks)", r.name, r.checks);
        for d in &r.diffs {
            println!("  {d}");
        }
    }
    if results.iter().all(|r| r.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
