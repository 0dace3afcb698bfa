use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use glnn_core::borelcomb::{
    emit_borel_graph, enumerate_borels, is_simple_odd, odd_simple_roots, restrict_label, rho, BorelLabel, GraphFormat,
};
use glnn_core::dsfunctor::{certify_copies, certify_zero, ds_homology, CertifyOptions};
use glnn_core::envmod::{bg_datum, induce, verma_datum};
use glnn_core::harness::{
    default_depth, init_threads, mabg_grid, sample_mabg, sample_tuples, tuple_grid, verify_conjecture,
    verify_gl22_examples, verify_mabg, verify_structure, ConjectureParams, ScenarioReport,
};
use glnn_core::weightlat::{antidominant_representative, atypicality, bilinear_form, pr_alpha, Character};
use glnn_core::{Error, RhoTuple, Root, Weight};

/// `println!` that exits quietly when stdout is closed, e.g. by `head`.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

#[derive(Parser, Debug)]
#[command(name = "glnn", version, about = "Exact computations for gl(n|n)")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Zero the timing fields so that reports are reproducible.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker threads (overrides GLNN_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// TOML file with defaults for the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the Borel labels of rank n, or print the odd-reflection graph.
    Borels {
        n: usize,
        #[arg(long)]
        graph: Option<GraphArg>,
    },
    /// The Weyl vector of a Borel label.
    Rho { n: usize, label: String },
    /// Atypicality of a rho-shifted tuple such as "(1,2|2,1)".
    Aty { tuple: String },
    /// Truncated character of a Verma or Brundan-Goodwin module.
    Char {
        kind: CharKind,
        n: usize,
        label: String,
        tuple: String,
        #[arg(long)]
        depth: Option<i64>,
    },
    /// Duflo-Serganova homology of a Verma module.
    Ds {
        n: usize,
        label: String,
        tuple: String,
        /// Root vector e_{i,j} in 1-based indices, e.g. 1,3 for eps_1 - delta_1 at n = 2.
        /// Defaults to the first simple odd root of the Borel.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        depth: Option<i64>,
    },
    /// Run a verification scenario.
    Verify {
        #[command(subcommand)]
        scenario: Scenario,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphArg {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CharKind {
    Verma,
    Bg,
}

#[derive(Args, Debug, Clone, Default)]
struct GridArgs {
    /// Smallest tuple entry.
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<i64>,
    /// Largest tuple entry.
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<i64>,
    #[arg(long)]
    depth: Option<i64>,
    /// Number of sampled tuples where the full grid is too large.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Scenario {
    /// DS of Verma modules along simple odd roots.
    Conjecture {
        #[arg(long)]
        n: Option<usize>,
        /// Restrict to these labels (repeatable).
        #[arg(long)]
        borel: Vec<String>,
        /// Use the Borels `() * b'` and eps_1 - delta_1.
        #[arg(long)]
        star: bool,
        /// Also check that the comparison maps intertwine the actions.
        #[arg(long)]
        intertwine: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// DS of maximally atypical Brundan-Goodwin modules.
    Mabg {
        /// Ranks, comma separated.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// The rank-two examples.
    Gl22 {
        #[arg(long)]
        depth: Option<i64>,
    },
    /// Structural invariants.
    Structure {
        #[arg(long)]
        n: Option<usize>,
    },
}

/// Defaults read from `--config`; flags take precedence.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct Config {
    json: Option<bool>,
    deterministic: Option<bool>,
    threads: Option<usize>,
    depth: Option<i64>,
    lo: Option<i64>,
    hi: Option<i64>,
    samples: Option<usize>,
    seed: Option<u64>,
}

struct Ctx {
    json: bool,
    deterministic: bool,
    config: Config,
}

#[derive(Debug)]
enum Failure {
    /// Malformed input: exit code 2.
    Usage(String),
    /// Computation error: exit code 1.
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidLabel(_) | Error::RankMismatch(..) | Error::NotOdd(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn parse_tuple(s: &str, n: Option<usize>) -> Result<RhoTuple, Failure> {
    let t: RhoTuple = s.parse().map_err(|e: Error| Failure::Usage(format!("tuple {s:?}: {e}")))?;
    match n {
        Some(n) if t.n() != n => Err(Failure::Usage(format!("tuple {s:?} has rank {}, expected {n}", t.n()))),
        _ => Ok(t),
    }
}

fn parse_label(n: usize, s: &str) -> Result<BorelLabel, Failure> {
    BorelLabel::parse(n, s).map_err(|e| Failure::Usage(format!("label {s:?}: {e}")))
}

fn parse_alpha(b: &BorelLabel, s: Option<&str>) -> Result<Root, Failure> {
    let n = b.n;
    let Some(s) = s else {
        return odd_simple_roots(b).first().copied().ok_or_else(|| Failure::Usage("rank 0 has no odd roots".into()));
    };
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = |pos: usize, msg: &str| Failure::Usage(format!("alpha {s:?} at position {pos}: {msg}"));
    if parts.len() != 2 {
        return Err(bad(0, "expected i,j"));
    }
    let i: usize = parts[0].parse().map_err(|_| bad(0, "bad index"))?;
    let j: usize = parts[1].parse().map_err(|_| bad(parts[0].len() + 1, "bad index"))?;
    let r = Root::new(n, i, j).map_err(|e| bad(0, &e.to_string()))?;
    if !r.is_odd() {
        return Err(bad(0, "root is even"));
    }
    Ok(r)
}

fn print_json(v: &impl serde::Serialize) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn print_character(ctx: &Ctx, ch: &Character) {
    if ctx.json {
        print_json(&ch.to_json());
        return;
    }
    for (w, (e, o)) in &ch.support {
        out!("{w}\t{e}\t{o}");
    }
}

fn emit_reports(ctx: &Ctx, reports: Vec<ScenarioReport>) -> u8 {
    let reports: Vec<ScenarioReport> =
        reports.into_iter().map(|r| if ctx.deterministic { r.deterministic() } else { r }).collect();
    let code = reports.iter().map(|r| r.exit_code()).max().unwrap_or(0) as u8;
    if ctx.json {
        if reports.len() == 1 {
            print_json(&reports[0]);
        } else {
            print_json(&reports);
        }
        return code;
    }
    for r in &reports {
        for c in &r.cases {
            out!("{}\t{}", c.verdict, c.key);
        }
        out!("{}", r.summary());
    }
    code
}

fn borels(ctx: &Ctx, n: usize, graph: Option<GraphArg>) -> Outcome {
    if let Some(g) = graph {
        let fmt = match g {
            GraphArg::Dot => GraphFormat::Dot,
            GraphArg::Json => GraphFormat::Json,
        };
        let text = emit_borel_graph(n, fmt).map_err(|e| Failure::Usage(e.to_string()))?;
        out!("{}", text.trim_end());
        return Ok(0);
    }
    let labels = enumerate_borels(n);
    if ctx.json {
        let v: Vec<serde_json::Value> = labels
            .iter()
            .map(|b| serde_json::json!({ "label": b.to_string(), "sequence": b.sequence().word() }))
            .collect();
        print_json(&v);
    } else {
        for b in &labels {
            out!("{b}\t{}", b.sequence().word());
        }
    }
    Ok(0)
}

fn ds(ctx: &Ctx, n: usize, label: &str, tuple: &str, alpha: Option<&str>, depth: i64) -> Outcome {
    let b = parse_label(n, label)?;
    let t = parse_tuple(tuple, Some(n))?;
    let alpha = parse_alpha(&b, alpha)?;
    let m = induce(&verma_datum(&b, &t)?, depth)?;
    let r = ds_homology(&m, alpha)?;
    let hw = m.datum.hw.clone();
    let cert = if !is_simple_odd(&b, alpha) {
        None
    } else if bilinear_form(&hw, &Weight::from_root(alpha))? != 0 {
        Some(certify_zero(&r))
    } else {
        let target = restrict_label(&b, alpha)?;
        let tops = [hw.clone(), hw.add_root(alpha, -1)];
        Some(certify_copies(&r, &target, &pr_alpha(&hw, alpha)?, &tops, CertifyOptions { intertwine: true }))
    };
    let code = u8::from(cert.as_ref().is_some_and(|c| c.verdict.is_failure()));
    if ctx.json {
        let mut v = r.to_json();
        v["certification"] = serde_json::to_value(&cert).expect("serializable");
        print_json(&v);
    } else {
        out!("alpha {alpha}, depth {depth}, valid weights {}", r.valid_weights().count());
        for (w, (e, o)) in r.census() {
            out!("{w}\t{e}\t{o}");
        }
        match &cert {
            Some(c) => out!("{} {}", c.verdict, c.target),
            None => out!("no claim: {alpha} is not simple for {b}"),
        }
    }
    Ok(code)
}

fn verify(ctx: &Ctx, s: Scenario) -> Outcome {
    let cfg = &ctx.config;
    let grid = |g: &GridArgs| {
        (
            g.lo.or(cfg.lo).unwrap_or(-2),
            g.hi.or(cfg.hi).unwrap_or(2),
            g.depth.or(cfg.depth),
            g.samples.or(cfg.samples),
            g.seed.or(cfg.seed).unwrap_or(0),
        )
    };
    let reports = match s {
        Scenario::Conjecture { n, borel, star, intertwine, grid: g } => {
            let n = n.unwrap_or(2);
            if n == 0 {
                return Err(Failure::Usage("n must be positive".into()));
            }
            let (lo, hi, depth, samples, seed) = grid(&g);
            let depth = depth.unwrap_or(default_depth(n));
            let tuples = match samples {
                Some(k) => sample_tuples(n, k, seed, lo, hi),
                None if n >= 3 => sample_tuples(n, 40, seed, lo, hi),
                None => tuple_grid(n, lo, hi),
            };
            let mut p = if star && n >= 2 {
                ConjectureParams::star_family(n, tuples, depth)
            } else {
                ConjectureParams::all_borels(n, tuples, depth)
            };
            if !borel.is_empty() {
                p.borels = borel.iter().map(|s| parse_label(n, s)).collect::<Result<_, _>>()?;
            }
            p.intertwine |= intertwine;
            vec![verify_conjecture(&p)]
        }
        Scenario::Mabg { n, grid: g } => {
            let ns = if n.is_empty() { vec![2, 3] } else { n };
            let (lo, hi, depth, samples, seed) = grid(&g);
            let mut out = Vec::new();
            for n in ns {
                let tuples = match samples {
                    Some(k) => sample_mabg(n, k, seed, lo, hi),
                    None if n >= 4 => sample_mabg(n, 16, seed, lo, hi),
                    None => mabg_grid(n, lo, hi),
                };
                let depth = depth.unwrap_or(if n >= 3 { 7 } else { 6 });
                out.push(verify_mabg(n, &tuples, depth)?);
            }
            out
        }
        Scenario::Gl22 { depth } => vec![verify_gl22_examples(depth.or(cfg.depth).unwrap_or(6))],
        Scenario::Structure { n } => vec![verify_structure(n.unwrap_or(3))],
    };
    Ok(emit_reports(ctx, reports))
}

fn run(cli: Cli) -> Outcome {
    let config: Config = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => Config::default(),
    };
    init_threads(cli.threads.or(config.threads));
    let ctx = Ctx {
        json: cli.json || config.json.unwrap_or(false),
        deterministic: cli.deterministic || config.deterministic.unwrap_or(false),
        config,
    };
    let depth_or = |d: Option<i64>, n: usize| d.or(ctx.config.depth).unwrap_or(default_depth(n));
    match cli.command {
        Command::Borels { n, graph } => borels(&ctx, n, graph),
        Command::Rho { n, label } => {
            let r = rho(&parse_label(n, &label)?);
            if ctx.json {
                print_json(&serde_json::json!({ "label": label, "rho": r.to_string(), "coords": r }));
            } else {
                out!("{r}");
            }
            Ok(0)
        }
        Command::Aty { tuple } => {
            let t = parse_tuple(&tuple, None)?;
            let k = atypicality(&t);
            if ctx.json {
                print_json(&serde_json::json!({
                    "tuple": t.to_string(),
                    "atypicality": k,
                    "antidominant": antidominant_representative(&t).to_string(),
                }));
            } else {
                out!("{k}");
            }
            Ok(0)
        }
        Command::Char { kind, n, label, tuple, depth } => {
            let t = parse_tuple(&tuple, Some(n))?;
            let depth = depth_or(depth, n);
            let m = match kind {
                CharKind::Verma => induce(&verma_datum(&parse_label(n, &label)?, &t)?, depth)?,
                CharKind::Bg => induce(&bg_datum(&t)?, depth)?,
            };
            print_character(&ctx, &m.character());
            Ok(0)
        }
        Command::Ds { n, label, tuple, alpha, depth } => {
            ds(&ctx, n, &label, &tuple, alpha.as_deref(), depth_or(depth, n))
        }
        Command::Verify { scenario } => verify(&ctx, scenario),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
