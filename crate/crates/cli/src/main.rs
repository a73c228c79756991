//! `stacky`: height queries, counting runs, fits, Vojta searches and the
//! cross-validation suites.
//!
//! Exit status: 0 on success, 1 on I/O failure or failed check suites,
//! 2 on malformed input, 3 on a domain error.

mod checkpoint;
mod config;
mod output;
mod parse;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use stacky_heights::check::{run_all, CheckOptions};
use stacky_heights::classifying::{bmun_height, class_of, malle_exponent, Perm, PermGroup};
use stacky_heights::counting::{fit_exponents, fit_samples, vojta_search_444, vojta_search_ap5, CountReport, FitModel};
use stacky_heights::football::{edd, generic_height, tangential_height, RootedLine};
use stacky_heights::sympow::{abs_height, discrepancy, stable_sym_height, sym_height, QuadraticPoint};
use stacky_heights::wps::{height_oj, minimal_form};
use stacky_heights::ExactHeight;

use checkpoint::Checkpoint;
use config::{config_path_for, resolve_threads, ConfigFile, Format, Overrides, RunConfig};
use output::{render_count, render_search, CountDocument, SearchDocument, SearchHits, SCHEMA};
use parse::{usage, UsageError};

#[derive(Parser)]
#[command(name = "stacky", version, about = "Heights and point counts on stacky curves over Q")]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads; overrides STACKY_THREADS and the config file.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact height of a single point, as JSON.
    #[command(subcommand)]
    Height(HeightCmd),
    /// Count points of bounded height along a geometric schedule.
    Count(CountArgs),
    /// Fit `log N = a log B + b log log B + c` to a count report.
    Fit(FitArgs),
    /// Search for exceptions to the stacky Vojta inequality.
    Search(SearchArgs),
    /// Run the cross-validation suites.
    Check(CheckArgs),
}

#[derive(Subcommand)]
enum HeightCmd {
    /// Point of a weighted projective stack, height for `O(j)`.
    Wps {
        #[arg(long)]
        weights: String,
        #[arg(long, allow_hyphen_values = true)]
        coords: String,
        #[arg(long, default_value_t = 1)]
        j: u32,
    },
    /// Class of `x` in `Q^*/(Q^*)^n`, height for the `j`-th character.
    Bmun {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        j: u32,
        /// An integer or a fraction `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Point of a rooted projective line.
    Football(FootballArgs),
    /// Degree-two point of `P^1` given by the form `a X^2 + b XY + c Y^2`.
    Sym2 {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// Malle exponent of the permutation group generated by `--gens`.
    Malle {
        #[arg(long)]
        degree: u32,
        /// Cycle notation, e.g. `(1 2 3)(4 5)`; repeat for more generators.
        #[arg(long, required = true)]
        gens: Vec<String>,
    },
}

#[derive(Args)]
#[group(id = "bundle", multiple = false, required = true)]
struct Bundle {
    /// Height for the tangent bundle.
    #[arg(long)]
    tangent: bool,
    /// Expected deformation dimension.
    #[arg(long)]
    edd: bool,
    /// Divisor `d;n1,n2,...` on the line.
    #[arg(long, allow_hyphen_values = true)]
    divisor: Option<String>,
}

#[derive(Args)]
struct FootballArgs {
    /// Roots `u,v,order;...`, each the zero of `u X + v Y`.
    #[arg(long, allow_hyphen_values = true)]
    line: String,
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[command(flatten)]
    bundle: Bundle,
}

#[derive(Args)]
struct CountArgs {
    /// `bmun:N`, `quadratic-fields`, `football222`, `rooted3` or
    /// `quadratic-points`.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    b0: Option<f64>,
    #[arg(long)]
    ratio: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Attach a fit to the report.
    #[arg(long, value_enum)]
    fit: Option<ModelArg>,
    /// Output file; the resolved config is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Resume from and record completed samples in this file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    LogPower,
    TopDecade,
    PowerLaw,
}

impl From<ModelArg> for FitModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::LogPower => FitModel::LogPower,
            ModelArg::TopDecade => FitModel::LogPowerTopDecade,
            ModelArg::PowerLaw => FitModel::PowerLaw,
        }
    }
}

#[derive(Args)]
struct FitArgs {
    /// A JSON count report or a `B,count` CSV file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "log-power")]
    model: ModelArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchKind {
    /// `(4,4,4)`-rooted line at `0, -1, inf`.
    Rooted444,
    /// Five-term arithmetic progressions.
    Ap5,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    kind: SearchKind,
    #[arg(long)]
    cutoff: u64,
    #[arg(long)]
    delta: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Random cases per suite.
    #[arg(long, default_value_t = 2000)]
    cases: usize,
    /// Perturb the power-free complement feeding the tangential height.
    #[arg(long)]
    corrupt_phi: bool,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_status(&e))
        }
    }
}

fn exit_status(e: &anyhow::Error) -> u8 {
    if e.chain().any(|c| c.is::<UsageError>()) {
        2
    } else if e.chain().any(|c| c.is::<stacky_heights::Error>()) {
        3
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Height(h) => {
            emit(&format!("{}\n", serde_json::to_string_pretty(&height(h)?)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Count(args) => count(args, file, cli.threads),
        Command::Fit(args) => {
            emit(&format!("{}\n", serde_json::to_string_pretty(&fit(args)?)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Search(args) => {
            let threads = resolve_threads(cli.threads, file.threads)?;
            in_pool(threads, || search(args))
        }
        Command::Check(args) => {
            let threads = resolve_threads(cli.threads, file.threads)?;
            let seed = args.seed.or(file.seed).unwrap_or(0);
            in_pool(threads, || check(args, seed))
        }
    }
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().context("starting thread pool")?.install(f)
}

fn height_json(kind: &str, h: &ExactHeight) -> serde_json::Value {
    json!({ "schema": SCHEMA, "kind": kind, "height": h, "display": h.to_string(), "value": h.value() })
}

fn height(cmd: HeightCmd) -> Result<serde_json::Value> {
    Ok(match cmd {
        HeightCmd::Wps { weights, coords, j } => {
            let pt = minimal_form(&parse::list::<u32>(&weights)?, &parse::list::<i128>(&coords)?)?;
            let mut v = height_json("wps", &height_oj(&pt, j)?);
            v["minimal_form"] = json!(pt.coords());
            v
        }
        HeightCmd::Bmun { n, j, x } => {
            let (p, q) = parse::rational(&x)?;
            let c = class_of(p, q, n)?;
            let mut v = height_json("bmun", &bmun_height(&c, j)?);
            v["class"] = json!({ "n": c.n(), "rep": c.rep() });
            v
        }
        HeightCmd::Football(args) => {
            let line = RootedLine::new(parse::roots(&args.line)?)?;
            let pt = parse::pair::<i128>(&args.point)?;
            let b = args.bundle;
            if b.tangent {
                height_json("tangential", &tangential_height(&line, pt)?)
            } else if b.edd {
                height_json("edd", &edd(&line, pt)?)
            } else {
                let d = parse::divisor(b.divisor.as_deref().unwrap_or_default())?;
                if d.stacky.len() != line.len() {
                    return Err(UsageError(format!("divisor has {} stacky terms, line has {} roots", d.stacky.len(), line.len())).into());
                }
                let br = generic_height(&line, &d, pt)?;
                let mut v = height_json("football", &br.total);
                v["breakdown"] = serde_json::to_value(&br)?;
                v
            }
        }
        HeightCmd::Sym2 { form } => {
            let f = parse::list::<i128>(&form)?;
            let [a, b, c] = f[..] else {
                return Err(UsageError(format!("form needs three coefficients, got {form:?}")).into());
            };
            let q = QuadraticPoint::from_form(a, b, c)?;
            let h = sym_height(&q)?;
            json!({
                "schema": SCHEMA,
                "kind": "sym2",
                "stable": stable_sym_height(&q)?,
                "discrepancy": discrepancy(&q)?,
                "height": h,
                "value": h.value(),
                "abs_height": abs_height(&q)?,
            })
        }
        HeightCmd::Malle { degree, gens } => {
            let gens = gens.iter().map(|g| Perm::parse_cycles(degree, g)).collect::<stacky_heights::Result<Vec<_>>>()?;
            let g = PermGroup::generate(degree, &gens)?;
            let a = malle_exponent(&g)?;
            json!({
                "schema": SCHEMA,
                "kind": "malle",
                "order": g.order(),
                "exponent": a.to_string(),
                "value": *a.numer() as f64 / *a.denom() as f64,
            })
        }
    })
}

/// Write to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e).context("writing stdout"),
        _ => Ok(()),
    }
}

fn write_output(out: Option<&Path>, text: &str, config: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            let cfg = config_path_for(path);
            std::fs::write(&cfg, config).with_context(|| format!("writing {}", cfg.display()))
        }
        None => emit(text),
    }
}

fn count(args: CountArgs, file: ConfigFile, threads: Option<usize>) -> Result<ExitCode> {
    let o = Overrides {
        family: args.family,
        format: args.format,
        threads,
        seed: None,
        b0: args.b0,
        ratio: args.ratio,
        steps: args.steps,
    };
    let cfg = RunConfig::resolve(file, o)?;
    let family = cfg.family()?;
    let bounds = cfg.schedule.bounds()?;
    let mut ck = args.checkpoint.as_deref().map(Checkpoint::open).transpose()?;
    let mut report = in_pool(cfg.threads, || {
        let mut report = CountReport::new(family);
        for &b in &bounds {
            let n = match ck.as_ref().and_then(|c| c.get(&family, b)) {
                Some(n) => n,
                None => {
                    let n = family.count(b)?;
                    if let Some(c) = ck.as_mut() {
                        c.record(&family, b, n)?;
                    }
                    n
                }
            };
            report.push(b, n)?;
        }
        Ok(report)
    })?;
    if let Some(m) = args.fit {
        report.fit = Some(fit_exponents(&report, m.into())?);
    }
    write_output(args.out.as_deref(), &render_count(&report, cfg.format), &cfg.to_toml())?;
    Ok(ExitCode::SUCCESS)
}

fn fit(args: FitArgs) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let model = args.model.into();
    let f = if text.trim_start().starts_with('{') {
        let doc: CountDocument =
            serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", args.input.display())))?;
        if doc.schema != SCHEMA {
            return usage(format!("schema {:?} is not {SCHEMA:?}", doc.schema)).map_err(Into::into);
        }
        fit_exponents(&doc.report, model)?
    } else {
        let mut samples = Vec::new();
        for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
            samples.push(parse::pair::<f64>(line)?);
        }
        fit_samples(&samples, model)?
    };
    Ok(json!({ "schema": SCHEMA, "kind": "fit", "fit": f }))
}

fn search(args: SearchArgs) -> Result<ExitCode> {
    let hits = match args.kind {
        SearchKind::Rooted444 => SearchHits::Rooted444 { hits: vojta_search_444(args.cutoff, args.delta)? },
        SearchKind::Ap5 => SearchHits::Ap5 { hits: vojta_search_ap5(args.cutoff, args.delta)? },
    };
    let doc = SearchDocument { schema: SCHEMA.into(), cutoff: args.cutoff, delta: args.delta, hits };
    let config = toml::to_string(&json!({
        "search": match args.kind { SearchKind::Rooted444 => "rooted444", SearchKind::Ap5 => "ap5" },
        "cutoff": args.cutoff,
        "delta": args.delta,
        "format": args.format,
        "threads": rayon::current_num_threads(),
    }))?;
    write_output(args.out.as_deref(), &render_search(&doc, args.format), &config)?;
    Ok(ExitCode::SUCCESS)
}

fn check(args: CheckArgs, seed: u64) -> Result<ExitCode> {
    let opts = CheckOptions { seed, cases: args.cases, corrupt_phi: args.corrupt_phi };
    let results = run_all(&opts);
    let all_passed = results.iter().all(|r| r.passed());
    let mut text = String::new();
    if args.json {
        let doc = json!({ "schema": SCHEMA, "kind": "check", "seed": seed, "suites": results });
        text = format!("{}\n", serde_json::to_string_pretty(&doc)?);
    } else {
        for r in &results {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            text += &format!("{status} {} ({} cases, {:.1} ms)\n", r.name, r.cases, r.elapsed_ms);
            if let Some(f) = &r.first_failure {
                text += &format!("     {} failures; first: {f}\n", r.failures);
            }
        }
    }
    emit(&text)?;
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
