use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use amoeba_core::geometry::{approximate_spine_with, enumerate_components_with, ComponentOptions, DChoice, SpineRule};
use amoeba_core::ideals::{certify_outside_ideal, DEFAULT_N_MAX};
use amoeba_core::membership::{certify_outside, component_index, CertifyOptions, CertifyOutcome, Mode};
use amoeba_core::poly::{LaurentPolynomial, DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS};
use amoeba_core::raster::{rasterize, RasterMode, RasterSpec};
use amoeba_core::resultant::{
    cyclic_resultant_with_health, general_cyclic_resultant_with_health, ResultantOptions, DEFAULT_TERM_CAP,
};
use amoeba_core::tropical::{
    breakpoints_1d, is_tropically_lopsided, tropical_magnitude_list, tropical_membership, tropicalize, ValuedPolynomial,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

const EXIT_INPUT: u8 = 2;
const EXIT_NOT_CERTIFIED: u8 = 3;
const EXIT_BUDGET: u8 = 4;

/// Certified approximation of amoebas by lopsidedness of cyclic resultants.
#[derive(Parser, Debug)]
#[command(name = "amoeba", version)]
struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, env = "AMOEBA_PRECISION_BITS", default_value_t = DEFAULT_PRECISION_BITS)]
    precision: u32,

    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify a point outside the amoeba; prints a certificate or a report.
    Certify(CertifyArgs),
    /// Grid of certified-outside cells for a plane curve, as CSV.
    Raster(RasterArgs),
    /// Component polyhedra of the complement.
    Components(ComponentsArgs),
    /// Tropical approximation of the spine.
    Spine(SpineArgs),
    /// Cyclic resultant Res_n[f] or the general Res_{n_1,...,n_r}[f].
    Resultant(ResultantArgs),
    /// Certify a point outside the amoeba of an ideal.
    Ideal(IdealArgs),
    /// Tropicalization of a valued polynomial and membership queries.
    Tropical(TropicalArgs),
}

#[derive(Args, Debug)]
struct Budget {
    /// Largest predicted term count of a resultant.
    #[arg(long, default_value_t = DEFAULT_TERM_CAP)]
    term_cap: f64,
}

impl Budget {
    fn options(&self) -> ResultantOptions {
        ResultantOptions { term_cap: self.term_cap }
    }
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Polynomial JSON file.
    #[arg(short = 'f', long = "file")]
    file: PathBuf,
    /// Comma-separated point a_1,...,a_r.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long)]
    eps: f64,
    /// lopsided (lop) or superlopsided (super).
    #[arg(long, default_value = "super")]
    mode: String,
    /// Test only this n instead of the automatic schedule.
    #[arg(long)]
    n: Option<u64>,
    /// Log-domain slack (default 2^-(precision/2)).
    #[arg(long)]
    slack: Option<f64>,
    /// Also report the component index of the point.
    #[arg(long)]
    index: bool,
    /// Write the JSON here instead of stdout.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args, Debug)]
struct RasterArgs {
    #[arg(short = 'f', long = "file")]
    file: PathBuf,
    /// x0,y0,x1,y1
    #[arg(long, allow_hyphen_values = true)]
    bbox: String,
    /// W,H
    #[arg(long)]
    res: String,
    /// la or sa.
    #[arg(long, default_value = "la")]
    mode: String,
    #[arg(long, default_value_t = 1)]
    n: u64,
    #[arg(long)]
    slack: Option<f64>,
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args, Debug)]
struct ComponentsArgs {
    #[arg(short = 'f', long = "file")]
    file: PathBuf,
    #[arg(long)]
    n: u64,
    /// The constant D: `lattice` (d n^(r^2-r)), `terms` (#terms - 1) or a number.
    #[arg(long = "d", default_value = "lattice")]
    d: String,
    /// Required margin for strict feasibility.
    #[arg(long, default_value_t = amoeba_core::geometry::DEFAULT_STRICT_SLACK)]
    strict_slack: f64,
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args, Debug)]
struct SpineArgs {
    #[arg(short = 'f', long = "file")]
    file: PathBuf,
    #[arg(long)]
    n: u64,
    /// super (feasible components) or lop (lopsided dominance, for comparison).
    #[arg(long, default_value = "super")]
    rule: String,
    #[arg(long = "d", default_value = "lattice")]
    d: String,
    #[arg(long, default_value_t = amoeba_core::geometry::DEFAULT_STRICT_SLACK)]
    strict_slack: f64,
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args, Debug)]
struct ResultantArgs {
    #[arg(short = 'f', long = "file")]
    file: PathBuf,
    /// Same n in every variable.
    #[arg(long, conflicts_with = "ns", required_unless_present = "ns")]
    n: Option<u64>,
    /// One n per variable, comma-separated.
    #[arg(long)]
    ns: Option<String>,
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args, Debug)]
struct IdealArgs {
    /// Generator files; repeat for each generator.
    #[arg(short = 'f', long = "file", required = true)]
    files: Vec<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value = "super")]
    mode: String,
    /// Largest n tried.
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    n_max: u64,
    #[arg(long)]
    slack: Option<f64>,
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args, Debug)]
struct TropicalArgs {
    /// Valued polynomial JSON file.
    #[arg(short = 'f', long = "file")]
    file: PathBuf,
    /// Points to test, each comma-separated; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    point: Vec<String>,
    /// Absolute tie tolerance (default relative 1e-9).
    #[arg(long)]
    tie_tol: Option<f64>,
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Core(amoeba_core::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        use amoeba_core::Error as E;
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Core(e) => match e {
                E::BudgetExceeded { .. }
                | E::BoundCapExceeded { .. }
                | E::EnumerationOverflow { .. }
                | E::PrecisionExhausted { .. } => EXIT_BUDGET,
                E::NoFeasibleComponents | E::TooCloseToAmoeba { .. } => EXIT_NOT_CERTIFIED,
                _ => EXIT_INPUT,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(msg) => f.write_str(msg),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<amoeba_core::Error> for Failure {
    fn from(e: amoeba_core::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<u8, Failure>;

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| Failure::Input(format!("malformed {what} {text:?}"))))
        .collect()
}

fn parse_fixed<const N: usize>(text: &str, what: &str) -> Result<[f64; N], Failure> {
    let v: Vec<f64> = parse_list(text, what)?;
    v.try_into().map_err(|_| Failure::Input(format!("{what} needs {N} comma-separated values, got {text:?}")))
}

fn parse_point(text: &str) -> Result<Vec<f64>, Failure> {
    let p: Vec<f64> = parse_list(text, "point")?;
    if p.iter().any(|x| !x.is_finite()) {
        return Err(Failure::Input(format!("point {text:?} has non-finite entries")));
    }
    Ok(p)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path, precision: u32) -> Result<LaurentPolynomial, Failure> {
    LaurentPolynomial::parse_json(&read(path)?, precision)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write(path, &format!("{text}\n")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

fn mode(text: &str) -> Result<Mode, Failure> {
    text.parse().map_err(|_| Failure::Input(format!("unknown mode {text:?} (lopsided|super)")))
}

fn d_choice(text: &str) -> Result<DChoice, Failure> {
    match text {
        "lattice" => Ok(DChoice::LatticeBound),
        "terms" => Ok(DChoice::TermCount),
        other => match other.parse::<f64>() {
            Ok(d) if d > 0.0 && d.is_finite() => Ok(DChoice::Fixed(d)),
            _ => Err(Failure::Input(format!("--d must be lattice, terms or a positive number, got {other:?}"))),
        },
    }
}

fn report(outcome: &CertifyOutcome, extra: Option<(&str, serde_json::Value)>) -> (String, u8) {
    let (mut value, code) = match outcome {
        CertifyOutcome::Certified(c) => (serde_json::to_value(c).expect("serializes"), 0),
        CertifyOutcome::NotCertified(r) => {
            let mut v = serde_json::to_value(r).expect("serializes");
            v["status"] = "not_certified".into();
            (v, EXIT_NOT_CERTIFIED)
        }
    };
    if let Some((key, extra)) = extra {
        value[key] = extra;
    }
    (json(&value), code)
}

fn certify(cli: &Cli, args: &CertifyArgs) -> Outcome {
    let f = load(&args.file, cli.precision)?;
    let point = parse_point(&args.point)?;
    let opts = CertifyOptions {
        mode: mode(&args.mode)?,
        n_override: args.n,
        slack: args.slack,
        resultant: args.budget.options(),
    };
    let outcome = certify_outside(&f, &point, args.eps, &opts)?;
    let extra = if args.index {
        let k = component_index(&f, &point, cli.seed)?;
        Some(("component_index", serde_json::to_value(k).expect("serializes")))
    } else {
        None
    };
    let (text, code) = report(&outcome, extra);
    emit(args.out.as_deref(), &text)?;
    Ok(code)
}

fn raster(cli: &Cli, args: &RasterArgs) -> Outcome {
    let f = load(&args.file, cli.precision)?;
    let bbox = parse_fixed::<4>(&args.bbox, "bbox")?;
    let res: Vec<usize> = parse_list(&args.res, "res")?;
    let [w, h] = res[..] else {
        return Err(Failure::Input(format!("res needs W,H, got {:?}", args.res)));
    };
    let mode: RasterMode = args.mode.parse().map_err(|_| Failure::Input(format!("unknown raster mode {:?}", args.mode)))?;
    let spec = RasterSpec {
        slack: args.slack,
        jobs: cli.jobs,
        resultant: args.budget.options(),
        ..RasterSpec::new(bbox, w, h, mode, args.n)
    };
    let grid = rasterize(&f, &spec)?;
    write(&args.out, &grid.to_csv())?;
    Ok(0)
}

fn components(cli: &Cli, args: &ComponentsArgs) -> Outcome {
    let f = load(&args.file, cli.precision)?;
    let opts = ComponentOptions { d_choice: d_choice(&args.d)?, strict_slack: args.strict_slack, resultant: args.budget.options() };
    let systems = enumerate_components_with(&f, args.n, &opts)?;
    write(&args.out, &format!("{}\n", json(&systems)))?;
    Ok(0)
}

fn spine(cli: &Cli, args: &SpineArgs) -> Outcome {
    let f = load(&args.file, cli.precision)?;
    let rule = match args.rule.as_str() {
        "super" | "superlopsided" => SpineRule::Superlopsided,
        "lop" | "lopsided" => SpineRule::Lopsided,
        other => return Err(Failure::Input(format!("unknown spine rule {other:?}"))),
    };
    let opts = ComponentOptions { d_choice: d_choice(&args.d)?, strict_slack: args.strict_slack, resultant: args.budget.options() };
    let t = approximate_spine_with(&f, args.n, rule, &opts)?;
    write(&args.out, &format!("{}\n", t.to_json()))?;
    Ok(0)
}

fn resultant(cli: &Cli, args: &ResultantArgs) -> Outcome {
    let f = load(&args.file, cli.precision)?;
    let opts = args.budget.options();
    let (res, health) = match (&args.ns, args.n) {
        (Some(ns), _) => general_cyclic_resultant_with_health(&f, &parse_list::<u64>(ns, "ns")?, &opts)?,
        (None, Some(n)) => cyclic_resultant_with_health(&f, n, &opts)?,
        (None, None) => return Err(Failure::Input("one of --n or --ns is required".into())),
    };
    if health.removed_terms > 0 {
        eprintln!("removed {} noise-level terms at non-divisible exponents", health.removed_terms);
    }
    write(&args.out, &format!("{}\n", res.to_json_pretty()))?;
    Ok(0)
}

fn ideal(cli: &Cli, args: &IdealArgs) -> Outcome {
    let gens = args.files.iter().map(|p| load(p, cli.precision)).collect::<Result<Vec<_>, _>>()?;
    let point = parse_point(&args.point)?;
    let opts = CertifyOptions { mode: mode(&args.mode)?, n_override: None, slack: args.slack, resultant: args.budget.options() };
    let outcome = certify_outside_ideal(&gens, &point, args.eps, args.n_max, &opts)?;
    let (text, code) = report(&outcome, None);
    write(&args.out, &format!("{text}\n"))?;
    Ok(code)
}

#[derive(Serialize)]
struct Weight {
    exp: Vec<i64>,
    weight: f64,
}

#[derive(Serialize)]
struct Query {
    point: Vec<f64>,
    weights: Vec<Weight>,
    lopsided: bool,
    member: bool,
}

#[derive(Serialize)]
struct TropicalReport {
    tropical: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    breakpoints: Option<Vec<f64>>,
    queries: Vec<Query>,
}

fn tropical(_cli: &Cli, args: &TropicalArgs) -> Outcome {
    let text = read(&args.file)?;
    let vp = ValuedPolynomial::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", args.file.display())))?;
    let t = tropicalize(&vp);
    let mut queries = Vec::new();
    for p in &args.point {
        let x = parse_point(p)?;
        if x.len() != t.nvars() {
            return Err(Failure::Input(format!("point {p:?} has {} coordinates, expected {}", x.len(), t.nvars())));
        }
        let weights = tropical_magnitude_list(&t, &x);
        let lopsided = is_tropically_lopsided(&weights, args.tie_tol)?;
        queries.push(Query {
            member: tropical_membership(&t, &x, args.tie_tol),
            lopsided,
            weights: weights.into_iter().map(|(e, w)| Weight { exp: e.to_vec(), weight: w }).collect(),
            point: x,
        });
    }
    let report = TropicalReport {
        tropical: serde_json::from_str(&t.to_json()).expect("tropical polynomial JSON"),
        breakpoints: if t.nvars() == 1 { Some(breakpoints_1d(&t)?) } else { None },
        queries,
    };
    write(&args.out, &format!("{}\n", json(&report)))?;
    Ok(0)
}

fn run(cli: &Cli) -> Outcome {
    if cli.precision < MIN_PRECISION_BITS {
        return Err(Failure::Input(format!("precision must be at least {MIN_PRECISION_BITS} bits")));
    }
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::Input("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Input(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Certify(a) => certify(cli, a),
        Command::Raster(a) => raster(cli, a),
        Command::Components(a) => components(cli, a),
        Command::Spine(a) => spine(cli, a),
        Command::Resultant(a) => resultant(cli, a),
        Command::Ideal(a) => ideal(cli, a),
        Command::Tropical(a) => tropical(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("amoeba: {e}");
            ExitCode::from(e.code())
        }
    }
}
