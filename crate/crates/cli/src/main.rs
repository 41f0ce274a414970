use std::io::{ErrorKind, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use orbital_l2::chamber_geometry::{averaging_projection, certify_constants, verify_lemma1, verify_lemma2};
use orbital_l2::l2_analyzer::{
    almost_period_probe, convergence_scan, corollary_report, k_star, reducible_k_star, ConvergenceReport,
    ProbeParams, Sampling, Verdict,
};
use orbital_l2::numerics::dot;
use orbital_l2::orbital_fourier::{IntegrandSpec, RegularPoint, DEFAULT_WALL_GUARD};
use orbital_l2::rational::{fmt_rat, parse_rat, serialize_rat, Rat};
use orbital_l2::root_systems::{build_root_system, product, CartanType, Family, RootSystem, RootSystemDocument};
use orbital_l2::subroot_systems::{
    appendix_a_table, check_closed_forms, epsilon0, lemma3_check, table_to_csv, SimpleSubrootSystem,
};
use orbital_l2::weyl_groups::{generate, WeylGroup, DEFAULT_GROUP_CAP};
use orbital_l2::Error;

const WORKERS_VAR: &str = "ORBITAL_L2_WORKERS";
const TEST_MODE_VAR: &str = "ORBITAL_L2_TEST_MODE";

#[derive(Parser)]
#[command(name = "orbital-l2", version, about = "Root systems, Weyl groups and L² thresholds of orbital Fourier transforms")]
struct Cli {
    /// Worker threads for Monte Carlo sampling.
    #[arg(long, global = true, env = WORKERS_VAR, value_parser = clap::value_parser!(u32).range(1..))]
    workers: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root system data.
    Roots {
        #[command(subcommand)]
        command: RootsCommand,
    },
    /// Weyl group data.
    Weyl {
        #[command(subcommand)]
        command: WeylCommand,
    },
    /// Simple subroot systems.
    Subroots {
        #[command(subcommand)]
        command: SubrootsCommand,
    },
    /// Print the threshold k* = 1 + n/|Φ| as p/q.
    Threshold(ThresholdArgs),
    /// Evaluate the numerator, the denominator and the integrand at one point.
    Eval(EvalArgs),
    /// Dyadic-shell convergence scan of the L² integral.
    Scan(ScanArgs),
    /// Search for radial recurrences of the polar factor.
    Probe(ProbeArgs),
    /// Certified projection constants a, b and C.
    LemmaConstants(LemmaArgs),
    /// Sampled and exact checks.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
    /// Exponents derived from the threshold.
    Corollaries(CorollaryArgs),
}

#[derive(Subcommand)]
enum RootsCommand {
    /// Simple roots, positive roots and the Cartan matrix.
    Info(SystemArgs),
}

#[derive(Subcommand)]
enum WeylCommand {
    /// Print the group order.
    Order {
        #[command(flatten)]
        system: SystemArgs,
        /// Largest group that will be enumerated.
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum SubrootsCommand {
    /// Ratio m/|Ψ| for every irreducible simple subsystem.
    Table {
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Keep only the largest subsystem for each m.
        #[arg(long)]
        maximal_only: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Projection identities and the a, b inequalities.
    Lemma1(LemmaVerifyArgs),
    /// The wall bound <H, α> >= C‖H‖.
    Lemma2(LemmaVerifyArgs),
    /// Exact ratio inequality over all proper subsets of the base.
    Lemma3(Lemma3Args),
    /// Closed-form ratio rows against the enumerated table.
    AppendixA {
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct SystemArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    rank: usize,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long, requires = "rank", conflicts_with = "product")]
    family: Option<Family>,
    #[arg(long)]
    rank: Option<usize>,
    /// Comma-separated factors such as "B3,A1".
    #[arg(long)]
    product: Option<String>,
}

#[derive(Args)]
struct SpecArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Pairings <H0, β_i> with the simple roots; defaults to unit ρ∨.
    #[arg(long, allow_hyphen_values = true)]
    h0: Option<String>,
    /// Exponent k >= 1, as p/q or a decimal.
    #[arg(long)]
    k: String,
    #[arg(long, default_value_t = DEFAULT_WALL_GUARD)]
    wall_guard: f64,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Point H, in ambient coordinates unless --pairings is given.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Read --point as pairings <H, β_i>.
    #[arg(long)]
    pairings: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, default_value_t = 12)]
    shells: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    r0: f64,
    #[arg(long, value_enum, default_value_t = ScanFormat::Json)]
    format: ScanFormat,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, default_value_t = ProbeParams::default().delta)]
    delta: f64,
    /// Level ε; defaults to a quarter of f(r0).
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = ProbeParams::default().window)]
    window: f64,
    #[arg(long, default_value_t = ProbeParams::default().windows)]
    windows: usize,
    #[arg(long, default_value_t = ProbeParams::default().directions)]
    directions: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct LemmaArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Simple root playing γ₁, counted from 1.
    #[arg(long, default_value_t = 1)]
    drop_index: usize,
    #[arg(long, default_value_t = 1e-3)]
    grid: f64,
}

#[derive(Args)]
struct LemmaVerifyArgs {
    #[command(flatten)]
    lemma: LemmaArgs,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct Lemma3Args {
    #[arg(long, requires = "rank", conflicts_with = "product")]
    family: Option<Family>,
    #[arg(long)]
    rank: Option<usize>,
    /// Comma-separated factors such as "B3,A1,A1,A1".
    #[arg(long)]
    product: Option<String>,
    /// Check every irreducible system up to this rank when no system is given.
    #[arg(long, default_value_t = 8)]
    max_rank: usize,
}

#[derive(Args)]
struct CorollaryArgs {
    #[arg(long, requires = "rank")]
    family: Option<Family>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value_t = 8)]
    max_rank: usize,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GroupTooLarge { .. }
            | Error::Certification(_)
            | Error::Sampling(_)
            | Error::Probe(_)
            | Error::Invalid(_)
            | Error::NotSubgroup(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let workers = cli.workers.map(|w| w as usize);
    match run(cli.command, workers) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command, workers: Option<usize>) -> Outcome {
    match command {
        Command::Roots {
            command: RootsCommand::Info(sys),
        } => roots_info(&sys),
        Command::Weyl {
            command: WeylCommand::Order { system, cap },
        } => {
            let rs = system.build()?;
            let w = generate(&rs, cap)?;
            emit(&format!("{}\n", w.order()))?;
            Ok(0)
        }
        Command::Subroots {
            command: SubrootsCommand::Table {
                max_rank,
                format,
                maximal_only,
            },
        } => subroots_table(max_rank, format, maximal_only),
        Command::Threshold(args) => threshold(&args),
        Command::Eval(args) => eval(&args),
        Command::Scan(args) => scan(&args, workers),
        Command::Probe(args) => probe(&args),
        Command::LemmaConstants(args) => lemma_constants(&args),
        Command::Verify { command } => verify(command),
        Command::Corollaries(args) => corollaries(&args),
    }
}

impl SystemArgs {
    fn build(&self) -> Result<RootSystem, Failure> {
        Ok(build_root_system(self.family, self.rank)?)
    }
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(Failure::Internal(e.to_string())),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)?;
    emit(&format!("{text}\n"))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Failure::Usage(format!("{what}: {t:?} is not a finite number")))
        })
        .collect()
}

fn parse_product(s: &str) -> Result<RootSystem, Failure> {
    let factors = s
        .split(',')
        .map(|t| {
            let ty: CartanType = t.parse()?;
            build_root_system(ty.family, ty.rank)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(product(factors)?.as_root_system().clone())
}

fn seed_or_default(seed: Option<u64>) -> Result<u64, Failure> {
    match seed {
        Some(s) => Ok(s),
        None if std::env::var_os(TEST_MODE_VAR).is_some_and(|v| !v.is_empty() && v != "0") => Err(
            Failure::Usage(format!("--seed is required when {TEST_MODE_VAR} is set")),
        ),
        None => Ok(0),
    }
}

fn parse_k(s: &str) -> Result<Rat, Failure> {
    parse_rat(s).map_err(|_| Failure::Usage(format!("--k {s:?} must be p/q or a decimal")))
}

struct Built {
    rs: RootSystem,
    w: WeylGroup,
    h0: RegularPoint,
    k: Rat,
}

impl SpecArgs {
    fn build(&self) -> Result<Built, Failure> {
        let rs = self.system.build()?;
        let w = generate(&rs, DEFAULT_GROUP_CAP)?;
        let h0 = match &self.h0 {
            Some(s) => RegularPoint::from_pairings(&rs, &parse_list(s, "--h0")?)?,
            None => RegularPoint::canonical(&rs),
        };
        let k = parse_k(&self.k)?;
        let pairings: Vec<String> = h0.pairings(&rs).iter().map(|p| format!("{p:.6}")).collect();
        eprintln!("h0: <H0, β_i> = [{}]", pairings.join(", "));
        Ok(Built { rs, w, h0, k })
    }
}

impl Built {
    fn spec(&self, wall_guard: f64) -> Result<IntegrandSpec, Failure> {
        Ok(IntegrandSpec::new(&self.rs, &self.w, self.h0.clone(), 1.0)?
            .with_k_exact(self.k)?
            .with_wall_guard(wall_guard)?)
    }
}

#[derive(Serialize)]
struct RootsInfo {
    label: String,
    #[serde(flatten)]
    document: RootSystemDocument,
    root_count: usize,
    lie_algebra_dim: usize,
    #[serde(serialize_with = "serialize_rat")]
    ratio: Rat,
    #[serde(serialize_with = "serialize_rat")]
    k_star: Rat,
    highest_root: Vec<i64>,
    rho_coweight: Vec<String>,
}

fn roots_info(sys: &SystemArgs) -> Outcome {
    let rs = sys.build()?;
    print_json(&RootsInfo {
        label: rs.label(),
        document: rs.to_document(),
        root_count: rs.root_count(),
        lie_algebra_dim: rs.lie_algebra_dim(),
        ratio: rs.ratio(),
        k_star: k_star(&rs)?,
        highest_root: rs.highest_root().coeffs.clone(),
        rho_coweight: rs.rho_coweight().to_strings(),
    })?;
    Ok(0)
}

fn subroots_table(max_rank: usize, format: TableFormat, maximal_only: bool) -> Outcome {
    if max_rank == 0 {
        return Err(Failure::Usage("--max-rank must be at least 1".into()));
    }
    let mut rows = appendix_a_table(max_rank)?;
    if maximal_only {
        rows.retain(|r| r.maximal);
    }
    match format {
        TableFormat::Csv => emit(&table_to_csv(&rows))?,
        TableFormat::Json => print_json(&rows)?,
    }
    Ok(0)
}

fn threshold(args: &ThresholdArgs) -> Outcome {
    let k = match (&args.product, args.family, args.rank) {
        (Some(p), _, _) => {
            let rs = parse_product(p)?;
            let factors = rs
                .components()
                .iter()
                .map(|t| build_root_system(t.family, t.rank))
                .collect::<Result<Vec<_>, Error>>()?;
            reducible_k_star(&product(factors)?)?
        }
        (None, Some(family), Some(rank)) => k_star(&build_root_system(family, rank)?)?,
        _ => return Err(Failure::Usage("give --family and --rank, or --product".into())),
    };
    emit(&format!("{}\n", fmt_rat(&k)))?;
    Ok(0)
}

#[derive(Serialize)]
struct EvalReport {
    system: String,
    k: f64,
    h0: Vec<f64>,
    point: Vec<f64>,
    #[serde(rename = "A_re")]
    a_re: f64,
    #[serde(rename = "A_im")]
    a_im: f64,
    denom: f64,
    mu_hat_re: f64,
    mu_hat_im: f64,
    integrand: f64,
}

fn eval(args: &EvalArgs) -> Outcome {
    let built = args.spec.build()?;
    let spec = built.spec(args.spec.wall_guard)?;
    let raw = parse_list(&args.point, "--point")?;
    let point = if args.pairings {
        built.rs.from_pairings(&raw)?
    } else {
        raw
    };
    let a = spec.numerator(&point)?;
    let mu = spec.mu_hat(&point)?;
    let integrand = spec.integrand(&point)?;
    let denom: f64 = built.rs.positive_f64().iter().map(|alpha| dot(alpha, &point)).product();
    print_json(&EvalReport {
        system: built.rs.label(),
        k: spec.k(),
        h0: built.h0.pairings(&built.rs),
        point,
        a_re: a.re,
        a_im: a.im,
        denom,
        mu_hat_re: mu.re,
        mu_hat_im: mu.im,
        integrand,
    })?;
    Ok(0)
}

fn scan_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from("shell,r_lo,r_hi,mass,std_error,samples\n");
    for (j, s) in report.shells.iter().enumerate() {
        out.push_str(&format!("{j},{},{},{:e},{:e},{}\n", s.r_lo, s.r_hi, s.mass, s.std_error, s.samples));
    }
    out
}

fn scan(args: &ScanArgs, workers: Option<usize>) -> Outcome {
    let seed = seed_or_default(args.seed)?;
    let built = args.spec.build()?;
    let spec = built.spec(args.spec.wall_guard)?;
    if !(args.r0 >= 1.0 && args.r0.is_finite()) {
        return Err(Failure::Usage(format!("--r0 {} must be >= 1", args.r0)));
    }
    let sampling = Sampling::new(args.samples, seed).with_workers(workers);
    let report = convergence_scan(&spec, args.shells, args.r0, &sampling)?;
    match args.format {
        ScanFormat::Json => print_json(&report)?,
        ScanFormat::Csv => emit(&scan_csv(&report))?,
    }
    eprintln!(
        "verdict: {}, fitted slope {:.3}, k* = {}",
        report.verdict,
        report.fitted_slope,
        fmt_rat(&report.k_star)
    );
    if let Some(g) = &report.guidance {
        eprintln!("guidance: {g}");
    }
    Ok(if report.verdict == Verdict::Inconclusive { 2 } else { 0 })
}

fn probe(args: &ProbeArgs) -> Outcome {
    let seed = seed_or_default(args.seed)?;
    let built = args.spec.build()?;
    let spec = built.spec(args.spec.wall_guard)?;
    let params = ProbeParams {
        delta: args.delta,
        epsilon: args.epsilon,
        window: args.window,
        windows: args.windows,
        directions: args.directions,
        seed,
    };
    let report = almost_period_probe(&spec, &params)?;
    print_json(&report)?;
    Ok(if report.missed_windows == 0 { 0 } else { 2 })
}

fn subsystem_for(rs: &RootSystem, drop_index: usize) -> Result<SimpleSubrootSystem<'_>, Failure> {
    if drop_index == 0 || drop_index > rs.rank() {
        return Err(Failure::Usage(format!(
            "--drop-index {drop_index} out of range 1..={}",
            rs.rank()
        )));
    }
    Ok(SimpleSubrootSystem::whole(rs, drop_index - 1)?)
}

fn lemma_constants(args: &LemmaArgs) -> Outcome {
    let rs = args.system.build()?;
    let psi = subsystem_for(&rs, args.drop_index)?;
    let projection = averaging_projection(&psi, &psi.psi_one())?;
    let constants = certify_constants(&psi, &projection, args.grid)?;
    print_json(&constants)?;
    Ok(if constants.certified { 0 } else { 3 })
}

#[derive(Serialize)]
struct Checked<T: Serialize> {
    passed: bool,
    reports: Vec<T>,
}

fn verify(command: VerifyCommand) -> Outcome {
    match command {
        VerifyCommand::Lemma1(args) => {
            let rs = args.lemma.system.build()?;
            let psi = subsystem_for(&rs, args.lemma.drop_index)?;
            let seed = seed_or_default(args.seed)?;
            let report = verify_lemma1(&psi, args.lemma.grid, args.samples.unwrap_or(10_000), seed)?;
            print_json(&report)?;
            Ok(if report.passed { 0 } else { 3 })
        }
        VerifyCommand::Lemma2(args) => {
            let rs = args.lemma.system.build()?;
            let psi = subsystem_for(&rs, args.lemma.drop_index)?;
            let seed = seed_or_default(args.seed)?;
            let report = verify_lemma2(&psi, args.lemma.grid, args.samples.unwrap_or(100_000), seed)?;
            print_json(&report)?;
            Ok(if report.passed { 0 } else { 3 })
        }
        VerifyCommand::Lemma3(args) => {
            let systems = match (&args.product, args.family, args.rank) {
                (Some(p), _, _) => vec![parse_product(p)?],
                (None, Some(family), Some(rank)) => vec![build_root_system(family, rank)?],
                _ => CartanType::classification(args.max_rank)
                    .into_iter()
                    .map(|t| build_root_system(t.family, t.rank))
                    .collect::<Result<Vec<_>, Error>>()?,
            };
            let reports: Vec<_> = systems.iter().map(lemma3_check).collect();
            let passed = reports.iter().all(|r| r.holds);
            print_json(&Checked { passed, reports })?;
            Ok(if passed { 0 } else { 3 })
        }
        VerifyCommand::AppendixA { max_rank } => {
            let table = appendix_a_table(max_rank)?;
            let reports = check_closed_forms(&table, max_rank);
            let passed = reports.iter().all(|c| c.failures.is_empty());
            print_json(&Checked { passed, reports })?;
            Ok(if passed { 0 } else { 3 })
        }
    }
}

#[derive(Serialize)]
struct CorollaryRow {
    #[serde(flatten)]
    report: orbital_l2::l2_analyzer::CorollaryReport,
    #[serde(serialize_with = "orbital_l2::rational::serialize_opt_rat")]
    epsilon0: Option<Rat>,
}

fn corollaries(args: &CorollaryArgs) -> Outcome {
    let systems = match (args.family, args.rank) {
        (Some(family), Some(rank)) => vec![build_root_system(family, rank)?],
        _ => CartanType::classification(args.max_rank)
            .into_iter()
            .map(|t| build_root_system(t.family, t.rank))
            .collect::<Result<Vec<_>, Error>>()?,
    };
    let rows = systems
        .iter()
        .map(|rs| {
            Ok(CorollaryRow {
                report: corollary_report(rs)?,
                epsilon0: epsilon0(rs).ok(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    print_json(&rows)?;
    Ok(0)
}
