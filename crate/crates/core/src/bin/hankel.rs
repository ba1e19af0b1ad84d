use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use hankel_core::bounds::Functional;
use hankel_core::caratheodory::lemma_sweep;
use hankel_core::coeffs::{parse_rational, ClassKind, ClassSpec};
use hankel_core::polyid::{identity, IdentityName, IdentityReport};
use hankel_core::ring::Ring;
use hankel_core::report::{
    bound_rows, bound_table, identity_table, json_lines, real, search_table, Format, IdentityRow,
    Table,
};
use hankel_core::search::{alpha_sweep, maximize, parse_alpha_grid, SearchConfig, SearchReport};
use hankel_core::Error;

const EXIT_VIOLATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(
    name = "hankel",
    version,
    about = "Hankel determinant and Zalcman functional bounds for starlike, convex, bounded-turning and harmonic classes",
    after_help = "Exit status: 0 success, 1 mathematical violation, 2 usage or configuration error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every registered polynomial identity exactly.
    Identities(IdentitiesArgs),
    /// Monte-Carlo check of the Carathéodory coefficient lemmas.
    Lemmas(LemmasArgs),
    /// Print closed-form bounds.
    ///
    /// Columns: class, alpha, alpha_exact, kind (bound | reference),
    /// functional, bound (decimal), bound_exact (num/den, empty for
    /// irrational reference values), source.
    Bounds(BoundsArgs),
    /// Maximize a functional over one class and compare with its bound.
    Search(SearchArgs),
    /// Run `search` for every alpha on a grid.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "csv", "text"])]
    format: String,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IdentitiesArgs {
    /// Only check this identity.
    #[arg(long)]
    name: Option<String>,
    /// Add 1 to the right-hand side of this identity (self-test of the checker).
    #[arg(long, hide = true)]
    perturb: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LemmasArgs {
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest residual accepted.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BoundsArgs {
    /// s | k | r | harmonic-m (long names also accepted).
    #[arg(long)]
    class: ClassKind,
    /// Order alpha: integer, decimal or num/den.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "alpha_grid")]
    alpha: Option<String>,
    /// Inclusive start:stop:step; points at or above 1 are dropped.
    #[arg(long, allow_hyphen_values = true)]
    alpha_grid: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SearchOptions {
    /// h31 | h31-h | h31-g | j2 | j3 | jn:<n>
    #[arg(long, default_value = "h31")]
    functional: Functional,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    /// Atoms per measure.
    #[arg(long, default_value_t = 4)]
    atoms: usize,
    /// Simplex iterations per restart.
    #[arg(long, default_value_t = 500)]
    refine_iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allowed excess of the search result over the bound.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Let the first atom's angle vary instead of pinning it at 0.
    #[arg(long)]
    free_first_angle: bool,
    /// Worker threads for restarts.
    #[arg(long, env = "HANKEL_THREADS")]
    threads: Option<usize>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    class: ClassKind,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    #[command(flatten)]
    options: SearchOptions,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    class: ClassKind,
    /// Inclusive start:stop:step; points at or above 1 are dropped.
    #[arg(long, allow_hyphen_values = true)]
    alpha_grid: String,
    #[command(flatten)]
    options: SearchOptions,
    #[command(flatten)]
    output: OutputArgs,
}

/// Failure of a subcommand, carrying its exit status.
enum Failure {
    Config(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Identities(a) => cmd_identities(a),
        Command::Lemmas(a) => cmd_lemmas(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Search(a) => cmd_search(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(EXIT_VIOLATION)
        }
    }
}

fn emit(output: &OutputArgs, json: String, table: Table) -> Outcome {
    let format: Format = output.format.parse()?;
    let text = match format {
        Format::Json => json,
        Format::Csv => table.to_csv(),
        Format::Text => table.to_text(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_identities(args: IdentitiesArgs) -> Outcome {
    let names: Vec<IdentityName> = match &args.name {
        Some(n) => vec![n.parse()?],
        None => IdentityName::ALL.to_vec(),
    };
    let perturb: Option<IdentityName> = args.perturb.as_deref().map(str::parse).transpose()?;

    let reports: Vec<IdentityReport> = names
        .iter()
        .map(|&n| {
            let mut id = identity(n);
            if perturb == Some(n) {
                id.rhs = &id.rhs + &id.rhs.int(1);
            }
            IdentityReport::compare(&id)
        })
        .collect();
    let rows: Vec<IdentityRow> = reports.iter().map(IdentityRow::from).collect();
    emit(&args.output, json_lines(&rows), identity_table(&rows))?;

    let failing: Vec<String> = reports.iter().filter(|r| !r.holds).map(|r| r.name.to_string()).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(format!("identities do not hold: {}", failing.join(", "))))
    }
}

fn cmd_lemmas(args: LemmasArgs) -> Outcome {
    if args.samples < 1 {
        return Err(Failure::Config("samples must be at least 1".into()));
    }
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::Config("tol must be positive".into()));
    }
    let sweep = lemma_sweep(args.samples, args.seed, args.tol);

    let mut table = Table::new(vec!["check", "max_residual"]);
    for (name, v) in [
        ("modulus", sweep.max_modulus),
        ("product", sweep.max_product),
        ("weighted-product", sweep.max_weighted_product),
        ("witness-roundtrip", sweep.max_roundtrip),
        ("witness-modulus", sweep.max_witness_modulus),
    ] {
        table.push(vec![name.to_string(), real(v)]);
    }
    let json = serde_json::to_string(&sweep).expect("serializable") + "\n";
    emit(&args.output, json, table)?;

    match &sweep.violation {
        None => Ok(()),
        Some(v) => Err(Failure::Violation(format!(
            "{} residual {:e} at sample {} for measure {}",
            v.lemma,
            v.residual,
            v.sample,
            serde_json::to_string(&v.measure).expect("serializable")
        ))),
    }
}

fn alphas(alpha: Option<&str>, grid: Option<&str>) -> Result<Vec<BigRational>, Failure> {
    match (alpha, grid) {
        (Some(a), None) => Ok(vec![parse_rational(a)?]),
        (None, Some(g)) => Ok(parse_alpha_grid(g)?),
        _ => Err(Failure::Config("give exactly one of --alpha and --alpha-grid".into())),
    }
}

fn cmd_bounds(args: BoundsArgs) -> Outcome {
    let mut rows = Vec::new();
    for a in alphas(args.alpha.as_deref(), args.alpha_grid.as_deref())? {
        rows.extend(bound_rows(&ClassSpec::new(args.class, a)?));
    }
    emit(&args.output, json_lines(&rows), bound_table(&rows))
}

fn config(class: ClassSpec, o: &SearchOptions) -> SearchConfig {
    SearchConfig {
        restarts: o.restarts,
        atoms: o.atoms,
        refine_iters: o.refine_iters,
        seed: o.seed,
        tol: o.tol,
        pin_first_angle: !o.free_first_angle,
        threads: o.threads,
        ..SearchConfig::new(class, o.functional)
    }
}

fn finish_search(reports: &[SearchReport], tol: f64, output: &OutputArgs) -> Outcome {
    emit(output, json_lines(reports), search_table(reports))?;
    let violations: Vec<String> = reports
        .iter()
        .filter(|r| !r.respects_bound(tol))
        .map(|r| {
            format!(
                "{} {} at alpha {}: found {} above bound {}",
                r.class.kind(),
                r.functional,
                r.class.alpha_f64(),
                real(r.best_magnitude),
                real(r.bound)
            )
        })
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(violations.join("; ")))
    }
}

fn cmd_search(args: SearchArgs) -> Outcome {
    let class = ClassSpec::new(args.class, parse_rational(&args.alpha)?)?;
    let cfg = config(class, &args.options);
    let report = maximize(&cfg)?;
    finish_search(&[report], cfg.tol, &args.output)
}

fn cmd_sweep(args: SweepArgs) -> Outcome {
    let grid = parse_alpha_grid(&args.alpha_grid)?;
    let first = grid.first().cloned().unwrap_or_else(|| args.class.alpha_min());
    let template = config(ClassSpec::new(args.class, first)?, &args.options);
    template.validate()?;
    let reports = alpha_sweep(args.class, &grid, &template)?;
    finish_search(&reports, template.tol, &args.output)
}
