mod render;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use seqfam::float_check::{float_sweep, DEFAULT_TOLERANCE};
use seqfam::oeis::{cross_check, Axis, ClientConfig, OeisClient};
use seqfam::{sweep, table, Error, Family, IdentityId, IntRange, RelRange, SweepSpec};

/// Tables, identity sweeps, float checks and OEIS cross-checks for
/// product-representable sequence families.
#[derive(Debug, Parser)]
#[command(name = "seqfam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a window of X(n, m).
    Table(TableArgs),
    /// Check catalog identities over a parameter grid.
    Verify(VerifyArgs),
    /// Compare floating-point root products with exact values.
    FloatCheck(FloatArgs),
    /// Match a row or column against OEIS by leading terms.
    Oeis(OeisArgs),
}

#[derive(Debug, Clone)]
enum FamilyArg {
    All,
    One(Family),
}

fn parse_family(s: &str) -> Result<FamilyArg, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(FamilyArg::All);
    }
    Family::from_selector(s).map(FamilyArg::One).map_err(|e| e.to_string())
}

fn parse_single_family(s: &str) -> Result<Family, String> {
    Family::from_selector(s).map_err(|e| e.to_string())
}

fn resolve_families(args: &[FamilyArg]) -> Vec<Family> {
    let mut out: Vec<Family> = Vec::new();
    for a in args {
        let add = match a {
            FamilyArg::All => Family::standard_set(),
            FamilyArg::One(f) => vec![f.clone()],
        };
        for f in add {
            if !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
enum IdentityArg {
    All,
    One(IdentityId),
}

fn parse_identity(s: &str) -> Result<IdentityArg, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(IdentityArg::All);
    }
    s.parse().map(IdentityArg::One).map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<IntRange, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rel_range(s: &str) -> Result<RelRange, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
struct TableArgs {
    /// power[:c], pochhammer, fib, lucas:q, roots:<file>
    #[arg(long, value_parser = parse_single_family)]
    family: Family,
    #[arg(long, value_parser = parse_range, default_value = "1..7")]
    n: IntRange,
    #[arg(long, value_parser = parse_range, default_value = "0..7", allow_hyphen_values = true)]
    m: IntRange,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Catalog tags, comma separated, or `all`.
    #[arg(long, value_parser = parse_identity, value_delimiter = ',', default_value = "all")]
    identity: Vec<IdentityArg>,
    /// Repeatable; `all` selects the ten standard families.
    #[arg(long, value_parser = parse_family, default_value = "all")]
    family: Vec<FamilyArg>,
    #[arg(long, value_parser = parse_range, default_value = "1..12")]
    n: IntRange,
    /// Either endpoint may be `n`, e.g. `n..20`.
    #[arg(long, value_parser = parse_rel_range, default_value = "-8..8", allow_hyphen_values = true)]
    m: RelRange,
    /// Restricts p; by default every admissible value is used.
    #[arg(long, value_parser = parse_range)]
    p: Option<IntRange>,
    #[arg(long, value_parser = parse_range)]
    q: Option<IntRange>,
}

#[derive(Debug, Args)]
struct FloatArgs {
    #[arg(long, value_parser = parse_family, default_value = "fib")]
    family: Vec<FamilyArg>,
    #[arg(long, value_parser = parse_range, default_value = "1..25")]
    n: IntRange,
    #[arg(long, value_parser = parse_range, default_value = "-10..10", allow_hyphen_values = true)]
    m: IntRange,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("axis").required(true).args(["row", "column"]))]
struct OeisArgs {
    #[arg(long, value_parser = parse_single_family)]
    family: Family,
    /// Fixed n; terms run over --m.
    #[arg(long)]
    row: Option<u32>,
    /// Fixed m; terms run over --n.
    #[arg(long, allow_hyphen_values = true)]
    column: Option<i64>,
    #[arg(long, value_parser = parse_range, default_value = "0..11", conflicts_with = "row")]
    n: IntRange,
    #[arg(long, value_parser = parse_range, default_value = "0..9", allow_hyphen_values = true, conflicts_with = "column")]
    m: IntRange,
    /// Use only the cache and bundled fixtures.
    #[arg(long)]
    offline: bool,
    /// Overrides SEQFAM_CACHE_DIR.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EXTERNAL: u8 = 3;

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::TooFewTerms { .. } => EXIT_USAGE,
        _ => EXIT_EXTERNAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers.map(usize::from);
    let mut out = io::stdout().lock();
    let result = match &cli.command {
        Command::Table(a) => cmd_table(a, cli.format, &mut out),
        Command::Verify(a) => cmd_verify(a, cli.format, workers, &mut out),
        Command::FloatCheck(a) => cmd_float(a, cli.format, workers, &mut out),
        Command::Oeis(a) => cmd_oeis(a, cli.format, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::MalformedResponse { raw, .. } = &e {
                eprintln!("raw response:\n{raw}");
            }
            ExitCode::from(error_code(&e))
        }
    }
}

type CmdResult = Result<u8, Error>;

fn cmd_table(a: &TableArgs, format: Format, out: &mut impl Write) -> CmdResult {
    let window = table(&a.family, a.n, a.m)?;
    render::table(&window, format, out)?;
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, format: Format, workers: Option<usize>, out: &mut impl Write) -> CmdResult {
    let mut ids: Vec<IdentityId> = Vec::new();
    for i in &a.identity {
        match i {
            IdentityArg::All => ids.extend(IdentityId::ALL),
            IdentityArg::One(id) => ids.push(*id),
        }
    }
    ids.sort();
    ids.dedup();
    let mut spec = SweepSpec::new(ids, resolve_families(&a.family), a.n, a.m);
    spec.p = a.p;
    spec.q = a.q;
    let report = sweep(&spec, workers)?;
    if report.total == 0 {
        eprintln!("warning: no admissible parameter points; 0 checks run");
    }
    render::sweep(&report, format, out)?;
    Ok(if report.all_passed() { 0 } else { EXIT_FAILED })
}

fn cmd_float(a: &FloatArgs, format: Format, workers: Option<usize>, out: &mut impl Write) -> CmdResult {
    if a.tol.is_nan() || a.tol < 0.0 {
        return Err(Error::Parse(format!("tolerance must be non-negative (got {})", a.tol)));
    }
    let families = resolve_families(&a.family);
    let run = || float_sweep(&families, a.n, a.m, a.tol);
    let report = match workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Domain(format!("cannot start {k} workers: {e}")))?
            .install(run)?,
        None => run()?,
    };
    render::float(&report, format, out)?;
    Ok(if report.all_passed() { 0 } else { EXIT_FAILED })
}

fn cmd_oeis(a: &OeisArgs, format: Format, out: &mut impl Write) -> CmdResult {
    let (axis, range) = match (a.row, a.column) {
        (Some(n), None) => (Axis::Row(n), a.m),
        (None, Some(m)) => (Axis::Column(m), a.n),
        _ => unreachable!("clap enforces exactly one axis"),
    };
    let client = OeisClient::new(ClientConfig {
        offline: a.offline,
        cache_dir: a.cache_dir.clone(),
        ..ClientConfig::default()
    });
    let check = cross_check(&client, &a.family, axis, range)?;
    render::oeis(&check, format, out)?;
    Ok(if check.verdict { 0 } else { EXIT_FAILED })
}
