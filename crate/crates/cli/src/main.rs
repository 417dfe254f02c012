use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use zipchow::{
    bt_report_with, fzip_report_with, m11_compatibility, picard_with, present, q_dimension_with,
    report_with, ChowError, ChowOptions, FzipType, LinalgError, Parabolic, WeylError, ZipDatum, DEFAULT_MATRIX_CAP,
};

const CAP_VAR: &str = "ZIPCHOW_MATRIX_CAP";

#[derive(Parser)]
#[command(name = "zipchow", version, about = "Integral Chow rings of stacks of G-zips")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ring presentation.
    Present(DatumArgs),
    /// Full report: graded groups, Picard group, dimensions.
    Graded {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Degree-one group.
    Picard(DatumArgs),
    /// Total rank of the quotient.
    Qdim(DatumArgs),
    /// Number of W_L orbits on W_G and the rational ranks per degree.
    Orbits(DatumArgs),
    /// Report for an F-zip type.
    Fzip {
        /// Sizes at 0, 1, 2, ... ("1,1,1") or explicit "point:size" pairs ("0:2,1:1").
        #[arg(long, value_delimiter = ',', required = true)]
        tau: Vec<String>,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Truncated Barsotti-Tate groups with p inverted.
    Bt {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Compatibility check against the moduli of elliptic curves.
    M11 {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    Gl,
    Sp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParabolicKind {
    Borel,
    Siegel,
}

#[derive(Args)]
struct DatumArgs {
    #[arg(long, value_enum)]
    group: Group,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Levi block sizes, e.g. "1,2,1".
    #[arg(long, value_delimiter = ',')]
    composition: Option<Vec<usize>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    parabolic: Option<ParabolicKind>,
    /// Frobenius power; defaults to p.
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Debug)]
enum Failure {
    Usage { flag: String, message: String },
    Cap(String),
    Internal(String),
}

impl Failure {
    fn usage(flag: &str, message: impl Display) -> Self {
        Failure::Usage {
            flag: flag.into(),
            message: message.to_string(),
        }
    }
}

fn weyl_flag(e: &WeylError) -> &'static str {
    match e {
        WeylError::ZeroRank => "--group",
        WeylError::BadComposition { .. } => "--composition",
        WeylError::LeviMismatch { .. } => "--parabolic",
        WeylError::ZeroPower | WeylError::NotPowerOfPrime { .. } => "--q",
        WeylError::NotPrime(_) => "--p",
        WeylError::InexactDivision | WeylError::Overflow => "--group",
    }
}

impl From<ChowError> for Failure {
    fn from(e: ChowError) -> Self {
        let flag = match &e {
            ChowError::Linalg(LinalgError::MatrixTooLarge { .. }) => return Failure::Cap(e.to_string()),
            ChowError::Weyl(w) => weyl_flag(w),
            ChowError::NotFiniteDimensional => "--q",
            ChowError::NotPrime(_) => "--p",
            ChowError::InvalidDisplay { .. } => "--d",
            ChowError::ZeroLevel => "--level",
            ChowError::InvalidType(_) => "--tau",
            _ => return Failure::Internal(e.to_string()),
        };
        Failure::usage(flag, e)
    }
}

impl From<WeylError> for Failure {
    fn from(e: WeylError) -> Self {
        Failure::usage(weyl_flag(&e), e)
    }
}

fn parabolic(args: &DatumArgs) -> Result<Parabolic, Failure> {
    match args.group {
        Group::Gl => {
            if args.n.is_some() {
                return Err(Failure::usage("--n", "only valid with --group sp"));
            }
            if args.parabolic.is_some() {
                return Err(Failure::usage("--parabolic", "only valid with --group sp"));
            }
            match (&args.composition, args.h, args.d) {
                (Some(parts), h, None) => {
                    if let Some(h) = h {
                        if parts.iter().sum::<usize>() != h {
                            return Err(Failure::usage("--composition", format!("parts must sum to --h {h}")));
                        }
                    }
                    Ok(Parabolic::gl(parts)?)
                }
                (Some(_), _, Some(_)) => Err(Failure::usage("--d", "give either --d or --composition")),
                (None, Some(h), Some(d)) => {
                    if h == 0 {
                        return Err(Failure::usage("--h", "must be at least 1"));
                    }
                    if d > h {
                        return Err(Failure::usage("--d", format!("must satisfy 0 <= d <= h = {h}")));
                    }
                    Ok(Parabolic::display(h, d)?)
                }
                (None, None, _) => Err(Failure::usage("--h", "required with --group gl")),
                (None, Some(_), None) => Err(Failure::usage("--d", "required with --group gl (or give --composition)")),
            }
        }
        Group::Sp => {
            for (flag, set) in [("--h", args.h.is_some()), ("--d", args.d.is_some()), ("--composition", args.composition.is_some())] {
                if set {
                    return Err(Failure::usage(flag, "only valid with --group gl"));
                }
            }
            let n = args.n.ok_or_else(|| Failure::usage("--n", "required with --group sp"))?;
            if n == 0 {
                return Err(Failure::usage("--n", "must be at least 1"));
            }
            match args.parabolic {
                Some(ParabolicKind::Borel) => Ok(Parabolic::sp_borel(n)?),
                Some(ParabolicKind::Siegel) => Ok(Parabolic::sp_siegel(n)?),
                None => Err(Failure::usage("--parabolic", "required with --group sp")),
            }
        }
    }
}

fn frobenius_power(args: &DatumArgs) -> Result<u64, Failure> {
    args.q
        .or(args.p)
        .ok_or_else(|| Failure::usage("--q", "give --q or --p"))
}

fn datum(args: &DatumArgs) -> Result<ZipDatum, Failure> {
    let par = parabolic(args)?;
    Ok(ZipDatum::new(par, frobenius_power(args)?, args.p)?)
}

fn parse_tau(items: &[String]) -> Result<FzipType, Failure> {
    let bad = |item: &str| Failure::usage("--tau", format!("cannot parse {item:?}"));
    let mut entries = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let item = item.trim();
        let entry = match item.split_once(':') {
            Some((point, size)) => (
                point.trim().parse().map_err(|_| bad(item))?,
                size.trim().parse().map_err(|_| bad(item))?,
            ),
            None => (i as i64, item.parse().map_err(|_| bad(item))?),
        };
        entries.push(entry);
    }
    Ok(FzipType::new(entries)?)
}

fn options() -> Result<ChowOptions, Failure> {
    let matrix_cap = match std::env::var(CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(CAP_VAR, format!("expected a positive integer, got {v:?}")))?,
        Err(_) => DEFAULT_MATRIX_CAP,
    };
    Ok(ChowOptions { matrix_cap })
}

fn emit<T: Serialize + Display>(format: Format, value: &T) -> Result<String, Failure> {
    match format {
        Format::Text => Ok(value.to_string()),
        Format::Json => serde_json::to_string(value).map_err(|e| Failure::Internal(e.to_string())),
    }
}

#[derive(Serialize)]
struct Orbits {
    /// A JSON number when it fits in a `u64`, otherwise a decimal string.
    orbit_count: serde_json::Value,
    rational_ranks: Vec<u64>,
}

impl Display for Orbits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "orbit count = {}", self.orbit_count)?;
        let ranks: Vec<String> = self.rational_ranks.iter().map(u64::to_string).collect();
        write!(f, "rational ranks = {}", ranks.join(" "))
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let opts = options()?;
    let format = cli.format;
    match &cli.command {
        Command::Present(args) => emit(format, &present(&datum(args)?)),
        Command::Graded { datum: args, max_degree } => {
            let z = datum(args)?;
            let max = max_degree.unwrap_or_else(|| z.parabolic().top_degree_bound());
            emit(format, &report_with(&z, max, &opts)?)
        }
        Command::Picard(args) => emit(format, &picard_with(&datum(args)?, &opts)?),
        Command::Qdim(args) => {
            let par = parabolic(args)?;
            if frobenius_power(args)? == 1 {
                return Err(ChowError::NotFiniteDimensional.into());
            }
            let z = ZipDatum::new(par, frobenius_power(args)?, args.p)?;
            let dim = q_dimension_with(&z, &opts)?;
            Ok(dim.to_string())
        }
        Command::Orbits(args) => {
            let par = parabolic(args)?;
            let count = par.coset_count().to_string();
            let orbits = Orbits {
                orbit_count: match count.parse::<u64>() {
                    Ok(n) => n.into(),
                    Err(_) => count.into(),
                },
                rational_ranks: par.rational_rank_series()?,
            };
            emit(format, &orbits)
        }
        Command::Fzip { tau, p, max_degree } => {
            let tau = parse_tau(tau)?;
            let par = Parabolic::gl(&tau.composition())?;
            let max = max_degree.unwrap_or_else(|| par.top_degree_bound());
            emit(format, &fzip_report_with(&tau, *p, max, &opts)?)
        }
        Command::Bt {
            h,
            d,
            level,
            p,
            max_degree,
        } => {
            if *h == 0 {
                return Err(Failure::usage("--h", "must be at least 1"));
            }
            if d > h {
                return Err(Failure::usage("--d", format!("must satisfy 0 <= d <= h = {h}")));
            }
            let max = max_degree.unwrap_or((d * (h - d)) as u32);
            emit(format, &bt_report_with(*h, *d, *level, *p, max, &opts)?)
        }
        Command::M11 { p } => emit(format, &m11_compatibility(*p)?),
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> io::Result<()> {
    let mut text = text.to_owned();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| {
        write_output(cli.output.as_ref(), &text).map_err(|e| Failure::usage("--output", e))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage { flag, message }) => {
            eprintln!("zipchow: error: {flag}: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(message)) => {
            eprintln!("zipchow: error: {message} (raise {CAP_VAR})");
            ExitCode::from(3)
        }
        Err(Failure::Internal(message)) => {
            eprintln!("zipchow: internal error: {message}");
            ExitCode::from(1)
        }
    }
}
