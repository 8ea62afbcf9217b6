//! Flag definitions and settings resolution.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use umbra_core::Rat;

use crate::error::CliError;

const AFTER_HELP: &str = "\
Operators are written in D, e.g. \"exp(D)-1\", \"D*exp(b*D)\", \"D/(exp(D)-1)\".
Named operators: D, delta, nabla, shift (a), abel (b), laguerre, weierstrass,
bernoulli_op; a name followed by (expr) is composition. Parameters are
rationals bound with --param k=p/q. An identity in a parameter is certified
only at the values supplied, by exact checks on a grid of points.

Exit codes: 0 success, 2 parse or usage error, 3 precondition failure,
4 verification failure.";

#[derive(Parser, Debug)]
#[command(name = "umbra", version, about = "Exact umbral calculus on the command line", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polynomial sequence of binomial type of a delta operator
    Seq(SeqArgs),
    /// Logarithmic sequence of binomial type, as windows over harmonic logarithms
    Logseq(SeqArgs),
    /// Coefficients c_k with --op = sum_k c_k Q^k/k!, Q given by --op2 (default D)
    Expand(PairArgs),
    /// Coefficients of the compositional inverse by Lagrange inversion
    Invert(OpArgs),
    /// Connection constants: row n writes the --op2 sequence term n in the --op sequence
    Connect(PairArgs),
    /// Run named identity suites
    Verify(VerifyArgs),
    /// Numeric value of a logarithmic sequence term at a positive point
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
    Plain,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Working order: series are known through D^(order-1) [default: 16]
    #[arg(long, env = "UMBRA_ORDER")]
    pub order: Option<i64>,
    /// Window depth for logarithmic series [default: 12]
    #[arg(long)]
    pub depth: Option<usize>,
    /// Parameter binding k=v with v rational (repeatable)
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,
    /// Output format [default: json]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// File of key=value lines (order, depth, format)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SeqArgs {
    #[arg(long)]
    pub op: String,
    /// Terms 0..=N (logseq: -N..=N)
    #[arg(long, conflicts_with = "range")]
    pub n: Option<i64>,
    /// Inclusive index range lo..hi
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[arg(long)]
    pub op: String,
    #[arg(long)]
    pub op2: Option<String>,
    /// Largest index [default: 10]
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct OpArgs {
    #[arg(long)]
    pub op: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite name, `all`, or `binomial` (needs --op); repeatable
    #[arg(long = "suite", required = true)]
    pub suites: Vec<String>,
    /// Largest degree checked [default: 10]
    #[arg(long)]
    pub n: Option<usize>,
    /// Delta operator for the binomial suite
    #[arg(long)]
    pub op: Option<String>,
    /// Add 1 to this term before the binomial suite runs
    #[arg(long)]
    pub corrupt: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub op: String,
    /// Index of the logarithmic sequence term
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub n: i64,
    /// Positive rational evaluation point
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
    /// Decimal digits
    #[arg(long, default_value_t = 20)]
    pub digits: u32,
    #[command(flatten)]
    pub common: Common,
}

/// Resolved settings; precedence is flag, then environment, then config
/// file, then default.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub order: i64,
    pub depth: usize,
    pub format: Format,
    pub params: BTreeMap<String, Rat>,
}

#[derive(Default)]
struct FileConfig {
    order: Option<i64>,
    depth: Option<usize>,
    format: Option<Format>,
}

fn parse_config(text: &str) -> Result<FileConfig, CliError> {
    let mut cfg = FileConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let bad = |why: &str| CliError::Usage(format!("config line {}: {why}", i + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let value = value.trim().trim_matches('"');
        match key.trim() {
            "order" => cfg.order = Some(value.parse().map_err(|_| bad("order must be an integer"))?),
            "depth" => cfg.depth = Some(value.parse().map_err(|_| bad("depth must be a non-negative integer"))?),
            "format" => cfg.format = Some(value.parse().map_err(|e: String| bad(&e))?),
            other => return Err(bad(&format!("unknown key `{other}`"))),
        }
    }
    Ok(cfg)
}

pub fn parse_rational(text: &str) -> Result<Rat, CliError> {
    Rat::from_str(text.trim())
        .ok()
        .filter(|_| !text.trim().ends_with("/0"))
        .ok_or_else(|| CliError::Usage(format!("`{text}` is not a rational p/q")))
}

fn parse_params(items: &[String]) -> Result<BTreeMap<String, Rat>, CliError> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| CliError::Usage(format!("--param `{item}`: expected k=v")))?;
        let k = k.trim();
        let ident = k.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ident {
            return Err(CliError::Usage(format!("--param `{item}`: `{k}` is not an identifier")));
        }
        out.insert(k.to_string(), parse_rational(v)?);
    }
    Ok(out)
}

impl Common {
    pub fn resolve(&self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => FileConfig::default(),
        };
        let order = self.order.or(file.order).unwrap_or(16);
        if order < 1 {
            return Err(CliError::Usage(format!("order must be positive, got {order}")));
        }
        Ok(Settings {
            order,
            depth: self.depth.or(file.depth).unwrap_or(12),
            format: self.format.or(file.format).unwrap_or(Format::Json),
            params: parse_params(&self.params)?,
        })
    }
}

/// Inclusive range `lo..hi` or `lo..=hi`.
pub fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Usage(format!("range `{text}`: expected lo..hi"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi): (i64, i64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(CliError::Usage(format!("range `{text}` is empty")));
    }
    Ok((lo, hi))
}
