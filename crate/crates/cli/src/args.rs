use clap::{Args, Parser, Subcommand, ValueEnum};
use devils_staircase::diophantine::DEFAULT_BIT_BUDGET;
use std::path::PathBuf;

/// Certified values of the devil's staircase Δ and the continued-fraction
/// tools around it.
///
/// Enclosures are printed as a lower and an upper decimal, rounded
/// outward. Exit status: 0 success, 1 usage, 2 precondition, 3
/// certification failure.
#[derive(Parser, Debug)]
#[command(name = "staircase", version)]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Config {
    /// Output format; each command has its own default
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Significant digits for printed enclosures
    #[arg(long, global = true, env = "STAIRCASE_PRECISION", default_value_t = 30)]
    pub digits: usize,
    /// Target width of β enclosures, as P/Q or a decimal such as 1e-30
    #[arg(long, global = true)]
    pub tol: Option<String>,
    /// Bit budget for exact convergent denominators before switching to logs
    #[arg(long, global = true, default_value_t = DEFAULT_BIT_BUDGET)]
    pub budget: u64,
    /// Seed for commands that draw random inputs
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Christoffel, central and mechanical words
    #[command(subcommand)]
    Word(WordCmd),
    /// Values of Δ
    #[command(subcommand)]
    Delta(DeltaCmd),
    /// Continued fraction expansions and convergents
    #[command(subcommand)]
    Cf(CfCmd),
    /// Running estimates of the irrationality exponent or base
    Measure {
        #[arg(value_enum)]
        kind: MeasureKindArg,
        #[command(flatten)]
        source: CfSource,
        /// Number of convergents or samples
        #[arg(short = 'N', default_value_t = 50)]
        n: usize,
    },
    /// Liouville class from the μ and θ estimates
    Classify {
        #[command(flatten)]
        source: CfSource,
        #[arg(short = 'N', default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 20.0)]
        mu_cutoff: f64,
        #[arg(long, default_value_t = 1.001)]
        theta_low: f64,
        #[arg(long, default_value_t = 1e6)]
        theta_high: f64,
    },
    /// Difference quotients of Δ near a slope
    #[command(subcommand)]
    Probe(ProbeCmd),
    /// List the named presets
    Presets,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum MeasureKindArg {
    Mu,
    Theta,
}

#[derive(Subcommand, Debug)]
pub enum WordCmd {
    /// Christoffel word of slope P/Q
    Christoffel {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        q: i64,
        /// Upper word t' instead of t
        #[arg(long)]
        upper: bool,
    },
    /// Central word z of P/Q
    Central { p: i64, q: i64 },
    /// The word b z b
    Bzb { b: u32, p: i64, q: i64 },
    /// Prefix of a mechanical word
    Mechanical {
        #[command(flatten)]
        slope: SlopeSource,
        /// Intercept ρ
        #[arg(long, default_value = "0")]
        intercept: String,
        /// Number of letters
        #[arg(short = 'n', long, default_value_t = 20)]
        length: usize,
        /// Ceiling word s' instead of s
        #[arg(long)]
        upper: bool,
    },
    /// Parry admissibility of a word such as 10101 or 1(10)^w
    Admissible { word: String },
}

#[derive(Subcommand, Debug)]
pub enum DeltaCmd {
    /// Δ(α), or Δ(α+) with --right-limit
    Eval {
        #[command(flatten)]
        slope: SlopeSource,
        /// Right limit Δ(α+) at a rational slope
        #[arg(long)]
        right_limit: bool,
    },
    /// Δ and Δ(+) at every fraction in [from, to] up to a denominator
    Plot {
        #[arg(long, default_value = "0")]
        from: String,
        #[arg(long, default_value = "1")]
        to: String,
        #[arg(long, default_value_t = 20)]
        max_den: u64,
        /// Write to this file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CfCmd {
    /// Partial quotients of a rational or of an interval
    Expand {
        /// Exact value P/Q
        #[arg(long, conflicts_with_all = ["lo", "hi"], required_unless_present_all = ["lo", "hi"])]
        value: Option<String>,
        /// Lower end of an enclosure
        #[arg(long, requires = "hi")]
        lo: Option<String>,
        /// Upper end of an enclosure
        #[arg(long, requires = "lo")]
        hi: Option<String>,
        /// Maximum number of terms after a0
        #[arg(short = 'n', default_value_t = 20)]
        n: usize,
    },
    /// Convergents p_n/q_n, with ln q_n when q_n is too large to hold
    Convergents {
        #[command(flatten)]
        source: CfSource,
        #[arg(short = 'N', default_value_t = 10)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ProbeCmd {
    /// Quotients at slopes just below a rational
    Left {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(short = 'K', default_value_t = 6)]
        k: usize,
    },
    /// Quotients at slopes just above a rational, against Δ(α+)
    Right {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(short = 'K', default_value_t = 6)]
        k: usize,
    },
    /// (Δ(1/q) − 1) q for q = 2, …, K + 1
    Zero {
        #[arg(short = 'K', default_value_t = 63)]
        k: usize,
    },
    /// Quotients near an irrational slope
    Irrational {
        #[command(flatten)]
        source: CfSource,
        #[arg(short = 'K', default_value_t = 8)]
        k: usize,
    },
    /// The lower bound on |Δ(α) − Δ(α_N)| from the first differing letter
    Lowerbound {
        /// P/Q, a continued fraction a0,a1,… or a preset name
        #[arg(long, required_unless_present = "random", requires = "alpha_n")]
        alpha: Option<String>,
        #[arg(long, requires = "alpha")]
        alpha_n: Option<String>,
        /// Check this many random prefix-sharing pairs instead
        #[arg(long, conflicts_with_all = ["alpha", "alpha_n"])]
        random: Option<usize>,
    },
}

/// A slope given as a fraction, a continued fraction or a preset.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct SlopeSource {
    /// Rational slope P/Q
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Continued fraction a0,a1,…; a last entry `fib` repeats 1 forever and
    /// `e-pattern` continues as 1,2,1,1,4,…
    #[arg(long, allow_hyphen_values = true)]
    pub cf: Option<String>,
    /// Named preset
    #[arg(long)]
    pub preset: Option<String>,
}

/// A continued fraction given explicitly or as a preset.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct CfSource {
    /// Continued fraction a0,a1,…, optionally ending in `fib` or `e-pattern`
    #[arg(long, allow_hyphen_values = true)]
    pub cf: Option<String>,
    /// Named preset
    #[arg(long)]
    pub preset: Option<String>,
}
