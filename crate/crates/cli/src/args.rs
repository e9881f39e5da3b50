use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "valuscope", version, about = "Return distributions, complexity and information flow for daily index data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

/// Which column of the input a single-series analysis runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Pe,
    Close,
    /// One-day percent returns of the close.
    Returns,
}

#[derive(Debug, Clone, Args)]
pub struct Io {
    /// Input CSV with `date`, `close` and optional `pe` columns.
    #[arg(long = "in", value_name = "CSV")]
    pub input: PathBuf,
    /// Directory for the report files.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// First date to keep (YYYY-MM-DD).
    #[arg(long)]
    pub from: Option<NaiveDate>,
    /// Last date to keep (YYYY-MM-DD).
    #[arg(long)]
    pub to: Option<NaiveDate>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LadderArgs {
    /// Comma-separated horizons such as `1d,1w,3m,1y,2y..12y`.
    #[arg(long, default_value = "1d,1w,2w,1m,3m,6m,1y,2y..12y")]
    pub horizons: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EntropyArgs {
    #[arg(long, value_enum, default_value_t = SeriesKind::Pe)]
    pub series: SeriesKind,
    /// Tsallis orders.
    #[arg(long = "q", value_delimiter = ',', default_value = "0.1,2")]
    pub tsallis_q: Vec<f64>,
    /// Sample-entropy template length.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Sample-entropy tolerance as a multiple of the sample standard deviation.
    #[arg(long, default_value_t = 0.2)]
    pub r: f64,
    /// Permutation-entropy order.
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    /// Permutation-entropy delay.
    #[arg(long, default_value_t = 1)]
    pub delay: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HurstArgs {
    #[arg(long, value_enum, default_value_t = SeriesKind::Pe)]
    pub series: SeriesKind,
    /// Moment orders, e.g. `1,2,3` or `1..5`.
    #[arg(long = "q", default_value = "1..5")]
    pub q: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EmbeddingArgs {
    #[arg(long, default_value_t = 5)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub delay: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LyapunovArgs {
    #[arg(long, value_enum, default_value_t = SeriesKind::Pe)]
    pub series: SeriesKind,
    #[command(flatten)]
    #[serde(flatten)]
    pub embedding: EmbeddingArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NmiArgs {
    #[arg(long, default_value_t = 50)]
    pub max_lag: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TeArgs {
    /// History length.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Also report the returns → P/E direction.
    #[arg(long)]
    pub both: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct YearsArgs {
    #[arg(long, default_value_t = 12)]
    pub max_years: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConditionalArgs {
    #[arg(long, default_value_t = 7)]
    pub max_years: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PmfArgs {
    /// Horizons whose return PMFs are reported.
    #[arg(long, default_value = "1y")]
    pub horizons: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReportAllArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ladder: LadderArgs,
    #[arg(long, default_value_t = 12)]
    pub max_years: u32,
    #[arg(long = "q", default_value = "1..5")]
    pub q: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub embedding: EmbeddingArgs,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 0.2)]
    pub r: f64,
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 50)]
    pub max_lag: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the input and report coverage and the implied EPS series.
    IngestCheck {
        #[command(flatten)]
        io: Io,
    },
    /// Forward returns, PMFs and min/max/mode over a horizon ladder.
    Returns {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        args: LadderArgs,
    },
    /// Min/max/mode CAGR for 1..=max-years holding periods.
    Cagr {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        args: YearsArgs,
    },
    /// Return PMFs with σ-bands and reward-risk statistics.
    Pmf {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        args: PmfArgs,
    },
    /// PMF of the P/E ratio.
    PePmf {
        #[command(flatten)]
        io: Io,
    },
    /// One P/E PMF per calendar month.
    PeMonthly {
        #[command(flatten)]
        io: Io,
    },
    /// Shannon, Tsallis, sample and permutation entropy.
    Entropy {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        args: EntropyArgs,
    },
    /// Generalized Hurst exponents.
    Hurst {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        args: HurstArgs,
    },
    /// Lyapunov spectrum, KS entropy and Kaplan-Yorke dimension.
    Lyapunov {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        args: LyapunovArgs,
    },
    /// Entropy, Hurst and largest Lyapunov exponent of returns per horizon.
    Profile {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        ladder: LadderArgs,
        #[command(flatten)]
        embedding: EmbeddingArgs,
    },
    /// Mutual information between P/E and next-day returns.
    Mi {
        #[command(flatten)]
        io: Io,
    },
    /// Normalized mutual information at lags 1..=max-lag.
    Nmi {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        args: NmiArgs,
    },
    /// Transfer entropy from P/E to returns.
    Te {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        args: TeArgs,
    },
    /// Reward-risk statistics by P/E band and holding period.
    Conditional {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        args: ConditionalArgs,
    },
    /// Every report, in pipeline order.
    ReportAll {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        args: ReportAllArgs,
    },
}
