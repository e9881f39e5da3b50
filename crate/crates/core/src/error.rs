use chrono::NaiveDate;
use thiserror::Error;

/// Every failure the analysis pipeline can report.
///
/// Variants carrying a `row` use 1-based data-row numbers (the header is
/// not counted) so they can be pasted straight into an error message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("row {row}: {message}")]
    MalformedRow { row: usize, message: String },
    #[error("row {row} ({date}): {field} must be positive, got {value}")]
    NonPositiveValue {
        row: usize,
        date: NaiveDate,
        field: &'static str,
        value: f64,
    },
    #[error("row {row}: duplicate or out-of-order date {date}")]
    DuplicateDate { row: usize, date: NaiveDate },
    #[error("row {row} ({date}): P/E reappears after a gap; coverage must be one contiguous suffix")]
    NonContiguousPe { row: usize, date: NaiveDate },
    #[error("series has no P/E observations")]
    NoPeCoverage,
    #[error("no rows between {from} and {to}")]
    EmptyResult { from: NaiveDate, to: NaiveDate },
    #[error("invalid date range: {from} is after {to}")]
    InvalidRange { from: NaiveDate, to: NaiveDate },
    #[error("series of length {len} is too short: {needed} observations required")]
    SeriesTooShort { len: usize, needed: usize },
    #[error("total loss: a return of {0}% cannot be annualized")]
    TotalLoss(f64),
    #[error("empty sample")]
    EmptySet,
    #[error("zero interquartile range")]
    DegenerateSample,
    #[error("no observations for month {0}")]
    EmptyMonth(u32),
    #[error("Tsallis order q must be positive and different from 1, got {0}")]
    InvalidQ(f64),
    #[error("no template matches (m = {m}, r = {r})")]
    NoMatches { m: usize, r: f64 },
    #[error("series is constant")]
    DegenerateSeries,
    #[error("too few neighbours to fit local tangent maps: {0}")]
    InsufficientNeighbors(String),
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("a marginal collapses to a single bin")]
    DegenerateMarginal,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
