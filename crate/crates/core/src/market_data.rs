//! Daily close / P/E ingestion and the implied-earnings series.

use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::Serialize;

use crate::error::{Error, Result};

/// Rows per trading year. Every "year" offset in the crate is a row offset.
pub const TRADING_YEAR: usize = 252;

/// Date-indexed daily observations.
///
/// Invariants (checked by [`DailySeries::new`]): dates strictly increase,
/// closes and present P/E values are positive, and P/E coverage is a
/// single contiguous suffix of the date range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DailySeries {
    dates: Vec<NaiveDate>,
    close: Vec<f64>,
    pe: Vec<Option<f64>>,
}

/// Row filter applied while ingesting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestConfig {
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
}

impl DailySeries {
    pub fn new(dates: Vec<NaiveDate>, close: Vec<f64>, pe: Vec<Option<f64>>) -> Result<Self> {
        if dates.len() != close.len() {
            return Err(Error::LengthMismatch(dates.len(), close.len()));
        }
        if dates.len() != pe.len() {
            return Err(Error::LengthMismatch(dates.len(), pe.len()));
        }
        validate(&dates, &close, &pe, |i| i + 1)?;
        Ok(Self { dates, close, pe })
    }

    /// A close-only series, mostly useful for synthetic inputs.
    pub fn from_closes(dates: Vec<NaiveDate>, close: Vec<f64>) -> Result<Self> {
        let pe = vec![None; close.len()];
        Self::new(dates, close, pe)
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn close(&self) -> &[f64] {
        &self.close
    }

    pub fn pe(&self) -> &[Option<f64>] {
        &self.pe
    }

    /// Index of the first row carrying a P/E value.
    pub fn pe_start(&self) -> Option<usize> {
        self.pe.iter().position(Option::is_some)
    }

    /// The covered P/E suffix as plain values.
    pub fn pe_values(&self) -> Vec<f64> {
        self.pe.iter().flatten().copied().collect()
    }

    /// Rows with `from <= date <= to`.
    pub fn subset_by_date(&self, from: NaiveDate, to: NaiveDate) -> Result<Self> {
        if from > to {
            return Err(Error::InvalidRange { from, to });
        }
        let lo = self.dates.partition_point(|d| *d < from);
        let hi = self.dates.partition_point(|d| *d <= to);
        if lo >= hi {
            return Err(Error::EmptyResult { from, to });
        }
        Ok(Self {
            dates: self.dates[lo..hi].to_vec(),
            close: self.close[lo..hi].to_vec(),
            pe: self.pe[lo..hi].to_vec(),
        })
    }

    /// Writes the series in the same `date,close,pe` layout `ingest` reads.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(["date", "close", "pe"]).map_err(io)?;
        for i in 0..self.len() {
            let pe = self.pe[i].map(|v| v.to_string()).unwrap_or_default();
            out.write_record([
                self.dates[i].format("%Y-%m-%d").to_string(),
                self.close[i].to_string(),
                pe,
            ])
            .map_err(io)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn validate(
    dates: &[NaiveDate],
    close: &[f64],
    pe: &[Option<f64>],
    row_of: impl Fn(usize) -> usize,
) -> Result<()> {
    for i in 0..dates.len() {
        if i > 0 && dates[i] <= dates[i - 1] {
            return Err(Error::DuplicateDate { row: row_of(i), date: dates[i] });
        }
        if !(close[i] > 0.0) || !close[i].is_finite() {
            return Err(Error::NonPositiveValue {
                row: row_of(i),
                date: dates[i],
                field: "close",
                value: close[i],
            });
        }
        if let Some(v) = pe[i] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::NonPositiveValue {
                    row: row_of(i),
                    date: dates[i],
                    field: "pe",
                    value: v,
                });
            }
        }
        if i > 0 && pe[i].is_none() && pe[i - 1].is_some() {
            // Absent after present is only an error if P/E comes back later.
            if let Some(j) = (i + 1..dates.len()).find(|&j| pe[j].is_some()) {
                return Err(Error::NonContiguousPe { row: row_of(j), date: dates[j] });
            }
        }
    }
    Ok(())
}

/// Reads a `date,close[,pe]` CSV file.
pub fn ingest_csv(path: impl AsRef<Path>, config: IngestConfig) -> Result<DailySeries> {
    let file = std::fs::File::open(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    ingest_reader(file, config)
}

/// Same as [`ingest_csv`] for any reader.
pub fn ingest_reader<R: Read>(reader: R, config: IngestConfig) -> Result<DailySeries> {
    if let (Some(from), Some(to)) = (config.from, config.to) {
        if from > to {
            return Err(Error::InvalidRange { from, to });
        }
    }
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::MalformedRow { row: 0, message: e.to_string() })?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let date_col = column("date")
        .ok_or_else(|| Error::MalformedRow { row: 0, message: "missing `date` column".into() })?;
    let close_col = column("close")
        .ok_or_else(|| Error::MalformedRow { row: 0, message: "missing `close` column".into() })?;
    let pe_col = column("pe");

    // (original row number, date, close, pe)
    let mut rows: Vec<(usize, NaiveDate, f64, Option<f64>)> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record =
            record.map_err(|e| Error::MalformedRow { row, message: e.to_string() })?;
        let field = |col: usize| record.get(col).unwrap_or("");
        let date = NaiveDate::parse_from_str(field(date_col), "%Y-%m-%d").map_err(|e| {
            Error::MalformedRow { row, message: format!("date {:?}: {e}", field(date_col)) }
        })?;
        if config.from.is_some_and(|f| date < f) || config.to.is_some_and(|t| date > t) {
            continue;
        }
        let close = parse_number(field(close_col), row, "close")?;
        let pe = match pe_col.map(field) {
            None | Some("") => None,
            Some(s) => Some(parse_number(s, row, "pe")?),
        };
        rows.push((row, date, close, pe));
    }
    rows.sort_by_key(|r| r.1);
    if rows.is_empty() && (config.from.is_some() || config.to.is_some()) {
        return Err(Error::EmptyResult {
            from: config.from.unwrap_or(NaiveDate::MIN),
            to: config.to.unwrap_or(NaiveDate::MAX),
        });
    }

    let dates: Vec<_> = rows.iter().map(|r| r.1).collect();
    let close: Vec<_> = rows.iter().map(|r| r.2).collect();
    let pe: Vec<_> = rows.iter().map(|r| r.3).collect();
    validate(&dates, &close, &pe, |i| rows[i].0)?;
    Ok(DailySeries { dates, close, pe })
}

fn parse_number(s: &str, row: usize, field: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::MalformedRow { row, message: format!("{field} {s:?} is not a number") })?;
    if !v.is_finite() {
        return Err(Error::MalformedRow { row, message: format!("{field} {s:?} is not finite") });
    }
    Ok(v)
}

/// Implied earnings per share over the P/E-covered suffix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsSeries {
    pub dates: Vec<NaiveDate>,
    pub eps: Vec<f64>,
    /// Percent change against the value one trading year earlier.
    pub trailing_growth: Vec<Option<f64>>,
}

/// `eps = close / pe` on every covered date, plus trailing one-year growth.
pub fn eps_proxy(series: &DailySeries) -> Result<EpsSeries> {
    let start = series.pe_start().ok_or(Error::NoPeCoverage)?;
    let dates = series.dates[start..].to_vec();
    let eps: Vec<f64> = series.close[start..]
        .iter()
        .zip(&series.pe[start..])
        .map(|(c, pe)| c / pe.expect("coverage is a contiguous suffix"))
        .collect();
    let trailing_growth = (0..eps.len())
        .map(|t| {
            (t >= TRADING_YEAR).then(|| {
                let base = eps[t - TRADING_YEAR];
                (eps[t] - base) / base * 100.0
            })
        })
        .collect();
    Ok(EpsSeries { dates, eps, trailing_growth })
}
