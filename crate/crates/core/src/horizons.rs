//! Forward returns over a ladder of holding periods.

use std::collections::HashSet;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::Serialize;

use crate::distribution::{build_pmf, Pmf};
use crate::error::{Error, Result};
use crate::market_data::{DailySeries, TRADING_YEAR};

/// Trading days per month and per week used by the ladder labels.
pub const TRADING_MONTH: usize = 21;
pub const TRADING_WEEK: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HorizonSpec {
    pub label: String,
    pub days: usize,
}

impl HorizonSpec {
    pub fn new(label: impl Into<String>, days: usize) -> Result<Self> {
        if days == 0 {
            return Err(Error::InvalidParameter("horizon must be at least one day".into()));
        }
        Ok(Self { label: label.into(), days })
    }

    /// `n` trading years, labelled `nY`.
    pub fn years(n: usize) -> Self {
        Self { label: format!("{n}Y"), days: n * TRADING_YEAR }
    }

    /// Whole number of trading years, if the horizon is one.
    pub fn whole_years(&self) -> Option<usize> {
        self.days.is_multiple_of(TRADING_YEAR).then_some(self.days / TRADING_YEAR)
    }
}

/// 1D, 1W, 2W, 1M, 3M, 6M, then 1Y through 12Y.
pub fn default_ladder() -> Vec<HorizonSpec> {
    let mut ladder: Vec<HorizonSpec> = [
        ("1D", 1),
        ("1W", TRADING_WEEK),
        ("2W", 2 * TRADING_WEEK),
        ("1M", TRADING_MONTH),
        ("3M", 3 * TRADING_MONTH),
        ("6M", 6 * TRADING_MONTH),
    ]
    .into_iter()
    .map(|(l, d)| HorizonSpec { label: l.into(), days: d })
    .collect();
    ladder.extend((1..=12).map(HorizonSpec::years));
    ladder
}

/// Parses a ladder such as `1d,1w,1m,1y,2y..12y`.
///
/// Units: `d` trading days, `w` weeks of 5, `m` months of 21, `y` years of
/// 252. A `lo..hi` range steps one unit at a time and both ends must share a
/// unit. The result is sorted by days.
pub fn parse_ladder(text: &str) -> Result<Vec<HorizonSpec>> {
    let mut out = Vec::new();
    for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((lo, hi)) = token.split_once("..") {
            let (a, unit_a) = parse_term(lo)?;
            let (b, unit_b) = parse_term(hi)?;
            if unit_a != unit_b || a > b {
                return Err(Error::InvalidParameter(format!("bad horizon range {token:?}")));
            }
            for k in a..=b {
                out.push(make_spec(k, unit_a)?);
            }
        } else {
            let (k, unit) = parse_term(token)?;
            out.push(make_spec(k, unit)?);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidParameter("empty horizon list".into()));
    }
    out.sort_by_key(|h| h.days);
    let mut seen = HashSet::new();
    for h in &out {
        if !seen.insert(h.label.clone()) {
            return Err(Error::InvalidParameter(format!("duplicate horizon {}", h.label)));
        }
    }
    Ok(out)
}

fn parse_term(term: &str) -> Result<(usize, char)> {
    let bad = || Error::InvalidParameter(format!("bad horizon {term:?}"));
    let unit = term.chars().last().ok_or_else(bad)?.to_ascii_uppercase();
    let count: usize = term[..term.len() - 1].parse().map_err(|_| bad())?;
    if !matches!(unit, 'D' | 'W' | 'M' | 'Y') {
        return Err(bad());
    }
    Ok((count, unit))
}

fn make_spec(count: usize, unit: char) -> Result<HorizonSpec> {
    let per = match unit {
        'D' => 1,
        'W' => TRADING_WEEK,
        'M' => TRADING_MONTH,
        _ => TRADING_YEAR,
    };
    HorizonSpec::new(format!("{count}{unit}"), count * per)
}

/// Percent returns for every start day that has a close `days` rows later.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HorizonReturnSet {
    pub spec: HorizonSpec,
    pub returns: Vec<f64>,
    pub start_dates: Vec<NaiveDate>,
}

/// Overlapping-window returns `(close[t+i] - close[t]) / close[t] * 100`.
pub fn forward_returns(series: &DailySeries, spec: &HorizonSpec) -> Result<HorizonReturnSet> {
    let returns = percent_changes(series.close(), spec.days)?;
    let start_dates = series.dates()[..returns.len()].to_vec();
    Ok(HorizonReturnSet { spec: spec.clone(), returns, start_dates })
}

pub(crate) fn percent_changes(close: &[f64], days: usize) -> Result<Vec<f64>> {
    if close.len() <= days {
        return Err(Error::SeriesTooShort { len: close.len(), needed: days + 1 });
    }
    Ok(close
        .iter()
        .zip(&close[days..])
        .map(|(p0, p1)| (p1 - p0) / p0 * 100.0)
        .collect())
}

/// Annualizes a total percent return over `years` years.
pub fn to_cagr(r_abs: f64, years: u32) -> Result<f64> {
    if !(r_abs > -100.0) {
        return Err(Error::TotalLoss(r_abs));
    }
    if years == 0 {
        return Err(Error::InvalidParameter("CAGR needs at least one year".into()));
    }
    if years == 1 {
        return Ok(r_abs);
    }
    Ok(((1.0 + r_abs / 100.0).powf(1.0 / f64::from(years)) - 1.0) * 100.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HorizonSummary {
    pub spec: HorizonSpec,
    pub min: f64,
    pub max: f64,
    pub mode: f64,
    pub mode_prob: f64,
}

/// Sample extrema plus the modal bin of `pmf`.
pub fn horizon_summary(set: &HorizonReturnSet, pmf: &Pmf) -> Result<HorizonSummary> {
    if set.returns.is_empty() {
        return Err(Error::EmptySet);
    }
    let (min, max) = extrema(&set.returns);
    let (mode, mode_prob) = pmf.mode();
    Ok(HorizonSummary { spec: set.spec.clone(), min, max, mode, mode_prob })
}

fn extrema(xs: &[f64]) -> (f64, f64) {
    xs.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Forward returns, their PMF and summary for every horizon of the ladder,
/// in ladder order.
pub fn ladder_summaries(
    series: &DailySeries,
    ladder: &[HorizonSpec],
) -> Vec<Result<(HorizonReturnSet, Pmf, HorizonSummary)>> {
    ladder
        .par_iter()
        .map(|spec| {
            let set = forward_returns(series, spec)?;
            let pmf = build_pmf(&set.returns)?;
            let summary = horizon_summary(&set, &pmf)?;
            Ok((set, pmf, summary))
        })
        .collect()
}

/// Shortest horizon from which every worst case in the ladder is nonnegative.
pub fn trapping_horizon(summaries: &[HorizonSummary]) -> Option<HorizonSpec> {
    let mut found = None;
    for s in summaries.iter().rev() {
        if s.min < 0.0 {
            break;
        }
        found = Some(s.spec.clone());
    }
    found
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CagrSummary {
    pub years: u32,
    pub min_cagr: f64,
    pub max_cagr: f64,
    pub mode_cagr: f64,
    pub mode_prob: f64,
}

/// Min/max/mode of the per-window CAGRs of a multi-year return set.
///
/// The mode comes from the PMF of the annualized values themselves.
pub fn cagr_summary(set: &HorizonReturnSet, years: u32) -> Result<CagrSummary> {
    if set.returns.is_empty() {
        return Err(Error::EmptySet);
    }
    let cagrs = set
        .returns
        .iter()
        .map(|&r| to_cagr(r, years))
        .collect::<Result<Vec<_>>>()?;
    let pmf = build_pmf(&cagrs)?;
    let (min_cagr, max_cagr) = extrema(&cagrs);
    let (mode_cagr, mode_prob) = pmf.mode();
    Ok(CagrSummary { years, min_cagr, max_cagr, mode_cagr, mode_prob })
}

/// CAGR table rows for 1..=`max_years`; horizons the series cannot cover are
/// skipped.
pub fn cagr_table(series: &DailySeries, max_years: u32) -> Vec<Result<CagrSummary>> {
    (1..=max_years)
        .into_par_iter()
        .map(|y| {
            let set = forward_returns(series, &HorizonSpec::years(y as usize))?;
            cagr_summary(&set, y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(close: &[f64]) -> DailySeries {
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let dates = (0..close.len()).map(|i| start + chrono::Days::new(i as u64)).collect();
        DailySeries::from_closes(dates, close.to_vec()).unwrap()
    }

    fn days(n: usize) -> HorizonSpec {
        HorizonSpec::new(format!("{n}D"), n).unwrap()
    }

    #[test]
    fn forward_return_examples() {
        let r = forward_returns(&series(&[100.0, 101.0]), &days(1)).unwrap();
        assert_eq!(r.returns, vec![1.0]);
        let r = forward_returns(&series(&[100.0, 110.0, 121.0]), &days(2)).unwrap();
        assert!((r.returns[0] - 21.0).abs() < 1e-12);
        let r = forward_returns(&series(&[7.0; 10]), &days(3)).unwrap();
        assert_eq!(r.returns, vec![0.0; 7]);
        assert_eq!(r.start_dates.len(), 7);
        assert!(matches!(
            forward_returns(&series(&[1.0, 2.0]), &days(2)),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn cagr_examples() {
        assert!((to_cagr(100.0, 2).unwrap() - 41.421356237).abs() < 1e-6);
        assert_eq!(to_cagr(0.0, 7).unwrap(), 0.0);
        assert_eq!(to_cagr(12.5, 1).unwrap(), 12.5);
        assert_eq!(to_cagr(-100.0, 3), Err(Error::TotalLoss(-100.0)));
        // compounding the result back must recover the 3.5937 growth factor
        let c = to_cagr(259.37, 10).unwrap();
        assert!(((1.0 + c / 100.0).powi(10) - 3.5937).abs() < 1e-9);
        assert!((c - 13.65).abs() < 0.01);
    }

    #[test]
    fn summary_examples() {
        let set = HorizonReturnSet {
            spec: days(1),
            returns: vec![-1.0, 0.0, 1.0, 1.0, 1.0],
            start_dates: vec![],
        };
        // unit-width bins covering -1.5..1.5
        let pmf = Pmf::from_parts(vec![-1.5, -0.5, 0.5, 1.5], vec![0.2, 0.2, 0.6], 5).unwrap();
        let s = horizon_summary(&set, &pmf).unwrap();
        assert_eq!((s.min, s.max, s.mode, s.mode_prob), (-1.0, 1.0, 1.0, 0.6));

        let set = HorizonReturnSet { spec: days(1), returns: vec![5.0], start_dates: vec![] };
        let s = horizon_summary(&set, &build_pmf(&set.returns).unwrap()).unwrap();
        assert_eq!((s.min, s.max, s.mode), (5.0, 5.0, 5.0));

        let set = HorizonReturnSet {
            spec: days(1),
            returns: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            start_dates: vec![],
        };
        let s = horizon_summary(&set, &build_pmf(&set.returns).unwrap()).unwrap();
        assert_eq!(s.min, -s.max);

        let empty = HorizonReturnSet { spec: days(1), returns: vec![], start_dates: vec![] };
        assert_eq!(horizon_summary(&empty, &pmf), Err(Error::EmptySet));
    }

    fn with_mins(mins: &[f64]) -> Vec<HorizonSummary> {
        mins.iter()
            .enumerate()
            .map(|(i, &m)| HorizonSummary {
                spec: days(i + 1),
                min: m,
                max: m + 1.0,
                mode: m,
                mode_prob: 1.0,
            })
            .collect()
    }

    #[test]
    fn trapping_examples() {
        let t = trapping_horizon(&with_mins(&[-5.0, -2.0, 1.0, -1.0, 2.0, 3.0]));
        assert_eq!(t.unwrap().days, 5);
        assert_eq!(trapping_horizon(&with_mins(&[1.0, 2.0, 0.0])).unwrap().days, 1);
        assert_eq!(trapping_horizon(&with_mins(&[-1.0, -2.0])), None);
        assert_eq!(trapping_horizon(&[]), None);
    }

    #[test]
    fn ladders() {
        let l = default_ladder();
        assert_eq!(l.len(), 18);
        assert_eq!(l.iter().map(|h| h.days).collect::<Vec<_>>()[..7], [1, 5, 10, 21, 63, 126, 252]);
        assert_eq!(l.last().unwrap().days, 3024);

        let p = parse_ladder("1d,1w,1y,2y..12y").unwrap();
        assert_eq!(p.len(), 14);
        assert_eq!(p[1].label, "1W");
        assert_eq!(p[13].days, 12 * 252);
        assert_eq!(parse_ladder("3m,1d").unwrap()[1].days, 63);
        assert!(parse_ladder("1d,1d").is_err());
        assert!(parse_ladder("1x").is_err());
        assert!(parse_ladder("0d").is_err());
        assert!(parse_ladder("2y..1y").is_err());
    }

    #[test]
    fn cagr_summary_of_steady_growth() {
        // 10% per 252 rows, compounded daily
        let daily = 1.1f64.powf(1.0 / 252.0);
        let close: Vec<f64> = (0..800).map(|i| 100.0 * daily.powi(i)).collect();
        let s = series(&close);
        let rows = cagr_table(&s, 4);
        let c2 = rows[1].as_ref().unwrap();
        assert!((c2.min_cagr - 10.0).abs() < 1e-6 && (c2.max_cagr - 10.0).abs() < 1e-6);
        assert!(rows[3].is_err());
    }
}
