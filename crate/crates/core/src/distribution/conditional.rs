use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::pmf::build_pmf;
use super::stats::{asymmetry, AsymmetryStats};
use crate::error::{Error, Result};
use crate::market_data::{DailySeries, TRADING_YEAR};

/// Lowest band start. Bands are `[lo, lo + 1)` for `lo` in `10..=30`.
pub const PE_BAND_MIN: u32 = 10;
/// Highest band start.
pub const PE_BAND_MAX: u32 = 30;

/// Forward-return asymmetry for entries made inside one P/E band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalCell {
    /// Band is `[band_lo, band_lo + 1)`.
    pub band_lo: u32,
    pub years: u32,
    pub stats: AsymmetryStats,
    pub n: usize,
}

impl ConditionalCell {
    /// `"13-14"` style label.
    pub fn band_label(&self) -> String {
        format!("{}-{}", self.band_lo, self.band_lo + 1)
    }
}

fn band_of(pe: f64) -> Option<u32> {
    (pe >= f64::from(PE_BAND_MIN) && pe < f64::from(PE_BAND_MAX + 1)).then(|| pe.floor() as u32)
}

/// The band × holding-period grid for holding periods `1..=max_years`.
///
/// Each start day with a P/E inside a band contributes its forward return
/// over `252 * years` rows to that band's cell. Empty cells are left out;
/// the rest are ordered by band, then holding period.
pub fn conditional_cells(series: &DailySeries, max_years: u32) -> Result<Vec<ConditionalCell>> {
    let start = series.pe_start().ok_or(Error::NoPeCoverage)?;
    let close = series.close();
    let pe = series.pe();
    let mut cells: Vec<ConditionalCell> = (1..=max_years)
        .into_par_iter()
        .map(|years| {
            let h = years as usize * TRADING_YEAR;
            let mut groups: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
            for t in start..close.len().saturating_sub(h) {
                if let Some(lo) = pe[t].and_then(band_of) {
                    groups.entry(lo).or_default().push((close[t + h] - close[t]) / close[t] * 100.0);
                }
            }
            groups
                .into_iter()
                .map(|(band_lo, returns)| {
                    let pmf = build_pmf(&returns)?;
                    Ok(ConditionalCell { band_lo, years, stats: asymmetry(&pmf), n: returns.len() })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    cells.sort_by_key(|c| (c.band_lo, c.years));
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn build(close: Vec<f64>, pe: Vec<Option<f64>>) -> DailySeries {
        let start = NaiveDate::from_ymd_opt(2000, 1, 1).unwrap();
        let dates = (0..close.len()).map(|i| start + chrono::Days::new(i as u64)).collect();
        DailySeries::new(dates, close, pe).unwrap()
    }

    #[test]
    fn bands() {
        assert_eq!(band_of(9.99), None);
        assert_eq!(band_of(10.0), Some(10));
        assert_eq!(band_of(30.999), Some(30));
        assert_eq!(band_of(31.0), None);
    }

    #[test]
    fn always_gaining_band_has_no_losses() {
        let n = 3 * TRADING_YEAR;
        let close: Vec<f64> = (0..n).map(|i| 100.0 + i as f64).collect();
        let pe = (0..n).map(|i| Some(12.0 + (i % 7) as f64 * 0.1)).collect();
        let cells = conditional_cells(&build(close, pe), 2).unwrap();
        assert_eq!(cells.len(), 2);
        for c in &cells {
            assert_eq!(c.band_lo, 12);
            assert_eq!(c.stats.nrp, 0.0);
            assert_eq!(c.stats.rrr_probability, Some(f64::INFINITY));
            assert_eq!(c.stats.rrr_magnitude, Some(f64::INFINITY));
        }
        assert_eq!(cells[0].n, n - TRADING_YEAR);
        assert_eq!(cells[0].band_label(), "12-13");
    }

    #[test]
    fn out_of_range_pe_gives_empty_grid() {
        let n = 2 * TRADING_YEAR;
        let close = vec![100.0; n];
        let pe = (0..n).map(|i| Some(if i % 2 == 0 { 5.0 } else { 40.0 })).collect();
        assert!(conditional_cells(&build(close, pe), 1).unwrap().is_empty());
    }

    #[test]
    fn needs_pe() {
        let s = build(vec![1.0; 300], vec![None; 300]);
        assert_eq!(conditional_cells(&s, 1), Err(Error::NoPeCoverage));
    }
}
