use chrono::{Datelike, NaiveDate};
use rayon::prelude::*;

use super::pmf::{build_pmf, Pmf};
use crate::error::{Error, Result};

/// PMF of the observations falling in one calendar month.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlyPmf {
    /// 1 = January.
    pub month: u32,
    pub pmf: Result<Pmf>,
    pub samples: Vec<f64>,
}

/// One independent PMF per calendar month, January first.
///
/// Months without data carry `Err(EmptyMonth)`; the others are still built.
pub fn monthly_pmfs(dates: &[NaiveDate], values: &[f64]) -> Result<Vec<MonthlyPmf>> {
    if dates.len() != values.len() {
        return Err(Error::LengthMismatch(dates.len(), values.len()));
    }
    let mut groups: Vec<Vec<f64>> = vec![Vec::new(); 12];
    for (d, v) in dates.iter().zip(values) {
        groups[d.month0() as usize].push(*v);
    }
    Ok(groups
        .into_par_iter()
        .enumerate()
        .map(|(i, samples)| {
            let month = i as u32 + 1;
            let pmf = if samples.is_empty() { Err(Error::EmptyMonth(month)) } else { build_pmf(&samples) };
            MonthlyPmf { month, pmf, samples }
        })
        .collect())
}
