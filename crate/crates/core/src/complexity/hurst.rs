//! Generalized Hurst exponents from q-th order structure functions.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// `H(q)` with the goodness of each log-log fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HurstCurve {
    pub qs: Vec<f64>,
    pub h: Vec<f64>,
    pub fit_r2: Vec<f64>,
    pub taus: Vec<usize>,
}

impl HurstCurve {
    /// `H(q)` for an order that was estimated.
    pub fn at(&self, q: f64) -> Option<f64> {
        self.qs.iter().position(|v| *v == q).map(|i| self.h[i])
    }
}

/// Default lag range `1..=19`.
pub fn default_taus() -> Vec<usize> {
    (1..=19).collect()
}

/// Least-squares slope and R² of `y` on `x`.
pub(crate) fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    (slope, r2)
}

/// For each `q`, regresses `ln K_q(τ)` on `ln τ` with
/// `K_q(τ) = mean_t |x(t+τ) - x(t)|^q`, and reports `H(q) = slope / q`.
pub fn generalized_hurst(x: &[f64], qs: &[f64], taus: &[usize]) -> Result<HurstCurve> {
    if qs.is_empty() || qs.iter().any(|q| !(*q > 0.0) || !q.is_finite()) {
        return Err(Error::InvalidParameter("moment orders must be positive".into()));
    }
    let mut taus = taus.to_vec();
    taus.sort_unstable();
    taus.dedup();
    if taus.len() < 2 || taus[0] == 0 {
        return Err(Error::InvalidParameter("need at least two positive lags".into()));
    }
    let max_tau = *taus.last().unwrap();
    if x.len() < 4 * max_tau {
        return Err(Error::SeriesTooShort { len: x.len(), needed: 4 * max_tau });
    }
    if x.iter().all(|v| *v == x[0]) {
        return Err(Error::DegenerateSeries);
    }
    let increments: Vec<Vec<f64>> = taus
        .iter()
        .map(|&tau| x.iter().zip(&x[tau..]).map(|(a, b)| (b - a).abs()).collect())
        .collect();
    let log_tau: Vec<f64> = taus.iter().map(|&t| (t as f64).ln()).collect();

    let fits = qs
        .par_iter()
        .map(|&q| {
            let log_k = increments
                .iter()
                .map(|inc| {
                    let k = inc.iter().map(|d| d.powf(q)).sum::<f64>() / inc.len() as f64;
                    if k > 0.0 {
                        Ok(k.ln())
                    } else {
                        Err(Error::DegenerateSeries)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let (slope, r2) = linear_fit(&log_tau, &log_k);
            Ok((slope / q, r2))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HurstCurve {
        qs: qs.to_vec(),
        h: fits.iter().map(|f| f.0).collect(),
        fit_r2: fits.iter().map(|f| f.1).collect(),
        taus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_trend_is_one() {
        let x: Vec<f64> = (0..200).map(f64::from).collect();
        let c = generalized_hurst(&x, &[1.0, 2.0, 3.0, 4.0, 5.0], &default_taus()).unwrap();
        for (h, r2) in c.h.iter().zip(&c.fit_r2) {
            assert!((h - 1.0).abs() < 1e-12);
            assert!((r2 - 1.0).abs() < 1e-12);
        }
        assert_eq!(c.at(2.0), Some(c.h[1]));
    }

    #[test]
    fn constant_is_degenerate() {
        let x = vec![3.0; 200];
        assert_eq!(generalized_hurst(&x, &[2.0], &default_taus()), Err(Error::DegenerateSeries));
    }

    #[test]
    fn parameter_checks() {
        let x: Vec<f64> = (0..50).map(f64::from).collect();
        assert!(matches!(
            generalized_hurst(&x, &[2.0], &default_taus()),
            Err(Error::SeriesTooShort { .. })
        ));
        assert!(generalized_hurst(&x, &[0.0], &[1, 2]).is_err());
        assert!(generalized_hurst(&x, &[1.0], &[3]).is_err());
    }

    #[test]
    fn fit_slope() {
        let (s, r2) = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert_eq!((s, r2), (2.0, 1.0));
    }
}
