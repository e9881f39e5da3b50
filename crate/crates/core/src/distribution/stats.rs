use serde::Serialize;

use super::pmf::Pmf;
use crate::serde_util;

/// A `mean ± k·σ` interval with the share of raw samples inside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    pub coverage: f64,
}

/// Mode, moments, σ-bands and empirical CDF points of a sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PmfStats {
    pub mode: f64,
    pub mode_prob: f64,
    pub mean: f64,
    pub std: f64,
    pub band1: Band,
    pub band2: Band,
    /// `(threshold, P(X <= threshold))` pairs.
    pub cdf_at: Vec<(f64, f64)>,
}

/// Mode from the PMF, everything else from the raw samples.
///
/// `std` is the population standard deviation; bands are closed intervals
/// centred on the mean.
pub fn pmf_stats(pmf: &Pmf, samples: &[f64], thresholds: &[f64]) -> PmfStats {
    let (mode, mode_prob) = pmf.mode();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let std = (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
    let band = |k: f64| {
        let (lo, hi) = (mean - k * std, mean + k * std);
        let inside = samples.iter().filter(|x| **x >= lo && **x <= hi).count();
        Band { lo, hi, coverage: inside as f64 / n }
    };
    let cdf_at = thresholds
        .iter()
        .map(|&t| (t, samples.iter().filter(|x| **x <= t).count() as f64 / n))
        .collect();
    PmfStats { mode, mode_prob, mean, std, band1: band(1.0), band2: band(2.0), cdf_at }
}

/// Upside/downside asymmetry of a PMF, classified by bin-midpoint sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymmetryStats {
    /// Σ mid·p over bins with a positive midpoint.
    pub exp_pos: f64,
    /// Σ |mid|·p over bins with a negative midpoint.
    pub exp_neg: f64,
    /// `exp_pos / exp_neg`.
    #[serde(serialize_with = "serde_util::ratio")]
    pub rrr_magnitude: Option<f64>,
    pub prp: f64,
    pub nrp: f64,
    /// Mass of bins whose midpoint is exactly zero.
    pub zero_prob: f64,
    /// `prp / nrp`.
    #[serde(serialize_with = "serde_util::ratio")]
    pub rrr_probability: Option<f64>,
}

/// `num / den` with `inf` for a positive numerator over zero and `None`
/// when both vanish.
pub fn ratio(num: f64, den: f64) -> Option<f64> {
    if den > 0.0 {
        Some(num / den)
    } else if num > 0.0 {
        Some(f64::INFINITY)
    } else {
        None
    }
}

pub fn asymmetry(pmf: &Pmf) -> AsymmetryStats {
    let (mut exp_pos, mut exp_neg, mut prp, mut nrp, mut zero_prob) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&mid, &p) in pmf.mids().iter().zip(pmf.probs()) {
        if mid > 0.0 {
            exp_pos += mid * p;
            prp += p;
        } else if mid < 0.0 {
            exp_neg += -mid * p;
            nrp += p;
        } else {
            zero_prob += p;
        }
    }
    AsymmetryStats {
        exp_pos,
        exp_neg,
        rrr_magnitude: ratio(exp_pos, exp_neg),
        prp,
        nrp,
        zero_prob,
        rrr_probability: ratio(prp, nrp),
    }
}
