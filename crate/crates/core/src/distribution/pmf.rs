use serde::Serialize;

use crate::error::{Error, Result};

/// How the bins of a [`Pmf`] were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BinRule {
    FreedmanDiaconis,
    /// Fallback when the data has no spread (constant sample or zero IQR).
    SingleBin,
    /// Edges supplied by the caller.
    Explicit,
}

/// Upper bound on the number of bins a single histogram may allocate.
///
/// Heavy-tailed data with a tiny IQR can ask for millions of bins; past this
/// point the width is widened to fit.
pub const MAX_BINS: usize = 1_000_000;

/// Binned empirical probability mass function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pmf {
    edges: Vec<f64>,
    mids: Vec<f64>,
    probs: Vec<f64>,
    n: usize,
    rule: BinRule,
}

impl Pmf {
    /// Builds a PMF from explicit edges and probabilities.
    pub fn from_parts(edges: Vec<f64>, probs: Vec<f64>, n: usize) -> Result<Self> {
        if edges.len() != probs.len() + 1 || probs.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "{} edges cannot bound {} bins",
                edges.len(),
                probs.len()
            )));
        }
        if edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter("edges must be strictly increasing".into()));
        }
        if probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::InvalidParameter("probabilities must be non-negative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("probabilities sum to {total}")));
        }
        let mids = midpoints(&edges);
        Ok(Self { edges, mids, probs, n, rule: BinRule::Explicit })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn mids(&self) -> &[f64] {
        &self.mids
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of samples behind the PMF.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rule(&self) -> BinRule {
        self.rule
    }

    pub fn bins(&self) -> usize {
        self.probs.len()
    }

    /// Bin index of the highest probability; ties go to the lowest bin.
    pub fn mode_index(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.probs.iter().enumerate() {
            if *p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    /// `(midpoint, probability)` of the modal bin.
    pub fn mode(&self) -> (f64, f64) {
        let i = self.mode_index();
        (self.mids[i], self.probs[i])
    }

    /// Index of the bin holding `x`, if `x` lies within the edges.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        locate(&self.edges, x)
    }
}

fn midpoints(edges: &[f64]) -> Vec<f64> {
    edges.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect()
}

/// Linear-interpolation quantile on sorted data (Hyndman & Fan type 7).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn sorted_copy(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Freedman–Diaconis width `2 * IQR * n^(-1/3)`.
pub fn fd_bin_width(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::DegenerateSample);
    }
    fd_width_sorted(&sorted_copy(samples))
}

fn fd_width_sorted(sorted: &[f64]) -> Result<f64> {
    let iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    if !(iqr > 0.0) {
        return Err(Error::DegenerateSample);
    }
    Ok(2.0 * iqr * (sorted.len() as f64).powf(-1.0 / 3.0))
}

/// Edges of the Freedman–Diaconis histogram for `samples`.
///
/// The bin count is `ceil(range / width)` and the range is split into that
/// many equal bins, so the outer edges are exactly the sample extrema.
pub fn fd_edges(samples: &[f64]) -> Result<(Vec<f64>, BinRule)> {
    if samples.is_empty() {
        return Err(Error::EmptySet);
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("samples must be finite".into()));
    }
    let sorted = sorted_copy(samples);
    let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
    if min == max {
        // A lone value gets a unit-wide bin centred on it.
        return Ok((vec![min - 0.5, min + 0.5], BinRule::SingleBin));
    }
    let width = match fd_width_sorted(&sorted) {
        Ok(w) => w,
        Err(_) => return Ok((vec![min, max], BinRule::SingleBin)),
    };
    let bins = (((max - min) / width).ceil() as usize).clamp(1, MAX_BINS);
    let mut edges: Vec<f64> =
        (0..=bins).map(|i| min + (max - min) * i as f64 / bins as f64).collect();
    edges[bins] = max;
    Ok((edges, BinRule::FreedmanDiaconis))
}

/// Left-closed bins, the last one closed on both sides.
pub(crate) fn locate(edges: &[f64], x: f64) -> Option<usize> {
    let bins = edges.len() - 1;
    let (lo, hi) = (edges[0], edges[bins]);
    if !(x >= lo && x <= hi) {
        return None;
    }
    let mut i = (((x - lo) / (hi - lo)) * bins as f64).floor() as usize;
    i = i.min(bins - 1);
    while i > 0 && x < edges[i] {
        i -= 1;
    }
    while i + 1 < bins && x >= edges[i + 1] {
        i += 1;
    }
    Some(i)
}

/// Counts per bin; samples outside the edges are clamped to the end bins.
pub(crate) fn bin_indices(edges: &[f64], samples: &[f64]) -> Vec<usize> {
    let last = edges.len() - 2;
    samples
        .iter()
        .map(|&x| match locate(edges, x) {
            Some(i) => i,
            None if x < edges[0] => 0,
            None => last,
        })
        .collect()
}

/// Freedman–Diaconis PMF of `samples`.
pub fn build_pmf(samples: &[f64]) -> Result<Pmf> {
    let (edges, rule) = fd_edges(samples)?;
    Ok(pmf_on_edges(edges, rule, samples))
}

fn pmf_on_edges(edges: Vec<f64>, rule: BinRule, samples: &[f64]) -> Pmf {
    let mut counts = vec![0usize; edges.len() - 1];
    for i in bin_indices(&edges, samples) {
        counts[i] += 1;
    }
    let n = samples.len();
    let probs = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let mids = midpoints(&edges);
    Pmf { edges, mids, probs, n, rule }
}
