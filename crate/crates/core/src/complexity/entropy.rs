//! Distributional (Shannon, Tsallis) and temporal (sample, permutation)
//! entropies. All logarithms are natural.

use serde::Serialize;

use crate::distribution::{build_pmf, Pmf};
use crate::error::{Error, Result};

fn nonzero(pmf: &Pmf) -> impl Iterator<Item = f64> + '_ {
    pmf.probs().iter().copied().filter(|p| *p > 0.0)
}

/// Shannon entropy over the occupied bins divided by `ln k`, `k` being the
/// number of occupied bins. A point mass scores 0.
pub fn shannon_entropy_norm(pmf: &Pmf) -> f64 {
    let k = nonzero(pmf).count();
    if k <= 1 {
        return 0.0;
    }
    let h: f64 = nonzero(pmf).map(|p| -p * p.ln()).sum();
    (h / (k as f64).ln()).clamp(0.0, 1.0)
}

/// Tsallis entropy `(1 - Σ p^q) / (q - 1)` scaled by its maximum over `k`
/// occupied bins, `(1 - k^(1-q)) / (q - 1)`.
pub fn tsallis_entropy_norm(pmf: &Pmf, q: f64) -> Result<f64> {
    if !(q > 0.0) || q == 1.0 || !q.is_finite() {
        return Err(Error::InvalidQ(q));
    }
    let k = nonzero(pmf).count();
    if k <= 1 {
        return Ok(0.0);
    }
    let s = (1.0 - nonzero(pmf).map(|p| p.powf(q)).sum::<f64>()) / (q - 1.0);
    let max = (1.0 - (k as f64).powf(1.0 - q)) / (q - 1.0);
    Ok((s / max).clamp(0.0, 1.0))
}

/// Sample entropy `-ln(A / B)`.
///
/// `B` counts pairs of length-`m` templates within Chebyshev distance `r`
/// (inclusive) and `A` the pairs that still match when extended to `m + 1`.
/// Both use the same `n - m` template starts; self-matches are excluded.
pub fn sample_entropy(x: &[f64], m: usize, r: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParameter("template length must be positive".into()));
    }
    if x.len() < m + 2 {
        return Err(Error::SeriesTooShort { len: x.len(), needed: m + 2 });
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {r}")));
    }
    let starts = x.len() - m;
    let (mut a, mut b) = (0u64, 0u64);
    for i in 0..starts {
        for j in i + 1..starts {
            if (0..m).all(|k| (x[i + k] - x[j + k]).abs() <= r) {
                b += 1;
                if (x[i + m] - x[j + m]).abs() <= r {
                    a += 1;
                }
            }
        }
    }
    if a == 0 || b == 0 {
        return Err(Error::NoMatches { m, r });
    }
    Ok(-(a as f64 / b as f64).ln())
}

/// Lehmer rank of the ordinal pattern of `window`; equal values keep their
/// original order.
fn pattern_rank(window: &[f64], scratch: &mut Vec<usize>) -> usize {
    scratch.clear();
    scratch.extend(0..window.len());
    scratch.sort_by(|&a, &b| window[a].total_cmp(&window[b]).then(a.cmp(&b)));
    let mut rank = 0;
    for i in 0..scratch.len() {
        let smaller = scratch[i + 1..].iter().filter(|&&v| v < scratch[i]).count();
        rank = rank * (scratch.len() - i) + smaller;
    }
    rank
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Shannon entropy of order-`d` ordinal patterns at delay `tau`, divided by
/// `ln d!`.
pub fn permutation_entropy_norm(x: &[f64], d: usize, tau: usize) -> Result<f64> {
    if !(2..=10).contains(&d) {
        return Err(Error::InvalidParameter(format!("order must be in 2..=10, got {d}")));
    }
    if tau == 0 {
        return Err(Error::InvalidParameter("delay must be positive".into()));
    }
    let span = (d - 1) * tau + 1;
    if x.len() < span {
        return Err(Error::SeriesTooShort { len: x.len(), needed: span });
    }
    let mut counts = vec![0usize; factorial(d)];
    let mut window = vec![0.0; d];
    let mut scratch = Vec::with_capacity(d);
    let total = x.len() - span + 1;
    for t in 0..total {
        for (k, w) in window.iter_mut().enumerate() {
            *w = x[t + k * tau];
        }
        counts[pattern_rank(&window, &mut scratch)] += 1;
    }
    let h: f64 = counts
        .iter()
        .filter(|c| **c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.ln()
        })
        .sum();
    Ok((h / (factorial(d) as f64).ln()).clamp(0.0, 1.0))
}

/// Parameters of [`entropy_report`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyParams {
    pub tsallis_qs: Vec<f64>,
    pub sample_m: usize,
    /// Tolerance as a multiple of the sample standard deviation.
    pub sample_r_factor: f64,
    pub perm_order: usize,
    pub perm_delay: usize,
}

impl Default for EntropyParams {
    fn default() -> Self {
        Self { tsallis_qs: vec![0.1, 2.0], sample_m: 2, sample_r_factor: 0.2, perm_order: 5, perm_delay: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub shannon_norm: f64,
    /// `(q, normalized S_q)` pairs.
    pub tsallis_norm: Vec<(f64, f64)>,
    /// `None` when no template pairs matched.
    pub sample_entropy: Option<f64>,
    pub sample_m: usize,
    /// Absolute tolerance used.
    pub sample_r: f64,
    pub permutation_norm: f64,
    pub perm_order: usize,
    pub perm_delay: usize,
}

/// Shannon and Tsallis on the FD PMF of `x`; sample and permutation entropy
/// on the raw series.
pub fn entropy_report(x: &[f64], params: &EntropyParams) -> Result<EntropyReport> {
    let pmf = build_pmf(x)?;
    let tsallis_norm = params
        .tsallis_qs
        .iter()
        .map(|&q| Ok((q, tsallis_entropy_norm(&pmf, q)?)))
        .collect::<Result<_>>()?;
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0).max(1.0)).sqrt();
    let sample_r = params.sample_r_factor * sd;
    let sample_entropy = match sample_entropy(x, params.sample_m, sample_r) {
        Ok(v) => Some(v),
        Err(Error::NoMatches { .. }) => None,
        // Constant input has zero spread; every template matches.
        Err(Error::InvalidParameter(_)) if sd == 0.0 => Some(0.0),
        Err(e) => return Err(e),
    };
    Ok(EntropyReport {
        shannon_norm: shannon_entropy_norm(&pmf),
        tsallis_norm,
        sample_entropy,
        sample_m: params.sample_m,
        sample_r,
        permutation_norm: permutation_entropy_norm(x, params.perm_order, params.perm_delay)?,
        perm_order: params.perm_order,
        perm_delay: params.perm_delay,
    })
}
