//! Histogram (plugin) mutual information, lagged NMI and transfer entropy.
//!
//! Every variable is discretized once with its own Freedman–Diaconis bins;
//! all lags and both transfer directions reuse those symbols.

use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

use crate::distribution::{bin_indices, fd_edges};
use crate::error::{Error, Result};
use crate::market_data::DailySeries;

/// A series mapped onto its Freedman–Diaconis bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discretized {
    pub edges: Vec<f64>,
    #[serde(skip)]
    pub symbols: Vec<usize>,
}

impl Discretized {
    pub fn new(x: &[f64]) -> Result<Self> {
        let (edges, _) = fd_edges(x)?;
        let symbols = bin_indices(&edges, x);
        Ok(Self { edges, symbols })
    }

    pub fn bins(&self) -> usize {
        self.edges.len() - 1
    }

    fn occupied(&self) -> usize {
        let mut seen = vec![false; self.bins()];
        self.symbols.iter().for_each(|&s| seen[s] = true);
        seen.iter().filter(|b| **b).count()
    }
}

/// Joint distribution of two discretized series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointHistogram {
    pub x_edges: Vec<f64>,
    pub y_edges: Vec<f64>,
    /// Row-major `x_bins × y_bins` probabilities.
    pub joint: Vec<Vec<f64>>,
    pub n: usize,
}

impl JointHistogram {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        check_lengths(x, y, 2)?;
        let (dx, dy) = (Discretized::new(x)?, Discretized::new(y)?);
        Ok(Self::from_symbols(&dx, &dy, &dx.symbols, &dy.symbols))
    }

    /// Joint histogram on caller-supplied edges; values outside the edges
    /// fall into the end bins.
    pub fn with_edges(x: &[f64], y: &[f64], x_edges: Vec<f64>, y_edges: Vec<f64>) -> Result<Self> {
        check_lengths(x, y, 1)?;
        for e in [&x_edges, &y_edges] {
            if e.len() < 2 || e.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidParameter("edges must be strictly increasing".into()));
            }
        }
        let dx = Discretized { symbols: bin_indices(&x_edges, x), edges: x_edges };
        let dy = Discretized { symbols: bin_indices(&y_edges, y), edges: y_edges };
        Ok(Self::from_symbols(&dx, &dy, &dx.symbols, &dy.symbols))
    }

    fn from_symbols(dx: &Discretized, dy: &Discretized, xs: &[usize], ys: &[usize]) -> Self {
        let mut joint = vec![vec![0.0; dy.bins()]; dx.bins()];
        for (&a, &b) in xs.iter().zip(ys) {
            joint[a][b] += 1.0;
        }
        let n = xs.len();
        for row in &mut joint {
            row.iter_mut().for_each(|c| *c /= n as f64);
        }
        Self { x_edges: dx.edges.clone(), y_edges: dy.edges.clone(), joint, n }
    }

    pub fn x_marginal(&self) -> Vec<f64> {
        self.joint.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn y_marginal(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.y_edges.len() - 1];
        for row in &self.joint {
            for (acc, p) in m.iter_mut().zip(row) {
                *acc += p;
            }
        }
        m
    }

    /// Plugin mutual information in nats.
    pub fn mutual_information(&self) -> f64 {
        let (px, py) = (self.x_marginal(), self.y_marginal());
        let mut terms = Vec::new();
        for (i, row) in self.joint.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if p > 0.0 {
                    terms.push(p * (p / (px[i] * py[j])).ln());
                }
            }
        }
        stable_sum(terms).max(0.0)
    }
}

/// Sums in a fixed value order so transposed inputs give identical results.
fn stable_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

fn entropy(probs: &[f64]) -> f64 {
    stable_sum(probs.iter().filter(|p| **p > 0.0).map(|p| -p * p.ln()).collect())
}

fn check_lengths(x: &[f64], y: &[f64], min: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < min {
        return Err(Error::SeriesTooShort { len: x.len(), needed: min });
    }
    Ok(())
}

/// Plugin MI of `x` and `y` in nats.
///
/// Fails with `DegenerateMarginal` when either variable occupies a single
/// bin, in which case the MI is 0.
pub fn mutual_information(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y, 2)?;
    let (dx, dy) = (Discretized::new(x)?, Discretized::new(y)?);
    if dx.occupied() < 2 || dy.occupied() < 2 {
        return Err(Error::DegenerateMarginal);
    }
    Ok(JointHistogram::from_symbols(&dx, &dy, &dx.symbols, &dy.symbols).mutual_information())
}

/// MI scaled by `sqrt(H(x) H(y))`, in `[0, 1]`.
pub fn normalized_mutual_information(x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(nmi_of(&JointHistogram::new(x, y)?))
}

fn nmi_of(h: &JointHistogram) -> f64 {
    let hx = entropy(&h.x_marginal());
    let hy = entropy(&h.y_marginal());
    if hx <= 0.0 || hy <= 0.0 {
        return 0.0;
    }
    (h.mutual_information() / (hx * hy).sqrt()).clamp(0.0, 1.0)
}

/// NMI of `driver[t]` against `target[t + lag]` for `lag = 1..=max_lag`,
/// normalized by the geometric mean of the two marginal entropies.
pub fn lagged_nmi(driver: &[f64], target: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    check_lengths(driver, target, 2)?;
    if max_lag == 0 {
        return Ok(Vec::new());
    }
    if driver.len() <= max_lag + 1 {
        return Err(Error::SeriesTooShort { len: driver.len(), needed: max_lag + 2 });
    }
    let (dx, dy) = (Discretized::new(driver)?, Discretized::new(target)?);
    Ok(nmi_curve(&dx, &dy, max_lag))
}

fn nmi_curve(dx: &Discretized, dy: &Discretized, max_lag: usize) -> Vec<f64> {
    let n = dx.symbols.len();
    (1..=max_lag)
        .map(|lag| {
            let h = JointHistogram::from_symbols(dx, dy, &dx.symbols[..n - lag], &dy.symbols[lag..]);
            nmi_of(&h)
        })
        .collect()
}

/// A transfer-entropy estimate; `clipped` marks a negative plugin value
/// reported as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferEntropy {
    pub value: f64,
    pub clipped: bool,
}

/// Plugin transfer entropy `driver → target` in nats with history length `k`.
pub fn transfer_entropy(driver: &[f64], target: &[f64], k: usize) -> Result<TransferEntropy> {
    check_lengths(driver, target, 2)?;
    if k == 0 {
        return Err(Error::InvalidParameter("history length must be positive".into()));
    }
    if driver.len() <= k + 1 {
        return Err(Error::SeriesTooShort { len: driver.len(), needed: k + 2 });
    }
    let (dx, dy) = (Discretized::new(driver)?, Discretized::new(target)?);
    te_symbols(&dx, &dy, k)
}

fn te_symbols(dx: &Discretized, dy: &Discretized, k: usize) -> Result<TransferEntropy> {
    if dx.occupied() < 2 || dy.occupied() < 2 {
        return Err(Error::DegenerateMarginal);
    }
    let (x, y) = (&dx.symbols, &dy.symbols);
    let n = y.len();
    let mut full: HashMap<(usize, &[usize], &[usize]), usize> = HashMap::new();
    let mut hist_both: HashMap<(&[usize], &[usize]), usize> = HashMap::new();
    let mut next_hist: HashMap<(usize, &[usize]), usize> = HashMap::new();
    let mut hist: HashMap<&[usize], usize> = HashMap::new();
    for t in k - 1..n - 1 {
        let yh = &y[t + 1 - k..=t];
        let xh = &x[t + 1 - k..=t];
        let next = y[t + 1];
        bump(&mut full, (next, yh, xh));
        bump(&mut hist_both, (yh, xh));
        bump(&mut next_hist, (next, yh));
        bump(&mut hist, yh);
    }
    let total = (n - k) as f64;
    let terms = full
        .iter()
        .map(|(&(next, yh, xh), &c)| {
            let p = c as f64 / total;
            // p(y+|yh,xh) / p(y+|yh)
            let num = c as f64 * hist[yh] as f64;
            let den = hist_both[&(yh, xh)] as f64 * next_hist[&(next, yh)] as f64;
            p * (num / den).ln()
        })
        .collect();
    let raw = stable_sum(terms);
    Ok(TransferEntropy { value: raw.max(0.0), clipped: raw < 0.0 })
}

fn bump<K: Hash + Eq>(map: &mut HashMap<K, usize>, key: K) {
    *map.entry(key).or_insert(0) += 1;
}

/// MI, lagged NMI and two-way transfer entropy between P/E levels and
/// next-day returns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfoFlowReport {
    pub n: usize,
    /// P/E on day `t` against the return from `t` to `t + 1`, in nats.
    pub mi: f64,
    /// NMI of the same pairing.
    pub nmi: f64,
    pub lag: usize,
    pub max_lag: usize,
    /// NMI at lags `1..=max_lag`.
    pub nmi_lags: Vec<f64>,
    pub history_k: usize,
    /// P/E → returns.
    pub te_forward: TransferEntropy,
    /// Returns → P/E.
    pub te_backward: TransferEntropy,
    pub driver_edges: Vec<f64>,
    pub target_edges: Vec<f64>,
}

/// Aligned `(pe[t], return t→t+1)` pairs over the P/E coverage.
pub fn pe_return_pairs(series: &DailySeries) -> Result<(Vec<f64>, Vec<f64>)> {
    let start = series.pe_start().ok_or(Error::NoPeCoverage)?;
    let close = series.close();
    let (mut driver, mut target) = (Vec::new(), Vec::new());
    for t in start..close.len().saturating_sub(1) {
        driver.push(series.pe()[t].expect("contiguous coverage"));
        target.push((close[t + 1] - close[t]) / close[t] * 100.0);
    }
    Ok((driver, target))
}

pub fn info_report(series: &DailySeries, k: usize, max_lag: usize) -> Result<InfoFlowReport> {
    let (driver, target) = pe_return_pairs(series)?;
    info_report_pairs(&driver, &target, k, max_lag)
}

/// [`info_report`] for an already aligned driver/target pair.
pub fn info_report_pairs(driver: &[f64], target: &[f64], k: usize, max_lag: usize) -> Result<InfoFlowReport> {
    check_lengths(driver, target, 2)?;
    let needed = (k + 2).max(max_lag + 2);
    if driver.len() < needed {
        return Err(Error::SeriesTooShort { len: driver.len(), needed });
    }
    if k == 0 {
        return Err(Error::InvalidParameter("history length must be positive".into()));
    }
    let (dx, dy) = (Discretized::new(driver)?, Discretized::new(target)?);
    if dx.occupied() < 2 || dy.occupied() < 2 {
        return Err(Error::DegenerateMarginal);
    }
    let joint = JointHistogram::from_symbols(&dx, &dy, &dx.symbols, &dy.symbols);
    Ok(InfoFlowReport {
        n: driver.len(),
        mi: joint.mutual_information(),
        nmi: nmi_of(&joint),
        lag: 0,
        max_lag,
        nmi_lags: nmi_curve(&dx, &dy, max_lag),
        history_k: k,
        te_forward: te_symbols(&dx, &dy, k)?,
        te_backward: te_symbols(&dy, &dx, k)?,
        driver_edges: dx.edges,
        target_edges: dy.edges,
    })
}
