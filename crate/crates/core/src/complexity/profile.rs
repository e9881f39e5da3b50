use rayon::prelude::*;
use serde::Serialize;

use super::entropy::shannon_entropy_norm;
use super::hurst::{default_taus, generalized_hurst};
use super::lyapunov::{lyapunov_spectrum_with, LyapunovParams};
use crate::distribution::build_pmf;
use crate::error::Result;
use crate::horizons::{forward_returns, HorizonSpec};
use crate::market_data::DailySeries;

/// Complexity of the forward-return series at one horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileEntry {
    pub spec: HorizonSpec,
    pub n: usize,
    /// Normalized Shannon entropy of the return PMF.
    pub sne: f64,
    /// `H(2)` of the return series.
    pub hurst2: f64,
    pub largest_lyapunov: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileParams {
    pub taus: Vec<usize>,
    pub lyapunov: LyapunovParams,
}

impl Default for ProfileParams {
    fn default() -> Self {
        Self { taus: default_taus(), lyapunov: LyapunovParams::default() }
    }
}

/// One entry per ladder horizon, in ladder order. A horizon that fails
/// keeps its error; the others are still computed.
pub fn complexity_profile(
    series: &DailySeries,
    ladder: &[HorizonSpec],
    params: &ProfileParams,
) -> Vec<(HorizonSpec, Result<ProfileEntry>)> {
    ladder
        .par_iter()
        .map(|spec| (spec.clone(), profile_entry(series, spec, params)))
        .collect()
}

fn profile_entry(series: &DailySeries, spec: &HorizonSpec, params: &ProfileParams) -> Result<ProfileEntry> {
    let set = forward_returns(series, spec)?;
    let x = &set.returns;
    let sne = shannon_entropy_norm(&build_pmf(x)?);
    let hurst2 = generalized_hurst(x, &[2.0], &params.taus)?.h[0];
    let largest_lyapunov = lyapunov_spectrum_with(x, params.lyapunov)?.largest;
    Ok(ProfileEntry { spec: spec.clone(), n: x.len(), sne, hurst2, largest_lyapunov })
}
