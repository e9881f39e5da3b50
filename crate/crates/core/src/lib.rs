//! Valuation-conditioned return distributions and complexity metrics for
//! daily equity index data.
//!
//! The crate is organized along the analysis pipeline:
//!
//! - [`market_data`]: CSV ingestion of daily closes and P/E ratios, the
//!   implied-EPS series and date subsetting.
//! - [`horizons`]: overlapping forward returns over a ladder of holding
//!   periods, CAGR annualization, min/max/mode summaries and the trapping
//!   horizon.
//! - [`distribution`]: Freedman–Diaconis PMFs and everything read off them
//!   (σ-bands, reward-risk ratios, monthly PMFs, P/E-band conditional cells).
//! - [`complexity`]: Shannon/Tsallis/sample/permutation entropy, generalized
//!   Hurst exponents, Lyapunov spectra with KS entropy and Kaplan–Yorke
//!   dimension, and the per-horizon complexity profile.
//! - [`infoflow`]: plugin mutual information, lagged NMI and transfer entropy.
//!
//! ```
//! use valuscope::distribution::{asymmetry, build_pmf};
//!
//! let returns = [-1.2, 0.4, 0.9, 1.5, -0.3, 2.2, 0.8, 1.1];
//! let pmf = build_pmf(&returns).unwrap();
//! let stats = asymmetry(&pmf);
//! assert!(stats.prp > stats.nrp);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexity;
pub mod distribution;
mod error;
pub mod horizons;
pub mod infoflow;
pub mod market_data;
pub mod serde_util;

pub use error::{Error, Result};
pub use market_data::{DailySeries, IngestConfig, TRADING_YEAR};
