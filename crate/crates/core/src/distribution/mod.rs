//! Freedman–Diaconis PMFs and the statistics read off them.

mod conditional;
mod monthly;
mod pmf;
mod stats;

pub use conditional::{conditional_cells, ConditionalCell, PE_BAND_MAX, PE_BAND_MIN};
pub use monthly::{monthly_pmfs, MonthlyPmf};
pub use pmf::{
    build_pmf, fd_bin_width, fd_edges, quantile_sorted, BinRule, Pmf, MAX_BINS,
};
pub(crate) use pmf::bin_indices;
pub use stats::{asymmetry, pmf_stats, ratio, AsymmetryStats, Band, PmfStats};
