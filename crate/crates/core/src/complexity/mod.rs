//! Entropy suite, generalized Hurst exponents and Lyapunov spectra.

mod entropy;
mod hurst;
mod lyapunov;
mod neighbors;
mod profile;

pub use entropy::{
    entropy_report, permutation_entropy_norm, sample_entropy, shannon_entropy_norm,
    tsallis_entropy_norm, EntropyParams, EntropyReport,
};
pub use hurst::{default_taus, generalized_hurst, HurstCurve};
pub use lyapunov::{
    delay_embed, kaplan_yorke_dimension, ks_entropy, lyapunov_spectrum, lyapunov_spectrum_with,
    LyapunovParams, LyapunovReport,
};
pub use profile::{complexity_profile, ProfileEntry, ProfileParams};
