//! Phase densities, Ω fluctuation profiles, symmetric KL distances and size
//! cascades, plus the Gram-spectrum path for rectangular weight matrices.

mod cascade;
mod density;
pub mod export;
mod gram;
mod omega;

pub use cascade::{
    cascade, cascade_from_omegas, cascade_with_omegas, omega_for_ensemble, CascadePair, ErgodicityCascade,
};
pub use density::{
    mean_density, modulus_density, phase_density, BinGrid, LinearGrid, MeanDensity, ModulusDensity,
    SpectralDensity,
};
pub use gram::{gram_spectrum, rescale_to_unit_radius};
pub use omega::{d_se, d_se_bins, kl, kl_bins, omega, OmegaDistribution, DEFAULT_EPSILON};

/// Default number of phase bins.
pub const DEFAULT_BINS: usize = 32;
