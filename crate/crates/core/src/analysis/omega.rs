use serde::{Deserialize, Serialize};

use super::density::{mean_density, BinGrid, SpectralDensity};
use crate::ensembles::EnsembleKind;
use crate::error::{Error, Result};

/// Default floor applied to every bin before taking logarithms.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Per-bin fluctuation of member densities around the ensemble mean,
/// `Ω_k = (1 / (M·N)) Σ_j (ρ_j(b_k) − ρ̄(b_k))²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaDistribution {
    pub grid: BinGrid,
    pub values: Vec<f64>,
    /// Logical ensemble size N.
    pub size_n: usize,
    /// Eigenvalue count per member; the `N` of the prefactor.
    pub dimension: usize,
    pub count_m: usize,
    pub kind: EnsembleKind,
}

impl OmegaDistribution {
    /// True when every bin is exactly zero, e.g. for `M = 1` or identical
    /// members. Such a distribution has no usable divergence.
    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

pub fn omega(densities: &[SpectralDensity], size_n: usize, kind: EnsembleKind) -> Result<OmegaDistribution> {
    if size_n == 0 {
        return Err(Error::invalid("size_n must be positive"));
    }
    let mean = mean_density(densities)?;
    let m = densities.len();
    let dimension = kind.dimension(size_n);
    let prefactor = 1.0 / (m as f64 * dimension as f64);
    let mut values = vec![0.0; mean.values.len()];
    for d in densities {
        for ((acc, &rho), &rho_bar) in values.iter_mut().zip(&d.values).zip(&mean.values) {
            let dev = rho - rho_bar;
            *acc += dev * dev;
        }
    }
    values.iter_mut().for_each(|v| *v *= prefactor);
    Ok(OmegaDistribution {
        grid: mean.grid,
        values,
        size_n,
        dimension,
        count_m: m,
        kind,
    })
}

fn check_pair(a: &[f64], b: &[f64], epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    if a.len() != b.len() {
        return Err(Error::GridMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.iter().chain(b).all(|&v| v <= epsilon) {
        return Err(Error::DegenerateOmega { epsilon });
    }
    Ok(())
}

/// `Σ_k a_k log₂(a_k / b_k)` over epsilon-floored bins. No normalization is
/// applied; the inputs are fluctuation profiles, not probabilities.
pub fn kl_bins(a: &[f64], b: &[f64], epsilon: f64) -> Result<f64> {
    check_pair(a, b, epsilon)?;
    Ok(a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let (x, y) = (x.max(epsilon), y.max(epsilon));
            x * (x / y).log2()
        })
        .sum())
}

/// `D_KL(a ‖ b) + D_KL(b ‖ a)` over epsilon-floored bins.
///
/// Both directions are combined bin by bin, so swapping the arguments gives a
/// bit-identical result. Each bin's combined term is non-negative
/// analytically; rounding below zero is clamped.
pub fn d_se_bins(a: &[f64], b: &[f64], epsilon: f64) -> Result<f64> {
    check_pair(a, b, epsilon)?;
    Ok(a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let (x, y) = (x.max(epsilon), y.max(epsilon));
            (x * (x / y).log2() + y * (y / x).log2()).max(0.0)
        })
        .sum())
}

pub fn kl(a: &OmegaDistribution, b: &OmegaDistribution, epsilon: f64) -> Result<f64> {
    a.grid.ensure_same(&b.grid)?;
    kl_bins(&a.values, &b.values, epsilon)
}

/// Symmetric spectral-ergodicity distance between two Ω profiles.
pub fn d_se(a: &OmegaDistribution, b: &OmegaDistribution, epsilon: f64) -> Result<f64> {
    a.grid.ensure_same(&b.grid)?;
    d_se_bins(&a.values, &b.values, epsilon)
}
