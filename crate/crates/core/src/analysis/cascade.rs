use serde::{Deserialize, Serialize};

use super::density::{phase_density, BinGrid};
use super::omega::{d_se, omega, OmegaDistribution};
use crate::ensembles::{generate_ensemble, EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::linalg::EigenSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadePair {
    #[serde(rename = "N_a")]
    pub n_a: usize,
    #[serde(rename = "N_b")]
    pub n_b: usize,
    pub d_se: f64,
}

/// `D_se` over consecutive ensemble sizes of one kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErgodicityCascade {
    pub kind: EnsembleKind,
    pub pairs: Vec<CascadePair>,
}

impl ErgodicityCascade {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.pairs.windows(2).all(|w| w[1].d_se < w[0].d_se)
    }

    pub fn distances(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.d_se).collect()
    }
}

/// Ω of a stored ensemble: phase density per member, then the fluctuation
/// profile.
pub fn omega_for_ensemble(
    spectra: &[EigenSpectrum],
    size_n: usize,
    kind: EnsembleKind,
    grid: &BinGrid,
) -> Result<OmegaDistribution> {
    let densities = spectra
        .iter()
        .map(|s| phase_density(s, grid))
        .collect::<Result<Vec<_>>>()?;
    omega(&densities, size_n, kind)
}

/// Pairs up consecutive Ω profiles, which must share kind, `M` and grid and
/// be ordered by non-decreasing size.
pub fn cascade_from_omegas(omegas: &[OmegaDistribution], epsilon: f64) -> Result<ErgodicityCascade> {
    let first = match omegas {
        [first, _, ..] => first,
        _ => return Err(Error::invalid("a cascade needs at least two sizes")),
    };
    for o in omegas {
        if o.kind != first.kind {
            return Err(Error::invalid(format!("mixed ensemble kinds {} and {}", first.kind, o.kind)));
        }
        if o.count_m != first.count_m {
            return Err(Error::invalid(format!(
                "mixed ensemble sizes M = {} and {}",
                first.count_m, o.count_m
            )));
        }
        first.grid.ensure_same(&o.grid)?;
    }
    if omegas.windows(2).any(|w| w[1].size_n < w[0].size_n) {
        return Err(Error::invalid("cascade sizes must be sorted ascending"));
    }
    let pairs = omegas
        .windows(2)
        .map(|w| {
            Ok(CascadePair {
                n_a: w[0].size_n,
                n_b: w[1].size_n,
                d_se: d_se(&w[0], &w[1], epsilon)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ErgodicityCascade { kind: first.kind, pairs })
}

/// Generates every ensemble in `specs` and returns the cascade together with
/// the Ω profile of each size.
pub fn cascade_with_omegas(
    specs: &[EnsembleSpec],
    grid: &BinGrid,
    epsilon: f64,
    workers: usize,
) -> Result<(ErgodicityCascade, Vec<OmegaDistribution>)> {
    let omegas = specs
        .iter()
        .map(|spec| {
            let spectra = generate_ensemble(spec, workers)?;
            omega_for_ensemble(&spectra, spec.size_n, spec.kind, grid)
        })
        .collect::<Result<Vec<_>>>()?;
    let cascade = cascade_from_omegas(&omegas, epsilon)?;
    Ok((cascade, omegas))
}

pub fn cascade(specs: &[EnsembleSpec], grid: &BinGrid, epsilon: f64, workers: usize) -> Result<ErgodicityCascade> {
    Ok(cascade_with_omegas(specs, grid, epsilon, workers)?.0)
}
