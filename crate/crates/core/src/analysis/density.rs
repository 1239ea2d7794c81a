use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::EigenSpectrum;

/// `K` equal-width phase bins tiling `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinGrid {
    k_bins: usize,
}

impl BinGrid {
    pub fn new(k_bins: usize) -> Result<Self> {
        if k_bins == 0 {
            return Err(Error::invalid("bin count must be positive"));
        }
        Ok(Self { k_bins })
    }

    pub fn k_bins(&self) -> usize {
        self.k_bins
    }

    pub fn lower(&self) -> f64 {
        -PI
    }

    pub fn upper(&self) -> f64 {
        PI
    }

    pub fn width(&self) -> f64 {
        2.0 * PI / self.k_bins as f64
    }

    /// `K + 1` edges, first `-π`, last exactly `π`.
    pub fn edges(&self) -> Vec<f64> {
        (0..=self.k_bins)
            .map(|i| if i == self.k_bins { PI } else { -PI + i as f64 * self.width() })
            .collect()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.k_bins).map(|i| -PI + (i as f64 + 0.5) * self.width()).collect()
    }

    /// Bin holding `phase`, which must lie in `[-π, π)`; the result agrees
    /// with [`BinGrid::edges`].
    pub fn bin_of(&self, phase: f64) -> usize {
        let k = self.k_bins;
        let mut idx = (((phase + PI) / self.width()).floor().max(0.0) as usize).min(k - 1);
        let edge = |i: usize| if i == k { PI } else { -PI + i as f64 * self.width() };
        if phase < edge(idx) && idx > 0 {
            idx -= 1;
        } else if phase >= edge(idx + 1) && idx + 1 < k {
            idx += 1;
        }
        idx
    }

    pub(crate) fn ensure_same(&self, other: &BinGrid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                left: self.k_bins,
                right: other.k_bins,
            })
        }
    }
}

/// Normalized phase histogram `ρ_j(b_k)` of one ensemble member, in density
/// per radian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensity {
    pub grid: BinGrid,
    pub values: Vec<f64>,
    pub member_index: usize,
}

impl SpectralDensity {
    /// `Σ_k ρ(b_k)·Δb`, which is 1 up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.width()
    }
}

pub fn phase_density(spectrum: &EigenSpectrum, grid: &BinGrid) -> Result<SpectralDensity> {
    if spectrum.values.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let mut counts = vec![0usize; grid.k_bins()];
    for phase in spectrum.phases() {
        counts[grid.bin_of(phase)] += 1;
    }
    let norm = spectrum.values.len() as f64 * grid.width();
    Ok(SpectralDensity {
        grid: *grid,
        values: counts.into_iter().map(|c| c as f64 / norm).collect(),
        member_index: spectrum.source.member_index.unwrap_or(0),
    })
}

/// Bin-wise arithmetic mean `ρ̄(b_k)` of member densities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanDensity {
    pub grid: BinGrid,
    pub values: Vec<f64>,
    pub count_m: usize,
}

pub fn mean_density(densities: &[SpectralDensity]) -> Result<MeanDensity> {
    let first = densities
        .first()
        .ok_or_else(|| Error::invalid("mean density needs at least one member"))?;
    let mut values = vec![0.0; first.grid.k_bins()];
    for d in densities {
        first.grid.ensure_same(&d.grid)?;
        for (acc, v) in values.iter_mut().zip(&d.values) {
            *acc += v;
        }
    }
    let m = densities.len() as f64;
    values.iter_mut().for_each(|v| *v /= m);
    Ok(MeanDensity {
        grid: first.grid,
        values,
        count_m: densities.len(),
    })
}

/// Equal-width bins on `[lower, upper]`, the last bin closed. Used for
/// magnitude histograms of real spectra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearGrid {
    pub lower: f64,
    pub upper: f64,
    pub k_bins: usize,
}

impl LinearGrid {
    pub fn new(lower: f64, upper: f64, k_bins: usize) -> Result<Self> {
        if k_bins == 0 {
            return Err(Error::invalid("bin count must be positive"));
        }
        if !(lower.is_finite() && upper.is_finite() && upper > lower) {
            return Err(Error::invalid(format!("invalid range [{lower}, {upper}]")));
        }
        Ok(Self { lower, upper, k_bins })
    }

    pub fn width(&self) -> f64 {
        (self.upper - self.lower) / self.k_bins as f64
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.k_bins)
            .map(|i| if i == self.k_bins { self.upper } else { self.lower + i as f64 * self.width() })
            .collect()
    }

    pub fn bin_of(&self, x: f64) -> Option<usize> {
        if x < self.lower || x > self.upper {
            return None;
        }
        Some((((x - self.lower) / self.width()).floor() as usize).min(self.k_bins - 1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusDensity {
    pub grid: LinearGrid,
    pub values: Vec<f64>,
}

/// Normalized histogram of `|λ|`. Values outside the grid are rejected.
pub fn modulus_density(spectrum: &EigenSpectrum, grid: &LinearGrid) -> Result<ModulusDensity> {
    if spectrum.values.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let mut counts = vec![0usize; grid.k_bins];
    for z in &spectrum.values {
        let r = z.norm();
        let bin = grid
            .bin_of(r)
            .ok_or_else(|| Error::invalid(format!("modulus {r} outside [{}, {}]", grid.lower, grid.upper)))?;
        counts[bin] += 1;
    }
    let norm = spectrum.values.len() as f64 * grid.width();
    Ok(ModulusDensity {
        grid: *grid,
        values: counts.into_iter().map(|c| c as f64 / norm).collect(),
    })
}
