//! Circular random-matrix ensembles (CUE, COE, CSE) and a spectral-ergodicity
//! toolkit: eigenvalue phase densities, per-bin fluctuation profiles across an
//! ensemble, and a symmetrized KL distance between the profiles of
//! consecutive matrix sizes.
//!
//! ```
//! use spectral_ergodicity::analysis::{cascade, BinGrid, DEFAULT_EPSILON};
//! use spectral_ergodicity::ensembles::{EnsembleKind, EnsembleSpec};
//!
//! let specs: Vec<_> = [8, 16]
//!     .into_iter()
//!     .map(|n| EnsembleSpec::new(EnsembleKind::Cue, n, 4, 7, 4).unwrap())
//!     .collect();
//! let grid = BinGrid::new(8).unwrap();
//! let result = cascade(&specs, &grid, DEFAULT_EPSILON, 1).unwrap();
//! assert_eq!(result.pairs.len(), 1);
//! ```

pub mod analysis;
pub mod cli;
pub mod ensembles;
pub mod error;
pub mod linalg;

pub use error::{Error, Result};
