//! Circular ensembles built from a Gaussian Hermitian seed matrix.
//!
//! CUE members are `U = D·V`, where the columns of `V` are the orthonormal
//! eigenvectors of a Hermitian `H` with i.i.d. Gaussian parts and `D` is a
//! diagonal of independent uniform phases. COE members are `Uᵀ·U` and CSE
//! members `(Z·Uᵀ·Z)·U` with a `2N × 2N` CUE draw and the symplectic unit `Z`.

mod chunks;
pub mod dataset;

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use chunks::{chunk_seed, member_stream, mix64, plan_chunks, Chunk, ChunkPlan};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_with_source, hermitian_eigen, matmul, Complex64, ComplexMatrix, EigenSpectrum, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EnsembleKind {
    #[serde(rename = "CUE")]
    Cue,
    #[serde(rename = "COE")]
    Coe,
    #[serde(rename = "CSE")]
    Cse,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 3] = [EnsembleKind::Cue, EnsembleKind::Coe, EnsembleKind::Cse];

    /// Matrix dimension (and eigenvalue count) for logical size `n`.
    pub fn dimension(self, n: usize) -> usize {
        match self {
            EnsembleKind::Cse => 2 * n,
            _ => n,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::Cue => "CUE",
            EnsembleKind::Coe => "COE",
            EnsembleKind::Cse => "CSE",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "CUE" => Ok(EnsembleKind::Cue),
            "COE" => Ok(EnsembleKind::Coe),
            "CSE" => Ok(EnsembleKind::Cse),
            other => Err(Error::invalid(format!("unknown ensemble kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    /// Logical size N; CSE matrices are 2N × 2N.
    pub size_n: usize,
    pub count_m: usize,
    pub master_seed: u64,
    pub chunk_size: usize,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, size_n: usize, count_m: usize, master_seed: u64, chunk_size: usize) -> Result<Self> {
        let spec = Self {
            kind,
            size_n,
            count_m,
            master_seed,
            chunk_size,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.size_n == 0 {
            return Err(Error::invalid("ensemble size_n must be positive"));
        }
        if self.count_m == 0 {
            return Err(Error::invalid("ensemble count_m must be positive"));
        }
        if self.chunk_size == 0 {
            return Err(Error::invalid("chunk_size must be positive"));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.kind.dimension(self.size_n)
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::invalid("matrix size must be positive"))
    } else {
        Ok(())
    }
}

/// `H_ij = ½(a_ij + i·b_ij + a_ji − i·b_ji)` with all of `a` drawn before all
/// of `b`, row-major. Exactly Hermitian with a real diagonal.
pub fn sample_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    check_size(n)?;
    let a: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    let b: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let (ij, ji) = (i * n + j, j * n + i);
        Complex64::new(0.5 * (a[ij] + a[ji]), 0.5 * (b[ij] - b[ji]))
    }))
}

/// CUE member `U = D·V`.
pub fn sample_cue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let h = sample_hermitian(n, rng)?;
    let basis = hermitian_eigen(&h)?.vectors;
    let phases: Vec<Complex64> = (0..n)
        .map(|_| Complex64::from_polar(1.0, rng.random::<f64>() * TAU))
        .collect();
    let mut u = basis;
    for (i, &d) in phases.iter().enumerate() {
        u.row_mut(i).iter_mut().for_each(|z| *z *= d);
    }
    Ok(u)
}

/// COE member `O = Uᵀ·U`.
pub fn sample_coe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let u = sample_cue(n, rng)?;
    matmul(&u.transpose(), &u)
}

/// Block-diagonal `2n × 2n` matrix with `n` copies of `[[0, 1], [-1, 0]]`.
pub fn make_symplectic_z(n: usize) -> ComplexMatrix {
    let mut z = ComplexMatrix::zeros(2 * n, 2 * n);
    for b in 0..n {
        z[(2 * b, 2 * b + 1)] = Complex64::new(1.0, 0.0);
        z[(2 * b + 1, 2 * b)] = Complex64::new(-1.0, 0.0);
    }
    z
}

/// CSE member `S = (Z·Uᵀ·Z)·U` of dimension `2n`.
pub fn sample_cse<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    check_size(n)?;
    let u = sample_cue(2 * n, rng)?;
    let z = make_symplectic_z(n);
    let zut = matmul(&z, &u.transpose())?;
    // X·Z = (Zᵀ·Xᵀ)ᵀ = -(Z·Xᵀ)ᵀ keeps the sparse factor on the left.
    let zutz = matmul(&z, &zut.transpose())?
        .transpose()
        .scale(Complex64::new(-1.0, 0.0));
    matmul(&zutz, &u)
}

pub fn sample_member<R: Rng + ?Sized>(kind: EnsembleKind, n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    match kind {
        EnsembleKind::Cue => sample_cue(n, rng),
        EnsembleKind::Coe => sample_coe(n, rng),
        EnsembleKind::Cse => sample_cse(n, rng),
    }
}

fn generate_chunk(spec: &EnsembleSpec, chunk: &Chunk) -> Result<Vec<EigenSpectrum>> {
    chunk
        .members
        .clone()
        .map(|member| {
            let offset = (member - chunk.members.start) as u64;
            let mut rng = member_stream(chunk.seed, offset);
            let source = Provenance {
                kind: Some(spec.kind),
                member_index: Some(member),
                chunk_index: Some(chunk.index),
                seed: Some(chunk.seed),
            };
            let matrix = sample_member(spec.kind, spec.size_n, &mut rng).map_err(|e| annotate(e, spec, &source))?;
            eigenvalues_with_source(&matrix, source)
        })
        .collect()
}

fn annotate(err: Error, spec: &EnsembleSpec, source: &Provenance) -> Error {
    match err {
        Error::Convergence { sweeps, source_desc } => Error::Convergence {
            sweeps,
            source_desc: format!("{source_desc}; N={}, {source}", spec.size_n),
        },
        other => other,
    }
}

/// Samples every member of `spec` and returns their spectra ordered by member
/// index. The result is bit-identical for any `workers` value.
pub fn generate_ensemble(spec: &EnsembleSpec, workers: usize) -> Result<Vec<EigenSpectrum>> {
    spec.validate()?;
    if workers == 0 {
        return Err(Error::invalid("workers must be positive"));
    }
    let plan = plan_chunks(spec);
    let per_chunk: Vec<Vec<EigenSpectrum>> = if workers == 1 {
        plan.chunks
            .iter()
            .map(|chunk| generate_chunk(spec, chunk))
            .collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
        pool.install(|| {
            plan.chunks
                .par_iter()
                .map(|chunk| generate_chunk(spec, chunk))
                .collect::<Result<_>>()
        })?
    };
    Ok(per_chunk.into_iter().flatten().collect())
}

/// Regenerates the matrix of a single member, for replaying failures.
pub fn replay_member(spec: &EnsembleSpec, member: usize) -> Result<ComplexMatrix> {
    let plan = plan_chunks(spec);
    let chunk = plan
        .chunk_of(member)
        .ok_or_else(|| Error::invalid(format!("member {member} outside ensemble of {}", spec.count_m)))?;
    let mut rng = member_stream(chunk.seed, (member - chunk.members.start) as u64);
    sample_member(spec.kind, spec.size_n, &mut rng)
}
