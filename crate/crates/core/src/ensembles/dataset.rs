//! Line-oriented JSON ensemble datasets. Field names are documented in
//! `docs/formats.md`; bump [`FORMAT_VERSION`] on any change.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::linalg::{Complex64, EigenSpectrum, Provenance};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetHeader {
    pub format_version: u32,
    pub kind: EnsembleKind,
    #[serde(rename = "N")]
    pub size_n: usize,
    #[serde(rename = "M")]
    pub count_m: usize,
    pub master_seed: u64,
    pub chunk_size: usize,
}

impl DatasetHeader {
    pub fn from_spec(spec: &EnsembleSpec) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            kind: spec.kind,
            size_n: spec.size_n,
            count_m: spec.count_m,
            master_seed: spec.master_seed,
            chunk_size: spec.chunk_size,
        }
    }

    pub fn spec(&self) -> Result<EnsembleSpec> {
        EnsembleSpec::new(self.kind, self.size_n, self.count_m, self.master_seed, self.chunk_size)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MemberRecord {
    member_index: usize,
    chunk_index: usize,
    chunk_seed: u64,
    eigenvalues: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub header: DatasetHeader,
    pub spectra: Vec<EigenSpectrum>,
}

/// Canonical file name, e.g. `cue_n64.jsonl`.
pub fn dataset_file_name(kind: EnsembleKind, size_n: usize) -> String {
    format!("{}_n{size_n}.jsonl", kind.as_str().to_ascii_lowercase())
}

pub fn write_dataset<W: Write>(mut out: W, spec: &EnsembleSpec, spectra: &[EigenSpectrum]) -> Result<()> {
    if spectra.len() != spec.count_m {
        return Err(Error::invalid(format!(
            "expected {} spectra, got {}",
            spec.count_m,
            spectra.len()
        )));
    }
    serde_json::to_writer(&mut out, &DatasetHeader::from_spec(spec))?;
    out.write_all(b"\n")?;
    for (index, spectrum) in spectra.iter().enumerate() {
        let record = MemberRecord {
            member_index: spectrum.source.member_index.unwrap_or(index),
            chunk_index: spectrum.source.chunk_index.unwrap_or(0),
            chunk_seed: spectrum.source.seed.unwrap_or(0),
            eigenvalues: spectrum.values.iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_dataset_file(path: &Path, spec: &EnsembleSpec, spectra: &[EigenSpectrum]) -> Result<()> {
    let file = File::create(path).map_err(|e| dataset_error(path, format!("cannot create: {e}")))?;
    write_dataset(BufWriter::new(file), spec, spectra)
}

fn dataset_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Dataset {
        path: PathBuf::from(path),
        message: message.into(),
    }
}

pub fn read_dataset<R: BufRead>(input: R, path: &Path) -> Result<Dataset> {
    let mut lines = input.lines().enumerate().filter(|(_, l)| match l {
        Ok(text) => !text.trim().is_empty(),
        Err(_) => true,
    });
    let (_, first) = lines.next().ok_or_else(|| dataset_error(path, "empty file"))?;
    let header: DatasetHeader =
        serde_json::from_str(&first?).map_err(|e| dataset_error(path, format!("bad header: {e}")))?;
    if header.format_version != FORMAT_VERSION {
        return Err(dataset_error(
            path,
            format!("unsupported format_version {}", header.format_version),
        ));
    }
    let spec = header.spec()?;
    let dimension = spec.dimension();
    let mut spectra = Vec::with_capacity(header.count_m);
    for (line_no, line) in lines {
        let record: MemberRecord = serde_json::from_str(&line?)
            .map_err(|e| dataset_error(path, format!("line {}: {e}", line_no + 1)))?;
        if record.member_index != spectra.len() {
            return Err(dataset_error(
                path,
                format!("line {}: expected member {}, found {}", line_no + 1, spectra.len(), record.member_index),
            ));
        }
        if record.eigenvalues.len() != dimension {
            return Err(dataset_error(
                path,
                format!(
                    "member {}: expected {dimension} eigenvalues, found {}",
                    record.member_index,
                    record.eigenvalues.len()
                ),
            ));
        }
        let values = record.eigenvalues.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        spectra.push(EigenSpectrum::from_values(
            values,
            Provenance {
                kind: Some(header.kind),
                member_index: Some(record.member_index),
                chunk_index: Some(record.chunk_index),
                seed: Some(record.chunk_seed),
            },
        ));
    }
    if spectra.len() != header.count_m {
        return Err(dataset_error(
            path,
            format!("header declares {} members, found {}", header.count_m, spectra.len()),
        ));
    }
    Ok(Dataset { header, spectra })
}

pub fn read_dataset_file(path: &Path) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| dataset_error(path, format!("cannot open: {e}")))?;
    read_dataset(BufReader::new(file), path)
}
