//! The `specergo` command line: generate ensemble datasets, analyze them into
//! Ω and cascade exports, and emit plot data.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{load_config_file, PartialRunConfig, RunConfig, FULL_ENSEMBLE_SIZE, FULL_SIZES, WORKERS_ENV};

use crate::analysis::export::{cascade_csv, eigenvalues_csv, modulus_density_csv, omega_csv};
use crate::analysis::{
    cascade_from_omegas, gram_spectrum, modulus_density, omega_for_ensemble, rescale_to_unit_radius, BinGrid,
    ErgodicityCascade, LinearGrid, ModulusDensity, OmegaDistribution, DEFAULT_BINS,
};
use crate::ensembles::dataset::{dataset_file_name, read_dataset_file, write_dataset_file};
use crate::ensembles::{generate_ensemble, EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, EigenSpectrum};

#[derive(Debug, Parser)]
#[command(name = "specergo", version, about = "Circular ensembles and spectral-ergodicity distances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample ensembles and write one dataset file per (kind, size).
    Generate(SweepArgs),
    /// Compute Ω profiles and the D_se cascade from stored datasets.
    Analyze {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Directory holding the datasets (defaults to --out).
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Emit the eigenvalues of one member as `re,im` rows.
    Eigenplot {
        dataset: PathBuf,
        #[arg(long, default_value_t = 0)]
        member: usize,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gram spectrum W†W of a CSV weight matrix and its magnitude histogram.
    Gram {
        weights: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
        /// Divide the spectrum by its largest eigenvalue first.
        #[arg(long)]
        rescale: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// TOML config file, or a JSON config / analysis export.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub kinds: Option<Vec<EnsembleKind>>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long = "ensemble-size")]
    pub ensemble_size: Option<usize>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "chunk-size")]
    pub chunk_size: Option<usize>,
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SweepArgs {
    /// Flags (and the worker environment variable) over the config file over
    /// defaults.
    pub fn resolve(&self) -> Result<RunConfig> {
        let flags = PartialRunConfig {
            kinds: self.kinds.clone(),
            sizes: self.sizes.clone(),
            count_m: self.ensemble_size,
            k_bins: self.bins,
            epsilon: self.epsilon,
            master_seed: self.seed,
            chunk_size: self.chunk_size,
            workers: self.workers,
            output_dir: self.out.clone(),
        };
        let file = match &self.config {
            Some(path) => load_config_file(path)?,
            None => PartialRunConfig::default(),
        };
        flags.or(file).resolve()
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(sweep) => {
            let config = sweep.resolve()?;
            for path in cmd_generate(&config)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Analyze { sweep, data } => {
            let config = sweep.resolve()?;
            let data_dir = data.unwrap_or_else(|| config.output_dir.clone());
            let report = cmd_analyze(&config, &data_dir)?;
            for warning in &report.warnings {
                eprintln!("warning: {warning}");
            }
            for path in &report.files {
                eprintln!("wrote {}", path.display());
            }
            for c in &report.cascades {
                for p in &c.pairs {
                    println!("{} D_se({}, {}) = {:e}", c.kind, p.n_a, p.n_b, p.d_se);
                }
            }
        }
        Command::Eigenplot { dataset, member, out } => {
            let csv = cmd_eigenplot(&dataset, member)?;
            match out {
                Some(path) => fs::write(path, csv)?,
                None => std::io::stdout().write_all(csv.as_bytes())?,
            }
        }
        Command::Gram {
            weights,
            bins,
            rescale,
            out,
        } => {
            let report = cmd_gram(&weights, bins, rescale)?;
            for path in report.write(&out)? {
                eprintln!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::invalid(format!("cannot create {}: {e}", dir.display())))
}

fn ensemble_specs(config: &RunConfig, kind: EnsembleKind) -> Result<Vec<EnsembleSpec>> {
    config
        .sizes
        .iter()
        .map(|&n| EnsembleSpec::new(kind, n, config.count_m, config.master_seed, config.chunk_size))
        .collect()
}

/// Writes one dataset per (kind, size). Files depend on the config but not on
/// the worker count.
pub fn cmd_generate(config: &RunConfig) -> Result<Vec<PathBuf>> {
    config.validate()?;
    ensure_dir(&config.output_dir)?;
    let mut written = Vec::new();
    for &kind in &config.kinds {
        for spec in ensemble_specs(config, kind)? {
            let spectra = generate_ensemble(&spec, config.workers)?;
            let path = config.output_dir.join(dataset_file_name(kind, spec.size_n));
            write_dataset_file(&path, &spec, &spectra)?;
            written.push(path);
        }
    }
    Ok(written)
}

#[derive(Debug, Serialize)]
struct OmegaExport<'a> {
    config: &'a RunConfig,
    omega: &'a [OmegaDistribution],
}

#[derive(Debug, Serialize)]
struct CascadeExport<'a> {
    config: &'a RunConfig,
    cascades: &'a [ErgodicityCascade],
}

#[derive(Debug, Clone)]
pub struct AnalyzeReport {
    pub omegas: Vec<OmegaDistribution>,
    pub cascades: Vec<ErgodicityCascade>,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Reads the dataset of every configured (kind, size), writes
/// `omega_<kind>.{csv,json}` per kind and one `cascade.{csv,json}`.
///
/// Ω uses the `N` and `M` recorded in each dataset header; a header that
/// disagrees with the requested size only produces a warning.
pub fn cmd_analyze(config: &RunConfig, dataset_dir: &Path) -> Result<AnalyzeReport> {
    config.validate()?;
    let grid = BinGrid::new(config.k_bins)?;
    ensure_dir(&config.output_dir)?;
    let mut report = AnalyzeReport {
        omegas: Vec::new(),
        cascades: Vec::new(),
        files: Vec::new(),
        warnings: Vec::new(),
    };
    for &kind in &config.kinds {
        let mut omegas = Vec::with_capacity(config.sizes.len());
        for &n in &config.sizes {
            let path = dataset_dir.join(dataset_file_name(kind, n));
            if !path.exists() {
                return Err(Error::Dataset {
                    path,
                    message: "missing dataset".into(),
                });
            }
            let dataset = read_dataset_file(&path)?;
            let header = &dataset.header;
            if header.kind != kind {
                return Err(Error::Dataset {
                    path,
                    message: format!("holds {} members, expected {kind}", header.kind),
                });
            }
            if header.size_n != n {
                report.warnings.push(format!(
                    "{} declares N = {}, requested {n}; using the declared size",
                    path.display(),
                    header.size_n
                ));
            }
            if header.count_m != config.count_m {
                report.warnings.push(format!(
                    "{} declares M = {}, configured {}",
                    path.display(),
                    header.count_m,
                    config.count_m
                ));
            }
            omegas.push(omega_for_ensemble(&dataset.spectra, header.size_n, kind, &grid)?);
        }
        for o in &omegas {
            if o.is_all_zero() {
                report
                    .warnings
                    .push(format!("{kind} N = {}: Ω is zero in every bin", o.size_n));
            }
        }

        let stem = format!("omega_{}", kind.as_str().to_ascii_lowercase());
        let csv_path = config.output_dir.join(format!("{stem}.csv"));
        fs::write(&csv_path, omega_csv(&omegas))?;
        let json_path = config.output_dir.join(format!("{stem}.json"));
        fs::write(&json_path, to_json(&OmegaExport { config, omega: &omegas })?)?;
        report.files.extend([csv_path, json_path]);

        if omegas.len() >= 2 {
            report.cascades.push(cascade_from_omegas(&omegas, config.epsilon)?);
        } else {
            report
                .warnings
                .push(format!("{kind}: a cascade needs at least two sizes"));
        }
        report.omegas.extend(omegas);
    }

    let csv_path = config.output_dir.join("cascade.csv");
    fs::write(&csv_path, cascade_csv(&report.cascades))?;
    let json_path = config.output_dir.join("cascade.json");
    fs::write(
        &json_path,
        to_json(&CascadeExport {
            config,
            cascades: &report.cascades,
        })?,
    )?;
    report.files.extend([csv_path, json_path]);
    Ok(report)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// `re,im` rows for member `member` of a dataset.
pub fn cmd_eigenplot(dataset_file: &Path, member: usize) -> Result<String> {
    let dataset = read_dataset_file(dataset_file)?;
    let spectrum = dataset.spectra.get(member).ok_or_else(|| {
        Error::invalid(format!(
            "member {member} out of range: dataset has {} members",
            dataset.spectra.len()
        ))
    })?;
    Ok(eigenvalues_csv(spectrum))
}

/// Parses a real matrix written as comma-separated rows. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_weights_csv(text: &str) -> Result<ComplexMatrix> {
    let mut rows = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                let field = field.trim();
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::invalid(format!("line {}: bad number {field:?}", line_no + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first().map(Vec::len) {
            if row.len() != first {
                return Err(Error::invalid(format!(
                    "line {}: ragged row of {} values, expected {first}",
                    line_no + 1,
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::invalid("weights file holds no rows"));
    }
    ComplexMatrix::from_real_rows(&rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub rows: usize,
    pub cols: usize,
    pub rescaled: bool,
    pub eigenvalues: Vec<f64>,
    pub density: ModulusDensity,
    #[serde(skip)]
    spectrum: EigenSpectrum,
}

impl GramReport {
    /// Writes `gram_spectrum.csv`, `gram_density.csv` and `gram.json`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        ensure_dir(dir)?;
        let spectrum = dir.join("gram_spectrum.csv");
        fs::write(&spectrum, eigenvalues_csv(&self.spectrum))?;
        let density = dir.join("gram_density.csv");
        fs::write(&density, modulus_density_csv(&self.density))?;
        let json = dir.join("gram.json");
        fs::write(&json, to_json(self)?)?;
        Ok(vec![spectrum, density, json])
    }
}

/// Gram spectrum of a weights file plus a magnitude histogram over
/// `[0, λ_max]`. Gram eigenvalues are real and non-negative, so a phase
/// histogram would put everything in one bin.
pub fn cmd_gram(weights_file: &Path, bins: usize, rescale: bool) -> Result<GramReport> {
    let text = fs::read_to_string(weights_file)?;
    let w = parse_weights_csv(&text)?;
    let mut spectrum = gram_spectrum(&w)?;
    if rescale {
        spectrum = rescale_to_unit_radius(&spectrum)?;
    }
    let radius = spectrum.spectral_radius();
    let grid = LinearGrid::new(0.0, if radius > 0.0 { radius } else { 1.0 }, bins)?;
    let density = modulus_density(&spectrum, &grid)?;
    Ok(GramReport {
        rows: w.n_rows(),
        cols: w.n_cols(),
        rescaled: rescale,
        eigenvalues: spectrum.values.iter().map(|z| z.re).collect(),
        density,
        spectrum,
    })
}
