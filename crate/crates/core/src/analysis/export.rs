//! Comma-separated exports with a one-line header. Floating-point fields use
//! the shortest representation that round-trips, so exports are byte-stable.

use std::fmt::Write;

use super::cascade::ErgodicityCascade;
use super::density::ModulusDensity;
use super::omega::OmegaDistribution;
use crate::linalg::EigenSpectrum;

pub const OMEGA_CSV_HEADER: &str = "kind,N,M,K,bin_center,omega_value";
pub const CASCADE_CSV_HEADER: &str = "kind,N_a,N_b,d_se";

pub fn omega_csv(omegas: &[OmegaDistribution]) -> String {
    let mut out = format!("{OMEGA_CSV_HEADER}\n");
    for o in omegas {
        for (center, value) in o.grid.centers().iter().zip(&o.values) {
            writeln!(
                out,
                "{},{},{},{},{center:e},{value:e}",
                o.kind,
                o.size_n,
                o.count_m,
                o.grid.k_bins()
            )
            .expect("writing to a String");
        }
    }
    out
}

pub fn cascade_csv(cascades: &[ErgodicityCascade]) -> String {
    let mut out = format!("{CASCADE_CSV_HEADER}\n");
    for c in cascades {
        for p in &c.pairs {
            writeln!(out, "{},{},{},{:e}", c.kind, p.n_a, p.n_b, p.d_se).expect("writing to a String");
        }
    }
    out
}

/// One `re,im` row per eigenvalue.
pub fn eigenvalues_csv(spectrum: &EigenSpectrum) -> String {
    let mut out = String::from("re,im\n");
    for z in &spectrum.values {
        writeln!(out, "{:e},{:e}", z.re, z.im).expect("writing to a String");
    }
    out
}

pub fn modulus_density_csv(density: &ModulusDensity) -> String {
    let mut out = String::from("bin_lower,bin_upper,bin_center,density\n");
    let edges = density.grid.edges();
    for (k, value) in density.values.iter().enumerate() {
        let (lo, hi) = (edges[k], edges[k + 1]);
        writeln!(out, "{lo:e},{hi:e},{:e},{value:e}", 0.5 * (lo + hi)).expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{BinGrid, CascadePair};
    use crate::ensembles::EnsembleKind;

    #[test]
    fn omega_rows() {
        let o = OmegaDistribution {
            grid: BinGrid::new(2).unwrap(),
            values: vec![0.25, 1e-7],
            size_n: 32,
            dimension: 32,
            count_m: 20,
            kind: EnsembleKind::Coe,
        };
        let csv = omega_csv(&[o]);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], OMEGA_CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("COE,32,20,2,-1.5707963267948966e0,2.5e-1"));
        assert!(lines[2].ends_with(",1e-7"));
    }

    #[test]
    fn cascade_rows() {
        let c = ErgodicityCascade {
            kind: EnsembleKind::Cse,
            pairs: vec![CascadePair { n_a: 32, n_b: 64, d_se: 1.5 }],
        };
        assert_eq!(cascade_csv(&[c]), "kind,N_a,N_b,d_se\nCSE,32,64,1.5e0\n");
    }
}
