use crate::error::{Error, Result};
use crate::linalg::{conjugate_transpose, hermitian_eigenvalues, matmul, Complex64, ComplexMatrix, EigenSpectrum, Provenance};

/// Eigenvalues of the Gram operator `W†W` of a (possibly rectangular) weight
/// matrix, i.e. its squared singular values. Rounding below zero is clamped.
pub fn gram_spectrum(w: &ComplexMatrix) -> Result<EigenSpectrum> {
    let gram = matmul(&conjugate_transpose(w), w)?;
    let values = hermitian_eigenvalues(&gram)?
        .into_iter()
        .map(|v| Complex64::new(if v > 0.0 { v } else { 0.0 }, 0.0))
        .collect();
    Ok(EigenSpectrum::from_values(values, Provenance::default()))
}

/// Divides every eigenvalue by the spectral radius. Phases are unchanged.
pub fn rescale_to_unit_radius(spectrum: &EigenSpectrum) -> Result<EigenSpectrum> {
    let radius = spectrum.spectral_radius();
    if radius == 0.0 || !radius.is_finite() {
        return Err(Error::ZeroRadius);
    }
    Ok(EigenSpectrum {
        size_n: spectrum.size_n,
        values: spectrum.values.iter().map(|&z| z / radius).collect(),
        source: spectrum.source.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(values: &[Complex64]) -> EigenSpectrum {
        EigenSpectrum::from_values(values.to_vec(), Provenance::default())
    }

    fn reals(s: &EigenSpectrum) -> Vec<f64> {
        s.values.iter().map(|z| z.re).collect()
    }

    #[test]
    fn diagonal_weights_square() {
        let w = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let s = gram_spectrum(&w).unwrap();
        assert_eq!(reals(&s), vec![1.0, 4.0]);
    }

    #[test]
    fn orthonormal_columns() {
        let r = 1.0 / 2f64.sqrt();
        let w = ComplexMatrix::from_real_rows(&[vec![r, 0.0], vec![r, 0.0], vec![0.0, 1.0]]).unwrap();
        let s = gram_spectrum(&w).unwrap();
        assert_eq!(s.size_n, 2);
        assert!(reals(&s).iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn rank_deficient_is_clamped() {
        let w = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0]]).unwrap();
        let s = gram_spectrum(&w).unwrap();
        assert!(s.values.iter().all(|z| z.re >= 0.0 && z.im == 0.0));
        assert!((s.values[2].re - 15.0).abs() < 1e-12);
    }

    #[test]
    fn rescale_cases() {
        let s = spectrum(&[Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.2)]);
        let r = rescale_to_unit_radius(&s).unwrap();
        assert!((r.values[0] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(r.values[1], Complex64::new(0.0, 1.0));
        assert_eq!(r.spectral_radius(), 1.0);

        let unit = spectrum(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)]);
        assert_eq!(rescale_to_unit_radius(&unit).unwrap(), unit);

        let zero = spectrum(&[Complex64::new(0.0, 0.0)]);
        assert!(matches!(rescale_to_unit_radius(&zero), Err(Error::ZeroRadius)));
    }
}
