//! General complex eigenvalues: Householder reduction to upper Hessenberg form
//! followed by explicitly shifted QR sweeps with Givens rotations.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, Complex64};
use crate::ensembles::EnsembleKind;
use crate::error::{Error, Result};

/// QR sweeps allowed per unit of matrix dimension.
const SWEEPS_PER_DIMENSION: usize = 30;

/// Where a spectrum came from. Carried into error messages so a failing
/// member can be replayed exactly.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: Option<EnsembleKind>,
    pub member_index: Option<usize>,
    pub chunk_index: Option<usize>,
    pub seed: Option<u64>,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(kind) = self.kind {
            parts.push(format!("kind={kind}"));
        }
        if let Some(m) = self.member_index {
            parts.push(format!("member={m}"));
        }
        if let Some(c) = self.chunk_index {
            parts.push(format!("chunk={c}"));
        }
        if let Some(s) = self.seed {
            parts.push(format!("chunk_seed={s}"));
        }
        if parts.is_empty() {
            f.write_str("unlabelled matrix")
        } else {
            f.write_str(&parts.join(", "))
        }
    }
}

/// Eigenvalues of one matrix, in canonical order: ascending principal phase,
/// ties broken by ascending modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    pub size_n: usize,
    pub values: Vec<Complex64>,
    pub source: Provenance,
}

impl EigenSpectrum {
    /// Wraps eigenvalues, putting them into canonical order.
    pub fn from_values(mut values: Vec<Complex64>, source: Provenance) -> Self {
        sort_canonical(&mut values);
        Self {
            size_n: values.len(),
            values,
            source,
        }
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `| |λ| - 1 |` over the spectrum.
    pub fn max_unit_modulus_deviation(&self) -> f64 {
        self.values.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn phases(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|&z| principal_phase(z))
    }
}

/// Argument of `z` in `[-π, π)`; `+π` maps to `-π`.
pub fn principal_phase(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a >= PI {
        -PI
    } else {
        a
    }
}

fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    principal_phase(*a)
        .total_cmp(&principal_phase(*b))
        .then_with(|| a.norm().total_cmp(&b.norm()))
        .then_with(|| a.re.total_cmp(&b.re))
        .then_with(|| a.im.total_cmp(&b.im))
}

pub(crate) fn sort_canonical(values: &mut [Complex64]) {
    values.sort_by(canonical_cmp);
}

/// All eigenvalues of a square matrix, with multiplicity.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<EigenSpectrum> {
    eigenvalues_with_source(a, Provenance::default())
}

pub fn eigenvalues_with_source(a: &ComplexMatrix, source: Provenance) -> Result<EigenSpectrum> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.n_rows(),
            cols: a.n_cols(),
        });
    }
    if let Some((row, col)) = a.first_non_finite() {
        return Err(Error::NonFinite { row, col });
    }
    let n = a.n_rows();
    let mut h = a.as_slice().to_vec();
    reduce_to_hessenberg(&mut h, n);
    let values = match hessenberg_qr(&mut h, n) {
        Ok(values) => values,
        Err(sweeps) => {
            return Err(Error::Convergence {
                sweeps,
                source_desc: source.to_string(),
            })
        }
    };
    Ok(EigenSpectrum::from_values(values, source))
}

#[inline]
fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Unit-modulus phase of `z`, or 1 for zero.
#[inline]
pub(crate) fn unit_phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z / r
    }
}

/// In-place Householder similarity reduction of a row-major `n × n` matrix to
/// upper Hessenberg form.
fn reduce_to_hessenberg(a: &mut [Complex64], n: usize) {
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut s = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let m = n - k - 1;
        let x0 = a[(k + 1) * n + k];
        let tail: f64 = (k + 2..n).map(|i| a[i * n + k].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let norm = (x0.norm_sqr() + tail).sqrt();
        let alpha = -unit_phase(x0) * norm;
        let v = &mut v[..m];
        for (l, vl) in v.iter_mut().enumerate() {
            *vl = a[(k + 1 + l) * n + k];
        }
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // Left: rows k+1.., columns k+1.. (column k is set explicitly below).
        let s = &mut s[k + 1..n];
        s.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (l, vl) in v.iter().enumerate() {
            let row = &a[(k + 1 + l) * n + k + 1..(k + 2 + l) * n];
            let cv = vl.conj();
            for (sj, &aij) in s.iter_mut().zip(row) {
                *sj += cv * aij;
            }
        }
        for (l, vl) in v.iter().enumerate() {
            let scale = *vl * tau;
            let row = &mut a[(k + 1 + l) * n + k + 1..(k + 2 + l) * n];
            for (aij, &sj) in row.iter_mut().zip(s.iter()) {
                *aij -= scale * sj;
            }
        }
        a[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            a[i * n + k] = Complex64::new(0.0, 0.0);
        }

        // Right: all rows, columns k+1..
        for i in 0..n {
            let row = &mut a[i * n + k + 1..(i + 1) * n];
            let dot: Complex64 = row.iter().zip(v.iter()).map(|(&x, &y)| x * y).sum();
            let scale = dot * tau;
            for (aij, vl) in row.iter_mut().zip(v.iter()) {
                *aij -= scale * vl.conj();
            }
        }
    }
}

/// Rotation `[c s; -conj(s) c]` mapping `(a, b)` to `(r, 0)`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    if b == Complex64::new(0.0, 0.0) {
        return (1.0, Complex64::new(0.0, 0.0), a);
    }
    let abs_a = a.norm();
    if abs_a == 0.0 {
        let abs_b = b.norm();
        return (0.0, b.conj() / abs_b, Complex64::new(abs_b, 0.0));
    }
    let r = abs_a.hypot(b.norm());
    let phase = a / abs_a;
    (abs_a / r, phase * b.conj() / r, phase * r)
}

/// Both eigenvalues of `[[a, b], [c, d]]`, the first one nearer to `d`.
fn eig2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let scale = abs1(a) + abs1(b) + abs1(c) + abs1(d);
    if scale == 0.0 {
        return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    }
    let (a, b, c, d) = (a / scale, b / scale, c / scale, d / scale);
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let (big, small_candidate) = if (half_tr + disc).norm() >= (half_tr - disc).norm() {
        (half_tr + disc, half_tr - disc)
    } else {
        (half_tr - disc, half_tr + disc)
    };
    // The smaller root via the determinant avoids cancellation.
    let det = a * d - b * c;
    let small = if big.norm() > 0.0 { det / big } else { small_candidate };
    let (l1, l2) = if (big - d).norm() <= (small - d).norm() {
        (big, small)
    } else {
        (small, big)
    };
    (l1 * scale, l2 * scale)
}

/// Eigenvalues of a row-major upper Hessenberg matrix. On failure returns the
/// number of sweeps spent.
fn hessenberg_qr(h: &mut [Complex64], n: usize) -> std::result::Result<Vec<Complex64>, usize> {
    let zero = Complex64::new(0.0, 0.0);
    let mut eig = vec![zero; n];
    if n == 0 {
        return Ok(eig);
    }
    let eps = f64::EPSILON;
    let h_norm = h.iter().map(|&z| abs1(z)).fold(0.0, f64::max);
    let cap = SWEEPS_PER_DIMENSION * n;
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    let mut hi = n - 1;

    loop {
        if hi == 0 {
            eig[0] = h[0];
            break;
        }
        // Locate the top of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let mut s = abs1(h[(lo - 1) * n + lo - 1]) + abs1(h[lo * n + lo]);
            if s == 0.0 {
                s = h_norm;
            }
            if abs1(h[lo * n + lo - 1]) <= eps * s {
                h[lo * n + lo - 1] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[hi * n + hi];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2x2(
                h[lo * n + lo],
                h[lo * n + hi],
                h[hi * n + lo],
                h[hi * n + hi],
            );
            eig[hi] = l1;
            eig[lo] = l2;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            since_deflation = 0;
            continue;
        }

        sweeps += 1;
        if sweeps > cap {
            return Err(sweeps - 1);
        }
        since_deflation += 1;

        let shift = if since_deflation % 20 == 0 {
            h[lo * n + lo] + abs1(h[(lo + 1) * n + lo]) * 0.75
        } else if since_deflation % 10 == 0 {
            h[hi * n + hi] + abs1(h[hi * n + hi - 1]) * 0.75
        } else {
            eig2x2(
                h[(hi - 1) * n + hi - 1],
                h[(hi - 1) * n + hi],
                h[hi * n + hi - 1],
                h[hi * n + hi],
            )
            .0
        };

        for i in lo..=hi {
            h[i * n + i] -= shift;
        }
        rotations.clear();
        for k in lo..hi {
            let (c, s, r) = givens(h[k * n + k], h[(k + 1) * n + k]);
            h[k * n + k] = r;
            h[(k + 1) * n + k] = zero;
            let (upper, lower) = h.split_at_mut((k + 1) * n);
            let row_k = &mut upper[k * n + k + 1..k * n + hi + 1];
            let row_k1 = &mut lower[k + 1..hi + 1];
            let sc = s.conj();
            for (x, y) in row_k.iter_mut().zip(row_k1.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a * c + s * b;
                *y = b * c - sc * a;
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            let sc = s.conj();
            for i in lo..=(k + 1).min(hi) {
                let (a, b) = (h[i * n + k], h[i * n + k + 1]);
                h[i * n + k] = a * c + sc * b;
                h[i * n + k + 1] = b * c - s * a;
            }
        }
        for i in lo..=hi {
            h[i * n + i] += shift;
        }
    }
    Ok(eig)
}
