//! Hermitian eigendecomposition: Householder tridiagonalization, a diagonal
//! phase similarity that makes the tridiagonal real, then implicit QL with
//! Wilkinson shifts. Eigenvectors are accumulated through every stage so the
//! returned basis is orthonormal to rounding.

use super::eigen::unit_phase;
use super::{ComplexMatrix, Complex64};
use crate::error::{Error, Result};

/// QL iterations allowed per eigenvalue.
const QL_ITERATIONS_PER_EIGENVALUE: usize = 30;

/// Relative gap below which neighbouring eigenvalues count as degenerate and
/// their eigenvectors are re-orthonormalized.
const DEGENERACY_GAP: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending real eigenvalues.
    pub values: Vec<f64>,
    /// Column `j` is the unit eigenvector for `values[j]`.
    pub vectors: ComplexMatrix,
}

/// Eigenvalues and orthonormal eigenvectors of a Hermitian matrix. Only the
/// lower triangle is read.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let (values, columns) = solve(a, true)?;
    let n = values.len();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| columns[j][i]);
    Ok(HermitianEigen { values, vectors })
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(solve(a, false)?.0)
}

fn solve(a: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
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
    let mut work = a.as_slice().to_vec();
    // Mirror the lower triangle so the reduction sees an exactly Hermitian input.
    for i in 0..n {
        work[i * n + i] = Complex64::new(work[i * n + i].re, 0.0);
        for j in 0..i {
            work[j * n + i] = work[i * n + j].conj();
        }
    }
    let (diag, sub, q) = tridiagonalize(&mut work, n, want_vectors);

    // D† T D with D = diag(phases) turns the off-diagonal into |sub|.
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        phases[k + 1] = phases[k] * unit_phase(sub[k]);
    }
    let mut off: Vec<f64> = sub.iter().map(|z| z.norm()).collect();
    off.push(0.0);
    let mut d = diag;

    // Rows of `columns` are the current eigenvector estimates (columns of Q·D).
    let mut columns: Vec<Vec<Complex64>> = if want_vectors {
        (0..n)
            .map(|j| (0..n).map(|i| q[i * n + j] * phases[j]).collect())
            .collect()
    } else {
        Vec::new()
    };

    tridiagonal_ql(&mut d, &mut off, &mut columns)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]).then(x.cmp(&y)));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut columns: Vec<Vec<Complex64>> = if want_vectors {
        let mut taken: Vec<Option<Vec<Complex64>>> = columns.into_iter().map(Some).collect();
        order.iter().map(|&i| taken[i].take().expect("permutation")).collect()
    } else {
        Vec::new()
    };
    if want_vectors {
        reorthonormalize_clusters(&values, &mut columns);
    }
    Ok((values, columns))
}

/// Reduces the Hermitian `work` to tridiagonal form. Returns the real
/// diagonal, the complex subdiagonal `T[k+1][k]` and, when requested, the
/// row-major unitary `Q` with `A = Q T Q†`.
fn tridiagonalize(work: &mut [Complex64], n: usize, want_q: bool) -> (Vec<f64>, Vec<Complex64>, Vec<Complex64>) {
    let zero = Complex64::new(0.0, 0.0);
    let mut q = if want_q {
        let mut q = vec![zero; n * n];
        for i in 0..n {
            q[i * n + i] = Complex64::new(1.0, 0.0);
        }
        q
    } else {
        Vec::new()
    };
    let mut sub = vec![zero; n.saturating_sub(1)];
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];

    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let x0 = work[(k + 1) * n + k];
        let tail: f64 = (k + 2..n).map(|i| work[i * n + k].norm_sqr()).sum();
        if tail == 0.0 {
            sub[k] = x0;
            continue;
        }
        let norm = (x0.norm_sqr() + tail).sqrt();
        let alpha = -unit_phase(x0) * norm;
        sub[k] = alpha;

        let v = &mut v[..m];
        for (l, vl) in v.iter_mut().enumerate() {
            *vl = work[(k + 1 + l) * n + k];
        }
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= vnorm);

        // p = B v on the trailing block B = work[k+1.., k+1..].
        let p = &mut p[..m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &work[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            *pi = row.iter().zip(v.iter()).map(|(&b, &x)| b * x).sum();
        }
        let kappa: Complex64 = v.iter().zip(p.iter()).map(|(x, y)| x.conj() * y).sum();
        let kappa = kappa.re;
        // w = p - (v† p) v, stored in p; B ← B - 2 v w† - 2 w v†.
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi -= vi * kappa;
        }
        for i in 0..m {
            let (vi, wi) = (v[i] * 2.0, p[i] * 2.0);
            let row = &mut work[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            for ((b, vj), wj) in row.iter_mut().zip(v.iter()).zip(p.iter()) {
                *b -= vi * wj.conj() + wi * vj.conj();
            }
        }

        if want_q {
            for r in 0..n {
                let row = &mut q[r * n + k + 1..(r + 1) * n];
                let t: Complex64 = row.iter().zip(v.iter()).map(|(&a, &b)| a * b).sum();
                let t = t * 2.0;
                for (x, vl) in row.iter_mut().zip(v.iter()) {
                    *x -= t * vl.conj();
                }
            }
        }
    }
    let diag = (0..n).map(|i| work[i * n + i].re).collect();
    (diag, sub, q)
}

/// Implicit QL on a real symmetric tridiagonal matrix (`d` diagonal, `e[i]`
/// couples `i` and `i + 1`, `e[n-1] = 0`). Rotations are applied to the rows
/// of `vectors` when it is non-empty.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], vectors: &mut [Vec<Complex64>]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > QL_ITERATIONS_PER_EIGENVALUE {
                return Err(Error::Convergence {
                    sweeps: iterations - 1,
                    source_desc: format!("Hermitian tridiagonal QL at eigenvalue {l}"),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if !vectors.is_empty() {
                    let (head, tail) = vectors.split_at_mut(i + 1);
                    let (zi, zi1) = (&mut head[i], &mut tail[0]);
                    for (x, y) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let f = *y;
                        *y = *x * s + f * c;
                        *x = *x * c - f * s;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Modified Gram–Schmidt inside clusters of (numerically) equal eigenvalues.
fn reorthonormalize_clusters(values: &[f64], columns: &mut [Vec<Complex64>]) {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] <= DEGENERACY_GAP * scale {
            end += 1;
        }
        if end - start > 1 {
            for j in start..end {
                let (done, rest) = columns.split_at_mut(j);
                let col = &mut rest[0];
                for prev in &done[start..j] {
                    let proj: Complex64 = prev.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
                    for (x, p) in col.iter_mut().zip(prev.iter()) {
                        *x -= proj * p;
                    }
                }
                let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                col.iter_mut().for_each(|z| *z /= norm);
            }
        }
        start = end;
    }
}
