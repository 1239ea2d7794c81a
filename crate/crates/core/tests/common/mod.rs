//! Independent oracles shared by the integration suites. Nothing here calls
//! into the solver or analysis code it is used to check.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

/// Prints a result line that survives libtest output capture.
pub fn report(line: &str) {
    let mut err = std::io::stderr();
    let _ = writeln!(err, "{line}");
}

pub fn dense(a: &spectral_ergodicity::linalg::ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..a.n_rows()).map(|i| a.row(i).to_vec()).collect()
}

fn naive_product(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); m]; n];
    for i in 0..n {
        for j in 0..m {
            for k in 0..b.len() {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Characteristic polynomial coefficients `c[0..=n]` (monic, `c[n] = 1`) by
/// the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(a: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = a.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut c = vec![zero; n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut m = vec![vec![zero; n]; n];
    for k in 1..=n {
        let mut next = naive_product(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[n - k + 1];
        }
        m = next;
        let am = naive_product(a, &m);
        let tr: Complex64 = (0..n).map(|i| am[i][i]).sum();
        c[n - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * z + ck)
}

/// All roots of a monic polynomial by Weierstrass (Durand–Kerner) iteration,
/// polished with Newton steps.
pub fn polynomial_roots(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = horner(c, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    let derivative: Vec<Complex64> = c.iter().enumerate().skip(1).map(|(k, &ck)| ck * k as f64).collect();
    for root in &mut z {
        for _ in 0..3 {
            let d = horner(&derivative, *root);
            if d.norm() > 0.0 {
                *root -= horner(c, *root) / d;
            }
        }
    }
    z
}

/// Greedy nearest matching of two multisets; returns the largest matched
/// distance, or `None` when sizes differ.
pub fn multiset_distance(got: &[Complex64], want: &[Complex64]) -> Option<f64> {
    if got.len() != want.len() {
        return None;
    }
    let mut pool = want.to_vec();
    let mut worst = 0.0f64;
    for g in got {
        let (idx, d) = pool
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (w - g).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        worst = worst.max(d);
        pool.swap_remove(idx);
    }
    Some(worst)
}

pub fn lu_determinant(a: &[Vec<Complex64>]) -> Complex64 {
    let n = a.len();
    nalgebra::DMatrix::from_fn(n, n, |i, j| a[i][j]).determinant()
}

pub fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    let m = nalgebra::DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let mut s: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(f64::total_cmp);
    s
}

pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Greedily pairs every eigenvalue with its nearest unpaired neighbour in
/// phase. Returns the largest intra-pair distance, or `None` if the count is
/// odd.
pub fn greedy_phase_pairing(values: &[Complex64]) -> Option<f64> {
    if values.len() % 2 != 0 {
        return None;
    }
    let mut phases: Vec<f64> = values.iter().map(|z| z.im.atan2(z.re)).collect();
    let mut worst = 0.0f64;
    while let Some(p) = phases.pop() {
        let (idx, d) = phases
            .iter()
            .enumerate()
            .map(|(i, &q)| (i, circular_distance(p, q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        worst = worst.max(d);
        phases.swap_remove(idx);
    }
    Some(worst)
}

/// Counts of `phases` in `k` equal bins over `[-π, π)`, found by scanning the
/// bin edges.
pub fn rebin_by_edges(phases: &[f64], k: usize) -> Vec<usize> {
    let width = 2.0 * PI / k as f64;
    let edges: Vec<f64> = (0..=k).map(|i| if i == k { PI } else { -PI + i as f64 * width }).collect();
    let mut counts = vec![0; k];
    for &p in phases {
        let p = if p >= PI { -PI } else { p };
        let bin = (0..k).find(|&i| p >= edges[i] && p < edges[i + 1]).expect("phase inside the grid");
        counts[bin] += 1;
    }
    counts
}

pub fn chi_square_uniform(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// `(1/(M·N)) Σ_j (ρ_j(k) − ρ̄(k))²` with explicit loops.
pub fn omega_by_loops(densities: &[Vec<f64>], n: usize) -> Vec<f64> {
    let m = densities.len();
    let k = densities[0].len();
    let mut out = vec![0.0; k];
    for bin in 0..k {
        let mut mean = 0.0;
        for d in densities {
            mean += d[bin];
        }
        mean /= m as f64;
        let mut acc = 0.0;
        for d in densities {
            acc += (d[bin] - mean).powi(2);
        }
        out[bin] = acc / (m as f64 * n as f64);
    }
    out
}

pub fn kl_by_terms(a: &[f64], b: &[f64], eps: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..a.len() {
        let x = if a[i] < eps { eps } else { a[i] };
        let y = if b[i] < eps { eps } else { b[i] };
        total += x * (x.ln() - y.ln()) / std::f64::consts::LN_2;
    }
    total
}
