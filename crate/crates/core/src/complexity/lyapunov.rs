//! Lyapunov spectrum of a scalar series from its delay embedding.
//!
//! Local tangent maps are fitted by least squares to the displacements of
//! nearest neighbours one step ahead, then chained along the trajectory with
//! repeated QR re-orthonormalization. The logs of the diagonal of R average
//! to the exponents.

use rayon::prelude::*;
use serde::Serialize;

use super::neighbors::KdTree;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LyapunovParams {
    pub dim: usize,
    pub delay: usize,
    /// Neighbours per local fit; `2·dim + 2` when `None`.
    pub neighbors: Option<usize>,
    /// Temporal exclusion half-width; `delay·dim` when `None`.
    pub theiler: Option<usize>,
}

impl LyapunovParams {
    pub fn new(dim: usize, delay: usize) -> Self {
        Self { dim, delay, neighbors: None, theiler: None }
    }

    pub fn neighbor_count(&self) -> usize {
        self.neighbors.unwrap_or(2 * self.dim + 2)
    }

    pub fn theiler_window(&self) -> usize {
        self.theiler.unwrap_or(self.delay * self.dim)
    }
}

impl Default for LyapunovParams {
    fn default() -> Self {
        Self::new(5, 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovReport {
    /// Exponents per time step in nats, largest first.
    pub spectrum: Vec<f64>,
    pub dim: usize,
    pub delay: usize,
    pub neighbors: usize,
    pub theiler: usize,
    /// Tangent-map steps that entered the average.
    pub steps: usize,
    pub ks_entropy: f64,
    pub ky_dimension: f64,
    pub largest: f64,
}

impl LyapunovReport {
    /// Derived quantities for an already known spectrum.
    pub fn from_spectrum(mut spectrum: Vec<f64>, params: LyapunovParams, steps: usize) -> Self {
        spectrum.sort_by(|a, b| b.total_cmp(a));
        Self {
            ks_entropy: ks_entropy(&spectrum),
            ky_dimension: kaplan_yorke_dimension(&spectrum),
            largest: spectrum.first().copied().unwrap_or(f64::NAN),
            dim: params.dim,
            delay: params.delay,
            neighbors: params.neighbor_count(),
            theiler: params.theiler_window(),
            steps,
            spectrum,
        }
    }
}

/// Sum of the positive exponents.
pub fn ks_entropy(spectrum: &[f64]) -> f64 {
    spectrum.iter().filter(|l| **l > 0.0).sum()
}

/// `j + S_j / |λ_{j+1}|` with `j` the last index whose partial sum `S_j` is
/// nonnegative. 0 when the first exponent is negative; the full dimension
/// when no partial sum goes negative. `spectrum` must be sorted descending.
pub fn kaplan_yorke_dimension(spectrum: &[f64]) -> f64 {
    match spectrum.first() {
        None => return 0.0,
        Some(l) if *l < 0.0 => return 0.0,
        _ => {}
    }
    let mut partial = 0.0;
    for (j, &l) in spectrum.iter().enumerate() {
        if partial + l < 0.0 {
            return j as f64 + partial / l.abs();
        }
        partial += l;
    }
    spectrum.len() as f64
}

/// Rows `t` of the delay embedding: `x[t], x[t+τ], …, x[t+(m-1)τ]`.
pub fn delay_embed(x: &[f64], dim: usize, delay: usize) -> Vec<f64> {
    let span = (dim - 1) * delay;
    if x.len() <= span {
        return Vec::new();
    }
    let rows = x.len() - span;
    let mut out = Vec::with_capacity(rows * dim);
    for t in 0..rows {
        out.extend((0..dim).map(|k| x[t + k * delay]));
    }
    out
}

pub fn lyapunov_spectrum(x: &[f64], dim: usize, delay: usize) -> Result<LyapunovReport> {
    lyapunov_spectrum_with(x, LyapunovParams::new(dim, delay))
}

pub fn lyapunov_spectrum_with(x: &[f64], params: LyapunovParams) -> Result<LyapunovReport> {
    let m = params.dim;
    if m == 0 || params.delay == 0 {
        return Err(Error::InvalidParameter("embedding dimension and delay must be positive".into()));
    }
    if x.len() < 50 * m {
        return Err(Error::SeriesTooShort { len: x.len(), needed: 50 * m });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("series must be finite".into()));
    }
    if x.iter().all(|v| *v == x[0]) {
        return Err(Error::DegenerateSeries);
    }
    let k = params.neighbor_count();
    if k < m {
        return Err(Error::InvalidParameter(format!("{k} neighbours cannot fit a {m}-D map")));
    }
    let window = params.theiler_window();
    let emb = delay_embed(x, m, params.delay);
    let rows = emb.len() / m;
    // Only rows with a successor are usable as neighbours or references.
    let usable = rows - 1;
    let tree = KdTree::new(&emb, m, usable);
    let row = |t: usize| &emb[t * m..(t + 1) * m];

    let jacobians: Vec<Option<Vec<f64>>> = (0..usable)
        .into_par_iter()
        .map(|t| {
            let nb = tree.nearest(row(t), k, |j| j.abs_diff(t) > window);
            if nb.len() < m {
                return None;
            }
            let dx: Vec<f64> = nb
                .iter()
                .flat_map(|&(j, _)| row(j).iter().zip(row(t)).map(|(a, b)| a - b))
                .collect();
            let dy: Vec<f64> = nb
                .iter()
                .flat_map(|&(j, _)| row(j + 1).iter().zip(row(t + 1)).map(|(a, b)| a - b))
                .collect();
            fit_tangent_map(&dx, &dy, m)
        })
        .collect();

    let mut q = identity(m);
    let mut sums = vec![0.0; m];
    let mut steps = 0usize;
    let mut buf = vec![0.0; m * m];
    for jac in jacobians.iter().flatten() {
        matmul(jac, &q, &mut buf, m);
        if let Some(diag) = qr_in_place(&mut buf, m) {
            for (s, r) in sums.iter_mut().zip(&diag) {
                *s += r.ln();
            }
            std::mem::swap(&mut q, &mut buf);
            steps += 1;
        }
    }
    if steps == 0 || steps * 2 < usable {
        return Err(Error::InsufficientNeighbors(format!(
            "only {steps} of {usable} reference points gave a usable tangent map"
        )));
    }
    let spectrum = sums.iter().map(|s| s / steps as f64).collect();
    Ok(LyapunovReport::from_spectrum(spectrum, params, steps))
}

/// Least-squares `J` (row-major `m×m`) with `dy_i ≈ J dx_i` for each
/// neighbour displacement pair.
fn fit_tangent_map(dx: &[f64], dy: &[f64], m: usize) -> Option<Vec<f64>> {
    let pairs = dx.len() / m;
    // Normal equations: (Σ dx dxᵀ) Jᵀ = Σ dx dyᵀ
    let mut a = vec![0.0; m * m];
    let mut b = vec![0.0; m * m];
    for p in 0..pairs {
        let (u, v) = (&dx[p * m..(p + 1) * m], &dy[p * m..(p + 1) * m]);
        for i in 0..m {
            for j in 0..m {
                a[i * m + j] += u[i] * u[j];
                b[i * m + j] += u[i] * v[j];
            }
        }
    }
    let jt = solve(&mut a, &mut b, m)?;
    let mut jac = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            jac[i * m + j] = jt[j * m + i];
        }
    }
    Some(jac)
}

/// Solves `A X = B` for square `A` by Gaussian elimination with partial
/// pivoting. Returns `None` when `A` is numerically singular.
fn solve(a: &mut [f64], b: &mut [f64], m: usize) -> Option<Vec<f64>> {
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i * m + col].abs().total_cmp(&a[j * m + col].abs()))?;
        if a[pivot * m + col].abs() <= scale * 1e-13 {
            return None;
        }
        if pivot != col {
            for j in 0..m {
                a.swap(pivot * m + j, col * m + j);
                b.swap(pivot * m + j, col * m + j);
            }
        }
        let d = a[col * m + col];
        for i in col + 1..m {
            let f = a[i * m + col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..m {
                a[i * m + j] -= f * a[col * m + j];
            }
            for j in 0..m {
                b[i * m + j] -= f * b[col * m + j];
            }
        }
    }
    let mut x = vec![0.0; m * m];
    for i in (0..m).rev() {
        for j in 0..m {
            let mut s = b[i * m + j];
            for k in i + 1..m {
                s -= a[i * m + k] * x[k * m + j];
            }
            x[i * m + j] = s / a[i * m + i];
        }
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn identity(m: usize) -> Vec<f64> {
    let mut q = vec![0.0; m * m];
    for i in 0..m {
        q[i * m + i] = 1.0;
    }
    q
}

fn matmul(a: &[f64], b: &[f64], out: &mut [f64], m: usize) {
    for i in 0..m {
        for j in 0..m {
            out[i * m + j] = (0..m).map(|k| a[i * m + k] * b[k * m + j]).sum();
        }
    }
}

/// Modified Gram–Schmidt on the columns of `a`, leaving Q in `a` and
/// returning the diagonal of R. `None` if a column collapses.
fn qr_in_place(a: &mut [f64], m: usize) -> Option<Vec<f64>> {
    let mut diag = vec![0.0; m];
    for c in 0..m {
        for p in 0..c {
            let dot: f64 = (0..m).map(|i| a[i * m + p] * a[i * m + c]).sum();
            for i in 0..m {
                a[i * m + c] -= dot * a[i * m + p];
            }
        }
        let norm = (0..m).map(|i| a[i * m + c].powi(2)).sum::<f64>().sqrt();
        if !(norm > 1e-300) || !norm.is_finite() {
            return None;
        }
        for i in 0..m {
            a[i * m + c] /= norm;
        }
        diag[c] = norm;
    }
    Some(diag)
}
