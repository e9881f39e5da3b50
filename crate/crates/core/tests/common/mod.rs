//! Independent oracles and generators shared by the integration suites.
#![allow(dead_code)]

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use valuscope::DailySeries;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn cumsum(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Fractional Gaussian noise by circulant embedding of its exact
/// autocovariance (Davies–Harte); the cumulative sum is fBm.
pub fn fbm(hurst: f64, n: usize, seed: u64) -> Vec<f64> {
    let gamma = |k: f64| {
        0.5 * ((k + 1.0).abs().powf(2.0 * hurst) - 2.0 * k.abs().powf(2.0 * hurst)
            + (k - 1.0).abs().powf(2.0 * hurst))
    };
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|j| {
            let k = if j <= n { j } else { m - j };
            Complex::new(gamma(k as f64), 0.0)
        })
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut row);
    let eig: Vec<f64> = row.iter().map(|c| c.re.max(0.0)).collect();

    let mut r = rng(seed);
    let mut w: Vec<Complex<f64>> = (0..m)
        .map(|j| {
            let (a, b): (f64, f64) = (r.sample(StandardNormal), r.sample(StandardNormal));
            let scale = (eig[j] / (2.0 * m as f64)).sqrt();
            Complex::new(a * scale, b * scale)
        })
        .collect();
    planner.plan_fft_forward(m).process(&mut w);
    // real and imaginary parts are independent fGn samples; use the real part
    let noise: Vec<f64> = w[..n].iter().map(|c| c.re * 2f64.sqrt()).collect();
    cumsum(&noise)
}

pub fn logistic_orbit(n: usize, x0: f64) -> Vec<f64> {
    let mut x = x0;
    for _ in 0..1000 {
        x = 4.0 * x * (1.0 - x);
    }
    (0..n)
        .map(|_| {
            x = 4.0 * x * (1.0 - x);
            x
        })
        .collect()
}

/// Orbit average of `ln |f'(x)|` for the r = 4 logistic map.
pub fn logistic_exponent_oracle(orbit: &[f64]) -> f64 {
    orbit.iter().map(|x| (4.0 - 8.0 * x).abs().ln()).sum::<f64>() / orbit.len() as f64
}

pub const HENON_A: f64 = 1.4;
pub const HENON_B: f64 = 0.3;

/// `x` coordinate of the Hénon map after a transient.
pub fn henon_orbit(n: usize) -> Vec<(f64, f64)> {
    let (mut x, mut y) = (0.1, 0.1);
    for _ in 0..1000 {
        (x, y) = (1.0 - HENON_A * x * x + y, HENON_B * x);
    }
    (0..n)
        .map(|_| {
            (x, y) = (1.0 - HENON_A * x * x + y, HENON_B * x);
            (x, y)
        })
        .collect()
}

/// Exact-Jacobian spectrum of the Hénon map along an orbit, with
/// Gram–Schmidt re-orthonormalization after every step.
pub fn henon_spectrum_oracle(orbit: &[(f64, f64)]) -> [f64; 2] {
    let (mut q1, mut q2) = ([1.0, 0.0], [0.0, 1.0]);
    let (mut s1, mut s2) = (0.0, 0.0);
    for &(x, _) in orbit {
        let jac = |v: [f64; 2]| [-2.0 * HENON_A * x * v[0] + v[1], HENON_B * v[0]];
        let (a, b) = (jac(q1), jac(q2));
        let n1 = (a[0] * a[0] + a[1] * a[1]).sqrt();
        q1 = [a[0] / n1, a[1] / n1];
        let dot = b[0] * q1[0] + b[1] * q1[1];
        let c = [b[0] - dot * q1[0], b[1] - dot * q1[1]];
        let n2 = (c[0] * c[0] + c[1] * c[1]).sqrt();
        q2 = [c[0] / n2, c[1] / n2];
        s1 += n1.ln();
        s2 += n2.ln();
    }
    let n = orbit.len() as f64;
    [s1 / n, s2 / n]
}

pub fn dates(n: usize) -> Vec<NaiveDate> {
    let start = NaiveDate::from_ymd_opt(1990, 1, 1).unwrap();
    (0..n).map(|i| start + chrono::Days::new(i as u64)).collect()
}

/// Geometric random walk with iid Gaussian log-returns.
pub fn gaussian_prices(n: usize, sigma: f64, seed: u64) -> DailySeries {
    let mut r = rng(seed);
    let steps = gaussian(&mut r, n);
    let mut level = 1000.0f64;
    let close = steps
        .iter()
        .map(|z| {
            level *= (sigma * z).exp();
            level
        })
        .collect();
    DailySeries::from_closes(dates(n), close).unwrap()
}

/// `x` iid fair coin, `y_{t+1} = x_t`.
pub fn coupled_coins(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut r = rng(seed);
    let x: Vec<f64> = (0..n).map(|_| if r.random::<bool>() { 1.0 } else { 0.0 }).collect();
    let mut y = vec![if r.random::<bool>() { 1.0 } else { 0.0 }];
    y.extend_from_slice(&x[..n - 1]);
    (x, y)
}

pub fn coins(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| if r.random::<bool>() { 1.0 } else { 0.0 }).collect()
}
