#![allow(dead_code)]

use ksbesov_core::{Grid64, Field64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn grid(l: f64, n: usize) -> Grid64 {
    Grid64::new(l, n).unwrap()
}

/// Random real trigonometric polynomial with modes `1..=kmax` and the given mean.
pub fn random_field(g: &Grid64, kmax: usize, mean: f64, seed: u64) -> Field64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(f64, f64)> = (1..=kmax)
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let l = g.length();
    Field64::from_fn(g, |x| {
        mean + coeffs
            .iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let k = 2.0 * PI * (i + 1) as f64 / l;
                a * (k * x).cos() + b * (k * x).sin()
            })
            .sum::<f64>()
    })
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}
