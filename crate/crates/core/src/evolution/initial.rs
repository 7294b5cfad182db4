use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spectral::{GridSpec, RealField};
use crate::Scalar;

/// Small random noise on modes `1..=N/8`: `u = Σ (0.1/m) cos(ξ_m x + φ_m)`
/// with phases drawn from `seed`.
pub fn random_initial<T: Scalar>(grid: &GridSpec<T>, seed: u64) -> RealField<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = grid.n() / 8;
    let terms: Vec<(f64, f64, f64)> = (1..=top)
        .map(|m| {
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            let xi = grid.base_wavenumber().as_f64() * m as f64;
            (0.1 / m as f64, xi, phase)
        })
        .collect();
    RealField::from_fn(grid, |x| {
        let x = x.as_f64();
        let v: f64 = terms.iter().map(|&(a, xi, ph)| a * (xi * x + ph).cos()).sum();
        T::lit(v)
    })
}
