use ksbesov_core::besov::{HGrid, Moment, StructureEngine};
use ksbesov_core::Trajectory64;

/// `(LT)^{-1} ∬ |D^h u|³ dx dt / h` at each offset.
pub fn structure_function(traj: &Trajectory64, hs: &[f64]) -> Vec<(f64, f64)> {
    let engine = StructureEngine::new(traj);
    let scale = 1.0 / (traj.grid().length() * traj.duration());
    engine
        .moments_many(hs, &[Moment::Power(3.0)])
        .into_iter()
        .zip(hs)
        .map(|(m, &h)| (h, m[0] * scale / h))
        .collect()
}

/// Offsets of the default grid up to one period.
pub fn default_offsets(traj: &Trajectory64) -> Vec<f64> {
    let l = traj.grid().length();
    HGrid::for_grid(traj.grid())
        .offsets()
        .iter()
        .copied()
        .filter(|&h| h <= l)
        .collect()
}
