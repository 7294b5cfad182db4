use std::time::{Duration, Instant};

use ksbesov_core::evolution::{integrate, random_initial, EquationSpec, RunResult, StepperConfig};
use ksbesov_core::Grid64;

use crate::config::SimConfig;
use crate::error::Result;

/// A recorded Kuramoto-Sivashinsky run.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: SimConfig,
    /// Frames of the averaging window only, starting at `t = 0` after burn-in.
    pub run: RunResult<f64>,
    pub wall_time: Duration,
}

/// Integrates from seeded noise through `t_burn`, then records `t_avg`.
pub fn simulate(cfg: &SimConfig) -> Result<Simulation> {
    cfg.validate()?;
    let start = Instant::now();
    let grid = Grid64::new(cfg.length, cfg.n)?;
    let spec = EquationSpec::kuramoto_sivashinsky();
    let mut u0 = random_initial(&grid, cfg.seed);
    if cfg.t_burn > 0.0 {
        let steps = (cfg.t_burn / cfg.dt).ceil() as usize;
        let burn = integrate(&spec, &u0, &StepperConfig::etdrk4(cfg.dt, steps.max(1)), cfg.t_burn)?;
        u0 = burn.trajectory.frames().last().expect("burn-in records frames").clone();
    }
    let run = integrate(&spec, &u0, &StepperConfig::etdrk4(cfg.dt, cfg.record_every()), cfg.t_avg)?;
    Ok(Simulation {
        config: cfg.clone(),
        run,
        wall_time: start.elapsed(),
    })
}
