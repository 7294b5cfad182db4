use std::io::Write;
use std::path::Path;
use std::time::Duration;

use ksbesov_core::besov::{
    besov_norms_fd, rescale_factor, rescaled_norm, BesovParams, HGrid, LPFamily, Method, NormEstimate,
};
use ksbesov_core::Trajectory64;
use rayon::prelude::*;

use crate::config::{worker_count, SweepConfig};
use crate::error::{io_err, HarnessError, Result};
use crate::fit::{fit_log_exponent, LogFit};
use crate::run::simulate;

/// The rescaled norms a sweep reports, in column order.
pub fn sweep_params() -> [BesovParams; 4] {
    [
        BesovParams { s: 1.0 / 3.0, p: 3.0, r: f64::INFINITY },
        BesovParams { s: 1.0 / 3.0, p: 3.0, r: 3.0 },
        BesovParams { s: 2.0, p: 2.0, r: 2.0 },
        BesovParams { s: 0.5, p: 2.0, r: 2.0 },
    ]
}

/// Results of one `(L, seed)` run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub length: f64,
    pub seed: u64,
    pub n: usize,
    /// Rescaled `B^{1/3}_{3,∞}`.
    pub b13_3inf: f64,
    /// Rescaled `B^{1/3}_{3,3}`.
    pub b13_33: f64,
    /// Rescaled `B^2_{2,2}` (Littlewood-Paley).
    pub b2_22: f64,
    /// Rescaled `B^{1/2}_{2,2}`.
    pub b12_22: f64,
    /// `B^{1/3}_{3,∞}` over the first half of the window.
    pub b13_3inf_half: f64,
    /// Mean and standard deviation of `L^{-1}∫u²` over frames.
    pub energy_mean: f64,
    pub energy_std: f64,
    /// Relative change of `B^{1/3}_{3,∞}` between the two halves of the window.
    pub stationarity: f64,
    /// `B^{1/3}_{3,3} / (ln^{1/3}(L) B^{1/3}_{3,∞})`.
    pub log_ratio: f64,
    /// `B^2_{2,2} / (B^{1/3}_{3,∞} ‖g‖_{B^{2/3}_{3/2,1}})^{1/2}` with `g = |∂x| u`.
    pub jj_ratio: f64,
    /// Estimates whose tails carry too much of the value.
    pub flags: String,
    /// `ok`, or why the run failed.
    pub status: String,
    pub wall_time: Duration,
}

pub const CSV_HEADER: [&str; 16] = [
    "L",
    "seed",
    "N",
    "b13_3inf",
    "b13_33",
    "b2_22",
    "b12_22",
    "b13_3inf_half",
    "energy_mean",
    "energy_std",
    "stationarity",
    "log_ratio",
    "jj_ratio",
    "flags",
    "status",
    "run_seed",
];

impl SweepRecord {
    fn failed(length: f64, seed: u64, n: usize, why: String, wall_time: Duration) -> Self {
        Self {
            length,
            seed,
            n,
            b13_3inf: f64::NAN,
            b13_33: f64::NAN,
            b2_22: f64::NAN,
            b12_22: f64::NAN,
            b13_3inf_half: f64::NAN,
            energy_mean: f64::NAN,
            energy_std: f64::NAN,
            stationarity: f64::NAN,
            log_ratio: f64::NAN,
            jj_ratio: f64::NAN,
            flags: String::new(),
            status: format!("failed: {why}"),
            wall_time,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn row(&self, run_seed: u64) -> Vec<String> {
        let f = |x: f64| format!("{x}");
        vec![
            f(self.length),
            self.seed.to_string(),
            self.n.to_string(),
            f(self.b13_3inf),
            f(self.b13_33),
            f(self.b2_22),
            f(self.b12_22),
            f(self.b13_3inf_half),
            f(self.energy_mean),
            f(self.energy_std),
            f(self.stationarity),
            f(self.log_ratio),
            f(self.jj_ratio),
            self.flags.clone(),
            self.status.clone(),
            run_seed.to_string(),
        ]
    }
}

/// The four sweep norms of a trajectory, rescaled, plus the half-window and
/// the `g = |∂x| u` norm used by the `B²_{2,2}` probe.
pub struct TrajectoryNorms {
    pub estimates: [NormEstimate; 4],
    pub b13_3inf_half: f64,
    pub g_norm: f64,
}

pub fn trajectory_norms(traj: &Trajectory64) -> Result<TrajectoryNorms> {
    let hg = HGrid::for_grid(traj.grid());
    let [sup, b33, b2, b12] = sweep_params();
    let fd = besov_norms_fd(traj, &[sup, b33, b12], &hg)?;
    let fam = LPFamily::new(traj.grid());
    let lp = rescaled_norm(traj, &b2, &Method::LittlewoodPaley(&fam))?;
    let half = traj.window(0..traj.len().div_ceil(2))?;
    let half_sup = besov_norms_fd(&half, &[sup], &hg)?[0];
    let g = traj.map_frames(|f| f.halfwave(1.0).expect("order 1 is defined for every field"))?;
    let jj = BesovParams { s: 2.0 / 3.0, p: 1.5, r: 1.0 };
    let g_norm = rescaled_norm(&g, &jj, &Method::FiniteDifference(&hg))?;
    Ok(TrajectoryNorms {
        estimates: [
            fd[0].scaled(rescale_factor(traj, sup.p)),
            fd[1].scaled(rescale_factor(traj, b33.p)),
            lp,
            fd[2].scaled(rescale_factor(traj, b12.p)),
        ],
        b13_3inf_half: half_sup.scaled(rescale_factor(&half, sup.p)).value,
        g_norm: g_norm.value,
    })
}

pub fn run_one(cfg: &SweepConfig, length: f64, seed: u64) -> SweepRecord {
    let sim_cfg = cfg.sim(length, seed);
    let n = sim_cfg.n;
    let start = std::time::Instant::now();
    let result = simulate(&sim_cfg).and_then(|sim| {
        let norms = trajectory_norms(&sim.run.trajectory)?;
        Ok((sim, norms))
    });
    let (sim, norms) = match result {
        Ok(x) => x,
        Err(e) => return SweepRecord::failed(length, seed, n, e.to_string(), start.elapsed()),
    };
    let [sup, b33, b2, b12] = norms.estimates;
    let energy: Vec<f64> = sim.run.energy_series.iter().map(|e| e / length).collect();
    let mean = energy.iter().sum::<f64>() / energy.len() as f64;
    let var = energy.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / energy.len() as f64;
    let names = ["b13_3inf", "b13_33", "b2_22", "b12_22"];
    let flags: Vec<&str> = names
        .iter()
        .zip(&norms.estimates)
        .filter(|(_, e)| e.flagged())
        .map(|(n, _)| *n)
        .collect();
    let big = sup.value.max(norms.b13_3inf_half);
    SweepRecord {
        length,
        seed,
        n,
        b13_3inf: sup.value,
        b13_33: b33.value,
        b2_22: b2.value,
        b12_22: b12.value,
        b13_3inf_half: norms.b13_3inf_half,
        energy_mean: mean,
        energy_std: var.sqrt(),
        stationarity: if big > 0.0 { (sup.value - norms.b13_3inf_half).abs() / big } else { 0.0 },
        log_ratio: b33.value / (length.ln().cbrt() * sup.value),
        jj_ratio: b2.value / (sup.value * norms.g_norm).sqrt(),
        flags: flags.join(";"),
        status: "ok".into(),
        wall_time: start.elapsed(),
    }
}

/// Runs every `(L, seed)` pair on a worker pool; rows come back sorted by
/// `(L, seed)`. A failed run becomes a failed row.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let mut tasks: Vec<(f64, u64)> = cfg
        .lengths
        .iter()
        .flat_map(|&l| cfg.seeds.iter().map(move |&s| (l, s)))
        .collect();
    tasks.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    let records: Vec<SweepRecord> = pool.install(|| tasks.par_iter().map(|&(l, s)| run_one(cfg, l, s)).collect());
    if let Some(out) = &cfg.out {
        write_csv(cfg, &records, out)?;
        write_wall_times(&records, &wall_time_path(out))?;
    }
    Ok(records)
}

pub fn wall_time_path(out: &Path) -> std::path::PathBuf {
    let mut p = out.as_os_str().to_owned();
    p.push(".walltime.csv");
    p.into()
}

/// Timestamp comment line, then a header row and one row per record.
pub fn write_csv(cfg: &SweepConfig, records: &[SweepRecord], path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path).map_err(io_err(path))?;
    writeln!(file, "# ksbesov sweep {}", chrono::Utc::now().to_rfc3339()).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.row(crate::config::run_seed(cfg.master_seed, r.length, r.seed)))?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

fn write_wall_times(records: &[SweepRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["L", "seed", "wall_time_s"])?;
    for r in records {
        w.write_record([format!("{}", r.length), r.seed.to_string(), format!("{}", r.wall_time.as_secs_f64())])?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// `κ` for one column over the successful rows.
pub fn fit_column(records: &[SweepRecord], column: impl Fn(&SweepRecord) -> f64) -> Result<LogFit> {
    let pts: Vec<(f64, f64)> = records.iter().filter(|r| r.is_ok()).map(|r| (r.length, column(r))).collect();
    fit_log_exponent(&pts)
}
