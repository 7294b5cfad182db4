use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ksbesov_core::Trajectory64;
use ksbesov_harness::config::{Settings, SimConfig, SweepConfig};
use ksbesov_harness::error::io_err;
use ksbesov_harness::run::simulate;
use ksbesov_harness::snapshot::{load_trajectory, save_trajectory};
use ksbesov_harness::spectrum::power_spectrum;
use ksbesov_harness::structure::{default_offsets, structure_function};
use ksbesov_harness::sweep::{fit_column, run_sweep, sweep_params, trajectory_norms, SweepRecord};
use ksbesov_harness::verify::{verify, Suite, VerifyOptions};
use ksbesov_harness::Result;

#[derive(Parser)]
#[command(name = "ksbesov", version, about = "Kuramoto-Sivashinsky runs, Besov norms and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Keys shared with the config file. Flags override file values.
#[derive(Args, Default)]
struct Common {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "L")]
    l: Option<f64>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "dt-rec")]
    dt_rec: Option<f64>,
    #[arg(long = "t-burn")]
    t_burn: Option<f64>,
    #[arg(long = "t-avg")]
    t_avg: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated system sizes for `sweep`.
    #[arg(long = "L-list")]
    l_list: Option<String>,
    /// Seeds per system size for `sweep`.
    #[arg(long)]
    seeds: Option<usize>,
    /// Explicit comma-separated seeds for `sweep`.
    #[arg(long = "seed-list")]
    seed_list: Option<String>,
}

impl Common {
    fn settings(&self) -> Result<Settings> {
        let mut s = match &self.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::default(),
        };
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                s.set(k, v);
            }
        };
        put("L", self.l.map(|x| x.to_string()));
        put("N", self.n.map(|x| x.to_string()));
        put("dt", self.dt.map(|x| x.to_string()));
        put("dt-rec", self.dt_rec.map(|x| x.to_string()));
        put("t-burn", self.t_burn.map(|x| x.to_string()));
        put("t-avg", self.t_avg.map(|x| x.to_string()));
        put("seed", self.seed.map(|x| x.to_string()));
        put("out", self.out.as_ref().map(|p| p.display().to_string()));
        put("L-list", self.l_list.clone());
        put("seeds", self.seeds.map(|x| x.to_string()));
        put("seed-list", self.seed_list.clone());
        Ok(s)
    }
}

#[derive(Args)]
struct Input {
    /// Snapshot to analyse; a fresh run from the config when absent.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Burn in, record and save a trajectory snapshot.
    Simulate(#[command(flatten)] Common),
    /// Rescaled Besov norms of a trajectory.
    Norms {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
    },
    /// Run an identity or inequality suite.
    Verify {
        /// khm, khm-int, interaction, kinetic, q-decomp, energy, duality, interpolation, three-scale
        suite: Suite,
        /// Grid size of the energy run.
        #[arg(long = "N")]
        n: Option<usize>,
        /// Switch off 2/3-rule dealiasing in the energy run.
        #[arg(long)]
        no_dealias: bool,
        /// Two `range/Δv` divisions for q-decomp, e.g. `64,128`.
        #[arg(long)]
        dv: Option<String>,
        /// Machine-readable report.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// L-sweep of the rescaled norms.
    Sweep(#[command(flatten)] Common),
    /// Time-averaged power spectrum as CSV.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
    },
    /// `(LT)^{-1} ∬ |D^h u|³ / h` against `h` as CSV.
    Structure {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
    },
}

type Column = fn(&SweepRecord) -> f64;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn trajectory(common: &Common, input: &Input) -> Result<(Trajectory64, Option<PathBuf>)> {
    let settings = common.settings()?;
    let mut cfg = SimConfig::from_settings(&settings)?;
    let out = cfg.out.take();
    let traj = match &input.input {
        Some(p) => load_trajectory(p)?,
        None => simulate(&cfg)?.run.trajectory,
    };
    Ok((traj, out))
}

/// Opens `path`, or stdout when absent.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(io_err(p))?),
        None => Box::new(io::stdout()),
    })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate(common) => {
            let cfg = SimConfig::from_settings(&common.settings()?)?;
            let sim = simulate(&cfg)?;
            let path = cfg.out.clone().unwrap_or_else(|| PathBuf::from(format!("ks_L{}_seed{}.ksb", cfg.length, cfg.seed)));
            save_trajectory(&sim.run.trajectory, &path)?;
            let e = &sim.run.energy_series;
            println!(
                "L = {}, N = {}, frames = {}, mean energy = {:.6}, wall time = {:.2?} -> {}",
                cfg.length,
                cfg.n,
                sim.run.trajectory.len(),
                e.iter().sum::<f64>() / e.len() as f64,
                sim.wall_time,
                path.display()
            );
            Ok(true)
        }
        Command::Norms { common, input } => {
            let (traj, out) = trajectory(&common, &input)?;
            let norms = trajectory_norms(&traj)?;
            let mut w = csv::Writer::from_writer(sink(out.as_deref())?);
            w.write_record(["s", "p", "r", "value", "flagged"])?;
            for (bp, e) in sweep_params().iter().zip(&norms.estimates) {
                w.write_record([bp.s.to_string(), bp.p.to_string(), bp.r.to_string(), e.value.to_string(), e.flagged().to_string()])?;
            }
            w.flush().map_err(io_err("<norms>"))?;
            Ok(true)
        }
        Command::Verify { suite, n, no_dealias, dv, csv } => {
            let mut opts = VerifyOptions {
                n,
                dealias: !no_dealias,
                ..VerifyOptions::default()
            };
            if let Some(dv) = dv {
                let parts: Vec<f64> = dv
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| ksbesov_harness::HarnessError::Config(format!("--dv: {e}")))?;
                let [a, b] = parts[..] else {
                    return Err(ksbesov_harness::HarnessError::Config("--dv takes two divisions".into()));
                };
                opts.dv_divisions = (a, b);
            }
            let report = verify(suite, &opts)?;
            println!("{report}");
            if let Some(p) = csv {
                report.write_csv(File::create(&p).map_err(io_err(&p))?)?;
            }
            Ok(report.passed())
        }
        Command::Sweep(common) => {
            let cfg = SweepConfig::from_settings(&common.settings()?)?;
            let records = run_sweep(&cfg)?;
            let failed = records.iter().filter(|r| !r.is_ok()).count();
            println!("{} runs, {failed} failed", records.len());
            let columns: [(&str, Column); 4] = [
                ("b13_3inf", |r| r.b13_3inf),
                ("b13_33", |r| r.b13_33),
                ("b2_22", |r| r.b2_22),
                ("b12_22", |r| r.b12_22),
            ];
            for (name, col) in columns {
                match fit_column(&records, col) {
                    Ok(f) => println!("{name}: kappa = {:.4} ± {:.4} (c = {:.4}, {} points)", f.kappa, f.stderr, f.c, f.points),
                    Err(e) => println!("{name}: no fit ({e})"),
                }
            }
            Ok(failed == 0)
        }
        Command::Spectrum { common, input } => {
            let (traj, out) = trajectory(&common, &input)?;
            let spec = power_spectrum(&traj);
            let mut w = csv::Writer::from_writer(sink(out.as_deref())?);
            w.write_record(["xi", "S"])?;
            for (x, s) in spec.xi.iter().zip(&spec.s) {
                w.write_record([x.to_string(), s.to_string()])?;
            }
            w.flush().map_err(io_err("<spectrum>"))?;
            if let Some(f) = spec.flatness(0.03, 0.3) {
                eprintln!("long-wave band [0.03, 0.3]: max/min = {f:.3}");
            }
            if let Some(f) = spec.tail_fit(2.0, 4.0) {
                eprintln!("tail [2, 4]: ln S slope = {:.3}, R^2 = {:.4}", f.slope, f.r2);
            }
            Ok(true)
        }
        Command::Structure { common, input } => {
            let (traj, out) = trajectory(&common, &input)?;
            let rows = structure_function(&traj, &default_offsets(&traj));
            let mut w = csv::Writer::from_writer(sink(out.as_deref())?);
            w.write_record(["h", "value"])?;
            for (h, v) in rows {
                w.write_record([h.to_string(), v.to_string()])?;
            }
            w.flush().map_err(io_err("<structure>"))?;
            Ok(true)
        }
    }
}
