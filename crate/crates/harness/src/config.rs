use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{io_err, HarnessError, Result};

/// Keys accepted in config files; each is also a CLI flag of the same name.
pub const KEYS: &[&str] = &["L", "N", "dt", "dt-rec", "t-burn", "t-avg", "seed", "out", "L-list", "seeds", "seed-list"];

/// Flat `key = value` settings, later sources overriding earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(HarnessError::Parse {
                    line: i + 1,
                    msg: format!("expected `key = value`, got {line:?}"),
                });
            };
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(HarnessError::Parse {
                    line: i + 1,
                    msg: format!("unknown key {k:?}"),
                });
            }
            out.values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| HarnessError::Config(format!("{key} = {v:?}: {e}")))
            })
            .transpose()
    }

    /// A comma-separated list.
    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<T>()
                            .map_err(|e| HarnessError::Config(format!("{key} = {v:?}: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }
}

/// Smallest power of two `≥ 8L/π` (about 2.5 points per unit length).
pub fn grid_size_for(length: f64) -> usize {
    ((8.0 * length / std::f64::consts::PI).ceil() as usize).next_power_of_two()
}

/// The noise seed of run `seed` at system size `length`: one draw from the
/// `seed`-th ChaCha stream of `master`, at a word position fixed by `length`.
pub fn run_seed(master: u64, length: f64, seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(seed);
    rng.set_word_pos((length.to_bits() as u128) << 2);
    rng.next_u64()
}

/// One Kuramoto-Sivashinsky run: burn-in, then a recorded window.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub length: f64,
    pub n: usize,
    pub dt: f64,
    pub dt_rec: f64,
    pub t_burn: f64,
    pub t_avg: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl SimConfig {
    pub fn new(length: f64) -> Self {
        Self {
            length,
            n: grid_size_for(length),
            dt: 0.05,
            dt_rec: 0.5,
            t_burn: 200.0,
            t_avg: 1000.0,
            seed: 0,
            out: None,
        }
    }

    pub fn from_settings(s: &Settings) -> Result<Self> {
        let length = s.get("L")?.unwrap_or(100.0);
        let mut c = Self::new(length);
        if let Some(n) = s.get("N")? {
            c.n = n;
        }
        c.dt = s.get("dt")?.unwrap_or(c.dt);
        c.dt_rec = s.get("dt-rec")?.unwrap_or(c.dt_rec);
        c.t_burn = s.get("t-burn")?.unwrap_or(c.t_burn);
        c.t_avg = s.get("t-avg")?.unwrap_or(c.t_avg);
        c.seed = s.get("seed")?.unwrap_or(c.seed);
        c.out = s.get::<String>("out")?.map(PathBuf::from);
        c.validate()?;
        Ok(c)
    }

    /// Steps between recorded frames.
    pub fn record_every(&self) -> usize {
        ((self.dt_rec / self.dt).round() as usize).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if !(self.length > 0.0) {
            return bad(format!("L must be > 0, got {}", self.length));
        }
        if !(self.dt > 0.0 && self.dt_rec >= self.dt) {
            return bad(format!("need 0 < dt ≤ dt-rec, got dt = {}, dt-rec = {}", self.dt, self.dt_rec));
        }
        let k = self.dt_rec / self.dt;
        if (k - k.round()).abs() > 1e-9 * k {
            return bad(format!("dt-rec = {} is not a multiple of dt = {}", self.dt_rec, self.dt));
        }
        if !(self.t_burn >= 0.0 && self.t_avg > 0.0) {
            return bad(format!("need t-burn ≥ 0 and t-avg > 0, got {} and {}", self.t_burn, self.t_avg));
        }
        Ok(())
    }
}

/// An L-sweep: every system size with every seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub lengths: Vec<f64>,
    pub seeds: Vec<u64>,
    pub master_seed: u64,
    pub dt: f64,
    pub dt_rec: f64,
    pub t_burn: f64,
    pub t_avg: f64,
    pub out: Option<PathBuf>,
}

impl SweepConfig {
    pub fn new(lengths: Vec<f64>, seeds: usize) -> Self {
        Self {
            lengths,
            seeds: (0..seeds as u64).collect(),
            master_seed: 0,
            dt: 0.05,
            dt_rec: 0.5,
            t_burn: 200.0,
            t_avg: 1000.0,
            out: None,
        }
    }

    pub fn from_settings(s: &Settings) -> Result<Self> {
        let lengths = s.get_list("L-list")?.unwrap_or_else(|| vec![50.0, 100.0, 200.0, 400.0]);
        let mut c = Self::new(lengths, s.get("seeds")?.unwrap_or(4));
        if let Some(list) = s.get_list("seed-list")? {
            c.seeds = list;
        }
        c.master_seed = s.get("seed")?.unwrap_or(0);
        c.dt = s.get("dt")?.unwrap_or(c.dt);
        c.dt_rec = s.get("dt-rec")?.unwrap_or(c.dt_rec);
        c.t_burn = s.get("t-burn")?.unwrap_or(c.t_burn);
        c.t_avg = s.get("t-avg")?.unwrap_or(c.t_avg);
        c.out = s.get::<String>("out")?.map(PathBuf::from);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lengths.is_empty() || self.seeds.is_empty() {
            return Err(HarnessError::Config("need at least one L and one seed".into()));
        }
        if let Some(l) = self.lengths.iter().find(|&&l| !(l >= 20.0)) {
            return Err(HarnessError::Config(format!("every L must be ≥ 20, got {l}")));
        }
        if !(self.t_avg >= 5.0 * self.t_burn) {
            return Err(HarnessError::Config(format!(
                "t-avg = {} must be at least 5 × t-burn = {}",
                self.t_avg,
                5.0 * self.t_burn
            )));
        }
        self.sim(self.lengths[0], 0).validate()
    }

    /// The run for one `(L, seed)` pair.
    pub fn sim(&self, length: f64, seed: u64) -> SimConfig {
        SimConfig {
            length,
            n: grid_size_for(length),
            dt: self.dt,
            dt_rec: self.dt_rec,
            t_burn: self.t_burn,
            t_avg: self.t_avg,
            seed: run_seed(self.master_seed, length, seed),
            out: None,
        }
    }
}

/// Worker count from `KSBESOV_WORKERS`, else the available parallelism.
pub fn worker_count() -> usize {
    std::env::var("KSBESOV_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
