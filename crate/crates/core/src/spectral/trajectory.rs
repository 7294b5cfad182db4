use super::{GridSpec, RealField, SpectralField};
use crate::error::{config, structure, Result};
use crate::Scalar;

/// Time-ordered frames on one grid, recorded every `dt_rec`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Scalar> {
    grid: GridSpec<T>,
    t0: T,
    dt_rec: T,
    frames: Vec<RealField<T>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn new(grid: GridSpec<T>, t0: T, dt_rec: T, frames: Vec<RealField<T>>) -> Result<Self> {
        if !(dt_rec > T::zero()) || !dt_rec.is_finite() {
            return Err(config(format!("recording interval must be > 0, got {dt_rec}")));
        }
        if frames.is_empty() {
            return Err(structure("trajectory needs at least one frame"));
        }
        for (i, f) in frames.iter().enumerate() {
            if f.grid() != &grid {
                return Err(structure(format!("frame {i} lives on a different grid")));
            }
        }
        Ok(Self {
            grid,
            t0,
            dt_rec,
            frames,
        })
    }

    /// Samples `f(t, x)` at `t0 + i dt_rec` for `i < count`.
    pub fn from_fn(
        grid: &GridSpec<T>,
        t0: T,
        dt_rec: T,
        count: usize,
        f: impl Fn(T, T) -> T,
    ) -> Result<Self> {
        let frames = (0..count)
            .map(|i| {
                let t = t0 + T::from_usize_lossy(i) * dt_rec;
                RealField::from_fn(grid, |x| f(t, x))
            })
            .collect();
        Self::new(grid.clone(), t0, dt_rec, frames)
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn dt_rec(&self) -> T {
        self.dt_rec
    }

    pub fn frames(&self) -> &[RealField<T>] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn time(&self, i: usize) -> T {
        self.t0 + T::from_usize_lossy(i) * self.dt_rec
    }

    /// `T = frames · dt_rec`, the measure the time integrals use.
    pub fn duration(&self) -> T {
        T::from_usize_lossy(self.frames.len()) * self.dt_rec
    }

    pub fn spectra(&self) -> Vec<SpectralField<T>> {
        self.frames.iter().map(RealField::spectrum).collect()
    }

    /// Drops frames before `t0 + t_skip`.
    pub fn skip_until(&self, t_skip: T) -> Result<Self> {
        let start = (t_skip / self.dt_rec).ceil().to_usize().unwrap_or(0);
        if start >= self.frames.len() {
            return Err(structure("burn-in removes every frame"));
        }
        Self::new(
            self.grid.clone(),
            self.time(start),
            self.dt_rec,
            self.frames[start..].to_vec(),
        )
    }

    /// Frames `range` as a new trajectory.
    pub fn window(&self, range: std::ops::Range<usize>) -> Result<Self> {
        if range.start >= range.end || range.end > self.frames.len() {
            return Err(structure(format!("bad frame window {range:?}")));
        }
        Self::new(
            self.grid.clone(),
            self.time(range.start),
            self.dt_rec,
            self.frames[range].to_vec(),
        )
    }

    /// Applies `f` to every frame.
    pub fn map_frames(&self, f: impl Fn(&RealField<T>) -> RealField<T>) -> Result<Self> {
        Self::new(
            self.grid.clone(),
            self.t0,
            self.dt_rec,
            self.frames.iter().map(f).collect(),
        )
    }
}
