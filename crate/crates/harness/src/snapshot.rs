//! Trajectory snapshots: `"KSB1"`, then little-endian `u32` version, `f64 L`,
//! `u32 N`, `f64 t0`, `f64 dt_rec`, `u64` frame count and per frame an
//! `f64` time followed by `N` samples.

use std::path::Path;

use ksbesov_core::{Grid64, Trajectory64};

use crate::error::{io_err, HarnessError, Result};

pub const MAGIC: [u8; 4] = *b"KSB1";
pub const VERSION: u32 = 1;

pub fn encode(traj: &Trajectory64) -> Vec<u8> {
    let n = traj.grid().n();
    let mut out = Vec::with_capacity(40 + traj.len() * 8 * (n + 1));
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&traj.grid().length().to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&traj.t0().to_le_bytes());
    out.extend_from_slice(&traj.dt_rec().to_le_bytes());
    out.extend_from_slice(&(traj.len() as u64).to_le_bytes());
    for (i, f) in traj.frames().iter().enumerate() {
        out.extend_from_slice(&traj.time(i).to_le_bytes());
        for v in f.samples() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const K: usize>(&mut self) -> Result<[u8; K]> {
        let end = self.pos + K;
        if end > self.buf.len() {
            return Err(HarnessError::Truncated {
                offset: self.pos,
                needed: end - self.buf.len(),
            });
        }
        let mut a = [0u8; K];
        a.copy_from_slice(&self.buf[self.pos..end]);
        self.pos = end;
        Ok(a)
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }
}

pub fn decode(buf: &[u8]) -> Result<Trajectory64> {
    let mut r = Reader { buf, pos: 0 };
    let magic: [u8; 4] = r.take()?;
    if magic != MAGIC {
        return Err(HarnessError::BadMagic { found: magic });
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(HarnessError::UnsupportedVersion(version));
    }
    let length = r.f64()?;
    let n = r.u32()? as usize;
    let t0 = r.f64()?;
    let dt_rec = r.f64()?;
    let count = u64::from_le_bytes(r.take()?) as usize;
    let grid = Grid64::new(length, n)?;
    let mut frames = Vec::with_capacity(count.min(buf.len() / 8));
    for _ in 0..count {
        let _time = r.f64()?;
        let samples = (0..n).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
        frames.push(ksbesov_core::Field64::new(grid.clone(), samples)?);
    }
    Ok(Trajectory64::new(grid, t0, dt_rec, frames)?)
}

pub fn save_trajectory(traj: &Trajectory64, path: &Path) -> Result<()> {
    std::fs::write(path, encode(traj)).map_err(io_err(path))
}

pub fn load_trajectory(path: &Path) -> Result<Trajectory64> {
    let buf = std::fs::read(path).map_err(io_err(path))?;
    decode(&buf)
}
