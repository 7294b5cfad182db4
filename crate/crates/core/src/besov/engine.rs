use num_complex::Complex;
use rayon::prelude::*;

use crate::spectral::Trajectory;
use crate::sum::NeumaierSum;
use crate::Scalar;

/// Evaluates increment moments `∬ |D^h u|^p dx dt` of a trajectory.
///
/// Frame spectra are computed once; each offset then costs one inverse
/// transform per frame, or a sample shift when it is a whole number of cells. Offsets are processed in parallel and results are
/// returned in input order, so the output does not depend on scheduling.
pub struct StructureEngine<T: Scalar> {
    spectra: Vec<Vec<Complex<T>>>,
    samples: Vec<Vec<T>>,
    n: usize,
    length: f64,
    /// `dx · dt_rec`, the time-space cell measure.
    cell: f64,
}

/// How one moment is reduced over time-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    /// `∬ |D^h u|^p` for finite `p`.
    Power(f64),
    /// `max |D^h u|`.
    Max,
}

impl Moment {
    pub fn of(p: f64) -> Self {
        if p.is_infinite() {
            Moment::Max
        } else {
            Moment::Power(p)
        }
    }

    /// The `L^p` norm from the reduced moment.
    pub fn norm(&self, raw: f64) -> f64 {
        match *self {
            Moment::Power(p) => raw.max(0.0).powf(1.0 / p),
            Moment::Max => raw,
        }
    }
}

impl<T: Scalar> StructureEngine<T> {
    pub fn new(traj: &Trajectory<T>) -> Self {
        let grid = traj.grid();
        Self {
            spectra: traj.spectra().into_iter().map(|s| s.modes().to_vec()).collect(),
            samples: traj.frames().iter().map(|f| f.samples().to_vec()).collect(),
            n: grid.n(),
            length: grid.length().as_f64(),
            cell: grid.dx().as_f64() * traj.dt_rec().as_f64(),
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    fn multiplier(&self, h: f64) -> Option<Vec<Complex<T>>> {
        let mut frac = (h / self.length).rem_euclid(1.0);
        if frac >= 1.0 {
            frac = 0.0;
        }
        if frac == 0.0 {
            return None;
        }
        let n = self.n as i64;
        Some(
            (0..self.n)
                .map(|i| {
                    let m = if (i as i64) < n / 2 { i as i64 } else { i as i64 - n };
                    if m == -n / 2 {
                        return Complex::new(-T::one(), T::zero());
                    }
                    let angle = std::f64::consts::TAU * ((m as f64 * frac) % 1.0);
                    Complex::new(T::lit(angle.cos() - 1.0), T::lit(angle.sin()))
                })
                .collect(),
        )
    }

    /// The shift in cells when `h` is a whole number of them.
    fn cell_shift(&self, h: f64) -> Option<usize> {
        let x = (h / self.length).rem_euclid(1.0) * self.n as f64;
        let j = x.round();
        ((x - j).abs() < 1e-9).then_some(j as usize % self.n)
    }

    /// Moments of `D^h u` for one offset, one entry per requested moment.
    pub fn moments(&self, h: f64, which: &[Moment]) -> Vec<f64> {
        let Some(mult) = self.multiplier(h) else {
            return vec![0.0; which.len()];
        };
        let shift = self.cell_shift(h);
        let plan = T::plans(self.n).1;
        let mut buf = vec![Complex::new(T::zero(), T::zero()); self.n];
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];
        let mut sums: Vec<NeumaierSum<f64>> = vec![NeumaierSum::new(); which.len()];
        let mut maxima = vec![0.0f64; which.len()];
        for (modes, u) in self.spectra.iter().zip(&self.samples) {
            if let Some(j) = shift {
                let n = self.n;
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = Complex::new(u[(i + j) % n] - u[i], T::zero());
                }
            } else {
                for ((b, m), c) in buf.iter_mut().zip(&mult).zip(modes) {
                    *b = *m * *c;
                }
                plan.process_with_scratch(&mut buf, &mut scratch);
            }
            for (k, w) in which.iter().enumerate() {
                match *w {
                    Moment::Max => {
                        let m = buf.iter().fold(0.0f64, |a, c| a.max(c.re.as_f64().abs()));
                        maxima[k] = maxima[k].max(m);
                    }
                    Moment::Power(p) => {
                        // Non-negative terms: a plain per-frame sum loses
                        // nothing that matters; frames are summed compensated.
                        let vals = buf.iter().map(|c| c.re.as_f64().abs());
                        let frame: f64 = if p == 2.0 {
                            vals.map(|v| v * v).sum()
                        } else if p == 3.0 {
                            vals.map(|v| v * v * v).sum()
                        } else if p == 1.0 {
                            vals.sum()
                        } else if p == 1.5 {
                            vals.map(|v| v * v.sqrt()).sum()
                        } else {
                            vals.map(|v| v.powf(p)).sum()
                        };
                        sums[k].add(frame);
                    }
                }
            }
        }
        which
            .iter()
            .enumerate()
            .map(|(k, w)| match w {
                Moment::Max => maxima[k],
                Moment::Power(_) => sums[k].value() * self.cell,
            })
            .collect()
    }

    /// [`Self::moments`] for many offsets, in parallel, in input order.
    pub fn moments_many(&self, hs: &[f64], which: &[Moment]) -> Vec<Vec<f64>> {
        hs.par_iter().map(|&h| self.moments(h, which)).collect()
    }

    /// `L^p` norms of `D^h u` for many offsets.
    pub fn norms(&self, hs: &[f64], p: f64) -> Vec<f64> {
        let m = Moment::of(p);
        self.moments_many(hs, &[m])
            .into_iter()
            .map(|v| m.norm(v[0]))
            .collect()
    }
}
