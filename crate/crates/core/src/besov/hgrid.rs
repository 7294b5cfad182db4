use crate::error::{config, Result};
use crate::spectral::GridSpec;
use crate::Scalar;

/// Default density of the offset grid.
pub const DEFAULT_PER_DECADE: usize = 32;
/// Default number of periods spanned by the offset grid.
pub const DEFAULT_PERIODS: usize = 4;

/// Log-uniform offsets `h_1 < … < h_M` with trapezoid weights for `∫·dh/h`.
///
/// The last offset is a whole number of periods, where every increment
/// vanishes, so the integrands used with it go to zero smoothly there.
#[derive(Debug, Clone, PartialEq)]
pub struct HGrid {
    offsets: Vec<f64>,
    weights: Vec<f64>,
    log_step: f64,
    period: f64,
    periods: usize,
}

impl HGrid {
    /// `h_1 = dx/4`, `h_M = 4L`, 32 points per decade.
    pub fn for_grid<T: Scalar>(grid: &GridSpec<T>) -> Self {
        Self::with_density(grid, DEFAULT_PER_DECADE).expect("default grid is valid")
    }

    pub fn with_density<T: Scalar>(grid: &GridSpec<T>, per_decade: usize) -> Result<Self> {
        Self::new(
            grid.dx().as_f64() / 4.0,
            grid.length().as_f64(),
            DEFAULT_PERIODS,
            per_decade,
        )
    }

    /// Offsets from `h1` to `periods · period`, at least `per_decade` per decade.
    pub fn new(h1: f64, period: f64, periods: usize, per_decade: usize) -> Result<Self> {
        let h_max = period * periods as f64;
        if !(h1 > 0.0) || !(h1 < h_max) {
            return Err(config(format!("need 0 < h1 < h_max, got h1 = {h1}, h_max = {h_max}")));
        }
        if periods < DEFAULT_PERIODS {
            return Err(config(format!("offset grid must span ≥ {DEFAULT_PERIODS} periods")));
        }
        if per_decade < 2 {
            return Err(config("need at least 2 offsets per decade"));
        }
        let span = (h_max / h1).ln();
        let cells = ((per_decade as f64) * span / std::f64::consts::LN_10).ceil() as usize;
        let cells = cells.max(2);
        let log_step = span / cells as f64;
        let mut offsets: Vec<f64> = (0..=cells)
            .map(|i| h1 * (log_step * i as f64).exp())
            .collect();
        offsets[cells] = h_max;
        let weights = crate::special::trapezoid_weights(cells + 1, log_step);
        Ok(Self {
            offsets,
            weights,
            log_step,
            period,
            periods,
        })
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// Trapezoid weights in `ln h`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn log_step(&self) -> f64 {
        self.log_step
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn periods(&self) -> usize {
        self.periods
    }

    pub fn h_min(&self) -> f64 {
        self.offsets[0]
    }

    pub fn h_max(&self) -> f64 {
        *self.offsets.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// Fails unless the grid starts at or above `dx/4` of `grid` and is
    /// built on its period.
    pub fn check_against<T: Scalar>(&self, grid: &GridSpec<T>) -> Result<()> {
        let dx = grid.dx().as_f64();
        let l = grid.length().as_f64();
        if self.h_min() < dx / 4.0 * (1.0 - 1e-12) {
            return Err(config(format!("h1 = {} below dx/4 = {}", self.h_min(), dx / 4.0)));
        }
        if (self.period - l).abs() > 1e-12 * l {
            return Err(config(format!("offset grid period {} ≠ L = {l}", self.period)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_weights() {
        let g = GridSpec::<f64>::new(10.0, 64).unwrap();
        let hg = HGrid::for_grid(&g);
        assert!((hg.h_min() - 10.0 / 64.0 / 4.0).abs() < 1e-15);
        assert_eq!(hg.h_max(), 40.0);
        let decades = (hg.h_max() / hg.h_min()).log10();
        assert!(hg.len() as f64 - 1.0 >= 32.0 * decades);
        for w in hg.offsets().windows(3) {
            let a = (w[1] / w[0]).ln();
            let b = (w[2] / w[1]).ln();
            assert!((a - b).abs() < 1e-12);
        }
        let total: f64 = hg.weights().iter().sum();
        assert!((total - (hg.h_max() / hg.h_min()).ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(HGrid::new(0.0, 1.0, 4, 32).is_err());
        assert!(HGrid::new(0.1, 1.0, 3, 32).is_err());
        assert!(HGrid::new(0.1, 1.0, 4, 1).is_err());
        let g = GridSpec::<f64>::new(10.0, 64).unwrap();
        let hg = HGrid::new(0.01, 10.0, 4, 32).unwrap();
        assert!(hg.check_against(&g).is_err());
    }
}
