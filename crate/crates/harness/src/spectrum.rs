use ksbesov_core::Trajectory64;

/// Time-averaged power spectrum `S(ξ) = (LT)^{-1} ∫ |F(u)(t, ξ)|² dt`, which is
/// `L · mean_t |û_m|²` with coefficients normalized by `1/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    /// Positive wavenumbers `2πm/L`, `m = 1 … N/2 − 1`.
    pub xi: Vec<f64>,
    pub s: Vec<f64>,
}

/// A least-squares line `y = slope · x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn line_fit(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Some(LineFit {
        slope,
        intercept: my - slope * mx,
        r2,
    })
}

pub fn power_spectrum(traj: &Trajectory64) -> PowerSpectrum {
    let g = traj.grid();
    let half = g.n() / 2;
    let mut acc = vec![0.0; half.saturating_sub(1)];
    for s in traj.spectra() {
        for (m, a) in acc.iter_mut().enumerate() {
            *a += s.modes()[m + 1].norm_sqr();
        }
    }
    let scale = g.length() / traj.len() as f64;
    PowerSpectrum {
        xi: (1..half).map(|m| g.wavenumber(m)).collect(),
        s: acc.into_iter().map(|a| a * scale).collect(),
    }
}

impl PowerSpectrum {
    /// `(ξ, S)` with `lo ≤ ξ ≤ hi`.
    pub fn band(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        self.xi
            .iter()
            .zip(&self.s)
            .filter(|(x, _)| **x >= lo && **x <= hi)
            .map(|(x, s)| (*x, *s))
            .collect()
    }

    /// `max S / min S` over the band; a flat band gives 1.
    pub fn flatness(&self, lo: f64, hi: f64) -> Option<f64> {
        let b = self.band(lo, hi);
        if b.is_empty() {
            return None;
        }
        let max = b.iter().map(|p| p.1).fold(0.0, f64::max);
        let min = b.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        Some(max / min)
    }

    /// Fit of `ln S` against `ξ` over the band; exponential decay has a negative slope.
    pub fn tail_fit(&self, lo: f64, hi: f64) -> Option<LineFit> {
        let b: Vec<(f64, f64)> = self.band(lo, hi).into_iter().filter(|p| p.1 > 0.0).collect();
        let x: Vec<f64> = b.iter().map(|p| p.0).collect();
        let y: Vec<f64> = b.iter().map(|p| p.1.ln()).collect();
        line_fit(&x, &y)
    }
}
