use ksbesov_core::Error;

use crate::error::Result;

/// `norm ≈ c · ln^κ(L)`, fitted in `(ln ln L, ln norm)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogFit {
    pub kappa: f64,
    pub stderr: f64,
    pub c: f64,
    pub points: usize,
}

/// Least-squares fit over `(L, norm)` pairs; needs at least three distinct `L`.
pub fn fit_log_exponent(points: &[(f64, f64)]) -> Result<LogFit> {
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::Domain(format!("need ≥ 3 distinct L values, got {}", distinct.len())).into());
    }
    if let Some(p) = points.iter().find(|p| !(p.0 > 1.0 && p.1 > 0.0 && p.1.is_finite())) {
        return Err(Error::Domain(format!("cannot fit L = {}, norm = {}", p.0, p.1)).into());
    }
    let x: Vec<f64> = points.iter().map(|p| p.0.ln().ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let kappa = sxy / sxx;
    let intercept = my - kappa * mx;
    let ssr: f64 = x.iter().zip(&y).map(|(a, b)| (b - intercept - kappa * a).powi(2)).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(LogFit {
        kappa,
        stderr,
        c: intercept.exp(),
        points: points.len(),
    })
}
