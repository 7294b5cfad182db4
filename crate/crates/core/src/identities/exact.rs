use num_complex::Complex;

use crate::error::Result;
use crate::spectral::{GridSpec, RealField, SpectralField, Trajectory};
use crate::sum::NeumaierSum;
use crate::Scalar;

/// Bisection steps when locating a sign change.
const BISECTION_STEPS: usize = 60;

/// A real trigonometric polynomial in closed form.
pub(crate) struct TrigPoly {
    mean: f64,
    /// `(ξ, c)` for each nonzero mode `m > 0`; the value is `2 Re(c e^{iξx})`.
    terms: Vec<(f64, Complex<f64>)>,
    /// Coefficient and wavenumber of the Nyquist cosine.
    nyquist: Option<(f64, f64)>,
}

impl TrigPoly {
    pub fn new(s: &SpectralField<f64>) -> Self {
        let g = s.grid();
        let n = g.n();
        let modes = s.modes();
        // Roundoff-level modes are dropped; they move values by < 1e-15 relative.
        let floor = 1e-15 * modes.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let terms = (1..n / 2)
            .filter(|&i| modes[i].norm() > floor)
            .map(|i| (g.wavenumber(i), modes[i]))
            .collect();
        let c = if modes[n / 2].re.abs() > floor { modes[n / 2].re } else { 0.0 };
        Self {
            mean: if modes[0].re.abs() > floor { modes[0].re } else { 0.0 },
            terms,
            nyquist: (c != 0.0).then(|| (g.max_wavenumber(), c)),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let mut acc = NeumaierSum::new();
        acc.add(self.mean);
        for &(xi, c) in &self.terms {
            let (s, co) = (xi * x).sin_cos();
            acc.add(2.0 * (c.re * co - c.im * s));
        }
        if let Some((xi, c)) = self.nyquist {
            acc.add(c * (xi * x).cos());
        }
        acc.value()
    }

    /// `∫_0^x` of the polynomial.
    pub fn primitive(&self, x: f64) -> f64 {
        let mut acc = NeumaierSum::new();
        acc.add(self.mean * x);
        for &(xi, c) in &self.terms {
            // 2 Re(c (e^{iξx} − 1)/(iξ))
            let (s, co) = (xi * x).sin_cos();
            acc.add(2.0 * (c.re * s + c.im * (co - 1.0)) / xi);
        }
        if let Some((xi, c)) = self.nyquist {
            acc.add(c * (xi * x).sin() / xi);
        }
        acc.value()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn is_zero(&self) -> bool {
        self.mean == 0.0 && self.terms.is_empty() && self.nyquist.is_none()
    }
}

/// Sign changes of a band-limited field over one period.
pub(crate) struct SignPattern {
    length: f64,
    /// Segment starts in `[0, L)`, increasing.
    breaks: Vec<f64>,
    /// Sign on `[breaks[k], breaks[k+1])`, the last segment wrapping around.
    signs: Vec<f64>,
    /// Sign when there are no breaks.
    uniform: f64,
}

impl SignPattern {
    /// Brackets sign changes between samples of `f` on the fine grid and
    /// refines them by bisection on the closed form.
    pub fn of(spec: &SpectralField<f64>, fine: &Fine) -> Self {
        let poly = TrigPoly::new(spec);
        let f = fine.real(spec);
        let g = f.grid();
        let (n, dx, l) = (g.n(), g.dx(), g.length());
        let sgn = |v: f64| {
            if v > 0.0 {
                1.0
            } else if v < 0.0 {
                -1.0
            } else {
                0.0
            }
        };
        if poly.is_zero() {
            return Self {
                length: l,
                breaks: Vec::new(),
                signs: Vec::new(),
                uniform: 0.0,
            };
        }
        let s = f.samples();
        let mut breaks = Vec::new();
        for j in 0..n {
            let (a, b) = (s[j], s[(j + 1) % n]);
            if a == 0.0 {
                breaks.push(j as f64 * dx);
            } else if b != 0.0 && (a > 0.0) != (b > 0.0) {
                let (mut lo, mut hi) = (j as f64 * dx, (j + 1) as f64 * dx);
                let up = a < 0.0;
                for _ in 0..BISECTION_STEPS {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if (poly.value(mid) < 0.0) == up {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let z = 0.5 * (lo + hi);
                breaks.push(if z >= l { z - l } else { z });
            }
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup();
        let k = breaks.len();
        let signs = (0..k)
            .map(|i| {
                let a = breaks[i];
                let b = if i + 1 < k { breaks[i + 1] } else { breaks[0] + l };
                sgn(poly.value(0.5 * (a + b)))
            })
            .collect();
        let uniform = if k == 0 { sgn(poly.value(0.0)) } else { 0.0 };
        Self {
            length: l,
            breaks,
            signs,
            uniform,
        }
    }

    /// `∫_0^L sign(f) g dx` with `g` a trigonometric polynomial.
    pub fn integrate(&self, g: &TrigPoly) -> f64 {
        if self.breaks.is_empty() {
            return self.uniform * g.mean() * self.length;
        }
        let k = self.breaks.len();
        let prim: Vec<f64> = self.breaks.iter().map(|&x| g.primitive(x)).collect();
        let mut acc = NeumaierSum::new();
        for i in 0..k {
            let end = if i + 1 < k {
                prim[i + 1]
            } else {
                prim[0] + g.mean() * self.length
            };
            acc.add(self.signs[i] * (end - prim[i]));
        }
        acc.value()
    }
}

/// Spectra of trajectory frames in `f64`.
pub(crate) fn spectra64<T: Scalar>(traj: &Trajectory<T>) -> Result<Vec<SpectralField<f64>>> {
    let grid = GridSpec::<f64>::new(traj.grid().length().as_f64(), traj.grid().n())?;
    traj.frames()
        .iter()
        .map(|f| Ok(RealField::new(grid.clone(), f.samples().iter().map(|v| v.as_f64()).collect())?.spectrum()))
        .collect()
}

/// Products of band-limited fields evaluated exactly on an oversampled grid.
pub(crate) struct Fine {
    pub n: usize,
}

impl Fine {
    pub fn new(grid_n: usize, factor: usize) -> Self {
        Self { n: grid_n * factor }
    }

    pub fn real(&self, s: &SpectralField<f64>) -> RealField<f64> {
        s.to_real_on(self.n).expect("fine grid is a refinement")
    }
}

/// `∫ sign(f) g dx` for `g` given by samples on the same fine grid as `f`,
/// exact when `g` is resolved there.
pub(crate) fn signed_integral(pattern: &SignPattern, g: &RealField<f64>) -> f64 {
    pattern.integrate(&TrigPoly::new(&g.spectrum()))
}

/// `∫ f dx` by the rectangle rule.
pub(crate) fn plain_integral(f: &RealField<f64>) -> f64 {
    f.integrate()
}

/// Pointwise product of fine-grid fields.
pub(crate) fn product(fields: &[&RealField<f64>]) -> RealField<f64> {
    let mut out = fields[0].clone();
    for f in &fields[1..] {
        out = out.zip_with(f, |a, b| a * b).expect("fine fields share a grid");
    }
    out
}
