use std::fmt;

use crate::error::{domain, Result};

/// Exponent triple `(s, p, r)`; `p` and `r` may be `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

impl BesovParams {
    pub fn new(s: f64, p: f64, r: f64) -> Result<Self> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(domain(format!("smoothness must be finite and ≥ 0, got {s}")));
        }
        for (name, v) in [("p", p), ("r", r)] {
            if !(v >= 1.0) {
                return Err(domain(format!("{name} must lie in [1, ∞], got {v}")));
            }
        }
        Ok(Self { s, p, r })
    }

    /// Hölder conjugate `q'` with `1/q + 1/q' = 1`.
    pub fn conjugate(q: f64) -> f64 {
        if q == 1.0 {
            f64::INFINITY
        } else if q.is_infinite() {
            1.0
        } else {
            q / (q - 1.0)
        }
    }

    /// `(1 − s, p', r')`, the partner exponents in the duality estimate.
    pub fn dual(&self) -> Self {
        Self {
            s: 1.0 - self.s,
            p: Self::conjugate(self.p),
            r: Self::conjugate(self.r),
        }
    }

    /// The triple obtained by interpolating `a` and `b` with weight `theta` on `a`.
    pub fn interpolate(a: &Self, b: &Self, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(domain(format!("θ must lie in (0, 1), got {theta}")));
        }
        let inv = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
        let back = |x: f64| if x == 0.0 { f64::INFINITY } else { 1.0 / x };
        Self::new(
            theta * a.s + (1.0 - theta) * b.s,
            back(theta * inv(a.p) + (1.0 - theta) * inv(b.p)),
            back(theta * inv(a.r) + (1.0 - theta) * inv(b.r)),
        )
    }

    /// The finite-difference characterization needs `s ∈ (0, 1)`, or `s = 1`
    /// with `p = r = 2`.
    pub fn check_fd(&self) -> Result<()> {
        let ok = (self.s > 0.0 && self.s < 1.0) || (self.s == 1.0 && self.p == 2.0 && self.r == 2.0);
        if ok {
            Ok(())
        } else {
            Err(domain(format!(
                "finite-difference norm needs s in (0,1) (or s = 1 with p = r = 2), got {self}"
            )))
        }
    }
}

impl fmt::Display for BesovParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: f64| if x.is_infinite() { "inf".to_string() } else { format!("{x}") };
        write!(f, "B^{}_{{{},{}}}", self.s, show(self.p), show(self.r))
    }
}

/// Unresolved estimates have at least this share of their value in the outer cells.
pub const TAIL_FLAG_THRESHOLD: f64 = 0.05;

/// A norm value with quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    /// Offset achieving the supremum (`r = ∞` finite-difference estimates only).
    pub h_argmax: Option<f64>,
    /// Share of the value carried by the outermost quadrature cells and
    /// modelled tails.
    pub tail_fraction: f64,
}

impl NormEstimate {
    pub fn flagged(&self) -> bool {
        !(self.tail_fraction < TAIL_FLAG_THRESHOLD)
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            ..self
        }
    }
}
