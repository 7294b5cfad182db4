//! Quadrature rules and the special functions needed for periodic folding
//! of `dh/h^q` integrals.

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(order: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|&t| mid + half * t).collect(),
        w.iter().map(|&v| half * v).collect(),
    )
}

const BERNOULLI_2J: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{n≥0} (n + a)^{-s}` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "hurwitz_zeta needs s > 1, a > 0");
    let shift = if a >= 12.0 { 0 } else { (12.0 - a).ceil() as usize };
    let mut head = 0.0;
    for k in (0..shift).rev() {
        head += (a + k as f64).powf(-s);
    }
    let b = a + shift as f64;
    let mut tail = b.powf(1.0 - s) / (s - 1.0) + 0.5 * b.powf(-s);
    // Euler-Maclaurin correction terms.
    let mut rising = s; // s (s+1) ... (s + 2j - 2)
    let mut factorial = 2.0; // (2j)!
    let mut power = b.powf(-s - 1.0);
    for (j, b2j) in BERNOULLI_2J.iter().enumerate() {
        tail += b2j / factorial * rising * power;
        let j2 = 2.0 * (j as f64 + 1.0);
        rising *= (s + j2 - 1.0) * (s + j2);
        factorial *= (j2 + 1.0) * (j2 + 2.0);
        power /= b * b;
    }
    head + tail
}

/// Trigamma `ψ₁(x) = Σ_{n≥0} (n + x)^{-2}`.
pub fn trigamma(x: f64) -> f64 {
    hurwitz_zeta(2.0, x)
}

/// Weights of the composite trapezoid rule on uniformly spaced samples.
pub fn trapezoid_weights(n: usize, step: f64) -> Vec<f64> {
    let mut w = vec![step; n];
    if n == 1 {
        w[0] = 0.0;
    } else {
        w[0] *= 0.5;
        w[n - 1] *= 0.5;
    }
    w
}

/// Composite Simpson weights when `n` is odd (≥ 3); trapezoid otherwise.
pub fn simpson_weights(n: usize, step: f64) -> Vec<f64> {
    if n < 3 || n.is_multiple_of(2) {
        return trapezoid_weights(n, step);
    }
    (0..n)
        .map(|i| {
            let c = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * step / 3.0
        })
        .collect()
}

/// Sine integral `Si(x) = ∫_0^x sin(t)/t dt` by its power series; accurate
/// to roundoff for `|x| ≤ 8`.
pub fn sine_integral(x: f64) -> f64 {
    assert!(x.abs() <= 8.0, "sine_integral series used outside |x| <= 8");
    // Σ_k (−1)^k x^{2k+1} / ((2k+1)·(2k+1)!)
    let x2 = x * x;
    let mut power = x;
    let mut total = x;
    for k in 0..60 {
        power *= -x2 / ((2 * k + 2) * (2 * k + 3)) as f64;
        let term = power / (2 * k + 3) as f64;
        total += term;
        if term.abs() < 1e-17 * total.abs() {
            break;
        }
    }
    total
}
