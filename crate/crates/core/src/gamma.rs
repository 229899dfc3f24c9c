//! Complex log-gamma and digamma for `Re z > 0`, via upward recurrence and the
//! Stirling series, plus the Riemann-Siegel theta function built on them.

use std::f64::consts::PI;

use num_complex::Complex64;

// B_{2k} for k = 1..=7.
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

const SHIFT_RADIUS: f64 = 16.0;

fn shift(z: Complex64) -> (Complex64, usize) {
    let mut w = z;
    let mut n = 0;
    while w.norm() < SHIFT_RADIUS {
        w += 1.0;
        n += 1;
    }
    (w, n)
}

/// Principal branch of `ln Gamma(z)` for `Re z > 0`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let (w, n) = shift(z);
    let mut acc = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let w2 = (w * w).inv();
    let mut wp = w.inv();
    for (k, b) in BERNOULLI.iter().enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        acc += wp * (b / (m * (m - 1.0)));
        wp *= w2;
    }
    for k in 0..n {
        acc -= (z + k as f64).ln();
    }
    acc
}

/// `psi(z) = Gamma'(z)/Gamma(z)` for `Re z > 0`.
pub fn digamma(z: Complex64) -> Complex64 {
    let (w, n) = shift(z);
    let mut acc = w.ln() - 0.5 * w.inv();
    let w2 = (w * w).inv();
    let mut wp = w2;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        acc -= wp * (b / m);
        wp *= w2;
    }
    for k in 0..n {
        acc -= (z + k as f64).inv();
    }
    acc
}

/// Riemann-Siegel theta: `Im ln Gamma(1/4 + it/2) - (t/2) ln pi`.
pub fn rs_theta(t: f64) -> f64 {
    if t < 0.0 {
        return -rs_theta(-t);
    }
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

/// Asymptotic expansion of [`rs_theta`], accurate to round-off for `t >= 40`.
pub fn rs_theta_asymptotic(t: f64) -> f64 {
    let r = 1.0 / t;
    let r2 = r * r;
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0
        + r * (1.0 / 48.0 + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0 + r2 * (127.0 / 430080.0))))
}

/// Antiderivative of [`rs_theta_asymptotic`] (up to a constant).
pub fn rs_theta_asymptotic_antiderivative(t: f64) -> f64 {
    let r2 = 1.0 / (t * t);
    0.25 * t * t * (t / (2.0 * PI)).ln() - 0.375 * t * t - PI * t / 8.0 + t.ln() / 48.0
        - r2 * (7.0 / 11520.0 + r2 * (31.0 / 322560.0 + r2 * (127.0 / 2580480.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn real_values() {
        assert!(ln_gamma(Complex64::new(1.0, 0.0)).norm() < 1e-13);
        assert!((ln_gamma(Complex64::new(0.5, 0.0)).re - 0.5 * PI.ln()).abs() < 1e-13);
        assert!((ln_gamma(Complex64::new(10.0, 0.0)).re - 362880f64.ln()).abs() < 1e-13);
        assert!((digamma(Complex64::new(1.0, 0.0)).re + EULER_GAMMA).abs() < 1e-14);
        let quarter = -EULER_GAMMA - PI / 2.0 - 3.0 * 2f64.ln();
        assert!((digamma(Complex64::new(0.25, 0.0)).re - quarter).abs() < 1e-14);
    }

    #[test]
    fn reflection_modulus_on_half_line() {
        // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        for &y in &[0.3, 2.0, 7.5, 30.0] {
            let lg = ln_gamma(Complex64::new(0.5, y)).re;
            assert!((2.0 * lg - (PI / (PI * y).cosh()).ln()).abs() < 1e-12, "{y}");
        }
    }

    #[test]
    fn digamma_is_log_gamma_derivative() {
        let z = Complex64::new(0.25, 3.7);
        let h = 1e-5;
        let fd = (ln_gamma(z + h) - ln_gamma(z - h)) / (2.0 * h);
        assert!((fd - digamma(z)).norm() < 1e-9);
    }

    #[test]
    fn theta_branches_agree() {
        // first Gram point: theta = 0 at t ~ 17.8455995
        assert!(rs_theta(17.845_599_540_7).abs() < 1e-8);
        for &t in &[40.0, 100.0, 1e4, 7.5e4] {
            let a = rs_theta(t);
            let b = rs_theta_asymptotic(t);
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "{t}: {a} {b}");
        }
    }

    #[test]
    fn antiderivative() {
        let (a, b) = (50.0, 50.001);
        let fd = (rs_theta_asymptotic_antiderivative(b) - rs_theta_asymptotic_antiderivative(a)) / (b - a);
        assert!((fd - rs_theta_asymptotic(0.5 * (a + b))).abs() < 1e-6);
    }
}
