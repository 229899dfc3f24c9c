//! Gaussian subordination measures for the two kernels.
//!
//! Both `F(x) = f1(x/D)` and, for `x > 0`, `H(x) = f(x/D)` are mixtures of
//! Gaussians `e^{-pi lambda x^2}` against non-negative measures on
//! `lambda in (0, inf)`. This module evaluates their densities and the integrals
//! that tie them back to the kernels.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_log_scale, QuadOptions};

/// The measure behind the even kernel (`Nu`) or the odd kernel (`Mu`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    Nu,
    Mu,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubordinationMeasure {
    pub kind: MeasureKind,
    pub delta: f64,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "subordination density",
            value: lambda,
        })
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("width must be positive, got {delta}")))
    }
}

/// Density of the even-case measure:
/// `(1/(2 lambda)) int_{1/2}^{3/2} (e^{-pi lambda (s-1/2)^2 D^2} - e^{-pi lambda D^2}) ds`.
pub fn nu_density(lambda: f64, delta: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_delta(delta)?;
    let c = PI * lambda * delta * delta;
    // int_0^1 e^{-c u^2} du - e^{-c}
    let bracket = if c <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0; // (-c)^k / k!
        for k in 1..60 {
            term *= -c / k as f64;
            let kf = k as f64;
            let add = term * (-2.0 * kf / (2.0 * kf + 1.0));
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        let r = c.sqrt();
        libm::erf(r) * PI.sqrt() / (2.0 * r) - (-c).exp()
    };
    Ok(bracket / (2.0 * lambda))
}

/// `2a e^{-a^2} (1 + 2a^2) h(a)`: the Gaussian-damped `sin y - y cos y` integral
/// at scale `a`, written so that every term is non-negative.
fn damped_oscillation(a: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if a > 20.0 {
        // sum_j c_j (2j + 2) a^{-2j}, c_j = (2j-1)!! / 2^j
        let q = 1.0 / (a * a);
        let mut c = 1.0;
        let mut power = 1.0;
        let mut sum = 0.0;
        for j in 0..30 {
            let jf = j as f64;
            let term = c * (2.0 * jf + 2.0) * power;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            c *= (2.0 * jf + 1.0) / 2.0;
            power *= q;
        }
        return sum;
    }
    let opts = QuadOptions::with_abs(0.0).rel(1e-14).budget(400);
    let a2 = a * a;
    let inner = integrate(
        |w: f64| {
            let s = 1.0 + 2.0 * w * w;
            (w * w - a2).exp() * 4.0 * w * w / (s * s)
        },
        0.0,
        a,
        &opts,
    );
    2.0 * a * (1.0 + 2.0 * a2) * inner.value
}

/// Density of the odd-case measure, `D(lambda) >= 0`.
pub fn mu_density(lambda: f64, delta: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_delta(delta)?;
    let a = (PI * lambda).sqrt() * delta;
    Ok(damped_oscillation(a) / (2.0 * PI * delta * lambda.powf(1.5)))
}

/// The same density from the oscillatory `y`-integral. Slow, and loses digits
/// once `pi D^2 lambda` is large; kept as a cross-check.
pub fn mu_density_oscillatory(lambda: f64, delta: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_delta(delta)?;
    let a = (PI * lambda).sqrt() * delta;
    let y_max = 2.0 * a * 9.0;
    let inv = 1.0 / (4.0 * a * a);
    let opts = QuadOptions::with_abs(1e-13).budget(20_000);
    let cells = (y_max / PI).ceil().max(1.0) as usize;
    let step = y_max / cells as f64;
    let mut total = 0.0;
    for k in 0..cells {
        let lo = k as f64 * step;
        total += integrate(
            |y: f64| (-(y * y) * inv).exp() * (y.sin() - y * y.cos()),
            lo,
            lo + step,
            &opts,
        )
        .value;
    }
    Ok(total / (2.0 * PI * delta * lambda.powf(1.5)))
}

/// `int_0^a e^{w^2} dw - a e^{a^2} / (1 + 2a^2)`, evaluated as the integral of
/// its non-negative derivative.
pub fn h_witness(a: f64) -> Result<f64> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain {
            what: "non-negativity witness",
            value: a,
        });
    }
    let opts = QuadOptions::with_abs(0.0).rel(1e-14).budget(400);
    Ok(integrate(
        |w: f64| {
            let s = 1.0 + 2.0 * w * w;
            (w * w).exp() * 4.0 * w * w / (s * s)
        },
        0.0,
        a,
        &opts,
    )
    .value)
}

/// The inner `lambda`-integral
/// `int_0^inf e^{-pi lambda x^2 - y^2/(4 pi D^2 lambda)} y / (2 pi D lambda^{3/2}) d lambda`,
/// which equals `e^{-xy/D}`.
pub fn w_kernel(x: f64, y: f64, delta: f64) -> Result<f64> {
    for (what, v) in [("W kernel x", x), ("W kernel y", y), ("W kernel width", delta)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain { what, value: v });
        }
    }
    let c = y * y / (4.0 * PI * delta * delta);
    let peak = y / (2.0 * PI * delta * x);
    let scale = y / (2.0 * PI * delta);
    let r = integrate_log_scale(
        |l| (-PI * l * x * x - c / l).exp() * scale / l.powf(1.5),
        peak,
        &QuadOptions::with_abs(1e-13),
    )?;
    Ok(r.value)
}

impl SubordinationMeasure {
    pub fn new(kind: MeasureKind, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        Ok(SubordinationMeasure { kind, delta })
    }

    pub fn density(&self, lambda: f64) -> Result<f64> {
        match self.kind {
            MeasureKind::Nu => nu_density(lambda, self.delta),
            MeasureKind::Mu => mu_density(lambda, self.delta),
        }
    }

    /// Mass the measure should carry: 1 for `Nu`, `pi/2` for `Mu`.
    pub fn expected_mass(&self) -> f64 {
        match self.kind {
            MeasureKind::Nu => 1.0,
            MeasureKind::Mu => PI / 2.0,
        }
    }

    /// `int_0^inf e^{-pi lambda x^2} d measure(lambda)`; `x = 0` gives the total mass.
    pub fn gaussian_transform(&self, x: f64, tol: f64) -> Result<f64> {
        // scale at which the density turns over
        let knee = 1.0 / (PI * self.delta * self.delta);
        let center = if x == 0.0 { knee } else { knee.min(1.0 / (PI * x * x)) };
        let mut err = None;
        let r = integrate_log_scale(
            |l| match self.density(l) {
                Ok(d) => (-PI * l * x * x).exp() * d,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            center,
            &QuadOptions::with_abs(tol),
        )?;
        if let Some(e) = err {
            return Err(e);
        }
        r.require_converged(tol).map(|r| r.value)
    }

    pub fn total_mass(&self, tol: f64) -> Result<f64> {
        self.gaussian_transform(0.0, tol)
    }
}

/// Small-`lambda` slopes of the two densities: `nu -> pi D^2 / 3` and
/// `mu ~ (4 pi / 3) D^3 sqrt(lambda)`.
pub fn small_lambda_limits(delta: f64) -> (f64, f64) {
    (PI * delta * delta / 3.0, 4.0 * PI / 3.0 * delta.powi(3))
}

/// Large-`lambda` behaviour: `nu ~ 1/(4 D lambda^{3/2})`, `mu ~ 1/(pi D lambda^{3/2})`.
pub fn large_lambda_coefficients(delta: f64) -> (f64, f64) {
    (1.0 / (4.0 * delta), 1.0 / (PI * delta))
}
