//! Both sides of the Guinand-Weil explicit formula,
//!
//! ```text
//! sum_rho h(gamma) = h(i/2) + h(-i/2) - (1/2 pi) h^(0) log pi
//!                    + (1/2 pi) int h(u) Re psi(1/4 + iu/2) du
//!                    - (1/2 pi) sum_n Lambda(n)/sqrt(n) [h^(log n / 2 pi) + h^(-log n / 2 pi)]
//! ```
//!
//! evaluated for Gaussians, for extremal functions shifted to a height `t`, and
//! for caller-supplied pairs `(h, h^)`. The sum over zeros runs over `+gamma`
//! and `-gamma`. Truncation budgets are heuristic size estimates, not proofs.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::{envelope_constant, ExtremalSeries};
use crate::gamma::digamma;
use crate::quadrature::{integrate, QuadOptions};
use crate::sieve::VonMangoldt;
use crate::zeros::ZeroTable;

/// Accuracy assumed for tabulated ordinates.
pub const ORDINATE_ERROR: f64 = 5e-11;

/// Gaussians are treated as zero beyond this many widths from their center.
const GAUSSIAN_REACH: f64 = 12.0;

/// Upper bound for Chebyshev's `psi(x) / x`.
const CHEBYSHEV_RATIO: f64 = 1.039;

/// `Re psi(1/4 + iu/2)`.
pub fn digamma_real_part(u: f64) -> f64 {
    digamma(Complex64::new(0.25, 0.5 * u)).re
}

type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;
type TransformFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A test function given by closures for `h` and its Fourier transform.
///
/// `h` must be negligible outside `[center - radius, center + radius]`, up to
/// `tail_bound` in total, and `h^` must vanish for `|xi| > ft_support` when
/// that is given.
#[derive(Clone)]
pub struct CustomTest {
    pub h: ComplexFn,
    pub transform: TransformFn,
    pub center: f64,
    pub radius: f64,
    pub ft_support: Option<f64>,
    pub tail_bound: f64,
}

impl std::fmt::Debug for CustomTest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CustomTest")
            .field("center", &self.center)
            .field("radius", &self.radius)
            .field("ft_support", &self.ft_support)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub enum TestFunction {
    /// `exp(-pi ((u - center) / width)^2)`.
    Gaussian {
        center: f64,
        width: f64,
    },
    /// `u -> g(t - u)` for an extremal function `g`.
    ShiftedExtremal {
        series: Arc<ExtremalSeries>,
        t: f64,
    },
    Custom(CustomTest),
}

impl TestFunction {
    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() || !center.is_finite() {
            return Err(Error::Validation(format!(
                "Gaussian needs finite center and positive width, got ({center}, {width})"
            )));
        }
        Ok(TestFunction::Gaussian { center, width })
    }

    pub fn shifted(series: Arc<ExtremalSeries>, t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::Validation(format!("shift must be finite, got {t}")));
        }
        Ok(TestFunction::ShiftedExtremal { series, t })
    }

    /// `h(z)` at a complex point.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            TestFunction::Gaussian { center, width } => {
                let w = (z - center) / width;
                Ok((-PI * w * w).exp())
            }
            TestFunction::ShiftedExtremal { series, t } => series.eval(Complex64::new(*t, 0.0) - z),
            TestFunction::Custom(c) => Ok((c.h)(z)),
        }
    }

    pub fn eval_real(&self, u: f64) -> f64 {
        match self {
            TestFunction::Gaussian { center, width } => {
                let w = (u - center) / width;
                (-PI * w * w).exp()
            }
            TestFunction::ShiftedExtremal { series, t } => series.eval_real(t - u),
            TestFunction::Custom(c) => (c.h)(Complex64::new(u, 0.0)).re,
        }
    }

    fn derivative_real(&self, u: f64) -> f64 {
        match self {
            TestFunction::Gaussian { center, width } => {
                let w = (u - center) / width;
                -2.0 * PI * w / width * (-PI * w * w).exp()
            }
            _ => {
                let step = 1e-6 * u.abs().max(1.0);
                (self.eval_real(u + step) - self.eval_real(u - step)) / (2.0 * step)
            }
        }
    }

    /// `h^(xi) = int h(u) e^{-2 pi i u xi} du`.
    pub fn transform(&self, xi: f64) -> Complex64 {
        match self {
            TestFunction::Gaussian { center, width } => {
                let a = width * width * xi * xi;
                Complex64::from_polar(width * (-PI * a).exp(), -2.0 * PI * xi * center)
            }
            TestFunction::ShiftedExtremal { series, t } => {
                series.fourier_transform(-xi) * Complex64::from_polar(1.0, -2.0 * PI * xi * t)
            }
            TestFunction::Custom(c) => (c.transform)(xi),
        }
    }

    /// Where the mass of `h` sits on the real line.
    pub fn center(&self) -> f64 {
        match self {
            TestFunction::Gaussian { center, .. } => *center,
            TestFunction::ShiftedExtremal { t, .. } => *t,
            TestFunction::Custom(c) => c.center,
        }
    }

    /// `h^` vanishes outside `[-s, s]`.
    pub fn ft_support(&self) -> Option<f64> {
        match self {
            TestFunction::Gaussian { .. } => None,
            TestFunction::ShiftedExtremal { series, .. } => Some(series.delta()),
            TestFunction::Custom(c) => c.ft_support,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BalanceOptions {
    pub quadrature_tol: f64,
    /// Half-width of the window over which zeros and the archimedean integral
    /// are summed for slowly decaying test functions. Defaults to
    /// `max(1000, 50 / delta)`.
    pub window: Option<f64>,
    /// Largest `n` in the prime sum. Defaults to `e^{2 pi s}` for transforms
    /// supported in `[-s, s]`, otherwise to the table cutoff.
    pub lambda_cutoff: Option<u64>,
}

impl Default for BalanceOptions {
    fn default() -> Self {
        BalanceOptions {
            quadrature_tol: 1e-10,
            window: None,
            lambda_cutoff: None,
        }
    }
}

/// Breakdown of the truncation budget.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Budget {
    pub zero_tail: f64,
    pub archimedean_tail: f64,
    pub prime_tail: f64,
    pub quadrature: f64,
    pub ordinates: f64,
    pub rounding: f64,
}

impl Budget {
    pub fn total(&self) -> f64 {
        self.zero_tail + self.archimedean_tail + self.prime_tail + self.quadrature + self.ordinates + self.rounding
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BalanceReport {
    pub zero_side: f64,
    pub pole_terms: f64,
    pub log_pi_term: f64,
    pub archimedean: f64,
    pub prime_side: f64,
    pub residual: f64,
    pub truncation_budget: f64,
    pub budget: Budget,
    pub zeros_used: usize,
    pub prime_cutoff: u64,
}

impl BalanceReport {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        zero_side: f64,
        pole_terms: f64,
        log_pi_term: f64,
        archimedean: f64,
        prime_side: f64,
        budget: Budget,
        zeros_used: usize,
        prime_cutoff: u64,
    ) -> Self {
        let residual = zero_side - (pole_terms + log_pi_term + archimedean - prime_side);
        BalanceReport {
            zero_side,
            pole_terms,
            log_pi_term,
            archimedean,
            prime_side,
            residual,
            truncation_budget: budget.total(),
            budget,
            zeros_used,
            prime_cutoff,
        }
    }

    pub fn within_budget(&self) -> bool {
        self.residual.abs() <= self.truncation_budget
    }
}

/// `(1/2 pi) sum_{n <= cutoff} Lambda(n)/sqrt(n) [h^(log n/2 pi) + h^(-log n/2 pi)]`.
pub fn prime_side(transform: impl Fn(f64) -> Complex64, lambda: &VonMangoldt, cutoff: u64) -> Result<f64> {
    if cutoff > lambda.cutoff() {
        return Err(Error::Validation(format!(
            "prime cutoff {cutoff} exceeds the sieved range {}",
            lambda.cutoff()
        )));
    }
    let mut acc = 0.0;
    for (n, l) in lambda.iter_to(cutoff) {
        let xi = (n as f64).ln() / (2.0 * PI);
        acc += l / (n as f64).sqrt() * (transform(xi) + transform(-xi)).re;
    }
    Ok(acc / (2.0 * PI))
}

/// `(1/2 pi) int h(u) Re psi(1/4 + iu/2) du` over `[a, b]`, split into pieces
/// of length at most `piece`. Returns the value and the quadrature error.
fn archimedean_window(h: &TestFunction, a: f64, b: f64, piece: f64, tol: f64) -> (f64, f64) {
    let cells = ((b - a) / piece).ceil().max(1.0) as usize;
    let step = (b - a) / cells as f64;
    let opts = QuadOptions::with_abs(tol / cells as f64);
    let mut value = 0.0;
    let mut err = 0.0;
    for k in 0..cells {
        let lo = a + step * k as f64;
        let r = integrate(|u| h.eval_real(u) * digamma_real_part(u), lo, lo + step, &opts);
        value += r.value;
        err += r.error_estimate;
    }
    (value / (2.0 * PI), err / (2.0 * PI))
}

/// The archimedean term of the formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Archimedean {
    pub value: f64,
    pub quadrature_error: f64,
    /// Bound on the part outside the integration window.
    pub tail_bound: f64,
}

/// `(1/2 pi) int h(u) Re psi(1/4 + iu/2) du`. Slowly decaying test functions
/// are integrated over `window` around their center (see [`BalanceOptions`]).
pub fn archimedean_integral(h: &TestFunction, tol: f64, window: Option<f64>) -> Archimedean {
    let (value, quadrature_error, tail_bound) = match h {
        TestFunction::Gaussian { center, width } => {
            let r = GAUSSIAN_REACH * width;
            let (v, e) = archimedean_window(h, center - r, center + r, *width, tol);
            (v, e, 0.0)
        }
        TestFunction::ShiftedExtremal { series, t } => {
            let w = window.unwrap_or_else(|| default_window(series.delta()));
            let (v, e) = archimedean_window(h, t - w, t + w, 1.0 / series.delta(), tol);
            (v, e, extremal_archimedean_tail(series, *t, w))
        }
        TestFunction::Custom(c) => {
            let (v, e) = archimedean_window(h, c.center - c.radius, c.center + c.radius, 1.0, tol);
            (v, e, c.tail_bound)
        }
    };
    Archimedean {
        value,
        quadrature_error,
        tail_bound,
    }
}

fn default_window(delta: f64) -> f64 {
    (50.0 / delta).max(1000.0)
}

/// Zero density `(1/2 pi) log(t / 2 pi)` at height `t`, kept positive.
fn density(t: f64) -> f64 {
    ((t.abs().max(2.0 * PI * 2.0) / (2.0 * PI)).ln() / (2.0 * PI)).max(0.1)
}

/// Bound on `(1/2 pi) int_{|x| > w} C/x^2 |Re psi(1/4 + i(t-x)/2)| dx`.
fn extremal_archimedean_tail(series: &ExtremalSeries, t: f64, w: f64) -> f64 {
    let c = envelope_constant(series.parity());
    // |Re psi(1/4 + iu/2)| <= log(2 + |u|) + 4 and int_w^inf log(t + x + 2)/x^2 dx
    let integral = ((t.abs() + w + 2.0).ln() + 4.0) / w + ((t.abs() + w + 2.0) / w).ln() / (t.abs() + 2.0);
    2.0 * c * integral / (2.0 * PI)
}

/// `int_V^inf e^{v/2 - a v^2} dv` with `a = width^2 / (4 pi)`.
fn gaussian_prime_tail_integral(v: f64, width: f64) -> f64 {
    let a = width * width / (4.0 * PI);
    let shift = 1.0 / (4.0 * a);
    (shift / 4.0).exp() * (PI / a).sqrt() / 2.0 * libm::erfc(a.sqrt() * (v - shift))
}

/// Estimated size of the prime sum beyond `cutoff` for a Gaussian of this width.
pub fn gaussian_prime_tail(width: f64, cutoff: u64) -> f64 {
    let v = (cutoff as f64).ln();
    CHEBYSHEV_RATIO * 2.0 * width * gaussian_prime_tail_integral(v, width) / (2.0 * PI)
}

/// Smallest cutoff whose Gaussian prime tail falls below `tol`.
pub fn gaussian_prime_cutoff(width: f64, tol: f64) -> u64 {
    let mut v = 1.0f64;
    while gaussian_prime_tail(width, v.exp() as u64) > tol && v < 60.0 {
        v += 0.05;
    }
    v.exp().ceil() as u64
}

/// Evaluates both sides of the explicit formula for `h`.
pub fn balance(
    h: &TestFunction,
    zeros: &ZeroTable,
    lambda: &VonMangoldt,
    opts: &BalanceOptions,
) -> Result<BalanceReport> {
    let tol = opts.quadrature_tol;
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    let hmax = zeros.height_max();
    let mut budget = Budget::default();

    // which ordinates to sum, and the tail left out
    let (lo, hi) = match h {
        TestFunction::Gaussian { center, width } => {
            let reach = GAUSSIAN_REACH * width;
            if center + reach > hmax {
                return Err(Error::Coverage {
                    requested: center + reach,
                    available: hmax,
                });
            }
            (0.0, hmax)
        }
        TestFunction::ShiftedExtremal { series, t } => {
            let w = opts.window.unwrap_or_else(|| default_window(series.delta()));
            if t + w > hmax {
                return Err(Error::Coverage {
                    requested: t + w,
                    available: hmax,
                });
            }
            let c = envelope_constant(series.parity());
            budget.zero_tail = 2.0 * c * density(t + w) / w;
            (t - w, t + w)
        }
        TestFunction::Custom(c) => {
            if c.center + c.radius > hmax {
                return Err(Error::Coverage {
                    requested: c.center + c.radius,
                    available: hmax,
                });
            }
            budget.zero_tail = c.tail_bound;
            (c.center - c.radius, c.center + c.radius)
        }
    };

    let mut zero_side = 0.0;
    let mut magnitude = 0.0;
    let mut slope_sum = 0.0;
    let mut used = 0;
    for &g in zeros.ordinates() {
        // +gamma inside the window, and -gamma when the window reaches below 0
        for u in [g, -g] {
            if u >= lo && u <= hi {
                let v = h.eval_real(u);
                zero_side += v;
                magnitude += v.abs();
                slope_sum += h.derivative_real(u).abs();
                used += 1;
            }
        }
    }
    budget.ordinates = ORDINATE_ERROR * slope_sum;

    let poles = h.eval(Complex64::new(0.0, 0.5))? + h.eval(Complex64::new(0.0, -0.5))?;
    let pole_terms = poles.re;
    let log_pi_term = -h.transform(0.0).re * PI.ln() / (2.0 * PI);

    let arch = archimedean_integral(h, tol, opts.window);
    budget.quadrature = arch.quadrature_error;
    budget.archimedean_tail = arch.tail_bound;
    let archimedean = arch.value;

    let cutoff = match (opts.lambda_cutoff, h.ft_support(), h) {
        (Some(n), _, _) => n,
        (None, Some(s), _) => {
            let n = (2.0 * PI * s).exp().floor();
            if n > lambda.cutoff() as f64 {
                return Err(Error::Validation(format!(
                    "transform support {s} needs primes up to {n:e}, table stops at {}",
                    lambda.cutoff()
                )));
            }
            n as u64
        }
        (None, None, TestFunction::Gaussian { width, .. }) => {
            gaussian_prime_cutoff(*width, 0.1 * tol).min(lambda.cutoff())
        }
        (None, None, _) => lambda.cutoff(),
    };
    let prime = prime_side(|xi| h.transform(xi), lambda, cutoff.max(1).min(lambda.cutoff()))?;
    budget.prime_tail = match (h.ft_support(), h) {
        (Some(s), _) if (2.0 * PI * s).exp() < cutoff as f64 + 1.0 => 0.0,
        (_, TestFunction::Gaussian { width, .. }) => gaussian_prime_tail(*width, cutoff),
        (_, TestFunction::Custom(c)) => c.tail_bound,
        _ => f64::INFINITY,
    };
    budget.rounding = 64.0 * f64::EPSILON * (magnitude + archimedean.abs() + prime.abs() + 1.0);

    Ok(BalanceReport::assemble(
        zero_side,
        pole_terms,
        log_pi_term,
        archimedean,
        prime,
        budget,
        used,
        cutoff,
    ))
}
