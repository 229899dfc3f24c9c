//! Adaptive Gauss-Kronrod integration with an error estimate on every result.
//!
//! Finite intervals use a globally adaptive G7/K15 scheme: the interval with the
//! largest error estimate is bisected until the summed estimate meets the
//! tolerance or the interval budget runs out. Half-infinite ranges are handled
//! by [`integrate_to_infinity`] under an explicit [`TailModel`] which is checked
//! against the integrand rather than trusted.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated: real or complex.
pub trait Quadrand: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(self) -> f64;
}

impl Quadrand for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Quadrand for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult<T = f64> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: Quadrand> QuadratureResult<T> {
    /// Returns the result, or a quadrature error if the tolerance was missed.
    pub fn require_converged(self, tolerance: f64) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Quadrature {
                estimate: self.error_estimate,
                tolerance,
            })
        }
    }

    fn combine(self, other: Self) -> Self {
        QuadratureResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }
}

/// Endpoints at which the integrand may be singular (never evaluated there).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Singular {
    #[default]
    Neither,
    Left,
    Right,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    pub singular: Singular,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_intervals: 2000,
            singular: Singular::Neither,
        }
    }
}

impl QuadOptions {
    pub fn with_abs(abs_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            ..Default::default()
        }
    }

    pub fn rel(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn budget(mut self, max_intervals: usize) -> Self {
        self.max_intervals = max_intervals;
        self
    }

    pub fn singular(mut self, singular: Singular) -> Self {
        self.singular = singular;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<T: Quadrand, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    let mut abs_k = fc.magnitude() * WGK[7];
    let mut f1 = [T::default(); 7];
    let mut f2 = [T::default(); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let lo = f(center - dx);
        let hi = f(center + dx);
        f1[j] = lo;
        f2[j] = hi;
        kron = kron + (lo + hi) * WGK[j];
        abs_k += (lo.magnitude() + hi.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (lo + hi) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut asc = WGK[7] * (fc - mean).magnitude();
    for j in 0..7 {
        asc += WGK[j] * ((f1[j] - mean).magnitude() + (f2[j] - mean).magnitude());
    }
    let scale = half.abs();
    let resabs = abs_k * scale;
    let resasc = asc * scale;
    let mut err = (kron - gauss).magnitude() * scale;
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (kron * half, err)
}

fn graded_mesh(a: f64, b: f64, singular: Singular) -> Vec<f64> {
    const LEVELS: i32 = 30;
    let mut pts = vec![a];
    match singular {
        Singular::Neither => {}
        Singular::Left => {
            for k in (1..=LEVELS).rev() {
                pts.push(a + (b - a) * 0.5f64.powi(k));
            }
        }
        Singular::Right => {
            for k in 1..=LEVELS {
                pts.push(b - (b - a) * 0.5f64.powi(k));
            }
        }
        Singular::Both => {
            let mid = 0.5 * (a + b);
            for k in (1..=LEVELS).rev() {
                pts.push(a + (mid - a) * 0.5f64.powi(k));
            }
            pts.push(mid);
            for k in 1..=LEVELS {
                pts.push(b - (b - mid) * 0.5f64.powi(k));
            }
        }
    }
    pts.push(b);
    pts.dedup();
    pts
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// The returned estimate is the smallest seen during refinement, so raising the
/// interval budget never makes it worse.
pub fn integrate<T, F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> QuadratureResult<T>
where
    T: Quadrand,
    F: FnMut(f64) -> T,
{
    if a == b {
        return QuadratureResult {
            value: T::default(),
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    let mesh = graded_mesh(a, b, opts.singular);
    let mut heap = BinaryHeap::with_capacity(opts.max_intervals + mesh.len());
    let mut evaluations = 0usize;
    for w in mesh.windows(2) {
        let (value, error) = kronrod(&mut f, w[0], w[1]);
        evaluations += 15;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    let totals = |heap: &BinaryHeap<Segment<T>>| {
        heap.iter()
            .fold((T::default(), 0.0), |(v, e), s| (v + s.value, e + s.error))
    };
    let (mut value, mut error) = totals(&heap);
    let mut best = (value, error);
    let mut steps = 0usize;
    while error > opts.target(value.magnitude()) && heap.len() < opts.max_intervals.max(mesh.len()) {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            heap.push(worst);
            break;
        }
        let (v1, e1) = kronrod(&mut f, worst.a, mid);
        let (v2, e2) = kronrod(&mut f, mid, worst.b);
        evaluations += 30;
        value = value + v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        steps += 1;
        if steps % 64 == 0 {
            (value, error) = totals(&heap);
        }
        if error < best.1 {
            best = (value, error);
        }
    }
    (value, error) = totals(&heap);
    if error <= best.1 {
        best = (value, error);
    }
    QuadratureResult {
        value: best.0,
        error_estimate: best.1,
        evaluations,
        converged: best.1 <= opts.target(best.0.magnitude()),
    }
}

/// Asymptotic behaviour assumed for the integrand beyond the finite window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailModel {
    /// `|f(x)| <= C x^-p` with `p > 1`.
    PolyDecay(f64),
    /// `|f(x)| <= C e^{-r x}` for some unknown `r > 0`.
    ExpDecay,
}

/// Integrates `f` over `[a, inf)`.
///
/// Fails with [`Error::TailModel`] when the integrand visibly contradicts the
/// declared model, and with [`Error::Parameter`] for `PolyDecay(p)` with
/// `p <= 1`.
pub fn integrate_to_infinity<T, F>(
    mut f: F,
    a: f64,
    model: TailModel,
    opts: &QuadOptions,
) -> Result<QuadratureResult<T>>
where
    T: Quadrand,
    F: FnMut(f64) -> T,
{
    match model {
        TailModel::PolyDecay(p) => {
            if !(p > 1.0) {
                return Err(Error::Parameter(format!(
                    "polynomial tail exponent must exceed 1, got {p}"
                )));
            }
            let b = (2.0 * a.abs()).max(a + 1.0).max(1.0);
            let half = QuadOptions {
                abs_tol: 0.5 * opts.abs_tol,
                ..*opts
            };
            let head = integrate(&mut f, a, b, &half);
            let tail_opts = QuadOptions {
                singular: if p < 2.0 { Singular::Left } else { Singular::Neither },
                ..half
            };
            let tail = integrate(|u: f64| f(b / u) * (b / (u * u)), 0.0, 1.0, &tail_opts);
            let model_bound = f(b).magnitude() * b / (p - 1.0);
            if tail.value.magnitude() > 10.0 * model_bound + opts.abs_tol {
                return Err(Error::TailModel(format!(
                    "tail beyond {b} integrates to {:e}, model allows {:e}",
                    tail.value.magnitude(),
                    model_bound
                )));
            }
            Ok(head.combine(tail))
        }
        TailModel::ExpDecay => {
            const MAX_WINDOWS: usize = 64;
            let piece_opts = QuadOptions {
                abs_tol: opts.abs_tol / 8.0,
                ..*opts
            };
            let first_opts = QuadOptions {
                singular: match opts.singular {
                    Singular::Left | Singular::Both => Singular::Left,
                    _ => Singular::Neither,
                },
                ..piece_opts
            };
            let mut acc = integrate(&mut f, a, a + 1.0, &first_opts);
            let mut lo = a + 1.0;
            let mut width = 2.0;
            let mut f_lo = f(lo).magnitude();
            for _ in 0..MAX_WINDOWS {
                let hi = lo + width;
                let piece = integrate(&mut f, lo, hi, &piece_opts);
                let f_hi = f(hi).magnitude();
                acc = acc.combine(piece);
                let small_piece = piece.value.magnitude() <= opts.abs_tol;
                if f_hi == 0.0 && small_piece {
                    return Ok(acc);
                }
                if f_lo > 0.0 && f_hi > 0.0 && f_hi < f_lo {
                    let rate = (f_lo / f_hi).ln() / width;
                    let tail = f_hi / rate;
                    if small_piece && tail <= 0.25 * opts.abs_tol {
                        acc.error_estimate += tail;
                        return Ok(acc);
                    }
                }
                lo = hi;
                f_lo = f_hi;
                width *= 2.0;
            }
            Err(Error::TailModel(format!(
                "no exponential decay detected up to x = {lo}"
            )))
        }
    }
}

/// Integrates `f` over the whole real line, splitting at `center`.
pub fn integrate_real_line<T, F>(
    mut f: F,
    center: f64,
    model: TailModel,
    opts: &QuadOptions,
) -> Result<QuadratureResult<T>>
where
    T: Quadrand,
    F: FnMut(f64) -> T,
{
    let half = QuadOptions {
        abs_tol: 0.5 * opts.abs_tol,
        ..*opts
    };
    let right = integrate_to_infinity(|x| f(center + x), 0.0, model, &half)?;
    let left = integrate_to_infinity(|x| f(center - x), 0.0, model, &half)?;
    Ok(right.combine(left))
}

/// Integrates `g` over `(0, inf)` in the variable `s = ln x`.
///
/// Suited to densities with power-law behaviour at both ends, which become
/// exponentially decaying in `s`.
pub fn integrate_log_scale<F>(mut g: F, center: f64, opts: &QuadOptions) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    integrate_real_line(
        |s: f64| {
            let x = s.exp();
            if x == 0.0 || !x.is_finite() {
                0.0
            } else {
                g(x) * x
            }
        },
        center.ln(),
        TailModel::ExpDecay,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| 3.0 * x * x - x + 2.0, -1.0, 2.0, &QuadOptions::default());
        assert!((r.value - 13.5).abs() < 1e-13);
        assert!(r.converged);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let opts = QuadOptions::default();
        let fwd = integrate(f64::sin, 0.0, 1.0, &opts).value;
        let back = integrate(f64::sin, 1.0, 0.0, &opts).value;
        assert!((fwd + back).abs() < 1e-15);
        assert_eq!(integrate(f64::sin, 2.0, 2.0, &opts).value, 0.0);
    }

    #[test]
    fn endpoint_singularity() {
        let opts = QuadOptions::with_abs(1e-12).singular(Singular::Left);
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, &opts);
        assert!((r.value + 1.0).abs() < 1e-11, "{r:?}");
        // near x = 1 the spacing of doubles limits what is resolvable
        let opts = QuadOptions::with_abs(1e-6).singular(Singular::Both);
        let r = integrate(|x: f64| 1.0 / (x * (1.0 - x)).sqrt(), 0.0, 1.0, &opts);
        assert!((r.value - PI).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn complex_integrand() {
        let r = integrate(
            |x: f64| Complex64::new(0.0, 2.0 * PI * x).exp(),
            0.0,
            0.25,
            &QuadOptions::with_abs(1e-13),
        );
        let exact = Complex64::new(1.0, 1.0) / (2.0 * PI);
        assert!((r.value - exact).norm() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = QuadOptions::with_abs(1e-14).budget(4);
        let r = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &opts);
        assert!(!r.converged);
        assert!(r.require_converged(1e-14).is_err());
    }

    #[test]
    fn error_estimate_monotone_in_budget() {
        let f = |x: f64| (1.0 / (x + 0.01)).sin();
        let mut last = f64::INFINITY;
        for budget in [2usize, 4, 8, 16, 32, 64, 128] {
            let r = integrate(f, 0.0, 1.0, &QuadOptions::with_abs(1e-15).budget(budget));
            assert!(r.error_estimate <= last, "budget {budget}");
            last = r.error_estimate;
        }
    }

    #[test]
    fn polynomial_tail() {
        let opts = QuadOptions::with_abs(1e-11);
        let r = integrate_to_infinity(|x: f64| 1.0 / (1.0 + x * x), 0.0, TailModel::PolyDecay(2.0), &opts).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-10, "{r:?}");
        let r = integrate_real_line(
            |x: f64| 1.0 / (1.0 + x * x).powf(0.75),
            0.0,
            TailModel::PolyDecay(1.5),
            &opts,
        )
        .unwrap();
        // B(1/2, 1/4)
        assert!((r.value - 5.244_115_108_584_24).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn tail_model_violations() {
        let opts = QuadOptions::with_abs(1e-8);
        let bad = integrate_to_infinity(|x: f64| 1.0 / (1.0 + x), 0.0, TailModel::PolyDecay(3.0), &opts);
        assert!(matches!(bad, Err(Error::TailModel(_))));
        let bad = integrate_to_infinity(|_x: f64| 1.0, 0.0, TailModel::ExpDecay, &opts);
        assert!(matches!(bad, Err(Error::TailModel(_))));
        let bad = integrate_to_infinity(|x: f64| x, 0.0, TailModel::PolyDecay(0.5), &opts);
        assert!(matches!(bad, Err(Error::Parameter(_))));
    }

    #[test]
    fn exponential_tail() {
        let opts = QuadOptions::with_abs(1e-12);
        let r = integrate_real_line(|x: f64| (-PI * x * x).exp(), 0.3, TailModel::ExpDecay, &opts).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_scale_density() {
        // x^{-1/2} / (1 + x) on (0, inf) integrates to pi.
        let r = integrate_log_scale(|x| 1.0 / (x.sqrt() * (1.0 + x)), 1.0, &QuadOptions::with_abs(1e-11)).unwrap();
        assert!((r.value - PI).abs() < 1e-10, "{r:?}");
    }
}
