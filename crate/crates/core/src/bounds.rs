//! Conditional envelopes for `S(t)` and `S_1(t)`, the parameter choices behind
//! them, and comparisons against the oracle at heights covered by a zero table.
//!
//! The envelopes are main terms of asymptotic statements. At any height a
//! zero table can reach they carry no guarantee, so reports show them next to
//! the oracle values and a correction scale instead of asserting them.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::explicit::{balance, BalanceOptions, BalanceReport, TestFunction};
use crate::extremal::{l1_gap_closed_form, ExtremalPair, Side, Truncation};
use crate::oracle::{Oracle, KERNEL_SUM_BUDGET};
use crate::sieve::VonMangoldt;
use crate::special::Parity;

/// Coefficient of `log t / log log t` in the bound for `|S(t)|`.
pub const S_COEFFICIENT: f64 = 0.25;
/// The earlier coefficient of Goldston and Gonek, twice ours.
pub const GOLDSTON_GONEK_COEFFICIENT: f64 = 0.5;
/// Lower and upper `S_1` coefficients, of `log t / (log log t)^2`.
pub const S1_LOWER: f64 = -PI / 24.0;
pub const S1_UPPER: f64 = PI / 48.0;
/// Fujii's `S_1` coefficients.
pub const FUJII_S1_LOWER: f64 = -0.50903;
pub const FUJII_S1_UPPER: f64 = 0.31252;
/// What the optimisation gives from Fujii's coefficients.
pub const FUJII_S_COEFFICIENT: f64 = 0.51138;

const MIN_HEIGHT: f64 = 10.0;

/// A height `t`, held through `log t` so that astronomically large heights
/// are representable.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Height {
    log_t: f64,
}

impl Height {
    pub fn new(t: f64) -> Result<Self> {
        if !(t >= MIN_HEIGHT) || !t.is_finite() {
            return Err(Error::Range(format!("height must be at least {MIN_HEIGHT}, got {t}")));
        }
        Ok(Height { log_t: t.ln() })
    }

    pub fn from_log(log_t: f64) -> Result<Self> {
        if !(log_t >= MIN_HEIGHT.ln()) || !log_t.is_finite() {
            return Err(Error::Range(format!(
                "log t must be at least ln {MIN_HEIGHT}, got {log_t}"
            )));
        }
        Ok(Height { log_t })
    }

    pub fn log_t(&self) -> f64 {
        self.log_t
    }

    pub fn log_log_t(&self) -> f64 {
        self.log_t.ln()
    }

    /// `t` itself, infinite when it overflows.
    pub fn t(&self) -> f64 {
        self.log_t.exp()
    }
}

/// `(1/4) log t / log log t`.
pub fn s_envelope(height: Height) -> f64 {
    S_COEFFICIENT * height.log_t() / height.log_log_t()
}

/// The same envelope with another coefficient.
pub fn s_envelope_with(height: Height, coefficient: f64) -> f64 {
    coefficient * height.log_t() / height.log_log_t()
}

/// `(-(pi/24), pi/48)` times `log t / (log log t)^2`.
pub fn s1_envelope(height: Height) -> (f64, f64) {
    let scale = s1_scale(height);
    (S1_LOWER * scale, S1_UPPER * scale)
}

fn s1_scale(height: Height) -> f64 {
    let l = height.log_log_t();
    height.log_t() / (l * l)
}

/// Relative size `log log log t / log log t` of the lower order terms, with
/// constant 1. Indicative only.
pub fn correction_scale(height: Height) -> f64 {
    let l = height.log_log_t();
    l.ln().abs() / l
}

/// Coefficient bounding `|S_1(t +- h) - S_1(t)|` in units of
/// `log t / (log log t)^2`: the two one-sided coefficients added.
pub fn s1_difference_coefficient(lower: f64, upper: f64) -> f64 {
    lower.abs() + upper.abs()
}

/// Main term of the sandwich bound in units of `log t / log log t`, for the
/// step `h = x / log log t`: `c / x + x / (4 pi)`.
pub fn sandwich_main_term(c: f64, x: f64) -> f64 {
    c / x + x / (4.0 * PI)
}

/// Step minimising [`sandwich_main_term`], `x = sqrt(4 pi c)`, and the minimum
/// `sqrt(c / pi)`.
pub fn optimal_sandwich(c: f64) -> (f64, f64) {
    let x = (4.0 * PI * c).sqrt();
    (x, sandwich_main_term(c, x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    S1Sandwich,
    DirectExtremal,
    FujiiVariant,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::S1Sandwich => "s1_sandwich",
            Route::DirectExtremal => "direct_extremal",
            Route::FujiiVariant => "fujii_variant",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundParams {
    pub log_t: f64,
    pub delta: f64,
    pub h: f64,
    pub route: Route,
}

impl BoundParams {
    /// The extremal bounds are stated for widths of at least 1.
    pub fn delta_at_least_one(&self) -> bool {
        self.delta >= 1.0
    }
}

/// Root of `L - 3 log L = target` on the branch `L > 3`, where it increases.
fn solve_width_equation(target: f64) -> f64 {
    let (mut lo, mut hi) = (3.0f64, 3.0 + target.max(0.0) + 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid - 3.0 * mid.ln() >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `log t` below which [`choose_params`] has no positive width.
pub fn min_log_t() -> f64 {
    solve_width_equation(0.0).exp()
}

/// `log t` from which the chosen width is at least 1.
pub fn unit_width_log_t() -> f64 {
    solve_width_equation(PI).exp()
}

/// `pi D = L - 3 log L` and `h = (pi/2) / L` with `L = log log t`, on the
/// branch `L > 3` where the width grows with `t`. The Fujii variant uses the
/// step that optimises its own coefficients.
pub fn choose_params(height: Height, route: Route) -> Result<BoundParams> {
    let l = height.log_log_t();
    let delta = (l - 3.0 * l.ln()) / PI;
    if !(l > 3.0) || !(delta > 0.0) {
        return Err(Error::Infeasible { min_log_t: min_log_t() });
    }
    let x = match route {
        Route::FujiiVariant => optimal_sandwich(s1_difference_coefficient(FUJII_S1_LOWER, FUJII_S1_UPPER)).0,
        _ => PI / 2.0,
    };
    Ok(BoundParams {
        log_t: height.log_t(),
        delta,
        h: x / l,
        route,
    })
}

/// Parameters supplied directly, for heights where [`choose_params`] is infeasible.
pub fn manual_params(height: Height, delta: f64, h: f64, route: Route) -> Result<BoundParams> {
    if !(delta > 0.0) || !(h > 0.0) {
        return Err(Error::Parameter(format!(
            "need positive width and step, got {delta} and {h}"
        )));
    }
    Ok(BoundParams {
        log_t: height.log_t(),
        delta,
        h,
        route,
    })
}

/// Main-term envelope coefficient of each route.
pub fn route_coefficient(route: Route) -> f64 {
    match route {
        Route::S1Sandwich => {
            let c = s1_difference_coefficient(S1_LOWER, S1_UPPER);
            sandwich_main_term(c, PI / 2.0)
        }
        Route::DirectExtremal => {
            // (1/pi) (1/2 pi) int m+ with pi D ~ log log t; int m+ = pi / (2 D)
            let delta = 1.0;
            let mass = l1_gap_closed_form(Parity::Odd, Side::Majorant, delta).expect("positive width");
            mass * PI * delta / (2.0 * PI * PI)
        }
        Route::FujiiVariant => optimal_sandwich(s1_difference_coefficient(FUJII_S1_LOWER, FUJII_S1_UPPER)).1,
    }
}

/// The averages of `S` over `[t - h, t]` and `[t, t + h]`, shifted by the
/// drift of the smooth counting term, which enclose `S(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sandwich {
    pub t: f64,
    pub h: f64,
    pub lower: f64,
    pub upper: f64,
    pub s: f64,
    /// Room left for the dropped `O(1/t)` terms.
    pub theta_slack: f64,
}

impl Sandwich {
    pub fn contains(&self) -> bool {
        self.lower - self.theta_slack <= self.s && self.s <= self.upper + self.theta_slack
    }
}

pub fn sandwich(oracle: &Oracle<'_>, t: f64, h: f64) -> Result<Sandwich> {
    if !(t >= 2.0) {
        return Err(Error::Range(format!("height must be at least 2, got {t}")));
    }
    if !(h > 0.0) || h > t.sqrt() {
        return Err(Error::Parameter(format!("step must lie in (0, sqrt t], got {h}")));
    }
    let mid = oracle.s1(t)?.s1;
    let below = oracle.s1(t - h)?.s1;
    let above = oracle.s1(t + h)?.s1;
    let drift = h * t.ln() / (4.0 * PI);
    Ok(Sandwich {
        t,
        h,
        lower: -drift + (mid - below) / h,
        upper: drift + (above - mid) / h,
        s: oracle.s(t)?.s,
        theta_slack: 1.0 / t,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub t: f64,
    pub envelope_s: f64,
    pub oracle_s: f64,
    pub slack_s: f64,
    pub envelope_s1_lo: f64,
    pub envelope_s1_hi: f64,
    pub oracle_s1: f64,
    pub slack_s1: f64,
    pub correction_scale: f64,
    pub delta: f64,
    pub h: f64,
    pub route: Route,
}

impl BoundReport {
    /// Whether the oracle values sit inside the envelopes.
    pub fn within(&self) -> bool {
        self.slack_s > 0.0 && self.slack_s1 > 0.0
    }
}

fn report(oracle: &Oracle<'_>, t: f64, envelope_s: f64, params: &BoundParams) -> Result<BoundReport> {
    let height = Height::new(t)?;
    let s = oracle.s(t)?.s;
    let s1 = oracle.s1(t)?.s1;
    let (lo, hi) = s1_envelope(height);
    Ok(BoundReport {
        t,
        envelope_s,
        oracle_s: s,
        slack_s: envelope_s - s.abs(),
        envelope_s1_lo: lo,
        envelope_s1_hi: hi,
        oracle_s1: s1,
        slack_s1: (s1 - lo).min(hi - s1),
        correction_scale: correction_scale(height),
        delta: params.delta,
        h: params.h,
        route: params.route,
    })
}

/// Envelope comparison at `t` along the sandwich route.
pub fn s_bound_via_sandwich(oracle: &Oracle<'_>, t: f64, params: &BoundParams) -> Result<BoundReport> {
    let height = Height::new(t)?;
    let coefficient = match params.route {
        Route::FujiiVariant => route_coefficient(Route::FujiiVariant),
        _ => route_coefficient(Route::S1Sandwich),
    };
    report(oracle, t, s_envelope_with(height, coefficient), params)
}

/// Terms of the direct route at one height.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DirectReport {
    pub bound: BoundReport,
    /// `(1/pi) sum m-(t - gamma)` and `(1/pi) sum m+(t - gamma)`.
    pub zero_sum_lower: f64,
    pub zero_sum_upper: f64,
    /// `(1/pi)` times the archimedean term for `m+`, and its main-term
    /// prediction `log t / (4 pi D)`.
    pub archimedean_upper: f64,
    pub archimedean_main_term: f64,
    pub majorant_balance: BalanceReport,
    pub minorant_balance: BalanceReport,
}

impl DirectReport {
    /// Whether the oracle lies between the zero sums, widened by the frozen
    /// budget for the bounded error.
    pub fn zero_sums_enclose_oracle(&self) -> bool {
        let s = self.bound.oracle_s;
        self.zero_sum_lower - KERNEL_SUM_BUDGET <= s && s <= self.zero_sum_upper + KERNEL_SUM_BUDGET
    }
}

/// Envelope comparison at `t` along the direct route, with the explicit
/// formula evaluated for the odd extremal pair of width `params.delta`.
pub fn s_bound_direct(
    oracle: &Oracle<'_>,
    lambda: &VonMangoldt,
    t: f64,
    params: &BoundParams,
    opts: &BalanceOptions,
) -> Result<DirectReport> {
    let height = Height::new(t)?;
    let window = opts.window.unwrap_or_else(|| (50.0 / params.delta).max(1000.0));
    let pair = ExtremalPair::odd(params.delta, &Truncation::adaptive(window, 1e-10))?;
    let plus = TestFunction::shifted(Arc::new(pair.majorant), t)?;
    let minus = TestFunction::shifted(Arc::new(pair.minorant), t)?;
    let zeros = oracle.zeros();
    let majorant_balance = balance(&plus, zeros, lambda, opts)?;
    let minorant_balance = balance(&minus, zeros, lambda, opts)?;
    let bound = report(
        oracle,
        t,
        s_envelope_with(height, route_coefficient(Route::DirectExtremal)),
        params,
    )?;
    Ok(DirectReport {
        bound,
        zero_sum_lower: zero_sum_over_pi(&minorant_balance),
        zero_sum_upper: zero_sum_over_pi(&majorant_balance),
        archimedean_upper: majorant_balance.archimedean / PI,
        archimedean_main_term: height.log_t() / (4.0 * PI * params.delta),
        majorant_balance,
        minorant_balance,
    })
}

fn zero_sum_over_pi(r: &BalanceReport) -> f64 {
    r.zero_side / PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_plug_ins() {
        let h = Height::from_log(10f64.exp()).unwrap();
        let p = choose_params(h, Route::S1Sandwich).unwrap();
        assert!((p.delta - (10.0 - 3.0 * 10f64.ln()) / PI).abs() < 1e-14);
        assert!((p.h - PI / 20.0).abs() < 1e-15);
        assert!(!p.delta_at_least_one());
        assert!(matches!(
            choose_params(Height::new(100.0).unwrap(), Route::S1Sandwich),
            Err(Error::Infeasible { .. })
        ));
        let edge = Height::from_log(unit_width_log_t() * (1.0 + 1e-12)).unwrap();
        let p = choose_params(edge, Route::DirectExtremal).unwrap();
        assert!((p.delta - 1.0).abs() < 1e-9 && p.delta_at_least_one());
        let below = Height::from_log(min_log_t() * (1.0 - 1e-9)).unwrap();
        assert!(choose_params(below, Route::S1Sandwich).is_err());
        assert!(Height::new(5.0).is_err());
    }

    #[test]
    fn step_for_fixed_log_log() {
        // L = 4 sits on the increasing branch but below the positive-width root
        let h = Height::from_log(4f64.exp()).unwrap();
        assert!(choose_params(h, Route::S1Sandwich).is_err());
        let h = Height::from_log(6f64.exp()).unwrap();
        assert!((choose_params(h, Route::S1Sandwich).unwrap().h - PI / 12.0).abs() < 1e-15);
    }

    #[test]
    fn envelope_relations() {
        for &t in &[100.0, 1e4, 1e10, 1e300] {
            let h = Height::new(t).unwrap();
            let (lo, hi) = s1_envelope(h);
            assert!((hi / lo.abs() - 0.5).abs() < 1e-15);
            assert!((s_envelope_with(h, GOLDSTON_GONEK_COEFFICIENT) / s_envelope(h) - 2.0).abs() < 1e-15);
        }
        let t = 1e10f64;
        let expected = 0.25 * (10.0 * 10f64.ln()) / (10.0 * 10f64.ln()).ln();
        assert!((s_envelope(Height::new(t).unwrap()) - expected).abs() < 1e-12);
        // log t / (log log t)^2 turns upward at log t = e^2; log t / log log t at e
        let turn = 2f64.exp().exp();
        let mut prev = (0.0, 0.0);
        for k in 0..200 {
            let h = Height::new(turn * 1.1f64.powi(k)).unwrap();
            let cur = (s1_envelope(h).1, s_envelope(h));
            assert!(cur.0 > prev.0 && cur.1 > prev.1);
            prev = cur;
        }
        let early = |t: f64| s1_envelope(Height::new(t).unwrap()).1;
        assert!(early(100.0) > early(1000.0));
        let mut prev = 0.0;
        for k in 0..100 {
            let e = s_envelope(Height::new(100.0 * 1.1f64.powi(k)).unwrap());
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn optimisation_reproduces_coefficients() {
        let c = s1_difference_coefficient(S1_LOWER, S1_UPPER);
        assert!((c - PI / 16.0).abs() < 1e-15);
        let (x, min) = optimal_sandwich(c);
        assert!((x - PI / 2.0).abs() < 1e-14);
        assert!((min - 0.25).abs() < 1e-14);
        let fujii = optimal_sandwich(s1_difference_coefficient(FUJII_S1_LOWER, FUJII_S1_UPPER)).1;
        assert!((fujii - FUJII_S_COEFFICIENT).abs() < 1e-5);
        for route in [Route::S1Sandwich, Route::DirectExtremal] {
            assert!((route_coefficient(route) - 0.25).abs() < 1e-15, "{route:?}");
        }
    }

    #[test]
    fn envelopes_scale_linearly_in_coefficients() {
        let h = Height::new(1e8).unwrap();
        let (lo, hi) = s1_envelope(h);
        let scale = s1_scale(h);
        assert!((lo / scale - S1_LOWER).abs() < 1e-15 && (hi / scale - S1_UPPER).abs() < 1e-15);
        let a = sandwich_main_term(2.0 * PI / 16.0, PI / 2.0);
        let b = sandwich_main_term(PI / 16.0, PI / 2.0);
        assert!((a - b - 0.125).abs() < 1e-15);
    }
}
