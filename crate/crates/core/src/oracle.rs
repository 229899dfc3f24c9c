//! Ground truth for `N(t)`, `S(t)` and `S_1(t)` from a zero table, and the two
//! kernel sums over zeros that approximate `S_1` and `S` up to a bounded error.
//!
//! `S(t) = N(t) - theta(t)/pi - 1` with the Riemann-Siegel theta function, and
//! `S_1(t) = int_0^t S(u) du`. Between consecutive ordinates `N` is constant,
//! so `S_1` is evaluated from its value at the ordinate just below `t` plus a
//! short integral of `theta`. That keeps the rounding error of nearby values
//! correlated, which finite differences rely on.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{rs_theta, rs_theta_asymptotic_antiderivative};
use crate::quadrature::{integrate, QuadOptions};
use crate::special::{f1, f_odd};
use crate::zeros::{ZeroTable, ORDINATE_EPS};

/// Frozen bound on the difference between the kernel sums and the direct
/// values, observed over heights in `[100, 1e4]` with window 200.
pub const KERNEL_SUM_BUDGET: f64 = 5.0;

/// Windows narrower than this are flagged as tail dominated.
pub const MIN_WINDOW: f64 = 50.0;

const THETA_SPLIT: f64 = 64.0;

fn theta_integral_to_split() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| integrate(rs_theta, 0.0, THETA_SPLIT, &QuadOptions::with_abs(1e-14).rel(1e-15)).value)
}

/// `int_0^t theta(u) du`.
pub fn theta_integral(t: f64) -> f64 {
    if t <= THETA_SPLIT {
        integrate(rs_theta, 0.0, t, &QuadOptions::with_abs(1e-14).rel(1e-15)).value
    } else {
        theta_integral_to_split() + rs_theta_asymptotic_antiderivative(t)
            - rs_theta_asymptotic_antiderivative(THETA_SPLIT)
    }
}

/// `theta(u) - theta(g)` for `g >= 40`, free of the cancellation a direct
/// difference suffers at large heights.
fn theta_increment(g: f64, u: f64) -> f64 {
    let d = u - g;
    let tail = |x: f64| {
        let r = 1.0 / x;
        let r2 = r * r;
        r * (1.0 / 48.0 + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0 + r2 * (127.0 / 430080.0))))
    };
    0.5 * (d * (u / (2.0 * PI)).ln() + g * (d / g).ln_1p()) - 0.5 * d + (tail(u) - tail(g))
}

/// `int_g^t theta(u) du`, for `t` close to `g`.
fn theta_integral_between(g: f64, t: f64) -> f64 {
    if g < 40.0 {
        return integrate(rs_theta, g, t, &QuadOptions::with_abs(1e-14).rel(1e-15)).value;
    }
    let inc = integrate(
        |u| theta_increment(g, u),
        g,
        t,
        &QuadOptions::with_abs(1e-15).rel(1e-15),
    )
    .value;
    rs_theta(g) * (t - g) + inc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SMethod {
    /// Zero count minus the smooth part.
    Count,
    /// Sum of the odd kernel over zeros.
    KernelSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum S1Method {
    /// Exact integration of the count between ordinates.
    Piecewise,
    /// Sum of the even kernel over zeros.
    KernelSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SValue {
    pub t: f64,
    pub s: f64,
    pub method: SMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct S1Value {
    pub t: f64,
    pub s1: f64,
    pub method: S1Method,
}

/// A truncated sum over zeros within `window` of `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelSum {
    pub t: f64,
    pub value: f64,
    pub window: f64,
    /// Zeros included in the sum.
    pub terms: usize,
    /// Size estimate of the zeros left out, from the decay of the kernel and
    /// the density of zeros.
    pub tail_estimate: f64,
    pub tail_dominated: bool,
}

impl KernelSum {
    /// Difference from a reference value, the part the bounded error absorbs.
    pub fn slack(&self, reference: f64) -> f64 {
        self.value - reference
    }
}

/// One row of oracle output.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleRow {
    pub t: f64,
    pub n: f64,
    pub s: f64,
    pub s1: f64,
    pub method: &'static str,
}

/// Zero density `(1/2 pi) log(t / 2 pi)`, floored at a small positive value.
fn density(t: f64) -> f64 {
    ((t / (2.0 * PI)).ln() / (2.0 * PI)).max(0.1)
}

#[derive(Clone, Copy, Debug)]
pub struct Oracle<'a> {
    zeros: &'a ZeroTable,
}

impl<'a> Oracle<'a> {
    pub fn new(zeros: &'a ZeroTable) -> Self {
        Oracle { zeros }
    }

    pub fn zeros(&self) -> &'a ZeroTable {
        self.zeros
    }

    fn check(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain {
                what: "height for the zero-counting oracle",
                value: t,
            });
        }
        self.zeros.check_height(t)
    }

    /// `N(t)`, counting an ordinate within `1e-9` of `t` with weight 1/2.
    pub fn big_n(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        let below = self.zeros.count_below(t - ORDINATE_EPS) as f64;
        Ok(match self.zeros.ordinate_near(t) {
            Some(_) => below + 0.5,
            None => below,
        })
    }

    pub fn s(&self, t: f64) -> Result<SValue> {
        let n = self.big_n(t)?;
        Ok(SValue {
            t,
            s: n - rs_theta(t) / PI - 1.0,
            method: SMethod::Count,
        })
    }

    pub fn s1(&self, t: f64) -> Result<S1Value> {
        self.check(t)?;
        let ords = self.zeros.ordinates();
        let k = ords.partition_point(|&g| g <= t);
        let s1 = if k == 0 {
            -theta_integral(t) / PI - t
        } else {
            let g = ords[k - 1];
            let below = (k - 1) as f64;
            let base = below * g - self.zeros.prefix_sum(k - 1) - theta_integral(g) / PI - g;
            base + below * (t - g) - theta_integral_between(g, t) / PI
        };
        Ok(S1Value {
            t,
            s1,
            method: S1Method::Piecewise,
        })
    }

    pub fn row(&self, t: f64) -> Result<OracleRow> {
        Ok(OracleRow {
            t,
            n: self.big_n(t)?,
            s: self.s(t)?.s,
            s1: self.s1(t)?.s1,
            method: "count",
        })
    }

    fn windowed(&self, t: f64, window: f64) -> Result<Vec<f64>> {
        if !(window > 0.0) || !window.is_finite() {
            return Err(Error::Parameter(format!("window must be positive, got {window}")));
        }
        self.check(t)?;
        // signed differences t - gamma over zeros at +gamma and -gamma
        let mut out: Vec<f64> = self.zeros.window(t, window)?.iter().map(|g| t - g).collect();
        if t < window {
            let reach = window - t;
            out.extend(
                self.zeros
                    .ordinates()
                    .iter()
                    .take_while(|&&g| g <= reach)
                    .map(|g| t + g),
            );
        }
        Ok(out)
    }

    /// `(1/4 pi) log t - (1/pi) sum f1(t - gamma)` over zeros within `window`.
    pub fn s1_kernel_sum(&self, t: f64, window: f64) -> Result<KernelSum> {
        let diffs = self.windowed(t, window)?;
        let sum: f64 = diffs.iter().map(|&x| f1(x)).sum();
        let tail = density(t) * 2.0 / (3.0 * window) / PI;
        Ok(KernelSum {
            t,
            value: t.ln() / (4.0 * PI) - sum / PI,
            window,
            terms: diffs.len(),
            tail_estimate: tail,
            tail_dominated: window < MIN_WINDOW,
        })
    }

    /// `(1/pi) sum f(t - gamma)` over zeros within `window`; `t` must not be an ordinate.
    pub fn s_kernel_sum(&self, t: f64, window: f64) -> Result<KernelSum> {
        if self.zeros.ordinate_near(t).is_some() {
            return Err(Error::Domain {
                what: "odd kernel sum at an ordinate",
                value: t,
            });
        }
        let diffs = self.windowed(t, window)?;
        let sum: f64 = diffs.iter().map(|&x| f_odd(x)).sum();
        let tail = 2.0 * density(t) / (3.0 * window * window) / PI;
        Ok(KernelSum {
            t,
            value: sum / PI,
            window,
            terms: diffs.len(),
            tail_estimate: tail,
            tail_dominated: window < MIN_WINDOW,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // the first thirty ordinates, complete to height 102
    const ZEROS: [f64; 30] = [
        14.134725141734693,
        21.022039638771555,
        25.010857580145688,
        30.424876125859513,
        32.935061587739189,
        37.586178158825671,
        40.918719012147495,
        43.327073280914999,
        48.005150881167159,
        49.773832477672302,
        52.970321477714460,
        56.446247697063394,
        59.347044002602353,
        60.831778524609809,
        65.112544048081606,
        67.079810529494173,
        69.546401711173979,
        72.067157674481907,
        75.704690699083933,
        77.144840068874805,
        79.337375020249367,
        82.910380854086030,
        84.735492980517050,
        87.425274613125229,
        88.809111207634465,
        92.491899270558484,
        94.651344040519886,
        95.870634228245309,
        98.831194218193692,
        101.317851005731391,
    ];

    fn table() -> ZeroTable {
        ZeroTable::new(ZEROS.to_vec(), Some(102.0), "first thirty").unwrap()
    }

    #[test]
    fn theta_integral_matches_quadrature_above_split() {
        let t = 90.0;
        let direct = integrate(rs_theta, 0.0, t, &QuadOptions::with_abs(1e-13)).value;
        assert!((theta_integral(t) - direct).abs() < 1e-10);
    }

    #[test]
    fn theta_increment_matches_difference() {
        for &(g, d) in &[(40.0, 0.7), (1000.0, 0.01), (7e4, 0.3)] {
            let direct = rs_theta(g + d) - rs_theta(g);
            assert!(
                (theta_increment(g, g + d) - direct).abs() < 1e-9 * direct.abs().max(1.0),
                "{g}"
            );
        }
    }

    #[test]
    fn counting_with_half_weight() {
        let z = table();
        let o = Oracle::new(&z);
        assert_eq!(o.big_n(20.0).unwrap(), 1.0);
        assert_eq!(o.big_n(14.0).unwrap(), 0.0);
        assert_eq!(o.big_n(ZEROS[0]).unwrap(), 0.5);
        assert_eq!(o.big_n(101.0).unwrap(), 29.0);
        assert!(matches!(o.big_n(150.0), Err(Error::Coverage { .. })));
    }

    #[test]
    fn s_jumps_by_one() {
        let z = table();
        let o = Oracle::new(&z);
        let e = 1e-7;
        for &g in &ZEROS[..5] {
            let jump = o.s(g + e).unwrap().s - o.s(g - e).unwrap().s;
            assert!((jump - 1.0).abs() < 1e-5, "{g}: {jump}");
            let mid = o.s(g).unwrap().s;
            let avg = 0.5 * (o.s(g + e).unwrap().s + o.s(g - e).unwrap().s);
            assert!((mid - avg).abs() < 1e-5);
        }
        assert!(o.s(100.0).unwrap().s.abs() < 1.5);
    }

    #[test]
    fn s_decreases_between_zeros() {
        let z = table();
        let o = Oracle::new(&z);
        let (a, b) = (ZEROS[10] + 0.1, ZEROS[11] - 0.1);
        let slope = (o.s(b).unwrap().s - o.s(a).unwrap().s) / (b - a);
        let t = 0.5 * (a + b);
        assert!(slope < 0.0);
        assert!((slope + (t / (2.0 * PI)).ln() / (2.0 * PI)).abs() < 0.01);
    }

    #[test]
    fn s1_is_integral_of_s() {
        let z = table();
        let o = Oracle::new(&z);
        for &t in &[5.0, 17.3, 44.0, 70.1, 99.5] {
            let h = 1e-4;
            let fd = (o.s1(t + h).unwrap().s1 - o.s1(t - h).unwrap().s1) / (2.0 * h);
            assert!((fd - o.s(t).unwrap().s).abs() < 1e-6, "{t}");
        }
        assert!(o.s1(0.0).unwrap().s1.abs() < 1e-15);
        // continuity across an ordinate
        let g = ZEROS[4];
        let jump = o.s1(g + 1e-9).unwrap().s1 - o.s1(g - 1e-9).unwrap().s1;
        assert!(jump.abs() < 1e-7);
        // direct quadrature of S over [0, 60], split at the ordinates
        let mut pts = vec![0.0];
        pts.extend(ZEROS.iter().copied().take_while(|&g| g < 60.0));
        pts.push(60.0);
        let mut total = 0.0;
        for w in pts.windows(2) {
            let opts = QuadOptions::with_abs(1e-12);
            total += integrate(|u| o.s(u).unwrap().s, w[0] + 1e-12, w[1] - 1e-12, &opts).value;
        }
        assert!((total - o.s1(60.0).unwrap().s1).abs() < 1e-8);
    }

    #[test]
    fn kernel_sums_terms() {
        let z = table();
        let o = Oracle::new(&z);
        let at_zero = o.s1_kernel_sum(ZEROS[3], 0.1).unwrap();
        assert_eq!(at_zero.terms, 1);
        assert!((at_zero.value - (ZEROS[3].ln() / (4.0 * PI) - 1.0 / PI)).abs() < 1e-14);
        assert!(at_zero.tail_dominated);

        let t = ZEROS[5] + 1.0;
        let one = o.s_kernel_sum(t, 1.0).unwrap();
        assert_eq!(one.terms, 1);
        assert!((one.value - (PI / 4.0 - 0.5) / PI).abs() < 1e-15);

        assert!(matches!(o.s_kernel_sum(ZEROS[2], 5.0), Err(Error::Domain { .. })));
        assert!(matches!(o.s_kernel_sum(90.0, 20.0), Err(Error::Coverage { .. })));
        assert!(o.s_kernel_sum(40.0, 0.0).is_err());
    }

    #[test]
    fn negative_ordinates_enter_near_the_origin() {
        let z = table();
        let o = Oracle::new(&z);
        let r = o.s1_kernel_sum(20.0, 50.0).unwrap();
        assert_eq!(r.terms, z.window(20.0, 50.0).unwrap().len() + 3);
    }
}
