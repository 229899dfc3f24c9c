//! Self-checks behind `argzeta verify`: closed-form identities, domination,
//! Fourier support, the subordination measures and their supporting inequalities.
//!
//! Every check reports the measured residual next to the threshold it was held
//! to, so a failing run says by how much it failed.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::extremal::{l1_gap_closed_form, ExtremalPair, ExtremalSeries, Side, Truncation, TRANSFORM_BOUND};
use crate::quadrature::{integrate_real_line, integrate_to_infinity, QuadOptions, Singular, TailModel};
use crate::special::{f1, f_odd, Parity};
use crate::subordination::{h_witness, mu_density, w_kernel, MeasureKind, SubordinationMeasure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Domination,
    Fourier,
    Measures,
    OddMeasures,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Identities,
        Suite::Domination,
        Suite::Fourier,
        Suite::Measures,
        Suite::OddMeasures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Domination => "domination",
            Suite::Fourier => "fourier",
            Suite::Measures => "measures",
            Suite::OddMeasures => "odd_measures",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    /// Residual or violation; the check passes when it does not exceed `threshold`.
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn new(suite: Suite, name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Check {
            suite,
            name: name.into(),
            measured,
            threshold,
            passed: measured <= threshold,
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Runs one suite with its default grids; `tol` drives the quadratures.
pub fn run(suite: Suite, tol: f64) -> Result<Vec<Check>> {
    match suite {
        Suite::Identities => {
            let mut checks = identities(tol)?;
            checks.extend(l1_gaps(&[1.0, 2.0, 4.0], 1e-6)?);
            Ok(checks)
        }
        Suite::Domination => domination(&[1.0, 2.0, 4.0, 8.0], 40.0, 0.01, 1e-8),
        Suite::Fourier => fourier_support(&[1.0, 2.0, 4.0], 1e-6),
        Suite::Measures => measures(tol),
        Suite::OddMeasures => odd_measures(),
    }
}

/// `int f1 = pi/2`, `int_0^inf log(1 + e^{-2a}) = pi^2/24` and
/// `int_0^inf log(1 - e^{-2a}) = -pi^2/12`, each against `tol`.
pub fn identities(tol: f64) -> Result<Vec<Check>> {
    let s = Suite::Identities;
    let opts = QuadOptions::with_abs(tol * 0.1);
    let int_f1 = integrate_real_line(f1, 0.0, TailModel::PolyDecay(2.0), &opts)?.require_converged(tol)?;
    let plus = integrate_to_infinity(|a: f64| (-2.0 * a).exp().ln_1p(), 0.0, TailModel::ExpDecay, &opts)?;
    let minus = integrate_to_infinity(
        |a: f64| (-(-2.0 * a).exp_m1()).ln(),
        0.0,
        TailModel::ExpDecay,
        &opts.singular(Singular::Left),
    )?;
    Ok(vec![
        Check::new(
            s,
            "integral of 1 - x arctan(1/x) equals pi/2",
            (int_f1.value - PI / 2.0).abs(),
            tol,
        ),
        Check::new(
            s,
            "integral of log(1 + e^-2a) equals pi^2/24",
            (plus.value - PI * PI / 24.0).abs(),
            tol,
        ),
        Check::new(
            s,
            "integral of log(1 - e^-2a) equals -pi^2/12",
            (minus.value + PI * PI / 12.0).abs(),
            tol,
        ),
    ])
}

/// Numerical `L^1` distance between an extremal function and its kernel.
///
/// The integral of a truncated series is computed by quadrature and the mass
/// of the omitted nodes is added back, so the result refers to the full series.
pub fn numeric_l1_gap(parity: Parity, side: Side, delta: f64, tol: f64) -> Result<f64> {
    let radius = (32.0 * delta).ceil().max(8.0) as usize;
    let g = ExtremalSeries::with_radius(parity, side, delta, radius)?;
    let mass = g.fourier_transform_numeric(0.0, tol)?.require_converged(tol)?.value.re + g.omitted_node_mass();
    let opts = QuadOptions::with_abs(tol);
    let kernel = match parity {
        Parity::Even => integrate_real_line(f1, 0.0, TailModel::PolyDecay(2.0), &opts)?.value,
        Parity::Odd => integrate_real_line(f_odd, 0.0, TailModel::PolyDecay(3.0), &opts)?.value,
    };
    Ok(match side {
        Side::Majorant => mass - kernel,
        Side::Minorant => kernel - mass,
    })
}

/// Numerical gaps against the closed forms, relative error at most `rel`.
pub fn l1_gaps(deltas: &[f64], rel: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &d in deltas {
        for parity in [Parity::Even, Parity::Odd] {
            for side in [Side::Minorant, Side::Majorant] {
                let exact = l1_gap_closed_form(parity, side, d)?;
                let numeric = numeric_l1_gap(parity, side, d, 1e-10)?;
                checks.push(Check::new(
                    Suite::Identities,
                    format!("L1 gap {parity:?} {side:?} D={d}"),
                    ((numeric - exact) / exact).abs(),
                    rel,
                ));
            }
        }
    }
    Ok(checks)
}

/// `minorant <= kernel <= majorant` on `[-x_max, x_max]`, with truncation
/// chosen so the certified slack stays below `slack`.
pub fn domination(deltas: &[f64], x_max: f64, step: f64, slack: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &d in deltas {
        for parity in [Parity::Even, Parity::Odd] {
            let pair = ExtremalPair::new(parity, d, &Truncation::adaptive(x_max, 0.1 * slack))?;
            let (worst, bound) = pair.domination_check(x_max, step);
            checks.push(Check::new(
                Suite::Domination,
                format!("certified slack {parity:?} D={d}"),
                bound,
                slack,
            ));
            checks.push(Check::new(
                Suite::Domination,
                format!("violation {parity:?} D={d} on |x| <= {x_max}"),
                worst,
                bound,
            ));
        }
    }
    Ok(checks)
}

/// Numerical transforms vanish beyond the support and stay below the frozen
/// bound inside it.
pub fn fourier_support(deltas: &[f64], floor: f64) -> Result<Vec<Check>> {
    let tol = 0.01 * floor;
    let mut checks = Vec::new();
    for &d in deltas {
        for parity in [Parity::Even, Parity::Odd] {
            for side in [Side::Minorant, Side::Majorant] {
                let radius = (32.0 * d).ceil() as usize;
                let g = ExtremalSeries::with_radius(parity, side, d, radius)?;
                for k in [1.5, 2.0, 4.0] {
                    let v = g.fourier_transform_numeric(k * d, tol)?.value.norm();
                    checks.push(Check::new(
                        Suite::Fourier,
                        format!("transform {parity:?} {side:?} D={d} at xi={k}D"),
                        v,
                        floor,
                    ));
                }
                let mut inside = 0.0f64;
                for i in 0..=40 {
                    let xi = d * (-1.0 + i as f64 / 20.0);
                    inside = inside.max(g.fourier_transform_numeric(xi, tol)?.value.norm());
                }
                checks.push(Check::new(
                    Suite::Fourier,
                    format!("transform {parity:?} {side:?} D={d} bounded on |xi| <= D"),
                    inside,
                    TRANSFORM_BOUND,
                ));
            }
        }
    }
    Ok(checks)
}

/// Subordination identities on the standard grid and total masses.
pub fn measures(tol: f64) -> Result<Vec<Check>> {
    let s = Suite::Measures;
    let mut checks = Vec::new();
    let qtol = tol.min(1e-9);
    for &d in &[1.0, 2.0, 5.0] {
        let nu = SubordinationMeasure::new(MeasureKind::Nu, d)?;
        let mu = SubordinationMeasure::new(MeasureKind::Mu, d)?;
        for &x in &[0.1, 0.5, 1.0, 3.0, 10.0] {
            let even = nu.gaussian_transform(x, qtol)?;
            checks.push(Check::new(
                s,
                format!("nu transform at x={x} D={d}"),
                (even - f1(x / d)).abs(),
                1e-7,
            ));
            let odd = mu.gaussian_transform(x, qtol)?;
            checks.push(Check::new(
                s,
                format!("mu transform at x={x} D={d}"),
                (odd - f_odd(x / d)).abs(),
                1e-6,
            ));
        }
        for m in [nu, mu] {
            let mass = m.total_mass(qtol)?;
            checks.push(Check::new(
                s,
                format!("{:?} total mass D={d}", m.kind),
                (mass - m.expected_mass()).abs(),
                1e-5,
            ));
        }
    }
    Ok(checks)
}

/// The three supporting facts for the odd measure: the `W` identity, a
/// non-negative density and total mass `pi/2`, plus monotonicity of the witness.
pub fn odd_measures() -> Result<Vec<Check>> {
    let s = Suite::OddMeasures;
    let mut checks = Vec::new();
    let values = [0.5, 1.0, 3.0];
    let mut w_worst = 0.0f64;
    for &x in &values {
        for &y in &values {
            for &d in &values {
                w_worst = w_worst.max((w_kernel(x, y, d)? - (-x * y / d).exp()).abs());
            }
        }
    }
    checks.push(Check::new(s, "W kernel equals e^(-xy/D) on 27 triples", w_worst, 1e-8));

    let mut negative = 0.0f64;
    for &d in &[0.5, 1.0, 2.0, 8.0] {
        for i in 0..60 {
            let lambda = 10f64.powf(-6.0 + 9.0 * i as f64 / 59.0);
            negative = negative.max(-mu_density(lambda, d)?);
        }
    }
    checks.push(Check::new(s, "mu density non-negative on 4 x 60 grid", negative, 0.0));

    let mass = SubordinationMeasure::new(MeasureKind::Mu, 1.0)?.total_mass(1e-9)?;
    checks.push(Check::new(
        s,
        "mu total mass equals pi/2",
        (mass - PI / 2.0).abs(),
        1e-5,
    ));

    let mut drop = 0.0f64;
    let mut prev = h_witness(0.0)?;
    checks.push(Check::new(s, "witness vanishes at 0", prev.abs(), 0.0));
    for i in 1..=500 {
        let h = h_witness(i as f64 * 1e-2)?;
        drop = drop.max(prev - h);
        prev = h;
    }
    checks.push(Check::new(s, "witness non-decreasing on [0, 5]", drop, 0.0));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_pass_at_default_tolerance() {
        let checks = identities(1e-10).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(all_passed(&checks), "{checks:?}");
    }

    #[test]
    fn numeric_gaps_at_width_two() {
        let g = numeric_l1_gap(Parity::Odd, Side::Majorant, 2.0, 1e-10).unwrap();
        assert!((g - PI / 4.0).abs() < 1e-9);
        for side in [Side::Minorant, Side::Majorant] {
            let g = numeric_l1_gap(Parity::Even, side, 2.0, 1e-10).unwrap();
            let exact = l1_gap_closed_form(Parity::Even, side, 2.0).unwrap();
            assert!((g / exact - 1.0).abs() < 1e-9, "{side:?}: {g} vs {exact}");
        }
    }

    #[test]
    fn failing_check_is_reported() {
        let c = Check::new(Suite::Fourier, "x", 2.0, 1.0);
        assert!(!c.passed);
        assert!(!all_passed(&[c]));
    }

    #[test]
    fn odd_measures_suite_passes() {
        assert!(all_passed(&odd_measures().unwrap()));
    }
}
