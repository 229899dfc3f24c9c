//! Majorants and minorants of exponential type `2 pi D` for the two kernels.
//!
//! Every function here is a truncated Hermite-type interpolation series in the
//! variable `z = D x`:
//!
//! ```text
//! G(z) = sum_c sinc^2(z - c) [ v_c + (z - c) d_c ]
//! ```
//!
//! with nodes `c` on the integers or the half-integers, so that `G(c) = v_c` and
//! `G'(c) = d_c`. The even minorant interpolates `f1(./D)` at half-integers, the
//! even majorant at integers with `v_0 = 1`, and the odd majorant interpolates
//! `f(./D)` at the nonzero integers with `v_0 = pi/2` and `d_0` chosen so the
//! slopes sum to zero. The odd minorant is the reflection `-M(-z)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity, QuadOptions, TailModel};
use crate::special::{cos_pi, sin_pi, Parity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Minorant,
    Majorant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeFamily {
    Integers,
    HalfIntegers,
}

/// How far to carry the series: either a fixed radius, or the smallest radius
/// whose certified tail bound on `|x| <= x_max` is below `tolerance`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub radius: Option<usize>,
    pub x_max: f64,
    pub tolerance: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            radius: None,
            x_max: 40.0,
            tolerance: 1e-10,
        }
    }
}

impl Truncation {
    pub fn adaptive(x_max: f64, tolerance: f64) -> Self {
        Truncation {
            radius: None,
            x_max,
            tolerance,
        }
    }

    pub fn fixed(radius: usize, x_max: f64, tolerance: f64) -> Self {
        Truncation {
            radius: Some(radius),
            x_max,
            tolerance,
        }
    }
}

/// Bound `C` in `|g(x)| <= C / (1 + x^2)` on the real line, from dense sampling
/// at width 1 over `|x| <= 1000` with a factor two of headroom.
pub fn envelope_constant(parity: Parity) -> f64 {
    match parity {
        Parity::Even => 2.0,
        Parity::Odd => 3.4,
    }
}

/// Bound on `|g^(xi)|` over the support, sampled the same way.
pub const TRANSFORM_BOUND: f64 = 3.7;

const MIN_RADIUS: usize = 64;
const MAX_RADIUS: usize = 1 << 22;
const NEAR_NODE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Node {
    pos: f64,
    value: f64,
    slope: f64,
}

/// One truncated extremal function.
#[derive(Clone, Debug)]
pub struct ExtremalSeries {
    parity: Parity,
    side: Side,
    delta: f64,
    family: NodeFamily,
    radius: usize,
    nodes: Vec<Node>,
    // evaluate as -S(-z) from the stored nodes
    reflected: bool,
}

fn power_sum_bound(first: f64, s: f64) -> f64 {
    // sum_{k>=0} (first + k)^{-s} <= first^{-s} + first^{1-s}/(s-1)
    first.powf(-s) + first.powf(1.0 - s) / (s - 1.0)
}

impl ExtremalSeries {
    /// Builds the series with the given radius: nodes `|c| <= radius`
    /// (integers) or `|c| <= radius - 1/2` (half-integers).
    pub fn with_radius(parity: Parity, side: Side, delta: f64, radius: usize) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::Parameter(format!("width must be positive, got {delta}")));
        }
        if radius == 0 {
            return Err(Error::Parameter("truncation radius must be positive".into()));
        }
        let value = |c: f64| parity.eval(c / delta);
        let slope = |c: f64| parity.derivative(c / delta) / delta;
        let n = radius as i64;
        let (family, nodes) = match (parity, side) {
            (Parity::Even, Side::Minorant) => {
                let nodes = (-n + 1..=n)
                    .map(|k| {
                        let c = k as f64 - 0.5;
                        Node {
                            pos: c,
                            value: value(c),
                            slope: slope(c),
                        }
                    })
                    .collect();
                (NodeFamily::HalfIntegers, nodes)
            }
            (Parity::Even, Side::Majorant) => {
                let nodes = (-n..=n)
                    .map(|k| {
                        let c = k as f64;
                        if k == 0 {
                            Node {
                                pos: 0.0,
                                value: 1.0,
                                slope: 0.0,
                            }
                        } else {
                            Node {
                                pos: c,
                                value: value(c),
                                slope: slope(c),
                            }
                        }
                    })
                    .collect();
                (NodeFamily::Integers, nodes)
            }
            (Parity::Odd, _) => {
                let mut nodes: Vec<Node> = (-n..=n)
                    .map(|k| {
                        let c = k as f64;
                        if k == 0 {
                            Node {
                                pos: 0.0,
                                value: FRAC_PI_2,
                                slope: 0.0,
                            }
                        } else {
                            Node {
                                pos: c,
                                value: value(c),
                                slope: slope(c),
                            }
                        }
                    })
                    .collect();
                // pair the nonzero slopes from the outside in so the sum is symmetric
                let mut slope_sum = 0.0;
                for k in (1..=radius).rev() {
                    slope_sum += nodes[radius + k].slope + nodes[radius - k].slope;
                }
                nodes[radius].slope = -slope_sum;
                (NodeFamily::Integers, nodes)
            }
        };
        Ok(ExtremalSeries {
            parity,
            side,
            delta,
            family,
            radius,
            nodes,
            reflected: parity == Parity::Odd && side == Side::Minorant,
        })
    }

    /// Builds the series with a radius meeting `trunc`, or fails with
    /// [`Error::Truncation`] when an explicit radius is too small.
    pub fn build(parity: Parity, side: Side, delta: f64, trunc: &Truncation) -> Result<Self> {
        let x_max = trunc.x_max.abs();
        let radius = match trunc.radius {
            Some(r) => {
                let bound = tail_bound_for(parity, delta, r, x_max, 0.0);
                if !(bound <= trunc.tolerance) {
                    return Err(Error::Truncation {
                        radius: r,
                        bound,
                        tolerance: trunc.tolerance,
                    });
                }
                r
            }
            None => {
                let mut r = MIN_RADIUS.max((2.0 * (delta * x_max).ceil()) as usize);
                loop {
                    let bound = tail_bound_for(parity, delta, r, x_max, 0.0);
                    if bound <= trunc.tolerance {
                        break r;
                    }
                    if r >= MAX_RADIUS {
                        return Err(Error::Truncation {
                            radius: r,
                            bound,
                            tolerance: trunc.tolerance,
                        });
                    }
                    r *= 2;
                }
            }
        };
        Self::with_radius(parity, side, delta, radius)
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn family(&self) -> NodeFamily {
        self.family
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Largest node position kept in the series.
    pub fn outer_node(&self) -> f64 {
        self.nodes.last().map_or(0.0, |n| n.pos.abs())
    }

    /// The kernel being approximated, at `x`.
    pub fn target(&self, x: f64) -> f64 {
        self.parity.eval(x)
    }

    fn envelope_real(&self, z: f64) -> f64 {
        let s = match self.family {
            NodeFamily::Integers => sin_pi(z),
            NodeFamily::HalfIntegers => cos_pi(z),
        };
        s * s / (PI * PI)
    }

    /// Series value in the interpolation variable `z = D x`.
    pub fn eval_scaled_real(&self, z: f64) -> f64 {
        if self.reflected {
            -self.eval_nodes_real(-z)
        } else {
            self.eval_nodes_real(z)
        }
    }

    fn eval_nodes_real(&self, z: f64) -> f64 {
        let mut far = 0.0;
        let mut near = 0.0;
        for node in &self.nodes {
            let u = z - node.pos;
            if u.abs() < NEAR_NODE {
                let pu = PI * u;
                near += (1.0 - pu * pu / 3.0) * (node.value + u * node.slope);
            } else {
                let inv = 1.0 / u;
                far += (node.value * inv + node.slope) * inv;
            }
        }
        self.envelope_real(z) * far + near
    }

    /// Series value at complex `z = D x` (no range checks).
    pub fn eval_scaled(&self, z: Complex64) -> Complex64 {
        if z.im == 0.0 {
            return Complex64::new(self.eval_scaled_real(z.re), 0.0);
        }
        if self.reflected {
            -self.eval_nodes(-z)
        } else {
            self.eval_nodes(z)
        }
    }

    fn eval_nodes(&self, z: Complex64) -> Complex64 {
        let (sx, cx) = (sin_pi(z.re), cos_pi(z.re));
        let (sh, ch) = ((PI * z.im).sinh(), (PI * z.im).cosh());
        let s = match self.family {
            NodeFamily::Integers => Complex64::new(sx * ch, cx * sh),
            NodeFamily::HalfIntegers => Complex64::new(cx * ch, -sx * sh),
        };
        let env = s * s / (PI * PI);
        let mut far = Complex64::new(0.0, 0.0);
        let mut near = Complex64::new(0.0, 0.0);
        for node in &self.nodes {
            let u = z - node.pos;
            if u.norm() < NEAR_NODE {
                let pu = u * PI;
                near += (Complex64::new(1.0, 0.0) - pu * pu / 3.0) * (u * node.slope + node.value);
            } else {
                let inv = u.inv();
                far += (inv * node.value + node.slope) * inv;
            }
        }
        env * far + near
    }

    /// `g(x) = G(D x)` for real `x`.
    pub fn eval_real(&self, x: f64) -> f64 {
        self.eval_scaled_real(self.delta * x)
    }

    /// `g(x) = G(D x)` for complex `x`, limited to `|Im x| <= 10` and to growth
    /// that fits in binary64.
    pub fn eval(&self, x: Complex64) -> Result<Complex64> {
        if !x.re.is_finite() || !x.im.is_finite() {
            return Err(Error::Range(format!("non-finite argument {x}")));
        }
        if x.im.abs() > 10.0 || 2.0 * PI * self.delta * x.im.abs() > 700.0 {
            return Err(Error::Range(format!(
                "imaginary part {} too large for width {}",
                x.im, self.delta
            )));
        }
        Ok(self.eval_scaled(x * self.delta))
    }

    /// Certified bound on `|g_N(x) - g(x)|` for `|Re x| <= x_max` and `|Im x| <= y`,
    /// where `g` is the untruncated series.
    pub fn tail_bound(&self, x_max: f64, y: f64) -> f64 {
        tail_bound_for(self.parity, self.delta, self.radius, x_max, y)
    }

    /// Mass `int g - int g_N` carried by the node values beyond the truncation
    /// radius, both sides.
    pub fn omitted_node_mass(&self) -> f64 {
        match self.parity {
            Parity::Odd => 0.0,
            Parity::Even => {
                let first = match self.family {
                    NodeFamily::Integers => self.radius as f64 + 1.0,
                    NodeFamily::HalfIntegers => self.radius as f64 + 0.5,
                };
                2.0 * f1_lattice_tail(first, self.delta) / self.delta
            }
        }
    }

    /// Fourier transform of the truncated series in the `x` variable, from the
    /// closed-form transforms of its terms.
    pub fn fourier_transform(&self, xi: f64) -> Complex64 {
        if self.reflected {
            -self.node_transform(-xi)
        } else {
            self.node_transform(xi)
        }
    }

    fn node_transform(&self, xi: f64) -> Complex64 {
        let eta = xi / self.delta;
        let tri = (1.0 - eta.abs()).max(0.0);
        let inside = eta.abs() < 1.0;
        let slope_factor = if inside && eta != 0.0 {
            Complex64::new(0.0, -eta.signum() / (2.0 * PI))
        } else {
            Complex64::new(0.0, 0.0)
        };
        if tri == 0.0 && slope_factor.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for node in &self.nodes {
            let phase = Complex64::from_polar(1.0, -2.0 * PI * node.pos * eta);
            acc += phase * (slope_factor * node.slope + node.value * tri);
        }
        acc / self.delta
    }

    /// Numerical Fourier transform `int g(x) e^{-2 pi i x xi} dx`.
    ///
    /// The interval spanning the nodes is integrated cell by cell; the two tails
    /// are written as exponentials times a rational function and integrated
    /// along rays into the half plane where each exponential decays.
    pub fn fourier_transform_numeric(
        &self,
        xi: f64,
        tol: f64,
    ) -> Result<crate::quadrature::QuadratureResult<Complex64>> {
        let eta = xi / self.delta;
        let edge = self.outer_node().ceil() + 1.0;
        let cells = (2.0 * edge) as usize;
        let cell_opts = QuadOptions::with_abs(tol / (4.0 * cells as f64));
        let mut window = crate::quadrature::QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
        for k in 0..cells {
            let lo = -edge + k as f64;
            let r = integrate(
                |z: f64| Complex64::from_polar(self.eval_scaled_real(z), -2.0 * PI * eta * z),
                lo,
                lo + 1.0,
                &cell_opts,
            );
            window.value += r.value;
            window.error_estimate += r.error_estimate;
            window.evaluations += r.evaluations;
            window.converged &= r.converged;
        }
        let tail_tol = tol / 16.0;
        let right = self.exponential_tail(eta, edge, false, tail_tol)?;
        let left = self.exponential_tail(eta, edge, true, tail_tol)?;
        let total_err = window.error_estimate + right.1 + left.1;
        Ok(crate::quadrature::QuadratureResult {
            value: (window.value + right.0 + left.0) / self.delta,
            error_estimate: total_err / self.delta,
            evaluations: window.evaluations,
            converged: window.converged,
        })
    }

    /// `sum_c v_c/(z-c)^2 + d_c/(z-c)`, the rational part of the series.
    fn rational_part(&self, z: Complex64) -> Complex64 {
        let (z, sign) = if self.reflected { (-z, -1.0) } else { (z, 1.0) };
        let mut acc = Complex64::new(0.0, 0.0);
        for node in &self.nodes {
            let inv = (z - node.pos).inv();
            acc += (inv * node.value + node.slope) * inv;
        }
        acc * sign
    }

    /// `int_edge^inf G(+-z) e^{-+2 pi i eta z} dz`, returning (value, error).
    fn exponential_tail(&self, eta: f64, edge: f64, mirrored: bool, tol: f64) -> Result<(Complex64, f64)> {
        // sin^2(pi z) = (2 - e^{2 pi i z} - e^{-2 pi i z}) / 4, cos^2 with + signs
        let side = if mirrored { -1.0 } else { 1.0 };
        let edge_coef = match self.family {
            NodeFamily::Integers => -1.0,
            NodeFamily::HalfIntegers => 1.0,
        };
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        for (k, coef) in [(-1.0, edge_coef), (0.0, 2.0), (1.0, edge_coef)] {
            // after z -> side * z, the exponential is e^{-2 pi i omega z}
            let omega = side * eta - k;
            let r = |z: Complex64| self.rational_part(z * side);
            let (v, e) = if omega == 0.0 {
                let res = integrate_to_infinity(
                    |x: f64| r(Complex64::new(x, 0.0)),
                    edge,
                    TailModel::PolyDecay(2.0),
                    &QuadOptions::with_abs(tol / 6.0),
                )?;
                (res.value, res.error_estimate)
            } else {
                let dir = Complex64::new(0.0, -omega.signum());
                let decay = 2.0 * PI * omega.abs();
                let res = integrate_to_infinity(
                    |s: f64| r(Complex64::new(edge, 0.0) + dir * s) * (-decay * s).exp(),
                    0.0,
                    TailModel::ExpDecay,
                    &QuadOptions::with_abs(tol / 6.0),
                )?;
                let phase = Complex64::from_polar(1.0, -2.0 * PI * omega * edge);
                (phase * dir * res.value, res.error_estimate)
            };
            value += v * coef;
            error += e * coef.abs();
        }
        Ok((value / (4.0 * PI * PI), error / (4.0 * PI * PI)))
    }
}

/// Certified truncation bound for a series of the given radius on
/// `|Re x| <= x_max`, `|Im x| <= y`.
fn tail_bound_for(parity: Parity, delta: f64, radius: usize, x_max: f64, y: f64) -> f64 {
    let reach = delta * x_max;
    let first = match parity {
        // first omitted node; the half-integer family sits 1/2 closer
        Parity::Even => radius as f64 + 0.5,
        Parity::Odd => radius as f64 + 1.0,
    };
    if first <= reach + 1.0 || first < 2.0 * delta {
        return f64::INFINITY;
    }
    let kappa = 1.0 - reach / first;
    let growth = (2.0 * PI * delta * y).exp();
    let pi2 = PI * PI;
    let per_side = match parity {
        Parity::Even => {
            let d2 = delta * delta;
            (d2 / 3.0) / pi2 * power_sum_bound(first, 4.0) / (kappa * kappa)
                + (2.0 * d2 / 3.0) / pi2 * power_sum_bound(first, 4.0) / kappa
        }
        Parity::Odd => {
            let d3 = delta.powi(3);
            (2.0 * d3 / 3.0) / pi2 * power_sum_bound(first, 5.0) / (kappa * kappa)
                + 2.0 * d3 / pi2 * power_sum_bound(first, 5.0) / kappa
                // node-0 slope absorbs the omitted slopes
                + 2.0 * d3 * power_sum_bound(first, 4.0) / PI
        }
    };
    2.0 * per_side * growth
}

/// `sum_{k>=0} f1((first + k) / D)` by Euler-Maclaurin on the inverse-power
/// expansion of `f1`; needs `first / D > 2`.
fn f1_lattice_tail(first: f64, delta: f64) -> f64 {
    // f1(x/D) = sum_j (-1)^{j-1} D^{2j} x^{-2j} / (2j+1)
    let u = first / delta;
    assert!(u > 2.0, "lattice tail needs first/D > 2");
    let terms = 40;
    let coeff = |j: usize| -> f64 {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        sign * delta.powi(2 * j as i32) / (2.0 * j as f64 + 1.0)
    };
    // m-th derivative of x^{-p}
    let deriv = |p: f64, m: usize, x: f64| -> f64 {
        let mut c = 1.0;
        for i in 0..m {
            c *= -(p + i as f64);
        }
        c * x.powf(-p - m as f64)
    };
    let mut integral = 0.0;
    let mut value = 0.0;
    let mut d1 = 0.0;
    let mut d3 = 0.0;
    let mut d5 = 0.0;
    let mut d7 = 0.0;
    for j in 1..=terms {
        let c = coeff(j);
        let p = 2.0 * j as f64;
        let term = c * first.powf(1.0 - p) / (p - 1.0);
        integral += term;
        value += c * first.powf(-p);
        d1 += c * deriv(p, 1, first);
        d3 += c * deriv(p, 3, first);
        d5 += c * deriv(p, 5, first);
        d7 += c * deriv(p, 7, first);
        if term.abs() < 1e-18 * integral.abs() {
            break;
        }
    }
    // sum_{k>=0} g(a+k) = int_a^inf g + g(a)/2 - sum B_{2i}/(2i)! g^{(2i-1)}(a)
    integral + 0.5 * value - d1 / 12.0 + d3 / 720.0 - d5 / 30240.0 + d7 / 1209600.0
}

/// Dilogarithm for `|x| <= 0.6` by its power series.
fn dilog_small(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = x;
    for k in 1..400 {
        let kf = k as f64;
        let term = power / (kf * kf);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        power *= x;
    }
    sum
}

/// Closed-form `L^1` distance between an extremal function and its kernel.
pub fn l1_gap_closed_form(parity: Parity, side: Side, delta: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Parameter(format!("width must be positive, got {delta}")));
    }
    let w = (-2.0 * PI * delta).exp();
    if w > 0.6 {
        return Err(Error::Parameter(format!(
            "width {delta} too small for the dilogarithm series"
        )));
    }
    let a = 2.0 * PI * delta;
    Ok(match (parity, side) {
        (Parity::Odd, _) => PI / (2.0 * delta),
        (Parity::Even, Side::Minorant) => ((PI * PI / 12.0 + dilog_small(-w)) / a - w.ln_1p()) / delta,
        (Parity::Even, Side::Majorant) => ((PI * PI / 6.0 - dilog_small(w)) / a + (-w).ln_1p()) / delta,
    })
}

/// A minorant and majorant of the same kernel and width.
#[derive(Clone, Debug)]
pub struct ExtremalPair {
    pub minorant: ExtremalSeries,
    pub majorant: ExtremalSeries,
    pub l1_minorant_gap: f64,
    pub l1_majorant_gap: f64,
}

impl ExtremalPair {
    pub fn new(parity: Parity, delta: f64, trunc: &Truncation) -> Result<Self> {
        Ok(ExtremalPair {
            minorant: ExtremalSeries::build(parity, Side::Minorant, delta, trunc)?,
            majorant: ExtremalSeries::build(parity, Side::Majorant, delta, trunc)?,
            l1_minorant_gap: l1_gap_closed_form(parity, Side::Minorant, delta)?,
            l1_majorant_gap: l1_gap_closed_form(parity, Side::Majorant, delta)?,
        })
    }

    pub fn even(delta: f64, trunc: &Truncation) -> Result<Self> {
        Self::new(Parity::Even, delta, trunc)
    }

    pub fn odd(delta: f64, trunc: &Truncation) -> Result<Self> {
        Self::new(Parity::Odd, delta, trunc)
    }

    pub fn parity(&self) -> Parity {
        self.majorant.parity
    }

    pub fn delta(&self) -> f64 {
        self.majorant.delta
    }

    pub fn side(&self, side: Side) -> &ExtremalSeries {
        match side {
            Side::Minorant => &self.minorant,
            Side::Majorant => &self.majorant,
        }
    }

    /// Rows `(x, kernel, minorant, majorant)` on an evenly spaced grid.
    pub fn profile(&self, x_min: f64, x_max: f64, points: usize) -> Vec<[f64; 4]> {
        let points = points.max(2);
        let step = (x_max - x_min) / (points - 1) as f64;
        (0..points)
            .map(|i| {
                let x = x_min + step * i as f64;
                [
                    x,
                    self.majorant.target(x),
                    self.minorant.eval_real(x),
                    self.majorant.eval_real(x),
                ]
            })
            .collect()
    }

    /// Largest violation of `minorant <= kernel <= majorant` on a grid, and
    /// the certified truncation bound it should be compared against.
    pub fn domination_check(&self, x_max: f64, step: f64) -> (f64, f64) {
        let n = (x_max / step).round() as i64;
        let mut worst = f64::NEG_INFINITY;
        for i in -n..=n {
            let x = i as f64 * step;
            let k = self.majorant.target(x);
            let lo = self.minorant.eval_real(x) - k;
            let hi = k - self.majorant.eval_real(x);
            worst = worst.max(lo).max(hi);
        }
        let bound = self
            .minorant
            .tail_bound(x_max, 0.0)
            .max(self.majorant.tail_bound(x_max, 0.0));
        (worst, bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{f1, f_odd, f_odd_prime};

    fn series(parity: Parity, side: Side, delta: f64) -> ExtremalSeries {
        ExtremalSeries::build(parity, side, delta, &Truncation::adaptive(10.0, 1e-9)).unwrap()
    }

    #[test]
    fn minorant_interpolates_at_half_integers() {
        let g = series(Parity::Even, Side::Minorant, 2.0);
        for n in -3..=4 {
            let c = n as f64 - 0.5;
            assert!((g.eval_scaled_real(c) - f1(c / 2.0)).abs() < 1e-10, "{c}");
            let h = 1e-4;
            let fd = (g.eval_scaled_real(c + h) - g.eval_scaled_real(c - h)) / (2.0 * h);
            let exact = crate::special::f1_prime(c / 2.0).unwrap() / 2.0;
            assert!((fd - exact).abs() < 1e-7, "{c}");
        }
        assert!((g.eval_scaled_real(0.5) - f1(0.25)).abs() < 1e-12);
    }

    #[test]
    fn majorant_value_at_origin() {
        for &d in &[1.0, 3.0] {
            let g = series(Parity::Even, Side::Majorant, d);
            assert!((g.eval_real(0.0) - 1.0).abs() < 1e-15);
        }
        let m = series(Parity::Odd, Side::Majorant, 2.0);
        assert!((m.eval_real(0.0) - FRAC_PI_2).abs() < 1e-12);
        for n in [-5i32, -1, 1, 2, 7] {
            let c = n as f64;
            assert!((m.eval_scaled_real(c) - f_odd(c / 2.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn odd_minorant_is_reflection() {
        let pair = ExtremalPair::odd(2.0, &Truncation::adaptive(10.0, 1e-9)).unwrap();
        for i in -200..=200 {
            let x = i as f64 * 0.037;
            let a = pair.minorant.eval_real(x);
            let b = -pair.majorant.eval_real(-x);
            assert!((a - b).abs() < 1e-14, "{x}: {a} {b}");
        }
    }

    #[test]
    fn slope_at_odd_origin_balances() {
        let m = series(Parity::Odd, Side::Majorant, 1.0);
        let total: f64 = m.nodes.iter().map(|n| n.slope).sum();
        assert!(total.abs() < 1e-15);
        let direct: f64 = (1..=m.radius).map(|n| 2.0 * f_odd_prime(n as f64)).sum();
        assert!((m.nodes[m.radius].slope + direct).abs() < 1e-14);
    }

    #[test]
    fn real_axis_gives_real_values() {
        let g = series(Parity::Even, Side::Majorant, 1.0);
        for &x in &[0.0, 0.3, -2.7, 9.9] {
            let v = g.eval(Complex64::new(x, 0.0)).unwrap();
            assert!(v.im.abs() < 1e-13);
            assert!((v.re - g.eval_real(x)).abs() < 1e-15);
        }
        // complex path at a tiny imaginary offset agrees with the real path
        let v = g.eval(Complex64::new(1.3, 1e-12)).unwrap();
        assert!((v.re - g.eval_real(1.3)).abs() < 1e-10);
        assert!(v.im.abs() < 1e-10);
    }

    #[test]
    fn complex_range_errors() {
        let g = series(Parity::Even, Side::Minorant, 1.0);
        assert!(matches!(g.eval(Complex64::new(0.0, 11.0)), Err(Error::Range(_))));
        assert!(matches!(g.eval(Complex64::new(f64::NAN, 0.0)), Err(Error::Range(_))));
        let wide = ExtremalSeries::with_radius(Parity::Even, Side::Minorant, 20.0, 64).unwrap();
        assert!(matches!(wide.eval(Complex64::new(0.0, 6.0)), Err(Error::Range(_))));
    }

    #[test]
    fn explicit_radius_too_small() {
        let err = ExtremalSeries::build(Parity::Even, Side::Majorant, 4.0, &Truncation::fixed(50, 40.0, 1e-8));
        match err {
            Err(Error::Truncation { radius, bound, .. }) => {
                assert_eq!(radius, 50);
                assert!(bound.is_infinite() || bound > 1e-8);
            }
            other => panic!("{other:?}"),
        }
        assert!(ExtremalSeries::with_radius(Parity::Odd, Side::Majorant, 1.0, 0).is_err());
        assert!(ExtremalSeries::with_radius(Parity::Odd, Side::Majorant, -1.0, 5).is_err());
    }

    #[test]
    fn tail_bound_covers_doubling() {
        for parity in [Parity::Even, Parity::Odd] {
            let small = ExtremalSeries::with_radius(parity, Side::Majorant, 2.0, 100).unwrap();
            let big = ExtremalSeries::with_radius(parity, Side::Majorant, 2.0, 200).unwrap();
            let bound = small.tail_bound(10.0, 0.0);
            assert!(bound.is_finite());
            for i in -100..=100 {
                let x = i as f64 * 0.1;
                let diff = (small.eval_real(x) - big.eval_real(x)).abs();
                assert!(diff <= bound, "{parity:?} {x}: {diff} > {bound}");
            }
        }
    }

    #[test]
    fn lattice_tail_matches_direct_sum() {
        for &(first, delta) in &[(64.5, 1.0), (65.0, 4.0), (300.0, 8.0)] {
            let direct: f64 = (0..2_000_000).map(|k| f1((first + k as f64) / delta)).sum::<f64>()
                + delta * delta / (3.0 * (first + 2e6 - 0.5));
            let em = f1_lattice_tail(first, delta);
            assert!(
                (em - direct).abs() < 1e-12 * direct.max(1.0),
                "{first} {delta}: {em} {direct}"
            );
        }
    }

    #[test]
    fn dilog_values() {
        assert!((dilog_small(0.5) - (PI * PI / 12.0 - 0.5 * 2f64.ln().powi(2))).abs() < 1e-15);
        assert!((dilog_small(-0.5) + 0.448_414_206_923_646_2).abs() < 1e-15);
    }

    #[test]
    fn closed_form_gaps() {
        assert!((l1_gap_closed_form(Parity::Odd, Side::Minorant, 4.0).unwrap() - PI / 8.0).abs() < 1e-15);
        assert!(l1_gap_closed_form(Parity::Even, Side::Minorant, 50.0).unwrap() < 1e-3);
        // sigma-integral forms by quadrature
        let opts = QuadOptions::with_abs(1e-14);
        for &d in &[1.0, 2.5] {
            let a = 2.0 * PI * d;
            let minus = integrate(
                |s: f64| ((-a * (s - 0.5)).exp().ln_1p() - (-a).exp().ln_1p()) / d,
                0.5,
                1.5,
                &opts,
            )
            .value;
            let plus = integrate(
                |s: f64| (-(-(-a * (s - 0.5)).exp()).ln_1p() + (-(-a).exp()).ln_1p()) / d,
                0.5,
                1.5,
                &opts.singular(crate::quadrature::Singular::Left),
            )
            .value;
            assert!((l1_gap_closed_form(Parity::Even, Side::Minorant, d).unwrap() - minus).abs() < 1e-13);
            assert!((l1_gap_closed_form(Parity::Even, Side::Majorant, d).unwrap() - plus).abs() < 1e-11);
        }
    }

    #[test]
    fn analytic_transform_support_and_mass() {
        for &d in &[1.0, 2.5] {
            let pair = ExtremalPair::even(d, &Truncation::adaptive(10.0, 1e-9)).unwrap();
            for s in [&pair.minorant, &pair.majorant] {
                assert_eq!(s.fourier_transform(1.5 * d).norm(), 0.0);
                let mass = s.fourier_transform(0.0).re + s.omitted_node_mass();
                let gap = match s.side {
                    Side::Minorant => -pair.l1_minorant_gap,
                    Side::Majorant => pair.l1_majorant_gap,
                };
                assert!((mass - (FRAC_PI_2 + gap)).abs() < 1e-12, "{d} {:?}", s.side);
                // continuous at the edge and at the origin
                let a = s.fourier_transform(d * (1.0 - 1e-9));
                assert!(a.norm() < 1e-6);
                let (l, r) = (s.fourier_transform(-1e-12), s.fourier_transform(1e-12));
                assert!((l - r).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn numeric_transform_matches_analytic() {
        for parity in [Parity::Even, Parity::Odd] {
            let s = ExtremalSeries::with_radius(parity, Side::Majorant, 1.5, 48).unwrap();
            for &xi in &[0.0, 0.4, 1.0, 1.5, 2.0, 3.3] {
                let num = s.fourier_transform_numeric(xi, 1e-10).unwrap();
                let ana = s.fourier_transform(xi);
                assert!(
                    (num.value - ana).norm() < 1e-8,
                    "{parity:?} {xi}: {} vs {}",
                    num.value,
                    ana
                );
            }
        }
    }
}
