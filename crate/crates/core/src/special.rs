//! The two target kernels and the logarithmic kernel they come from.
//!
//! `f1(x) = 1 - x arctan(1/x)` is even, and `f(x) = arctan(1/x) - x/(1+x^2)` is
//! odd with `f = -f1'`. For `|x| > 2` both are evaluated from their inverse-power
//! series, which avoids the cancellation in the closed forms.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const SERIES_CUTOFF: f64 = 2.0;

/// Sums `sum_{n>=1} (-1)^(n-1) c(n) q^n` until terms drop below round-off.
fn alternating(q: f64, c: impl Fn(f64) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut power = q;
    let mut sign = 1.0;
    for n in 1..200 {
        let term = sign * c(n as f64) * power;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        power *= q;
        sign = -sign;
    }
    sum
}

/// `1 - x arctan(1/x)`, with the removable value 1 at the origin.
pub fn f1(x: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        1.0
    } else if a > SERIES_CUTOFF {
        alternating(1.0 / (a * a), |n| 1.0 / (2.0 * n + 1.0))
    } else {
        1.0 - a * (1.0 / a).atan()
    }
}

/// Derivative of [`f1`]; undefined at 0 where `f1` has a corner.
pub fn f1_prime(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain {
            what: "derivative of 1 - x arctan(1/x)",
            value: x,
        });
    }
    Ok(-f_odd(x))
}

/// `arctan(1/x) - x/(1+x^2)`, taking the value 0 at the jump `x = 0`.
pub fn f_odd(x: f64) -> f64 {
    let a = x.abs();
    let v = if a == 0.0 {
        return 0.0;
    } else if a > SERIES_CUTOFF {
        let q = 1.0 / (a * a);
        alternating(q, |n| 2.0 * n / (2.0 * n + 1.0)) / a
    } else {
        (1.0 / a).atan() - a / (1.0 + a * a)
    };
    v.copysign(x)
}

/// Derivative of [`f_odd`] away from the jump: `-2/(1+x^2)^2`.
pub fn f_odd_prime(x: f64) -> f64 {
    let s = 1.0 + x * x;
    -2.0 / (s * s)
}

/// One-sided limits of [`f_odd`] at the origin, `(-pi/2, pi/2)`.
pub const F_ODD_JUMP: (f64, f64) = (-FRAC_PI_2, FRAC_PI_2);

/// Logarithmic kernel `0.5 log((x^2 + D^2) / (x^2 + (sigma - 1/2)^2 D^2))`.
///
/// Integrating it over `sigma` in `[1/2, 3/2]` gives `f1(x/D)`.
pub fn log_kernel(x: f64, sigma: f64, delta: f64) -> Result<f64> {
    if delta <= 0.0 || !delta.is_finite() {
        return Err(Error::Parameter(format!("width must be positive, got {delta}")));
    }
    if x == 0.0 && sigma == 0.5 {
        return Err(Error::Domain {
            what: "log kernel at x = 0, sigma = 1/2",
            value: x,
        });
    }
    let s = (sigma - 0.5) * delta;
    Ok(0.5 * ((x * x + delta * delta) / (x * x + s * s)).ln())
}

/// Which kernel a family of extremal functions approximates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    /// The even kernel [`f1`].
    Even,
    /// The odd kernel [`f_odd`].
    Odd,
}

impl Parity {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Parity::Even => f1(x),
            Parity::Odd => f_odd(x),
        }
    }

    /// Derivative; for the even kernel the corner at 0 is reported as 0.
    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Parity::Even => f1_prime(x).unwrap_or(0.0),
            Parity::Odd => f_odd_prime(x),
        }
    }
}

/// A kernel dilated by `delta`: `x -> k(x / delta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledKernel {
    pub parity: Parity,
    pub delta: f64,
}

impl ScaledKernel {
    pub fn new(parity: Parity, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::Parameter(format!("width must be positive, got {delta}")));
        }
        Ok(ScaledKernel { parity, delta })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.parity.eval(x / self.delta)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.parity.derivative(x / self.delta) / self.delta
    }
}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    // r in [-1, 1]
    if r.abs() <= 0.25 {
        (std::f64::consts::PI * r).sin()
    } else if r > 0.75 {
        (std::f64::consts::PI * (1.0 - r)).sin()
    } else if r < -0.75 {
        -(std::f64::consts::PI * (1.0 + r)).sin()
    } else if r > 0.0 {
        (std::f64::consts::PI * (0.5 - r)).cos()
    } else {
        -(std::f64::consts::PI * (-0.5 - r)).cos()
    }
}

/// `cos(pi x)` with exact zeros at the half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn known_values() {
        assert_eq!(f1(0.0), 1.0);
        assert!((f1(1.0) - (1.0 - PI / 4.0)).abs() < 1e-15);
        assert!((f_odd(1.0) - (PI / 4.0 - 0.5)).abs() < 1e-15);
        assert_eq!(f_odd(0.0), 0.0);
        assert_eq!(f_odd_prime(0.0), -2.0);
        assert!((f_odd_prime(1.0) + 0.5).abs() < 1e-16);
        assert!(f1_prime(0.0).is_err());
        assert!((f1_prime(1.0).unwrap() - (0.5 - PI / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn series_branch_matches_closed_form() {
        for &x in &[2.000001f64, 2.5, 3.0, 10.0] {
            let closed = 1.0 - x * (1.0 / x).atan();
            assert!((f1(x) - closed).abs() < 1e-14, "{x}");
            let closed = (1.0 / x).atan() - x / (1.0 + x * x);
            assert!((f_odd(x) - closed).abs() < 1e-14, "{x}");
        }
    }

    #[test]
    fn large_argument_asymptotics() {
        let x = 1e6;
        assert!((f1(x) * 3.0 * x * x - 1.0).abs() < 1e-10);
        assert!((f_odd(x) * 1.5 * x * x * x - 1.0).abs() < 1e-10);
    }

    #[test]
    fn jump_limits() {
        assert!((f_odd(1e-12) - F_ODD_JUMP.1).abs() < 1e-11);
        assert!((f_odd(-1e-12) - F_ODD_JUMP.0).abs() < 1e-11);
    }

    #[test]
    fn log_kernel_integrates_to_f1() {
        use crate::quadrature::{integrate, QuadOptions, Singular};
        for &(x, delta) in &[(0.7, 1.0), (3.0, 2.0), (-1.5, 0.5)] {
            let opts = QuadOptions::with_abs(1e-13).singular(Singular::Left);
            let r = integrate(|s| log_kernel(x, s, delta).unwrap(), 0.5, 1.5, &opts);
            assert!((r.value - f1(x / delta)).abs() < 1e-12, "{x} {delta}");
        }
        assert!(log_kernel(0.0, 0.5, 1.0).is_err());
        assert!(log_kernel(1.0, 0.7, 0.0).is_err());
    }

    #[test]
    fn trig_helpers() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(-1e6), 0.0);
        assert_eq!(cos_pi(2.5), 0.0);
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        for k in -20..20 {
            let x = k as f64 * 0.137 + 0.01;
            assert!((sin_pi(x) - (PI * x).sin()).abs() < 1e-14, "{x}");
            assert!((cos_pi(x) - (PI * x).cos()).abs() < 1e-14, "{x}");
        }
    }

    fn central_difference(g: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-5 * x.abs().max(1.0);
        (g(x + h) - g(x - h)) / (2.0 * h)
    }

    proptest! {
        #[test]
        fn symmetry(x in -1e3f64..1e3) {
            prop_assert_eq!(f1(x), f1(-x));
            prop_assert_eq!(f_odd(x), -f_odd(-x));
        }

        #[test]
        fn derivatives_match_finite_differences(x in 0.05f64..50.0) {
            let d1 = central_difference(f1, x);
            prop_assert!((f1_prime(x).unwrap() - d1).abs() < 1e-7 * (1.0 + d1.abs()));
            let d = central_difference(f_odd, x);
            prop_assert!((f_odd_prime(x) - d).abs() < 1e-7 * (1.0 + d.abs()));
        }

        #[test]
        fn tail_bounds(u in 0.01f64..1e4) {
            prop_assert!(f1(u) <= 1.0_f64.min(1.0 / (3.0 * u * u)) * (1.0 + 1e-14));
            prop_assert!(f1(u) > 0.0);
            prop_assert!(f_odd(u) <= 2.0 / (3.0 * u * u * u) * (1.0 + 1e-14));
            prop_assert!(f_odd(u) > 0.0);
            prop_assert!(f_odd_prime(u).abs() <= 2.0 / u.powi(4));
        }

        #[test]
        fn scaled_kernel(x in -100.0f64..100.0, delta in 0.1f64..10.0) {
            let k = ScaledKernel::new(Parity::Odd, delta).unwrap();
            prop_assert_eq!(k.eval(x), f_odd(x / delta));
            prop_assert!((k.derivative(x) - f_odd_prime(x / delta) / delta).abs() < 1e-15);
        }
    }
}
