//! Robin eigenvalue and torsion on an interval.
//!
//! On `I = (-1/2, 1/2)` with `u' + alpha u = 0` at the right end (and the
//! mirrored condition at the left), the principal eigenfunction is even:
//! `cos(sqrt(lambda) x)` for `alpha > 0`, `cosh(sqrt(mu) x)` with
//! `lambda = -mu` for `alpha < 0`. The eigenvalue solves
//!
//! ```text
//! alpha^2 / (lambda + alpha^2) = sin^2(sqrt(lambda) / 2)
//! ```
//!
//! which is `sqrt(lambda) tan(sqrt(lambda)/2) = alpha` on the positive branch.

use crate::error::{Error, Result};
use crate::optimize::bisect;

const PI2: f64 = std::f64::consts::PI * std::f64::consts::PI;
const BISECT_ITERS: usize = 200;

/// The interval `(-L/2, L/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval1D {
    length: f64,
}

impl Interval1D {
    pub fn new(length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidArgument(format!("interval length {length}")));
        }
        Ok(Self { length })
    }

    pub fn unit() -> Self {
        Self { length: 1.0 }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// `lambda_1((-L/2, L/2), beta) = lambda_1(I, L beta) / L^2`.
    pub fn eig(&self, beta: f64) -> f64 {
        eig_interval(self.length * beta) / (self.length * self.length)
    }

    /// `tau((-L/2, L/2), beta) = L^3 tau(I, L beta)`.
    pub fn torsion(&self, beta: f64) -> Result<f64> {
        Ok(self.length.powi(3) * torsion_interval(self.length * beta)?)
    }
}

/// Principal Robin eigenvalue `lambda_1(I, alpha)` for any finite `alpha`.
pub fn eig_interval(alpha: f64) -> f64 {
    assert!(alpha.is_finite(), "alpha must be finite");
    if alpha == 0.0 {
        return 0.0;
    }
    if alpha > 0.0 {
        // alpha cos(s/2) - s sin(s/2) is the tan relation without the pole
        let g = |lam: f64| {
            let s = lam.sqrt();
            alpha * (0.5 * s).cos() - s * (0.5 * s).sin()
        };
        bisect(g, 1e-13, PI2 - 1e-13, BISECT_ITERS).expect("sign change on (0, pi^2)")
    } else {
        let g = |mu: f64| {
            let s = mu.sqrt();
            s * (0.5 * s).tanh() + alpha
        };
        let mut hi = (4.0 * alpha * alpha).max(10.0);
        while g(hi) <= 0.0 {
            hi *= 2.0;
        }
        -bisect(g, 0.0, hi, BISECT_ITERS).expect("sign change on (0, hi)")
    }
}

/// Relative mismatch in `alpha^2 / (lambda + alpha^2) = sin^2(sqrt(lambda)/2)`,
/// continued to `lambda < 0` as `-sinh^2(sqrt(-lambda)/2)`.
pub fn eig_relation_residual(alpha: f64, lambda: f64) -> f64 {
    if alpha == 0.0 {
        return lambda.abs();
    }
    let lhs = alpha * alpha / (lambda + alpha * alpha);
    let rhs = if lambda >= 0.0 {
        (0.5 * lambda.sqrt()).sin().powi(2)
    } else {
        -(0.5 * (-lambda).sqrt()).sinh().powi(2)
    };
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs())
}

/// `tau(I, alpha) = 1/12 + 1/(2 alpha)`, the integral of
/// `u(x) = -x^2/2 + 1/8 + 1/(2 alpha)`.
pub fn torsion_interval(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Unsupported(format!(
            "interval torsion needs alpha > 0, got {alpha}"
        )));
    }
    Ok(1.0 / 12.0 + 0.5 / alpha)
}

pub fn torsion_inv_interval(alpha: f64) -> Result<f64> {
    torsion_interval(alpha).map(|t| 1.0 / t)
}

fn check_width_inputs(beta: f64, ws: &[f64]) -> Result<()> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "beta must be positive, got {beta}"
        )));
    }
    if ws.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::InvalidArgument("widths must be positive".into()));
    }
    Ok(())
}

/// `lambda_1(I, w beta) / w` for each `w`; tends to `2 beta` as `w -> 0`.
pub fn small_width_eig_limit(beta: f64, ws: &[f64]) -> Result<Vec<f64>> {
    check_width_inputs(beta, ws)?;
    Ok(ws.iter().map(|&w| eig_interval(w * beta) / w).collect())
}

/// `tau^{-1}(I, w beta) / w` for each `w`; tends to `2 beta` as `w -> 0`.
pub fn small_width_torsion_limit(beta: f64, ws: &[f64]) -> Result<Vec<f64>> {
    check_width_inputs(beta, ws)?;
    ws.iter()
        .map(|&w| Ok(torsion_inv_interval(w * beta)? / w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // 30-digit roots of the tan/tanh relations.
    const ORACLE: [(f64, f64); 8] = [
        (1.0, 1.707_052_975_550_922_5),
        (0.5, 0.921_962_673_589_738_8),
        (5.0, 5.218_728_751_143_931),
        (0.1, 0.196_710_689_283_371_14),
        (10.0, 6.904_678_181_117_094),
        (-1.0, -2.382_097_877_890_841),
        (-10.0, -100.018_145_150_397_93),
        (1e6, 9.869_564_922_790_19),
    ];

    #[test]
    fn matches_oracle() {
        assert_eq!(eig_interval(0.0), 0.0);
        for (alpha, lam) in ORACLE {
            assert_relative_eq!(eig_interval(alpha), lam, max_relative = 1e-13);
        }
        assert_relative_eq!(
            eig_interval(1e-3),
            0.001_999_666_711_106_88,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            eig_interval(-1e-3),
            -0.002_000_333_377_782_01,
            max_relative = 1e-12
        );
    }

    #[test]
    fn residuals_small() {
        for alpha in [1e-3, -1e-3, 1.0, -1.0, 10.0, -10.0, 1e6, 0.37, -4.2] {
            let lam = eig_interval(alpha);
            assert!(
                eig_relation_residual(alpha, lam) <= 1e-12,
                "alpha = {alpha}"
            );
        }
    }

    #[test]
    fn monotone_and_signed() {
        let alphas: Vec<f64> = (-40..=40).map(|i| 0.25 * i as f64).collect();
        let lams: Vec<f64> = alphas.iter().map(|&a| eig_interval(a)).collect();
        for w in lams.windows(2) {
            assert!(w[1] > w[0]);
        }
        for (a, l) in alphas.iter().zip(&lams) {
            if *a > 0.0 {
                assert!(*l > 0.0 && *l < PI2);
            } else if *a < 0.0 {
                assert!(*l < 0.0);
            }
        }
        assert_relative_eq!(eig_interval(1e6), PI2, max_relative = 1e-4);
    }

    #[test]
    fn interval_scaling() {
        let iv = Interval1D::new(0.3).unwrap();
        // direct root of sqrt(l) tan(sqrt(l) L / 2) = beta on (-L/2, L/2)
        let beta = 2.0;
        let l = 0.3;
        let g = |lam: f64| {
            let s = lam.sqrt();
            beta * (0.5 * s * l).cos() - s * (0.5 * s * l).sin()
        };
        let direct = bisect(g, 1e-12, (std::f64::consts::PI / l).powi(2) - 1e-9, 200).unwrap();
        assert_relative_eq!(iv.eig(beta), direct, max_relative = 1e-12);
        assert!(Interval1D::new(0.0).is_err());
    }

    #[test]
    fn torsion_values() {
        assert_relative_eq!(
            torsion_interval(6.0).unwrap(),
            1.0 / 6.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(torsion_inv_interval(1.0).unwrap(), 1.0 / (1.0 / 12.0 + 0.5));
        assert_relative_eq!(
            torsion_interval(1e12).unwrap(),
            1.0 / 12.0,
            max_relative = 1e-10
        );
        assert!(matches!(torsion_interval(0.0), Err(Error::Unsupported(_))));
        assert!(torsion_interval(-1.0).is_err());
        // tau^{-1} <= 2 alpha, deficit shrinking as alpha -> 0
        let mut last = f64::INFINITY;
        for alpha in [10.0, 1.0, 0.1, 0.01] {
            let t = torsion_inv_interval(alpha).unwrap();
            let deficit = (2.0 * alpha - t) / alpha;
            assert!(t < 2.0 * alpha && deficit < last);
            last = deficit;
        }
    }

    #[test]
    fn small_width_limits() {
        let s = small_width_eig_limit(1.0, &[1.0, 1e-2, 1e-3]).unwrap();
        assert_relative_eq!(s[0], 1.707_052_975_550_922_5, max_relative = 1e-12);
        assert!((s[2] - 2.0).abs() / 2.0 < 0.01);
        let s = small_width_eig_limit(5.0, &[1e-4]).unwrap();
        assert!((s[0] - 10.0).abs() / 10.0 < 0.005);
        for w in [1e-2, 1e-3, 1e-4] {
            let t = small_width_torsion_limit(1.0, &[w]).unwrap()[0];
            assert!((t - 2.0).abs() / 2.0 < 10.0 * w);
        }
        assert!(small_width_eig_limit(-1.0, &[0.1]).is_err());
        assert!(small_width_eig_limit(1.0, &[0.0]).is_err());
    }
}
