//! Adaptive Simpson quadrature.
//!
//! The integrands in this crate are smooth except at a handful of known
//! kink points (support edges of piecewise CDFs), so adaptive Simpson with
//! Richardson extrapolation converges quickly once the caller splits at
//! those points via [`integrate_split`].

use crate::error::{Error, Result};

/// Tolerance and recursion limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Absolute tolerance on the whole interval.
    pub tol: f64,
    /// Maximum bisection depth before giving up.
    pub max_depth: u32,
    /// Bisection levels forced before the error estimate may accept a
    /// panel. Five samples can read as converged on a panel whose
    /// structure sits between them; a few mandatory splits close that
    /// blind spot.
    pub min_depth: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            tol: 1e-10,
            max_depth: 60,
            min_depth: 3,
        }
    }
}

/// Integrates `f` over `[a, b]`. Orientation follows the usual sign rule:
/// swapping the endpoints negates the result.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("integrate", "endpoints must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, opts).map(|v| -v);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    adapt(
        &f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        opts.tol,
        opts.max_depth,
        opts.min_depth,
    )
}

/// Integrates `f` over `[a, b]`, forcing panel boundaries at each of
/// `points` that falls strictly inside the interval. Use this when `f` has
/// known kinks so each panel is smooth.
pub fn integrate_split<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    points: &[f64],
    opts: QuadOptions,
) -> Result<f64> {
    if a > b {
        return integrate_split(f, b, a, points, opts).map(|v| -v);
    }
    let mut cuts: Vec<f64> = points.iter().copied().filter(|&p| p > a && p < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut total = 0.0;
    let mut left = a;
    for cut in cuts {
        total += integrate(&f, left, cut, opts)?;
        left = cut;
    }
    total += integrate(&f, left, b, opts)?;
    Ok(total)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    forced: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // 15 = 2^4 - 1, the Richardson factor for Simpson's rule.
    if (forced == 0 && delta.abs() <= 15.0 * tol) || m <= a || m >= b {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence {
            a,
            b,
            best: left + right + delta / 15.0,
        });
    }
    let half_tol = 0.5 * tol;
    let forced = forced.saturating_sub(1);
    let l = adapt(f, a, m, fa, flm, fm, left, half_tol, depth - 1, forced)?;
    let r = adapt(f, m, b, fm, frm, fb, right, half_tol, depth - 1, forced)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::special::erf;

    fn opts() -> QuadOptions {
        QuadOptions::default()
    }

    #[test]
    fn integrates_polynomials_nearly_exactly() {
        let got = integrate(|x| 3.0 * x * x, 0.0, 2.0, opts()).unwrap();
        assert!((got - 8.0).abs() <= 1e-12);
        let got = integrate(|x| x.powi(5) - x, -1.0, 3.0, opts()).unwrap();
        assert!((got - (3f64.powi(6) / 6.0 - 1.0 / 6.0 - 4.0)).abs() <= 1e-9);
    }

    #[test]
    fn integrates_transcendentals() {
        let got = integrate(f64::exp, 0.0, 1.0, opts()).unwrap();
        assert!((got - (std::f64::consts::E - 1.0)).abs() <= 1e-11);
        let got = integrate(f64::sin, 0.0, std::f64::consts::PI, opts()).unwrap();
        assert!((got - 2.0).abs() <= 1e-11);
    }

    #[test]
    fn matches_erf_for_gaussian_integrand() {
        const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
        let got = integrate(|t| TWO_OVER_SQRT_PI * (-t * t).exp(), 0.0, 1.5, opts()).unwrap();
        assert!((got - erf(1.5)).abs() <= 1e-11);
    }

    #[test]
    fn respects_orientation() {
        let fwd = integrate(|x| x, 0.0, 1.0, opts()).unwrap();
        let rev = integrate(|x| x, 1.0, 0.0, opts()).unwrap();
        assert_eq!(fwd, -rev);
        assert_eq!(integrate(|x| x, 2.0, 2.0, opts()).unwrap(), 0.0);
    }

    #[test]
    fn split_handles_kinks() {
        // |x - 0.3| has a kink; exact integral over [0, 1] is
        // 0.3^2/2 + 0.7^2/2.
        let f = |x: f64| (x - 0.3).abs();
        let got = integrate_split(f, 0.0, 1.0, &[0.3], opts()).unwrap();
        assert!((got - (0.045 + 0.245)).abs() <= 1e-13);
        // points outside the interval are ignored
        let got = integrate_split(f, 0.0, 1.0, &[-2.0, 0.3, 9.0], opts()).unwrap();
        assert!((got - 0.29).abs() <= 1e-13);
    }

    #[test]
    fn divergent_integrand_reports_non_convergence() {
        let err =
            integrate(|x| if x == 0.0 { 0.0 } else { 1.0 / x }, 0.0, 1.0, opts()).unwrap_err();
        match err {
            Error::QuadratureNonConvergence { .. } => {}
            other => panic!("expected non-convergence, got {other}"),
        }
    }

    #[test]
    fn rejects_infinite_endpoints() {
        assert!(integrate(|x| x, 0.0, f64::INFINITY, opts()).is_err());
    }
}
