//! Error-function family: `erf`, `erfc`, and `erfc_inv`.
//!
//! `erf`/`erfc` use the classic SunPro rational approximations (the same
//! interval split and coefficients used by FreeBSD's msun and Go's
//! `math.Erf`), giving errors of about one ulp, far inside the 1e-12
//! absolute budget this crate needs. They are implemented here rather than
//! taken from a platform libm so results are bit-stable across targets,
//! which the golden tests rely on.
//!
//! `erfc_inv` is a safeguarded Newton iteration on `erfc` itself: every step
//! stays inside a maintained bracket and falls back to bisection whenever
//! Newton misbehaves, so it inherits the forward function's accuracy without
//! a separate coefficient table.

use crate::error::{Error, Result};

/// 2/sqrt(pi), the slope of erf at zero.
const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

// SunPro coefficient set. Split points: 0.84375, 1.25, 1/0.35, 6 (erf) / 28 (erfc).
const ERX: f64 = 8.45062911510467529297e-01;
const EFX: f64 = 1.28379167095512586316e-01;
const EFX8: f64 = 1.02703333676410069053e+00;

// erf(x) = x + x*P(x^2)/Q(x^2) on [0, 0.84375]
const PP: [f64; 5] = [
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
];
const QQ: [f64; 5] = [
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
];

// erf(x) = ERX + P(s)/Q(s), s = x - 1, on [0.84375, 1.25]
const PA: [f64; 7] = [
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
];
const QA: [f64; 6] = [
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
];

// erfc(x) = exp(-x^2 - 0.5625 + R(s)/S(s))/x, s = 1/x^2, on [1.25, 1/0.35]
const RA: [f64; 8] = [
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e+01,
    -6.23753324503260060396e+01,
    -1.62396669462573470355e+02,
    -1.84605092906711035994e+02,
    -8.12874355063065934246e+01,
    -9.81432934416914548592e+00,
];
const SA: [f64; 8] = [
    1.96512716674392571292e+01,
    1.37657754143519042600e+02,
    4.34565877475229228821e+02,
    6.45387271733267880336e+02,
    4.29008140027567833386e+02,
    1.08635005541779435134e+02,
    6.57024977031928170135e+00,
    -6.04244152148580987438e-02,
];

// same form on [1/0.35, 28]
const RB: [f64; 7] = [
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e+01,
    -1.60636384855821916062e+02,
    -6.37566443368389627722e+02,
    -1.02509513161107724954e+03,
    -4.83519191608651397019e+02,
];
const SB: [f64; 7] = [
    3.03380607434824582924e+01,
    3.25792512996573918826e+02,
    1.53672958608443695994e+03,
    3.19985821950859553908e+03,
    2.55305040643316442583e+03,
    4.74528541206955367215e+02,
    -2.24409524465858183362e+01,
];

/// Horner evaluation of `c[0] + z*c[1] + z^2*c[2] + ...`.
fn horner(z: f64, coeffs: &[f64]) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// Shared tail factor exp(-x^2 - 0.5625 + R/S) / x for x in [1.25, 28).
///
/// Splits x into a truncated-mantissa head `z` so that `-z*z - 0.5625` is
/// exact and the residual `(z-x)(z+x)` is tiny, per the original SunPro
/// error analysis.
fn erfc_tail(x: f64) -> f64 {
    let s = 1.0 / (x * x);
    let (r, q) = if x < 1.0 / 0.35 {
        (horner(s, &RA), 1.0 + s * horner(s, &SA))
    } else {
        (horner(s, &RB), 1.0 + s * horner(s, &SB))
    };
    let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
    (-z * z - 0.5625).exp() * ((z - x) * (z + x) + r / q).exp() / x
}

/// Error function.
///
/// Absolute error is below 1e-15 everywhere; `erf(-x) = -erf(x)`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let sign = x.is_sign_negative();
    let r = if ax < 0.84375 {
        if ax < 3.725290298461914e-09 {
            // below 2^-28 the linear term dominates; scale guards underflow
            if ax < 2.848094538889218e-306 {
                0.125 * (8.0 * ax + EFX8 * ax)
            } else {
                ax + EFX * ax
            }
        } else {
            let z = ax * ax;
            let y = horner(z, &PP) / (1.0 + z * horner(z, &QQ));
            ax + ax * y
        }
    } else if ax < 1.25 {
        let s = ax - 1.0;
        ERX + horner(s, &PA) / (1.0 + s * horner(s, &QA))
    } else if ax < 6.0 {
        1.0 - erfc_tail(ax)
    } else {
        1.0 // includes +inf
    };
    if sign {
        -r
    } else {
        r
    }
}

/// Complementary error function, `erfc(x) = 1 - erf(x)`.
///
/// Keeps full relative accuracy in the far tail (down to the underflow
/// boundary near x = 27), where computing `1 - erf(x)` would lose
/// everything to cancellation.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let neg = x.is_sign_negative();
    if ax < 0.84375 {
        let temp = if ax < 1.3877787807814457e-17 {
            ax
        } else {
            let z = ax * ax;
            let y = horner(z, &PP) / (1.0 + z * horner(z, &QQ));
            if ax < 0.25 {
                ax + ax * y
            } else {
                // regroup so the 0.5 anchor absorbs rounding
                0.5 + (ax * y + (ax - 0.5))
            }
        };
        return if neg { 1.0 + temp } else { 1.0 - temp };
    }
    if ax < 1.25 {
        let s = ax - 1.0;
        let p = horner(s, &PA) / (1.0 + s * horner(s, &QA));
        return if neg { 1.0 + ERX + p } else { 1.0 - ERX - p };
    }
    if ax < 28.0 {
        if neg {
            if ax >= 6.0 {
                return 2.0;
            }
            return 2.0 - erfc_tail(ax);
        }
        return erfc_tail(ax);
    }
    if neg {
        2.0 // includes -inf
    } else {
        0.0
    }
}

/// Inverse complementary error function: the `x` with `erfc(x) = p`.
///
/// Domain is `0 < p < 2`. Solved by Newton iterations on `erfc` that are
/// safeguarded by a shrinking bracket: any step that leaves the bracket, or
/// fails to make progress, is replaced by a bisection step. For very small
/// `p` the iteration runs on `ln erfc` with the asymptotic derivative
/// `-2x - 1/x`, which stays finite after `exp(-x^2)` underflows.
pub fn erfc_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 2.0) {
        return Err(Error::domain(
            "erfc_inv",
            format!("argument must lie in (0, 2), got {p}"),
        ));
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    if p > 1.0 {
        return Ok(-erfc_inv_positive(2.0 - p));
    }
    Ok(erfc_inv_positive(p))
}

/// Root of erfc on (0, inf) for 0 < p < 1.
fn erfc_inv_positive(p: f64) -> f64 {
    // erfc is strictly decreasing: erfc(lo) > p > erfc(hi).
    let mut lo = 0.0_f64;
    let mut hi = 27.5_f64;
    let log_space = p < 1e-280;
    let target_ln = p.ln();
    // Start from the asymptotic inverse for small p, the series slope at 0
    // otherwise; either lands within the bracket.
    let mut x = if p < 0.5 {
        (-p.ln()).sqrt().clamp(0.25, hi - 0.5)
    } else {
        (1.0 - p) / TWO_OVER_SQRT_PI
    };
    for _ in 0..120 {
        let fx = erfc(x);
        if fx > p {
            lo = x;
        } else if fx < p {
            hi = x;
        } else {
            return x;
        }
        let step = if log_space {
            if fx == 0.0 {
                f64::NAN // forces bisection below
            } else {
                (fx.ln() - target_ln) / (-2.0 * x - 1.0 / x)
            }
        } else {
            (fx - p) / (-TWO_OVER_SQRT_PI * (-x * x).exp())
        };
        let mut next = x - step;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-16 * (1.0 + x.abs()) {
            return next;
        }
        x = next;
        if hi - lo <= f64::EPSILON * (1.0 + lo) {
            break;
        }
    }
    x
}

/// Standard normal CDF, evaluated through `erfc` so deep tails keep
/// relative accuracy.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    const INV_SQRT_TWO_PI: f64 = 0.3989422804014327;
    INV_SQRT_TWO_PI * (-0.5 * z * z).exp()
}

/// Standard normal quantile: the `z` with `normal_cdf(z) = q`, `0 < q < 1`.
pub fn normal_quantile(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(
            "normal_quantile",
            format!("argument must lie in (0, 1), got {q}"),
        ));
    }
    Ok(-std::f64::consts::SQRT_2 * erfc_inv(2.0 * q)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: Maclaurin series for erf, valid to ~1e-15 for
    /// |x| <= 2 (terms fall like x^2/n).
    fn erf_series(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for n in 1..200 {
            let n = n as f64;
            term *= -x * x / n;
            let contrib = term / (2.0 * n + 1.0);
            sum += contrib;
            if contrib.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        TWO_OVER_SQRT_PI * sum
    }

    #[test]
    fn erf_matches_series_oracle_on_core_interval() {
        let mut x = -2.0;
        while x <= 2.0 {
            let want = erf_series(x);
            assert!(
                (erf(x) - want).abs() <= 1e-13,
                "erf({x}) = {} vs series {want}",
                erf(x)
            );
            x += 0.0173;
        }
    }

    #[test]
    fn erf_reference_values() {
        // Mathematica / mpmath references.
        let cases = [
            (0.1, 0.1124629160182848984047123),
            (0.5, 0.5204998778130465376827466),
            (1.0, 0.8427007929497148693412206),
            (1.5, 0.9661051464753107270669763),
            (2.0, 0.9953222650189527341620692),
            (3.0, 0.9999779095030014145586272),
            (4.0, 0.9999999845827420997199811),
            (5.0, 0.9999999999984625402055720),
        ];
        for (x, want) in cases {
            assert!((erf(x) - want).abs() <= 1e-15, "erf({x})");
            assert!((erf(-x) + want).abs() <= 1e-15, "erf(-{x})");
        }
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erf(f64::INFINITY), 1.0);
        assert_eq!(erf(f64::NEG_INFINITY), -1.0);
        assert!(erf(f64::NAN).is_nan());
    }

    #[test]
    fn erfc_reference_values() {
        let cases = [
            (0.5, 0.4795001221869534623172534),
            (1.0, 0.1572992070502851306587794),
            (2.0, 4.677734981047265837930743e-3),
            (3.0, 2.209049699858544137277613e-5),
            (5.0, 1.537459794428034850188343e-12),
            (10.0, 2.088487583762544757000786e-45),
            (15.0, 7.212994172451206666565066e-100),
            (20.0, 5.395865611607900928934999e-176),
        ];
        for (x, want) in cases {
            let got = erfc(x);
            assert!(
                ((got - want) / want).abs() <= 1e-13,
                "erfc({x}) = {got} vs {want}"
            );
            assert!((erfc(-x) - (2.0 - want)).abs() <= 1e-15);
        }
        assert_eq!(erfc(0.0), 1.0);
        assert_eq!(erfc(f64::INFINITY), 0.0);
        assert_eq!(erfc(f64::NEG_INFINITY), 2.0);
    }

    #[test]
    fn erf_erfc_complementarity() {
        let mut x = -5.0;
        while x <= 5.0 {
            assert!((erf(x) + erfc(x) - 1.0).abs() <= 1e-14, "x = {x}");
            x += 0.0619;
        }
    }

    #[test]
    fn erfc_inv_reference_values() {
        // scipy.special.erfcinv references.
        let cases = [
            (0.2, 0.9061938024368232),
            (0.5, 0.4769362762044699),
            (1.0, 0.0),
            (0.02, 1.6449763571331870),
            (0.002, 2.1851242191330292),
            (1.5, -0.4769362762044699),
            (1.8, -0.9061938024368232),
        ];
        for (p, want) in cases {
            let got = erfc_inv(p).unwrap();
            assert!(
                (got - want).abs() <= 1e-12,
                "erfc_inv({p}) = {got} vs {want}"
            );
        }
    }

    #[test]
    fn erfc_inv_round_trip() {
        for k in 1..60 {
            let p = (k as f64 / 30.5).min(1.999); // spans (0, 2)
            let x = erfc_inv(p).unwrap();
            assert!(
                (erfc(x) - p).abs() <= 1e-13 * p.max(1e-3),
                "round trip at p = {p}: erfc({x}) = {}",
                erfc(x)
            );
        }
        // deep tail
        for exp in [-12, -50, -100, -250] {
            let p = 10f64.powi(exp);
            let x = erfc_inv(p).unwrap();
            let back = erfc(x);
            assert!(
                ((back - p) / p).abs() <= 1e-10,
                "p = 1e{exp}: erfc({x}) = {back}"
            );
        }
    }

    #[test]
    fn erfc_inv_rejects_out_of_domain() {
        for p in [0.0, -0.5, 2.0, 2.5, f64::NAN] {
            assert!(erfc_inv(p).is_err(), "p = {p}");
        }
    }

    #[test]
    fn normal_helpers_are_consistent() {
        assert!((normal_cdf(0.0) - 0.5).abs() <= 1e-16);
        assert!((normal_cdf(1.2815515655446004) - 0.9).abs() <= 1e-14);
        assert!((normal_quantile(0.9).unwrap() - 1.2815515655446004).abs() <= 1e-12);
        assert!((normal_quantile(0.975).unwrap() - 1.959963984540054).abs() <= 1e-12);
        // pdf integrates the cdf: finite-difference spot check
        let h = 1e-6;
        let d = (normal_cdf(0.7 + h) - normal_cdf(0.7 - h)) / (2.0 * h);
        assert!((d - normal_pdf(0.7)).abs() <= 1e-9);
    }
}
