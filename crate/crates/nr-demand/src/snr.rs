//! The SNR distribution of a randomly placed user.
//!
//! Built in three layers. The placement CDF is exact and elementary: with
//! the user's squared 3D distance uniform on `[c^2, d3_max^2]` (the disk
//! law), the median SNR `A - 10 zeta log10(d3)` has CDF
//! `W(x) = 1 - (10^((A-x)/(5 zeta)) - c^2)/d_E^2` on its support. Shadow
//! fading adds an independent normal in dB, a convolution this module
//! evaluates two independent ways: a closed form in normal CDFs (the
//! Gaussian MGF integrates the exponential kernel analytically) and direct
//! adaptive quadrature; keeping both honest against each other is one of
//! the crate's standing checks. Finally the blocked and clear branches mix
//! with the cell-averaged blockage weight, and a two-component normal
//! surrogate matching each branch's mean and variance gives the cheap
//! approximation used downstream.

use crate::error::{Error, Result};
use crate::linkbudget::{Coverage, LinkBudget};
use crate::math::ecdf::EmpiricalCdf;
use crate::math::grid::{sup_distance_on_grid, Grid};
use crate::math::quad::{integrate_split, QuadOptions};
use crate::math::special::{erfc, normal_cdf, normal_pdf};
use crate::mcs::McsTable;
use crate::scenario::Scenario;
use crate::spatial::{BlockageField, CellGeometry};

/// Convolution support is the base support widened by this many shadow
/// sigmas; the normal tail beyond is below 1e-15.
const SIGMA_SPAN: f64 = 8.0;

/// How shadow fading enters a branch CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shadowing {
    /// No fading: the pure placement CDF.
    Off,
    /// Analytic convolution (the production route).
    ClosedForm,
    /// Numerical convolution (the independent check).
    Quadrature,
}

/// CDF of the median SNR under random placement, one LoS state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementCdf {
    a_db: f64,
    zeta: f64,
    /// d_E^2, m^2.
    d_e2: f64,
    /// (h_A - h_U)^2, m^2.
    c2: f64,
    s_lo_db: f64,
    s_hi_db: f64,
}

impl PlacementCdf {
    pub fn new(a_db: f64, zeta: f64, geom: &CellGeometry) -> PlacementCdf {
        let c = geom.gap_m();
        let d3_max = geom.d3_max_m();
        PlacementCdf {
            a_db,
            zeta,
            d_e2: geom.d_e_m() * geom.d_e_m(),
            c2: c * c,
            s_lo_db: a_db - 10.0 * zeta * d3_max.log10(),
            s_hi_db: a_db - 10.0 * zeta * c.log10(),
        }
    }

    /// SNR range attainable inside the cell: edge value to mast-foot value.
    pub fn support(&self) -> (f64, f64) {
        (self.s_lo_db, self.s_hi_db)
    }

    pub fn a_db(&self) -> f64 {
        self.a_db
    }

    pub fn cdf(&self, x_db: f64) -> f64 {
        if x_db <= self.s_lo_db {
            0.0
        } else if x_db >= self.s_hi_db {
            1.0
        } else {
            let y2 = 10f64.powf((self.a_db - x_db) / (5.0 * self.zeta));
            (1.0 - (y2 - self.c2) / self.d_e2).clamp(0.0, 1.0)
        }
    }

    /// dB-to-nat slope of the exponential kernel, `ln 10 / (5 zeta)`.
    fn beta(&self) -> f64 {
        core::f64::consts::LN_10 / (5.0 * self.zeta)
    }
}

/// `Phi(h) - Phi(l)` for `l <= h`, stable in both tails: when both
/// arguments sit in the upper tail the difference is taken between
/// complementary CDFs, which keeps relative accuracy instead of
/// cancelling near 1.
fn phi_interval(l: f64, h: f64) -> f64 {
    debug_assert!(l <= h);
    if l > 0.0 {
        0.5 * (erfc(l / std::f64::consts::SQRT_2) - erfc(h / std::f64::consts::SQRT_2))
    } else {
        normal_cdf(h) - normal_cdf(l)
    }
}

/// Closed-form shadow-fading convolution of a placement CDF.
///
/// Splitting `E[W(x - Z)]`, `Z ~ N(0, sigma^2)`, at the support edges gives
/// a constant piece and an exponential piece; the latter integrates through
/// the Gaussian MGF:
///
/// `W_SF(x) = 1 - Phi(h) + (1 + c^2/d_E^2)(Phi(h) - Phi(l))
///            - (e^{beta(A - x) + beta^2 sigma^2/2} / d_E^2)(Phi(h + beta sigma) - Phi(l + beta sigma))`
///
/// with `l = (s_lo - x)/sigma`, `h = (s_hi - x)/sigma`. The exponential
/// factor is assembled in log space so extreme arguments cannot overflow.
fn convolved_cdf_closed(base: &PlacementCdf, sigma_db: f64, x_db: f64) -> f64 {
    let (s_lo, s_hi) = base.support();
    let l = (s_lo - x_db) / sigma_db;
    let h = (s_hi - x_db) / sigma_db;
    let beta = base.beta();
    let upper = 0.5 * erfc(h / std::f64::consts::SQRT_2);
    let middle = (1.0 + base.c2 / base.d_e2) * phi_interval(l, h);
    let shifted = phi_interval(l + beta * sigma_db, h + beta * sigma_db);
    let exponential = if shifted > 0.0 {
        (beta * (base.a_db - x_db) + 0.5 * beta * beta * sigma_db * sigma_db + shifted.ln()
            - base.d_e2.ln())
        .exp()
    } else {
        0.0
    };
    (upper + middle - exponential).clamp(0.0, 1.0)
}

/// Quadrature route for the same convolution: integrates
/// `W(x - z) phi_sigma(z)` over `z` in `[-8 sigma, 8 sigma]`. Panels split
/// where `x - z` crosses the base support (the integrand's kinks) and at
/// the kernel's own scale marks, so no Gaussian bump can hide inside a
/// wide panel. Kept deliberately independent of the closed form.
fn convolved_cdf_quadrature(
    base: &PlacementCdf,
    sigma_db: f64,
    x_db: f64,
    opts: QuadOptions,
) -> Result<f64> {
    let (s_lo, s_hi) = base.support();
    let span = SIGMA_SPAN * sigma_db;
    let density = |z: f64| normal_pdf(z / sigma_db) / sigma_db;
    let cuts = [
        x_db - s_hi,
        x_db - s_lo,
        -4.0 * sigma_db,
        -2.0 * sigma_db,
        -sigma_db,
        0.0,
        sigma_db,
        2.0 * sigma_db,
        4.0 * sigma_db,
    ];
    let v = integrate_split(
        |z| base.cdf(x_db - z) * density(z),
        -span,
        span,
        &cuts,
        opts,
    )?;
    Ok(v.clamp(0.0, 1.0))
}

/// First two moments of an SNR distribution, dB and dB^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrMoments {
    pub mean_db: f64,
    pub var_db2: f64,
}

impl SnrMoments {
    pub fn std_db(&self) -> f64 {
        self.var_db2.max(0.0).sqrt()
    }
}

/// An SNR distribution in one of the forms the model produces.
///
/// Every variant exposes the same contract: a CDF over dB values and a
/// support outside which it is 0 or 1 (to within normal-tail mass for the
/// convolved and surrogate kinds).
#[derive(Debug, Clone)]
pub enum SnrCdf {
    /// Placement only, no shadow fading.
    NoFading(PlacementCdf),
    /// Placement convolved with `N(0, sigma^2)` shadowing, closed form.
    ConvolvedClosedForm { base: PlacementCdf, sigma_db: f64 },
    /// Same convolution by adaptive quadrature.
    ConvolvedQuadrature {
        base: PlacementCdf,
        sigma_db: f64,
        opts: QuadOptions,
    },
    /// Blockage mixture of two branch distributions.
    Mixture {
        p_b: f64,
        blocked: Box<SnrCdf>,
        nonblocked: Box<SnrCdf>,
    },
    /// Weighted normal components `(weight, mean, std)`.
    NormalApprox { components: Vec<(f64, f64, f64)> },
    /// Step CDF of a finite sample.
    Empirical(EmpiricalCdf),
}

impl SnrCdf {
    /// Shadow-fading branch CDF; `sigma_db = 0` degenerates to the
    /// placement CDF for either route.
    pub fn convolved(base: PlacementCdf, sigma_db: f64, route: Shadowing) -> SnrCdf {
        if sigma_db == 0.0 {
            return SnrCdf::NoFading(base);
        }
        match route {
            Shadowing::Off => SnrCdf::NoFading(base),
            Shadowing::ClosedForm => SnrCdf::ConvolvedClosedForm { base, sigma_db },
            Shadowing::Quadrature => SnrCdf::ConvolvedQuadrature {
                base,
                sigma_db,
                opts: QuadOptions::default(),
            },
        }
    }

    pub fn mixture(p_b: f64, blocked: SnrCdf, nonblocked: SnrCdf) -> Result<SnrCdf> {
        if !((0.0..=1.0).contains(&p_b)) {
            return Err(Error::domain(
                "snr mixture",
                format!("blockage weight must lie in [0, 1], got {p_b}"),
            ));
        }
        Ok(SnrCdf::Mixture {
            p_b,
            blocked: Box::new(blocked),
            nonblocked: Box::new(nonblocked),
        })
    }

    /// Normal mixture from `(weight, mean, std)` triples. Weights must be
    /// non-negative and sum to one.
    pub fn normal_mixture(components: Vec<(f64, f64, f64)>) -> Result<SnrCdf> {
        if components.is_empty() {
            return Err(Error::domain("normal mixture", "no components"));
        }
        let mut total = 0.0;
        for &(w, mu, sigma) in &components {
            if !(w >= 0.0 && mu.is_finite() && sigma >= 0.0 && sigma.is_finite()) {
                return Err(Error::domain(
                    "normal mixture",
                    format!("bad component (w = {w}, mu = {mu}, sigma = {sigma})"),
                ));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::domain(
                "normal mixture",
                format!("weights sum to {total}, expected 1"),
            ));
        }
        Ok(SnrCdf::NormalApprox { components })
    }

    pub fn empirical(samples: Vec<f64>) -> Result<SnrCdf> {
        Ok(SnrCdf::Empirical(EmpiricalCdf::new(samples)?))
    }

    pub fn cdf(&self, x_db: f64) -> f64 {
        match self {
            SnrCdf::NoFading(base) => base.cdf(x_db),
            SnrCdf::ConvolvedClosedForm { base, sigma_db } => {
                convolved_cdf_closed(base, *sigma_db, x_db)
            }
            SnrCdf::ConvolvedQuadrature {
                base,
                sigma_db,
                opts,
            } => match convolved_cdf_quadrature(base, *sigma_db, x_db, *opts) {
                Ok(v) => v,
                // depth exhaustion still carries the deepest estimate; for
                // these smooth integrands it is not reachable in practice
                Err(Error::QuadratureNonConvergence { best, .. }) => best.clamp(0.0, 1.0),
                Err(_) => unreachable!("finite bounds by construction"),
            },
            SnrCdf::Mixture {
                p_b,
                blocked,
                nonblocked,
            } => p_b * blocked.cdf(x_db) + (1.0 - p_b) * nonblocked.cdf(x_db),
            SnrCdf::NormalApprox { components } => components
                .iter()
                .map(|&(w, mu, sigma)| {
                    if sigma == 0.0 {
                        if x_db >= mu {
                            w
                        } else {
                            0.0
                        }
                    } else {
                        w * normal_cdf((x_db - mu) / sigma)
                    }
                })
                .sum(),
            SnrCdf::Empirical(e) => e.cdf(x_db),
        }
    }

    /// Bounds outside which the CDF is 0 / 1 up to far-tail normal mass.
    pub fn support(&self) -> (f64, f64) {
        match self {
            SnrCdf::NoFading(base) => base.support(),
            SnrCdf::ConvolvedClosedForm { base, sigma_db }
            | SnrCdf::ConvolvedQuadrature { base, sigma_db, .. } => {
                let (lo, hi) = base.support();
                (lo - SIGMA_SPAN * sigma_db, hi + SIGMA_SPAN * sigma_db)
            }
            SnrCdf::Mixture {
                blocked,
                nonblocked,
                ..
            } => {
                let (bl, bh) = blocked.support();
                let (nl, nh) = nonblocked.support();
                (bl.min(nl), bh.max(nh))
            }
            SnrCdf::NormalApprox { components } => components.iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), &(_, mu, sigma)| {
                    (
                        lo.min(mu - SIGMA_SPAN * sigma),
                        hi.max(mu + SIGMA_SPAN * sigma),
                    )
                },
            ),
            SnrCdf::Empirical(e) => (e.min(), e.max()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SnrCdf::NoFading(_) => "no-fading",
            SnrCdf::ConvolvedClosedForm { .. } => "convolved-exact",
            SnrCdf::ConvolvedQuadrature { .. } => "convolved-quadrature",
            SnrCdf::Mixture { .. } => "mixture",
            SnrCdf::NormalApprox { .. } => "normal-approx",
            SnrCdf::Empirical(_) => "empirical",
        }
    }

    /// Points where some piece of this CDF changes regime; quadrature over
    /// it should put panel boundaries here.
    fn split_points(&self, into: &mut Vec<f64>) {
        match self {
            SnrCdf::NoFading(base) => {
                let (lo, hi) = base.support();
                into.push(lo);
                into.push(hi);
            }
            SnrCdf::ConvolvedClosedForm { base, .. } | SnrCdf::ConvolvedQuadrature { base, .. } => {
                // smooth everywhere, but the base edges are where curvature
                // concentrates
                let (lo, hi) = base.support();
                into.push(lo);
                into.push(hi);
            }
            SnrCdf::Mixture {
                blocked,
                nonblocked,
                ..
            } => {
                blocked.split_points(into);
                nonblocked.split_points(into);
            }
            SnrCdf::NormalApprox { components } => {
                for &(_, mu, _) in components {
                    into.push(mu);
                }
            }
            SnrCdf::Empirical(_) => {}
        }
    }

    /// Mean and variance. Continuous kinds integrate the survival function
    /// (`E[g(X)] = g(lo) + int g'(x)(1 - F(x)) dx`); the normal surrogate
    /// and empirical kinds have exact forms.
    pub fn moments(&self) -> Result<SnrMoments> {
        match self {
            SnrCdf::NormalApprox { components } => {
                let mean: f64 = components.iter().map(|&(w, mu, _)| w * mu).sum();
                let ex2: f64 = components
                    .iter()
                    .map(|&(w, mu, sigma)| w * (mu * mu + sigma * sigma))
                    .sum();
                Ok(SnrMoments {
                    mean_db: mean,
                    var_db2: ex2 - mean * mean,
                })
            }
            SnrCdf::Empirical(e) => Ok(SnrMoments {
                mean_db: e.mean(),
                var_db2: e.variance(),
            }),
            _ => {
                let (lo, hi) = self.support();
                let mut splits = Vec::new();
                self.split_points(&mut splits);
                let opts = QuadOptions::default();
                let survival = |x: f64| 1.0 - self.cdf(x);
                let mean = lo + integrate_split(survival, lo, hi, &splits, opts)?;
                let ex2 =
                    lo * lo + integrate_split(|x| 2.0 * x * survival(x), lo, hi, &splits, opts)?;
                Ok(SnrMoments {
                    mean_db: mean,
                    var_db2: ex2 - mean * mean,
                })
            }
        }
    }
}

/// Kolmogorov-Smirnov distance between two SNR CDFs over the default grid
/// spanning both supports.
pub fn ks_on_default_grid(a: &SnrCdf, b: &SnrCdf) -> Result<f64> {
    let (al, ah) = a.support();
    let (bl, bh) = b.support();
    let grid = Grid::spanning_support(al.min(bl), ah.max(bh))?;
    Ok(sup_distance_on_grid(&grid, |x| a.cdf(x), |x| b.cdf(x)))
}

/// Everything derived from a scenario that the distribution layer needs:
/// budget, coverage, geometry, and the averaged blockage weight.
#[derive(Debug, Clone)]
pub struct CellModel {
    pub scenario: Scenario,
    pub budget: LinkBudget,
    pub coverage: Coverage,
    pub geometry: CellGeometry,
    pub blockage: BlockageField,
    /// Cell-averaged blockage probability.
    pub p_b: f64,
}

impl CellModel {
    /// Solves the whole geometric chain for a scenario. The MCS table
    /// supplies the outage threshold that pins the coverage radius.
    pub fn build(scenario: &Scenario, table: &McsTable) -> Result<CellModel> {
        let budget = LinkBudget::from_scenario(scenario)?;
        let coverage = budget.solve_coverage(table.min_threshold_db())?;
        let geometry = coverage.geometry(scenario)?;
        let blockage = BlockageField::from_scenario(scenario)?;
        let p_b = blockage.averaged_over_cell(&geometry)?;
        Ok(CellModel {
            scenario: scenario.clone(),
            budget,
            coverage,
            geometry,
            blockage,
            p_b,
        })
    }

    /// Placement CDF of one LoS branch.
    pub fn placement(&self, blocked: bool) -> PlacementCdf {
        PlacementCdf::new(
            self.budget.a_db(blocked),
            self.budget.zeta(),
            &self.geometry,
        )
    }

    /// One branch with the chosen shadow treatment.
    pub fn branch(&self, blocked: bool, shadowing: Shadowing) -> SnrCdf {
        let base = self.placement(blocked);
        match shadowing {
            Shadowing::Off => SnrCdf::NoFading(base),
            route => SnrCdf::convolved(base, self.budget.sigma_db(blocked), route),
        }
    }

    /// The full SNR distribution: blockage mixture of both branches.
    pub fn snr_mixture(&self, shadowing: Shadowing) -> SnrCdf {
        SnrCdf::mixture(
            self.p_b,
            self.branch(true, shadowing),
            self.branch(false, shadowing),
        )
        .expect("averaged blockage probability is a probability")
    }

    /// Two-component normal surrogate: each branch keeps its placement
    /// mean, and its variance is the placement variance plus the shadowing
    /// variance.
    pub fn normal_approx(&self) -> Result<SnrCdf> {
        let mut components = Vec::with_capacity(2);
        for (blocked, weight) in [(true, self.p_b), (false, 1.0 - self.p_b)] {
            let m = SnrCdf::NoFading(self.placement(blocked)).moments()?;
            let sigma_sf = self.budget.sigma_db(blocked);
            components.push((weight, m.mean_db, (m.var_db2 + sigma_sf * sigma_sf).sqrt()));
        }
        SnrCdf::normal_mixture(components)
    }
}
