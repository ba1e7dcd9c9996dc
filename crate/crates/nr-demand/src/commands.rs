//! Subcommand implementations behind the `nr-demand` binary.
//!
//! Each function takes an already loaded scenario plus its own options and
//! returns an [`OutputTable`]; the binary owns flag parsing, file writing,
//! and exit codes. Everything here is deterministic given its arguments,
//! including `cmd_validate`, whose only randomness is the explicit seed.

use crate::error::Result;
use crate::linkbudget::{fading_margin_db, LinkBudget};
use crate::math::ecdf::EmpiricalCdf;
use crate::math::grid::Grid;
use crate::mcs::McsTable;
use crate::resources::{MomentConvention, ResourcePmf};
use crate::scenario::Scenario;
use crate::sim::{run, BlockageMode, SimConfig, SimReport};
use crate::snr::{ks_on_default_grid, CellModel, Shadowing, SnrCdf};
use crate::table::{format_sig, Cell, OutputTable};

/// Which SNR law `snr-cdf` plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveSelect {
    Mixture {
        fading: bool,
    },
    Blocked {
        fading: bool,
    },
    Nonblocked {
        fading: bool,
    },
    /// Normal surrogate next to the exact fading mixture.
    Approx,
}

/// Evaluation grid for `snr-cdf`; `None` bounds fall back to the curve's
/// own support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo_db: Option<f64>,
    pub hi_db: Option<f64>,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> GridSpec {
        GridSpec {
            lo_db: None,
            hi_db: None,
            points: 201,
        }
    }
}

/// The outage targets every report covers when none is forced.
pub const REFERENCE_P_C: [f64; 3] = [0.01, 0.05, 0.1];

/// The session rates `sweep` covers when none is forced.
pub const REFERENCE_RATES_BPS: [f64; 2] = [2e6, 5e6];

/// Fading margin and coverage radii, one row per outage target.
///
/// Without an override the reference targets are reported (plus the
/// scenario's own, if different). An override may be any value in
/// (0, 0.5]; 0.5 is the zero-margin edge, which a scenario file itself
/// cannot carry.
pub fn cmd_coverage(s: &Scenario, p_c_override: Option<f64>) -> Result<OutputTable> {
    let budget = LinkBudget::from_scenario(s)?;
    let s_min_db = McsTable::nr_cqi().min_threshold_db();
    let targets = match p_c_override {
        Some(p) => vec![p],
        None => {
            let mut v: Vec<f64> = REFERENCE_P_C.to_vec();
            if !v.contains(&s.p_c) {
                v.push(s.p_c);
            }
            v.sort_by(f64::total_cmp);
            v
        }
    };
    let mut out = OutputTable::new(["p_c", "m_sb_db", "d3_max_m", "d_e_m"]);
    out.push_meta("s_min_db", s_min_db);
    for p in targets {
        // checks the target's own domain, so 0.5 passes and 0.7 is refused
        fading_margin_db(s.sigma_b_db, p)?;
        let c = budget.coverage_at(s_min_db, p)?;
        out.push_row(vec![
            p.into(),
            c.m_sb_db.into(),
            c.d3_max_m.into(),
            c.d_e_m.into(),
        ]);
    }
    Ok(out)
}

/// CDF of the selected SNR law on a plotting grid.
///
/// `Approx` emits the exact mixture and the surrogate side by side with
/// their pointwise gap, plus the sup distance in the headers.
pub fn cmd_snr_cdf(s: &Scenario, select: CurveSelect, grid: GridSpec) -> Result<OutputTable> {
    let table = McsTable::nr_cqi();
    let model = CellModel::build(s, &table)?;
    let label = |fading: bool| if fading { "with fading" } else { "no fading" };
    let (curve, name) = match select {
        CurveSelect::Mixture { fading } => (
            model.snr_mixture(shadowing(fading)),
            format!("mixture, {}", label(fading)),
        ),
        CurveSelect::Blocked { fading } => (
            model.branch(true, shadowing(fading)),
            format!("blocked branch, {}", label(fading)),
        ),
        CurveSelect::Nonblocked { fading } => (
            model.branch(false, shadowing(fading)),
            format!("non-blocked branch, {}", label(fading)),
        ),
        CurveSelect::Approx => (model.normal_approx()?, "normal surrogate".to_string()),
    };
    let exact = match select {
        CurveSelect::Approx => Some(model.snr_mixture(Shadowing::ClosedForm)),
        _ => None,
    };
    let (sup_lo, sup_hi) = match &exact {
        Some(e) => {
            let (al, ah) = curve.support();
            let (el, eh) = e.support();
            (al.min(el), ah.max(eh))
        }
        None => curve.support(),
    };
    let lo = grid.lo_db.unwrap_or(sup_lo);
    let hi = grid.hi_db.unwrap_or(sup_hi);
    let g = Grid::regular(lo, hi, grid.points)?;

    let mut out = match &exact {
        Some(e) => {
            let mut out = OutputTable::new(["x_db", "exact_cdf", "approx_cdf", "abs_diff"]);
            out.push_meta("curve", &name);
            out.push_meta("p_c", s.p_c);
            out.push_meta("ks_vs_exact", format_sig(ks_on_default_grid(&curve, e)?));
            for x in g.points() {
                let (we, wa) = (e.cdf(x), curve.cdf(x));
                out.push_row(vec![x.into(), we.into(), wa.into(), (wa - we).abs().into()]);
            }
            out
        }
        None => {
            let mut out = OutputTable::new(["x_db", "cdf"]);
            out.push_meta("curve", &name);
            out.push_meta("p_c", s.p_c);
            for x in g.points() {
                out.push_row(vec![x.into(), curve.cdf(x).into()]);
            }
            out
        }
    };
    out.push_meta("grid", format!("[{lo}, {hi}] x {}", grid.points));
    Ok(out)
}

/// Resource-block demand pmf of the fading mixture, outage atom first.
pub fn cmd_pmf(s: &Scenario, convention: MomentConvention) -> Result<OutputTable> {
    let table = McsTable::nr_cqi();
    let model = CellModel::build(s, &table)?;
    let pmf = ResourcePmf::from_snr_cdf(
        &model.snr_mixture(Shadowing::ClosedForm),
        &table,
        s.r_bps,
        s.w_prb_hz,
    )?;
    let m = pmf.moments(convention)?;
    let mut out = OutputTable::new(["prbs", "probability"]);
    out.push_meta("rate_bps", s.r_bps);
    out.push_meta("p_c", s.p_c);
    out.push_meta("convention", convention_name(convention));
    out.push_meta("mean_prbs", format_sig(m.mean));
    out.push_meta("std_prbs", format_sig(m.std()));
    out.push_meta("var_prbs", format_sig(m.var));
    out.push_row(vec![0_u32.into(), pmf.outage_probability().into()]);
    for (n, p) in pmf.probabilities() {
        out.push_row(vec![n.into(), p.into()]);
    }
    Ok(out)
}

/// Monte Carlo cross-check: every analytic law against a seeded run.
///
/// Returns the report table and whether all binding checks passed. The
/// distribution checks bind only at one million samples or more; below
/// that the tolerance column carries the sample-size-appropriate
/// confidence band and nothing is enforced.
pub fn cmd_validate(s: &Scenario, samples: usize, seed: u64) -> Result<(OutputTable, bool)> {
    let table = McsTable::nr_cqi();
    let model = CellModel::build(s, &table)?;
    let binding_n = samples >= 1_000_000;
    let ks_tol = if binding_n {
        0.005
    } else {
        dkw_997(samples).max(0.005)
    };

    let mut out = OutputTable::new([
        "metric",
        "analytic",
        "simulated",
        "error",
        "tolerance",
        "binding",
        "status",
    ]);
    out.push_meta("samples", samples);
    out.push_meta("seed", seed);
    out.push_meta("p_c", s.p_c);
    out.push_meta("rate_bps", s.r_bps);
    out.push_meta(
        "convention",
        convention_name(MomentConvention::IncludeOutageAsZero),
    );
    let mut all_ok = true;

    let variants: [(&str, bool, BlockageMode, SnrCdf); 6] = [
        (
            "mixture_sf",
            true,
            BlockageMode::Stationary,
            model.snr_mixture(Shadowing::ClosedForm),
        ),
        (
            "mixture_nosf",
            false,
            BlockageMode::Stationary,
            model.snr_mixture(Shadowing::Off),
        ),
        (
            "blocked_sf",
            true,
            BlockageMode::Always,
            model.branch(true, Shadowing::ClosedForm),
        ),
        (
            "nonblocked_sf",
            true,
            BlockageMode::Never,
            model.branch(false, Shadowing::ClosedForm),
        ),
        (
            "blocked_nosf",
            false,
            BlockageMode::Always,
            model.branch(true, Shadowing::Off),
        ),
        (
            "nonblocked_nosf",
            false,
            BlockageMode::Never,
            model.branch(false, Shadowing::Off),
        ),
    ];

    let mut mixture_runs: Vec<(SimReport, SnrCdf)> = Vec::new();
    for (name, fading, mode, analytic) in variants {
        let mut cfg = SimConfig::new(samples, seed);
        cfg.shadowing = fading;
        cfg.blockage = mode;
        let report = run(&model, &table, &cfg)?;
        let e = EmpiricalCdf::new(report.snr_db.clone())?;
        let ks = e.ks_distance(|x| analytic.cdf(x));
        push_check(
            &mut out,
            &format!("ks_{name}"),
            None,
            None,
            ks,
            ks_tol,
            binding_n,
            &mut all_ok,
        );
        if mode == BlockageMode::Stationary {
            mixture_runs.push((report, analytic));
        }
    }
    let (sf_report, sf_law) = &mixture_runs[0];
    let (nosf_report, nosf_law) = &mixture_runs[1];

    // marginal blockage frequency; binomial 3-sigma when not binding
    let freq_tol = if binding_n {
        0.002
    } else {
        (3.0 * (model.p_b * (1.0 - model.p_b) / samples as f64).sqrt()).max(0.002)
    };
    push_check(
        &mut out,
        "blocked_fraction",
        Some(model.p_b),
        Some(sf_report.blocked_fraction()),
        (sf_report.blocked_fraction() - model.p_b).abs(),
        freq_tol,
        binding_n,
        &mut all_ok,
    );

    // the surrogate is exact-vs-exact, so it binds at any sample count
    let approx = model.normal_approx()?;
    push_check(
        &mut out,
        "ks_approx_vs_exact",
        None,
        None,
        ks_on_default_grid(&approx, sf_law)?,
        0.05,
        true,
        &mut all_ok,
    );
    if let SnrCdf::NormalApprox { components } = &approx {
        for (which, blocked) in [("blocked", true), ("nonblocked", false)] {
            let single = SnrCdf::normal_mixture(vec![(
                1.0,
                components[usize::from(!blocked)].1,
                components[usize::from(!blocked)].2,
            )])?;
            let exact = model.branch(blocked, Shadowing::ClosedForm);
            push_info(
                &mut out,
                &format!("ks_approx_{which}"),
                None,
                None,
                Some(ks_on_default_grid(&single, &exact)?),
            );
        }
    }

    // side-by-side moment block: SNR then resources, per law
    let laws: [(&str, &SnrCdf, Option<&SimReport>); 3] = [
        ("sf", sf_law, Some(sf_report)),
        ("nosf", nosf_law, Some(nosf_report)),
        ("approx", &approx, None),
    ];
    for (tag, law, report) in laws {
        let m = law.moments()?;
        let (sim_mean, sim_std) = match report {
            Some(r) => {
                let e = EmpiricalCdf::new(r.snr_db.clone())?;
                (Some(e.mean()), Some(e.variance().sqrt()))
            }
            None => (None, None),
        };
        push_info(
            &mut out,
            &format!("mean_snr_{tag}_db"),
            Some(m.mean_db),
            sim_mean,
            None,
        );
        push_info(
            &mut out,
            &format!("std_snr_{tag}_db"),
            Some(m.std_db()),
            sim_std,
            None,
        );

        let pmf = ResourcePmf::from_snr_cdf(law, &table, s.r_bps, s.w_prb_hz)?;
        let pm = pmf.moments(MomentConvention::IncludeOutageAsZero)?;
        let sim_pm = match report {
            Some(r) => Some(
                r.resource_pmf()?
                    .moments(MomentConvention::IncludeOutageAsZero)?,
            ),
            None => None,
        };
        push_info(
            &mut out,
            &format!("outage_{tag}"),
            Some(pmf.outage_probability()),
            report.map(|r| r.outage_fraction()),
            None,
        );
        push_info(
            &mut out,
            &format!("mean_prbs_{tag}"),
            Some(pm.mean),
            sim_pm.as_ref().map(|m| m.mean),
            None,
        );
        push_info(
            &mut out,
            &format!("std_prbs_{tag}"),
            Some(pm.std()),
            sim_pm.as_ref().map(|m| m.std()),
            None,
        );
        push_info(
            &mut out,
            &format!("var_prbs_{tag}"),
            Some(pm.var),
            sim_pm.as_ref().map(|m| m.var),
            None,
        );
    }

    Ok((out, all_ok))
}

/// Coverage, SNR moments, and demand moments over a target/rate grid.
pub fn cmd_sweep(
    s: &Scenario,
    p_cs: &[f64],
    rates_bps: &[f64],
    convention: MomentConvention,
) -> Result<OutputTable> {
    let table = McsTable::nr_cqi();
    let mut out = OutputTable::new([
        "p_c",
        "rate_bps",
        "d_e_m",
        "mean_snr_db",
        "std_snr_db",
        "outage",
        "mean_prbs",
        "std_prbs",
        "var_prbs",
    ]);
    out.push_meta("convention", convention_name(convention));
    for &p_c in p_cs {
        let mut sc = s.clone();
        sc.p_c = p_c;
        sc.validate()?;
        let model = CellModel::build(&sc, &table)?;
        let mixture = model.snr_mixture(Shadowing::ClosedForm);
        let sm = mixture.moments()?;
        for &rate in rates_bps {
            let pmf = ResourcePmf::from_snr_cdf(&mixture, &table, rate, sc.w_prb_hz)?;
            let pm = pmf.moments(convention)?;
            out.push_row(vec![
                p_c.into(),
                rate.into(),
                model.coverage.d_e_m.into(),
                sm.mean_db.into(),
                sm.std_db().into(),
                pmf.outage_probability().into(),
                pm.mean.into(),
                pm.std().into(),
                pm.var.into(),
            ]);
        }
    }
    Ok(out)
}

fn shadowing(fading: bool) -> Shadowing {
    if fading {
        Shadowing::ClosedForm
    } else {
        Shadowing::Off
    }
}

fn convention_name(c: MomentConvention) -> &'static str {
    match c {
        MomentConvention::IncludeOutageAsZero => "outage counted as zero blocks",
        MomentConvention::ConditionOnServed => "conditioned on being served",
    }
}

/// 99.7% two-sided Dvoretzky-Kiefer-Wolfowitz band for an n-sample ECDF.
fn dkw_997(n: usize) -> f64 {
    ((2.0_f64 / 0.003).ln() / (2.0 * n as f64)).sqrt()
}

#[allow(clippy::too_many_arguments)]
fn push_check(
    out: &mut OutputTable,
    metric: &str,
    analytic: Option<f64>,
    simulated: Option<f64>,
    error: f64,
    tolerance: f64,
    binding: bool,
    all_ok: &mut bool,
) {
    let pass = error <= tolerance;
    if binding && !pass {
        *all_ok = false;
    }
    out.push_row(vec![
        metric.into(),
        opt_cell(analytic),
        opt_cell(simulated),
        error.into(),
        tolerance.into(),
        if binding { "yes" } else { "no" }.into(),
        if pass { "pass" } else { "fail" }.into(),
    ]);
}

fn push_info(
    out: &mut OutputTable,
    metric: &str,
    analytic: Option<f64>,
    simulated: Option<f64>,
    error_override: Option<f64>,
) {
    let error = error_override.or(match (analytic, simulated) {
        (Some(a), Some(s)) => Some((a - s).abs()),
        _ => None,
    });
    out.push_row(vec![
        metric.into(),
        opt_cell(analytic),
        opt_cell(simulated),
        opt_cell(error),
        "-".into(),
        "no".into(),
        "info".into(),
    ]);
}

fn opt_cell(v: Option<f64>) -> Cell {
    match v {
        Some(x) => x.into(),
        None => "-".into(),
    }
}
