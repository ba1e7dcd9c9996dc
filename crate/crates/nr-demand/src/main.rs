//! Command-line front end. Flag parsing and file plumbing live here; the
//! work happens in `nr_demand::commands`. Exit codes: 0 on success, 1 when
//! `validate` trips a binding tolerance, 2 on any input error (bad flags,
//! unreadable scenario, infeasible request).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nr_demand::commands::{
    cmd_coverage, cmd_pmf, cmd_snr_cdf, cmd_sweep, cmd_validate, CurveSelect, GridSpec,
    REFERENCE_P_C, REFERENCE_RATES_BPS,
};
use nr_demand::{MomentConvention, OutputTable, Result, Scenario};

#[derive(Parser)]
#[command(
    name = "nr-demand",
    version,
    about = "Resource-block demand distributions for a millimeter-wave cell"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fading margin and coverage radii per outage target
    Coverage(CoverageArgs),
    /// CDF of the session SNR under a chosen law
    SnrCdf(SnrCdfArgs),
    /// Probability mass function of per-session resource-block demand
    Pmf(PmfArgs),
    /// Normal surrogate next to the exact fading mixture (snr-cdf --approx)
    Approx(ApproxArgs),
    /// Seeded Monte Carlo cross-check of every analytic law
    Validate(ValidateArgs),
    /// Summary table over a grid of outage targets and session rates
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Common {
    /// Scenario file (flat key = value document)
    #[arg(long, value_name = "PATH")]
    scenario: PathBuf,
    /// Override the scenario's target outage probability
    #[arg(long = "p-c", value_name = "X")]
    p_c: Option<f64>,
    /// Override the scenario's session rate, bit/s
    #[arg(long, value_name = "BPS")]
    rate: Option<f64>,
    /// Output rendering
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Records,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Branch {
    Blocked,
    Nonblocked,
    Mixture,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    /// Count unserved sessions as zero blocks
    OutageZero,
    /// Condition on the session being served
    Served,
}

impl From<Convention> for MomentConvention {
    fn from(c: Convention) -> MomentConvention {
        match c {
            Convention::OutageZero => MomentConvention::IncludeOutageAsZero,
            Convention::Served => MomentConvention::ConditionOnServed,
        }
    }
}

#[derive(Args)]
struct GridArgs {
    /// Lower edge of the evaluation grid, dB (default: the law's support)
    #[arg(long, value_name = "DB")]
    grid_lo: Option<f64>,
    /// Upper edge of the evaluation grid, dB
    #[arg(long, value_name = "DB")]
    grid_hi: Option<f64>,
    /// Number of grid points
    #[arg(long, value_name = "N", default_value_t = 201)]
    grid_points: usize,
}

impl GridArgs {
    fn spec(&self) -> GridSpec {
        GridSpec {
            lo_db: self.grid_lo,
            hi_db: self.grid_hi,
            points: self.grid_points,
        }
    }
}

#[derive(Args)]
struct CoverageArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SnrCdfArgs {
    #[command(flatten)]
    common: Common,
    /// Which law to plot
    #[arg(long, value_enum, default_value_t = Branch::Mixture, conflicts_with = "approx")]
    branch: Branch,
    /// Drop shadow fading and plot the pure placement law
    #[arg(long, conflicts_with = "approx")]
    no_fading: bool,
    /// Plot the normal surrogate next to the exact mixture
    #[arg(long)]
    approx: bool,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct PmfArgs {
    #[command(flatten)]
    common: Common,
    /// Moment convention for the summary header
    #[arg(long, value_enum, default_value_t = Convention::OutageZero)]
    convention: Convention,
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    /// Monte Carlo sample count; binding tolerances need at least 1000000
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    samples: usize,
    /// RNG seed, echoed in the output header
    #[arg(long, value_name = "U64", default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Outage targets to sweep (repeatable; default 0.01 0.05 0.1)
    #[arg(long = "sweep-p-c", value_name = "X", num_args = 1..)]
    sweep_p_c: Vec<f64>,
    /// Session rates to sweep, bit/s (repeatable; default 2e6 5e6)
    #[arg(long = "sweep-rate", value_name = "BPS", num_args = 1..)]
    sweep_rate: Vec<f64>,
    /// Moment convention for the demand columns
    #[arg(long, value_enum, default_value_t = Convention::OutageZero)]
    convention: Convention,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Runs the subcommand and writes its table; false means a binding
/// validation tolerance failed.
fn dispatch(cli: Cli) -> Result<bool> {
    let (common, table, ok) = match cli.cmd {
        Cmd::Coverage(a) => {
            // the override is handled inside so p_c = 0.5 stays reachable
            let s = Scenario::from_path(&a.common.scenario)?;
            let t = cmd_coverage(&s, a.common.p_c)?;
            (a.common, t, true)
        }
        Cmd::SnrCdf(a) => {
            let s = effective_scenario(&a.common)?;
            let select = if a.approx {
                CurveSelect::Approx
            } else {
                let fading = !a.no_fading;
                match a.branch {
                    Branch::Blocked => CurveSelect::Blocked { fading },
                    Branch::Nonblocked => CurveSelect::Nonblocked { fading },
                    Branch::Mixture => CurveSelect::Mixture { fading },
                }
            };
            let t = cmd_snr_cdf(&s, select, a.grid.spec())?;
            (a.common, t, true)
        }
        Cmd::Pmf(a) => {
            let s = effective_scenario(&a.common)?;
            let t = cmd_pmf(&s, a.convention.into())?;
            (a.common, t, true)
        }
        Cmd::Approx(a) => {
            let s = effective_scenario(&a.common)?;
            let t = cmd_snr_cdf(&s, CurveSelect::Approx, a.grid.spec())?;
            (a.common, t, true)
        }
        Cmd::Validate(a) => {
            let s = effective_scenario(&a.common)?;
            let (t, ok) = cmd_validate(&s, a.samples, a.seed)?;
            (a.common, t, ok)
        }
        Cmd::Sweep(a) => {
            let s = effective_scenario(&a.common)?;
            // a single override narrows the sweep to that value
            let p_cs = match (&a.sweep_p_c[..], a.common.p_c) {
                ([], None) => REFERENCE_P_C.to_vec(),
                ([], Some(p)) => vec![p],
                (given, _) => given.to_vec(),
            };
            let rates = match (&a.sweep_rate[..], a.common.rate) {
                ([], None) => REFERENCE_RATES_BPS.to_vec(),
                ([], Some(r)) => vec![r],
                (given, _) => given.to_vec(),
            };
            let t = cmd_sweep(&s, &p_cs, &rates, a.convention.into())?;
            (a.common, t, true)
        }
    };
    write_table(&common, table)?;
    Ok(ok)
}

/// Loads the scenario and applies `--p-c` / `--rate`, revalidating so a
/// bad override is refused with the key named.
fn effective_scenario(common: &Common) -> Result<Scenario> {
    let mut s = Scenario::from_path(&common.scenario)?;
    if let Some(p) = common.p_c {
        s.p_c = p;
    }
    if let Some(r) = common.rate {
        s.r_bps = r;
    }
    s.validate()?;
    Ok(s)
}

fn write_table(common: &Common, mut table: OutputTable) -> Result<()> {
    table.push_meta("scenario", common.scenario.display());
    let rendered = match common.format {
        Format::Csv => table.to_csv(),
        Format::Records => table.to_records(),
    };
    match &common.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into()),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}
