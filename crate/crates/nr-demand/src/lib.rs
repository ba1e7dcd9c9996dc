//! Per-session resource demand in a millimeter-wave NR cell.
//!
//! Starting from a link budget and a target cell-edge outage probability,
//! this crate derives the coverage radius, the exact distribution of a
//! random user's SNR under distance-dependent blockage and log-normal
//! shadow fading, and finally the probability mass function of the number
//! of resource blocks a session of a given rate consumes. A seeded Monte
//! Carlo simulator reproduces the same chain by sampling and is used to
//! cross-check every analytical stage.
//!
//! The pipeline, in dependency order:
//!
//! 1. [`scenario`] reads the flat key-value description of a deployment.
//! 2. [`linkbudget`] turns it into received-power budgets, fading margins,
//!    and the self-consistent coverage radius.
//! 3. [`spatial`] gives the distance law of a uniformly placed user and the
//!    distance-dependent blockage probability.
//! 4. [`snr`] assembles the SNR distribution: placement CDF per branch,
//!    shadow-fading convolution (closed form and quadrature), the
//!    blocked/non-blocked mixture, and its two-component normal surrogate.
//! 5. [`resources`] maps SNR through the modulation table to resource-block
//!    counts and their pmf.
//! 6. [`sim`] draws the same quantities by Monte Carlo.
//!
//! [`commands`] wires these into the `nr-demand` command-line tool.

// reference numbers are kept with every digit of the computation that
// produced them, even where that exceeds f64 precision
#![allow(clippy::excessive_precision)]

pub mod commands;
pub mod error;
pub mod linkbudget;
pub mod math;
pub mod mcs;
pub mod resources;
pub mod scenario;
pub mod sim;
pub mod snr;
pub mod spatial;
pub mod table;

pub use error::{Error, Result};
pub use linkbudget::{fading_margin_db, path_loss_db, Coverage, LinkBudget};
pub use mcs::{McsEntry, McsTable};
pub use resources::{demand_for_snr, prbs_needed, MomentConvention, PmfMoments, ResourcePmf};
pub use scenario::Scenario;
pub use sim::{BlockageMode, SimConfig, SimReport, SimSample};
pub use snr::{ks_on_default_grid, CellModel, PlacementCdf, Shadowing, SnrCdf, SnrMoments};
pub use spatial::{BlockageField, CellGeometry};
pub use table::{format_sig, Cell, OutputTable};
