//! Runs every code sample in `book/` as a doctest, so the guide cannot
//! drift from the library it documents. Nothing here is an API; depend on
//! `nr-demand` directly.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/link-budget.md")]
pub mod link_budget {}

#[doc = include_str!("../../../book/src/snr.md")]
pub mod snr {}

#[doc = include_str!("../../../book/src/approximation.md")]
pub mod approximation {}

#[doc = include_str!("../../../book/src/resources.md")]
pub mod resources {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/scenario-format.md")]
pub mod scenario_format {}
