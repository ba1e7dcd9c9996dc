//! Numerical foundations: special functions, quadrature, grids, empirical
//! CDFs, and dB conversions.

pub mod ecdf;
pub mod grid;
pub mod quad;
pub mod special;
pub mod units;

pub use ecdf::EmpiricalCdf;
pub use grid::{sup_distance_on_grid, Grid};
pub use quad::{integrate, integrate_split, QuadOptions};
pub use special::{erf, erfc, erfc_inv, normal_cdf, normal_pdf, normal_quantile};
pub use units::{db_to_linear, linear_to_db, DB_TO_NAT};
