//! Regular evaluation grids and grid-based distribution distances.

use crate::error::{Error, Result};

/// A closed regular grid of `n >= 2` points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    lo: f64,
    hi: f64,
    n: usize,
}

/// Points per default comparison grid. Odd so the midpoint is a grid node.
pub const DEFAULT_GRID_POINTS: usize = 20_001;

/// Margin in dB added on each side of a distribution's support when
/// building its comparison grid, wide enough to cover shadow-fading tails.
pub const DEFAULT_GRID_MARGIN_DB: f64 = 30.0;

impl Grid {
    pub fn regular(lo: f64, hi: f64, n: usize) -> Result<Grid> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::domain("grid", "bounds must be finite"));
        }
        if lo >= hi {
            return Err(Error::domain("grid", "lower bound must be below upper"));
        }
        if n < 2 {
            return Err(Error::domain("grid", "need at least two points"));
        }
        Ok(Grid { lo, hi, n })
    }

    /// Grid spanning `[lo - margin, hi + margin]` at the default density,
    /// the standard footing for CDF comparisons in this crate.
    pub fn spanning_support(lo: f64, hi: f64) -> Result<Grid> {
        Grid::regular(
            lo - DEFAULT_GRID_MARGIN_DB,
            hi + DEFAULT_GRID_MARGIN_DB,
            DEFAULT_GRID_POINTS,
        )
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 2 by construction
    }

    /// The i-th node. Endpoints are exact.
    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        if i == 0 {
            self.lo
        } else if i == self.n - 1 {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * (i as f64) / ((self.n - 1) as f64)
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }
}

/// Largest pointwise gap between two functions over the grid. With CDF
/// arguments this is the grid-restricted Kolmogorov-Smirnov distance.
pub fn sup_distance_on_grid<F, G>(grid: &Grid, f: F, g: G) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    grid.points()
        .map(|x| (f(x) - g(x)).abs())
        .fold(0.0, f64::max)
}
