//! Where the user is and whether a body blocks the line of sight.
//!
//! Users are dropped uniformly on a disk of radius `d_E` around the mast
//! foot; the antenna sits `h_A - h_U` above the user plane, so the 3D link
//! distance ranges over `[h_A - h_U, sqrt(d_E^2 + (h_A - h_U)^2)]`.
//! Blockers form a planar Poisson field of cylinders; the LoS shadow of a
//! user at ground distance `x` is a rectangle-plus-cap whose area grows
//! linearly in `x`, giving the exponential blockage law below.

use crate::error::{Error, Result};
use crate::math::quad::{integrate, QuadOptions};
use crate::scenario::Scenario;

/// Disk cell with an elevated antenna.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    d_e_m: f64,
    h_a_m: f64,
    h_u_m: f64,
}

impl CellGeometry {
    pub fn new(d_e_m: f64, h_a_m: f64, h_u_m: f64) -> Result<CellGeometry> {
        if !(d_e_m.is_finite() && d_e_m > 0.0) {
            return Err(Error::domain(
                "cell geometry",
                "coverage radius must be positive",
            ));
        }
        if !(h_u_m > 0.0 && h_a_m > h_u_m) {
            return Err(Error::domain(
                "cell geometry",
                "need h_a > h_u > 0 for an elevated antenna",
            ));
        }
        Ok(CellGeometry {
            d_e_m,
            h_a_m,
            h_u_m,
        })
    }

    /// Coverage radius in the user plane, m.
    pub fn d_e_m(&self) -> f64 {
        self.d_e_m
    }

    /// Antenna elevation above the user plane, m.
    pub fn gap_m(&self) -> f64 {
        self.h_a_m - self.h_u_m
    }

    /// Shortest possible 3D link distance (user at the mast foot), m.
    pub fn d3_min_m(&self) -> f64 {
        self.gap_m()
    }

    /// Longest possible 3D link distance (user at the cell edge), m.
    pub fn d3_max_m(&self) -> f64 {
        self.gap_m().hypot(self.d_e_m)
    }

    /// 3D link distance of a user at ground distance `x`, m.
    pub fn distance3d_of_2d(&self, x_m: f64) -> f64 {
        self.gap_m().hypot(x_m)
    }

    /// Density of the ground distance of a uniform user: `2x/d_E^2` on
    /// `[0, d_E]`, zero outside.
    pub fn distance2d_pdf(&self, x_m: f64) -> f64 {
        if (0.0..=self.d_e_m).contains(&x_m) {
            2.0 * x_m / (self.d_e_m * self.d_e_m)
        } else {
            0.0
        }
    }

    /// CDF of the ground distance: `x^2/d_E^2` clamped to `[0, 1]`.
    pub fn distance2d_cdf(&self, x_m: f64) -> f64 {
        if x_m <= 0.0 {
            0.0
        } else if x_m >= self.d_e_m {
            1.0
        } else {
            (x_m / self.d_e_m).powi(2)
        }
    }

    /// CDF of the 3D link distance: `(x^2 - (h_A - h_U)^2)/d_E^2` between
    /// the support edges.
    pub fn distance3d_cdf(&self, x_m: f64) -> f64 {
        let gap = self.gap_m();
        if x_m <= gap {
            0.0
        } else if x_m >= self.d3_max_m() {
            1.0
        } else {
            (x_m * x_m - gap * gap) / (self.d_e_m * self.d_e_m)
        }
    }

    /// Maps a uniform draw `u` from `[0, 1]` to a ground distance with the
    /// disk law: `d_E sqrt(u)`.
    pub fn sample_distance2d(&self, u: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&u));
        self.d_e_m * u.sqrt()
    }
}

/// Poisson field of cylindrical blockers between the user and the antenna.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockageField {
    lambda_per_m2: f64,
    r_b_m: f64,
    /// Fraction of the ground distance over which a blocker of height
    /// `h_B` intersects the slanted LoS ray: `(h_B - h_U)/(h_A - h_U)`.
    shadow_fraction: f64,
}

impl BlockageField {
    pub fn new(
        lambda_per_m2: f64,
        r_b_m: f64,
        h_a_m: f64,
        h_u_m: f64,
        h_b_m: f64,
    ) -> Result<BlockageField> {
        if !(lambda_per_m2 >= 0.0 && lambda_per_m2.is_finite()) {
            return Err(Error::domain("blockage", "density must be non-negative"));
        }
        if !(r_b_m > 0.0 && r_b_m.is_finite()) {
            return Err(Error::domain("blockage", "blocker radius must be positive"));
        }
        if !(h_u_m > 0.0 && h_b_m > h_u_m && h_a_m > h_b_m) {
            return Err(Error::domain("blockage", "need h_a > h_b > h_u > 0"));
        }
        Ok(BlockageField {
            lambda_per_m2,
            r_b_m,
            shadow_fraction: (h_b_m - h_u_m) / (h_a_m - h_u_m),
        })
    }

    pub fn from_scenario(s: &Scenario) -> Result<BlockageField> {
        BlockageField::new(s.lambda_b_per_m2, s.r_b_m, s.h_a_m, s.h_u_m, s.h_b_m)
    }

    /// Probability that the LoS of a user at ground distance `x` is blocked:
    /// `1 - exp(-2 lambda r_B (x (h_B-h_U)/(h_A-h_U) + r_B))`.
    pub fn at_distance2d(&self, x_m: f64) -> f64 {
        debug_assert!(x_m >= 0.0);
        let shadow_area =
            2.0 * self.lambda_per_m2 * self.r_b_m * (x_m * self.shadow_fraction + self.r_b_m);
        1.0 - (-shadow_area).exp()
    }

    /// Blockage probability of a uniformly placed user: the distance law
    /// integrated against [`CellGeometry::distance2d_pdf`].
    pub fn averaged_over_cell(&self, geom: &CellGeometry) -> Result<f64> {
        let p = integrate(
            |x| self.at_distance2d(x) * geom.distance2d_pdf(x),
            0.0,
            geom.d_e_m(),
            QuadOptions::default(),
        )?;
        Ok(p.clamp(0.0, 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(d_e: f64) -> CellGeometry {
        CellGeometry::new(d_e, 4.0, 1.5).unwrap()
    }

    fn field() -> BlockageField {
        BlockageField::new(0.2, 0.3, 4.0, 1.5, 1.7).unwrap()
    }

    /// Independent closed form for the averaged blockage: integrating
    /// (1 - e^(-2 lambda r (x q + r))) 2x/d_E^2 by parts with
    /// beta = 2 lambda r q gives
    /// 1 - e^(-2 lambda r^2) (2/(d_E beta)^2) (1 - e^(-beta d_E)(1 + beta d_E)).
    fn averaged_closed_form(f: &BlockageField, d_e: f64) -> f64 {
        let two_lr = 2.0 * f.lambda_per_m2 * f.r_b_m;
        let beta = two_lr * f.shadow_fraction;
        let base = (-two_lr * f.r_b_m).exp();
        if beta * d_e < 1e-9 {
            return 1.0 - base;
        }
        let b = beta * d_e;
        1.0 - base * 2.0 / (b * b) * (1.0 - (-b).exp() * (1.0 + b))
    }

    #[test]
    fn distance_laws_normalize_and_hit_endpoints() {
        let g = geom(165.0);
        assert_eq!(g.distance2d_pdf(-1.0), 0.0);
        assert_eq!(g.distance2d_pdf(166.0), 0.0);
        assert!((g.distance2d_pdf(165.0) - 2.0 / 165.0).abs() <= 1e-15);
        let mass = integrate(|x| g.distance2d_pdf(x), 0.0, 165.0, QuadOptions::default()).unwrap();
        assert!((mass - 1.0).abs() <= 1e-10);
        assert_eq!(g.distance3d_cdf(g.d3_min_m()), 0.0);
        assert_eq!(g.distance3d_cdf(g.d3_max_m()), 1.0);
        assert_eq!(g.distance3d_cdf(0.0), 0.0);
        assert_eq!(g.distance3d_cdf(1e9), 1.0);
    }

    #[test]
    fn distance3d_cdf_golden_value() {
        let g = geom(165.0);
        assert!((g.distance3d_cdf(100.0) - 0.3670798898071626).abs() <= 1e-12);
        assert!((g.d3_max_m() - (165.0f64 * 165.0 + 6.25).sqrt()).abs() <= 1e-12);
    }

    #[test]
    fn sampling_matches_distance_cdf() {
        let g = geom(119.0);
        for u in [0.0, 0.1, 0.25, 0.5, 0.99, 1.0] {
            let x = g.sample_distance2d(u);
            assert!((g.distance2d_cdf(x) - u).abs() <= 1e-12);
        }
    }

    #[test]
    fn geometry_rejects_bad_inputs() {
        assert!(CellGeometry::new(0.0, 4.0, 1.5).is_err());
        assert!(CellGeometry::new(-5.0, 4.0, 1.5).is_err());
        assert!(CellGeometry::new(100.0, 1.5, 4.0).is_err());
        assert!(CellGeometry::new(100.0, 4.0, 0.0).is_err());
    }

    #[test]
    fn blockage_at_mast_foot_golden() {
        // only the cap term 2 lambda r^2 survives at x = 0
        let p0 = field().at_distance2d(0.0);
        assert!((p0 - 0.0353597065168769).abs() <= 1e-13);
    }

    #[test]
    fn blockage_grows_with_distance() {
        let f = field();
        let mut last = -1.0;
        for k in 0..40 {
            let p = f.at_distance2d(5.0 * k as f64);
            assert!(p > last);
            assert!((0.0..1.0).contains(&p));
            last = p;
        }
    }

    #[test]
    fn averaged_blockage_matches_closed_form() {
        let f = field();
        for d_e in [
            10.0,
            64.574854677489,
            119.234105235058,
            165.313030615598,
            400.0,
        ] {
            let g = geom(d_e);
            let quad = f.averaged_over_cell(&g).unwrap();
            let exact = averaged_closed_form(&f, d_e);
            assert!(
                (quad - exact).abs() <= 1e-10,
                "d_e = {d_e}: {quad} vs {exact}"
            );
        }
    }

    #[test]
    fn averaged_blockage_golden_values() {
        // radii produced by the reference link budget at p_c = .01/.05/.1
        let f = field();
        let cases = [
            (64.574854677489, 0.354882442502),
            (119.234105235058, 0.532807025596),
            (165.313030615598, 0.639312142387),
        ];
        for (d_e, want) in cases {
            let got = f.averaged_over_cell(&geom(d_e)).unwrap();
            assert!((got - want).abs() <= 1e-9, "d_e = {d_e}: {got}");
        }
    }

    #[test]
    fn zero_density_never_blocks() {
        let f = BlockageField::new(0.0, 0.3, 4.0, 1.5, 1.7).unwrap();
        assert_eq!(f.at_distance2d(0.0), 0.0);
        assert_eq!(f.at_distance2d(500.0), 0.0);
        let p = f.averaged_over_cell(&geom(100.0)).unwrap();
        assert_eq!(p, 0.0);
    }
}
