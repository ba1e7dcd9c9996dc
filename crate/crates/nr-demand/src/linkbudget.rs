//! Link budget: path loss, distance-to-SNR mapping, fading margins, and
//! the coverage radius.
//!
//! Everything that does not depend on where the user stands is folded into
//! a single aggregate constant per LoS state, `A = P_T + G_B + G_U - 32.4 -
//! 20 log10(f_c) - N - C_O - C_L - M_I - M_E` (blocked subtracts `L_B` on
//! top), so the median SNR at 3D distance `y` is just `A - 10 zeta log10(y)`.
//! The cell radius then follows by inverting that line at the lowest MCS
//! threshold with the blocked-state fading margin applied.

use crate::error::{Error, Result};
use crate::math::special::erfc_inv;
use crate::scenario::Scenario;
use crate::spatial::CellGeometry;

/// Free-space-style path loss at 3D distance `y_m`:
/// `32.4 + 10 zeta log10(y) + 20 log10(f_c_GHz)`, plus the blockage loss
/// when the LoS is blocked.
pub fn path_loss_db(s: &Scenario, y_m: f64, blocked: bool) -> Result<f64> {
    if !(y_m > 0.0 && y_m.is_finite()) {
        return Err(Error::domain("path_loss", "distance must be positive"));
    }
    let baseline = 32.4 + 10.0 * s.zeta * y_m.log10() + 20.0 * s.f_c_ghz.log10();
    Ok(if blocked {
        baseline + s.l_b_db
    } else {
        baseline
    })
}

/// Shadow-fading margin guaranteeing outage probability `p_c` at a point
/// where the median SNR sits exactly at threshold:
/// `sqrt(2) sigma erfc_inv(2 p_c)`.
pub fn fading_margin_db(sigma_db: f64, p_c: f64) -> Result<f64> {
    if !(sigma_db >= 0.0 && sigma_db.is_finite()) {
        return Err(Error::domain("fading_margin", "sigma must be non-negative"));
    }
    if !(p_c > 0.0 && p_c <= 0.5) {
        return Err(Error::domain(
            "fading_margin",
            format!("outage target must lie in (0, 0.5], got {p_c}"),
        ));
    }
    Ok(std::f64::consts::SQRT_2 * sigma_db * erfc_inv(2.0 * p_c)?)
}

/// Aggregate budget per LoS state plus the fading model, all in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    a_nb_db: f64,
    l_b_db: f64,
    zeta: f64,
    noise_dbm: f64,
    sigma_b_db: f64,
    sigma_nb_db: f64,
    p_c: f64,
    gap_m: f64,
}

/// Result of the coverage solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coverage {
    /// Largest 3D link distance still meeting the edge outage target, m.
    pub d3_max_m: f64,
    /// Ground-plane cell radius, m.
    pub d_e_m: f64,
    /// Blocked-state fading margin used in the solve, dB.
    pub m_sb_db: f64,
}

impl LinkBudget {
    pub fn from_scenario(s: &Scenario) -> Result<LinkBudget> {
        s.validate()?;
        let noise_dbm = s.n_0_dbm_hz + 10.0 * s.w_prb_hz.log10() + s.n_f_db;
        let a_nb_db = s.p_t_dbm + s.g_b_dbi + s.g_u_dbi
            - 32.4
            - 20.0 * s.f_c_ghz.log10()
            - noise_dbm
            - s.c_o_db
            - s.c_l_db
            - s.m_i_db
            - s.m_e_db;
        Ok(LinkBudget {
            a_nb_db,
            l_b_db: s.l_b_db,
            zeta: s.zeta,
            noise_dbm,
            sigma_b_db: s.sigma_b_db,
            sigma_nb_db: s.sigma_nb_db,
            p_c: s.p_c,
            gap_m: s.h_a_m - s.h_u_m,
        })
    }

    /// Aggregate constant for the given LoS state, dB. The blocked value is
    /// exactly `l_b_db` below the clear one.
    pub fn a_db(&self, blocked: bool) -> f64 {
        if blocked {
            self.a_nb_db - self.l_b_db
        } else {
            self.a_nb_db
        }
    }

    /// Noise power over one resource block, dBm.
    pub fn noise_dbm(&self) -> f64 {
        self.noise_dbm
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// Shadow-fading spread of the given LoS state, dB.
    pub fn sigma_db(&self, blocked: bool) -> f64 {
        if blocked {
            self.sigma_b_db
        } else {
            self.sigma_nb_db
        }
    }

    /// Median SNR at 3D distance `y_m`: `A_state - 10 zeta log10(y)`.
    pub fn snr_db_at(&self, y_m: f64, blocked: bool) -> Result<f64> {
        if !(y_m > 0.0 && y_m.is_finite()) {
            return Err(Error::domain("snr_db_at", "distance must be positive"));
        }
        Ok(self.a_db(blocked) - 10.0 * self.zeta * y_m.log10())
    }

    /// Fading margin of the given LoS state at the configured outage target.
    pub fn fading_margin_db(&self, blocked: bool) -> Result<f64> {
        fading_margin_db(self.sigma_db(blocked), self.p_c)
    }

    /// Solves for the cell size: the largest 3D distance where the blocked
    /// state, after its fading margin, still reaches `s_min_db`, then the
    /// ground radius below that slant distance.
    pub fn solve_coverage(&self, s_min_db: f64) -> Result<Coverage> {
        self.coverage_at(s_min_db, self.p_c)
    }

    /// The same solve at an explicit outage target instead of the
    /// scenario's. Accepts the full margin domain, so `p_c = 0.5`
    /// (zero margin) is representable here even though a scenario
    /// cannot be configured with it.
    pub fn coverage_at(&self, s_min_db: f64, p_c: f64) -> Result<Coverage> {
        let m_sb_db = fading_margin_db(self.sigma_b_db, p_c)?;
        let d3_max_m = 10f64.powf((self.a_db(true) - m_sb_db - s_min_db) / (10.0 * self.zeta));
        if !d3_max_m.is_finite() || d3_max_m <= self.gap_m {
            return Err(Error::InfeasibleCoverage(format!(
                "coverage smaller than height offset: max 3D distance {d3_max_m:.3} m \
                 does not clear the antenna elevation {} m",
                self.gap_m
            )));
        }
        Ok(Coverage {
            d3_max_m,
            d_e_m: (d3_max_m * d3_max_m - self.gap_m * self.gap_m).sqrt(),
            m_sb_db,
        })
    }
}

impl Coverage {
    /// The disk geometry induced by this coverage solve.
    pub fn geometry(&self, s: &Scenario) -> Result<CellGeometry> {
        CellGeometry::new(self.d_e_m, s.h_a_m, s.h_u_m)
    }
}
