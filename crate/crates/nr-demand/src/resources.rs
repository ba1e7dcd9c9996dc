//! From SNR to resource-block demand.
//!
//! A session at rate `R` served by scheme `j` needs
//! `ceil(R / (e_j W_PRB))` resource blocks (at least one). Pushing the SNR
//! distribution through the scheme selector turns the SNR CDF into a pmf
//! over block counts, with the mass below the first threshold collected as
//! outage. Outage makes the mean ambiguous, so both conventions are
//! first-class: count outage as zero demand, or condition on being served.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::mcs::McsTable;
use crate::snr::SnrCdf;

/// Resource blocks needed to carry `rate_bps` at spectral efficiency
/// `efficiency` over blocks of `w_prb_hz`. Never less than one; an exact
/// integer quotient stays at that integer (the boundary belongs to the
/// smaller count) even through floating-point dirt.
pub fn prbs_needed(rate_bps: f64, efficiency: f64, w_prb_hz: f64) -> Result<u32> {
    for (name, v) in [
        ("rate", rate_bps),
        ("efficiency", efficiency),
        ("prb bandwidth", w_prb_hz),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(
                "prbs_needed",
                format!("{name} must be positive and finite, got {v}"),
            ));
        }
    }
    let q = rate_bps / (efficiency * w_prb_hz);
    let nearest = q.round();
    let n = if nearest >= 1.0 && (q - nearest).abs() <= 1e-9 * nearest {
        nearest
    } else {
        q.ceil()
    };
    if n > u32::MAX as f64 {
        return Err(Error::domain(
            "prbs_needed",
            format!("demand of {n} blocks does not fit the cell"),
        ));
    }
    Ok((n as u32).max(1))
}

/// Demand of one session at the given SNR: `None` in outage.
pub fn demand_for_snr(
    table: &McsTable,
    rate_bps: f64,
    w_prb_hz: f64,
    snr_db: f64,
) -> Result<Option<u32>> {
    match table.entry_for_snr(snr_db) {
        None => Ok(None),
        Some(e) => Ok(Some(prbs_needed(rate_bps, e.efficiency, w_prb_hz)?)),
    }
}

/// How to average over a distribution that includes outage mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentConvention {
    /// An unserved session consumes zero blocks; moments run over the full
    /// probability mass.
    IncludeOutageAsZero,
    /// Moments of the demand given that the session is served at all.
    #[default]
    ConditionOnServed,
}

/// Mean and variance of the block demand under a stated convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmfMoments {
    pub mean: f64,
    pub var: f64,
}

impl PmfMoments {
    pub fn std(&self) -> f64 {
        self.var.max(0.0).sqrt()
    }
}

/// Distribution of per-session block demand: outage mass plus a pmf over
/// positive block counts. Together they sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourcePmf {
    outage: f64,
    probs: BTreeMap<u32, f64>,
}

impl ResourcePmf {
    /// Pushes an SNR distribution through the scheme selector. Mass between
    /// consecutive thresholds lands on that scheme's block count; mass
    /// below the first threshold is outage.
    pub fn from_snr_cdf(
        snr: &SnrCdf,
        table: &McsTable,
        rate_bps: f64,
        w_prb_hz: f64,
    ) -> Result<ResourcePmf> {
        let entries = table.entries();
        let levels: Vec<f64> = entries
            .iter()
            .map(|e| snr.cdf(e.snr_threshold_db))
            .collect();
        let outage = levels[0];
        let mut probs = BTreeMap::new();
        for (j, e) in entries.iter().enumerate() {
            let mass = if j + 1 < entries.len() {
                levels[j + 1] - levels[j]
            } else {
                1.0 - levels[j]
            };
            debug_assert!(
                mass >= -1e-12,
                "negative scheme mass {mass} at cqi {}",
                e.cqi
            );
            let n = prbs_needed(rate_bps, e.efficiency, w_prb_hz)?;
            *probs.entry(n).or_insert(0.0) += mass.max(0.0);
        }
        Ok(ResourcePmf { outage, probs })
    }

    /// Builds the empirical pmf of observed counts. `None` entries of a
    /// sampled run are passed as the `outage` count.
    pub fn from_counts(counts: &BTreeMap<u32, u64>, outage: u64) -> Result<ResourcePmf> {
        let served: u64 = counts.values().sum();
        let n = served + outage;
        if n == 0 {
            return Err(Error::domain("resource pmf", "no observations"));
        }
        if counts.contains_key(&0) {
            return Err(Error::domain(
                "resource pmf",
                "count of zero blocks belongs in the outage slot",
            ));
        }
        let total = n as f64;
        Ok(ResourcePmf {
            outage: outage as f64 / total,
            probs: counts
                .iter()
                .map(|(&k, &c)| (k, c as f64 / total))
                .collect(),
        })
    }

    /// Probability that the session cannot be served at all.
    pub fn outage_probability(&self) -> f64 {
        self.outage
    }

    /// Demand pmf over positive block counts, ascending.
    pub fn probabilities(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.probs.iter().map(|(&k, &v)| (k, v))
    }

    /// Probability of needing exactly `n` blocks.
    pub fn probability_of(&self, n: u32) -> f64 {
        self.probs.get(&n).copied().unwrap_or(0.0)
    }

    /// Outage plus all demand mass; one up to accumulated rounding.
    pub fn total_mass(&self) -> f64 {
        self.outage + self.probs.values().sum::<f64>()
    }

    /// Largest demand with nonzero mass, if any session is served.
    pub fn max_demand(&self) -> Option<u32> {
        self.probs.keys().next_back().copied()
    }

    pub fn moments(&self, convention: MomentConvention) -> Result<PmfMoments> {
        let raw_mean: f64 = self.probs.iter().map(|(&k, &p)| k as f64 * p).sum();
        let raw_ex2: f64 = self
            .probs
            .iter()
            .map(|(&k, &p)| (k as f64) * (k as f64) * p)
            .sum();
        let (mean, ex2) = match convention {
            MomentConvention::IncludeOutageAsZero => (raw_mean, raw_ex2),
            MomentConvention::ConditionOnServed => {
                let served = 1.0 - self.outage;
                if served <= 0.0 {
                    return Err(Error::EmptyServedMass);
                }
                (raw_mean / served, raw_ex2 / served)
            }
        };
        Ok(PmfMoments {
            mean,
            var: ex2 - mean * mean,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Scenario;
    use crate::snr::{CellModel, Shadowing};

    fn reference_scenario(p_c: f64, r_bps: f64) -> Scenario {
        Scenario {
            f_c_ghz: 28.0,
            p_t_dbm: 23.0,
            g_b_dbi: 20.58,
            g_u_dbi: 5.57,
            l_b_db: 20.0,
            h_a_m: 4.0,
            h_u_m: 1.5,
            h_b_m: 1.7,
            r_b_m: 0.3,
            lambda_b_per_m2: 0.2,
            r_bps,
            c_o_db: 1.0,
            c_l_db: 2.0,
            m_i_db: 3.0,
            n_0_dbm_hz: -174.0,
            n_f_db: 7.0,
            w_prb_hz: 1.44e6,
            sigma_b_db: 8.2,
            sigma_nb_db: 4.0,
            p_c,
            zeta: 2.1,
            m_e_db: 19.607,
        }
    }

    fn reference_pmf(p_c: f64, r_bps: f64) -> ResourcePmf {
        let s = reference_scenario(p_c, r_bps);
        let table = McsTable::nr_cqi();
        let model = CellModel::build(&s, &table).unwrap();
        let mix = model.snr_mixture(Shadowing::ClosedForm);
        ResourcePmf::from_snr_cdf(&mix, &table, r_bps, s.w_prb_hz).unwrap()
    }

    #[test]
    fn block_count_ladder_at_both_rates() {
        let table = McsTable::nr_cqi();
        let w = 1.44e6;
        let want_2m = [10, 6, 4, 3, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1];
        let want_5m = [23, 15, 10, 6, 4, 3, 3, 2, 2, 2, 2, 1, 1, 1, 1];
        for (e, (w2, w5)) in table.entries().iter().zip(want_2m.iter().zip(want_5m)) {
            assert_eq!(
                prbs_needed(2e6, e.efficiency, w).unwrap(),
                *w2,
                "cqi {}",
                e.cqi
            );
            assert_eq!(
                prbs_needed(5e6, e.efficiency, w).unwrap(),
                w5,
                "cqi {}",
                e.cqi
            );
        }
    }

    #[test]
    fn fractional_block_counts_round_up() {
        // quotients straddling 1: 0.9406 stays at one block, 1.1812 needs two
        assert_eq!(prbs_needed(2e6, 1.4766, 1.44e6).unwrap(), 1);
        assert_eq!(prbs_needed(2e6, 1.1758, 1.44e6).unwrap(), 2);
        // far below one block still books one
        assert_eq!(prbs_needed(1.0, 5.5547, 1.44e6).unwrap(), 1);
    }

    #[test]
    fn exact_quotients_stay_put() {
        // 3 blocks exactly
        assert_eq!(prbs_needed(3e6, 1.0, 1e6).unwrap(), 3);
        // float-dirty exact quotient: 0.3 * 7 is not representable, the
        // repair window still lands on 7
        let eff = 0.3;
        let rate = eff * 1e6 * 7.0;
        assert_eq!(prbs_needed(rate, eff, 1e6).unwrap(), 7);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(prbs_needed(0.0, 1.0, 1e6).is_err());
        assert!(prbs_needed(1e6, 0.0, 1e6).is_err());
        assert!(prbs_needed(1e6, 1.0, 0.0).is_err());
        assert!(prbs_needed(f64::INFINITY, 1.0, 1e6).is_err());
        assert!(prbs_needed(1e6, -2.0, 1e6).is_err());
    }

    #[test]
    fn demand_for_snr_covers_outage_and_service() {
        let table = McsTable::nr_cqi();
        assert_eq!(demand_for_snr(&table, 2e6, 1.44e6, -15.0).unwrap(), None);
        assert_eq!(
            demand_for_snr(&table, 2e6, 1.44e6, -9.478).unwrap(),
            Some(10)
        );
        assert_eq!(demand_for_snr(&table, 2e6, 1.44e6, 25.0).unwrap(), Some(1));
    }

    #[test]
    fn pmf_golden_low_rate() {
        let pmf = reference_pmf(0.1, 2e6);
        assert!((pmf.outage_probability() - 0.030519312507).abs() <= 1e-9);
        let want = [
            (1, 0.7030302709693548),
            (2, 0.10926020731460798),
            (3, 0.05039339889497743),
            (4, 0.04351824430251808),
            (6, 0.03648595389131703),
            (10, 0.026792612120421333),
        ];
        let got: Vec<(u32, f64)> = pmf.probabilities().collect();
        assert_eq!(got.len(), want.len());
        for ((gk, gv), (wk, wv)) in got.iter().zip(want) {
            assert_eq!(*gk, wk);
            assert!((gv - wv).abs() <= 1e-9, "n = {wk}: {gv} vs {wv}");
        }
        assert_eq!(pmf.max_demand(), Some(10));
        assert!((pmf.total_mass() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn pmf_golden_high_rate() {
        let pmf = reference_pmf(0.1, 5e6);
        let want = [
            (1, 0.4684031449611036),
            (2, 0.18238224910987672),
            (3, 0.1090989400509669),
            (4, 0.052406144162015555),
            (6, 0.05039339889497743),
            (10, 0.04351824430251808),
            (15, 0.03648595389131703),
            (23, 0.026792612120421333),
        ];
        for (n, p) in want {
            assert!(
                (pmf.probability_of(n) - p).abs() <= 1e-9,
                "n = {n}: {} vs {p}",
                pmf.probability_of(n)
            );
        }
        assert_eq!(pmf.probability_of(5), 0.0);
        assert!((pmf.total_mass() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn moment_goldens_both_conventions() {
        // (p_c, zero-convention mean, zero-convention var, served mean)
        let cases = [
            (0.01, 1.4225545796, 2.7188613823, 1.4245115469),
            (0.05, 2.3740733253, 11.7378363001, 2.4023847126),
            (0.1, 3.2711512635, 20.8665085474, 3.3741273093),
        ];
        for (p_c, mean0, var0, mean_served) in cases {
            let pmf = reference_pmf(p_c, 5e6);
            let zero = pmf.moments(MomentConvention::IncludeOutageAsZero).unwrap();
            assert!(
                (zero.mean - mean0).abs() <= 1e-7,
                "p_c = {p_c}: {}",
                zero.mean
            );
            assert!((zero.var - var0).abs() <= 1e-6, "p_c = {p_c}: {}", zero.var);
            let served = pmf.moments(MomentConvention::ConditionOnServed).unwrap();
            assert!((served.mean - mean_served).abs() <= 1e-7);
            // conditioning on service can only raise the mean
            assert!(served.mean > zero.mean);
        }
    }

    #[test]
    fn counted_pmf_round_trip() {
        let mut counts = BTreeMap::new();
        counts.insert(1, 60u64);
        counts.insert(3, 25u64);
        counts.insert(10, 5u64);
        let pmf = ResourcePmf::from_counts(&counts, 10).unwrap();
        assert!((pmf.outage_probability() - 0.1).abs() <= 1e-15);
        assert!((pmf.probability_of(3) - 0.25).abs() <= 1e-15);
        assert!((pmf.total_mass() - 1.0).abs() <= 1e-15);
        let m = pmf.moments(MomentConvention::IncludeOutageAsZero).unwrap();
        assert!((m.mean - (0.6 + 0.75 + 0.5)).abs() <= 1e-12);
    }

    #[test]
    fn counted_pmf_rejects_nonsense() {
        assert!(ResourcePmf::from_counts(&BTreeMap::new(), 0).is_err());
        let mut zero_key = BTreeMap::new();
        zero_key.insert(0u32, 3u64);
        assert!(ResourcePmf::from_counts(&zero_key, 0).is_err());
    }

    #[test]
    fn all_outage_has_no_served_moments() {
        let pmf = ResourcePmf::from_counts(&BTreeMap::new(), 100).unwrap();
        assert_eq!(pmf.outage_probability(), 1.0);
        assert!(matches!(
            pmf.moments(MomentConvention::ConditionOnServed),
            Err(Error::EmptyServedMass)
        ));
        let zero = pmf.moments(MomentConvention::IncludeOutageAsZero).unwrap();
        assert_eq!(zero.mean, 0.0);
        assert_eq!(zero.var, 0.0);
    }
}
