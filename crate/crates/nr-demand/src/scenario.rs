//! Deployment description: radio parameters, geometry, blockage field,
//! fading spreads, and the service target.
//!
//! Scenarios live in flat key-value files. Every key carries its unit as a
//! suffix (`p_t_dbm`, `f_c_ghz`, `h_a_m`), so a file is unambiguous without
//! consulting documentation, and serialization is lossless: writing a
//! scenario and parsing it back yields bit-identical values.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// All physical inputs of the model. Construct by parsing a document
/// ([`Scenario::from_document`]) or by filling the fields and calling
/// [`Scenario::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Carrier frequency, GHz.
    pub f_c_ghz: f64,
    /// Transmit power, dBm.
    pub p_t_dbm: f64,
    /// Base-station antenna gain, dBi.
    pub g_b_dbi: f64,
    /// User antenna gain, dBi.
    pub g_u_dbi: f64,
    /// Extra propagation loss when the line of sight is blocked, dB.
    pub l_b_db: f64,
    /// Access-point height, m.
    pub h_a_m: f64,
    /// User device height, m.
    pub h_u_m: f64,
    /// Blocker (human crowd) height, m.
    pub h_b_m: f64,
    /// Blocker body radius, m.
    pub r_b_m: f64,
    /// Blocker density, blockers per square meter.
    pub lambda_b_per_m2: f64,
    /// Session rate the cell must carry per user, bit/s.
    pub r_bps: f64,
    /// Cable and connector losses, dB.
    pub c_o_db: f64,
    /// Local body losses, dB.
    pub c_l_db: f64,
    /// Interference margin, dB.
    pub m_i_db: f64,
    /// Thermal noise power density, dBm/Hz.
    pub n_0_dbm_hz: f64,
    /// Receiver noise figure, dB.
    pub n_f_db: f64,
    /// Bandwidth of one resource block, Hz.
    pub w_prb_hz: f64,
    /// Shadow-fading standard deviation with the line of sight blocked, dB.
    pub sigma_b_db: f64,
    /// Shadow-fading standard deviation with a clear line of sight, dB.
    pub sigma_nb_db: f64,
    /// Target outage probability at the cell edge, dimensionless in (0, 0.5).
    pub p_c: f64,
    /// Path-loss exponent (the 10*zeta*log10(d) slope), dimensionless.
    pub zeta: f64,
    /// Excess link margin folded into the budget, dB. Zero by default;
    /// positive values shrink the cell without touching any other knob.
    pub m_e_db: f64,
}

/// Path-loss exponent used when a document omits `zeta`, matching the
/// 32.4 + 21 log10(d) urban-street model the default loss intercept
/// comes from.
pub const DEFAULT_ZETA: f64 = 2.1;

/// Blockage loss used when a document omits `l_b_db`.
pub const DEFAULT_L_B_DB: f64 = 20.0;

/// Keys in canonical document order. Serialization writes them in this
/// order; parsing accepts any order.
const KEYS: [&str; 22] = [
    "f_c_ghz",
    "p_t_dbm",
    "g_b_dbi",
    "g_u_dbi",
    "l_b_db",
    "h_a_m",
    "h_u_m",
    "h_b_m",
    "r_b_m",
    "lambda_b_per_m2",
    "r_bps",
    "c_o_db",
    "c_l_db",
    "m_i_db",
    "n_0_dbm_hz",
    "n_f_db",
    "w_prb_hz",
    "sigma_b_db",
    "sigma_nb_db",
    "p_c",
    "zeta",
    "m_e_db",
];

impl Scenario {
    /// Parses a flat key-value document. Unknown keys are rejected, missing
    /// required keys are named, and the result is validated.
    pub fn from_document(text: &str) -> Result<Scenario> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::ScenarioSyntax(e.to_string()))?;
        for key in table.keys() {
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::invalid(key.clone(), "unknown key"));
            }
        }
        let req = |key: &'static str| -> Result<f64> {
            number(&table, key)?.ok_or(Error::MissingKey(key))
        };
        let opt = |key: &'static str, default: f64| -> Result<f64> {
            Ok(number(&table, key)?.unwrap_or(default))
        };
        let s = Scenario {
            f_c_ghz: req("f_c_ghz")?,
            p_t_dbm: req("p_t_dbm")?,
            g_b_dbi: req("g_b_dbi")?,
            g_u_dbi: req("g_u_dbi")?,
            l_b_db: opt("l_b_db", DEFAULT_L_B_DB)?,
            h_a_m: req("h_a_m")?,
            h_u_m: req("h_u_m")?,
            h_b_m: req("h_b_m")?,
            r_b_m: req("r_b_m")?,
            lambda_b_per_m2: req("lambda_b_per_m2")?,
            r_bps: req("r_bps")?,
            c_o_db: req("c_o_db")?,
            c_l_db: req("c_l_db")?,
            m_i_db: req("m_i_db")?,
            n_0_dbm_hz: req("n_0_dbm_hz")?,
            n_f_db: req("n_f_db")?,
            w_prb_hz: req("w_prb_hz")?,
            sigma_b_db: req("sigma_b_db")?,
            sigma_nb_db: req("sigma_nb_db")?,
            p_c: req("p_c")?,
            zeta: opt("zeta", DEFAULT_ZETA)?,
            m_e_db: opt("m_e_db", 0.0)?,
        };
        s.validate()?;
        Ok(s)
    }

    /// Reads and parses a scenario file.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        Scenario::from_document(&text)
    }

    /// Renders the canonical document form: one `key = value` line per
    /// field, fixed order, shortest decimal that round-trips.
    pub fn to_document(&self) -> String {
        self.to_string()
    }

    /// Checks every field invariant, naming the first violated key.
    pub fn validate(&self) -> Result<()> {
        for (key, value) in KEYS.iter().zip(self.values()) {
            if !value.is_finite() {
                return Err(Error::invalid(*key, "must be finite"));
            }
        }
        let positive: [(&str, f64); 6] = [
            ("f_c_ghz", self.f_c_ghz),
            ("r_b_m", self.r_b_m),
            ("r_bps", self.r_bps),
            ("w_prb_hz", self.w_prb_hz),
            ("zeta", self.zeta),
            ("h_u_m", self.h_u_m),
        ];
        for (key, value) in positive {
            if value <= 0.0 {
                return Err(Error::invalid(
                    key,
                    format!("must be positive, got {value}"),
                ));
            }
        }
        let nonnegative: [(&str, f64); 4] = [
            ("lambda_b_per_m2", self.lambda_b_per_m2),
            ("sigma_b_db", self.sigma_b_db),
            ("sigma_nb_db", self.sigma_nb_db),
            ("l_b_db", self.l_b_db),
        ];
        for (key, value) in nonnegative {
            if value < 0.0 {
                return Err(Error::invalid(
                    key,
                    format!("must not be negative, got {value}"),
                ));
            }
        }
        if self.h_b_m <= self.h_u_m {
            return Err(Error::invalid(
                "h_b_m",
                format!(
                    "blocker height {} must exceed user height {}",
                    self.h_b_m, self.h_u_m
                ),
            ));
        }
        if self.h_a_m <= self.h_b_m {
            return Err(Error::invalid(
                "h_a_m",
                format!(
                    "access-point height {} must exceed blocker height {}",
                    self.h_a_m, self.h_b_m
                ),
            ));
        }
        if !(self.p_c > 0.0 && self.p_c < 0.5) {
            return Err(Error::invalid(
                "p_c",
                format!("must lie in (0, 0.5), got {}", self.p_c),
            ));
        }
        Ok(())
    }

    /// Field values in the same order as `KEYS`.
    fn values(&self) -> [f64; 22] {
        [
            self.f_c_ghz,
            self.p_t_dbm,
            self.g_b_dbi,
            self.g_u_dbi,
            self.l_b_db,
            self.h_a_m,
            self.h_u_m,
            self.h_b_m,
            self.r_b_m,
            self.lambda_b_per_m2,
            self.r_bps,
            self.c_o_db,
            self.c_l_db,
            self.m_i_db,
            self.n_0_dbm_hz,
            self.n_f_db,
            self.w_prb_hz,
            self.sigma_b_db,
            self.sigma_nb_db,
            self.p_c,
            self.zeta,
            self.m_e_db,
        ]
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (key, value) in KEYS.iter().zip(self.values()) {
            writeln!(f, "{key} = {value}")?;
        }
        Ok(())
    }
}

/// Numeric lookup tolerating both integer and float literals.
fn number(table: &toml::Table, key: &'static str) -> Result<Option<f64>> {
    match table.get(key) {
        None => Ok(None),
        Some(toml::Value::Float(v)) => Ok(Some(*v)),
        Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
        Some(other) => Err(Error::invalid(
            key,
            format!("expected a number, found {}", other.type_str()),
        )),
    }
}
