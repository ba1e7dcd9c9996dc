//! CQI table: spectral efficiency and activation SNR per modulation and
//! coding scheme.
//!
//! Index 0 is reserved for outage (SNR below the first threshold). The
//! built-in table is the 15-level NR CQI set; custom tables are accepted as
//! long as efficiency and threshold both increase with the index.

use crate::error::{Error, Result};

/// One selectable modulation and coding scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct McsEntry {
    /// CQI index, 1-based; 0 never appears in a table.
    pub cqi: u8,
    /// Display label, e.g. "QPSK, 78/1024". Not used in computation.
    pub modulation: String,
    /// Spectral efficiency, bit/s/Hz.
    pub efficiency: f64,
    /// Lowest SNR at which this scheme is selected, dB.
    pub snr_threshold_db: f64,
}

/// Ordered CQI table. The lowest threshold doubles as the cell's outage
/// threshold: a user below it gets no service at all.
#[derive(Debug, Clone, PartialEq)]
pub struct McsTable {
    entries: Vec<McsEntry>,
}

impl McsTable {
    /// The 15-level NR CQI set used throughout: QPSK through the highest
    /// coding rates, efficiencies 0.15237 to 5.5547 bit/s/Hz, activation
    /// thresholds -9.478 to 19.809 dB.
    pub fn nr_cqi() -> McsTable {
        const ROWS: [(u8, &str, f64, f64); 15] = [
            (1, "QPSK, 78/1024", 0.15237, -9.478),
            (2, "QPSK, 120/1024", 0.2344, -6.658),
            (3, "QPSK, 193/1024", 0.377, -4.098),
            (4, "QPSK, 308/1024", 0.6016, -1.798),
            (5, "QPSK, 449/1024", 0.877, 0.399),
            (6, "QPSK, 602/1024", 1.1758, 2.424),
            (7, "16QAM, 378/1024", 1.4766, 4.489),
            (8, "16QAM, 490/1024", 1.9141, 6.367),
            (9, "16QAM, 616/1024", 2.4063, 8.456),
            (10, "16QAM, 466/1024", 2.7305, 10.266),
            (11, "16QAM, 567/1024", 3.3223, 12.218),
            (12, "16QAM, 666/1024", 3.9023, 14.122),
            (13, "16QAM, 772/1024", 4.5234, 15.849),
            (14, "16QAM, 873/1024", 5.1152, 17.786),
            (15, "16QAM, 948/1024", 5.5547, 19.809),
        ];
        McsTable {
            entries: ROWS
                .iter()
                .map(|&(cqi, label, eff, snr)| McsEntry {
                    cqi,
                    modulation: label.to_string(),
                    efficiency: eff,
                    snr_threshold_db: snr,
                })
                .collect(),
        }
    }

    /// Validates and adopts a custom table.
    pub fn new(entries: Vec<McsEntry>) -> Result<McsTable> {
        if entries.is_empty() {
            return Err(Error::InvalidMcsTable("table is empty".into()));
        }
        for e in &entries {
            if e.cqi == 0 {
                return Err(Error::InvalidMcsTable(
                    "cqi 0 is reserved for outage".into(),
                ));
            }
            if !(e.efficiency.is_finite() && e.efficiency > 0.0) {
                return Err(Error::InvalidMcsTable(format!(
                    "cqi {}: efficiency must be positive and finite",
                    e.cqi
                )));
            }
            if !e.snr_threshold_db.is_finite() {
                return Err(Error::InvalidMcsTable(format!(
                    "cqi {}: snr threshold must be finite",
                    e.cqi
                )));
            }
        }
        for pair in entries.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if b.cqi <= a.cqi {
                return Err(Error::InvalidMcsTable(format!(
                    "cqi indices must increase: {} then {}",
                    a.cqi, b.cqi
                )));
            }
            if b.efficiency <= a.efficiency {
                return Err(Error::InvalidMcsTable(format!(
                    "efficiency must increase with cqi: cqi {} has {}, cqi {} has {}",
                    a.cqi, a.efficiency, b.cqi, b.efficiency
                )));
            }
            if b.snr_threshold_db <= a.snr_threshold_db {
                return Err(Error::InvalidMcsTable(format!(
                    "snr threshold must increase with cqi: cqi {} has {}, cqi {} has {}",
                    a.cqi, a.snr_threshold_db, b.cqi, b.snr_threshold_db
                )));
            }
        }
        Ok(McsTable { entries })
    }

    pub fn entries(&self) -> &[McsEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty tables
    }

    /// The outage threshold S_min: SNR below this gets no scheme at all.
    pub fn min_threshold_db(&self) -> f64 {
        self.entries[0].snr_threshold_db
    }

    /// CQI selected at the given SNR; 0 means outage. A threshold value
    /// itself activates its scheme (selection regions are closed below).
    pub fn cqi_for_snr(&self, snr_db: f64) -> u8 {
        let k = self
            .entries
            .partition_point(|e| e.snr_threshold_db <= snr_db);
        if k == 0 {
            0
        } else {
            self.entries[k - 1].cqi
        }
    }

    /// Entry selected at the given SNR; `None` in outage.
    pub fn entry_for_snr(&self, snr_db: f64) -> Option<&McsEntry> {
        let k = self
            .entries
            .partition_point(|e| e.snr_threshold_db <= snr_db);
        if k == 0 {
            None
        } else {
            Some(&self.entries[k - 1])
        }
    }

    /// Entry with the given CQI index, if present.
    pub fn entry(&self, cqi: u8) -> Option<&McsEntry> {
        self.entries.iter().find(|e| e.cqi == cqi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_golden_values() {
        let t = McsTable::nr_cqi();
        let want: [(u8, &str, f64, f64); 15] = [
            (1, "QPSK, 78/1024", 0.15237, -9.478),
            (2, "QPSK, 120/1024", 0.2344, -6.658),
            (3, "QPSK, 193/1024", 0.377, -4.098),
            (4, "QPSK, 308/1024", 0.6016, -1.798),
            (5, "QPSK, 449/1024", 0.877, 0.399),
            (6, "QPSK, 602/1024", 1.1758, 2.424),
            (7, "16QAM, 378/1024", 1.4766, 4.489),
            (8, "16QAM, 490/1024", 1.9141, 6.367),
            (9, "16QAM, 616/1024", 2.4063, 8.456),
            (10, "16QAM, 466/1024", 2.7305, 10.266),
            (11, "16QAM, 567/1024", 3.3223, 12.218),
            (12, "16QAM, 666/1024", 3.9023, 14.122),
            (13, "16QAM, 772/1024", 4.5234, 15.849),
            (14, "16QAM, 873/1024", 5.1152, 17.786),
            (15, "16QAM, 948/1024", 5.5547, 19.809),
        ];
        assert_eq!(t.len(), 15);
        for (e, (cqi, label, eff, snr)) in t.entries().iter().zip(want) {
            assert_eq!(e.cqi, cqi);
            assert_eq!(e.modulation, label);
            assert_eq!(e.efficiency, eff);
            assert_eq!(e.snr_threshold_db, snr);
        }
        assert_eq!(t.min_threshold_db(), -9.478);
    }

    #[test]
    fn builtin_table_is_monotone() {
        let t = McsTable::nr_cqi();
        for pair in t.entries().windows(2) {
            assert!(pair[1].efficiency > pair[0].efficiency);
            assert!(pair[1].snr_threshold_db > pair[0].snr_threshold_db);
            assert!(pair[1].cqi > pair[0].cqi);
        }
    }

    #[test]
    fn selection_boundaries() {
        let t = McsTable::nr_cqi();
        assert_eq!(t.cqi_for_snr(-20.0), 0);
        assert_eq!(t.cqi_for_snr(-9.4780000001), 0);
        assert_eq!(t.cqi_for_snr(-9.478), 1); // threshold activates its scheme
        assert_eq!(t.cqi_for_snr(0.0), 4); // between 0.399 (cqi 5) and -1.798 (cqi 4)
        assert_eq!(t.cqi_for_snr(0.399), 5);
        assert_eq!(t.cqi_for_snr(19.809), 15);
        assert_eq!(t.cqi_for_snr(50.0), 15);
        assert!(t.entry_for_snr(-15.0).is_none());
        assert_eq!(t.entry_for_snr(10.3).unwrap().cqi, 10);
        assert_eq!(t.entry(7).unwrap().efficiency, 1.4766);
        assert!(t.entry(0).is_none());
        assert!(t.entry(16).is_none());
    }

    #[test]
    fn rejects_malformed_tables() {
        let mk = |rows: &[(u8, f64, f64)]| {
            McsTable::new(
                rows.iter()
                    .map(|&(cqi, eff, snr)| McsEntry {
                        cqi,
                        modulation: String::new(),
                        efficiency: eff,
                        snr_threshold_db: snr,
                    })
                    .collect(),
            )
        };
        assert!(mk(&[]).is_err());
        assert!(mk(&[(0, 1.0, 0.0)]).is_err());
        assert!(mk(&[(1, -1.0, 0.0)]).is_err());
        assert!(mk(&[(1, 1.0, f64::NAN)]).is_err());
        assert!(mk(&[(1, 1.0, 0.0), (2, 0.5, 1.0)]).is_err()); // efficiency dips
        assert!(mk(&[(1, 1.0, 0.0), (2, 2.0, -1.0)]).is_err()); // threshold dips
        assert!(mk(&[(2, 1.0, 0.0), (2, 2.0, 1.0)]).is_err()); // cqi repeats
        assert!(mk(&[(1, 1.0, 0.0), (2, 2.0, 1.0)]).is_ok());
    }
}
