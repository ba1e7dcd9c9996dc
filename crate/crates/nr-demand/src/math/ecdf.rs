//! Empirical CDFs and the exact one-sample Kolmogorov-Smirnov statistic.

use crate::error::{Error, Result};

/// Empirical distribution of a finite sample, stored sorted.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Result<EmpiricalCdf> {
        if samples.is_empty() {
            return Err(Error::domain("ecdf", "sample is empty"));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("ecdf", "sample contains non-finite values"));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(EmpiricalCdf { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty samples
    }

    /// Right-continuous step CDF: the fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.sorted.partition_point(|&v| v <= x);
        k as f64 / self.sorted.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.sorted.len() as f64
    }

    /// Population variance (divides by n; n is millions here, the
    /// distinction is immaterial).
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.sorted.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / self.sorted.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        *self.sorted.last().unwrap()
    }

    /// Exact sup-distance between this step function and a continuous CDF:
    /// at each jump both the pre- and post-jump levels are compared, so the
    /// supremum over all of R is attained at one of the checked points.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let n = self.sorted.len() as f64;
        let mut worst = 0.0f64;
        for (i, &x) in self.sorted.iter().enumerate() {
            let model = cdf(x);
            let above = (i + 1) as f64 / n - model;
            let below = model - i as f64 / n;
            worst = worst.max(above.abs()).max(below.abs());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_levels_and_moments() {
        let e = EmpiricalCdf::new(vec![3.0, 1.0, 2.0, 2.0]).unwrap();
        assert_eq!(e.cdf(0.5), 0.0);
        assert_eq!(e.cdf(1.0), 0.25);
        assert_eq!(e.cdf(2.0), 0.75);
        assert_eq!(e.cdf(10.0), 1.0);
        assert!((e.mean() - 2.0).abs() <= 1e-15);
        assert!((e.variance() - 0.5).abs() <= 1e-15);
        assert_eq!(e.min(), 1.0);
        assert_eq!(e.max(), 3.0);
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(EmpiricalCdf::new(vec![]).is_err());
        assert!(EmpiricalCdf::new(vec![1.0, f64::NAN]).is_err());
        assert!(EmpiricalCdf::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn ks_against_matching_uniform_shrinks_with_n() {
        // deterministic stratified "sample" of U(0,1): midpoints i+0.5 / n
        for n in [10usize, 1000] {
            let samples: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
            let e = EmpiricalCdf::new(samples).unwrap();
            let d = e.ks_distance(|x| x.clamp(0.0, 1.0));
            assert!((d - 0.5 / n as f64).abs() <= 1e-12, "n = {n}: d = {d}");
        }
    }

    #[test]
    fn ks_detects_location_shift() {
        let samples: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0 + 0.3).collect();
        let e = EmpiricalCdf::new(samples).unwrap();
        let d = e.ks_distance(|x| x.clamp(0.0, 1.0));
        assert!((d - 0.3).abs() <= 1e-3);
    }
}
