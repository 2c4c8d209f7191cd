//! Goodness-of-fit tests used to check simulated laws.

use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Pearson chi-square test of `observed` counts against probabilities `expected`.
///
/// Cells with expected count below 5 are pooled into one cell.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> TestResult {
    assert_eq!(observed.len(), expected.len());
    let n: u64 = observed.iter().sum();
    let nf = n as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected) {
        let e = p * nf;
        if e < 5.0 {
            pool_o += o as f64;
            pool_e += e;
            continue;
        }
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    if pool_e > 0.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e;
        cells += 1;
    }
    let df = cells.saturating_sub(1).max(1) as f64;
    let dist = ChiSquared::new(df).expect("positive degrees of freedom");
    TestResult {
        statistic: stat,
        p_value: 1.0 - dist.cdf(stat),
    }
}

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test of integer samples against a CDF on
/// the integers. The asymptotic p-value is conservative for discrete laws.
pub fn ks_discrete(samples: &[u64], cdf: impl Fn(u64) -> f64) -> TestResult {
    let n = samples.len();
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < n {
        let v = sorted[i];
        let mut j = i;
        while j < n && sorted[j] == v {
            j += 1;
        }
        let below = i as f64 / n as f64;
        let upto = j as f64 / n as f64;
        let f = cdf(v);
        let f_before = if v == 0 { 0.0 } else { cdf(v - 1) };
        d = d.max((upto - f).abs()).max((below - f_before).abs());
        i = j;
    }
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    TestResult {
        statistic: d,
        p_value: kolmogorov_survival(lambda),
    }
}

/// CDF of the geometric law on `{1, 2, ...}` with success probability `p`.
pub fn geometric_cdf(p: f64, k: u64) -> f64 {
    1.0 - (1.0 - p).powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_known_values() {
        assert!((kolmogorov_survival(1.36) - 0.0495).abs() < 1e-3);
        assert!((kolmogorov_survival(1.63) - 0.0098).abs() < 1e-3);
    }

    #[test]
    fn chi_square_perfect_fit() {
        let r = chi_square(&[250, 250, 500], &[0.25, 0.25, 0.5]);
        assert_eq!(r.statistic, 0.0);
        assert!(r.p_value > 0.99);
    }

    #[test]
    fn ks_rejects_wrong_law() {
        let samples: Vec<u64> = (0..2000).map(|i| 1 + (i % 3)).collect();
        assert!(ks_discrete(&samples, |k| geometric_cdf(0.05, k)).p_value < 1e-6);
    }
}
