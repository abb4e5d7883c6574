use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

const Z95: f64 = 1.959963984540054;

fn std_normal_cdf(z: f64) -> f64 {
    Normal::standard().cdf(z)
}

/// A binomial proportion `successes / trials`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Proportion {
    pub successes: usize,
    pub trials: usize,
}

impl Proportion {
    pub fn new(successes: usize, trials: usize) -> Self {
        debug_assert!(successes <= trials);
        Self { successes, trials }
    }

    /// Point estimate; `None` without trials.
    pub fn estimate(&self) -> Option<f64> {
        (self.trials > 0).then(|| self.successes as f64 / self.trials as f64)
    }

    /// Wilson score interval at 95%.
    pub fn wilson(&self) -> Option<(f64, f64)> {
        wilson_interval(self.successes, self.trials)
    }
}

pub fn wilson_interval(successes: usize, trials: usize) -> Option<(f64, f64)> {
    if trials == 0 {
        return None;
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    Some((lo, hi))
}

/// Cochran–Armitage trend statistic over ordered groups with scores `0, 1, 2, ...`.
/// Positive values indicate proportions increasing with the group index.
pub fn cochran_armitage_z(groups: &[Proportion]) -> f64 {
    let total: f64 = groups.iter().map(|g| g.trials as f64).sum();
    let hits: f64 = groups.iter().map(|g| g.successes as f64).sum();
    if total == 0.0 {
        return 0.0;
    }
    let p = hits / total;
    let (mut t, mut sx, mut sxx) = (0.0, 0.0, 0.0);
    for (i, g) in groups.iter().enumerate() {
        let x = i as f64;
        let n = g.trials as f64;
        t += x * (g.successes as f64 - n * p);
        sx += n * x;
        sxx += n * x * x;
    }
    let var = p * (1.0 - p) * (sxx - sx * sx / total);
    if var <= 0.0 {
        0.0
    } else {
        t / var.sqrt()
    }
}

/// One-sided p-values of the trend test in both directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendTest {
    pub z: f64,
    /// Evidence that proportions increase along the groups.
    pub p_increasing: f64,
    /// Evidence that proportions decrease along the groups.
    pub p_decreasing: f64,
}

impl TrendTest {
    pub fn new(groups: &[Proportion]) -> Self {
        let z = cochran_armitage_z(groups);
        Self {
            z,
            p_increasing: 1.0 - std_normal_cdf(z),
            p_decreasing: std_normal_cdf(z),
        }
    }

    /// No significant decrease at level `alpha`.
    pub fn non_decreasing(&self, alpha: f64) -> bool {
        self.p_decreasing >= alpha
    }

    /// No significant increase at level `alpha`.
    pub fn non_increasing(&self, alpha: f64) -> bool {
        self.p_increasing >= alpha
    }
}

/// One-sided p-value for `H0: p_a >= p_b` against `p_a < p_b`, pooled two-proportion z test.
pub fn p_value_less(a: Proportion, b: Proportion) -> f64 {
    let (na, nb) = (a.trials as f64, b.trials as f64);
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    let pool = (a.successes + b.successes) as f64 / (na + nb);
    let se = (pool * (1.0 - pool) * (1.0 / na + 1.0 / nb)).sqrt();
    let diff = a.successes as f64 / na - b.successes as f64 / nb;
    if se == 0.0 {
        return if diff < 0.0 { 0.0 } else { 1.0 };
    }
    std_normal_cdf(diff / se)
}

/// Upper empirical quantile: the `ceil(p n)`-th smallest value.
pub fn upper_quantile(values: &[f64], p: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (p * sorted.len() as f64).ceil() as usize;
    Some(sorted[rank.clamp(1, sorted.len()) - 1])
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 { sorted[m] } else { 0.5 * (sorted[m - 1] + sorted[m]) })
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 10 of 100: (0.0552, 0.1744) to four places
        let (lo, hi) = wilson_interval(10, 100).unwrap();
        assert_relative_eq!(lo, 0.05522914, epsilon = 1e-6);
        assert_relative_eq!(hi, 0.17436566, epsilon = 1e-6);
        let (lo, hi) = wilson_interval(0, 20).unwrap();
        assert_eq!(lo, 0.0);
        assert!(hi > 0.16 && hi < 0.17);
        assert!(wilson_interval(0, 0).is_none());
    }

    #[test]
    fn trend_direction() {
        let up = [Proportion::new(10, 100), Proportion::new(20, 100), Proportion::new(30, 100)];
        let t = TrendTest::new(&up);
        assert!(t.z > 3.0);
        assert!(t.p_increasing < 0.01);
        assert!(!t.non_increasing(0.05));
        assert!(t.non_decreasing(0.05));
        let flat = [Proportion::new(50, 100); 4];
        assert_eq!(cochran_armitage_z(&flat), 0.0);
        let saturated = [Proportion::new(100, 100); 3];
        assert_eq!(TrendTest::new(&saturated).p_decreasing, 0.5);
    }

    #[test]
    fn trend_matches_hand_computation() {
        // groups (1/4, 3/4): p = 0.5, T = 1 * (3 - 2) = 1, var = 0.25 * (4 - 16/8) = 0.5
        let z = cochran_armitage_z(&[Proportion::new(1, 4), Proportion::new(3, 4)]);
        assert_relative_eq!(z, 1.0 / 0.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn two_proportion_direction() {
        let low = Proportion::new(60, 500);
        let high = Proportion::new(90, 500);
        assert!(p_value_less(low, high) < 0.05);
        assert!(p_value_less(high, low) > 0.95);
    }

    #[test]
    fn quantiles_and_centers() {
        let v = [5.0, 1.0, 3.0, 2.0, 4.0];
        assert_eq!(upper_quantile(&v, 0.8), Some(4.0));
        assert_eq!(upper_quantile(&v, 1.0), Some(5.0));
        assert_eq!(median(&v), Some(3.0));
        assert_eq!(median(&[1.0, 2.0]), Some(1.5));
        assert_eq!(mean(&[1.0, 2.0, 6.0]), Some(3.0));
        assert_eq!(mean(&[]), None);
    }
}
