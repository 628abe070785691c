use statrs::distribution::{ContinuousCDF, Normal};

use super::AnalyticsError;

/// Wilson score interval for a binomial proportion at two-sided
/// `confidence`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64), AnalyticsError> {
    if trials == 0 || successes > trials || !(confidence > 0.0 && confidence < 1.0) {
        return Err(AnalyticsError::OutOfRange(format!(
            "{successes} successes in {trials} trials at confidence {confidence}"
        )));
    }
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    Ok((low, high))
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Sample variance (`n − 1` denominator).
pub fn variance(xs: &[f64]) -> Option<f64> {
    let m = mean(xs)?;
    (xs.len() > 1).then(|| xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64)
}

/// Nearest-rank quantile: the smallest sample with at least a `q` fraction
/// of the samples at or below it.
pub fn quantile(xs: &[f64], q: f64) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    Some(v[rank - 1])
}

/// Median with the usual midpoint convention for even counts.
pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(50, 100, 0.95).unwrap();
        assert!((lo - 0.4038).abs() < 5e-4 && (hi - 0.5962).abs() < 5e-4, "{lo} {hi}");
        assert_eq!(wilson_interval(0, 30, 0.95).unwrap().0, 0.0);
        assert_eq!(wilson_interval(30, 30, 0.95).unwrap().1, 1.0);
        assert!(wilson_interval(3, 2, 0.95).is_err());
        assert!(wilson_interval(0, 0, 0.95).is_err());
    }

    #[test]
    fn wilson_by_hand() {
        // z for 95% is 1.959964; evaluate the score interval directly
        let (k, n, z) = (17.0f64, 40.0f64, 1.959_963_984_540_054f64);
        let p = k / n;
        let c = (p + z * z / (2.0 * n)) / (1.0 + z * z / n);
        let h = z / (1.0 + z * z / n) * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
        let (lo, hi) = wilson_interval(17, 40, 0.95).unwrap();
        assert!((lo - (c - h)).abs() < 1e-9 && (hi - (c + h)).abs() < 1e-9);
    }

    #[test]
    fn order_statistics() {
        let xs = [5.0, 1.0, 3.0, 2.0, 4.0];
        assert_eq!(quantile(&xs, 0.95), Some(5.0));
        assert_eq!(quantile(&xs, 0.2), Some(1.0));
        assert_eq!(median(&xs), Some(3.0));
        assert_eq!(median(&[1.0, 2.0]), Some(1.5));
        assert_eq!(mean(&[]), None);
        assert_eq!(variance(&[1.0, 3.0]), Some(2.0));
    }
}
