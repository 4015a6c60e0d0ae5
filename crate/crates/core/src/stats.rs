//! Empirical summaries used to validate samplers against exact results.

use crate::error::{Error, Result};

/// Sample mean of `x^k` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub k: usize,
    pub mean: f64,
    pub std_error: f64,
}

impl MomentEstimate {
    /// `|mean − exact| / std_error`.
    pub fn z_score(&self, exact: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == exact {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - exact).abs() / self.std_error
        }
    }
}

/// Raw empirical moments `k = 0..=k_max`.
pub fn empirical_moments(samples: &[f64], k_max: usize) -> Vec<MomentEstimate> {
    let n = samples.len() as f64;
    let mut sum = vec![0.0f64; k_max + 1];
    let mut sum_sq = vec![0.0f64; k_max + 1];
    for &x in samples {
        let mut pw = 1.0;
        for k in 0..=k_max {
            sum[k] += pw;
            sum_sq[k] += pw * pw;
            pw *= x;
        }
    }
    (0..=k_max)
        .map(|k| {
            let mean = sum[k] / n;
            let var = (sum_sq[k] / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
            MomentEstimate {
                k,
                mean,
                std_error: (var / n).sqrt(),
            }
        })
        .collect()
}

pub fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a − F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    ks_two_sample_sorted(&sorted(a), &sorted(b))
}

pub fn ks_two_sample_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// `#{s ≤ x} / n` on sorted data.
pub fn ecdf(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&s| s <= x) as f64 / sorted.len() as f64
}

/// `#{s < x} / n` on sorted data.
pub fn ecdf_left(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&s| s < x) as f64 / sorted.len() as f64
}

/// Fraction of samples within `width` of `x`.
pub fn ecdf_jump(sorted: &[f64], x: f64, width: f64) -> f64 {
    ecdf(sorted, x + width) - ecdf_left(sorted, x - width)
}

/// Sup distance between an empirical CDF and a tabulated CDF.
///
/// `table` holds `(x, F(x−), F(x))` at increasing grid points. Both one-sided
/// limits are compared at every grid point; between grid points the true
/// distance can exceed the returned value by at most the largest increment of
/// `F` over one grid cell.
pub fn ks_against_table(sorted: &[f64], table: &[(f64, f64, f64)]) -> f64 {
    table
        .iter()
        .map(|&(x, left, right)| (ecdf(sorted, x) - right).abs().max((ecdf_left(sorted, x) - left).abs()))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: u64,
}

/// Equal-width histogram on `[lo, hi]`; the last bin is closed on the right.
pub fn histogram(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Vec<HistogramBin>> {
    if !(lo < hi) || bins == 0 {
        return Err(Error::Domain(format!("histogram needs lo < hi and bins > 0, got [{lo}, {hi}], {bins}")));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &x in samples {
        if x < lo || x > hi {
            continue;
        }
        let b = (((x - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            left: lo + i as f64 * width,
            right: lo + (i + 1) as f64 * width,
            count,
        })
        .collect())
}

/// CSV with header `bin_left,bin_right,count`.
pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for b in bins {
        out.push_str(&format!("{},{},{}\n", b.left, b.right, b.count));
    }
    out
}

/// Gaussian kernel density estimate at `x` on sorted data.
pub fn kde(sorted: &[f64], x: f64, bandwidth: f64) -> f64 {
    let lo = sorted.partition_point(|&s| s < x - 8.0 * bandwidth);
    let hi = sorted.partition_point(|&s| s <= x + 8.0 * bandwidth);
    let norm = 1.0 / (sorted.len() as f64 * bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    sorted[lo..hi]
        .iter()
        .map(|&s| (-0.5 * ((x - s) / bandwidth).powi(2)).exp())
        .sum::<f64>()
        * norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_a_fixed_sample() {
        let m = empirical_moments(&[1.0, 2.0, 3.0], 2);
        assert_eq!(m[0].mean, 1.0);
        assert_eq!(m[0].std_error, 0.0);
        assert!((m[1].mean - 2.0).abs() < 1e-15);
        assert!((m[1].std_error - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((m[2].mean - 14.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn ks_statistics() {
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert!((ks_two_sample(&[1.0, 3.0], &[2.0, 4.0]) - 0.5).abs() < 1e-15);
        let s = [0.25, 0.5, 0.75];
        let table: Vec<_> = (0..=100).map(|i| i as f64 / 100.0).map(|x| (x, x, x)).collect();
        let d = ks_against_table(&s, &table);
        assert!((d - 0.25).abs() < 1e-12);
    }

    #[test]
    fn ecdf_and_jump() {
        let s = [0.0, 1.0, 1.0, 2.0];
        assert_eq!(ecdf(&s, 1.0), 0.75);
        assert_eq!(ecdf_left(&s, 1.0), 0.25);
        assert_eq!(ecdf_jump(&s, 1.0, 1e-9), 0.5);
    }

    #[test]
    fn histogram_counts_everything_in_range() {
        let h = histogram(&[0.0, 0.5, 1.0, 9.0, 10.0], 0.0, 9.0, 9).unwrap();
        assert_eq!(h.iter().map(|b| b.count).sum::<u64>(), 4);
        assert_eq!(h[8].count, 1);
        assert!(histogram_csv(&h).starts_with("bin_left,bin_right,count\n0,1,2\n"));
        assert!(histogram(&[], 1.0, 0.0, 3).is_err());
    }
}
