//! Small statistics toolkit: percentiles, binomial frequencies and the
//! one-sample Kolmogorov-Smirnov test.

use std::cmp::Ordering;

/// Linearly interpolated percentile (`p` in `[0, 100]`) of an ascending slice,
/// using the closest-ranks rule `h = (n - 1)·p / 100`.
pub fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p / 100.0;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn sort_samples(xs: &mut [f64]) {
    xs.sort_by(f64::total_cmp);
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    sort_samples(&mut v);
    percentile_sorted(&v, 50.0)
}

/// 5th, 50th and 95th percentiles of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Percentiles {
    pub p5: f64,
    pub median: f64,
    pub p95: f64,
}

impl Percentiles {
    /// Sorts `xs` in place; the result does not depend on the input order.
    pub fn from_samples(xs: &mut [f64]) -> Self {
        sort_samples(xs);
        Self {
            p5: percentile_sorted(xs, 5.0),
            median: percentile_sorted(xs, 50.0),
            p95: percentile_sorted(xs, 95.0),
        }
    }

    /// Component-wise median over a collection of percentile triples.
    pub fn median_of(rows: &[Percentiles]) -> Self {
        let col = |f: fn(&Percentiles) -> f64| median(&rows.iter().map(f).collect::<Vec<_>>());
        Self {
            p5: col(|p| p.p5),
            median: col(|p| p.median),
            p95: col(|p| p.p95),
        }
    }
}

/// Success count out of a number of Bernoulli trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Frequency {
    pub successes: u64,
    pub trials: u64,
}

impl Frequency {
    pub fn new(successes: u64, trials: u64) -> Self {
        assert!(successes <= trials);
        Self { successes, trials }
    }

    pub fn from_flags(flags: impl IntoIterator<Item = bool>) -> Self {
        let mut f = Self::default();
        for hit in flags {
            f.trials += 1;
            f.successes += u64::from(hit);
        }
        f
    }

    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// Binomial standard error at success probability `p`.
    pub fn sigma_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma_at(self.rate())
    }
}

/// Complementary CDF of the Kolmogorov distribution,
/// `Q(λ) = 2·Σ_{j>=1} (-1)^(j-1)·exp(-2 j² λ²)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let j = j as f64;
        let term = (-2.0 * j * j * lambda * lambda).exp();
        sum += if j as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    /// Supremum distance between the empirical and reference CDFs.
    pub statistic: f64,
    /// Asymptotic two-sided p-value.
    pub p_value: f64,
    pub n: usize,
}

impl KsOutcome {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value > alpha
    }
}

/// Two-sided one-sample Kolmogorov-Smirnov test of `samples` against `cdf`.
/// Sorts `samples` in place.
pub fn ks_test(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> KsOutcome {
    assert!(!samples.is_empty());
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Greater));
    let n = samples.len();
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / nf).max((i + 1) as f64 / nf - f);
    }
    // Stephens' small-sample correction to the asymptotic statistic.
    let sn = nf.sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    KsOutcome {
        statistic: d,
        p_value: kolmogorov_survival(lambda),
        n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::TrialStreams;
    use rand::Rng;

    #[test]
    fn percentile_interpolates() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(percentile_sorted(&xs, 50.0), 3.0);
        assert_eq!(percentile_sorted(&xs, 0.0), 1.0);
        assert_eq!(percentile_sorted(&xs, 100.0), 5.0);
        assert!((percentile_sorted(&xs, 5.0) - 1.2).abs() < 1e-12);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn percentiles_are_ordered_and_order_free() {
        let mut a = vec![9.0, 1.0, 5.0, 7.0, 3.0, 2.0];
        let mut b = a.clone();
        b.reverse();
        let pa = Percentiles::from_samples(&mut a);
        assert_eq!(pa, Percentiles::from_samples(&mut b));
        assert!(pa.p5 <= pa.median && pa.median <= pa.p95);
    }

    #[test]
    fn frequency_basics() {
        let f = Frequency::from_flags([true, false, true, true]);
        assert_eq!(f, Frequency::new(3, 4));
        assert_eq!(f.rate(), 0.75);
        assert!((f.sigma() - (0.75f64 * 0.25 / 4.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kolmogorov_reference_points() {
        // Classic critical values: Q(1.3581) = 0.05, Q(1.6276) = 0.01.
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_survival(1.6276) - 0.01).abs() < 1e-4);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
    }

    #[test]
    fn ks_accepts_uniform_and_rejects_shifted() {
        let mut rng = TrialStreams::new(2).trial(0);
        let mut u: Vec<f64> = (0..50_000).map(|_| rng.random::<f64>()).collect();
        let mut shifted: Vec<f64> = u.iter().map(|x| x * 0.97).collect();
        assert!(ks_test(&mut u, |x| x.clamp(0.0, 1.0)).passes(0.01));
        assert!(!ks_test(&mut shifted, |x| x.clamp(0.0, 1.0)).passes(0.01));
    }
}
