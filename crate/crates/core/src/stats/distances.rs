//! Empirical distances to the standard normal and to integer-valued
//! reference laws.

use statrs::distribution::{ContinuousCDF, Discrete, Normal, Poisson};

use crate::error::{MuxError, Result};

/// Fewest samples accepted by [`w1_to_std_normal`].
pub const W1_MIN_SAMPLES: usize = 100;

/// Poisson mass below which the reference tail is no longer tabulated.
const TAIL_MASS: f64 = 1e-12;

/// `(x − mean) / sqrt(var)` elementwise.
pub fn standardize(samples: &[f64], mean: f64, var: f64) -> Vec<f64> {
    let sd = var.sqrt();
    samples.iter().map(|x| (x - mean) / sd).collect()
}

/// Wasserstein-1 distance between the empirical law of `samples` and
/// `N(0, 1)` by quantile coupling against the grid `Φ⁻¹((i − ½)/m)`.
/// The estimator carries a bias of order `sqrt(log m)/m`.
pub fn w1_to_std_normal(samples: &[f64]) -> Result<f64> {
    let m = samples.len();
    if m < W1_MIN_SAMPLES {
        return Err(MuxError::TooFewSamples { need: W1_MIN_SAMPLES, got: m });
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let normal = Normal::standard();
    let total: f64 = xs
        .iter()
        .enumerate()
        .map(|(i, x)| (x - normal.inverse_cdf((i as f64 + 0.5) / m as f64)).abs())
        .sum();
    Ok(total / m as f64)
}

pub fn poisson_pmf(mean: f64, k: u64) -> f64 {
    Poisson::new(mean).map(|d| d.pmf(k)).unwrap_or(if k == 0 { 1.0 } else { 0.0 })
}

/// Law of `Z1 · Z2` for independent `Z1 ~ Pois(λ1)`, `Z2 ~ Pois(λ2)`.
pub fn product_poisson_pmf(lambda1: f64, lambda2: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0 - (1.0 - (-lambda1).exp()) * (1.0 - (-lambda2).exp());
    }
    let mut total = 0.0;
    let mut d = 1;
    while d * d <= k {
        if k.is_multiple_of(d) {
            let e = k / d;
            total += poisson_pmf(lambda1, d) * poisson_pmf(lambda2, e);
            if d != e {
                total += poisson_pmf(lambda1, e) * poisson_pmf(lambda2, d);
            }
        }
        d += 1;
    }
    total
}

/// `½ Σ_k |empirical(k) − reference(k)|`, tabulated for `k ≤ support` and
/// closed with the untabulated reference mass `1 − Σ_{k ≤ support} reference(k)`.
pub fn tv_to_pmf(samples: &[u64], support: u64, reference: impl Fn(u64) -> f64) -> f64 {
    if samples.is_empty() {
        return 1.0;
    }
    let top = support.max(samples.iter().copied().max().unwrap_or(0));
    let mut hist = vec![0u64; top as usize + 1];
    for &s in samples {
        hist[s as usize] += 1;
    }
    let m = samples.len() as f64;
    let mut diff = 0.0;
    let mut covered = 0.0;
    for (k, &c) in hist.iter().enumerate() {
        let r = reference(k as u64);
        covered += r;
        diff += (c as f64 / m - r).abs();
    }
    (0.5 * (diff + (1.0 - covered).max(0.0))).min(1.0)
}

/// Smallest `K` above the mean with `Pois(mean)` mass at `K` below the tail cutoff.
fn poisson_support(mean: f64) -> u64 {
    let mut k = mean.ceil() as u64;
    while poisson_pmf(mean, k) >= TAIL_MASS {
        k += 1;
    }
    k
}

/// Total variation distance between the empirical pmf and `Pois(mean)`.
pub fn tv_to_poisson(samples: &[u64], mean: f64) -> f64 {
    tv_to_pmf(samples, poisson_support(mean), |k| poisson_pmf(mean, k))
}

/// Total variation distance between the empirical pmf and the law of `Z1 · Z2`.
pub fn tv_to_product_poisson(samples: &[u64], lambda1: f64, lambda2: f64) -> f64 {
    let support = poisson_support(lambda1) * poisson_support(lambda2);
    tv_to_pmf(samples, support, |k| product_poisson_pmf(lambda1, lambda2, k))
}
