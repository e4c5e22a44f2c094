//! Count distributions and two-sample comparisons.

use crate::error::{Error, Result};
use crate::verify::replicate::Histogram;

/// Tail mass left out when tabulating closed-form pmfs; folded into the last
/// bucket.
pub const PMF_TAIL: f64 = 1e-9;

/// Probability mass function over nonnegative integer counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CountPmf {
    probs: Vec<f64>,
}

impl CountPmf {
    /// Normalizes nonnegative masses indexed by count.
    pub fn from_masses(masses: &[f64]) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::EmptyInput);
        }
        if masses.iter().any(|m| !(*m >= 0.0) || !m.is_finite()) {
            return Err(Error::InvalidModel("pmf masses must be finite and >= 0".into()));
        }
        let total: f64 = masses.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroTotalWeight);
        }
        Ok(CountPmf {
            probs: masses.iter().map(|m| m / total).collect(),
        })
    }

    pub fn from_histogram(h: &Histogram) -> Result<Self> {
        if h.total() == 0 {
            return Err(Error::ZeroTotalWeight);
        }
        let total = h.total() as f64;
        Ok(CountPmf {
            probs: h.bins().iter().map(|&c| c as f64 / total).collect(),
        })
    }

    pub fn from_samples(samples: &[usize]) -> Result<Self> {
        let mut h = Histogram::default();
        for &s in samples {
            h.add(s, 1);
        }
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        Self::from_histogram(&h)
    }

    pub fn point_mass(k: usize) -> Self {
        let mut probs = vec![0.0; k + 1];
        probs[k] = 1.0;
        CountPmf { probs }
    }

    /// Poisson pmf up to the `1 - PMF_TAIL` quantile, tail folded into the
    /// last bucket.
    pub fn poisson(mean: f64) -> Result<Self> {
        if !(mean >= 0.0) || !mean.is_finite() {
            return Err(Error::InvalidModel(format!("Poisson mean {mean}")));
        }
        if mean == 0.0 {
            return Ok(Self::point_mass(0));
        }
        let mut probs = Vec::new();
        let mut log_p = -mean;
        let mut cum = 0.0;
        let mut k = 0usize;
        loop {
            let p = log_p.exp();
            probs.push(p);
            cum += p;
            if cum >= 1.0 - PMF_TAIL && k as f64 >= mean {
                break;
            }
            k += 1;
            log_p += mean.ln() - (k as f64).ln();
        }
        *probs.last_mut().expect("nonempty") += (1.0 - cum).max(0.0);
        Ok(CountPmf { probs })
    }

    /// Probability of count `k` (zero outside the support).
    pub fn prob(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    /// Same law shifted by `-shift` (mass below zero is an error).
    pub fn shifted_down(&self, shift: usize) -> Result<Self> {
        if self.probs[..shift.min(self.probs.len())].iter().any(|&p| p > 0.0) {
            return Err(Error::InvalidModel("shift moves mass below zero".into()));
        }
        Ok(CountPmf {
            probs: self.probs.iter().skip(shift).copied().collect(),
        })
    }
}

/// `½ Σ_k |p_k − q_k|` over the union support.
pub fn tv_distance(p: &CountPmf, q: &CountPmf) -> Result<f64> {
    if p.probs.is_empty() || q.probs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = p.probs.len().max(q.probs.len());
    Ok(0.5 * (0..n).map(|k| (p.prob(k) - q.prob(k)).abs()).sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample Kolmogorov–Smirnov statistic with the asymptotic p-value
/// `Q_KS((√n_e + 0.12 + 0.11/√n_e) · D)`, `n_e = n·m/(n+m)`. Ties are
/// handled by comparing the ECDFs only after each distinct value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::InvalidModel("NaN in KS sample".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let v = a[i].min(b[j]);
        while i < n && a[i] <= v {
            i += 1;
        }
        while j < m && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n as f64 * m as f64) / (n + m) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_q(lambda),
    })
}

/// Kolmogorov survival function `Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi-transformed series converges fast for small λ.
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let s: f64 = (1..=8)
            .map(|k| {
                let odd = (2 * k - 1) as f64;
                (-odd * odd * c).exp()
            })
            .sum();
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0)
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let k = k as f64;
                let sign = if k as u64 % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * k * k * lambda * lambda).exp()
            })
            .sum();
        (2.0 * s).clamp(0.0, 1.0)
    }
}
