//! Exchangeable resampling weights `(W_1, ..., W_n)`.
//!
//! The normalizing constant is `C_W = Var(W_1 - mean(W))^-1`; with it the
//! resampled quadratic statistic is an exactly unbiased-in-the-right-sense
//! estimate of the variance term, whatever the scheme.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest `n` for which [`WeightScheme::enumerate`] is supported.
pub const MAX_ENUMERATION_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightKind {
    /// Efron's bootstrap: multinomial `(n; 1/n, ..., 1/n)` counts.
    EfronMultinomial,
    /// i.i.d. random signs.
    RademacherIid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightScheme {
    kind: WeightKind,
    n: usize,
    c_w: f64,
}

impl WeightScheme {
    pub fn new(kind: WeightKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", format!("weight schemes need n >= 2, got {n}")));
        }
        let nf = n as f64;
        // Efron: mean(W) = 1 and Var(W_1) = 1 - 1/n.
        // Rademacher: Var(W_1 - mean(W)) = (1 - 1/n)^2 + (n - 1)/n^2 = (n - 1)/n.
        let c_w = match kind {
            WeightKind::EfronMultinomial | WeightKind::RademacherIid => nf / (nf - 1.0),
        };
        Ok(Self { kind, n, c_w })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c_w(&self) -> f64 {
        self.c_w
    }

    /// Draws one weight vector into `out` (length `n`).
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.n);
        match self.kind {
            WeightKind::EfronMultinomial => {
                out.iter_mut().for_each(|w| *w = 0.0);
                for _ in 0..self.n {
                    out[rng.random_range(0..self.n)] += 1.0;
                }
            }
            WeightKind::RademacherIid => {
                for w in out.iter_mut() {
                    *w = if rng.random::<bool>() { 1.0 } else { -1.0 };
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.sample_into(rng, &mut out);
        out
    }

    /// Full support of the weight law with probabilities.
    pub fn enumerate(&self) -> Result<Vec<(Vec<f64>, f64)>> {
        if self.n > MAX_ENUMERATION_N {
            return Err(Error::EnumerationTooLarge {
                n: self.n,
                max: MAX_ENUMERATION_N,
            });
        }
        let n = self.n;
        Ok(match self.kind {
            WeightKind::RademacherIid => {
                let p = 0.5f64.powi(n as i32);
                (0..1u32 << n)
                    .map(|mask| {
                        let w = (0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
                        (w, p)
                    })
                    .collect()
            }
            WeightKind::EfronMultinomial => {
                let factorial: Vec<u64> = (0..=n as u64)
                    .scan(1u64, |acc, k| {
                        *acc *= k.max(1);
                        Some(*acc)
                    })
                    .collect();
                let total = (n as f64).powi(n as i32);
                let mut out = Vec::new();
                let mut counts = vec![0usize; n];
                compositions(n, 0, &mut counts, &mut |c| {
                    let denom: u64 = c.iter().map(|&k| factorial[k]).product();
                    let p = (factorial[n] / denom) as f64 / total;
                    out.push((c.iter().map(|&k| k as f64).collect(), p));
                });
                out
            }
        })
    }
}

/// Visits every vector of `counts.len()` nonnegative integers summing to the
/// original remainder, in lexicographic order.
fn compositions(remaining: usize, slot: usize, counts: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    if slot == counts.len() - 1 {
        counts[slot] = remaining;
        visit(counts);
        return;
    }
    for k in (0..=remaining).rev() {
        counts[slot] = k;
        compositions(remaining - k, slot + 1, counts, visit);
    }
}
