//! Seeded Monte Carlo experiments. Replication `j` draws everything from
//! `stream_rng(seed, j)`, so results do not depend on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{build_ball, upper_quantile};
use crate::basis::{Basis, Model, ModelCollection};
use crate::bounds::BoundConfig;
use crate::error::{invalid, Result};
use crate::estimators::{dist_true_sq, pw_closed_form, pw_monte_carlo, resampled_statistics};
use crate::oracle::DensityOracle;
use crate::rng::stream_rng;
use crate::weights::{WeightKind, WeightScheme};

/// One replication of the normalized difference `n (||s_m - ŝ_m||^2 - p_W) / sqrt(d_m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedDifference {
    /// With Monte Carlo `p_W`.
    pub monte_carlo: f64,
    /// With closed-form `p_W`.
    pub closed_form: f64,
}

pub fn normalized_differences(
    oracle: &DensityOracle,
    model: &Model,
    kind: WeightKind,
    n: usize,
    nb: usize,
    reps: usize,
    seed: u64,
) -> Result<Vec<NormalizedDifference>> {
    let scheme = WeightScheme::new(kind, n)?;
    let scale = n as f64 / (model.dim() as f64).sqrt();
    (0..reps as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream_rng(seed, j);
            let sample = oracle.sample(n, &mut rng)?;
            let dist = dist_true_sq(&sample, model, oracle);
            let mc = pw_monte_carlo(&sample, model, &scheme, nb, &mut rng)?;
            let closed = pw_closed_form(&sample, model, &scheme)?;
            Ok(NormalizedDifference {
                monte_carlo: scale * (dist - mc.mean),
                closed_form: scale * (dist - closed),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveragePoint {
    pub alpha: f64,
    /// Fraction of replications with `||s_m - ŝ_m||^2 <= q_alpha`.
    pub coverage: f64,
}

/// Coverage of the resampling quantiles `q_alpha` for every `alpha`, each
/// replication sharing one set of `nb` resampled statistics across levels.
#[allow(clippy::too_many_arguments)]
pub fn coverage_curve(
    oracle: &DensityOracle,
    model: &Model,
    kind: WeightKind,
    n: usize,
    nb: usize,
    reps: usize,
    alphas: &[f64],
    seed: u64,
) -> Result<Vec<CoveragePoint>> {
    if reps == 0 {
        return Err(invalid("reps", "need at least one replication"));
    }
    if nb < 100 {
        return Err(invalid("nb", format!("need at least 100 resampling draws, got {nb}")));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        return Err(invalid("alphaGrid", format!("levels must lie in (0, 1), got {a}")));
    }
    let scheme = WeightScheme::new(kind, n)?;
    let hits: Vec<Vec<bool>> = (0..reps as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream_rng(seed, j);
            let sample = oracle.sample(n, &mut rng)?;
            let dist = dist_true_sq(&sample, model, oracle);
            let mut stats = resampled_statistics(&sample, model, &scheme, nb, &mut rng)?;
            stats.sort_by(f64::total_cmp);
            Ok(alphas.iter().map(|&a| dist <= upper_quantile(&stats, a)).collect())
        })
        .collect::<Result<_>>()?;
    Ok(alphas
        .iter()
        .enumerate()
        .map(|(k, &alpha)| CoveragePoint {
            alpha,
            coverage: hits.iter().filter(|h| h[k]).count() as f64 / reps as f64,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallCoverage {
    pub coverage: f64,
    pub reps: usize,
    /// Selected dimension per replication.
    pub selected_dims: Vec<usize>,
    pub mean_radius: f64,
}

/// How often the confidence ball built from a fresh sample contains `s`.
pub fn ball_coverage(
    oracle: &DensityOracle,
    collection: &ModelCollection,
    kind: WeightKind,
    n: usize,
    reps: usize,
    cfg: &BoundConfig,
    seed: u64,
) -> Result<BallCoverage> {
    if reps == 0 {
        return Err(invalid("reps", "need at least one replication"));
    }
    let scheme = WeightScheme::new(kind, n)?;
    let truth = oracle.nested_coefficients(collection.nested_basis());
    let residual = oracle.residual_norm_sq(collection.top());
    let runs: Vec<(bool, usize, f64)> = (0..reps as u64)
        .into_par_iter()
        .map(|j| {
            let sample = oracle.sample(n, &mut stream_rng(seed, j))?;
            let ball = build_ball(&sample, collection, &scheme, cfg)?;
            Ok((ball.contains(&truth, Some(residual))?, ball.selected_dim, ball.radius))
        })
        .collect::<Result<_>>()?;
    Ok(BallCoverage {
        coverage: runs.iter().filter(|r| r.0).count() as f64 / reps as f64,
        reps,
        selected_dims: runs.iter().map(|r| r.1).collect(),
        mean_radius: runs.iter().map(|r| r.2).sum::<f64>() / reps as f64,
    })
}

/// Mean, sample standard deviation, min and max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let len = values.len() as f64;
        let mean = crate::sum::csum(values.iter().copied()) / len;
        let var = crate::sum::csum(values.iter().map(|v| (v - mean).powi(2))) / (len - 1.0);
        Self {
            mean,
            sd: var.sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn std_error(&self, len: usize) -> f64 {
        self.sd / (len as f64).sqrt()
    }
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut best) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    best
}
