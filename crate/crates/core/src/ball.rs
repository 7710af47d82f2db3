//! Model selection by radius minimization and the resulting confidence ball.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{check_h3, Basis, Model, ModelCollection};
use crate::bounds::{BoundConfig, RadiusReport};
use crate::error::{invalid, Error, Result};
use crate::estimators::{index_terms, resampled_statistics, Design, Sample};
use crate::sum::csum;
use crate::weights::WeightScheme;

/// An L2 ball in the coefficient space of the collection's nested basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceBall {
    pub selected_model_id: String,
    pub selected_dim: usize,
    pub top_model_id: String,
    pub top_dim: usize,
    /// Coefficients of the projection estimator on the selected model, on
    /// the first `selected_dim` nested basis functions.
    pub center: Vec<f64>,
    pub radius: f64,
    pub n: usize,
    pub beta: f64,
    pub eta: f64,
    /// The selected radius came from a clamped negative radicand.
    pub degenerate: bool,
    /// Whether the collection satisfied the growth condition on `d_n` for this `n`.
    pub h3_holds: bool,
    pub report: RadiusReport,
}

impl ConfidenceBall {
    /// Whether a function with top-model coefficients `candidate` (nested
    /// basis) and squared norm `residual_sq` outside the top model lies in
    /// the closed ball.
    pub fn contains(&self, candidate: &[f64], residual_sq: Option<f64>) -> Result<bool> {
        Ok(self.distance_sq(candidate, residual_sq)? <= self.radius * self.radius)
    }

    /// Squared L2 distance from the center.
    pub fn distance_sq(&self, candidate: &[f64], residual_sq: Option<f64>) -> Result<f64> {
        if candidate.len() != self.top_dim {
            return Err(Error::DimensionMismatch {
                expected: self.top_dim,
                got: candidate.len(),
            });
        }
        let residual = residual_sq.unwrap_or(0.0);
        if residual.is_nan() || residual < 0.0 {
            return Err(invalid("residual_sq", format!("must be nonnegative, got {residual}")));
        }
        let inside = csum(
            candidate
                .iter()
                .enumerate()
                .map(|(i, c)| (c - self.center.get(i).copied().unwrap_or(0.0)).powi(2)),
        );
        Ok(inside + residual)
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }
}

/// Per-model `(p_W, p_b)` for every model of the collection, from one pass
/// over the nested basis.
pub fn collection_statistics(sample: &Sample, collection: &ModelCollection) -> Vec<(f64, f64)> {
    statistics_on(&Design::new(sample, collection.nested_basis()), collection)
}

fn statistics_on(design: &Design, collection: &ModelCollection) -> Vec<(f64, f64)> {
    let (pw, pb) = index_terms(design);
    collection
        .models()
        .iter()
        .map(|m| (csum(pw[..m.dim()].iter().copied()), csum(pb[m.dim()..].iter().copied())))
        .collect()
}

/// Builds the adaptive confidence ball: every model gets `p_W`, `p_b`, `V`,
/// `K` and `rho`; the one with the smallest `rho` (smallest dimension on
/// ties) is selected.
pub fn build_ball(
    sample: &Sample,
    collection: &ModelCollection,
    scheme: &WeightScheme,
    cfg: &BoundConfig,
) -> Result<ConfidenceBall> {
    cfg.validate()?;
    if scheme.n() != sample.n() {
        return Err(Error::SizeMismatch {
            scheme: scheme.n(),
            sample: sample.n(),
        });
    }
    let n = sample.n();
    let design = Design::new(sample, collection.nested_basis());
    let statistics = statistics_on(&design, collection);
    let report = RadiusReport::from_statistics(collection, &statistics, n, cfg)?;
    let best = report.argmin();
    let selected = &collection.models()[best];
    let mut center = design.empirical_means();
    center.truncate(selected.dim());
    let h3 = check_h3(collection, n, cfg.beta)?;
    Ok(ConfidenceBall {
        selected_model_id: selected.id(),
        selected_dim: selected.dim(),
        top_model_id: collection.top().id(),
        top_dim: collection.top().dim(),
        center,
        radius: report.records[best].rho_hat,
        n,
        beta: cfg.beta,
        eta: cfg.eta,
        degenerate: report.records[best].degenerate,
        h3_holds: h3.holds,
        report,
    })
}

/// Order statistic of rank `ceil(alpha * len)` (clamped to `[1, len]`) of
/// `sorted`, so that a fresh draw from the same law falls at or below it with
/// probability about `alpha`.
pub fn upper_quantile(sorted: &[f64], alpha: f64) -> f64 {
    let len = sorted.len();
    // the small shift keeps alpha * len that is an integer up to rounding on that integer
    let rank = ((alpha * len as f64 - 1e-9).ceil() as usize).clamp(1, len);
    sorted[rank - 1]
}

/// Resampling quantile `q_alpha` of the statistic
/// `C_W sum_lambda ((P_n^W - mean(W) P_n) psi_lambda)^2` from `nb` draws.
pub fn resampled_quantile_radius<R: Rng + ?Sized>(
    sample: &Sample,
    model: &Model,
    scheme: &WeightScheme,
    alpha: f64,
    nb: usize,
    rng: &mut R,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    if nb < 100 {
        return Err(invalid("nb", format!("need at least 100 resampling draws, got {nb}")));
    }
    let mut stats = resampled_statistics(sample, model, scheme, nb, rng)?;
    stats.sort_by(f64::total_cmp);
    Ok(upper_quantile(&stats, alpha))
}
