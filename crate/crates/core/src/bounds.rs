//! Radius components with explicit constants.
//!
//! For a model `S_m` in a collection of `N` models with top model `S_n`:
//!
//! ```text
//! V(m) = p_W(S_m) + kappa_v (1 + sqrt(M_inf ∧ M_2 sqrt(d_m) ∧ d_m)) sqrt(d_m) x / n,
//!        x = 2 ln(2N / beta) ∨ 2
//! K(m) = inf_eps [p_b(S_m, S_n) + kappa_b(eps) (1 + sqrt(M_inf ∧ M_2 sqrt(d_n))) sqrt(d_n) x' / n] / (1 - eps),
//!        x' = 2 ln(6N / beta) ∨ 2
//! rho(m) = sqrt(eta^2 + K(m) + V(m))
//! ```
//!
//! `kappa_scale` multiplies both kappas; 1 gives the theoretical constants.

use serde::{Deserialize, Serialize};

use crate::basis::{Basis, ModelCollection};
use crate::error::{invalid, Result};

/// Points of the `eps` grid used for the infimum in `K`.
pub const EPSILON_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConfig {
    pub beta: f64,
    /// Bound on `||s||`.
    pub m2: f64,
    /// Bound on `||s||_inf`.
    pub m_inf: f64,
    /// Radius allowed for the part of `s` outside the top model.
    pub eta: f64,
    pub kappa_scale: f64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            beta: 0.1,
            m2: 1.0,
            m_inf: 1.0,
            eta: 0.0,
            kappa_scale: 1.0,
        }
    }
}

impl BoundConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(invalid("beta", format!("must lie in (0, 1), got {}", self.beta)));
        }
        if !(self.m2 > 0.0 && self.m2.is_finite()) {
            return Err(invalid("m2", format!("must be positive, got {}", self.m2)));
        }
        if !(self.m_inf > 0.0 && self.m_inf.is_finite()) {
            return Err(invalid("mInf", format!("must be positive, got {}", self.m_inf)));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(invalid("eta", format!("must be nonnegative, got {}", self.eta)));
        }
        if !(self.kappa_scale >= 0.0 && self.kappa_scale.is_finite()) {
            return Err(invalid(
                "kappaScale",
                format!("must be nonnegative, got {}", self.kappa_scale),
            ));
        }
        Ok(())
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive, got {v}")))
    }
}

/// `kappa_v = 2040 c1 max(1, c1, 3 c1 c3 / 2)`.
pub fn kappa_v(c1: f64, c3: f64) -> Result<f64> {
    positive("c1", c1)?;
    positive("c3", c3)?;
    Ok(2040.0 * c1 * 1f64.max(c1).max(1.5 * c1 * c3))
}

/// `kappa_b(eps) = kappa_v + (2 / eps) max(2, 2 c1, c3 c1^2 / 9)`.
pub fn kappa_b(epsilon: f64, c1: f64, c3: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid("epsilon", format!("must lie in (0, 1), got {epsilon}")));
    }
    let kv = kappa_v(c1, c3)?;
    Ok(kv + 2.0 / epsilon * 2f64.max(2.0 * c1).max(c3 * c1 * c1 / 9.0))
}

/// `x_n` of the variance bound: `2 ln(2 N / beta) ∨ 2`.
pub fn variance_threshold(cardinality: usize, beta: f64) -> f64 {
    (2.0 * (2.0 * cardinality as f64 / beta).ln()).max(2.0)
}

/// `x_n` of the bias bound: `2 ln(6 N / beta) ∨ 2`.
pub fn bias_threshold(cardinality: usize, beta: f64) -> f64 {
    (2.0 * (6.0 * cardinality as f64 / beta).ln()).max(2.0)
}

/// Additive part of `V` for a model of dimension `dim`.
pub fn variance_penalty(dim: usize, n: usize, collection: &ModelCollection, cfg: &BoundConfig) -> Result<f64> {
    cfg.validate()?;
    let d = dim as f64;
    let kv = kappa_v(collection.c1(), collection.c_m())?;
    let spread = cfg.m_inf.min(cfg.m2 * d.sqrt()).min(d);
    let x = variance_threshold(collection.cardinality(), cfg.beta);
    Ok(cfg.kappa_scale * kv * (1.0 + spread.sqrt()) * d.sqrt() * x / n as f64)
}

/// `V(m, beta)`.
pub fn variance_bound(pw: f64, dim: usize, n: usize, collection: &ModelCollection, cfg: &BoundConfig) -> Result<f64> {
    Ok(pw + variance_penalty(dim, n, collection, cfg)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasBound {
    pub value: f64,
    /// Grid point attaining the minimum.
    pub epsilon: f64,
}

/// `K(m, beta)` with the infimum over `eps` taken on `{k / 100 : k = 1..99}`.
pub fn bias_bound(pb: f64, n: usize, collection: &ModelCollection, cfg: &BoundConfig) -> Result<BiasBound> {
    bias_bound_on_grid(pb, n, collection, cfg, EPSILON_STEPS)
}

/// `K(m, beta)` on the grid `{k / steps : k = 1..steps-1}`.
pub fn bias_bound_on_grid(
    pb: f64,
    n: usize,
    collection: &ModelCollection,
    cfg: &BoundConfig,
    steps: usize,
) -> Result<BiasBound> {
    cfg.validate()?;
    if steps < 2 {
        return Err(invalid("steps", "the epsilon grid needs at least 2 steps"));
    }
    let (c1, c3) = (collection.c1(), collection.c_m());
    let d = collection.top().dim() as f64;
    let spread = cfg.m_inf.min(cfg.m2 * d.sqrt());
    let x = bias_threshold(collection.cardinality(), cfg.beta);
    let unit = cfg.kappa_scale * (1.0 + spread.sqrt()) * d.sqrt() * x / n as f64;
    let mut best = BiasBound {
        value: f64::INFINITY,
        epsilon: f64::NAN,
    };
    for k in 1..steps {
        let eps = k as f64 / steps as f64;
        let value = (pb + kappa_b(eps, c1, c3)? * unit) / (1.0 - eps);
        if value < best.value {
            best = BiasBound { value, epsilon: eps };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Radius {
    pub value: f64,
    /// `eta^2 + K + V` before clamping.
    pub radicand: f64,
    /// Set when the radicand was negative and clamped to 0.
    pub degenerate: bool,
}

/// `rho = sqrt(eta^2 + K + V)`, clamping a negative radicand to 0.
pub fn radius(eta: f64, k: f64, v: f64) -> Radius {
    let radicand = eta * eta + k + v;
    let degenerate = radicand < 0.0;
    Radius {
        value: radicand.max(0.0).sqrt(),
        radicand,
        degenerate,
    }
}

/// Everything computed for one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub model_id: String,
    pub dim: usize,
    pub pw: f64,
    pub pb: f64,
    pub v: f64,
    pub k: f64,
    pub epsilon: f64,
    pub rho_hat_sq: f64,
    pub rho_hat: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusReport {
    pub records: Vec<ModelRecord>,
}

impl RadiusReport {
    /// Builds the report from per-model `(p_W, p_b)` pairs, in collection order.
    pub fn from_statistics(
        collection: &ModelCollection,
        statistics: &[(f64, f64)],
        n: usize,
        cfg: &BoundConfig,
    ) -> Result<Self> {
        let records = collection
            .models()
            .iter()
            .zip(statistics)
            .map(|(model, &(pw, pb))| {
                let v = variance_bound(pw, model.dim(), n, collection, cfg)?;
                let k = bias_bound(pb, n, collection, cfg)?;
                let r = radius(cfg.eta, k.value, v);
                Ok(ModelRecord {
                    model_id: model.id(),
                    dim: model.dim(),
                    pw,
                    pb,
                    v,
                    k: k.value,
                    epsilon: k.epsilon,
                    rho_hat_sq: r.radicand.max(0.0),
                    rho_hat: r.value,
                    degenerate: r.degenerate,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { records })
    }

    /// Position of the smallest radius; ties go to the smallest dimension.
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, r) in self.records.iter().enumerate().skip(1) {
            let b = &self.records[best];
            if r.rho_hat < b.rho_hat || (r.rho_hat == b.rho_hat && r.dim < b.dim) {
                best = i;
            }
        }
        best
    }
}
