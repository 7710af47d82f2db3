//! Experiment configuration: a TOML file merged with command-line overrides.

use std::path::{Path, PathBuf};

use confball::basis::{fourier_sobolev_collection, Family, Model, ModelCollection};
use confball::{BoundConfig, DensityOracle, WeightKind};
use serde::Deserialize;

use crate::CliError;

/// `C_M` used for every collection built from a config.
pub const COLLECTION_C_M: f64 = 4.0;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct RawConfig {
    pub collection: Option<RawCollection>,
    pub weights: Option<RawWeights>,
    pub beta: Option<f64>,
    pub eta: Option<f64>,
    pub m2: Option<f64>,
    pub m_inf: Option<f64>,
    pub kappa_scale: Option<f64>,
    pub n: Option<usize>,
    pub dm: Option<usize>,
    pub nb: Option<usize>,
    pub reps: Option<usize>,
    pub alpha_grid: Option<Vec<f64>>,
    pub oracle: Option<RawOracle>,
    pub input: Option<PathBuf>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCollection {
    pub family: Option<String>,
    pub dims: Option<DimsSpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum DimsSpec {
    List(Vec<usize>),
    /// `"sobolev:<gamma>"`, or a comma-separated list.
    Text(String),
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawWeights {
    pub kind: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOracle {
    pub kind: Option<String>,
    pub params: Option<Vec<f64>>,
}

impl RawConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `overrides` win.
    pub fn merge(mut self, overrides: RawConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => {$( if overrides.$f.is_some() { self.$f = overrides.$f; } )*};
        }
        take!(
            beta,
            eta,
            m2,
            m_inf,
            kappa_scale,
            n,
            dm,
            nb,
            reps,
            alpha_grid,
            input,
            seed
        );
        if let Some(c) = overrides.collection {
            let base = self.collection.get_or_insert_with(Default::default);
            if c.family.is_some() {
                base.family = c.family;
            }
            if c.dims.is_some() {
                base.dims = c.dims;
            }
        }
        if let Some(w) = overrides.weights {
            if w.kind.is_some() {
                self.weights = Some(w);
            }
        }
        if let Some(o) = overrides.oracle {
            let base = self.oracle.get_or_insert_with(Default::default);
            if o.kind.is_some() {
                base.kind = o.kind;
            }
            if o.params.is_some() {
                base.params = o.params;
            }
        }
        self
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Family and degree bound from `histogram`, `fourier` or
/// `piecewise-polynomial[:R]`.
pub fn parse_family(text: &str) -> Result<(Family, usize), CliError> {
    let (name, degree) = match text.split_once(':') {
        Some((name, r)) => (name, Some(r)),
        None => (text, None),
    };
    match (name.trim(), degree) {
        ("histogram", None) => Ok((Family::Histogram, 1)),
        ("fourier", None) => Ok((Family::Fourier, 1)),
        ("piecewise-polynomial", None) => Ok((Family::PiecewisePolynomial, 2)),
        ("piecewise-polynomial", Some(r)) => match r.trim().parse::<usize>() {
            Ok(r) if r >= 1 => Ok((Family::PiecewisePolynomial, r)),
            _ => Err(usage(format!("bad degree bound `{r}` in collection.family"))),
        },
        _ => Err(usage(format!(
            "unknown collection.family `{text}` (histogram, fourier, piecewise-polynomial[:R])"
        ))),
    }
}

pub fn parse_weights(text: &str) -> Result<WeightKind, CliError> {
    match text {
        "efron" | "efron-multinomial" => Ok(WeightKind::EfronMultinomial),
        "rademacher" | "rademacher-iid" => Ok(WeightKind::RademacherIid),
        _ => Err(usage(format!("unknown weights.kind `{text}` (efron, rademacher)"))),
    }
}

/// Collection description, resolved once the sample size is known.
#[derive(Debug, Clone, PartialEq)]
pub enum CollectionSpec {
    Dims {
        family: Family,
        degree_bound: usize,
        dims: Vec<usize>,
    },
    Sobolev {
        gamma: f64,
    },
}

impl CollectionSpec {
    pub fn build(&self, n: usize) -> Result<ModelCollection, CliError> {
        match self {
            CollectionSpec::Dims {
                family,
                degree_bound,
                dims,
            } => ModelCollection::from_dims(*family, dims, *degree_bound, COLLECTION_C_M)
                .map_err(|e| usage(format!("collection: {e}"))),
            CollectionSpec::Sobolev { gamma } => {
                fourier_sobolev_collection(n, *gamma).map_err(|e| usage(format!("collection: {e}")))
            }
        }
    }

    /// Family and degree bound of the models.
    pub fn family(&self) -> (Family, usize) {
        match self {
            CollectionSpec::Dims {
                family, degree_bound, ..
            } => (*family, *degree_bound),
            CollectionSpec::Sobolev { .. } => (Family::Fourier, 1),
        }
    }
}

pub fn parse_dims_text(text: &str) -> Result<DimsSpec, CliError> {
    if text.trim_start().starts_with("sobolev:") {
        return Ok(DimsSpec::Text(text.trim().to_string()));
    }
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad dimension `{t}`")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(DimsSpec::List)
}

fn collection_spec(raw: &RawConfig) -> Result<CollectionSpec, CliError> {
    let c = raw.collection.clone().unwrap_or_default();
    let (family, degree_bound) = parse_family(c.family.as_deref().unwrap_or("histogram"))?;
    let dims = match c.dims.unwrap_or(DimsSpec::List(vec![1, 2, 4, 8])) {
        DimsSpec::List(d) => d,
        DimsSpec::Text(t) => match t.trim().strip_prefix("sobolev:") {
            Some(g) => {
                let gamma: f64 = g
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("bad smoothness in `{t}`")))?;
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(usage(format!("smoothness must be positive in `{t}`")));
                }
                if family != Family::Fourier {
                    return Err(usage("sobolev collections need collection.family = \"fourier\""));
                }
                return Ok(CollectionSpec::Sobolev { gamma });
            }
            None => match parse_dims_text(&t)? {
                DimsSpec::List(d) => d,
                DimsSpec::Text(_) => unreachable!("handled above"),
            },
        },
    };
    if dims.is_empty() {
        return Err(usage("collection.dims is empty"));
    }
    if dims.contains(&0) {
        return Err(usage("collection.dims must be positive"));
    }
    Ok(CollectionSpec::Dims {
        family,
        degree_bound,
        dims,
    })
}

fn oracle(raw: &RawConfig) -> Result<DensityOracle, CliError> {
    let o = raw.oracle.clone().unwrap_or_default();
    let params = o.params.unwrap_or_default();
    let built = match o.kind.as_deref().unwrap_or("uniform") {
        "uniform" if params.is_empty() => Ok(DensityOracle::uniform()),
        "uniform" => return Err(usage("oracle.params must be empty for the uniform oracle")),
        "histogram" => DensityOracle::histogram(params),
        "cosine" => match params[..] {
            [a, k] if k >= 1.0 && k.fract() == 0.0 => DensityOracle::cosine_tilt(a, k as usize),
            _ => return Err(usage("oracle.params for cosine are [amplitude, frequency >= 1]")),
        },
        other => {
            return Err(usage(format!(
                "unknown oracle.kind `{other}` (uniform, histogram, cosine)"
            )))
        }
    };
    built.map_err(|e| usage(format!("oracle: {e}")))
}

fn check_positive(name: &str, v: usize) -> Result<usize, CliError> {
    if v == 0 {
        Err(usage(format!("{name} must be positive")))
    } else {
        Ok(v)
    }
}

pub const DEFAULT_SEED: u64 = 42;

/// Settings of `ball` and `check-assumptions`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSettings {
    pub collection: CollectionSpec,
    pub weights: WeightKind,
    pub bounds: BoundConfig,
    pub input: Option<PathBuf>,
    pub n: usize,
    pub seed: u64,
}

/// Settings of `simulate-pw` and `coverage`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSettings {
    pub model: Model,
    pub weights: WeightKind,
    pub oracle: DensityOracle,
    pub n: usize,
    pub nb: usize,
    pub reps: usize,
    pub alpha_grid: Vec<f64>,
    pub seed: u64,
}

pub fn default_alpha_grid() -> Vec<f64> {
    (10..=19).map(|k| f64::from(k) / 20.0).collect()
}

impl BallSettings {
    pub fn resolve(raw: &RawConfig) -> Result<Self, CliError> {
        let bounds = BoundConfig {
            beta: raw.beta.unwrap_or(0.1),
            m2: raw.m2.unwrap_or(1.0),
            m_inf: raw.m_inf.unwrap_or(1.0),
            eta: raw.eta.unwrap_or(0.0),
            kappa_scale: raw.kappa_scale.unwrap_or(1.0),
        };
        bounds.validate().map_err(|e| usage(e.to_string()))?;
        let n = raw.n.unwrap_or(100);
        if n < 2 {
            return Err(usage("n must be at least 2"));
        }
        Ok(Self {
            collection: collection_spec(raw)?,
            weights: parse_weights(raw.weights.as_ref().and_then(|w| w.kind.as_deref()).unwrap_or("efron"))?,
            bounds,
            input: raw.input.clone(),
            n,
            seed: raw.seed.unwrap_or(DEFAULT_SEED),
        })
    }
}

impl SimulationSettings {
    /// `defaults` = `(n, dm, nb, reps)` when not configured.
    pub fn resolve(raw: &RawConfig, defaults: (usize, usize, usize, usize)) -> Result<Self, CliError> {
        let n = raw.n.unwrap_or(defaults.0);
        if n < 2 {
            return Err(usage("n must be at least 2"));
        }
        let dm = check_positive("dm", raw.dm.unwrap_or(defaults.1))?;
        let (family, degree_bound) = collection_spec(raw)?.family();
        let model = Model::with_dim(family, dm, degree_bound).map_err(|e| usage(format!("dm: {e}")))?;
        let alpha_grid = raw.alpha_grid.clone().unwrap_or_else(default_alpha_grid);
        if alpha_grid.is_empty() || alpha_grid.iter().any(|a| !(*a > 0.0 && *a < 1.0)) {
            return Err(usage("alphaGrid must be a nonempty list of levels in (0, 1)"));
        }
        if alpha_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(usage("alphaGrid must be strictly increasing"));
        }
        Ok(Self {
            model,
            weights: parse_weights(raw.weights.as_ref().and_then(|w| w.kind.as_deref()).unwrap_or("efron"))?,
            oracle: oracle(raw)?,
            n,
            nb: check_positive("nb", raw.nb.unwrap_or(defaults.2))?,
            reps: check_positive("reps", raw.reps.unwrap_or(defaults.3))?,
            alpha_grid,
            seed: raw.seed.unwrap_or(DEFAULT_SEED),
        })
    }
}
