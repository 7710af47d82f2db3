//! Non-asymptotic adaptive confidence balls for densities on `[0, 1]`.
//!
//! Projection estimators on nested models, a resampling estimate of the
//! variance term, a U-statistic estimate of the bias term, radius bounds with
//! explicit constants, and selection of the model with the smallest radius.
//!
//! ```
//! use confball::{build_ball, BoundConfig, DensityOracle, Family, ModelCollection};
//! use confball::{stream_rng, WeightKind, WeightScheme};
//!
//! let sample = DensityOracle::uniform().sample(100, &mut stream_rng(1, 0)).unwrap();
//! let collection = ModelCollection::from_dims(Family::Histogram, &[1, 2, 4, 8], 1, 4.0).unwrap();
//! let scheme = WeightScheme::new(WeightKind::EfronMultinomial, 100).unwrap();
//! let ball = build_ball(&sample, &collection, &scheme, &BoundConfig::default()).unwrap();
//! assert_eq!(ball.report.records.len(), 4);
//! assert!(ball.radius > 0.0);
//! ```

pub mod ball;
pub mod basis;
pub mod bounds;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod oracle;
pub mod quadrature;
pub mod rng;
pub mod sum;
pub mod weights;

pub use ball::{build_ball, resampled_quantile_radius, ConfidenceBall};
pub use basis::{Basis, Family, Model, ModelCollection, ModelKind, NestedBasis};
pub use bounds::{BoundConfig, ModelRecord, RadiusReport};
pub use error::{Error, Result};
pub use estimators::{ProjectionEstimate, Sample};
pub use oracle::{DensityOracle, OracleKind};
pub use rng::stream_rng;
pub use weights::{WeightKind, WeightScheme};
