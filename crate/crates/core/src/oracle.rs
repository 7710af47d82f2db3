//! Densities with exactly known projections, used as ground truth.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::basis::{Basis, Model, ModelKind, NestedBasis, NestedTerms};
use crate::error::{Error, Result};
use crate::estimators::Sample;
use crate::quadrature::{composite_rule, gauss_legendre, shifted_legendre};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OracleKind {
    Uniform01,
    /// Piecewise constant density on a regular partition; values average to 1.
    HistogramDensity {
        cell_values: Vec<f64>,
    },
    /// `s(x) = 1 + a sqrt2 cos(2 pi k x)`.
    CosineTilt {
        amplitude: f64,
        frequency: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityOracle {
    kind: OracleKind,
    norm2: f64,
    norm_inf: f64,
}

impl DensityOracle {
    pub fn uniform() -> Self {
        Self {
            kind: OracleKind::Uniform01,
            norm2: 1.0,
            norm_inf: 1.0,
        }
    }

    pub fn histogram(cell_values: Vec<f64>) -> Result<Self> {
        if cell_values.is_empty() {
            return Err(Error::InvalidOracle("histogram density needs at least one cell".into()));
        }
        if cell_values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidOracle(
                "cell values must be finite and nonnegative".into(),
            ));
        }
        let m = cell_values.len() as f64;
        let mean = cell_values.iter().sum::<f64>() / m;
        if (mean - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidOracle(format!(
                "cell values must average to 1, got {mean}"
            )));
        }
        let norm2 = (cell_values.iter().map(|v| v * v).sum::<f64>() / m).sqrt();
        let norm_inf = cell_values.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            kind: OracleKind::HistogramDensity { cell_values },
            norm2,
            norm_inf,
        })
    }

    pub fn cosine_tilt(amplitude: f64, frequency: usize) -> Result<Self> {
        if frequency == 0 {
            return Err(Error::InvalidOracle("cosine tilt frequency must be >= 1".into()));
        }
        if amplitude.is_nan() || amplitude.abs() * SQRT_2 > 1.0 {
            return Err(Error::InvalidOracle(format!(
                "|a| sqrt2 must be <= 1 for a nonnegative density, got a = {amplitude}"
            )));
        }
        Ok(Self {
            kind: OracleKind::CosineTilt { amplitude, frequency },
            norm2: (1.0 + amplitude * amplitude).sqrt(),
            norm_inf: 1.0 + amplitude.abs() * SQRT_2,
        })
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    /// `||s||`.
    pub fn norm2(&self) -> f64 {
        self.norm2
    }

    /// `||s||_inf`.
    pub fn norm_inf(&self) -> f64 {
        self.norm_inf
    }

    pub fn density(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        match &self.kind {
            OracleKind::Uniform01 => 1.0,
            OracleKind::HistogramDensity { cell_values } => cell_values[crate::basis::locate(x, cell_values.len()).0],
            OracleKind::CosineTilt { amplitude, frequency } => {
                1.0 + amplitude * SQRT_2 * (2.0 * PI * *frequency as f64 * x).cos()
            }
        }
    }

    /// `P_s` of the native piecewise-polynomial function `sqrt(J) l_k(J x - p)`.
    pub fn piece_moment(&self, pieces: usize, piece: usize, degree: usize) -> f64 {
        let jf = pieces as f64;
        match &self.kind {
            OracleKind::Uniform01 => {
                if degree == 0 {
                    1.0 / jf.sqrt()
                } else {
                    0.0
                }
            }
            OracleKind::HistogramDensity { cell_values } => {
                let m = cell_values.len();
                let first = piece * m / pieces;
                let last = ((piece + 1) * m).div_ceil(pieces);
                let rule = gauss_legendre(degree / 2 + 1);
                let mut vals = vec![0.0; degree + 1];
                let mut total = 0.0;
                for (c, v) in cell_values.iter().enumerate().take(last).skip(first) {
                    if *v == 0.0 {
                        continue;
                    }
                    // overlap of [c/m, (c+1)/m) and [p/J, (p+1)/J) in local piece coordinates
                    let lo = ((c * pieces) as f64 / m as f64 - piece as f64).max(0.0);
                    let hi = (((c + 1) * pieces) as f64 / m as f64 - piece as f64).min(1.0);
                    if hi <= lo {
                        continue;
                    }
                    let integral: f64 = rule
                        .iter()
                        .map(|&(u, w)| {
                            shifted_legendre(lo + (hi - lo) * u, &mut vals);
                            w * vals[degree]
                        })
                        .sum::<f64>()
                        * (hi - lo);
                    total += v * integral;
                }
                total / jf.sqrt()
            }
            OracleKind::CosineTilt { amplitude, frequency } => {
                let base = if degree == 0 { 1.0 / jf.sqrt() } else { 0.0 };
                let omega = 2.0 * PI * *frequency as f64 / jf;
                let phase = omega * piece as f64;
                let oscillation = if degree == 0 {
                    ((phase + omega).sin() - phase.sin()) / omega
                } else {
                    let panels = (omega / PI).ceil() as usize + 1;
                    let mut vals = vec![0.0; degree + 1];
                    composite_rule(0.0, 1.0, panels, 16)
                        .into_iter()
                        .map(|(u, w)| {
                            shifted_legendre(u, &mut vals);
                            w * vals[degree] * (phase + omega * u).cos()
                        })
                        .sum()
                };
                base + amplitude * SQRT_2 * oscillation / jf.sqrt()
            }
        }
    }

    /// `P_s` of the native trigonometric function with index `index`.
    pub fn fourier_moment(&self, index: usize) -> f64 {
        if index == 0 {
            return 1.0;
        }
        let j = index.div_ceil(2);
        let is_cos = index % 2 == 1;
        match &self.kind {
            OracleKind::Uniform01 => 0.0,
            OracleKind::CosineTilt { amplitude, frequency } => {
                if is_cos && j == *frequency {
                    *amplitude
                } else {
                    0.0
                }
            }
            OracleKind::HistogramDensity { cell_values } => {
                let m = cell_values.len() as f64;
                let w = 2.0 * PI * j as f64;
                cell_values
                    .iter()
                    .enumerate()
                    .map(|(c, v)| {
                        let (a, b) = (c as f64 / m, (c + 1) as f64 / m);
                        let integral = if is_cos {
                            (w * b).sin() - (w * a).sin()
                        } else {
                            (w * a).cos() - (w * b).cos()
                        };
                        v * SQRT_2 * integral / w
                    })
                    .sum()
            }
        }
    }

    /// Exact `P_s psi_lambda` for the model's native basis.
    pub fn true_coefficient(&self, model: &Model, lambda: usize) -> Result<f64> {
        if lambda >= model.dim() {
            return Err(Error::IndexOutOfRange {
                index: lambda,
                dim: model.dim(),
            });
        }
        Ok(match model.kind() {
            ModelKind::Histogram { cells } => self.piece_moment(cells, lambda, 0),
            ModelKind::Fourier { .. } => self.fourier_moment(lambda),
            ModelKind::PiecewisePolynomial { pieces, degree_bound } => {
                self.piece_moment(pieces, lambda / degree_bound, lambda % degree_bound)
            }
        })
    }

    pub fn true_coefficients(&self, model: &Model) -> Vec<f64> {
        (0..model.dim())
            .map(|l| self.true_coefficient(model, l).expect("index in range"))
            .collect()
    }

    /// Exact coefficients of `s` on a nested basis.
    pub fn nested_coefficients(&self, basis: &NestedBasis) -> Vec<f64> {
        (0..basis.dim())
            .map(|l| match basis.terms(l).expect("index in range") {
                NestedTerms::Fourier(i) => self.fourier_moment(i),
                NestedTerms::Pieces(terms) => terms
                    .iter()
                    .map(|t| t.weight * self.piece_moment(t.pieces, t.piece, t.degree))
                    .sum(),
            })
            .collect()
    }

    /// `||s_top - s_sub||^2`, the squared norm of the coefficients of `s` on
    /// the nested functions beyond `sub`.
    pub fn true_bias_sq(&self, sub: &Model, top: &Model) -> Result<f64> {
        if sub == top {
            return Ok(0.0);
        }
        let nested = NestedBasis::from_chain(&[sub.clone(), top.clone()])?;
        let coeffs = self.nested_coefficients(&nested);
        Ok(crate::sum::csum(coeffs[sub.dim()..].iter().map(|c| c * c)))
    }

    /// `||s - s_m||^2 = ||s||^2 - sum_lambda (P_s psi_lambda)^2`, clamped at 0.
    pub fn residual_norm_sq(&self, model: &Model) -> f64 {
        let captured = crate::sum::csum(self.true_coefficients(model).iter().map(|c| c * c));
        (self.norm2 * self.norm2 - captured).max(0.0)
    }

    /// Draws an i.i.d. sample of size `n`.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Sample> {
        let points = (0..n).map(|_| self.draw(rng)).collect();
        Sample::new(points)
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            OracleKind::Uniform01 => rng.random(),
            OracleKind::HistogramDensity { cell_values } => {
                let m = cell_values.len() as f64;
                let u: f64 = rng.random::<f64>() * m;
                let mut cumulative = 0.0;
                for (c, v) in cell_values.iter().enumerate() {
                    if *v > 0.0 && u < cumulative + v {
                        let x = (c as f64 + (u - cumulative) / v) / m;
                        return x.clamp(c as f64 / m, 1.0);
                    }
                    cumulative += v;
                }
                // u landed on the rounding edge of the last positive cell
                let last = cell_values.iter().rposition(|v| *v > 0.0).expect("some positive cell");
                (last as f64 + 0.5) / m
            }
            OracleKind::CosineTilt { .. } => loop {
                let x: f64 = rng.random();
                let accept: f64 = rng.random::<f64>() * self.norm_inf;
                if accept <= self.density(x) {
                    return x;
                }
            },
        }
    }

    /// Quadrature nodes `(x, w s(x))` for integrating functions that are
    /// smooth on each of `pieces` regular pieces with frequencies up to
    /// `max_frequency`, against `s`. Breakpoints of the oracle itself are
    /// respected, so piecewise polynomials of degree < 24 integrate exactly.
    pub fn quadrature(&self, pieces: usize, max_frequency: usize) -> Vec<(f64, f64)> {
        let mut cuts: Vec<(usize, usize)> = (0..=pieces).map(|p| (p, pieces)).collect();
        let mut freq = max_frequency;
        match &self.kind {
            OracleKind::Uniform01 => {}
            OracleKind::HistogramDensity { cell_values } => {
                let m = cell_values.len();
                cuts.extend((0..=m).map(|c| (c, m)));
            }
            OracleKind::CosineTilt { frequency, .. } => freq += frequency,
        }
        let mut points: Vec<f64> = cuts.iter().map(|&(a, b)| a as f64 / b as f64).collect();
        points.sort_by(f64::total_cmp);
        points.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        let mut rule = Vec::new();
        for w in points.windows(2) {
            let len = w[1] - w[0];
            let panels = (4.0 * freq as f64 * len).ceil() as usize + 1;
            for (x, wt) in composite_rule(w[0], w[1], panels, 12) {
                rule.push((x, wt * self.density(x)));
            }
        }
        rule
    }
}
