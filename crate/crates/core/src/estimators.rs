//! Projection estimators and the quadratic statistics built from them.
//!
//! With `psi_lambda` an orthonormal basis of `S_m`, `P_n` the empirical
//! measure and `P_s` the true law:
//!
//! * the projection estimator has coefficients `P_n psi_lambda`;
//! * the variance term is `||s_m - ŝ_m||^2 = sum_lambda ((P_n - P_s) psi_lambda)^2`;
//! * its resampling estimate `p_W` is
//!   `C_W E_W sum_lambda ((P_n^W - mean(W) P_n) psi_lambda)^2`, which for
//!   every exchangeable scheme equals
//!   `sum_lambda sum_i (psi_lambda(X_i) - P_n psi_lambda)^2 / (n (n - 1))`;
//! * the bias `||s_n - s_m||^2` is estimated without bias by the order-2
//!   U-statistic `p_b` over the basis functions of `S_n` beyond `S_m`.
//!
//! The centered U-statistic `U_s` (which needs the true coefficients) ties
//! them together: `||s_m - ŝ_m||^2 - p_W = U_s` exactly.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{check_point, Basis, Model, ModelKind, NestedBasis};
use crate::error::{Error, Result};
use crate::oracle::DensityOracle;
use crate::sum::{csum, CompensatedSum};
use crate::weights::WeightScheme;

/// An i.i.d. sample of points in `[0, 1]`, `n >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    points: Vec<f64>,
}

impl Sample {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::SampleTooSmall(points.len()));
        }
        for &x in &points {
            check_point(x)?;
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionEstimate {
    pub model_id: String,
    /// `P_n psi_lambda` for each basis index.
    pub coefficients: Vec<f64>,
}

/// Basis values at every sample point, in compressed sparse rows.
#[derive(Debug, Clone)]
pub struct Design {
    n: usize,
    dim: usize,
    offsets: Vec<usize>,
    entries: Vec<(usize, f64)>,
}

impl Design {
    pub fn new(sample: &Sample, basis: &impl Basis) -> Self {
        let mut offsets = Vec::with_capacity(sample.n() + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for &x in sample.points() {
            basis.nonzeros(x, &mut entries);
            offsets.push(entries.len());
        }
        Self {
            n: sample.n(),
            dim: basis.dim(),
            offsets,
            entries,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.entries[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Per index: compensated sum of values, of squares, and how many rows
    /// store an entry for it.
    fn column_stats(&self) -> (Vec<CompensatedSum>, Vec<CompensatedSum>, Vec<usize>) {
        let mut sums = vec![CompensatedSum::new(); self.dim];
        let mut squares = vec![CompensatedSum::new(); self.dim];
        let mut counts = vec![0usize; self.dim];
        for &(l, v) in &self.entries {
            sums[l].add(v);
            squares[l].add(v * v);
            counts[l] += 1;
        }
        (sums, squares, counts)
    }

    /// `P_n psi_lambda` for every index.
    pub fn empirical_means(&self) -> Vec<f64> {
        let n = self.n as f64;
        let mut sums = vec![CompensatedSum::new(); self.dim];
        for &(l, v) in &self.entries {
            sums[l].add(v);
        }
        sums.iter().map(|s| s.value() / n).collect()
    }

    /// `sum_lambda sum_i (psi_lambda(X_i) - c_lambda)^2` for centers `c`.
    fn centered_square_sum(&self, centers: &[f64]) -> f64 {
        let mut per_index = vec![CompensatedSum::new(); self.dim];
        let mut counts = vec![0usize; self.dim];
        for &(l, v) in &self.entries {
            per_index[l].add((v - centers[l]).powi(2));
            counts[l] += 1;
        }
        csum(per_index.iter().zip(&counts).zip(centers).map(|((s, &k), c)| {
            // rows without a stored entry contribute psi = 0
            s.value() + (self.n - k) as f64 * c * c
        }))
    }
}

/// Empirical coefficients `P_n psi_lambda` on an arbitrary basis.
pub fn empirical_coefficients(sample: &Sample, basis: &impl Basis) -> Vec<f64> {
    Design::new(sample, basis).empirical_means()
}

/// Projection estimator of the density on `model`.
pub fn project(sample: &Sample, model: &Model) -> ProjectionEstimate {
    ProjectionEstimate {
        model_id: model.id(),
        coefficients: empirical_coefficients(sample, model),
    }
}

fn check_scheme(sample: &Sample, scheme: &WeightScheme) -> Result<()> {
    if scheme.n() != sample.n() {
        return Err(Error::SizeMismatch {
            scheme: scheme.n(),
            sample: sample.n(),
        });
    }
    Ok(())
}

/// Closed form of the resampling estimator `p_W(S_m)`; identical for every
/// exchangeable scheme.
pub fn pw_closed_form(sample: &Sample, model: &Model, scheme: &WeightScheme) -> Result<f64> {
    check_scheme(sample, scheme)?;
    Ok(pw_closed_form_on(&Design::new(sample, model)))
}

pub(crate) fn pw_closed_form_on(design: &Design) -> f64 {
    let n = design.n() as f64;
    let means = design.empirical_means();
    design.centered_square_sum(&means) / (n * (n - 1.0))
}

/// One resampled statistic `C_W sum_lambda ((P_n^W - mean(W) P_n) psi_lambda)^2`.
///
/// `sums[lambda]` must hold `sum_i psi_lambda(X_i)`; `scratch` has length `dim`.
pub fn resampled_statistic(design: &Design, sums: &[f64], weights: &[f64], c_w: f64, scratch: &mut [f64]) -> f64 {
    let n = design.n() as f64;
    scratch.iter_mut().for_each(|s| *s = 0.0);
    let mut weight_total = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        weight_total += w;
        if w != 0.0 {
            for &(l, v) in design.row(i) {
                scratch[l] += w * v;
            }
        }
    }
    let weight_mean = weight_total / n;
    let total: f64 = scratch
        .iter()
        .zip(sums)
        .map(|(a, s)| ((a - weight_mean * s) / n).powi(2))
        .sum();
    c_w * total
}

/// `nb` independent resampled statistics on `basis`.
pub fn resampled_statistics<R: Rng + ?Sized>(
    sample: &Sample,
    basis: &impl Basis,
    scheme: &WeightScheme,
    nb: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_scheme(sample, scheme)?;
    let design = Design::new(sample, basis);
    let n = sample.n() as f64;
    let sums: Vec<f64> = design.empirical_means().iter().map(|m| m * n).collect();
    let mut weights = vec![0.0; sample.n()];
    let mut scratch = vec![0.0; design.dim()];
    Ok((0..nb)
        .map(|_| {
            scheme.sample_into(rng, &mut weights);
            resampled_statistic(&design, &sums, &weights, scheme.c_w(), &mut scratch)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    /// Estimated standard error of `mean`.
    pub std_error: f64,
    pub draws: usize,
}

/// Monte Carlo approximation of `p_W(S_m)` with `nb` weight draws.
pub fn pw_monte_carlo<R: Rng + ?Sized>(
    sample: &Sample,
    model: &Model,
    scheme: &WeightScheme,
    nb: usize,
    rng: &mut R,
) -> Result<MonteCarloEstimate> {
    if nb == 0 {
        return Err(crate::error::invalid("nb", "need at least one resampling draw"));
    }
    let stats = resampled_statistics(sample, model, scheme, nb, rng)?;
    // Welford
    let (mut mean, mut m2) = (0.0, 0.0);
    for (k, &x) in stats.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (x - mean);
    }
    let std_error = if nb > 1 {
        (m2 / (nb - 1) as f64 / nb as f64).sqrt()
    } else {
        f64::NAN
    };
    Ok(MonteCarloEstimate {
        mean,
        std_error,
        draws: nb,
    })
}

/// `p_W(S_m)` as an exact expectation over the enumerated weight law.
pub fn pw_exact_enum(sample: &Sample, model: &Model, scheme: &WeightScheme) -> Result<f64> {
    check_scheme(sample, scheme)?;
    let support = scheme.enumerate()?;
    let n = sample.n();
    let values: Vec<Vec<f64>> = sample.points().iter().map(|&x| model.values(x)).collect();
    let mut expectation = CompensatedSum::new();
    for (w, p) in &support {
        let w_mean = csum(w.iter().copied()) / n as f64;
        let stat = csum((0..model.dim()).map(|l| {
            let inner = csum((0..n).map(|i| (w[i] - w_mean) * values[i][l])) / n as f64;
            inner * inner
        }));
        expectation.add(p * stat);
    }
    Ok(scheme.c_w() * expectation.value())
}

/// Order-2 U-statistic estimating `||s_top - s_sub||^2`. May be negative.
pub fn pb(sample: &Sample, sub: &Model, top: &Model) -> Result<f64> {
    if !sub.is_nested_in(top) {
        return Err(Error::NotNested {
            sub: sub.id(),
            top: top.id(),
        });
    }
    if sub.dim() == top.dim() {
        return Ok(0.0);
    }
    let nested = NestedBasis::from_chain(&[sub.clone(), top.clone()])?;
    Ok(pb_on(&Design::new(sample, &nested), sub.dim()))
}

/// `p_b` from a design on a nested basis, over indices `sub_dim..`.
pub fn pb_nested(sample: &Sample, nested: &NestedBasis, sub_dim: usize) -> f64 {
    pb_on(&Design::new(sample, nested), sub_dim)
}

pub(crate) fn pb_on(design: &Design, sub_dim: usize) -> f64 {
    let n = design.n() as f64;
    let (sums, squares, _) = design.column_stats();
    let total = csum(
        sums.iter()
            .zip(&squares)
            .skip(sub_dim)
            .map(|(s, q)| s.value().powi(2) - q.value()),
    );
    total / (n * (n - 1.0))
}

/// Per basis index of a design: the `p_W` and `p_b` summands, both already
/// divided by `n (n - 1)`. Summing a prefix gives `p_W` of the model spanned
/// by that prefix; summing the matching suffix gives its `p_b`.
pub(crate) fn index_terms(design: &Design) -> (Vec<f64>, Vec<f64>) {
    let n = design.n() as f64;
    let scale = n * (n - 1.0);
    let means = design.empirical_means();
    let mut centered = vec![CompensatedSum::new(); design.dim()];
    let (sums, squares, counts) = design.column_stats();
    for &(l, v) in &design.entries {
        centered[l].add((v - means[l]).powi(2));
    }
    let pw = centered
        .iter()
        .zip(&counts)
        .zip(&means)
        .map(|((s, &k), m)| (s.value() + (design.n() - k) as f64 * m * m) / scale)
        .collect();
    let pb = sums
        .iter()
        .zip(&squares)
        .map(|(s, q)| (s.value().powi(2) - q.value()) / scale)
        .collect();
    (pw, pb)
}

fn exact_coefficients(model: &Model, oracle: &DensityOracle) -> Vec<f64> {
    oracle.true_coefficients(model)
}

/// Centered degenerate U-statistic
/// `sum_{i != j} sum_lambda (psi(X_i) - P_s psi)(psi(X_j) - P_s psi) / (n (n - 1))`.
pub fn u_stat(sample: &Sample, model: &Model, oracle: &DensityOracle) -> f64 {
    let design = Design::new(sample, model);
    let n = design.n() as f64;
    let truth = exact_coefficients(model, oracle);
    let means = design.empirical_means();
    let cross = csum(means.iter().zip(&truth).map(|(m, t)| (n * (m - t)).powi(2)));
    let diagonal = design.centered_square_sum(&truth);
    (cross - diagonal) / (n * (n - 1.0))
}

/// Variance term `||s_m - ŝ_m||^2 = sum_lambda (P_n psi - P_s psi)^2`.
pub fn dist_true_sq(sample: &Sample, model: &Model, oracle: &DensityOracle) -> f64 {
    let truth = exact_coefficients(model, oracle);
    let means = empirical_coefficients(sample, model);
    csum(means.iter().zip(&truth).map(|(m, t)| (m - t).powi(2)))
}

/// Centered second-order quantities of a model under a known density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `D = sum_lambda P_s (psi_lambda - P_s psi_lambda)^2`.
    pub d: f64,
    /// `v^2 = sup_{||t|| <= 1} Var_s(t(X))`, the top eigenvalue of the
    /// covariance matrix of the basis.
    pub v_sq: f64,
    /// `b^2 = sup_x sum_lambda psi_lambda(x)^2` over a 4097-point grid.
    pub b_sq: f64,
}

pub fn diagnostics(model: &Model, oracle: &DensityOracle) -> Diagnostics {
    let dim = model.dim();
    let max_frequency = match model.kind() {
        ModelKind::Fourier { cutoff } => 2 * cutoff,
        _ => 0,
    };
    let rule = oracle.quadrature(model.pieces(), max_frequency);
    let mut gram = DMatrix::<f64>::zeros(dim, dim);
    let mut buf = Vec::new();
    for &(x, w) in &rule {
        buf.clear();
        model.nonzeros(x, &mut buf);
        for &(a, va) in &buf {
            for &(b, vb) in &buf {
                gram[(a, b)] += w * va * vb;
            }
        }
    }
    let truth = exact_coefficients(model, oracle);
    let d = csum((0..dim).map(|l| gram[(l, l)] - truth[l] * truth[l]));
    let cov = DMatrix::from_fn(dim, dim, |a, b| gram[(a, b)] - truth[a] * truth[b]);
    let v_sq = SymmetricEigen::new(cov).eigenvalues.max().max(0.0);
    const GRID: usize = 4096;
    let b_sq = (0..=GRID)
        .map(|i| {
            buf.clear();
            model.nonzeros(i as f64 / GRID as f64, &mut buf);
            buf.iter().map(|(_, v)| v * v).sum::<f64>()
        })
        .fold(0.0, f64::max);
    Diagnostics { d, v_sq, b_sq }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::weights::WeightKind;
    use std::f64::consts::SQRT_2;

    fn sample(points: &[f64]) -> Sample {
        Sample::new(points.to_vec()).unwrap()
    }

    fn efron(n: usize) -> WeightScheme {
        WeightScheme::new(WeightKind::EfronMultinomial, n).unwrap()
    }

    #[test]
    fn sample_validation() {
        assert_eq!(Sample::new(vec![0.5]), Err(Error::SampleTooSmall(1)));
        assert_eq!(Sample::new(vec![0.5, 1.5]), Err(Error::OutOfDomain(1.5)));
        assert!(Sample::new(vec![0.0, 1.0]).is_ok());
    }

    #[test]
    fn projection_examples() {
        let s = sample(&[0.1, 0.2, 0.3, 0.7]);
        let est = project(&s, &Model::histogram(2).unwrap());
        assert!((est.coefficients[0] - 3.0 * SQRT_2 / 4.0).abs() < 1e-15);
        assert!((est.coefficients[1] - SQRT_2 / 4.0).abs() < 1e-15);
        // density values on each half
        assert!((est.coefficients[0] * SQRT_2 - 1.5).abs() < 1e-15);
        assert!((est.coefficients[1] * SQRT_2 - 0.5).abs() < 1e-15);

        let any = sample(&[0.13, 0.58, 0.91]);
        assert_eq!(project(&any, &Model::fourier(0)).coefficients, vec![1.0]);

        let sym = sample(&[0.1, 0.9, 0.3, 0.7]);
        let est = project(&sym, &Model::fourier(1));
        assert!(est.coefficients[2].abs() < 1e-15);
    }

    /// The estimate minimizes `||t||^2 - 2 P_n t`; compare with a brute-force
    /// grid search over coefficient vectors.
    #[test]
    fn projection_minimizes_contrast() {
        let s = sample(&[0.1, 0.2, 0.3, 0.7]);
        let model = Model::histogram(2).unwrap();
        let design = Design::new(&s, &model);
        let contrast = |a: [f64; 2]| {
            let pn: f64 = (0..4)
                .map(|i| design.row(i).iter().map(|&(l, v)| a[l] * v).sum::<f64>())
                .sum::<f64>()
                / 4.0;
            a[0] * a[0] + a[1] * a[1] - 2.0 * pn
        };
        let mut best = (f64::INFINITY, [0.0; 2]);
        for i in 0..=400 {
            for j in 0..=400 {
                let a = [i as f64 * 0.005, j as f64 * 0.005];
                let c = contrast(a);
                if c < best.0 {
                    best = (c, a);
                }
            }
        }
        let est = project(&s, &model).coefficients;
        assert!((best.1[0] - est[0]).abs() <= 0.005);
        assert!((best.1[1] - est[1]).abs() <= 0.005);
        assert!(contrast([est[0], est[1]]) <= best.0 + 1e-12);
    }

    #[test]
    fn pw_examples() {
        let h2 = Model::histogram(2).unwrap();
        let flat = sample(&[0.4, 0.4, 0.4]);
        assert_eq!(pw_closed_form(&flat, &h2, &efron(3)).unwrap(), 0.0);

        // deviations +-sqrt2/2 in both cells: sum of squares 2, divided by n(n-1) = 2
        let s = sample(&[0.25, 0.75]);
        let closed = pw_closed_form(&s, &h2, &efron(2)).unwrap();
        assert!((closed - 1.0).abs() < 1e-15);
        let exact = pw_exact_enum(&s, &h2, &efron(2)).unwrap();
        assert!((exact - 1.0).abs() < 1e-15);

        assert!(matches!(
            pw_closed_form(&s, &h2, &efron(3)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn exact_enumeration_matches_closed_form() {
        let s = sample(&[0.05, 0.33, 0.61]);
        let f = Model::fourier(2);
        let closed = pw_closed_form(&s, &f, &efron(3)).unwrap();
        assert!((pw_exact_enum(&s, &f, &efron(3)).unwrap() - closed).abs() < 1e-12);

        let s = sample(&[0.05, 0.33, 0.61, 0.62]);
        let rad = WeightScheme::new(WeightKind::RademacherIid, 4).unwrap();
        let pp = Model::piecewise_polynomial(2, 2).unwrap();
        let closed = pw_closed_form(&s, &pp, &rad).unwrap();
        assert!((pw_exact_enum(&s, &pp, &rad).unwrap() - closed).abs() < 1e-12);

        let flat = sample(&[0.2, 0.2, 0.2, 0.2]);
        assert!(pw_exact_enum(&flat, &pp, &rad).unwrap().abs() < 1e-25);
        let big = Sample::new(vec![0.5; 9]).unwrap();
        assert!(pw_exact_enum(&big, &pp, &efron(9)).is_err());
    }

    #[test]
    fn monte_carlo_degenerate_cases() {
        let flat = sample(&[0.3; 6]);
        let h4 = Model::histogram(4).unwrap();
        let mut rng = stream_rng(1, 0);
        let est = pw_monte_carlo(&flat, &h4, &efron(6), 50, &mut rng).unwrap();
        assert_eq!(est.mean, 0.0);

        // all-ones Efron draw reproduces P_n
        let s = sample(&[0.1, 0.4, 0.8]);
        let design = Design::new(&s, &h4);
        let sums: Vec<f64> = design.empirical_means().iter().map(|m| 3.0 * m).collect();
        let mut scratch = vec![0.0; 4];
        let stat = resampled_statistic(&design, &sums, &[1.0, 1.0, 1.0], 1.5, &mut scratch);
        assert!(stat.abs() < 1e-15);
        assert!(pw_monte_carlo(&s, &h4, &efron(3), 0, &mut rng).is_err());
    }

    #[test]
    fn monte_carlo_converges_to_closed_form() {
        let oracle = DensityOracle::uniform();
        let mut rng = stream_rng(2, 0);
        let s = oracle.sample(20, &mut rng).unwrap();
        let h4 = Model::histogram(4).unwrap();
        let closed = pw_closed_form(&s, &h4, &efron(20)).unwrap();
        let mc = pw_monte_carlo(&s, &h4, &efron(20), 100_000, &mut rng).unwrap();
        assert!((mc.mean - closed).abs() < 3.0 * mc.std_error, "{mc:?} vs {closed}");
    }

    #[test]
    fn pb_examples() {
        let s = sample(&[0.25, 0.75]);
        let h1 = Model::histogram(1).unwrap();
        let h2 = Model::histogram(2).unwrap();
        assert_eq!(pb(&s, &h2, &h2).unwrap(), 0.0);
        assert!((pb(&s, &h1, &h2).unwrap() + 1.0).abs() < 1e-15);
        let h3 = Model::histogram(3).unwrap();
        assert!(matches!(pb(&s, &h2, &h3), Err(Error::NotNested { .. })));
        assert!(pb(&s, &h2, &h1).is_err());
    }

    /// Naive double loop through the projection kernels of the two models'
    /// own bases: `K_top(x, y) - K_sub(x, y)`.
    fn pb_naive(s: &Sample, sub: &Model, top: &Model) -> f64 {
        let n = s.n();
        let vt: Vec<Vec<f64>> = s.points().iter().map(|&x| top.values(x)).collect();
        let vs: Vec<Vec<f64>> = s.points().iter().map(|&x| sub.values(x)).collect();
        let mut total = CompensatedSum::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let kt: f64 = vt[i].iter().zip(&vt[j]).map(|(a, b)| a * b).sum();
                    let ks: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
                    total.add(kt - ks);
                }
            }
        }
        total.value() / (n * (n - 1)) as f64
    }

    #[test]
    fn pb_matches_naive_double_loop() {
        let oracle = DensityOracle::cosine_tilt(0.4, 2).unwrap();
        let pairs = [
            (Model::histogram(2).unwrap(), Model::histogram(16).unwrap()),
            (Model::fourier(1), Model::fourier(5)),
            (
                Model::piecewise_polynomial(2, 3).unwrap(),
                Model::piecewise_polynomial(6, 3).unwrap(),
            ),
        ];
        for (k, n) in [2usize, 7, 60, 200].into_iter().enumerate() {
            let s = oracle.sample(n, &mut stream_rng(9, k as u64)).unwrap();
            for (sub, top) in &pairs {
                let fast = pb(&s, sub, top).unwrap();
                let naive = pb_naive(&s, sub, top);
                assert!((fast - naive).abs() <= 1e-10 * (1.0 + naive.abs()), "{fast} vs {naive}");
            }
        }
    }

    #[test]
    fn u_stat_two_points() {
        let oracle = DensityOracle::histogram(vec![1.5, 0.5]).unwrap();
        let f = Model::fourier(2);
        let s = sample(&[0.2, 0.65]);
        let truth = oracle.true_coefficients(&f);
        let (a, b) = (f.values(0.2), f.values(0.65));
        let expect: f64 = (0..f.dim()).map(|l| (a[l] - truth[l]) * (b[l] - truth[l])).sum();
        assert!((u_stat(&s, &f, &oracle) - expect).abs() < 1e-14);
    }

    #[test]
    fn hoeffding_identity_small() {
        let oracle = DensityOracle::cosine_tilt(0.2, 1).unwrap();
        let mut rng = stream_rng(3, 0);
        for n in [2, 5, 30] {
            let s = oracle.sample(n, &mut rng).unwrap();
            for model in [Model::histogram(8).unwrap(), Model::fourier(3)] {
                let dist = dist_true_sq(&s, &model, &oracle);
                let pw = pw_closed_form(&s, &model, &efron(n)).unwrap();
                let u = u_stat(&s, &model, &oracle);
                assert!((dist - pw - u).abs() <= 1e-10 * (1.0 + dist));
            }
        }
    }

    #[test]
    fn dist_true_sq_zero_when_empirical_matches() {
        // two points, one per cell, uniform truth: empirical coefficients are exact
        let s = sample(&[0.25, 0.75]);
        let d = dist_true_sq(&s, &Model::histogram(2).unwrap(), &DensityOracle::uniform());
        assert!(d.abs() < 1e-30);
    }

    #[test]
    fn diagnostics_for_uniform_histogram() {
        // uniform: Var(psi_k) = 1 - 1/m, covariance of the cell indicators has
        // top eigenvalue 1 (any contrast orthogonal to constants)
        let m = 8;
        let diag = diagnostics(&Model::histogram(m).unwrap(), &DensityOracle::uniform());
        assert!((diag.d - (m as f64 - 1.0)).abs() < 1e-12);
        assert!((diag.v_sq - 1.0).abs() < 1e-12);
        assert!((diag.b_sq - m as f64).abs() < 1e-12);
    }
}
