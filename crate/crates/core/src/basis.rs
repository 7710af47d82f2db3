//! Orthonormal function systems on `[0, 1]` and nested model collections.
//!
//! Three families are supported:
//!
//! * regular histograms with `m` cells, `psi_k = sqrt(m) 1_[k/m, (k+1)/m)`;
//! * trigonometric spaces with frequency cutoff `J`, ordered
//!   `1, sqrt2 cos(2 pi x), sqrt2 sin(2 pi x), sqrt2 cos(4 pi x), ...`;
//! * piecewise polynomials with `J` pieces and `r` orthonormal shifted
//!   Legendre polynomials (degrees `0..r`) on each piece.
//!
//! A [`Model`] evaluates its own ("native") basis. A [`ModelCollection`] also
//! carries a [`NestedBasis`] of its top model whose first `d_m` functions span
//! every member `S_m`; bias statistics and ball coordinates use that one.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, shifted_legendre};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Histogram,
    Fourier,
    PiecewisePolynomial,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Histogram => "histogram",
            Family::Fourier => "fourier",
            Family::PiecewisePolynomial => "piecewise-polynomial",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    Histogram { cells: usize },
    Fourier { cutoff: usize },
    PiecewisePolynomial { pieces: usize, degree_bound: usize },
}

/// Anything that can enumerate the basis functions that are nonzero at a point.
pub trait Basis {
    fn dim(&self) -> usize;

    /// Appends `(index, psi_index(x))` for every basis function that can be
    /// nonzero at `x`. `x` must already be known to lie in `[0, 1]`.
    fn nonzeros(&self, x: f64, out: &mut Vec<(usize, f64)>);

    fn eval(&self, index: usize, x: f64) -> Result<f64> {
        if index >= self.dim() {
            return Err(Error::IndexOutOfRange { index, dim: self.dim() });
        }
        check_point(x)?;
        let mut buf = Vec::new();
        self.nonzeros(x, &mut buf);
        Ok(buf.iter().find(|(i, _)| *i == index).map_or(0.0, |&(_, v)| v))
    }

    /// Dense vector of all basis values at `x`.
    fn values(&self, x: f64) -> Vec<f64> {
        let mut dense = vec![0.0; self.dim()];
        let mut buf = Vec::new();
        self.nonzeros(x, &mut buf);
        for (i, v) in buf {
            dense[i] = v;
        }
        dense
    }
}

pub(crate) fn check_point(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(x))
    }
}

/// Cell index and local coordinate of `x` in the regular partition of
/// `[0, 1]` into `pieces` intervals. The last interval is closed at 1.
#[inline]
pub(crate) fn locate(x: f64, pieces: usize) -> (usize, f64) {
    let scaled = x * pieces as f64;
    let cell = (scaled.floor() as usize).min(pieces - 1);
    let u = (scaled - cell as f64).clamp(0.0, 1.0);
    (cell, u)
}

/// One finite-dimensional linear space `S_m` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    kind: ModelKind,
    c1: f64,
}

impl Model {
    pub fn histogram(cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::InvalidModel("histogram needs at least one cell".into()));
        }
        Ok(Self {
            kind: ModelKind::Histogram { cells },
            c1: 1.0,
        })
    }

    /// Trigonometric space with frequencies `1..=cutoff`, of dimension `2 * cutoff + 1`.
    pub fn fourier(cutoff: usize) -> Self {
        Self {
            kind: ModelKind::Fourier { cutoff },
            c1: 1.0,
        }
    }

    /// Trigonometric space of the given (odd) dimension.
    pub fn fourier_with_dim(dim: usize) -> Result<Self> {
        if dim.is_multiple_of(2) {
            return Err(Error::InvalidModel(format!(
                "trigonometric spaces have odd dimension 2J + 1, got {dim}"
            )));
        }
        Ok(Self::fourier(dim / 2))
    }

    pub fn piecewise_polynomial(pieces: usize, degree_bound: usize) -> Result<Self> {
        if pieces == 0 || degree_bound == 0 {
            return Err(Error::InvalidModel(
                "piecewise polynomials need at least one piece and degree bound r >= 1".into(),
            ));
        }
        Ok(Self {
            kind: ModelKind::PiecewisePolynomial { pieces, degree_bound },
            c1: piecewise_sup_constant(degree_bound),
        })
    }

    /// Builds the model of `family` with dimension `dim` (and degree bound
    /// `degree_bound` for piecewise polynomials).
    pub fn with_dim(family: Family, dim: usize, degree_bound: usize) -> Result<Self> {
        match family {
            Family::Histogram => Self::histogram(dim),
            Family::Fourier => Self::fourier_with_dim(dim),
            Family::PiecewisePolynomial => {
                if degree_bound == 0 || !dim.is_multiple_of(degree_bound) {
                    return Err(Error::InvalidModel(format!(
                        "dimension {dim} is not a multiple of the degree bound {degree_bound}"
                    )));
                }
                Self::piecewise_polynomial(dim / degree_bound, degree_bound)
            }
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn family(&self) -> Family {
        match self.kind {
            ModelKind::Histogram { .. } => Family::Histogram,
            ModelKind::Fourier { .. } => Family::Fourier,
            ModelKind::PiecewisePolynomial { .. } => Family::PiecewisePolynomial,
        }
    }

    /// `C_1` with `||t||_inf <= C_1 sqrt(d) ||t||` on this model.
    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// Stable identifier derived from the family parameters.
    pub fn id(&self) -> String {
        match self.kind {
            ModelKind::Histogram { cells } => format!("hist-{cells}"),
            ModelKind::Fourier { cutoff } => format!("fourier-{cutoff}"),
            ModelKind::PiecewisePolynomial { pieces, degree_bound } => format!("pp-{pieces}x{degree_bound}"),
        }
    }

    /// Number of pieces of the underlying regular partition (1 for Fourier).
    pub(crate) fn pieces(&self) -> usize {
        match self.kind {
            ModelKind::Histogram { cells } => cells,
            ModelKind::Fourier { .. } => 1,
            ModelKind::PiecewisePolynomial { pieces, .. } => pieces,
        }
    }

    pub(crate) fn degree_bound(&self) -> usize {
        match self.kind {
            ModelKind::Histogram { .. } => 1,
            ModelKind::Fourier { .. } => 0,
            ModelKind::PiecewisePolynomial { degree_bound, .. } => degree_bound,
        }
    }

    /// True when `self` is a subspace of `other` and the two live in one
    /// family (so a nested basis exists).
    pub fn is_nested_in(&self, other: &Model) -> bool {
        match (self.kind, other.kind) {
            (ModelKind::Histogram { cells: a }, ModelKind::Histogram { cells: b }) => b % a == 0,
            (ModelKind::Fourier { cutoff: a }, ModelKind::Fourier { cutoff: b }) => a <= b,
            (
                ModelKind::PiecewisePolynomial {
                    pieces: a,
                    degree_bound: ra,
                },
                ModelKind::PiecewisePolynomial {
                    pieces: b,
                    degree_bound: rb,
                },
            ) => ra == rb && b % a == 0,
            _ => false,
        }
    }
}

impl Basis for Model {
    fn dim(&self) -> usize {
        match self.kind {
            ModelKind::Histogram { cells } => cells,
            ModelKind::Fourier { cutoff } => 2 * cutoff + 1,
            ModelKind::PiecewisePolynomial { pieces, degree_bound } => pieces * degree_bound,
        }
    }

    fn nonzeros(&self, x: f64, out: &mut Vec<(usize, f64)>) {
        match self.kind {
            ModelKind::Histogram { cells } => {
                let (cell, _) = locate(x, cells);
                out.push((cell, (cells as f64).sqrt()));
            }
            ModelKind::Fourier { cutoff } => {
                out.push((0, 1.0));
                for j in 1..=cutoff {
                    let (s, c) = (2.0 * PI * j as f64 * x).sin_cos();
                    out.push((2 * j - 1, SQRT_2 * c));
                    out.push((2 * j, SQRT_2 * s));
                }
            }
            ModelKind::PiecewisePolynomial { pieces, degree_bound } => {
                let (piece, u) = locate(x, pieces);
                let scale = (pieces as f64).sqrt();
                let mut vals = [0.0; MAX_STACK_DEGREE];
                let mut heap;
                let vals: &mut [f64] = if degree_bound <= MAX_STACK_DEGREE {
                    &mut vals[..degree_bound]
                } else {
                    heap = vec![0.0; degree_bound];
                    &mut heap
                };
                shifted_legendre(u, vals);
                for (k, v) in vals.iter().enumerate() {
                    out.push((piece * degree_bound + k, scale * v));
                }
            }
        }
    }
}

const MAX_STACK_DEGREE: usize = 16;

/// `sup_u sqrt(sum_k l_k(u)^2 / r)` over the reference piece, computed on a
/// grid including both endpoints.
fn piecewise_sup_constant(degree_bound: usize) -> f64 {
    let mut vals = vec![0.0; degree_bound];
    let mut best: f64 = 0.0;
    let grid = 1024;
    for i in 0..=grid {
        shifted_legendre(i as f64 / grid as f64, &mut vals);
        best = best.max(vals.iter().map(|v| v * v).sum::<f64>());
    }
    (best / degree_bound as f64).sqrt()
}

/// One native piecewise-polynomial basis function `sqrt(J) l_k(J x - p)` on
/// piece `p` of the `J`-piece partition, with a weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PieceTerm {
    pub pieces: usize,
    pub piece: usize,
    pub degree: usize,
    pub weight: f64,
}

/// How a nested basis function decomposes into native functions.
#[derive(Debug, Clone, PartialEq)]
pub enum NestedTerms {
    /// The function is native Fourier function `index`.
    Fourier(usize),
    /// The function is a weighted sum of native piecewise functions.
    Pieces(Vec<PieceTerm>),
}

#[derive(Debug, Clone, PartialEq)]
struct Refinement {
    coarse: usize,
    fine: usize,
    offset: usize,
    /// Row-major `((q - 1) r) x (q r)`: each row gives one complement function
    /// on the reference coarse cell in the orthonormal basis of its `q`
    /// sub-pieces.
    rows: Vec<f64>,
}

impl Refinement {
    fn ratio(&self) -> usize {
        self.fine / self.coarse
    }
}

#[derive(Debug, Clone, PartialEq)]
enum NestedKind {
    Fourier {
        cutoff: usize,
    },
    Piecewise {
        degree_bound: usize,
        base_pieces: usize,
        refinements: Vec<Refinement>,
    },
}

/// Orthonormal basis of a top model whose first `d_m` functions span each
/// model of a chain `S_1 ⊂ S_2 ⊂ ... ⊂ S_top`.
///
/// For trigonometric chains it coincides with the native basis. For
/// histograms and piecewise polynomials it is multiresolution: the native
/// basis of the coarsest model, then for each refinement the orthogonal
/// complement of the coarse cell's polynomials inside its sub-pieces
/// (Haar functions for dyadic histograms).
#[derive(Debug, Clone, PartialEq)]
pub struct NestedBasis {
    kind: NestedKind,
    dims: Vec<usize>,
}

impl NestedBasis {
    /// Builds the nested basis for a chain of models ordered by inclusion.
    pub fn from_chain(chain: &[Model]) -> Result<Self> {
        let first = chain
            .first()
            .ok_or_else(|| Error::InvalidCollection("empty chain".into()))?;
        for pair in chain.windows(2) {
            if !pair[0].is_nested_in(&pair[1]) || pair[0].dim() >= pair[1].dim() {
                return Err(Error::NotNested {
                    sub: pair[0].id(),
                    top: pair[1].id(),
                });
            }
        }
        let dims: Vec<usize> = chain.iter().map(Basis::dim).collect();
        let kind = match first.kind {
            ModelKind::Fourier { .. } => NestedKind::Fourier {
                cutoff: (dims[dims.len() - 1] - 1) / 2,
            },
            _ => {
                let degree_bound = first.degree_bound();
                let mut refinements = Vec::with_capacity(chain.len() - 1);
                let mut offset = first.dim();
                for pair in chain.windows(2) {
                    let coarse = pair[0].pieces();
                    let fine = pair[1].pieces();
                    let rows = complement_rows(fine / coarse, degree_bound);
                    refinements.push(Refinement {
                        coarse,
                        fine,
                        offset,
                        rows,
                    });
                    offset = pair[1].dim();
                }
                NestedKind::Piecewise {
                    degree_bound,
                    base_pieces: first.pieces(),
                    refinements,
                }
            }
        };
        Ok(Self { kind, dims })
    }

    /// Dimensions of the chain this basis was built for.
    pub fn chain_dims(&self) -> &[usize] {
        &self.dims
    }

    /// Expresses nested function `index` in native basis functions.
    pub fn terms(&self, index: usize) -> Result<NestedTerms> {
        if index >= self.dim() {
            return Err(Error::IndexOutOfRange { index, dim: self.dim() });
        }
        match &self.kind {
            NestedKind::Fourier { .. } => Ok(NestedTerms::Fourier(index)),
            NestedKind::Piecewise {
                degree_bound,
                base_pieces,
                refinements,
            } => {
                let r = *degree_bound;
                let base_dim = base_pieces * r;
                if index < base_dim {
                    return Ok(NestedTerms::Pieces(vec![PieceTerm {
                        pieces: *base_pieces,
                        piece: index / r,
                        degree: index % r,
                        weight: 1.0,
                    }]));
                }
                let level = refinements
                    .iter()
                    .rev()
                    .find(|lvl| lvl.offset <= index)
                    .expect("index below top dimension lies in some level");
                let q = level.ratio();
                let per_cell = (q - 1) * r;
                let local = index - level.offset;
                let (cell, row) = (local / per_cell, local % per_cell);
                let coeffs = &level.rows[row * q * r..(row + 1) * q * r];
                let terms = (0..q * r)
                    .filter(|&j| coeffs[j] != 0.0)
                    .map(|j| PieceTerm {
                        pieces: level.fine,
                        piece: cell * q + j / r,
                        degree: j % r,
                        weight: coeffs[j],
                    })
                    .collect();
                Ok(NestedTerms::Pieces(terms))
            }
        }
    }
}

impl Basis for NestedBasis {
    fn dim(&self) -> usize {
        self.dims[self.dims.len() - 1]
    }

    fn nonzeros(&self, x: f64, out: &mut Vec<(usize, f64)>) {
        match &self.kind {
            NestedKind::Fourier { cutoff } => Model::fourier(*cutoff).nonzeros(x, out),
            NestedKind::Piecewise {
                degree_bound,
                base_pieces,
                refinements,
            } => {
                let r = *degree_bound;
                let mut vals = vec![0.0; r];
                let (piece, u) = locate(x, *base_pieces);
                shifted_legendre(u, &mut vals);
                let scale = (*base_pieces as f64).sqrt();
                for (k, v) in vals.iter().enumerate() {
                    out.push((piece * r + k, scale * v));
                }
                for level in refinements {
                    let q = level.ratio();
                    let (fine_piece, u) = locate(x, level.fine);
                    let (cell, sub) = (fine_piece / q, fine_piece % q);
                    shifted_legendre(u, &mut vals);
                    let scale = (level.fine as f64).sqrt();
                    let per_cell = (q - 1) * r;
                    for row in 0..per_cell {
                        let coeffs = &level.rows[row * q * r + sub * r..row * q * r + sub * r + r];
                        let v: f64 = coeffs.iter().zip(&vals).map(|(c, l)| c * l).sum();
                        out.push((level.offset + cell * per_cell + row, scale * v));
                    }
                }
            }
        }
    }
}

/// Orthonormal complement of the `r` polynomials on `[0, 1]` inside the
/// `q * r` dimensional space of piecewise polynomials on its `q` sub-pieces,
/// in the sub-pieces' orthonormal coordinates.
fn complement_rows(q: usize, r: usize) -> Vec<f64> {
    let width = q * r;
    let rule = gauss_legendre(r + 1);
    let mut coarse_vals = vec![0.0; r];
    let mut fine_vals = vec![0.0; r];
    // Coarse polynomials in fine coordinates: int l_k(x) sqrt(q) l_k'(q x - s) dx.
    let mut span: Vec<Vec<f64>> = (0..r).map(|_| vec![0.0; width]).collect();
    for s in 0..q {
        for &(u, w) in &rule {
            shifted_legendre((s as f64 + u) / q as f64, &mut coarse_vals);
            shifted_legendre(u, &mut fine_vals);
            for (k, row) in span.iter_mut().enumerate() {
                for kp in 0..r {
                    row[s * r + kp] += w * coarse_vals[k] * fine_vals[kp] / (q as f64).sqrt();
                }
            }
        }
    }
    let mut accepted: Vec<Vec<f64>> = Vec::with_capacity(width);
    for v in span {
        if let Some(u) = orthonormalize(v, &accepted) {
            accepted.push(u);
        }
    }
    let mut rows = Vec::with_capacity((q - 1) * r * width);
    for j in 0..width {
        if accepted.len() == width {
            break;
        }
        let mut e = vec![0.0; width];
        e[j] = 1.0;
        if let Some(u) = orthonormalize(e, &accepted) {
            rows.extend_from_slice(&u);
            accepted.push(u);
        }
    }
    debug_assert_eq!(rows.len(), (q - 1) * r * width);
    for v in rows.iter_mut() {
        if v.abs() < 1e-15 {
            *v = 0.0;
        }
    }
    rows
}

/// Two-pass Gram-Schmidt of `v` against orthonormal `basis`.
fn orthonormalize(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    for _ in 0..2 {
        for b in basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-8 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Some(v)
}

/// A nested family `(S_m)` of models with a spanning top model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelCollection {
    models: Vec<Model>,
    c_m: f64,
    nested: NestedBasis,
}

impl ModelCollection {
    /// Sorts `models` by dimension and checks that they form a chain, so the
    /// largest one spans all the others.
    pub fn new(mut models: Vec<Model>, c_m: f64) -> Result<Self> {
        if models.is_empty() {
            return Err(Error::InvalidCollection("no models".into()));
        }
        if !(c_m > 0.0 && c_m.is_finite()) {
            return Err(Error::InvalidCollection(format!("C_M must be positive, got {c_m}")));
        }
        let family = models[0].family();
        if models.iter().any(|m| m.family() != family) {
            return Err(Error::InvalidCollection("models from different families".into()));
        }
        models.sort_by_key(Basis::dim);
        if models.windows(2).any(|w| w[0].dim() == w[1].dim()) {
            return Err(Error::InvalidCollection("duplicate model dimension".into()));
        }
        let nested = NestedBasis::from_chain(&models).map_err(|e| match e {
            Error::NotNested { sub, top } => Error::InvalidCollection(format!(
                "{sub} is not contained in {top}; dimensions must form a divisor chain"
            )),
            other => other,
        })?;
        Ok(Self { models, c_m, nested })
    }

    /// Collection of one family given by model dimensions.
    pub fn from_dims(family: Family, dims: &[usize], degree_bound: usize, c_m: f64) -> Result<Self> {
        let models = dims
            .iter()
            .map(|&d| Model::with_dim(family, d, degree_bound))
            .collect::<Result<Vec<_>>>()?;
        Self::new(models, c_m)
    }

    pub fn models(&self) -> &[Model] {
        &self.models
    }

    pub fn top_index(&self) -> usize {
        self.models.len() - 1
    }

    pub fn top(&self) -> &Model {
        &self.models[self.top_index()]
    }

    /// `N_n`, the number of models.
    pub fn cardinality(&self) -> usize {
        self.models.len()
    }

    pub fn c_m(&self) -> f64 {
        self.c_m
    }

    /// Largest `C_1` over the models.
    pub fn c1(&self) -> f64 {
        self.models.iter().map(Model::c1).fold(0.0, f64::max)
    }

    pub fn family(&self) -> Family {
        self.models[0].family()
    }

    pub fn nested_basis(&self) -> &NestedBasis {
        &self.nested
    }

    pub fn position(&self, model: &Model) -> Option<usize> {
        self.models.iter().position(|m| m == model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H2Report {
    pub empirical_ratio: f64,
    pub c1: f64,
    pub holds: bool,
}

/// Random search for `sup |t(x)| / sqrt(d)` over unit-norm `t` in the model.
pub fn check_h2(model: &Model, trials: usize, seed: u64) -> H2Report {
    const GRID: usize = 2048;
    const TOL: f64 = 1e-9;
    let d = model.dim();
    let table: Vec<Vec<f64>> = (0..=GRID).map(|i| model.values(i as f64 / GRID as f64)).collect();
    let mut rng = stream_rng(seed, 0);
    let mut coeffs = vec![0.0; d];
    let mut best: f64 = 0.0;
    for _ in 0..trials.max(1) {
        for c in coeffs.iter_mut() {
            *c = rng.sample(StandardNormal);
        }
        let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        for row in &table {
            let t: f64 = row.iter().zip(&coeffs).map(|(p, a)| p * a).sum::<f64>() / norm;
            best = best.max(t.abs());
        }
    }
    let ratio = best / (d as f64).sqrt();
    H2Report {
        empirical_ratio: ratio,
        c1: model.c1(),
        holds: ratio <= model.c1() * (1.0 + TOL),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H3Report {
    pub lhs: f64,
    pub c_m: f64,
    pub holds: bool,
}

/// Evaluates `2 sqrt(d_top) ln(6 N / beta) / n <= C_M`.
pub fn check_h3(collection: &ModelCollection, n: usize, beta: f64) -> Result<H3Report> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(crate::error::invalid("beta", format!("must lie in (0, 1), got {beta}")));
    }
    if n < 2 {
        return Err(Error::SampleTooSmall(n));
    }
    let d_top = collection.top().dim() as f64;
    let lhs = 2.0 * d_top.sqrt() * (6.0 * collection.cardinality() as f64 / beta).ln() / n as f64;
    Ok(H3Report {
        lhs,
        c_m: collection.c_m(),
        holds: lhs <= collection.c_m(),
    })
}

/// Largest frequency cutoff used for Sobolev smoothness `gamma`:
/// `floor(min(n^(1 / (2 gamma + 1/2)), n^2 / ln(n)^2))`.
pub fn sobolev_cutoff(n: usize, gamma: f64) -> Result<usize> {
    if n < 3 {
        return Err(crate::error::invalid("n", format!("must be at least 3, got {n}")));
    }
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(crate::error::invalid("gamma", format!("must be positive, got {gamma}")));
    }
    let nf = n as f64;
    let rate = nf.powf(1.0 / (2.0 * gamma + 0.5));
    let cap = nf * nf / nf.ln().powi(2);
    // Guard against 100^0.4 style values landing a hair below an integer.
    let value = rate.min(cap);
    Ok(((value + 1e-12).floor() as usize).max(1))
}

/// Trigonometric collection `F_1 ⊂ ... ⊂ F_{d_n}` for Sobolev balls of
/// smoothness `gamma`, with `C_1 = 1` and `C_M = 4`.
pub fn fourier_sobolev_collection(n: usize, gamma: f64) -> Result<ModelCollection> {
    let top = sobolev_cutoff(n, gamma)?;
    ModelCollection::new((1..=top).map(Model::fourier).collect(), 4.0)
}

/// Parameters of a Sobolev-ball confidence set: the collection, the
/// residual radius `eta = M (d_n + 1)^(-gamma)` and the norm bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SobolevSetup {
    pub collection: ModelCollection,
    pub eta: f64,
    pub m2: f64,
    pub m_inf: f64,
}

/// For `gamma > 1/2` the sup-norm bound is `2 M sqrt(zeta(2 gamma))`; for
/// smaller `gamma` it must be supplied.
pub fn sobolev_setup(n: usize, gamma: f64, radius: f64, m_inf: Option<f64>) -> Result<SobolevSetup> {
    let collection = fourier_sobolev_collection(n, gamma)?;
    let cutoff = (collection.top().dim() - 1) / 2;
    let m_inf = match m_inf {
        Some(v) => v,
        None if gamma > 0.5 => 2.0 * radius * zeta(2.0 * gamma).sqrt(),
        None => {
            return Err(crate::error::invalid(
                "m_inf",
                "required when gamma <= 1/2 (the sup norm is not controlled)",
            ))
        }
    };
    Ok(SobolevSetup {
        collection,
        eta: radius * (cutoff as f64 + 1.0).powf(-gamma),
        m2: radius,
        m_inf,
    })
}

/// Riemann zeta for `s > 1` by Euler-Maclaurin after 64 explicit terms.
fn zeta(s: f64) -> f64 {
    let n = 64.0_f64;
    let head: f64 = (1..64).map(|i| (i as f64).powf(-s)).sum();
    head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0
}
