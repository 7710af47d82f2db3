use confball::basis::{Basis, Family, Model, ModelCollection, NestedBasis};
use confball::estimators::{diagnostics, dist_true_sq, pb, project, pw_closed_form, pw_exact_enum, u_stat, Sample};
use confball::quadrature::composite_rule;
use confball::{stream_rng, DensityOracle, WeightKind, WeightScheme};
use proptest::prelude::*;
use rand::Rng;

fn oracle_strategy() -> impl Strategy<Value = DensityOracle> {
    prop_oneof![
        Just(DensityOracle::uniform()),
        prop::collection::vec(0.0f64..3.0, 1..9).prop_filter_map("zero mass", |raw| {
            let mean = raw.iter().sum::<f64>() / raw.len() as f64;
            (mean > 1e-3).then(|| DensityOracle::histogram(raw.iter().map(|v| v / mean).collect()).unwrap())
        }),
        (-0.7f64..0.7, 1usize..6).prop_map(|(a, k)| DensityOracle::cosine_tilt(a, k).unwrap()),
    ]
}

fn model_strategy() -> impl Strategy<Value = Model> {
    prop_oneof![
        (1usize..=16).prop_map(|m| Model::histogram(m).unwrap()),
        (0usize..=7).prop_map(Model::fourier),
        (1usize..=5, 1usize..=3).prop_map(|(j, r)| Model::piecewise_polynomial(j, r).unwrap()),
    ]
}

fn efron(n: usize) -> WeightScheme {
    WeightScheme::new(WeightKind::EfronMultinomial, n).unwrap()
}

/// `int_0^1 f` for `f` smooth between the points `a / b`, `b <= 16`.
fn integrate(f: impl Fn(f64) -> f64) -> f64 {
    let mut cuts: Vec<f64> = (1..=16u32)
        .flat_map(|b| (0..=b).map(move |a| f64::from(a) / f64::from(b)))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    cuts.windows(2)
        .flat_map(|w| composite_rule(w[0], w[1], 2, 12))
        .map(|(x, w)| w * f(x))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn exact_enumeration_is_scheme_free(
        model in model_strategy(),
        points in prop::collection::vec(0.0f64..=1.0, 2..=6),
    ) {
        let n = points.len();
        let sample = Sample::new(points).unwrap();
        let closed = pw_closed_form(&sample, &model, &efron(n)).unwrap();
        let rad = WeightScheme::new(WeightKind::RademacherIid, n).unwrap();
        let e = pw_exact_enum(&sample, &model, &efron(n)).unwrap();
        let r = pw_exact_enum(&sample, &model, &rad).unwrap();
        prop_assert!((e - closed).abs() <= 1e-12 * (1.0 + closed));
        prop_assert!((r - closed).abs() <= 1e-12 * (1.0 + closed));
        prop_assert!(closed >= 0.0);
    }

    #[test]
    fn hoeffding_identity(
        oracle in oracle_strategy(),
        model in model_strategy(),
        n in 2usize..=60,
        seed in any::<u64>(),
    ) {
        let sample = oracle.sample(n, &mut stream_rng(seed, 0)).unwrap();
        let dist = dist_true_sq(&sample, &model, &oracle);
        let pw = pw_closed_form(&sample, &model, &efron(n)).unwrap();
        let u = u_stat(&sample, &model, &oracle);
        prop_assert!(dist >= 0.0);
        prop_assert!((dist - pw - u).abs() <= 1e-10 * (1.0 + dist));
    }

    /// `||s - ŝ_m||^2` by direct integration equals the sum of the residual,
    /// bias and variance terms.
    #[test]
    fn pythagoras(
        oracle in oracle_strategy(),
        sub in 0usize..3,
        top in 0usize..3,
        family in 0usize..3,
        n in 2usize..80,
        seed in any::<u64>(),
    ) {
        let (sub, top) = (sub.min(top), sub.max(top));
        let chain = match family {
            0 => [Model::histogram(2).unwrap(), Model::histogram(4).unwrap(), Model::histogram(12).unwrap()],
            1 => [Model::fourier(1), Model::fourier(3), Model::fourier(6)],
            _ => [
                Model::piecewise_polynomial(1, 2).unwrap(),
                Model::piecewise_polynomial(3, 2).unwrap(),
                Model::piecewise_polynomial(6, 2).unwrap(),
            ],
        };
        let (m, top) = (&chain[sub], &chain[top]);
        let sample = oracle.sample(n, &mut stream_rng(seed, 1)).unwrap();
        let est = project(&sample, m).coefficients;
        let lhs = integrate(|x| {
            let fit: f64 = m.values(x).iter().zip(&est).map(|(p, a)| p * a).sum();
            (oracle.density(x) - fit).powi(2)
        });
        let rhs = oracle.residual_norm_sq(top)
            + oracle.true_bias_sq(m, top).unwrap()
            + dist_true_sq(&sample, m, &oracle);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs), "{} vs {}", lhs, rhs);
    }

    /// A function of a submodel keeps its values when expanded on a larger
    /// model, and its nested coefficients vanish past the submodel's prefix.
    #[test]
    fn nesting_reproduces_functions(
        coeffs in prop::collection::vec(-1.0f64..1.0, 12),
        family in 0usize..3,
        probe in prop::collection::vec(0.0f64..=1.0, 8),
    ) {
        let (sub, top) = match family {
            0 => (Model::histogram(3).unwrap(), Model::histogram(12).unwrap()),
            1 => (Model::fourier(2), Model::fourier(5)),
            _ => (Model::piecewise_polynomial(2, 3).unwrap(), Model::piecewise_polynomial(4, 3).unwrap()),
        };
        let a = &coeffs[..sub.dim()];
        let t = |x: f64| -> f64 { sub.values(x).iter().zip(a).map(|(p, c)| p * c).sum() };
        let on_top: Vec<f64> = (0..top.dim())
            .map(|l| integrate(|x| t(x) * top.eval(l, x).unwrap()))
            .collect();
        for &x in &probe {
            let back: f64 = top.values(x).iter().zip(&on_top).map(|(p, c)| p * c).sum();
            prop_assert!((back - t(x)).abs() < 1e-10);
        }
        let nested = NestedBasis::from_chain(&[sub.clone(), top.clone()]).unwrap();
        for l in sub.dim()..top.dim() {
            let c = integrate(|x| t(x) * nested.eval(l, x).unwrap());
            prop_assert!(c.abs() < 1e-10);
        }
    }

    /// Variance bounds for random unit directions `t` of a model:
    /// `Var_s(t) <= ||s||_inf` and `Var_s(t) <= C_1 ||s|| sqrt(d)`.
    #[test]
    fn directional_variance_bounds(
        oracle in oracle_strategy(),
        model in model_strategy(),
        seed in any::<u64>(),
    ) {
        let mut rng = stream_rng(seed, 2);
        let d = model.dim();
        let mut dir: Vec<f64> = (0..d).map(|_| rng.random::<f64>() - 0.5).collect();
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        dir.iter_mut().for_each(|v| *v /= norm);
        let t = |x: f64| -> f64 { model.values(x).iter().zip(&dir).map(|(p, c)| p * c).sum() };
        let mean = integrate(|x| oracle.density(x) * t(x));
        let var = integrate(|x| oracle.density(x) * (t(x) - mean).powi(2));
        prop_assert!(var <= oracle.norm_inf() + 1e-6);
        prop_assert!(var <= model.c1() * oracle.norm2() * (d as f64).sqrt() + 1e-6);
        let diag = diagnostics(&model, &oracle);
        prop_assert!(var <= diag.v_sq + 1e-6);
        prop_assert!(diag.d <= model.c1().powi(2) * d as f64 + 1e-6);
    }

    #[test]
    fn pb_is_not_clamped(points in prop::collection::vec(0.0f64..=1.0, 2..30)) {
        // one Haar function, +-1 on the halves: ((2c - n)^2 - n) / (n (n - 1)) with c points on the left
        let n = points.len();
        let c = points.iter().filter(|&&x| x < 0.5).count() as f64;
        let nf = n as f64;
        let expect = ((2.0 * c - nf).powi(2) - nf) / (nf * (nf - 1.0));
        let s = Sample::new(points).unwrap();
        let got = pb(&s, &Model::histogram(1).unwrap(), &Model::histogram(2).unwrap()).unwrap();
        prop_assert!((got - expect).abs() < 1e-12);
    }
}

#[test]
fn diagnostics_chain_of_bounds() {
    let oracles = [
        DensityOracle::uniform(),
        DensityOracle::histogram(vec![1.5, 0.25, 0.75, 1.5]).unwrap(),
        DensityOracle::histogram(vec![0.6, 1.8, 0.6]).unwrap(),
        DensityOracle::cosine_tilt(0.3, 3).unwrap(),
    ];
    let mut models: Vec<Model> = [1, 2, 4, 8, 16, 32, 64]
        .iter()
        .map(|&m| Model::histogram(m).unwrap())
        .collect();
    models.extend((0..=31).step_by(3).map(Model::fourier));
    models.extend([(1, 1), (4, 2), (8, 3), (16, 4)].map(|(j, r)| Model::piecewise_polynomial(j, r).unwrap()));
    for oracle in &oracles {
        for model in &models {
            let diag = diagnostics(model, oracle);
            let d = model.dim() as f64;
            let c1 = model.c1();
            assert!(diag.v_sq <= oracle.norm_inf().min(c1 * oracle.norm2() * d.sqrt()) + 1e-6);
            assert!(diag.v_sq <= diag.d + 1e-6);
            assert!(diag.d <= diag.b_sq + 1e-6);
            assert!(
                diag.b_sq <= c1 * c1 * d + 1e-6,
                "{}: {} vs {}",
                model.id(),
                diag.b_sq,
                c1 * c1 * d
            );
        }
    }
}

#[test]
fn collections_reject_broken_chains() {
    assert!(ModelCollection::from_dims(Family::Histogram, &[2, 3], 1, 4.0).is_err());
    assert!(ModelCollection::from_dims(Family::Histogram, &[], 1, 4.0).is_err());
    assert!(ModelCollection::from_dims(Family::Fourier, &[1, 2], 1, 4.0).is_err());
    assert!(ModelCollection::from_dims(Family::PiecewisePolynomial, &[4, 6], 2, 4.0).is_err());
    let ok = ModelCollection::from_dims(Family::PiecewisePolynomial, &[2, 4, 8], 2, 4.0).unwrap();
    assert_eq!(ok.top().dim(), 8);
}
