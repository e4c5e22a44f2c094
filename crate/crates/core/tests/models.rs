//! Sampling properties of the shipped models.

use std::sync::Arc;

use palm_core::models::IntensitySurface;
use palm_core::verify::replicate::{mean_and_se, par_collect};
use palm_core::verify::{factorial_moment_check, first_moment_check, DEFAULT_Z_CRIT};
use palm_core::{
    BinomialModel, MixedPoissonModel, ModelRef, Point, PoissonModel, ProcessModel, Region, RngState,
    StreamSeed, SuperposedModel, ThomasClusterModel, Window,
};

fn unit() -> Window {
    Window::unit(2).unwrap()
}

fn pt(c: &[f64]) -> Point {
    Point::new(c).unwrap()
}

fn shipped() -> Vec<(&'static str, ModelRef)> {
    let w = unit();
    let lin = IntensitySurface::linear(10.0, &[20.0, 0.0]);
    vec![
        ("poisson", Arc::new(PoissonModel::homogeneous(w, 30.0).unwrap())),
        ("poisson_linear", Arc::new(PoissonModel::inhomogeneous(w, lin, 30.0).unwrap())),
        ("binomial", Arc::new(BinomialModel::uniform(w, 20))),
        (
            "mixed",
            Arc::new(MixedPoissonModel::homogeneous(w, 10.0, &[(0.5, 0.5), (2.0, 0.5)]).unwrap()),
        ),
        ("thomas", Arc::new(ThomasClusterModel::new(w, 5.0, 4.0, 0.05).unwrap())),
        (
            "superposed",
            Arc::new(
                SuperposedModel::pair(
                    Arc::new(PoissonModel::homogeneous(w, 5.0).unwrap()),
                    Arc::new(BinomialModel::uniform(w, 8)),
                )
                .unwrap(),
            ),
        ),
    ]
}

#[test]
fn poisson_mean_count() {
    let m = PoissonModel::homogeneous(unit(), 50.0).unwrap();
    let counts = par_collect(10_000, StreamSeed::new(3), |_, rng| Ok(m.sample(rng)?.len() as f64)).unwrap();
    let (mean, se) = mean_and_se(&counts);
    assert!((mean - 50.0).abs() <= 4.0 * se, "mean {mean} se {se}");
    // Variance equals the mean.
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (counts.len() - 1) as f64;
    assert!((var / 50.0 - 1.0).abs() < 0.05, "var {var}");
}

#[test]
fn moment_consistency_every_model() {
    let regions = [
        Region::new_box(pt(&[0.0, 0.0]), pt(&[0.5, 0.5])).unwrap(),
        Region::ball(pt(&[0.6, 0.4]), 0.25).unwrap(),
    ];
    for (name, m) in shipped() {
        for (i, r) in regions.iter().enumerate() {
            let s = StreamSeed::new(17).child(i as u64);
            let c = first_moment_check(m.as_ref(), r, 20_000, 64, s.child(1), DEFAULT_Z_CRIT).unwrap();
            assert!(c.pass, "{name} first moment region {i}: {c:?}");
            if m.has_product_density2() {
                let c = factorial_moment_check(m.as_ref(), r, 20_000, 24, s.child(2), DEFAULT_Z_CRIT).unwrap();
                assert!(c.pass, "{name} factorial moment region {i}: {c:?}");
            }
        }
    }
}

#[test]
fn samples_are_simple_and_inside() {
    for (name, m) in shipped() {
        for i in 0..200 {
            let mut rng = StreamSeed::new(5).stream(i);
            let p = m.sample(&mut rng).unwrap();
            assert!(!p.has_duplicates(), "{name}");
            assert!(p.points().iter().all(|x| m.window().contains(x)), "{name}");
        }
    }
}

#[test]
fn thomas_reports_no_palm_or_pair_density() {
    let m = ThomasClusterModel::new(unit(), 5.0, 4.0, 0.05).unwrap();
    let x = pt(&[0.5, 0.5]);
    assert!(!m.has_analytic_palm() && !m.has_product_density2());
    assert!(m.palm_sample(&x, &mut RngState::from_seed(1)).is_err());
    assert!(m.product_density2(&x, &pt(&[0.2, 0.2])).is_err());
    // Edge correction by parent dilation keeps the intensity homogeneous.
    let edge = Region::new_box(pt(&[0.0, 0.0]), pt(&[0.1, 0.1])).unwrap();
    let c = first_moment_check(&m, &edge, 40_000, 16, StreamSeed::new(2), DEFAULT_Z_CRIT).unwrap();
    assert!(c.pass, "{c:?}");
}

#[test]
fn single_precision_models_sample() {
    let w = palm_core::pattern::Window::<f32>::unit(2).unwrap();
    let m = palm_core::models::PoissonModel::<f32>::homogeneous(w, 40.0).unwrap();
    let counts = par_collect(4000, StreamSeed::new(9), |_, rng| Ok(m.sample(rng)?.len() as f64)).unwrap();
    let (mean, se) = mean_and_se(&counts);
    assert!((mean - 40.0).abs() <= 4.0 * se);
}

#[test]
fn seeded_streams_reproduce() {
    for (name, m) in shipped() {
        let a = m.sample(&mut StreamSeed::new(1).stream(4)).unwrap();
        let b = m.sample(&mut StreamSeed::new(1).stream(4)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}
