//! Model-agnostic Palm oracles by Campbell weighting.
//!
//! Sampling `Φ_i` from the plain model and weighting each replicate by the
//! number of its atoms in a small ball `B_ε(x)` estimates the Campbell
//! measure `E[Φ(B_ε(x)) 1_L(Φ)]`; normalized, this is the Palm law averaged
//! over `x' ∈ B_ε(x)` with respect to the moment measure. The two-point
//! version weights by the number of ordered distinct pairs falling in two
//! disjoint balls.
//!
//! Reduced variants follow the Campbell–Mecke sum exactly: each atom `X` in
//! the ball contributes the statistic of `Φ − δ_X`, rather than removing a
//! single representative atom.

use crate::error::{Error, Result};
use crate::models::ProcessModel;
use crate::pattern::{Point, PointPattern, Region};
use crate::rng::{RngState, StreamSeed};
use crate::scalar::Scalar;
use crate::verify::replicate::{par_histogram, Histogram};
use crate::verify::stats::CountPmf;

/// A summary statistic with values in the nonnegative integers.
pub type Statistic<'a, T> = dyn Fn(&PointPattern<T>) -> usize + Sync + 'a;

/// Output of a weighting oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    pub pmf: CountPmf,
    /// Sum of the integer weights.
    pub total_weight: u64,
    pub replicates: u64,
}

fn local_ball<T: Scalar>(model: &dyn ProcessModel<T>, x: &Point<T>, epsilon: T) -> Result<Region<T>> {
    if !(epsilon > T::zero()) {
        return Err(Error::InvalidRegion("epsilon must be > 0".into()));
    }
    let ball = Region::ball(*x, epsilon)?;
    if !ball.inside(model.window()) {
        return Err(Error::InvalidRegion("ball(x, epsilon) must lie inside the window".into()));
    }
    Ok(ball)
}

fn finish(hist: Histogram, replicates: u64) -> Result<OracleEstimate> {
    if hist.total() == 0 {
        return Err(Error::ZeroTotalWeight);
    }
    Ok(OracleEstimate {
        total_weight: hist.total(),
        pmf: CountPmf::from_histogram(&hist)?,
        replicates,
    })
}

/// One-point Campbell-weighting oracle.
pub fn palm_weighting_oracle<T: Scalar>(
    model: &dyn ProcessModel<T>,
    x: &Point<T>,
    epsilon: T,
    n_reps: u64,
    statistic: &Statistic<'_, T>,
    seed: StreamSeed,
    reduced: bool,
) -> Result<OracleEstimate> {
    if n_reps == 0 {
        return Err(Error::EmptyInput);
    }
    let ball = local_ball(model, x, epsilon)?;
    let hist = par_histogram(n_reps, seed, |rng, h| {
        let phi = model.sample(rng)?;
        let inside: Vec<usize> = (0..phi.len())
            .filter(|&i| ball.contains(&phi.points()[i]))
            .collect();
        if inside.is_empty() {
            return Ok(());
        }
        if reduced {
            for &i in &inside {
                h.add(statistic(&phi.without_index(i)), 1);
            }
        } else {
            h.add(statistic(&phi), inside.len() as u64);
        }
        Ok(())
    })?;
    finish(hist, n_reps)
}

/// Two-point Campbell-weighting oracle on disjoint balls around `x` and `y`.
#[allow(clippy::too_many_arguments)]
pub fn two_point_weighting_oracle<T: Scalar>(
    model: &dyn ProcessModel<T>,
    x: &Point<T>,
    y: &Point<T>,
    epsilon: T,
    n_reps: u64,
    statistic: &Statistic<'_, T>,
    seed: StreamSeed,
    reduced: bool,
) -> Result<OracleEstimate> {
    if n_reps == 0 {
        return Err(Error::EmptyInput);
    }
    let bx = local_ball(model, x, epsilon)?;
    let by = local_ball(model, y, epsilon)?;
    let gap = x.distance_squared(y).sqrt();
    if !(gap > epsilon + epsilon) {
        return Err(Error::InvalidRegion("balls around x and y must be disjoint".into()));
    }
    let hist = par_histogram(n_reps, seed, |rng, h| {
        let phi = model.sample(rng)?;
        let pts = phi.points();
        let in_x: Vec<usize> = (0..pts.len()).filter(|&i| bx.contains(&pts[i])).collect();
        if in_x.is_empty() {
            return Ok(());
        }
        let in_y: Vec<usize> = (0..pts.len()).filter(|&i| by.contains(&pts[i])).collect();
        if in_y.is_empty() {
            return Ok(());
        }
        if reduced {
            for &i in &in_x {
                for &j in &in_y {
                    h.add(statistic(&phi.without_indices(i, j)), 1);
                }
            }
        } else {
            // Disjoint balls: every (i, j) pair has distinct indices.
            h.add(statistic(&phi), (in_x.len() * in_y.len()) as u64);
        }
        Ok(())
    })?;
    finish(hist, n_reps)
}

/// Integer-weighted collection of replicates.
#[derive(Debug, Clone)]
pub struct WeightedEnsemble<T> {
    entries: Vec<(PointPattern<T>, u64)>,
    total_weight: u64,
}

impl<T: Scalar> WeightedEnsemble<T> {
    pub fn new(entries: Vec<(PointPattern<T>, u64)>) -> Result<Self> {
        let total_weight = entries.iter().map(|e| e.1).sum();
        if total_weight == 0 {
            return Err(Error::ZeroTotalWeight);
        }
        Ok(WeightedEnsemble {
            entries,
            total_weight,
        })
    }

    /// Replicates weighted by their atom count in `ball(x, epsilon)`; only
    /// replicates with positive weight are retained.
    pub fn campbell(
        model: &dyn ProcessModel<T>,
        x: &Point<T>,
        epsilon: T,
        n_reps: u64,
        seed: StreamSeed,
    ) -> Result<Self> {
        let ball = local_ball(model, x, epsilon)?;
        let kept = crate::verify::replicate::par_collect(n_reps, seed, |_, rng| {
            let phi = model.sample(rng)?;
            let w = phi.count_in(&ball) as u64;
            Ok((w > 0).then_some((phi, w)))
        })?;
        Self::new(kept.into_iter().flatten().collect())
    }

    pub fn entries(&self) -> &[(PointPattern<T>, u64)] {
        &self.entries
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    /// Weighted pmf of a statistic.
    pub fn pmf(&self, statistic: &Statistic<'_, T>) -> Result<CountPmf> {
        let mut h = Histogram::default();
        for (p, w) in &self.entries {
            h.add(statistic(p), *w);
        }
        CountPmf::from_histogram(&h)
    }
}

/// Pmf of a statistic over `n_draws` draws of a sampler.
pub fn sampler_pmf<T: Scalar>(
    n_draws: u64,
    seed: StreamSeed,
    draw: &(dyn Fn(&mut RngState) -> Result<PointPattern<T>> + Sync),
    statistic: &Statistic<'_, T>,
) -> Result<CountPmf> {
    if n_draws == 0 {
        return Err(Error::EmptyInput);
    }
    let hist = par_histogram(n_draws, seed, |rng, h| {
        h.add(statistic(&draw(rng)?), 1);
        Ok(())
    })?;
    CountPmf::from_histogram(&hist)
}

/// Statistic values over `n_draws` draws, in replicate order.
pub fn sampler_values<T: Scalar>(
    n_draws: u64,
    seed: StreamSeed,
    draw: &(dyn Fn(&mut RngState) -> Result<PointPattern<T>> + Sync),
    statistic: &Statistic<'_, T>,
) -> Result<Vec<f64>> {
    crate::verify::replicate::par_collect(n_draws, seed, |_, rng| Ok(statistic(&draw(rng)?) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::BinomialModel;
    use crate::pattern::Window;

    /// The deterministic process `δ_c`.
    #[derive(Debug)]
    struct Fixed(PointPattern<f64>);

    impl ProcessModel<f64> for Fixed {
        fn window(&self) -> &Window<f64> {
            self.0.window()
        }
        fn sample(&self, _rng: &mut RngState) -> Result<PointPattern<f64>> {
            Ok(self.0.clone())
        }
        fn intensity(&self, _x: &Point<f64>) -> Result<f64> {
            Err(Error::NoProductDensity)
        }
    }

    fn unit() -> Window<f64> {
        Window::unit(2).unwrap()
    }

    #[test]
    fn one_atom_process() {
        let c = Point::new(&[0.5, 0.5]).unwrap();
        let m = Fixed(PointPattern::new(vec![c], unit()).unwrap());
        let total = |p: &PointPattern<f64>| p.len();
        let est = palm_weighting_oracle(&m, &c, 0.02, 50, &total, StreamSeed::new(1), false).unwrap();
        assert_eq!(est.pmf, CountPmf::point_mass(1));
        assert_eq!(est.total_weight, 50);
        let red = palm_weighting_oracle(&m, &c, 0.02, 50, &total, StreamSeed::new(1), true).unwrap();
        assert_eq!(red.pmf, CountPmf::point_mass(0));
    }

    #[test]
    fn zero_weight_detected() {
        let c = Point::new(&[0.5, 0.5]).unwrap();
        let far = Point::new(&[0.1, 0.1]).unwrap();
        let m = Fixed(PointPattern::new(vec![c], unit()).unwrap());
        let total = |p: &PointPattern<f64>| p.len();
        assert_eq!(
            palm_weighting_oracle(&m, &far, 0.02, 10, &total, StreamSeed::new(1), false),
            Err(Error::ZeroTotalWeight)
        );
        let b1 = BinomialModel::uniform(unit(), 1);
        let y = Point::new(&[0.8, 0.8]).unwrap();
        assert_eq!(
            two_point_weighting_oracle(&b1, &far, &y, 0.05, 2000, &total, StreamSeed::new(2), true),
            Err(Error::ZeroTotalWeight)
        );
    }

    #[test]
    fn ball_must_fit() {
        let b = BinomialModel::uniform(unit(), 3);
        let edge = Point::new(&[0.01, 0.5]).unwrap();
        let total = |p: &PointPattern<f64>| p.len();
        assert!(palm_weighting_oracle(&b, &edge, 0.02, 10, &total, StreamSeed::new(1), false).is_err());
        let x = Point::new(&[0.5, 0.5]).unwrap();
        let y = Point::new(&[0.53, 0.5]).unwrap();
        assert!(two_point_weighting_oracle(&b, &x, &y, 0.02, 10, &total, StreamSeed::new(1), false).is_err());
    }

    #[test]
    fn binomial_total_count_under_palm() {
        // Every weighted Binomial(4) replicate has 4 atoms; reduced gives 3.
        let b = BinomialModel::uniform(unit(), 4);
        let x = Point::new(&[0.5, 0.5]).unwrap();
        let total = |p: &PointPattern<f64>| p.len();
        let est = palm_weighting_oracle(&b, &x, 0.1, 2000, &total, StreamSeed::new(3), true).unwrap();
        assert_eq!(est.pmf, CountPmf::point_mass(3));
        let y = Point::new(&[0.2, 0.2]).unwrap();
        let est = two_point_weighting_oracle(&b, &x, &y, 0.1, 4000, &total, StreamSeed::new(4), true).unwrap();
        assert_eq!(est.pmf, CountPmf::point_mass(2));
    }

    #[test]
    fn ensemble_matches_streaming_oracle() {
        let b = BinomialModel::uniform(unit(), 10);
        let x = Point::new(&[0.5, 0.5]).unwrap();
        let stat = |p: &PointPattern<f64>| p.count_in(&Region::ball(Point::new(&[0.5, 0.5]).unwrap(), 0.3).unwrap());
        let seed = StreamSeed::new(5);
        let ens = WeightedEnsemble::campbell(&b, &x, 0.05, 3000, seed).unwrap();
        let est = palm_weighting_oracle(&b, &x, 0.05, 3000, &stat, seed, false).unwrap();
        assert_eq!(ens.pmf(&stat).unwrap(), est.pmf);
        assert_eq!(ens.total_weight(), est.total_weight);
        assert!(WeightedEnsemble::<f64>::new(vec![]).is_err());
    }
}
