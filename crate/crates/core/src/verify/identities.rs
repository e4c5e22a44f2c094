//! Two-sided Monte Carlo checks of moment, Campbell–Little–Mecke and
//! Laplace-functional identities.

use crate::error::{Error, Result};
use crate::models::ProcessModel;
use crate::pattern::{Point, PointPattern, Region};
use crate::rng::StreamSeed;
use crate::scalar::Scalar;
use crate::verify::quadrature::{midpoint_grid, region_grid, Node};
use crate::verify::replicate::{mean_and_se, par_collect};

/// Default acceptance half-width in standard errors.
pub const DEFAULT_Z_CRIT: f64 = 4.0;

pub type PointFn<'a, T> = dyn Fn(&Point<T>) -> f64 + Sync + 'a;
pub type PatternFn<'a, T> = dyn Fn(&PointPattern<T>) -> f64 + Sync + 'a;

/// Outcome of comparing two independent estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckReport {
    pub lhs: f64,
    pub rhs: f64,
    pub se_lhs: f64,
    pub se_rhs: f64,
    pub z_score: f64,
    pub z_crit: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(lhs: f64, se_lhs: f64, rhs: f64, se_rhs: f64, z_crit: f64) -> Self {
        let diff = (lhs - rhs).abs();
        let se = (se_lhs * se_lhs + se_rhs * se_rhs).sqrt();
        let z_score = if se > 0.0 {
            diff / se
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        CheckReport {
            lhs,
            rhs,
            se_lhs,
            se_rhs,
            z_score,
            z_crit,
            pass: diff <= z_crit * se,
        }
    }

    pub fn relative_error(&self) -> f64 {
        ((self.lhs - self.rhs) / self.rhs).abs()
    }
}

/// `Σ_{X ∈ Φ} f(X)`.
pub fn linear_statistic<T: Scalar>(phi: &PointPattern<T>, f: &PointFn<'_, T>) -> f64 {
    phi.points().iter().map(f).sum()
}

/// Quadrature of `Σ_i w_i · scale_i · Ê[value(Φ_{x_i})]` using `per_node`
/// Palm draws at every node with nonzero scale.
fn palm_quadrature<T: Scalar>(
    model: &dyn ProcessModel<T>,
    nodes: &[Node<T>],
    scale: &(dyn Fn(&Point<T>) -> Result<f64> + Sync),
    value: &PatternFn<'_, T>,
    per_node: u64,
    seed: StreamSeed,
) -> Result<(f64, f64)> {
    let active: Vec<(Node<T>, f64)> = nodes
        .iter()
        .map(|n| Ok((*n, n.weight * scale(&n.point)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, c)| *c != 0.0)
        .collect();
    if active.is_empty() {
        return Ok((0.0, 0.0));
    }
    let total = active.len() as u64 * per_node;
    let values = par_collect(total, seed, |i, rng| {
        let node = &active[(i / per_node) as usize].0;
        Ok(value(&model.palm_sample(&node.point, rng)?))
    })?;
    let mut est = 0.0;
    let mut var = 0.0;
    for (chunk, (_, c)) in values.chunks(per_node as usize).zip(&active) {
        let (m, se) = mean_and_se(chunk);
        est += c * m;
        var += c * c * se * se;
    }
    Ok((est, var.sqrt()))
}

fn per_node_draws(n_reps: u64, nodes: usize) -> u64 {
    (n_reps / nodes.max(1) as u64).max(2)
}

/// Campbell–Little–Mecke check: `E[Σ_{X∈Φ} g(X) h(Φ)]` against
/// `∫ g(x) E[h(Φ_x)] m(x) dx`.
#[allow(clippy::too_many_arguments)]
pub fn campbell_check<T: Scalar>(
    model: &dyn ProcessModel<T>,
    g: &PointFn<'_, T>,
    h: &PatternFn<'_, T>,
    n_reps: u64,
    nodes_per_axis: usize,
    seed: StreamSeed,
    z_crit: f64,
) -> Result<CheckReport> {
    if !model.has_analytic_palm() {
        return Err(Error::NoAnalyticPalm);
    }
    if n_reps == 0 {
        return Err(Error::EmptyInput);
    }
    let lhs_values = par_collect(n_reps, seed.child(1), |_, rng| {
        let phi = model.sample(rng)?;
        let s = linear_statistic(&phi, g);
        Ok(if s == 0.0 { 0.0 } else { s * h(&phi) })
    })?;
    let (lhs, se_lhs) = mean_and_se(&lhs_values);
    let nodes = midpoint_grid(model.window(), nodes_per_axis)?;
    let per_node = per_node_draws(n_reps, nodes.len());
    let (rhs, se_rhs) = palm_quadrature(
        model,
        &nodes,
        &|x| Ok(g(x) * model.intensity(x)?.f64()),
        h,
        per_node,
        seed.child(2),
    )?;
    Ok(CheckReport::new(lhs, se_lhs, rhs, se_rhs, z_crit))
}

/// Laplace functional estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceEstimate {
    pub value: f64,
    pub se: f64,
}

/// `L_Φ(f) = E[exp(−Σ_{X∈Φ} f(X))]`.
pub fn laplace_estimate<T: Scalar>(
    model: &dyn ProcessModel<T>,
    f: &PointFn<'_, T>,
    n_reps: u64,
    seed: StreamSeed,
) -> Result<LaplaceEstimate> {
    if n_reps == 0 {
        return Err(Error::EmptyInput);
    }
    let values = par_collect(n_reps, seed, |_, rng| {
        Ok((-linear_statistic(&model.sample(rng)?, f)).exp())
    })?;
    let (value, se) = mean_and_se(&values);
    Ok(LaplaceEstimate { value, se })
}

/// Palm characterization through the Laplace functional:
/// `∂_t L_Φ(f + t g)|_{t=0}` against `−∫ g(x) L_{Φ_x}(f) m(x) dx`.
///
/// The left side is a central difference with common random numbers: the
/// same replicate is evaluated at `f + t g` and `f − t g`.
#[allow(clippy::too_many_arguments)]
pub fn laplace_derivative_check<T: Scalar>(
    model: &dyn ProcessModel<T>,
    f: &PointFn<'_, T>,
    g: &PointFn<'_, T>,
    t_step: f64,
    n_reps: u64,
    nodes_per_axis: usize,
    seed: StreamSeed,
    z_crit: f64,
) -> Result<CheckReport> {
    if !model.has_analytic_palm() {
        return Err(Error::NoAnalyticPalm);
    }
    if n_reps == 0 {
        return Err(Error::EmptyInput);
    }
    if !(t_step > 0.0) {
        return Err(Error::InvalidModel("t_step must be > 0".into()));
    }
    let lhs_values = par_collect(n_reps, seed.child(1), |_, rng| {
        let phi = model.sample(rng)?;
        let a = linear_statistic(&phi, f);
        let b = linear_statistic(&phi, g);
        Ok(((-a - t_step * b).exp() - (-a + t_step * b).exp()) / (2.0 * t_step))
    })?;
    let (lhs, se_lhs) = mean_and_se(&lhs_values);
    let nodes = midpoint_grid(model.window(), nodes_per_axis)?;
    let per_node = per_node_draws(n_reps, nodes.len());
    let (integral, se_rhs) = palm_quadrature(
        model,
        &nodes,
        &|x| Ok(g(x) * model.intensity(x)?.f64()),
        &|phi| (-linear_statistic(phi, f)).exp(),
        per_node,
        seed.child(2),
    )?;
    Ok(CheckReport::new(lhs, se_lhs, -integral, se_rhs, z_crit))
}

/// `E[Φ(B)]` against `∫_B m`.
pub fn first_moment_check<T: Scalar>(
    model: &dyn ProcessModel<T>,
    region: &Region<T>,
    n_reps: u64,
    nodes_per_axis: usize,
    seed: StreamSeed,
    z_crit: f64,
) -> Result<CheckReport> {
    if n_reps == 0 {
        return Err(Error::EmptyInput);
    }
    let values = par_collect(n_reps, seed, |_, rng| Ok(model.sample(rng)?.count_in(region) as f64))?;
    let (lhs, se) = mean_and_se(&values);
    let nodes = region_grid(model.window(), region, nodes_per_axis)?;
    let rhs = crate::verify::quadrature::integrate(&nodes, |x| Ok(model.intensity(x)?.f64()))?;
    Ok(CheckReport::new(lhs, se, rhs, 0.0, z_crit))
}

/// `E[Φ^(2)(B × B)]` against `∫_B ∫_B ρ^(2)`.
pub fn factorial_moment_check<T: Scalar>(
    model: &dyn ProcessModel<T>,
    region: &Region<T>,
    n_reps: u64,
    nodes_per_axis: usize,
    seed: StreamSeed,
    z_crit: f64,
) -> Result<CheckReport> {
    if !model.has_product_density2() {
        return Err(Error::NoProductDensity);
    }
    if n_reps == 0 {
        return Err(Error::EmptyInput);
    }
    let pair = [*region, *region];
    let values = par_collect(n_reps, seed, |_, rng| {
        Ok(model.sample(rng)?.factorial_power_count(&pair)? as f64)
    })?;
    let (lhs, se) = mean_and_se(&values);
    let nodes = region_grid(model.window(), region, nodes_per_axis)?;
    let mut rhs = 0.0;
    for a in &nodes {
        for b in &nodes {
            rhs += a.weight * b.weight * model.product_density2(&a.point, &b.point)?.f64();
        }
    }
    Ok(CheckReport::new(lhs, se, rhs, 0.0, z_crit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::PoissonModel;
    use crate::pattern::Window;

    fn unit() -> Window<f64> {
        Window::unit(2).unwrap()
    }

    #[test]
    fn report_gate() {
        let r = CheckReport::new(1.0, 0.1, 1.3, 0.0, 4.0);
        assert!(r.pass);
        assert!((r.z_score - 3.0).abs() < 1e-12);
        let r = CheckReport::new(1.0, 0.1, 1.5, 0.0, 4.0);
        assert!(!r.pass);
        let r = CheckReport::new(0.0, 0.0, 0.0, 0.0, 4.0);
        assert!(r.pass && r.z_score == 0.0);
        assert!(!CheckReport::new(0.0, 0.0, 1e-300, 0.0, 4.0).pass);
    }

    #[test]
    fn zero_test_function() {
        let m = PoissonModel::homogeneous(unit(), 10.0).unwrap();
        let zero = |_: &Point<f64>| 0.0;
        let one = |_: &PointPattern<f64>| 1.0;
        let r = campbell_check(&m, &zero, &one, 1000, 8, StreamSeed::new(1), 4.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.pass);
        let l = laplace_estimate(&m, &zero, 1000, StreamSeed::new(1)).unwrap();
        assert_eq!((l.value, l.se), (1.0, 0.0));
        let d = laplace_derivative_check(&m, &zero, &zero, 1e-3, 1000, 8, StreamSeed::new(2), 4.0).unwrap();
        assert_eq!((d.lhs, d.rhs), (0.0, 0.0));
    }

    #[test]
    fn first_moment_poisson() {
        let m = PoissonModel::homogeneous(unit(), 10.0).unwrap();
        let b = Region::new_box(Point::new(&[0.1, 0.2]).unwrap(), Point::new(&[0.6, 0.4]).unwrap()).unwrap();
        let r = first_moment_check(&m, &b, 4000, 16, StreamSeed::new(3), 4.0).unwrap();
        assert!((r.rhs - 1.0).abs() < 1e-12);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn requires_palm() {
        let t = crate::models::ThomasClusterModel::new(unit(), 5.0, 2.0, 0.05).unwrap();
        let one = |_: &Point<f64>| 1.0;
        let h = |_: &PointPattern<f64>| 1.0;
        assert_eq!(
            campbell_check(&t, &one, &h, 10, 4, StreamSeed::new(1), 4.0),
            Err(Error::NoAnalyticPalm)
        );
    }
}
