//! Palm kernels of superpositions of independent point processes.
//!
//! For independent `Φ_1, …, Φ_k` with intensities `m_j`, the Palm version of
//! `Φ = Σ_j Φ_j` at `x` is the mixture that picks component `j` with
//! probability `m_j(x) / Σ_l m_l(x)`, replaces it by its own Palm version at
//! `x` and leaves the others untouched. The reduced form swaps in reduced
//! Palm versions. With two conditioning points `(x, y)` and two components
//! there are four branches, weighted by
//!
//! ```text
//! ( ρ_1(x,y),  m_1(x)·m_2(y),  m_1(y)·m_2(x),  ρ_2(x,y) )
//! ```
//!
//! whose sum is the second product density of the superposition.
//!
//! Weights here are ratios of intensity *densities* with respect to Lebesgue
//! measure on the window.

use std::sync::Arc;

use num_traits::Num;

use crate::error::{Error, Result};
use crate::models::{ensure_inside, select_index, ProcessModel};
use crate::pattern::{Point, PointPattern, Window};
use crate::rng::RngState;
use crate::scalar::Scalar;

/// Shared handle to a model.
pub type ModelRef<T> = Arc<dyn ProcessModel<T>>;

/// Normalized mixture probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureWeights<W> {
    weights: Vec<W>,
}

impl<W: Num + Clone + PartialOrd> MixtureWeights<W> {
    /// Normalizes nonnegative masses. A zero total is rejected: the Palm
    /// distribution is undefined off the support of the moment measure.
    pub fn from_unnormalized(masses: Vec<W>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::EmptyInput);
        }
        if masses.iter().any(|m| !(*m >= W::zero())) {
            return Err(Error::InvalidModel("negative intensity".into()));
        }
        let total = masses.iter().cloned().fold(W::zero(), |a, b| a + b);
        if total == W::zero() {
            return Err(Error::ZeroIntensityAtPoint);
        }
        Ok(MixtureWeights {
            weights: masses.into_iter().map(|m| m / total.clone()).collect(),
        })
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn into_inner(self) -> Vec<W> {
        self.weights
    }
}

/// Branch probabilities for two conditioning points and two components, in
/// the order (both in 1, x in 1 and y in 2, y in 1 and x in 2, both in 2).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPointWeights<W> {
    weights: [W; 4],
    normalizer: W,
}

impl<W: Num + Clone + PartialOrd> TwoPointWeights<W> {
    pub fn from_unnormalized(masses: [W; 4]) -> Result<Self> {
        if masses.iter().any(|m| !(*m >= W::zero())) {
            return Err(Error::InvalidModel("negative branch mass".into()));
        }
        let normalizer = masses.iter().cloned().fold(W::zero(), |a, b| a + b);
        if normalizer == W::zero() {
            return Err(Error::DegenerateConditioning);
        }
        let weights = masses.map(|m| m / normalizer.clone());
        Ok(TwoPointWeights {
            weights,
            normalizer,
        })
    }

    pub fn weights(&self) -> &[W; 4] {
        &self.weights
    }

    /// Common denominator of the four branches.
    pub fn normalizer(&self) -> &W {
        &self.normalizer
    }

    pub fn both_in_first(&self) -> &W {
        &self.weights[0]
    }

    pub fn x_first_y_second(&self) -> &W {
        &self.weights[1]
    }

    pub fn y_first_x_second(&self) -> &W {
        &self.weights[2]
    }

    pub fn both_in_second(&self) -> &W {
        &self.weights[3]
    }
}

/// Superposition mixture weights over arbitrary components, with intensities
/// lifted into the weight type `W` (e.g. an exact rational).
pub fn mixture_weights_in<T: Scalar, W: Num + Clone + PartialOrd>(
    components: &[ModelRef<T>],
    x: &Point<T>,
    lift: impl Fn(T) -> W,
) -> Result<MixtureWeights<W>> {
    let masses = components
        .iter()
        .map(|c| c.intensity(x).map(&lift))
        .collect::<Result<Vec<_>>>()?;
    MixtureWeights::from_unnormalized(masses)
}

/// Intensity of `c` at `x` in `W`; nested superpositions sum their leaves in
/// `W` so exact weight types see no rounding from the float sum.
fn lifted_mass<T: Scalar, W: Num + Clone + PartialOrd>(
    c: &ModelRef<T>,
    x: &Point<T>,
    lift: &dyn Fn(T) -> W,
) -> Result<W> {
    match c.as_superposition() {
        Some(inner) => inner
            .components
            .iter()
            .try_fold(W::zero(), |acc, l| Ok(acc + lifted_mass(l, x, lift)?)),
        None => Ok(lift(c.intensity(x)?)),
    }
}

/// `weight_j = m_j(x) / Σ_l m_l(x)`.
pub fn mixture_weights<T: Scalar>(components: &[ModelRef<T>], x: &Point<T>) -> Result<MixtureWeights<T>> {
    mixture_weights_in(components, x, |v| v)
}

/// Superposition of `k >= 2` independent models on one window.
#[derive(Debug, Clone)]
pub struct SuperposedModel<T> {
    components: Vec<ModelRef<T>>,
    window: Window<T>,
}

impl<T: Scalar> SuperposedModel<T> {
    pub fn new(components: Vec<ModelRef<T>>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidModel("a superposition needs at least two components".into()));
        }
        let window = *components[0].window();
        if components.iter().any(|c| *c.window() != window) {
            return Err(Error::WindowMismatch);
        }
        Ok(SuperposedModel { components, window })
    }

    pub fn pair(a: ModelRef<T>, b: ModelRef<T>) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn components(&self) -> &[ModelRef<T>] {
        &self.components
    }

    pub fn mixture_weights(&self, x: &Point<T>) -> Result<MixtureWeights<T>> {
        mixture_weights(&self.components, x)
    }

    /// Weights over the leaf (non-superposed) components, expanding nested
    /// superpositions depth-first.
    pub fn leaf_weights_in<W: Num + Clone + PartialOrd>(
        &self,
        x: &Point<T>,
        lift: &dyn Fn(T) -> W,
    ) -> Result<Vec<W>> {
        let masses = self
            .components
            .iter()
            .map(|c| lifted_mass(c, x, lift))
            .collect::<Result<Vec<_>>>()?;
        let outer = MixtureWeights::from_unnormalized(masses)?.into_inner();
        let mut out = Vec::new();
        for (c, w) in self.components.iter().zip(outer) {
            match c.as_superposition() {
                Some(inner) if w != W::zero() => {
                    out.extend(inner.leaf_weights_in(x, lift)?.into_iter().map(|v| v * w.clone()))
                }
                Some(inner) => out.extend(std::iter::repeat_n(W::zero(), inner.leaf_count())),
                None => out.push(w),
            }
        }
        Ok(out)
    }

    fn leaf_count(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.as_superposition().map_or(1, |s| s.leaf_count()))
            .sum()
    }

    fn require_pair(&self) -> Result<(&ModelRef<T>, &ModelRef<T>)> {
        match self.components.as_slice() {
            [a, b] => Ok((a, b)),
            _ => Err(Error::InvalidModel(
                "two-point Palm kernels need exactly two components".into(),
            )),
        }
    }

    fn distinct(x: &Point<T>, y: &Point<T>) -> Result<()> {
        if x == y {
            Err(Error::InvalidPoint("conditioning points must differ".into()))
        } else {
            Ok(())
        }
    }

    /// Unnormalized two-point branch masses.
    pub fn two_point_masses(&self, x: &Point<T>, y: &Point<T>) -> Result<[T; 4]> {
        let (a, b) = self.require_pair()?;
        Self::distinct(x, y)?;
        Ok([
            a.product_density2(x, y)?,
            a.intensity(x)? * b.intensity(y)?,
            a.intensity(y)? * b.intensity(x)?,
            b.product_density2(x, y)?,
        ])
    }

    pub fn two_point_weights(&self, x: &Point<T>, y: &Point<T>) -> Result<TwoPointWeights<T>> {
        TwoPointWeights::from_unnormalized(self.two_point_masses(x, y)?)
    }

    /// Branch probabilities obtained by multiplying the two one-point
    /// mixture weights (outer at `x`, inner at `y` for the conditioned
    /// superposition) without re-weighting the outer choice. This agrees
    /// with [`two_point_weights`](Self::two_point_weights) when each
    /// component's reduced Palm intensity at `y` equals its plain intensity
    /// (Poisson components) and differs otherwise.
    pub fn chain_rule_branch_probabilities(&self, x: &Point<T>, y: &Point<T>) -> Result<[T; 4]> {
        let (a, b) = self.require_pair()?;
        Self::distinct(x, y)?;
        let (m1x, m2x) = (a.intensity(x)?, b.intensity(x)?);
        let (m1y, m2y) = (a.intensity(y)?, b.intensity(y)?);
        let outer = MixtureWeights::from_unnormalized(vec![m1x, m2x])?.into_inner();
        let (c1, c2) = self.conditional_intensities(x, y)?;
        let inner1 = if outer[0] > T::zero() {
            MixtureWeights::from_unnormalized(vec![c1, m2y])?.into_inner()
        } else {
            vec![T::zero(), T::zero()]
        };
        let inner2 = if outer[1] > T::zero() {
            MixtureWeights::from_unnormalized(vec![m1y, c2])?.into_inner()
        } else {
            vec![T::zero(), T::zero()]
        };
        Ok([
            outer[0] * inner1[0],
            outer[0] * inner1[1],
            outer[1] * inner2[0],
            outer[1] * inner2[1],
        ])
    }

    /// Intensities at `y` of each component's reduced Palm version at `x`:
    /// `ρ_j(x, y) / m_j(x)` (zero where `m_j(x) = 0`).
    fn conditional_intensities(&self, x: &Point<T>, y: &Point<T>) -> Result<(T, T)> {
        let (a, b) = self.require_pair()?;
        let ratio = |c: &ModelRef<T>| -> Result<T> {
            let m = c.intensity(x)?;
            if m > T::zero() {
                Ok(c.product_density2(x, y)? / m)
            } else {
                Ok(T::zero())
            }
        };
        Ok((ratio(a)?, ratio(b)?))
    }

    fn check_two_point_samplers(&self, masses: &[T; 4]) -> Result<()> {
        let (a, b) = self.require_pair()?;
        let ok = [
            a.has_two_point_palm(),
            a.has_analytic_palm() && b.has_analytic_palm(),
            a.has_analytic_palm() && b.has_analytic_palm(),
            b.has_two_point_palm(),
        ];
        if masses.iter().zip(ok).any(|(m, ok)| *m > T::zero() && !ok) {
            return Err(Error::NoAnalyticPalm);
        }
        Ok(())
    }

    fn branch_pattern(
        &self,
        branch: usize,
        x: &Point<T>,
        y: &Point<T>,
        rng: &mut RngState,
    ) -> Result<PointPattern<T>> {
        let (a, b) = self.require_pair()?;
        let (mut first, second) = match branch {
            0 => (a.two_point_reduced_palm_sample(x, y, rng)?, b.sample(rng)?),
            1 => (a.reduced_palm_sample(x, rng)?, b.reduced_palm_sample(y, rng)?),
            2 => (a.reduced_palm_sample(y, rng)?, b.reduced_palm_sample(x, rng)?),
            _ => (a.sample(rng)?, b.two_point_reduced_palm_sample(x, y, rng)?),
        };
        first.extend(&second)?;
        Ok(first)
    }

    fn one_point_sample(&self, x: &Point<T>, rng: &mut RngState, reduced: bool) -> Result<PointPattern<T>> {
        ensure_inside(&self.window, x)?;
        let w = self.mixture_weights(x)?;
        if self
            .components
            .iter()
            .zip(w.weights())
            .any(|(c, w)| *w > T::zero() && !c.has_analytic_palm())
        {
            return Err(Error::NoAnalyticPalm);
        }
        let chosen = select_index(w.weights(), rng);
        let mut out = PointPattern::empty(self.window);
        for (i, c) in self.components.iter().enumerate() {
            let part = match (i == chosen, reduced) {
                (true, false) => c.palm_sample(x, rng)?,
                (true, true) => c.reduced_palm_sample(x, rng)?,
                (false, _) => c.sample(rng)?,
            };
            out.extend(&part)?;
        }
        Ok(out)
    }

    /// Two-point reduced Palm version by sequential conditioning: first at
    /// `x`, then at `y` applied to the conditioned superposition.
    ///
    /// The first stage picks the component carrying `x` with probability
    /// proportional to `m_j(x)` times the intensity at `y` of the resulting
    /// conditioned superposition (the Palm version of a mixture tilts each
    /// mixand by its own intensity). The second stage is the one-point
    /// mixture at `y` for that conditioned superposition, whose component
    /// intensities are `ρ_j(x, y) / m_j(x)` for the reduced Palm part and
    /// `m_l(y)` for the untouched part. Consumes two uniforms before
    /// delegating to the branch samplers.
    pub fn chained_reduced_palm_sample(
        &self,
        x: &Point<T>,
        y: &Point<T>,
        rng: &mut RngState,
    ) -> Result<PointPattern<T>> {
        let masses = self.two_point_masses(x, y)?;
        if masses.iter().all(|m| *m == T::zero()) {
            return Err(Error::DegenerateConditioning);
        }
        self.check_two_point_samplers(&masses)?;
        let (a, b) = self.require_pair()?;
        let (m1x, m2x) = (a.intensity(x)?, b.intensity(x)?);
        let (m1y, m2y) = (a.intensity(y)?, b.intensity(y)?);
        let (c1, c2) = self.conditional_intensities(x, y)?;

        let stage_one = [m1x * (c1 + m2y), m2x * (m1y + c2)];
        let branch = match select_index(&stage_one, rng) {
            0 => [0, 1][select_index(&[c1, m2y], rng)],
            _ => [2, 3][select_index(&[m1y, c2], rng)],
        };
        self.branch_pattern(branch, x, y, rng)
    }
}

impl<T: Scalar> ProcessModel<T> for SuperposedModel<T> {
    fn window(&self) -> &Window<T> {
        &self.window
    }

    fn sample(&self, rng: &mut RngState) -> Result<PointPattern<T>> {
        let mut out = PointPattern::empty(self.window);
        for c in &self.components {
            out.extend(&c.sample(rng)?)?;
        }
        Ok(out)
    }

    fn intensity(&self, x: &Point<T>) -> Result<T> {
        self.components
            .iter()
            .try_fold(T::zero(), |acc, c| Ok(acc + c.intensity(x)?))
    }

    fn has_analytic_palm(&self) -> bool {
        self.components.iter().all(|c| c.has_analytic_palm())
    }

    /// Mixture of component Palm laws: one uniform selects the component that is
    /// replaced by its Palm version at `x`.
    fn palm_sample(&self, x: &Point<T>, rng: &mut RngState) -> Result<PointPattern<T>> {
        self.one_point_sample(x, rng, false)
    }

    /// Direct branch form of the reduced kernel.
    fn reduced_palm_sample(&self, x: &Point<T>, rng: &mut RngState) -> Result<PointPattern<T>> {
        self.one_point_sample(x, rng, true)
    }

    fn has_two_point_palm(&self) -> bool {
        self.components.len() == 2
            && self
                .components
                .iter()
                .all(|c| c.has_analytic_palm() && c.has_two_point_palm() && c.has_product_density2())
    }

    /// Four-branch mixture over which component carries each conditioning
    /// point.
    fn two_point_reduced_palm_sample(
        &self,
        x: &Point<T>,
        y: &Point<T>,
        rng: &mut RngState,
    ) -> Result<PointPattern<T>> {
        let w = self.two_point_weights(x, y)?;
        self.check_two_point_samplers(w.weights())?;
        let branch = select_index(w.weights(), rng);
        self.branch_pattern(branch, x, y, rng)
    }

    fn has_product_density2(&self) -> bool {
        self.components.iter().all(|c| c.has_product_density2())
    }

    /// `Σ_j ρ_j(x, y) + Σ_{j ≠ l} m_j(x) m_l(y)`.
    fn product_density2(&self, x: &Point<T>, y: &Point<T>) -> Result<T> {
        let mut total = T::zero();
        for c in &self.components {
            total = total + c.product_density2(x, y)?;
        }
        let mx = self
            .components
            .iter()
            .map(|c| c.intensity(x))
            .collect::<Result<Vec<_>>>()?;
        let my = self
            .components
            .iter()
            .map(|c| c.intensity(y))
            .collect::<Result<Vec<_>>>()?;
        for (j, a) in mx.iter().enumerate() {
            for (l, b) in my.iter().enumerate() {
                if j != l {
                    total = total + *a * *b;
                }
            }
        }
        Ok(total)
    }

    fn as_superposition(&self) -> Option<&SuperposedModel<T>> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{BinomialModel, IntensitySurface, MixedPoissonModel, PoissonModel, ThomasClusterModel};
    use crate::pattern::Region;
    use crate::rng::StreamSeed;
    use num_rational::Ratio;

    fn unit() -> Window<f64> {
        Window::unit(2).unwrap()
    }

    fn pt(c: &[f64]) -> Point<f64> {
        Point::new(c).unwrap()
    }

    fn poisson(rate: f64) -> ModelRef<f64> {
        Arc::new(PoissonModel::homogeneous(unit(), rate).unwrap())
    }

    fn binomial(n: usize) -> ModelRef<f64> {
        Arc::new(BinomialModel::uniform(unit(), n))
    }

    fn null() -> ModelRef<f64> {
        Arc::new(PoissonModel::null(unit()))
    }

    #[test]
    fn superposition_weights() {
        let m = SuperposedModel::pair(poisson(2.0), poisson(3.0)).unwrap();
        let w = m.mixture_weights(&pt(&[0.5, 0.5])).unwrap();
        assert!((w.weights()[0] - 0.4).abs() < 1e-12);
        assert!((w.weights()[1] - 0.6).abs() < 1e-12);

        let m = SuperposedModel::pair(poisson(7.0), null()).unwrap();
        assert_eq!(m.mixture_weights(&pt(&[0.1, 0.9])).unwrap().weights(), &[1.0, 0.0]);

        let lin: ModelRef<f64> = Arc::new(
            PoissonModel::inhomogeneous(unit(), IntensitySurface::linear(0.0, &[1.0]), 1.0).unwrap(),
        );
        let m = SuperposedModel::pair(lin, poisson(1.0)).unwrap();
        let w = m.mixture_weights(&pt(&[0.5, 0.5])).unwrap();
        assert!((w.weights()[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((w.weights()[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_intensity_is_an_error() {
        let m = SuperposedModel::pair(null(), null()).unwrap();
        let x = pt(&[0.5, 0.5]);
        assert_eq!(m.mixture_weights(&x), Err(Error::ZeroIntensityAtPoint));
        assert_eq!(
            m.palm_sample(&x, &mut RngState::from_seed(0)),
            Err(Error::ZeroIntensityAtPoint)
        );
    }

    #[test]
    fn construction_errors() {
        assert!(SuperposedModel::new(vec![poisson(1.0)]).is_err());
        let other: ModelRef<f64> =
            Arc::new(PoissonModel::homogeneous(Window::unit(1).unwrap(), 1.0).unwrap());
        assert_eq!(SuperposedModel::pair(poisson(1.0), other).unwrap_err(), Error::WindowMismatch);
    }

    #[test]
    fn exact_rational_two_point_weights() {
        let r = |v: i64| Ratio::from_integer(v);
        let w = TwoPointWeights::from_unnormalized([r(4), r(6), r(6), r(9)]).unwrap();
        assert_eq!(w.weights(), &[Ratio::new(4, 25), Ratio::new(6, 25), Ratio::new(6, 25), Ratio::new(9, 25)]);
        assert_eq!(*w.normalizer(), r(25));
        assert_eq!(
            TwoPointWeights::from_unnormalized([r(0), r(0), r(0), r(0)]),
            Err(Error::DegenerateConditioning)
        );
    }

    #[test]
    fn two_point_weights_poisson_pair() {
        let m = SuperposedModel::pair(poisson(2.0), poisson(3.0)).unwrap();
        let (x, y) = (pt(&[0.3, 0.3]), pt(&[0.7, 0.7]));
        let w = m.two_point_weights(&x, &y).unwrap();
        for (got, want) in w.weights().iter().zip([4.0, 6.0, 6.0, 9.0]) {
            assert!((got - want / 25.0).abs() < 1e-12);
        }
        assert_eq!(*w.normalizer(), m.product_density2(&x, &y).unwrap());
        assert!(m.two_point_weights(&x, &x).is_err());
    }

    #[test]
    fn two_point_weight_edge_cases() {
        let (x, y) = (pt(&[0.3, 0.3]), pt(&[0.7, 0.7]));
        let m = SuperposedModel::pair(poisson(2.0), binomial(1)).unwrap();
        assert_eq!(*m.two_point_weights(&x, &y).unwrap().both_in_second(), 0.0);
        let m = SuperposedModel::pair(poisson(2.0), null()).unwrap();
        assert_eq!(m.two_point_weights(&x, &y).unwrap().weights(), &[1.0, 0.0, 0.0, 0.0]);
        let m = SuperposedModel::pair(null(), null()).unwrap();
        assert_eq!(m.two_point_weights(&x, &y), Err(Error::DegenerateConditioning));
        let three = SuperposedModel::new(vec![poisson(1.0), poisson(1.0), poisson(1.0)]).unwrap();
        assert!(three.two_point_weights(&x, &y).is_err());
    }

    #[test]
    fn chain_rule_product_matches_for_poisson() {
        let m = SuperposedModel::pair(poisson(2.0), poisson(3.0)).unwrap();
        let (x, y) = (pt(&[0.2, 0.6]), pt(&[0.8, 0.1]));
        let chain = m.chain_rule_branch_probabilities(&x, &y).unwrap();
        assert!((chain[0] - 4.0 / 25.0).abs() < 1e-12);
        let direct = m.two_point_weights(&x, &y).unwrap();
        for (a, b) in chain.iter().zip(direct.weights()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_rule_product_differs_for_binomial() {
        // ρ/m = 19 for Binomial(20) but its plain intensity is 20, so the
        // untilted product and the direct weights part ways.
        let m = SuperposedModel::pair(poisson(30.0), binomial(20)).unwrap();
        let (x, y) = (pt(&[0.3, 0.3]), pt(&[0.7, 0.7]));
        let chain = m.chain_rule_branch_probabilities(&x, &y).unwrap();
        let direct = m.two_point_weights(&x, &y).unwrap();
        assert!((chain[0] - 0.36).abs() < 1e-12);
        assert!((direct.weights()[0] - 900.0 / 2480.0).abs() < 1e-12);
    }

    #[test]
    fn palm_superposition_contains_atom() {
        let m = SuperposedModel::pair(poisson(30.0), binomial(20)).unwrap();
        let x = pt(&[0.5, 0.5]);
        let at_x = Region::ball(x, 0.0).unwrap();
        let s = StreamSeed::new(11);
        for i in 0..500 {
            let p = m.palm_sample(&x, &mut s.stream(i)).unwrap();
            assert!(p.count_in(&at_x) >= 1);
            let r = m.reduced_palm_sample(&x, &mut s.stream(i)).unwrap();
            assert_eq!(r.count_in(&at_x), 0);
        }
    }

    #[test]
    fn null_component_collapses_to_component_sampler() {
        // Null second component: weight (1, 0), and one uniform is consumed
        // before the component sampler runs on the same stream.
        let b: ModelRef<f64> = Arc::new(BinomialModel::uniform(unit(), 6));
        let m = SuperposedModel::pair(b.clone(), null()).unwrap();
        let x = pt(&[0.4, 0.4]);
        let s = StreamSeed::new(12);
        for i in 0..100 {
            let mut r1 = s.stream(i);
            let got = m.palm_sample(&x, &mut r1).unwrap();
            let mut r2 = s.stream(i);
            r2.uniform();
            let want = b.palm_sample(&x, &mut r2).unwrap();
            assert_eq!(got, want);
        }
        let b1 = SuperposedModel::pair(binomial(1), null()).unwrap();
        assert!(b1.reduced_palm_sample(&x, &mut s.stream(0)).unwrap().is_empty());
        let b2 = SuperposedModel::pair(binomial(2), null()).unwrap();
        let y = pt(&[0.9, 0.1]);
        for i in 0..50 {
            assert!(b2.two_point_reduced_palm_sample(&x, &y, &mut s.stream(i)).unwrap().is_empty());
            assert!(b2.chained_reduced_palm_sample(&x, &y, &mut s.stream(i)).unwrap().is_empty());
        }
    }

    #[test]
    fn missing_palm_reported() {
        let t: ModelRef<f64> = Arc::new(ThomasClusterModel::new(unit(), 5.0, 4.0, 0.03).unwrap());
        let m = SuperposedModel::pair(t.clone(), poisson(3.0)).unwrap();
        let x = pt(&[0.5, 0.5]);
        assert_eq!(m.palm_sample(&x, &mut RngState::from_seed(1)), Err(Error::NoAnalyticPalm));
        assert!(!m.has_analytic_palm());
        // Sampling the plain superposition still works.
        assert!(m.sample(&mut RngState::from_seed(1)).is_ok());
    }

    #[test]
    fn superposed_product_density() {
        let mp: ModelRef<f64> =
            Arc::new(MixedPoissonModel::homogeneous(unit(), 1.0, &[(1.0, 0.5), (3.0, 0.5)]).unwrap());
        let m = SuperposedModel::pair(mp, binomial(4)).unwrap();
        let (x, y) = (pt(&[0.1, 0.1]), pt(&[0.5, 0.9]));
        // 5 + 12 + 2·4·2
        assert_eq!(m.product_density2(&x, &y).unwrap(), 33.0);
        let w = m.two_point_weights(&x, &y).unwrap();
        assert_eq!(*w.normalizer(), 33.0);
    }

    #[test]
    fn leaf_weights_flatten_nested() {
        let inner = Arc::new(SuperposedModel::pair(poisson(1.0), poisson(2.0)).unwrap());
        let nested = SuperposedModel::pair(inner, poisson(3.0)).unwrap();
        let leaf = nested.leaf_weights_in(&pt(&[0.5, 0.5]), &|v: f64| v).unwrap();
        for (a, b) in leaf.iter().zip([1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
