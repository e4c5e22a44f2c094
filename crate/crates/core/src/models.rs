//! Simulable point process models.
//!
//! Every model implements [`ProcessModel`]: it can be sampled, reports its
//! intensity (the Lebesgue density of its first moment measure) and, where a
//! closed form exists, exposes Palm samplers and the second product density.

use std::fmt;
use std::sync::Arc;

use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::pattern::{Point, PointPattern, Window, MAX_DIM};
use crate::rng::RngState;
use crate::scalar::Scalar;

/// A simulable point process on a box window.
pub trait ProcessModel<T: Scalar>: Send + Sync + fmt::Debug {
    fn window(&self) -> &Window<T>;

    /// One realization.
    fn sample(&self, rng: &mut RngState) -> Result<PointPattern<T>>;

    /// Intensity density `m(x)` of the first moment measure.
    fn intensity(&self, x: &Point<T>) -> Result<T>;

    fn has_analytic_palm(&self) -> bool {
        false
    }

    /// A draw from the Palm version at `x`; contains an atom exactly at `x`.
    fn palm_sample(&self, _x: &Point<T>, _rng: &mut RngState) -> Result<PointPattern<T>> {
        Err(Error::NoAnalyticPalm)
    }

    /// A draw from the reduced Palm version at `x`.
    fn reduced_palm_sample(&self, x: &Point<T>, rng: &mut RngState) -> Result<PointPattern<T>> {
        self.palm_sample(x, rng)?.remove_atom(x)
    }

    fn has_two_point_palm(&self) -> bool {
        false
    }

    /// A draw from the two-point reduced Palm version at `(x, y)`.
    fn two_point_reduced_palm_sample(
        &self,
        _x: &Point<T>,
        _y: &Point<T>,
        _rng: &mut RngState,
    ) -> Result<PointPattern<T>> {
        Err(Error::NoAnalyticPalm)
    }

    fn has_product_density2(&self) -> bool {
        false
    }

    /// Density `ρ^(2)(x, y)` of the second factorial moment measure.
    fn product_density2(&self, _x: &Point<T>, _y: &Point<T>) -> Result<T> {
        Err(Error::NoProductDensity)
    }

    /// Downcast hook for nested superpositions.
    fn as_superposition(&self) -> Option<&crate::palm::SuperposedModel<T>> {
        None
    }
}

pub(crate) fn ensure_inside<T: Scalar>(window: &Window<T>, x: &Point<T>) -> Result<()> {
    if window.contains(x) {
        Ok(())
    } else {
        Err(Error::OutOfWindow)
    }
}

/// A nonnegative function on the window.
#[derive(Clone)]
pub enum IntensitySurface<T> {
    Constant(T),
    /// `base + Σ_i gradient[i] · x_i`.
    Linear { base: T, gradient: [T; MAX_DIM] },
    Custom(Arc<dyn Fn(&Point<T>) -> T + Send + Sync>),
}

impl<T: Scalar> IntensitySurface<T> {
    pub fn linear(base: T, gradient: &[T]) -> Self {
        let mut g = [T::zero(); MAX_DIM];
        g[..gradient.len().min(MAX_DIM)].copy_from_slice(&gradient[..gradient.len().min(MAX_DIM)]);
        IntensitySurface::Linear { base, gradient: g }
    }

    pub fn custom(f: impl Fn(&Point<T>) -> T + Send + Sync + 'static) -> Self {
        IntensitySurface::Custom(Arc::new(f))
    }

    pub fn eval(&self, x: &Point<T>) -> T {
        match self {
            IntensitySurface::Constant(c) => *c,
            IntensitySurface::Linear { base, gradient } => x
                .coords()
                .iter()
                .zip(gradient)
                .fold(*base, |acc, (&c, &g)| acc + c * g),
            IntensitySurface::Custom(f) => f(x),
        }
    }

    fn is_constant(&self) -> bool {
        matches!(self, IntensitySurface::Constant(_))
    }
}

impl<T: fmt::Debug> fmt::Debug for IntensitySurface<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntensitySurface::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            IntensitySurface::Linear { base, gradient } => f
                .debug_struct("Linear")
                .field("base", base)
                .field("gradient", gradient)
                .finish(),
            IntensitySurface::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Poisson-distributed count with the given mean.
pub(crate) fn poisson_count(mean: f64, rng: &mut RngState) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("finite positive mean");
    let n: f64 = d.sample(rng);
    n as usize
}

/// Categorical draw with a single uniform against cumulative weights.
///
/// Zero-weight entries are never selected.
pub fn select_index<T: Scalar>(weights: &[T], rng: &mut RngState) -> usize {
    let total = weights.iter().fold(0.0, |acc, w| acc + w.f64());
    let u = rng.uniform() * total;
    let mut cum = 0.0;
    let mut last = 0;
    for (i, w) in weights.iter().enumerate() {
        let w = w.f64();
        if w > 0.0 {
            cum += w;
            last = i;
            if u < cum {
                return i;
            }
        }
    }
    last
}

/// Poisson process with intensity `scale · surface(x)`, thinned from a
/// homogeneous proposal of rate `scale · bound`.
fn poisson_points<T: Scalar>(
    window: &Window<T>,
    surface: &IntensitySurface<T>,
    bound: T,
    scale: T,
    rng: &mut RngState,
) -> Result<PointPattern<T>> {
    let rate = (scale * bound).f64();
    let n = poisson_count(rate * window.volume().f64(), rng);
    let mut points = Vec::with_capacity(n);
    if surface.is_constant() {
        for _ in 0..n {
            points.push(window.sample_uniform(rng));
        }
    } else {
        for _ in 0..n {
            let p = window.sample_uniform(rng);
            let lambda = surface.eval(&p);
            if lambda > bound || lambda < T::zero() || !lambda.is_finite() {
                return Err(Error::InvalidModel(format!(
                    "intensity {lambda} outside [0, {bound}] at {:?}",
                    p.coords()
                )));
            }
            if rng.uniform() * bound.f64() < lambda.f64() {
                points.push(p);
            }
        }
    }
    Ok(PointPattern::from_parts(points, *window))
}

/// Poisson process, homogeneous or inhomogeneous.
#[derive(Debug, Clone)]
pub struct PoissonModel<T> {
    window: Window<T>,
    surface: IntensitySurface<T>,
    bound: T,
}

impl<T: Scalar> PoissonModel<T> {
    pub fn homogeneous(window: Window<T>, rate: T) -> Result<Self> {
        if !(rate >= T::zero()) || !rate.is_finite() {
            return Err(Error::InvalidModel(format!("rate {rate} must be finite and >= 0")));
        }
        Ok(PoissonModel {
            window,
            surface: IntensitySurface::Constant(rate),
            bound: rate,
        })
    }

    /// Inhomogeneous intensity, simulated by thinning against `bound`.
    pub fn inhomogeneous(window: Window<T>, surface: IntensitySurface<T>, bound: T) -> Result<Self> {
        if !(bound >= T::zero()) || !bound.is_finite() {
            return Err(Error::InvalidModel(format!("bound {bound} must be finite and >= 0")));
        }
        Ok(PoissonModel {
            window,
            surface,
            bound,
        })
    }

    /// The null process.
    pub fn null(window: Window<T>) -> Self {
        PoissonModel {
            window,
            surface: IntensitySurface::Constant(T::zero()),
            bound: T::zero(),
        }
    }
}

impl<T: Scalar> ProcessModel<T> for PoissonModel<T> {
    fn window(&self) -> &Window<T> {
        &self.window
    }

    fn sample(&self, rng: &mut RngState) -> Result<PointPattern<T>> {
        poisson_points(&self.window, &self.surface, self.bound, T::one(), rng)
    }

    fn intensity(&self, x: &Point<T>) -> Result<T> {
        ensure_inside(&self.window, x)?;
        Ok(self.surface.eval(x))
    }

    fn has_analytic_palm(&self) -> bool {
        true
    }

    // Slivnyak–Mecke: the reduced Palm version is the process itself.
    fn palm_sample(&self, x: &Point<T>, rng: &mut RngState) -> Result<PointPattern<T>> {
        ensure_inside(&self.window, x)?;
        self.sample(rng)?.add_atom(*x)
    }

    fn reduced_palm_sample(&self, x: &Point<T>, rng: &mut RngState) -> Result<PointPattern<T>> {
        ensure_inside(&self.window, x)?;
        self.sample(rng)
    }

    fn has_two_point_palm(&self) -> bool {
        true
    }

    fn two_point_reduced_palm_sample(
        &self,
        x: &Point<T>,
        y: &Point<T>,
        rng: &mut RngState,
    ) -> Result<PointPattern<T>> {
        ensure_inside(&self.window, x)?;
        ensure_inside(&self.window, y)?;
        self.sample(rng)
    }

    fn has_product_density2(&self) -> bool {
        true
    }

    fn product_density2(&self, x: &Point<T>, y: &Point<T>) -> Result<T> {
        Ok(self.intensity(x)? * self.intensity(y)?)
    }
}

/// Density of the i.i.d. points of a binomial process.
#[derive(Clone)]
pub enum PointDensity<T> {
    Uniform,
    /// Normalized density with an upper bound, sampled by rejection.
    Custom {
        f: Arc<dyn Fn(&Point<T>) -> T + Send + Sync>,
        bound: T,
    },
}

impl<T> fmt::Debug for PointDensity<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointDensity::Uniform => f.write_str("Uniform"),
            PointDensity::Custom { .. } => f.write_str("Custom(..)"),
        }
    }
}

/// Exactly `n` i.i.d. points.
#[derive(Debug, Clone)]
pub struct BinomialModel<T> {
    window: Window<T>,
    n: usize,
    density: PointDensity<T>,
}

impl<T: Scalar> BinomialModel<T> {
    pub fn uniform(window: Window<T>, n: usize) -> Self {
        BinomialModel {
            window,
            n,
            density: PointDensity::Uniform,
        }
    }

    /// `f` must integrate to one over the window and satisfy `f <= bound`.
    pub fn with_density(
        window: Window<T>,
        n: usize,
        f: impl Fn(&Point<T>) -> T + Send + Sync + 'static,
        bound: T,
    ) -> Result<Self> {
        if !(bound > T::zero()) || !bound.is_finite() {
            return Err(Error::InvalidModel("density bound must be finite and > 0".into()));
        }
        Ok(BinomialModel {
            window,
            n,
            density: PointDensity::Custom {
                f: Arc::new(f),
                bound,
            },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn density(&self, x: &Point<T>) -> T {
        match &self.density {
            PointDensity::Uniform => T::one() / self.window.volume(),
            PointDensity::Custom { f, .. } => f(x),
        }
    }

    fn draw_point(&self, rng: &mut RngState) -> Result<Point<T>> {
        match &self.density {
            PointDensity::Uniform => Ok(self.window.sample_uniform(rng)),
            PointDensity::Custom { f, bound } => loop {
                let p = self.window.sample_uniform(rng);
                let v = f(&p);
                if v > *bound || v < T::zero() || !v.is_finite() {
                    return Err(Error::InvalidModel(format!(
                        "density {v} outside [0, {bound}]"
                    )));
                }
                if rng.uniform() * bound.f64() < v.f64() {
                    return Ok(p);
                }
            },
        }
    }

    fn sample_n(&self, n: usize, rng: &mut RngState) -> Result<PointPattern<T>> {
        let points = (0..n)
            .map(|_| self.draw_point(rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(PointPattern::from_parts(points, self.window))
    }
}

impl<T: Scalar> ProcessModel<T> for BinomialModel<T> {
    fn window(&self) -> &Window<T> {
        &self.window
    }

    fn sample(&self, rng: &mut RngState) -> Result<PointPattern<T>> {
        self.sample_n(self.n, rng)
    }

    fn intensity(&self, x: &Point<T>) -> Result<T> {
        ensure_inside(&self.window, x)?;
        Ok(T::of(self.n as f64) * self.density(x))
    }

    fn has_analytic_palm(&self) -> bool {
        true
    }

    fn palm_sample(&self, x: &Point<T>, rng: &mut RngState) -> Result<PointPattern<T>> {
        self.reduced_palm_sample(x, rng)?.add_atom(*x)
    }

    fn reduced_palm_sample(&self, x: &Point<T>, rng: &mut RngState) -> Result<PointPattern<T>> {
        ensure_inside(&self.window, x)?;
        if self.n == 0 {
            return Err(Error::ZeroIntensityAtPoint);
        }
        self.sample_n(self.n - 1, rng)
    }

    fn has_two_point_palm(&self) -> bool {
        true
    }

    fn two_point_reduced_palm_sample(
        &self,
        x: &Point<T>,
        y: &Point<T>,
        rng: &mut RngState,
    ) -> Result<PointPattern<T>> {
        ensure_inside(&self.window, x)?;
        ensure_inside(&self.window, y)?;
        if self.n < 2 {
            return Err(Error::DegenerateConditioning);
        }
        self.sample_n(self.n - 2, rng)
    }

    fn has_product_density2(&self) -> bool {
        true
    }

    fn product_density2(&self, x: &Point<T>, y: &Point<T>) -> Result<T> {
        ensure_inside(&self.window, x)?;
        ensure_inside(&self.window, y)?;
        let n = T::of(self.n as f64);
        Ok(n * (n - T::one()).max(T::zero()) * self.density(x) * self.density(y))
    }
}

/// Poisson process with intensity `Λ · λ(x)`, `Λ` drawn from a finite
/// discrete mixing law.
#[derive(Debug, Clone)]
pub struct MixedPoissonModel<T> {
    window: Window<T>,
    surface: IntensitySurface<T>,
    bound: T,
    values: Vec<T>,
    probs: Vec<T>,
}

impl<T: Scalar> MixedPoissonModel<T> {
    /// `mixing` lists `(value, probability)` pairs.
    pub fn new(
        window: Window<T>,
        surface: IntensitySurface<T>,
        bound: T,
        mixing: &[(T, T)],
    ) -> Result<Self> {
        if mixing.is_empty() {
            return Err(Error::InvalidModel("mixing law needs at least one atom".into()));
        }
        if mixing
            .iter()
            .any(|(v, p)| !(*v >= T::zero()) || !(*p >= T::zero()) || !v.is_finite() || !p.is_finite())
        {
            return Err(Error::InvalidModel("mixing values and probabilities must be >= 0".into()));
        }
        let total = mixing.iter().fold(0.0, |acc, (_, p)| acc + p.f64());
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidModel(format!("mixing probabilities sum to {total}")));
        }
        if !(bound >= T::zero()) || !bound.is_finite() {
            return Err(Error::InvalidModel("bound must be finite and >= 0".into()));
        }
        Ok(MixedPoissonModel {
            window,
            surface,
            bound,
            values: mixing.iter().map(|m| m.0).collect(),
            probs: mixing.iter().map(|m| m.1).collect(),
        })
    }

    pub fn homogeneous(window: Window<T>, rate: T, mixing: &[(T, T)]) -> Result<Self> {
        Self::new(window, IntensitySurface::Constant(rate), rate, mixing)
    }

    /// `E[Λ^k]`.
    pub fn mixing_moment(&self, k: i32) -> T {
        self.values
            .iter()
            .zip(&self.probs)
            .fold(T::zero(), |acc, (&v, &p)| acc + v.powi(k) * p)
    }

    /// Mixing law tilted by `Λ^k`: probabilities `∝ prob_i · value_i^k`.
    pub fn size_biased_mixing(&self, k: i32) -> Result<Vec<T>> {
        let norm = self.mixing_moment(k);
        if !(norm > T::zero()) {
            return Err(Error::ZeroIntensityAtPoint);
        }
        Ok(self
            .values
            .iter()
            .zip(&self.probs)
            .map(|(&v, &p)| v.powi(k) * p / norm)
            .collect())
    }

    fn sample_tilted(&self, k: i32, rng: &mut RngState) -> Result<PointPattern<T>> {
        let i = if k == 0 {
            select_index(&self.probs, rng)
        } else {
            select_index(&self.size_biased_mixing(k)?, rng)
        };
        poisson_points(&self.window, &self.surface, self.bound, self.values[i], rng)
    }
}

impl<T: Scalar> ProcessModel<T> for MixedPoissonModel<T> {
    fn window(&self) -> &Window<T> {
        &self.window
    }

    fn sample(&self, rng: &mut RngState) -> Result<PointPattern<T>> {
        self.sample_tilted(0, rng)
    }

    fn intensity(&self, x: &Point<T>) -> Result<T> {
        ensure_inside(&self.window, x)?;
        Ok(self.mixing_moment(1) * self.surface.eval(x))
    }

    fn has_analytic_palm(&self) -> bool {
        true
    }

    fn palm_sample(&self, x: &Point<T>, rng: &mut RngState) -> Result<PointPattern<T>> {
        self.reduced_palm_sample(x, rng)?.add_atom(*x)
    }

    fn reduced_palm_sample(&self, x: &Point<T>, rng: &mut RngState) -> Result<PointPattern<T>> {
        ensure_inside(&self.window, x)?;
        self.sample_tilted(1, rng)
    }

    fn has_two_point_palm(&self) -> bool {
        true
    }

    fn two_point_reduced_palm_sample(
        &self,
        x: &Point<T>,
        y: &Point<T>,
        rng: &mut RngState,
    ) -> Result<PointPattern<T>> {
        ensure_inside(&self.window, x)?;
        ensure_inside(&self.window, y)?;
        self.sample_tilted(2, rng).map_err(|e| match e {
            Error::ZeroIntensityAtPoint => Error::DegenerateConditioning,
            e => e,
        })
    }

    fn has_product_density2(&self) -> bool {
        true
    }

    fn product_density2(&self, x: &Point<T>, y: &Point<T>) -> Result<T> {
        ensure_inside(&self.window, x)?;
        ensure_inside(&self.window, y)?;
        Ok(self.mixing_moment(2) * self.surface.eval(x) * self.surface.eval(y))
    }
}

/// Default dilation of the simulation window, in units of `sigma`.
pub const THOMAS_DILATION: f64 = 4.0;

/// Thomas cluster process: Poisson parents, Poisson numbers of Gaussian
/// offspring. Parents are simulated on the window dilated by
/// `dilation · sigma` and offspring are clipped to the window.
#[derive(Debug, Clone)]
pub struct ThomasClusterModel<T> {
    window: Window<T>,
    parent_rate: T,
    mean_offspring: T,
    sigma: T,
    dilation: T,
}

impl<T: Scalar> ThomasClusterModel<T> {
    pub fn new(window: Window<T>, parent_rate: T, mean_offspring: T, sigma: T) -> Result<Self> {
        Self::with_dilation(window, parent_rate, mean_offspring, sigma, T::of(THOMAS_DILATION))
    }

    pub fn with_dilation(
        window: Window<T>,
        parent_rate: T,
        mean_offspring: T,
        sigma: T,
        dilation: T,
    ) -> Result<Self> {
        for (name, v) in [("parent_rate", parent_rate), ("mean_offspring", mean_offspring), ("sigma", sigma)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidModel(format!("{name} must be finite and > 0")));
            }
        }
        if !(dilation >= T::zero()) {
            return Err(Error::InvalidModel("dilation must be >= 0".into()));
        }
        Ok(ThomasClusterModel {
            window,
            parent_rate,
            mean_offspring,
            sigma,
            dilation,
        })
    }

    pub fn dilation(&self) -> T {
        self.dilation
    }
}

impl<T: Scalar> ProcessModel<T> for ThomasClusterModel<T> {
    fn window(&self) -> &Window<T> {
        &self.window
    }

    fn sample(&self, rng: &mut RngState) -> Result<PointPattern<T>> {
        let extended = self.window.dilate(self.dilation * self.sigma)?;
        let parents = poisson_count((self.parent_rate * extended.volume()).f64(), rng);
        let mut points = Vec::new();
        let dim = self.window.dim();
        let mut coords = [T::zero(); MAX_DIM];
        for _ in 0..parents {
            let parent = extended.sample_uniform(rng);
            let children = poisson_count(self.mean_offspring.f64(), rng);
            for _ in 0..children {
                for (i, c) in coords.iter_mut().enumerate().take(dim) {
                    let z: f64 = StandardNormal.sample(rng);
                    *c = parent.coords()[i] + self.sigma * T::of(z);
                }
                let child = Point::new(&coords[..dim])?;
                if self.window.contains(&child) {
                    points.push(child);
                }
            }
        }
        Ok(PointPattern::from_parts(points, self.window))
    }

    fn intensity(&self, x: &Point<T>) -> Result<T> {
        ensure_inside(&self.window, x)?;
        Ok(self.parent_rate * self.mean_offspring)
    }
}
