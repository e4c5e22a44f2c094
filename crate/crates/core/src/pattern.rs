//! Points, windows, regions and finite point patterns.
//!
//! A [`PointPattern`] is a finite multiset of points living in a box
//! [`Window`]. Counting in [`Region`]s gives the realized counting measure;
//! [`PointPattern::power_count`] and [`PointPattern::factorial_power_count`]
//! evaluate its k-th power and k-th factorial power on product sets.

use crate::error::{Error, Result};
use crate::rng::RngState;
use crate::scalar::Scalar;

/// Largest supported dimension.
pub const MAX_DIM: usize = 3;

/// A point in R^d, d in {1, 2, 3}. Unused trailing coordinates are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<T> {
    coords: [T; MAX_DIM],
    dim: u8,
}

impl<T: Scalar> Point<T> {
    pub fn new(coords: &[T]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::InvalidPoint(format!(
                "dimension {} not in 1..={MAX_DIM}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let mut c = [T::zero(); MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Point {
            coords: c,
            dim: coords.len() as u8,
        })
    }

    /// Builds from `f64` coordinates.
    pub fn from_f64(coords: &[f64]) -> Result<Self> {
        let c: Vec<T> = coords.iter().map(|&v| T::of(v)).collect();
        Self::new(&c)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[T] {
        &self.coords[..self.dim as usize]
    }

    pub fn distance_squared(&self, other: &Point<T>) -> T {
        self.coords()
            .iter()
            .zip(other.coords())
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b))
    }
}

/// Axis-aligned bounding box with `lower < upper` componentwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window<T> {
    lower: Point<T>,
    upper: Point<T>,
}

impl<T: Scalar> Window<T> {
    pub fn new(lower: Point<T>, upper: Point<T>) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::InvalidWindow("corner dimensions differ".into()));
        }
        if lower
            .coords()
            .iter()
            .zip(upper.coords())
            .any(|(l, u)| !(l < u))
        {
            return Err(Error::InvalidWindow("lower must be < upper on every axis".into()));
        }
        Ok(Window { lower, upper })
    }

    /// The unit cube `[0, 1]^dim`.
    pub fn unit(dim: usize) -> Result<Self> {
        let lower = Point::new(&vec![T::zero(); dim])?;
        let upper = Point::new(&vec![T::one(); dim])?;
        Self::new(lower, upper)
    }

    pub fn lower(&self) -> &Point<T> {
        &self.lower
    }

    pub fn upper(&self) -> &Point<T> {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn volume(&self) -> T {
        self.lower
            .coords()
            .iter()
            .zip(self.upper.coords())
            .fold(T::one(), |acc, (&l, &u)| acc * (u - l))
    }

    /// Closed membership.
    pub fn contains(&self, x: &Point<T>) -> bool {
        x.dim() == self.dim()
            && x
                .coords()
                .iter()
                .zip(self.lower.coords().iter().zip(self.upper.coords()))
                .all(|(c, (l, u))| l <= c && c <= u)
    }

    /// Window grown by `margin` on every side.
    pub fn dilate(&self, margin: T) -> Result<Self> {
        let lo: Vec<T> = self.lower.coords().iter().map(|&c| c - margin).collect();
        let hi: Vec<T> = self.upper.coords().iter().map(|&c| c + margin).collect();
        Window::new(Point::new(&lo)?, Point::new(&hi)?)
    }

    /// Uniform point in the window.
    pub fn sample_uniform(&self, rng: &mut RngState) -> Point<T> {
        let mut c = [T::zero(); MAX_DIM];
        for (i, slot) in c.iter_mut().enumerate().take(self.dim()) {
            let (l, u) = (self.lower.coords[i], self.upper.coords[i]);
            // Rounding can land exactly on `u`; the window is closed.
            *slot = (l + (u - l) * T::of(rng.uniform())).min(u);
        }
        Point {
            coords: c,
            dim: self.lower.dim,
        }
    }

    pub fn as_region(&self) -> Region<T> {
        Region::Box {
            lower: self.lower,
            upper: self.upper,
        }
    }
}

/// A closed measurable set used for counting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region<T> {
    Box { lower: Point<T>, upper: Point<T> },
    Ball { center: Point<T>, radius: T },
}

impl<T: Scalar> Region<T> {
    pub fn new_box(lower: Point<T>, upper: Point<T>) -> Result<Self> {
        // Same validity rules as a window.
        Window::new(lower, upper).map_err(|e| Error::InvalidRegion(e.to_string()))?;
        Ok(Region::Box { lower, upper })
    }

    /// Closed ball. A zero radius selects exactly the atoms equal to `center`.
    pub fn ball(center: Point<T>, radius: T) -> Result<Self> {
        if !(radius >= T::zero()) || !radius.is_finite() {
            return Err(Error::InvalidRegion("ball radius must be finite and >= 0".into()));
        }
        Ok(Region::Ball { center, radius })
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Box { lower, .. } => lower.dim(),
            Region::Ball { center, .. } => center.dim(),
        }
    }

    pub fn contains(&self, x: &Point<T>) -> bool {
        match self {
            Region::Box { lower, upper } => x.dim() == lower.dim()
                && x
                    .coords()
                    .iter()
                    .zip(lower.coords().iter().zip(upper.coords()))
                    .all(|(c, (l, u))| l <= c && c <= u),
            Region::Ball { center, radius } => {
                x.dim() == center.dim() && x.distance_squared(center) <= *radius * *radius
            }
        }
    }

    /// Smallest box enclosing the region.
    pub fn bounding_box(&self) -> (Point<T>, Point<T>) {
        match self {
            Region::Box { lower, upper } => (*lower, *upper),
            Region::Ball { center, radius } => {
                let mut lo = *center;
                let mut hi = *center;
                for i in 0..center.dim() {
                    lo.coords[i] = center.coords[i] - *radius;
                    hi.coords[i] = center.coords[i] + *radius;
                }
                (lo, hi)
            }
        }
    }

    /// Whether the region is a subset of the window.
    pub fn inside(&self, window: &Window<T>) -> bool {
        let (lo, hi) = self.bounding_box();
        window.contains(&lo) && window.contains(&hi)
    }
}

/// A finite multiset of points in a window.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern<T> {
    points: Vec<Point<T>>,
    window: Window<T>,
}

impl<T: Scalar> PointPattern<T> {
    pub fn new(points: Vec<Point<T>>, window: Window<T>) -> Result<Self> {
        if points.iter().any(|p| !window.contains(p)) {
            return Err(Error::OutOfWindow);
        }
        Ok(PointPattern { points, window })
    }

    pub fn empty(window: Window<T>) -> Self {
        PointPattern {
            points: Vec::new(),
            window,
        }
    }

    /// Caller guarantees every point lies in the window.
    pub(crate) fn from_parts(points: Vec<Point<T>>, window: Window<T>) -> Self {
        debug_assert!(points.iter().all(|p| window.contains(p)));
        PointPattern { points, window }
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn window(&self) -> &Window<T> {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of atoms in `region`, with multiplicity.
    pub fn count_in(&self, region: &Region<T>) -> usize {
        self.points.iter().filter(|p| region.contains(p)).count()
    }

    /// Multiset union; `self`'s points come first.
    pub fn superpose(&self, other: &PointPattern<T>) -> Result<PointPattern<T>> {
        let mut out = self.clone();
        out.extend(other)?;
        Ok(out)
    }

    /// In-place multiset union.
    pub fn extend(&mut self, other: &PointPattern<T>) -> Result<()> {
        if self.window != other.window {
            return Err(Error::WindowMismatch);
        }
        self.points.extend_from_slice(&other.points);
        Ok(())
    }

    /// Appends one copy of `x`.
    pub fn add_atom(mut self, x: Point<T>) -> Result<PointPattern<T>> {
        if !self.window.contains(&x) {
            return Err(Error::OutOfWindow);
        }
        self.points.push(x);
        Ok(self)
    }

    /// Deletes exactly one copy of `x` (the last one, by exact coordinate match).
    pub fn remove_atom(mut self, x: &Point<T>) -> Result<PointPattern<T>> {
        let idx = self
            .points
            .iter()
            .rposition(|p| p == x)
            .ok_or(Error::AtomNotFound)?;
        self.points.remove(idx);
        Ok(self)
    }

    /// Pattern with the atom at `index` removed.
    pub fn without_index(&self, index: usize) -> PointPattern<T> {
        let mut points = self.points.clone();
        points.remove(index);
        PointPattern {
            points,
            window: self.window,
        }
    }

    /// Pattern without the atoms at two distinct indices.
    pub fn without_indices(&self, i: usize, j: usize) -> PointPattern<T> {
        let points = self
            .points
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i && *k != j)
            .map(|(_, p)| *p)
            .collect();
        PointPattern {
            points,
            window: self.window,
        }
    }

    /// `Φ^k(B_1 × … × B_k)`: ordered k-tuples of indices with `X_{j_i} ∈ B_i`.
    pub fn power_count(&self, boxes: &[Region<T>]) -> Result<u64> {
        if boxes.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(boxes.iter().map(|b| self.count_in(b) as u64).product())
    }

    /// `Φ^(k)(B_1 × … × B_k)`: like [`power_count`](Self::power_count) but
    /// only over tuples of pairwise distinct indices.
    ///
    /// Counts injective assignments of regions to atoms with a subset DP
    /// over the regions already filled; `O(n · k · 2^k)`.
    pub fn factorial_power_count(&self, boxes: &[Region<T>]) -> Result<u64> {
        let k = boxes.len();
        if k == 0 {
            return Err(Error::EmptyInput);
        }
        if k > 20 {
            return Err(Error::InvalidRegion("at most 20 factors supported".into()));
        }
        let full = (1usize << k) - 1;
        let mut ways = vec![0u64; full + 1];
        ways[0] = 1;
        for p in &self.points {
            let member: Vec<usize> = (0..k).filter(|&i| boxes[i].contains(p)).collect();
            if member.is_empty() {
                continue;
            }
            // Descending masks so each atom fills at most one region per pass.
            for mask in (0..full).rev() {
                let w = ways[mask];
                if w == 0 {
                    continue;
                }
                for &i in &member {
                    let bit = 1usize << i;
                    if mask & bit == 0 {
                        ways[mask | bit] += w;
                    }
                }
            }
        }
        Ok(ways[full])
    }

    /// Whether two atoms share identical coordinates.
    pub fn has_duplicates(&self) -> bool {
        let mut sorted: Vec<&Point<T>> = self.points.iter().collect();
        sorted.sort_by(|a, b| {
            a.coords()
                .iter()
                .zip(b.coords())
                .map(|(x, y)| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        sorted.windows(2).any(|w| w[0] == w[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point<f64>;

    fn pt(c: &[f64]) -> P {
        P::new(c).unwrap()
    }

    fn unit() -> Window<f64> {
        Window::unit(2).unwrap()
    }

    fn pat(pts: &[[f64; 2]]) -> PointPattern<f64> {
        PointPattern::new(pts.iter().map(|c| pt(c)).collect(), unit()).unwrap()
    }

    fn sq(lo: [f64; 2], hi: [f64; 2]) -> Region<f64> {
        Region::new_box(pt(&lo), pt(&hi)).unwrap()
    }

    #[test]
    fn point_validation() {
        assert!(P::new(&[]).is_err());
        assert!(P::new(&[0.0; 4]).is_err());
        assert!(P::new(&[f64::NAN]).is_err());
        assert!(P::new(&[f64::INFINITY, 0.0]).is_err());
        assert_eq!(pt(&[1.0, 2.0, 3.0]).dim(), 3);
    }

    #[test]
    fn window_validation() {
        assert!(Window::new(pt(&[0.0, 0.0]), pt(&[1.0, 0.0])).is_err());
        assert!(Window::new(pt(&[0.0]), pt(&[1.0, 1.0])).is_err());
        let w = Window::new(pt(&[0.0, -1.0]), pt(&[2.0, 1.0])).unwrap();
        assert_eq!(w.volume(), 4.0);
        assert!(w.contains(&pt(&[2.0, 1.0])));
        assert!(!w.contains(&pt(&[2.0, 1.0 + 1e-12])));
    }

    #[test]
    fn count_in_examples() {
        let empty = PointPattern::empty(unit());
        assert_eq!(empty.count_in(&sq([0.0, 0.0], [1.0, 1.0])), 0);

        let one = pat(&[[0.5, 0.5]]);
        let ball = Region::ball(pt(&[0.5, 0.5]), 0.1).unwrap();
        assert_eq!(one.count_in(&ball), 1);

        let p = pat(&[[0.1, 0.1], [0.1, 0.1], [0.9, 0.9]]);
        assert_eq!(p.count_in(&sq([0.0, 0.0], [0.2, 0.2])), 2);
    }

    #[test]
    fn closed_boundaries() {
        let p = pat(&[[0.2, 0.2], [0.5, 0.6]]);
        assert_eq!(p.count_in(&sq([0.0, 0.0], [0.2, 0.2])), 1);
        let ball = Region::ball(pt(&[0.5, 0.5]), 0.1).unwrap();
        assert_eq!(p.count_in(&ball), 1);
        let zero = Region::ball(pt(&[0.2, 0.2]), 0.0).unwrap();
        assert_eq!(p.count_in(&zero), 1);
    }

    #[test]
    fn superpose_examples() {
        let a = pat(&[[0.3, 0.3]]);
        let e = PointPattern::empty(unit());
        assert_eq!(e.superpose(&a).unwrap(), a);
        let aa = a.superpose(&a).unwrap();
        assert_eq!(aa.count_in(&Region::ball(pt(&[0.3, 0.3]), 0.0).unwrap()), 2);
        assert_eq!(aa.points()[0], a.points()[0]);

        let other = PointPattern::empty(Window::unit(1).unwrap());
        assert_eq!(a.superpose(&PointPattern::<f64>::empty(*other.window())), Err(Error::WindowMismatch));
    }

    #[test]
    fn atoms() {
        let x = pt(&[0.4, 0.7]);
        let e = PointPattern::empty(unit());
        let one = e.clone().add_atom(x).unwrap();
        assert_eq!(one.points(), &[x]);
        assert_eq!(one.clone().remove_atom(&x).unwrap(), e);
        let two = one.add_atom(x).unwrap();
        assert_eq!(two.remove_atom(&x).unwrap().len(), 1);
        assert_eq!(e.clone().remove_atom(&x), Err(Error::AtomNotFound));
        assert_eq!(e.add_atom(pt(&[1.5, 0.0])), Err(Error::OutOfWindow));
    }

    #[test]
    fn power_counts() {
        let b = sq([0.0, 0.0], [0.5, 0.5]);
        let far = sq([0.9, 0.9], [1.0, 1.0]);
        let p = pat(&[[0.1, 0.1], [0.2, 0.3]]);
        assert_eq!(p.power_count(&[b]).unwrap(), 2);
        assert_eq!(p.power_count(&[b, b]).unwrap(), 4);
        assert_eq!(p.power_count(&[b, far]).unwrap(), 0);
        assert_eq!(p.factorial_power_count(&[b, b]).unwrap(), 2);

        let single = pat(&[[0.1, 0.1]]);
        assert_eq!(single.factorial_power_count(&[b, b]).unwrap(), 0);

        let three = pat(&[[0.1, 0.1], [0.2, 0.2], [0.3, 0.3]]);
        assert_eq!(three.factorial_power_count(&[b, b, b]).unwrap(), 6);
        assert!(p.power_count(&[]).is_err());
    }

    #[test]
    fn duplicates_detected() {
        assert!(pat(&[[0.1, 0.2], [0.5, 0.5], [0.1, 0.2]]).has_duplicates());
        assert!(!pat(&[[0.1, 0.2], [0.2, 0.1]]).has_duplicates());
    }

    #[test]
    fn uniform_samples_inside() {
        let w = Window::new(pt(&[-1.0, 2.0]), pt(&[0.0, 2.5])).unwrap();
        let mut rng = RngState::from_seed(3);
        for _ in 0..1000 {
            assert!(w.contains(&w.sample_uniform(&mut rng)));
        }
    }
}
