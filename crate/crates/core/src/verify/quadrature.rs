//! Tensor midpoint rule on boxes.

use crate::error::Result;
use crate::pattern::{Point, Region, Window, MAX_DIM};
use crate::scalar::Scalar;

/// Node budget for any grid.
pub const MAX_NODES: usize = 4096;

/// Nodes per axis after applying [`MAX_NODES`] in dimension `dim`.
pub fn capped_nodes_per_axis(requested: usize, dim: usize) -> usize {
    let mut cap = 1usize;
    while (cap + 1).pow(dim as u32) <= MAX_NODES {
        cap += 1;
    }
    requested.clamp(1, cap)
}

/// A quadrature node and its cell volume.
#[derive(Debug, Clone, Copy)]
pub struct Node<T> {
    pub point: Point<T>,
    pub weight: f64,
}

/// Midpoint nodes of a regular grid on `window`.
pub fn midpoint_grid<T: Scalar>(window: &Window<T>, nodes_per_axis: usize) -> Result<Vec<Node<T>>> {
    let dim = window.dim();
    let n = capped_nodes_per_axis(nodes_per_axis, dim);
    let lo: Vec<f64> = window.lower().coords().iter().map(|c| c.f64()).collect();
    let hi: Vec<f64> = window.upper().coords().iter().map(|c| c.f64()).collect();
    let h: Vec<f64> = lo.iter().zip(&hi).map(|(l, u)| (u - l) / n as f64).collect();
    let cell: f64 = h.iter().product();
    let total = n.pow(dim as u32);
    let mut out = Vec::with_capacity(total);
    let mut c = [T::zero(); MAX_DIM];
    for idx in 0..total {
        let mut rest = idx;
        for axis in 0..dim {
            let i = rest % n;
            rest /= n;
            c[axis] = T::of(lo[axis] + (i as f64 + 0.5) * h[axis]);
        }
        out.push(Node {
            point: Point::new(&c[..dim])?,
            weight: cell,
        });
    }
    Ok(out)
}

/// Midpoint nodes covering `region ∩ window`.
pub fn region_grid<T: Scalar>(
    window: &Window<T>,
    region: &Region<T>,
    nodes_per_axis: usize,
) -> Result<Vec<Node<T>>> {
    let (rlo, rhi) = region.bounding_box();
    let lo: Vec<T> = rlo
        .coords()
        .iter()
        .zip(window.lower().coords())
        .map(|(&a, &b)| a.max(b))
        .collect();
    let hi: Vec<T> = rhi
        .coords()
        .iter()
        .zip(window.upper().coords())
        .map(|(&a, &b)| a.min(b))
        .collect();
    if lo.iter().zip(&hi).any(|(l, u)| !(l < u)) {
        return Ok(Vec::new());
    }
    let clip = Window::new(Point::new(&lo)?, Point::new(&hi)?)?;
    Ok(midpoint_grid(&clip, nodes_per_axis)?
        .into_iter()
        .filter(|n| region.contains(&n.point))
        .collect())
}

/// `Σ_nodes weight · f(node)`.
pub fn integrate<T: Scalar>(nodes: &[Node<T>], f: impl Fn(&Point<T>) -> Result<f64>) -> Result<f64> {
    nodes.iter().try_fold(0.0, |acc, n| Ok(acc + n.weight * f(&n.point)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_cap() {
        assert_eq!(capped_nodes_per_axis(64, 2), 64);
        assert_eq!(capped_nodes_per_axis(100, 2), 64);
        assert_eq!(capped_nodes_per_axis(64, 3), 16);
        assert_eq!(capped_nodes_per_axis(5000, 1), 4096);
        assert_eq!(capped_nodes_per_axis(0, 2), 1);
    }

    #[test]
    fn midpoint_exact_for_linear() {
        let w = Window::<f64>::new(Point::new(&[0.0, 1.0]).unwrap(), Point::new(&[2.0, 2.0]).unwrap()).unwrap();
        let nodes = midpoint_grid(&w, 7).unwrap();
        assert_eq!(nodes.len(), 49);
        let v = integrate(&nodes, |p| Ok(1.0 + 3.0 * p.coords()[0] - p.coords()[1])).unwrap();
        // ∫∫ (1 + 3x − y) over [0,2]×[1,2] = 2 + 6 − 3
        assert!((v - 5.0).abs() < 1e-12);
    }

    #[test]
    fn region_subgrid() {
        let w = Window::<f64>::unit(2).unwrap();
        let b = Region::new_box(Point::new(&[0.5, 0.5]).unwrap(), Point::new(&[1.5, 0.75]).unwrap()).unwrap();
        let nodes = region_grid(&w, &b, 8).unwrap();
        let area: f64 = nodes.iter().map(|n| n.weight).sum();
        assert!((area - 0.125).abs() < 1e-12);
    }
}
