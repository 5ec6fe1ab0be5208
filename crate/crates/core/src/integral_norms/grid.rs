use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Minimum number of cells for a radial grid.
pub const MIN_CELLS: usize = 64;
/// Default number of cells used by the checks and profile emission.
pub const DEFAULT_CELLS: usize = 4096;

/// Graded radial discretization `r_min + (r_max - r_min) (i / cells)^gamma`,
/// `i = 0..=cells`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid<T> {
    r_min: T,
    r_max: T,
    cells: usize,
    gamma: T,
    nodes: Vec<T>,
}

impl<T: Real> RadialGrid<T> {
    pub fn new(r_min: T, r_max: T, cells: usize, gamma: T) -> Result<Self> {
        if cells < MIN_CELLS {
            return Err(Error::Parameter(format!(
                "radial grid needs at least {MIN_CELLS} cells, got {cells}"
            )));
        }
        if !(gamma >= T::one()) {
            return Err(Error::Parameter(format!(
                "grading exponent must be >= 1, got {gamma}"
            )));
        }
        if !(r_min >= T::zero() && r_max > r_min) || !r_max.is_finite() {
            return Err(Error::Ordering(format!(
                "radial grid requires 0 <= r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        let span = r_max - r_min;
        let m = T::from_usize_lossy(cells);
        let mut nodes: Vec<T> = (0..=cells)
            .map(|i| r_min + span * (T::from_usize_lossy(i) / m).powf(gamma))
            .collect();
        nodes[cells] = r_max;
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parameter(format!(
                "grid nodes not strictly increasing (cells {cells}, gamma {gamma}, span {span})"
            )));
        }
        Ok(RadialGrid {
            r_min,
            r_max,
            cells,
            gamma,
            nodes,
        })
    }

    pub fn uniform(r_min: T, r_max: T, cells: usize) -> Result<Self> {
        Self::new(r_min, r_max, cells, T::one())
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn r_min(&self) -> T {
        self.r_min
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// Smallest gap to a neighbouring node.
    pub fn local_spacing(&self, i: usize) -> T {
        let n = &self.nodes;
        let left = if i > 0 { n[i] - n[i - 1] } else { T::infinity() };
        let right = if i + 1 < n.len() {
            n[i + 1] - n[i]
        } else {
            T::infinity()
        };
        left.min(right)
    }

    pub fn summary(&self) -> GridSummary {
        GridSummary {
            r_min: self.r_min.as_f64(),
            r_max: self.r_max.as_f64(),
            cells: self.cells,
            gamma: self.gamma.as_f64(),
        }
    }
}

/// Grid metadata carried by check reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub r_min: f64,
    pub r_max: f64,
    pub cells: usize,
    pub gamma: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_nodes_are_increasing_and_hit_endpoints() {
        let g = RadialGrid::new(1e-6, 2.0, 4096, 5.0).unwrap();
        assert_eq!(g.nodes().len(), 4097);
        assert_eq!(g.nodes()[0], 1e-6);
        assert_eq!(g.nodes()[4096], 2.0);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_small_or_bad_grids() {
        assert!(RadialGrid::new(0.0, 1.0, 63, 1.0).is_err());
        assert!(RadialGrid::new(0.0, 1.0, 64, 0.5).is_err());
        assert!(RadialGrid::new(1.0, 1.0, 64, 1.0).is_err());
    }

    #[test]
    fn spacing_at_interior_node() {
        let g = RadialGrid::<f64>::uniform(0.0, 1.0, 64).unwrap();
        assert!((g.local_spacing(10) - 1.0 / 64.0).abs() < 1e-15);
    }
}
