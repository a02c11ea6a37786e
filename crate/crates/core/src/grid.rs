//! Uniform grids on the phase spaces.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::systems::{Point, Space};
use crate::{Error, Result};

/// A set of cell indices, ordered.
pub type CellSet = BTreeSet<usize>;

/// Uniform partition of a space into cells of width `1 / m` per axis.
///
/// Cells are half-open except the last cell of a non-periodic axis, which
/// contains the right endpoint. Indexing is row-major with the first
/// coordinate most significant: `index = i_x * m_y + i_y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridPartition {
    pub space: Space,
    pub resolution: [usize; 2],
}

impl GridPartition {
    pub fn new(space: Space, m: usize) -> Result<Self> {
        let resolution = if space.dimension() == 1 { [m, 1] } else { [m, m] };
        GridPartition::with_resolution(space, resolution)
    }

    pub fn with_resolution(space: Space, resolution: [usize; 2]) -> Result<Self> {
        if resolution[0] == 0 || resolution[1] == 0 {
            return Err(Error::config("grid resolution must be positive"));
        }
        if space.dimension() == 1 && resolution[1] != 1 {
            return Err(Error::config("one-dimensional grids have a single row"));
        }
        Ok(GridPartition { space, resolution })
    }

    pub fn dimension(&self) -> usize {
        self.space.dimension()
    }

    pub fn len(&self) -> usize {
        self.resolution[0] * self.resolution[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn width(&self, axis: usize) -> f64 {
        1.0 / self.resolution[axis] as f64
    }

    /// Left edge of cell `i` along `axis`.
    #[inline]
    fn edge(&self, axis: usize, i: usize) -> f64 {
        i as f64 / self.resolution[axis] as f64
    }

    /// Cell index along one axis, consistent with [`Self::bounds`] even where
    /// `v * m` rounds across an integer.
    #[inline]
    fn axis_cell(&self, axis: usize, v: f64) -> usize {
        let m = self.resolution[axis];
        let i = (v * m as f64).floor();
        if i < 0.0 {
            return 0;
        }
        let mut i = (i as usize).min(m - 1);
        if i > 0 && v < self.edge(axis, i) {
            i -= 1;
        } else if i + 1 < m && v >= self.edge(axis, i + 1) {
            i += 1;
        }
        i
    }

    #[inline]
    pub fn cell_of(&self, p: Point) -> usize {
        let ix = self.axis_cell(0, p.x());
        if self.dimension() == 1 {
            ix
        } else {
            ix * self.resolution[1] + self.axis_cell(1, p.y())
        }
    }

    #[inline]
    pub fn coords(&self, cell: usize) -> [usize; 2] {
        [cell / self.resolution[1], cell % self.resolution[1]]
    }

    #[inline]
    pub fn index(&self, coords: [usize; 2]) -> usize {
        coords[0] * self.resolution[1] + coords[1]
    }

    /// Lower-left corner and upper-right corner.
    pub fn bounds(&self, cell: usize) -> (Point, Point) {
        let [i, j] = self.coords(cell);
        if self.dimension() == 1 {
            (Point::new(self.edge(0, i)), Point::new(self.edge(0, i + 1)))
        } else {
            (Point::xy(self.edge(0, i), self.edge(1, j)), Point::xy(self.edge(0, i + 1), self.edge(1, j + 1)))
        }
    }

    pub fn center(&self, cell: usize) -> Point {
        let (lo, hi) = self.bounds(cell);
        if self.dimension() == 1 {
            Point::new(0.5 * (lo.x() + hi.x()))
        } else {
            Point::xy(0.5 * (lo.x() + hi.x()), 0.5 * (lo.y() + hi.y()))
        }
    }

    /// Cells within Chebyshev radius `r` (in cells) of `cell`, wrapping on
    /// periodic axes and clipping otherwise. Includes `cell`.
    pub fn neighborhood(&self, cell: usize, r: usize) -> Vec<usize> {
        let c = self.coords(cell);
        let periodic = self.space.periodic();
        let axis_range = |axis: usize| -> Vec<usize> {
            let m = self.resolution[axis];
            if m == 1 {
                return vec![0];
            }
            let r = r as i64;
            let mut out: Vec<usize> = (-r..=r)
                .filter_map(|d| {
                    let v = c[axis] as i64 + d;
                    if periodic[axis] {
                        Some(v.rem_euclid(m as i64) as usize)
                    } else if v >= 0 && v < m as i64 {
                        Some(v as usize)
                    } else {
                        None
                    }
                })
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        };
        let xs = axis_range(0);
        let ys = axis_range(1);
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &x in &xs {
            for &y in &ys {
                out.push(self.index([x, y]));
            }
        }
        out
    }

    /// Cell-index distance along each axis (wrap-aware), combined with max.
    pub fn cell_distance(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let periodic = self.space.periodic();
        (0..2)
            .map(|axis| {
                let m = self.resolution[axis];
                let d = ca[axis].abs_diff(cb[axis]);
                if periodic[axis] {
                    d.min(m - d)
                } else {
                    d
                }
            })
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_bijective() {
        let g = GridPartition::new(Space::Torus, 7).unwrap();
        for cell in 0..g.len() {
            assert_eq!(g.index(g.coords(cell)), cell);
            assert_eq!(g.cell_of(g.center(cell)), cell);
        }
    }

    #[test]
    fn right_endpoint_of_interval_in_last_cell() {
        let g = GridPartition::new(Space::Interval, 8).unwrap();
        assert_eq!(g.cell_of(Point::new(1.0)), 7);
        assert_eq!(g.cell_of(Point::new(0.0)), 0);
        assert_eq!(g.cell_of(Point::new(0.125)), 1);
    }

    #[test]
    fn neighborhoods_wrap_on_circle_only() {
        let c = GridPartition::new(Space::Circle, 8).unwrap();
        assert_eq!(c.neighborhood(0, 1), vec![0, 1, 7]);
        let i = GridPartition::new(Space::Interval, 8).unwrap();
        assert_eq!(i.neighborhood(0, 1), vec![0, 1]);
        let t = GridPartition::new(Space::CircleInterval, 4).unwrap();
        // base wraps, fiber clips
        assert_eq!(t.neighborhood(t.index([0, 0]), 1).len(), 6);
    }

    #[test]
    fn cell_distance_wraps() {
        let c = GridPartition::new(Space::Circle, 10).unwrap();
        assert_eq!(c.cell_distance(0, 9), 1);
        let i = GridPartition::new(Space::Interval, 10).unwrap();
        assert_eq!(i.cell_distance(0, 9), 9);
    }
}
