use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::grid::GridPartition;
use crate::seed::{self, Domain};
use crate::systems::{Point, System};
use crate::{Error, Result};

pub const MIN_RESOLUTION: usize = 8;
pub const DEFAULT_PADDING: usize = 1;

/// Relative inset that keeps a right/top corner sample inside its
/// half-open cell.
const CORNER_INSET: f64 = 1e-9;

/// Corners, center and as many jittered points again as there are corners.
pub fn default_samples(dimension: usize) -> usize {
    2 * (1 << dimension) + 1
}

/// Directed graph on grid cells: `c -> d` when the image of a sample of
/// `c`, dilated by `padding` cells, meets `d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionGraph {
    pub grid: GridPartition,
    /// Sorted, deduplicated out-neighbors per cell.
    pub edges: Vec<Vec<usize>>,
    pub samples: usize,
    pub padding: usize,
    pub seed: u64,
}

impl TransitionGraph {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges[from].binary_search(&to).is_ok()
    }

    /// `src,dst` rows with a header.
    pub fn edge_csv(&self) -> String {
        let mut out = String::from("src,dst\n");
        for (src, outs) in self.edges.iter().enumerate() {
            for dst in outs {
                out.push_str(&format!("{src},{dst}\n"));
            }
        }
        out
    }
}

/// Sample points of a cell: the `2^dim` corners (upper corners pulled just
/// inside unless the cell is closed on that side), the center, then seeded
/// uniform jitter.
pub(crate) fn cell_samples(grid: &GridPartition, cell: usize, samples: usize, seed: u64) -> Vec<Point> {
    let dim = grid.dimension();
    let (lo, hi) = grid.bounds(cell);
    let coords = grid.coords(cell);
    let periodic = grid.space.periodic();
    let upper = |axis: usize| {
        let closed = !periodic[axis] && coords[axis] + 1 == grid.resolution[axis];
        if closed {
            hi.0[axis]
        } else {
            hi.0[axis] - grid.width(axis) * CORNER_INSET
        }
    };
    let mut out = Vec::with_capacity(samples);
    for corner in 0..(1usize << dim) {
        let mut p = lo;
        for axis in 0..dim {
            if corner >> (dim - 1 - axis) & 1 == 1 {
                p.0[axis] = upper(axis);
            }
        }
        out.push(p);
    }
    out.push(grid.center(cell));
    let mut rng = seed::stream(seed, Domain::CellJitter, cell as u64);
    while out.len() < samples {
        let mut p = lo;
        for axis in 0..dim {
            p.0[axis] = lo.0[axis] + rng.gen::<f64>() * (1.0 - CORNER_INSET) * (hi.0[axis] - lo.0[axis]);
        }
        out.push(grid.space.reduce(p));
    }
    out
}

/// Builds the padded transition graph in parallel over cells.
pub fn build_transition_graph(
    system: &System,
    m: usize,
    samples: usize,
    padding: usize,
    seed: u64,
) -> Result<TransitionGraph> {
    let grid = GridPartition::new(system.space(), m)?;
    build_on_grid(system, grid, samples, padding, seed)
}

pub(crate) fn build_on_grid(
    system: &System,
    grid: GridPartition,
    samples: usize,
    padding: usize,
    seed: u64,
) -> Result<TransitionGraph> {
    if grid.resolution.iter().take(grid.dimension()).any(|&r| r < MIN_RESOLUTION) {
        return Err(Error::config(format!("grid resolution must be at least {MIN_RESOLUTION}")));
    }
    let min_samples = (1usize << grid.dimension()) + 1;
    if samples < min_samples.max(4) {
        return Err(Error::config(format!("at least {} samples per cell are required", min_samples.max(4))));
    }
    if padding > 1 {
        return Err(Error::config("padding must be 0 or 1"));
    }
    let edges = (0..grid.len())
        .into_par_iter()
        .map(|cell| {
            let mut out: Vec<usize> = Vec::new();
            for p in cell_samples(&grid, cell, samples, seed) {
                let target = grid.cell_of(system.evaluate(p));
                if padding == 0 {
                    out.push(target);
                } else {
                    out.extend(grid.neighborhood(target, padding));
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    Ok(TransitionGraph { grid, edges, samples, padding, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_first_cell() {
        let g = build_transition_graph(&System::doubling(), 8, 3, 0, 1);
        assert!(g.is_err());
        let g = build_transition_graph(&System::doubling(), 8, 5, 0, 1).unwrap();
        assert_eq!(g.edges[0], vec![0, 1]);
    }

    #[test]
    fn contraction_last_cell_is_closed() {
        let g = build_transition_graph(&System::contraction(0.5).unwrap(), 8, 5, 0, 1).unwrap();
        assert_eq!(g.edges[7], vec![3, 4]);
    }

    #[test]
    fn padding_dilates() {
        let sys = System::logistic(0.9).unwrap();
        let g0 = build_transition_graph(&sys, 64, 5, 0, 3).unwrap();
        let g1 = build_transition_graph(&sys, 64, 5, 1, 3).unwrap();
        for (a, b) in g0.edges.iter().zip(&g1.edges) {
            assert!(a.iter().all(|c| b.contains(c)));
        }
    }

    #[test]
    fn samples_stay_in_their_cell() {
        for space_sys in [System::doubling(), System::cat_map(), System::tent()] {
            let grid = GridPartition::new(space_sys.space(), 9).unwrap();
            for cell in 0..grid.len() {
                for p in cell_samples(&grid, cell, 9, 5) {
                    assert_eq!(grid.cell_of(p), cell);
                }
            }
        }
    }
}
