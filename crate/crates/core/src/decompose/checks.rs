use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use super::{strongly_connected_components, TransitionGraph};
use crate::grid::{CellSet, GridPartition};
use crate::systems::{Point, System};
use crate::{Error, Result};

/// Points per ball in the sensitivity estimate.
const BALL_SAMPLES: usize = 17;
/// Upper bound on the number of ball centers examined.
const MAX_CENTERS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transitivity {
    pub strongly_transitive: bool,
    /// A source cell and a cell it cannot reach.
    pub witness: Option<(usize, usize)>,
}

fn reachable(graph: &TransitionGraph, from: usize) -> Vec<bool> {
    let mut seen = vec![false; graph.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &graph.edges[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Whether every cell reaches every cell. On failure the witness is the
/// smallest failing source and the largest cell it misses.
pub fn strong_transitivity_check(graph: &TransitionGraph) -> Transitivity {
    if strongly_connected_components(&graph.edges).len() <= 1 {
        return Transitivity { strongly_transitive: true, witness: None };
    }
    for source in 0..graph.len() {
        let seen = reachable(graph, source);
        if let Some(missed) = seen.iter().rposition(|&s| !s) {
            return Transitivity { strongly_transitive: false, witness: Some((source, missed)) };
        }
    }
    unreachable!("a graph with several components has an unreachable pair")
}

/// Cells on cycles reachable from `cell`.
pub fn large_omega_estimate(graph: &TransitionGraph, cell: usize) -> CellSet {
    let comps = strongly_connected_components(&graph.edges);
    reachable(graph, cell)
        .into_iter()
        .enumerate()
        .filter(|&(v, seen)| seen && (comps.members[comps.component[v]].len() > 1 || graph.has_edge(v, v)))
        .map(|(v, _)| v)
        .collect()
}

/// Seventeen points of the ball of radius `eps` around `x`: evenly spaced
/// along a segment in one dimension, and the center plus two rings of
/// eight in two.
fn ball_samples(dim: usize, x: Point, eps: f64) -> Vec<Point> {
    if dim == 1 {
        (0..BALL_SAMPLES).map(|i| Point::new(x.x() + eps * (i as f64 / 8.0 - 1.0))).collect()
    } else {
        let mut out = vec![x];
        for ring in [0.5, 1.0] {
            for k in 0..8 {
                let a = std::f64::consts::TAU * k as f64 / 8.0;
                out.push(Point::xy(x.x() + ring * eps * a.cos(), x.y() + ring * eps * a.sin()));
            }
        }
        out
    }
}

fn diameter(space: crate::systems::Space, pts: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            d = d.max(space.distance(*a, *b));
        }
    }
    d
}

/// `min_x max_{n <= n_max} diam f^n(B_eps(x) ∩ A)` over ball centers at
/// the midpoints of (up to 4096 evenly chosen) cells of `A`.
pub fn sensitive_dependence_estimate(
    system: &System,
    grid: &GridPartition,
    cells: &[usize],
    n_max: usize,
    eps: f64,
) -> Result<f64> {
    if cells.is_empty() {
        return Err(Error::contract("the set A is empty"));
    }
    if grid.space != system.space() {
        return Err(Error::contract("grid and system live on different spaces"));
    }
    if !(eps > 0.0) {
        return Err(Error::config("ball radius must be positive"));
    }
    let set: CellSet = cells.iter().copied().collect();
    let stride = cells.len().div_ceil(MAX_CENTERS);
    let space = system.space();
    let values: Vec<f64> = cells
        .par_iter()
        .step_by(stride)
        .map(|&cell| {
            let x = grid.center(cell);
            let mut pts: Vec<Point> = ball_samples(grid.dimension(), x, eps)
                .into_iter()
                .map(|p| space.reduce(p))
                .filter(|&p| space.distance(p, x) <= eps && set.contains(&grid.cell_of(p)))
                .collect();
            let mut best = diameter(space, &pts);
            for _ in 0..n_max {
                for p in &mut pts {
                    *p = system.evaluate(*p);
                }
                best = best.max(diameter(space, &pts));
            }
            best
        })
        .collect();
    Ok(values.into_iter().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::super::build_transition_graph;
    use super::*;

    #[test]
    fn transitivity_examples() {
        let g = build_transition_graph(&System::doubling(), 64, 5, 1, 0).unwrap();
        assert!(strong_transitivity_check(&g).strongly_transitive);
        let g = build_transition_graph(&System::tent(), 64, 5, 1, 0).unwrap();
        assert!(strong_transitivity_check(&g).strongly_transitive);
        let g = build_transition_graph(&System::contraction(0.5).unwrap(), 64, 5, 1, 0).unwrap();
        let t = strong_transitivity_check(&g);
        assert_eq!(t.witness, Some((0, 63)));
        assert_eq!(large_omega_estimate(&g, 63), CellSet::from([0, 1, 2]));
    }

    #[test]
    fn sensitivity_examples() {
        let grid = GridPartition::new(crate::systems::Space::Circle, 64).unwrap();
        let all: Vec<usize> = (0..64).collect();
        let d = sensitive_dependence_estimate(&System::doubling(), &grid, &all, 10, 1.0 / 64.0).unwrap();
        assert!(d >= 0.5, "{d}");
        let tent_grid = GridPartition::new(crate::systems::Space::Interval, 64).unwrap();
        let t = sensitive_dependence_estimate(&System::tent(), &tent_grid, &all, 10, 1.0 / 64.0).unwrap();
        assert!(t >= 0.5, "{t}");
        let c = sensitive_dependence_estimate(&System::contraction(0.5).unwrap(), &tent_grid, &[0], 10, 1.0 / 64.0)
            .unwrap();
        assert!(c <= 1.0 / 64.0);
    }
}
