use serde::Serialize;

use super::{condensation, strongly_connected_components, TransitionGraph};
use crate::grid::GridPartition;

/// Side length, in cells, of the block an attractor must contain to count
/// as fat.
pub const DEFAULT_FAT_BLOCK: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasinLabel {
    /// Reaches exactly the attractor with this index.
    Basin(usize),
    /// Reaches two or more attractors.
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttractorReport {
    /// Terminal components, ordered by smallest cell.
    pub attractors: Vec<Vec<usize>>,
    pub basins: Vec<Vec<usize>>,
    pub labels: Vec<BasinLabel>,
    pub undecided: Vec<usize>,
    /// Cells on a cycle of the graph.
    pub omega: Vec<usize>,
    pub fat: Vec<bool>,
    /// Side of the largest full cell block inside each attractor.
    pub inscribed_block: Vec<usize>,
    /// Radius of the ball inscribed in that block, capped at half the
    /// diameter of the space.
    pub delta_grid: Vec<f64>,
    pub fat_block: usize,
}

impl AttractorReport {
    pub fn count(&self) -> usize {
        self.attractors.len()
    }

    /// `cell,label` rows; the label is the attractor index or `undecided`.
    pub fn raster_csv(&self) -> String {
        let mut out = String::from("cell,label\n");
        for (cell, label) in self.labels.iter().enumerate() {
            match label {
                BasinLabel::Basin(j) => out.push_str(&format!("{cell},{j}\n")),
                BasinLabel::Undecided => out.push_str(&format!("{cell},undecided\n")),
            }
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Reach {
    None,
    One(usize),
    Many,
}

impl Reach {
    fn join(self, other: Reach) -> Reach {
        match (self, other) {
            (Reach::None, r) | (r, Reach::None) => r,
            (Reach::One(a), Reach::One(b)) if a == b => Reach::One(a),
            _ => Reach::Many,
        }
    }
}

/// Terminal components as attractors, basins as the cells reaching a
/// single terminal component.
pub fn attractors_and_basins(graph: &TransitionGraph, fat_block: usize) -> AttractorReport {
    let comps = strongly_connected_components(&graph.edges);
    let succ = condensation(graph, &comps);

    // Terminal components, renumbered by their smallest cell.
    let mut terminal: Vec<usize> = (0..comps.len()).filter(|&c| succ[c].is_empty()).collect();
    terminal.sort_by_key(|&c| comps.members[c][0]);
    let mut attractor_of = vec![None; comps.len()];
    for (j, &c) in terminal.iter().enumerate() {
        attractor_of[c] = Some(j);
    }

    // Components come out of Tarjan sinks-first, so successors are final
    // before they are read.
    let mut reach = vec![Reach::None; comps.len()];
    for c in 0..comps.len() {
        reach[c] = match attractor_of[c] {
            Some(j) => Reach::One(j),
            None => succ[c].iter().fold(Reach::None, |acc, &d| acc.join(reach[d])),
        };
    }

    let mut basins = vec![Vec::new(); terminal.len()];
    let mut undecided = Vec::new();
    let labels: Vec<BasinLabel> = (0..graph.len())
        .map(|cell| match reach[comps.component[cell]] {
            Reach::One(j) => {
                basins[j].push(cell);
                BasinLabel::Basin(j)
            }
            Reach::Many => {
                undecided.push(cell);
                BasinLabel::Undecided
            }
            Reach::None => unreachable!("every cell has an out-edge, so reaches a terminal component"),
        })
        .collect();

    let omega: Vec<usize> = (0..graph.len())
        .filter(|&v| comps.members[comps.component[v]].len() > 1 || graph.has_edge(v, v))
        .collect();

    let attractors: Vec<Vec<usize>> = terminal.iter().map(|&c| comps.members[c].clone()).collect();
    let inscribed_block: Vec<usize> = attractors.iter().map(|a| largest_block(&graph.grid, a)).collect();
    let half_diameter = graph.grid.space.diameter() / 2.0;
    let m = graph.grid.resolution[0] as f64;
    let delta_grid = inscribed_block.iter().map(|&k| (k as f64 / (2.0 * m)).min(half_diameter)).collect();
    let fat = inscribed_block.iter().map(|&k| k >= fat_block).collect();
    AttractorReport { attractors, basins, labels, undecided, omega, fat, inscribed_block, delta_grid, fat_block }
}

/// Side of the largest full `k x k` block (a run of `k` cells in one
/// dimension) inside `cells`, wrapping on periodic axes.
pub(crate) fn largest_block(grid: &GridPartition, cells: &[usize]) -> usize {
    let [mx, my] = grid.resolution;
    let periodic = grid.space.periodic();
    let mut inside = vec![false; grid.len()];
    for &c in cells {
        inside[c] = true;
    }
    let ex = if periodic[0] { 2 * mx } else { mx };
    if grid.dimension() == 1 {
        let (mut best, mut run) = (0, 0);
        for i in 0..ex {
            run = if inside[i % mx] { run + 1 } else { 0 };
            best = best.max(run);
        }
        return best.min(mx);
    }
    let ey = if periodic[1] { 2 * my } else { my };
    let mut prev = vec![0usize; ey];
    let mut best = 0;
    for i in 0..ex {
        let mut cur = vec![0usize; ey];
        for j in 0..ey {
            if inside[grid.index([i % mx, j % my])] {
                cur[j] = if j == 0 { 1 } else { 1 + prev[j].min(cur[j - 1]).min(prev[j - 1]) };
                best = best.max(cur[j]);
            }
        }
        prev = cur;
    }
    best.min(mx.min(my))
}
