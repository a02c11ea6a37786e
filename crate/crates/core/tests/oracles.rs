//! Library results checked against independent computations.

use std::f64::consts::TAU;

use ergolab::decompose::strongly_connected_components;
use ergolab::ergopt::max_birkhoff_over_periodic;
use ergolab::systems::{Point, System};
use num_rational::Ratio;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use proptest::prelude::*;

/// Maximum of periodic averages of `phi` for the doubling map, by direct
/// iteration of every point `k / (2^p - 1)` in floating point.
fn brute_force_periodic_max(phi: impl Fn(f64) -> f64, max_period: u32) -> (f64, u32) {
    let mut best = (f64::NEG_INFINITY, 0);
    for p in 1..=max_period {
        let q = (1u64 << p) - 1;
        for k in 0..q {
            let mut j = k;
            let mut sum = 0.0;
            let mut minimal = true;
            for step in 0..p {
                sum += phi(j as f64 / q as f64);
                j = (2 * j) % q;
                if step + 1 < p && j == k {
                    minimal = false;
                    break;
                }
            }
            if minimal && sum / p as f64 > best.0 + 1e-15 {
                best = (sum / p as f64, p);
            }
        }
    }
    best
}

#[test]
fn sine_maximum_over_period_twelve() {
    let phi = |x: f64| 0.5 * (1.0 + (TAU * x).sin());
    let r = max_birkhoff_over_periodic(&System::doubling(), |p: Point| phi(p.x()), 12).unwrap();
    let (oracle, period) = brute_force_periodic_max(phi, 12);
    assert!((r.value - oracle).abs() < 1e-12);
    assert_eq!(r.witness.period, period);
    // Frozen from the oracle above.
    assert!((r.value - 0.7420614591379636).abs() < 1e-12);
    assert_eq!(r.witness.period, 4);
    assert_eq!(r.witness.points[0].0[0], Ratio::new(1, 15));
}

#[test]
fn cosine_maximum_is_the_fixed_point() {
    let phi = |x: f64| 0.5 * (1.0 + (TAU * x).cos());
    let r = max_birkhoff_over_periodic(&System::doubling(), |p: Point| phi(p.x()), 12).unwrap();
    assert_eq!(r.value, 1.0);
    assert_eq!(brute_force_periodic_max(phi, 12), (1.0, 1));
}

fn random_graph() -> impl Strategy<Value = Vec<Vec<usize>>> {
    (1usize..40).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0..n, 0..4), n))
}

proptest! {
    #[test]
    fn components_match_petgraph(edges in random_graph()) {
        let ours = strongly_connected_components(&edges);
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..edges.len()).map(|_| g.add_node(())).collect();
        for (v, succ) in edges.iter().enumerate() {
            for &w in succ {
                g.add_edge(nodes[v], nodes[w], ());
            }
        }
        let mut theirs: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        theirs.sort();
        let mut mine = ours.members.clone();
        mine.sort();
        prop_assert_eq!(mine, theirs);
        // Reverse topological order: edges never point to a later component.
        for (v, succ) in edges.iter().enumerate() {
            for &w in succ {
                prop_assert!(ours.component[w] <= ours.component[v]);
            }
        }
    }
}
