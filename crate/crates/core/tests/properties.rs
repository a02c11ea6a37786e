//! Invariants over randomized inputs.

use ergolab::boweneye::{simulate, SaddleParams};
use ergolab::decompose::{build_transition_graph, default_samples};
use ergolab::ergopt::{block_ends, construct_oscillating_orbit, PeriodicOrbit};
use ergolab::orbitstats::{empirical_measure, measure_distance, EmpiricalMeasure, Schedule, TestFunctionFamily};
use ergolab::systems::{Point, System, Word};
use ergolab::{GridPartition, Space};
use proptest::prelude::*;

fn histogram(m: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..50, m).prop_filter("nonempty", |c| c.iter().any(|&v| v > 0))
}

proptest! {
    #[test]
    fn distance_is_a_metric(a in histogram(32), b in histogram(32), c in histogram(32)) {
        let grid = GridPartition::new(Space::Circle, 32).unwrap();
        let family = TestFunctionFamily::default_for(1);
        let (a, b, c) = (
            EmpiricalMeasure::from_counts(grid, &a).unwrap(),
            EmpiricalMeasure::from_counts(grid, &b).unwrap(),
            EmpiricalMeasure::from_counts(grid, &c).unwrap(),
        );
        let d = |x: &EmpiricalMeasure, y: &EmpiricalMeasure| measure_distance(x, y, &family).unwrap();
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &b) >= 0.0 && d(&a, &b) <= 1.0);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
    }

    #[test]
    fn measures_are_probabilities(x in 0.0f64..1.0, t in 0.5f64..=1.0, n in 2u64..5000) {
        let mu = empirical_measure(&System::logistic(t).unwrap(), Point::new(x), n, 50, 0).unwrap();
        prop_assert!((mu.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schedules_increase_to_the_budget(ratio in 1.01f64..3.0, n in 1u64..1_000_000) {
        let s = Schedule { ratio, tail_start: None };
        let c = s.checkpoints(n);
        prop_assert!(c.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(c.last().copied(), Some(n));
    }

    #[test]
    fn padding_only_adds_edges(t in 0.5f64..=1.0, m in 8usize..96, seed in 0u64..4) {
        let system = System::logistic(t).unwrap();
        let samples = default_samples(1);
        let thin = build_transition_graph(&system, m, samples, 0, seed).unwrap();
        let fat = build_transition_graph(&system, m, samples, 1, seed).unwrap();
        for v in 0..thin.len() {
            for &w in &thin.edges[v] {
                prop_assert!(fat.has_edge(v, w));
            }
        }
    }

    #[test]
    fn bowen_fractions_are_scale_free(c in 0.1f64..10.0, a in 1.1f64..4.0, b in 0.3f64..2.0) {
        let base = SaddleParams::new((-a, b), (-a, b), 60).unwrap();
        let scaled = SaddleParams::new((-a * c, b * c), (-a * c, b * c), 60).unwrap();
        let f: Vec<f64> = simulate(&base).unwrap().fractions().collect();
        let g: Vec<f64> = simulate(&scaled).unwrap().fractions().collect();
        for (x, y) in f.iter().zip(&g) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn oscillating_blocks_follow_the_recursion(growth in 1.5f64..8.0, total in 10_000u64..300_000) {
        let targets: Vec<PeriodicOrbit> = ["0", "01", "001"]
            .iter()
            .map(|w| PeriodicOrbit::doubling_from_word(&w.parse::<Word>().unwrap()).unwrap())
            .collect();
        let program = construct_oscillating_orbit(&targets, growth, total).unwrap();
        let ends = block_ends(&program);
        prop_assert!(*ends.last().unwrap() <= total);
        for k in 1..ends.len() - 1 {
            let len = ends[k] - ends[k - 1];
            let period = [1, 2, 3][k % 3];
            let wanted = (growth * ends[k - 1] as f64).ceil() as u64;
            prop_assert_eq!(len, wanted.div_ceil(period) * period);
        }
    }
}
