mod common;

use std::sync::Arc;

use chipfire::engine::step_window_violations;
use chipfire::{build_graph, detect_period, detect_period_lowmem, Graph, GraphSpec, Position, StepTrace};
use proptest::prelude::*;

const SPECS: [&str; 6] = [
    "complete_bipartite:3,3",
    "complete_bipartite:2,4",
    "complete:5",
    "cycle:6",
    "path:5",
    "complete_multipartite:3,2,2",
];

fn graph(spec: &str) -> Arc<Graph> {
    Arc::new(build_graph(&spec.parse::<GraphSpec>().unwrap()).unwrap())
}

fn oracle_adj(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.vertex_count()).map(|v| g.neighbors(v).to_vec()).collect()
}

/// A graph from `SPECS` and a start with `σ(v) ≤ scale·deg(v)`.
fn position(scale: u64) -> impl Strategy<Value = Position> {
    (0..SPECS.len()).prop_flat_map(move |i| {
        let g = graph(SPECS[i]);
        let ranges: Vec<_> = g.degrees().iter().map(|&d| 0..=scale * d as u64).collect();
        ranges.prop_map(move |chips| Position::new(g.clone(), chips).unwrap())
    })
}

/// Starts with `σ(v) ≤ 2deg(v) − 1`.
fn admissible() -> impl Strategy<Value = Position> {
    (0..SPECS.len()).prop_flat_map(|i| {
        let g = graph(SPECS[i]);
        let ranges: Vec<_> = g.degrees().iter().map(|&d| 0..=2 * d as u64 - 1).collect();
        ranges.prop_map(move |chips| Position::new(g.clone(), chips).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn step_matches_oracle_and_conserves_chips(p in position(4)) {
        let next = p.step().unwrap();
        prop_assert_eq!(next.total_chips(), p.total_chips());
        let adj = oracle_adj(p.graph());
        let expected = common::step(&adj, p.chips());
        prop_assert_eq!(next.chips(), expected.as_slice());
        prop_assert_eq!(next, p.step().unwrap());
    }

    #[test]
    fn complement_commutes_and_flips_firing(p in admissible()) {
        let c = p.complement().unwrap();
        prop_assert_eq!(c.complement().unwrap(), p.clone());
        prop_assert_eq!(c.step().unwrap(), p.step().unwrap().complement().unwrap());
        for v in 0..p.chips().len() {
            prop_assert_ne!(c.fires(v), p.fires(v));
        }
    }

    #[test]
    fn step_window_bounds(p in admissible()) {
        let next = p.step().unwrap();
        prop_assert!(step_window_violations(&p, &next).is_empty());
    }

    #[test]
    fn detectors_agree_with_oracle(p in position(4)) {
        let a = detect_period(&p, 1_000_000).unwrap();
        let b = detect_period_lowmem(&p, 1_000_000).unwrap();
        prop_assert_eq!((a.transient, a.period), (b.transient, b.period));
        prop_assert_eq!(&a.orbit, &b.orbit);
        let oracle = common::period(&oracle_adj(p.graph()), p.chips(), 100_000).unwrap();
        prop_assert_eq!((a.transient as usize, a.period as usize), oracle);
    }

    #[test]
    fn detected_pair_is_minimal(p in position(3)) {
        let r = detect_period(&p, 1_000_000).unwrap();
        let (t0, per) = (r.transient as usize, r.period as usize);
        let trace = StepTrace::record(&p, t0 + 2 * per).unwrap();
        prop_assert_eq!(trace.state(t0 + per), trace.state(t0));
        for q in 1..per {
            prop_assert_ne!(trace.state(t0 + q), trace.state(t0));
        }
        if t0 > 0 {
            prop_assert_ne!(trace.state(t0 - 1 + per), trace.state(t0 - 1));
        }
    }

    #[test]
    fn returns_exactly_when_fire_counts_are_equal(p in admissible()) {
        let r = detect_period(&p, 1_000_000).unwrap();
        let horizon = (r.transient + 2 * r.period) as usize;
        let trace = StepTrace::record(&p, horizon).unwrap();
        for t in 1..=horizon {
            let counts = trace.fire_counts(t);
            let equal = counts.iter().all(|&c| c == counts[0]);
            prop_assert_eq!(trace.state(t) == p.chips(), equal, "t = {}", t);
        }
    }

    #[test]
    fn period_one_iff_empty_or_full_firing(p in position(4)) {
        let r = detect_period(&p, 1_000_000).unwrap();
        let n = p.chips().len();
        let extreme = r.orbit_positions(&p).iter().any(|q| {
            let f = q.firing_set().len();
            f == 0 || f == n
        });
        prop_assert_eq!(r.period == 1, extreme);
    }

    #[test]
    fn orbit_states_stay_in_double_degree_box(p in position(4)) {
        let r = detect_period(&p, 1_000_000).unwrap();
        if r.period > 1 {
            for q in r.orbit_positions(&p) {
                prop_assert!(q.within_double_degree());
            }
        }
        prop_assert!(r.fires_per_period.iter().all(|&k| k == r.fires_per_period[0]));
    }

    #[test]
    fn confined_complement_has_equal_period(seed in any::<u64>(), i in 0..SPECS.len()) {
        let g = graph(SPECS[i]);
        let adj = oracle_adj(&g);
        let chips = common::random_confined(&adj, &mut common::SplitMix(seed));
        let p = Position::new(g, chips).unwrap();
        let a = detect_period(&p, 1_000_000).unwrap().period;
        let b = detect_period(&p.complement().unwrap(), 1_000_000).unwrap().period;
        prop_assert_eq!(a, b);
    }
}

#[test]
fn k33_cross_validation_thousand_random() {
    let g = graph("complete_bipartite:3,3");
    let mut rng = common::SplitMix(42);
    for _ in 0..1000 {
        let chips: Vec<u64> = g.degrees().iter().map(|&d| rng.upto(4 * d as u64)).collect();
        let p = Position::new(g.clone(), chips).unwrap();
        let a = detect_period(&p, 1_000_000).unwrap();
        let b = detect_period_lowmem(&p, 1_000_000).unwrap();
        assert_eq!((a.transient, a.period), (b.transient, b.period), "{:?}", p.chips());
    }
}

#[test]
fn phi_examples() {
    let g = graph("complete_multipartite:2,2,1");
    let p = Position::new(g, vec![0, 3, 1, 2, 2]).unwrap();
    assert_eq!(p.phi(4).unwrap(), 1);
    assert_eq!(p.firing_set(), vec![1]);
    assert!(!p.is_confined());
    let k33 = Position::new(graph("complete_bipartite:3,3"), vec![1, 3, 3, 1, 3, 3]).unwrap();
    assert_eq!(k33.firing_set(), vec![1, 2, 4, 5]);
}
