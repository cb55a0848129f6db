// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

mod common;

use proptest::prelude::*;
use proptest::strategy::Strategy as Generator;
use rand::rngs::StdRng;
use rand::SeedableRng;

use qroute::{
    connected_subgraphs, map_circuit, verify_mapping, Circuit, CouplingGraph, Mapper, Strategy,
    StrategyKind,
};

use common::*;

/// Four CNOTs closing a cycle q0-q1-q2-q3-q0.
fn four_cycle() -> Circuit {
    Circuit::from_cnots(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
}

#[test]
fn ring5_four_cycle_uses_the_spare_vertex() {
    let c = four_cycle();
    let g = CouplingGraph::ring(5).unwrap();
    assert_eq!(oracle_cost(&c.two_qubit_skeleton(), 4, &g), 1);
    for s in [Strategy::FULL, Strategy::ARCH_LIMIT] {
        let r = map_circuit(&c, &g, s).unwrap();
        assert_eq!(r.cost, 1, "{s}");
        assert!(verify_mapping(&c, &r, &g).ok);
    }
    // every connected 4-vertex subgraph of the ring is a path
    for s in [Strategy::SUBGRAPH, Strategy::SUBGRAPH_LIMIT] {
        let r = map_circuit(&c, &g, s).unwrap();
        assert_eq!(r.cost, 2, "{s}");
        assert!(verify_mapping(&c, &r, &g).ok);
    }
    let path = CouplingGraph::linear(4).unwrap();
    assert_eq!(oracle_cost(&c.two_qubit_skeleton(), 4, &path), 2);
}

#[test]
fn subgraph_enumeration_matches_brute_force() {
    let mut rng = StdRng::seed_from_u64(11);
    for m in 1..=7 {
        for _ in 0..20 {
            let g = random_connected_graph(&mut rng, m, 0.3);
            for n in 1..=m {
                let got: Vec<Vec<usize>> = connected_subgraphs(&g, n)
                    .into_iter()
                    .map(|s| s.vertices)
                    .collect();
                assert_eq!(
                    got,
                    brute_force_subgraphs(&g, n),
                    "m={m} n={n} {:?}",
                    g.edges()
                );
            }
        }
    }
}

#[test]
fn london_subgraphs() {
    let g = CouplingGraph::ibmq_london();
    for n in 1..=5 {
        let got: Vec<Vec<usize>> = connected_subgraphs(&g, n)
            .into_iter()
            .map(|s| s.vertices)
            .collect();
        assert_eq!(got, brute_force_subgraphs(&g, n));
    }
}

fn arb_instance(
    max_m: usize,
    max_gates: usize,
) -> impl Generator<Value = (CouplingGraph, Circuit)> {
    (2..=max_m, any::<u64>(), 0..=max_gates).prop_map(move |(m, seed, gates)| {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_connected_graph(&mut rng, m, 0.3);
        let n = 2 + (seed as usize) % (m - 1);
        (g, random_circuit(&mut rng, n, gates))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_an_edge_never_costs_more((g, c) in arb_instance(5, 6), pick in any::<prop::sample::Index>()) {
        let m = g.num_qubits();
        let missing: Vec<(usize, usize)> = (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .filter(|&(a, b)| !g.has_edge(a, b))
            .collect();
        prop_assume!(!missing.is_empty());
        let extra = missing[pick.index(missing.len())];
        let denser = CouplingGraph::new(m, g.edges().iter().copied().chain([extra])).unwrap();
        let sparse_cost = map_circuit(&c, &g, Strategy::FULL).unwrap().cost;
        let dense_cost = map_circuit(&c, &denser, Strategy::FULL).unwrap().cost;
        prop_assert!(dense_cost <= sparse_cost);
    }

    #[test]
    fn results_verify_and_are_deterministic((g, c) in arb_instance(5, 6)) {
        let mapper = Mapper::new();
        for kind in StrategyKind::ALL {
            for filter in [false, true] {
                let s = qroute::Strategy::new(kind).with_relevance_filter(filter);
                let a = mapper.map(&c, &g, s).unwrap();
                let b = map_circuit(&c, &g, s).unwrap();
                prop_assert!(verify_mapping(&c, &a, &g).ok);
                prop_assert_eq!(a.cost, a.steps.iter().map(Vec::len).sum::<usize>());
                prop_assert_eq!((a.cost, &a.initial_layout, &a.steps), (b.cost, &b.initial_layout, &b.steps));
            }
        }
    }

    #[test]
    fn limited_per_gate_count_never_exceeds_full((g, c) in arb_instance(6, 4)) {
        let mapper = Mapper::new();
        let full = mapper.count_search_space(&c, &g, qroute::Strategy::FULL).unwrap();
        let limited = mapper.count_search_space(&c, &g, qroute::Strategy::ARCH_LIMIT).unwrap();
        prop_assert!(limited.per_gate < full.per_gate || g.num_qubits() < 2);
    }
}
