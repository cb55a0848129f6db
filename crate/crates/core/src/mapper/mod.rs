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

//! SWAP-optimal mapping of a circuit onto a coupling graph.
//!
//! Four strategies select which permutations may be applied in front of each
//! CNOT:
//!
//! | strategy         | problem(s) solved                 | candidates per gate       |
//! |------------------|-----------------------------------|---------------------------|
//! | `Full`           | whole architecture                | all `m!` permutations     |
//! | `ArchLimit`      | whole architecture                | at most `K - 1` SWAPs     |
//! | `Subgraph`       | every connected `n`-qubit subgraph | all `n!` permutations     |
//! | `SubgraphLimit`  | every connected `n`-qubit subgraph | at most `K_sub - 1` SWAPs |
//!
//! Optionally, the relevance filter discards candidates that move neither
//! operand of the upcoming gate.

mod cache;
mod mapping;
mod search;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cache::TableCache;
pub use mapping::Mapping;

use crate::circuit::{Circuit, Gate, MappedCircuit, MappedOp};
use crate::coupling::{connected_subgraphs, CouplingGraph, Subgraph};
use crate::error::{Error, Result};
use search::{Budget, Problem, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    Full,
    ArchLimit,
    Subgraph,
    SubgraphLimit,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::Full,
        StrategyKind::ArchLimit,
        StrategyKind::Subgraph,
        StrategyKind::SubgraphLimit,
    ];

    pub fn uses_subgraphs(self) -> bool {
        matches!(self, StrategyKind::Subgraph | StrategyKind::SubgraphLimit)
    }

    pub fn is_limited(self) -> bool {
        matches!(self, StrategyKind::ArchLimit | StrategyKind::SubgraphLimit)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyKind::Full => "full",
            StrategyKind::ArchLimit => "arch-limit",
            StrategyKind::Subgraph => "subgraph",
            StrategyKind::SubgraphLimit => "subgraph-limit",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::WrongStrategy(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Strategy {
    pub variant: StrategyKind,
    pub relevance_filter: bool,
}

impl Strategy {
    pub const fn new(variant: StrategyKind) -> Self {
        Strategy {
            variant,
            relevance_filter: false,
        }
    }

    pub const fn with_relevance_filter(mut self, on: bool) -> Self {
        self.relevance_filter = on;
        self
    }

    pub const FULL: Strategy = Strategy::new(StrategyKind::Full);
    pub const ARCH_LIMIT: Strategy = Strategy::new(StrategyKind::ArchLimit);
    pub const SUBGRAPH: Strategy = Strategy::new(StrategyKind::Subgraph);
    pub const SUBGRAPH_LIMIT: Strategy = Strategy::new(StrategyKind::SubgraphLimit);
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.variant)?;
        if self.relevance_filter {
            f.write_str("+relevance")?;
        }
        Ok(())
    }
}

/// Parses `arch-limit` or `arch-limit+relevance`.
impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, filter) = match s.strip_suffix("+relevance") {
            Some(kind) => (kind, true),
            None => (s, false),
        };
        Ok(Strategy::new(kind.parse()?).with_relevance_filter(filter))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub states_expanded: u64,
    pub permutations_considered: u64,
    pub subproblems: usize,
    #[serde(serialize_with = "seconds")]
    pub wall_time: Duration,
}

fn seconds<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

#[derive(Debug, Clone, Serialize)]
pub struct MappingResult {
    /// Total number of inserted SWAPs.
    pub cost: usize,
    pub initial_layout: Mapping,
    /// `steps[i]`: SWAPs (global physical edges) executed right before the
    /// `i`-th CNOT of the circuit.
    pub steps: Vec<Vec<(usize, usize)>>,
    pub subgraph_used: Option<Vec<usize>>,
    pub strategy: Strategy,
    pub stats: SearchStats,
}

impl MappingResult {
    /// Cost counted in CNOTs, with each SWAP expanded to three.
    pub fn cnot_cost(&self) -> usize {
        3 * self.cost
    }

    pub fn final_layout(&self) -> Mapping {
        let mut layout = self.initial_layout.clone();
        for &(a, b) in self.steps.iter().flatten() {
            layout.swap_physical(a, b);
        }
        layout
    }

    /// Interleaves the SWAPs with the full circuit. Single-qubit gates keep
    /// their position relative to the CNOTs and follow their qubit.
    pub fn to_mapped_circuit(&self, c: &Circuit) -> MappedCircuit {
        let mut layout = self.initial_layout.clone();
        let mut ops = Vec::with_capacity(c.gates().len() + self.cost);
        let mut k = 0;
        for gate in c.gates() {
            match gate {
                Gate::Single {
                    name,
                    qubit,
                    params,
                } => ops.push(MappedOp::Single {
                    name: name.clone(),
                    qubit: layout.physical(*qubit),
                    params: params.clone(),
                }),
                Gate::Cnot { control, target } => {
                    for &(a, b) in &self.steps[k] {
                        ops.push(MappedOp::Swap(a, b));
                        layout.swap_physical(a, b);
                    }
                    ops.push(MappedOp::Cnot(
                        layout.physical(*control),
                        layout.physical(*target),
                    ));
                    k += 1;
                }
            }
        }
        MappedCircuit {
            m: self.initial_layout.num_physical(),
            initial_layout: self.initial_layout.clone(),
            ops,
        }
    }
}

/// Permutation counts a strategy exposes to the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchSpace {
    /// Candidates in front of one gate (the maximum over subgraphs).
    pub per_gate: u64,
    /// Candidates summed over all gates (and all subgraphs).
    pub total: u64,
    pub subgraphs: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_expansions: Option<u64>,
    pub timeout: Option<Duration>,
}

/// Mapper with a reusable table cache and search limits.
#[derive(Default)]
pub struct Mapper {
    limits: SearchLimits,
    tables: TableCache,
}

impl Mapper {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_limits(limits: SearchLimits) -> Self {
        Mapper {
            limits,
            tables: TableCache::new(),
        }
    }

    pub fn tables(&self) -> &TableCache {
        &self.tables
    }

    fn budget(&self) -> Budget {
        Budget::new(
            self.limits.max_expansions,
            self.limits.timeout.map(|t| Instant::now() + t),
        )
    }

    /// Dispatches to [`Mapper::map_optimal`] or [`Mapper::solve_on_subgraphs`].
    pub fn map(&self, c: &Circuit, g: &CouplingGraph, s: Strategy) -> Result<MappingResult> {
        if s.variant.uses_subgraphs() {
            self.solve_on_subgraphs(c, g, s)
        } else {
            self.map_optimal(c, g, s)
        }
    }

    /// Minimum-SWAP mapping on the whole architecture (`Full` or `ArchLimit`).
    pub fn map_optimal(
        &self,
        c: &Circuit,
        g: &CouplingGraph,
        s: Strategy,
    ) -> Result<MappingResult> {
        if s.variant.uses_subgraphs() {
            return Err(Error::WrongStrategy(s.to_string()));
        }
        let start = Instant::now();
        let (n, m) = (c.num_qubits(), g.num_qubits());
        if n > m {
            return Err(Error::TooManyQubits { n, m });
        }
        let skeleton = c.two_qubit_skeleton();
        let table = self.tables.get(g, depth_limit(s.variant, g))?;
        let solution = search::solve(
            &Problem {
                skeleton: &skeleton,
                num_logical: n,
                graph: g,
                table: &table,
                relevance_filter: s.relevance_filter,
            },
            &self.budget(),
        )?;
        Ok(into_result(solution, None, g.num_qubits(), s, 1, start))
    }

    /// Solves the problem independently on every connected `n`-qubit
    /// subgraph and keeps the cheapest solution; ties go to the
    /// lexicographically smallest vertex set.
    pub fn solve_on_subgraphs(
        &self,
        c: &Circuit,
        g: &CouplingGraph,
        s: Strategy,
    ) -> Result<MappingResult> {
        if !s.variant.uses_subgraphs() {
            return Err(Error::WrongStrategy(s.to_string()));
        }
        let start = Instant::now();
        let (n, m) = (c.num_qubits(), g.num_qubits());
        if n > m {
            return Err(Error::TooManyQubits { n, m });
        }
        let skeleton = c.two_qubit_skeleton();
        let subgraphs = connected_subgraphs(g, n);
        if skeleton.is_empty() || subgraphs.is_empty() {
            let placement = subgraphs
                .first()
                .map(|sub| sub.vertices.clone())
                .unwrap_or_else(|| (0..n).collect());
            return Ok(MappingResult {
                cost: 0,
                initial_layout: Mapping::new(placement, m)?,
                steps: vec![Vec::new(); skeleton.len()],
                subgraph_used: subgraphs.first().map(|sub| sub.vertices.clone()),
                strategy: s,
                stats: SearchStats {
                    subproblems: subgraphs.len(),
                    wall_time: start.elapsed(),
                    ..SearchStats::default()
                },
            });
        }

        let budget = self.budget();
        let solve_one = |sub: &Subgraph| -> Result<Solution> {
            let table = self
                .tables
                .get(&sub.local, depth_limit(s.variant, &sub.local))?;
            search::solve(
                &Problem {
                    skeleton: &skeleton,
                    num_logical: n,
                    graph: &sub.local,
                    table: &table,
                    relevance_filter: s.relevance_filter,
                },
                &budget,
            )
        };
        let solutions: Vec<Solution> =
            subgraphs.par_iter().map(solve_one).collect::<Result<_>>()?;

        let mut stats = SearchStats {
            subproblems: subgraphs.len(),
            ..SearchStats::default()
        };
        for sol in &solutions {
            stats.states_expanded += sol.states_expanded;
            stats.permutations_considered += sol.permutations_considered;
        }
        let (best, sub) = solutions
            .into_iter()
            .zip(&subgraphs)
            .reduce(|best, cand| {
                if cand.0.cost < best.0.cost {
                    cand
                } else {
                    best
                }
            })
            .expect("at least one subgraph");
        let embedding = sub.embedding();
        let local_layout = Mapping::new(best.phys_of_log.clone(), n)?;
        let steps = best
            .steps
            .iter()
            .map(|step| {
                step.iter()
                    .map(|&(a, b)| (embedding[a], embedding[b]))
                    .collect()
            })
            .collect();
        stats.wall_time = start.elapsed();
        Ok(MappingResult {
            cost: best.cost,
            initial_layout: local_layout.embedded(embedding, m),
            steps,
            subgraph_used: Some(sub.vertices.clone()),
            strategy: s,
            stats,
        })
    }

    /// Static size of the search space a strategy would explore.
    pub fn count_search_space(
        &self,
        c: &Circuit,
        g: &CouplingGraph,
        s: Strategy,
    ) -> Result<SearchSpace> {
        let gates = c.two_qubit_skeleton().len() as u64;
        let (n, m) = (c.num_qubits(), g.num_qubits());
        if n > m {
            return Err(Error::TooManyQubits { n, m });
        }
        let table_size = |graph: &CouplingGraph, variant: StrategyKind| -> Result<u64> {
            if variant.is_limited() {
                Ok(self.tables.get(graph, depth_limit(variant, graph))?.len() as u64)
            } else {
                Ok(factorial(graph.num_qubits()))
            }
        };
        if !s.variant.uses_subgraphs() {
            let per_gate = table_size(g, s.variant)?;
            return Ok(SearchSpace {
                per_gate,
                total: per_gate.saturating_mul(gates),
                subgraphs: 1,
            });
        }
        let subgraphs = connected_subgraphs(g, n);
        let mut per_gate = 0;
        let mut total = 0u64;
        for sub in &subgraphs {
            let size = table_size(&sub.local, s.variant)?;
            per_gate = per_gate.max(size);
            total = total.saturating_add(size.saturating_mul(gates));
        }
        Ok(SearchSpace {
            per_gate,
            total,
            subgraphs: subgraphs.len(),
        })
    }
}

fn depth_limit(variant: StrategyKind, g: &CouplingGraph) -> Option<usize> {
    variant.is_limited().then(|| g.diameter().saturating_sub(1))
}

pub(crate) fn factorial(m: usize) -> u64 {
    (1..=m as u64).fold(1u64, |acc, k| acc.saturating_mul(k))
}

fn into_result(
    sol: Solution,
    subgraph: Option<Vec<usize>>,
    m: usize,
    strategy: Strategy,
    subproblems: usize,
    start: Instant,
) -> MappingResult {
    MappingResult {
        cost: sol.cost,
        initial_layout: Mapping::new(sol.phys_of_log, m)
            .expect("search yields injective placements"),
        steps: sol.steps,
        subgraph_used: subgraph,
        strategy,
        stats: SearchStats {
            states_expanded: sol.states_expanded,
            permutations_considered: sol.permutations_considered,
            subproblems,
            wall_time: start.elapsed(),
        },
    }
}

/// [`Mapper::map_optimal`] with a fresh mapper and no limits.
pub fn map_optimal(c: &Circuit, g: &CouplingGraph, s: Strategy) -> Result<MappingResult> {
    Mapper::new().map_optimal(c, g, s)
}

/// [`Mapper::solve_on_subgraphs`] with a fresh mapper and no limits.
pub fn solve_on_subgraphs(c: &Circuit, g: &CouplingGraph, s: Strategy) -> Result<MappingResult> {
    Mapper::new().solve_on_subgraphs(c, g, s)
}

/// [`Mapper::map`] with a fresh mapper and no limits.
pub fn map_circuit(c: &Circuit, g: &CouplingGraph, s: Strategy) -> Result<MappingResult> {
    Mapper::new().map(c, g, s)
}

pub fn count_search_space(c: &Circuit, g: &CouplingGraph, s: Strategy) -> Result<SearchSpace> {
    Mapper::new().count_search_space(c, g, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_mapping;

    fn sample_circuit() -> Circuit {
        Circuit::from_cnots(4, &[(0, 3), (1, 3), (0, 2), (0, 1)]).unwrap()
    }

    fn all_strategies() -> Vec<Strategy> {
        StrategyKind::ALL
            .into_iter()
            .flat_map(|k| {
                [
                    Strategy::new(k),
                    Strategy::new(k).with_relevance_filter(true),
                ]
            })
            .collect()
    }

    #[test]
    fn sample_costs_one_swap_everywhere() {
        let c = sample_circuit();
        let g = CouplingGraph::linear(4).unwrap();
        for s in all_strategies() {
            let r = map_circuit(&c, &g, s).unwrap();
            assert_eq!(r.cost, 1, "{s}");
            assert_eq!(r.steps.iter().map(Vec::len).sum::<usize>(), 1);
            assert!(verify_mapping(&c, &r, &g).ok, "{s}");
        }
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in all_strategies() {
            assert_eq!(s.to_string().parse::<Strategy>().unwrap(), s);
        }
        assert!("fastest".parse::<Strategy>().is_err());
    }

    #[test]
    fn complete_graph_needs_no_swaps() {
        let c = Circuit::from_cnots(4, &[(0, 1), (2, 3), (0, 3), (1, 2), (3, 0)]).unwrap();
        let g = CouplingGraph::complete(4).unwrap();
        for s in all_strategies() {
            assert_eq!(map_circuit(&c, &g, s).unwrap().cost, 0);
        }
    }

    #[test]
    fn empty_and_trivial_circuits() {
        let g = CouplingGraph::linear(4).unwrap();
        let empty = Circuit::new(3);
        for s in all_strategies() {
            let r = map_circuit(&empty, &g, s).unwrap();
            assert_eq!(r.cost, 0);
            assert!(r.steps.is_empty());
            assert_eq!(r.initial_layout.num_logical(), 3);
        }
        let one = Circuit::from_cnots(2, &[(0, 1)]).unwrap();
        let r = map_optimal(&one, &g, Strategy::FULL).unwrap();
        assert_eq!(r.cost, 0);
        assert_eq!(r.steps, vec![Vec::<(usize, usize)>::new()]);
    }

    #[test]
    fn errors() {
        let g = CouplingGraph::linear(3).unwrap();
        let wide = Circuit::from_cnots(4, &[(0, 3)]).unwrap();
        assert!(matches!(
            map_optimal(&wide, &g, Strategy::FULL),
            Err(Error::TooManyQubits { n: 4, m: 3 })
        ));
        let c = Circuit::from_cnots(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            map_optimal(&c, &g, Strategy::SUBGRAPH),
            Err(Error::WrongStrategy(_))
        ));
        assert!(matches!(
            solve_on_subgraphs(&c, &g, Strategy::FULL),
            Err(Error::WrongStrategy(_))
        ));
        let big = CouplingGraph::linear(9).unwrap();
        assert!(matches!(
            map_optimal(&c, &big, Strategy::FULL),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn expansion_budget_times_out() {
        let c = Circuit::from_cnots(5, &[(0, 4), (1, 3), (2, 4), (0, 3), (1, 4), (0, 2)]).unwrap();
        let g = CouplingGraph::linear(5).unwrap();
        let mapper = Mapper::with_limits(SearchLimits {
            max_expansions: Some(3),
            timeout: None,
        });
        assert!(matches!(
            mapper.map(&c, &g, Strategy::FULL),
            Err(Error::Timeout { .. })
        ));
    }

    #[test]
    fn subgraph_limit_on_linear5() {
        let c = sample_circuit();
        let g = CouplingGraph::linear(5).unwrap();
        let r = solve_on_subgraphs(&c, &g, Strategy::SUBGRAPH_LIMIT).unwrap();
        assert_eq!(r.cost, 1);
        assert_eq!(r.stats.subproblems, 2);
        assert_eq!(r.subgraph_used.as_deref(), Some(&[0, 1, 2, 3][..]));
        assert!(verify_mapping(&c, &r, &g).ok);
        let space = count_search_space(&c, &g, Strategy::SUBGRAPH_LIMIT).unwrap();
        assert_eq!(space.per_gate, 9);
        assert_eq!(space.total, 2 * 9 * 4);
    }

    #[test]
    fn whole_graph_subgraph_matches_map_optimal() {
        let c = sample_circuit();
        let g = CouplingGraph::linear(4).unwrap();
        let mapper = Mapper::new();
        for (whole, sub) in [
            (Strategy::FULL, Strategy::SUBGRAPH),
            (Strategy::ARCH_LIMIT, Strategy::SUBGRAPH_LIMIT),
        ] {
            let a = mapper.map_optimal(&c, &g, whole).unwrap();
            let b = mapper.solve_on_subgraphs(&c, &g, sub).unwrap();
            assert_eq!(a.cost, b.cost);
            assert_eq!(a.initial_layout, b.initial_layout);
            assert_eq!(a.steps, b.steps);
        }
    }

    #[test]
    fn search_space_counts() {
        let c = sample_circuit();
        let lin4 = CouplingGraph::linear(4).unwrap();
        let full = count_search_space(&c, &lin4, Strategy::FULL).unwrap();
        assert_eq!((full.per_gate, full.total), (24, 96));
        let arch = count_search_space(&c, &lin4, Strategy::ARCH_LIMIT).unwrap();
        assert_eq!((arch.per_gate, arch.total), (9, 36));
        let lin5 = CouplingGraph::linear(5).unwrap();
        assert_eq!(
            count_search_space(&c, &lin5, Strategy::FULL).unwrap().total,
            480
        );
        let sub = count_search_space(&c, &lin5, Strategy::SUBGRAPH).unwrap();
        assert_eq!((sub.total, sub.subgraphs), (192, 2));
        for s in all_strategies() {
            assert_eq!(
                count_search_space(&Circuit::new(4), &lin5, s)
                    .unwrap()
                    .total,
                0
            );
        }
    }

    #[test]
    fn deterministic() {
        let c = Circuit::from_cnots(5, &[(0, 4), (1, 3), (2, 4), (0, 3), (1, 4)]).unwrap();
        let g = CouplingGraph::ibmq_london();
        for s in all_strategies() {
            let a = map_circuit(&c, &g, s).unwrap();
            let b = map_circuit(&c, &g, s).unwrap();
            assert_eq!(a.cost, b.cost);
            assert_eq!(a.initial_layout, b.initial_layout);
            assert_eq!(a.steps, b.steps);
            assert_eq!(a.stats.states_expanded, b.stats.states_expanded);
        }
    }

    #[test]
    fn mapped_circuit_keeps_single_qubit_gates_in_place() {
        let mut c = Circuit::new(4);
        c.push(Gate::Single {
            name: "h".into(),
            qubit: 3,
            params: String::new(),
        })
        .unwrap();
        for (a, b) in [(0, 3), (1, 3), (0, 2), (0, 1)] {
            c.push(Gate::Cnot {
                control: a,
                target: b,
            })
            .unwrap();
        }
        let g = CouplingGraph::linear(4).unwrap();
        let r = map_optimal(&c, &g, Strategy::ARCH_LIMIT).unwrap();
        let mc = r.to_mapped_circuit(&c);
        assert_eq!(mc.ops.len(), 6);
        assert_eq!(
            mc.ops[0],
            MappedOp::Single {
                name: "h".into(),
                qubit: r.initial_layout.physical(3),
                params: String::new()
            }
        );
        assert_eq!(mc.swap_count(), 1);
    }
}
