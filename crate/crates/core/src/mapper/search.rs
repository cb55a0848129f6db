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

//! Uniform-cost search over `(gates executed, placement)` states.
//!
//! One permutation from the candidate table is applied in front of every
//! CNOT, weighted by its SWAP cost. The placement in front of the first gate
//! is free. Placements are packed four bits per logical qubit, most
//! significant first, so comparing keys compares `phys_of_log`
//! lexicographically.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::coupling::CouplingGraph;
use crate::error::{Error, Result};
use crate::permtools::PermutationTable;

/// Largest number of physical qubits a packed placement can address.
pub(crate) const MAX_PACKED_QUBITS: usize = 16;
/// Cap on the number of zero-cost initial placements.
const MAX_INITIAL_PLACEMENTS: u64 = 20_000_000;

/// Shared expansion budget and wall-clock deadline.
#[derive(Debug)]
pub(crate) struct Budget {
    remaining: Option<AtomicU64>,
    deadline: Option<Instant>,
    spent: AtomicU64,
}

impl Budget {
    pub(crate) fn new(max_expansions: Option<u64>, deadline: Option<Instant>) -> Self {
        Budget {
            remaining: max_expansions.map(AtomicU64::new),
            deadline,
            spent: AtomicU64::new(0),
        }
    }

    fn spend(&self) -> Result<()> {
        let spent = self.spent.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if let Some(remaining) = &self.remaining {
            let ok = remaining
                .fetch_update(AtomicOrdering::Relaxed, AtomicOrdering::Relaxed, |r| {
                    r.checked_sub(1)
                })
                .is_ok();
            if !ok {
                return Err(Error::Timeout { expanded: spent });
            }
        }
        if spent % 1024 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(Error::Timeout { expanded: spent });
                }
            }
        }
        Ok(())
    }
}

pub(crate) struct Problem<'a> {
    pub skeleton: &'a [(usize, usize)],
    pub num_logical: usize,
    pub graph: &'a CouplingGraph,
    pub table: &'a PermutationTable,
    pub relevance_filter: bool,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Solution {
    pub cost: usize,
    pub phys_of_log: Vec<usize>,
    pub steps: Vec<Vec<(usize, usize)>>,
    pub states_expanded: u64,
    pub permutations_considered: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Queued {
    cost: u32,
    gate: u32,
    key: u64,
}

// BinaryHeap pops the maximum: lowest cost first, then the state furthest
// through the circuit, then the lexicographically smallest placement.
impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .cmp(&self.cost)
            .then(self.gate.cmp(&other.gate))
            .then(other.key.cmp(&self.key))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Node {
    cost: u32,
    parent: Option<(u32, u64)>,
    perm: u32,
    settled: bool,
}

struct Packer {
    n: usize,
}

impl Packer {
    #[inline]
    fn shift(&self, q: usize) -> u32 {
        4 * (self.n - 1 - q) as u32
    }

    #[inline]
    fn get(&self, key: u64, q: usize) -> usize {
        ((key >> self.shift(q)) & 0xF) as usize
    }

    fn pack(&self, positions: &[usize]) -> u64 {
        positions
            .iter()
            .enumerate()
            .fold(0, |acc, (q, &p)| acc | ((p as u64) << self.shift(q)))
    }

    fn unpack(&self, key: u64) -> Vec<usize> {
        (0..self.n).map(|q| self.get(key, q)).collect()
    }
}

pub(crate) fn solve(problem: &Problem<'_>, budget: &Budget) -> Result<Solution> {
    let g = problem.graph;
    let m = g.num_qubits();
    let n = problem.num_logical;
    let skeleton = problem.skeleton;
    if n > m {
        return Err(Error::TooManyQubits { n, m });
    }
    if skeleton.is_empty() {
        return Ok(Solution {
            phys_of_log: (0..n).collect(),
            ..Solution::default()
        });
    }
    if m > MAX_PACKED_QUBITS {
        return Err(Error::CapacityExceeded {
            what: "placement search",
            m,
            limit: MAX_PACKED_QUBITS,
        });
    }
    let placements = ((m - n + 1)..=m).fold(1u64, |acc, k| acc.saturating_mul(k as u64));
    if placements > MAX_INITIAL_PLACEMENTS {
        return Err(Error::CapacityExceeded {
            what: "initial placement enumeration",
            m,
            limit: MAX_INITIAL_PLACEMENTS as usize,
        });
    }
    if problem.table.num_points() != m {
        return Err(Error::SizeMismatch(problem.table.num_points(), m));
    }

    let adjacency: Vec<u32> = (0..m)
        .map(|p| g.neighbors(p).iter().fold(0u32, |acc, &q| acc | (1 << q)))
        .collect();
    let adjacent = |a: usize, b: usize| adjacency[a] & (1 << b) != 0;

    let table = problem.table;
    let images: Vec<u8> = table
        .entries()
        .iter()
        .flat_map(|e| e.perm.as_bytes().iter().copied())
        .collect();
    let costs: Vec<u32> = table.entries().iter().map(|e| e.cost as u32).collect();
    debug_assert!(table.entries()[0].perm.is_identity());

    let packer = Packer { n };
    let goal = skeleton.len() as u32;
    let mut nodes: FxHashMap<(u32, u64), Node> = FxHashMap::default();
    let mut heap = BinaryHeap::new();

    // Zero-cost frontier: every placement under which gate 0 is executable.
    let (c0, t0) = skeleton[0];
    let mut positions = vec![usize::MAX; n];
    let mut used = vec![false; m];
    enumerate_placements(0, &mut positions, &mut used, &mut |pos| {
        if adjacent(pos[c0], pos[t0]) {
            let key = packer.pack(pos);
            nodes.insert(
                (1, key),
                Node {
                    cost: 0,
                    parent: None,
                    perm: 0,
                    settled: false,
                },
            );
            heap.push(Queued {
                cost: 0,
                gate: 1,
                key,
            });
        }
    });

    let mut expanded = 0u64;
    let mut considered = 0u64;
    let mut current = vec![0usize; n];
    while let Some(Queued { cost, gate, key }) = heap.pop() {
        let node = nodes
            .get_mut(&(gate, key))
            .expect("queued states are recorded");
        if node.settled || node.cost < cost {
            continue;
        }
        node.settled = true;
        if gate == goal {
            return Ok(reconstruct(
                &nodes, table, &packer, gate, key, cost, expanded, considered,
            ));
        }
        budget.spend()?;
        expanded += 1;

        for (q, slot) in current.iter_mut().enumerate() {
            *slot = packer.get(key, q);
        }
        let (c, t) = skeleton[gate as usize];
        let (pc, pt) = (current[c], current[t]);
        for (k, perm) in images.chunks_exact(m).enumerate() {
            let (npc, npt) = (perm[pc] as usize, perm[pt] as usize);
            if problem.relevance_filter && k != 0 && npc == pc && npt == pt {
                continue;
            }
            considered += 1;
            if !adjacent(npc, npt) {
                continue;
            }
            let next_key = current.iter().enumerate().fold(0u64, |acc, (q, &p)| {
                acc | ((perm[p] as u64) << packer.shift(q))
            });
            let next_cost = cost + costs[k];
            let state = (gate + 1, next_key);
            let improve = match nodes.get(&state) {
                Some(existing) => !existing.settled && next_cost < existing.cost,
                None => true,
            };
            if improve {
                nodes.insert(
                    state,
                    Node {
                        cost: next_cost,
                        parent: Some((gate, key)),
                        perm: k as u32,
                        settled: false,
                    },
                );
                heap.push(Queued {
                    cost: next_cost,
                    gate: gate + 1,
                    key: next_key,
                });
            }
        }
    }
    unreachable!("a connected coupling graph always admits a solution")
}

fn enumerate_placements(
    q: usize,
    positions: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut impl FnMut(&[usize]),
) {
    if q == positions.len() {
        visit(positions);
        return;
    }
    for p in 0..used.len() {
        if used[p] {
            continue;
        }
        used[p] = true;
        positions[q] = p;
        enumerate_placements(q + 1, positions, used, visit);
        used[p] = false;
    }
}

#[allow(clippy::too_many_arguments)]
fn reconstruct(
    nodes: &FxHashMap<(u32, u64), Node>,
    table: &PermutationTable,
    packer: &Packer,
    goal: u32,
    goal_key: u64,
    cost: u32,
    expanded: u64,
    considered: u64,
) -> Solution {
    let mut steps = vec![Vec::new(); goal as usize];
    let mut state = (goal, goal_key);
    loop {
        let node = &nodes[&state];
        match node.parent {
            Some(parent) => {
                // the permutation applied in front of gate `parent.0`
                steps[parent.0 as usize] = table.swap_sequence_at(node.perm as usize);
                state = parent;
            }
            None => break,
        }
    }
    Solution {
        cost: cost as usize,
        phys_of_log: packer.unpack(state.1),
        steps,
        states_expanded: expanded,
        permutations_considered: considered,
    }
}
