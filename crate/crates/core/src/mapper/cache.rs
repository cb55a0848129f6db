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

//! Memoised permutation tables keyed by coupling-graph isomorphism class.
//!
//! Tables are always computed on the canonical relabelling of a graph and
//! then renamed into the caller's labelling, so the table handed out for a
//! given graph does not depend on which graphs were requested before it.

use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;

use crate::coupling::CouplingGraph;
use crate::error::Result;
use crate::permtools::{cayley_bfs, PermutationTable};

/// Graphs up to this size are canonicalised by trying every relabelling.
const MAX_CANONICAL_QUBITS: usize = 8;

type Edges = Vec<(u8, u8)>;
type Key = (Option<usize>, usize, Edges);

#[derive(Default)]
pub struct TableCache {
    canonical: Mutex<FxHashMap<Key, Arc<PermutationTable>>>,
    exact: Mutex<FxHashMap<Key, Arc<PermutationTable>>>,
}

impl TableCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `cayley_bfs(g, depth_limit)`, up to the choice of predecessor links.
    pub fn get(
        &self,
        g: &CouplingGraph,
        depth_limit: Option<usize>,
    ) -> Result<Arc<PermutationTable>> {
        let m = g.num_qubits();
        let exact_key = (depth_limit, m, edge_key(g.edges().iter().copied()));
        if let Some(t) = self.exact.lock().unwrap().get(&exact_key) {
            return Ok(Arc::clone(t));
        }
        if m > MAX_CANONICAL_QUBITS {
            let t = Arc::new(cayley_bfs(g, depth_limit)?);
            self.exact.lock().unwrap().insert(exact_key, Arc::clone(&t));
            return Ok(t);
        }

        let (canon_edges, to_canon) = canonical_form(g);
        let canon_key = (depth_limit, m, canon_edges.clone());
        let cached = self.canonical.lock().unwrap().get(&canon_key).cloned();
        let canon_table = match cached {
            Some(t) => t,
            None => {
                let canon_graph = CouplingGraph::new(
                    m,
                    canon_edges.iter().map(|&(a, b)| (a as usize, b as usize)),
                )?;
                let t = Arc::new(cayley_bfs(&canon_graph, depth_limit)?);
                self.canonical
                    .lock()
                    .unwrap()
                    .insert(canon_key, Arc::clone(&t));
                t
            }
        };
        let table = if to_canon.iter().enumerate().all(|(i, &c)| i == c) {
            canon_table
        } else {
            let mut from_canon = vec![0; m];
            for (local, &c) in to_canon.iter().enumerate() {
                from_canon[c] = local;
            }
            Arc::new(canon_table.relabeled(&from_canon))
        };
        self.exact
            .lock()
            .unwrap()
            .insert(exact_key, Arc::clone(&table));
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.canonical.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn edge_key(edges: impl Iterator<Item = (usize, usize)>) -> Edges {
    let mut key: Edges = edges
        .map(|(a, b)| (a.min(b) as u8, a.max(b) as u8))
        .collect();
    key.sort_unstable();
    key
}

/// Lexicographically smallest sorted edge list over all relabellings, with
/// the first relabelling (local → canonical) that attains it.
pub(crate) fn canonical_form(g: &CouplingGraph) -> (Edges, Vec<usize>) {
    let m = g.num_qubits();
    let mut relabel: Vec<usize> = (0..m).collect();
    let mut best = edge_key(g.edges().iter().copied());
    let mut best_relabel = relabel.clone();
    let mut candidate = Vec::with_capacity(best.len());
    // Heap's algorithm over all relabellings.
    let mut counters = vec![0usize; m];
    let mut i = 1;
    while i < m {
        if counters[i] < i {
            if i % 2 == 0 {
                relabel.swap(0, i);
            } else {
                relabel.swap(counters[i], i);
            }
            candidate.clear();
            candidate.extend(g.edges().iter().map(|&(a, b)| {
                let (x, y) = (relabel[a] as u8, relabel[b] as u8);
                (x.min(y), x.max(y))
            }));
            candidate.sort_unstable();
            if candidate < best {
                best.clone_from(&candidate);
                best_relabel.clone_from(&relabel);
            }
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    (best, best_relabel)
}
