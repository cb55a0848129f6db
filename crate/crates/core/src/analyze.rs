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

//! Architecture summaries: diameter, reduced permutation sets and the
//! connected subgraphs a circuit of a given width could use.

use std::fmt::Write as _;

use serde::Serialize;

use crate::coupling::{connected_subgraphs, CouplingGraph};
use crate::error::Result;
use crate::mapper::TableCache;
use crate::permtools::{perm_bitset, render_bitset};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgraphInfo {
    pub vertices: Vec<usize>,
    pub k: usize,
    pub pi_prime: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgraphSummary {
    pub n: usize,
    pub count: usize,
    pub subgraphs: Vec<SubgraphInfo>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArchReport {
    pub m: usize,
    pub edges: usize,
    pub k: usize,
    pub pi_prime: usize,
    pub levels: Vec<usize>,
    /// Membership of `Pi'` by lexicographic rank; only for small devices.
    pub bitset: Option<String>,
    pub subgraphs: Option<SubgraphSummary>,
}

pub fn analyze(g: &CouplingGraph, n: Option<usize>, tables: &TableCache) -> Result<ArchReport> {
    let k = g.diameter();
    let table = tables.get(g, Some(k.saturating_sub(1)))?;
    let subgraphs = match n {
        None => None,
        Some(n) => {
            let subs = connected_subgraphs(g, n)
                .into_iter()
                .map(|sub| {
                    let k = sub.local.diameter();
                    let t = tables.get(&sub.local, Some(k.saturating_sub(1)))?;
                    Ok(SubgraphInfo {
                        vertices: sub.vertices,
                        k,
                        pi_prime: t.len(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Some(SubgraphSummary {
                n,
                count: subs.len(),
                subgraphs: subs,
            })
        }
    };
    Ok(ArchReport {
        m: g.num_qubits(),
        edges: g.edges().len(),
        k,
        pi_prime: table.len(),
        levels: table.level_sizes(),
        bitset: (g.num_qubits() <= 5)
            .then(|| perm_bitset(&table).map(|b| render_bitset(&b)))
            .transpose()?,
        subgraphs,
    })
}

impl ArchReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let levels: Vec<String> = self.levels.iter().map(usize::to_string).collect();
        writeln!(out, "m={} |E|={} K={}", self.m, self.edges, self.k).unwrap();
        writeln!(out, "|Pi'|={} levels={}", self.pi_prime, levels.join("/")).unwrap();
        if let Some(bits) = &self.bitset {
            writeln!(out, "bitset: {bits}").unwrap();
        }
        if let Some(s) = &self.subgraphs {
            writeln!(out, "connected {}-qubit subgraphs: {}", s.n, s.count).unwrap();
            for sub in &s.subgraphs {
                let vs: Vec<String> = sub.vertices.iter().map(usize::to_string).collect();
                writeln!(
                    out,
                    "  {{{}}} K={} |Pi'|={}",
                    vs.join(","),
                    sub.k,
                    sub.pi_prime
                )
                .unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_complete() {
        let tables = TableCache::new();
        let r = analyze(&CouplingGraph::linear(4).unwrap(), None, &tables).unwrap();
        assert_eq!((r.k, r.pi_prime, r.levels.clone()), (3, 9, vec![1, 3, 5]));
        assert!(r.render_text().contains("K=3"));
        assert_eq!(r.bitset.as_deref(), Some("0000 0000 0001 0001 1101 1111"));
        let r = analyze(&CouplingGraph::complete(4).unwrap(), None, &tables).unwrap();
        assert_eq!((r.k, r.pi_prime), (1, 1));
    }

    #[test]
    fn linear5_subgraphs() {
        let r = analyze(
            &CouplingGraph::linear(5).unwrap(),
            Some(4),
            &TableCache::new(),
        )
        .unwrap();
        let s = r.subgraphs.unwrap();
        assert_eq!(s.count, 2);
        assert!(s.subgraphs.iter().all(|x| x.k == 3 && x.pi_prime == 9));
        assert_eq!(s.subgraphs[1].vertices, vec![1, 2, 3, 4]);
    }
}
