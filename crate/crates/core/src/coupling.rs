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

//! Device connectivity: coupling graphs, all-pairs hop distances, the
//! diameter `K`, and connected induced subgraphs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected, connected coupling graph over `m` physical qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    m: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    dist: Vec<Vec<usize>>,
    diameter: usize,
}

#[derive(Serialize, Deserialize)]
struct CouplingJson {
    m: usize,
    edges: Vec<[usize; 2]>,
}

impl CouplingGraph {
    /// Builds a graph from an edge list. Edges are normalised to `(min, max)`
    /// and deduplicated; self-loops, out-of-range indices and disconnected
    /// graphs are rejected.
    pub fn new(m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Architecture(
                "an architecture needs at least one qubit".into(),
            ));
        }
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a >= m || b >= m {
                return Err(Error::Architecture(format!(
                    "edge ({a}, {b}) references a qubit outside 0..{m}"
                )));
            }
            if a == b {
                return Err(Error::Architecture(format!("self-loop on p{a}")));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        let dist = all_pairs_shortest_paths(&normalized, m)?;
        let diameter = diameter(&dist);
        let mut neighbors = vec![Vec::new(); m];
        for &(a, b) in &normalized {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(CouplingGraph {
            m,
            edges: normalized,
            neighbors,
            dist,
            diameter,
        })
    }

    pub fn linear(m: usize) -> Result<Self> {
        Self::new(m, (1..m).map(|i| (i - 1, i)))
    }

    pub fn ring(m: usize) -> Result<Self> {
        let closing = (m > 2).then(|| (m - 1, 0));
        Self::new(m, (1..m).map(|i| (i - 1, i)).chain(closing))
    }

    pub fn complete(m: usize) -> Result<Self> {
        Self::new(m, (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))))
    }

    /// The 5-qubit T-shaped IBMQ London device. The edge list follows the
    /// published device topology.
    pub fn ibmq_london() -> Self {
        Self::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).expect("static topology is valid")
    }

    /// Resolves a built-in architecture name: `linear-<m>`, `ring-<m>`,
    /// `complete-<m>` or `ibmq-london`.
    pub fn builtin(name: &str) -> Result<Self> {
        if name == "ibmq-london" {
            return Ok(Self::ibmq_london());
        }
        let (family, size) = name
            .rsplit_once('-')
            .ok_or_else(|| Error::Architecture(format!("unknown architecture `{name}`")))?;
        let m: usize = size
            .parse()
            .map_err(|_| Error::Architecture(format!("unknown architecture `{name}`")))?;
        match family {
            "linear" => Self::linear(m),
            "ring" => Self::ring(m),
            "complete" => Self::complete(m),
            _ => Err(Error::Architecture(format!(
                "unknown architecture `{name}`"
            ))),
        }
    }

    /// Interprets `spec` as a built-in name, falling back to reading it as a
    /// file in either the text or the JSON format.
    pub fn resolve(spec: &str) -> Result<Self> {
        match Self::builtin(spec) {
            Ok(g) => Ok(g),
            Err(builtin_err) => {
                let path = Path::new(spec);
                if !path.exists() {
                    return Err(builtin_err);
                }
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Architecture(format!("cannot read {}: {e}", path.display()))
                })?;
                load_coupling(&text)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CouplingJson = serde_json::from_str(text)
            .map_err(|e| Error::Architecture(format!("invalid JSON coupling graph: {e}")))?;
        Self::new(raw.m, raw.edges.into_iter().map(|[a, b]| (a, b)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CouplingJson {
            m: self.m,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        })
        .expect("plain data serializes")
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, p: usize) -> &[usize] {
        &self.neighbors[p]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.m && b < self.m && self.neighbors[a].binary_search(&b).is_ok()
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.dist[a][b]
    }

    pub fn distances(&self) -> &[Vec<usize>] {
        &self.dist
    }

    /// Longest shortest path between any two physical qubits (`K`).
    pub fn diameter(&self) -> usize {
        self.diameter
    }

    /// The subgraph induced on `vertices`, or `None` when it is disconnected.
    pub fn induced(&self, vertices: &[usize]) -> Option<Subgraph> {
        let mut vertices = vertices.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let local_of = |p: usize| vertices.binary_search(&p).ok();
        let local_edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((local_of(a)?, local_of(b)?)));
        let local = CouplingGraph::new(vertices.len(), local_edges).ok()?;
        Some(Subgraph { vertices, local })
    }
}

/// Parses the plain-text coupling format (`m` on the first line, then one
/// `i j` edge per line) or, when the text starts with `{`, the JSON format.
pub fn load_coupling(text: &str) -> Result<CouplingGraph> {
    if text.trim_start().starts_with('{') {
        return CouplingGraph::from_json(text);
    }
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first_line, first) = lines
        .next()
        .ok_or_else(|| Error::Architecture("empty coupling file".into()))?;
    let m: usize = first.parse().map_err(|_| {
        Error::Architecture(format!(
            "line {first_line}: expected qubit count, got `{first}`"
        ))
    })?;
    let mut edges = Vec::new();
    for (line, l) in lines {
        let nums: Vec<usize> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Architecture(format!("line {line}: malformed edge `{l}`")))?;
        match nums.as_slice() {
            &[a, b] => edges.push((a, b)),
            _ => {
                return Err(Error::Architecture(format!(
                    "line {line}: expected two qubit indices, got `{l}`"
                )))
            }
        }
    }
    CouplingGraph::new(m, edges)
}

/// Floyd-Warshall over unit-weight undirected edges.
#[allow(clippy::needless_range_loop)]
pub fn all_pairs_shortest_paths(edges: &[(usize, usize)], m: usize) -> Result<Vec<Vec<usize>>> {
    const INF: usize = usize::MAX / 4;
    let mut dist = vec![vec![INF; m]; m];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        dist[a][b] = 1;
        dist[b][a] = 1;
    }
    for k in 0..m {
        for i in 0..m {
            let dik = dist[i][k];
            if dik == INF {
                continue;
            }
            for j in 0..m {
                let via = dik + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    for (i, row) in dist.iter().enumerate() {
        if let Some(j) = row.iter().position(|&d| d == INF) {
            return Err(Error::Disconnected(i, j));
        }
    }
    Ok(dist)
}

pub fn diameter(dist: &[Vec<usize>]) -> usize {
    dist.iter()
        .flat_map(|row| row.iter().copied())
        .max()
        .unwrap_or(0)
}

/// Connected induced subgraph with its own local distance matrix and `K`.
/// Local vertex `i` corresponds to physical qubit `vertices[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    pub local: CouplingGraph,
}

impl Subgraph {
    pub fn embedding(&self) -> &[usize] {
        &self.vertices
    }

    pub fn to_global(&self, local: usize) -> usize {
        self.vertices[local]
    }
}

/// All connected induced subgraphs on `n` vertices, in lexicographic order of
/// their (sorted) vertex sets.
///
/// Sets are grown from each seed vertex `v` using only vertices larger than
/// `v` drawn from the exclusive neighbourhood of the current set, so every
/// connected set is produced exactly once.
pub fn connected_subgraphs(g: &CouplingGraph, n: usize) -> Vec<Subgraph> {
    let mut sets = connected_vertex_sets(g, n);
    sets.sort_unstable();
    sets.into_iter()
        .map(|vs| g.induced(&vs).expect("enumerated sets are connected"))
        .collect()
}

pub(crate) fn connected_vertex_sets(g: &CouplingGraph, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 || n > g.m {
        return out;
    }
    let mut cover = vec![0u32; g.m];
    let mut current = Vec::with_capacity(n);
    for seed in 0..g.m {
        let ext: Vec<usize> = g
            .neighbors(seed)
            .iter()
            .copied()
            .filter(|&u| u > seed)
            .collect();
        add_to_set(g, seed, &mut current, &mut cover);
        extend(g, n, seed, &mut current, ext, &mut cover, &mut out);
        remove_from_set(g, seed, &mut current, &mut cover);
    }
    out
}

fn add_to_set(g: &CouplingGraph, w: usize, current: &mut Vec<usize>, cover: &mut [u32]) {
    current.push(w);
    cover[w] += 1;
    for &u in g.neighbors(w) {
        cover[u] += 1;
    }
}

fn remove_from_set(g: &CouplingGraph, w: usize, current: &mut Vec<usize>, cover: &mut [u32]) {
    current.pop();
    cover[w] -= 1;
    for &u in g.neighbors(w) {
        cover[u] -= 1;
    }
}

fn extend(
    g: &CouplingGraph,
    n: usize,
    seed: usize,
    current: &mut Vec<usize>,
    mut ext: Vec<usize>,
    cover: &mut [u32],
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == n {
        let mut set = current.clone();
        set.sort_unstable();
        out.push(set);
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        // exclusive neighbours of w: not in, nor adjacent to, the current set
        next.extend(
            g.neighbors(w)
                .iter()
                .copied()
                .filter(|&u| u > seed && cover[u] == 0),
        );
        add_to_set(g, w, current, cover);
        extend(g, n, seed, current, next, cover, out);
        remove_from_set(g, w, current, cover);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::VecDeque;

    fn bfs_distances(g: &CouplingGraph) -> Vec<Vec<usize>> {
        let m = g.num_qubits();
        (0..m)
            .map(|s| {
                let mut d = vec![usize::MAX; m];
                d[s] = 0;
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for &v in g.neighbors(u) {
                        if d[v] == usize::MAX {
                            d[v] = d[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                d
            })
            .collect()
    }

    #[test]
    fn linear4_tableau() {
        let g = load_coupling("4\n0 1\n1 2\n2 3\n").unwrap();
        assert_eq!(g.num_qubits(), 4);
        assert_eq!(g.edges().len(), 3);
        assert_eq!(
            g.distances(),
            &[
                vec![0, 1, 2, 3],
                vec![1, 0, 1, 2],
                vec![2, 1, 0, 1],
                vec![3, 2, 1, 0]
            ]
        );
        assert_eq!(g.diameter(), 3);
    }

    #[test]
    fn small_graphs() {
        assert_eq!(load_coupling("2\n0 1").unwrap().diameter(), 1);
        assert_eq!(CouplingGraph::complete(4).unwrap().diameter(), 1);
        assert_eq!(CouplingGraph::complete(5).unwrap().diameter(), 1);
        assert_eq!(CouplingGraph::linear(5).unwrap().diameter(), 4);
        let single = CouplingGraph::new(1, []).unwrap();
        assert_eq!(single.distances(), &[vec![0]]);
        assert_eq!(single.diameter(), 0);
    }

    #[test]
    fn ring_matches_bfs() {
        let g = CouplingGraph::ring(4).unwrap();
        assert_eq!(g.distances(), bfs_distances(&g).as_slice());
        assert_eq!(g.diameter(), 2);
    }

    #[test]
    fn load_errors() {
        assert!(matches!(
            load_coupling("4\n0 1\n2 3\n"),
            Err(Error::Disconnected(..))
        ));
        assert!(matches!(
            load_coupling("3\n0 1\n1 3\n"),
            Err(Error::Architecture(_))
        ));
        assert!(matches!(
            load_coupling("3\n0 1\n1 1\n"),
            Err(Error::Architecture(_))
        ));
        assert!(load_coupling("3\n0 1 2\n").is_err());
    }

    #[test]
    fn duplicate_edges_are_merged() {
        let g = load_coupling("3\n0 1\n1 0\n1 2\n0 1\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn json_format() {
        let g = load_coupling(r#"{"m": 4, "edges": [[0,1],[1,2],[2,3]]}"#).unwrap();
        assert_eq!(g, CouplingGraph::linear(4).unwrap());
        assert_eq!(CouplingGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn builtins() {
        let london = CouplingGraph::builtin("ibmq-london").unwrap();
        assert_eq!(london.edges(), &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        assert_eq!(london.diameter(), 3);
        assert_eq!(CouplingGraph::builtin("ring-5").unwrap().edges().len(), 5);
        assert!(CouplingGraph::builtin("torus-5").is_err());
        assert!(CouplingGraph::builtin("linear-x").is_err());
    }

    #[test]
    fn subgraphs_of_linear5() {
        let g = CouplingGraph::linear(5).unwrap();
        let subs = connected_subgraphs(&g, 4);
        let sets: Vec<_> = subs.iter().map(|s| s.vertices.clone()).collect();
        assert_eq!(sets, vec![vec![0, 1, 2, 3], vec![1, 2, 3, 4]]);
        for s in &subs {
            assert_eq!(s.local.diameter(), 3);
            assert_eq!(s.local.edges(), &[(0, 1), (1, 2), (2, 3)]);
        }
        assert_eq!(subs[1].to_global(0), 1);
    }

    #[test]
    fn whole_graph_is_single_subgraph() {
        let g = CouplingGraph::ibmq_london();
        let subs = connected_subgraphs(&g, 5);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].local, g);
    }

    #[test]
    fn complete5_has_five_4_subsets() {
        let g = CouplingGraph::complete(5).unwrap();
        assert_eq!(connected_subgraphs(&g, 4).len(), 5);
    }

    #[test]
    fn subgraph_size_out_of_range() {
        let g = CouplingGraph::linear(3).unwrap();
        assert!(connected_subgraphs(&g, 0).is_empty());
        assert!(connected_subgraphs(&g, 4).is_empty());
        assert_eq!(connected_subgraphs(&g, 1).len(), 3);
    }
}
