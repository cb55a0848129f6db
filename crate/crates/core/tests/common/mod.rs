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

//! Independent oracles shared by the integration tests. Nothing here calls
//! into the mapper's tables or search.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use qroute::{Circuit, CouplingGraph};

pub fn is_connected(m: usize, edges: &[(usize, usize)]) -> bool {
    if m == 0 {
        return false;
    }
    let mut seen = vec![false; m];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Every connected labelled graph on `m` vertices.
pub fn all_connected_graphs(m: usize) -> Vec<CouplingGraph> {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .collect();
    (0u32..1 << pairs.len())
        .filter_map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            is_connected(m, &edges).then(|| CouplingGraph::new(m, edges).unwrap())
        })
        .collect()
}

/// Random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected_graph(rng: &mut impl Rng, m: usize, p: f64) -> CouplingGraph {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..m {
        edges.push((order[rng.gen_range(0..i)], order[i]));
    }
    for a in 0..m {
        for b in a + 1..m {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    CouplingGraph::new(m, edges).unwrap()
}

pub fn random_circuit(rng: &mut impl Rng, n: usize, gates: usize) -> Circuit {
    let pairs: Vec<_> = (0..gates)
        .map(|_| {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();
    Circuit::from_cnots(n, &pairs).unwrap()
}

/// All CNOT sequences of exactly `len` gates on `n` qubits.
pub fn all_skeletons(n: usize, len: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<_> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                pairs.iter().map(move |&p| {
                    let mut s = s.clone();
                    s.push(p);
                    s
                })
            })
            .collect();
    }
    out
}

fn placements(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; m];
    fn rec(n: usize, m: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for p in 0..m {
            if !used[p] {
                used[p] = true;
                cur.push(p);
                rec(n, m, cur, used, out);
                cur.pop();
                used[p] = false;
            }
        }
    }
    rec(n, m, &mut cur, &mut used, &mut out);
    out
}

/// Minimum SWAP count by layered dynamic programming over placements of
/// `n` logical qubits, where one SWAP moves a qubit along an edge (into an
/// empty vertex or exchanging with another qubit).
pub fn oracle_cost(skeleton: &[(usize, usize)], n: usize, g: &CouplingGraph) -> usize {
    if skeleton.is_empty() {
        return 0;
    }
    let m = g.num_qubits();
    let adj = |a: usize, b: usize| {
        g.edges()
            .iter()
            .any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
    };
    let nodes = placements(n, m);
    let index: HashMap<Vec<usize>, usize> = nodes
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let neighbours: Vec<Vec<usize>> = nodes
        .iter()
        .map(|pl| {
            g.edges()
                .iter()
                .filter(|&&(a, b)| pl.contains(&a) || pl.contains(&b))
                .map(|&(a, b)| {
                    let moved: Vec<usize> = pl
                        .iter()
                        .map(|&p| {
                            if p == a {
                                b
                            } else if p == b {
                                a
                            } else {
                                p
                            }
                        })
                        .collect();
                    index[&moved]
                })
                .collect()
        })
        .collect();
    let executes = |pl: &[usize], (c, t): (usize, usize)| adj(pl[c], pl[t]);

    let inf = usize::MAX;
    let mut f: Vec<usize> = nodes
        .iter()
        .map(|pl| if executes(pl, skeleton[0]) { 0 } else { inf })
        .collect();
    for &gate in &skeleton[1..] {
        // unit-weight multi-source shortest paths seeded with f
        let mut dist = f.clone();
        let mut buckets: Vec<Vec<usize>> = Vec::new();
        for (i, &d) in dist.iter().enumerate() {
            if d != inf {
                if buckets.len() <= d {
                    buckets.resize(d + 1, Vec::new());
                }
                buckets[d].push(i);
            }
        }
        let mut d = 0;
        while d < buckets.len() {
            let mut k = 0;
            while k < buckets[d].len() {
                let v = buckets[d][k];
                k += 1;
                if dist[v] != d {
                    continue;
                }
                for &w in &neighbours[v] {
                    if dist[w] > d + 1 {
                        dist[w] = d + 1;
                        if buckets.len() <= d + 1 {
                            buckets.push(Vec::new());
                        }
                        buckets[d + 1].push(w);
                    }
                }
            }
            d += 1;
        }
        f = nodes
            .iter()
            .zip(dist)
            .map(|(pl, d)| if executes(pl, gate) { d } else { inf })
            .collect();
    }
    f.into_iter().min().unwrap()
}

/// Fewest adjacent transpositions turning `from` into `to` (both given as
/// image arrays), by bidirectional BFS.
pub fn swap_distance(from: &[usize], to: &[usize], edges: &[(usize, usize)]) -> usize {
    if from == to {
        return 0;
    }
    let mut seen = [HashMap::new(), HashMap::new()];
    let mut queues = [VecDeque::new(), VecDeque::new()];
    for (side, start) in [from, to].into_iter().enumerate() {
        seen[side].insert(start.to_vec(), 0usize);
        queues[side].push_back(start.to_vec());
    }
    loop {
        let side = if queues[0].len() <= queues[1].len() {
            0
        } else {
            1
        };
        let level_size = queues[side].len();
        assert!(level_size > 0, "unreachable permutation");
        for _ in 0..level_size {
            let cur = queues[side].pop_front().unwrap();
            let d = seen[side][&cur];
            for &(a, b) in edges {
                // left multiplication by (a b) exchanges the values a and b
                let next: Vec<usize> = cur
                    .iter()
                    .map(|&v| {
                        if v == a {
                            b
                        } else if v == b {
                            a
                        } else {
                            v
                        }
                    })
                    .collect();
                if let Some(&other) = seen[1 - side].get(&next) {
                    return d + 1 + other;
                }
                if !seen[side].contains_key(&next) {
                    seen[side].insert(next.clone(), d + 1);
                    queues[side].push_back(next);
                }
            }
        }
    }
}

/// Connected induced vertex sets of size `n`, by checking every subset.
pub fn brute_force_subgraphs(g: &CouplingGraph, n: usize) -> Vec<Vec<usize>> {
    let m = g.num_qubits();
    let mut out = Vec::new();
    for mask in 0u32..1 << m {
        if mask.count_ones() as usize != n {
            continue;
        }
        let vs: Vec<usize> = (0..m).filter(|&v| mask >> v & 1 == 1).collect();
        let local: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .map(|&(a, b)| {
                let pos = |x| vs.iter().position(|&v| v == x).unwrap();
                (pos(a), pos(b))
            })
            .collect();
        if is_connected(n, &local) {
            out.push(vs);
        }
    }
    out.sort();
    out
}

/// Removes gates from `skeleton` while `bad` keeps holding.
pub fn minimize(
    mut skeleton: Vec<(usize, usize)>,
    bad: impl Fn(&[(usize, usize)]) -> bool,
) -> Vec<(usize, usize)> {
    let mut i = 0;
    while i < skeleton.len() {
        let mut shorter = skeleton.clone();
        shorter.remove(i);
        if bad(&shorter) {
            skeleton = shorter;
        } else {
            i += 1;
        }
    }
    skeleton
}
