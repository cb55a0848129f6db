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

//! Permutations of physical positions and the Cayley-graph tables built from
//! the SWAP generators of a coupling graph.
//!
//! Conventions used throughout the crate:
//!
//! * A [`Permutation`] is stored in one-line form: `images[i] = π(i)`.
//! * [`compose`]`(a, b)` is `a ∘ b`, i.e. `b` is applied first.
//! * A Cayley-graph step from `g` along generator `s` reaches `s ∘ g`
//!   (the generator is composed on the **left**). A table entry's SWAP
//!   sequence `[s1, .., sk]` therefore satisfies `π = sk ∘ .. ∘ s1`, and
//!   executing the SWAPs in list order moves the qubit at position `p` to
//!   `π(p)`.
//! * Cycle notation lists each cycle starting from its smallest element,
//!   cycles ordered by that element, fixed points omitted: `(021)` sends
//!   0→2, 2→1, 1→0.

use std::fmt;

use bitvec::vec::BitVec;
use rustc_hash::FxHashMap;

use crate::coupling::CouplingGraph;
use crate::error::{Error, Result};
use crate::mapper::Mapping;

/// Largest `m` for which the full symmetric group may be enumerated.
pub const MAX_UNLIMITED_QUBITS: usize = 8;
/// Upper bound on the size of any table, depth-limited or not.
pub const MAX_TABLE_ENTRIES: usize = 8_000_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        assert!(m <= 256, "permutations are limited to 256 points");
        Permutation {
            images: (0..m).map(|i| i as u8).collect(),
        }
    }

    /// Builds a permutation from its one-line form, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let m = images.len();
        if m > 256 {
            return Err(Error::InvalidPermutation(format!("{m} points exceeds 256")));
        }
        let mut seen = vec![false; m];
        for &x in images {
            if x >= m || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
        }
        Ok(Permutation {
            images: images.iter().map(|&x| x as u8).collect(),
        })
    }

    pub fn transposition(m: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(m);
        p.images.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub(crate) fn as_bytes(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch(self.len(), other.len()));
        }
        Ok(Permutation {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u8; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Permutation { images }
    }

    /// `(a b) ∘ self`: exchanges the images `a` and `b`.
    pub(crate) fn left_swap(&self, a: usize, b: usize) -> Self {
        let (a, b) = (a as u8, b as u8);
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| {
                    if x == a {
                        b
                    } else if x == b {
                        a
                    } else {
                        x
                    }
                })
                .collect(),
        }
    }

    /// Parses cycle notation such as `(01)(23)` or `()`. Points may be
    /// written as single digits or, for `m > 10`, separated by spaces or
    /// commas: `(0 10 3)`.
    pub fn parse_cycles(text: &str, m: usize) -> Result<Self> {
        let bad = |why: &str| Error::InvalidPermutation(format!("`{text}`: {why}"));
        let mut images: Vec<usize> = (0..m).collect();
        let mut touched = vec![false; m];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
            let close = body.find(')').ok_or_else(|| bad("missing `)`"))?;
            let inner = body[..close].trim();
            rest = body[close + 1..].trim_start();
            let points: Vec<usize> = if inner.contains(|c: char| c == ',' || c.is_whitespace()) {
                inner
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().map_err(|_| bad("non-numeric point")))
                    .collect::<Result<_>>()?
            } else {
                inner
                    .chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| bad("non-numeric point"))
                    })
                    .collect::<Result<_>>()?
            };
            for (k, &p) in points.iter().enumerate() {
                if p >= m {
                    return Err(bad("point out of range"));
                }
                if std::mem::replace(&mut touched[p], true) {
                    return Err(bad("point repeated"));
                }
                images[p] = points[(k + 1) % points.len()];
            }
        }
        Permutation::from_images(&images)
    }

    /// Index of this permutation's one-line form in lexicographic order
    /// (its Lehmer code read in the factorial number system).
    pub fn lehmer_rank(&self) -> u64 {
        let m = self.len();
        let mut rank = 0u64;
        for i in 0..m {
            let smaller_after = self.images[i + 1..]
                .iter()
                .filter(|&&x| x < self.images[i])
                .count() as u64;
            rank = rank * (m - i) as u64 + smaller_after;
        }
        rank
    }

    pub fn from_lehmer_rank(mut rank: u64, m: usize) -> Self {
        let mut digits = vec![0usize; m];
        for i in (0..m).rev() {
            let base = (m - i) as u64;
            digits[i] = (rank % base) as usize;
            rank /= base;
        }
        let mut pool: Vec<u8> = (0..m as u8).collect();
        let images = digits.into_iter().map(|d| pool.remove(d)).collect();
        Permutation { images }
    }
}

/// `a ∘ b`.
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    a.compose(b)
}

pub fn inverse(a: &Permutation) -> Permutation {
    a.inverse()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.len();
        let wide = m > 10;
        let mut seen = vec![false; m];
        let mut any = false;
        for start in 0..m {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            any = true;
            f.write_str("(")?;
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if wide && !first {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
                first = false;
                p = self.apply(p);
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub perm: Permutation,
    /// Minimal number of SWAPs realising `perm`.
    pub cost: usize,
    /// `(generator index, predecessor entry index)`; `None` for the identity.
    pub pred: Option<(usize, usize)>,
}

/// Permutations reachable from the identity within an optional number of
/// SWAPs, in breadth-first discovery order, each with its minimal cost.
#[derive(Debug, Clone)]
pub struct PermutationTable {
    m: usize,
    generators: Vec<(usize, usize)>,
    depth_limit: Option<usize>,
    entries: Vec<TableEntry>,
    index: FxHashMap<Permutation, usize>,
}

impl PermutationTable {
    pub fn num_points(&self) -> usize {
        self.m
    }

    pub fn generators(&self) -> &[(usize, usize)] {
        &self.generators
    }

    pub fn depth_limit(&self) -> Option<usize> {
        self.depth_limit
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn get(&self, p: &Permutation) -> Option<&TableEntry> {
        self.index_of(p).map(|i| &self.entries[i])
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn cost(&self, p: &Permutation) -> Option<usize> {
        self.get(p).map(|e| e.cost)
    }

    /// Number of entries per cost level, starting at cost 0.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = Vec::new();
        for e in &self.entries {
            if sizes.len() <= e.cost {
                sizes.resize(e.cost + 1, 0);
            }
            sizes[e.cost] += 1;
        }
        sizes
    }

    pub fn swap_sequence(&self, p: &Permutation) -> Result<Vec<(usize, usize)>> {
        let idx = self
            .index_of(p)
            .ok_or_else(|| Error::NotInTable(p.to_string()))?;
        Ok(self.swap_sequence_at(idx))
    }

    /// SWAP edges realising entry `idx`, in execution order.
    pub fn swap_sequence_at(&self, mut idx: usize) -> Vec<(usize, usize)> {
        let mut seq = Vec::with_capacity(self.entries[idx].cost);
        while let Some((gen, pred)) = self.entries[idx].pred {
            seq.push(self.generators[gen]);
            idx = pred;
        }
        seq.reverse();
        seq
    }

    /// Entries worth applying in front of a gate whose operands sit on
    /// physical qubits `p_i` and `p_j`: the identity and every permutation
    /// moving at least one of the two.
    pub fn relevant_entries(&self, p_i: usize, p_j: usize) -> impl Iterator<Item = &TableEntry> {
        self.entries
            .iter()
            .filter(move |e| is_relevant(e.perm.as_bytes(), p_i, p_j))
    }

    /// Same table with every point renamed through `rename` (old → new).
    /// Costs and predecessor links carry over unchanged.
    pub(crate) fn relabeled(&self, rename: &[usize]) -> PermutationTable {
        let m = self.m;
        let entries: Vec<TableEntry> = self
            .entries
            .iter()
            .map(|e| {
                let mut images = vec![0u8; m];
                for x in 0..m {
                    images[rename[x]] = rename[e.perm.apply(x)] as u8;
                }
                TableEntry {
                    perm: Permutation { images },
                    cost: e.cost,
                    pred: e.pred,
                }
            })
            .collect();
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.perm.clone(), i))
            .collect();
        PermutationTable {
            m,
            generators: self
                .generators
                .iter()
                .map(|&(a, b)| (rename[a].min(rename[b]), rename[a].max(rename[b])))
                .collect(),
            depth_limit: self.depth_limit,
            entries,
            index,
        }
    }
}

#[inline]
pub(crate) fn is_relevant(images: &[u8], p_i: usize, p_j: usize) -> bool {
    images[p_i] as usize != p_i
        || images[p_j] as usize != p_j
        || images.iter().enumerate().all(|(k, &x)| k == x as usize)
}

/// Breadth-first closure of the identity under left-composition with the
/// transpositions of `g`'s edges, truncated after `depth_limit` steps.
pub fn cayley_bfs(g: &CouplingGraph, depth_limit: Option<usize>) -> Result<PermutationTable> {
    let m = g.num_qubits();
    if depth_limit.is_none() && m > MAX_UNLIMITED_QUBITS {
        return Err(Error::CapacityExceeded {
            what: "unlimited Cayley enumeration",
            m,
            limit: MAX_UNLIMITED_QUBITS,
        });
    }
    if m > 256 {
        return Err(Error::CapacityExceeded {
            what: "permutation table",
            m,
            limit: 256,
        });
    }
    let generators = g.edges().to_vec();
    let identity = Permutation::identity(m);
    let mut index = FxHashMap::default();
    index.insert(identity.clone(), 0);
    let mut entries = vec![TableEntry {
        perm: identity,
        cost: 0,
        pred: None,
    }];
    let mut head = 0;
    while head < entries.len() {
        let cost = entries[head].cost;
        if depth_limit.is_some_and(|limit| cost >= limit) {
            break;
        }
        for (gen, &(a, b)) in generators.iter().enumerate() {
            let next = entries[head].perm.left_swap(a, b);
            if index.contains_key(&next) {
                continue;
            }
            if entries.len() >= MAX_TABLE_ENTRIES {
                return Err(Error::CapacityExceeded {
                    what: "permutation table",
                    m,
                    limit: MAX_TABLE_ENTRIES,
                });
            }
            index.insert(next.clone(), entries.len());
            entries.push(TableEntry {
                perm: next,
                cost: cost + 1,
                pred: Some((gen, head)),
            });
        }
        head += 1;
    }
    Ok(PermutationTable {
        m,
        generators,
        depth_limit,
        entries,
        index,
    })
}

/// Permutations realisable with at most `K - 1` SWAPs.
pub fn reduced_set(g: &CouplingGraph) -> Result<PermutationTable> {
    cayley_bfs(g, Some(g.diameter().saturating_sub(1)))
}

pub fn swap_sequence(t: &PermutationTable, p: &Permutation) -> Result<Vec<(usize, usize)>> {
    t.swap_sequence(p)
}

/// Candidate permutations in front of `gate = (control, target)` given the
/// current placement: the identity plus every entry that moves either
/// operand's physical qubit.
pub fn relevance_filter<'t>(
    t: &'t PermutationTable,
    current: &Mapping,
    gate: (usize, usize),
) -> impl Iterator<Item = &'t Permutation> {
    let p_i = current.physical(gate.0);
    let p_j = current.physical(gate.1);
    t.relevant_entries(p_i, p_j).map(|e| &e.perm)
}

/// Bit `r` is set iff the permutation with lexicographic rank `r` is in `t`.
pub fn perm_bitset(t: &PermutationTable) -> Result<BitVec> {
    let m = t.num_points();
    if m > MAX_UNLIMITED_QUBITS {
        return Err(Error::CapacityExceeded {
            what: "permutation bitset",
            m,
            limit: MAX_UNLIMITED_QUBITS,
        });
    }
    let total: usize = (1..=m).product();
    let mut bits = BitVec::repeat(false, total);
    for e in t.entries() {
        bits.set(e.perm.lehmer_rank() as usize, true);
    }
    Ok(bits)
}

/// Highest rank first, in groups of four: `0000 0000 0001 ...`.
pub fn render_bitset(bits: &BitVec) -> String {
    let digits: Vec<char> = bits
        .iter()
        .rev()
        .map(|b| if *b { '1' } else { '0' })
        .collect();
    let lead = digits.len() % 4;
    let mut out = String::new();
    for (i, d) in digits.iter().enumerate() {
        if i > 0 && (i + 4 - lead) % 4 == 0 {
            out.push(' ');
        }
        out.push(*d);
    }
    out
}
