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

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::permtools::Permutation;

/// Placement of logical qubits on physical qubits.
///
/// Physical qubits without a logical occupant (when the circuit has fewer
/// qubits than the device) report `None`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Mapping {
    phys_of_log: Vec<usize>,
    log_of_phys: Vec<Option<usize>>,
}

impl Mapping {
    pub fn new(phys_of_log: Vec<usize>, m: usize) -> Result<Self> {
        let mut log_of_phys = vec![None; m];
        for (q, &p) in phys_of_log.iter().enumerate() {
            if p >= m {
                return Err(Error::InvalidPermutation(format!(
                    "q{q} placed on p{p}, outside 0..{m}"
                )));
            }
            if let Some(other) = log_of_phys[p].replace(q) {
                return Err(Error::InvalidPermutation(format!(
                    "q{other} and q{q} both placed on p{p}"
                )));
            }
        }
        Ok(Mapping {
            phys_of_log,
            log_of_phys,
        })
    }

    /// `q_i ↦ p_i` for `i < n`.
    pub fn identity(n: usize, m: usize) -> Self {
        Self::new((0..n).collect(), m).expect("n <= m")
    }

    pub fn num_logical(&self) -> usize {
        self.phys_of_log.len()
    }

    pub fn num_physical(&self) -> usize {
        self.log_of_phys.len()
    }

    #[inline]
    pub fn physical(&self, q: usize) -> usize {
        self.phys_of_log[q]
    }

    #[inline]
    pub fn logical(&self, p: usize) -> Option<usize> {
        self.log_of_phys[p]
    }

    pub fn phys_of_log(&self) -> &[usize] {
        &self.phys_of_log
    }

    pub fn log_of_phys(&self) -> &[Option<usize>] {
        &self.log_of_phys
    }

    /// Exchanges the occupants of physical qubits `a` and `b`.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        self.log_of_phys.swap(a, b);
        for p in [a, b] {
            if let Some(q) = self.log_of_phys[p] {
                self.phys_of_log[q] = p;
            }
        }
    }

    /// `π · M`: the occupant of `p` moves to `π(p)`.
    pub fn permuted(&self, perm: &Permutation) -> Result<Mapping> {
        if perm.len() != self.num_physical() {
            return Err(Error::SizeMismatch(perm.len(), self.num_physical()));
        }
        Mapping::new(
            self.phys_of_log.iter().map(|&p| perm.apply(p)).collect(),
            self.num_physical(),
        )
    }

    /// Re-expresses a placement on a subgraph in global physical indices.
    pub(crate) fn embedded(&self, embedding: &[usize], m: usize) -> Mapping {
        Mapping::new(self.phys_of_log.iter().map(|&p| embedding[p]).collect(), m)
            .expect("embedding is injective")
    }

    /// `q1->p0 q3->p1 ...`, ordered by physical qubit.
    pub fn render(&self) -> String {
        self.log_of_phys
            .iter()
            .enumerate()
            .filter_map(|(p, q)| q.map(|q| format!("q{q}->p{p}")))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mapping({})", self.render())
    }
}
