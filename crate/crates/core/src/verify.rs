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

//! Replay-based checking of mapped circuits.
//!
//! Only the edge set of the coupling graph and the logical placement are
//! consulted; nothing from the mapper's search is trusted.

use std::fmt;

use serde::Serialize;

use crate::circuit::{Circuit, MappedCircuit, MappedOp};
use crate::coupling::CouplingGraph;
use crate::mapper::{Mapping, MappingResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    NonEdgeSwap,
    NonEdgeCnot,
    WrongLogicalPair,
    /// Layout or step list does not fit the circuit/device shape.
    Malformed,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::NonEdgeSwap => "non-edge SWAP",
            ViolationKind::NonEdgeCnot => "non-edge CNOT",
            ViolationKind::WrongLogicalPair => "wrong logical pair",
            ViolationKind::Malformed => "malformed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Index of the offending SWAP in the overall SWAP sequence, or of the
    /// offending CNOT in the skeleton.
    pub step: usize,
    /// Skeleton gate the violation precedes or belongs to.
    pub gate: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub final_layout: Mapping,
}

impl VerifyReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if self.ok {
            out.push_str("verification: ok\n");
        } else {
            out.push_str(&format!(
                "verification: FAILED ({} violation(s))\n",
                self.violations.len()
            ));
            for v in &self.violations {
                out.push_str(&format!(
                    "  {} at step {} (gate {}): {}\n",
                    v.kind, v.step, v.gate, v.detail
                ));
            }
        }
        out.push_str(&format!("final layout: {}\n", self.final_layout.render()));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Replay<'a> {
    g: &'a CouplingGraph,
    skeleton: Vec<(usize, usize)>,
    layout: Mapping,
    gate: usize,
    swaps: usize,
    violations: Vec<Violation>,
}

impl<'a> Replay<'a> {
    fn new(c: &Circuit, layout: Mapping, g: &'a CouplingGraph) -> Self {
        let mut replay = Replay {
            g,
            skeleton: c.two_qubit_skeleton(),
            layout,
            gate: 0,
            swaps: 0,
            violations: Vec::new(),
        };
        let (n, m) = (c.num_qubits(), g.num_qubits());
        if replay.layout.num_logical() != n || replay.layout.num_physical() != m {
            replay.report(
                ViolationKind::Malformed,
                0,
                format!(
                    "layout places {} logical on {} physical qubits, expected {n} on {m}",
                    replay.layout.num_logical(),
                    replay.layout.num_physical()
                ),
            );
        }
        replay
    }

    fn report(&mut self, kind: ViolationKind, step: usize, detail: String) {
        self.violations.push(Violation {
            kind,
            step,
            gate: self.gate,
            detail,
        });
    }

    fn in_range(&self, p: usize) -> bool {
        p < self.g.num_qubits() && p < self.layout.num_physical()
    }

    fn swap(&mut self, a: usize, b: usize) {
        let step = self.swaps;
        self.swaps += 1;
        if !self.in_range(a) || !self.in_range(b) {
            self.report(
                ViolationKind::NonEdgeSwap,
                step,
                format!("SWAP p{a},p{b} outside the device"),
            );
            return;
        }
        if !self.g.has_edge(a, b) {
            self.report(
                ViolationKind::NonEdgeSwap,
                step,
                format!("SWAP p{a},p{b} is not a coupling edge"),
            );
        }
        self.layout.swap_physical(a, b);
    }

    fn cnot(&mut self, pc: usize, pt: usize) {
        let step = self.gate;
        if !self.in_range(pc) || !self.in_range(pt) {
            self.report(
                ViolationKind::NonEdgeCnot,
                step,
                format!("CNOT p{pc},p{pt} outside the device"),
            );
            self.gate += 1;
            return;
        }
        if !self.g.has_edge(pc, pt) {
            self.report(
                ViolationKind::NonEdgeCnot,
                step,
                format!("CNOT p{pc},p{pt} is not a coupling edge"),
            );
        }
        let got = (self.layout.logical(pc), self.layout.logical(pt));
        match self.skeleton.get(self.gate).copied() {
            Some((qc, qt)) if got == (Some(qc), Some(qt)) => {}
            Some((qc, qt)) => self.report(
                ViolationKind::WrongLogicalPair,
                step,
                format!("expected cx q{qc},q{qt}, found {}", describe(got)),
            ),
            None => self.report(
                ViolationKind::WrongLogicalPair,
                step,
                format!("extra {} beyond the circuit", describe(got)),
            ),
        }
        self.gate += 1;
    }

    fn finish(mut self) -> VerifyReport {
        if self.gate < self.skeleton.len() {
            let missing = self.skeleton.len() - self.gate;
            self.report(
                ViolationKind::WrongLogicalPair,
                self.gate,
                format!("{missing} CNOT(s) of the circuit never executed"),
            );
        }
        VerifyReport {
            ok: self.violations.is_empty(),
            violations: self.violations,
            final_layout: self.layout,
        }
    }
}

fn describe(pair: (Option<usize>, Option<usize>)) -> String {
    let name = |q: Option<usize>| q.map_or("<empty>".to_string(), |q| format!("q{q}"));
    format!("cx {},{}", name(pair.0), name(pair.1))
}

/// Replays `r` from its initial layout and checks every SWAP and CNOT
/// against the edges of `g`.
pub fn verify_mapping(c: &Circuit, r: &MappingResult, g: &CouplingGraph) -> VerifyReport {
    let mut replay = Replay::new(c, r.initial_layout.clone(), g);
    let skeleton = replay.skeleton.clone();
    if r.steps.len() != skeleton.len() {
        replay.report(
            ViolationKind::Malformed,
            0,
            format!("{} SWAP steps for {} CNOTs", r.steps.len(), skeleton.len()),
        );
    }
    let total: usize = r.steps.iter().map(Vec::len).sum();
    if total != r.cost {
        replay.report(
            ViolationKind::Malformed,
            0,
            format!("reported cost {} but {total} SWAPs listed", r.cost),
        );
    }
    if replay.layout.num_logical() != c.num_qubits() {
        return replay.finish();
    }
    for (i, &(qc, qt)) in skeleton.iter().enumerate() {
        for &(a, b) in r.steps.get(i).map(Vec::as_slice).unwrap_or(&[]) {
            replay.swap(a, b);
        }
        let (pc, pt) = (replay.layout.physical(qc), replay.layout.physical(qt));
        replay.cnot(pc, pt);
    }
    replay.finish()
}

/// Replays a mapped circuit (as produced by emit or parse) against the
/// original circuit.
pub fn verify_mapped_circuit(c: &Circuit, mc: &MappedCircuit, g: &CouplingGraph) -> VerifyReport {
    let mut replay = Replay::new(c, mc.initial_layout.clone(), g);
    if mc.m != g.num_qubits() {
        replay.report(
            ViolationKind::Malformed,
            0,
            format!(
                "circuit uses {} qubits, device has {}",
                mc.m,
                g.num_qubits()
            ),
        );
    }
    for op in &mc.ops {
        match *op {
            MappedOp::Swap(a, b) => replay.swap(a, b),
            MappedOp::Cnot(a, b) => replay.cnot(a, b),
            MappedOp::Single { .. } => {}
        }
    }
    replay.finish()
}
