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

//! Circuit representation and the OpenQASM 2.0 subset read and written by
//! the mapper.
//!
//! Input circuits are reduced to single-qubit passthroughs and CNOTs. Mapped
//! circuits additionally carry SWAPs and a `// layout:` header comment that
//! records the initial logical-to-physical assignment.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mapper::Mapping;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Gate {
    Cnot {
        control: usize,
        target: usize,
    },
    Single {
        name: String,
        qubit: usize,
        params: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Circuit {
    pub name: String,
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            name: String::new(),
            n,
            gates: Vec::new(),
        }
    }

    /// Builds a circuit consisting only of CNOTs.
    pub fn from_cnots(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut c = Circuit::new(n);
        for &(control, target) in pairs {
            c.push(Gate::Cnot { control, target })?;
        }
        Ok(c)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        match &gate {
            Gate::Cnot { control, target } => {
                if control == target {
                    return Err(Error::Syntax {
                        line: 0,
                        message: format!("CNOT control and target are both q{control}"),
                    });
                }
                if *control >= self.n || *target >= self.n {
                    return Err(Error::Syntax {
                        line: 0,
                        message: format!(
                            "CNOT(q{control}, q{target}) out of range for {} qubits",
                            self.n
                        ),
                    });
                }
            }
            Gate::Single { qubit, .. } if *qubit >= self.n => {
                return Err(Error::Syntax {
                    line: 0,
                    message: format!("q{qubit} out of range for {} qubits", self.n),
                });
            }
            Gate::Single { .. } => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn two_qubit_skeleton(&self) -> Vec<(usize, usize)> {
        two_qubit_skeleton(self)
    }
}

/// The CNOTs of `c` in circuit order. Single-qubit gates never need routing.
pub fn two_qubit_skeleton(c: &Circuit) -> Vec<(usize, usize)> {
    c.gates
        .iter()
        .filter_map(|g| match g {
            Gate::Cnot { control, target } => Some((*control, *target)),
            Gate::Single { .. } => None,
        })
        .collect()
}

/// Operation of a mapped circuit, on physical qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MappedOp {
    Swap(usize, usize),
    Cnot(usize, usize),
    Single {
        name: String,
        qubit: usize,
        params: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MappedCircuit {
    pub m: usize,
    pub initial_layout: Mapping,
    pub ops: Vec<MappedOp>,
}

impl MappedCircuit {
    pub fn swap_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, MappedOp::Swap(..)))
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwapMode {
    #[default]
    Native,
    /// Each SWAP is written as three alternating CNOTs.
    ThreeCnot,
}

const SWAP_MARKER: &str = "swap ";
const LAYOUT_MARKER: &str = "layout:";

pub fn emit_qasm(mc: &MappedCircuit, mode: SwapMode) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "// {LAYOUT_MARKER} {}", mc.initial_layout.render());
    let _ = writeln!(out, "qreg q[{}];", mc.m);
    for op in &mc.ops {
        match op {
            MappedOp::Swap(a, b) => match mode {
                SwapMode::Native => {
                    let _ = writeln!(out, "swap q[{a}],q[{b}];");
                }
                SwapMode::ThreeCnot => {
                    let _ = writeln!(out, "// {SWAP_MARKER}q[{a}],q[{b}]");
                    let _ = writeln!(out, "cx q[{a}],q[{b}];");
                    let _ = writeln!(out, "cx q[{b}],q[{a}];");
                    let _ = writeln!(out, "cx q[{a}],q[{b}];");
                }
            },
            MappedOp::Cnot(a, b) => {
                let _ = writeln!(out, "cx q[{a}],q[{b}];");
            }
            MappedOp::Single {
                name,
                qubit,
                params,
            } => {
                if params.is_empty() {
                    let _ = writeln!(out, "{name} q[{qubit}];");
                } else {
                    let _ = writeln!(out, "{name}({params}) q[{qubit}];");
                }
            }
        }
    }
    out
}

/// Parses an OpenQASM 2.0 circuit over a single quantum register.
///
/// `measure`, `reset` and `barrier` are dropped (the first two with a
/// warning); `creg`, `include`, `gate` and `opaque` declarations are skipped.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let program = Program::parse(text, Mode::Logical)?;
    let mut circuit = Circuit::new(program.qubits.unwrap_or(0));
    for (line, op) in program.ops {
        let gate = match op {
            RawOp::Cnot(control, target) => Gate::Cnot { control, target },
            RawOp::Single {
                name,
                qubit,
                params,
            } => Gate::Single {
                name,
                qubit,
                params,
            },
            RawOp::Swap(..) => unreachable!("swap rejected in logical mode (line {line})"),
        };
        circuit.gates.push(gate);
    }
    Ok(circuit)
}

/// Parses the output of [`emit_qasm`] back into a [`MappedCircuit`].
///
/// The `// layout:` header is required. Three-CNOT SWAP expansions are
/// recognised through the `// swap` marker line written before them.
pub fn parse_mapped_qasm(text: &str) -> Result<MappedCircuit> {
    let program = Program::parse(text, Mode::Mapped)?;
    let m = program.qubits.unwrap_or(0);
    let (layout_line, layout) = program.layout.ok_or_else(|| Error::Syntax {
        line: 0,
        message: "missing `// layout:` header".into(),
    })?;
    let initial_layout = parse_layout(&layout, m).map_err(|message| Error::Syntax {
        line: layout_line,
        message,
    })?;
    let ops = program
        .ops
        .into_iter()
        .map(|(_, op)| match op {
            RawOp::Cnot(a, b) => MappedOp::Cnot(a, b),
            RawOp::Swap(a, b) => MappedOp::Swap(a, b),
            RawOp::Single {
                name,
                qubit,
                params,
            } => MappedOp::Single {
                name,
                qubit,
                params,
            },
        })
        .collect();
    Ok(MappedCircuit {
        m,
        initial_layout,
        ops,
    })
}

fn parse_layout(spec: &str, m: usize) -> std::result::Result<Mapping, String> {
    let mut pairs = Vec::new();
    for tok in spec.split_whitespace() {
        let (q, p) = tok
            .split_once("->")
            .ok_or_else(|| format!("malformed layout entry `{tok}`"))?;
        let q = q
            .strip_prefix('q')
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| format!("malformed logical qubit in `{tok}`"))?;
        let p = p
            .strip_prefix('p')
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| format!("malformed physical qubit in `{tok}`"))?;
        pairs.push((q, p));
    }
    pairs.sort_unstable();
    let n = pairs.len();
    if pairs.iter().enumerate().any(|(i, &(q, _))| q != i) {
        return Err(format!(
            "layout must assign q0..q{} exactly once",
            n.saturating_sub(1)
        ));
    }
    Mapping::new(pairs.into_iter().map(|(_, p)| p).collect(), m).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Logical,
    Mapped,
}

#[derive(Debug)]
enum RawOp {
    Cnot(usize, usize),
    Swap(usize, usize),
    Single {
        name: String,
        qubit: usize,
        params: String,
    },
}

enum Item {
    Statement { line: usize, text: String },
    Comment { line: usize, text: String },
}

/// Splits source text into `;`-terminated statements and `//` comments,
/// dropping `gate ... { ... }` bodies.
fn scan(text: &str) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    let mut buf = String::new();
    let mut start_line = 1;
    let mut line = 1;
    let mut chars = text.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '/' if chars.peek() == Some(&'/') => {
                let mut comment = String::new();
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                    comment.push(c);
                }
                items.push(Item::Comment {
                    line,
                    text: comment[1..].trim().to_string(),
                });
                line += 1;
                if buf.trim().is_empty() {
                    buf.clear();
                }
            }
            '{' => {
                let head = buf.trim_start();
                if !(head.starts_with("gate ") || head.starts_with("gate\t")) {
                    return Err(Error::Syntax {
                        line,
                        message: "unexpected `{`".into(),
                    });
                }
                let mut depth = 1;
                for c in chars.by_ref() {
                    match c {
                        '\n' => line += 1,
                        '{' => depth += 1,
                        '}' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                if depth != 0 {
                    return Err(Error::Syntax {
                        line,
                        message: "unterminated gate body".into(),
                    });
                }
                buf.clear();
            }
            ';' => {
                items.push(Item::Statement {
                    line: start_line,
                    text: buf.trim().to_string(),
                });
                buf.clear();
            }
            c => {
                if buf.trim().is_empty() && !c.is_whitespace() {
                    start_line = line;
                }
                if c == '\n' {
                    line += 1;
                }
                buf.push(c);
            }
        }
    }
    if !buf.trim().is_empty() {
        return Err(Error::Syntax {
            line: start_line,
            message: "statement is missing a terminating `;`".into(),
        });
    }
    Ok(items)
}

struct Program {
    qubits: Option<usize>,
    layout: Option<(usize, String)>,
    ops: Vec<(usize, RawOp)>,
}

struct Register {
    name: String,
    size: usize,
}

impl Program {
    fn parse(text: &str, mode: Mode) -> Result<Program> {
        let mut program = Program {
            qubits: None,
            layout: None,
            ops: Vec::new(),
        };
        let mut qreg: Option<Register> = None;
        // Remaining CNOTs of a three-CNOT SWAP expansion: (a, b, seen).
        let mut pending_swap: Option<(usize, usize, usize)> = None;

        for item in scan(text)? {
            let (line, text) = match item {
                Item::Comment { line, text } => {
                    if mode == Mode::Mapped {
                        if let Some(rest) = text.strip_prefix(LAYOUT_MARKER) {
                            program.layout = Some((line, rest.trim().to_string()));
                        } else if let Some(rest) = text.strip_prefix(SWAP_MARKER) {
                            if pending_swap.is_some() {
                                return Err(Error::Syntax {
                                    line,
                                    message: "nested swap marker".into(),
                                });
                            }
                            let reg = qreg.as_ref().ok_or_else(|| no_qreg(line))?;
                            let args = split_args(rest);
                            if args.len() != 2 {
                                return Err(Error::Syntax {
                                    line,
                                    message: "swap marker needs two qubits".into(),
                                });
                            }
                            let a = parse_qubit(args[0], reg, line)?;
                            let b = parse_qubit(args[1], reg, line)?;
                            pending_swap = Some((a, b, 0));
                        }
                    }
                    continue;
                }
                Item::Statement { line, text } => (line, text),
            };
            if text.is_empty() {
                continue;
            }
            let (keyword, rest) = split_keyword(&text);
            match keyword {
                "OPENQASM" => {
                    if !rest.trim().starts_with('2') {
                        return Err(Error::Syntax {
                            line,
                            message: format!("unsupported OpenQASM version `{}`", rest.trim()),
                        });
                    }
                }
                "include" | "creg" | "opaque" => {}
                "barrier" => {}
                "measure" | "reset" => {
                    log::warn!("line {line}: ignoring `{keyword}`");
                }
                "if" => {
                    return Err(Error::Syntax {
                        line,
                        message: "classically controlled operations are not supported".into(),
                    });
                }
                "qreg" => {
                    let (name, size) = parse_declaration(rest, line)?;
                    if qreg.is_some() {
                        return Err(Error::MultipleRegisters { line, name });
                    }
                    program.qubits = Some(size);
                    qreg = Some(Register { name, size });
                }
                _ => {
                    let reg = qreg.as_ref().ok_or_else(|| no_qreg(line))?;
                    let ops = parse_application(&text, reg, line, mode)?;
                    for op in ops {
                        if let Some((a, b, seen)) = pending_swap.as_mut() {
                            let expected = if *seen == 1 { (*b, *a) } else { (*a, *b) };
                            match op {
                                RawOp::Cnot(x, y) if (x, y) == expected => {
                                    *seen += 1;
                                    if *seen == 3 {
                                        program.ops.push((line, RawOp::Swap(*a, *b)));
                                        pending_swap = None;
                                    }
                                    continue;
                                }
                                _ => {
                                    return Err(Error::Syntax {
                                        line,
                                        message: "swap marker not followed by its three CNOTs"
                                            .into(),
                                    })
                                }
                            }
                        }
                        program.ops.push((line, op));
                    }
                }
            }
        }
        if pending_swap.is_some() {
            return Err(Error::Syntax {
                line: 0,
                message: "incomplete three-CNOT swap at end of input".into(),
            });
        }
        Ok(program)
    }
}

fn no_qreg(line: usize) -> Error {
    Error::Syntax {
        line,
        message: "gate applied before any `qreg` declaration".into(),
    }
}

fn split_keyword(text: &str) -> (&str, &str) {
    let end = text
        .find(|c: char| c.is_whitespace() || c == '(')
        .unwrap_or(text.len());
    (&text[..end], &text[end..])
}

fn parse_declaration(rest: &str, line: usize) -> Result<(String, usize)> {
    let rest = rest.trim();
    let bad = || Error::Syntax {
        line,
        message: format!("malformed register declaration `{rest}`"),
    };
    let (name, size) = rest.split_once('[').ok_or_else(bad)?;
    let size = size.strip_suffix(']').ok_or_else(bad)?;
    let size = size.trim().parse::<usize>().map_err(|_| bad())?;
    let name = name.trim();
    if !is_identifier(name) {
        return Err(bad());
    }
    Ok((name.to_string(), size))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn split_args(s: &str) -> Vec<&str> {
    s.split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .collect()
}

enum Operand {
    Qubit(usize),
    Register,
}

fn parse_operand(arg: &str, reg: &Register, line: usize) -> Result<Operand> {
    if arg == reg.name {
        return Ok(Operand::Register);
    }
    parse_qubit(arg, reg, line).map(Operand::Qubit)
}

fn parse_qubit(arg: &str, reg: &Register, line: usize) -> Result<usize> {
    let bad = |message: String| Error::Syntax { line, message };
    let (name, idx) = arg
        .split_once('[')
        .ok_or_else(|| bad(format!("malformed qubit operand `{arg}`")))?;
    let idx = idx
        .strip_suffix(']')
        .and_then(|s| s.trim().parse::<usize>().ok())
        .ok_or_else(|| bad(format!("malformed qubit operand `{arg}`")))?;
    if name.trim() != reg.name {
        return Err(bad(format!("unknown quantum register `{}`", name.trim())));
    }
    if idx >= reg.size {
        return Err(bad(format!(
            "qubit index {idx} out of range for register `{}[{}]`",
            reg.name, reg.size
        )));
    }
    Ok(idx)
}

fn parse_application(text: &str, reg: &Register, line: usize, mode: Mode) -> Result<Vec<RawOp>> {
    let (name, mut rest) = split_keyword(text);
    if !is_identifier(name) {
        return Err(Error::Syntax {
            line,
            message: format!("unexpected statement `{text}`"),
        });
    }
    let mut params = String::new();
    rest = rest.trim_start();
    if rest.starts_with('(') {
        let mut depth = 0usize;
        let mut close = None;
        for (i, c) in rest.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let close = close.ok_or_else(|| Error::Syntax {
            line,
            message: format!("unbalanced parameter list in `{text}`"),
        })?;
        params = rest[1..close].trim().to_string();
        rest = &rest[close + 1..];
    }
    let args = split_args(rest);
    match args.len() {
        0 => Err(Error::Syntax {
            line,
            message: format!("gate `{name}` has no operands"),
        }),
        1 => match parse_operand(args[0], reg, line)? {
            Operand::Qubit(qubit) => Ok(vec![RawOp::Single {
                name: name.to_string(),
                qubit,
                params,
            }]),
            Operand::Register => Ok((0..reg.size)
                .map(|qubit| RawOp::Single {
                    name: name.to_string(),
                    qubit,
                    params: params.clone(),
                })
                .collect()),
        },
        2 => {
            let is_cx = name == "cx" || name == "CX";
            let is_swap = mode == Mode::Mapped && name == "swap";
            if !is_cx && !is_swap {
                return Err(Error::UnknownGate {
                    line,
                    name: name.to_string(),
                });
            }
            let a = parse_qubit(args[0], reg, line)?;
            let b = parse_qubit(args[1], reg, line)?;
            if a == b {
                return Err(Error::Syntax {
                    line,
                    message: format!("`{name}` applied twice to qubit {a}"),
                });
            }
            Ok(vec![if is_cx {
                RawOp::Cnot(a, b)
            } else {
                RawOp::Swap(a, b)
            }])
        }
        arity => Err(Error::GateArity {
            line,
            name: name.to_string(),
            arity,
        }),
    }
}
