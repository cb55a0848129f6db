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

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: only a single quantum register is supported (found `{name}`)")]
    MultipleRegisters { line: usize, name: String },
    #[error("line {line}: gate `{name}` acts on {arity} qubits; at most 2 are supported")]
    GateArity {
        line: usize,
        name: String,
        arity: usize,
    },
    #[error("line {line}: unknown two-qubit gate `{name}`")]
    UnknownGate { line: usize, name: String },
    #[error("invalid architecture: {0}")]
    Architecture(String),
    #[error("coupling graph is disconnected: no path between p{0} and p{1}")]
    Disconnected(usize, usize),
    #[error("permutation size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("{what} on {m} qubits exceeds the supported limit of {limit}")]
    CapacityExceeded {
        what: &'static str,
        m: usize,
        limit: usize,
    },
    #[error("permutation {0} is not contained in the table")]
    NotInTable(String),
    #[error("circuit uses {n} qubits but the architecture only has {m}")]
    TooManyQubits { n: usize, m: usize },
    #[error("strategy {0} is not valid for this operation")]
    WrongStrategy(String),
    #[error("search budget exhausted after {expanded} expansions")]
    Timeout { expanded: u64 },
    #[error("{0}")]
    Io(String),
}
