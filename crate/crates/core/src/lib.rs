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

//! Exact SWAP-minimal qubit mapping with restricted permutation sets.
//!
//! ```
//! use qroute::{map_circuit, verify_mapping, Circuit, CouplingGraph, Strategy};
//!
//! let c = Circuit::from_cnots(4, &[(0, 3), (1, 3), (0, 2), (0, 1)]).unwrap();
//! let g = CouplingGraph::linear(4).unwrap();
//! let r = map_circuit(&c, &g, Strategy::ARCH_LIMIT).unwrap();
//! assert_eq!(r.cost, 1);
//! assert!(verify_mapping(&c, &r, &g).ok);
//! ```

pub mod analyze;
pub mod bench;
pub mod circuit;
pub mod coupling;
pub mod error;
pub mod mapper;
pub mod permtools;
pub mod verify;

pub use circuit::{
    emit_qasm, parse_mapped_qasm, parse_qasm, Circuit, Gate, MappedCircuit, MappedOp, SwapMode,
};
pub use coupling::{connected_subgraphs, load_coupling, CouplingGraph, Subgraph};
pub use error::{Error, Result};
pub use mapper::{
    count_search_space, map_circuit, map_optimal, solve_on_subgraphs, Mapper, Mapping,
    MappingResult, SearchLimits, SearchSpace, SearchStats, Strategy, StrategyKind,
};
pub use permtools::{cayley_bfs, reduced_set, Permutation, PermutationTable};
pub use verify::{verify_mapped_circuit, verify_mapping, VerifyReport, Violation, ViolationKind};
