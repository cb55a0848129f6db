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

//! C interface to the qroute mapper.
//!
//! Objects are opaque handles created by `qr_*_new`/`qr_*_parse`-style
//! constructors and released with the matching `qr_*_free`. Every fallible
//! call returns a [`QrStatus`]; the message of the most recent failure on
//! the calling thread is available from [`qr_last_error`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use qroute::{
    emit_qasm, parse_qasm, verify_mapping, Circuit, CouplingGraph, Error, Mapper, MappingResult,
    SearchLimits, Strategy, StrategyKind, SwapMode,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ArchitectureError = 4,
    InvalidArgument = 5,
    CapacityExceeded = 6,
    TooManyQubits = 7,
    Timeout = 8,
    IoError = 9,
    BufferTooSmall = 10,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrStrategy {
    Full = 0,
    ArchLimit = 1,
    Subgraph = 2,
    SubgraphLimit = 3,
}

impl From<QrStrategy> for StrategyKind {
    fn from(s: QrStrategy) -> Self {
        match s {
            QrStrategy::Full => StrategyKind::Full,
            QrStrategy::ArchLimit => StrategyKind::ArchLimit,
            QrStrategy::Subgraph => StrategyKind::Subgraph,
            QrStrategy::SubgraphLimit => StrategyKind::SubgraphLimit,
        }
    }
}

/// Coupling graph of a device.
pub struct QrCoupling(CouplingGraph);

/// Parsed input circuit.
pub struct QrCircuit(Circuit);

/// Outcome of a mapping run.
pub struct QrResult(MappingResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> QrStatus {
    match e {
        Error::Syntax { .. }
        | Error::MultipleRegisters { .. }
        | Error::GateArity { .. }
        | Error::UnknownGate { .. } => QrStatus::ParseError,
        Error::Architecture(_) | Error::Disconnected(..) => QrStatus::ArchitectureError,
        Error::CapacityExceeded { .. } => QrStatus::CapacityExceeded,
        Error::TooManyQubits { .. } => QrStatus::TooManyQubits,
        Error::Timeout { .. } => QrStatus::Timeout,
        Error::Io(_) => QrStatus::IoError,
        Error::SizeMismatch(..)
        | Error::InvalidPermutation(_)
        | Error::NotInTable(_)
        | Error::WrongStrategy(_) => QrStatus::InvalidArgument,
    }
}

struct Fail(QrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(QrStatus::NullArgument, format!("{what} is NULL"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal panic".into());
            set_error(format!("panic: {msg}"));
            QrStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(QrStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn pairs_arg(
    p: *const usize,
    count: usize,
    what: &str,
) -> Result<Vec<(usize, usize)>, Fail> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(null(what));
    }
    let flat = std::slice::from_raw_parts(p, 2 * count);
    Ok(flat.chunks_exact(2).map(|c| (c[0], c[1])).collect())
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Resolves a built-in architecture name (`linear-5`, `ibmq-london`, ...)
/// or reads a coupling file.
#[no_mangle]
pub unsafe extern "C" fn qr_coupling_resolve(
    spec: *const c_char,
    out: *mut *mut QrCoupling,
) -> QrStatus {
    guard(|| {
        let spec = str_arg(spec, "spec")?;
        put(out, QrCoupling(CouplingGraph::resolve(spec)?))
    })
}

/// Builds a coupling graph on `m` qubits from `num_edges` pairs stored
/// flat in `edges` (`2 * num_edges` entries).
#[no_mangle]
pub unsafe extern "C" fn qr_coupling_from_edges(
    m: usize,
    edges: *const usize,
    num_edges: usize,
    out: *mut *mut QrCoupling,
) -> QrStatus {
    guard(|| {
        let edges = pairs_arg(edges, num_edges, "edges")?;
        put(out, QrCoupling(CouplingGraph::new(m, edges)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qr_coupling_num_qubits(g: *const QrCoupling) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_qubits())
}

/// Longest shortest path between two qubits.
#[no_mangle]
pub unsafe extern "C" fn qr_coupling_diameter(g: *const QrCoupling) -> usize {
    g.as_ref().map_or(0, |g| g.0.diameter())
}

#[no_mangle]
pub unsafe extern "C" fn qr_coupling_free(g: *mut QrCoupling) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Parses OpenQASM 2 source text.
#[no_mangle]
pub unsafe extern "C" fn qr_circuit_parse_qasm(
    text: *const c_char,
    out: *mut *mut QrCircuit,
) -> QrStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        put(out, QrCircuit(parse_qasm(text)?))
    })
}

/// Circuit of `num_gates` CNOTs on `n` qubits; `pairs` holds
/// control/target indices flat.
#[no_mangle]
pub unsafe extern "C" fn qr_circuit_from_cnots(
    n: usize,
    pairs: *const usize,
    num_gates: usize,
    out: *mut *mut QrCircuit,
) -> QrStatus {
    guard(|| {
        let pairs = pairs_arg(pairs, num_gates, "pairs")?;
        put(out, QrCircuit(Circuit::from_cnots(n, &pairs)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qr_circuit_num_qubits(c: *const QrCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.0.num_qubits())
}

#[no_mangle]
pub unsafe extern "C" fn qr_circuit_num_cnots(c: *const QrCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.0.two_qubit_skeleton().len())
}

#[no_mangle]
pub unsafe extern "C" fn qr_circuit_free(c: *mut QrCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Maps `circuit` onto `coupling`. `max_expansions == 0` and
/// `timeout_seconds <= 0` mean unlimited.
#[no_mangle]
pub unsafe extern "C" fn qr_map(
    circuit: *const QrCircuit,
    coupling: *const QrCoupling,
    strategy: QrStrategy,
    relevance_filter: bool,
    max_expansions: u64,
    timeout_seconds: f64,
    out: *mut *mut QrResult,
) -> QrStatus {
    guard(|| {
        let c = ref_arg(circuit, "circuit")?;
        let g = ref_arg(coupling, "coupling")?;
        let limits = SearchLimits {
            max_expansions: (max_expansions > 0).then_some(max_expansions),
            timeout: (timeout_seconds > 0.0).then(|| Duration::from_secs_f64(timeout_seconds)),
        };
        let s = Strategy::new(strategy.into()).with_relevance_filter(relevance_filter);
        put(
            out,
            QrResult(Mapper::with_limits(limits).map(&c.0, &g.0, s)?),
        )
    })
}

/// Permutation counts a strategy would consider, summed over gates
/// (`total`) and for a single gate (`per_gate`). Either output may be NULL.
#[no_mangle]
pub unsafe extern "C" fn qr_count_search_space(
    circuit: *const QrCircuit,
    coupling: *const QrCoupling,
    strategy: QrStrategy,
    total: *mut u64,
    per_gate: *mut u64,
) -> QrStatus {
    guard(|| {
        let c = ref_arg(circuit, "circuit")?;
        let g = ref_arg(coupling, "coupling")?;
        let space = qroute::count_search_space(&c.0, &g.0, Strategy::new(strategy.into()))?;
        if let Some(t) = total.as_mut() {
            *t = space.total;
        }
        if let Some(p) = per_gate.as_mut() {
            *p = space.per_gate;
        }
        Ok(())
    })
}

/// Number of inserted SWAPs.
#[no_mangle]
pub unsafe extern "C" fn qr_result_cost(r: *const QrResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.cost)
}

#[no_mangle]
pub unsafe extern "C" fn qr_result_num_logical(r: *const QrResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.initial_layout.num_logical())
}

/// Copies the initial physical position of each logical qubit into
/// `buf[0..len]`; `len` must be at least [`qr_result_num_logical`].
#[no_mangle]
pub unsafe extern "C" fn qr_result_initial_layout(
    r: *const QrResult,
    buf: *mut usize,
    len: usize,
) -> QrStatus {
    guard(|| {
        let r = ref_arg(r, "result")?;
        let layout = r.0.initial_layout.phys_of_log();
        if len < layout.len() {
            return Err(Fail(
                QrStatus::BufferTooSmall,
                format!("layout needs {} entries, buffer has {len}", layout.len()),
            ));
        }
        if !layout.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(layout.as_ptr(), buf, layout.len());
        }
        Ok(())
    })
}

/// Writes the mapped circuit as OpenQASM into `*out`; release it with
/// [`qr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qr_result_emit_qasm(
    r: *const QrResult,
    circuit: *const QrCircuit,
    swap_as_cnots: bool,
    out: *mut *mut c_char,
) -> QrStatus {
    guard(|| {
        let r = ref_arg(r, "result")?;
        let c = ref_arg(circuit, "circuit")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if c.0.two_qubit_skeleton().len() != r.0.steps.len() {
            return Err(Fail(
                QrStatus::InvalidArgument,
                "result belongs to another circuit".into(),
            ));
        }
        let mode = if swap_as_cnots {
            SwapMode::ThreeCnot
        } else {
            SwapMode::Native
        };
        let text = emit_qasm(&r.0.to_mapped_circuit(&c.0), mode);
        *out = CString::new(text).expect("QASM has no NUL").into_raw();
        Ok(())
    })
}

/// Replays the result against the coupling graph. `*ok` is set to whether
/// all constraints hold; the violations are available from
/// [`qr_last_error`] when it is false.
#[no_mangle]
pub unsafe extern "C" fn qr_result_verify(
    r: *const QrResult,
    circuit: *const QrCircuit,
    coupling: *const QrCoupling,
    ok: *mut bool,
) -> QrStatus {
    guard(|| {
        let r = ref_arg(r, "result")?;
        let c = ref_arg(circuit, "circuit")?;
        let g = ref_arg(coupling, "coupling")?;
        let ok = ok.as_mut().ok_or_else(|| null("ok"))?;
        let report = verify_mapping(&c.0, &r.0, &g.0);
        *ok = report.ok;
        if !report.ok {
            set_error(report.render_text());
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qr_result_free(r: *mut QrResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
