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

use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use qroute_ffi::*;

fn last_error() -> String {
    let p = qr_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const SAMPLE: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[4];\n\
                      cx q[0],q[3];\ncx q[1],q[3];\ncx q[0],q[2];\ncx q[0],q[1];\n";

struct Handles {
    g: *mut QrCoupling,
    c: *mut QrCircuit,
}

impl Handles {
    fn new(arch: &str) -> Self {
        let (mut g, mut c) = (ptr::null_mut(), ptr::null_mut());
        let arch = CString::new(arch).unwrap();
        let text = CString::new(SAMPLE).unwrap();
        unsafe {
            assert_eq!(qr_coupling_resolve(arch.as_ptr(), &mut g), QrStatus::Ok);
            assert_eq!(qr_circuit_parse_qasm(text.as_ptr(), &mut c), QrStatus::Ok);
        }
        Handles { g, c }
    }
}

impl Drop for Handles {
    fn drop(&mut self) {
        unsafe {
            qr_circuit_free(self.c);
            qr_coupling_free(self.g);
        }
    }
}

#[test]
fn map_verify_emit() {
    let h = Handles::new("linear-4");
    unsafe {
        assert_eq!(qr_coupling_num_qubits(h.g), 4);
        assert_eq!(qr_coupling_diameter(h.g), 3);
        assert_eq!(qr_circuit_num_cnots(h.c), 4);
        for strategy in [
            QrStrategy::Full,
            QrStrategy::ArchLimit,
            QrStrategy::Subgraph,
            QrStrategy::SubgraphLimit,
        ] {
            let mut r = ptr::null_mut();
            assert_eq!(
                qr_map(h.c, h.g, strategy, false, 0, 10.0, &mut r),
                QrStatus::Ok
            );
            assert_eq!(qr_result_cost(r), 1);
            let mut ok = false;
            assert_eq!(qr_result_verify(r, h.c, h.g, &mut ok), QrStatus::Ok);
            assert!(ok);
            let mut layout = [usize::MAX; 4];
            assert_eq!(
                qr_result_initial_layout(r, layout.as_mut_ptr(), 4),
                QrStatus::Ok
            );
            let mut sorted = layout;
            sorted.sort();
            assert_eq!(sorted, [0, 1, 2, 3]);
            assert_eq!(
                qr_result_initial_layout(r, layout.as_mut_ptr(), 3),
                QrStatus::BufferTooSmall
            );
            let mut text = ptr::null_mut();
            assert_eq!(qr_result_emit_qasm(r, h.c, true, &mut text), QrStatus::Ok);
            let qasm = CStr::from_ptr(text).to_str().unwrap().to_owned();
            assert_eq!(qasm.matches("cx ").count(), 7);
            qr_string_free(text);
            qr_result_free(r);
        }
        let (mut total, mut per_gate) = (0, 0);
        assert_eq!(
            qr_count_search_space(h.c, h.g, QrStrategy::Full, &mut total, &mut per_gate),
            QrStatus::Ok
        );
        assert_eq!((total, per_gate), (96, 24));
        assert_eq!(
            qr_count_search_space(
                h.c,
                h.g,
                QrStrategy::ArchLimit,
                ptr::null_mut(),
                &mut per_gate
            ),
            QrStatus::Ok
        );
        assert_eq!(per_gate, 9);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            qr_coupling_resolve(ptr::null(), &mut g),
            QrStatus::NullArgument
        );
        let bad = CString::new("hexagon").unwrap();
        assert_eq!(
            qr_coupling_resolve(bad.as_ptr(), &mut g),
            QrStatus::ArchitectureError
        );
        assert!(g.is_null());
        assert!(last_error().contains("hexagon"));

        let edges = [0usize, 1, 2, 3];
        assert_eq!(
            qr_coupling_from_edges(4, edges.as_ptr(), 2, &mut g),
            QrStatus::ArchitectureError
        );

        let mut c = ptr::null_mut();
        let text = CString::new("OPENQASM 2.0;\nqreg q[2];\ncz q[0],q[1];\n").unwrap();
        assert_eq!(
            qr_circuit_parse_qasm(text.as_ptr(), &mut c),
            QrStatus::ParseError
        );
        assert!(last_error().contains("line 3"));
        let invalid = [0x66u8, 0xff, 0];
        assert_eq!(
            qr_circuit_parse_qasm(invalid.as_ptr().cast(), &mut c),
            QrStatus::InvalidUtf8
        );

        let h = Handles::new("linear-3");
        let mut r = ptr::null_mut();
        assert_eq!(
            qr_map(h.c, h.g, QrStrategy::Full, false, 0, 0.0, &mut r),
            QrStatus::TooManyQubits
        );
        assert_eq!(
            qr_map(ptr::null(), h.g, QrStrategy::Full, false, 0, 0.0, &mut r),
            QrStatus::NullArgument
        );
        assert!(r.is_null());

        let wide = Handles::new("linear-9");
        assert_eq!(
            qr_map(wide.c, wide.g, QrStrategy::Full, false, 0, 0.0, &mut r),
            QrStatus::CapacityExceeded
        );
        let h = Handles::new("linear-4");
        assert_eq!(
            qr_map(h.c, h.g, QrStrategy::Full, false, 1, 0.0, &mut r),
            QrStatus::Timeout
        );

        // null handles are tolerated by accessors and destructors
        assert_eq!(qr_result_cost(ptr::null()), 0);
        qr_result_free(ptr::null_mut());
        qr_string_free(ptr::null_mut());
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let bad = CString::new("nowhere").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(
            qr_coupling_resolve(bad.as_ptr(), &mut g),
            QrStatus::ArchitectureError
        );
    }
    std::thread::spawn(|| assert!(qr_last_error().is_null()))
        .join()
        .unwrap();
    assert!(unsafe { CStr::from_ptr(qr_version()) }
        .to_str()
        .unwrap()
        .starts_with("0."));
}

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_staticlib() {
    let lib = target_dir().join("libqroute_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = tempfile::tempdir().unwrap();
    let exe = out.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(
        String::from_utf8_lossy(&run.stdout).trim(),
        "cost=1 ok=1 total=96 per_gate=24 swap=1"
    );
}
