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

//! Benchmark matrix: each manifest row maps one circuit under a reference
//! and a proposed strategy and records costs, search-space sizes and times.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::parse_qasm;
use crate::coupling::CouplingGraph;
use crate::error::{Error, Result};
use crate::mapper::{Mapper, SearchLimits, Strategy};

pub const CSV_HEADER: [&str; 9] = [
    "name", "n", "gates", "c", "pi", "t_ref", "pi_prime", "t_prop", "speedup",
];

fn default_reference() -> String {
    "full".into()
}

fn default_proposed() -> String {
    "arch-limit".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    /// Wall-clock limit per mapping, seconds.
    pub timeout: Option<u64>,
    pub max_expansions: Option<u64>,
    #[serde(default)]
    pub run: Vec<RunSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub name: String,
    /// QASM file, relative to the manifest.
    pub circuit: PathBuf,
    /// Built-in name or coupling file relative to the manifest.
    pub arch: String,
    #[serde(default = "default_reference")]
    pub reference: String,
    #[serde(default = "default_proposed")]
    pub proposed: String,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Syntax {
            line: e
                .span()
                .map_or(0, |s| text[..s.start].lines().count().max(1)),
            message: e.message().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_expansions: self.max_expansions,
            timeout: self.timeout.map(Duration::from_secs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Outcome {
    Done { cost: usize, seconds: f64 },
    Timeout,
    Failed { message: String },
}

impl Outcome {
    fn seconds(&self) -> Option<f64> {
        match self {
            Outcome::Done { seconds, .. } => Some(*seconds),
            _ => None,
        }
    }

    fn cost(&self) -> Option<usize> {
        match self {
            Outcome::Done { cost, .. } => Some(*cost),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub name: String,
    pub n: usize,
    pub gates: usize,
    pub pi: u64,
    pub pi_prime: u64,
    pub reference: Outcome,
    pub proposed: Outcome,
}

impl BenchRow {
    /// Both strategies finished with different costs.
    pub fn mismatch(&self) -> bool {
        matches!((self.reference.cost(), self.proposed.cost()), (Some(a), Some(b)) if a != b)
    }

    pub fn speedup(&self) -> Option<f64> {
        let (r, p) = (self.reference.seconds()?, self.proposed.seconds()?);
        Some(r / p.max(1e-9))
    }

    fn cost_cell(&self) -> String {
        match (self.reference.cost(), self.proposed.cost()) {
            (Some(a), Some(b)) if a != b => format!("{a}!={b}"),
            (Some(c), _) | (None, Some(c)) => c.to_string(),
            (None, None) => "-".into(),
        }
    }

    fn record(&self, limits: &SearchLimits) -> [String; 9] {
        let time = |o: &Outcome| match o {
            Outcome::Done { seconds, .. } => format!("{seconds:.4}"),
            Outcome::Timeout => timeout_sentinel(limits),
            Outcome::Failed { .. } => "error".into(),
        };
        let speedup = match (&self.reference, self.speedup()) {
            (_, Some(s)) => format!("{s:.2}"),
            (Outcome::Timeout, None) => match (limits.timeout, self.proposed.seconds()) {
                (Some(t), Some(p)) => format!(">{:.2}", t.as_secs_f64() / p.max(1e-9)),
                _ => "-".into(),
            },
            _ => "-".into(),
        };
        [
            self.name.clone(),
            self.n.to_string(),
            self.gates.to_string(),
            self.cost_cell(),
            self.pi.to_string(),
            time(&self.reference),
            self.pi_prime.to_string(),
            time(&self.proposed),
            speedup,
        ]
    }
}

/// `>1h`, `>5m`, `>90s`, or `>N exp` when only an expansion budget applies.
pub fn timeout_sentinel(limits: &SearchLimits) -> String {
    match (limits.timeout, limits.max_expansions) {
        (Some(t), _) => {
            let s = t.as_secs();
            if s > 0 && s % 3600 == 0 {
                format!(">{}h", s / 3600)
            } else if s > 0 && s % 60 == 0 {
                format!(">{}m", s / 60)
            } else {
                format!(">{s}s")
            }
        }
        (None, Some(n)) => format!(">{n}exp"),
        (None, None) => ">?".into(),
    }
}

fn timed(mapper: &Mapper, c: &crate::circuit::Circuit, g: &CouplingGraph, s: Strategy) -> Outcome {
    let start = Instant::now();
    match mapper.map(c, g, s) {
        Ok(r) => Outcome::Done {
            cost: r.cost,
            seconds: start.elapsed().as_secs_f64(),
        },
        Err(Error::Timeout { .. }) => Outcome::Timeout,
        Err(e) => Outcome::Failed {
            message: e.to_string(),
        },
    }
}

fn run_one(spec: &RunSpec, base: &Path, mapper: &Mapper) -> Result<BenchRow> {
    let path = base.join(&spec.circuit);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let circuit = parse_qasm(&text)?.with_name(spec.name.clone());
    let arch = match base.join(&spec.arch) {
        p if p.is_file() => p.to_string_lossy().into_owned(),
        _ => spec.arch.clone(),
    };
    let g = CouplingGraph::resolve(&arch)?;
    let reference: Strategy = spec.reference.parse()?;
    let proposed: Strategy = spec.proposed.parse()?;
    let pi = mapper.count_search_space(&circuit, &g, reference)?.total;
    let pi_prime = mapper.count_search_space(&circuit, &g, proposed)?.total;
    Ok(BenchRow {
        name: spec.name.clone(),
        n: circuit.num_qubits(),
        gates: circuit.two_qubit_skeleton().len(),
        pi,
        pi_prime,
        reference: timed(mapper, &circuit, &g, reference),
        proposed: timed(mapper, &circuit, &g, proposed),
    })
}

/// Runs every manifest row on up to `jobs` threads. Rows come back in
/// manifest order; a row that cannot even be set up is an error.
pub fn run_bench(manifest: &Manifest, base: &Path, jobs: usize) -> Result<Vec<BenchRow>> {
    let mapper = Mapper::with_limits(manifest.limits());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        manifest
            .run
            .par_iter()
            .map(|spec| {
                let row = run_one(spec, base, &mapper);
                if let Ok(row) = &row {
                    log::info!("{}: {:?} vs {:?}", row.name, row.reference, row.proposed);
                }
                row
            })
            .collect()
    })
}

pub fn to_csv(rows: &[BenchRow], limits: &SearchLimits) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for row in rows {
        w.write_record(row.record(limits)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
