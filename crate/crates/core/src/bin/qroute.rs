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

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qroute::analyze::analyze;
use qroute::bench::{run_bench, to_csv, Manifest};
use qroute::mapper::TableCache;
use qroute::{
    emit_qasm, parse_mapped_qasm, parse_qasm, verify_mapped_circuit, verify_mapping, CouplingGraph,
    Error, Mapper, SearchLimits, Strategy, StrategyKind, SwapMode,
};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;

#[derive(Parser)]
#[command(name = "qroute", version, about = "SWAP-optimal qubit mapping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print diameter and reduced permutation set of an architecture.
    Analyze {
        /// Built-in name (linear-<m>, ring-<m>, complete-<m>, ibmq-london) or coupling file.
        arch: String,
        /// Also list the connected subgraphs with this many qubits.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Map a QASM circuit onto an architecture.
    Map {
        circuit: PathBuf,
        #[command(flatten)]
        opts: MapOpts,
    },
    /// Check a mapped QASM file against the original circuit.
    Verify {
        circuit: PathBuf,
        mapped: PathBuf,
        #[arg(long)]
        arch: String,
        #[arg(long)]
        json: bool,
    },
    /// Run a benchmark manifest and print CSV.
    Bench {
        manifest: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Overrides the manifest's per-mapping timeout (seconds).
        #[arg(long)]
        timeout: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MapOpts {
    #[arg(long)]
    arch: String,
    #[arg(long, default_value = "arch-limit", value_parser = parse_kind)]
    strategy: StrategyKind,
    #[arg(long)]
    relevance_filter: bool,
    /// Emit SWAPs as three CNOTs and report cost in CNOTs.
    #[arg(long)]
    swap_as_cnots: bool,
    /// Seconds.
    #[arg(long)]
    timeout: Option<u64>,
    #[arg(long)]
    max_expansions: Option<u64>,
    /// Check the result before writing it.
    #[arg(long)]
    verify: bool,
    /// Print statistics as JSON on stdout.
    #[arg(long)]
    json: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<StrategyKind, String> {
    s.parse()
        .map_err(|_| "expected one of full, arch-limit, subgraph, subgraph-limit".to_string())
}

enum Failure {
    Input(String),
    Verify(String),
    Timeout(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Timeout { .. } => Failure::Timeout(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn cmd_analyze(arch: &str, n: Option<usize>, as_json: bool) -> Result<(), Failure> {
    let g = CouplingGraph::resolve(arch)?;
    let report = analyze(&g, n, &TableCache::new())?;
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
    } else {
        print!("{}", report.render_text());
    }
    Ok(())
}

fn cmd_map(path: &Path, o: &MapOpts) -> Result<(), Failure> {
    let circuit = parse_qasm(&read(path)?)?;
    let g = CouplingGraph::resolve(&o.arch)?;
    let strategy = Strategy::new(o.strategy).with_relevance_filter(o.relevance_filter);
    let mapper = Mapper::with_limits(SearchLimits {
        max_expansions: o.max_expansions,
        timeout: o.timeout.map(Duration::from_secs),
    });
    let result = mapper.map(&circuit, &g, strategy)?;
    let space = mapper.count_search_space(&circuit, &g, strategy)?;
    let verified = if o.verify {
        let report = verify_mapping(&circuit, &result, &g);
        if !report.ok {
            return Err(Failure::Verify(report.render_text()));
        }
        Some(true)
    } else {
        None
    };
    let mode = if o.swap_as_cnots {
        SwapMode::ThreeCnot
    } else {
        SwapMode::Native
    };
    let qasm = emit_qasm(&result.to_mapped_circuit(&circuit), mode);
    let (cost, unit) = if o.swap_as_cnots {
        (result.cnot_cost(), "CNOTs")
    } else {
        (result.cost, "SWAPs")
    };
    if o.json {
        if let Some(out) = &o.output {
            write_out(Some(out), &qasm)?;
        }
        let mut stats = json!({
            "cost": result.cost,
            "cnot_cost": result.cnot_cost(),
            "strategy": strategy.to_string(),
            "initial_layout": result.initial_layout.render(),
            "final_layout": result.final_layout().render(),
            "steps": result.steps,
            "subgraph_used": result.subgraph_used,
            "stats": result.stats,
            "search_space": space,
            "verified": verified,
        });
        if o.output.is_none() {
            stats["qasm"] = json!(qasm);
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&stats).expect("serializable")
        );
    } else {
        write_out(o.output.as_deref(), &qasm)?;
        eprintln!(
            "cost {cost} {unit} ({strategy}, {} states, {} permutations, {:.3}s)",
            result.stats.states_expanded,
            result.stats.permutations_considered,
            result.stats.wall_time.as_secs_f64()
        );
    }
    Ok(())
}

fn cmd_verify(circuit: &Path, mapped: &Path, arch: &str, as_json: bool) -> Result<(), Failure> {
    let c = parse_qasm(&read(circuit)?)?;
    let mc = parse_mapped_qasm(&read(mapped)?)?;
    let g = CouplingGraph::resolve(arch)?;
    let report = verify_mapped_circuit(&c, &mc, &g);
    if as_json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Verify(format!(
            "{} violation(s)",
            report.violations.len()
        )))
    }
}

fn cmd_bench(
    path: &Path,
    jobs: usize,
    timeout: Option<u64>,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let mut manifest = Manifest::load(path)?;
    if timeout.is_some() {
        manifest.timeout = timeout;
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let rows = run_bench(&manifest, base, jobs)?;
    write_out(output, &to_csv(&rows, &manifest.limits()))?;
    let mut mismatches = 0;
    for row in &rows {
        if row.mismatch() {
            mismatches += 1;
            eprintln!(
                "COST MISMATCH in {}: reference {:?} vs proposed {:?}",
                row.name, row.reference, row.proposed
            );
        }
        for (label, outcome) in [("reference", &row.reference), ("proposed", &row.proposed)] {
            if let qroute::bench::Outcome::Failed { message } = outcome {
                eprintln!("{}: {label} failed: {message}", row.name);
            }
        }
    }
    if mismatches > 0 {
        return Err(Failure::Verify(format!(
            "{mismatches} row(s) with differing costs"
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Analyze { arch, n, json } => cmd_analyze(arch, *n, *json),
        Command::Map { circuit, opts } => cmd_map(circuit, opts),
        Command::Verify {
            circuit,
            mapped,
            arch,
            json,
        } => cmd_verify(circuit, mapped, arch, *json),
        Command::Bench {
            manifest,
            jobs,
            timeout,
            output,
        } => cmd_bench(manifest, *jobs, *timeout, output.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Timeout(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_TIMEOUT)
        }
    }
}
