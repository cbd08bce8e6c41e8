//! `sparsecirc`: JSON in, JSON out. Graphs are read as JSON or graph6, detected
//! by the first non-blank byte; results go to stdout (or `--out`), diagnostics
//! to stderr.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use sparsecirc::construction::{decompose, enumerate_circuits, random_circuit, replay};
use sparsecirc::cylinder::edge_matroid_rank;
use sparsecirc::graph::{is_isomorphic, read_graph_input, GraphJson};
use sparsecirc::matroid::{
    is_redundantly_rigid, is_rm_connected, matroid_components_with, redundantly_rigid_components,
    ComponentMode,
};
use sparsecirc::sparsity::{is_sparse, is_tight};
use sparsecirc::structure::{
    edge_connectivity, is_2_connected, is_3_connected, is_connected, node_census,
    nontrivial_3_edge_cutsets,
};
use sparsecirc::{
    brute_force_is_circuit, is_circuit, is_multicircuit, ConstructionTrace, Error, Graph,
    GraphInput, GraphView,
};

const DEFAULT_SEED: u64 = 2022;

#[derive(Parser)]
#[command(
    name = "sparsecirc",
    version,
    about = "Circuits of the (2,2)-sparsity matroid"
)]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sparsity, circuit and connectivity facts about a graph.
    Check {
        /// File path, `-` for stdin, or an inline JSON/graph6 string.
        graph: String,
        /// Also report whether the graph is isomorphic to this one.
        #[arg(long)]
        iso: Option<String>,
        /// Decide circuithood by subset scan instead of the pebble game.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        l: u32,
    },
    /// Construction trace of a circuit.
    Decompose { graph: String },
    /// Replay a construction trace into a graph.
    Build { trace: String },
    /// Random circuit together with its trace.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Canonical forms of all circuits on `n` vertices.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Matroid components, redundantly rigid components, connectivity.
    Components {
        graph: String,
        /// Enumerate circuits by subset scan.
        #[arg(long)]
        oracle: bool,
    },
    /// Exact cylinder rigidity-matrix rank against the pebble rank.
    Rank {
        graph: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

enum Failure {
    Lib(Error),
    Io(String, io::Error),
    Violation(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read_source(src: &str) -> Result<String, Failure> {
    if src == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io("stdin".into(), e))?;
        return Ok(s);
    }
    let path = Path::new(src);
    if path.is_file() {
        return fs::read_to_string(path).map_err(|e| Failure::Io(src.into(), e));
    }
    Ok(src.to_string())
}

fn read_input(src: &str) -> Result<GraphInput, Failure> {
    Ok(read_graph_input(&read_source(src)?)?)
}

fn read_simple(src: &str) -> Result<Graph, Failure> {
    Ok(read_input(src)?.into_simple()?)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn connectivity<G: GraphView>(g: &G) -> Result<Value, Failure> {
    let lambda = edge_connectivity(g);
    let cutsets = if lambda >= 3 && is_connected(g) {
        to_value(&nontrivial_3_edge_cutsets(g)?)
    } else {
        Value::Null
    };
    Ok(json!({
        "connected": is_connected(g),
        "two_connected": is_2_connected(g),
        "three_connected": is_3_connected(g),
        "edge_connectivity": lambda,
        "nontrivial_3_edge_cutsets": cutsets,
    }))
}

fn check(graph: &str, iso: Option<&str>, oracle: bool, k: u32, l: u32) -> Result<Value, Failure> {
    let input = read_input(graph)?;
    let mut out = match &input {
        GraphInput::Simple(g) => {
            let circuit = if oracle {
                brute_force_is_circuit(g)?
            } else {
                is_circuit(g)
            };
            json!({
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "simple": true,
                "is_sparse": is_sparse(g, k, l)?,
                "is_tight": is_tight(g, k, l)?,
                "is_circuit": circuit,
                "connectivity": connectivity(g)?,
                "node_census": to_value(&node_census(g)),
            })
        }
        GraphInput::Multi(m) => json!({
            "vertices": m.vertex_count(),
            "edges": m.edge_count(),
            "simple": false,
            "is_sparse": is_sparse(m, k, l)?,
            "is_tight": is_tight(m, k, l)?,
            "is_circuit": false,
            "is_multicircuit": is_multicircuit(m),
            "connectivity": connectivity(m)?,
        }),
    };
    out["k"] = json!(k);
    out["l"] = json!(l);
    if let Some(other) = iso {
        let a = input.into_simple()?;
        let b = read_simple(other)?;
        out["isomorphic"] = json!(is_isomorphic(&a, &b));
    }
    Ok(out)
}

fn run(cmd: Command) -> Result<Value, Failure> {
    match cmd {
        Command::Check {
            graph,
            iso,
            oracle,
            k,
            l,
        } => check(&graph, iso.as_deref(), oracle, k, l),
        Command::Decompose { graph } => {
            let g = read_simple(&graph)?;
            match decompose(&g) {
                Ok(trace) => Ok(to_value(&trace)),
                Err(Error::TheoremViolation { reason, graph }) => Err(Failure::Violation(json!({
                    "theorem_violation": reason,
                    "graph": GraphJson::from_graph(&graph),
                }))),
                Err(e) => Err(e.into()),
            }
        }
        Command::Build { trace } => {
            let trace = ConstructionTrace::from_json(&read_source(&trace)?)?;
            match replay(&trace) {
                Ok(g) => Ok(to_value(&g.to_json())),
                Err(Error::TheoremViolation { reason, graph }) => Err(Failure::Violation(json!({
                    "theorem_violation": reason,
                    "graph": GraphJson::from_graph(&graph),
                }))),
                Err(e) => Err(e.into()),
            }
        }
        Command::Generate { n, seed } => {
            let (g, trace) = random_circuit(n, seed)?;
            Ok(json!({ "graph": g.to_json(), "trace": trace }))
        }
        Command::Enumerate { n } => {
            let forms = enumerate_circuits(n)?;
            Ok(json!({ "n": n, "count": forms.len(), "circuits": forms }))
        }
        Command::Components { graph, oracle } => {
            let g = read_simple(&graph)?;
            let mode = if oracle {
                ComponentMode::Definitional
            } else {
                ComponentMode::Basis
            };
            let rm_connected = match is_rm_connected(&g) {
                Ok(b) => json!(b),
                Err(Error::Precondition(_)) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            Ok(json!({
                "matroid_components": matroid_components_with(&g, mode)?,
                "redundantly_rigid_components": redundantly_rigid_components(&g),
                "redundantly_rigid": is_redundantly_rigid(&g),
                "rm_connected": rm_connected,
            }))
        }
        Command::Rank { graph, seed } => {
            let g = read_input(&graph)?.to_multigraph();
            Ok(to_value(&edge_matroid_rank(&g, seed)?))
        }
    }
}

fn emit(value: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(p.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|v| emit(&v, cli.out.as_deref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(report)) => {
            eprintln!("theorem violation: {}", report["theorem_violation"]);
            // The report is still JSON; it goes where a result would.
            let _ = emit(&report, cli.out.as_deref());
            ExitCode::from(3)
        }
        Err(Failure::Lib(e @ (Error::Parse(_) | Error::Json(_)))) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(what, e)) => {
            eprintln!("error: {what}: {e}");
            ExitCode::from(1)
        }
    }
}
