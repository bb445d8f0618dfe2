//! Command-line front end: argument model, dispatch and JSON rendering.

pub mod parse;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use isolab::k3salem::{
    catalog, iota_delta, nonprojective_realizable, split_complemented, verify_salem,
    verify_witness, GramLattice, IsometryWitness,
};
use isolab::obstruction::{
    build_graph, decide, local_existence, omega_info, relevant_primes, Status,
};
use isolab::structure::{decompose, enumerate_index_maps, IndexMap};
use isolab::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

pub use parse::parse_poly;

/// Version tag written into every JSON document.
pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "isolab", version, about = "Semisimple isometries of even unimodular lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Salem polynomial tools.
    Salem {
        #[command(subcommand)]
        action: SalemAction,
    },
    /// Nonprojective realizability of a Salem polynomial on the K3 lattice.
    Realizable {
        /// Require the Salem polynomial to have degree 20.
        #[arg(long)]
        degree20: bool,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Decide realizability of F on an even unimodular lattice of signature (r, s).
    Decide {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, value_parser = parse_sig)]
        sig: (usize, usize),
        /// Index map as JSON, or @path to a JSON file.
        #[arg(long, conflicts_with = "iota_delta")]
        iota: Option<String>,
        /// Use ι_δ for the given unit pair of the Salem factor (F = S·C, sig 3,19).
        #[arg(long)]
        iota_delta: Option<usize>,
    },
    /// Obstruction graph of F.
    Graph {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        iota: Option<String>,
        /// Write the graph in DOT format to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Enumerate Idx_{r,s}(F).
    Idx {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, value_parser = parse_sig)]
        sig: (usize, usize),
    },
    /// Local existence of even unimodular F-stable lattices.
    Local {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Check an explicit isometry of a lattice.
    Witness {
        /// Gram matrix JSON: a matrix, a catalog name, or {"name": ...}.
        #[arg(long)]
        gram: PathBuf,
        /// Integer matrix JSON.
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum SalemAction {
    Verify {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
}

fn parse_sig(s: &str) -> std::result::Result<(usize, usize), String> {
    let (r, t) = s
        .split_once(',')
        .ok_or_else(|| format!("expected r,s but got {s:?}"))?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((num(r)?, num(t)?))
}

/// Reads `@path` as a file, otherwise returns the text itself.
fn inline_or_file(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn parse_iota(arg: &str) -> Result<IndexMap> {
    let text = inline_or_file(arg)?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidIndexMap(e.to_string()))
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::BadMatrix(format!("{}: {e}", path.display())))
}

fn int_matrix(v: &Value, what: &str) -> Result<Vec<Vec<i64>>> {
    serde_json::from_value(v.clone()).map_err(|e| Error::BadMatrix(format!("{what}: {e}")))
}

fn load_lattice(v: &Value) -> Result<GramLattice> {
    match v {
        Value::String(name) => catalog(name),
        Value::Object(o) if o.contains_key("name") && !o.contains_key("gram") => {
            catalog(o["name"].as_str().unwrap_or_default())
        }
        Value::Object(o) => GramLattice::new(
            o.get("name").and_then(Value::as_str).unwrap_or("custom"),
            int_matrix(o.get("gram").unwrap_or(&Value::Null), "gram")?,
        ),
        _ => GramLattice::new("custom", int_matrix(v, "gram")?),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn status_exit(s: Status) -> i32 {
    match s {
        Status::Indeterminate => EXIT_INDETERMINATE,
        _ => EXIT_DECIDED,
    }
}

/// Runs one job. Returns the exit code and the JSON document.
pub fn run(cmd: &Command) -> (i32, Value) {
    match execute(cmd) {
        Ok((code, body)) => (code, envelope(body)),
        Err(e) => (EXIT_ERROR, error_value(&e)),
    }
}

fn envelope(mut body: Value) -> Value {
    if let Value::Object(o) = &mut body {
        o.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    body
}

pub fn error_value(e: &Error) -> Value {
    envelope(json!({ "error": { "code": e.code(), "message": e.to_string() } }))
}

/// Usage errors from argument parsing, with their own stable code.
pub fn usage_error(message: &str) -> Value {
    envelope(json!({ "error": { "code": "UsageError", "message": message } }))
}

fn execute(cmd: &Command) -> Result<(i32, Value)> {
    match cmd {
        Command::Salem {
            action: SalemAction::Verify { poly },
        } => {
            let cert = verify_salem(&parse_poly(poly)?)?;
            let (lo, hi) = cert.log_lambda_bounds();
            Ok((
                EXIT_DECIDED,
                json!({ "certificate": to_value(&cert), "log_lambda": [lo, hi] }),
            ))
        }
        Command::Realizable { degree20, poly } => {
            let cert = verify_salem(&parse_poly(poly)?)?;
            if *degree20 && cert.degree != 20 {
                return Err(Error::DegreeOutOfRange(cert.degree));
            }
            let report = nonprojective_realizable(&cert)?;
            Ok((status_exit(report.status), json!({ "report": to_value(&report) })))
        }
        Command::Decide {
            poly,
            sig: (r, s),
            iota,
            iota_delta: delta,
        } => {
            let f = parse_poly(poly)?;
            let iota = match (iota, delta) {
                (Some(text), _) => Some(parse_iota(text)?),
                (None, Some(k)) => Some(iota_delta(&split_complemented(&f)?, *k)?),
                (None, None) => None,
            };
            let v = decide(&f, *r, *s, iota.as_ref())?;
            Ok((status_exit(v.status), json!({ "verdict": to_value(&v) })))
        }
        Command::Graph { poly, iota, dot } => {
            let f = parse_poly(poly)?;
            let profile = decompose(&f)?;
            let iota = iota.as_deref().map(parse_iota).transpose()?;
            let g = build_graph(&profile, iota.as_ref())?;
            if let Some(path) = dot {
                std::fs::write(path, g.to_dot())
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            Ok((
                EXIT_DECIDED,
                json!({ "graph": to_value(&g), "omega": to_value(&omega_info(&g)) }),
            ))
        }
        Command::Idx { poly, sig: (r, s) } => {
            let f = parse_poly(poly)?;
            let maps = enumerate_index_maps(&decompose(&f)?, *r, *s)?;
            Ok((
                EXIT_DECIDED,
                json!({ "count": maps.len(), "index_maps": to_value(&maps) }),
            ))
        }
        Command::Local { poly, prime } => {
            let f = parse_poly(poly)?;
            decompose(&f)?;
            let primes = match prime {
                Some(p) => vec![*p],
                None => relevant_primes(&f).ok_or(Error::FactorizationFailed)?,
            };
            let reports = primes
                .iter()
                .map(|&p| local_existence(&f, p))
                .collect::<Result<Vec<_>>>()?;
            let all = reports.iter().all(|r| r.verdict);
            Ok((EXIT_DECIDED, json!({ "all_hold": all, "reports": to_value(&reports) })))
        }
        Command::Witness { gram, matrix } => {
            let lattice = load_lattice(&read_json(gram)?)?;
            let matrix = int_matrix(&read_json(matrix)?, "matrix")?;
            let report = verify_witness(&IsometryWitness { lattice: lattice.clone(), matrix })?;
            Ok((
                EXIT_DECIDED,
                json!({ "lattice": to_value(&lattice), "report": to_value(&report) }),
            ))
        }
    }
}

/// Canonical text: keys sorted (serde_json's default map), pretty-printed.
pub fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}
