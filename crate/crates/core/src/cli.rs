//! Command-line front end. Results go to stdout as one JSON object with a
//! top-level `"schema": 1`; diagnostics go to stderr.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 refused by a budget or
//! size limit, 4 unreadable or malformed input.

use crate::cut::{CutOracle, OracleMode, DEFAULT_EXACT_LIMIT};
use crate::error::{Error, Result};
use crate::graph::{Weighted, WeightedGraph};
use crate::hom::{count_copies_approx, hom_exact, PatternGraph, DEFAULT_BUDGET};
use crate::interval::{
    check_interval_partition, select_interval_k, IntervalPartition, PrefixMatrix, Remainder,
};
use crate::io;
use crate::pair::{check_pair, check_partition, PairConfig, ALPHA_CAP};
use crate::search::{equitable_refine, find_regular_partition, partition_irregularity, SearchConfig};
use crate::weak::{fk_decompose, fk_partition};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "regularity", version, about = "Graph regularity toolkit")]
struct Cli {
    /// Largest smaller side handled by the exact cut-norm oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_EXACT_LIMIT)]
    exact_limit: usize,
    /// Operation budget for enumerations.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: f64,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker cap (the computation runs on one thread).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Oracle {
    Auto,
    Exact,
    Heuristic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cut decomposition of a graph.
    Decompose {
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Oracle::Auto)]
        oracle: Oracle,
        graph: PathBuf,
    },
    /// Weak regular partition from a cut decomposition.
    FkPartition {
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Oracle::Auto)]
        oracle: Oracle,
        /// Also write the partition to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        graph: PathBuf,
    },
    /// Approximate homomorphism and copy counts of a small pattern.
    CountHom {
        /// K<k>, P<k>, C<k>, or `v:a-b,c-d,...`.
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        eps: f64,
        /// Also report the exact hom count.
        #[arg(long)]
        exact: bool,
        graph: PathBuf,
    },
    /// Regularity of a bipartite pair.
    CheckPair {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        alpha: f64,
        bipartite: PathBuf,
    },
    /// Regularity of a vertex partition.
    CheckPartition {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        alpha: f64,
        graph: PathBuf,
        partition: PathBuf,
    },
    /// Search for an equitable regular partition into k parts.
    FindPartition {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        k: usize,
        /// Also write the partition to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        graph: PathBuf,
    },
    /// Randomized equitable refinement of a partition.
    EquitableRefine {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        graph: PathBuf,
        partition: PathBuf,
    },
    /// Interval regularity of a permutation (or dense matrix).
    PermReg {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        m: u64,
        input: PathBuf,
    },
    /// Total irregularity of a partition.
    Irreg { graph: PathBuf, partition: PathBuf },
}

/// Run with process arguments, printing to stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run_with(args, &mut out, &mut err)
}

/// Run with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli, err) {
        Ok(v) => {
            let _ = writeln!(out, "{v}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } | Error::SizeLimit { .. } => 3,
        Error::Parse { .. } | Error::Io(_) => 4,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    Ok(std::fs::write(path, text)?)
}

fn oracle(cli: &Cli, mode: Oracle) -> CutOracle {
    let mode = match mode {
        Oracle::Auto => OracleMode::Auto,
        Oracle::Exact => OracleMode::Exact,
        Oracle::Heuristic => OracleMode::Heuristic,
    };
    CutOracle {
        mode,
        ..CutOracle::default().with_exact_limit(cli.exact_limit)
    }
}

fn pair_config(cli: &Cli) -> PairConfig {
    PairConfig {
        oracle: oracle(cli, Oracle::Auto),
        budget: cli.budget,
        ..PairConfig::default()
    }
}

fn load_graph(path: &Path) -> Result<WeightedGraph> {
    io::parse_graph(&read(path)?)
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(1));
    }
    v
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::WitnessRecovery(msg.into())
}

fn dispatch(cli: &Cli, err: &mut dyn Write) -> Result<Value> {
    let v = match &cli.cmd {
        Command::Decompose { eps, oracle: o, graph } => {
            let g = load_graph(graph)?;
            let (dec, trace) = fk_decompose(&g, *eps, &oracle(cli, *o))?;
            let _ = writeln!(err, "{} terms after {} iterations", dec.len(), trace.iterations);
            json!({
                "decomposition": dec,
                "terms": dec.len(),
                "iterations": trace.iterations,
                "certified": trace.certified,
                "converged": trace.converged,
                "energy_sequence": trace.energy_sequence,
            })
        }
        Command::FkPartition { eps, oracle: o, out, graph } => {
            let g = load_graph(graph)?;
            let r = fk_partition(&g, *eps, &oracle(cli, *o))?;
            if r.partition.n() != g.n() {
                return Err(invalid("partition does not cover the graph"));
            }
            if let Some(path) = out {
                write_file(path, &io::write_partition(&r.partition))?;
            }
            json!({
                "partition": r.partition,
                "parts": r.partition.k(),
                "distance": r.distance,
                "certified": r.certified,
                "terms": r.decomposition.len(),
                "refinement_bound": r.refinement_bound,
            })
        }
        Command::CountHom { pattern, eps, exact, graph } => {
            let h = parse_pattern(pattern)?;
            let g = load_graph(graph)?;
            let est = count_copies_approx(&h, &g, *eps, &oracle(cli, Oracle::Auto), cli.budget)?;
            let mut v = to_value(&est);
            if *exact {
                v["exact"] = json!(hom_exact(&h, &g, cli.budget)?);
            }
            v
        }
        Command::CheckPair { eps, alpha, bipartite } => {
            let g = io::parse_bipartite(&read(bipartite)?)?;
            let verdict = check_pair(&g, *eps, *alpha, &pair_config(cli))?;
            if let Some(w) = &verdict.witness {
                let level = (1.0 - alpha.min(ALPHA_CAP)) * eps;
                if !w.violates(&g, level) {
                    return Err(invalid("witness failed re-validation"));
                }
            }
            to_value(&verdict)
        }
        Command::CheckPartition { eps, alpha, graph, partition } => {
            let g = load_graph(graph)?;
            let p = io::parse_partition(&read(partition)?, g.n())?;
            let verdict = check_partition(&g, &p, *eps, *alpha, &pair_config(cli))?;
            let alpha_p = alpha / (1.0 + alpha);
            let level = (1.0 - alpha_p.min(ALPHA_CAP)) * (1.0 + alpha) * eps;
            for e in &verdict.pairs {
                if let Some(w) = &e.verdict.witness {
                    let b = g.between(&p.blocks()[e.i], &p.blocks()[e.j]);
                    if !w.violates(&b, level) {
                        return Err(invalid(format!("witness for pair ({}, {}) failed re-validation", e.i, e.j)));
                    }
                }
            }
            to_value(&verdict)
        }
        Command::FindPartition { eps, alpha, k, out, graph } => {
            let g = load_graph(graph)?;
            let cfg = SearchConfig {
                pair: pair_config(cli),
                budget: cli.budget,
            };
            let r = find_regular_partition(&g, *eps, *alpha, *k, &cfg)?;
            let _ = writeln!(
                err,
                "{} terms, {} atoms, {} size tuples (nominal 10^{:.1}), {} checked",
                r.terms, r.atoms, r.tuple_count, r.nominal_log10, r.tuples_checked
            );
            if let Some(p) = &r.partition {
                let eps_v = (1.0 + 3.0 * alpha / 4.0) * eps;
                let alpha_v = (1.0 + alpha) / (1.0 + 3.0 * alpha / 4.0) - 1.0;
                if !p.is_equitable() || !check_partition(&g, p, eps_v, alpha_v, &cfg.pair)?.regular {
                    return Err(invalid("partition failed re-validation"));
                }
                if let Some(path) = out {
                    write_file(path, &io::write_partition(p))?;
                }
            }
            let mut v = to_value(&r);
            v["found"] = json!(r.partition.is_some());
            v
        }
        Command::EquitableRefine { alpha, out, graph, partition } => {
            let g = load_graph(graph)?;
            let p = io::parse_partition(&read(partition)?, g.n())?;
            let r = equitable_refine(&p, *alpha, cli.seed)?;
            if !r.partition.is_equitable() {
                return Err(invalid("refinement is not equitable"));
            }
            if let Some(path) = out {
                write_file(path, &io::write_partition(&r.partition))?;
            }
            json!({
                "partition": r.partition,
                "parts": r.partition.k(),
                "chunk_size": r.chunk_size,
                "seed": cli.seed,
            })
        }
        Command::PermReg { eps, m, input } => {
            let y = io::parse_perm_or_matrix(&read(input)?)?;
            let pm = PrefixMatrix::new(&y)?;
            let sel = select_interval_k(&pm, *eps, *m)?;
            let p = IntervalPartition::equipartition(y.rows(), sel.k, Remainder::Front)?;
            let verdict = check_interval_partition(&pm, &p, *eps)?;
            json!({
                "k": sel.k,
                "mode": sel.mode,
                "regular": verdict.regular,
                "failing_pairs": verdict.failing_pairs,
                "q": sel.q,
                "steps": sel.steps,
                "grid_k": sel.grid_k,
                "energies": sel.energies,
            })
        }
        Command::Irreg { graph, partition } => {
            let g = load_graph(graph)?;
            let p = io::parse_partition(&read(partition)?, g.n())?;
            let r = partition_irregularity(&g, &p, &oracle(cli, Oracle::Auto))?;
            let n2 = (g.n() * g.n()) as f64;
            json!({
                "irregularity": r.value,
                "normalized": if n2 > 0.0 { r.value / n2 } else { 0.0 },
                "exact": r.exact,
                "edges": g.edge_count(&g.vertices(), &g.vertices()) / 2.0,
            })
        }
    };
    Ok(with_schema(v))
}

/// `K<k>`, `P<k>` (k vertices), `C<k>`, or `v:a-b,c-d,...`.
fn parse_pattern(s: &str) -> Result<PatternGraph> {
    let usage = || Error::Domain(format!("unrecognized pattern {s:?}"));
    if let Some((v, edges)) = s.split_once(':') {
        let v: usize = v.parse().map_err(|_| usage())?;
        let mut es = Vec::new();
        for e in edges.split(',').filter(|e| !e.is_empty()) {
            let (a, b) = e.split_once('-').ok_or_else(usage)?;
            es.push((a.parse().map_err(|_| usage())?, b.parse().map_err(|_| usage())?));
        }
        return PatternGraph::new(v, &es);
    }
    let (kind, num) = s.split_at(1.min(s.len()));
    let k: usize = num.parse().map_err(|_| usage())?;
    match kind {
        "K" if k >= 1 => Ok(PatternGraph::complete(k)),
        "P" if k >= 1 => Ok(PatternGraph::path(k)),
        "C" if k >= 3 => Ok(PatternGraph::cycle(k)),
        _ => Err(usage()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns() {
        assert_eq!(parse_pattern("K3").unwrap().edge_count(), 3);
        assert_eq!(parse_pattern("C4").unwrap().edge_count(), 4);
        assert_eq!(parse_pattern("3:0-1,1-2").unwrap().edge_count(), 2);
        assert!(parse_pattern("X3").is_err());
        assert!(parse_pattern("").is_err());
        assert!(parse_pattern("C2").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run_with(["regularity", "nonsense"], &mut o, &mut e), 2);
        assert_eq!(run_with(["regularity", "--help"], &mut o, &mut e), 0);
    }
}
