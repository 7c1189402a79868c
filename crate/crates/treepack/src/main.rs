//! Command-line interface: analyze | order | pack | cover | decompose |
//! verify | generate | simulate.
//!
//! Exit codes (stable for CI): 0 success or valid certificate, 1 invalid
//! certificate or structured refusal, 2 structured simulation
//! obstruction, 3 usage/input/file errors, 4 internal invariant or
//! window violations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use treepack::error::Error;
use treepack::exchange::StepAction;
use treepack::{
    build_covering, colouring_number, degeneracy_ordering, edge_connectivity, io,
    max_tree_packing, min_cover_number, nash_williams_check, run_budgeted, run_finite,
    verify_certificate, Certificate, CoverOutcome, ExchangeStepRecord,
    LazyCountableGraph, MultiGraph, NwMode, PackingOutcome, SimOutcome,
};

#[derive(Parser)]
#[command(name = "treepack", version, about = "Spanning-tree packings, coverings and decompositions of multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Matroid,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Size, colouring number, edge connectivity, covering and packing numbers
    Analyze { file: PathBuf },
    /// Degeneracy ordering with back degrees and back-edge blocks
    Order { file: PathBuf },
    /// Find k edge-disjoint spanning trees or a sparse-partition refusal
    Pack {
        file: PathBuf,
        #[arg(short)]
        k: usize,
        /// Write the certificate here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find k spanning trees covering every edge, or a density refusal
    Cover {
        file: PathBuf,
        /// Defaults to the minimum feasible k
        #[arg(short)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Matroid)]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Packing + good ordering + exchange run into a k-decomposition
    Decompose {
        file: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the step trace as JSON lines
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check a certificate file against a graph file
    Verify { graph: PathBuf, certificate: PathBuf },
    /// Write a generated graph
    Generate {
        /// prop32 | complete | cycle | doubled_tree | random_multigraph
        family: String,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        /// paths per vertex pair for prop32
        #[arg(long, default_value_t = 2)]
        c: usize,
        #[arg(long, short)]
        n: Option<usize>,
        /// edge count for random_multigraph
        #[arg(long, short)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Budgeted exchange run on a lazily presented countable family
    Simulate {
        /// comb_star | doubled_ray | multiplied_ray
        family: String,
        #[arg(short, default_value_t = 2)]
        k: usize,
        /// step budget
        #[arg(short = 'N', long = "budget", default_value_t = 1000)]
        budget: usize,
        /// copies per edge for multiplied_ray
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        checkpoint_every: usize,
        /// Write the step trace as JSON lines
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 3 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::Invariant(_) | Error::WindowViolation { .. } => 4,
                Error::NoEligibleTree { .. } => 2,
                _ => 3,
            })
        }
    }
}

fn load_graph(path: &Path) -> treepack::Result<MultiGraph> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    io::parse_auto(&text)
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> treepack::Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn trace_jsonl(trace: &[ExchangeStepRecord]) -> String {
    trace
        .iter()
        .map(|r| serde_json::to_string(r).expect("record serializes"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn run(command: Command) -> treepack::Result<u8> {
    match command {
        Command::Analyze { file } => {
            let g = load_graph(&file)?;
            let connected = g.is_connected();
            let col = colouring_number(&g);
            let conn = if g.vertex_count() >= 2 {
                Some(edge_connectivity(&g)?)
            } else {
                None
            };
            let min_cover = connected.then(|| min_cover_number(&g)).transpose()?;
            let max_packing = connected.then(|| max_packing_size(&g)).transpose()?;
            let doc = json!({
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "connected": connected,
                "colouring_number": col,
                "edge_connectivity": conn,
                "min_cover_number": min_cover,
                "max_packing_size": max_packing,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(0)
        }
        Command::Order { file } => {
            let g = load_graph(&file)?;
            let ord = degeneracy_ordering(&g);
            let partition = treepack::back_edge_partition(&g, &ord);
            let back: Vec<usize> = (0..g.vertex_count()).map(|v| ord.back_degree(v)).collect();
            let doc = json!({
                "order": ord.order(),
                "mu": ord.mu(),
                "back_degrees": back,
                "blocks": partition.classes(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(0)
        }
        Command::Pack { file, k, out } => {
            let g = load_graph(&file)?;
            match max_tree_packing(&g, k)? {
                PackingOutcome::Packing(cert) => {
                    write_or_print(&out, &serde_json::to_string_pretty(&cert).unwrap())?;
                    Ok(0)
                }
                PackingOutcome::Infeasible(witness) => {
                    let doc = json!({
                        "refused": true,
                        "hypothesis": "packing",
                        "k": k,
                        "witness": witness,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(1)
                }
            }
        }
        Command::Cover { file, k, mode, out } => {
            let g = load_graph(&file)?;
            let k = match k {
                Some(k) => k,
                None => min_cover_number(&g)?,
            };
            let mode = match mode {
                ModeArg::Exhaustive => NwMode::Exhaustive,
                ModeArg::Matroid => NwMode::Matroid,
            };
            let density = nash_williams_check(&g, k, mode)?;
            if !density.is_ok() {
                let doc = json!({ "refused": true, "k": k, "density": density });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                return Ok(1);
            }
            match build_covering(&g, k)? {
                CoverOutcome::Covering(cert) => {
                    write_or_print(&out, &serde_json::to_string_pretty(&cert).unwrap())?;
                    Ok(0)
                }
                CoverOutcome::Infeasible(density) => {
                    let doc = json!({ "refused": true, "k": k, "density": density });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(1)
                }
            }
        }
        Command::Decompose { file, k, out, trace } => {
            let g = load_graph(&file)?;
            let packing = match max_tree_packing(&g, k) {
                Ok(PackingOutcome::Packing(cert)) => cert,
                Ok(PackingOutcome::Infeasible(witness)) => {
                    let doc = json!({
                        "refused": true,
                        "hypothesis": "packing",
                        "k": k,
                        "witness": witness,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    return Ok(1);
                }
                Err(Error::Precondition(msg)) => {
                    let doc = json!({
                        "refused": true,
                        "hypothesis": "packing",
                        "k": k,
                        "detail": msg,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    return Ok(1);
                }
                Err(other) => return Err(other),
            };
            let ord = degeneracy_ordering(&g);
            if ord.mu() > k + 1 {
                let doc = json!({
                    "refused": true,
                    "hypothesis": "colouring_number",
                    "colouring_number": ord.mu(),
                    "required_at_most": k + 1,
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                return Ok(1);
            }
            let partition = treepack::back_edge_partition(&g, &ord);
            let eord = treepack::build_edge_order(&partition, None)?;
            let (cert, steps) = run_finite(&g, &ord, &eord, &packing)?;
            let verdict = verify_certificate(&g, &cert)?;
            if !verdict.valid {
                return Err(Error::Invariant(format!(
                    "pipeline produced an invalid decomposition: {}",
                    verdict.reason.unwrap_or_default()
                )));
            }
            if let Some(path) = trace {
                fs::write(&path, trace_jsonl(&steps))
                    .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            }
            write_or_print(&out, &serde_json::to_string_pretty(&cert).unwrap())?;
            Ok(0)
        }
        Command::Verify { graph, certificate } => {
            let g = load_graph(&graph)?;
            let text = fs::read_to_string(&certificate)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", certificate.display())))?;
            let cert: Certificate = serde_json::from_str(&text)
                .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
            let verdict = verify_certificate(&g, &cert)?;
            println!("{}", serde_json::to_string_pretty(&json!(verdict)).unwrap());
            Ok(if verdict.valid { 0 } else { 1 })
        }
        Command::Generate { family, levels, c, n, m, seed, out, format } => {
            let g = match family.as_str() {
                "prop32" => treepack::generate::prop32(levels, c)?,
                "complete" => treepack::generate::complete(require(n, "-n")?)?,
                "cycle" => treepack::generate::cycle(require(n, "-n")?)?,
                "doubled_tree" => {
                    eprintln!("seed: {seed}");
                    treepack::generate::doubled_tree(require(n, "-n")?, seed)?
                }
                "random_multigraph" => {
                    eprintln!("seed: {seed}");
                    treepack::generate::random_multigraph(
                        require(n, "-n")?,
                        require(m, "-m")?,
                        seed,
                    )?
                }
                other => {
                    return Err(Error::Input(format!(
                        "unknown family '{other}'; expected prop32 | complete | cycle | doubled_tree | random_multigraph"
                    )))
                }
            };
            let content = match format {
                FormatArg::Text => io::emit_text(&g),
                FormatArg::Json => io::emit_json(&g),
            };
            write_or_print(&out, content.trim_end())?;
            Ok(0)
        }
        Command::Simulate { family, k, budget, m, checkpoint_every, out } => {
            let lg = match family.as_str() {
                "comb_star" => LazyCountableGraph::comb_star(),
                "doubled_ray" => LazyCountableGraph::doubled_ray(),
                "multiplied_ray" => LazyCountableGraph::multiplied_ray(m)?,
                other => {
                    return Err(Error::Input(format!(
                        "unknown family '{other}'; expected comb_star | doubled_ray | multiplied_ray"
                    )))
                }
            };
            let report = run_budgeted(&lg, k, budget, checkpoint_every)?;
            if let Some(path) = out {
                fs::write(&path, trace_jsonl(&report.trace))
                    .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            }
            let noop_count = report
                .trace
                .iter()
                .filter(|r| matches!(r.action, StepAction::Noop))
                .count();
            let outcome = match report.outcome {
                SimOutcome::Completed => json!({"kind": "completed"}),
                SimOutcome::Obstructed { step, edge } => {
                    json!({"kind": "no_eligible_tree", "step": step, "edge": edge})
                }
            };
            let doc = json!({
                "family": report.family,
                "k": report.k,
                "budget": report.budget,
                "steps_executed": report.steps_executed,
                "outcome": outcome,
                "swaps": report.swap_count,
                "noops": noop_count,
                "stabilization_ok": report.stabilization_ok,
                "prefix_fully_covered": report.prefix_fully_covered,
                "stable_prefix": lg.stable_prefix(report.steps_executed),
                "bonds_monitored": report.bonds_monitored,
                "final_window_stage": report.final_stage,
                "checkpoints": report.checkpoints.iter().map(|cp| json!({
                    "step": cp.step,
                    "stable_prefix": cp.stable_prefix,
                })).collect::<Vec<_>>(),
                "overlays": report.overlays.iter().map(|o| json!({
                    "added": o.added().collect::<Vec<_>>(),
                    "removed": o.removed().collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(match report.outcome {
                SimOutcome::Completed => 0,
                SimOutcome::Obstructed { .. } => 2,
            })
        }
    }
}

fn require(value: Option<usize>, flag: &str) -> treepack::Result<usize> {
    value.ok_or_else(|| Error::Input(format!("this family needs {flag}")))
}

/// Largest k for which a k-packing exists; the graph must be connected.
fn max_packing_size(g: &MultiGraph) -> treepack::Result<usize> {
    if g.vertex_count() == 1 {
        return Ok(1);
    }
    let bound = g.edge_count() / (g.vertex_count() - 1);
    let mut best = 0;
    for k in 1..=bound {
        match max_tree_packing(g, k)? {
            PackingOutcome::Packing(_) => best = k,
            PackingOutcome::Infeasible(_) => break,
        }
    }
    Ok(best)
}
