//! Command-line interface. [`run`] takes the argument list and output streams
//! so that it can be driven from tests; it returns the process exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::fpt::{dtc_kernel, fen_reduce, modular_decomposition, nd_kernel, solve_via_fen, solve_via_modular_width, solve_via_p4_decomposition, DecompTree, DtcOptions, DtcResult, LargeCliqueRule};
use crate::gadgets::{dominator_hardness_gadget, staller_hardness_gadget, universal_vertex_gadget, GadgetInstance};
use crate::graph::{generate, Family, Graph};
use crate::harness::{run_suite_with, HarnessConfig};
use crate::hypergraph::Hypergraph;
use crate::position::{Player, Position};
use crate::rewrite::{reduce_fixpoint, ReductionTrace, Rule};
use crate::solver::{outcome_of, short_game_win, solve_position, Arena, Role, ShortQuery};

pub const EXIT_OK: i32 = 0;
/// A verification run recorded failures.
pub const EXIT_FAILURES: i32 = 1;
/// Bad arguments or malformed input.
pub const EXIT_INPUT: i32 = 2;
/// The search exceeded its node budget.
pub const EXIT_RESOURCE: i32 = 3;
/// A state or consistency error.
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mbdom", version, about = "Solve, kernelize and verify Maker-Breaker domination games")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Winner for a given first player, or the outcome class.
    Solve {
        /// Graph file (JSON or edge list).
        graph: PathBuf,
        /// Vertices already claimed by Dominator.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        dominator: Vec<usize>,
        /// Vertices already claimed by Staller.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        staller: Vec<usize>,
        /// Player to move; without it the outcome class is printed.
        #[arg(long)]
        first: Option<PlayerArg>,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        /// Decomposition tree JSON, for `--method p4`.
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Size bound q of the tree's small parts, for `--method p4`.
        #[arg(long)]
        q: Option<usize>,
    },
    /// Whether a role reaches its goal within k of its own moves.
    Short {
        /// Hypergraph JSON for maker/breaker, graph file for dominator/staller.
        arena: PathBuf,
        #[arg(long)]
        role: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        first: String,
    },
    /// Reduce a graph by one of the parameterized kernels.
    Kernelize {
        graph: PathBuf,
        #[arg(long)]
        param: Param,
        /// Deletion budget for `dtc`.
        #[arg(long)]
        k: Option<usize>,
        /// For `dtc`: keep three cliques of a large class instead of one edge.
        #[arg(long)]
        keep_three: bool,
    },
    /// Build a reduction gadget; prints the graph JSON.
    Gadget {
        kind: GadgetKind,
        /// Hypergraph JSON for `staller`, graph file otherwise.
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Also write the source-to-vertex correspondence here.
        #[arg(long)]
        correspondence: Option<PathBuf>,
    },
    /// Print a graph from a family spec such as `cycle(5)`,
    /// `random(10,0.3,7)` or `attach_path(path(3),0,2,9)`.
    Gen { spec: String },
    /// Run a verification suite and print its report.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        /// Override the suite's vertex cap.
        #[arg(long)]
        max_vertices: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlayerArg {
    Dominator,
    Staller,
}

impl From<PlayerArg> for Player {
    fn from(p: PlayerArg) -> Player {
        match p {
            PlayerArg::Dominator => Player::Dominator,
            PlayerArg::Staller => Player::Staller,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Mw,
    Fen,
    P4,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Param {
    Nd,
    Mw,
    Dtc,
    Fen,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GadgetKind {
    Staller,
    Dominator,
    Universal,
}

pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "mbdom: {e}");
            match e {
                Error::Input(_) => EXIT_INPUT,
                Error::NodeLimit { .. } => EXIT_RESOURCE,
                Error::State(_) | Error::Inconsistent(_) => EXIT_INTERNAL,
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read(path)?)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| Error::State(format!("writing output: {e}")))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Solve { graph, dominator, staller, first, method, tree, q } => {
            let g = read_graph(graph)?;
            let claimed = !dominator.is_empty() || !staller.is_empty();
            if *method != Method::Exact && (claimed || first.is_some()) {
                return Err(Error::input("only the exact method takes claims or a first player"));
            }
            let p = Position::new(g.clone(), dominator.iter().copied(), staller.iter().copied(), Player::Dominator)?;
            match first {
                Some(f) => {
                    let w = solve_position(&p.with_to_move((*f).into()))?;
                    let name = player_name(w);
                    emit(out, &if cli.json { json!({ "winner": name }).to_string() } else { format!("winner: {name}") })?;
                }
                None => {
                    let o = match method {
                        Method::Exact => outcome_of(&p)?,
                        Method::Mw => solve_via_modular_width(&g)?,
                        Method::Fen => solve_via_fen(&g)?,
                        Method::P4 => {
                            let tree = match tree {
                                Some(path) => DecompTree::from_json(&read(path)?)?,
                                None => return Err(Error::input("--method p4 needs --tree")),
                            };
                            let q = q.ok_or_else(|| Error::input("--method p4 needs --q"))?;
                            solve_via_p4_decomposition(&g, &tree, q)?
                        }
                    };
                    let text = if cli.json { json!({ "outcome": o.to_string() }).to_string() } else { format!("outcome: {o}") };
                    emit(out, &text)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Short { arena, role, k, first } => {
            let role: Role = role.parse()?;
            let first: Role = first.parse()?;
            let q = ShortQuery::new(role, *k, first);
            let win = match role {
                Role::Maker | Role::Breaker => {
                    let h = Hypergraph::from_json(&read(arena)?)?;
                    short_game_win(Arena::Hypergraph(&h), q)?
                }
                Role::Dominator | Role::Staller => {
                    let g = read_graph(arena)?;
                    short_game_win(Arena::Graph(&g), q)?
                }
            };
            emit(out, &if cli.json { json!({ "win": win }).to_string() } else { win.to_string() })?;
            Ok(EXIT_OK)
        }
        Command::Kernelize { graph, param, k, keep_three } => {
            let g = read_graph(graph)?;
            let (kernel, dominator, trace, extra) = match param {
                Param::Nd => {
                    let (kg, trace) = nd_kernel(&g);
                    (kg, vec![], trace, json!({}))
                }
                Param::Mw => {
                    let p = Position::start(g.clone(), Player::Dominator);
                    let (q, trace) = reduce_fixpoint(&p, &[Rule::ReplaceModule])?;
                    (q.graph, vec![], trace, json!({ "width": modular_decomposition(&g).map(|t| t.width()).ok() }))
                }
                Param::Fen => {
                    let p = Position::start(g.clone(), Player::Staller);
                    let (q, trace) = fen_reduce(&p)?;
                    let d = q.dominator.iter().copied().collect();
                    (q.graph, d, trace, json!({ "to_move": "staller" }))
                }
                Param::Dtc => {
                    let k = k.ok_or_else(|| Error::input("--param dtc needs --k"))?;
                    let rule = if *keep_three { LargeCliqueRule::KeepThree } else { LargeCliqueRule::Edge };
                    match dtc_kernel(&g, k, DtcOptions { large_cliques: rule }) {
                        DtcResult::Infeasible => {
                            let text = format!("infeasible: no cluster deletion set of size at most {k}");
                            emit(out, &if cli.json { json!({ "infeasible": true, "k": k }).to_string() } else { text })?;
                            return Ok(EXIT_OK);
                        }
                        DtcResult::Kernel { graph, trace, deletion_set } => {
                            (graph, vec![], trace, json!({ "deletion_set": deletion_set }))
                        }
                    }
                }
            };
            emit(out, &render_kernel(cli.json, &kernel, &dominator, &trace, extra))?;
            Ok(EXIT_OK)
        }
        Command::Gadget { kind, input, k, correspondence } => {
            let gi: GadgetInstance = match kind {
                GadgetKind::Staller => {
                    let h = Hypergraph::from_json(&read(input)?)?;
                    staller_hardness_gadget(&h, k.ok_or_else(|| Error::input("the staller gadget needs --k"))?)?
                }
                GadgetKind::Dominator => dominator_hardness_gadget(&read_graph(input)?),
                GadgetKind::Universal => universal_vertex_gadget(&read_graph(input)?),
            };
            if let Some(path) = correspondence {
                fs::write(path, gi.correspondence_json() + "\n")
                    .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
            }
            emit(out, &gi.graph.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Gen { spec } => {
            emit(out, &parse_family(spec)?.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite, seed, count, max_vertices } => {
            let config = HarnessConfig { max_vertices: *max_vertices };
            let report = run_suite_with(suite, *seed, *count, &config)?;
            let text = if cli.json { report.to_json() } else { report.render_text().trim_end().to_string() };
            emit(out, &text)?;
            Ok(if report.is_success() { EXIT_OK } else { EXIT_FAILURES })
        }
    }
}

fn player_name(p: Player) -> &'static str {
    match p {
        Player::Dominator => "dominator",
        Player::Staller => "staller",
    }
}

fn render_kernel(as_json: bool, g: &Graph, dominator: &[usize], trace: &ReductionTrace, extra: serde_json::Value) -> String {
    if as_json {
        let mut v = json!({
            "graph": serde_json::from_str::<serde_json::Value>(&g.to_json()).expect("graph JSON parses"),
            "dominator": dominator,
            "trace": trace.steps,
        });
        if let (Some(obj), Some(more)) = (v.as_object_mut(), extra.as_object()) {
            obj.extend(more.clone());
        }
        return v.to_string();
    }
    let mut text = format!("graph: {}\n", g.to_json());
    if !dominator.is_empty() {
        text.push_str(&format!("dominator: {dominator:?}\n"));
    }
    if let Some(more) = extra.as_object() {
        for (key, value) in more {
            text.push_str(&format!("{key}: {value}\n"));
        }
    }
    text.push_str(&format!("trace: {} steps\n", trace.steps.len()));
    text.push_str(trace.to_json_lines().trim_end());
    text.trim_end().to_string()
}

/// Parses `name(arg, ...)`. Graph arguments are nested specs or `@path`.
pub fn parse_family(spec: &str) -> Result<Graph> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix('@') {
        return read_graph(Path::new(path));
    }
    let bad = || Error::input(format!("bad family spec '{spec}'"));
    let open = spec.find('(').ok_or_else(bad)?;
    if !spec.ends_with(')') {
        return Err(bad());
    }
    let name = spec[..open].trim();
    let args = split_top_level(&spec[open + 1..spec.len() - 1]);
    let num = |i: usize| -> Result<usize> {
        args.get(i).and_then(|a| a.trim().parse().ok()).ok_or_else(|| Error::input(format!("argument {} of '{spec}' must be a count", i + 1)))
    };
    let arity = |n: usize| if args.len() == n { Ok(()) } else { Err(Error::input(format!("'{name}' takes {n} arguments"))) };
    let family = match name {
        "path" => arity(1).and_then(|_| Ok(Family::Path(num(0)?)))?,
        "clique" => arity(1).and_then(|_| Ok(Family::Clique(num(0)?)))?,
        "star" => arity(1).and_then(|_| Ok(Family::Star(num(0)?)))?,
        "cycle" => arity(1).and_then(|_| Ok(Family::Cycle(num(0)?)))?,
        "random" => {
            arity(3)?;
            let p: f64 = args[1].trim().parse().map_err(|_| Error::input("edge probability must be a number"))?;
            let seed: u64 = args[2].trim().parse().map_err(|_| Error::input("seed must be an integer"))?;
            Family::Random { n: num(0)?, p, seed }
        }
        "attach_path" => {
            arity(4)?;
            Family::AttachPath { base: parse_family(&args[0])?, u: num(1)?, v: num(2)?, k: num(3)? }
        }
        "attach_pending_path" => {
            arity(3)?;
            Family::AttachPendingPath { base: parse_family(&args[0])?, u: num(1)?, k: num(2)? }
        }
        "add_universal_vertex" => {
            arity(1)?;
            Family::AddUniversalVertex(parse_family(&args[0])?)
        }
        _ => return Err(Error::input(format!("unknown family '{name}'"))),
    };
    generate(&family)
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() || !parts.is_empty() {
        parts.push(cur);
    }
    parts
}
