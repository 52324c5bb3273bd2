//! The `cover` command-line tool.
//!
//! Exit codes: 0 success, 1 negative answer, 2 unreadable or malformed
//! input (including bad flags), 3 invalid input data or a failed write.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::families::gen_corpus;
use crate::graph::ColoredGraph;
use crate::io::{self, FormatError};
use crate::leighton::{self, covering_degree, verify_covering, SPolicy};
use crate::polyhedra;
use crate::refine::{joint_refinement, quotient_color_graph};
use crate::symres::{
    check_cycle_condition, edge_stabilizers, reduce_to_balanced, validate_srs_graph, SRGraph, SymRestrictedData,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cover", version, about = "Common finite coverings of finite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Joint color refinement of one or two graphs.
    Refine {
        graph: PathBuf,
        graph2: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Build a common finite cover of two graphs and both projections.
    Construct {
        graph: PathBuf,
        graph2: PathBuf,
        /// Shuffle the dart order in each star; omit for the canonical order.
        #[arg(long)]
        seed: Option<u64>,
        /// Counts entering the common multiple s.
        #[arg(long, value_enum, default_value_t = PolicyArg::First)]
        s_policy: PolicyArg,
        /// Keep only the component of vertex 0.
        #[arg(long)]
        component: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check that a map is a covering map.
    Verify {
        cover: PathBuf,
        base: PathBuf,
        /// Vertex and dart map from COVER to BASE.
        map: PathBuf,
    },
    /// Symmetry-restricted data.
    Sym {
        #[command(subcommand)]
        command: SymCommand,
    },
    /// Random connected permutation-voltage lifts of a base graph.
    Gen {
        base: PathBuf,
        /// Sheets of each lift.
        #[arg(long)]
        degree: usize,
        /// Number of lifts to write.
        #[arg(long, default_value_t = 2)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum SymCommand {
    /// Validate a data file, and optionally a graph with charts against it.
    Validate {
        data: PathBuf,
        /// Colored graph to check against the data.
        #[arg(long, requires = "charts")]
        graph: Option<PathBuf>,
        /// Per-vertex pairs [dart, point] placing each star in its reference set.
        #[arg(long, requires = "graph")]
        charts: Option<PathBuf>,
    },
    /// Edge stabilizers and the per-edge balance test.
    Stabilizers { data: PathBuf },
    /// Enlarge the vertex groups of tree data until it is balanced.
    Reduce {
        data: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Product condition along closed paths of the graph of colors.
    Cycles {
        data: PathBuf,
        /// Longest path to check; defaults to twice the number of edges.
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Write one of the built-in polyhedral data sets.
    Preset {
        #[arg(value_enum)]
        name: Preset,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args, Debug)]
struct OutArg {
    /// Directory for output files; created if missing.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PolicyArg {
    /// lcm over the first graph
    First,
    /// lcm over both graphs
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Preset {
    DodecaCube,
    IcosaCube,
}

/// A failed run: exit code and message.
struct Failure(i32, String);

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Parse(m) => Failure(EXIT_PARSE, format!("parse error: {m}")),
            FormatError::Invalid(m) => Failure(EXIT_INVALID, format!("invalid input: {m}")),
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_INVALID, e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

fn read_any_graph(path: &Path) -> Result<ColoredGraph, Failure> {
    io::parse_graph(&read(path)?).map_err(|e| in_file(e, path))
}

fn read_graph(path: &Path) -> Result<ColoredGraph, Failure> {
    let g = read_any_graph(path)?;
    if !g.is_connected() {
        return Err(Failure(EXIT_INVALID, format!("{}: graph is not connected", path.display())));
    }
    Ok(g)
}

fn read_symdata(path: &Path) -> Result<SymRestrictedData, Failure> {
    io::parse_symdata(&read(path)?).map_err(|e| in_file(e, path))
}

fn in_file(e: FormatError, path: &Path) -> Failure {
    let Failure(code, msg) = e.into();
    Failure(code, format!("{}: {msg}", path.display()))
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    let fail = |e: std::io::Error| Failure(EXIT_INVALID, format!("cannot write {}: {e}", dir.join(name).display()));
    fs::create_dir_all(dir).map_err(fail)?;
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(fail)?;
    fs::rename(&tmp, dir.join(name)).map_err(fail)
}

/// Files produced by a command: written under `--out` if given, otherwise
/// the first one is printed.
fn deliver(out: &OutArg, files: &[(String, String)], stdout: &mut dyn Write) -> Result<(), Failure> {
    match &out.out {
        Some(dir) => {
            for (name, text) in files {
                write_atomic(dir, name, text)?;
            }
        }
        None => {
            if let Some((_, text)) = files.first() {
                write!(stdout, "{text}").map_err(invalid)?;
            }
        }
    }
    Ok(())
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

macro_rules! say {
    ($w:expr, $($arg:tt)*) => {
        writeln!($w, $($arg)*).map_err(invalid)?
    };
}

fn dispatch(cmd: Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Refine { graph, graph2, out } => {
            let g = read_graph(&graph)?;
            let g2 = graph2.as_deref().map(read_graph).transpose()?;
            let coloring = joint_refinement(&g, g2.as_ref()).map_err(invalid)?;
            let shared = g2.as_ref().map(|_| coloring.all_classes_shared());
            let graphs: Vec<&ColoredGraph> = std::iter::once(&g).chain(g2.as_ref()).collect();
            let data = if shared != Some(false) {
                Some(quotient_color_graph(&coloring, &graphs).map_err(invalid)?)
            } else {
                None
            };
            let mut files = vec![("refinement.json".to_string(), io::refinement_to_json(&coloring, data.as_ref(), shared))];
            for (j, g) in graphs.iter().enumerate() {
                let dot = io::to_dot(g, coloring.vertex_classes(j), coloring.dart_classes(j));
                files.push((format!("g{}.dot", j + 1), dot));
            }
            deliver(&out, &files, stdout)?;
            let c = coloring.color_graph();
            if out.out.is_some() {
                say!(stdout, "vertex classes: {}, dart classes: {}", c.vertex_count(), c.dart_count());
            }
            match shared {
                Some(false) => {
                    if out.out.is_some() {
                        say!(stdout, "no common cover");
                    }
                    Ok(EXIT_NEGATIVE)
                }
                Some(true) if out.out.is_some() => {
                    say!(stdout, "common cover exists");
                    Ok(EXIT_OK)
                }
                _ => Ok(EXIT_OK),
            }
        }
        Command::Construct { graph, graph2, seed, s_policy, component, out } => {
            let g = read_graph(&graph)?;
            let g2 = read_graph(&graph2)?;
            let policy = match s_policy {
                PolicyArg::First => SPolicy::FirstGraph,
                PolicyArg::Both => SPolicy::BothGraphs,
            };
            let cover = match leighton::construct(&g, &g2, policy, seed, component) {
                Ok(c) => c,
                Err(leighton::CoverError::NoCommonCover) => {
                    say!(stdout, "no common cover");
                    return Ok(EXIT_NEGATIVE);
                }
                Err(e) => return Err(invalid(e)),
            };
            let d1 = covering_degree(&cover.h, &g, &cover.to_g).map_err(invalid)?;
            let d2 = covering_degree(&cover.h, &g2, &cover.to_g2).map_err(invalid)?;
            if out.out.is_some() {
                let files = [
                    ("h.json".to_string(), io::graph_to_json(&cover.h)),
                    ("map_g.json".to_string(), io::map_to_json(&cover.to_g)),
                    ("map_g2.json".to_string(), io::map_to_json(&cover.to_g2)),
                ];
                deliver(&out, &files, stdout)?;
            }
            say!(stdout, "vertices: {}", cover.h.vertex_count());
            say!(stdout, "darts: {}", cover.h.dart_count());
            say!(stdout, "degree over first graph: {d1}");
            say!(stdout, "degree over second graph: {d2}");
            Ok(EXIT_OK)
        }
        Command::Verify { cover, base, map } => {
            let h = read_any_graph(&cover)?;
            let g = read_any_graph(&base)?;
            let p = io::parse_map(&read(&map)?).map_err(|e| in_file(e, &map))?;
            let rep = verify_covering(&h, &g, &p);
            if rep.is_ok() {
                let d = covering_degree(&h, &g, &p).map_err(invalid)?;
                say!(stdout, "ok: covering of degree {d}");
                Ok(EXIT_OK)
            } else {
                for d in &rep.defects {
                    say!(stdout, "defect: {d}");
                }
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Sym { command } => sym(command, stdout),
        Command::Gen { base, degree, count, seed, out } => {
            if degree == 0 {
                return Err(Failure(EXIT_INVALID, "degree must be positive".into()));
            }
            let g = read_graph(&base)?;
            let lifts = gen_corpus(&g, degree, count, seed);
            let files: Vec<(String, String)> =
                lifts.iter().enumerate().map(|(j, h)| (format!("lift_{j:03}.json"), io::graph_to_json(h))).collect();
            deliver(&out, &files, stdout)?;
            if out.out.is_some() {
                for (j, h) in lifts.iter().enumerate() {
                    say!(stdout, "lift_{j:03}.json: {} vertices, {} darts", h.vertex_count(), h.dart_count());
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn sym(cmd: SymCommand, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        SymCommand::Validate { data, graph, charts } => {
            let d = read_symdata(&data)?;
            if let (Some(gp), Some(cp)) = (graph, charts) {
                let g = read_any_graph(&gp)?;
                let ch = io::parse_charts(&read(&cp)?, g.vertex_count()).map_err(|e| in_file(e, &cp))?;
                let v = validate_srs_graph(&SRGraph { graph: g, charts: ch }, &d);
                if !v.is_empty() {
                    for x in &v {
                        say!(stdout, "violation: {x}");
                    }
                    return Ok(EXIT_NEGATIVE);
                }
            }
            say!(stdout, "ok");
            Ok(EXIT_OK)
        }
        SymCommand::Stabilizers { data } => {
            let rep = edge_stabilizers(&read_symdata(&data)?).map_err(invalid)?;
            write!(stdout, "{}", io::stabilizers_to_json(&rep)).map_err(invalid)?;
            Ok(if rep.all_balanced() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        SymCommand::Reduce { data, out } => {
            let reduced = reduce_to_balanced(&read_symdata(&data)?).map_err(invalid)?;
            deliver(&out, &[("reduced.json".to_string(), io::symdata_to_json(&reduced))], stdout)?;
            if out.out.is_some() {
                for (i, vg) in reduced.groups.iter().enumerate() {
                    say!(stdout, "vertex color {i}: group of order {}", vg.group.order());
                }
            }
            Ok(EXIT_OK)
        }
        SymCommand::Cycles { data, max_len } => {
            let d = read_symdata(&data)?;
            let max_len = max_len.unwrap_or(2 * d.color_graph.edge_count());
            let rep = check_cycle_condition(&d, max_len).map_err(invalid)?;
            write!(stdout, "{}", io::cycles_to_json(&rep)).map_err(invalid)?;
            Ok(if rep.all_pass() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        SymCommand::Preset { name, out } => {
            let d = match name {
                Preset::DodecaCube => polyhedra::dodeca_cube(),
                Preset::IcosaCube => polyhedra::icosa_cube(),
            };
            let file = match name {
                Preset::DodecaCube => "dodeca_cube.json",
                Preset::IcosaCube => "icosa_cube.json",
            };
            deliver(&out, &[(file.to_string(), io::symdata_to_json(&d))], stdout)?;
            Ok(EXIT_OK)
        }
    }
}
