use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use clap::{ArgGroup, Args, Parser, Subcommand};

use drg_core::enumerate::{enumerate_with, EnumerationOptions, EnumerationRecord, FamilyFilter};
use drg_core::graphs::{
    build_named, recognize_drg, search_hom, verify_identities, Graph, GraphError, GraphFormat, HomOutcome, NamedGraph,
    PhiAnalyzer, SearchOptions, VertexMap,
};
use drg_core::homtheory::{search_triples_with, AlphaBound, HomError};
use drg_core::params::{derive_parameters, IntersectionArray, SpectralConfig, SpectralData};
use drg_core::report::{analyze, emit_table, parse_jsonl, TableFormat};

/// Exact analysis of distance-regular graph intersection arrays and their endomorphisms.
#[derive(Parser)]
#[command(name = "drg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parameters, spectrum, feasibility and core verdict of one array.
    #[command(group(ArgGroup::new("style").args(["json", "markdown"])))]
    Analyze {
        array: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        markdown: bool,
    },
    /// Triples (α, β, γ) permitting an endomorphism onto a diameter-e image.
    Triples {
        array: String,
        #[arg(long)]
        e: usize,
        /// Allow α = a_e.
        #[arg(long)]
        inclusive: bool,
        #[arg(long)]
        json: bool,
    },
    /// Stream every feasible array up to a valency bound.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        diameter: usize,
        #[arg(long)]
        max_k: u64,
        #[arg(long, default_value = "all")]
        family: FamilyFilter,
        /// jsonl, markdown or csv.
        #[arg(long, default_value = "jsonl")]
        format: TableFormat,
        /// Worker threads; defaults to the number of logical CPUs.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Experiments on explicit graphs.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
    /// Render a JSON-lines record file as a table.
    Table {
        records: String,
        #[arg(long, default_value = "markdown")]
        format: TableFormat,
    },
}

#[derive(Args)]
struct GraphInput {
    /// edge-list or graph6; inferred from a `.g6` extension otherwise edge-list.
    #[arg(long)]
    format: Option<GraphFormat>,
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Print the intersection array, or "not distance-regular".
    Recognize {
        /// A file, `-` for standard input, or `named:<family>` such as `named:kneser(7,3)`.
        file: String,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Search for a homomorphism; prints the map, NONE or UNKNOWN.
    Hom {
        file_x: String,
        file_y: String,
        /// The target is the subgraph of the source induced on its first vertices; fix them.
        #[arg(long)]
        retraction: bool,
        /// Force `u` to map to `v`; repeatable.
        #[arg(long = "fix", value_name = "U=V", value_parser = parse_fix)]
        fix: Vec<(usize, usize)>,
        /// Seconds before giving up with UNKNOWN.
        #[arg(long)]
        timeout: Option<f64>,
        #[command(flatten)]
        input: GraphInput,
    },
    /// Check the homomorphism-matrix identities and dump φ-partitions.
    Verify {
        file_x: String,
        /// JSON array with the image of every vertex.
        map: String,
        /// Target graph when the map is not an endomorphism.
        #[arg(long)]
        target: Option<String>,
        /// Largest number of geodetic pairs whose partitions are printed.
        #[arg(long, default_value_t = 200)]
        sample_cap: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        input: GraphInput,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
    Timeout,
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn parse_fix(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s.split_once('=').ok_or("expected U=V")?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("{t:?} is not a vertex"));
    Ok((parse(u)?, parse(v)?))
}

fn parse_array(s: &str) -> Result<IntersectionArray, Failure> {
    s.parse().map_err(|e| usage(format!("malformed array {s:?}: {e}")))
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
}

fn load_graph(spec: &str, input: &GraphInput) -> Result<Graph, Failure> {
    if let Some(name) = spec.strip_prefix("named:") {
        let named: NamedGraph = name.parse().map_err(usage)?;
        return build_named(named).map_err(usage);
    }
    let format = input.format.unwrap_or_else(|| {
        if Path::new(spec).extension().is_some_and(|e| e == "g6") {
            GraphFormat::Graph6
        } else {
            GraphFormat::EdgeList
        }
    });
    let text = read_input(spec)?;
    Graph::parse(&text, format).map_err(|e| usage(format!("{spec}: {e}")))
}

fn graph_failure(e: GraphError) -> Failure {
    match e {
        GraphError::Spectral(m) => Failure::Internal(m),
        other => usage(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out)
        .and_then(|()| out.flush().map_err(|e| Failure::Internal(format!("write failed: {e}"))));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("drg: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("drg: internal error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Timeout) => ExitCode::from(4),
    }
}

fn emit(out: &mut impl Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Internal(format!("write failed: {e}")))
}

fn run(cmd: Command, out: &mut impl Write) -> Outcome {
    let cfg = SpectralConfig::from_env();
    match cmd {
        Command::Analyze { array, json, markdown } => {
            let arr = parse_array(&array)?;
            let a = analyze(&arr, &cfg).map_err(|e| Failure::Internal(e.to_string()))?;
            let text = if json {
                a.to_json() + "\n"
            } else if markdown {
                a.to_markdown()
            } else {
                a.to_text()
            };
            emit(out, &text)
        }
        Command::Triples { array, e, inclusive, json } => triples(&parse_array(&array)?, e, inclusive, json, &cfg, out),
        Command::Enumerate { diameter, max_k, family, format, jobs } => {
            let mut opts = EnumerationOptions::new(diameter, max_k, family);
            opts.jobs = jobs;
            opts.config = cfg;
            enumerate(&opts, format, out)
        }
        Command::Graph { command } => graph(command, out),
        Command::Table { records, format } => {
            let recs = parse_jsonl(&read_input(&records)?).map_err(|e| usage(format!("{records}: {e}")))?;
            emit(out, &emit_table(&recs, format))
        }
    }
}

fn triples(
    arr: &IntersectionArray,
    e: usize,
    inclusive: bool,
    json: bool,
    cfg: &SpectralConfig,
    out: &mut impl Write,
) -> Outcome {
    let ps = match derive_parameters(arr) {
        Ok(ps) => ps,
        Err(err) if err.is_internal() => return Err(Failure::Internal(err.to_string())),
        Err(err) => return emit(out, &format!("infeasible: {err}\n")),
    };
    let sd = match SpectralData::compute_with(&ps, cfg) {
        Ok(sd) => sd,
        Err(err) if err.is_internal() => return Err(Failure::Internal(err.to_string())),
        Err(err) => return emit(out, &format!("infeasible: {err}\n")),
    };
    let bound = if inclusive { AlphaBound::Inclusive } else { AlphaBound::Strict };
    let found = match search_triples_with(&ps, &sd, e, bound) {
        Ok(w) => w,
        Err(err @ HomError::DiameterOutOfRange { .. }) => return Err(usage(err)),
        Err(err) => return Err(Failure::Internal(err.to_string())),
    };
    if json {
        let v: Vec<[u64; 3]> = found.iter().map(|w| [w.alpha, w.beta, w.gamma]).collect();
        return emit(out, &(serde_json::to_string(&v).expect("triples serialize") + "\n"));
    }
    if found.is_empty() {
        return emit(out, "no triples\n");
    }
    let text: String = found.iter().map(|w| format!("{w}\n")).collect();
    emit(out, &text)
}

fn enumerate(opts: &EnumerationOptions, format: TableFormat, out: &mut impl Write) -> Outcome {
    let mut internal = 0usize;
    let mut records: Vec<EnumerationRecord> = Vec::new();
    let mut write_err = None;
    let res = enumerate_with(opts, |item| match item {
        Ok(rec) if format == TableFormat::JsonLines => {
            if write_err.is_none() {
                if let Err(e) = writeln!(out, "{}", rec.to_json()) {
                    write_err = Some(e);
                }
            }
        }
        Ok(rec) => records.push(rec),
        Err(f) => {
            eprintln!("drg: {}: {}", f.array, f.message);
            if f.internal {
                internal += 1;
            }
        }
    });
    res.map_err(usage)?;
    if let Some(e) = write_err {
        return Err(Failure::Internal(format!("write failed: {e}")));
    }
    if format != TableFormat::JsonLines {
        emit(out, &emit_table(&records, format))?;
    }
    if internal > 0 {
        return Err(Failure::Internal(format!("{internal} arrays hit internal errors")));
    }
    Ok(())
}

fn graph(cmd: GraphCommand, out: &mut impl Write) -> Outcome {
    match cmd {
        GraphCommand::Recognize { file, input } => {
            let g = load_graph(&file, &input)?;
            match recognize_drg(&g).map_err(graph_failure)? {
                Some(arr) => emit(out, &format!("{arr}\n")),
                None => emit(out, "not distance-regular\n"),
            }
        }
        GraphCommand::Hom { file_x, file_y, retraction, fix, timeout, input } => {
            let x = load_graph(&file_x, &input)?;
            let y = load_graph(&file_y, &input)?;
            let timeout = match timeout {
                Some(t) if !(t.is_finite() && t >= 0.0) => return Err(usage("timeout must be a non-negative number")),
                t => t.map(Duration::from_secs_f64),
            };
            let opts = SearchOptions { fixed: fix, retraction, timeout };
            match search_hom(&x, &y, &opts).map_err(graph_failure)? {
                HomOutcome::Found(phi) => emit(out, &(serde_json::to_string(&phi).expect("map serializes") + "\n")),
                HomOutcome::None => emit(out, "NONE\n"),
                HomOutcome::Unknown => {
                    emit(out, "UNKNOWN\n")?;
                    Err(Failure::Timeout)
                }
            }
        }
        GraphCommand::Verify { file_x, map, target, sample_cap, json, input } => {
            let x = load_graph(&file_x, &input)?;
            let phi: VertexMap = serde_json::from_str(&read_input(&map)?)
                .map_err(|e| usage(format!("{map}: not a JSON array of vertices: {e}")))?;
            let y = match &target {
                Some(t) => load_graph(t, &input)?,
                None => x.clone(),
            };
            let report = verify_identities(&x, &y, &phi).map_err(graph_failure)?;
            let partitions = if target.is_none() {
                PhiAnalyzer::new(&x, &phi).map_err(graph_failure)?.all_geodetic(sample_cap)
            } else {
                Vec::new()
            };
            if json {
                let v = serde_json::json!({ "identities": report, "partitions": partitions });
                return emit(out, &(serde_json::to_string_pretty(&v).expect("report serializes") + "\n"));
            }
            let mut s = format!("identities: {}\n", if report.passed { "pass" } else { "FAIL" });
            for c in &report.checks {
                s += &format!(
                    "  r = {}: θ = {:.6}, min eigenvalue {:.3e}, trace residual {:.3e}\n",
                    c.r, c.theta, c.min_eigenvalue, c.trace_residual
                );
            }
            s += &format!("  kernel residual {:.3e}\n", report.kernel_residual);
            s += &format!(
                "  neighbour sums over {} samples: residual {:.3e}\n",
                report.neighbour_sum_samples, report.neighbour_sum_residual
            );
            if !partitions.is_empty() {
                s += "geodetic pairs (u, v, e): (|C_{e,e-1}|, |C_{e+1,e-1}|, |C_{e+1,e}|) residual\n";
                for p in &partitions {
                    let (a, b, c) = p.triple();
                    s += &format!("  ({}, {}, {}): ({a}, {b}, {c}) {:.3e}\n", p.u, p.v, p.e, p.residual);
                }
            }
            emit(out, &s)
        }
    }
}
