use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use treelike_core::cuts::{all_radial_cuts, connectify, radial_cuts, CutFamily, Provenance};
use treelike_core::dot::{export_dot, step_arrows, Overlay};
use treelike_core::extract::{color_halfspaces, extract_spanning_tree, verify_quasi_isometry};
use treelike_core::flow::{flow_forest, EndTarget};
use treelike_core::generate::{generate, GeneratorSpec, DEFAULT_VERTEX_CAP};
use treelike_core::io::{
    cut_family_to_json, graph_to_json, graph_to_text, parse_cut_family_json, parse_graph, parse_pocset_json,
    parse_set_family_json, parse_treedec_json, parse_walling_json, treedec_to_json, Label,
};
use treelike_core::oneended::{oneended_fer_witness, oneended_fer_witness_rank};
use treelike_core::pipeline::{run_pipeline, run_window_pipeline, PipelineInput, Preset};
use treelike_core::pocset::DEFAULT_ORIENTATION_CAP;
use treelike_core::treedec::validate;
use treelike_core::walling::wall_dual;
use treelike_core::window::{make_window, WindowFamily};
use treelike_core::{check_median, ColoringMode, Hyperplanes, LabeledGraph, MedianCertificate, MedianGraph};

#[derive(Parser)]
#[command(name = "treelike", version, about = "Median graphs, cut families and end-directed flows")]
struct Cli {
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Cap on enumerated orientations or generated vertices.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a graph is median; exits 1 with a witness triple if not.
    CheckMedian { graph: PathBuf },
    /// List the half-spaces of a median graph.
    Hyperplanes { graph: PathBuf },
    /// Build the dual median graph of a pocset or a walling.
    Dual {
        input: PathBuf,
        /// Read `{"ground", "walls"}` instead of a pocset.
        #[arg(long)]
        walling: bool,
    },
    /// Extract a spanning tree of a median graph by staged hyperplane colouring.
    SpanningTree {
        graph: PathBuf,
        /// Check max degree ≤ D and boundary diameter ≤ R and report the colour bound.
        #[arg(long, num_args = 2, value_names = ["D", "R"])]
        bounded: Option<Vec<u64>>,
        /// Write every stage forest here.
        #[arg(long)]
        stages_json: Option<PathBuf>,
        /// Write the graph with the tree in bold here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Radial cuts of balls; all of them unless a center and radius are given.
    RadialCuts {
        graph: PathBuf,
        #[arg(long, requires = "radius")]
        center: Option<Label>,
        #[arg(long, requires = "center")]
        radius: Option<u32>,
        /// Add complements.
        #[arg(long)]
        closed: bool,
    },
    /// Replace each cut by the connected cuts it induces.
    Connectify { graph: PathBuf, family: PathBuf },
    /// Tree decomposition operations.
    Treedec {
        #[arg(value_enum)]
        op: TreedecOp,
        graph: PathBuf,
        treedec: PathBuf,
    },
    /// The end-directed step map toward a vertex or a window's end.
    Flow {
        graph: Option<PathBuf>,
        #[arg(long, conflicts_with = "family")]
        target: Option<Label>,
        /// Window family: quadrant, ladder, grid-quadrant or tree<d>.
        #[arg(long, requires = "radius")]
        family: Option<String>,
        #[arg(long)]
        radius: Option<usize>,
        /// Write the full forest JSON here.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Write the graph with step arrows here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Increasing partition sequence for a family of finite sets.
    HypfinWitness {
        family: PathBuf,
        /// Use the rank variant.
        #[arg(long)]
        rank: bool,
    },
    /// Generate a median graph from a JSON spec such as `{"kind":"grid","width":3,"height":4}`.
    Generate {
        spec: String,
        /// Override the seed of a seeded spec.
        #[arg(long)]
        seed: Option<u64>,
        /// Emit the text edge-list format.
        #[arg(long)]
        text: bool,
    },
    /// Run a preset pipeline on every component.
    Pipeline {
        /// quasitree->tree, treedec->tree, median->tree or end->forest.
        preset: String,
        graph: Option<PathBuf>,
        #[arg(long)]
        treedec: Option<PathBuf>,
        #[arg(long)]
        target: Option<Label>,
        #[arg(long, requires = "radius")]
        family: Option<String>,
        #[arg(long)]
        radius: Option<usize>,
        /// Write summary.json and per-component artifacts here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graphviz export, optionally filling a vertex set.
    ExportDot {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        fill: Vec<Label>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum TreedecOp {
    Validate,
    Shrink,
    Prune,
    Cuts,
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_graph(path: &Path) -> Result<LabeledGraph> {
    parse_graph(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn median(lg: &LabeledGraph) -> Result<MedianGraph> {
    MedianGraph::new(lg.graph.clone()).context("input is not a median graph")
}

fn vertex(lg: &LabeledGraph, label: Label) -> Result<usize> {
    lg.id_of(label).with_context(|| format!("unknown vertex {label}"))
}

fn labeled_pairs(lg: &LabeledGraph, edges: &[(usize, usize)]) -> Vec<(Label, Label)> {
    edges.iter().map(|&(u, v)| (lg.labels[u], lg.labels[v])).collect()
}

fn names(lg: &LabeledGraph) -> Vec<String> {
    lg.labels.iter().map(|l| l.to_string()).collect()
}

fn print(pretty: bool, value: &Value) {
    let s = if pretty { serde_json::to_string_pretty(value) } else { serde_json::to_string(value) };
    emit(&(s.expect("JSON value serializes") + "\n"));
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_raw(pretty: bool, text: &str) {
    let value: Value = serde_json::from_str(text).expect("library emits valid JSON");
    print(pretty, &value);
}

fn run(cli: Cli) -> Result<ExitCode> {
    let pretty = cli.pretty;
    let cap = cli.cap.unwrap_or(DEFAULT_ORIENTATION_CAP);
    match cli.command {
        Command::CheckMedian { graph } => {
            let lg = read_graph(&graph)?;
            let cert = check_median(&lg.graph)?;
            match cert {
                MedianCertificate::Accepted => {
                    print(pretty, &json!({ "verdict": "accepted" }));
                    return Ok(ExitCode::SUCCESS);
                }
                MedianCertificate::Rejected { triple: (x, y, z), intersection } => {
                    let l = &lg.labels;
                    print(
                        pretty,
                        &json!({
                            "verdict": "rejected",
                            "triple": [l[x], l[y], l[z]],
                            "intersection": intersection.iter().map(|&v| l[v]).collect::<Vec<_>>(),
                        }),
                    );
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Hyperplanes { graph } => {
            let lg = read_graph(&graph)?;
            let mg = median(&lg)?;
            let h = Hyperplanes::compute(&mg)?;
            let list: Vec<Value> = h
                .halfspaces()
                .iter()
                .map(|s| {
                    json!({
                        "id": s.id,
                        "hyperplane": s.hyperplane,
                        "complement": s.complement,
                        "side": lg.labels_of(&s.side),
                        "inward_edges": labeled_pairs(&lg, s.inward_edges()),
                        "boundary_diameter": h.boundary_diameter(s.id),
                    })
                })
                .collect();
            print(pretty, &json!({ "hyperplanes": h.hyperplane_count(), "halfspaces": list }));
        }
        Command::Dual { input, walling } => {
            let text = read_input(&input)?;
            let (dual, labels, principal) = if walling {
                let (w, labels) = parse_walling_json(&text)?;
                let wd = wall_dual(&w, cap)?;
                (wd.dual, labels, Some(wd.principal))
            } else {
                let (p, labels) = parse_pocset_json(&text)?;
                (p.dual_median_graph(cap)?, labels, None)
            };
            let mut out = json!({
                "vertices": dual.graph.vertex_count(),
                "edges": dual.graph.edges().collect::<Vec<_>>(),
            });
            match principal {
                // a walling's pocset elements are walls, listed by index
                Some(principal) => {
                    out["orientations"] = json!(dual
                        .orientations
                        .iter()
                        .map(|o| o.chosen.ones().collect::<Vec<_>>())
                        .collect::<Vec<_>>());
                    out["principal"] = json!(labels.iter().zip(&principal).collect::<Vec<_>>());
                }
                None => {
                    out["orientations"] = json!(dual
                        .orientations
                        .iter()
                        .map(|o| o.chosen.ones().map(|e| labels[e]).collect::<Vec<_>>())
                        .collect::<Vec<_>>());
                }
            }
            print(pretty, &out);
        }
        Command::SpanningTree { graph, bounded, stages_json, dot } => {
            let lg = read_graph(&graph)?;
            let mg = median(&lg)?;
            let h = Hyperplanes::compute(&mg)?;
            let mode = match bounded.as_deref() {
                Some(&[d, r]) => ColoringMode::Bounded { max_degree: d as usize, max_diameter: r as u32 },
                _ => ColoringMode::Greedy,
            };
            let coloring = color_halfspaces(&h, mode)?;
            let sf = extract_spanning_tree(&h, &coloring)?;
            let qi = verify_quasi_isometry(&h, &sf, h.max_boundary_diameter())?;
            if let Some(path) = stages_json {
                let stages: Vec<Value> = sf
                    .stages
                    .iter()
                    .map(|s| json!({ "edges": labeled_pairs(&lg, &s.edges), "blocks": s.blocks }))
                    .collect();
                fs::write(&path, serde_json::to_string_pretty(&stages)? + "\n")?;
            }
            if let Some(path) = dot {
                let overlay = Overlay { bold_edges: sf.tree().to_vec(), names: Some(names(&lg)), ..Overlay::default() };
                fs::write(&path, export_dot(&lg.graph, &overlay))?;
            }
            print(
                pretty,
                &json!({
                    "tree": labeled_pairs(&lg, sf.tree()),
                    "color_count": coloring.color_count,
                    "color_bound": coloring.bound.map(|b| b.to_string()),
                    "stages": sf.stages.len(),
                    "max_ratio": qi.max_ratio,
                }),
            );
        }
        Command::RadialCuts { graph, center, radius, closed } => {
            let lg = read_graph(&graph)?;
            let family = match (center, radius) {
                (Some(c), Some(r)) => {
                    let cuts = radial_cuts(&lg.graph, vertex(&lg, c)?, r)?;
                    let f = CutFamily::from_sides(&lg.graph, cuts.into_iter().map(|c| c.side), Provenance::Radial)?;
                    if closed {
                        f.complement_closure(&lg.graph)?
                    } else {
                        f
                    }
                }
                _ => all_radial_cuts(&lg.graph, closed)?,
            };
            print_raw(pretty, &cut_family_to_json(&family, &lg));
        }
        Command::Connectify { graph, family } => {
            let lg = read_graph(&graph)?;
            let f = parse_cut_family_json(&read_input(&family)?, &lg)?;
            print_raw(pretty, &cut_family_to_json(&connectify(&lg.graph, &f)?, &lg));
        }
        Command::Treedec { op, graph, treedec } => {
            let lg = read_graph(&graph)?;
            let (raw, nodes) = parse_treedec_json(&read_input(&treedec)?, &lg)?;
            let (td, width) = validate(&lg.graph, &raw)?;
            match op {
                TreedecOp::Validate => {
                    td.check_partition_law()?;
                    print(pretty, &json!({ "valid": true, "width": width }));
                }
                TreedecOp::Shrink | TreedecOp::Prune => {
                    let next = if matches!(op, TreedecOp::Shrink) { td.shrink_bags()? } else { td.prune_skeleton()? };
                    let node_labels: Vec<Label> = (0..next.node_count()).map(|y| nodes[next.label(y)]).collect();
                    print_raw(pretty, &treedec_to_json(&next.to_raw(), &node_labels, &lg));
                }
                TreedecOp::Cuts => print_raw(pretty, &cut_family_to_json(&td.cuts(true)?, &lg)),
            }
        }
        Command::Flow { graph, target, family, radius, emit, dot } => {
            let (lg, window) = match (&family, &graph) {
                (Some(f), _) => {
                    let fam: WindowFamily = f.parse()?;
                    let w = make_window(fam, radius.expect("clap requires radius"))?;
                    (LabeledGraph::identity(w.graph.graph().clone()), Some(w))
                }
                (None, Some(path)) => (read_graph(path)?, None),
                (None, None) => bail!("give a graph or --family"),
            };
            let mg = match &window {
                Some(w) => w.graph.clone(),
                None => median(&lg)?,
            };
            let h = Hyperplanes::compute(&mg)?;
            let end = match &window {
                Some(w) => w.target(&h),
                None => {
                    EndTarget::principal(&h, vertex(&lg, target.unwrap_or(lg.labels.first().copied().unwrap_or(0)))?)
                }
            };
            let forest = flow_forest(&h, &end)?;
            if let Some(path) = emit {
                fs::write(
                    &path,
                    serde_json::to_string_pretty(&json!({ "target": end.kind, "forest": forest }))? + "\n",
                )?;
            }
            if let Some(path) = dot {
                let overlay = Overlay {
                    arrows: step_arrows(&forest.step),
                    filled: Some(end.certified.clone()),
                    names: Some(match &window {
                        Some(w) => w.coords.iter().map(|(a, b)| format!("{a},{b}")).collect(),
                        None => names(&lg),
                    }),
                    ..Overlay::default()
                };
                fs::write(&path, export_dot(&lg.graph, &overlay))?;
            }
            let steps: Vec<(Label, Label)> =
                step_arrows(&forest.step).iter().map(|&(x, y)| (lg.labels[x], lg.labels[y])).collect();
            let mut out = json!({ "target": end.kind, "orbits": forest.orbit_count(), "steps": steps });
            if let Some(w) = &window {
                out["coords"] = json!(w.coords);
                out["certified"] = json!(end.certified.to_vec());
            }
            print(pretty, &out);
        }
        Command::HypfinWitness { family, rank } => {
            let (f, labels) = parse_set_family_json(&read_input(&family)?)?;
            let seq = if rank { oneended_fer_witness_rank(&f) } else { oneended_fer_witness(&f) };
            let partitions: Vec<Vec<Vec<Label>>> = seq
                .partitions
                .iter()
                .map(|p| p.classes().iter().map(|c| c.iter().map(|&x| labels[x]).collect()).collect())
                .collect();
            print(
                pretty,
                &json!({ "partitions": partitions, "increasing": seq.is_increasing(), "ends_full": seq.ends_full() }),
            );
        }
        Command::Generate { spec, seed, text } => {
            let source = if Path::new(&spec).is_file() { fs::read_to_string(&spec)? } else { spec };
            let mut spec: GeneratorSpec = serde_json::from_str(&source).context("parsing generator spec")?;
            if let Some(s) = seed {
                override_seed(&mut spec, s);
            }
            let g = generate(&spec, cli.cap.unwrap_or(DEFAULT_VERTEX_CAP))?;
            let lg = LabeledGraph::identity(g);
            if text {
                emit(&graph_to_text(&lg));
            } else {
                print_raw(pretty, &graph_to_json(&lg));
            }
        }
        Command::Pipeline { preset, graph, treedec, target, family, radius, out } => {
            let preset: Preset = preset.parse().map_err(anyhow::Error::msg)?;
            let report = match (family, graph) {
                (Some(f), _) => {
                    if preset != Preset::EndToForest {
                        bail!("--family only applies to end->forest");
                    }
                    run_window_pipeline(f.parse()?, radius.expect("clap requires radius"))?
                }
                (None, Some(path)) => {
                    let lg = read_graph(&path)?;
                    let raw = match &treedec {
                        Some(t) => Some(parse_treedec_json(&read_input(t)?, &lg)?.0),
                        None => None,
                    };
                    let target = target.map(|t| vertex(&lg, t)).transpose()?;
                    let input = PipelineInput { graph: &lg.graph, treedec: raw.as_ref(), target, cap };
                    run_pipeline(preset, input)?
                }
                (None, None) => bail!("give a graph or --family"),
            };
            if let Some(dir) = out {
                report.write_bundle(&dir)?;
            }
            print_raw(pretty, &report.to_json());
        }
        Command::ExportDot { graph, fill } => {
            let lg = read_graph(&graph)?;
            let filled = if fill.is_empty() { None } else { Some(lg.set(&fill)?) };
            let overlay = Overlay { filled, names: Some(names(&lg)), ..Overlay::default() };
            emit(&export_dot(&lg.graph, &overlay));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn override_seed(spec: &mut GeneratorSpec, s: u64) {
    match spec {
        GeneratorSpec::RandomTree { seed, .. } | GeneratorSpec::MedianClosure { seed, .. } => *seed = s,
        GeneratorSpec::Product { left, right } => {
            override_seed(left, s);
            override_seed(right, s.wrapping_add(1));
        }
        _ => {}
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
