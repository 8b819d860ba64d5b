//! Named end-to-end pipelines turning tree-like inputs into trees, run per
//! connected component and reported as JSON artifacts.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cuts::{all_radial_cuts, connectify, walling_finiteness_check, CutFamily};
use crate::extract::{color_halfspaces, extract_spanning_tree, verify_quasi_isometry, ColoringMode};
use crate::flow::{e_n_sequence, flow_forest, EndTarget};
use crate::graph::{Graph, Vertex};
use crate::hyperplane::Hyperplanes;
use crate::median::{check_median, MedianCertificate, MedianGraph};
use crate::oneended::leaf_prune;
use crate::treedec::{heuristic_treedec, validate, RawTreeDecomposition};
use crate::walling::{proper_walling_report, wall_dual, Walling};
use crate::window::{make_window, WindowFamily};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Preset {
    #[serde(rename = "quasitree->tree")]
    QuasitreeToTree,
    #[serde(rename = "treedec->tree")]
    TreedecToTree,
    #[serde(rename = "median->tree")]
    MedianToTree,
    #[serde(rename = "end->forest")]
    EndToForest,
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::QuasitreeToTree => "quasitree->tree",
            Preset::TreedecToTree => "treedec->tree",
            Preset::MedianToTree => "median->tree",
            Preset::EndToForest => "end->forest",
        })
    }
}

impl FromStr for Preset {
    type Err = String;

    /// Accepts `->`, `→` or `-` between the two words.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('→', "->").replace("->", "-");
        match norm.as_str() {
            "quasitree-tree" => Ok(Preset::QuasitreeToTree),
            "treedec-tree" => Ok(Preset::TreedecToTree),
            "median-tree" => Ok(Preset::MedianToTree),
            "end-forest" => Ok(Preset::EndToForest),
            _ => Err(format!("unknown preset {s:?}")),
        }
    }
}

/// A stage failure. `component` indexes components by least vertex.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("component {component}, stage {stage}: {message}")]
pub struct PipelineError {
    pub component: usize,
    pub stage: String,
    pub message: String,
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    pub stage: String,
    pub summary: Value,
}

/// Results for one component, in component-local vertex ids; `vertices`
/// maps local ids to input ids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub vertices: Vec<Vertex>,
    pub stages: Vec<StageRecord>,
    pub artifacts: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub schema_version: u32,
    pub preset: Preset,
    pub vertex_count: usize,
    pub components: Vec<ComponentReport>,
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `summary.json` with stage summaries, plus one file per artifact under
    /// `component-<i>/`.
    pub fn write_bundle(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let summary = json!({
            "schema_version": self.schema_version,
            "preset": self.preset,
            "vertex_count": self.vertex_count,
            "components": self.components.iter().map(|c| json!({
                "vertices": c.vertices,
                "stages": c.stages,
            })).collect::<Vec<_>>(),
        });
        std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
        for (i, c) in self.components.iter().enumerate() {
            let sub = dir.join(format!("component-{i}"));
            std::fs::create_dir_all(&sub)?;
            for (name, value) in &c.artifacts {
                std::fs::write(sub.join(format!("{name}.json")), serde_json::to_string_pretty(value)? + "\n")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PipelineInput<'a> {
    pub graph: &'a Graph,
    /// Used by `treedec->tree`; a heuristic decomposition otherwise.
    pub treedec: Option<&'a RawTreeDecomposition>,
    /// Principal target for `end->forest`; components not containing it use
    /// their least vertex.
    pub target: Option<Vertex>,
    /// Orientation cap for dual constructions.
    pub cap: usize,
}

struct Run {
    component: usize,
    report: ComponentReport,
}

impl Run {
    fn fail(&self, stage: &str, message: impl ToString) -> PipelineError {
        PipelineError {
            component: self.component,
            stage: stage.to_string(),
            message: message.to_string(),
            witness: None,
        }
    }

    fn record(&mut self, stage: &str, summary: Value) {
        self.report.stages.push(StageRecord { stage: stage.to_string(), summary });
    }

    fn artifact(&mut self, name: &str, value: impl Serialize) {
        self.report.artifacts.insert(name.to_string(), serde_json::to_value(value).expect("artifact serializes"));
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("serializes")
}

fn median_stage(run: &mut Run, g: Graph) -> Result<MedianGraph, PipelineError> {
    match check_median(&g).map_err(|e| run.fail("check_median", e))? {
        MedianCertificate::Accepted => {}
        MedianCertificate::Rejected { triple, intersection } => {
            let mut err = run.fail("check_median", "not a median graph");
            err.witness = Some(json!({ "triple": triple, "intersection": intersection }));
            return Err(err);
        }
    }
    run.record("check_median", json!({ "verdict": "accepted", "vertices": g.vertex_count(), "edges": g.edge_count() }));
    MedianGraph::from_trusted(g).map_err(|e| run.fail("check_median", e))
}

fn tree_tail(run: &mut Run, mg: &MedianGraph) -> Result<(), PipelineError> {
    let h = Hyperplanes::compute(mg).map_err(|e| run.fail("hyperplanes", e))?;
    let r = h.max_boundary_diameter();
    run.record("hyperplanes", json!({ "hyperplanes": h.hyperplane_count(), "max_boundary_diameter": r }));
    run.artifact(
        "hyperplanes",
        (0..h.hyperplane_count()).map(|p| h.halfspace(h.hyperplane(p)[0]).side.to_vec()).collect::<Vec<_>>(),
    );
    let coloring = color_halfspaces(&h, ColoringMode::Greedy).map_err(|e| run.fail("coloring", e))?;
    run.record("coloring", json!({ "color_count": coloring.color_count }));
    run.artifact("coloring", &coloring);
    let sf = extract_spanning_tree(&h, &coloring).map_err(|e| run.fail("spanning_tree", e))?;
    let n = mg.vertex_count();
    let tree = Graph::from_edges(n, sf.tree().iter().copied()).map_err(|e| run.fail("spanning_tree", e))?;
    if !tree.is_tree() {
        return Err(run.fail("spanning_tree", "final stage is not a spanning tree"));
    }
    run.record("spanning_tree", json!({ "stages": sf.stages.len(), "edges": sf.tree().len() }));
    run.artifact("tree", sf.tree());
    run.artifact("stages", &sf);
    let qi = verify_quasi_isometry(&h, &sf, r).map_err(|e| run.fail("quasi_isometry", e))?;
    run.record("quasi_isometry", to_value(&qi));
    Ok(())
}

fn walling_tail(run: &mut Run, g: &Graph, family: &CutFamily, cap: usize) -> Result<(), PipelineError> {
    let connected = connectify(g, family).map_err(|e| run.fail("connectify", e))?;
    run.record("connectify", json!({ "cuts": connected.len() }));
    run.artifact("connectified_cuts", connected.sides().map(|s| s.to_vec()).collect::<Vec<_>>());
    let finiteness = walling_finiteness_check(g, &connected);
    let walling = Walling::new(g.vertex_count(), connected.sides().cloned());
    let proper = proper_walling_report(&walling);
    run.record("walling_check", json!({ "boundary_multiplicity": finiteness.max, "proper": proper }));
    let dual = wall_dual(&walling, cap).map_err(|e| run.fail("dual", e))?;
    let dg = dual.dual.graph.clone();
    run.record("dual", json!({ "vertices": dg.vertex_count(), "edges": dg.edge_count() }));
    run.artifact("dual_graph", &dg);
    run.artifact("principal", &dual.principal);
    let mg = median_stage(run, dg)?;
    tree_tail(run, &mg)
}

fn flow_tail(
    run: &mut Run,
    mg: &MedianGraph,
    target: Option<Vertex>,
    family: Option<(WindowFamily, usize)>,
) -> Result<(), PipelineError> {
    let h = Hyperplanes::compute(mg).map_err(|e| run.fail("hyperplanes", e))?;
    run.record("hyperplanes", json!({ "hyperplanes": h.hyperplane_count() }));
    let u = match family {
        Some((f, r)) => make_window(f, r).map_err(|e| run.fail("window", e))?.target(&h),
        None => EndTarget::principal(&h, target.unwrap_or(0)),
    };
    run.artifact("certified", u.certified.to_vec());
    let forest = flow_forest(&h, &u).map_err(|e| run.fail("flow", e))?;
    run.record("flow", json!({ "orbits": forest.orbit_count(), "certified": u.certified.len(), "target": u.kind }));
    run.artifact("orbits", &forest);
    let pruned = leaf_prune(&h, &u.side).map_err(|e| run.fail("leaf_prune", e))?;
    run.record("leaf_prune", json!({ "stages": pruned.stages.len(), "survivors": pruned.survivors }));
    run.artifact("leaf_prune", &pruned);
    let n_max = forest.certified_orbits().count();
    let e = e_n_sequence(&h, &u, &forest, n_max).map_err(|e| run.fail("e_n", e))?;
    run.record(
        "e_n",
        json!({ "levels": e.partitions.len(), "orbit_count": e.orbit_count, "degenerate": e.degenerate }),
    );
    run.artifact("e_n", &e);
    Ok(())
}

fn restrict_treedec(raw: &RawTreeDecomposition, old_to_new: &[Option<Vertex>]) -> RawTreeDecomposition {
    RawTreeDecomposition {
        skeleton_edges: raw.skeleton_edges.clone(),
        bags: raw
            .bags
            .iter()
            .map(|b| b.iter().filter_map(|&x| old_to_new.get(x).copied().flatten()).collect())
            .collect(),
    }
}

fn run_component(
    preset: Preset,
    input: &PipelineInput,
    component: usize,
    g: Graph,
    vertices: Vec<Vertex>,
) -> Result<ComponentReport, PipelineError> {
    let mut run =
        Run { component, report: ComponentReport { vertices, stages: Vec::new(), artifacts: BTreeMap::new() } };
    match preset {
        Preset::MedianToTree => {
            let mg = median_stage(&mut run, g)?;
            tree_tail(&mut run, &mg)?;
        }
        Preset::QuasitreeToTree => {
            let family = all_radial_cuts(&g, true).map_err(|e| run.fail("radial_cuts", e))?;
            run.record("radial_cuts", json!({ "cuts": family.len() }));
            walling_tail(&mut run, &g, &family, input.cap)?;
        }
        Preset::TreedecToTree => {
            let raw = match input.treedec {
                Some(raw) => {
                    let mut old_to_new = vec![None; input.graph.vertex_count()];
                    for (new, &old) in run.report.vertices.iter().enumerate() {
                        old_to_new[old] = Some(new);
                    }
                    restrict_treedec(raw, &old_to_new)
                }
                None => heuristic_treedec(&g).to_raw(),
            };
            let (td, width) = validate(&g, &raw).map_err(|e| run.fail("treedec", e))?;
            run.record(
                "treedec",
                json!({ "width": width.width, "nodes": td.node_count(), "given": input.treedec.is_some() }),
            );
            let family = td.cuts(true).map_err(|e| run.fail("treedec_cuts", e))?;
            run.record("treedec_cuts", json!({ "cuts": family.len() }));
            walling_tail(&mut run, &g, &family, input.cap)?;
        }
        Preset::EndToForest => {
            let target = input.target.and_then(|t| run.report.vertices.iter().position(|&v| v == t));
            let mg = median_stage(&mut run, g)?;
            flow_tail(&mut run, &mg, target, None)?;
        }
    }
    Ok(run.report)
}

/// Runs a preset on every connected component (ordered by least vertex),
/// concurrently, and merges the reports in component order.
pub fn run_pipeline(preset: Preset, input: PipelineInput) -> Result<PipelineReport, PipelineError> {
    let g = input.graph;
    if let Some(t) = input.target {
        g.check_vertex(t).map_err(|e| PipelineError {
            component: 0,
            stage: "input".into(),
            message: e.to_string(),
            witness: None,
        })?;
    }
    let parts: Vec<(Graph, Vec<Vertex>)> = g.connected_components().iter().map(|c| g.induced_subgraph(c)).collect();
    let results: Vec<Result<ComponentReport, PipelineError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = parts
            .into_iter()
            .enumerate()
            .map(|(i, (sub, vertices))| scope.spawn(move || run_component(preset, &input, i, sub, vertices)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("component run panicked")).collect()
    });
    let components = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(PipelineReport { schema_version: SCHEMA_VERSION, preset, vertex_count: g.vertex_count(), components })
}

/// `end->forest` on a window of an infinite family, toward its end.
pub fn run_window_pipeline(family: WindowFamily, radius: usize) -> Result<PipelineReport, PipelineError> {
    let w = make_window(family, radius).map_err(|e| PipelineError {
        component: 0,
        stage: "window".into(),
        message: e.to_string(),
        witness: None,
    })?;
    let n = w.graph.vertex_count();
    let mut run = Run {
        component: 0,
        report: ComponentReport { vertices: (0..n).collect(), stages: Vec::new(), artifacts: BTreeMap::new() },
    };
    run.record("window", json!({ "family": family.to_string(), "radius": radius, "vertices": n, "anchor": w.anchor }));
    run.artifact("coords", &w.coords);
    flow_tail(&mut run, &w.graph, None, Some((family, radius)))?;
    Ok(PipelineReport {
        schema_version: SCHEMA_VERSION,
        preset: Preset::EndToForest,
        vertex_count: n,
        components: vec![run.report],
    })
}
