//! Text and JSON formats for graphs, wallings, pocsets, cut families and
//! tree decompositions.
//!
//! External files name vertices by arbitrary nonnegative integer labels.
//! Dense ids are assigned in ascending label order.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cuts::{CutError, CutFamily, Provenance};
use crate::graph::{Graph, GraphError, Vertex, VertexSet};
use crate::oneended::{OneEndedError, SetFamily};
use crate::pocset::{validate_pocset, Pocset, PocsetError, RawPocset};
use crate::treedec::RawTreeDecomposition;
use crate::walling::Walling;

pub type Label = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Label),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Label, Label),
    #[error("vertex {0} declared twice")]
    DuplicateVertex(Label),
    #[error("unknown vertex {0}")]
    UnknownVertex(Label),
    #[error("unknown element {0}")]
    UnknownElement(Label),
    #[error("family claims to be closed under complement but lacks the complement of cut {0}")]
    NotClosed(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pocset(#[from] PocsetError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    OneEnded(#[from] OneEndedError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

/// A dense-id graph with the external label of each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<Label>,
}

impl LabeledGraph {
    /// Labels `0..n`.
    pub fn identity(graph: Graph) -> Self {
        let labels = (0..graph.vertex_count() as Label).collect();
        LabeledGraph { graph, labels }
    }

    pub fn id_of(&self, label: Label) -> Option<Vertex> {
        self.labels.binary_search(&label).ok()
    }

    fn ids(&self, labels: &[Label]) -> Result<Vec<Vertex>, IoError> {
        labels.iter().map(|&l| self.id_of(l).ok_or(IoError::UnknownVertex(l))).collect()
    }

    /// A vertex set from labels.
    pub fn set(&self, labels: &[Label]) -> Result<VertexSet, IoError> {
        Ok(VertexSet::from_vertices(self.graph.vertex_count(), self.ids(labels)?))
    }

    pub fn labels_of(&self, set: &VertexSet) -> Vec<Label> {
        set.iter().map(|v| self.labels[v]).collect()
    }
}

fn build_graph(declared: Vec<Label>, edges: Vec<(Label, Label)>) -> Result<LabeledGraph, IoError> {
    let mut labels: BTreeSet<Label> = BTreeSet::new();
    for &v in &declared {
        if !labels.insert(v) {
            return Err(IoError::DuplicateVertex(v));
        }
    }
    let mut seen = HashSet::new();
    for &(u, v) in &edges {
        if u == v {
            return Err(IoError::SelfLoop(u));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(IoError::DuplicateEdge(u, v));
        }
        labels.insert(u);
        labels.insert(v);
    }
    let labels: Vec<Label> = labels.into_iter().collect();
    let index: HashMap<Label, Vertex> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let graph = Graph::from_edges(labels.len(), edges.iter().map(|(u, v)| (index[u], index[v])))?;
    Ok(LabeledGraph { graph, labels })
}

/// Lines `v <id>` and `e <u> <v>`; blank lines and `#` comments ignored.
pub fn parse_graph_text(text: &str) -> Result<LabeledGraph, IoError> {
    let mut declared = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: &str| IoError::Syntax { line: i + 1, message: message.to_string() };
        let mut parts = line.split_whitespace();
        let kind = parts.next().expect("nonempty line");
        let nums: Vec<Label> = parts
            .map(|p| p.parse::<Label>().map_err(|_| syntax(&format!("not a vertex id: {p:?}"))))
            .collect::<Result<_, _>>()?;
        match (kind, nums.as_slice()) {
            ("v", &[v]) => declared.push(v),
            ("e", &[u, v]) => edges.push((u, v)),
            ("v", _) => return Err(syntax("expected `v <id>`")),
            ("e", _) => return Err(syntax("expected `e <u> <v>`")),
            _ => return Err(syntax(&format!("unknown record {kind:?}"))),
        }
    }
    build_graph(declared, edges)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    #[serde(default)]
    vertices: Vec<Label>,
    edges: Vec<(Label, Label)>,
}

/// `{"vertices": [...], "edges": [[u, v], ...]}`; `vertices` is optional.
pub fn parse_graph_json(text: &str) -> Result<LabeledGraph, IoError> {
    let j: GraphJson = serde_json::from_str(text)?;
    build_graph(j.vertices, j.edges)
}

/// JSON when the first non-blank character is `{`, text otherwise.
pub fn parse_graph(text: &str) -> Result<LabeledGraph, IoError> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_graph_text(text)
    }
}

pub fn graph_to_json(g: &LabeledGraph) -> String {
    let j = GraphJson {
        vertices: g.labels.clone(),
        edges: g.graph.edges().map(|(u, v)| (g.labels[u], g.labels[v])).collect(),
    };
    serde_json::to_string(&j).expect("graph JSON serializes")
}

pub fn graph_to_text(g: &LabeledGraph) -> String {
    let mut out = String::new();
    for &l in &g.labels {
        out.push_str(&format!("v {l}\n"));
    }
    for (u, v) in g.graph.edges() {
        out.push_str(&format!("e {} {}\n", g.labels[u], g.labels[v]));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WallingJson {
    ground: Vec<Label>,
    walls: Vec<Vec<Label>>,
}

/// Ground set labels and walls as dense-id sets.
fn parse_ground_sets(text: &str) -> Result<(Vec<Label>, Vec<VertexSet>), IoError> {
    let j: WallingJson = serde_json::from_str(text)?;
    let mut ground = j.ground.clone();
    ground.sort_unstable();
    if let Some(w) = ground.windows(2).find(|w| w[0] == w[1]) {
        return Err(IoError::DuplicateVertex(w[0]));
    }
    let n = ground.len();
    let sets = j
        .walls
        .iter()
        .map(|w| {
            let ids = w
                .iter()
                .map(|&l| ground.binary_search(&l).map_err(|_| IoError::UnknownVertex(l)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(VertexSet::from_vertices(n, ids))
        })
        .collect::<Result<_, IoError>>()?;
    Ok((ground, sets))
}

/// `{"ground": [...], "walls": [[...], ...]}`; complements and the trivial
/// walls are added (counts in [`Walling::added_complements`] and
/// [`Walling::added_trivial`]).
pub fn parse_walling_json(text: &str) -> Result<(Walling, Vec<Label>), IoError> {
    let (ground, sets) = parse_ground_sets(text)?;
    Ok((Walling::new(ground.len(), sets), ground))
}

/// The same format read as a family `I*` of sets taken as given.
pub fn parse_set_family_json(text: &str) -> Result<(SetFamily, Vec<Label>), IoError> {
    let (ground, sets) = parse_ground_sets(text)?;
    Ok((SetFamily::new(ground.len(), sets)?, ground))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PocsetJson {
    elements: Vec<Label>,
    #[serde(default)]
    order: Vec<(Label, Label)>,
    involution: Vec<(Label, Label)>,
    #[serde(default)]
    zero: Option<Label>,
}

/// `{"elements": [...], "order": [[p, q], ...], "involution": [[p, q], ...],
/// "zero": z}` with `[p, q]` in `order` meaning `p ≤ q`. The order is closed
/// under transitivity and the involution before validation.
pub fn parse_pocset_json(text: &str) -> Result<(Pocset, Vec<Label>), IoError> {
    let j: PocsetJson = serde_json::from_str(text)?;
    let mut labels = j.elements.clone();
    labels.sort_unstable();
    if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
        return Err(IoError::DuplicateVertex(w[0]));
    }
    let id = |l: Label| labels.binary_search(&l).map_err(|_| IoError::UnknownElement(l));
    let pairs =
        |ps: &[(Label, Label)]| ps.iter().map(|&(a, b)| Ok((id(a)?, id(b)?))).collect::<Result<Vec<_>, IoError>>();
    let raw = RawPocset {
        size: labels.len(),
        order: pairs(&j.order)?,
        involution: pairs(&j.involution)?,
        zero: j.zero.map(id).transpose()?,
    };
    Ok((validate_pocset(&raw.closed()?)?, labels))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyJson {
    cuts: Vec<Vec<Label>>,
    #[serde(default)]
    closed_under_complement: bool,
}

/// `{"cuts": [[...], ...], "closed_under_complement": bool}`. A family that
/// claims closure must contain every complement.
pub fn parse_cut_family_json(text: &str, g: &LabeledGraph) -> Result<CutFamily, IoError> {
    let j: FamilyJson = serde_json::from_str(text)?;
    let sides = j.cuts.iter().map(|c| g.set(c)).collect::<Result<Vec<_>, _>>()?;
    let family = CutFamily::from_sides(&g.graph, sides, Provenance::Custom)?;
    if j.closed_under_complement && !family.complement_closed {
        let missing = family.cuts.iter().position(|c| !family.contains(&c.side.complement())).expect("not closed");
        return Err(IoError::NotClosed(missing));
    }
    Ok(family)
}

pub fn cut_family_to_json(f: &CutFamily, g: &LabeledGraph) -> String {
    let j = FamilyJson {
        cuts: f.cuts.iter().map(|c| g.labels_of(&c.side)).collect(),
        closed_under_complement: f.complement_closed,
    };
    serde_json::to_string(&j).expect("family JSON serializes")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreedecJson {
    skeleton_edges: Vec<(Label, Label)>,
    bags: BTreeMap<String, Vec<Label>>,
}

/// `{"skeleton_edges": [[y, y'], ...], "bags": {"y": [x, ...], ...}}`.
/// Skeleton nodes are the bag keys (nonnegative integers), numbered in
/// ascending order; the returned labels map node ids back.
pub fn parse_treedec_json(text: &str, g: &LabeledGraph) -> Result<(RawTreeDecomposition, Vec<Label>), IoError> {
    let j: TreedecJson = serde_json::from_str(text)?;
    let mut keyed: Vec<(Label, Vec<Label>)> = j
        .bags
        .into_iter()
        .map(|(k, bag)| {
            let key =
                k.trim().parse::<Label>().map_err(|_| IoError::Json(format!("bag key {k:?} is not a node id")))?;
            Ok((key, bag))
        })
        .collect::<Result<_, IoError>>()?;
    keyed.sort_unstable_by_key(|(k, _)| *k);
    if let Some(w) = keyed.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(IoError::DuplicateVertex(w[0].0));
    }
    let nodes: Vec<Label> = keyed.iter().map(|(k, _)| *k).collect();
    let node = |l: Label| nodes.binary_search(&l).map_err(|_| IoError::UnknownElement(l));
    let skeleton_edges =
        j.skeleton_edges.iter().map(|&(a, b)| Ok((node(a)?, node(b)?))).collect::<Result<_, IoError>>()?;
    let bags = keyed.iter().map(|(_, bag)| g.ids(bag)).collect::<Result<_, _>>()?;
    Ok((RawTreeDecomposition { skeleton_edges, bags }, nodes))
}

pub fn treedec_to_json(raw: &RawTreeDecomposition, node_labels: &[Label], g: &LabeledGraph) -> String {
    let j = TreedecJson {
        skeleton_edges: raw.skeleton_edges.iter().map(|&(a, b)| (node_labels[a], node_labels[b])).collect(),
        bags: raw
            .bags
            .iter()
            .enumerate()
            .map(|(y, bag)| (node_labels[y].to_string(), bag.iter().map(|&x| g.labels[x]).collect()))
            .collect(),
    };
    serde_json::to_string(&j).expect("treedec JSON serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree() {
        let t = parse_graph_text("# square\nv 10\ne 10 20\ne 20 30\ne 30 40\ne 40 10\n").unwrap();
        let j = parse_graph_json(r#"{"vertices":[10,20],"edges":[[10,20],[20,30],[30,40],[40,10]]}"#).unwrap();
        assert_eq!(t, j);
        assert_eq!(t.labels, vec![10, 20, 30, 40]);
        assert_eq!(t.graph.edge_count(), 4);
        assert_eq!(parse_graph(&graph_to_json(&t)).unwrap(), t);
        assert_eq!(parse_graph(&graph_to_text(&t)).unwrap(), t);
    }

    #[test]
    fn rejections() {
        assert_eq!(parse_graph_text("e 1 1").unwrap_err(), IoError::SelfLoop(1));
        assert_eq!(parse_graph_text("e 1 2\ne 2 1").unwrap_err(), IoError::DuplicateEdge(2, 1));
        assert_eq!(parse_graph_json(r#"{"edges":[[3,3]]}"#).unwrap_err(), IoError::SelfLoop(3));
        assert_eq!(parse_graph_json(r#"{"edges":[[1,2],[1,2]]}"#).unwrap_err(), IoError::DuplicateEdge(1, 2));
        assert_eq!(parse_graph_text("v 1\nv 1").unwrap_err(), IoError::DuplicateVertex(1));
        assert!(matches!(parse_graph_text("x 1"), Err(IoError::Syntax { line: 1, .. })));
        assert!(matches!(parse_graph_text("e 1"), Err(IoError::Syntax { line: 1, .. })));
        assert!(matches!(parse_graph_json("{"), Err(IoError::Json(_))));
    }

    #[test]
    fn walling_and_family() {
        let (w, labels) = parse_walling_json(r#"{"ground":[1,2,3],"walls":[[1],[2,3]]}"#).unwrap();
        assert_eq!(labels, vec![1, 2, 3]);
        assert_eq!(w.walls().len(), 4);
        assert_eq!((w.added_complements, w.added_trivial), (0, 2));
        let (f, _) = parse_set_family_json(r#"{"ground":[1,2],"walls":[[1],[1,2]]}"#).unwrap();
        assert_eq!(f.sets.len(), 2);
        assert_eq!(parse_walling_json(r#"{"ground":[1],"walls":[[7]]}"#).unwrap_err(), IoError::UnknownVertex(7));
    }

    #[test]
    fn pocset_json() {
        let (p, labels) = parse_pocset_json(
            r#"{"elements":[0,1,2,3,4,5],"order":[[2,4]],"involution":[[0,1],[2,3],[4,5]],"zero":0}"#,
        )
        .unwrap();
        assert_eq!(labels.len(), 6);
        assert_eq!(p.len(), 6);
        assert!(parse_pocset_json(r#"{"elements":[0,1],"involution":[[0,0]]}"#).is_err());
    }

    #[test]
    fn cut_family_json() {
        let g = parse_graph_text("e 0 1\ne 1 2").unwrap();
        let f = parse_cut_family_json(r#"{"cuts":[[0],[1,2]],"closed_under_complement":true}"#, &g).unwrap();
        assert!(f.complement_closed);
        assert_eq!(
            parse_cut_family_json(r#"{"cuts":[[0]],"closed_under_complement":true}"#, &g).unwrap_err(),
            IoError::NotClosed(0)
        );
        let back = parse_cut_family_json(&cut_family_to_json(&f, &g), &g).unwrap();
        assert_eq!(back.sides().collect::<Vec<_>>(), f.sides().collect::<Vec<_>>());
    }

    #[test]
    fn treedec_json() {
        let g = parse_graph_text("e 0 1\ne 1 2\ne 2 3\ne 3 0").unwrap();
        let text = r#"{"skeleton_edges":[[5,9]],"bags":{"5":[0,1,2],"9":[0,2,3]}}"#;
        let (raw, nodes) = parse_treedec_json(text, &g).unwrap();
        assert_eq!(nodes, vec![5, 9]);
        assert_eq!(raw.skeleton_edges, vec![(0, 1)]);
        let (td, width) = crate::treedec::validate(&g.graph, &raw).unwrap();
        assert_eq!(width.width, 2);
        let again = parse_treedec_json(&treedec_to_json(&td.to_raw(), &nodes, &g), &g).unwrap();
        assert_eq!(again.0, raw);
    }
}
