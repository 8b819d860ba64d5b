//! Canonical spanning trees of median graphs by staged hyperplane colouring.
//!
//! Hyperplanes are coloured so that hyperplanes with intersecting vertex
//! boundaries get distinct colours. The `K_n`-blocks are the classes of
//! vertices not separated by any hyperplane of colour `≥ n`. Stage `n + 1`
//! adds, for every pair of adjacent `K_n`-blocks, the least edge of colour
//! `n` joining them; the components of stage `n` are exactly the `K_n`-blocks.

use std::collections::{HashMap, VecDeque};

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex, VertexSet};
use crate::hyperplane::{HyperplaneId, Hyperplanes};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("max degree {found} exceeds the bound {bound}")]
    DegreeExceeded { found: usize, bound: usize },
    #[error("hyperplane boundary diameter {found} exceeds the bound {bound}")]
    DiameterExceeded { found: u32, bound: u32 },
    #[error("{count} colours exceed the bound {bound}")]
    TooManyColors { count: usize, bound: u128 },
    #[error("colouring is improper at hyperplanes {0} and {1}")]
    ImproperColoring(HyperplaneId, HyperplaneId),
    #[error("colouring has {found} entries for {expected} hyperplanes")]
    ColoringSize { expected: usize, found: usize },
    #[error("stage {0} is not a forest")]
    Cycle(usize),
    #[error("stage {0} components differ from its blocks")]
    BlockMismatch(usize),
    #[error("stage {stage}: d_T({x}, {y}) = {distance} exceeds {bound}")]
    LipschitzViolated { stage: usize, x: Vertex, y: Vertex, distance: u32, bound: u128 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ColoringMode {
    Greedy,
    /// Greedy, plus the premises `max degree ≤ max_degree` and
    /// `diam(∂_v H) ≤ max_diameter` and the colour bound `3^(D^(2R+1))`.
    Bounded {
        max_degree: usize,
        max_diameter: u32,
    },
}

/// A colour per unoriented hyperplane (shared by `H` and `¬H`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfspaceColoring {
    pub colors: Vec<usize>,
    pub color_count: usize,
    /// `3^(D^(2R+1))` in bounded mode; `None` when it exceeds `u128`.
    pub bound: Option<u128>,
}

/// `3^(D^(2R+1))`, or `None` when it does not fit in `u128`.
pub fn color_bound(max_degree: usize, max_diameter: u32) -> Option<u128> {
    let exponent = (max_degree as u128).checked_pow(2 * max_diameter + 1)?;
    3u128.checked_pow(u32::try_from(exponent).ok()?)
}

/// `M_n = 1 + 2R + ⋯ + (2R)^(n-1)`, saturating.
pub fn lipschitz_bound(n: usize, r: u32) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for _ in 0..n {
        total = total.saturating_add(term);
        term = term.saturating_mul(2 * r as u128);
    }
    total
}

fn boundary_sets(h: &Hyperplanes) -> Vec<VertexSet> {
    (0..h.hyperplane_count()).map(|p| h.halfspace(h.hyperplane(p)[0]).boundary.vertices()).collect()
}

/// Greedy proper colouring of the boundary-intersection graph in ascending
/// hyperplane id order.
pub fn color_halfspaces(h: &Hyperplanes, mode: ColoringMode) -> Result<HalfspaceColoring, ExtractError> {
    let bound = match mode {
        ColoringMode::Greedy => None,
        ColoringMode::Bounded { max_degree, max_diameter } => {
            let found = h.graph().max_degree();
            if found > max_degree {
                return Err(ExtractError::DegreeExceeded { found, bound: max_degree });
            }
            let found = h.max_boundary_diameter();
            if found > max_diameter {
                return Err(ExtractError::DiameterExceeded { found, bound: max_diameter });
            }
            color_bound(max_degree, max_diameter)
        }
    };
    let boundaries = boundary_sets(h);
    let m = boundaries.len();
    let mut colors: Vec<usize> = Vec::with_capacity(m);
    for p in 0..m {
        let used: Vec<usize> =
            (0..p).filter(|&q| !boundaries[p].is_disjoint(&boundaries[q])).map(|q| colors[q]).collect();
        let c = (0..).find(|c| !used.contains(c)).expect("unbounded range");
        colors.push(c);
    }
    let color_count = colors.iter().max().map_or(0, |&c| c + 1);
    if let (ColoringMode::Bounded { .. }, Some(b)) = (mode, bound) {
        if color_count as u128 > b {
            return Err(ExtractError::TooManyColors { count: color_count, bound: b });
        }
    }
    Ok(HalfspaceColoring { colors, color_count, bound })
}

impl HalfspaceColoring {
    /// Checks that intersecting hyperplane boundaries carry distinct colours.
    pub fn validate(&self, h: &Hyperplanes) -> Result<(), ExtractError> {
        let boundaries = boundary_sets(h);
        if self.colors.len() != boundaries.len() {
            return Err(ExtractError::ColoringSize { expected: boundaries.len(), found: self.colors.len() });
        }
        for p in 0..boundaries.len() {
            for q in p + 1..boundaries.len() {
                if self.colors[p] == self.colors[q] && !boundaries[p].is_disjoint(&boundaries[q]) {
                    return Err(ExtractError::ImproperColoring(p, q));
                }
            }
        }
        Ok(())
    }
}

/// One stage `T_n` with its `K_n`-block labelling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    /// Cumulative edges of `T_n`, sorted.
    pub edges: Vec<Edge>,
    /// Block index of each vertex, numbered by least member.
    pub blocks: Vec<usize>,
}

/// Stages `T_0 ⊆ T_1 ⊆ ⋯ ⊆ T_k` where `k` is the number of colours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StagedForest {
    pub stages: Vec<Stage>,
}

impl StagedForest {
    pub fn tree(&self) -> &[Edge] {
        &self.stages.last().expect("at least T_0").edges
    }
}

fn labels_from(uf: &mut UnionFind<usize>, n: usize) -> Vec<usize> {
    let mut ids: HashMap<usize, usize> = HashMap::new();
    (0..n)
        .map(|v| {
            let root = uf.find_mut(v);
            let next = ids.len();
            *ids.entry(root).or_insert(next)
        })
        .collect()
}

/// The colour of each edge of the graph, keyed by `(min, max)`.
fn edge_colors(h: &Hyperplanes, coloring: &HalfspaceColoring) -> Vec<(Edge, usize)> {
    h.graph()
        .edges()
        .map(|(u, v)| {
            let hs = h.halfspace_of_edge(u, v).expect("every edge lies on a hyperplane");
            ((u, v), coloring.colors[h.halfspace(hs).hyperplane])
        })
        .collect()
}

/// Runs the staged construction, asserting at each stage that the new
/// edges close no cycle and that components equal the `K_n`-blocks.
pub fn extract_spanning_tree(h: &Hyperplanes, coloring: &HalfspaceColoring) -> Result<StagedForest, ExtractError> {
    coloring.validate(h)?;
    let n = h.graph().vertex_count();
    let colored = edge_colors(h, coloring);
    let mut tree_uf = UnionFind::<usize>::new(n);
    let mut tree_edges: Vec<Edge> = Vec::new();
    let mut block_uf = UnionFind::<usize>::new(n);
    let mut stages = vec![Stage { edges: vec![], blocks: labels_from(&mut block_uf, n) }];

    for color in 0..coloring.color_count {
        // K_n-blocks are the current tree components; pick one edge per block pair
        let mut chosen: HashMap<(usize, usize), Edge> = HashMap::new();
        let mut order: Vec<(usize, usize)> = Vec::new();
        for &((u, v), c) in &colored {
            if c != color {
                continue;
            }
            let (a, b) = (tree_uf.find_mut(u), tree_uf.find_mut(v));
            let key = (a.min(b), a.max(b));
            if let std::collections::hash_map::Entry::Vacant(e) = chosen.entry(key) {
                e.insert((u, v));
                order.push(key);
            }
        }
        for key in order {
            let (u, v) = chosen[&key];
            if !tree_uf.union(u, v) {
                return Err(ExtractError::Cycle(color + 1));
            }
            tree_edges.push((u, v));
        }
        for &((u, v), c) in &colored {
            if c == color {
                block_uf.union(u, v);
            }
        }
        let blocks = labels_from(&mut block_uf, n);
        if labels_from(&mut tree_uf, n) != blocks {
            return Err(ExtractError::BlockMismatch(color + 1));
        }
        let mut edges = tree_edges.clone();
        edges.sort_unstable();
        stages.push(Stage { edges, blocks });
    }
    Ok(StagedForest { stages })
}

/// Worst observed `d_{T_n}(x, y)` over adjacent same-block pairs at stage `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageLipschitz {
    pub stage: usize,
    pub bound: u128,
    pub max_distance: u32,
    pub pairs_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiIsometryReport {
    pub r: u32,
    pub stages: Vec<StageLipschitz>,
    /// Max over stages of `max_distance / bound`.
    pub max_ratio: f64,
}

fn forest_distances_from(adj: &[Vec<Vertex>], source: Vertex) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].expect("queued vertices are reached");
        for &w in &adj[v] {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Checks `d_{T_n}(x, y) ≤ M_n` for every edge `(x, y)` of the graph whose
/// endpoints share a `K_n`-block. Requires every hyperplane boundary
/// diameter to be at most `r`.
pub fn verify_quasi_isometry(h: &Hyperplanes, sf: &StagedForest, r: u32) -> Result<QuasiIsometryReport, ExtractError> {
    let found = h.max_boundary_diameter();
    if found > r {
        return Err(ExtractError::DiameterExceeded { found, bound: r });
    }
    let g: &Graph = h.graph();
    let n = g.vertex_count();
    let mut stages = Vec::new();
    let mut max_ratio: f64 = 0.0;
    for (stage, st) in sf.stages.iter().enumerate() {
        let bound = lipschitz_bound(stage, r);
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &st.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut max_distance = 0;
        let mut pairs_checked = 0;
        for x in 0..n {
            let same_block: Vec<Vertex> =
                g.neighbors(x).iter().copied().filter(|&y| y > x && st.blocks[y] == st.blocks[x]).collect();
            if same_block.is_empty() {
                continue;
            }
            let dist = forest_distances_from(&adj, x);
            for y in same_block {
                let d = dist[y].ok_or(ExtractError::BlockMismatch(stage))?;
                pairs_checked += 1;
                if d as u128 > bound {
                    return Err(ExtractError::LipschitzViolated { stage, x, y, distance: d, bound });
                }
                max_distance = max_distance.max(d);
            }
        }
        if pairs_checked > 0 {
            max_ratio = max_ratio.max(max_distance as f64 / bound as f64);
        }
        stages.push(StageLipschitz { stage, bound, max_distance, pairs_checked });
    }
    Ok(QuasiIsometryReport { r, stages, max_ratio })
}
