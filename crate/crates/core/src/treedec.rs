//! Tree decompositions as relations `F ⊆ X × Y` from a host graph to a
//! skeleton tree: validation, bag shrinking, skeleton pruning, derived cuts.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::cuts::{CutError, CutFamily, Provenance};
use crate::graph::{Graph, GraphError, Vertex, VertexSet};
use crate::median::MedianGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreedecError {
    #[error("skeleton is not a tree")]
    SkeletonNotTree,
    #[error("skeleton node {0} out of range")]
    UnknownNode(usize),
    #[error("host vertex {0} lies in no bag")]
    EmptyImage(Vertex),
    #[error("bags containing host vertex {0} are not connected in the skeleton")]
    DisconnectedImage(Vertex),
    #[error("no bag contains both endpoints of edge ({0}, {1})")]
    UncoveredEdge(Vertex, Vertex),
    #[error("partition law fails at skeleton node {0}")]
    PartitionLaw(usize),
    #[error("cut at skeleton node {0} has outer boundary outside the bag")]
    CutBoundary(usize),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Unvalidated decomposition data: skeleton edges and one bag per node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawTreeDecomposition {
    pub skeleton_edges: Vec<(usize, usize)>,
    pub bags: Vec<Vec<Vertex>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WidthReport {
    pub width: usize,
    pub bag_sizes: Vec<usize>,
}

/// A validated tree decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    host: Graph,
    skeleton: Graph,
    /// `F(x)` over skeleton nodes.
    images: Vec<VertexSet>,
    /// `F⁻¹(y)` over host vertices.
    bags: Vec<VertexSet>,
    /// Original node id of each skeleton node (pruning relabels).
    labels: Vec<usize>,
}

/// Checks the decomposition clauses and reports the width.
pub fn validate(host: &Graph, raw: &RawTreeDecomposition) -> Result<(TreeDecomposition, WidthReport), TreedecError> {
    let m = raw.bags.len();
    for &(a, b) in &raw.skeleton_edges {
        if a >= m || b >= m {
            return Err(TreedecError::UnknownNode(a.max(b)));
        }
    }
    let skeleton =
        Graph::from_edges(m, raw.skeleton_edges.iter().copied()).map_err(|_| TreedecError::SkeletonNotTree)?;
    let n = host.vertex_count();
    let mut bags = Vec::with_capacity(m);
    for bag in &raw.bags {
        for &x in bag {
            host.check_vertex(x)?;
        }
        bags.push(VertexSet::from_vertices(n, bag.iter().copied()));
    }
    let labels = (0..m).collect();
    build(host.clone(), skeleton, bags, labels)
}

fn build(
    host: Graph,
    skeleton: Graph,
    bags: Vec<VertexSet>,
    labels: Vec<usize>,
) -> Result<(TreeDecomposition, WidthReport), TreedecError> {
    if !skeleton.is_tree() {
        return Err(TreedecError::SkeletonNotTree);
    }
    let m = skeleton.vertex_count();
    let images: Vec<VertexSet> =
        host.vertices().map(|x| VertexSet::from_vertices(m, (0..m).filter(|&y| bags[y].contains(x)))).collect();
    for (x, img) in images.iter().enumerate() {
        if img.is_empty() {
            return Err(TreedecError::EmptyImage(x));
        }
        if !skeleton.is_connected_or_empty(img) {
            return Err(TreedecError::DisconnectedImage(x));
        }
    }
    if let Some((u, v)) = host.edges().find(|&(u, v)| images[u].is_disjoint(&images[v])) {
        return Err(TreedecError::UncoveredEdge(u, v));
    }
    let td = TreeDecomposition { host, skeleton, images, bags, labels };
    let report = td.width_report();
    Ok((td, report))
}

impl TreeDecomposition {
    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn skeleton(&self) -> &Graph {
        &self.skeleton
    }

    /// `F(x)`
    pub fn image(&self, x: Vertex) -> &VertexSet {
        &self.images[x]
    }

    /// `F⁻¹(y)`
    pub fn bag(&self, y: usize) -> &VertexSet {
        &self.bags[y]
    }

    pub fn node_count(&self) -> usize {
        self.skeleton.vertex_count()
    }

    /// Original id of skeleton node `y`.
    pub fn label(&self, y: usize) -> usize {
        self.labels[y]
    }

    pub fn width_report(&self) -> WidthReport {
        let bag_sizes: Vec<usize> = self.bags.iter().map(VertexSet::len).collect();
        let width = bag_sizes.iter().copied().max().unwrap_or(0).saturating_sub(1);
        WidthReport { width, bag_sizes }
    }

    pub fn width(&self) -> usize {
        self.width_report().width
    }

    pub fn to_raw(&self) -> RawTreeDecomposition {
        RawTreeDecomposition {
            skeleton_edges: self.skeleton.edges().collect(),
            bags: self.bags.iter().map(VertexSet::to_vec).collect(),
        }
    }

    fn with_images(&self, images: &[VertexSet], keep: &VertexSet) -> Result<TreeDecomposition, TreedecError> {
        let (skeleton, old) = self.skeleton.induced_subgraph(keep);
        let n = self.host.vertex_count();
        let bags: Vec<VertexSet> =
            old.iter().map(|&y| VertexSet::from_vertices(n, (0..n).filter(|&x| images[x].contains(y)))).collect();
        let labels = old.iter().map(|&y| self.labels[y]).collect();
        Ok(build(self.host.clone(), skeleton, bags, labels)?.0)
    }

    /// `cone_y y'` in the skeleton: the component of `Y ∖ {y}` holding `y'`.
    fn skeleton_cone(&self, y: usize, y2: usize) -> VertexSet {
        let m = self.node_count();
        let mut rest = VertexSet::full(m);
        rest.remove(y);
        self.skeleton
            .components(&rest)
            .expect("sizes match")
            .into_iter()
            .find(|c| c.contains(y2))
            .expect("neighbor lies in some component")
    }

    fn preimage(&self, nodes: &VertexSet) -> VertexSet {
        let mut out = VertexSet::empty(self.host.vertex_count());
        for y in nodes.iter() {
            out.union_with(&self.bags[y]);
        }
        out
    }

    /// Replaces each `F(x)`, in ascending `x`, by the skeleton hull of one
    /// chosen point `z_y ∈ F(x) ∩ F(y)` (least id) per `y ∈ Ball_1(x)`.
    pub fn shrink_bags(&self) -> Result<TreeDecomposition, TreedecError> {
        let tree = MedianGraph::from_trusted(self.skeleton.clone()).map_err(|_| TreedecError::SkeletonNotTree)?;
        let m = self.node_count();
        let mut images = self.images.clone();
        for x in self.host.vertices() {
            let chosen = std::iter::once(x)
                .chain(self.host.neighbors(x).iter().copied())
                .map(|y| images[x].intersection(&images[y]).first().expect("decomposition covers every edge"));
            let required = VertexSet::from_vertices(m, chosen);
            images[x] = tree.convex_hull(&required);
        }
        self.with_images(&images, &VertexSet::full(m))
    }

    /// Repeatedly removes a skeleton cone `cone_y y'` whose bags all lie in
    /// the bag of `y`, projecting images onto the remaining subtree.
    pub fn prune_skeleton(&self) -> Result<TreeDecomposition, TreedecError> {
        let mut td = self.clone();
        'outer: loop {
            for y in 0..td.node_count() {
                for &y2 in td.skeleton.neighbors(y) {
                    let cone = td.skeleton_cone(y, y2);
                    if td.preimage(&cone).is_subset(&td.bags[y]) {
                        let images: Vec<VertexSet> = td
                            .images
                            .iter()
                            .map(|img| {
                                let mut kept = img.difference(&cone);
                                if kept.is_empty() {
                                    kept.insert(y);
                                }
                                kept
                            })
                            .collect();
                        td = td.with_images(&images, &cone.complement())?;
                        continue 'outer;
                    }
                }
            }
            return Ok(td);
        }
    }

    /// Checks `X ∖ F⁻¹(y) = ⊔_{y' ~ y} (F⁻¹(cone_y y') ∖ F⁻¹(y))` at every node.
    pub fn check_partition_law(&self) -> Result<(), TreedecError> {
        let n = self.host.vertex_count();
        for y in 0..self.node_count() {
            let outside = self.bags[y].complement();
            let mut covered = VertexSet::empty(n);
            for &y2 in self.skeleton.neighbors(y) {
                let part = self.preimage(&self.skeleton_cone(y, y2)).difference(&self.bags[y]);
                if !covered.is_disjoint(&part) {
                    return Err(TreedecError::PartitionLaw(y));
                }
                covered.union_with(&part);
            }
            if covered != outside {
                return Err(TreedecError::PartitionLaw(y));
            }
        }
        Ok(())
    }

    /// Components of `X ∖ F⁻¹(y)` for every node `y`; each has its outer
    /// boundary inside `F⁻¹(y)`.
    pub fn cuts(&self, complement_closed: bool) -> Result<CutFamily, TreedecError> {
        let mut sides = Vec::new();
        for y in 0..self.node_count() {
            for side in self.host.components(&self.bags[y].complement())? {
                let b = self.host.boundaries(&side)?;
                if !b.outer_vertices.is_subset(&self.bags[y]) {
                    return Err(TreedecError::CutBoundary(y));
                }
                sides.push(side);
            }
        }
        let family = CutFamily::from_sides(&self.host, sides, Provenance::Treedec)?;
        Ok(if complement_closed { family.complement_closure(&self.host)? } else { family })
    }
}

/// A valid decomposition from a min-degree elimination ordering.
///
/// Node `i` holds the `i`-th eliminated vertex with its neighbors at that
/// time; its parent is the node of the earliest later-eliminated neighbor.
/// Roots of separate components are chained together.
pub fn heuristic_treedec(g: &Graph) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        let raw = RawTreeDecomposition { skeleton_edges: vec![], bags: vec![vec![]] };
        return validate(g, &raw).expect("empty host").0;
    }
    let mut adj: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut bags = Vec::with_capacity(n);
    let mut neighborhoods = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (adj[v].len(), v)).expect("vertices remain");
        let nb: Vec<Vertex> = adj[v].iter().copied().collect();
        for &a in &nb {
            adj[a].remove(&v);
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        alive[v] = false;
        order.push(v);
        bags.push(std::iter::once(v).chain(nb.iter().copied()).collect::<Vec<_>>());
        neighborhoods.push(nb);
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, nb) in neighborhoods.iter().enumerate() {
        match nb.iter().map(|&u| position[u]).min() {
            Some(p) => edges.push((i, p)),
            None => roots.push(i),
        }
    }
    edges.extend(roots.windows(2).map(|w| (w[0], w[1])));
    let raw = RawTreeDecomposition { skeleton_edges: edges, bags };
    validate(g, &raw).expect("elimination orderings give valid decompositions").0
}
