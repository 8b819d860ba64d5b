//! Cuts and cut families: radial cuts, boundary filters, the flip-flip
//! connectification and finite witnessing reports.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{BoundaryBundle, Edge, Graph, GraphError, Vertex, VertexSet};

/// Default vertex limit for [`brute_force_cuts`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutError {
    #[error("family is not closed under complement")]
    NotComplementClosed,
    #[error("graph must be connected")]
    Disconnected,
    #[error("graph has {0} vertices, above the limit of {1}")]
    TooLarge(usize, usize),
    #[error("connectified cut {0:?} has edge boundary outside its source cut")]
    BoundaryNotContained(Vec<Vertex>),
    #[error("connectified cut {0:?} has a disconnected side")]
    NotConnected(Vec<Vertex>),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A vertex set with its boundary data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub side: VertexSet,
    pub boundary: BoundaryBundle,
    /// `diam(∂_v)`; `None` when the boundary spans several components.
    pub diameter: Option<u32>,
    pub inner_count: usize,
    pub outer_count: usize,
}

impl Cut {
    pub fn new(g: &Graph, side: VertexSet) -> Result<Self, GraphError> {
        let boundary = g.boundaries(&side)?;
        let all = boundary.vertices();
        let diameter = if all.is_empty() { Some(0) } else { g.set_diameter(&all) };
        let inner_count = boundary.inner_vertices.len();
        let outer_count = boundary.outer_vertices.len();
        Ok(Cut { side, boundary, diameter, inner_count, outer_count })
    }

    pub fn is_trivial(&self) -> bool {
        self.side.is_empty() || self.side.is_full()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Radial,
    Diam,
    Card,
    Treedec,
    Custom,
    Connectified,
    BruteForce,
}

/// Which boundary count [`CutFamily::filter_card`] bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CardMode {
    /// `min(|∂_iv|, |∂_ov|)`
    #[default]
    Min,
    Outer,
    Inner,
}

/// Cuts over one graph, deduplicated, in first-seen order.
#[derive(Debug, Clone)]
pub struct CutFamily {
    pub cuts: Vec<Cut>,
    pub provenance: Provenance,
    pub complement_closed: bool,
}

impl CutFamily {
    /// Builds a family from sides, dropping duplicates. The complement-closed
    /// flag is computed.
    pub fn from_sides(
        g: &Graph,
        sides: impl IntoIterator<Item = VertexSet>,
        provenance: Provenance,
    ) -> Result<Self, CutError> {
        let mut seen = HashSet::new();
        let mut cuts = Vec::new();
        for s in sides {
            if seen.insert(s.clone()) {
                cuts.push(Cut::new(g, s)?);
            }
        }
        let complement_closed = cuts.iter().all(|c| seen.contains(&c.side.complement()));
        Ok(CutFamily { cuts, provenance, complement_closed })
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn sides(&self) -> impl Iterator<Item = &VertexSet> {
        self.cuts.iter().map(|c| &c.side)
    }

    pub fn contains(&self, side: &VertexSet) -> bool {
        self.cuts.iter().any(|c| &c.side == side)
    }

    /// Adds the complement of every member.
    pub fn complement_closure(&self, g: &Graph) -> Result<Self, CutError> {
        let sides: Vec<VertexSet> = self.cuts.iter().flat_map(|c| [c.side.clone(), c.side.complement()]).collect();
        CutFamily::from_sides(g, sides, self.provenance)
    }

    fn filtered(&self, keep: impl Fn(&Cut) -> bool, provenance: Provenance) -> Self {
        let cuts: Vec<Cut> = self.cuts.iter().filter(|c| keep(c)).cloned().collect();
        let sides: HashSet<&VertexSet> = cuts.iter().map(|c| &c.side).collect();
        let complement_closed = cuts.iter().all(|c| sides.contains(&c.side.complement()));
        CutFamily { cuts, provenance, complement_closed }
    }

    /// Cuts with `diam(∂_v) ≤ r`.
    pub fn filter_diam(&self, r: u32) -> Self {
        self.filtered(|c| c.diameter.is_some_and(|d| d <= r), Provenance::Diam)
    }

    /// Cuts whose boundary count (per `mode`) is at most `n`.
    pub fn filter_card(&self, n: usize, mode: CardMode) -> Self {
        self.filtered(
            |c| match mode {
                CardMode::Min => c.inner_count.min(c.outer_count) <= n,
                CardMode::Outer => c.outer_count <= n,
                CardMode::Inner => c.inner_count <= n,
            },
            Provenance::Card,
        )
    }

    /// Cuts whose side and complement are both connected or empty.
    pub fn filter_connected(&self, g: &Graph) -> Self {
        self.filtered(
            |c| g.is_connected_or_empty(&c.side) && g.is_connected_or_empty(&c.side.complement()),
            self.provenance,
        )
    }
}

/// The components of `¬Ball_radius(center)`.
pub fn radial_cuts(g: &Graph, center: Vertex, radius: u32) -> Result<Vec<Cut>, CutError> {
    g.check_vertex(center)?;
    let ball = g.ball(&VertexSet::singleton(g.vertex_count(), center), radius);
    let pieces = g.components(&ball.complement())?;
    Ok(pieces.into_iter().map(|s| Cut::new(g, s)).collect::<Result<_, _>>()?)
}

/// Radial cuts over every center and every radius below its eccentricity.
pub fn all_radial_cuts(g: &Graph, complement_closed: bool) -> Result<CutFamily, CutError> {
    let mut sides = Vec::new();
    for c in g.vertices() {
        let d = g.bfs_distances(c)?;
        let ecc = d.iter().flatten().copied().max().unwrap_or(0);
        let unreachable = d.iter().any(Option::is_none);
        let top = if unreachable { ecc + 1 } else { ecc };
        for r in 0..top {
            sides.extend(radial_cuts(g, c, r)?.into_iter().map(|cut| cut.side));
        }
    }
    let family = CutFamily::from_sides(g, sides, Provenance::Radial)?;
    if complement_closed {
        family.complement_closure(g)
    } else {
        Ok(family)
    }
}

fn edge_set(b: &BoundaryBundle) -> HashSet<Edge> {
    b.in_edges.iter().copied().collect()
}

/// Flip-flip connectification: `{¬D | H ∈ f, C ∈ comp(H), D ∈ comp(¬C)}`.
///
/// Every output side and its complement are connected, and the inward edge
/// boundary of each output lies inside that of the input it came from.
/// Trivial input cuts are passed through unchanged.
pub fn connectify(g: &Graph, f: &CutFamily) -> Result<CutFamily, CutError> {
    if !f.complement_closed {
        return Err(CutError::NotComplementClosed);
    }
    if !g.is_connected() {
        return Err(CutError::Disconnected);
    }
    let mut sides: Vec<VertexSet> = Vec::new();
    let mut checks: Vec<(VertexSet, usize)> = Vec::new();
    for (i, h) in f.cuts.iter().enumerate() {
        if h.is_trivial() {
            sides.push(h.side.clone());
            continue;
        }
        for c in g.components(&h.side)? {
            for d in g.components(&c.complement())? {
                let out = d.complement();
                checks.push((out.clone(), i));
                sides.push(out);
            }
        }
    }
    for (side, i) in &checks {
        let b = g.boundaries(side)?;
        if !g.is_connected_or_empty(side) || !g.is_connected_or_empty(&side.complement()) {
            return Err(CutError::NotConnected(side.to_vec()));
        }
        let source = edge_set(&f.cuts[*i].boundary);
        if !b.in_edges.iter().all(|e| source.contains(e)) {
            return Err(CutError::BoundaryNotContained(side.to_vec()));
        }
    }
    CutFamily::from_sides(g, sides, Provenance::Connectified)
}

/// Per-vertex count of family members whose vertex boundary contains it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinitenessReport {
    pub per_vertex: Vec<usize>,
    pub max: usize,
}

pub fn walling_finiteness_check(g: &Graph, f: &CutFamily) -> FinitenessReport {
    let mut per_vertex = vec![0; g.vertex_count()];
    for c in &f.cuts {
        for v in c.boundary.vertices().iter() {
            per_vertex[v] += 1;
        }
    }
    let max = per_vertex.iter().copied().max().unwrap_or(0);
    FinitenessReport { per_vertex, max }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuccessorDistanceReport {
    /// Number of (cut, successor) pairs among nontrivial members.
    pub pairs: usize,
    /// Max `d(∂_v H, ∂_v K)` over those pairs.
    pub max_distance: Option<u32>,
}

/// Boundary distances between each nontrivial member and its successors in
/// the family's inclusion order.
pub fn successor_distance_report(g: &Graph, f: &CutFamily) -> SuccessorDistanceReport {
    let cuts: Vec<&Cut> = f.cuts.iter().filter(|c| !c.is_trivial()).collect();
    let mut pairs = 0;
    let mut max_distance = None;
    for h in &cuts {
        let above: Vec<&&Cut> = cuts.iter().filter(|k| k.side != h.side && h.side.is_subset(&k.side)).collect();
        for k in &above {
            let between = above.iter().any(|l| l.side != k.side && l.side.is_subset(&k.side));
            if between {
                continue;
            }
            pairs += 1;
            let d = g.set_distance(&h.boundary.vertices(), &k.boundary.vertices());
            max_distance = max_distance.max(d);
        }
    }
    SuccessorDistanceReport { pairs, max_distance }
}

/// Every subset whose both sides are connected or empty (exhaustive oracle).
pub fn brute_force_cuts(g: &Graph, max_vertices: usize) -> Result<CutFamily, CutError> {
    let n = g.vertex_count();
    if n > max_vertices {
        return Err(CutError::TooLarge(n, max_vertices));
    }
    let mut sides = Vec::new();
    for mask in 0u64..1 << n {
        let side = VertexSet::from_vertices(n, (0..n).filter(|&v| mask >> v & 1 == 1));
        if g.is_connected_or_empty(&side) && g.is_connected_or_empty(&side.complement()) {
            sides.push(side);
        }
    }
    CutFamily::from_sides(g, sides, Provenance::BruteForce)
}
