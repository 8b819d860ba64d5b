//! Hyperplanes and half-spaces of a median graph.
//!
//! Edges are grouped into hyperplanes by the equivalence generated by
//! opposite sides of 4-cycles. Each class is the inward edge boundary of the
//! cone `cone_x y` of any member edge `(x, y)`; that cone and its complement
//! are the two half-spaces of the hyperplane.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{BoundaryBundle, Convexity, Edge, Graph, GraphError, Vertex, VertexSet};
use crate::median::MedianGraph;

/// Index into [`Hyperplanes::halfspaces`].
pub type HalfSpaceId = usize;
/// Index of an unoriented hyperplane (a complement pair of half-spaces).
pub type HyperplaneId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperplaneError {
    #[error("edge class of ({0}, {1}) is not the boundary of its cone; input is not median")]
    Inconsistent(Vertex, Vertex),
    #[error("half-spaces {0} and {1} are nested")]
    Nested(HalfSpaceId, HalfSpaceId),
    #[error("half-space id {0} out of range")]
    UnknownHalfSpace(HalfSpaceId),
    #[error("sets are not disjoint")]
    NotDisjoint,
    #[error("set is empty")]
    EmptySet,
    #[error("set is not convex: {2} lies between {0} and {1}")]
    NotConvex(Vertex, Vertex, Vertex),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A nontrivial half-space: a convex vertex set with convex complement.
#[derive(Debug, Clone)]
pub struct HalfSpace {
    pub id: HalfSpaceId,
    pub hyperplane: HyperplaneId,
    pub complement: HalfSpaceId,
    pub side: VertexSet,
    pub boundary: BoundaryBundle,
}

impl HalfSpace {
    /// `∂_ie H`: the oriented hyperplane, edges pointing into the side.
    pub fn inward_edges(&self) -> &[Edge] {
        &self.boundary.in_edges
    }
}

/// One oriented hyperplane: all edges crossing it, oriented into `halfspace`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperplaneClass {
    pub halfspace: HalfSpaceId,
    pub edges: Vec<Edge>,
}

/// The four corners `H∩K, H∩¬K, ¬H∩K, ¬H∩¬K`.
pub type Corners = [VertexSet; 4];

/// The adjacency graph on unoriented hyperplanes.
#[derive(Debug, Clone)]
pub struct HyperplaneAdjacency {
    pub graph: Graph,
}

/// All half-spaces of a median graph and their relations.
#[derive(Debug, Clone)]
pub struct Hyperplanes<'g> {
    graph: &'g MedianGraph,
    halfspaces: Vec<HalfSpace>,
    /// Per hyperplane: `[h, ¬h]` with `h` the lower id.
    pairs: Vec<[HalfSpaceId; 2]>,
    /// Oriented edge `(x, y)` ↦ the half-space containing `y` but not `x`.
    edge_halfspace: HashMap<Edge, HalfSpaceId>,
    /// Per vertex: which half-spaces contain it.
    signatures: Vec<FixedBitSet>,
}

impl<'g> Hyperplanes<'g> {
    /// Enumerates hyperplanes by union-find over opposite sides of squares.
    pub fn compute(graph: &'g MedianGraph) -> Result<Self, HyperplaneError> {
        let g = graph.graph();
        let n = g.vertex_count();
        let edges: Vec<Edge> = g.edges().collect();
        let edge_index: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let eid = |u: Vertex, v: Vertex| edge_index[&(u.min(v), u.max(v))];

        let mut uf = UnionFind::<usize>::new(edges.len());
        for v in g.vertices() {
            let ns = g.neighbors(v);
            for (i, &a) in ns.iter().enumerate() {
                for &b in &ns[i + 1..] {
                    // fourth corners w of squares v-a-w-b
                    for &w in g.neighbors(a) {
                        if w != v && g.has_edge(b, w) {
                            uf.union(eid(v, a), eid(b, w));
                            uf.union(eid(v, b), eid(a, w));
                        }
                    }
                }
            }
        }

        let mut classes: HashMap<usize, Vec<Edge>> = HashMap::new();
        for (i, &e) in edges.iter().enumerate() {
            classes.entry(uf.find(i)).or_default().push(e);
        }
        // edges are already sorted, so class[0] is the least member
        let mut classes: Vec<Vec<Edge>> = classes.into_values().collect();
        classes.sort_unstable_by_key(|c| c[0]);

        let mut raw: Vec<(VertexSet, HyperplaneId)> = Vec::with_capacity(2 * classes.len());
        for (hp, class) in classes.iter().enumerate() {
            let (u, v) = class[0];
            let du = g.bfs_distances(u)?;
            let dv = g.bfs_distances(v)?;
            let side = VertexSet::from_vertices(n, (0..n).filter(|&z| dv[z] < du[z]));
            let crossing = class.iter().all(|&(a, b)| side.contains(a) != side.contains(b));
            let boundary_size: usize =
                side.iter().map(|a| g.neighbors(a).iter().filter(|&&b| !side.contains(b)).count()).sum();
            if !crossing || boundary_size != class.len() {
                return Err(HyperplaneError::Inconsistent(u, v));
            }
            let other = side.complement();
            raw.push((side, hp));
            raw.push((other, hp));
        }

        let mut built: Vec<(Edge, VertexSet, HyperplaneId, BoundaryBundle)> = raw
            .into_iter()
            .map(|(side, hp)| {
                let boundary = g.boundaries(&side).expect("sizes match");
                (boundary.in_edges[0], side, hp, boundary)
            })
            .collect();
        built.sort_unstable_by_key(|b| b.0);

        let mut pairs = vec![[usize::MAX; 2]; classes.len()];
        let mut halfspaces = Vec::with_capacity(built.len());
        for (id, (_, side, hp, boundary)) in built.into_iter().enumerate() {
            let slot = if pairs[hp][0] == usize::MAX { 0 } else { 1 };
            pairs[hp][slot] = id;
            halfspaces.push(HalfSpace { id, hyperplane: hp, complement: usize::MAX, side, boundary });
        }
        for [a, b] in &pairs {
            halfspaces[*a].complement = *b;
            halfspaces[*b].complement = *a;
        }

        let mut edge_halfspace = HashMap::with_capacity(2 * edges.len());
        for h in &halfspaces {
            for &e in h.inward_edges() {
                edge_halfspace.insert(e, h.id);
            }
        }
        let mut signatures = vec![FixedBitSet::with_capacity(halfspaces.len()); n];
        for h in &halfspaces {
            for v in h.side.iter() {
                signatures[v].insert(h.id);
            }
        }
        Ok(Hyperplanes { graph, halfspaces, pairs, edge_halfspace, signatures })
    }

    pub fn median_graph(&self) -> &'g MedianGraph {
        self.graph
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph.graph()
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn halfspace(&self, id: HalfSpaceId) -> &HalfSpace {
        &self.halfspaces[id]
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn hyperplane_count(&self) -> usize {
        self.pairs.len()
    }

    /// The two half-spaces of an unoriented hyperplane, lower id first.
    pub fn hyperplane(&self, hp: HyperplaneId) -> [HalfSpaceId; 2] {
        self.pairs[hp]
    }

    /// Oriented classes, one per half-space, in half-space id order.
    pub fn classes(&self) -> Vec<HyperplaneClass> {
        self.halfspaces
            .iter()
            .map(|h| HyperplaneClass { halfspace: h.id, edges: h.boundary.in_edges.clone() })
            .collect()
    }

    /// Unoriented edge lists per hyperplane.
    pub fn unoriented_classes(&self) -> Vec<Vec<Edge>> {
        self.pairs
            .iter()
            .map(|&[h, _]| {
                let mut es: Vec<Edge> =
                    self.halfspaces[h].inward_edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
                es.sort_unstable();
                es
            })
            .collect()
    }

    /// `cone_x y`: the half-space containing `y` but not `x`, for an edge `(x, y)`.
    pub fn halfspace_of_edge(&self, x: Vertex, y: Vertex) -> Option<HalfSpaceId> {
        self.edge_halfspace.get(&(x, y)).copied()
    }

    /// Membership bitset of `v` over half-space ids.
    pub fn signature(&self, v: Vertex) -> &FixedBitSet {
        &self.signatures[v]
    }

    /// Half-space sides, optionally preceded by the trivial pair `∅, X`.
    pub fn sides(&self, include_trivial: bool) -> Vec<VertexSet> {
        let n = self.graph().vertex_count();
        let trivial = include_trivial.then(|| [VertexSet::empty(n), VertexSet::full(n)]);
        trivial.into_iter().flatten().chain(self.halfspaces.iter().map(|h| h.side.clone())).collect()
    }

    fn check_id(&self, h: HalfSpaceId) -> Result<(), HyperplaneError> {
        if h < self.halfspaces.len() {
            Ok(())
        } else {
            Err(HyperplaneError::UnknownHalfSpace(h))
        }
    }

    pub fn corners(&self, h: HalfSpaceId, k: HalfSpaceId) -> Result<Corners, HyperplaneError> {
        self.check_id(h)?;
        self.check_id(k)?;
        let (hs, ks) = (&self.halfspaces[h].side, &self.halfspaces[k].side);
        let (nh, nk) = (hs.complement(), ks.complement());
        Ok([hs.intersection(ks), hs.intersection(&nk), nh.intersection(ks), nh.intersection(&nk)])
    }

    /// Nested iff some corner is empty.
    pub fn nested(&self, h: HalfSpaceId, k: HalfSpaceId) -> Result<bool, HyperplaneError> {
        Ok(self.corners(h, k)?.iter().any(VertexSet::is_empty))
    }

    fn nested_unchecked(&self, h: HalfSpaceId, k: HalfSpaceId) -> bool {
        let (hs, ks) = (self.halfspaces[h].side.bits(), self.halfspaces[k].side.bits());
        let n = self.graph().vertex_count();
        let hk = hs.intersection_count(ks);
        let (h_len, k_len) = (hs.count_ones(..), ks.count_ones(..));
        // |H∩K|, |H∖K|, |K∖H|, |¬H∩¬K|
        hk == 0 || hk == h_len || hk == k_len || h_len + k_len - hk == n
    }

    /// All half-spaces pairwise nested (equivalently, the graph is a tree).
    pub fn all_pairwise_nested(&self) -> bool {
        (0..self.len()).all(|h| (h + 1..self.len()).all(|k| self.nested_unchecked(h, k)))
    }

    /// Embeds the Hamming cube `{0,1}^n` for pairwise non-nested half-spaces.
    ///
    /// Entry `mask` is the vertex `x_a` with `a_i = (mask >> i) & 1`, lying in
    /// `H_i` when `a_i = 0` and in `¬H_i` when `a_i = 1`. Starting from the
    /// least vertex of `¬H_0 ∩ ⋯`, a base corner is projected into `H_0 ∩ ⋯`,
    /// and every other corner is the projection of that base onto its corner
    /// intersection. The output is verified to be isometric.
    pub fn cube_embedding(&self, hs: &[HalfSpaceId]) -> Result<Vec<Vertex>, HyperplaneError> {
        for &h in hs {
            self.check_id(h)?;
        }
        for (i, &h) in hs.iter().enumerate() {
            for &k in &hs[i + 1..] {
                if self.nested_unchecked(h, k) {
                    return Err(HyperplaneError::Nested(h, k));
                }
            }
        }
        let g = self.graph;
        let n = g.vertex_count();
        let corner = |mask: usize| {
            let mut set = VertexSet::full(n);
            for (i, &h) in hs.iter().enumerate() {
                let hid = if mask >> i & 1 == 0 { h } else { self.halfspaces[h].complement };
                set.intersect_with(&self.halfspaces[hid].side);
            }
            set
        };
        let all_ones = (1usize << hs.len()) - 1;
        let start = corner(all_ones)
            .first()
            .ok_or_else(|| HyperplaneError::Internal("empty corner of non-nested family".into()))?;
        let base = g.gate_projection(&corner(0), start).map_err(|e| HyperplaneError::Internal(e.to_string()))?;
        let mut image = Vec::with_capacity(all_ones + 1);
        for mask in 0..=all_ones {
            let target = corner(mask);
            let v = g.gate_projection(&target, base).map_err(|e| HyperplaneError::Internal(e.to_string()))?;
            image.push(v);
        }
        let d = g.graph().distances();
        for a in 0..=all_ones {
            for b in a + 1..=all_ones {
                if d.get(image[a], image[b]) != Some((a ^ b).count_ones()) {
                    return Err(HyperplaneError::Internal(format!(
                        "cube corners {a} and {b} are not at Hamming distance"
                    )));
                }
            }
        }
        Ok(image)
    }

    /// Successors of `h`: minimal half-spaces strictly containing it, found by
    /// the boundary test `K ⊇ H` and `∂_iv K ∩ ∂_ov H ≠ ∅`.
    pub fn successors(&self, h: HalfSpaceId) -> Result<Vec<HalfSpaceId>, HyperplaneError> {
        self.check_id(h)?;
        let hh = &self.halfspaces[h];
        Ok(self
            .halfspaces
            .iter()
            .filter(|k| {
                k.id != h
                    && hh.side.is_subset(&k.side)
                    && !k.boundary.inner_vertices.is_disjoint(&hh.boundary.outer_vertices)
            })
            .map(|k| k.id)
            .collect())
    }

    /// Successors by definition: `K ⊋ H` with no half-space strictly between.
    pub fn successors_by_order(&self, h: HalfSpaceId) -> Result<Vec<HalfSpaceId>, HyperplaneError> {
        self.check_id(h)?;
        let side = |i: HalfSpaceId| &self.halfspaces[i].side;
        let above: Vec<HalfSpaceId> =
            (0..self.len()).filter(|&k| k != h && side(h).is_subset(side(k)) && side(h) != side(k)).collect();
        Ok(above.iter().copied().filter(|&k| !above.iter().any(|&l| l != k && side(l).is_subset(side(k)))).collect())
    }

    /// Hyperplane adjacency, computed from the order-theoretic disjunction
    /// (non-nested, or a successor relation among orientations) and
    /// cross-checked against vertex-boundary intersection.
    pub fn adjacency(&self) -> Result<HyperplaneAdjacency, HyperplaneError> {
        let m = self.pairs.len();
        let succ: Vec<Vec<HalfSpaceId>> = (0..self.len()).map(|h| self.successors(h)).collect::<Result<_, _>>()?;
        let boundary: Vec<VertexSet> =
            self.pairs.iter().map(|&[h, _]| self.halfspaces[h].boundary.vertices()).collect();
        let mut edges = Vec::new();
        for p in 0..m {
            for q in p + 1..m {
                let [h, nh] = self.pairs[p];
                let [k, nk] = self.pairs[q];
                let order_route = !self.nested_unchecked(h, k)
                    || [h, nh].iter().any(|&a| [k, nk].iter().any(|&b| succ[a].contains(&b) || succ[b].contains(&a)));
                let boundary_route = !boundary[p].is_disjoint(&boundary[q]);
                if order_route != boundary_route {
                    return Err(HyperplaneError::Internal(format!(
                        "adjacency routes disagree on hyperplanes {p} and {q}"
                    )));
                }
                if order_route {
                    edges.push((p, q));
                }
            }
        }
        Ok(HyperplaneAdjacency { graph: Graph::from_edges(m, edges)? })
    }

    /// Half-spaces containing `y` but not `x`.
    pub fn separating(&self, x: Vertex, y: Vertex) -> Result<Vec<HalfSpaceId>, HyperplaneError> {
        self.graph().check_vertex(x)?;
        self.graph().check_vertex(y)?;
        let mut sep = self.signatures[y].clone();
        sep.difference_with(&self.signatures[x]);
        Ok(sep.ones().collect())
    }

    /// Number of half-spaces containing `y` but not `x`.
    pub fn separating_count(&self, x: Vertex, y: Vertex) -> usize {
        self.signatures[y].difference_count(&self.signatures[x])
    }

    /// A half-space `H` with `A ⊆ H ⊆ ¬B` for disjoint nonempty convex sets,
    /// taken as `cone_{x1} x0` along the lexicographically least shortest
    /// `A`–`B` geodesic `x0, x1, …`.
    pub fn separate_convex(&self, a: &VertexSet, b: &VertexSet) -> Result<HalfSpaceId, HyperplaneError> {
        let g = self.graph();
        g.check_set(a)?;
        g.check_set(b)?;
        if a.is_empty() || b.is_empty() {
            return Err(HyperplaneError::EmptySet);
        }
        if !a.is_disjoint(b) {
            return Err(HyperplaneError::NotDisjoint);
        }
        for set in [a, b] {
            if let Convexity::NotConvex { x, y, z } = g.is_convex(set)? {
                return Err(HyperplaneError::NotConvex(x, y, z));
            }
        }
        let dist = g.distances_from_set(a);
        let end = b.iter().min_by_key(|&v| (dist[v], v)).expect("nonempty");
        // walk back towards A, preferring least ids
        let mut path = vec![end];
        let mut cur = end;
        while dist[cur] != Some(0) {
            let want = dist[cur].map(|d| d - 1);
            cur = *g.neighbors(cur).iter().find(|&&w| dist[w] == want).expect("BFS predecessor");
            path.push(cur);
        }
        let x0 = path[path.len() - 1];
        let x1 = path[path.len() - 2];
        let h = self.halfspace_of_edge(x1, x0).expect("every edge lies on a hyperplane");
        let side = &self.halfspaces[h].side;
        if !a.is_subset(side) || !side.is_disjoint(b) {
            return Err(HyperplaneError::Internal("separating half-space does not separate".into()));
        }
        Ok(h)
    }

    /// `diam(∂_v H)` in the graph metric.
    pub fn boundary_diameter(&self, h: HalfSpaceId) -> u32 {
        self.graph().set_diameter(&self.halfspaces[h].boundary.vertices()).expect("connected")
    }

    /// Largest hyperplane boundary diameter (0 when there are no hyperplanes).
    pub fn max_boundary_diameter(&self) -> u32 {
        self.pairs.iter().map(|&[h, _]| self.boundary_diameter(h)).max().unwrap_or(0)
    }
}
