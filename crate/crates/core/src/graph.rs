//! Finite simple undirected graphs over dense vertex ids, with the metric
//! notions everything else is built on: BFS distances, intervals,
//! convexity, boundaries and induced components.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense vertex identifier, `0..vertex_count`.
pub type Vertex = usize;

/// An ordered vertex pair. Undirected edges are reported as `(min, max)`.
pub type Edge = (Vertex, Vertex);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (graph has {vertex_count} vertices)")]
    InvalidVertex { vertex: usize, vertex_count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertices {0} and {1} lie in different components")]
    Disconnected(Vertex, Vertex),
    #[error("vertex set has capacity {found}, expected {expected}")]
    SetSizeMismatch { expected: usize, found: usize },
    #[error("metric table is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("metric table is asymmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("metric table has nonzero diagonal entry at {0}")]
    NonzeroDiagonal(usize),
    #[error("metric table has a negative or non-finite entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
}

/// A subset of the vertices of some graph, with bitset semantics.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet(bits)
    }

    pub fn singleton(n: usize, v: Vertex) -> Self {
        let mut s = Self::empty(n);
        s.insert(v);
        s
    }

    pub fn from_vertices<I: IntoIterator<Item = Vertex>>(n: usize, vertices: I) -> Self {
        let mut s = Self::empty(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    pub fn from_bits(bits: FixedBitSet) -> Self {
        VertexSet(bits)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.0
    }

    /// Size of the ground set.
    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.capacity()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(v)
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0.insert(v);
    }

    pub fn remove(&mut self, v: Vertex) {
        self.0.set(v, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.0.minimum()
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.0.clone();
        bits.toggle_range(..);
        VertexSet(bits)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut bits = self.0.clone();
        bits.union_with(&other.0);
        VertexSet(bits)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut bits = self.0.clone();
        bits.intersect_with(&other.0);
        VertexSet(bits)
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut bits = self.0.clone();
        bits.difference_with(&other.0);
        VertexSet(bits)
    }

    pub fn union_with(&mut self, other: &Self) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.0.intersect_with(&other.0);
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The inner/outer vertex boundaries and inward/outward edge boundaries of a
/// vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryBundle {
    pub inner_vertices: VertexSet,
    pub outer_vertices: VertexSet,
    /// Edges `(b, a)` with `b ∉ A`, `a ∈ A`, sorted.
    pub in_edges: Vec<Edge>,
    /// Edges `(a, b)` with `a ∈ A`, `b ∉ A`, sorted.
    pub out_edges: Vec<Edge>,
}

impl BoundaryBundle {
    /// `∂_v A = ∂_iv A ∪ ∂_ov A`.
    pub fn vertices(&self) -> VertexSet {
        self.inner_vertices.union(&self.outer_vertices)
    }
}

/// Result of a convexity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    /// `z` lies on a geodesic from `x` to `y` (both in the set) but not in the set.
    NotConvex {
        x: Vertex,
        y: Vertex,
        z: Vertex,
    },
}

impl Convexity {
    pub fn is_convex(&self) -> bool {
        matches!(self, Convexity::Convex)
    }
}

/// All-pairs shortest path lengths; `None` marks unreachable pairs.
#[derive(Debug, Clone)]
pub struct Distances {
    n: usize,
    table: Vec<u32>,
}

const UNREACHABLE: u32 = u32::MAX;

impl Distances {
    pub fn get(&self, u: Vertex, v: Vertex) -> Option<u32> {
        match self.table[u * self.n + v] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    /// Raw row access; unreachable entries are `u32::MAX`.
    pub fn row(&self, u: Vertex) -> &[u32] {
        &self.table[u * self.n..(u + 1) * self.n]
    }
}

/// A finite simple undirected graph.
///
/// Immutable after construction. All-pairs distances are computed on first
/// use and shared by later queries.
#[derive(Serialize, Deserialize)]
#[serde(into = "GraphRepr", try_from = "GraphRepr")]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    edge_count: usize,
    distances: OnceLock<Distances>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { vertex_count: g.vertex_count(), edges: g.edges().collect() }
    }
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;
    fn try_from(r: GraphRepr) -> Result<Self, GraphError> {
        Graph::from_edges(r.vertex_count, r.edges)
    }
}

impl Clone for Graph {
    fn clone(&self) -> Self {
        Graph { adjacency: self.adjacency.clone(), edge_count: self.edge_count, distances: self.distances.clone() }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertex_count", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range ids.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut edge_count = 0;
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::InvalidVertex { vertex: w, vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            edge_count += 1;
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adjacency, edge_count, distances: OnceLock::new() })
    }

    /// Like [`Graph::from_edges`] but silently merges duplicate edges.
    pub fn from_edges_dedup<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut list: Vec<Edge> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        list.sort_unstable();
        list.dedup();
        Self::from_edges(vertex_count, list)
    }

    pub fn empty(vertex_count: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); vertex_count], edge_count: 0, distances: OnceLock::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Undirected edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex { vertex: v, vertex_count: self.vertex_count() })
        }
    }

    pub fn check_set(&self, set: &VertexSet) -> Result<(), GraphError> {
        if set.capacity() == self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::SetSizeMismatch { expected: self.vertex_count(), found: set.capacity() })
        }
    }

    /// Single-source BFS; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: Vertex) -> Result<Vec<Option<u32>>, GraphError> {
        self.check_vertex(source)?;
        Ok(self.bfs_raw(source).into_iter().map(|d| (d != UNREACHABLE).then_some(d)).collect())
    }

    fn bfs_raw(&self, source: Vertex) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &w in &self.adjacency[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS from a set of sources (multi-source distance to the set).
    pub fn distances_from_set(&self, sources: &VertexSet) -> Vec<Option<u32>> {
        let mut dist = vec![UNREACHABLE; self.vertex_count()];
        let mut queue: VecDeque<Vertex> = sources.iter().collect();
        for &s in &queue {
            dist[s] = 0;
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &w in &self.adjacency[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist.into_iter().map(|d| (d != UNREACHABLE).then_some(d)).collect()
    }

    /// The memoized all-pairs distance table.
    pub fn distances(&self) -> &Distances {
        self.distances.get_or_init(|| {
            let n = self.vertex_count();
            let mut table = Vec::with_capacity(n * n);
            for s in 0..n {
                table.extend(self.bfs_raw(s));
            }
            Distances { n, table }
        })
    }

    pub fn dist(&self, u: Vertex, v: Vertex) -> Option<u32> {
        self.distances().get(u, v)
    }

    /// `z` lies on some geodesic from `x` to `y`.
    pub fn is_between(&self, x: Vertex, z: Vertex, y: Vertex) -> bool {
        let d = self.distances();
        match (d.get(x, z), d.get(z, y), d.get(x, y)) {
            (Some(a), Some(b), Some(c)) => a + b == c,
            _ => false,
        }
    }

    /// The interval `[x, y]`: all vertices on geodesics between `x` and `y`.
    pub fn interval(&self, x: Vertex, y: Vertex) -> Result<VertexSet, GraphError> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let d = self.distances();
        let dxy = d.get(x, y).ok_or(GraphError::Disconnected(x, y))?;
        let (rx, ry) = (d.row(x), d.row(y));
        let n = self.vertex_count();
        Ok(VertexSet::from_vertices(
            n,
            (0..n).filter(|&z| rx[z] != UNREACHABLE && ry[z] != UNREACHABLE && rx[z] + ry[z] == dxy),
        ))
    }

    /// Tests whether every geodesic between two members stays in the set.
    /// The empty set is convex.
    pub fn is_convex(&self, set: &VertexSet) -> Result<Convexity, GraphError> {
        self.check_set(set)?;
        let d = self.distances();
        let members = set.to_vec();
        for (i, &x) in members.iter().enumerate() {
            let rx = d.row(x);
            for &y in &members[i + 1..] {
                let ry = d.row(y);
                // no geodesics between different components
                let Some(dxy) = d.get(x, y) else { continue };
                for z in self.vertices() {
                    if !set.contains(z) && rx[z] != UNREACHABLE && ry[z] != UNREACHABLE && rx[z] + ry[z] == dxy {
                        return Ok(Convexity::NotConvex { x, y, z });
                    }
                }
            }
        }
        Ok(Convexity::Convex)
    }

    pub fn boundaries(&self, set: &VertexSet) -> Result<BoundaryBundle, GraphError> {
        self.check_set(set)?;
        let n = self.vertex_count();
        let mut inner = VertexSet::empty(n);
        let mut outer = VertexSet::empty(n);
        let mut out_edges = Vec::new();
        for a in set.iter() {
            for &b in &self.adjacency[a] {
                if !set.contains(b) {
                    inner.insert(a);
                    outer.insert(b);
                    out_edges.push((a, b));
                }
            }
        }
        let mut in_edges: Vec<Edge> = out_edges.iter().map(|&(a, b)| (b, a)).collect();
        in_edges.sort_unstable();
        Ok(BoundaryBundle { inner_vertices: inner, outer_vertices: outer, in_edges, out_edges })
    }

    /// Connected pieces of the subgraph induced on `set`, ordered by least member.
    pub fn components(&self, set: &VertexSet) -> Result<Vec<VertexSet>, GraphError> {
        self.check_set(set)?;
        let n = self.vertex_count();
        let mut seen = VertexSet::empty(n);
        let mut pieces = Vec::new();
        for start in set.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut piece = VertexSet::empty(n);
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(u) = stack.pop() {
                piece.insert(u);
                for &w in &self.adjacency[u] {
                    if set.contains(w) && !seen.contains(w) {
                        seen.insert(w);
                        stack.push(w);
                    }
                }
            }
            pieces.push(piece);
        }
        Ok(pieces)
    }

    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components(&VertexSet::full(self.vertex_count())).expect("full set matches")
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.connected_components().len() == 1
    }

    /// Connected and acyclic. The empty graph is not a tree.
    pub fn is_tree(&self) -> bool {
        self.vertex_count() >= 1 && self.edge_count + 1 == self.vertex_count() && self.is_connected()
    }

    /// `set` is empty or induces a connected subgraph.
    pub fn is_connected_or_empty(&self, set: &VertexSet) -> bool {
        set.is_empty() || self.components(set).map(|c| c.len() == 1).unwrap_or(false)
    }

    /// `Ball_r(set)`: vertices within distance `r` of the set.
    pub fn ball(&self, set: &VertexSet, radius: u32) -> VertexSet {
        let d = self.distances_from_set(set);
        VertexSet::from_vertices(
            self.vertex_count(),
            d.iter().enumerate().filter(|(_, d)| matches!(d, Some(x) if *x <= radius)).map(|(v, _)| v),
        )
    }

    /// Largest pairwise distance inside `set`; `None` if two members are in
    /// different components. The empty set and singletons have diameter 0.
    pub fn set_diameter(&self, set: &VertexSet) -> Option<u32> {
        let d = self.distances();
        let members = set.to_vec();
        let mut best = 0;
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                best = best.max(d.get(x, y)?);
            }
        }
        Some(best)
    }

    /// Distance between two nonempty sets.
    pub fn set_distance(&self, a: &VertexSet, b: &VertexSet) -> Option<u32> {
        let d = self.distances_from_set(a);
        b.iter().filter_map(|v| d[v]).min()
    }

    /// Induced subgraph on `set`; returns the graph and the new→old vertex map.
    pub fn induced_subgraph(&self, set: &VertexSet) -> (Graph, Vec<Vertex>) {
        let old: Vec<Vertex> = set.to_vec();
        let mut new_of = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in old.iter().enumerate() {
            new_of[v] = i;
        }
        let edges =
            self.edges().filter(|&(u, v)| set.contains(u) && set.contains(v)).map(|(u, v)| (new_of[u], new_of[v]));
        let g = Graph::from_edges(old.len(), edges).expect("induced subgraph of a simple graph");
        (g, old)
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count();
        let edges = self.edges().chain(other.edges().map(|(u, v)| (u + shift, v + shift)));
        Graph::from_edges(shift + other.vertex_count(), edges).expect("disjoint union is simple")
    }

    /// Cartesian product; vertex `(a, b)` has id `a * other.vertex_count() + b`.
    pub fn cartesian_product(&self, other: &Graph) -> Graph {
        let m = other.vertex_count();
        let mut edges = Vec::new();
        for a in self.vertices() {
            for (b, b2) in other.edges() {
                edges.push((a * m + b, a * m + b2));
            }
        }
        for (a, a2) in self.edges() {
            for b in other.vertices() {
                edges.push((a * m + b, a2 * m + b));
            }
        }
        Graph::from_edges(self.vertex_count() * m, edges).expect("product of simple graphs")
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Graph {
        Graph::from_edges(self.vertex_count(), self.edges().map(|(u, v)| (perm[u], perm[v])))
            .expect("relabeling a simple graph")
    }
}

/// The distance-≤R graph on a finite metric table.
pub fn threshold_graph(table: &[Vec<f64>], radius: f64) -> Result<Graph, GraphError> {
    let n = table.len();
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(GraphError::NotSquare { rows: n, row: i, len: row.len() });
        }
    }
    for i in 0..n {
        if table[i][i] != 0.0 {
            return Err(GraphError::NonzeroDiagonal(i));
        }
        for j in 0..n {
            if !(table[i][j].is_finite() && table[i][j] >= 0.0) {
                return Err(GraphError::NegativeEntry(i, j));
            }
            if table[i][j] != table[j][i] {
                return Err(GraphError::Asymmetric(i.min(j), i.max(j)));
            }
        }
    }
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| table[i][j] <= radius);
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn grid3() -> Graph {
        let id = |x: usize, y: usize| y * 3 + x;
        let mut edges = Vec::new();
        for y in 0..3 {
            for x in 0..3 {
                if x + 1 < 3 {
                    edges.push((id(x, y), id(x + 1, y)));
                }
                if y + 1 < 3 {
                    edges.push((id(x, y), id(x, y + 1)));
                }
            }
        }
        Graph::from_edges(9, edges).unwrap()
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert_eq!(Graph::from_edges(2, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::from_edges(2, [(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(matches!(Graph::from_edges(2, [(0, 2)]), Err(GraphError::InvalidVertex { .. })));
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(path(3).bfs_distances(0).unwrap(), vec![Some(0), Some(1), Some(2)]);
        assert_eq!(Graph::empty(1).bfs_distances(0).unwrap(), vec![Some(0)]);
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(g.bfs_distances(0).unwrap()[2], None);
        assert!(g.bfs_distances(3).is_err());
    }

    #[test]
    fn interval_examples() {
        assert_eq!(path(3).interval(0, 2).unwrap().to_vec(), vec![0, 1, 2]);
        assert_eq!(cycle(4).interval(0, 2).unwrap().to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(cycle(4).interval(1, 1).unwrap().to_vec(), vec![1]);
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(g.interval(0, 2), Err(GraphError::Disconnected(0, 2)));
    }

    #[test]
    fn convexity_examples() {
        let c4 = cycle(4);
        assert!(c4.is_convex(&VertexSet::from_vertices(4, [0, 1])).unwrap().is_convex());
        assert_eq!(
            c4.is_convex(&VertexSet::from_vertices(4, [0, 2])).unwrap(),
            Convexity::NotConvex { x: 0, y: 2, z: 1 }
        );
        assert!(c4.is_convex(&VertexSet::empty(4)).unwrap().is_convex());
    }

    #[test]
    fn boundary_examples() {
        let p = path(3);
        let b = p.boundaries(&VertexSet::singleton(3, 0)).unwrap();
        assert_eq!(b.inner_vertices.to_vec(), vec![0]);
        assert_eq!(b.outer_vertices.to_vec(), vec![1]);
        assert_eq!(b.in_edges, vec![(1, 0)]);
        assert_eq!(b.out_edges, vec![(0, 1)]);

        let all = p.boundaries(&VertexSet::full(3)).unwrap();
        assert!(all.inner_vertices.is_empty() && all.outer_vertices.is_empty());
        assert!(all.in_edges.is_empty());

        let g = grid3();
        let left = VertexSet::from_vertices(9, [0, 3, 6]);
        let b = g.boundaries(&left).unwrap();
        assert_eq!(b.outer_vertices.to_vec(), vec![1, 4, 7]);
        assert_eq!(b.in_edges.len(), 3);
    }

    #[test]
    fn component_examples() {
        let p = path(5);
        let pieces = p.components(&VertexSet::from_vertices(5, [0, 4])).unwrap();
        assert_eq!(pieces.iter().map(VertexSet::to_vec).collect::<Vec<_>>(), vec![vec![0], vec![4]]);
        assert!(p.components(&VertexSet::empty(5)).unwrap().is_empty());
        let c6 = cycle(6);
        let rest = VertexSet::from_vertices(6, [0, 3]).complement();
        let pieces = c6.components(&rest).unwrap();
        assert_eq!(pieces.iter().map(VertexSet::to_vec).collect::<Vec<_>>(), vec![vec![1, 2], vec![4, 5]]);
    }

    #[test]
    fn threshold_examples() {
        let t = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]];
        assert_eq!(threshold_graph(&t, 1.0).unwrap().edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(threshold_graph(&t, 0.0).unwrap().edge_count(), 0);
        assert_eq!(threshold_graph(&t, 5.0).unwrap().edge_count(), 3);
        let bad = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert_eq!(threshold_graph(&bad, 1.0), Err(GraphError::Asymmetric(0, 1)));
        let diag = vec![vec![-1.0]];
        assert_eq!(threshold_graph(&diag, 1.0), Err(GraphError::NonzeroDiagonal(0)));
    }
}
