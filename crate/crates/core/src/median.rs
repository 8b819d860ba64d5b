//! Median-graph recognition and the median-algebra operations.
//!
//! A connected graph is median when every triple `x, y, z` has exactly one
//! vertex in `[x,y] ∩ [y,z] ∩ [z,x]`. [`check_median`] decides this by
//! enumerating all triples against precomputed interval bitsets, and
//! [`MedianGraph`] is the proof-carrying wrapper the rest of the crate takes.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MedianError {
    #[error("graph is disconnected; split it into components first")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("not a median graph: triple {triple:?} has intersection {intersection:?}")]
    NotMedian { triple: (Vertex, Vertex, Vertex), intersection: Vec<Vertex> },
    #[error("projection target set is empty")]
    EmptyTarget,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Verdict of [`check_median`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MedianCertificate {
    Accepted,
    /// A triple whose interval intersection is empty or has several elements.
    Rejected {
        triple: (Vertex, Vertex, Vertex),
        intersection: Vec<Vertex>,
    },
}

impl MedianCertificate {
    pub fn is_accepted(&self) -> bool {
        matches!(self, MedianCertificate::Accepted)
    }
}

/// Interval bitsets `[x,y]` for every ordered pair.
struct IntervalTable {
    n: usize,
    blocks: usize,
    bits: Vec<u32>,
}

impl IntervalTable {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let blocks = n.div_ceil(32);
        let mut bits = vec![0u32; n * n * blocks];
        let d = g.distances();
        for x in 0..n {
            let rx = d.row(x);
            for y in x..n {
                let ry = d.row(y);
                let dxy = rx[y];
                let base_xy = (x * n + y) * blocks;
                for z in 0..n {
                    if rx[z].saturating_add(ry[z]) == dxy {
                        bits[base_xy + z / 32] |= 1 << (z % 32);
                    }
                }
                if x != y {
                    let (src, dst) = ((x * n + y) * blocks, (y * n + x) * blocks);
                    bits.copy_within(src..src + blocks, dst);
                }
            }
        }
        IntervalTable { n, blocks, bits }
    }

    fn get(&self, x: Vertex, y: Vertex) -> &[u32] {
        let base = (x * self.n + y) * self.blocks;
        &self.bits[base..base + self.blocks]
    }

    /// Number of common vertices of three intervals, capped at 2.
    fn triple_count(&self, x: Vertex, y: Vertex, z: Vertex) -> u32 {
        let (a, b, c) = (self.get(x, y), self.get(y, z), self.get(z, x));
        let mut count = 0;
        for i in 0..self.blocks {
            count += (a[i] & b[i] & c[i]).count_ones();
            if count >= 2 {
                return count;
            }
        }
        count
    }

    fn triple_members(&self, x: Vertex, y: Vertex, z: Vertex) -> Vec<Vertex> {
        let (a, b, c) = (self.get(x, y), self.get(y, z), self.get(z, x));
        (0..self.n).filter(|&v| (a[v / 32] & b[v / 32] & c[v / 32]) >> (v % 32) & 1 == 1).collect()
    }
}

/// Decides whether a connected graph is median, with a witness on rejection.
///
/// Reference algorithm: all `n³/6` unordered triples against interval bitsets.
pub fn check_median(g: &Graph) -> Result<MedianCertificate, MedianError> {
    if g.vertex_count() == 0 {
        return Err(MedianError::Empty);
    }
    if !g.is_connected() {
        return Err(MedianError::Disconnected);
    }
    let table = IntervalTable::new(g);
    let n = g.vertex_count();
    for x in 0..n {
        for y in x..n {
            for z in y..n {
                if table.triple_count(x, y, z) != 1 {
                    return Ok(MedianCertificate::Rejected {
                        triple: (x, y, z),
                        intersection: table.triple_members(x, y, z),
                    });
                }
            }
        }
    }
    Ok(MedianCertificate::Accepted)
}

/// The set `{z | y ∈ [x, z]}` of vertices "beyond `y` as seen from `x`".
pub fn cone(g: &Graph, x: Vertex, y: Vertex) -> Result<VertexSet, GraphError> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let d = g.distances();
    let (rx, ry) = (d.row(x), d.row(y));
    let dxy = rx[y];
    let n = g.vertex_count();
    Ok(VertexSet::from_vertices(n, (0..n).filter(|&z| dxy != u32::MAX && rx[z] != u32::MAX && dxy + ry[z] == rx[z])))
}

/// A connected graph verified (or constructed) to be median.
#[derive(Debug, Clone)]
pub struct MedianGraph {
    graph: Graph,
}

impl MedianGraph {
    /// Runs [`check_median`] and wraps the graph on acceptance.
    pub fn new(graph: Graph) -> Result<Self, MedianError> {
        match check_median(&graph)? {
            MedianCertificate::Accepted => Ok(MedianGraph { graph }),
            MedianCertificate::Rejected { triple, intersection } => {
                Err(MedianError::NotMedian { triple, intersection })
            }
        }
    }

    /// Wraps a graph that is median by construction (dual graphs of pocsets,
    /// products of median graphs, ...). Only connectivity is checked.
    pub fn from_trusted(graph: Graph) -> Result<Self, MedianError> {
        if graph.vertex_count() == 0 {
            return Err(MedianError::Empty);
        }
        if !graph.is_connected() {
            return Err(MedianError::Disconnected);
        }
        Ok(MedianGraph { graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn d(&self, u: Vertex, v: Vertex) -> u32 {
        self.graph.distances().row(u)[v]
    }

    /// The median `⟨x, y, z⟩`.
    pub fn median(&self, x: Vertex, y: Vertex, z: Vertex) -> Vertex {
        if x == y || x == z {
            return x;
        }
        if y == z {
            return y;
        }
        let d = self.graph.distances();
        let (rx, ry, rz) = (d.row(x), d.row(y), d.row(z));
        let (dxy, dyz, dxz) = (rx[y], ry[z], rx[z]);
        // the median sits at distance (dxy + dxz - dyz)/2 from x
        (0..self.vertex_count())
            .find(|&m| rx[m] + ry[m] == dxy && ry[m] + rz[m] == dyz && rx[m] + rz[m] == dxz)
            .expect("median graph has a median for every triple")
    }

    pub fn cone(&self, x: Vertex, y: Vertex) -> VertexSet {
        cone(&self.graph, x, y).expect("vertices in range")
    }

    /// Gate projection of `x` onto (the convex hull of) a nonempty set `A`:
    /// the unique point of `cvx(A)` between `x` and every point of `A`.
    ///
    /// Runs the iteration `a ← ⟨x, a', a⟩` over violating `a' ∈ A`, scanning
    /// in ascending id order.
    pub fn gate_projection(&self, target: &VertexSet, x: Vertex) -> Result<Vertex, MedianError> {
        self.graph.check_set(target)?;
        self.graph.check_vertex(x)?;
        let mut current = target.first().ok_or(MedianError::EmptyTarget)?;
        let rx = self.graph.distances().row(x).to_vec();
        loop {
            let rc = self.graph.distances().row(current);
            let violating = target.iter().find(|&a| rx[current] + rc[a] != rx[a]);
            match violating {
                None => return Ok(current),
                Some(a) => current = self.median(x, a, current),
            }
        }
    }

    /// Gate projection by nearest point: in a median graph the gate of `x`
    /// onto a convex set is its unique closest member.
    pub fn nearest_point(&self, convex: &VertexSet, x: Vertex) -> Option<Vertex> {
        convex.iter().min_by_key(|&a| (self.d(x, a), a))
    }

    /// Smallest convex superset of `A`, by iterated interval closure.
    pub fn convex_hull(&self, set: &VertexSet) -> VertexSet {
        let d = self.graph.distances();
        let n = self.vertex_count();
        let mut hull = set.clone();
        let mut frontier: Vec<Vertex> = hull.to_vec();
        while !frontier.is_empty() {
            let members = hull.to_vec();
            let mut added = Vec::new();
            for &a in &frontier {
                let ra = d.row(a);
                for &b in &members {
                    let rb = d.row(b);
                    let dab = ra[b];
                    for z in 0..n {
                        if !hull.contains(z) && ra[z] + rb[z] == dab {
                            hull.insert(z);
                            added.push(z);
                        }
                    }
                }
            }
            frontier = added;
        }
        hull
    }

    /// Smallest superset of `A` closed under the ternary median.
    pub fn median_closure(&self, set: &VertexSet) -> VertexSet {
        let mut closure = set.clone();
        loop {
            let members = closure.to_vec();
            let mut grown = false;
            for (i, &a) in members.iter().enumerate() {
                for (j, &b) in members.iter().enumerate().skip(i + 1) {
                    for &c in &members[j + 1..] {
                        let m = self.median(a, b, c);
                        if !closure.contains(m) {
                            closure.insert(m);
                            grown = true;
                        }
                    }
                }
            }
            if !grown {
                return closure;
            }
        }
    }
}
