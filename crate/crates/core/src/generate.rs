//! Median-graph generators and the test corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::median::{check_median, MedianCertificate};

/// Default cap on the number of vertices a generator may produce.
pub const DEFAULT_VERTEX_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("generator would produce {0} vertices, above the cap of {1}")]
    CapExceeded(usize, usize),
    #[error("median closure supports at most 20 dimensions, got {0}")]
    TooManyDimensions(usize),
    #[error("generated graph failed the median check: {0:?}")]
    NotMedian(MedianCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Hypercube { n: usize },
    Grid { width: usize, height: usize },
    RandomTree { n: usize, seed: u64 },
    Product { left: Box<GeneratorSpec>, right: Box<GeneratorSpec> },
    MedianClosure { n_dim: usize, n_seeds: usize, seed: u64 },
    Staircase { n: usize },
}

impl GeneratorSpec {
    fn vertex_estimate(&self) -> usize {
        match self {
            GeneratorSpec::Hypercube { n } => 1usize.checked_shl(*n as u32).unwrap_or(usize::MAX),
            GeneratorSpec::Grid { width, height } => width.saturating_mul(*height),
            GeneratorSpec::RandomTree { n, .. } => *n,
            GeneratorSpec::Product { left, right } => left.vertex_estimate().saturating_mul(right.vertex_estimate()),
            GeneratorSpec::MedianClosure { n_dim, .. } => 1usize.checked_shl(*n_dim as u32).unwrap_or(usize::MAX),
            GeneratorSpec::Staircase { n } => n.saturating_mul(6),
        }
    }
}

/// Builds the graph described by `spec` and verifies it is median.
pub fn generate(spec: &GeneratorSpec, cap: usize) -> Result<Graph, GenerateError> {
    let estimate = spec.vertex_estimate();
    if estimate > cap {
        return Err(GenerateError::CapExceeded(estimate, cap));
    }
    let g = build(spec)?;
    if g.vertex_count() > 0 {
        let cert = check_median(&g).map_err(|_| GenerateError::NotMedian(MedianCertificate::Accepted))?;
        if !cert.is_accepted() {
            return Err(GenerateError::NotMedian(cert));
        }
    }
    Ok(g)
}

fn build(spec: &GeneratorSpec) -> Result<Graph, GenerateError> {
    Ok(match spec {
        GeneratorSpec::Hypercube { n } => hypercube(*n),
        GeneratorSpec::Grid { width, height } => grid(*width, *height),
        GeneratorSpec::RandomTree { n, seed } => random_tree(*n, *seed),
        GeneratorSpec::Product { left, right } => build(left)?.cartesian_product(&build(right)?),
        GeneratorSpec::MedianClosure { n_dim, n_seeds, seed } => median_closure(*n_dim, *n_seeds, *seed)?.0,
        GeneratorSpec::Staircase { n } => staircase(*n),
    })
}

/// The hypercube `Q_n` on bit masks `0..2^n`.
pub fn hypercube(n: usize) -> Graph {
    let count = 1usize << n;
    let edges = (0..count).flat_map(|v| (0..n).map(move |i| (v, v ^ (1 << i))).filter(|&(a, b)| a < b));
    Graph::from_edges(count, edges).expect("hypercube edges are valid")
}

/// The `width × height` grid; vertex `(x, y)` has id `y * width + x`.
pub fn grid(width: usize, height: usize) -> Graph {
    let id = |x: usize, y: usize| y * width + x;
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < height {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    Graph::from_edges(width * height, edges).expect("grid edges are valid")
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
}

/// The cycle `C_n` (`n ≥ 3`).
pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).expect("valid")
}

/// The complete bipartite graph `K_{a,b}`; the first `a` ids form one side.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)))).expect("valid")
}

/// The star `K_{1,k}` with hub 0.
pub fn star(k: usize) -> Graph {
    Graph::from_edges(k + 1, (1..=k).map(|i| (0, i))).expect("valid")
}

/// Random recursive tree: vertex `i > 0` attaches to a uniform earlier vertex.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    Graph::from_edges(n, edges).expect("tree edges are valid")
}

/// Random connected graph: a random tree plus `extra` random chords.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<_> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    if n >= 2 {
        for _ in 0..extra {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges_dedup(n, edges).expect("edges are valid")
}

fn majority(a: u64, b: u64, c: u64) -> u64 {
    (a & b) | (b & c) | (a & c)
}

/// Median subgraph of `Q_{n_dim}` grown from random seed vertices.
///
/// The seed set is closed under coordinatewise majority, then made isometric
/// in the hypercube by inserting geodesic vertices between any pair whose
/// induced distance exceeds their Hamming distance; both steps repeat until
/// stable. A majority-closed isometric subgraph of a hypercube is median.
/// Returns the graph and the bit mask of each vertex (ascending).
pub fn median_closure(n_dim: usize, n_seeds: usize, seed: u64) -> Result<(Graph, Vec<u64>), GenerateError> {
    if n_dim > 20 {
        return Err(GenerateError::TooManyDimensions(n_dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let universe = 1u64 << n_dim;
    let mut present = vec![false; universe as usize];
    let mut members: Vec<u64> = Vec::new();
    for _ in 0..n_seeds.max(1) {
        let v = rng.gen_range(0..universe);
        if !present[v as usize] {
            present[v as usize] = true;
            members.push(v);
        }
    }
    let mut pending: Vec<u64> = members.clone();
    loop {
        while let Some(c) = pending.pop() {
            let snapshot = members.clone();
            for (i, &a) in snapshot.iter().enumerate() {
                for &b in &snapshot[i + 1..] {
                    let m = majority(a, b, c);
                    if !present[m as usize] {
                        present[m as usize] = true;
                        members.push(m);
                        pending.push(m);
                    }
                }
            }
        }
        members.sort_unstable();
        let fix = geodesic_gap(&members, &present);
        match fix {
            None => break,
            Some(v) => {
                present[v as usize] = true;
                members.push(v);
                pending.push(v);
            }
        }
    }
    Ok((subcube_graph(&members), members))
}

/// A vertex to insert so that some pair gets closer to its Hamming distance,
/// or `None` when the induced subgraph is isometric.
fn geodesic_gap(members: &[u64], present: &[bool]) -> Option<u64> {
    let g = subcube_graph(members);
    for (i, &a) in members.iter().enumerate() {
        let d = g.bfs_distances(i).expect("valid vertex");
        for (j, &b) in members.iter().enumerate() {
            if d[j] != Some((a ^ b).count_ones()) {
                // step from a towards b along a missing coordinate
                let mut diff = a ^ b;
                while diff != 0 {
                    let bit = diff & diff.wrapping_neg();
                    if !present[(a ^ bit) as usize] {
                        return Some(a ^ bit);
                    }
                    diff ^= bit;
                }
            }
        }
    }
    None
}

/// Induced subgraph of the hypercube on sorted masks.
pub fn subcube_graph(members: &[u64]) -> Graph {
    let mut edges = Vec::new();
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate().skip(i + 1) {
            if (a ^ b).count_ones() == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(members.len(), edges).expect("valid")
}

/// Vertices of the quadrant staircase: `a, b ≥ 0` with `-2 ≤ b - a ≤ 3`.
pub fn staircase_contains(a: i64, b: i64) -> bool {
    a >= 0 && b >= 0 && (-2..=3).contains(&(b - a))
}

/// The quadrant-staircase window with coordinates `0..n`, as an induced
/// subgraph of `Z²`, together with the coordinates of each vertex.
pub fn staircase_window(n: usize) -> (Graph, Vec<(i64, i64)>) {
    let coords: Vec<(i64, i64)> = (0..n as i64)
        .flat_map(|a| (0..n as i64).map(move |b| (a, b)))
        .filter(|&(a, b)| staircase_contains(a, b))
        .collect();
    let index = |p: (i64, i64)| coords.binary_search(&p).ok();
    let mut edges = Vec::new();
    for (i, &(a, b)) in coords.iter().enumerate() {
        for q in [(a + 1, b), (a, b + 1)] {
            if let Some(j) = index(q) {
                edges.push((i, j));
            }
        }
    }
    (Graph::from_edges(coords.len(), edges).expect("valid"), coords)
}

pub fn staircase(n: usize) -> Graph {
    staircase_window(n).0
}

/// A named graph of the test corpus.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub graph: Graph,
}

/// The 200 median-closure graphs of the corpus (at most 256 vertices each).
pub fn median_closure_corpus() -> Vec<CorpusEntry> {
    (0..200u64)
        .map(|i| {
            let n_dim = 3 + (i % 6) as usize;
            let n_seeds = 2 + (i / 6 % 5) as usize;
            let (graph, _) = median_closure(n_dim, n_seeds, 0x5eed_0000 + i).expect("dimension in range");
            CorpusEntry { name: format!("median_closure(dim={n_dim},seeds={n_seeds},seed={i})"), graph }
        })
        .collect()
}

/// `count` random trees with between 1 and `max_n` vertices.
pub fn random_tree_corpus(count: usize, max_n: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(1..=max_n);
            let s: u64 = rng.gen();
            CorpusEntry { name: format!("random_tree(n={n},#{i})"), graph: random_tree(n, s) }
        })
        .collect()
}

/// The full median corpus: hypercubes `Q_0..Q_6`, all grids up to 8×8,
/// 200 median closures, random trees, staircases and a few products.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 0..=6 {
        out.push(CorpusEntry { name: format!("hypercube({n})"), graph: hypercube(n) });
    }
    for w in 1..=8 {
        for h in 1..=8 {
            out.push(CorpusEntry { name: format!("grid({w},{h})"), graph: grid(w, h) });
        }
    }
    out.extend(median_closure_corpus());
    out.extend(random_tree_corpus(20, 60, 7));
    for n in 3..=8 {
        out.push(CorpusEntry { name: format!("staircase({n})"), graph: staircase(n) });
    }
    out.push(CorpusEntry { name: "star(3)×path(3)".into(), graph: star(3).cartesian_product(&path(3)) });
    out.push(CorpusEntry {
        name: "random_tree(8)×path(4)".into(),
        graph: random_tree(8, 3).cartesian_product(&path(4)),
    });
    out.push(CorpusEntry { name: "star(4)×star(2)".into(), graph: star(4).cartesian_product(&star(2)) });
    out
}

/// A smaller corpus for expensive checks: every graph with at most `max_vertices`.
pub fn small_corpus(max_vertices: usize) -> Vec<CorpusEntry> {
    corpus().into_iter().filter(|e| e.graph.vertex_count() <= max_vertices).collect()
}

/// Vertex coordinates of a grid id.
pub fn grid_coords(width: usize, v: Vertex) -> (usize, usize) {
    (v % width, v / width)
}
