//! Independent reference computations used as oracles by the integration
//! tests. Nothing here calls the metric code of the library under test.

#![allow(dead_code)]

use std::collections::VecDeque;

use treelike_core::{Graph, Vertex};

pub const UNREACHED: u32 = u32::MAX;

pub fn bfs(g: &Graph, s: Vertex) -> Vec<u32> {
    let mut d = vec![UNREACHED; g.vertex_count()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in g.neighbors(v) {
            if d[w] == UNREACHED {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

pub fn all_pairs(g: &Graph) -> Vec<Vec<u32>> {
    g.vertices().map(|s| bfs(g, s)).collect()
}

pub fn is_connected(g: &Graph) -> bool {
    g.vertex_count() == 0 || bfs(g, 0).iter().all(|&d| d != UNREACHED)
}

pub fn is_tree(g: &Graph) -> bool {
    g.vertex_count() > 0 && g.edge_count() + 1 == g.vertex_count() && is_connected(g)
}

/// Connectivity of the subgraph induced on `members`.
pub fn induced_connected(g: &Graph, members: &[bool]) -> bool {
    let Some(start) = members.iter().position(|&m| m) else {
        return true;
    };
    let mut seen = vec![false; g.vertex_count()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if members[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    members.iter().zip(&seen).all(|(&m, &s)| !m || s)
}

/// Components of the subgraph induced on `members`, each sorted, ordered by
/// least member.
pub fn induced_components(g: &Graph, members: &[bool]) -> Vec<Vec<Vertex>> {
    let mut seen = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for s in g.vertices() {
        if !members[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if members[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Interval `I(x, y)` of every pair as a word bitset.
struct Intervals {
    words: usize,
    bits: Vec<u64>,
    n: usize,
}

impl Intervals {
    fn new(d: &[Vec<u32>]) -> Self {
        let n = d.len();
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * n * words];
        for x in 0..n {
            for y in 0..n {
                let base = (x * n + y) * words;
                for z in 0..n {
                    if d[x][z] + d[z][y] == d[x][y] {
                        bits[base + z / 64] |= 1 << (z % 64);
                    }
                }
            }
        }
        Intervals { words, bits, n }
    }

    fn row(&self, x: usize, y: usize) -> &[u64] {
        let base = (x * self.n + y) * self.words;
        &self.bits[base..base + self.words]
    }
}

/// The first triple (lexicographic) whose three intervals do not meet in
/// exactly one vertex; `None` for median graphs. Requires a connected graph.
pub fn brute_median_violation(g: &Graph) -> Option<(Vertex, Vertex, Vertex)> {
    let d = all_pairs(g);
    let iv = Intervals::new(&d);
    let n = g.vertex_count();
    for x in 0..n {
        for y in x..n {
            for z in y..n {
                let count: u32 = iv
                    .row(x, y)
                    .iter()
                    .zip(iv.row(y, z))
                    .zip(iv.row(x, z))
                    .map(|((a, b), c)| (a & b & c).count_ones())
                    .sum();
                if count != 1 {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// Canonical component labels (by least member) of the graph on `0..n`
/// with the given edges.
pub fn component_labels(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<usize> {
    let g = Graph::from_edges(n, edges.iter().copied()).expect("valid edges");
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        for (v, &dv) in bfs(&g, s).iter().enumerate() {
            if dv != UNREACHED {
                label[v] = next;
            }
        }
        next += 1;
    }
    label
}

/// Canonical labels of a partition given by a class key per point.
pub fn canonical<K: PartialEq + Clone>(keys: &[K]) -> Vec<usize> {
    let mut seen: Vec<K> = Vec::new();
    keys.iter()
        .map(|k| match seen.iter().position(|s| s == k) {
            Some(i) => i,
            None => {
                seen.push(k.clone());
                seen.len() - 1
            }
        })
        .collect()
}
