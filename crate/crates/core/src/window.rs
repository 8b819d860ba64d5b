//! Finite windows onto infinite one-ended median graphs, with an end
//! descriptor and the vertices at which the end-directed step is exact.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{a_set_local, EndKind, EndTarget};
use crate::generate::{grid, staircase_contains, staircase_window};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::hyperplane::Hyperplanes;
use crate::median::{MedianError, MedianGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("unknown window family {0:?}")]
    UnknownFamily(String),
    #[error("radius must be at least 1")]
    ZeroRadius,
    #[error("tree degree must be at least 2")]
    DegreeTooSmall,
    #[error(transparent)]
    Median(#[from] MedianError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum WindowFamily {
    /// `{(a, b) ∈ Z² : a, b ≥ 0, −2 ≤ b − a ≤ 3}`, end along the diagonal.
    QuadrantStaircase,
    /// The `d`-regular tree, end along the leftmost ray.
    RegularTree { degree: usize },
    /// `Z≥0 × {0, 1}`, end along the bottom rail.
    Ladder,
    /// `Z≥0 × Z≥0`, end along the diagonal.
    GridQuadrant,
}

impl fmt::Display for WindowFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowFamily::QuadrantStaircase => write!(f, "quadrant"),
            WindowFamily::RegularTree { degree } => write!(f, "tree{degree}"),
            WindowFamily::Ladder => write!(f, "ladder"),
            WindowFamily::GridQuadrant => write!(f, "grid-quadrant"),
        }
    }
}

impl FromStr for WindowFamily {
    type Err = WindowError;

    /// Accepts `quadrant`, `ladder`, `grid-quadrant` and `tree<d>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quadrant" | "quadrant-staircase" | "staircase" => Ok(WindowFamily::QuadrantStaircase),
            "ladder" => Ok(WindowFamily::Ladder),
            "grid-quadrant" | "grid" => Ok(WindowFamily::GridQuadrant),
            _ => s
                .strip_prefix("tree")
                .or_else(|| s.strip_prefix("regular-tree"))
                .and_then(|d| d.trim_start_matches(['-', '(']).trim_end_matches(')').parse().ok())
                .map(|degree| WindowFamily::RegularTree { degree })
                .ok_or_else(|| WindowError::UnknownFamily(s.to_string())),
        }
    }
}

/// A window: the graph, coordinates of its vertices in the infinite graph,
/// the anchor vertex standing in for the end, and the vertices whose full
/// neighbourhood in the infinite graph is present.
#[derive(Debug, Clone)]
pub struct WindowedFamily {
    pub family: WindowFamily,
    pub radius: usize,
    pub graph: MedianGraph,
    /// Grid coordinates, or `(depth, index within level)` for trees.
    pub coords: Vec<(usize, usize)>,
    pub anchor: Vertex,
    /// Window degree equals the degree in the infinite graph.
    pub full_degree: Vec<bool>,
}

fn lattice_window(
    family: WindowFamily,
    radius: usize,
    graph: Graph,
    coords: Vec<(usize, usize)>,
    contains: impl Fn(i64, i64) -> bool,
    anchor: (usize, usize),
) -> Result<WindowedFamily, WindowError> {
    let full_degree = coords
        .iter()
        .enumerate()
        .map(|(v, &(a, b))| {
            let (a, b) = (a as i64, b as i64);
            let infinite =
                [(a + 1, b), (a - 1, b), (a, b + 1), (a, b - 1)].iter().filter(|&&(p, q)| contains(p, q)).count();
            graph.degree(v) == infinite
        })
        .collect();
    let anchor = coords.iter().position(|&c| c == anchor).expect("anchor lies in the window");
    Ok(WindowedFamily { family, radius, graph: MedianGraph::new(graph)?, coords, anchor, full_degree })
}

fn regular_tree(degree: usize, radius: usize) -> (Graph, Vec<(usize, usize)>) {
    let mut coords = vec![(0, 0)];
    let mut edges = Vec::new();
    let mut level = vec![0];
    for depth in 1..=radius {
        let mut next = Vec::new();
        for &parent in &level {
            let children = if depth == 1 { degree } else { degree - 1 };
            for _ in 0..children {
                let v = coords.len();
                coords.push((depth, next.len()));
                edges.push((parent, v));
                next.push(v);
            }
        }
        level = next;
    }
    (Graph::from_edges(coords.len(), edges).expect("tree edges are valid"), coords)
}

/// Materializes the window of the given radius.
pub fn make_window(family: WindowFamily, radius: usize) -> Result<WindowedFamily, WindowError> {
    if radius == 0 {
        return Err(WindowError::ZeroRadius);
    }
    let r = radius;
    match family {
        WindowFamily::QuadrantStaircase => {
            let (g, coords) = staircase_window(r + 1);
            let coords = coords.into_iter().map(|(a, b)| (a as usize, b as usize)).collect();
            lattice_window(family, r, g, coords, staircase_contains, (r, r))
        }
        WindowFamily::GridQuadrant => {
            let w = r + 1;
            let coords = (0..w * w).map(|v| (v % w, v / w)).collect();
            lattice_window(family, r, grid(w, w), coords, |a, b| a >= 0 && b >= 0, (r, r))
        }
        WindowFamily::Ladder => {
            let w = r + 1;
            let coords = (0..2 * w).map(|v| (v % w, v / w)).collect();
            lattice_window(family, r, grid(w, 2), coords, |a, b| a >= 0 && (0..=1).contains(&b), (r, 0))
        }
        WindowFamily::RegularTree { degree } => {
            if degree < 2 {
                return Err(WindowError::DegreeTooSmall);
            }
            let (g, coords) = regular_tree(degree, r);
            let full_degree = coords.iter().map(|&(depth, _)| depth < r).collect();
            let anchor = coords.iter().position(|&(depth, _)| depth == r).expect("radius ≥ 1");
            Ok(WindowedFamily { family, radius: r, graph: MedianGraph::new(g)?, coords, anchor, full_degree })
        }
    }
}

impl WindowedFamily {
    /// The end as an orientation of the window half-spaces: a half-space
    /// contains the end iff it contains the anchor. A vertex is certified
    /// when it and all its neighbours have full degree (so its 2-ball is in
    /// the window) and `|A_{U,x}| ≤ 2`, so the cube corner `T_U(x)` lies in
    /// that ball.
    pub fn target(&self, h: &Hyperplanes) -> EndTarget {
        let g = self.graph.graph();
        let n = g.vertex_count();
        let mut target = EndTarget {
            kind: EndKind::Windowed { family: self.family.to_string(), radius: self.radius, anchor: self.anchor },
            side: h.signature(self.anchor).clone(),
            certified: VertexSet::empty(n),
        };
        let ball_inside = |x: Vertex| self.full_degree[x] && g.neighbors(x).iter().all(|&y| self.full_degree[y]);
        let certified: Vec<Vertex> =
            (0..n).filter(|&x| ball_inside(x) && a_set_local(h, &target, x).len() <= 2).collect();
        target.certified = VertexSet::from_vertices(n, certified);
        target
    }

    pub fn vertex_at(&self, coords: (usize, usize)) -> Option<Vertex> {
        self.coords.iter().position(|&c| c == coords)
    }
}
