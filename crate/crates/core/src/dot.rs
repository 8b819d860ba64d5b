//! Graphviz DOT export with optional overlays.

use std::collections::HashSet;
use std::fmt::Write;

use crate::graph::{Edge, Graph, Vertex, VertexSet};

/// Extra structure drawn on top of a graph.
#[derive(Debug, Clone, Default)]
pub struct Overlay {
    /// Graph edges drawn bold (a spanning tree or forest).
    pub bold_edges: Vec<Edge>,
    /// Directed arrows `x → y`, drawn in red whether or not they are graph
    /// edges (flow steps).
    pub arrows: Vec<Edge>,
    /// Vertices drawn filled (a cut side).
    pub filled: Option<VertexSet>,
    /// Display names, one per vertex.
    pub names: Option<Vec<String>>,
}

/// Deterministic DOT: vertices in id order, then edges in `(min, max)`
/// order, then arrows in the given order.
pub fn export_dot(g: &Graph, overlay: &Overlay) -> String {
    let bold: HashSet<Edge> = overlay.bold_edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let _ = write!(out, "  {v}");
        let mut attrs = Vec::new();
        if let Some(names) = &overlay.names {
            attrs.push(format!("label=\"{}\"", names[v].replace('"', "\\\"")));
        }
        if overlay.filled.as_ref().is_some_and(|s| s.contains(v)) {
            attrs.push("style=filled".to_string());
            attrs.push("fillcolor=lightblue".to_string());
        }
        write_attrs(&mut out, &attrs);
    }
    for (u, v) in g.edges() {
        let _ = write!(out, "  {u} -- {v}");
        let attrs = if bold.contains(&(u, v)) { vec!["penwidth=3".to_string()] } else { vec![] };
        write_attrs(&mut out, &attrs);
    }
    for &(x, y) in &overlay.arrows {
        let _ = writeln!(out, "  {x} -- {y} [dir=forward, color=red, penwidth=2, constraint=false];");
    }
    out.push_str("}\n");
    out
}

fn write_attrs(out: &mut String, attrs: &[String]) {
    if attrs.is_empty() {
        out.push_str(";\n");
    } else {
        let _ = writeln!(out, " [{}];", attrs.join(", "));
    }
}

/// Arrows `x → T(x)` for the non-fixed entries of a step map.
pub fn step_arrows(step: &[Option<Vertex>]) -> Vec<Edge> {
    step.iter().enumerate().filter_map(|(x, t)| t.filter(|&t| t != x).map(|t| (x, t))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::grid;

    #[test]
    fn empty_graph() {
        assert_eq!(export_dot(&Graph::empty(0), &Overlay::default()), "graph G {\n}\n");
    }

    #[test]
    fn overlays_render() {
        let g = grid(2, 2);
        let overlay = Overlay {
            bold_edges: vec![(0, 1), (2, 0), (1, 3)],
            arrows: vec![(0, 3)],
            filled: Some(VertexSet::singleton(4, 0)),
            names: Some(vec!["a".into(), "b".into(), "c".into(), "d".into()]),
        };
        let dot = export_dot(&g, &overlay);
        assert_eq!(dot.matches("penwidth=3").count(), 3);
        assert!(dot.contains("0 -- 3 [dir=forward"));
        assert!(dot.contains("0 [label=\"a\", style=filled"));
        assert_eq!(dot, export_dot(&g, &overlay));
        assert_eq!(step_arrows(&[Some(1), Some(1), None]), vec![(0, 1)]);
    }
}
