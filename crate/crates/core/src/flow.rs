//! The end-directed step map `T_U` and its orbit structure.
//!
//! For an orientation `U` of the half-spaces and a vertex `x`, `A_{U,x}` is
//! the set of maximal half-spaces of `U` not containing `x`; `T_U(x)` is the
//! gate projection of `x` onto `∩ A_{U,x}`, the far corner of the cube cut
//! by `A_{U,x}`.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Vertex, VertexSet};
use crate::hyperplane::{HalfSpaceId, HyperplaneError, Hyperplanes};
use crate::median::MedianError;
use crate::oneended::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("vertex {0} is not certified")]
    Uncertified(Vertex),
    #[error("orientation has {found} bits, expected {expected}")]
    OrientationSize { expected: usize, found: usize },
    #[error("not an orientation: {0}")]
    NotOrientation(String),
    #[error("root set is empty")]
    EmptySet,
    #[error("root set spans several orbits")]
    MultipleOrbits,
    #[error("root set is not inside half-space {0}")]
    NotInside(HalfSpaceId),
    #[error("half-space {0} contains the target")]
    ContainsTarget(HalfSpaceId),
    #[error("forward orbits leave the certified region before meeting")]
    CertificationGap,
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Median(#[from] MedianError),
    #[error(transparent)]
    Hyperplane(#[from] HyperplaneError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EndKind {
    Principal {
        vertex: Vertex,
    },
    /// An end of an infinite family seen through a finite window; `anchor`
    /// is the window vertex whose half-spaces are exactly those containing
    /// the end.
    Windowed {
        family: String,
        radius: usize,
        anchor: Vertex,
    },
}

/// An orientation `U` of the half-spaces of a graph, with the vertices at
/// which `A_{U,x}` is known to be exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndTarget {
    pub kind: EndKind,
    /// Bit `h` set iff `U ∈ H_h`.
    pub side: FixedBitSet,
    pub certified: VertexSet,
}

impl EndTarget {
    /// `U = x̂`: the half-spaces containing `x`.
    pub fn principal(h: &Hyperplanes, x: Vertex) -> Self {
        let n = h.graph().vertex_count();
        EndTarget {
            kind: EndKind::Principal { vertex: x },
            side: h.signature(x).clone(),
            certified: VertexSet::full(n),
        }
    }

    /// Checks that exactly one half-space of each pair is chosen.
    pub fn validate(&self, h: &Hyperplanes) -> Result<(), FlowError> {
        if self.side.len() != h.len() {
            return Err(FlowError::OrientationSize { expected: h.len(), found: self.side.len() });
        }
        for p in 0..h.hyperplane_count() {
            let [a, b] = h.hyperplane(p);
            if self.side.contains(a) == self.side.contains(b) {
                return Err(FlowError::NotOrientation(format!("hyperplane {p} is not chosen exactly once")));
            }
        }
        for a in self.side.ones() {
            for b in 0..h.len() {
                if !self.side.contains(b) && h.halfspace(a).side.is_subset(&h.halfspace(b).side) {
                    return Err(FlowError::NotOrientation(format!("half-space {a} is chosen but {b} ⊇ it is not")));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, hs: HalfSpaceId) -> bool {
        self.side.contains(hs)
    }

    /// `|U ∖ x̂|`.
    pub fn distance_to(&self, h: &Hyperplanes, x: Vertex) -> usize {
        self.side.difference_count(h.signature(x))
    }
}

/// `A_{U,x}` from the half-spaces across the edges at `x`.
pub(crate) fn a_set_local(h: &Hyperplanes, target: &EndTarget, x: Vertex) -> Vec<HalfSpaceId> {
    let mut out: Vec<HalfSpaceId> = h
        .graph()
        .neighbors(x)
        .iter()
        .map(|&y| h.halfspace_of_edge(x, y).expect("every edge lies on a hyperplane"))
        .filter(|&hs| target.contains(hs))
        .collect();
    out.sort_unstable();
    out
}

/// `A_{U,x} = max(U ∖ x̂)`, computed by a maximality scan and cross-checked
/// against the half-spaces having `x` on their outer boundary.
pub fn a_set(h: &Hyperplanes, target: &EndTarget, x: Vertex) -> Result<Vec<HalfSpaceId>, FlowError> {
    h.graph().check_vertex(x).map_err(HyperplaneError::from)?;
    if !target.certified.contains(x) {
        return Err(FlowError::Uncertified(x));
    }
    let sig = h.signature(x);
    let candidates: Vec<HalfSpaceId> = target.side.ones().filter(|&hs| !sig.contains(hs)).collect();
    let maximal: Vec<HalfSpaceId> = candidates
        .iter()
        .copied()
        .filter(|&a| {
            let sa = &h.halfspace(a).side;
            !candidates.iter().any(|&b| b != a && sa.is_subset(&h.halfspace(b).side))
        })
        .collect();
    let local = a_set_local(h, target, x);
    if maximal != local {
        return Err(FlowError::Internal(format!("A_U,{x}: maximal {maximal:?} but outer-boundary {local:?}")));
    }
    for (i, &a) in maximal.iter().enumerate() {
        for &b in &maximal[i + 1..] {
            if h.nested(a, b)? {
                return Err(FlowError::Internal(format!("A_U,{x} contains nested {a} and {b}")));
            }
        }
    }
    Ok(maximal)
}

fn intersection(h: &Hyperplanes, hs: &[HalfSpaceId]) -> VertexSet {
    let mut set = VertexSet::full(h.graph().vertex_count());
    for &id in hs {
        set.intersect_with(&h.halfspace(id).side);
    }
    set
}

/// `T_U(x)`: the gate projection of `x` onto `∩ A_{U,x}`, or `x` itself
/// when `A_{U,x}` is empty.
pub fn t_u_step(h: &Hyperplanes, target: &EndTarget, x: Vertex) -> Result<Vertex, FlowError> {
    let a = a_set(h, target, x)?;
    if a.is_empty() {
        return Ok(x);
    }
    Ok(h.median_graph().gate_projection(&intersection(h, &a), x)?)
}

/// Moves `x` across the least-id hyperplane of `A_{U,x}` only.
pub fn t_u_step_single(h: &Hyperplanes, target: &EndTarget, x: Vertex) -> Result<Vertex, FlowError> {
    let a = a_set(h, target, x)?;
    let Some(&first) = a.first() else {
        return Ok(x);
    };
    Ok(h.graph()
        .neighbors(x)
        .iter()
        .copied()
        .find(|&y| h.halfspace_of_edge(x, y) == Some(first))
        .expect("A_U,x half-spaces are adjacent to x"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub vertices: Vec<Vertex>,
    /// Every vertex of the orbit is certified.
    pub certified: bool,
    /// The fixed point of the orbit, if it has one.
    pub root: Option<Vertex>,
}

/// The step map and its orbits. `step[x]` is `None` off the certified set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowForest {
    pub step: Vec<Option<Vertex>>,
    pub orbit_of: Vec<usize>,
    pub orbits: Vec<Orbit>,
}

impl FlowForest {
    /// `x, T_U(x), T_U²(x), …` until a fixed point or an uncertified vertex.
    pub fn forward_orbit(&self, x: Vertex) -> Vec<Vertex> {
        let mut out = vec![x];
        let mut cur = x;
        while let Some(next) = self.step[cur] {
            if next == cur {
                break;
            }
            out.push(next);
            cur = next;
        }
        out
    }

    /// Whether the forward orbit of `x` stays certified until a fixed point.
    fn reaches_fixed_point(&self, x: Vertex) -> bool {
        let last = *self.forward_orbit(x).last().expect("nonempty");
        self.step[last] == Some(last)
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn certified_orbits(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.orbits.len()).filter(|&o| self.orbits[o].certified)
    }
}

/// Evaluates `T_U` on the certified vertices and checks, for each step, that
/// `d(x, T_U(x)) = |A_{U,x}|`, that exactly `A_{U,x}` separates `x` from
/// `T_U(x)`, and that `|U ∖ x̂|` strictly decreases.
pub fn flow_forest(h: &Hyperplanes, target: &EndTarget) -> Result<FlowForest, FlowError> {
    target.validate(h)?;
    let g = h.graph();
    let n = g.vertex_count();
    let mut step = vec![None; n];
    let mut uf = UnionFind::<usize>::new(n);
    for x in target.certified.iter() {
        let a = a_set(h, target, x)?;
        let t = t_u_step(h, target, x)?;
        let sep = h.separating(x, t)?;
        if sep != a || g.dist(x, t) != Some(a.len() as u32) {
            return Err(FlowError::Internal(format!("step {x} -> {t} does not cross exactly A_U,x = {a:?}")));
        }
        if t != x && target.distance_to(h, t) >= target.distance_to(h, x) {
            return Err(FlowError::Internal(format!("step {x} -> {t} does not approach the target")));
        }
        step[x] = Some(t);
        uf.union(x, t);
    }
    let partition = Partition::from_keys((0..n).map(|x| uf.find_mut(x)));
    let orbits = partition
        .classes()
        .into_iter()
        .map(|vertices| {
            let certified = vertices.iter().all(|&v| target.certified.contains(v));
            let root = vertices.iter().copied().find(|&v| step[v] == Some(v));
            Orbit { vertices, certified, root }
        })
        .collect();
    Ok(FlowForest { step, orbit_of: partition.class_of, orbits })
}

/// The vertex whose forward orbit is the intersection of the forward orbits
/// of `c`, by intersecting complete forward orbits.
pub fn orbit_root(forest: &FlowForest, c: &VertexSet) -> Result<Vertex, FlowError> {
    let members = c.to_vec();
    let first = *members.first().ok_or(FlowError::EmptySet)?;
    let orbits: Vec<Vec<Vertex>> = members.iter().map(|&x| forest.forward_orbit(x)).collect();
    let sets: Vec<HashSet<Vertex>> = orbits.iter().map(|o| o.iter().copied().collect()).collect();
    let common: Vec<Vertex> = orbits[0].iter().copied().filter(|v| sets.iter().all(|s| s.contains(v))).collect();
    let Some(&root) = common.first() else {
        return Err(if members.iter().all(|&x| forest.orbit_of[x] == forest.orbit_of[first]) {
            FlowError::CertificationGap
        } else {
            FlowError::MultipleOrbits
        });
    };
    if !members.iter().all(|&x| forest.reaches_fixed_point(x)) && forest.forward_orbit(root).len() != common.len() {
        return Err(FlowError::CertificationGap);
    }
    Ok(root)
}

/// The `T_U`-root of `c ⊆ H` for a half-space `H` not containing `U`.
///
/// Each `x ∈ c` is advanced to the first iterate outside `H`, which lies on
/// the outer boundary of `H`; the first common vertex `z` of the forward
/// orbits of these exit points bounds the search, and the root is the first
/// vertex before `z` on the orbit of the least member of `c` that every
/// other orbit passes through. The result is cross-checked against
/// [`orbit_root`].
pub fn t_u_root(
    h: &Hyperplanes,
    target: &EndTarget,
    forest: &FlowForest,
    c: &VertexSet,
    hs: HalfSpaceId,
) -> Result<Vertex, FlowError> {
    let members = c.to_vec();
    let first = *members.first().ok_or(FlowError::EmptySet)?;
    if hs >= h.len() {
        return Err(HyperplaneError::UnknownHalfSpace(hs).into());
    }
    if target.contains(hs) {
        return Err(FlowError::ContainsTarget(hs));
    }
    let half = h.halfspace(hs);
    if !c.is_subset(&half.side) {
        return Err(FlowError::NotInside(hs));
    }
    if members.iter().any(|&x| forest.orbit_of[x] != forest.orbit_of[first]) {
        return Err(FlowError::MultipleOrbits);
    }
    let outer = &half.boundary.outer_vertices;
    let mut exits = Vec::with_capacity(members.len());
    for &x in &members {
        let orbit = forest.forward_orbit(x);
        let exit = *orbit.iter().find(|&&v| !half.side.contains(v)).ok_or(FlowError::CertificationGap)?;
        if !outer.contains(exit) {
            return Err(FlowError::Internal(format!("orbit of {x} leaves half-space {hs} away from its boundary")));
        }
        exits.push(exit);
    }
    let exit_orbits: Vec<Vec<Vertex>> = exits.iter().map(|&e| forest.forward_orbit(e)).collect();
    let exit_sets: Vec<HashSet<Vertex>> = exit_orbits.iter().map(|o| o.iter().copied().collect()).collect();
    let z =
        *exit_orbits[0].iter().find(|v| exit_sets.iter().all(|s| s.contains(v))).ok_or(FlowError::CertificationGap)?;
    let upto = |x: Vertex| -> HashSet<Vertex> {
        let orbit = forest.forward_orbit(x);
        let end = orbit.iter().position(|&v| v == z).expect("every orbit passes z");
        orbit[..=end].iter().copied().collect()
    };
    let prefixes: Vec<HashSet<Vertex>> = members.iter().map(|&x| upto(x)).collect();
    let orbit = forest.forward_orbit(first);
    let root = *orbit.iter().find(|v| prefixes.iter().all(|s| s.contains(v))).expect("z is common");
    let oracle = orbit_root(forest, c)?;
    if oracle != root {
        return Err(FlowError::Internal(format!("root {root} disagrees with orbit intersection {oracle}")));
    }
    Ok(root)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSet {
    /// Members of the `E_n`-class.
    pub class: Vec<Vertex>,
    /// One `T_U`-root per orbit meeting the class.
    pub roots: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ENSequence {
    /// Vertices in certified orbits; partitions index into this list.
    pub domain: Vec<Vertex>,
    pub partitions: Vec<Partition>,
    /// `R_{n,C}` for each `n` and each class `C` of `E_n`.
    pub roots: Vec<Vec<RootSet>>,
    pub orbit_count: usize,
    /// A single orbit: the finitely-many-orbits case, where the sequence
    /// carries no information.
    pub degenerate: bool,
}

/// `x E_n y` iff every half-space not containing `U` that meets more than
/// `n` certified orbits contains both or neither, for `n = 0..=n_max`.
pub fn e_n_sequence(
    h: &Hyperplanes,
    target: &EndTarget,
    forest: &FlowForest,
    n_max: usize,
) -> Result<ENSequence, FlowError> {
    let n = h.graph().vertex_count();
    let mut in_domain = VertexSet::empty(n);
    for o in forest.certified_orbits() {
        for &v in &forest.orbits[o].vertices {
            in_domain.insert(v);
        }
    }
    let domain = in_domain.to_vec();
    let off: Vec<HalfSpaceId> = (0..h.len()).filter(|&hs| !target.contains(hs)).collect();
    let meets: Vec<usize> = off
        .iter()
        .map(|&hs| {
            let side = &h.halfspace(hs).side;
            let hit: HashSet<usize> =
                domain.iter().filter(|&&v| side.contains(v)).map(|&v| forest.orbit_of[v]).collect();
            hit.len()
        })
        .collect();
    let mut partitions = Vec::with_capacity(n_max + 1);
    let mut roots = Vec::with_capacity(n_max + 1);
    for level in 0..=n_max {
        let chosen: Vec<&VertexSet> =
            off.iter().zip(&meets).filter(|&(_, &m)| m > level).map(|(&hs, _)| &h.halfspace(hs).side).collect();
        let p = Partition::from_keys(domain.iter().map(|&v| chosen.iter().map(|s| s.contains(v)).collect::<Vec<_>>()));
        let mut level_roots = Vec::new();
        for class in p.classes() {
            let class: Vec<Vertex> = class.into_iter().map(|i| domain[i]).collect();
            let mut by_orbit: Vec<usize> = class.iter().map(|&v| forest.orbit_of[v]).collect();
            by_orbit.sort_unstable();
            by_orbit.dedup();
            let mut rs = Vec::with_capacity(by_orbit.len());
            for o in by_orbit {
                let part = VertexSet::from_vertices(n, class.iter().copied().filter(|&v| forest.orbit_of[v] == o));
                let host = off.iter().copied().find(|&hs| part.is_subset(&h.halfspace(hs).side));
                rs.push(match host {
                    Some(hs) => t_u_root(h, target, forest, &part, hs)?,
                    None => orbit_root(forest, &part)?,
                });
            }
            level_roots.push(RootSet { class, roots: rs });
        }
        partitions.push(p);
        roots.push(level_roots);
    }
    let orbit_count = forest.certified_orbits().count();
    Ok(ENSequence { domain, partitions, roots, orbit_count, degenerate: orbit_count <= 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{grid, path, random_tree};
    use crate::median::MedianGraph;

    fn setup(g: crate::graph::Graph) -> MedianGraph {
        MedianGraph::new(g).unwrap()
    }

    #[test]
    fn grid_a_set_and_step() {
        let mg = setup(grid(3, 3));
        let h = Hyperplanes::compute(&mg).unwrap();
        let u = EndTarget::principal(&h, 8);
        let a = a_set(&h, &u, 0).unwrap();
        let sides: Vec<Vec<Vertex>> = a.iter().map(|&hs| h.halfspace(hs).side.to_vec()).collect();
        assert!(sides.contains(&vec![1, 2, 4, 5, 7, 8]));
        assert!(sides.contains(&vec![3, 4, 5, 6, 7, 8]));
        assert_eq!(a.len(), 2);
        assert_eq!(t_u_step(&h, &u, 0).unwrap(), 4);
        assert!(a_set(&h, &u, 8).unwrap().is_empty());
        assert_eq!(t_u_step(&h, &u, 8).unwrap(), 8);
        assert_eq!(t_u_step_single(&h, &u, 8).unwrap(), 8);
        assert!([1, 3].contains(&t_u_step_single(&h, &u, 0).unwrap()));
    }

    #[test]
    fn path_flow() {
        let mg = setup(path(5));
        let h = Hyperplanes::compute(&mg).unwrap();
        let u = EndTarget::principal(&h, 4);
        for x in 0..4 {
            let a = a_set(&h, &u, x).unwrap();
            assert_eq!(a.len(), 1);
            assert_eq!(h.halfspace(a[0]).side.to_vec(), ((x + 1)..5).collect::<Vec<_>>());
        }
        let f = flow_forest(&h, &u).unwrap();
        assert_eq!(f.orbit_count(), 1);
        assert_eq!(f.forward_orbit(0), vec![0, 1, 2, 3, 4]);
        assert_eq!(f.orbits[0].root, Some(4));
    }

    #[test]
    fn principal_orbit_reaches_target() {
        let mg = setup(random_tree(25, 3));
        let h = Hyperplanes::compute(&mg).unwrap();
        let u = EndTarget::principal(&h, 7);
        let f = flow_forest(&h, &u).unwrap();
        assert_eq!(f.orbit_count(), 1);
        for x in 0..25 {
            let steps = f.forward_orbit(x).len() - 1;
            assert_eq!(*f.forward_orbit(x).last().unwrap(), 7);
            assert!(steps as u32 <= mg.graph().dist(x, 7).unwrap());
        }
    }

    #[test]
    fn grid_roots() {
        let mg = setup(grid(3, 3));
        let h = Hyperplanes::compute(&mg).unwrap();
        let u = EndTarget::principal(&h, 8);
        let f = flow_forest(&h, &u).unwrap();
        let col0 = (0..h.len()).find(|&hs| h.halfspace(hs).side.to_vec() == vec![0, 3, 6]).unwrap();
        let c = VertexSet::from_vertices(9, [0, 6]);
        assert_eq!(t_u_root(&h, &u, &f, &c, col0).unwrap(), 8);
        assert_eq!(t_u_root(&h, &u, &f, &VertexSet::singleton(9, 3), col0).unwrap(), 3);
        // 0 -> 4 -> 8: both on one forward orbit
        let left = (0..h.len()).find(|&hs| h.halfspace(hs).side.to_vec() == vec![0, 1, 3, 4, 6, 7]).unwrap();
        assert_eq!(t_u_root(&h, &u, &f, &VertexSet::from_vertices(9, [0, 4]), left).unwrap(), 4);
        let right = (0..h.len()).find(|&hs| h.halfspace(hs).side.to_vec() == vec![1, 2, 4, 5, 7, 8]).unwrap();
        assert_eq!(t_u_root(&h, &u, &f, &c, right).unwrap_err(), FlowError::ContainsTarget(right));
        assert_eq!(
            t_u_root(&h, &u, &f, &VertexSet::from_vertices(9, [0, 1]), col0).unwrap_err(),
            FlowError::NotInside(col0)
        );
    }

    #[test]
    fn principal_sequence_is_degenerate() {
        let mg = setup(grid(3, 4));
        let h = Hyperplanes::compute(&mg).unwrap();
        let u = EndTarget::principal(&h, 0);
        let f = flow_forest(&h, &u).unwrap();
        let e = e_n_sequence(&h, &u, &f, 2).unwrap();
        assert!(e.degenerate);
        assert_eq!(e.orbit_count, 1);
        assert_eq!(e.partitions[0].class_count(), 12);
        assert!(e.partitions[1].is_full());
        assert_eq!(e.roots[1][0].roots, vec![0]);
    }

    #[test]
    fn rejects_inconsistent_target() {
        let mg = setup(path(3));
        let h = Hyperplanes::compute(&mg).unwrap();
        let mut u = EndTarget::principal(&h, 0);
        let [a, b] = h.hyperplane(1);
        u.side.toggle(a);
        u.side.toggle(b);
        assert!(matches!(flow_forest(&h, &u), Err(FlowError::NotOrientation(_))));
    }
}
