//! Finite pocsets, their orientations and the dual median graph.
//!
//! A pocset is a poset with a least element `0` and an order-reversing,
//! fixpoint-free involution `¬` such that `0` is the only lower bound of any
//! pair `{p, ¬p}`. Orientations (upward-closed choices of one element per
//! complement pair) are the vertices of the dual median graph, adjacent when
//! they differ in a single element.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, Vertex, VertexSet};
use crate::hyperplane::{HyperplaneError, Hyperplanes};
use crate::median::{MedianError, MedianGraph};

pub type Element = usize;

/// Default cap on the number of orientations enumerated.
pub const DEFAULT_ORIENTATION_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PocsetError {
    #[error("pocset has no elements")]
    Empty,
    #[error("element {0} out of range")]
    UnknownElement(Element),
    #[error("element {0} has no involution partner")]
    MissingInvolution(Element),
    #[error("element {0} has conflicting involution partners")]
    ConflictingInvolution(Element),
    #[error("involution fixes element {0}")]
    FixedPoint(Element),
    #[error("order is not reflexive at {0}")]
    NotReflexive(Element),
    #[error("order is not antisymmetric: {0} ≤ {1} ≤ {0}")]
    NotAntisymmetric(Element, Element),
    #[error("order is not transitive: {0} ≤ {1} ≤ {2} but not {0} ≤ {2}")]
    NotTransitive(Element, Element, Element),
    #[error("involution is not order-reversing: {0} ≤ {1} but not ¬{1} ≤ ¬{0}")]
    NotOrderReversing(Element, Element),
    #[error("no least element")]
    NoLeastElement,
    #[error("declared zero {0} is not a least element")]
    ZeroNotLeast(Element),
    #[error("{bound} is a nonzero lower bound of {element} and its complement")]
    LowerBound { element: Element, bound: Element },
    #[error("orientation enumeration exceeded the cap of {0}")]
    CapExceeded(usize),
    #[error("duality roundtrip failed: {0}")]
    Roundtrip(String),
    #[error(transparent)]
    Hyperplane(#[from] HyperplaneError),
    #[error(transparent)]
    Median(#[from] MedianError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Unvalidated pocset data: element count, `≤` pairs, involution pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPocset {
    pub size: usize,
    pub order: Vec<(Element, Element)>,
    pub involution: Vec<(Element, Element)>,
    pub zero: Option<Element>,
}

impl RawPocset {
    /// Closes the order under reflexivity, transitivity, the involution
    /// mirror (`p ≤ q ⇒ ¬q ≤ ¬p`) and the bounds `0 ≤ p ≤ ¬0`. Involution
    /// pairs are made symmetric. Requires a well-formed involution and zero.
    pub fn closed(&self) -> Result<RawPocset, PocsetError> {
        let n = self.size;
        let neg = involution_table(n, &self.involution)?;
        let mut le = vec![FixedBitSet::with_capacity(n); n];
        for p in 0..n {
            le[p].insert(p);
        }
        for &(p, q) in &self.order {
            check(n, p)?;
            check(n, q)?;
            le[p].insert(q);
            le[neg[q]].insert(neg[p]);
        }
        if let Some(z) = self.zero {
            check(n, z)?;
            for p in 0..n {
                le[z].insert(p);
                le[p].insert(neg[z]);
            }
        }
        // Warshall closure; the mirror of a closed relation stays closed
        for k in 0..n {
            for i in 0..n {
                if le[i].contains(k) {
                    let row = le[k].clone();
                    le[i].union_with(&row);
                }
            }
        }
        let order = (0..n).flat_map(|p| le[p].ones().map(move |q| (p, q))).collect::<Vec<_>>();
        let involution = (0..n).map(|p| (p, neg[p])).collect();
        Ok(RawPocset { size: n, order, involution, zero: self.zero })
    }
}

fn check(n: usize, p: Element) -> Result<(), PocsetError> {
    if p < n {
        Ok(())
    } else {
        Err(PocsetError::UnknownElement(p))
    }
}

fn involution_table(n: usize, pairs: &[(Element, Element)]) -> Result<Vec<Element>, PocsetError> {
    let mut neg = vec![usize::MAX; n];
    for &(p, q) in pairs {
        check(n, p)?;
        check(n, q)?;
        for (a, b) in [(p, q), (q, p)] {
            if neg[a] != usize::MAX && neg[a] != b {
                return Err(PocsetError::ConflictingInvolution(a));
            }
            neg[a] = b;
        }
    }
    if let Some(p) = neg.iter().position(|&q| q == usize::MAX) {
        return Err(PocsetError::MissingInvolution(p));
    }
    if let Some(p) = (0..n).find(|&p| neg[p] == p) {
        return Err(PocsetError::FixedPoint(p));
    }
    Ok(neg)
}

/// A validated finite pocset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pocset {
    /// `up[p] = {q | p ≤ q}`
    up: Vec<FixedBitSet>,
    neg: Vec<Element>,
    zero: Element,
}

/// Checks every pocset axiom on raw data without closing it first.
pub fn validate_pocset(raw: &RawPocset) -> Result<Pocset, PocsetError> {
    let n = raw.size;
    if n == 0 {
        return Err(PocsetError::Empty);
    }
    let neg = involution_table(n, &raw.involution)?;
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for &(p, q) in &raw.order {
        check(n, p)?;
        check(n, q)?;
        up[p].insert(q);
    }
    let le = |p: Element, q: Element| up[p].contains(q);
    if let Some(p) = (0..n).find(|&p| !le(p, p)) {
        return Err(PocsetError::NotReflexive(p));
    }
    for p in 0..n {
        for q in up[p].ones() {
            if p != q && le(q, p) {
                return Err(PocsetError::NotAntisymmetric(p, q));
            }
            for r in up[q].ones() {
                if !le(p, r) {
                    return Err(PocsetError::NotTransitive(p, q, r));
                }
            }
            if !le(neg[q], neg[p]) {
                return Err(PocsetError::NotOrderReversing(p, q));
            }
        }
    }
    let zero = match raw.zero {
        Some(z) => {
            check(n, z)?;
            if up[z].count_ones(..) != n {
                return Err(PocsetError::ZeroNotLeast(z));
            }
            z
        }
        None => (0..n).find(|&z| up[z].count_ones(..) == n).ok_or(PocsetError::NoLeastElement)?,
    };
    for p in 0..n {
        for b in 0..n {
            if b != zero && le(b, p) && le(b, neg[p]) {
                return Err(PocsetError::LowerBound { element: p, bound: b });
            }
        }
    }
    Ok(Pocset { up, neg, zero })
}

impl Pocset {
    pub fn len(&self) -> usize {
        self.neg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neg.is_empty()
    }

    pub fn le(&self, p: Element, q: Element) -> bool {
        self.up[p].contains(q)
    }

    pub fn neg(&self, p: Element) -> Element {
        self.neg[p]
    }

    pub fn zero(&self) -> Element {
        self.zero
    }

    pub fn up(&self, p: Element) -> &FixedBitSet {
        &self.up[p]
    }

    /// The lower-id element of every complement pair, ascending.
    pub fn representatives(&self) -> Vec<Element> {
        (0..self.len()).filter(|&p| p < self.neg[p]).collect()
    }

    pub fn to_raw(&self) -> RawPocset {
        let n = self.len();
        RawPocset {
            size: n,
            order: (0..n).flat_map(|p| self.up[p].ones().map(move |q| (p, q))).collect(),
            involution: (0..n).filter(|&p| p < self.neg[p]).map(|p| (p, self.neg[p])).collect(),
            zero: Some(self.zero),
        }
    }

    /// Whether `set` is upward closed and holds exactly one of each pair.
    pub fn is_orientation(&self, set: &FixedBitSet) -> bool {
        (0..self.len()).all(|p| set.contains(p) != set.contains(self.neg[p]))
            && set.ones().all(|p| self.up[p].is_subset(set))
    }

    /// Greedy seed: for each undecided pair in id order add the upset of its
    /// lower-id element (of `¬0` for the zero pair). A conflict would need a
    /// nonzero lower bound of some `{q, ¬q}`, so the result is an orientation.
    fn seed_orientation(&self) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.len());
        for p in self.representatives() {
            if set.contains(p) || set.contains(self.neg[p]) {
                continue;
            }
            let pick = if p == self.zero { self.neg[p] } else { p };
            set.union_with(&self.up[pick]);
        }
        set
    }

    /// Elements minimal in `u`, excluding `¬0`.
    fn flippable(&self, u: &FixedBitSet) -> Vec<Element> {
        let top = self.neg[self.zero];
        u.ones().filter(|&p| p != top && !u.ones().any(|q| q != p && self.le(q, p))).collect()
    }

    /// All orientations, in breadth-first order from the greedy seed,
    /// flipping minimal elements.
    pub fn orientations(&self, cap: usize) -> Result<Vec<Orientation>, PocsetError> {
        Ok(self.enumerate(cap)?.0)
    }

    /// Orientations and the flip edges between them.
    fn enumerate(&self, cap: usize) -> Result<(Vec<Orientation>, Vec<Edge>), PocsetError> {
        let seed = self.seed_orientation();
        debug_assert!(self.is_orientation(&seed));
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut found = vec![seed.clone()];
        index.insert(seed, 0);
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let u = found[i].clone();
            for p in self.flippable(&u) {
                let mut v = u.clone();
                v.set(p, false);
                v.insert(self.neg[p]);
                let j = match index.get(&v) {
                    Some(&j) => j,
                    None => {
                        if found.len() == cap {
                            return Err(PocsetError::CapExceeded(cap));
                        }
                        if !self.is_orientation(&v) {
                            return Err(PocsetError::Roundtrip(format!("flipping {p} left the orientations")));
                        }
                        index.insert(v.clone(), found.len());
                        found.push(v);
                        queue.push_back(found.len() - 1);
                        found.len() - 1
                    }
                };
                if i < j {
                    edges.push((i, j));
                }
            }
        }
        Ok((found.into_iter().map(|chosen| Orientation { chosen }).collect(), edges))
    }

    /// The dual median graph: orientations adjacent when `|U ∖ V| = 1`.
    pub fn dual_median_graph(&self, cap: usize) -> Result<DualGraph, PocsetError> {
        let (orientations, edges) = self.enumerate(cap)?;
        let graph = Graph::from_edges_dedup(orientations.len(), edges)?;
        let lookup = orientations.iter().enumerate().map(|(i, o)| (o.chosen.clone(), i)).collect();
        Ok(DualGraph { graph, orientations, lookup })
    }

    /// Majority vote of three orientations.
    pub fn majority(&self, u: &Orientation, v: &Orientation, w: &Orientation) -> Orientation {
        let (a, b, c) = (&u.chosen, &v.chosen, &w.chosen);
        let m = &(&(a & b) | &(b & c)) | &(a & c);
        Orientation { chosen: m }
    }
}

/// An orientation as a bitset over elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub chosen: FixedBitSet,
}

impl Orientation {
    pub fn contains(&self, p: Element) -> bool {
        self.chosen.contains(p)
    }

    /// Sign vector over the pair representatives: `true` when the
    /// representative itself is chosen.
    pub fn signs(&self, pocset: &Pocset) -> Vec<bool> {
        pocset.representatives().into_iter().map(|p| self.chosen.contains(p)).collect()
    }

    /// `|self ∖ other|`
    pub fn difference_count(&self, other: &Orientation) -> usize {
        self.chosen.difference_count(&other.chosen)
    }
}

/// The dual median graph with its orientation labels.
#[derive(Debug, Clone)]
pub struct DualGraph {
    pub graph: Graph,
    pub orientations: Vec<Orientation>,
    lookup: HashMap<FixedBitSet, usize>,
}

impl DualGraph {
    pub fn vertex_of(&self, chosen: &FixedBitSet) -> Option<Vertex> {
        self.lookup.get(chosen).copied()
    }
}

/// Half-space pocset of a median graph: element 0 is `∅`, element 1 the
/// whole vertex set, and element `2 + h` the half-space with id `h`.
pub fn halfspace_pocset(h: &Hyperplanes) -> Pocset {
    let sides = h.sides(true);
    let neg: Vec<Element> = (0..sides.len())
        .map(|p| match p {
            0 => 1,
            1 => 0,
            _ => 2 + h.halfspace(p - 2).complement,
        })
        .collect();
    sets_pocset(&sides, neg, 0)
}

/// Pocset of distinct sets ordered by inclusion with the given involution.
pub(crate) fn sets_pocset(sets: &[VertexSet], neg: Vec<Element>, zero: Element) -> Pocset {
    let n = sets.len();
    let up = (0..n)
        .map(|p| {
            let mut row = FixedBitSet::with_capacity(n);
            row.extend((0..n).filter(|&q| sets[p].is_subset(&sets[q])));
            row
        })
        .collect();
    Pocset { up, neg, zero }
}

/// Principal orientation `x̂` of each vertex, over half-space pocset elements.
pub fn principal_orientation(h: &Hyperplanes, x: Vertex) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(h.len() + 2);
    set.insert(1);
    set.extend(h.signature(x).ones().map(|p| p + 2));
    set
}

/// Result of a graph roundtrip: the vertex map `x ↦ x̂` into the dual.
#[derive(Debug, Clone)]
pub struct GraphRoundtrip {
    pub dual: DualGraph,
    pub map: Vec<Vertex>,
}

/// Checks `G ≅ dual(halfspace_pocset(G))` via principal orientations.
pub fn roundtrip_graph(g: &MedianGraph) -> Result<GraphRoundtrip, PocsetError> {
    let h = Hyperplanes::compute(g)?;
    let pocset = halfspace_pocset(&h);
    let dual = pocset.dual_median_graph(DEFAULT_ORIENTATION_CAP.max(g.vertex_count()))?;
    let graph = g.graph();
    if dual.graph.vertex_count() != graph.vertex_count() || dual.graph.edge_count() != graph.edge_count() {
        return Err(PocsetError::Roundtrip(format!(
            "dual has {} vertices and {} edges, graph has {} and {}",
            dual.graph.vertex_count(),
            dual.graph.edge_count(),
            graph.vertex_count(),
            graph.edge_count()
        )));
    }
    let map = graph
        .vertices()
        .map(|x| {
            dual.vertex_of(&principal_orientation(&h, x))
                .ok_or_else(|| PocsetError::Roundtrip(format!("principal orientation of {x} is missing")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut hit = vec![false; map.len()];
    for &m in &map {
        if std::mem::replace(&mut hit[m], true) {
            return Err(PocsetError::Roundtrip("principal map is not injective".into()));
        }
    }
    if let Some((a, b)) = graph.edges().find(|&(a, b)| !dual.graph.has_edge(map[a], map[b])) {
        return Err(PocsetError::Roundtrip(format!("edge ({a}, {b}) is not preserved")));
    }
    Ok(GraphRoundtrip { dual, map })
}

/// Result of a pocset roundtrip: each element `p` ↦ its half-space `p̂`
/// given as a pocset element of the dual's half-space pocset.
#[derive(Debug, Clone)]
pub struct PocsetRoundtrip {
    pub dual: DualGraph,
    pub map: Vec<Element>,
}

/// Checks `P ≅ halfspace_pocset(dual(P))` via `p ↦ {U | p ∈ U}`.
pub fn roundtrip_pocset(p: &Pocset, cap: usize) -> Result<PocsetRoundtrip, PocsetError> {
    let dual = p.dual_median_graph(cap)?;
    let mg = MedianGraph::from_trusted(dual.graph.clone())?;
    let h = Hyperplanes::compute(&mg)?;
    let target = halfspace_pocset(&h);
    let sides = h.sides(true);
    let index: HashMap<&FixedBitSet, Element> = sides.iter().enumerate().map(|(i, s)| (s.bits(), i)).collect();
    let nv = dual.graph.vertex_count();
    let map = (0..p.len())
        .map(|e| {
            let hat = VertexSet::from_vertices(nv, (0..nv).filter(|&u| dual.orientations[u].contains(e)));
            index
                .get(hat.bits())
                .copied()
                .ok_or_else(|| PocsetError::Roundtrip(format!("element {e} is not sent to a half-space")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if p.len() != target.len() {
        return Err(PocsetError::Roundtrip(format!("{} elements but {} half-spaces", p.len(), target.len())));
    }
    for a in 0..p.len() {
        if target.neg(map[a]) != map[p.neg(a)] {
            return Err(PocsetError::Roundtrip(format!("involution not preserved at {a}")));
        }
        for b in 0..p.len() {
            if p.le(a, b) != target.le(map[a], map[b]) {
                return Err(PocsetError::Roundtrip(format!("order not preserved at ({a}, {b})")));
            }
        }
    }
    Ok(PocsetRoundtrip { dual, map })
}
