//! Hyperfiniteness witnesses for one-ended families and leaf pruning of
//! median graphs toward an orientation.

use std::collections::HashMap;
use std::hash::Hash;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Vertex, VertexSet};
use crate::hyperplane::{HalfSpaceId, Hyperplanes};
use crate::median::MedianError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OneEndedError {
    #[error("set {0} has capacity {1}, expected ground size {2}")]
    GroundMismatch(usize, usize, usize),
    #[error("orientation has {found} bits, expected {expected}")]
    OrientationSize { expected: usize, found: usize },
    #[error("not an orientation: {0}")]
    NotOrientation(String),
    #[error(transparent)]
    Median(#[from] MedianError),
}

/// A partition of `0..n` as a class index per point, classes numbered by
/// least member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    pub class_of: Vec<usize>,
}

impl Partition {
    pub fn from_keys<K: Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let class_of = keys
            .into_iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Partition { class_of }
    }

    pub fn discrete(n: usize) -> Self {
        Partition { class_of: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_of.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn is_full(&self) -> bool {
        self.class_count() <= 1
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    /// Whether every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        let mut image: HashMap<usize, usize> = HashMap::new();
        self.len() == coarser.len()
            && self.class_of.iter().zip(&coarser.class_of).all(|(&a, &b)| *image.entry(a).or_insert(b) == b)
    }
}

/// Increasing sequence of partitions `F_0 ⊆ F_1 ⊆ ⋯`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FerSequence {
    pub partitions: Vec<Partition>,
}

impl FerSequence {
    pub fn is_increasing(&self) -> bool {
        self.partitions.windows(2).all(|w| w[0].refines(&w[1]))
    }

    pub fn ends_full(&self) -> bool {
        self.partitions.last().is_some_and(Partition::is_full)
    }

    /// The prefix up to and including the first full partition.
    pub fn stabilized(&self) -> &[Partition] {
        let end = self.partitions.iter().position(Partition::is_full).map_or(self.partitions.len(), |i| i + 1);
        &self.partitions[..end]
    }
}

/// A family `I*` of subsets of the ground set `0..ground`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    pub ground: usize,
    pub sets: Vec<VertexSet>,
}

impl SetFamily {
    /// Drops empty sets and duplicates, keeping first occurrences.
    pub fn new(ground: usize, sets: impl IntoIterator<Item = VertexSet>) -> Result<Self, OneEndedError> {
        let mut out: Vec<VertexSet> = Vec::new();
        for (i, s) in sets.into_iter().enumerate() {
            if s.capacity() != ground {
                return Err(OneEndedError::GroundMismatch(i, s.capacity(), ground));
            }
            if !s.is_empty() && !out.contains(&s) {
                out.push(s);
            }
        }
        Ok(SetFamily { ground, sets: out })
    }

    pub fn max_size(&self) -> usize {
        self.sets.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Points not separated by any of the chosen sets.
    fn partition_by<'a>(&self, chosen: impl Iterator<Item = &'a VertexSet> + Clone) -> Partition {
        Partition::from_keys((0..self.ground).map(|x| chosen.clone().map(|s| s.contains(x)).collect::<Vec<bool>>()))
    }

    /// Minimal elements under inclusion among `idx`.
    fn minimal(&self, idx: &[usize]) -> Vec<usize> {
        idx.iter().copied().filter(|&i| !idx.iter().any(|&j| j != i && self.sets[j].is_subset(&self.sets[i]))).collect()
    }
}

/// `x F_n y` iff every `I` with `|I| > n` contains both or neither,
/// for `n = 0..=max |I|`.
pub fn oneended_fer_witness(w: &SetFamily) -> FerSequence {
    let partitions = (0..=w.max_size()).map(|n| w.partition_by(w.sets.iter().filter(move |s| s.len() > n))).collect();
    FerSequence { partitions }
}

/// As [`oneended_fer_witness`] with `|I| > n` replaced by membership in
/// `I_n`, where `I_0 = I*` and `I_{n+1}` drops the minimal elements of
/// `I_n`. Ends with the partition for the first empty `I_n`.
pub fn oneended_fer_witness_rank(w: &SetFamily) -> FerSequence {
    let mut current: Vec<usize> = (0..w.sets.len()).collect();
    let mut partitions = Vec::new();
    loop {
        partitions.push(w.partition_by(current.iter().map(|&i| &w.sets[i])));
        if current.is_empty() {
            break;
        }
        let minimal = w.minimal(&current);
        current.retain(|i| !minimal.contains(i));
    }
    FerSequence { partitions }
}

/// Finite witnesses for the one-ended axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OneEndedReport {
    /// Points in no member of the family.
    pub uncovered: Vec<usize>,
    /// Whether the ground set itself is a member, which on finite data is
    /// cofinality among finite subsets.
    pub cofinal: bool,
    /// Max over ordered pairs `(x, y)` of `#{J : x ∈ J, y ∉ J}`.
    pub max_separating: usize,
    /// Per `I`: `#{J : I ∩ J ≠ ∅, I ∖ J ≠ ∅}`.
    pub splitting: Vec<usize>,
    /// Per `I`: `#{J non-nested with I}`.
    pub non_nested: Vec<usize>,
    /// Per `I`: splitting sets that are nested with `I`.
    pub nested_splitting: Vec<usize>,
    /// Every non-nested set splits, and every nested splitting set is
    /// either a proper subset of `I` or covers the complement of `I`.
    pub witnesses_consistent: bool,
}

fn nested(a: &VertexSet, b: &VertexSet) -> bool {
    a.is_subset(b) || b.is_subset(a) || a.is_disjoint(b) || a.union(b).is_full()
}

fn splits(i: &VertexSet, j: &VertexSet) -> bool {
    !i.is_disjoint(j) && !i.is_subset(j)
}

pub fn oneended_axiom_check(w: &SetFamily) -> OneEndedReport {
    let sets = &w.sets;
    let uncovered = (0..w.ground).filter(|&x| !sets.iter().any(|s| s.contains(x))).collect();
    let cofinal = sets.iter().any(VertexSet::is_full);
    let mut max_separating = 0;
    for x in 0..w.ground {
        for y in 0..w.ground {
            let c = sets.iter().filter(|s| s.contains(x) && !s.contains(y)).count();
            max_separating = max_separating.max(c);
        }
    }
    let mut splitting = Vec::with_capacity(sets.len());
    let mut non_nested = Vec::with_capacity(sets.len());
    let mut nested_splitting = Vec::with_capacity(sets.len());
    let mut witnesses_consistent = true;
    for (a, i) in sets.iter().enumerate() {
        let (mut sp, mut nn, mut ns) = (0, 0, 0);
        for (b, j) in sets.iter().enumerate() {
            if a == b {
                continue;
            }
            let s = splits(i, j);
            let n = !nested(i, j);
            sp += s as usize;
            nn += n as usize;
            if n && !s {
                witnesses_consistent = false;
            }
            if s && !n {
                ns += 1;
                if !(j.is_subset(i) || i.union(j).is_full()) {
                    witnesses_consistent = false;
                }
            }
        }
        splitting.push(sp);
        non_nested.push(nn);
        nested_splitting.push(ns);
    }
    OneEndedReport { uncovered, cofinal, max_separating, splitting, non_nested, nested_splitting, witnesses_consistent }
}

/// Leaf pruning toward an orientation `U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafPrune {
    /// `F_0` (discrete) followed by one partition per stage.
    pub fer: FerSequence,
    /// Vertices deleted at each stage, ascending.
    pub stages: Vec<Vec<Vertex>>,
    /// `(deleted vertex, its gate projection onto the survivors)`.
    pub forest: Vec<Edge>,
    /// The block of `U`: vertices never deleted.
    pub survivors: Vec<Vertex>,
}

/// The orientation of the half-space pocset consisting of the half-spaces
/// containing `x`.
pub fn principal_halfspaces(h: &Hyperplanes, x: Vertex) -> FixedBitSet {
    h.signature(x).clone()
}

/// Repeatedly deletes the vertices lying in minimal half-spaces of
/// `I_n = {H ∉ U}`, attaching each to its gate projection onto the
/// remaining convex set.
pub fn leaf_prune(h: &Hyperplanes, u: &FixedBitSet) -> Result<LeafPrune, OneEndedError> {
    let mg = h.median_graph();
    let n = mg.vertex_count();
    let m = h.len();
    if u.len() != m {
        return Err(OneEndedError::OrientationSize { expected: m, found: u.len() });
    }
    for hp in 0..h.hyperplane_count() {
        let [a, b] = h.hyperplane(hp);
        if u.contains(a) == u.contains(b) {
            return Err(OneEndedError::NotOrientation(format!("hyperplane {hp} is not chosen exactly once")));
        }
    }
    let mut block = VertexSet::full(n);
    for id in u.ones() {
        block.intersect_with(&h.halfspace(id).side);
    }
    if block.is_empty() || (0..n).find(|&x| block.contains(x)).is_some_and(|x| h.signature(x) != u) {
        return Err(OneEndedError::NotOrientation("chosen half-spaces have no common vertex".into()));
    }

    let mut remaining: Vec<HalfSpaceId> = (0..m).filter(|&id| !u.contains(id)).collect();
    let mut alive = VertexSet::full(n);
    let mut uf = UnionFind::<usize>::new(n);
    let mut partitions = vec![Partition::discrete(n)];
    let mut stages = Vec::new();
    let mut forest = Vec::new();
    while !remaining.is_empty() {
        let minimal: Vec<HalfSpaceId> = remaining
            .iter()
            .copied()
            .filter(|&a| {
                let sa = &h.halfspace(a).side;
                !remaining.iter().any(|&b| b != a && h.halfspace(b).side.is_subset(sa))
            })
            .collect();
        let mut deleted = VertexSet::empty(n);
        for &id in &minimal {
            deleted.union_with(&h.halfspace(id).side);
        }
        deleted.intersect_with(&alive);
        alive = alive.difference(&deleted);
        let removed = deleted.to_vec();
        for &x in &removed {
            let p = mg.gate_projection(&alive, x)?;
            forest.push((x, p));
            uf.union(x, p);
        }
        partitions.push(Partition::from_keys((0..n).map(|x| uf.find_mut(x))));
        stages.push(removed);
        remaining.retain(|id| !minimal.contains(id));
    }
    Ok(LeafPrune { fer: FerSequence { partitions }, stages, forest, survivors: alive.to_vec() })
}
