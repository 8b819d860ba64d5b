//! Wallings: complement-closed families of subsets of a finite ground set.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::graph::{Vertex, VertexSet};
use crate::pocset::{sets_pocset, DualGraph, Pocset, PocsetError};

/// A complement-closed family of walls over the ground set `0..ground`.
///
/// Wall 0 is `∅` and wall 1 is the whole ground set.
#[derive(Debug, Clone)]
pub struct Walling {
    ground: usize,
    walls: Vec<VertexSet>,
    complement: Vec<usize>,
    /// Walls added to close the input: complements and trivial walls.
    pub added_complements: usize,
    pub added_trivial: usize,
}

impl Walling {
    /// Builds a walling from arbitrary walls, deduplicating and adding
    /// missing complements and the trivial pair.
    pub fn new(ground: usize, walls: impl IntoIterator<Item = VertexSet>) -> Self {
        let empty = VertexSet::empty(ground);
        let full = VertexSet::full(ground);
        let mut index: HashMap<VertexSet, usize> = HashMap::new();
        let mut list = Vec::new();
        let mut push = |s: VertexSet, list: &mut Vec<VertexSet>| {
            if index.contains_key(&s) {
                false
            } else {
                index.insert(s.clone(), list.len());
                list.push(s);
                true
            }
        };
        push(empty.clone(), &mut list);
        push(full.clone(), &mut list);
        let walls: Vec<VertexSet> = walls.into_iter().collect();
        let given: std::collections::HashSet<&VertexSet> = walls.iter().collect();
        let given_trivial = [given.contains(&empty), given.contains(&full)];
        let mut added_complements = 0;
        for w in &walls {
            let c = w.complement();
            let missing = !given.contains(&c);
            if push(w.clone(), &mut list) && push(c, &mut list) && missing {
                added_complements += 1;
            }
        }
        let added_trivial = given_trivial.iter().filter(|&&given| !given).count();
        let lookup: HashMap<&VertexSet, usize> = list.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let complement = list.iter().map(|s| lookup[&s.complement()]).collect();
        Walling { ground, walls: list, complement, added_complements, added_trivial }
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn walls(&self) -> &[VertexSet] {
        &self.walls
    }

    pub fn complement_of(&self, wall: usize) -> usize {
        self.complement[wall]
    }

    /// Nontrivial walls (ids `2..`).
    pub fn nontrivial(&self) -> impl Iterator<Item = usize> + '_ {
        2..self.walls.len()
    }

    /// The walls ordered by inclusion, as a pocset (element ids = wall ids).
    pub fn pocset(&self) -> Pocset {
        sets_pocset(&self.walls, self.complement.clone(), 0)
    }

    /// Principal orientation of a point: the walls containing it.
    pub fn principal(&self, x: Vertex) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.walls.len());
        set.extend((0..self.walls.len()).filter(|&w| self.walls[w].contains(x)));
        set
    }

    fn nested(&self, a: usize, b: usize) -> bool {
        let (x, y) = (&self.walls[a], &self.walls[b]);
        x.is_subset(y) || y.is_subset(x) || x.is_disjoint(y) || x.union(y).is_full()
    }

    /// Walls strictly containing `w` with nothing strictly in between,
    /// among nontrivial walls.
    pub fn successors(&self, w: usize) -> Vec<usize> {
        let s = &self.walls;
        let above: Vec<usize> = self.nontrivial().filter(|&k| k != w && s[w].is_subset(&s[k])).collect();
        above.iter().copied().filter(|&k| !above.iter().any(|&l| l != k && s[l].is_subset(&s[k]))).collect()
    }
}

/// Partition of the ground set into points contained in the same walls.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockPartition {
    /// Blocks ordered by least member; each sorted ascending.
    pub blocks: Vec<Vec<Vertex>>,
    /// Block index of each point.
    pub block_of: Vec<usize>,
}

impl BlockPartition {
    /// The least point of each block.
    pub fn representative(&self, block: usize) -> Vertex {
        self.blocks[block][0]
    }
}

pub fn blocks(w: &Walling) -> BlockPartition {
    let mut by_signature: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    let mut block_of = Vec::with_capacity(w.ground);
    for x in 0..w.ground {
        let sig = w.principal(x);
        let b = *by_signature.entry(sig).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[b].push(x);
        block_of.push(b);
    }
    BlockPartition { blocks, block_of }
}

/// The dual median graph of a walling with the map from points to their
/// principal orientations.
#[derive(Debug, Clone)]
pub struct WallDual {
    pub dual: DualGraph,
    pub principal: Vec<Vertex>,
}

pub fn wall_dual(w: &Walling, cap: usize) -> Result<WallDual, PocsetError> {
    let dual = w.pocset().dual_median_graph(cap)?;
    let principal = (0..w.ground)
        .map(|x| {
            dual.vertex_of(&w.principal(x))
                .ok_or_else(|| PocsetError::Roundtrip(format!("principal orientation of {x} is missing")))
        })
        .collect::<Result<_, _>>()?;
    Ok(WallDual { dual, principal })
}

/// Finite witnessing quantities for the proper-walling axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProperWallingReport {
    pub block_count: usize,
    pub max_block_size: usize,
    /// Max over nontrivial walls of the number of hyperplanes (complement
    /// pairs) non-nested with it.
    pub max_non_nested: usize,
    /// Max over nontrivial walls of the number of nontrivial successors.
    pub max_successors: usize,
    /// Max over point pairs `(x, y)` of the walls containing `y` but not `x`.
    pub max_separating: usize,
}

pub fn proper_walling_report(w: &Walling) -> ProperWallingReport {
    let b = blocks(w);
    let pair_reps: Vec<usize> = w.nontrivial().filter(|&k| k < w.complement[k]).collect();
    let max_non_nested =
        w.nontrivial().map(|h| pair_reps.iter().filter(|&&k| !w.nested(h, k)).count()).max().unwrap_or(0);
    let max_successors = w.nontrivial().map(|h| w.successors(h).len()).max().unwrap_or(0);
    let sigs: Vec<FixedBitSet> = (0..w.ground).map(|x| w.principal(x)).collect();
    let max_separating =
        sigs.iter().flat_map(|sx| sigs.iter().map(move |sy| sy.difference_count(sx))).max().unwrap_or(0);
    ProperWallingReport {
        block_count: b.blocks.len(),
        max_block_size: b.blocks.iter().map(Vec::len).max().unwrap_or(0),
        max_non_nested,
        max_successors,
        max_separating,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::median::check_median;
    use crate::pocset::DEFAULT_ORIENTATION_CAP;

    fn prefixes(n: usize) -> Walling {
        Walling::new(n, (1..n).map(|k| VertexSet::from_vertices(n, 0..k)))
    }

    fn crossing() -> Walling {
        Walling::new(4, [VertexSet::from_vertices(4, [0, 1]), VertexSet::from_vertices(4, [0, 2])])
    }

    #[test]
    fn closure_is_reported() {
        let w = Walling::new(3, [VertexSet::from_vertices(3, [0])]);
        assert_eq!(w.walls().len(), 4);
        assert_eq!((w.added_complements, w.added_trivial), (1, 2));
        for i in 0..w.walls().len() {
            assert_eq!(w.walls()[w.complement_of(i)], w.walls()[i].complement());
        }
    }

    #[test]
    fn block_examples() {
        let w = Walling::new(3, [VertexSet::from_vertices(3, [0]), VertexSet::from_vertices(3, [1, 2])]);
        assert_eq!(blocks(&w).blocks, vec![vec![0], vec![1, 2]]);
        assert_eq!(blocks(&prefixes(5)).blocks.len(), 5);
        let trivial = Walling::new(4, []);
        assert_eq!(blocks(&trivial).blocks, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn dual_examples() {
        let d = wall_dual(&prefixes(4), DEFAULT_ORIENTATION_CAP).unwrap();
        assert_eq!(d.dual.graph.vertex_count(), 4);
        assert!(d.dual.graph.is_tree() && d.dual.graph.max_degree() == 2);
        assert_eq!(d.principal, {
            let mut p = d.principal.clone();
            p.dedup();
            p
        });

        let d = wall_dual(&crossing(), DEFAULT_ORIENTATION_CAP).unwrap();
        assert_eq!((d.dual.graph.vertex_count(), d.dual.graph.edge_count()), (4, 4));
        assert!(check_median(&d.dual.graph).unwrap().is_accepted());

        let d = wall_dual(&Walling::new(3, []), DEFAULT_ORIENTATION_CAP).unwrap();
        assert_eq!(d.dual.graph.vertex_count(), 1);
        assert_eq!(d.principal, vec![0, 0, 0]);
    }

    #[test]
    fn report_examples() {
        let r = proper_walling_report(&prefixes(5));
        assert_eq!((r.max_block_size, r.max_non_nested, r.max_successors), (1, 0, 1));
        assert_eq!(r.max_separating, 4);
        let r = proper_walling_report(&crossing());
        assert_eq!(r.max_non_nested, 1);
        let r = proper_walling_report(&Walling::new(5, []));
        assert_eq!((r.block_count, r.max_block_size), (1, 5));
    }
}
