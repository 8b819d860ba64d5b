//! Median graphs, pocset duality, cut families, tree extraction and
//! end-directed flows on finite graphs.
//!
//! [`graph::Graph`] is the shared vertex-id graph; [`median::MedianGraph`]
//! wraps graphs verified to be median and is the entry point for
//! [`hyperplane::Hyperplanes`], tree extraction and flows.

#![allow(clippy::needless_range_loop)]

pub mod cuts;
pub mod dot;
pub mod extract;
pub mod flow;
pub mod generate;
pub mod graph;
pub mod hyperplane;
pub mod io;
pub mod median;
pub mod oneended;
pub mod pipeline;
pub mod pocset;
pub mod treedec;
pub mod walling;
pub mod window;

pub use cuts::{Cut, CutFamily, Provenance};
pub use extract::{ColoringMode, HalfspaceColoring, StagedForest};
pub use flow::{EndTarget, FlowForest};
pub use graph::{BoundaryBundle, Convexity, Edge, Graph, GraphError, Vertex, VertexSet};
pub use hyperplane::{HalfSpace, HalfSpaceId, HyperplaneId, Hyperplanes};
pub use io::LabeledGraph;
pub use median::{check_median, MedianCertificate, MedianError, MedianGraph};
pub use oneended::{FerSequence, Partition, SetFamily};
pub use pocset::{Pocset, RawPocset};
pub use treedec::{RawTreeDecomposition, TreeDecomposition};
pub use walling::Walling;
pub use window::{WindowFamily, WindowedFamily};
