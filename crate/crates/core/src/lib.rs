//! Self-similar zippers and iterated function systems in the plane.
//!
//! The crate builds planar zippers (vertex chains stitched by contraction
//! maps), computes attractors of iterated function systems by deterministic
//! Hutchinson iteration and by the chaos game, evaluates the linear
//! parametrization that traverses a zipper's attractor as a space-filling
//! curve, and ships a verification lab for a five-map dendrite system whose
//! connectivity, cut points, and horizontal-segment structure are all
//! checkable numerically.
//!
//! The `zipcurve` binary exposes the same operations on the command line and
//! renders curves and point clouds to SVG or CSV.

pub mod attractor;
pub mod catalog;
pub mod cellgraph;
pub mod cli;
pub mod config;
pub mod dendrite;
pub mod error;
pub mod geom;
pub mod parametrize;
pub mod render;
pub mod zipper;

pub use attractor::{MultiIndex, PointCloud, IFS};
pub use cellgraph::CellGraph;
pub use cli::run;
pub use parametrize::Parametrization;
pub use error::{Error, Result};
pub use geom::{Point2, Similarity2};
pub use zipper::{Partition, Signature, Zipper};
