//! Cell adjacency graphs: the combinatorial skeleton of an attractor.
//!
//! At depth `n` an attractor `K` decomposes into `m^n` cells `S_w(K)` over
//! words `|w| = n`. Two cells either touch (share at least one point) or are
//! separated by a positive distance. Recording which pairs touch yields a
//! finite graph whose connectivity mirrors the attractor's: `K` is connected
//! iff every depth's graph is connected, and local cut structure shows up as
//! the graph falling apart when the cells meeting a small disk are removed.
//!
//! Cells are represented by finite samples with a known covering radius, so
//! "touching" becomes "sample point sets within a tolerance that separates
//! true contact from true gaps".

use std::collections::HashSet;

use petgraph::unionfind::UnionFind;

use crate::attractor::{GridIndex, MultiIndex, PointCloud, IFS};
use crate::error::{Error, Result};
use crate::geom::Point2;

/// The touch graph of an attractor's depth-`n` cells.
///
/// Nodes are the `m^n` address words in lexicographic order; edges join
/// distinct cells whose sample point sets come within the touch tolerance.
#[derive(Debug, Clone)]
pub struct CellGraph {
    depth: usize,
    touch_tol: f64,
    nodes: Vec<MultiIndex>,
    edges: Vec<(u32, u32)>,
    cells: Vec<Vec<Point2>>,
}

/// What happened when a disk was deleted from a cell graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemovalReport {
    /// Cells whose sample met the disk (deleted).
    pub removed_cells: usize,
    /// Cells that survived.
    pub remaining_cells: usize,
    /// Connected components among the survivors.
    pub components: usize,
}

/// Touch tolerance matched to a sampled cell graph: seed samples cover their
/// cell to radius `seed_resolution * ratio_w`, so genuinely touching cells
/// show a sample gap of at most twice the scaled resolution; the additive
/// floor absorbs roundoff.
pub fn default_touch_tol(ifs: &IFS, depth: usize, seed_resolution: f64) -> f64 {
    1e-6 + 2.0 * seed_resolution * ifs.r_max().powi(depth as i32)
}

/// Builds the depth-`n` cell touch graph from a sample of the attractor.
///
/// `seed` must be a sample lying on the attractor (e.g. from
/// [`crate::attractor::adaptive_cloud`]); each cell's point set is the image
/// of the seed under its address word. Two cells are joined when their point
/// sets come within `touch_tol` of each other. Tolerance selection is the
/// caller's contract: [`default_touch_tol`] matches seeds with a known
/// covering resolution.
pub fn cell_adjacency_graph(
    ifs: &IFS,
    depth: usize,
    seed: &PointCloud,
    touch_tol: f64,
    budget: u64,
) -> Result<CellGraph> {
    if seed.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let m = ifs.len();
    let cell_count = (m as f64).powi(depth as i32);
    let total_points = cell_count * seed.len() as f64;
    if total_points > budget as f64 {
        return Err(Error::BudgetExceeded {
            needed: if total_points > u64::MAX as f64 {
                u64::MAX
            } else {
                total_points as u64
            },
            budget,
        });
    }

    // Enumerate cells in lexicographic address order.
    let mut nodes = Vec::with_capacity(cell_count as usize);
    let mut cells = Vec::with_capacity(cell_count as usize);
    let mut word = Vec::with_capacity(depth);
    enumerate_cells(ifs, depth, seed.points(), &mut word, &mut nodes, &mut cells);

    // Candidate pairs by expanded bounding-box overlap, then exact
    // point-to-point proximity via a per-cell grid index.
    let boxes: Vec<(Point2, Point2)> = cells
        .iter()
        .map(|c| bounding_box_of(c))
        .collect();
    let grids: Vec<GridIndex> = cells.iter().map(|c| GridIndex::build(c)).collect();
    let tol_sq = touch_tol * touch_tol;
    let mut edges = Vec::new();
    for i in 0..cells.len() {
        for j in (i + 1)..cells.len() {
            if !boxes_within(&boxes[i], &boxes[j], touch_tol) {
                continue;
            }
            let touching = cells[i]
                .iter()
                .any(|&p| grids[j].any_within_sq(p, tol_sq));
            if touching {
                edges.push((i as u32, j as u32));
            }
        }
    }

    Ok(CellGraph {
        depth,
        touch_tol,
        nodes,
        edges,
        cells,
    })
}

fn enumerate_cells(
    ifs: &IFS,
    depth_left: usize,
    seed: &[Point2],
    word: &mut Vec<u8>,
    nodes: &mut Vec<MultiIndex>,
    cells: &mut Vec<Vec<Point2>>,
) {
    if depth_left == 0 {
        let map = ifs.word_map(word);
        nodes.push(MultiIndex::new(word.clone(), ifs.len()).expect("digits generated in range"));
        cells.push(seed.iter().map(|&p| map.apply(p)).collect());
        return;
    }
    for d in 1..=ifs.len() as u8 {
        word.push(d);
        enumerate_cells(ifs, depth_left - 1, seed, word, nodes, cells);
        word.pop();
    }
}

fn bounding_box_of(points: &[Point2]) -> (Point2, Point2) {
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

fn boxes_within(a: &(Point2, Point2), b: &(Point2, Point2), tol: f64) -> bool {
    a.0.x - tol <= b.1.x && b.0.x - tol <= a.1.x && a.0.y - tol <= b.1.y && b.0.y - tol <= a.1.y
}

impl CellGraph {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn touch_tol(&self) -> f64 {
        self.touch_tol
    }

    /// Address words in lexicographic order.
    pub fn nodes(&self) -> &[MultiIndex] {
        &self.nodes
    }

    /// Touching pairs `(i, j)` with `i < j`, lexicographically sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Sample point sets, parallel to [`CellGraph::nodes`].
    pub fn cells(&self) -> &[Vec<Point2>] {
        &self.cells
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Index of an address word among the nodes.
    pub fn node_index(&self, word: &MultiIndex) -> Option<usize> {
        self.nodes.binary_search(word).ok()
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::<u32>::new(self.nodes.len());
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let roots: HashSet<u32> = (0..self.nodes.len() as u32).map(|i| uf.find(i)).collect();
        roots.len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Connected with exactly `nodes - 1` edges: the graph is a tree, so the
    /// cell complex carries no cycle at this depth.
    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.node_count()
    }

    /// Indices of cells whose sample meets the closed disk.
    pub fn cells_meeting_disk(&self, center: Point2, radius: f64) -> Vec<usize> {
        let r_sq = radius * radius;
        (0..self.cells.len())
            .filter(|&i| self.cells[i].iter().any(|p| p.dist_sq(center) <= r_sq))
            .collect()
    }

    /// Deletes every cell meeting the closed disk and reports the component
    /// structure of what remains.
    ///
    /// Fails with [`Error::RemovalSwallowedGraph`] when nothing survives —
    /// the disk was too large for this depth, so the answer would say nothing
    /// about local cut structure.
    pub fn components_after_removal(&self, center: Point2, radius: f64) -> Result<RemovalReport> {
        let removed: HashSet<usize> = self.cells_meeting_disk(center, radius).into_iter().collect();
        let remaining_cells = self.nodes.len() - removed.len();
        if remaining_cells == 0 {
            return Err(Error::RemovalSwallowedGraph);
        }
        let mut uf = UnionFind::<u32>::new(self.nodes.len());
        for &(a, b) in &self.edges {
            if !removed.contains(&(a as usize)) && !removed.contains(&(b as usize)) {
                uf.union(a, b);
            }
        }
        let roots: HashSet<u32> = (0..self.nodes.len() as u32)
            .filter(|i| !removed.contains(&(*i as usize)))
            .map(|i| uf.find(i))
            .collect();
        Ok(RemovalReport {
            removed_cells: removed.len(),
            remaining_cells,
            components: roots.len(),
        })
    }
}
