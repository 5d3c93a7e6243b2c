//! A five-map dendrite in the plane: touch identities, a horizontal-segment
//! census, cut-point analysis, and tree checks on its cell graphs.
//!
//! The system lives in the equilateral triangle with corners `a = (0, 0)`,
//! `b = (2, 2*sqrt(3))`, `c = (4, 0)` (side 4) and consists of five
//! orientation-preserving homotheties:
//!
//! * `S1(x) = x/4` — quarter copy at the left base corner,
//! * `S2(x) = x/2 + (1, 0)` — half copy over the middle of the base,
//! * `S3(x) = x/4 + (3, 0)` — quarter copy at the right base corner,
//! * `S4(x) = x/4 + (1, sqrt(3))` — quarter copy on the left upper edge,
//! * `S5(x) = x/4 + (3/2, 3*sqrt(3)/2)` — quarter copy below the apex.
//!
//! The three trunk maps `S1, S2, S3` tile the base segment `[a, c]` end to
//! end, so the attractor contains that segment; `S4` and `S5` hang two more
//! copies above it. Consecutive copies meet in single points (the
//! *junctions*), the attractor is connected and contains no simple closed
//! curve, and the only branch points are the images of `d = (2, 0)`, the
//! fixed point of the half-scale map. The functions here probe exactly those
//! features numerically: [`verify_touch_identities`] checks the junction
//! coordinates, [`max_horizontal_segments`] measures the maximal horizontal
//! segments of a depth-`n` approximation, [`cut_point_suite`] counts
//! connected components after removing a disk around a landmark, and
//! [`tree_check`] confirms the cell graph is a tree level by level.
//! [`verify`] bundles every check into printable records.

use crate::attractor::{adaptive_cloud, IFS};
use crate::cellgraph::{cell_adjacency_graph, default_touch_tol, CellGraph};
use crate::error::{Error, Result};
use crate::geom::{Point2, Similarity2};

/// Deepest level accepted by the segment census (5^6 words is still cheap;
/// beyond that the reports stop being readable).
pub const MAX_SEGMENT_DEPTH: usize = 6;

/// Sample resolution used when seeding cell graphs for this system. With the
/// matching [`default_touch_tol`] the nearest non-touching cells (gap 1 at
/// level 1, shrinking by at worst 1/4 per level) stay clearly separated for
/// depths up to 6.
pub const GRAPH_SEED_RESOLUTION: f64 = 0.02;

fn sqrt3() -> f64 {
    3f64.sqrt()
}

/// The four labelled points of the outer triangle: corners `a`, `b`, `c` and
/// the base midpoint `d`, which is the fixed point of the half-scale map and
/// the only branch-point orbit of the attractor.
#[derive(Debug, Clone, Copy)]
pub struct Landmarks {
    /// Left base corner `(0, 0)`, fixed point of `S1`.
    pub a: Point2,
    /// Apex `(2, 2*sqrt(3))`, fixed point of `S5`.
    pub b: Point2,
    /// Right base corner `(4, 0)`, fixed point of `S3`.
    pub c: Point2,
    /// Base midpoint `(2, 0)`, fixed point of `S2`.
    pub d: Point2,
}

/// Labelled corner and midpoint coordinates of the outer triangle.
pub fn landmarks() -> Landmarks {
    Landmarks {
        a: Point2::new(0.0, 0.0),
        b: Point2::new(2.0, 2.0 * sqrt3()),
        c: Point2::new(4.0, 0.0),
        d: Point2::new(2.0, 0.0),
    }
}

/// The outer triangle as `[a, c, b]`, in counterclockwise order.
pub fn outer_triangle() -> [Point2; 3] {
    let lm = landmarks();
    [lm.a, lm.c, lm.b]
}

/// The four junction points where consecutive copies meet, in map order:
/// copies 1–2 at `(1, 0)`, 2–3 at `(3, 0)`, 2–4 at `(2, sqrt(3))`, and 4–5
/// at `(3/2, 3*sqrt(3)/2)`.
pub fn junction_points() -> [Point2; 4] {
    [
        Point2::new(1.0, 0.0),
        Point2::new(3.0, 0.0),
        Point2::new(2.0, sqrt3()),
        Point2::new(1.5, 1.5 * sqrt3()),
    ]
}

/// The five-map dendrite system described in the module docs.
pub fn standard_ifs() -> IFS {
    let s3 = sqrt3();
    IFS::new(vec![
        Similarity2::scaling(0.25, Point2::new(0.0, 0.0)),
        Similarity2::scaling(0.5, Point2::new(1.0, 0.0)),
        Similarity2::scaling(0.25, Point2::new(3.0, 0.0)),
        Similarity2::scaling(0.25, Point2::new(1.0, s3)),
        Similarity2::scaling(0.25, Point2::new(1.5, 1.5 * s3)),
    ])
    .expect("all five ratios are below one")
}

/// Variant with the half-scale map translated by `(2, 0)` instead of
/// `(1, 0)`.
///
/// The translation of the half-scale map is the load-bearing constant of the
/// construction: shifted one unit further right, the half copy no longer
/// meets the left quarter copy, and the level-1 cell graph falls apart into
/// the groups `{1}`, `{2, 3}` and `{4, 5}`. Kept as a negative control for
/// the connectivity checks.
pub fn shifted_variant_ifs() -> IFS {
    let s3 = sqrt3();
    IFS::new(vec![
        Similarity2::scaling(0.25, Point2::new(0.0, 0.0)),
        Similarity2::scaling(0.5, Point2::new(2.0, 0.0)),
        Similarity2::scaling(0.25, Point2::new(3.0, 0.0)),
        Similarity2::scaling(0.25, Point2::new(1.0, s3)),
        Similarity2::scaling(0.25, Point2::new(1.5, 1.5 * s3)),
    ])
    .expect("all five ratios are below one")
}

/// Variant with the first elevated quarter map translated down onto the
/// base, to `x/4 + (1, 0)`.
///
/// Its copy then overlaps the half copy along the base segment: copies 1, 2
/// and 4 meet pairwise (at `(1, 0)`, `(1, 0)` and `(3/2, 0)` among others),
/// so the level-1 cell graph contains a 3-cycle — while the apex copy, its
/// junction partner gone, floats disconnected. Negative control for the tree
/// checks, which must reject the level on both counts.
pub fn looped_variant_ifs() -> IFS {
    let s3 = sqrt3();
    IFS::new(vec![
        Similarity2::scaling(0.25, Point2::new(0.0, 0.0)),
        Similarity2::scaling(0.5, Point2::new(1.0, 0.0)),
        Similarity2::scaling(0.25, Point2::new(3.0, 0.0)),
        Similarity2::scaling(0.25, Point2::new(1.0, 0.0)),
        Similarity2::scaling(0.25, Point2::new(1.5, 1.5 * s3)),
    ])
    .expect("all five ratios are below one")
}

/// One verified identity: two map expressions that must land on the same
/// expected point.
#[derive(Debug, Clone)]
pub struct TouchCheck {
    /// Which identity, e.g. `"S1(C) = S2(A)"`.
    pub name: &'static str,
    /// The coordinates both sides must produce.
    pub expected: Point2,
    /// Value of the left-hand expression.
    pub left: Point2,
    /// Value of the right-hand expression.
    pub right: Point2,
    /// Largest of the three pairwise distances between `left`, `right` and
    /// `expected`.
    pub residual: f64,
    /// Whether `residual <= tol`.
    pub pass: bool,
}

/// Outcome of [`verify_touch_identities`].
#[derive(Debug, Clone)]
pub struct TouchReport {
    /// Tolerance the residuals were compared against.
    pub tol: f64,
    /// The five individual identities.
    pub checks: Vec<TouchCheck>,
    /// Largest residual over all checks.
    pub max_residual: f64,
    /// Whether every check passed.
    pub pass: bool,
}

/// Checks the five coincidences that chain the copies together: the four
/// junctions `S1(c) = S2(a)`, `S2(c) = S3(a)`, `S2(b) = S4(c)`,
/// `S4(b) = S5(a)`, and the fixed-point identity `S2(d) = d`.
///
/// All five hold exactly in real arithmetic; in `f64` they evaluate bit for
/// bit, so the residuals are zero.
pub fn verify_touch_identities(tol: f64) -> TouchReport {
    let ifs = standard_ifs();
    let lm = landmarks();
    let j = junction_points();
    let cases: [(&'static str, Point2, Point2, Point2); 5] = [
        ("S1(C) = S2(A)", j[0], ifs.map(1).apply(lm.c), ifs.map(2).apply(lm.a)),
        ("S2(C) = S3(A)", j[1], ifs.map(2).apply(lm.c), ifs.map(3).apply(lm.a)),
        ("S2(B) = S4(C)", j[2], ifs.map(2).apply(lm.b), ifs.map(4).apply(lm.c)),
        ("S4(B) = S5(A)", j[3], ifs.map(4).apply(lm.b), ifs.map(5).apply(lm.a)),
        ("S2(D) = D", lm.d, ifs.map(2).apply(lm.d), lm.d),
    ];
    let mut checks = Vec::with_capacity(cases.len());
    let mut max_residual: f64 = 0.0;
    for (name, expected, left, right) in cases {
        let residual = left
            .dist(right)
            .max(left.dist(expected))
            .max(right.dist(expected));
        max_residual = max_residual.max(residual);
        checks.push(TouchCheck {
            name,
            expected,
            left,
            right,
            residual,
            pass: residual <= tol,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    TouchReport {
        tol,
        checks,
        max_residual,
        pass,
    }
}

/// A maximal horizontal chain found by the segment census.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    /// Left endpoint.
    pub start: Point2,
    /// Right endpoint.
    pub end: Point2,
    /// Number of depth-`n` base edges merged into this chain.
    pub pieces: usize,
}

impl Segment {
    /// Euclidean length of the chain.
    pub fn length(&self) -> f64 {
        self.start.dist(self.end)
    }
}

/// Outcome of [`max_horizontal_segments`].
#[derive(Debug, Clone)]
pub struct SegmentReport {
    /// Census depth.
    pub depth: usize,
    /// Collinearity/touch tolerance used while merging.
    pub tol: f64,
    /// Maximal chains, sorted by height then left endpoint.
    pub segments: Vec<Segment>,
    /// Whether every raw edge (hence every chain) was horizontal.
    pub all_horizontal: bool,
    /// Distinct chain lengths, descending.
    pub length_set: Vec<f64>,
    /// The ladder `{4^(1-k) : 0 <= k <= depth}`, descending.
    pub power_of_four_set: Vec<f64>,
    /// Whether `length_set` equals `power_of_four_set` within `1e-9`.
    pub matches_power_of_four_set: bool,
    /// Whether every length is `4 * (1/4)^a * (1/2)^b`, i.e. a power of two
    /// at most 4 (within `1e-9`).
    pub lengths_are_powers_of_two: bool,
}

/// Measures the maximal horizontal segments of the depth-`n` approximation.
///
/// The trunk maps tile the base segment, so the depth-`n` images of the base
/// edge `[a, c]` (one per length-`n` word) reassemble every maximal segment
/// of the approximation. The census collects those `5^n` edges, groups them
/// by height, and merges touching collinear runs into maximal chains.
///
/// Every chain is horizontal, and every chain is the image of the base under
/// some word `v` that is empty or ends in map 4 or 5, giving length
/// `4 * (1/4)^a * (1/2)^b` where `v` uses `a` quarter-scale and `b`
/// half-scale maps. From depth 2 on this produces lengths (for example
/// `1/2`, via the half-scale copy of a lifted base) that are powers of two
/// but **not** on the power-of-four ladder `{4^(1-k)}`; the report records
/// both set comparisons so callers can check either law.
pub fn max_horizontal_segments(depth: usize, tol: f64) -> Result<SegmentReport> {
    if !(1..=MAX_SEGMENT_DEPTH).contains(&depth) {
        return Err(Error::Config(format!(
            "segment census depth must be in 1..={MAX_SEGMENT_DEPTH} (got {depth})"
        )));
    }
    let ifs = standard_ifs();
    let lm = landmarks();

    let mut edges: Vec<(Point2, Point2)> = Vec::with_capacity(5usize.pow(depth as u32));
    visit_cell_images(&ifs, depth, [lm.a, lm.c], &mut |img| {
        let (p, q) = (img[0], img[1]);
        if p.x <= q.x {
            edges.push((p, q));
        } else {
            edges.push((q, p));
        }
    });

    let all_horizontal = edges.iter().all(|(p, q)| (q.y - p.y).abs() <= tol);
    edges.sort_by(|u, v| u.0.y.total_cmp(&v.0.y).then(u.0.x.total_cmp(&v.0.x)));

    let mut segments: Vec<Segment> = Vec::new();
    let mut i = 0;
    while i < edges.len() {
        let y0 = edges[i].0.y;
        let mut j = i;
        while j < edges.len() && (edges[j].0.y - y0).abs() <= tol {
            j += 1;
        }
        // Merge the x-sorted edges of this height band into maximal runs.
        let mut cur = Segment {
            start: edges[i].0,
            end: edges[i].1,
            pieces: 1,
        };
        for &(p, q) in &edges[i + 1..j] {
            if p.x <= cur.end.x + tol {
                if q.x > cur.end.x {
                    cur.end = q;
                }
                cur.pieces += 1;
            } else {
                segments.push(cur);
                cur = Segment {
                    start: p,
                    end: q,
                    pieces: 1,
                };
            }
        }
        segments.push(cur);
        i = j;
    }

    let mut length_set: Vec<f64> = Vec::new();
    let mut lengths: Vec<f64> = segments.iter().map(Segment::length).collect();
    lengths.sort_by(|u, v| v.total_cmp(u));
    for len in lengths {
        if length_set.last().is_none_or(|prev| (prev - len).abs() > 1e-9) {
            length_set.push(len);
        }
    }

    let power_of_four_set: Vec<f64> = (0..=depth as i32).map(|k| 4.0 * 0.25f64.powi(k)).collect();
    let matches_power_of_four_set = length_set.len() == power_of_four_set.len()
        && length_set
            .iter()
            .zip(&power_of_four_set)
            .all(|(obs, exp)| (obs - exp).abs() <= 1e-9);
    let lengths_are_powers_of_two = length_set.iter().all(|&len| {
        let e = len.log2().round();
        e <= 2.0 && (len - e.exp2()).abs() <= 1e-9
    });

    Ok(SegmentReport {
        depth,
        tol,
        segments,
        all_horizontal,
        length_set,
        power_of_four_set,
        matches_power_of_four_set,
        lengths_are_powers_of_two,
    })
}

/// Applies every length-`depth` word map to `pts` (root map first) and hands
/// each image to `f`.
fn visit_cell_images<const N: usize>(
    ifs: &IFS,
    depth: usize,
    pts: [Point2; N],
    f: &mut impl FnMut([Point2; N]),
) {
    if depth == 0 {
        f(pts);
        return;
    }
    for d in 1..=ifs.len() as u8 {
        let map = ifs.map(d);
        let mut next = [Point2::new(0.0, 0.0); N];
        for (slot, p) in next.iter_mut().zip(pts.iter()) {
            *slot = map.apply(*p);
        }
        visit_cell_images(ifs, depth - 1, next, f);
    }
}

/// Smallest signed edge-distance of the depth-`n` cell corners to the outer
/// triangle (positive = inside). The attractor construction keeps every cell
/// inside the triangle, so the margin should never drop below `-1e-12`.
pub fn cell_containment_margin(depth: usize) -> f64 {
    let ifs = standard_ifs();
    let tri = outer_triangle();
    let mut margin = f64::INFINITY;
    visit_cell_images(&ifs, depth, tri, &mut |corners| {
        for p in corners {
            margin = margin.min(triangle_margin(p, &tri));
        }
    });
    margin
}

/// Signed distance from `p` to the boundary of the counterclockwise triangle
/// `tri`, positive inside.
fn triangle_margin(p: Point2, tri: &[Point2; 3]) -> f64 {
    let mut margin = f64::INFINITY;
    for i in 0..3 {
        let a = tri[i];
        let b = tri[(i + 1) % 3];
        let e = Point2::new(b.x - a.x, b.y - a.y);
        let v = Point2::new(p.x - a.x, p.y - a.y);
        margin = margin.min(e.cross(v) / e.norm());
    }
    margin
}

/// Builds the depth-`n` cell graph of `ifs` with the module's standard seed
/// resolution and matching touch tolerance.
pub fn cell_graph_for(ifs: &IFS, depth: usize, budget: u64) -> Result<CellGraph> {
    let seed = adaptive_cloud(ifs, GRAPH_SEED_RESOLUTION, budget)?;
    let tol = default_touch_tol(ifs, depth, GRAPH_SEED_RESOLUTION);
    cell_adjacency_graph(ifs, depth, &seed, tol, budget)
}

/// Depth-`n` cell graph of the standard system.
pub fn standard_cell_graph(depth: usize, budget: u64) -> Result<CellGraph> {
    cell_graph_for(&standard_ifs(), depth, budget)
}

/// One disk-removal experiment from [`cut_point_suite`].
#[derive(Debug, Clone)]
pub struct CutCase {
    /// Which landmark was removed.
    pub name: &'static str,
    /// Center of the removal disk.
    pub point: Point2,
    /// Component count the dendrite structure predicts.
    pub expected_components: usize,
    /// Cells whose sample met the disk.
    pub removed_cells: usize,
    /// Components among the surviving cells.
    pub components: usize,
    /// Whether `components == expected_components`.
    pub pass: bool,
}

/// Outcome of [`cut_point_suite`].
#[derive(Debug, Clone)]
pub struct CutPointReport {
    /// Cell-graph depth used.
    pub depth: usize,
    /// Removal disk radius (twice the smallest cell diameter).
    pub radius: f64,
    /// The eight experiments.
    pub cases: Vec<CutCase>,
    /// Whether every experiment matched its prediction.
    pub pass: bool,
}

/// Removes a small disk around each landmark of the depth-`n` cell graph and
/// counts the surviving components.
///
/// Each junction is an order-2 cut point (2 components), the base midpoint
/// `d` is an order-3 branch point (3 components), and the three corners are
/// end points (still 1 component). The removal radius is twice the smallest
/// cell diameter, `2 * 4^(1-depth)`, scaled down from the naive "two cell
/// diameters" so the disk cannot reach past the cells that actually contain
/// the landmark; the seed resolution shrinks along with it.
pub fn cut_point_suite(depth: usize, budget: u64) -> Result<CutPointReport> {
    if depth < 2 {
        return Err(Error::Config(format!(
            "cut-point suite needs depth >= 2 (got {depth})"
        )));
    }
    let ifs = standard_ifs();
    let radius = 2.0 * 0.25f64.powi(depth as i32);
    let seed_resolution = (radius / 4.0).min(GRAPH_SEED_RESOLUTION);
    let seed = adaptive_cloud(&ifs, seed_resolution, budget)?;
    let tol = default_touch_tol(&ifs, depth, seed_resolution);
    let graph = cell_adjacency_graph(&ifs, depth, &seed, tol, budget)?;

    let lm = landmarks();
    let j = junction_points();
    let plan: [(&'static str, Point2, usize); 8] = [
        ("junction_12", j[0], 2),
        ("junction_23", j[1], 2),
        ("junction_24", j[2], 2),
        ("junction_45", j[3], 2),
        ("midpoint_d", lm.d, 3),
        ("corner_a", lm.a, 1),
        ("corner_b", lm.b, 1),
        ("corner_c", lm.c, 1),
    ];
    let mut cases = Vec::with_capacity(plan.len());
    for (name, point, expected_components) in plan {
        let removal = graph.components_after_removal(point, radius)?;
        cases.push(CutCase {
            name,
            point,
            expected_components,
            removed_cells: removal.removed_cells,
            components: removal.components,
            pass: removal.components == expected_components,
        });
    }
    let pass = cases.iter().all(|c| c.pass);
    Ok(CutPointReport {
        depth,
        radius,
        cases,
        pass,
    })
}

/// Cell-graph shape at one level, from [`tree_check`].
#[derive(Debug, Clone, Copy)]
pub struct TreeLevel {
    /// Graph depth.
    pub level: usize,
    /// Node count (should be `5^level`).
    pub nodes: usize,
    /// Edge count (should be `5^level - 1`).
    pub edges: usize,
    /// Connected-component count (should be 1).
    pub components: usize,
    /// Whether the graph is connected.
    pub connected: bool,
    /// Whether the graph is a tree (connected with `nodes - 1` edges).
    pub is_tree: bool,
}

/// Outcome of [`tree_check`].
#[derive(Debug, Clone)]
pub struct TreeReport {
    /// Per-level shapes, levels `1..=depth`.
    pub levels: Vec<TreeLevel>,
    /// Whether every level is a tree.
    pub pass: bool,
}

/// Checks that the standard system's cell graph is a tree at every level up
/// to `depth`.
pub fn tree_check(depth: usize, budget: u64) -> Result<TreeReport> {
    tree_check_with(&standard_ifs(), depth, budget)
}

/// [`tree_check`] against an arbitrary system (used with the variant
/// constructors as negative controls). Every junction of the standard system
/// joins exactly two cells, so the pairwise touch graph is the faithful
/// contact structure; a connected level with more than `nodes - 1` edges
/// means the copies close a loop.
pub fn tree_check_with(ifs: &IFS, depth: usize, budget: u64) -> Result<TreeReport> {
    if depth < 1 {
        return Err(Error::Config(format!(
            "tree check needs depth >= 1 (got {depth})"
        )));
    }
    let seed = adaptive_cloud(ifs, GRAPH_SEED_RESOLUTION, budget)?;
    let mut levels = Vec::with_capacity(depth);
    for level in 1..=depth {
        let tol = default_touch_tol(ifs, level, GRAPH_SEED_RESOLUTION);
        let graph = cell_adjacency_graph(ifs, level, &seed, tol, budget)?;
        let components = graph.component_count();
        levels.push(TreeLevel {
            level,
            nodes: graph.node_count(),
            edges: graph.edge_count(),
            components,
            connected: components == 1,
            is_tree: graph.is_tree(),
        });
    }
    let pass = levels.iter().all(|lv| lv.is_tree);
    Ok(TreeReport { levels, pass })
}

/// One line of the [`verify`] report.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    /// Short check identifier.
    pub name: String,
    /// What the dendrite structure predicts.
    pub expected: String,
    /// What the computation produced.
    pub observed: String,
    /// Whether observed matched expected.
    pub pass: bool,
}

fn fmt_point(p: Point2) -> String {
    format!("({}, {})", p.x, p.y)
}

/// Runs the whole battery — touch identities, fixed-point landmarks, cell
/// containment, per-level tree checks, the segment census, and (from depth 2)
/// the cut-point suite — and returns one record per check.
///
/// Records report facts; a failing record is returned, not panicked on. In
/// particular the `segment_ladder_depth_k` records compare the observed
/// maximal-segment lengths against the power-of-four ladder `{4^(1-j)}`,
/// which genuinely fails from depth 2 on (the true law is "powers of two",
/// see [`max_horizontal_segments`]); the `segment_lengths_dyadic_depth_k`
/// records carry the law that holds.
pub fn verify(depth: usize, budget: u64) -> Result<Vec<CheckRecord>> {
    if depth < 1 {
        return Err(Error::Config(format!(
            "verification depth must be >= 1 (got {depth})"
        )));
    }
    let mut records = Vec::new();

    let touch = verify_touch_identities(1e-12);
    for check in &touch.checks {
        records.push(CheckRecord {
            name: format!("touch {}", check.name),
            expected: format!("{} (residual <= 1e-12)", fmt_point(check.expected)),
            observed: format!("residual {:.2e}", check.residual),
            pass: check.pass,
        });
    }

    let ifs = standard_ifs();
    let lm = landmarks();
    let fixed_pairs = [(1u8, lm.a), (2, lm.d), (3, lm.c), (5, lm.b)];
    let mut max_offset: f64 = 0.0;
    for (digit, target) in fixed_pairs {
        let fp = ifs.map(digit).fixed_point()?;
        max_offset = max_offset.max(fp.dist(target));
    }
    records.push(CheckRecord {
        name: "fixed_point_landmarks".into(),
        expected: "S1,S2,S3,S5 fix a,d,c,b (offset <= 1e-12)".into(),
        observed: format!("max offset {max_offset:.2e}"),
        pass: max_offset <= 1e-12,
    });

    let containment_depth = depth.min(6);
    let mut min_margin = f64::INFINITY;
    for level in 1..=containment_depth {
        min_margin = min_margin.min(cell_containment_margin(level));
    }
    records.push(CheckRecord {
        name: format!("cells_inside_triangle_depth_{containment_depth}"),
        expected: "corner margin >= -1e-12".into(),
        observed: format!("min margin {min_margin:.2e}"),
        pass: min_margin >= -1e-12,
    });

    let tree = tree_check(depth, budget)?;
    for lv in &tree.levels {
        let want_nodes = 5usize.pow(lv.level as u32);
        records.push(CheckRecord {
            name: format!("tree_depth_{}", lv.level),
            expected: format!("{} cells, {} edges, connected", want_nodes, want_nodes - 1),
            observed: format!(
                "{} cells, {} edges, {}",
                lv.nodes,
                lv.edges,
                if lv.connected { "connected" } else { "disconnected" }
            ),
            pass: lv.is_tree && lv.nodes == want_nodes && lv.edges == want_nodes - 1,
        });
    }

    for level in 1..=depth.min(MAX_SEGMENT_DEPTH) {
        let report = max_horizontal_segments(level, 1e-9)?;
        records.push(CheckRecord {
            name: format!("segments_horizontal_depth_{level}"),
            expected: "every maximal chain horizontal".into(),
            observed: format!(
                "{} chains, {}",
                report.segments.len(),
                if report.all_horizontal {
                    "all horizontal"
                } else {
                    "non-horizontal chain found"
                }
            ),
            pass: report.all_horizontal,
        });
        records.push(CheckRecord {
            name: format!("segment_lengths_dyadic_depth_{level}"),
            expected: "every maximal length = 4*(1/4)^a*(1/2)^b".into(),
            observed: format!("lengths {:?}", report.length_set),
            pass: report.lengths_are_powers_of_two,
        });
        records.push(CheckRecord {
            name: format!("segment_ladder_depth_{level}"),
            expected: format!("length set exactly {:?}", report.power_of_four_set),
            observed: format!("length set {:?}", report.length_set),
            pass: report.matches_power_of_four_set,
        });
    }

    if depth >= 2 {
        let cut = cut_point_suite(depth, budget)?;
        for case in &cut.cases {
            records.push(CheckRecord {
                name: format!("cut_{}", case.name),
                expected: format!("{} components", case.expected_components),
                observed: format!(
                    "{} components ({} cells removed)",
                    case.components, case.removed_cells
                ),
                pass: case.pass,
            });
        }
    }

    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attractor::{MultiIndex, DEFAULT_BUDGET};
    use proptest::prelude::*;

    fn word(digits: &[u8]) -> MultiIndex {
        MultiIndex::new(digits.to_vec(), 5).unwrap()
    }

    #[test]
    fn touch_identities_are_exact() {
        let report = verify_touch_identities(1e-12);
        assert!(report.pass);
        assert_eq!(report.checks.len(), 5);
        assert_eq!(report.max_residual, 0.0);
    }

    #[test]
    fn fixed_points_hit_landmarks() {
        let ifs = standard_ifs();
        let lm = landmarks();
        for (digit, target) in [(1u8, lm.a), (2, lm.d), (3, lm.c), (5, lm.b)] {
            let fp = ifs.map(digit).fixed_point().unwrap();
            assert!(fp.dist(target) < 1e-12, "S{digit} fixes {fp:?}, not {target:?}");
        }
        // the remaining map fixes an interior point, not a landmark
        let fp4 = ifs.map(4).fixed_point().unwrap();
        assert!(fp4.dist(Point2::new(4.0 / 3.0, 4.0 * sqrt3() / 3.0)) < 1e-12);
    }

    #[test]
    fn cells_stay_inside_triangle() {
        for depth in 1..=6 {
            let margin = cell_containment_margin(depth);
            assert!(margin >= -1e-12, "depth {depth}: margin {margin}");
        }
    }

    #[test]
    fn segment_census_depth_1() {
        let report = max_horizontal_segments(1, 1e-9).unwrap();
        assert!(report.all_horizontal);
        assert_eq!(report.segments.len(), 3);
        assert_eq!(report.length_set.len(), 2);
        assert!((report.length_set[0] - 4.0).abs() < 1e-12);
        assert!((report.length_set[1] - 1.0).abs() < 1e-12);
        assert!(report.matches_power_of_four_set);
        assert!(report.lengths_are_powers_of_two);
        // the base chain [a, c] survives as one maximal chain of 3 pieces
        let base = report
            .segments
            .iter()
            .find(|s| s.start.dist(Point2::new(0.0, 0.0)) < 1e-12)
            .unwrap();
        assert!(base.end.dist(Point2::new(4.0, 0.0)) < 1e-12);
        assert_eq!(base.pieces, 3);
        // the lifted copy over map 4 has length 1
        let lifted = report
            .segments
            .iter()
            .find(|s| s.start.dist(Point2::new(1.0, sqrt3())) < 1e-12)
            .unwrap();
        assert!(lifted.end.dist(Point2::new(2.0, sqrt3())) < 1e-12);
    }

    #[test]
    fn segment_census_depth_2_has_a_half_length_chain() {
        let report = max_horizontal_segments(2, 1e-9).unwrap();
        assert!(report.all_horizontal);
        assert_eq!(report.segments.len(), 13);
        // multiset of lengths: one 4, two 1, two 1/2, eight 1/4
        let count = |len: f64| {
            report
                .segments
                .iter()
                .filter(|s| (s.length() - len).abs() < 1e-9)
                .count()
        };
        assert_eq!(count(4.0), 1);
        assert_eq!(count(1.0), 2);
        assert_eq!(count(0.5), 2);
        assert_eq!(count(0.25), 8);
        // the half-length chain through the half-scale copy of the lifted base
        let half = report
            .segments
            .iter()
            .find(|s| s.start.dist(Point2::new(1.5, sqrt3() / 2.0)) < 1e-9)
            .unwrap();
        assert!(half.end.dist(Point2::new(2.0, sqrt3() / 2.0)) < 1e-9);
        // 1/2 is a power of two but not on the power-of-four ladder
        assert!(!report.matches_power_of_four_set);
        assert!(report.lengths_are_powers_of_two);
    }

    #[test]
    fn segment_laws_by_depth() {
        for depth in 1..=5 {
            let report = max_horizontal_segments(depth, 1e-9).unwrap();
            assert!(report.all_horizontal, "depth {depth}");
            assert!(report.lengths_are_powers_of_two, "depth {depth}");
            assert_eq!(
                report.matches_power_of_four_set,
                depth == 1,
                "power-of-four ladder at depth {depth}"
            );
            // chains: the merged base plus one chain per word ending in 4 or 5
            let expected = 1 + 2 * (5usize.pow(depth as u32) - 1) / 4;
            assert_eq!(report.segments.len(), expected, "depth {depth}");
        }
    }

    #[test]
    fn segment_census_rejects_bad_depths() {
        assert!(max_horizontal_segments(0, 1e-9).is_err());
        assert!(max_horizontal_segments(7, 1e-9).is_err());
    }

    #[test]
    fn level_1_graph_is_the_expected_tree() {
        let graph = standard_cell_graph(1, DEFAULT_BUDGET).unwrap();
        assert_eq!(graph.node_count(), 5);
        assert_eq!(graph.edges(), &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        assert!(graph.is_tree());
    }

    #[test]
    fn tree_check_levels_1_and_2() {
        let report = tree_check(2, DEFAULT_BUDGET).unwrap();
        assert!(report.pass);
        assert_eq!(report.levels.len(), 2);
        for lv in &report.levels {
            let want = 5usize.pow(lv.level as u32);
            assert_eq!(lv.nodes, want);
            assert_eq!(lv.edges, want - 1);
            assert!(lv.connected);
            assert!(lv.is_tree);
        }
    }

    #[test]
    fn shifted_variant_disconnects_into_three_groups() {
        let graph = cell_graph_for(&shifted_variant_ifs(), 1, DEFAULT_BUDGET).unwrap();
        assert!(!graph.is_connected());
        assert_eq!(graph.component_count(), 3);
        // the two surviving contacts: copies 2-3 share the right corner c,
        // copies 4-5 still share their junction
        assert_eq!(graph.edges(), &[(1, 2), (3, 4)]);
    }

    #[test]
    fn looped_variant_has_a_cycle() {
        let ifs = looped_variant_ifs();
        let report = tree_check_with(&ifs, 1, DEFAULT_BUDGET).unwrap();
        let level = &report.levels[0];
        assert!(!level.is_tree);
        // a positive cyclomatic number proves a genuine cycle regardless of
        // connectivity (the apex copy is stranded in this variant)
        assert!(level.edges + level.components > level.nodes);
        // copies 1, 2, 4 meet pairwise: a 3-cycle in the touch graph
        let graph = cell_graph_for(&ifs, 1, DEFAULT_BUDGET).unwrap();
        for pair in [(0u32, 1u32), (0, 3), (1, 3)] {
            assert!(graph.edges().contains(&pair), "missing contact {pair:?}");
        }
    }

    #[test]
    fn cut_point_suite_matches_predictions_at_depth_2() {
        let report = cut_point_suite(2, DEFAULT_BUDGET).unwrap();
        assert!(report.pass, "cases: {:#?}", report.cases);
        let by_name = |name: &str| report.cases.iter().find(|c| c.name == name).unwrap();
        for junction in ["junction_12", "junction_23", "junction_24", "junction_45"] {
            let case = by_name(junction);
            assert_eq!(case.components, 2);
            assert_eq!(case.removed_cells, 2, "{junction} removes the two cells meeting there");
        }
        let branch = by_name("midpoint_d");
        assert_eq!(branch.components, 3);
        assert_eq!(branch.removed_cells, 1);
        for corner in ["corner_a", "corner_b", "corner_c"] {
            let case = by_name(corner);
            assert_eq!(case.components, 1);
            assert_eq!(case.removed_cells, 1);
        }
    }

    #[test]
    fn cut_point_suite_rejects_depth_1() {
        assert!(cut_point_suite(1, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn verify_flags_only_the_ladder_from_depth_2() {
        let records = verify(2, DEFAULT_BUDGET).unwrap();
        let failing: Vec<&CheckRecord> = records.iter().filter(|r| !r.pass).collect();
        assert_eq!(failing.len(), 1, "failing: {failing:?}");
        assert_eq!(failing[0].name, "segment_ladder_depth_2");
        // sanity: all the expected record families are present
        for needle in [
            "touch S1(C) = S2(A)",
            "fixed_point_landmarks",
            "cells_inside_triangle_depth_2",
            "tree_depth_2",
            "segment_lengths_dyadic_depth_1",
            "cut_midpoint_d",
        ] {
            assert!(
                records.iter().any(|r| r.name == needle),
                "missing record {needle}"
            );
        }
    }

    #[test]
    fn graph_helpers_expose_addresses() {
        let graph = standard_cell_graph(2, DEFAULT_BUDGET).unwrap();
        assert_eq!(graph.node_count(), 25);
        let idx = graph.node_index(&word(&[2, 2])).unwrap();
        assert_eq!(graph.nodes()[idx].to_string(), "22");
    }

    proptest! {
        // Every depth-n base edge lies inside exactly one merged chain.
        #[test]
        fn base_edges_land_inside_a_single_chain(
            digits in proptest::collection::vec(1u8..=5, 1..=4)
        ) {
            let ifs = standard_ifs();
            let lm = landmarks();
            let map = ifs.word_map(&digits);
            let (p, q) = (map.apply(lm.a), map.apply(lm.c));
            let report = max_horizontal_segments(digits.len(), 1e-9).unwrap();
            let hosts = report
                .segments
                .iter()
                .filter(|s| {
                    (s.start.y - p.y).abs() <= 1e-9
                        && s.start.x <= p.x.min(q.x) + 1e-9
                        && s.end.x >= p.x.max(q.x) - 1e-9
                })
                .count();
            prop_assert_eq!(hosts, 1);
        }
    }
}
