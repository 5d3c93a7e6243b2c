//! Attractor sampling and set metrics for iterated function systems.
//!
//! An IFS `{S_1..S_m}` of contractions has a unique nonempty compact
//! invariant set `K = U S_i(K)`, reached by iterating the Hutchinson operator
//! `T(A) = U_j S_j(A)` from any compact seed. This module materializes finite
//! approximations of `K` three ways — deterministic address enumeration, the
//! chaos game, and resolution-adaptive subdivision — and provides the exact
//! Hausdorff distance between finite clouds plus an exact, never-materialized
//! Hausdorff gap `d_H(T^n A, T^(n+1) A)` for convergence measurements at
//! depths where the iterated clouds would not fit in memory.

use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{Point2, Similarity2};
use crate::zipper::Zipper;

/// Default ceiling on the number of points an enumeration may materialize.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// An iterated function system: finitely many contracting similarities.
#[derive(Debug, Clone, PartialEq)]
pub struct IFS {
    maps: Vec<Similarity2>,
}

impl IFS {
    /// Validates that the system is nonempty and every map contracts.
    pub fn new(maps: Vec<Similarity2>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::LengthMismatch(
                "an iterated function system needs at least one map".into(),
            ));
        }
        for map in &maps {
            let ratio = map.ratio();
            if ratio >= 1.0 {
                return Err(Error::NotContraction { ratio });
            }
        }
        Ok(IFS { maps })
    }

    /// The system underlying a zipper.
    pub fn from_zipper(z: &Zipper) -> Result<Self> {
        IFS::new(z.maps().to_vec())
    }

    pub fn maps(&self) -> &[Similarity2] {
        &self.maps
    }

    /// Number of maps `m`.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Map for 1-based digit `d`.
    pub fn map(&self, d: u8) -> &Similarity2 {
        &self.maps[(d - 1) as usize]
    }

    /// Largest contraction ratio.
    pub fn r_max(&self) -> f64 {
        self.maps.iter().map(Similarity2::ratio).fold(0.0, f64::max)
    }

    /// Smallest contraction ratio.
    pub fn r_min(&self) -> f64 {
        self.maps
            .iter()
            .map(Similarity2::ratio)
            .fold(f64::INFINITY, f64::min)
    }

    /// The composition `S_{i_1} . S_{i_2} . ... . S_{i_k}` for a 1-based
    /// digit word (first digit outermost).
    pub fn word_map(&self, word: &[u8]) -> Similarity2 {
        word.iter()
            .fold(Similarity2::identity(), |acc, &d| acc.compose(self.map(d)))
    }

    /// A closed ball `(center, radius)` guaranteed to contain the attractor:
    /// the center is the centroid of the maps' fixed points, and the radius
    /// satisfies `|S_j(c) - c| + r_j R <= R` for every map, so the ball is
    /// forward-invariant.
    pub fn bounding_ball(&self) -> (Point2, f64) {
        let mut c = Point2::ORIGIN;
        for map in &self.maps {
            let f = map
                .fixed_point()
                .expect("IFS invariant guarantees contractions");
            c = c + f;
        }
        c = c * (1.0 / self.maps.len() as f64);
        let radius = self
            .maps
            .iter()
            .map(|s| s.apply(c).dist(c) / (1.0 - s.ratio()))
            .fold(0.0, f64::max);
        (c, radius)
    }

    /// An upper bound on the attractor's diameter (twice the bounding-ball
    /// radius).
    pub fn diameter_bound(&self) -> f64 {
        2.0 * self.bounding_ball().1
    }
}

/// A word `i_1...i_k` of 1-based map digits addressing the cell
/// `S_{i_1} . ... . S_{i_k}(K)` of an attractor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex {
    digits: Vec<u8>,
}

impl MultiIndex {
    /// The empty word (addresses the whole attractor).
    pub fn empty() -> Self {
        MultiIndex { digits: Vec::new() }
    }

    /// Validates digits against the number of maps `m`.
    pub fn new(digits: Vec<u8>, m: usize) -> Result<Self> {
        if let Some(&bad) = digits.iter().find(|&&d| d == 0 || d as usize > m) {
            return Err(Error::Malformed(format!(
                "address digit {bad} outside 1..={m}"
            )));
        }
        Ok(MultiIndex { digits })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// The word with `digit` prepended (one application of map `digit` on
    /// the outside).
    pub fn prefixed(&self, digit: u8) -> MultiIndex {
        let mut digits = Vec::with_capacity(self.digits.len() + 1);
        digits.push(digit);
        digits.extend_from_slice(&self.digits);
        MultiIndex { digits }
    }

    /// The word with `digit` appended (one refinement step on the inside).
    pub fn extended(&self, digit: u8) -> MultiIndex {
        let mut digits = self.digits.clone();
        digits.push(digit);
        MultiIndex { digits }
    }
}

impl fmt::Display for MultiIndex {
    /// Concatenated decimal digits (`"1342"`); unambiguous for systems with
    /// at most nine maps.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut digits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch.to_digit(10) {
                Some(d) if d >= 1 => digits.push(d as u8),
                _ => {
                    return Err(Error::Malformed(format!(
                        "invalid address character '{ch}' (expected digits 1-9)"
                    )))
                }
            }
        }
        Ok(MultiIndex { digits })
    }
}

/// A finite set of plane points, optionally tagged with uniform-depth
/// addresses.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    points: Vec<Point2>,
    addresses: Option<Vec<MultiIndex>>,
}

impl PointCloud {
    pub fn new(points: Vec<Point2>) -> Self {
        PointCloud {
            points,
            addresses: None,
        }
    }

    pub fn empty() -> Self {
        PointCloud::default()
    }

    /// Attaches one address per point; all addresses must share a depth.
    pub fn with_addresses(points: Vec<Point2>, addresses: Vec<MultiIndex>) -> Result<Self> {
        if points.len() != addresses.len() {
            return Err(Error::LengthMismatch(format!(
                "{} points with {} addresses",
                points.len(),
                addresses.len()
            )));
        }
        if let Some(first) = addresses.first() {
            let depth = first.len();
            if addresses.iter().any(|a| a.len() != depth) {
                return Err(Error::LengthMismatch(
                    "addresses must have uniform depth".into(),
                ));
            }
        }
        Ok(PointCloud {
            points,
            addresses: Some(addresses),
        })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn addresses(&self) -> Option<&[MultiIndex]> {
        self.addresses.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Axis-aligned bounding box `(low, high)`, or `None` when empty.
    pub fn bounding_box(&self) -> Option<(Point2, Point2)> {
        bounding_box(&self.points)
    }

    /// Writes `x,y[,address]` CSV with full-precision (17 significant digit)
    /// coordinates.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        match &self.addresses {
            None => {
                writeln!(w, "x,y")?;
                for p in &self.points {
                    writeln!(w, "{:.16e},{:.16e}", p.x, p.y)?;
                }
            }
            Some(addrs) => {
                writeln!(w, "x,y,address")?;
                for (p, a) in self.points.iter().zip(addrs) {
                    writeln!(w, "{:.16e},{:.16e},{}", p.x, p.y, a)?;
                }
            }
        }
        Ok(())
    }

    /// Reads the CSV format produced by [`PointCloud::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Malformed("empty csv input".into()))??;
        let with_addresses = match header.trim_end_matches('\r').trim() {
            "x,y" => false,
            "x,y,address" => true,
            other => {
                return Err(Error::Malformed(format!(
                    "unexpected csv header '{other}' (expected 'x,y' or 'x,y,address')"
                )))
            }
        };
        let mut points = Vec::new();
        let mut addresses = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let mut fields = line.splitn(3, ',');
            let parse = |field: Option<&str>, what: &str| -> Result<f64> {
                field
                    .and_then(|f| f.trim().parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::Malformed(format!("csv line {}: bad {what}", lineno + 2))
                    })
            };
            let x = parse(fields.next(), "x")?;
            let y = parse(fields.next(), "y")?;
            points.push(Point2::new(x, y));
            if with_addresses {
                let field = fields.next().ok_or_else(|| {
                    Error::Malformed(format!("csv line {}: missing address", lineno + 2))
                })?;
                addresses.push(field.trim().parse::<MultiIndex>()?);
            }
        }
        if with_addresses {
            PointCloud::with_addresses(points, addresses)
        } else {
            Ok(PointCloud::new(points))
        }
    }
}

fn bounding_box(points: &[Point2]) -> Option<(Point2, Point2)> {
    let first = *points.first()?;
    let mut lo = first;
    let mut hi = first;
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    Some((lo, hi))
}

/// Smallest-effort enclosing ball of a point set: centroid center, max
/// distance radius.
pub(crate) fn enclosing_ball(points: &[Point2]) -> (Point2, f64) {
    let mut c = Point2::ORIGIN;
    for p in points {
        c = c + *p;
    }
    c = c * (1.0 / points.len() as f64);
    let r = points.iter().map(|p| p.dist(c)).fold(0.0, f64::max);
    (c, r)
}

/// One application of the Hutchinson operator `T(A) = U_j S_j(A)` to a finite
/// cloud. Points are grouped by map in map order; addresses (when present)
/// are extended by prefixing the map's digit.
pub fn hutchinson_step(ifs: &IFS, cloud: &PointCloud) -> PointCloud {
    let mut points = Vec::with_capacity(ifs.len() * cloud.len());
    let mut addresses = cloud
        .addresses()
        .map(|a| Vec::with_capacity(ifs.len() * a.len()));
    for (j, map) in ifs.maps().iter().enumerate() {
        for p in cloud.points() {
            points.push(map.apply(*p));
        }
        if let (Some(out), Some(addrs)) = (addresses.as_mut(), cloud.addresses()) {
            let digit = (j + 1) as u8;
            out.extend(addrs.iter().map(|a| a.prefixed(digit)));
        }
    }
    PointCloud {
        points,
        addresses,
    }
}

/// Materializes `{S_w(seed) : |w| = depth}` with its addresses, in
/// lexicographic address order — exactly `m^depth` points.
///
/// Fails with [`Error::BudgetExceeded`] when `m^depth` overruns `budget`.
pub fn iterate_addresses(
    ifs: &IFS,
    depth: usize,
    seed: Point2,
    budget: u64,
) -> Result<PointCloud> {
    let m = ifs.len();
    let needed = (m as f64).powi(depth as i32);
    if needed > budget as f64 {
        return Err(Error::BudgetExceeded {
            needed: if needed > u64::MAX as f64 {
                u64::MAX
            } else {
                needed as u64
            },
            budget,
        });
    }
    let count = needed as usize;
    let mut points = Vec::with_capacity(count);
    let mut addresses = Vec::with_capacity(count);
    let mut word = Vec::with_capacity(depth);
    fn recurse(
        ifs: &IFS,
        depth_left: usize,
        transform: &Similarity2,
        seed: Point2,
        word: &mut Vec<u8>,
        points: &mut Vec<Point2>,
        addresses: &mut Vec<MultiIndex>,
    ) {
        if depth_left == 0 {
            points.push(transform.apply(seed));
            addresses.push(MultiIndex {
                digits: word.clone(),
            });
            return;
        }
        for (j, map) in ifs.maps().iter().enumerate() {
            word.push((j + 1) as u8);
            let next = transform.compose(map);
            recurse(ifs, depth_left - 1, &next, seed, word, points, addresses);
            word.pop();
        }
    }
    recurse(
        ifs,
        depth,
        &Similarity2::identity(),
        seed,
        &mut word,
        &mut points,
        &mut addresses,
    );
    PointCloud::with_addresses(points, addresses)
}

/// Random-iteration sampling of the attractor: repeatedly apply a uniformly
/// chosen map, discard the first `burn_in` iterates, and record the next `n`.
///
/// The walk starts at the fixed point of the first map, which lies on the
/// attractor, so every emitted point is on the attractor exactly (up to
/// floating-point roundoff). Output is deterministic for a fixed `rng_seed`.
pub fn chaos_game(ifs: &IFS, n: usize, rng_seed: u64, burn_in: usize) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut x = ifs.maps()[0]
        .fixed_point()
        .expect("IFS invariant guarantees contractions");
    let mut points = Vec::with_capacity(n);
    for step in 0..burn_in.saturating_add(n) {
        let j = rng.gen_range(0..ifs.len());
        x = ifs.maps()[j].apply(x);
        if step >= burn_in {
            points.push(x);
        }
        if points.len() == n {
            break;
        }
    }
    PointCloud::new(points)
}

/// Reference Hausdorff distance by brute force over all pairs.
pub fn hausdorff_distance_brute(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let d1 = directed_max_min_sq_brute(a.points(), b.points());
    let d2 = directed_max_min_sq_brute(b.points(), a.points());
    Ok(d1.max(d2).sqrt())
}

fn directed_max_min_sq_brute(from: &[Point2], to: &[Point2]) -> f64 {
    from.iter()
        .map(|&p| {
            to.iter()
                .map(|&q| p.dist_sq(q))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance `max(sup_a inf_b |a-b|, sup_b inf_a |a-b|)` between
/// finite clouds, grid-accelerated.
///
/// The accelerated nearest-neighbor search examines a superset of buckets
/// that provably contains the true nearest point and evaluates the same
/// squared distances as the brute-force scan, so the result is bit-equal to
/// [`hausdorff_distance_brute`].
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let ga = GridIndex::build(a.points());
    let gb = GridIndex::build(b.points());
    let d1 = a
        .points()
        .iter()
        .map(|&p| gb.min_dist_sq(p))
        .fold(0.0, f64::max);
    let d2 = b
        .points()
        .iter()
        .map(|&p| ga.min_dist_sq(p))
        .fold(0.0, f64::max);
    Ok(d1.max(d2).sqrt())
}

/// Samples the attractor to a guaranteed covering radius: subdivides address
/// cells until `ratio * diameter_bound <= resolution` and emits one on-attractor
/// point per cell (the image of the first map's fixed point).
///
/// Every point of the attractor lies within `resolution` of the output. For
/// mixed-ratio systems this spends far fewer points than uniform-depth
/// enumeration at equal resolution.
pub fn adaptive_cloud(ifs: &IFS, resolution: f64, budget: u64) -> Result<PointCloud> {
    assert!(
        resolution > 0.0 && resolution.is_finite(),
        "resolution must be positive"
    );
    let anchor = ifs.maps()[0]
        .fixed_point()
        .expect("IFS invariant guarantees contractions");
    let diam = ifs.diameter_bound();
    let mut points = Vec::new();
    let mut stack: Vec<(Similarity2, f64)> = vec![(Similarity2::identity(), 1.0)];
    while let Some((transform, ratio)) = stack.pop() {
        if ratio * diam <= resolution {
            if points.len() as u64 >= budget {
                return Err(Error::BudgetExceeded {
                    needed: budget + 1,
                    budget,
                });
            }
            points.push(transform.apply(anchor));
        } else {
            for map in ifs.maps() {
                stack.push((transform.compose(map), ratio * map.ratio()));
            }
        }
    }
    Ok(PointCloud::new(points))
}

/// Exact Hausdorff gap `d_H(T^n A, T^(n+1) A)` between consecutive Hutchinson
/// iterates of a finite seed, computed without materializing either iterate.
///
/// Both iterates are unions of `m^n` similar copies (`T^n A = U_w S_w(A)`,
/// `T^(n+1) A = U_w S_w(T A)` over words `|w| = n`), so directed distances
/// decompose cell by cell: the supremum over a cell `S_w(X)` is bounded by
/// `r_w * sup_x d(x, X')`, and point-to-union distances descend the address
/// tree pruning with bounding balls. The search is exhaustive with sound
/// bounds, so the result equals (to roundoff) what the materialized
/// computation would return.
pub fn hutchinson_gap(ifs: &IFS, seed: &PointCloud, n: usize) -> Result<f64> {
    if seed.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let a = seed.points();
    let ta_cloud = hutchinson_step(ifs, &PointCloud::new(a.to_vec()));
    let ta = ta_cloud.points();
    let grid_a = GridIndex::build(a);
    let grid_ta = GridIndex::build(ta);
    if n == 0 {
        let d1 = a
            .iter()
            .map(|&p| grid_ta.min_dist_sq(p))
            .fold(0.0, f64::max);
        let d2 = ta
            .iter()
            .map(|&p| grid_a.min_dist_sq(p))
            .fold(0.0, f64::max);
        return Ok(d1.max(d2).sqrt());
    }
    let d1 = directed_cell_sup(ifs, n, a, ta, &grid_ta);
    let d2 = directed_cell_sup(ifs, n, ta, a, &grid_a);
    Ok(d1.max(d2))
}

/// Supremum over `U_{|w|=n} S_w(src)` of the distance to `U_{|u|=n} S_u(tgt)`.
fn directed_cell_sup(
    ifs: &IFS,
    n: usize,
    src: &[Point2],
    tgt: &[Point2],
    tgt_grid: &GridIndex,
) -> f64 {
    // Per-point profile against the unscaled target: delta_i = d(src_i, tgt).
    // Within cell w the same-cell distance of S_w(src_i) is r_w * delta_i,
    // which upper-bounds its distance to the whole union.
    let mut profile: Vec<(f64, u32)> = src
        .iter()
        .enumerate()
        .map(|(i, &p)| (tgt_grid.min_dist_sq(p).sqrt(), i as u32))
        .collect();
    profile.sort_by(|x, y| y.0.total_cmp(&x.0));
    let delta_max = profile[0].0;
    let r_max = ifs.r_max();
    let tgt_ball = enclosing_ball(tgt);
    let inverses: Vec<(Similarity2, f64)> = ifs
        .maps()
        .iter()
        .map(|s| (s.inverse(), s.ratio()))
        .collect();
    // Visit high-ratio cells first so the running maximum prunes aggressively.
    let mut order: Vec<usize> = (0..ifs.len()).collect();
    order.sort_by(|&i, &j| ifs.maps()[j].ratio().total_cmp(&ifs.maps()[i].ratio()));

    struct Ctx<'a> {
        ifs: &'a IFS,
        n: usize,
        src: &'a [Point2],
        profile: &'a [(f64, u32)],
        delta_max: f64,
        r_max: f64,
        tgt_grid: &'a GridIndex,
        tgt_ball: (Point2, f64),
        inverses: &'a [(Similarity2, f64)],
        order: &'a [usize],
        best: f64,
    }

    fn walk(ctx: &mut Ctx, transform: &Similarity2, ratio: f64, depth_left: usize) {
        if ratio * ctx.r_max.powi(depth_left as i32) * ctx.delta_max <= ctx.best {
            return;
        }
        if depth_left == 0 {
            for &(delta, i) in ctx.profile {
                if ratio * delta <= ctx.best {
                    break;
                }
                let x = transform.apply(ctx.src[i as usize]);
                let d =
                    point_to_cell_union(ctx.n, x, ctx.tgt_grid, ctx.tgt_ball, ctx.inverses);
                ctx.best = ctx.best.max(d);
            }
            return;
        }
        for &j in ctx.order {
            let map = &ctx.ifs.maps()[j];
            walk(
                ctx,
                &transform.compose(map),
                ratio * map.ratio(),
                depth_left - 1,
            );
        }
    }

    let mut ctx = Ctx {
        ifs,
        n,
        src,
        profile: &profile,
        delta_max,
        r_max,
        tgt_grid,
        tgt_ball,
        inverses: &inverses,
        order: &order,
        best: 0.0,
    };
    walk(&mut ctx, &Similarity2::identity(), 1.0, n);
    ctx.best
}

/// Exact distance from `x` to `U_{|u|=n} S_u(tgt)` by best-first search over
/// address prefixes. Each node carries the accumulated inverse transform, so
/// leaf distances evaluate as `r_u * d(S_u^{-1>(x), tgt)` against a single
/// prebuilt grid index; interior nodes are pruned with the bounding-ball
/// lower bound `r_u * max(0, |S_u^{-1}(x) - c| - R)`.
fn point_to_cell_union(
    n: usize,
    x: Point2,
    tgt_grid: &GridIndex,
    tgt_ball: (Point2, f64),
    inverses: &[(Similarity2, f64)],
) -> f64 {
    struct Node {
        bound: f64,
        depth: usize,
        inv: Similarity2,
        ratio: f64,
    }
    impl PartialEq for Node {
        fn eq(&self, other: &Self) -> bool {
            self.bound == other.bound
        }
    }
    impl Eq for Node {}
    impl PartialOrd for Node {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Node {
        // Reversed so the BinaryHeap pops the smallest bound first.
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            other.bound.total_cmp(&self.bound)
        }
    }

    let (center, radius) = tgt_ball;
    let mut best = f64::INFINITY;
    let mut heap = BinaryHeap::new();
    heap.push(Node {
        bound: 0.0,
        depth: 0,
        inv: Similarity2::identity(),
        ratio: 1.0,
    });
    while let Some(node) = heap.pop() {
        if node.bound >= best {
            break;
        }
        if node.depth == n {
            let y = node.inv.apply(x);
            best = best.min(node.ratio * tgt_grid.min_dist_sq(y).sqrt());
            continue;
        }
        for (inv, r) in inverses {
            let child_inv = inv.compose(&node.inv);
            let child_ratio = node.ratio * r;
            let y = child_inv.apply(x);
            let bound = child_ratio * (y.dist(center) - radius).max(0.0);
            if bound < best {
                heap.push(Node {
                    bound,
                    depth: node.depth + 1,
                    inv: child_inv,
                    ratio: child_ratio,
                });
            }
        }
    }
    best
}

/// Uniform-grid point index for exact nearest-neighbor distance queries.
///
/// Queries expand bucket rings around the query cell and stop once the ring
/// lower bound exceeds the best squared distance found, so they evaluate the
/// same candidate minimum as a full scan.
pub(crate) struct GridIndex {
    pts: Vec<Point2>,
    h: f64,
    cell_lo: (i64, i64),
    cell_hi: (i64, i64),
    buckets: HashMap<(i64, i64), Vec<u32>>,
}

impl GridIndex {
    pub(crate) fn build(pts: &[Point2]) -> GridIndex {
        assert!(!pts.is_empty(), "grid index needs at least one point");
        let (lo, hi) = bounding_box(pts).unwrap();
        let diag = hi.dist(lo);
        let h = (diag / (pts.len() as f64).sqrt()).max(diag * 1e-9).max(1e-12);
        let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        let mut cell_lo = (i64::MAX, i64::MAX);
        let mut cell_hi = (i64::MIN, i64::MIN);
        for (i, p) in pts.iter().enumerate() {
            let key = ((p.x / h).floor() as i64, (p.y / h).floor() as i64);
            cell_lo = (cell_lo.0.min(key.0), cell_lo.1.min(key.1));
            cell_hi = (cell_hi.0.max(key.0), cell_hi.1.max(key.1));
            buckets.entry(key).or_default().push(i as u32);
        }
        GridIndex {
            pts: pts.to_vec(),
            h,
            cell_lo,
            cell_hi,
            buckets,
        }
    }

    fn cell_of(&self, q: Point2) -> (i64, i64) {
        ((q.x / self.h).floor() as i64, (q.y / self.h).floor() as i64)
    }

    /// Chebyshev distance from `cell` to the occupied-cell bounding rectangle.
    fn rings_to_grid(&self, cell: (i64, i64)) -> i64 {
        let dx = (self.cell_lo.0 - cell.0).max(cell.0 - self.cell_hi.0).max(0);
        let dy = (self.cell_lo.1 - cell.1).max(cell.1 - self.cell_hi.1).max(0);
        dx.max(dy)
    }

    /// Chebyshev distance from `cell` to the farthest occupied-cell corner.
    fn rings_to_cover(&self, cell: (i64, i64)) -> i64 {
        let dx = (cell.0 - self.cell_lo.0).max(self.cell_hi.0 - cell.0);
        let dy = (cell.1 - self.cell_lo.1).max(self.cell_hi.1 - cell.1);
        dx.max(dy).max(0)
    }

    /// Visits every occupied bucket on the Chebyshev ring of radius `ring`
    /// around `center`, clamping the sweep to the occupied-cell bounding box
    /// so far-away queries never walk empty stretches of the ring.
    fn scan_ring(&self, center: (i64, i64), ring: i64, mut visit: impl FnMut(&[u32])) {
        let (ci, cj) = center;
        let (lo_i, lo_j) = self.cell_lo;
        let (hi_i, hi_j) = self.cell_hi;
        if ring == 0 {
            if let Some(v) = self.buckets.get(&(ci, cj)) {
                visit(v);
            }
            return;
        }
        let i_min = (ci - ring).max(lo_i);
        let i_max = (ci + ring).min(hi_i);
        for j in [cj - ring, cj + ring] {
            if j < lo_j || j > hi_j {
                continue;
            }
            for i in i_min..=i_max {
                if let Some(v) = self.buckets.get(&(i, j)) {
                    visit(v);
                }
            }
        }
        let j_min = (cj - ring + 1).max(lo_j);
        let j_max = (cj + ring - 1).min(hi_j);
        for i in [ci - ring, ci + ring] {
            if i < lo_i || i > hi_i {
                continue;
            }
            for j in j_min..=j_max {
                if let Some(v) = self.buckets.get(&(i, j)) {
                    visit(v);
                }
            }
        }
    }

    /// Exact squared distance from `q` to the indexed set.
    pub(crate) fn min_dist_sq(&self, q: Point2) -> f64 {
        let mut best = q.dist_sq(self.pts[0]);
        let cell = self.cell_of(q);
        let last = self.rings_to_cover(cell);
        let mut ring = self.rings_to_grid(cell);
        while ring <= last {
            let lb = ((ring - 1).max(0) as f64) * self.h;
            if lb * lb > best {
                break;
            }
            let pts = &self.pts;
            let mut local = best;
            self.scan_ring(cell, ring, |bucket| {
                for &i in bucket {
                    local = local.min(q.dist_sq(pts[i as usize]));
                }
            });
            best = local;
            ring += 1;
        }
        best
    }

    /// True when some indexed point lies within squared distance `tol_sq`
    /// of `q` (early-exit variant of [`GridIndex::min_dist_sq`]).
    pub(crate) fn any_within_sq(&self, q: Point2, tol_sq: f64) -> bool {
        let cell = self.cell_of(q);
        let last = self.rings_to_cover(cell);
        let mut ring = self.rings_to_grid(cell);
        while ring <= last {
            let lb = ((ring - 1).max(0) as f64) * self.h;
            if lb * lb > tol_sq {
                return false;
            }
            let pts = &self.pts;
            let mut found = false;
            self.scan_ring(cell, ring, |bucket| {
                if found {
                    return;
                }
                for &i in bucket {
                    if q.dist_sq(pts[i as usize]) <= tol_sq {
                        found = true;
                        return;
                    }
                }
            });
            if found {
                return true;
            }
            ring += 1;
        }
        false
    }
}
