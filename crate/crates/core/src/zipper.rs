//! Zippers: vertex chains stitched together by contraction maps.
//!
//! A zipper is a system of contractions `S_1..S_m` together with vertices
//! `z_0..z_m` and a 0/1 signature such that each map sends the chain's
//! endpoints onto its own edge: `S_j(z_0) = z_{j-1+e_j}` and
//! `S_j(z_m) = z_{j-e_j}`. Signature bit `e_j = 1` means map `j` traverses
//! its edge in reverse. The images of consecutive maps share a vertex, which
//! forces the attractor to be arcwise connected.
//!
//! The same data on the unit interval — a partition `0 = x_0 < ... < x_m = 1`
//! with the affine maps `T_i(t) = x_{i-1+e_i}(1-t) + x_{i-e_i} t` — forms the
//! standard interval zipper that parametrizations are conjugated against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point2, Similarity2};

/// Orientation bits `e_1..e_m`, one per map; 1 reverses the edge traversal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Signature(Vec<u8>);

impl Signature {
    /// Validates that every entry is 0 or 1 and the signature is nonempty.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidSignature("signature must be nonempty".into()));
        }
        if let Some(bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidSignature(format!(
                "signature values must be 0 or 1 (got {bad})"
            )));
        }
        Ok(Signature(bits))
    }

    /// Number of maps `m`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Raw bits.
    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// Bit for map `i` (0-based).
    pub fn bit(&self, i: usize) -> u8 {
        self.0[i]
    }

    /// True when map `i` (0-based) reverses orientation along the chain.
    pub fn is_reversing(&self, i: usize) -> bool {
        self.0[i] == 1
    }
}

/// A partition `0 = x_0 < x_1 < ... < x_m = 1` of the unit interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    cuts: Vec<f64>,
}

impl Partition {
    /// Validates endpoints and strict monotonicity.
    pub fn new(cuts: Vec<f64>) -> Result<Self> {
        if cuts.len() < 2 {
            return Err(Error::InvalidPartition(
                "a partition needs at least two cuts".into(),
            ));
        }
        if cuts[0] != 0.0 {
            return Err(Error::InvalidPartition(format!(
                "x_0 must be 0 (got {})",
                cuts[0]
            )));
        }
        let last = cuts.len() - 1;
        if cuts[last] != 1.0 {
            return Err(Error::InvalidPartition(format!(
                "x_{} must be 1 (got {})",
                last, cuts[last]
            )));
        }
        for i in 1..cuts.len() {
            // Negated on purpose: a NaN cut must fail validation, and
            // `cuts[i] <= cuts[i - 1]` would wave it through.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(cuts[i] > cuts[i - 1]) {
                return Err(Error::InvalidPartition(format!(
                    "cut x_{} = {} is not greater than x_{} = {}",
                    i,
                    cuts[i],
                    i - 1,
                    cuts[i - 1]
                )));
            }
        }
        Ok(Partition { cuts })
    }

    /// The uniform partition into `m` equal intervals.
    pub fn uniform(m: usize) -> Self {
        assert!(m >= 1, "partition needs at least one interval");
        let mut cuts: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
        cuts[m] = 1.0;
        Partition { cuts }
    }

    /// A partition whose interval widths are proportional to the given
    /// positive weights (useful for mixed-ratio systems).
    pub fn proportional(weights: &[f64]) -> Result<Self> {
        // Negated on purpose: NaN weights must be rejected, and `w <= 0.0`
        // would let them pass.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if weights.is_empty() || weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidPartition(
                "proportional weights must be positive".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        let mut cuts = Vec::with_capacity(weights.len() + 1);
        let mut acc = 0.0;
        cuts.push(0.0);
        for &w in weights {
            acc += w;
            cuts.push(acc / total);
        }
        *cuts.last_mut().unwrap() = 1.0;
        Partition::new(cuts)
    }

    /// Number of intervals `m`.
    pub fn len(&self) -> usize {
        self.cuts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The cut points `x_0..x_m`.
    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    /// Width of interval `i` (0-based).
    pub fn width(&self, i: usize) -> f64 {
        self.cuts[i + 1] - self.cuts[i]
    }

    /// Smallest interval width.
    pub fn min_width(&self) -> f64 {
        (0..self.len())
            .map(|i| self.width(i))
            .fold(f64::INFINITY, f64::min)
    }

    /// The 0-based index of the interval containing `t`.
    ///
    /// Intervals are taken left-closed with the last interval closed, so an
    /// interior cut belongs to the interval on its right. This fixed
    /// tie-break makes digit expansions reproducible bit-for-bit.
    pub fn locate(&self, t: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterOutOfRange { t });
        }
        if t >= 1.0 {
            return Ok(self.len() - 1);
        }
        Ok(self.cuts.partition_point(|&c| c <= t) - 1)
    }
}

/// An affine self-map of `[0, 1]` stored by its endpoint images.
///
/// Keeping `T(0)` and `T(1)` (rather than slope and offset) makes the
/// defining tiling property of interval zippers exact in floating point:
/// `eval(0.0)` and `eval(1.0)` return the stored cuts bit-for-bit. The
/// slope/offset view is available through [`IntervalMap::slope`] and
/// [`IntervalMap::offset`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalMap {
    at_zero: f64,
    at_one: f64,
}

impl IntervalMap {
    pub fn new(at_zero: f64, at_one: f64) -> Self {
        IntervalMap { at_zero, at_one }
    }

    /// Evaluates `T(t) = T(0)(1-t) + T(1)t`.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        self.at_zero * (1.0 - t) + self.at_one * t
    }

    /// Slope `a` of the `a t + b` view; negative exactly for reversing maps.
    #[inline]
    pub fn slope(&self) -> f64 {
        self.at_one - self.at_zero
    }

    /// Offset `b` of the `a t + b` view.
    #[inline]
    pub fn offset(&self) -> f64 {
        self.at_zero
    }

    /// Preimage under the map: `(t - T(0)) / (T(1) - T(0))`.
    #[inline]
    pub fn eval_inverse(&self, t: f64) -> f64 {
        (t - self.at_zero) / (self.at_one - self.at_zero)
    }
}

/// The standard interval zipper: maps `T_i(t) = x_{i-1+e_i}(1-t) + x_{i-e_i}t`
/// over a partition, one per signature bit.
///
/// The images tile `[0, 1]` with touching endpoints; `T_i` is decreasing
/// exactly when `e_i = 1`.
pub fn standard_interval_zipper(p: &Partition, eps: &Signature) -> Result<Vec<IntervalMap>> {
    if eps.len() != p.len() {
        return Err(Error::LengthMismatch(format!(
            "signature has {} bits but the partition has {} intervals",
            eps.len(),
            p.len()
        )));
    }
    let cuts = p.cuts();
    Ok((0..p.len())
        .map(|j| {
            let e = eps.bit(j) as usize;
            IntervalMap::new(cuts[j + e], cuts[j + 1 - e])
        })
        .collect())
}

/// Residuals and ratios from checking a zipper against its defining
/// equalities.
#[derive(Debug, Clone)]
pub struct MapCheck {
    /// 1-based map index.
    pub index: usize,
    /// `|S_j(z_0) - z_{j-1+e_j}|`.
    pub start_residual: f64,
    /// `|S_j(z_m) - z_{j-e_j}|`.
    pub end_residual: f64,
    /// Contraction ratio of the map.
    pub ratio: f64,
}

/// Validation outcome for a [`Zipper`]; failures are carried, not thrown.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// Per-map endpoint residuals and ratios.
    pub maps: Vec<MapCheck>,
    /// Distance between the shared-vertex images of consecutive maps
    /// (junction `j` joins maps `j` and `j+1`, 1-based).
    pub junction_residuals: Vec<f64>,
    /// Tolerance the pass flag was computed against.
    pub tol: f64,
    /// All residuals within `tol` and every ratio `< 1`.
    pub pass: bool,
}

impl ValidationReport {
    /// Largest endpoint or junction residual.
    pub fn max_residual(&self) -> f64 {
        let endpoint = self
            .maps
            .iter()
            .map(|mc| mc.start_residual.max(mc.end_residual))
            .fold(0.0f64, f64::max);
        self.junction_residuals
            .iter()
            .copied()
            .fold(endpoint, f64::max)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for mc in &self.maps {
            writeln!(
                f,
                "map {}: start residual {:.3e}, end residual {:.3e}, ratio {:.6}",
                mc.index, mc.start_residual, mc.end_residual, mc.ratio
            )?;
        }
        for (j, r) in self.junction_residuals.iter().enumerate() {
            writeln!(f, "junction {}: residual {:.3e}", j + 1, r)?;
        }
        writeln!(
            f,
            "{} (max residual {:.3e}, tol {:.1e})",
            if self.pass { "pass" } else { "FAIL" },
            self.max_residual(),
            self.tol
        )
    }
}

/// A planar zipper: `m` similarity maps, `m + 1` vertices, and a signature.
#[derive(Debug, Clone, PartialEq)]
pub struct Zipper {
    maps: Vec<Similarity2>,
    vertices: Vec<Point2>,
    signature: Signature,
}

impl Zipper {
    /// Builds the zipper whose maps are the unique similarities pinned by the
    /// vertex chain: map `j` sends `(z_0, z_m)` to `(z_{j-1+e_j}, z_{j-e_j})`,
    /// with its direct/mirror orientation chosen by `reflects[j]`.
    ///
    /// Fails if a map would be non-contracting (its edge at least as long as
    /// the whole chain) or degenerate (coincident edge endpoints).
    pub fn build_planar(
        vertices: Vec<Point2>,
        signature: Signature,
        reflects: &[bool],
    ) -> Result<Zipper> {
        let m = signature.len();
        if vertices.len() != m + 1 {
            return Err(Error::LengthMismatch(format!(
                "{} vertices with {} signature bits (need m + 1 vertices for m bits)",
                vertices.len(),
                m
            )));
        }
        if reflects.len() != m {
            return Err(Error::LengthMismatch(format!(
                "{} reflection flags for {} maps",
                reflects.len(),
                m
            )));
        }
        let z0 = vertices[0];
        let zm = vertices[m];
        if z0 == zm {
            return Err(Error::DegenerateMap { index: 0 });
        }
        let span = z0.dist(zm);
        let mut maps = Vec::with_capacity(m);
        for j in 0..m {
            let e = signature.bit(j) as usize;
            let start = vertices[j + e];
            let end = vertices[j + 1 - e];
            if start == end {
                return Err(Error::DegenerateMap { index: j + 1 });
            }
            let edge = start.dist(end);
            if edge >= span {
                return Err(Error::NonContractingMap {
                    index: j + 1,
                    ratio: edge / span,
                });
            }
            maps.push(Similarity2::from_point_pair(
                z0,
                zm,
                start,
                end,
                reflects[j],
            )?);
        }
        Ok(Zipper {
            maps,
            vertices,
            signature,
        })
    }

    /// Assembles a zipper from explicit maps (shape checks only).
    ///
    /// The defining equalities are *not* enforced here so that imperfect
    /// hand-entered systems can be inspected with [`Zipper::validate`].
    /// Single-map zippers are accepted when the map contracts.
    pub fn from_parts(
        maps: Vec<Similarity2>,
        vertices: Vec<Point2>,
        signature: Signature,
    ) -> Result<Zipper> {
        if vertices.len() != maps.len() + 1 || signature.len() != maps.len() {
            return Err(Error::LengthMismatch(format!(
                "{} maps, {} vertices, {} signature bits (need m, m + 1, m)",
                maps.len(),
                vertices.len(),
                signature.len()
            )));
        }
        Ok(Zipper {
            maps,
            vertices,
            signature,
        })
    }

    pub fn maps(&self) -> &[Similarity2] {
        &self.maps
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Number of maps.
    pub fn m(&self) -> usize {
        self.maps.len()
    }

    /// The chain's initial point `z_0`.
    pub fn initial(&self) -> Point2 {
        self.vertices[0]
    }

    /// The chain's final point `z_m`.
    pub fn terminal(&self) -> Point2 {
        *self.vertices.last().unwrap()
    }

    /// Contraction ratios of all maps.
    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(Similarity2::ratio).collect()
    }

    /// Largest contraction ratio.
    pub fn max_ratio(&self) -> f64 {
        self.maps.iter().map(Similarity2::ratio).fold(0.0, f64::max)
    }

    /// For signature bit 0 the map sends `(z_0, z_m)` to `(z_{j-1}, z_j)`;
    /// the image of the shared junction vertex `z_j` under map `j` (0-based)
    /// is therefore `S_j(z_m)`, and `S_j(z_0)` for bit 1.
    fn junction_image(&self, j: usize) -> Point2 {
        if self.signature.is_reversing(j) {
            self.maps[j].apply(self.initial())
        } else {
            self.maps[j].apply(self.terminal())
        }
    }

    fn junction_preimage(&self, j: usize) -> Point2 {
        if self.signature.is_reversing(j) {
            self.maps[j].apply(self.terminal())
        } else {
            self.maps[j].apply(self.initial())
        }
    }

    /// Checks the defining equalities, contraction, and the chain-touch
    /// property (consecutive maps sharing their junction vertex) against a
    /// tolerance; all findings are reported rather than raised.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let m = self.m();
        let z0 = self.initial();
        let zm = self.terminal();
        let mut maps = Vec::with_capacity(m);
        let mut pass = true;
        for j in 0..m {
            let e = self.signature.bit(j) as usize;
            let start_target = self.vertices[j + e];
            let end_target = self.vertices[j + 1 - e];
            let check = MapCheck {
                index: j + 1,
                start_residual: self.maps[j].apply(z0).dist(start_target),
                end_residual: self.maps[j].apply(zm).dist(end_target),
                ratio: self.maps[j].ratio(),
            };
            pass &= check.start_residual <= tol && check.end_residual <= tol && check.ratio < 1.0;
            maps.push(check);
        }
        let mut junction_residuals = Vec::with_capacity(m.saturating_sub(1));
        for j in 0..m.saturating_sub(1) {
            let r = self.junction_image(j).dist(self.junction_preimage(j + 1));
            pass &= r <= tol;
            junction_residuals.push(r);
        }
        ValidationReport {
            maps,
            junction_residuals,
            tol,
            pass,
        }
    }
}
