//! Built-in example zippers with resolved orientation flags.
//!
//! Pinning a similarity at two points still leaves a direct/mirror choice per
//! map, and the classical pictures (gasket, square-filling curve, carpet)
//! are only produced by specific choices. The catalog stores vertex chains
//! and signatures for five named examples together with orientation flags
//! found by exhaustive search against independent reference systems, plus
//! the search itself ([`resolve_reflections`]) so the stored flags can be
//! re-derived rather than trusted.

use crate::attractor::{hausdorff_distance, iterate_addresses, PointCloud, IFS};
use crate::error::{Error, Result};
use crate::geom::{Point2, Similarity2};
use crate::parametrize::Parametrization;
use crate::zipper::{Partition, Signature, Zipper};

/// Valid catalog names, in listing order.
pub const NAMES: [&str; 5] = ["gasket", "square", "carpet", "zipper_dendrite", "interval"];

/// Largest signature length [`resolve_reflections`] accepts (the search is
/// exhaustive over `2^m` orientation vectors).
pub const MAX_ORIENTATION_SEARCH: usize = 12;

/// Default per-sample point budget for orientation searches.
pub const DEFAULT_SAMPLE_BUDGET: u64 = 20_000;

/// A named zipper configuration with resolved orientation flags.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// One-line description of what the attractor is.
    pub summary: &'static str,
    pub vertices: Vec<Point2>,
    pub signature: Signature,
    pub reflects: Vec<bool>,
    pub partition: Partition,
    /// Set when the entry's construction has a known quirk worth reading
    /// about before relying on it (see the carpet entry).
    pub experimental: bool,
}

impl CatalogEntry {
    /// Builds the entry's zipper.
    pub fn zipper(&self) -> Result<Zipper> {
        Zipper::build_planar(self.vertices.clone(), self.signature.clone(), &self.reflects)
    }

    /// Builds the entry's zipper paired with its default partition.
    pub fn parametrization(&self) -> Result<Parametrization> {
        Parametrization::new(self.zipper()?, self.partition.clone())
    }

    /// The reference system this entry's attractor is expected to match, if
    /// one exists independently of the zipper construction.
    pub fn reference(&self) -> Option<IFS> {
        match self.name {
            "gasket" => Some(reference_gasket()),
            "square" => Some(reference_square()),
            "carpet" => Some(reference_carpet()),
            _ => None,
        }
    }
}

/// Looks up a catalog entry by name.
pub fn get_example(name: &str) -> Result<CatalogEntry> {
    match name {
        "gasket" => Ok(gasket()),
        "square" => Ok(square()),
        "carpet" => Ok(carpet()),
        "zipper_dendrite" => Ok(zipper_dendrite()),
        "interval" => Ok(interval()),
        other => Err(Error::UnknownExample {
            name: other.to_string(),
            valid: NAMES.join(", "),
        }),
    }
}

/// All entries in listing order.
pub fn all_entries() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| get_example(n).unwrap()).collect()
}

fn uniform_partition_for(signature: &Signature) -> Partition {
    Partition::uniform(signature.len())
}

/// Three half-scale maps zig-zagging over a triangle; the attractor is the
/// Sierpinski gasket and the curve traverses it.
pub fn gasket() -> CatalogEntry {
    let s3 = 3f64.sqrt();
    let signature = Signature::new(vec![1, 0, 1]).unwrap();
    let partition = uniform_partition_for(&signature);
    CatalogEntry {
        name: "gasket",
        summary: "three half-scale maps tracing the Sierpinski gasket",
        vertices: vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.25, s3 / 4.0),
            Point2::new(0.75, s3 / 4.0),
            Point2::new(1.0, 0.0),
        ],
        signature,
        reflects: vec![false, false, false],
        partition,
        experimental: false,
    }
}

/// Four half-scale maps whose images tile the unit square quadrant by
/// quadrant; the curve fills the square. Only the all-direct orientation
/// choice tiles — any mirrored map throws its quadrant off the square.
pub fn square() -> CatalogEntry {
    let signature = Signature::new(vec![1, 0, 0, 1]).unwrap();
    let partition = uniform_partition_for(&signature);
    CatalogEntry {
        name: "square",
        summary: "four half-scale maps filling the unit square",
        vertices: vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 0.5),
            Point2::new(0.5, 0.5),
            Point2::new(1.0, 0.5),
            Point2::new(1.0, 0.0),
        ],
        signature,
        reflects: vec![false, false, false, false],
        partition,
        experimental: false,
    }
}

/// Nine third-scale maps over the carpet's cell walk. The nine images cover
/// only eight distinct cells — the first two maps both land on the lower-left
/// cell (one rotated, one mirrored) — so the attractor is the Sierpinski
/// carpet with a doubled cell rather than a disjoint nine-cell tiling; the
/// center cell stays empty. Flagged experimental for that reason: the curve
/// visits the lower-left cell twice.
pub fn carpet() -> CatalogEntry {
    let signature = Signature::new(vec![0, 1, 0, 0, 1, 0, 0, 1, 0]).unwrap();
    let partition = uniform_partition_for(&signature);
    let third = 1.0 / 3.0;
    let two = 2.0 / 3.0;
    CatalogEntry {
        name: "carpet",
        summary: "nine third-scale maps tracing the Sierpinski carpet (lower-left cell doubled)",
        vertices: vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, third),
            Point2::new(third, third),
            Point2::new(third, two),
            Point2::new(third, 1.0),
            Point2::new(two, 1.0),
            Point2::new(two, two),
            Point2::new(two, third),
            Point2::new(two, 0.0),
            Point2::new(1.0, 0.0),
        ],
        signature,
        reflects: vec![true, false, false, false, false, false, false, false, false],
        partition,
        experimental: true,
    }
}

/// Seven third-scale maps over a battlement-shaped vertex chain; the
/// attractor is a dendrite (a tree-like connected set).
pub fn zipper_dendrite() -> CatalogEntry {
    let signature = Signature::new(vec![0, 0, 1, 1, 1, 0, 0]).unwrap();
    let partition = uniform_partition_for(&signature);
    CatalogEntry {
        name: "zipper_dendrite",
        summary: "seven third-scale maps whose attractor is a dendrite",
        vertices: vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 2.0),
            Point2::new(2.0, 2.0),
            Point2::new(2.0, 1.0),
            Point2::new(2.0, 0.0),
            Point2::new(3.0, 0.0),
        ],
        signature,
        reflects: vec![false; 7],
        partition,
        experimental: false,
    }
}

/// Two half-scale maps on a straight segment; the curve is the identity
/// parametrization of `[0,1]`, a baseline where every quantity is known in
/// closed form.
pub fn interval() -> CatalogEntry {
    let signature = Signature::new(vec![0, 0]).unwrap();
    let partition = uniform_partition_for(&signature);
    CatalogEntry {
        name: "interval",
        summary: "two half-scale maps parametrizing a straight segment",
        vertices: vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.5, 0.0),
            Point2::new(1.0, 0.0),
        ],
        signature,
        reflects: vec![false, false],
        partition,
        experimental: false,
    }
}

/// The textbook Sierpinski gasket system on base `[(0,0),(1,0)]` with apex
/// `(1/2, sqrt(3)/2)`: three half-scale homotheties at the corners.
pub fn reference_gasket() -> IFS {
    let s3 = 3f64.sqrt();
    IFS::new(vec![
        Similarity2::scaling(0.5, Point2::new(0.0, 0.0)),
        Similarity2::scaling(0.5, Point2::new(0.5, 0.0)),
        Similarity2::scaling(0.5, Point2::new(0.25, s3 / 4.0)),
    ])
    .expect("reference maps contract")
}

/// Four corner homotheties of ratio 1/2: the attractor is the filled unit
/// square.
pub fn reference_square() -> IFS {
    IFS::new(vec![
        Similarity2::scaling(0.5, Point2::new(0.0, 0.0)),
        Similarity2::scaling(0.5, Point2::new(0.5, 0.0)),
        Similarity2::scaling(0.5, Point2::new(0.0, 0.5)),
        Similarity2::scaling(0.5, Point2::new(0.5, 0.5)),
    ])
    .expect("reference maps contract")
}

/// The textbook Sierpinski carpet system: eight third-scale homotheties,
/// one per non-center cell of the 3x3 grid.
pub fn reference_carpet() -> IFS {
    let mut maps = Vec::with_capacity(8);
    for j in 0..3 {
        for i in 0..3 {
            if i == 1 && j == 1 {
                continue;
            }
            maps.push(Similarity2::scaling(
                1.0 / 3.0,
                Point2::new(i as f64 / 3.0, j as f64 / 3.0),
            ));
        }
    }
    IFS::new(maps).expect("reference maps contract")
}

/// Outcome of an orientation search.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationSearch {
    /// The best flag vector (lexicographically first among ties).
    pub flags: Vec<bool>,
    /// Hausdorff distance between the winning candidate's attractor sample
    /// and the reference sample.
    pub distance: f64,
    /// Enumeration depth used for the candidate samples.
    pub candidate_depth: usize,
    /// Enumeration depth used for the reference sample.
    pub reference_depth: usize,
}

fn sample_depth(m: usize, budget: u64) -> usize {
    let mut depth = 1usize;
    while (m as f64).powi(depth as i32 + 1) <= budget as f64 {
        depth += 1;
    }
    depth
}

fn attractor_sample(ifs: &IFS, depth: usize, budget: u64) -> Result<PointCloud> {
    let anchor = ifs.maps()[0]
        .fixed_point()
        .expect("IFS invariant guarantees contractions");
    iterate_addresses(ifs, depth, anchor, budget)
}

/// Finds the orientation flag vector whose zipper attractor best matches a
/// reference system, by exhaustive search over all `2^m` choices.
///
/// Candidates and the reference are sampled deterministically by address
/// enumeration to the deepest level whose point count fits `sample_budget`,
/// and compared by exact Hausdorff distance between the samples. Ties keep
/// the lexicographically first vector (direct before mirrored), so the
/// result is reproducible. Fails when the best candidate is still farther
/// from the reference than a tenth of the larger attractor diameter — then
/// no orientation choice produces the reference set.
pub fn resolve_reflections(
    vertices: Vec<Point2>,
    signature: Signature,
    reference: &IFS,
    sample_budget: u64,
) -> Result<OrientationSearch> {
    let m = signature.len();
    if m > MAX_ORIENTATION_SEARCH {
        return Err(Error::OrientationSearchTooLarge {
            got: m,
            limit: MAX_ORIENTATION_SEARCH,
        });
    }
    let reference_depth = sample_depth(reference.len(), sample_budget);
    let ref_sample = attractor_sample(reference, reference_depth, sample_budget)?;
    let candidate_depth = sample_depth(m, sample_budget);

    let mut best: Option<(Vec<bool>, f64)> = None;
    for mask in 0u32..(1u32 << m) {
        // Bit m-1-i drives flag i so ascending masks enumerate flag vectors
        // in lexicographic order with `direct < mirrored`.
        let flags: Vec<bool> = (0..m).map(|i| (mask >> (m - 1 - i)) & 1 == 1).collect();
        let zipper = Zipper::build_planar(vertices.clone(), signature.clone(), &flags)?;
        let ifs = IFS::from_zipper(&zipper)?;
        let sample = iterate_addresses(&ifs, candidate_depth, zipper.initial(), sample_budget)?;
        let d = hausdorff_distance(&sample, &ref_sample)?;
        if best.as_ref().is_none_or(|(_, b)| d < *b) {
            best = Some((flags, d));
        }
    }
    let (flags, distance) = best.expect("at least one candidate was scored");

    let candidate_zipper = Zipper::build_planar(vertices, signature, &flags)?;
    let candidate_ifs = IFS::from_zipper(&candidate_zipper)?;
    let ceiling = 0.1
        * candidate_ifs
            .diameter_bound()
            .max(reference.diameter_bound());
    if distance > ceiling {
        return Err(Error::NoOrientationMatch { best: distance });
    }
    Ok(OrientationSearch {
        flags,
        distance,
        candidate_depth,
        reference_depth,
    })
}

/// Hausdorff distance between an entry's attractor sample and an arbitrary
/// reference system's sample, at the same budget policy as
/// [`resolve_reflections`]. Useful for reporting how far an experimental
/// entry sits from competing references.
pub fn distance_to_reference(
    entry: &CatalogEntry,
    reference: &IFS,
    sample_budget: u64,
) -> Result<f64> {
    let zipper = entry.zipper()?;
    let ifs = IFS::from_zipper(&zipper)?;
    let depth = sample_depth(ifs.len(), sample_budget);
    let sample = iterate_addresses(&ifs, depth, zipper.initial(), sample_budget)?;
    let ref_depth = sample_depth(reference.len(), sample_budget);
    let ref_sample = attractor_sample(reference, ref_depth, sample_budget)?;
    hausdorff_distance(&sample, &ref_sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attractor::DEFAULT_BUDGET;

    #[test]
    fn all_entries_validate_tightly() {
        for entry in all_entries() {
            let zipper = entry.zipper().unwrap();
            let report = zipper.validate(1e-12);
            assert!(report.pass, "{} failed: {}", entry.name, report);
        }
    }

    #[test]
    fn unknown_name_lists_valid_ones() {
        let err = get_example("pentagon").unwrap_err().to_string();
        for name in NAMES {
            assert!(err.contains(name), "error should list {name}: {err}");
        }
    }

    #[test]
    fn gasket_orientation_search_finds_all_direct() {
        let entry = gasket();
        let search = resolve_reflections(
            entry.vertices.clone(),
            entry.signature.clone(),
            &reference_gasket(),
            DEFAULT_SAMPLE_BUDGET,
        )
        .unwrap();
        assert_eq!(search.flags, vec![false, false, false]);
        assert!(search.distance < 0.01, "distance {}", search.distance);
        assert_eq!(search.candidate_depth, 9);
    }

    #[test]
    fn gasket_polyline_tracks_reference() {
        let entry = gasket();
        let p = entry.parametrization().unwrap();
        let line = p.curve_polyline(8, DEFAULT_BUDGET).unwrap();
        let cloud = PointCloud::new(line.vertices().to_vec());
        let reference =
            attractor_sample(&reference_gasket(), 8, DEFAULT_BUDGET).unwrap();
        let d = hausdorff_distance(&cloud, &reference).unwrap();
        let bound = 2.0 * 0.5f64.powi(8) * p.ifs().diameter_bound();
        assert!(d < bound, "d_H {d} vs bound {bound}");
    }

    #[test]
    fn square_level_one_images_are_quadrants() {
        let entry = square();
        let zipper = entry.zipper().unwrap();
        let unit = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 1.0),
        ];
        let quadrant_origins = [
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 0.5),
            Point2::new(0.5, 0.5),
            Point2::new(0.5, 0.0),
        ];
        for (map, origin) in zipper.maps().iter().zip(&quadrant_origins) {
            let mut got: Vec<(f64, f64)> = unit
                .iter()
                .map(|&c| {
                    let p = map.apply(c);
                    (p.x, p.y)
                })
                .collect();
            got.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let want: Vec<(f64, f64)> = [
                (0.0, 0.0),
                (0.0, 0.5),
                (0.5, 0.0),
                (0.5, 0.5),
            ]
            .iter()
            .map(|&(x, y)| (origin.x + x, origin.y + y))
            .collect();
            for ((gx, gy), (wx, wy)) in got.iter().zip(&want) {
                assert!(
                    (gx - wx).abs() < 1e-12 && (gy - wy).abs() < 1e-12,
                    "corner ({gx},{gy}) vs ({wx},{wy})"
                );
            }
        }
    }

    #[test]
    fn square_orientation_search_keeps_all_direct() {
        let entry = square();
        let search = resolve_reflections(
            entry.vertices.clone(),
            entry.signature.clone(),
            &reference_square(),
            70_000,
        )
        .unwrap();
        assert_eq!(search.flags, vec![false; 4]);
        assert!(search.distance < 0.01, "distance {}", search.distance);
    }

    #[test]
    fn square_mirrored_map_leaves_the_square() {
        // Mirroring any single map throws its quadrant off the unit square,
        // so the mirrored zipper's attractor is measurably far from it.
        let entry = square();
        let zipper = Zipper::build_planar(
            entry.vertices.clone(),
            entry.signature.clone(),
            &[false, true, false, false],
        )
        .unwrap();
        let ifs = IFS::from_zipper(&zipper).unwrap();
        let sample = iterate_addresses(&ifs, 8, zipper.initial(), DEFAULT_BUDGET).unwrap();
        let reference = attractor_sample(&reference_square(), 8, DEFAULT_BUDGET).unwrap();
        let d = hausdorff_distance(&sample, &reference).unwrap();
        assert!(d > 0.01, "mirrored variant unexpectedly close: {d}");
    }

    #[test]
    fn carpet_matches_carpet_not_square() {
        let entry = carpet();
        let to_carpet = distance_to_reference(&entry, &reference_carpet(), 70_000).unwrap();
        assert!(to_carpet < 0.05, "carpet distance {to_carpet}");
        let to_square = distance_to_reference(&entry, &reference_square(), 70_000).unwrap();
        assert!(
            (0.12..=0.22).contains(&to_square),
            "square distance {to_square} (the empty center cell sits 1/6 away)"
        );
    }

    #[test]
    fn carpet_orientation_search_reproduces_stored_flags() {
        let entry = carpet();
        let search = resolve_reflections(
            entry.vertices.clone(),
            entry.signature.clone(),
            &reference_carpet(),
            DEFAULT_SAMPLE_BUDGET,
        )
        .unwrap();
        assert_eq!(search.flags, entry.reflects);
    }

    #[test]
    fn orientation_search_rejects_impossible_reference() {
        let entry = gasket();
        let err = resolve_reflections(
            entry.vertices.clone(),
            entry.signature.clone(),
            &reference_square(),
            DEFAULT_SAMPLE_BUDGET,
        )
        .unwrap_err();
        assert!(
            err.to_string().contains("no orientation choice matches"),
            "{err}"
        );
    }

    #[test]
    fn orientation_search_rejects_oversized_signatures() {
        let vertices: Vec<Point2> = (0..=13)
            .map(|i| Point2::new(i as f64 / 13.0, 0.0))
            .collect();
        let signature = Signature::new(vec![0; 13]).unwrap();
        let err =
            resolve_reflections(vertices, signature, &reference_square(), 1000).unwrap_err();
        assert!(err.to_string().contains("supports at most"), "{err}");
    }

    #[test]
    fn interval_curve_is_the_identity() {
        let p = interval().parametrization().unwrap();
        for &t in &[0.0, 0.125, 0.37, 0.5, 0.734, 1.0] {
            let got = p.gamma(t, 40).unwrap();
            assert!(got.dist(Point2::new(t, 0.0)) < 1e-12, "gamma({t}) = {got:?}");
        }
        let residual = p.conjugacy_residual(200, 40, 1).unwrap();
        assert!(residual < 1e-12, "residual {residual}");
    }

    #[test]
    fn dendrite_chain_entry_basics() {
        let entry = zipper_dendrite();
        let zipper = entry.zipper().unwrap();
        for map in zipper.maps() {
            assert!((map.ratio() - 1.0 / 3.0).abs() < 1e-12);
        }
    }
}
