//! JSON configuration files describing a system to build and how to draw it.
//!
//! A config carries either the *zipper form* — a vertex chain with a
//! signature and optional reflection flags and partition — or a *raw maps
//! list* of explicit similarities. Zipper-form configs can drive every
//! operation (curves, parametrization, attractors); raw map lists drive the
//! attractor operations only, since a parametrized curve needs the vertex
//! chain. Unknown fields are rejected so that typos fail loudly, and
//! [`emit_config`] writes canonical JSON (sorted keys, pretty-printed) so
//! that emitted files diff cleanly and round-trip exactly.
//!
//! ```json
//! {
//!   "name": "gasket",
//!   "signature": [1, 0, 1],
//!   "vertices": [[0.0, 0.0], [0.25, 0.433], [0.75, 0.433], [1.0, 0.0]]
//! }
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::attractor::IFS;
use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::geom::{Point2, Similarity2};
use crate::zipper::{Partition, Signature, Zipper};

/// One similarity, in either of the accepted spellings. The matrix form is
/// canonical on output; the ratio/angle form is a convenience for writing
/// configs by hand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum MapConfig {
    /// `linear * x + translate` with an explicit 2x2 linear part, which must
    /// be a nonzero scalar multiple of a rotation or reflection.
    Matrix {
        matrix: [[f64; 2]; 2],
        translate: [f64; 2],
    },
    /// Contraction ratio, rotation angle in degrees, optional reflection
    /// (across the x-axis, applied before the rotation), then translation.
    RatioAngle {
        ratio: f64,
        angle_deg: f64,
        #[serde(default)]
        reflect: bool,
        translate: [f64; 2],
    },
}

impl MapConfig {
    /// Builds the similarity this entry describes.
    pub fn to_similarity(&self) -> Result<Similarity2> {
        match *self {
            MapConfig::Matrix { matrix, translate } => {
                Similarity2::from_parts(matrix, Point2::new(translate[0], translate[1]))
            }
            MapConfig::RatioAngle {
                ratio,
                angle_deg,
                reflect,
                translate,
            } => {
                if !(ratio > 0.0 && ratio < 1.0) {
                    return Err(Error::Config(format!(
                        "map ratio must be in (0, 1) (got {ratio})"
                    )));
                }
                Ok(Similarity2::from_ratio_angle(
                    ratio,
                    angle_deg.to_radians(),
                    reflect,
                    Point2::new(translate[0], translate[1]),
                ))
            }
        }
    }

    /// Canonical (matrix-form) spelling of a similarity.
    pub fn from_similarity(map: &Similarity2) -> MapConfig {
        MapConfig::Matrix {
            matrix: map.linear,
            translate: [map.translation.x, map.translation.y],
        }
    }
}

/// Partition spelling: explicit cuts, or the string `"uniform"` for the
/// equal-width partition matched to the map count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum PartitionConfig {
    /// A named shorthand; only `"uniform"` is defined.
    Named(String),
    /// Explicit cut sequence `0 = x_0 < x_1 < ... < x_m = 1`.
    Cuts { cuts: Vec<f64> },
}

/// Drawing style carried alongside a system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StyleConfig {
    /// Stroke width in output pixels.
    #[serde(default = "default_stroke_width")]
    pub stroke_width: f64,
    /// Padding around the geometry as a fraction of its larger dimension.
    #[serde(default = "default_padding")]
    pub padding: f64,
    /// Stroke colors, cycled per layer.
    #[serde(default = "default_colors")]
    pub colors: Vec<String>,
}

fn default_stroke_width() -> f64 {
    1.5
}

fn default_padding() -> f64 {
    0.05
}

fn default_colors() -> Vec<String> {
    vec![
        "#1f77b4".to_string(),
        "#d62728".to_string(),
        "#2ca02c".to_string(),
        "#9467bd".to_string(),
    ]
}

impl Default for StyleConfig {
    fn default() -> Self {
        StyleConfig {
            stroke_width: default_stroke_width(),
            padding: default_padding(),
            colors: default_colors(),
        }
    }
}

/// A system description as read from or written to a config file.
///
/// Exactly one of the two forms must be present:
///
/// * zipper form — `vertices` and `signature`, plus optional `reflects`
///   (default: no reflections) and `partition` (default: uniform);
/// * raw form — `maps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Display name.
    pub name: String,
    /// Optional one-line description.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    /// Zipper form: vertex chain `z_0 ... z_m` as `[x, y]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
    /// Zipper form: 0/1 orientation choices, one per map.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<Vec<u8>>,
    /// Zipper form: reflection flags, one per map.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflects: Option<Vec<bool>>,
    /// Zipper form: interval partition for the parametrization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionConfig>,
    /// Raw form: explicit map list.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<MapConfig>>,
    /// Optional drawing style.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub style: Option<StyleConfig>,
}

impl SystemConfig {
    /// Whether this config uses the zipper form (and can therefore drive
    /// curve and parametrization operations).
    pub fn is_zipper_form(&self) -> bool {
        self.maps.is_none()
    }

    /// Checks the config's internal consistency by building everything it
    /// declares. [`load_config`] and [`parse_config`] call this, so a config
    /// obtained from either is already validated.
    pub fn validate(&self) -> Result<()> {
        let has_zipper_fields = self.vertices.is_some()
            || self.signature.is_some()
            || self.reflects.is_some()
            || self.partition.is_some();
        if let Some(maps) = &self.maps {
            if has_zipper_fields {
                return Err(Error::Config(
                    "config mixes a raw maps list with zipper-form fields \
                     (vertices/signature/reflects/partition); provide exactly one form"
                        .into(),
                ));
            }
            if maps.is_empty() {
                return Err(Error::Config("maps list must be nonempty".into()));
            }
            self.build_ifs()?;
            return Ok(());
        }
        if !has_zipper_fields {
            return Err(Error::Config(
                "config needs either the zipper form (vertices + signature) or a maps list".into(),
            ));
        }
        let zipper = self.build_zipper()?;
        self.build_partition(zipper.m())?;
        Ok(())
    }

    /// Builds the zipper this config describes. Raw-map configs are refused:
    /// the vertex chain is what makes a curve, and a bare map list has none.
    pub fn build_zipper(&self) -> Result<Zipper> {
        if self.maps.is_some() {
            return Err(Error::Config(
                "this operation needs the zipper form (vertices + signature), \
                 but the config provides a raw maps list"
                    .into(),
            ));
        }
        let vertices = self.vertices.as_ref().ok_or_else(|| {
            Error::Config("the zipper form needs a vertices list".into())
        })?;
        let signature = self.signature.as_ref().ok_or_else(|| {
            Error::Config("the zipper form needs a signature list".into())
        })?;
        let signature = Signature::new(signature.clone())?;
        let points: Vec<Point2> = vertices.iter().map(|v| Point2::new(v[0], v[1])).collect();
        let reflects = match &self.reflects {
            Some(flags) => flags.clone(),
            None => vec![false; signature.len()],
        };
        Zipper::build_planar(points, signature, &reflects)
    }

    /// Builds the iterated function system of either form.
    pub fn build_ifs(&self) -> Result<IFS> {
        match &self.maps {
            Some(maps) => {
                let sims: Vec<Similarity2> = maps
                    .iter()
                    .map(MapConfig::to_similarity)
                    .collect::<Result<_>>()?;
                IFS::new(sims)
            }
            None => IFS::from_zipper(&self.build_zipper()?),
        }
    }

    /// Resolves the partition for a zipper with `m` maps: explicit cuts,
    /// the `"uniform"` shorthand, or (when absent) the uniform default.
    pub fn build_partition(&self, m: usize) -> Result<Partition> {
        match &self.partition {
            None => Ok(Partition::uniform(m)),
            Some(PartitionConfig::Named(name)) if name == "uniform" => Ok(Partition::uniform(m)),
            Some(PartitionConfig::Named(name)) => Err(Error::Config(format!(
                "unknown partition name '{name}' (only \"uniform\" is defined)"
            ))),
            Some(PartitionConfig::Cuts { cuts }) => {
                let partition = Partition::new(cuts.clone())?;
                if partition.len() != m {
                    return Err(Error::LengthMismatch(format!(
                        "partition has {} intervals for {} maps",
                        partition.len(),
                        m
                    )));
                }
                Ok(partition)
            }
        }
    }

    /// Drawing style, falling back to the defaults when none is configured.
    pub fn style(&self) -> StyleConfig {
        self.style.clone().unwrap_or_default()
    }

    /// Config equivalent of a catalog entry (zipper form, explicit cuts).
    pub fn from_catalog(entry: &CatalogEntry) -> SystemConfig {
        SystemConfig {
            name: entry.name.to_string(),
            summary: Some(entry.summary.to_string()),
            vertices: Some(entry.vertices.iter().map(|p| [p.x, p.y]).collect()),
            signature: Some(entry.signature.bits().to_vec()),
            reflects: Some(entry.reflects.clone()),
            partition: Some(PartitionConfig::Cuts {
                cuts: entry.partition.cuts().to_vec(),
            }),
            maps: None,
            style: None,
        }
    }

    /// Raw-form config for an explicit map list (canonical matrix spelling).
    pub fn from_ifs(name: &str, ifs: &IFS) -> SystemConfig {
        SystemConfig {
            name: name.to_string(),
            summary: None,
            vertices: None,
            signature: None,
            reflects: None,
            partition: None,
            maps: Some(ifs.maps().iter().map(MapConfig::from_similarity).collect()),
            style: None,
        }
    }
}

/// Canonical JSON for a config: keys sorted, two-space indent, trailing
/// newline. Emitting and re-parsing is the identity.
pub fn emit_config(config: &SystemConfig) -> Result<String> {
    // Round-tripping through `Value` sorts object keys.
    let value = serde_json::to_value(config)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

/// Parses and validates a config from JSON text.
pub fn parse_config(text: &str) -> Result<SystemConfig> {
    let config: SystemConfig = serde_json::from_str(text)?;
    config.validate()?;
    Ok(config)
}

/// Reads, parses, and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<SystemConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read '{}': {e}", path.display())))?;
    parse_config(&text)
}

/// Writes a config in canonical form.
pub fn save_config(config: &SystemConfig, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, emit_config(config)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{all_entries, get_example};
    use proptest::prelude::*;

    fn gasket_config() -> SystemConfig {
        SystemConfig::from_catalog(&get_example("gasket").unwrap())
    }

    #[test]
    fn emit_then_parse_is_identity_on_catalog_entries() {
        for entry in all_entries() {
            let config = SystemConfig::from_catalog(&entry);
            let text = emit_config(&config).unwrap();
            let parsed = parse_config(&text).unwrap();
            assert_eq!(config, parsed, "round-trip changed {}", entry.name);
        }
    }

    #[test]
    fn save_then_load_round_trips_through_a_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gasket.json");
        let config = gasket_config();
        save_config(&config, &path).unwrap();
        let loaded = load_config(&path).unwrap();
        assert_eq!(config, loaded);
    }

    #[test]
    fn canonical_emission_sorts_keys() {
        let text = emit_config(&gasket_config()).unwrap();
        let positions: Vec<usize> = ["\"name\"", "\"partition\"", "\"reflects\"", "\"signature\"", "\"summary\"", "\"vertices\""]
            .iter()
            .map(|key| text.find(key).unwrap_or_else(|| panic!("{key} missing")))
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "keys not sorted: {text}");
    }

    #[test]
    fn bad_signature_value_is_reported() {
        let text = r#"{
            "name": "bad",
            "vertices": [[0.0, 0.0], [0.5, 0.5], [1.0, 0.0]],
            "signature": [0, 2]
        }"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("signature values must be 0 or 1"), "{err}");
    }

    #[test]
    fn non_increasing_partition_names_the_cut() {
        let text = r#"{
            "name": "bad",
            "vertices": [[0.0, 0.0], [0.25, 0.3], [0.75, 0.3], [1.0, 0.0]],
            "signature": [1, 0, 1],
            "partition": { "cuts": [0.0, 0.6, 0.5, 1.0] }
        }"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("x_2 = 0.5"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{
            "name": "bad",
            "vertices": [[0.0, 0.0], [0.5, 0.5], [1.0, 0.0]],
            "signature": [0, 0],
            "frobnicate": true
        }"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("unknown field"), "{err}");
    }

    #[test]
    fn mixing_forms_is_rejected() {
        let text = r#"{
            "name": "bad",
            "vertices": [[0.0, 0.0], [0.5, 0.5], [1.0, 0.0]],
            "signature": [0, 0],
            "maps": [{ "ratio": 0.5, "angle_deg": 0.0, "translate": [0.0, 0.0] }]
        }"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("exactly one form"), "{err}");
    }

    #[test]
    fn empty_config_is_rejected() {
        let err = parse_config(r#"{ "name": "empty" }"#).unwrap_err().to_string();
        assert!(err.contains("either the zipper form"), "{err}");
    }

    #[test]
    fn zipper_form_needs_signature() {
        let text = r#"{
            "name": "halfdone",
            "vertices": [[0.0, 0.0], [1.0, 0.0]]
        }"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("needs a signature"), "{err}");
    }

    #[test]
    fn raw_maps_build_an_ifs_in_both_spellings() {
        let text = r#"{
            "name": "two-maps",
            "maps": [
                { "matrix": [[0.5, 0.0], [0.0, 0.5]], "translate": [0.0, 0.0] },
                { "ratio": 0.5, "angle_deg": 90.0, "translate": [0.5, 0.0] }
            ]
        }"#;
        let config = parse_config(text).unwrap();
        assert!(!config.is_zipper_form());
        let ifs = config.build_ifs().unwrap();
        assert_eq!(ifs.len(), 2);
        // the second map rotates by 90 degrees: (1, 0) -> (0, 0.5) + translate
        let image = ifs.map(2).apply(Point2::new(1.0, 0.0));
        assert!(image.dist(Point2::new(0.5, 0.5)) < 1e-12);
        // and a curve cannot be built from a bare map list
        let err = config.build_zipper().unwrap_err().to_string();
        assert!(err.contains("zipper form"), "{err}");
    }

    #[test]
    fn raw_maps_reject_partition_field() {
        let text = r#"{
            "name": "bad",
            "maps": [{ "ratio": 0.5, "angle_deg": 0.0, "translate": [0.0, 0.0] }],
            "partition": "uniform"
        }"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("exactly one form"), "{err}");
    }

    #[test]
    fn non_similarity_matrix_is_rejected() {
        let text = r#"{
            "name": "bad",
            "maps": [{ "matrix": [[0.5, 0.0], [0.0, 0.25]], "translate": [0.0, 0.0] }]
        }"#;
        assert!(parse_config(text).is_err());
    }

    #[test]
    fn ratio_out_of_range_is_rejected() {
        let text = r#"{
            "name": "bad",
            "maps": [{ "ratio": 1.25, "angle_deg": 0.0, "translate": [0.0, 0.0] }]
        }"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("ratio must be in (0, 1)"), "{err}");
    }

    #[test]
    fn uniform_shorthand_matches_explicit_uniform() {
        let text = r#"{
            "name": "gasket-uniform",
            "vertices": [[0.0, 0.0], [0.25, 0.433], [0.75, 0.433], [1.0, 0.0]],
            "signature": [1, 0, 1],
            "partition": "uniform"
        }"#;
        let config = parse_config(text).unwrap();
        let partition = config.build_partition(3).unwrap();
        assert_eq!(partition.cuts(), Partition::uniform(3).cuts());
        // unknown names are refused
        let mut bad = config.clone();
        bad.partition = Some(PartitionConfig::Named("gaussian".into()));
        let err = bad.build_partition(3).unwrap_err().to_string();
        assert!(err.contains("unknown partition name 'gaussian'"), "{err}");
    }

    #[test]
    fn partition_interval_count_must_match_map_count() {
        let text = r#"{
            "name": "bad",
            "vertices": [[0.0, 0.0], [0.25, 0.3], [0.75, 0.3], [1.0, 0.0]],
            "signature": [1, 0, 1],
            "partition": { "cuts": [0.0, 0.5, 1.0] }
        }"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("2 intervals for 3 maps"), "{err}");
    }

    #[test]
    fn style_defaults_and_unknown_style_fields() {
        let config = gasket_config();
        let style = config.style();
        assert_eq!(style.stroke_width, 1.5);
        assert!(style.padding > 0.0);
        assert!(!style.colors.is_empty());

        let text = r#"{
            "name": "bad",
            "vertices": [[0.0, 0.0], [0.5, 0.5], [1.0, 0.0]],
            "signature": [0, 0],
            "style": { "stroke_width": 2.0, "glitter": true }
        }"#;
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("unknown field"), "{err}");
    }

    #[test]
    fn parse_errors_carry_position_information() {
        let err = parse_config("{ \"name\": \n oops }").unwrap_err().to_string();
        assert!(err.contains("line"), "{err}");
    }

    proptest! {
        // A raw-form config survives emit -> parse -> build with its maps
        // intact.
        #[test]
        fn raw_config_round_trip_preserves_maps(
            params in proptest::collection::vec(
                (0.05f64..0.95, -3.0f64..3.0, any::<bool>(), -2.0f64..2.0, -2.0f64..2.0),
                1..5,
            )
        ) {
            let sims: Vec<Similarity2> = params
                .iter()
                .map(|&(r, angle, reflect, tx, ty)| {
                    Similarity2::from_ratio_angle(r, angle, reflect, Point2::new(tx, ty))
                })
                .collect();
            let ifs = IFS::new(sims).unwrap();
            let config = SystemConfig::from_ifs("random", &ifs);
            let text = emit_config(&config).unwrap();
            let parsed = parse_config(&text).unwrap();
            prop_assert_eq!(&config, &parsed);
            let rebuilt = parsed.build_ifs().unwrap();
            for (a, b) in ifs.maps().iter().zip(rebuilt.maps()) {
                let probe = Point2::new(0.733, -0.41);
                prop_assert!(a.apply(probe).dist(b.apply(probe)) < 1e-12);
            }
        }
    }
}
