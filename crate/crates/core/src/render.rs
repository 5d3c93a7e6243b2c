//! Deterministic SVG output for curves, cell outlines, and point clouds.
//!
//! A [`Drawing`] collects layers of geometry in mathematical coordinates
//! (y up). Rendering bakes one affine transform into the emitted
//! coordinates: the geometry's padded bounding box is scaled to a fixed
//! pixel width and the y-axis is flipped so the picture appears upright.
//! Every coordinate is written with exactly six decimal places, so a given
//! drawing always produces byte-identical SVG — the files are usable as
//! goldens in tests and diffs.

use std::fs;
use std::path::Path;

use crate::config::StyleConfig;
use crate::error::{Error, Result};
use crate::geom::Point2;

/// Pixel size of the larger rendered dimension.
const TARGET_SIZE: f64 = 800.0;

/// How one layer of a [`Drawing`] is drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LayerKind {
    /// Open stroked path through the points in order.
    Polyline,
    /// Closed stroked path (last point joins the first), unfilled.
    Polygon,
    /// One filled dot per point; the radius is in output pixels.
    Dots { radius: f64 },
}

/// A single layer: geometry plus how to draw it. The stroke/fill color is
/// taken from the style's color list, cycled by layer index.
#[derive(Debug, Clone)]
pub struct Layer {
    /// How the points are drawn.
    pub kind: LayerKind,
    /// Geometry in mathematical coordinates.
    pub points: Vec<Point2>,
}

/// Layered geometry ready to render.
#[derive(Debug, Clone)]
pub struct Drawing {
    layers: Vec<Layer>,
    style: StyleConfig,
}

impl Drawing {
    /// Empty drawing with the given style.
    pub fn new(style: StyleConfig) -> Drawing {
        Drawing {
            layers: Vec::new(),
            style,
        }
    }

    /// Adds an open path layer.
    pub fn add_polyline(&mut self, points: Vec<Point2>) {
        self.layers.push(Layer {
            kind: LayerKind::Polyline,
            points,
        });
    }

    /// Adds a closed path layer.
    pub fn add_polygon(&mut self, points: Vec<Point2>) {
        self.layers.push(Layer {
            kind: LayerKind::Polygon,
            points,
        });
    }

    /// Adds a dot layer (point cloud), with the dot radius in pixels.
    pub fn add_dots(&mut self, points: Vec<Point2>, radius: f64) {
        self.layers.push(Layer {
            kind: LayerKind::Dots { radius },
            points,
        });
    }

    /// The layers added so far.
    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Bounding box over all layer points, or `None` while nothing has been
    /// added.
    pub fn bounds(&self) -> Option<(Point2, Point2)> {
        let mut bounds: Option<(Point2, Point2)> = None;
        for layer in &self.layers {
            for p in &layer.points {
                bounds = Some(match bounds {
                    None => (*p, *p),
                    Some((lo, hi)) => (
                        Point2::new(lo.x.min(p.x), lo.y.min(p.y)),
                        Point2::new(hi.x.max(p.x), hi.y.max(p.y)),
                    ),
                });
            }
        }
        bounds
    }

    /// Renders the drawing to an SVG document string.
    ///
    /// The padded bounding box is mapped to pixels with the larger dimension
    /// scaled to 800, the y-axis flipped, and all coordinates written with
    /// six decimal places. Identical drawings therefore produce identical
    /// bytes. An empty drawing is refused.
    pub fn to_svg_string(&self) -> Result<String> {
        let (lo, hi) = self.bounds().ok_or(Error::NothingToRender)?;
        let extent = (hi.x - lo.x).max(hi.y - lo.y);
        // a single point (or one horizontal/vertical run) still gets a frame
        let extent = if extent > 0.0 { extent } else { 1.0 };
        let pad = self.style.padding.max(0.0) * extent;
        let width = hi.x - lo.x + 2.0 * pad;
        let height = hi.y - lo.y + 2.0 * pad;
        let scale = TARGET_SIZE / width.max(height);
        let to_px = |p: Point2| {
            Point2::new(
                (p.x - lo.x + pad) * scale,
                (hi.y + pad - p.y) * scale,
            )
        };

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.6}\" height=\"{:.6}\" \
             viewBox=\"0 0 {:.6} {:.6}\">\n",
            width * scale,
            height * scale,
            width * scale,
            height * scale,
        ));
        let colors = if self.style.colors.is_empty() {
            vec!["#000000".to_string()]
        } else {
            self.style.colors.clone()
        };
        for (i, layer) in self.layers.iter().enumerate() {
            if layer.points.is_empty() {
                continue;
            }
            let color = &colors[i % colors.len()];
            match layer.kind {
                LayerKind::Polyline | LayerKind::Polygon => {
                    let mut d = String::new();
                    for (j, &p) in layer.points.iter().enumerate() {
                        let q = to_px(p);
                        let cmd = if j == 0 { 'M' } else { 'L' };
                        d.push_str(&format!("{}{:.6} {:.6}", cmd, q.x, q.y));
                    }
                    if layer.kind == LayerKind::Polygon {
                        d.push('Z');
                    }
                    svg.push_str(&format!(
                        "<path fill=\"none\" stroke=\"{}\" stroke-width=\"{:.6}\" \
                         stroke-linejoin=\"round\" stroke-linecap=\"round\" d=\"{}\"/>\n",
                        color, self.style.stroke_width, d
                    ));
                }
                LayerKind::Dots { radius } => {
                    for &p in &layer.points {
                        let q = to_px(p);
                        svg.push_str(&format!(
                            "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"{}\"/>\n",
                            q.x, q.y, radius, color
                        ));
                    }
                }
            }
        }
        svg.push_str("</svg>\n");
        Ok(svg)
    }
}

/// Renders a drawing to an SVG file.
pub fn render_svg(drawing: &Drawing, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, drawing.to_svg_string()?)?;
    Ok(())
}
