//! Plane points and contracting similarity maps.
//!
//! Everything else in the crate is built from two values: [`Point2`], a plain
//! plane point, and [`Similarity2`], a plane similarity stored as a full 2x2
//! matrix plus a translation. Storing the matrix (rather than angle/scale
//! flags) keeps composition closed and exact; the angle/scale/reflection view
//! is derived on demand by [`Similarity2::decompose`].

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance on `A^T A - r^2 I` when accepting a hand-entered matrix as a
/// similarity. Constructions from point pairs are exact by formula and do not
/// depend on this.
pub const SIMILARITY_TOL: f64 = 1e-9;

/// A point (or displacement vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    /// The origin (0, 0).
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Both coordinates are finite (no NaN or infinity).
    #[inline]
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Dot product, treating both points as vectors.
    #[inline]
    pub fn dot(&self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// 2D cross product (z-component of the 3D cross of the embedded vectors).
    #[inline]
    pub fn cross(&self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Squared Euclidean norm.
    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Euclidean norm.
    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Squared distance to another point.
    #[inline]
    pub fn dist_sq(&self, other: Point2) -> f64 {
        (*self - other).norm_sq()
    }

    /// Euclidean distance to another point.
    #[inline]
    pub fn dist(&self, other: Point2) -> f64 {
        self.dist_sq(other).sqrt()
    }

    /// Linear interpolation `self + t * (other - self)`.
    #[inline]
    pub fn lerp(&self, other: Point2, t: f64) -> Point2 {
        Point2 {
            x: self.x + t * (other.x - self.x),
            y: self.y + t * (other.y - self.y),
        }
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

// Points serialize as `[x, y]` pairs so vertex lists read naturally in
// config files.
impl Serialize for Point2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (self.x, self.y).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (x, y) = <(f64, f64)>::deserialize(deserializer)?;
        Ok(Point2 { x, y })
    }
}

/// A plane similarity `p -> L p + t` where `L` satisfies `L^T L = r^2 I`.
///
/// Direct similarities (rotation + scale) have `det L > 0`; mirror
/// similarities (reflection + rotation + scale) have `det L < 0`. Maps used
/// in iterated function systems additionally have ratio `r < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity2 {
    /// Row-major linear part.
    pub linear: [[f64; 2]; 2],
    /// Translation applied after the linear part.
    pub translation: Point2,
}

#[inline]
fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

#[inline]
fn cdiv(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

impl Similarity2 {
    /// The identity map.
    pub fn identity() -> Self {
        Similarity2 {
            linear: [[1.0, 0.0], [0.0, 1.0]],
            translation: Point2::ORIGIN,
        }
    }

    /// The pure scaling `p -> r p + t` (no rotation or reflection).
    pub fn scaling(r: f64, translation: Point2) -> Self {
        Similarity2 {
            linear: [[r, 0.0], [0.0, r]],
            translation,
        }
    }

    /// Builds from an explicit matrix and translation, verifying the
    /// similarity condition `L^T L = r^2 I` within [`SIMILARITY_TOL`].
    pub fn from_parts(linear: [[f64; 2]; 2], translation: Point2) -> Result<Self> {
        let map = Similarity2 {
            linear,
            translation,
        };
        let defect = map.similarity_defect();
        let scale = map.linear.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        if defect > SIMILARITY_TOL * scale.max(1.0) {
            return Err(Error::NotSimilarity { defect });
        }
        Ok(map)
    }

    /// Builds from ratio, rotation angle (radians), reflection flag, and
    /// translation. A mirror map reflects across the x-axis before rotating.
    pub fn from_ratio_angle(ratio: f64, angle: f64, reflect: bool, translation: Point2) -> Self {
        let (s, c) = angle.sin_cos();
        let (a, b) = (ratio * c, ratio * s);
        let linear = if reflect {
            [[a, b], [b, -a]]
        } else {
            [[a, -b], [b, a]]
        };
        Similarity2 {
            linear,
            translation,
        }
    }

    /// The unique direct (`reflect = false`) or mirror (`reflect = true`)
    /// similarity sending `p -> p2` and `q -> q2`.
    ///
    /// Solved in complex form: a direct similarity is `z -> az + b`, a mirror
    /// one `z -> a conj(z) + b`; the two point constraints determine `a`, `b`
    /// exactly. Fails with [`Error::CoincidentSourcePoints`] when `p == q`.
    /// The result is allowed to be an expansion (ratio >= 1); callers that
    /// require contractions must check [`Similarity2::ratio`].
    pub fn from_point_pair(
        p: Point2,
        q: Point2,
        p2: Point2,
        q2: Point2,
        reflect: bool,
    ) -> Result<Self> {
        if p == q {
            return Err(Error::CoincidentSourcePoints);
        }
        let dz = (q.x - p.x, q.y - p.y);
        let dw = (q2.x - p2.x, q2.y - p2.y);
        let (alpha, linear, beta_base) = if reflect {
            let alpha = cdiv(dw, (dz.0, -dz.1));
            let linear = [[alpha.0, alpha.1], [alpha.1, -alpha.0]];
            let base = cmul(alpha, (p.x, -p.y));
            (alpha, linear, base)
        } else {
            let alpha = cdiv(dw, dz);
            let linear = [[alpha.0, -alpha.1], [alpha.1, alpha.0]];
            let base = cmul(alpha, (p.x, p.y));
            (alpha, linear, base)
        };
        let _ = alpha;
        Ok(Similarity2 {
            linear,
            translation: Point2::new(p2.x - beta_base.0, p2.y - beta_base.1),
        })
    }

    /// Applies the map to a point.
    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        Point2 {
            x: self.linear[0][0] * p.x + self.linear[0][1] * p.y + self.translation.x,
            y: self.linear[1][0] * p.x + self.linear[1][1] * p.y + self.translation.y,
        }
    }

    /// The composition `self . g` (apply `g` first, then `self`).
    pub fn compose(&self, g: &Similarity2) -> Similarity2 {
        let a = &self.linear;
        let b = &g.linear;
        let linear = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        Similarity2 {
            linear,
            translation: self.apply(g.translation),
        }
    }

    /// Determinant of the linear part (negative for mirror similarities).
    #[inline]
    pub fn det(&self) -> f64 {
        self.linear[0][0] * self.linear[1][1] - self.linear[0][1] * self.linear[1][0]
    }

    /// True when the map reverses orientation (mirror similarity).
    #[inline]
    pub fn orientation_reversing(&self) -> bool {
        self.det() < 0.0
    }

    /// Contraction ratio `r` with `L^T L = r^2 I`.
    ///
    /// Relies on the type's similarity invariant; use
    /// [`Similarity2::checked_ratio`] for values of unverified origin.
    #[inline]
    pub fn ratio(&self) -> f64 {
        let l = &self.linear;
        let g00 = l[0][0] * l[0][0] + l[1][0] * l[1][0];
        let g11 = l[0][1] * l[0][1] + l[1][1] * l[1][1];
        (0.5 * (g00 + g11)).sqrt()
    }

    /// Maximum absolute deviation of `L^T L` from `r^2 I`.
    pub fn similarity_defect(&self) -> f64 {
        let l = &self.linear;
        let g00 = l[0][0] * l[0][0] + l[1][0] * l[1][0];
        let g01 = l[0][0] * l[0][1] + l[1][0] * l[1][1];
        let g11 = l[0][1] * l[0][1] + l[1][1] * l[1][1];
        let r2 = 0.5 * (g00 + g11);
        (g00 - r2).abs().max((g11 - r2).abs()).max(g01.abs())
    }

    /// Contraction ratio after re-verifying the similarity condition.
    pub fn checked_ratio(&self) -> Result<f64> {
        let defect = self.similarity_defect();
        let scale = self.ratio().powi(2).max(1.0);
        if defect > SIMILARITY_TOL * scale {
            return Err(Error::NotSimilarity { defect });
        }
        Ok(self.ratio())
    }

    /// The unique fixed point of a contraction, via the direct linear solve
    /// `(I - L) x = t`. The 2x2 system is well-conditioned for every `r < 1`.
    pub fn fixed_point(&self) -> Result<Point2> {
        let r = self.ratio();
        if r >= 1.0 {
            return Err(Error::NotContraction { ratio: r });
        }
        let l = &self.linear;
        let det = (1.0 - l[0][0]) * (1.0 - l[1][1]) - l[0][1] * l[1][0];
        let t = self.translation;
        Ok(Point2 {
            x: (t.x * (1.0 - l[1][1]) + t.y * l[0][1]) / det,
            y: (t.y * (1.0 - l[0][0]) + t.x * l[1][0]) / det,
        })
    }

    /// Derived `(ratio, angle, reflect)` view of the linear part. The angle
    /// is the rotation applied to the x-axis image, in radians.
    pub fn decompose(&self) -> (f64, f64, bool) {
        let angle = self.linear[1][0].atan2(self.linear[0][0]);
        (self.ratio(), angle, self.orientation_reversing())
    }

    /// Applies the inverse map. Only valid for nondegenerate similarities.
    pub fn apply_inverse(&self, p: Point2) -> Point2 {
        let l = &self.linear;
        let det = self.det();
        let v = p - self.translation;
        Point2 {
            x: (l[1][1] * v.x - l[0][1] * v.y) / det,
            y: (l[0][0] * v.y - l[1][0] * v.x) / det,
        }
    }

    /// The inverse similarity. Only valid for nondegenerate similarities;
    /// the inverse of a contraction is an expansion.
    pub fn inverse(&self) -> Similarity2 {
        let l = &self.linear;
        let det = self.det();
        let linear = [[l[1][1] / det, -l[0][1] / det], [-l[1][0] / det, l[0][0] / det]];
        let t = self.translation;
        Similarity2 {
            linear,
            translation: Point2::new(
                -(linear[0][0] * t.x + linear[0][1] * t.y),
                -(linear[1][0] * t.x + linear[1][1] * t.y),
            ),
        }
    }
}
