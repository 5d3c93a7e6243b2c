//! The linear parametrization of a zipper's attractor.
//!
//! A zipper's attractor carries a canonical continuous surjection
//! `gamma: [0,1] -> K` determined by the conjugacy `S_i . gamma = gamma . T_i`
//! against the standard interval zipper over a chosen partition, together
//! with `gamma(0) = z_0` and `gamma(1) = z_m`. Expanding a parameter in
//! interval-map digits turns evaluation into a finite composition of plane
//! maps applied to a seed curve; the error after `k` digits shrinks like the
//! product of the contraction ratios along the digit word.
//!
//! The module evaluates `gamma` to prescribed depth, extracts digit
//! expansions, traces refinement polylines (the space-filling-curve picture
//! of the attractor), measures conjugacy residuals, and estimates the
//! parametrization's Hoelder exponent from random parameter pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attractor::IFS;
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::zipper::{standard_interval_zipper, IntervalMap, Partition, Zipper};

/// Hard ceiling on evaluation depth; beyond this the composed contractions
/// are below double-precision resolution for any ratio of practical size.
pub const MAX_DEPTH: usize = 64;

/// A parameter's address: the first `digits.len()` interval-map digits
/// (1-based, first digit outermost) and the exact preimage of the parameter
/// under that digit word.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitExpansion {
    pub digits: Vec<u8>,
    pub residual_t: f64,
}

/// A refinement polyline of the parametrized curve: vertices in traversal
/// order with their parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePolyline {
    vertices: Vec<Point2>,
    params: Vec<f64>,
    level: usize,
}

impl CurvePolyline {
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Writes `t,x,y` CSV with full-precision (17 significant digit)
    /// coordinates.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,x,y")?;
        for (t, p) in self.params.iter().zip(&self.vertices) {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", t, p.x, p.y)?;
        }
        Ok(())
    }
}

/// Least-squares fit of `log |gamma(t+x) - gamma(t)|` against `log x` over
/// random pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderEstimate {
    /// Fitted exponent (the log-log slope).
    pub exponent: f64,
    /// Fitted prefactor (`exp` of the intercept).
    pub prefactor: f64,
    /// Pairs that entered the fit (pairs with exactly coincident images are
    /// dropped).
    pub pairs_used: usize,
    /// Smallest parameter separation sampled.
    pub min_separation: f64,
    /// Largest parameter separation sampled.
    pub max_separation: f64,
}

/// Smallest depth at which composed contraction ratios certify a spatial
/// resolution of `tol`, capped at [`MAX_DEPTH`].
pub fn default_depth(tol: f64, r_max: f64) -> usize {
    if !(0.0..1.0).contains(&r_max) || tol <= 0.0 || tol >= 1.0 {
        return MAX_DEPTH.min(40);
    }
    let d = (tol.ln() / r_max.ln()).ceil();
    (d.max(1.0) as usize).min(MAX_DEPTH)
}

/// A zipper paired with a parameter partition: everything needed to evaluate
/// the curve `gamma`.
#[derive(Debug, Clone)]
pub struct Parametrization {
    zipper: Zipper,
    partition: Partition,
    interval_maps: Vec<IntervalMap>,
    ifs: IFS,
}

impl Parametrization {
    /// Pairs a zipper with a partition of matching length.
    pub fn new(zipper: Zipper, partition: Partition) -> Result<Self> {
        let interval_maps = standard_interval_zipper(&partition, zipper.signature())?;
        let ifs = IFS::from_zipper(&zipper)?;
        Ok(Parametrization {
            zipper,
            partition,
            interval_maps,
            ifs,
        })
    }

    /// Pairs a zipper with the uniform partition.
    pub fn uniform(zipper: Zipper) -> Result<Self> {
        let partition = Partition::uniform(zipper.m());
        Parametrization::new(zipper, partition)
    }

    pub fn zipper(&self) -> &Zipper {
        &self.zipper
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn ifs(&self) -> &IFS {
        &self.ifs
    }

    /// First `depth` digits of `t`'s interval-map expansion.
    ///
    /// Parameters on a cut take the right-hand interval (the expansion is
    /// left-closed), and `t = 1` belongs to the last interval, so endpoint
    /// parameters stay exact: their residuals are exactly `0` or `1`.
    pub fn digit_expansion(&self, t: f64, depth: usize) -> Result<DigitExpansion> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterOutOfRange { t });
        }
        let mut digits = Vec::with_capacity(depth);
        let mut cur = t;
        for _ in 0..depth {
            let i = self.partition.locate(cur)?;
            digits.push((i + 1) as u8);
            cur = self.interval_maps[i].eval_inverse(cur);
            // Guard against roundoff pushing the preimage a hair outside
            // [0,1]; the true preimage lies inside by construction.
            cur = cur.clamp(0.0, 1.0);
        }
        Ok(DigitExpansion {
            digits,
            residual_t: cur,
        })
    }

    /// Evaluates the curve at `t` to the given digit depth.
    ///
    /// The residual parameter is seeded with the straight segment from the
    /// zipper's initial to terminal point, so the error is at most
    /// `r_max^depth` times the attractor's diameter, and parameters at
    /// partition cuts evaluate to the corresponding zipper vertices exactly.
    pub fn gamma(&self, t: f64, depth: usize) -> Result<Point2> {
        let expansion = self.digit_expansion(t, depth)?;
        let seed = self
            .zipper
            .initial()
            .lerp(self.zipper.terminal(), expansion.residual_t);
        Ok(self.ifs.word_map(&expansion.digits).apply(seed))
    }

    /// Largest observed conjugacy residual
    /// `|S_i(gamma(t)) - gamma(T_i(t))|` over `samples` random parameters
    /// and every map index `i`.
    pub fn conjugacy_residual(&self, samples: usize, depth: usize, rng_seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let t: f64 = rng.gen_range(0.0..=1.0);
            let gt = self.gamma(t, depth)?;
            for (i, plane_map) in self.zipper.maps().iter().enumerate() {
                let lhs = plane_map.apply(gt);
                let rhs = self.gamma(self.interval_maps[i].eval(t), depth)?;
                worst = worst.max(lhs.dist(rhs));
            }
        }
        Ok(worst)
    }

    /// The level-`k` refinement polyline: the curve through the images of
    /// every partition breakpoint refined `k + 1` times, i.e.
    /// `m^(k+1) + 1` vertices in traversal order.
    ///
    /// Level 0 is the polyline through the zipper's vertex chain.
    pub fn curve_polyline(&self, level: usize, budget: u64) -> Result<CurvePolyline> {
        let m = self.zipper.m();
        let vertex_count = (m as f64).powi(level as i32 + 1) + 1.0;
        if vertex_count > budget as f64 {
            return Err(Error::BudgetExceeded {
                needed: if vertex_count > u64::MAX as f64 {
                    u64::MAX
                } else {
                    vertex_count as u64
                },
                budget,
            });
        }
        let mut chain: Vec<(f64, Point2)> = vec![
            (0.0, self.zipper.initial()),
            (1.0, self.zipper.terminal()),
        ];
        for _ in 0..=level {
            let mut next: Vec<(f64, Point2)> = Vec::with_capacity(m * (chain.len() - 1) + 1);
            for i in 0..m {
                let t_map = &self.interval_maps[i];
                let s_map = &self.zipper.maps()[i];
                let mut block: Vec<(f64, Point2)> = chain
                    .iter()
                    .map(|&(t, p)| (t_map.eval(t), s_map.apply(p)))
                    .collect();
                if self.zipper.signature().is_reversing(i) {
                    block.reverse();
                }
                let skip = usize::from(!next.is_empty());
                next.extend(block.into_iter().skip(skip));
            }
            chain = next;
        }
        let (params, vertices) = chain.into_iter().unzip();
        Ok(CurvePolyline {
            vertices,
            params,
            level,
        })
    }

    /// Estimates the curve's Hoelder exponent by regressing
    /// `log |gamma(t+x) - gamma(t)|` on `log x` over `pairs` random pairs.
    ///
    /// Separations are log-uniform between `1e-3` and a floor that keeps the
    /// image displacement well above the evaluation error at this depth.
    pub fn estimate_holder(
        &self,
        pairs: usize,
        depth: usize,
        rng_seed: u64,
    ) -> Result<HolderEstimate> {
        let r_max = self.zipper.max_ratio();
        let eval_error = r_max.powi(depth as i32) * self.ifs.diameter_bound();
        let x_min = (2.0 * eval_error).max(1e-9);
        let x_max: f64 = 1e-3;
        if x_min >= x_max {
            return Err(Error::Config(format!(
                "evaluation depth {depth} too shallow for separation sampling \
                 (resolution floor {x_min:.3e} reaches the largest separation {x_max:.3e})"
            )));
        }
        let log_ratio = (x_max / x_min).ln();
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut sum_x = 0.0f64;
        let mut sum_y = 0.0f64;
        let mut sum_xx = 0.0f64;
        let mut sum_xy = 0.0f64;
        let mut used = 0usize;
        for _ in 0..pairs {
            let u: f64 = rng.gen_range(0.0..1.0);
            let x = x_min * (u * log_ratio).exp();
            let t: f64 = rng.gen_range(0.0..(1.0 - x));
            let d = self.gamma(t + x, depth)?.dist(self.gamma(t, depth)?);
            if d <= 0.0 {
                continue;
            }
            let lx = x.ln();
            let ly = d.ln();
            sum_x += lx;
            sum_y += ly;
            sum_xx += lx * lx;
            sum_xy += lx * ly;
            used += 1;
        }
        if used < 2 {
            return Err(Error::Config(
                "not enough distinct pairs to fit an exponent".into(),
            ));
        }
        let n = used as f64;
        let var = sum_xx - sum_x * sum_x / n;
        let cov = sum_xy - sum_x * sum_y / n;
        let exponent = cov / var;
        let prefactor = ((sum_y - exponent * sum_x) / n).exp();
        Ok(HolderEstimate {
            exponent,
            prefactor,
            pairs_used: used,
            min_separation: x_min,
            max_separation: x_max,
        })
    }
}
