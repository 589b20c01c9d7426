//! Spatial point processes, fading marks and path-loss laws.
//!
//! This is the randomness substrate for every simulation in the crate:
//! transmitter locations are homogeneous Poisson point processes on a
//! bounded arena, each point carries a fading power and a transmit power,
//! and received power falls off through one of three path-loss laws.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::error::{param, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance_sq(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.distance_sq(other).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Disk { radius: f64 },
    Square { side: f64 },
}

/// A bounded simulation arena.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    shape: Shape,
    center: Point,
}

impl Region {
    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(param("radius", format!("must be positive and finite, got {radius}")));
        }
        Ok(Region {
            shape: Shape::Disk { radius },
            center,
        })
    }

    pub fn square(center: Point, side: f64) -> Result<Self> {
        if !(side > 0.0 && side.is_finite()) {
            return Err(param("side", format!("must be positive and finite, got {side}")));
        }
        Ok(Region {
            shape: Shape::Square { side },
            center,
        })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn area(&self) -> f64 {
        match self.shape {
            Shape::Disk { radius } => PI * radius * radius,
            Shape::Square { side } => side * side,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self.shape {
            Shape::Disk { radius } => self.center.distance_sq(p) <= radius * radius,
            Shape::Square { side } => {
                let h = side / 2.0;
                (p.x - self.center.x).abs() <= h && (p.y - self.center.y).abs() <= h
            }
        }
    }

    /// Distance from `p` to the nearest point of the boundary, for `p` inside.
    pub fn inner_margin(&self, p: &Point) -> f64 {
        match self.shape {
            Shape::Disk { radius } => radius - self.center.distance(p),
            Shape::Square { side } => {
                let h = side / 2.0;
                (h - (p.x - self.center.x).abs()).min(h - (p.y - self.center.y).abs())
            }
        }
    }

    /// Draws one point uniformly from the region.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self.shape {
            Shape::Disk { radius } => {
                // inverse-CDF radius: P(r' < r) = r²/R²
                let r = radius * rng.random::<f64>().sqrt();
                let (s, c) = (2.0 * PI * rng.random::<f64>()).sin_cos();
                Point::new(self.center.x + r * c, self.center.y + r * s)
            }
            Shape::Square { side } => Point::new(
                self.center.x + side * (rng.random::<f64>() - 0.5),
                self.center.y + side * (rng.random::<f64>() - 0.5),
            ),
        }
    }
}

/// Distribution of the per-link fading power Ψ = |h|².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FadingModel {
    /// Unit-mean Rayleigh fading: Ψ ~ Exp(1).
    #[default]
    Rayleigh,
    /// Static unit channel, Ψ = 1.
    Constant,
}

impl FadingModel {
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            FadingModel::Rayleigh => sample_fading_power(rng),
            FadingModel::Constant => 1.0,
        }
    }
}

/// Whether a field's stored fading marks are reused by every receiver or
/// redrawn independently per link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkFading {
    #[default]
    PerLink,
    Shared,
}

/// How marks are attached to sampled points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marks {
    pub fading: FadingModel,
    pub link_fading: LinkFading,
    /// Transmit power of every point, in watts.
    pub tx_power: f64,
}

impl Default for Marks {
    fn default() -> Self {
        Marks {
            fading: FadingModel::Rayleigh,
            link_fading: LinkFading::PerLink,
            tx_power: 1.0,
        }
    }
}

/// One realization of a marked Poisson point process.
#[derive(Debug, Clone, PartialEq)]
pub struct PointField {
    region: Region,
    points: Vec<Point>,
    fading: Vec<f64>,
    tx_power: Vec<f64>,
    fading_model: FadingModel,
    link_fading: LinkFading,
}

impl PointField {
    /// An explicit field, mostly for tests and hand-built scenarios.
    pub fn from_parts(region: Region, points: Vec<Point>, fading: Vec<f64>, tx_power: Vec<f64>) -> Result<Self> {
        if points.len() != fading.len() || points.len() != tx_power.len() {
            return Err(param("marks", "one fading and one power mark per point"));
        }
        if let Some(p) = points.iter().find(|p| !region.contains(p)) {
            return Err(param("points", format!("{p:?} lies outside the region")));
        }
        if fading.iter().chain(&tx_power).any(|m| !(*m >= 0.0)) {
            return Err(param("marks", "marks must be nonnegative"));
        }
        Ok(PointField {
            region,
            points,
            fading,
            tx_power,
            fading_model: FadingModel::Rayleigh,
            link_fading: LinkFading::Shared,
        })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn fading(&self) -> &[f64] {
        &self.fading
    }

    pub fn tx_power(&self) -> &[f64] {
        &self.tx_power
    }

    pub fn fading_model(&self) -> FadingModel {
        self.fading_model
    }

    pub fn link_fading(&self) -> LinkFading {
        self.link_fading
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distance from `p` to the closest point of the field.
    pub fn nearest_distance(&self, p: &Point) -> Option<f64> {
        self.points
            .iter()
            .map(|q| q.distance_sq(p))
            .min_by(f64::total_cmp)
            .map(f64::sqrt)
    }
}

/// Samples a homogeneous PPP of the given intensity (points per m²) on `region`.
pub fn sample_ppp<R: Rng + ?Sized>(region: &Region, intensity: f64, marks: Marks, rng: &mut R) -> Result<PointField> {
    if !(intensity >= 0.0 && intensity.is_finite()) {
        return Err(param(
            "lambda",
            format!("intensity must be nonnegative, got {intensity}"),
        ));
    }
    if !(marks.tx_power >= 0.0) {
        return Err(param(
            "tx_power",
            format!("must be nonnegative, got {}", marks.tx_power),
        ));
    }
    let count = poisson_count(intensity * region.area(), rng);
    let mut points = Vec::with_capacity(count);
    let mut fading = Vec::with_capacity(count);
    for _ in 0..count {
        points.push(region.sample_uniform(rng));
        fading.push(marks.fading.sample(rng));
    }
    Ok(PointField {
        region: *region,
        points,
        fading,
        tx_power: vec![marks.tx_power; count],
        fading_model: marks.fading,
        link_fading: marks.link_fading,
    })
}

/// Draws a Poisson(mean) count.
pub(crate) fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    // `Poisson::new` only fails for non-positive or non-finite means.
    Poisson::new(mean).expect("finite positive mean").sample(rng) as usize
}

/// Path-loss law l(r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathLossLaw {
    /// r^-α, singular at the origin.
    Unbounded { alpha: f64 },
    /// r^-α outside a guard zone of radius ρ, zero inside.
    Truncated { alpha: f64, guard: f64 },
    /// min(1, r^-α).
    Bounded { alpha: f64 },
}

impl PathLossLaw {
    pub fn unbounded(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(PathLossLaw::Unbounded { alpha })
    }

    pub fn truncated(alpha: f64, guard: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(guard >= 0.0 && guard.is_finite()) {
            return Err(param("rho", format!("guard radius must be nonnegative, got {guard}")));
        }
        Ok(PathLossLaw::Truncated { alpha, guard })
    }

    pub fn bounded(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(PathLossLaw::Bounded { alpha })
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            PathLossLaw::Unbounded { alpha }
            | PathLossLaw::Truncated { alpha, .. }
            | PathLossLaw::Bounded { alpha } => alpha,
        }
    }

    /// Gain at distance `r`.
    pub fn gain(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(param("r", format!("distance must be nonnegative, got {r}")));
        }
        self.gain_from_sq(r * r)
    }

    /// Gain at squared distance `r2`; avoids a square root in hot loops.
    #[inline]
    pub fn gain_from_sq(&self, r2: f64) -> Result<f64> {
        match *self {
            PathLossLaw::Unbounded { alpha } => {
                if r2 == 0.0 {
                    Err(Error::Singularity { distance: 0.0 })
                } else {
                    Ok(power_law_sq(r2, alpha))
                }
            }
            PathLossLaw::Truncated { alpha, guard } => {
                if r2 < guard * guard || r2 == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(power_law_sq(r2, alpha))
                }
            }
            PathLossLaw::Bounded { alpha } => {
                if r2 <= 1.0 {
                    Ok(1.0)
                } else {
                    Ok(power_law_sq(r2, alpha))
                }
            }
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 2.0 && alpha.is_finite()) {
        return Err(param("alpha", format!("path-loss exponent must be >= 2, got {alpha}")));
    }
    Ok(())
}

/// (r²)^(-α/2) with the common α = 4 case done without `powf`.
#[inline]
pub(crate) fn power_law_sq(r2: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (r2 * r2)
    } else if alpha == 2.0 {
        1.0 / r2
    } else {
        r2.powf(-0.5 * alpha)
    }
}

/// Unit-mean Rayleigh fading power, Ψ ~ Exp(1).
#[inline]
pub fn sample_fading_power<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

/// P{nearest interferer closer than d} for a planar PPP of intensity λ.
pub fn nearest_interferer_cdf(intensity: f64, d: f64) -> f64 {
    assert!(intensity >= 0.0 && d >= 0.0, "nearest_interferer_cdf needs λ, d >= 0");
    -(-PI * intensity * d * d).exp_m1()
}
