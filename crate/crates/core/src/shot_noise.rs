//! Aggregate interference (shot noise) generated by a Poisson field.
//!
//! Covers Monte Carlo realizations of σ²_I = Σ P_t·l(r_k)·Ψ_k, the
//! Campbell-theorem mean and variance under a guard-zone law, the
//! second-order Taylor estimate of E[1/σ²_I], and the power-law tail bound
//! on the interference CCDF together with a sampler for the Pareto variable
//! that stochastically dominates the interference.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{domain, param, Error, Result};
use crate::geometry::{
    poisson_count, power_law_sq, sample_fading_power, FadingModel, LinkFading, Marks, PathLossLaw, Point, PointField,
    Region, Shape,
};
use crate::mc::run_trials;

/// Spatial dimension of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    One,
    Two,
    Three,
}

impl Dimension {
    pub fn value(self) -> f64 {
        match self {
            Dimension::One => 1.0,
            Dimension::Two => 2.0,
            Dimension::Three => 3.0,
        }
    }

    /// Volume of the unit ball: 2, π, 4π/3.
    pub fn unit_ball(self) -> f64 {
        match self {
            Dimension::One => 2.0,
            Dimension::Two => PI,
            Dimension::Three => 4.0 * PI / 3.0,
        }
    }
}

/// First and second fading moments of unit-mean Rayleigh fading.
pub const RAYLEIGH_MEAN: f64 = 1.0;
pub const RAYLEIGH_SECOND_MOMENT: f64 = 2.0;

/// Parameters of the guard-zone shot-noise moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotNoiseParams {
    pub intensity: f64,
    pub alpha: f64,
    pub dim: Dimension,
    /// Guard radius ρ in meters.
    pub guard: f64,
    pub tx_power: f64,
}

impl ShotNoiseParams {
    pub fn planar(intensity: f64, alpha: f64, guard: f64, tx_power: f64) -> Self {
        ShotNoiseParams {
            intensity,
            alpha,
            dim: Dimension::Two,
            guard,
            tx_power,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.intensity >= 0.0 && self.intensity.is_finite()) {
            return Err(param("lambda", format!("must be nonnegative, got {}", self.intensity)));
        }
        if !(self.guard > 0.0) {
            return Err(param(
                "rho",
                format!("guard radius must be positive, got {}", self.guard),
            ));
        }
        if !(self.tx_power >= 0.0) {
            return Err(param("tx_power", format!("must be nonnegative, got {}", self.tx_power)));
        }
        Ok(())
    }

    fn density_factor(&self) -> f64 {
        self.intensity * self.dim.value() * self.dim.unit_ball()
    }
}

/// E[σ²_I] = λ·d·c_d/(α−d)·E[Ψ]·P_t·ρ^(d−α).
pub fn campbell_mean(p: &ShotNoiseParams) -> Result<f64> {
    p.check()?;
    let d = p.dim.value();
    if p.alpha <= d {
        return Err(Error::Divergence {
            quantity: "interference mean",
            reason: format!("needs alpha > {d}, got {}", p.alpha),
        });
    }
    Ok(p.density_factor() / (p.alpha - d) * RAYLEIGH_MEAN * p.tx_power * p.guard.powf(d - p.alpha))
}

/// Var[σ²_I] = λ·d·c_d/(2α−d)·E[Ψ²]·P_t²·ρ^(d−2α).
pub fn campbell_var(p: &ShotNoiseParams) -> Result<f64> {
    p.check()?;
    let d = p.dim.value();
    if 2.0 * p.alpha <= d {
        return Err(Error::Divergence {
            quantity: "interference variance",
            reason: format!("needs alpha > {}, got {}", d / 2.0, p.alpha),
        });
    }
    Ok(p.density_factor() / (2.0 * p.alpha - d)
        * RAYLEIGH_SECOND_MOMENT
        * p.tx_power
        * p.tx_power
        * p.guard.powf(d - 2.0 * p.alpha))
}

/// f(λ) = (1/λ)·(α−d)/(d·c_d)·[1 + 2(α−d)²/((2α−d)·d·c_d)·(1/λ)].
///
/// This is P_t·E[1/σ²_I] under the second-order Taylor expansion with a unit
/// guard radius.
pub fn taylor_factor(intensity: f64, alpha: f64, dim: Dimension) -> Result<f64> {
    if !(intensity > 0.0) {
        return Err(Error::Divergence {
            quantity: "E[1/interference]",
            reason: format!("needs lambda > 0, got {intensity}"),
        });
    }
    let d = dim.value();
    if alpha <= d {
        return Err(Error::Divergence {
            quantity: "E[1/interference]",
            reason: format!("needs alpha > {d}, got {alpha}"),
        });
    }
    let dc = d * dim.unit_ball();
    let bracket = 1.0 + 2.0 * (alpha - d).powi(2) / ((2.0 * alpha - d) * dc) / intensity;
    Ok((alpha - d) / dc / intensity * bracket)
}

/// Taylor estimate of E[1/σ²_I] = f(λ)/P_t; requires the unit guard radius.
pub fn reciprocal_mean_taylor(p: &ShotNoiseParams) -> Result<f64> {
    if p.guard != 1.0 {
        return Err(param(
            "rho",
            format!("the closed form assumes rho = 1, got {}", p.guard),
        ));
    }
    if !(p.tx_power > 0.0) {
        return Err(param("tx_power", format!("must be positive, got {}", p.tx_power)));
    }
    Ok(taylor_factor(p.intensity, p.alpha, p.dim)? / p.tx_power)
}

/// Constants of the leading-order CCDF bound on the interference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBoundParams {
    /// δ = 2/α.
    pub delta: f64,
    /// κ = π²δ/sin(πδ)·d_ab², in m².
    pub kappa: f64,
    /// η = 2κ/(2−δ).
    pub eta: f64,
    /// β = P_t·Ψ_ab·d_ab^(−α), in watts.
    pub beta: f64,
}

impl TailBoundParams {
    /// Lower end of the support of the dominating Pareto law, (ηλ)^(1/δ)·β.
    pub fn support_floor(&self, intensity: f64) -> f64 {
        (self.eta * intensity).powf(1.0 / self.delta) * self.beta
    }
}

pub fn tail_bound_params(intensity: f64, alpha: f64, tx_power: f64, d_ab: f64, psi_ab: f64) -> Result<TailBoundParams> {
    if !(alpha > 2.0) {
        return Err(param("alpha", format!("the tail bound needs alpha > 2, got {alpha}")));
    }
    if !(intensity > 0.0) {
        return Err(param("lambda", format!("must be positive, got {intensity}")));
    }
    if !(d_ab > 0.0 && tx_power > 0.0 && psi_ab > 0.0) {
        return Err(param("beta", "P_t, Psi_ab and d_ab must be positive"));
    }
    let delta = 2.0 / alpha;
    let kappa = PI * PI * delta / (PI * delta).sin() * d_ab * d_ab;
    Ok(TailBoundParams {
        delta,
        kappa,
        eta: 2.0 * kappa / (2.0 - delta),
        beta: tx_power * psi_ab * d_ab.powf(-alpha),
    })
}

/// Leading-order upper bound min{1, ηλβ^δ·x^(−δ)} on P{σ²_I > x}.
///
/// The O(x^(−2δ)) remainder of the bound is dropped.
pub fn interference_ccdf_upper(x: f64, t: &TailBoundParams, intensity: f64) -> Result<f64> {
    let floor = t.support_floor(intensity);
    if !(x >= floor) {
        return Err(domain(
            "interference_ccdf_upper",
            x,
            format!("below the support floor {floor}"),
        ));
    }
    Ok((t.eta * intensity * t.beta.powf(t.delta) * x.powf(-t.delta)).min(1.0))
}

/// Inverse CDF of the dominating Pareto law at u ∈ (0, 1].
pub fn dominating_tail_quantile(t: &TailBoundParams, intensity: f64, u: f64) -> f64 {
    t.support_floor(intensity) * u.powf(-1.0 / t.delta)
}

/// Draws σ̄²_I from the Pareto law whose CCDF is the tail bound.
pub fn sample_dominating_tail<R: Rng + ?Sized>(t: &TailBoundParams, intensity: f64, rng: &mut R) -> f64 {
    let u = 1.0 - rng.random::<f64>();
    dominating_tail_quantile(t, intensity, u)
}

/// Σ_k P_t,k·l(|x_k − receiver|)·Ψ_k over the field.
///
/// Fields sampled with [`LinkFading::PerLink`] get fresh fading draws for
/// this receiver; shared fields reuse their stored marks.
pub fn realize_interference_power<R: Rng + ?Sized>(
    field: &PointField,
    law: &PathLossLaw,
    receiver: &Point,
    rng: &mut R,
) -> Result<f64> {
    let mut total = 0.0;
    for (i, p) in field.points().iter().enumerate() {
        let g = law.gain_from_sq(p.distance_sq(receiver))?;
        let psi = match field.link_fading() {
            LinkFading::Shared => field.fading()[i],
            LinkFading::PerLink => field.fading_model().sample(rng),
        };
        total += field.tx_power()[i] * g * psi;
    }
    Ok(total)
}

/// Interference at the centre of a disk arena, sampling distances only.
///
/// For a receiver at the centre, a uniform point's distance has the law
/// R·√u, so angles need not be drawn. Equivalent in distribution to sampling
/// the full field and calling [`realize_interference_power`].
pub fn interference_at_disk_centre<R: Rng + ?Sized>(
    radius: f64,
    intensity: f64,
    law: &PathLossLaw,
    marks: Marks,
    rng: &mut R,
) -> Result<f64> {
    let count = poisson_count(intensity * PI * radius * radius, rng);
    let r2_max = radius * radius;
    sum_field(count, law, marks, rng, |rng| r2_max * rng.random::<f64>())
}

/// One field's interference at `receiver`, drawing points on the fly.
///
/// Same law as `sample_ppp` followed by [`realize_interference_power`] with
/// per-link fading, but without materializing the field. A receiver at the
/// centre of a disk arena takes the distance-only path.
pub fn interference_streamed<R: Rng + ?Sized>(
    arena: &Region,
    intensity: f64,
    law: &PathLossLaw,
    marks: Marks,
    receiver: &Point,
    rng: &mut R,
) -> Result<f64> {
    if !(intensity >= 0.0 && intensity.is_finite()) {
        return Err(param(
            "lambda",
            format!("intensity must be nonnegative, got {intensity}"),
        ));
    }
    if let Shape::Disk { radius } = arena.shape() {
        if arena.center() == *receiver {
            return interference_at_disk_centre(radius, intensity, law, marks, rng);
        }
    }
    let count = poisson_count(intensity * arena.area(), rng);
    sum_field(count, law, marks, rng, |rng| {
        arena.sample_uniform(rng).distance_sq(receiver)
    })
}

// The law and fading model are fixed for the whole field; dispatch once so
// the per-point loop stays branch-light.
fn sum_field<R: Rng + ?Sized, D: FnMut(&mut R) -> f64>(
    count: usize,
    law: &PathLossLaw,
    marks: Marks,
    rng: &mut R,
    draw_r2: D,
) -> Result<f64> {
    let total = match *law {
        PathLossLaw::Truncated { alpha, guard } => {
            let g2 = guard * guard;
            sum_points(count, marks.fading, rng, draw_r2, |r2| {
                if r2 < g2 || r2 == 0.0 {
                    0.0
                } else {
                    power_law_sq(r2, alpha)
                }
            })
        }
        PathLossLaw::Bounded { alpha } => sum_points(count, marks.fading, rng, draw_r2, |r2| {
            if r2 <= 1.0 {
                1.0
            } else {
                power_law_sq(r2, alpha)
            }
        }),
        PathLossLaw::Unbounded { alpha } => {
            let s = sum_points(count, marks.fading, rng, draw_r2, |r2| {
                if r2 == 0.0 {
                    f64::INFINITY
                } else {
                    power_law_sq(r2, alpha)
                }
            });
            if s.is_infinite() {
                return Err(Error::Singularity { distance: 0.0 });
            }
            s
        }
    };
    Ok(marks.tx_power * total)
}

#[inline(always)]
fn sum_points<R, D, G>(count: usize, fading: FadingModel, rng: &mut R, mut draw_r2: D, gain: G) -> f64
where
    R: Rng + ?Sized,
    D: FnMut(&mut R) -> f64,
    G: Fn(f64) -> f64,
{
    let mut total = 0.0;
    match fading {
        FadingModel::Rayleigh => {
            for _ in 0..count {
                let g = gain(draw_r2(rng));
                if g > 0.0 {
                    total += g * sample_fading_power(rng);
                }
            }
        }
        FadingModel::Constant => {
            for _ in 0..count {
                total += gain(draw_r2(rng));
            }
        }
    }
    total
}

/// Monte Carlo draws of the interference power seen by `receiver`, one
/// independent field per trial.
#[allow(clippy::too_many_arguments)]
pub fn interference_samples(
    arena: &Region,
    intensity: f64,
    law: &PathLossLaw,
    marks: Marks,
    receiver: Point,
    trials: usize,
    seed: u64,
    tag: u32,
) -> Result<Vec<f64>> {
    run_trials(seed, tag, trials, |_, rng| {
        interference_streamed(arena, intensity, law, marks, &receiver, rng)
    })
    .into_iter()
    .collect()
}
