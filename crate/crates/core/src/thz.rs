//! Terahertz-band link budget and interference.
//!
//! Directional antennas of beamwidth φ, spreading plus molecular absorption
//! on every path, Johnson–Nyquist noise, and Poisson interferers that are
//! thinned by human-body blocking and by antenna coverage. Interferers lie in
//! the annulus [r_B, R] around the receiver; anything beyond the horizon R is
//! folded into the background.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{domain, param, Error, Result};
use crate::geometry::{poisson_count, Point, PointField, Region};
use crate::mc::{self, run_trials};
use crate::special::exp_integral_e1;

pub const PLANCK: f64 = 6.626_070_15e-34;
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Free-space propagation speed used for wavenumbers, rounded to 3·10⁸ m/s
/// as is customary in THz link budgets.
pub const PROPAGATION_SPEED: f64 = 3.0e8;

/// THz network parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThzScenario {
    /// Carrier frequency in Hz.
    pub frequency: f64,
    /// Antenna directivity angle φ in radians.
    pub phi: f64,
    /// Blocker radius r_B in meters.
    pub r_b: f64,
    /// Interference horizon R in meters.
    pub horizon: f64,
    /// Absorption coefficient K in 1/m.
    pub absorption: f64,
    /// Interferer intensity per m².
    pub intensity: f64,
    /// Link constant H (W·m²).
    pub h: f64,
    pub temperature: f64,
    /// Noise bandwidth in Hz; noise power is the PSD times this.
    pub bandwidth: f64,
    /// NLOS path lengths Alice→Bob and Alice→Willie, in meters.
    pub d_ab: f64,
    pub d_aw: f64,
}

impl Default for ThzScenario {
    fn default() -> Self {
        ThzScenario {
            frequency: 500e9,
            phi: PI / 18.0,
            r_b: 0.1,
            horizon: 10.0,
            absorption: 0.01,
            intensity: 0.01,
            h: 1.0,
            temperature: 296.0,
            bandwidth: 1.0,
            d_ab: 5.0,
            d_aw: 5.0,
        }
    }
}

impl ThzScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.frequency > 0.0) {
            return Err(param("frequency", format!("must be positive, got {}", self.frequency)));
        }
        if !(self.phi > 0.0 && self.phi <= 2.0 * PI) {
            return Err(param("phi", format!("must lie in (0, 2π], got {}", self.phi)));
        }
        if !(self.r_b > 0.0 && self.horizon > self.r_b) {
            return Err(param("horizon", "needs R > r_B > 0"));
        }
        if !(self.absorption >= 0.0) {
            return Err(param(
                "absorption",
                format!("must be nonnegative, got {}", self.absorption),
            ));
        }
        if !(self.intensity >= 0.0 && self.intensity.is_finite()) {
            return Err(param("lambda", format!("must be nonnegative, got {}", self.intensity)));
        }
        if !(self.h > 0.0 && self.temperature > 0.0 && self.bandwidth > 0.0) {
            return Err(param("h", "H, temperature and bandwidth must be positive"));
        }
        if !(self.d_ab > 0.0 && self.d_aw > 0.0) {
            return Err(param("d_ab", "path lengths must be positive"));
        }
        Ok(())
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI * self.frequency / PROPAGATION_SPEED
    }

    /// Thermal noise power in watts.
    pub fn noise_power(&self) -> Result<f64> {
        Ok(johnson_nyquist_psd(self.frequency, self.temperature)? * self.bandwidth)
    }
}

/// G = 2/(1 − cos(φ/2)) for a cone of directivity angle φ.
pub fn antenna_gain(phi: f64) -> Result<f64> {
    if phi == 0.0 {
        return Err(Error::Singularity { distance: 0.0 });
    }
    if !(phi > 0.0 && phi <= 2.0 * PI) {
        return Err(param("phi", format!("must lie in (0, 2π], got {phi}")));
    }
    // 1 − cos x = 2 sin²(x/2), accurate for narrow beams
    let s = (phi / 4.0).sin();
    Ok(1.0 / (s * s))
}

/// A·d^(−2)·e^(−K·d).
pub fn received_power(a: f64, d: f64, k: f64) -> Result<f64> {
    if d == 0.0 {
        return Err(Error::Singularity { distance: 0.0 });
    }
    if !(d > 0.0) {
        return Err(param("d", format!("must be positive, got {d}")));
    }
    Ok(a / (d * d) * (-k * d).exp())
}

/// hf/(e^(hf/k_BT) − 1) in W/Hz.
pub fn johnson_nyquist_psd(f: f64, temperature: f64) -> Result<f64> {
    if !(f > 0.0 && temperature > 0.0) {
        return Err(param("frequency", "frequency and temperature must be positive"));
    }
    let hf = PLANCK * f;
    Ok(hf / (hf / (BOLTZMANN * temperature)).exp_m1())
}

/// P_B = 1 − exp(−λ(x − r_B)r_B): some blocker sits on a path of length x.
pub fn blocking_prob(x: f64, intensity: f64, r_b: f64) -> Result<f64> {
    if !(x >= r_b) {
        return Err(domain(
            "blocking_prob",
            x,
            format!("path shorter than the blocker radius {r_b}"),
        ));
    }
    Ok(-(-intensity * (x - r_b) * r_b).exp_m1())
}

/// P_C = φ/2π: the receiver lies inside an interferer's beam.
pub fn coverage_prob(phi: f64) -> Result<f64> {
    if !(phi > 0.0 && phi <= 2.0 * PI) {
        return Err(param("phi", format!("must lie in (0, 2π], got {phi}")));
    }
    Ok(phi / (2.0 * PI))
}

/// How a receiver sees the interferers: the link constant A applied to each
/// interferer's power and the chance of falling inside its beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverView {
    pub link_constant: f64,
    pub coverage: f64,
}

impl ReceiverView {
    /// Directional receiver: A = H·G(φ)², P_C = φ/2π.
    pub fn directional(s: &ThzScenario) -> Result<Self> {
        let g = antenna_gain(s.phi)?;
        Ok(ReceiverView {
            link_constant: s.h * g * g,
            coverage: coverage_prob(s.phi)?,
        })
    }

    /// Omnidirectional receiver: unit receive gain, and every interferer
    /// counts regardless of where its beam points.
    pub fn omni(s: &ThzScenario) -> Result<Self> {
        Ok(ReceiverView {
            link_constant: s.h * antenna_gain(s.phi)?,
            coverage: 1.0,
        })
    }

    /// Unit link constant with directional coverage.
    pub fn unit(s: &ThzScenario) -> Result<Self> {
        Ok(ReceiverView {
            link_constant: 1.0,
            coverage: coverage_prob(s.phi)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThzInterferenceStats {
    pub mean: f64,
    pub variance: f64,
}

/// Closed-form mean and variance of the interference via Campbell's theorem.
///
/// With c = K + λr_B and θ-integration giving 2π·P_C,
///   mean = A·λ·2πP_C·e^(λr_B²)·[E₁(c·r_B) − E₁(c·R)]
///   var  = A²·λ·2πP_C·e^(λr_B²)·∫_{r_B}^R r^(−3)·e^(−(2K+λr_B)r) dr
/// Each interferer is kept by an independent Bernoulli draw, so the variance
/// integrand carries the retention probability once, not squared; see
/// [`variance_as_printed`] for the squared form.
pub fn thz_interference_stats(s: &ThzScenario, view: &ReceiverView) -> Result<ThzInterferenceStats> {
    s.validate()?;
    let (lam, rb, r) = (s.intensity, s.r_b, s.horizon);
    let pre = lam * 2.0 * PI * view.coverage * (lam * rb * rb).exp();
    let c = s.absorption + lam * rb;
    let mean = if lam == 0.0 {
        0.0
    } else {
        view.link_constant * pre * e1_difference(c, rb, r)?
    };
    let b = 2.0 * s.absorption + lam * rb;
    let variance = if lam == 0.0 {
        0.0
    } else {
        view.link_constant.powi(2) * pre * (cubic_antiderivative(b, r)? - cubic_antiderivative(b, rb)?)
    };
    Ok(ThzInterferenceStats {
        mean: mean.max(0.0),
        variance: variance.max(0.0),
    })
}

/// The variance display evaluated literally: retention squared inside
/// Campbell's integral, and the bracket
///   2c²·Ei(−2c) + e^(−2c·r)·(c/r − 1/(2r²)),  c = K + λr_B,
/// taken between r_B and R. The Ei term carries no r, so it cancels in the
/// difference.
///
/// Kept for comparison with [`thz_interference_stats`]; it does not describe
/// independently thinned interferers.
pub fn variance_as_printed(s: &ThzScenario, view: &ReceiverView) -> Result<f64> {
    s.validate()?;
    let (lam, rb) = (s.intensity, s.r_b);
    if lam == 0.0 {
        return Ok(0.0);
    }
    let ang = 2.0 * PI * view.coverage;
    let pre = view.link_constant.powi(2) * lam * ang * ang / (2.0 * PI) * (2.0 * lam * rb * rb).exp();
    let c = s.absorption + lam * rb;
    let ei = if c > 0.0 { -exp_integral_e1(2.0 * c)? } else { 0.0 };
    let bracket = |r: f64| 2.0 * c * c * ei + (-2.0 * c * r).exp() * (c / r - 1.0 / (2.0 * r * r));
    Ok(pre * (bracket(s.horizon) - bracket(rb)))
}

// ∫_a^b e^(−c·r)/r dr = E₁(c·a) − E₁(c·b); the c = 0 limit is ln(b/a).
fn e1_difference(c: f64, a: f64, b: f64) -> Result<f64> {
    if c == 0.0 {
        return Ok((b / a).ln());
    }
    Ok(exp_integral_e1(c * a)? - exp_integral_e1(c * b)?)
}

// Antiderivative of r^(−3)·e^(−b·r):
//   (b²/2)·Ei(−b·r) + e^(−b·r)·(b/(2r) − 1/(2r²))
fn cubic_antiderivative(b: f64, r: f64) -> Result<f64> {
    let tail = (-b * r).exp() * (b / (2.0 * r) - 1.0 / (2.0 * r * r));
    if b == 0.0 {
        return Ok(tail);
    }
    Ok(-0.5 * b * b * exp_integral_e1(b * r)? + tail)
}

/// Retention probability P_C·(1 − P_B(r)) of an interferer at distance r.
fn retention(s: &ThzScenario, view: &ReceiverView, r: f64) -> f64 {
    view.coverage * (-s.intensity * (r - s.r_b) * s.r_b).exp()
}

fn path_gain(s: &ThzScenario, r: f64) -> f64 {
    (-s.absorption * r).exp() / (r * r)
}

/// Σ A·r_i^(−2)·e^(−K·r_i)·𝟙_i over the field, with independent
/// 𝟙_i ~ Bernoulli(P_C·(1 − P_B(r_i))). Points past the horizon contribute
/// nothing.
pub fn realize_thz_interference<R: Rng + ?Sized>(
    field: &PointField,
    s: &ThzScenario,
    view: &ReceiverView,
    receiver: &Point,
    rng: &mut R,
) -> Result<f64> {
    let mut total = 0.0;
    for p in field.points() {
        let r = p.distance(receiver);
        if r < s.r_b {
            return Err(domain(
                "realize_thz_interference",
                r,
                "interferer inside the blocker radius",
            ));
        }
        if r > s.horizon {
            continue;
        }
        let keep = rng.random::<f64>() < retention(s, view, r);
        if keep {
            total += view.link_constant * path_gain(s, r);
        }
    }
    Ok(total)
}

/// Interferers on the annulus r_B ≤ r ≤ R around `receiver`: a PPP on the
/// horizon disk with the points inside the blocker radius removed.
pub fn sample_thz_field<R: Rng + ?Sized>(s: &ThzScenario, receiver: Point, rng: &mut R) -> Result<PointField> {
    s.validate()?;
    let region = Region::disk(receiver, s.horizon)?;
    let count = poisson_count(s.intensity * region.area(), rng);
    let rb2 = s.r_b * s.r_b;
    let points: Vec<Point> = (0..count)
        .map(|_| region.sample_uniform(rng))
        .filter(|p| p.distance_sq(&receiver) >= rb2)
        .collect();
    let n = points.len();
    PointField::from_parts(region, points, vec![1.0; n], vec![1.0; n])
}

// Radial distance of a uniform point in the annulus.
fn annulus_radius<R: Rng + ?Sized>(s: &ThzScenario, rng: &mut R) -> f64 {
    let rb2 = s.r_b * s.r_b;
    (rb2 + rng.random::<f64>() * (s.horizon * s.horizon - rb2)).sqrt()
}

/// One draw of the interference at the centre of the annulus, sampling
/// distances only.
pub fn thz_interference_draw<R: Rng + ?Sized>(s: &ThzScenario, view: &ReceiverView, rng: &mut R) -> f64 {
    let area = PI * (s.horizon * s.horizon - s.r_b * s.r_b);
    let count = poisson_count(s.intensity * area, rng);
    let mut total = 0.0;
    for _ in 0..count {
        let r = annulus_radius(s, rng);
        if rng.random::<f64>() < retention(s, view, r) {
            total += view.link_constant * path_gain(s, r);
        }
    }
    total
}

/// Plain Monte Carlo draws of the interference, one field per trial.
pub fn thz_interference_samples(
    s: &ThzScenario,
    view: &ReceiverView,
    trials: usize,
    seed: u64,
    tag: u32,
) -> Result<Vec<f64>> {
    s.validate()?;
    Ok(run_trials(seed, tag, trials, |_, rng| {
        thz_interference_draw(s, view, rng)
    }))
}

/// Monte Carlo estimates of the interference mean and variance with their
/// standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
}

impl MomentEstimate {
    /// Sample moments of plain Monte Carlo draws.
    pub fn from_samples(xs: &[f64]) -> Self {
        MomentEstimate {
            mean: mc::mean(xs),
            mean_se: mc::std_error(xs),
            variance: mc::variance(xs),
            variance_se: mc::variance_std_error(xs),
        }
    }
}

/// Extra interferers superposed by the importance sampler: a PPP of this
/// expected count with radial density ∝ r^(−IS_EXPONENT) on [r_B, R].
pub const IS_EXTRA_MASS: f64 = 1.0;
pub const IS_EXPONENT: f64 = 1.5;

/// Importance-sampled field simulation of the interference moments.
///
/// The thinned interferers form a PPP of radial intensity
/// μ(r) = λ·2πP_C·e^(−λ(r−r_B)r_B)·r. Each trial simulates that field
/// exactly (uniform annulus points, Bernoulli retention) and superposes an
/// independent PPP of radial intensity ρ(r) concentrated near the receiver.
/// The realization is reweighted by the likelihood ratio of the PPP with
/// intensity μ against μ + ρ,
///   L = exp(∫ρ)·Π μ(r_i)/(μ(r_i) + ρ(r_i)),
/// which is at most e^(∫ρ). E[L·I] and E[L·I²] are unbiased for E[I] and
/// E[I²]; the near-receiver configurations that dominate the variance are
/// visited far more often than under plain sampling.
pub fn thz_interference_moments(
    s: &ThzScenario,
    view: &ReceiverView,
    trials: usize,
    seed: u64,
    tag: u32,
) -> Result<MomentEstimate> {
    s.validate()?;
    if trials < 2 {
        return Err(param("trials", "needs at least two trials"));
    }
    let (rb, big_r) = (s.r_b, s.horizon);
    let e = 1.0 - IS_EXPONENT;
    let (lo, hi) = (rb.powf(e), big_r.powf(e));
    let norm = (hi - lo) / e;
    let rho = |r: f64| IS_EXTRA_MASS * r.powf(-IS_EXPONENT) / norm;
    let mu = |r: f64| s.intensity * 2.0 * PI * view.coverage * (-s.intensity * (r - rb) * rb).exp() * r;
    let pairs: Vec<(f64, f64)> = run_trials(seed, tag, trials, |_, rng| {
        let mut total = 0.0;
        let mut log_l = IS_EXTRA_MASS;
        let visit = |r: f64, total: &mut f64, log_l: &mut f64| {
            let m = mu(r);
            *total += view.link_constant * path_gain(s, r);
            *log_l += (m / (m + rho(r))).ln();
        };
        let area = PI * (big_r * big_r - rb * rb);
        for _ in 0..poisson_count(s.intensity * area, rng) {
            let r = annulus_radius(s, rng);
            if rng.random::<f64>() < retention(s, view, r) {
                visit(r, &mut total, &mut log_l);
            }
        }
        for _ in 0..poisson_count(IS_EXTRA_MASS, rng) {
            let r = (lo + rng.random::<f64>() * (hi - lo)).powf(1.0 / e);
            visit(r, &mut total, &mut log_l);
        }
        let l = log_l.exp();
        (l * total, l * total * total)
    });
    let first: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let second: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mean = mc::mean(&first);
    let variance = mc::mean(&second) - mean * mean;
    // delta method: Var̂ = m₂ − m₁², gradient (−2m₁, 1)
    let lin: Vec<f64> = pairs.iter().map(|&(a, b)| b - 2.0 * mean * a).collect();
    Ok(MomentEstimate {
        mean,
        mean_se: mc::std_error(&first),
        variance,
        variance_se: mc::std_error(&lin),
    })
}
