//! Covertness and reliability in AWGN networks with Poisson interference.
//!
//! Closed forms: the lower bound on the warden's detection error under the
//! optimal test, the covert distance that bound implies, Bob's decoding-error
//! bound and covert bit count, and the spatial throughput of jamming-based
//! versus interference-based hiding.
//!
//! Simulation: the warden's radiometer. Sample i at Willie is conditionally
//! Gaussian with power σ²_w0 + P_t·(S_i + a_i·l(d_aw)·Ψ_a), where S_i is the
//! interference gain Σ l(r_k)Ψ_k and a_i says whether Alice sent in that
//! slot, so the energy y_i² is that power times a χ²₁ draw. The random parts
//! are kept in [`RadiometerDraws`], which lets one set of draws be replayed
//! under every transmit power, schedule and distance (common random numbers).

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{param, Error, Result};
use crate::geometry::{sample_fading_power, Marks, PathLossLaw, Point, Region};
use crate::mc::{self, run_trials};
use crate::rng::Stream;
use crate::shot_noise::{interference_streamed, taylor_factor, Dimension};

/// Parameters of the AWGN covertness experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnScenario {
    /// Transmit power of Alice and of every interferer, in watts.
    pub tx_power: f64,
    pub alpha: f64,
    /// Interferer intensity per m².
    pub intensity: f64,
    pub d_aw: f64,
    pub d_ab: f64,
    /// Background noise power at Willie and at Bob.
    pub noise_w: f64,
    pub noise_b: f64,
    /// Channel uses (radiometer samples) per trace.
    pub n: usize,
    /// Transmission probability of the alternating schedule.
    pub p: f64,
    pub law: PathLossLaw,
    /// Simulation arena; Willie sits at its centre.
    pub arena: Region,
    pub refresh: FieldRefresh,
}

/// How often the interferer field is redrawn inside one radiometer trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldRefresh {
    /// Positions and fading fixed over the trace, symbols fresh per sample.
    #[default]
    PerTrace,
    /// A new field for every sample.
    PerSample,
}

impl Default for AwgnScenario {
    /// Unit powers, α = 4, λ = 1, bounded law, Willie at the centre of a
    /// 100 m × 100 m square, Alice 1 m away.
    fn default() -> Self {
        AwgnScenario {
            tx_power: 1.0,
            alpha: 4.0,
            intensity: 1.0,
            d_aw: 1.0,
            d_ab: 1.0,
            noise_w: 1.0,
            noise_b: 1.0,
            n: 500,
            p: 0.5,
            law: PathLossLaw::Bounded { alpha: 4.0 },
            arena: Region::square(Point::ORIGIN, 100.0).expect("positive side"),
            refresh: FieldRefresh::PerTrace,
        }
    }
}

impl AwgnScenario {
    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("tx_power", self.tx_power),
            ("noise_w", self.noise_w),
            ("noise_b", self.noise_b),
            ("lambda", self.intensity),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(param(name, format!("must be nonnegative and finite, got {v}")));
            }
        }
        for (name, v) in [("d_aw", self.d_aw), ("d_ab", self.d_ab)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(param(name, format!("must be positive, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(param("p", format!("must lie in [0, 1], got {}", self.p)));
        }
        if self.n == 0 {
            return Err(param("n", "needs at least one channel use"));
        }
        if self.law.alpha() != self.alpha {
            return Err(param("alpha", "path-loss law and scenario disagree on alpha"));
        }
        Ok(())
    }

    fn willie(&self) -> Point {
        self.arena.center()
    }
}

/// Alice's schedule during a radiometer trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Silent,
    Transmitting,
    /// Alice sends in each slot independently with probability p.
    Alternating(f64),
}

impl Mode {
    /// Probability that Alice is on in a given slot.
    pub fn duty(self) -> f64 {
        match self {
            Mode::Silent => 0.0,
            Mode::Transmitting => 1.0,
            Mode::Alternating(p) => p,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::Silent => "silent",
            Mode::Transmitting => "transmitting",
            Mode::Alternating(_) => "alternating",
        }
    }
}

/// Willie's per-sample energies and the radiometer statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorTrace {
    pub energies: Vec<f64>,
    /// T(y), the mean energy.
    pub statistic: f64,
    pub mode: Mode,
}

/// The random ingredients of one radiometer trace, independent of P_t,
/// d_aw and Alice's schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiometerDraws {
    /// Interference gain Σ l(r_k)Ψ_k per sample (without P_t).
    pub interference: Vec<f64>,
    /// Fading power of Alice's link per sample.
    pub alice_fading: Vec<f64>,
    /// Squared standard normal per sample.
    pub chi2: Vec<f64>,
    /// Uniform per sample; slot i is on under Alternating(p) iff slot[i] < p.
    pub slot: Vec<f64>,
}

impl RadiometerDraws {
    pub fn sample<R: Rng + ?Sized>(s: &AwgnScenario, rng: &mut R) -> Result<Self> {
        s.validate()?;
        let unit = Marks {
            tx_power: 1.0,
            ..Marks::default()
        };
        let willie = s.willie();
        let n = s.n;
        let mut interference = Vec::with_capacity(n);
        let mut alice_fading = Vec::with_capacity(n);
        match s.refresh {
            FieldRefresh::PerTrace => {
                let gain = interference_streamed(&s.arena, s.intensity, &s.law, unit, &willie, rng)?;
                let psi = sample_fading_power(rng);
                interference.resize(n, gain);
                alice_fading.resize(n, psi);
            }
            FieldRefresh::PerSample => {
                for _ in 0..n {
                    interference.push(interference_streamed(
                        &s.arena,
                        s.intensity,
                        &s.law,
                        unit,
                        &willie,
                        rng,
                    )?);
                    alice_fading.push(sample_fading_power(rng));
                }
            }
        }
        let chi2 = (0..n)
            .map(|_| {
                let g: f64 = StandardNormal.sample(rng);
                g * g
            })
            .collect();
        let slot = (0..n).map(|_| rng.random::<f64>()).collect();
        Ok(RadiometerDraws {
            interference,
            alice_fading,
            chi2,
            slot,
        })
    }

    pub fn len(&self) -> usize {
        self.chi2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi2.is_empty()
    }

    /// Replays the draws under the scenario's P_t, d_aw and noise floor.
    pub fn trace(&self, s: &AwgnScenario, mode: Mode) -> Result<DetectorTrace> {
        if let Mode::Alternating(p) = mode {
            if !(0.0..=1.0).contains(&p) {
                return Err(param("p", format!("must lie in [0, 1], got {p}")));
            }
        }
        let l = s.law.gain(s.d_aw)?;
        let energies: Vec<f64> = (0..self.len())
            .map(|i| {
                let on = match mode {
                    Mode::Silent => 0.0,
                    Mode::Transmitting => 1.0,
                    Mode::Alternating(p) => f64::from(u8::from(self.slot[i] < p)),
                };
                let power = s.noise_w + s.tx_power * (self.interference[i] + on * l * self.alice_fading[i]);
                power * self.chi2[i]
            })
            .collect();
        Ok(DetectorTrace {
            statistic: mc::mean(&energies),
            energies,
            mode,
        })
    }

    /// T(y) only, skipping the per-sample vector.
    pub fn statistic(&self, s: &AwgnScenario, mode: Mode) -> Result<f64> {
        Ok(self.trace(s, mode)?.statistic)
    }
}

/// One radiometer trace: Willie's n energies under `mode`.
pub fn simulate_radiometer<R: Rng + ?Sized>(s: &AwgnScenario, mode: Mode, rng: &mut R) -> Result<DetectorTrace> {
    RadiometerDraws::sample(s, rng)?.trace(s, mode)
}

/// max{0, 1/2 − √(n/8)·f(λ)/(2·d_aw^α)}: lower bound on Willie's detection
/// error under the optimal test, with a unit guard radius.
///
/// P_t does not appear: raising Alice's power raises the interference by the
/// same factor.
pub fn willie_error_lower_bound(n: f64, d_aw: f64, alpha: f64, intensity: f64, dim: Dimension) -> Result<f64> {
    if !(n >= 1.0) {
        return Err(param("n", format!("needs n >= 1, got {n}")));
    }
    if !(d_aw > 0.0) {
        return Err(param("d_aw", format!("must be positive, got {d_aw}")));
    }
    let f = taylor_factor(intensity, alpha, dim)?;
    Ok((0.5 - (n / 8.0).sqrt() * f / (2.0 * d_aw.powf(alpha))).max(0.0))
}

/// [f(λ)/(4√2·ε)]^(1/α)·n^(1/(2α)): the distance at which the lower bound
/// equals 1/2 − ε.
pub fn covert_distance(n: f64, alpha: f64, intensity: f64, dim: Dimension, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(param("epsilon", format!("must be positive, got {epsilon}")));
    }
    if !(n >= 1.0) {
        return Err(param("n", format!("needs n >= 1, got {n}")));
    }
    let f = taylor_factor(intensity, alpha, dim)?;
    Ok((f / (4.0 * 2f64.sqrt() * epsilon)).powf(1.0 / alpha) * n.powf(0.5 / alpha))
}

/// Detection threshold rule for the empirical radiometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdRule {
    Fixed(f64),
    /// γ minimizing the empirical P_e over 256 evenly spaced candidates
    /// spanning the pooled range of T(y).
    BestOnGrid,
}

pub const THRESHOLD_GRID: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionOutcome {
    pub p_fa: f64,
    pub p_md: f64,
    pub p_e: f64,
    pub threshold: f64,
}

/// Error rates of the test "decide H₁ iff T > γ".
pub fn detection_outcome(h0: &[f64], h1: &[f64], rule: ThresholdRule) -> Result<DetectionOutcome> {
    if h0.is_empty() || h1.is_empty() {
        return Err(Error::Threshold("both hypotheses need at least one trace".into()));
    }
    let rates = |gamma: f64| {
        let fa = h0.iter().filter(|&&t| t > gamma).count() as f64 / h0.len() as f64;
        let md = h1.iter().filter(|&&t| t <= gamma).count() as f64 / h1.len() as f64;
        DetectionOutcome {
            p_fa: fa,
            p_md: md,
            p_e: 0.5 * (fa + md),
            threshold: gamma,
        }
    };
    match rule {
        ThresholdRule::Fixed(gamma) => Ok(rates(gamma)),
        ThresholdRule::BestOnGrid => {
            let (lo, hi) = h0
                .iter()
                .chain(h1)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| {
                    (lo.min(t), hi.max(t))
                });
            if !(hi > lo) {
                return Err(Error::Threshold(format!("all statistics equal {lo}")));
            }
            let step = (hi - lo) / (THRESHOLD_GRID - 1) as f64;
            // ties keep the first (lowest) threshold
            let mut best = rates(lo);
            for j in 1..THRESHOLD_GRID {
                let o = rates(lo + step * j as f64);
                if o.p_e < best.p_e {
                    best = o;
                }
            }
            Ok(best)
        }
    }
}

/// Paired H₀ (silent) / H₁ (transmitting) radiometer trials.
///
/// H₀ and H₁ traces come from disjoint streams, so the two samples are
/// independent even when their distributions coincide.
pub fn willie_error_empirical(
    s: &AwgnScenario,
    trials: usize,
    rule: ThresholdRule,
    seed: u64,
    tag: u32,
) -> Result<DetectionOutcome> {
    if trials < 100 {
        return Err(param("trials", format!("needs at least 100, got {trials}")));
    }
    let (h0, h1) = hypothesis_statistics(s, trials, seed, tag)?;
    detection_outcome(&h0, &h1, rule)
}

/// T(y) under H₀ and H₁ for `trials` independent traces each.
pub fn hypothesis_statistics(s: &AwgnScenario, trials: usize, seed: u64, tag: u32) -> Result<(Vec<f64>, Vec<f64>)> {
    let run = |tag: u32, mode: Mode| -> Result<Vec<f64>> {
        run_trials(seed, tag, trials, |_, rng: &mut Stream| {
            RadiometerDraws::sample(s, rng)?.statistic(s, mode)
        })
        .into_iter()
        .collect()
    };
    Ok((run(2 * tag, Mode::Silent)?, run(2 * tag + 1, Mode::Transmitting)?))
}

/// Spread of T(y) over repeated runs for one (mode, d_aw, n) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionCell {
    pub mode: Mode,
    pub d_aw: f64,
    pub n: usize,
    pub mean: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
}

impl DispersionCell {
    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }

    /// Whether the two quartile boxes [q1, q3] intersect.
    pub fn overlaps(&self, other: &DispersionCell) -> bool {
        self.q1 <= other.q3 && other.q1 <= self.q3
    }
}

/// Quartiles of T(y) over `runs` traces for every (n, d_aw, mode) cell.
///
/// Each run's draws are shared by all distances and modes of the same n.
/// Cells come out ordered by n, then d_aw, then mode as listed.
pub fn iqr_dispersion_sweep(
    s: &AwgnScenario,
    n_list: &[usize],
    d_list: &[f64],
    modes: &[Mode],
    runs: usize,
    seed: u64,
    tag: u32,
) -> Result<Vec<DispersionCell>> {
    if runs < 20 {
        return Err(param("runs", format!("needs at least 20 runs per cell, got {runs}")));
    }
    let mut cells = Vec::new();
    for (k, &n) in n_list.iter().enumerate() {
        let sn = AwgnScenario { n, ..*s };
        let draws: Vec<RadiometerDraws> =
            run_trials(seed, tag + k as u32, runs, |_, rng| RadiometerDraws::sample(&sn, rng))
                .into_iter()
                .collect::<Result<_>>()?;
        for &d_aw in d_list {
            let sd = AwgnScenario { d_aw, ..sn };
            for &mode in modes {
                let mut t = draws
                    .iter()
                    .map(|dr| dr.statistic(&sd, mode))
                    .collect::<Result<Vec<f64>>>()?;
                let mean = mc::mean(&t);
                t.sort_by(f64::total_cmp);
                let (q1, median, q3) = (
                    mc::quantile_sorted(&t, 0.25),
                    mc::quantile_sorted(&t, 0.5),
                    mc::quantile_sorted(&t, 0.75),
                );
                cells.push(DispersionCell {
                    mode,
                    d_aw,
                    n,
                    mean,
                    q1,
                    median,
                    q3,
                    min: t[0],
                    max: t[t.len() - 1],
                });
            }
        }
    }
    Ok(cells)
}

fn require_alpha_four(alpha: f64) -> Result<()> {
    if alpha != 4.0 {
        return Err(Error::UnsupportedExponent(alpha));
    }
    Ok(())
}

/// 2^(nR)·π^(7/2)·λ/(3√n), clamped to [0, 1]: Bob's average decoding error
/// when the Eq.-style power condition holds. Closed form only for α = 4.
pub fn bob_error_upper_bound(n: f64, rate: f64, intensity: f64, alpha: f64) -> Result<f64> {
    require_alpha_four(alpha)?;
    if !(n >= 1.0) || !(rate >= 0.0) || !(intensity >= 0.0) {
        return Err(param("n", "needs n >= 1, rate >= 0 and lambda >= 0"));
    }
    if intensity == 0.0 {
        return Ok(0.0);
    }
    // log domain: 2^(nR) overflows long before the bound saturates
    let log2_bound = n * rate + (PI.powf(3.5) * intensity / (3.0 * n.sqrt())).log2();
    Ok(if log2_bound >= 0.0 { 1.0 } else { log2_bound.exp2() })
}

/// log₂(3ε√n/(π^(7/2)·λ)), clamped at 0: covert bits Bob can decode
/// reliably in n channel uses (α = 4).
pub fn covert_bits(n: f64, intensity: f64, epsilon: f64, alpha: f64) -> Result<f64> {
    require_alpha_four(alpha)?;
    if !(n >= 1.0) {
        return Err(param("n", format!("needs n >= 1, got {n}")));
    }
    if !(epsilon > 0.0) {
        return Err(param("epsilon", format!("must be positive, got {epsilon}")));
    }
    if !(intensity > 0.0) {
        return Err(Error::Divergence {
            quantity: "covert bits",
            reason: "unbounded without interference (lambda = 0)".into(),
        });
    }
    // split off log₂√n so that scaling n by 4 adds exactly one bit
    let bits = 0.5 * n.log2() + (3.0 * epsilon / (PI.powf(3.5) * intensity)).log2();
    Ok(bits.max(0.0))
}

/// Smallest transmit power for which the decoding-error bound applies:
/// P_t > 9σ²_b0/(4π⁴λ²Ψ_ab).
pub fn power_condition_threshold(noise_b: f64, intensity: f64, psi_ab: f64) -> Result<f64> {
    if !(intensity > 0.0 && psi_ab > 0.0 && noise_b >= 0.0) {
        return Err(param("lambda", "needs lambda > 0, Psi_ab > 0, noise >= 0"));
    }
    Ok(9.0 * noise_b / (4.0 * PI.powi(4) * intensity * intensity * psi_ab))
}

/// Reports (does not enforce) whether P_t clears the power condition.
pub fn power_condition_holds(tx_power: f64, noise_b: f64, intensity: f64, psi_ab: f64) -> Result<bool> {
    Ok(tx_power > power_condition_threshold(noise_b, intensity, psi_ab)?)
}

/// How Alice hides her transmissions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// A friendly jammer near Willie with jamming constant c.
    Jammer { c: f64 },
    /// Hiding in the network's own randomized transmissions.
    Interference,
}

/// Expected spatial density of successful transmissions.
pub fn spatial_throughput(scheme: Scheme, intensity: f64, xi: f64, d_ab: f64, alpha: f64, n: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(param("xi", format!("SINR threshold must be positive, got {xi}")));
    }
    if !(intensity >= 0.0 && d_ab > 0.0) {
        return Err(param("lambda", "needs lambda >= 0 and d_ab > 0"));
    }
    match scheme {
        Scheme::Jammer { c } => {
            if !(c > 0.0) {
                return Err(param("c", format!("jamming constant must be positive, got {c}")));
            }
            if intensity == 0.0 {
                return Ok(0.0);
            }
            let exponent = d_ab.powf(alpha) * xi * n.sqrt() / (c * intensity.powf(alpha / 2.0));
            Ok(intensity * (-exponent).exp())
        }
        Scheme::Interference => {
            if !(alpha > 2.0) {
                return Err(param("alpha", format!("needs alpha > 2, got {alpha}")));
            }
            let delta = 2.0 / alpha;
            // Γ(1+δ)Γ(1−δ) = πδ/sin(πδ)
            let gammas = PI * delta / (PI * delta).sin();
            Ok(intensity * (-PI * intensity * xi.powf(delta) * d_ab * d_ab * gammas).exp())
        }
    }
}

/// Channel-use count n* past which the jammer scheme's throughput drops to
/// or below the interference scheme's: τ^J(n*) ≤ τ^I < τ^J(n*/2).
///
/// Solved in closed form over the reals, then nudged up by ulps until the
/// inequality holds in floating point. The result need not be an integer.
pub fn throughput_crossover(intensity: f64, xi: f64, d_ab: f64, alpha: f64, c: f64) -> Result<f64> {
    if !(intensity > 0.0) {
        return Err(param("lambda", format!("must be positive, got {intensity}")));
    }
    let tau_i = spatial_throughput(Scheme::Interference, intensity, xi, d_ab, alpha, 1.0)?;
    let jam = |n: f64| spatial_throughput(Scheme::Jammer { c }, intensity, xi, d_ab, alpha, n);
    let root = ((intensity / tau_i).ln() * c * intensity.powf(alpha / 2.0) / (d_ab.powf(alpha) * xi)).powi(2);
    let mut n = root;
    for _ in 0..64 {
        if jam(n)? <= tau_i {
            return Ok(n);
        }
        n = f64::from_bits(n.to_bits() + 1);
    }
    Err(Error::Numeric {
        routine: "throughput_crossover",
        reason: format!("no crossover near n = {root}"),
    })
}
