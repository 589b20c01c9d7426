//! Rough-surface scattering and the normalized secrecy capacity of a
//! reflected THz link.
//!
//! Gains follow the Beckmann–Kirchhoff solution for a perfectly conducting
//! square plate with Gaussian height statistics: a coherent specular lobe
//! attenuated by e^(−g) plus a diffuse series in the roughness g.

use std::f64::consts::PI;

use crate::error::{param, Error, Result};
use crate::geometry::Point;
use crate::thz::{
    antenna_gain, received_power, thz_interference_stats, ReceiverView, ThzInterferenceStats, ThzScenario,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterSurface {
    /// Height standard deviation σ_h in meters.
    pub sigma_h: f64,
    /// Correlation length l_c in meters.
    pub corr_len: f64,
    /// Illuminated area in m².
    pub area: f64,
}

impl ScatterSurface {
    pub fn new(sigma_h: f64, corr_len: f64, area: f64) -> Result<Self> {
        let s = ScatterSurface {
            sigma_h,
            corr_len,
            area,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_h >= 0.0 && self.sigma_h.is_finite()) {
            return Err(param("sigma_h", format!("must be nonnegative, got {}", self.sigma_h)));
        }
        if !(self.corr_len > 0.0) {
            return Err(param("corr_len", format!("must be positive, got {}", self.corr_len)));
        }
        if !(self.area > 0.0) {
            return Err(param("area", format!("must be positive, got {}", self.area)));
        }
        Ok(())
    }

    /// Half side of the square plate, √A/2.
    pub fn half_side(&self) -> f64 {
        self.area.sqrt() / 2.0
    }
}

/// Incidence θ₁, scattering θ₂ and out-of-plane θ₃ angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterGeometry {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl ScatterGeometry {
    pub fn in_plane_degrees(theta1: f64, theta2: f64) -> Self {
        ScatterGeometry {
            theta1: theta1.to_radians(),
            theta2: theta2.to_radians(),
            theta3: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let half = PI / 2.0;
        if !(self.theta1 >= 0.0 && self.theta1 < half) {
            return Err(param("theta1", format!("must lie in [0, π/2), got {}", self.theta1)));
        }
        if !(self.theta2 >= 0.0 && self.theta2 < half) {
            return Err(param("theta2", format!("must lie in [0, π/2), got {}", self.theta2)));
        }
        if !(self.theta3 >= 0.0 && self.theta3 < 2.0 * PI) {
            return Err(param("theta3", format!("must lie in [0, 2π), got {}", self.theta3)));
        }
        Ok(())
    }
}

/// Roughness beyond which the diffuse series is replaced by its asymptote.
pub const ROUGH_LIMIT: f64 = 300.0;

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Coherent and diffuse parts of the scattered power gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KirchhoffTerms {
    /// Roughness g = σ_h²·v_z².
    pub g: f64,
    pub coherent: f64,
    pub diffuse: f64,
}

impl KirchhoffTerms {
    pub fn total(&self) -> f64 {
        self.coherent + self.diffuse
    }
}

/// Mean scattered power gain at frequency `f` (Hz).
pub fn kirchhoff_gain(f: f64, surface: &ScatterSurface, geom: &ScatterGeometry) -> Result<f64> {
    Ok(kirchhoff_terms(f, surface, geom)?.total())
}

pub fn kirchhoff_terms(f: f64, surface: &ScatterSurface, geom: &ScatterGeometry) -> Result<KirchhoffTerms> {
    if !(f > 0.0) {
        return Err(param("frequency", format!("must be positive, got {f}")));
    }
    surface.validate()?;
    geom.validate()?;
    let k = 2.0 * PI * f / crate::thz::PROPAGATION_SPEED;
    let (s1, c1) = geom.theta1.sin_cos();
    let (s2, c2) = geom.theta2.sin_cos();
    let (s3, c3) = geom.theta3.sin_cos();
    let vx = k * (s1 - s2 * c3);
    let vy = -k * s2 * s3;
    let vz = -k * (c1 + c2);
    let vxy2 = vx * vx + vy * vy;
    let g = (surface.sigma_h * vz).powi(2);
    let ff = (1.0 + c1 * c2 - s1 * s2 * c3) / (c1 * (c1 + c2));
    let l = surface.half_side();
    let rho0 = sinc(vx * l) * sinc(vy * l);
    let lc2 = surface.corr_len * surface.corr_len;
    let scale = PI * lc2 * ff * ff / surface.area;

    if g > ROUGH_LIMIT {
        return Ok(KirchhoffTerms {
            g,
            coherent: (-g).exp() * rho0 * rho0,
            diffuse: scale / g * (-vxy2 * lc2 / (4.0 * g)).exp(),
        });
    }
    let coherent = (-g).exp() * rho0 * rho0;
    if g == 0.0 {
        return Ok(KirchhoffTerms {
            g,
            coherent,
            diffuse: 0.0,
        });
    }
    // e^(−g)·g^m/m! built up recursively
    let cap = 50 + 10 * g.ceil() as usize;
    let mut pmf = (-g).exp();
    let mut sum = 0.0;
    for m in 1..=cap {
        let mf = m as f64;
        pmf *= g / mf;
        let term = pmf / mf * (-vxy2 * lc2 / (4.0 * mf)).exp();
        sum += term;
        if mf > g && term <= 1e-12 * sum {
            return Ok(KirchhoffTerms {
                g,
                coherent,
                diffuse: scale * sum,
            });
        }
    }
    Err(Error::Numeric {
        routine: "kirchhoff_gain",
        reason: format!("diffuse series did not settle within {cap} terms at g = {g}"),
    })
}

/// How Willie's log term enters the normalized secrecy capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SecrecyConvention {
    /// [log(1+SINR_B) − log(SINR_W)] / log(1+SINR_B)
    #[default]
    AsPrinted,
    /// [log(1+SINR_B) − log(1+SINR_W)] / log(1+SINR_B)
    OnePlusWillie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SecrecyOptions {
    pub convention: SecrecyConvention,
    /// Clamp the result to [0, 1].
    pub clamp: bool,
}

pub fn normalized_secrecy_capacity(sinr_b: f64, sinr_w: f64, opts: SecrecyOptions) -> Result<f64> {
    if !(sinr_b >= 0.0 && sinr_w > 0.0) {
        return Err(param(
            "sinr",
            format!("needs SINR_B ≥ 0 and SINR_W > 0, got {sinr_b} and {sinr_w}"),
        ));
    }
    let den = sinr_b.ln_1p();
    if den == 0.0 {
        return Err(Error::Numeric {
            routine: "normalized_secrecy_capacity",
            reason: "log(1 + SINR_B) vanishes".into(),
        });
    }
    let willie = match opts.convention {
        SecrecyConvention::AsPrinted => sinr_w.ln(),
        SecrecyConvention::OnePlusWillie => sinr_w.ln_1p(),
    };
    let c = (den - willie) / den;
    Ok(if opts.clamp { c.clamp(0.0, 1.0) } else { c })
}

/// Second-order Taylor estimate of E[P_rx/(noise + I)].
pub fn mean_sinr_taylor(p_rx: f64, noise: f64, stats: &ThzInterferenceStats) -> Result<f64> {
    let base = noise + stats.mean;
    if !(base > 0.0) {
        return Err(param("noise", "noise plus mean interference must be positive"));
    }
    Ok(p_rx / base + p_rx * stats.variance / base.powi(3))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WillieAntenna {
    /// Directional receive antenna with its own beamwidth.
    Directional(f64),
    Omni,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyReport {
    pub sinr_b: f64,
    pub sinr_w: f64,
    pub cs: f64,
    pub gain_b: f64,
    pub gain_w: f64,
    pub p_rx_b: f64,
    pub p_rx_w: f64,
    pub interference_b: ThzInterferenceStats,
    pub interference_w: ThzInterferenceStats,
}

/// Mean SINRs of Bob and Willie over their reflected paths and the resulting
/// normalized secrecy capacity.
pub fn evaluate_scenario(
    s: &ThzScenario,
    surface: &ScatterSurface,
    geom_b: &ScatterGeometry,
    geom_w: &ScatterGeometry,
    willie: WillieAntenna,
    opts: SecrecyOptions,
) -> Result<SecrecyReport> {
    s.validate()?;
    let gain_b = kirchhoff_gain(s.frequency, surface, geom_b)?;
    let gain_w = kirchhoff_gain(s.frequency, surface, geom_w)?;
    let g_tx = antenna_gain(s.phi)?;
    let view_b = ReceiverView::directional(s)?;
    let view_w = match willie {
        WillieAntenna::Directional(phi_w) => ReceiverView {
            link_constant: s.h * g_tx * antenna_gain(phi_w)?,
            coverage: view_b.coverage,
        },
        WillieAntenna::Omni => ReceiverView::omni(s)?,
    };
    let p_rx_b = received_power(view_b.link_constant, s.d_ab, s.absorption)? * gain_b;
    let p_rx_w = received_power(view_w.link_constant, s.d_aw, s.absorption)? * gain_w;
    let noise = s.noise_power()?;
    let interference_b = thz_interference_stats(s, &view_b)?;
    let interference_w = thz_interference_stats(s, &view_w)?;
    let sinr_b = mean_sinr_taylor(p_rx_b, noise, &interference_b)?;
    let sinr_w = mean_sinr_taylor(p_rx_w, noise, &interference_w)?;
    let cs = normalized_secrecy_capacity(sinr_b, sinr_w, opts)?;
    Ok(SecrecyReport {
        sinr_b,
        sinr_w,
        cs,
        gain_b,
        gain_w,
        p_rx_b,
        p_rx_w,
        interference_b,
        interference_w,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionCandidate {
    pub position: Point,
    pub surface: ScatterSurface,
    /// Incidence angle in radians.
    pub theta1: f64,
}

/// Index of the reflection point closest to Bob; among equally close points
/// the one with the largest incidence angle, then the earliest.
pub fn select_reflection_point(candidates: &[ReflectionCandidate], bob: &Point) -> Result<usize> {
    if candidates.is_empty() {
        return Err(param("candidates", "no reflection points to choose from"));
    }
    let mut best = 0;
    for (i, c) in candidates.iter().enumerate().skip(1) {
        let b = &candidates[best];
        let (dc, db) = (c.position.distance(bob), b.position.distance(bob));
        if dc < db || (dc == db && c.theta1 > b.theta1) {
            best = i;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MM: f64 = 1e-3;

    fn fig9_surface() -> ScatterSurface {
        ScatterSurface::new(0.088 * MM, 1.8 * MM, 4e-4).unwrap()
    }

    #[test]
    fn smooth_specular_is_lossless() {
        let s = ScatterSurface::new(0.0, 1.8 * MM, 4e-4).unwrap();
        for t in [0.0, 30.0, 60.0, 85.0] {
            let g = kirchhoff_gain(500e9, &s, &ScatterGeometry::in_plane_degrees(t, t)).unwrap();
            assert!((g - 1.0).abs() < 1e-12, "θ={t}: {g}");
        }
        let tiny = ScatterSurface::new(1e-12, 1.8 * MM, 4e-4).unwrap();
        let g = kirchhoff_gain(500e9, &tiny, &ScatterGeometry::in_plane_degrees(45.0, 45.0)).unwrap();
        assert!((g - 1.0).abs() < 1e-9);
    }

    #[test]
    fn roughness_at_sixty_degrees() {
        let t = kirchhoff_terms(500e9, &fig9_surface(), &ScatterGeometry::in_plane_degrees(60.0, 60.0)).unwrap();
        assert!((t.g - 0.8492).abs() < 1e-3, "{}", t.g);
        let k = 2.0 * PI * 500e9 / crate::thz::PROPAGATION_SPEED;
        assert!((k - 10472.0).abs() < 0.1);
        assert!((t.coherent - (-t.g).exp()).abs() < 1e-12);
    }

    #[test]
    fn specular_ridge_dominates_the_grid() {
        let s = ScatterSurface::new(0.01 * MM, 0.1 * MM, 4e-4).unwrap();
        for t1 in 0..90 {
            let row: Vec<f64> = (0..90)
                .map(|t2| kirchhoff_gain(500e9, &s, &ScatterGeometry::in_plane_degrees(t1 as f64, t2 as f64)).unwrap())
                .collect();
            let arg = (0..90).max_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap();
            assert!((arg as i32 - t1).abs() <= 1, "row {t1}: argmax {arg}");
        }
    }

    #[test]
    fn roughness_moves_power_from_coherent_to_diffuse() {
        let geom = ScatterGeometry::in_plane_degrees(60.0, 50.0);
        let mut last: Option<KirchhoffTerms> = None;
        for sh in [0.01, 0.03, 0.058, 0.088, 0.12] {
            let s = ScatterSurface::new(sh * MM, 1.8 * MM, 4e-4).unwrap();
            let t = kirchhoff_terms(500e9, &s, &geom).unwrap();
            assert!(t.coherent >= 0.0 && t.diffuse >= 0.0);
            if let Some(p) = last {
                assert!(
                    t.coherent < p.coherent && t.diffuse > p.diffuse,
                    "σ_h={sh}: {t:?} after {p:?}"
                );
            }
            last = Some(t);
        }
    }

    #[test]
    fn series_meets_the_rough_asymptote() {
        // just below and above the switch the two evaluations agree closely
        let geom = ScatterGeometry::in_plane_degrees(30.0, 40.0);
        let f = 500e9;
        let k = 2.0 * PI * f / crate::thz::PROPAGATION_SPEED;
        let vz = k * (30f64.to_radians().cos() + 40f64.to_radians().cos());
        let at = |g: f64| {
            let s = ScatterSurface::new(g.sqrt() / vz, 1.8 * MM, 4e-4).unwrap();
            kirchhoff_terms(f, &s, &geom).unwrap()
        };
        let (lo, hi) = (at(299.0), at(301.0));
        assert!(lo.g < ROUGH_LIMIT && hi.g > ROUGH_LIMIT);
        assert!(((lo.diffuse - hi.diffuse) / hi.diffuse).abs() < 0.02, "{lo:?} {hi:?}");
    }

    #[test]
    fn rejects_bad_geometry() {
        let s = fig9_surface();
        assert!(kirchhoff_gain(500e9, &s, &ScatterGeometry::in_plane_degrees(90.0, 10.0)).is_err());
        assert!(kirchhoff_gain(500e9, &s, &ScatterGeometry::in_plane_degrees(10.0, -1.0)).is_err());
        assert!(ScatterSurface::new(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn secrecy_capacity_examples() {
        let o = SecrecyOptions::default();
        assert!((normalized_secrecy_capacity(10.0, 1.0, o).unwrap() - 1.0).abs() < 1e-15);
        assert!(normalized_secrecy_capacity(10.0, 11.0, o).unwrap().abs() < 1e-15);
        let c = normalized_secrecy_capacity(10.0, 0.1, o).unwrap();
        assert!((c - (1.0 + 10f64.ln() / 11f64.ln())).abs() < 1e-14);
        assert!((c - 1.960).abs() < 1e-3);
        let clamped = SecrecyOptions { clamp: true, ..o };
        assert_eq!(normalized_secrecy_capacity(10.0, 0.1, clamped).unwrap(), 1.0);
        let alt = SecrecyOptions {
            convention: SecrecyConvention::OnePlusWillie,
            clamp: false,
        };
        assert!(normalized_secrecy_capacity(10.0, 10.0, alt).unwrap().abs() < 1e-15);
        assert!(normalized_secrecy_capacity(0.0, 1.0, o).is_err());
        assert!(normalized_secrecy_capacity(1.0, 0.0, o).is_err());
    }

    #[test]
    fn taylor_sinr_examples() {
        let st = ThzInterferenceStats {
            mean: 1e-3,
            variance: 0.0,
        };
        assert_eq!(
            mean_sinr_taylor(0.038, 3.92e-21, &st).unwrap(),
            0.038 / (3.92e-21 + 1e-3)
        );
        let st = ThzInterferenceStats {
            mean: 1e-3,
            variance: 1e-7,
        };
        let v = mean_sinr_taylor(0.038, 3.92e-21, &st).unwrap();
        assert!((v - 41.8).abs() < 1e-6, "{v}");
        let none = ThzInterferenceStats {
            mean: 0.0,
            variance: 0.0,
        };
        assert!(mean_sinr_taylor(1.0, 0.0, &none).is_err());
    }

    fn fig9(lam: f64, theta_w: f64) -> SecrecyReport {
        let s = ThzScenario {
            intensity: lam,
            ..ThzScenario::default()
        };
        evaluate_scenario(
            &s,
            &fig9_surface(),
            &ScatterGeometry::in_plane_degrees(60.0, 60.0),
            &ScatterGeometry::in_plane_degrees(60.0, theta_w),
            WillieAntenna::Directional(s.phi),
            SecrecyOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn no_interferers_is_worst_for_secrecy() {
        for tw in 50..60 {
            let quiet = fig9(0.0, tw as f64).cs;
            for lam in [0.001, 0.01, 0.1] {
                assert!(quiet < fig9(lam, tw as f64).cs, "θ_W={tw} λ={lam}");
            }
        }
    }

    #[test]
    fn specular_willie_is_the_minimum() {
        for lam in [0.001, 0.01, 0.1] {
            let at = fig9(lam, 60.0).cs;
            for tw in 50..60 {
                assert!(fig9(lam, tw as f64).cs > at);
            }
            assert!(at.abs() < 1e-2, "{at}");
        }
    }

    #[test]
    fn omni_willie_helps_alice() {
        let s = ThzScenario {
            frequency: 800e9,
            ..ThzScenario::default()
        };
        let surf = ScatterSurface::new(0.058 * MM, 1.8 * MM, 4e-4).unwrap();
        let gb = ScatterGeometry::in_plane_degrees(60.0, 60.0);
        for tw in 50..60 {
            let gw = ScatterGeometry::in_plane_degrees(60.0, tw as f64);
            let o = SecrecyOptions::default();
            let dir = evaluate_scenario(&s, &surf, &gb, &gw, WillieAntenna::Directional(s.phi), o).unwrap();
            let omni = evaluate_scenario(&s, &surf, &gb, &gw, WillieAntenna::Omni, o).unwrap();
            assert!(omni.cs > dir.cs && omni.sinr_w < dir.sinr_w);
        }
    }

    fn candidate(x: f64, t1: f64) -> ReflectionCandidate {
        ReflectionCandidate {
            position: Point::new(x, 0.0),
            surface: fig9_surface(),
            theta1: t1.to_radians(),
        }
    }

    #[test]
    fn reflection_point_rules() {
        let bob = Point::ORIGIN;
        assert_eq!(select_reflection_point(&[candidate(3.0, 10.0)], &bob).unwrap(), 0);
        assert_eq!(
            select_reflection_point(&[candidate(2.0, 80.0), candidate(1.0, 10.0)], &bob).unwrap(),
            1
        );
        assert_eq!(
            select_reflection_point(&[candidate(1.0, 30.0), candidate(-1.0, 60.0)], &bob).unwrap(),
            1
        );
        assert_eq!(
            select_reflection_point(&[candidate(1.0, 60.0), candidate(-1.0, 60.0)], &bob).unwrap(),
            0
        );
        assert!(select_reflection_point(&[], &bob).is_err());
    }
}
