//! The exponential integral on the negative real axis.

use crate::error::{domain, Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Below this |x| the power series is used, above it the continued fraction.
pub const SERIES_LIMIT: f64 = 6.0;

/// Ei(x) = −∫_{−x}^∞ e^(−t)/t dt for x < 0.
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(domain("exp_integral_ei", x, "only negative arguments are supported"));
    }
    Ok(-exp_integral_e1(-x)?)
}

/// E₁(z) = ∫_z^∞ e^(−t)/t dt for z > 0.
pub fn exp_integral_e1(z: f64) -> Result<f64> {
    if !(z > 0.0) || z.is_nan() {
        return Err(domain("exp_integral_e1", z, "needs a positive argument"));
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    if z <= SERIES_LIMIT {
        e1_series(z)
    } else {
        e1_continued_fraction(z)
    }
}

// E₁(z) = −γ − ln z − Σ_{k≥1} (−z)^k/(k·k!)
fn e1_series(z: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut term = 1.0; // (−z)^k / k!
    for k in 1..200 {
        term *= -z / k as f64;
        let contrib = term / k as f64;
        sum += contrib;
        if contrib.abs() < 1e-17 * sum.abs() {
            return Ok(-EULER_GAMMA - z.ln() - sum);
        }
    }
    Err(Error::Numeric {
        routine: "exp_integral_e1 series",
        reason: format!("no convergence at z = {z}"),
    })
}

// Modified Lentz evaluation of
// E₁(z) = e^(−z) / (z + 1 − 1²/(z + 3 − 2²/(z + 5 − …)))
fn e1_continued_fraction(z: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(h * (-z).exp());
        }
    }
    Err(Error::Numeric {
        routine: "exp_integral_e1 continued fraction",
        reason: format!("no convergence at z = {z}"),
    })
}
