//! Campbell-theorem integrals evaluated by quadrature.
//!
//! For a PPP of intensity λ and a response h(x), E[Σ h(xᵢ)] = λ∫h and
//! Var[Σ h(xᵢ)] = λ∫h². These helpers evaluate such integrals numerically
//! for radially symmetric responses on annuli and on square arenas.

use std::f64::consts::PI;

use crate::quad::integrate;

/// λ ∫_{inner ≤ |x| ≤ outer} h(|x|) dx for a radial response h.
pub fn annulus<F: Fn(f64) -> f64>(intensity: f64, h: F, inner: f64, outer: f64) -> f64 {
    intensity * integrate(|r| h(r) * 2.0 * PI * r, inner, outer, 0.0, 1e-13)
}

/// Same as [`annulus`] with breakpoints where `h` has kinks.
pub fn annulus_with_breaks<F: Fn(f64) -> f64>(intensity: f64, h: F, breaks: &[f64]) -> f64 {
    breaks.windows(2).map(|w| annulus(intensity, &h, w[0], w[1])).sum()
}

/// λ ∫ h(|x|) dx over the square [−side/2, side/2]² centred on the receiver.
///
/// Splits into the inscribed disk plus the four corners; the corners are
/// integrated in polar coordinates over θ ∈ [0, π/4] by symmetry (×8).
pub fn centred_square<F: Fn(f64) -> f64>(intensity: f64, h: F, side: f64, breaks: &[f64]) -> f64 {
    let half = side / 2.0;
    let mut pts: Vec<f64> = std::iter::once(0.0)
        .chain(breaks.iter().copied().filter(|&b| b > 0.0 && b < half))
        .chain(std::iter::once(half))
        .collect();
    pts.dedup();
    let disk = annulus_with_breaks(intensity, &h, &pts);
    let corner = integrate(
        |theta: f64| {
            let rmax = half / theta.cos();
            integrate(|r| h(r) * r, half, rmax, 0.0, 1e-12)
        },
        0.0,
        PI / 4.0,
        0.0,
        1e-11,
    );
    disk + intensity * 8.0 * corner
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_of_square() {
        let a = centred_square(1.0, |_| 1.0, 4.0, &[]);
        assert!((a - 16.0).abs() < 1e-9);
    }

    #[test]
    fn truncated_power_law_mean() {
        // λ∫_{1≤r≤R} r⁻⁴ dx = π(1 − R⁻²) for λ = 1.
        let m = annulus(1.0, |r: f64| r.powi(-4), 1.0, 1e4);
        assert!((m - PI * (1.0 - 1e-8)).abs() < 1e-12);
    }
}
