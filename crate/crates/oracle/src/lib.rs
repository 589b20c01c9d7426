//! Reference computations that cross-check the analytic kernels.
//!
//! Nothing here depends on the model crate: the quadrature rules and
//! empirical statistics are written from their textbook definitions so they
//! can serve as independent oracles in tests and in the `selftest` command.

pub mod campbell;
pub mod quad;
pub mod stats;

/// E₁(x) for x > 0 by quadrature of its defining integral.
///
/// Uses E₁(x) = e^(−x) ∫₀^∞ exp(−x(eᵛ − 1)) dv, which follows from the
/// substitution t = x·eᵛ in ∫ₓ^∞ e^(−t)/t dt and has a smooth, bounded
/// integrand for every x > 0.
pub fn e1_quadrature(x: f64) -> f64 {
    assert!(x > 0.0, "e1_quadrature needs x > 0");
    let upper = (1.0 + 750.0 / x).ln();
    let integrand = |v: f64| (-x * v.exp_m1()).exp();
    let j = quad::integrate(integrand, 0.0, upper, 0.0, 1e-14);
    (-x).exp() * j
}

/// Ei(x) for x < 0 by quadrature, Ei(x) = −E₁(−x).
pub fn ei_quadrature(x: f64) -> f64 {
    assert!(x < 0.0, "ei_quadrature needs x < 0");
    -e1_quadrature(-x)
}
