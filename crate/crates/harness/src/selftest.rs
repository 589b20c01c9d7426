//! Cross-checks of the model kernels against the independent oracles.

use covertnet::geometry::{Marks, PathLossLaw, Point, Region};
use covertnet::scattering::{kirchhoff_gain, ScatterGeometry, ScatterSurface};
use covertnet::shot_noise::{campbell_mean, campbell_var, interference_samples, ShotNoiseParams};
use covertnet::special::exp_integral_e1;
use covertnet::thz::{blocking_prob, thz_interference_stats, ReceiverView, ThzScenario};
use covertnet_oracle::{campbell, e1_quadrature, stats};

use crate::error::{HarnessError, Result};
use crate::table::ResultTable;

/// One comparison: `value` must lie within `tolerance` of `reference`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn abs_err(&self) -> f64 {
        (self.value - self.reference).abs()
    }

    pub fn passed(&self) -> bool {
        self.abs_err() <= self.tolerance
    }
}

fn rel(name: impl Into<String>, value: f64, reference: f64, rel_tol: f64) -> Check {
    Check {
        name: name.into(),
        value,
        reference,
        tolerance: rel_tol * reference.abs(),
    }
}

pub fn checks(seed: u64, trials: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    for x in [0.01, 0.5, 1.0, 5.0, 30.0] {
        out.push(rel(
            format!("E1({x}) vs quadrature"),
            exp_integral_e1(x)?,
            e1_quadrature(x),
            1e-10,
        ));
    }

    let p = ShotNoiseParams::planar(0.7, 4.0, 1.0, 1.0);
    let decades = [1.0, 10.0, 100.0, 1e3, 1e4, 1e5];
    let mean_q = campbell::annulus_with_breaks(p.intensity, |r| r.powi(-4), &decades);
    let var_q = campbell::annulus_with_breaks(p.intensity, |r| 2.0 * r.powi(-8), &decades);
    out.push(rel(
        "guard-zone interference mean vs quadrature",
        campbell_mean(&p)?,
        mean_q,
        1e-6,
    ));
    out.push(rel(
        "guard-zone interference variance vs quadrature",
        campbell_var(&p)?,
        var_q,
        1e-6,
    ));

    let s = ThzScenario::default();
    let view = ReceiverView::unit(&s)?;
    let stats_thz = thz_interference_stats(&s, &view)?;
    let k = s.absorption;
    let density = |r: f64| s.intensity * view.coverage * (1.0 - blocking_prob(r, s.intensity, s.r_b).unwrap_or(1.0));
    let breaks = [s.r_b, 1.0, s.horizon];
    let m_q = campbell::annulus_with_breaks(1.0, |r| density(r) * (-k * r).exp() / (r * r), &breaks);
    let v_q = campbell::annulus_with_breaks(1.0, |r| density(r) * (-2.0 * k * r).exp() / r.powi(4), &breaks);
    out.push(rel("THz interference mean vs quadrature", stats_thz.mean, m_q, 1e-6));
    out.push(rel(
        "THz interference variance vs quadrature",
        stats_thz.variance,
        v_q,
        1e-6,
    ));

    let smooth = ScatterSurface::new(0.0, 1e-3, 4e-4)?;
    out.push(rel(
        "smooth-surface specular gain",
        kirchhoff_gain(500e9, &smooth, &ScatterGeometry::in_plane_degrees(45.0, 45.0))?,
        1.0,
        1e-12,
    ));

    let law = PathLossLaw::bounded(4.0)?;
    let arena = Region::square(Point::ORIGIN, 20.0)?;
    let mc_samples = interference_samples(&arena, 1.0, &law, Marks::default(), Point::ORIGIN, trials, seed, 0x5e1f)?;
    let (m, se) = stats::mean_and_se(&mc_samples);
    let reference = campbell::centred_square(1.0, |r| law.gain(r).unwrap_or(0.0), 20.0, &[1.0]);
    out.push(Check {
        name: format!("Monte Carlo interference mean ({trials} fields, 5 SE)"),
        value: m,
        reference,
        tolerance: 5.0 * se,
    });
    Ok(out)
}

/// Runs every check; fails with [`HarnessError::SelfTest`] naming the
/// failures, otherwise returns the result table.
pub fn run_selftest(seed: u64, trials: usize) -> Result<ResultTable> {
    if trials < 2 {
        return Err(HarnessError::Usage("selftest needs at least 2 trials".into()));
    }
    let checks = checks(seed, trials)?;
    let mut t = ResultTable::new(
        "selftest",
        seed,
        &["check", "value", "reference", "abs_err", "tolerance", "pass"],
    );
    t.param("trials", trials);
    for (i, c) in checks.iter().enumerate() {
        t.note(format!("check {i}: {}", c.name));
        t.push(vec![
            i as f64,
            c.value,
            c.reference,
            c.abs_err(),
            c.tolerance,
            f64::from(u8::from(c.passed())),
        ]);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(t)
    } else {
        Err(HarnessError::SelfTest(failed.join("; ")))
    }
}
