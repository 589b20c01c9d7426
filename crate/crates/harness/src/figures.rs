//! Built-in figure manifests.
//!
//! Each figure pins its reference parameters; values left open
//! are listed as `# note:` lines in the CSV. Monte Carlo figures draw trial
//! `i` from the stream (seed, tag, i), so output does not depend on the
//! worker count.

use std::path::{Path, PathBuf};

use covertnet::awgn::{iqr_dispersion_sweep, AwgnScenario, DispersionCell, FieldRefresh, Mode, RadiometerDraws};
use covertnet::geometry::Marks;
use covertnet::mc::{self, run_trials};
use covertnet::scattering::{
    evaluate_scenario, kirchhoff_gain, ScatterGeometry, ScatterSurface, SecrecyOptions, WillieAntenna,
};
use covertnet::shot_noise::interference_streamed;
use covertnet::thz::ThzScenario;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{HarnessError, Result};
use crate::plot::{box_chart, line_chart, series_from, BoxStats};
use crate::table::ResultTable;

pub const FIGURE_IDS: [u32; 12] = [3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14];

const MM: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub id: u32,
    pub table: ResultTable,
    pub svg: String,
}

impl Figure {
    pub fn stem(&self) -> String {
        format!("fig{}", self.id)
    }
}

/// Runs figure `id`. `trials` overrides the number of Monte Carlo runs of
/// figures 6–8.
pub fn run_figure(id: u32, seed: u64, trials: Option<usize>) -> Result<Figure> {
    let (table, svg) = match id {
        3 => fig3(seed)?,
        4 => fig4(seed)?,
        5 => fig5(seed)?,
        6 => fig6(seed, trials.unwrap_or(100))?,
        7 => fig7(seed, trials.unwrap_or(100))?,
        8 => fig8(seed, trials.unwrap_or(FIG8_RUNS))?,
        9..=14 => secrecy_figure(id, seed)?,
        _ => {
            return Err(HarnessError::Usage(format!(
                "unknown figure {id}; supported: {}",
                FIGURE_IDS.map(|i| i.to_string()).join(", ")
            )))
        }
    };
    Ok(Figure { id, table, svg })
}

/// Writes `figN.csv` and `figN.svg` into `out_dir`.
pub fn write_figure(fig: &Figure, out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(format!("creating {}", out_dir.display()), e))?;
    let csv = out_dir.join(format!("{}.csv", fig.stem()));
    let svg = out_dir.join(format!("{}.svg", fig.stem()));
    std::fs::write(&csv, fig.table.to_csv()).map_err(|e| HarnessError::io(format!("writing {}", csv.display()), e))?;
    std::fs::write(&svg, &fig.svg).map_err(|e| HarnessError::io(format!("writing {}", svg.display()), e))?;
    Ok((csv, svg))
}

fn tag(id: u32, k: u32) -> u32 {
    id * 64 + k
}

fn fig3(seed: u64) -> Result<(ResultTable, String)> {
    let f = 500e9;
    let surface = ScatterSurface::new(0.01 * MM, 0.1 * MM, 4e-4)?;
    let mut t = ResultTable::new("fig3", seed, &["theta1_deg", "theta2_deg", "gain", "gain_db"]);
    t.param("frequency_hz", f)
        .param("sigma_h_m", surface.sigma_h)
        .param("corr_len_m", surface.corr_len)
        .param("area_m2", surface.area)
        .param("theta3_deg", 0)
        .note("angles run 0..89 deg in 1 deg steps; 90 deg (grazing) is outside the model's domain");
    for t1 in 0..90 {
        for t2 in 0..90 {
            let g = kirchhoff_gain(f, &surface, &ScatterGeometry::in_plane_degrees(t1 as f64, t2 as f64))?;
            t.push(vec![t1 as f64, t2 as f64, g, 10.0 * g.log10()]);
        }
    }
    let mut shown = ResultTable::new("fig3", seed, &["theta1_deg", "theta2_deg", "gain_db"]);
    for r in t.rows().iter().filter(|r| [20.0, 40.0, 60.0, 80.0].contains(&r[0])) {
        shown.push(vec![r[0], r[1], r[3].max(-120.0)]);
    }
    let svg = line_chart(
        "Kirchhoff path gain at 500 GHz",
        "scattering angle theta2 (deg)",
        "gain (dB)",
        &series_from(&shown, "theta2_deg", "gain_db", &["theta1_deg"]),
    );
    Ok((t, svg))
}

fn awgn_base(tx_power: f64, n: usize) -> AwgnScenario {
    AwgnScenario {
        tx_power,
        n,
        refresh: FieldRefresh::PerSample,
        ..AwgnScenario::default()
    }
}

fn describe_awgn(t: &mut ResultTable, s: &AwgnScenario) {
    t.param("tx_power_w", s.tx_power)
        .param("alpha", s.alpha)
        .param("lambda_per_m2", s.intensity)
        .param("noise_w", s.noise_w)
        .param("law", "bounded min{1, r^-alpha}")
        .param("arena", "100 m x 100 m square, Willie at the centre")
        .param("fading", "Rayleigh, Psi ~ Exp(1)")
        .param(
            "field_refresh",
            match s.refresh {
                FieldRefresh::PerSample => "new interferer field for every sample",
                FieldRefresh::PerTrace => "one interferer field per trace",
            },
        );
}

fn fig4(seed: u64) -> Result<(ResultTable, String)> {
    let s = AwgnScenario::default();
    let mut t = ResultTable::new("fig4", seed, &["index", "noise", "interference"]);
    describe_awgn(&mut t, &s);
    t.param("realizations", 1000)
        .note("noise column is a N(0, 1) sample; interference is the aggregate power");
    let willie = s.arena.center();
    let rows = run_trials(seed, tag(4, 0), 1000, |_, rng| -> covertnet::Result<(f64, f64)> {
        let noise: f64 = StandardNormal.sample(rng);
        let i = interference_streamed(&s.arena, s.intensity, &s.law, Marks::default(), &willie, rng)?;
        Ok((noise, i))
    });
    for (k, r) in rows.into_iter().enumerate() {
        let (noise, i) = r?;
        t.push(vec![(k + 1) as f64, noise, i]);
    }
    let svg = line_chart(
        "Noise and aggregate interference realizations",
        "realization",
        "value",
        &[
            series_from(&t, "index", "interference", &[]),
            series_from(&t, "index", "noise", &[]),
        ]
        .concat(),
    );
    Ok((t, svg))
}

const MODES: [Mode; 3] = [Mode::Silent, Mode::Alternating(0.5), Mode::Transmitting];

fn fig5(seed: u64) -> Result<(ResultTable, String)> {
    let s = awgn_base(1.0, 100);
    let mut t = ResultTable::new(
        "fig5",
        seed,
        &[
            "index",
            "silent",
            "alternating",
            "transmitting",
            "t_silent",
            "t_alternating",
            "t_transmitting",
        ],
    );
    describe_awgn(&mut t, &s);
    t.param("d_aw_m", s.d_aw).param("n", s.n).param("p", 0.5);
    t.note("the three schedules replay the same noise, field and fading draws");
    let draws = run_trials(seed, tag(5, 0), 1, |_, rng| RadiometerDraws::sample(&s, rng))
        .pop()
        .expect("one trial")?;
    let traces = MODES.map(|m| draws.trace(&s, m));
    let [a, b, c] = traces;
    let (a, b, c) = (a?, b?, c?);
    for i in 0..s.n {
        t.push(vec![
            (i + 1) as f64,
            a.energies[i],
            b.energies[i],
            c.energies[i],
            a.statistic,
            b.statistic,
            c.statistic,
        ]);
    }
    let series = ["silent", "alternating", "transmitting"]
        .iter()
        .flat_map(|c| series_from(&t, "index", c, &[]))
        .collect::<Vec<_>>();
    let svg = line_chart("Willie's samples y_i^2", "sample", "energy", &series);
    Ok((t, svg))
}

/// Draws shared by every sweep point of a radiometer figure.
fn radiometer_runs(s: &AwgnScenario, runs: usize, seed: u64, tag: u32) -> Result<Vec<RadiometerDraws>> {
    if runs == 0 {
        return Err(HarnessError::Usage("trials must be at least 1".into()));
    }
    Ok(run_trials(seed, tag, runs, |_, rng| RadiometerDraws::sample(s, rng))
        .into_iter()
        .collect::<covertnet::Result<_>>()?)
}

fn mean_statistics(draws: &[RadiometerDraws], s: &AwgnScenario) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(MODES.len());
    for m in MODES {
        let ts = draws
            .iter()
            .map(|d| d.statistic(s, m))
            .collect::<covertnet::Result<Vec<f64>>>()?;
        out.push(mc::mean(&ts));
    }
    Ok(out)
}

fn fig6(seed: u64, runs: usize) -> Result<(ResultTable, String)> {
    let s = awgn_base(1.0, 500);
    let mut t = ResultTable::new("fig6", seed, &["tx_power", "silent", "alternating", "transmitting"]);
    describe_awgn(&mut t, &s);
    t.param("d_aw_m", s.d_aw)
        .param("n", s.n)
        .param("p", 0.5)
        .param("runs", runs);
    t.param("tx_power_sweep_w", "1..10 step 1");
    t.note("T(y) averaged over runs; every power replays the same draws");
    let draws = radiometer_runs(&s, runs, seed, tag(6, 0))?;
    for pt in 1..=10 {
        let sp = AwgnScenario {
            tx_power: pt as f64,
            ..s
        };
        let mut row = vec![pt as f64];
        row.extend(mean_statistics(&draws, &sp)?);
        t.push(row);
    }
    let series = ["silent", "alternating", "transmitting"]
        .iter()
        .flat_map(|c| series_from(&t, "tx_power", c, &[]))
        .collect::<Vec<_>>();
    let svg = line_chart("T(y) versus transmit power", "P_t (W)", "mean T(y)", &series);
    Ok((t, svg))
}

fn fig7(seed: u64, runs: usize) -> Result<(ResultTable, String)> {
    let s = awgn_base(10.0, 500);
    let mut t = ResultTable::new("fig7", seed, &["d_aw", "silent", "alternating", "transmitting"]);
    describe_awgn(&mut t, &s);
    t.param("n", s.n).param("p", 0.5).param("runs", runs);
    t.param("d_aw_sweep_m", "0.25..4 step 0.25");
    t.note("T(y) averaged over runs; every distance replays the same draws");
    let draws = radiometer_runs(&s, runs, seed, tag(7, 0))?;
    for k in 1..=16 {
        let d = 0.25 * k as f64;
        let sd = AwgnScenario { d_aw: d, ..s };
        let mut row = vec![d];
        row.extend(mean_statistics(&draws, &sd)?);
        t.push(row);
    }
    let series = ["silent", "alternating", "transmitting"]
        .iter()
        .flat_map(|c| series_from(&t, "d_aw", c, &[]))
        .collect::<Vec<_>>();
    let svg = line_chart("T(y) versus Alice-Willie distance", "d_aw (m)", "mean T(y)", &series);
    Ok((t, svg))
}

pub const FIG8_RUNS: usize = 20;
pub const FIG8_N: [usize; 2] = [1000, 3000];
pub const FIG8_D: [f64; 8] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
/// Transmit power of the dispersion figure. No reference value exists, so the
/// neighbouring distance sweep's value is reused.
pub const FIG8_TX_POWER: f64 = 10.0;

/// The dispersion cells behind figure 8, ordered by n, d_aw, then mode
/// (silent, alternating, transmitting).
pub fn fig8_cells(seed: u64, runs: usize) -> Result<Vec<DispersionCell>> {
    let s = awgn_base(FIG8_TX_POWER, FIG8_N[0]);
    Ok(iqr_dispersion_sweep(
        &s,
        &FIG8_N,
        &FIG8_D,
        &MODES,
        runs,
        seed,
        tag(8, 0),
    )?)
}

fn fig8(seed: u64, runs: usize) -> Result<(ResultTable, String)> {
    let s = awgn_base(FIG8_TX_POWER, FIG8_N[0]);
    let mut t = ResultTable::new(
        "fig8",
        seed,
        &["n", "d_aw", "duty", "mean", "min", "q1", "median", "q3", "max"],
    );
    describe_awgn(&mut t, &s);
    t.param("p", 0.5).param("runs", runs).param("n_values", "1000, 3000");
    t.param("d_aw_values_m", FIG8_D.map(|d| d.to_string()).join(", "));
    t.note("tx_power = 10 W is assumed (not given for this figure)");
    t.note("duty 0 = silent, 0.5 = alternating, 1 = transmitting; quartiles are type-7");
    let cells = fig8_cells(seed, runs)?;
    let mut groups: Vec<(String, Vec<BoxStats>)> = Vec::new();
    for c in &cells {
        t.push(vec![
            c.n as f64,
            c.d_aw,
            c.mode.duty(),
            c.mean,
            c.min,
            c.q1,
            c.median,
            c.q3,
            c.max,
        ]);
        let label = format!("n = {}, {}", c.n, c.mode.label());
        let b = BoxStats {
            x: c.d_aw,
            min: c.min,
            q1: c.q1,
            median: c.median,
            q3: c.q3,
            max: c.max,
        };
        match groups.iter_mut().find(|g| g.0 == label) {
            Some(g) => g.1.push(b),
            None => groups.push((label, vec![b])),
        }
    }
    let svg = box_chart("Dispersion of T(y)", "d_aw (m)", "T(y)", &groups);
    Ok((t, svg))
}

/// One evaluated point of a secrecy sweep.
struct SecrecyCase {
    keys: Vec<f64>,
    scenario: ThzScenario,
    surface: ScatterSurface,
    geom_b: ScatterGeometry,
    geom_w: ScatterGeometry,
    willie: WillieAntenna,
}

fn surface(sigma_h_mm: f64) -> Result<ScatterSurface> {
    Ok(ScatterSurface::new(sigma_h_mm * MM, 1.8 * MM, 4e-4)?)
}

fn thz(frequency: f64, intensity: f64) -> ThzScenario {
    ThzScenario {
        frequency,
        intensity,
        ..ThzScenario::default()
    }
}

fn in_plane(theta1: f64, theta_b: f64, theta_w: f64) -> (ScatterGeometry, ScatterGeometry) {
    (
        ScatterGeometry::in_plane_degrees(theta1, theta_b),
        ScatterGeometry::in_plane_degrees(theta1, theta_w),
    )
}

const SIGMAS_MM: [f64; 3] = [0.03, 0.058, 0.088];

fn secrecy_cases(id: u32) -> Result<(Vec<&'static str>, Vec<SecrecyCase>, Vec<String>)> {
    let mut cases = Vec::new();
    let mut notes = Vec::new();
    let dir = |s: &ThzScenario| WillieAntenna::Directional(s.phi);
    let theta_w_sweep = || (50..=60).map(f64::from);
    let keys = match id {
        9 => {
            for lam in [0.0, 0.001, 0.01, 0.1] {
                for tw in theta_w_sweep() {
                    let s = thz(500e9, lam);
                    let (geom_b, geom_w) = in_plane(60.0, 60.0, tw);
                    cases.push(SecrecyCase {
                        keys: vec![lam, tw],
                        scenario: s,
                        surface: surface(0.088)?,
                        geom_b,
                        geom_w,
                        willie: dir(&s),
                    });
                }
            }
            vec!["lambda", "theta_w_deg"]
        }
        10 => {
            for f in [0.3e12, 0.5e12, 0.8e12, 1.0e12] {
                for tw in theta_w_sweep() {
                    let s = thz(f, 0.01);
                    let (geom_b, geom_w) = in_plane(60.0, 60.0, tw);
                    cases.push(SecrecyCase {
                        keys: vec![f, tw],
                        scenario: s,
                        surface: surface(0.058)?,
                        geom_b,
                        geom_w,
                        willie: dir(&s),
                    });
                }
            }
            vec!["frequency_hz", "theta_w_deg"]
        }
        11 => {
            for sh in SIGMAS_MM {
                for tw in theta_w_sweep() {
                    let s = thz(500e9, 0.01);
                    let (geom_b, geom_w) = in_plane(60.0, 60.0, tw);
                    cases.push(SecrecyCase {
                        keys: vec![sh * MM, tw],
                        scenario: s,
                        surface: surface(sh)?,
                        geom_b,
                        geom_w,
                        willie: dir(&s),
                    });
                }
            }
            vec!["sigma_h", "theta_w_deg"]
        }
        12 => {
            notes.push("sigma_h values assumed (same set as fig11)".to_string());
            for sh in SIGMAS_MM {
                for tw in [52.0, 55.0] {
                    for tb in (55..=60).map(f64::from) {
                        let s = thz(500e9, 0.01);
                        let (geom_b, geom_w) = in_plane(60.0, tb, tw);
                        cases.push(SecrecyCase {
                            keys: vec![sh * MM, tw, tb],
                            scenario: s,
                            surface: surface(sh)?,
                            geom_b,
                            geom_w,
                            willie: dir(&s),
                        });
                    }
                }
            }
            vec!["sigma_h", "theta_w_deg", "theta_b_deg"]
        }
        13 => {
            notes.push("sigma_h values assumed (same set as fig11); theta1 in 1 deg steps".to_string());
            for sh in SIGMAS_MM {
                for t1 in (20..=80).map(f64::from) {
                    let s = thz(500e9, 0.01);
                    let (geom_b, geom_w) = in_plane(t1, t1, t1 - 5.0);
                    cases.push(SecrecyCase {
                        keys: vec![sh * MM, t1],
                        scenario: s,
                        surface: surface(sh)?,
                        geom_b,
                        geom_w,
                        willie: dir(&s),
                    });
                }
            }
            vec!["sigma_h", "theta1_deg"]
        }
        14 => {
            for omni in [0.0, 1.0] {
                for tw in theta_w_sweep() {
                    let s = thz(800e9, 0.01);
                    let (geom_b, geom_w) = in_plane(60.0, 60.0, tw);
                    let willie = if omni == 1.0 { WillieAntenna::Omni } else { dir(&s) };
                    cases.push(SecrecyCase {
                        keys: vec![omni, tw],
                        scenario: s,
                        surface: surface(0.058)?,
                        geom_b,
                        geom_w,
                        willie,
                    });
                }
            }
            vec!["willie_omni", "theta_w_deg"]
        }
        _ => unreachable!("secrecy figures are 9..=14"),
    };
    Ok((keys, cases, notes))
}

/// The table of a secrecy figure (9–14) without its plot.
pub fn secrecy_table(id: u32, seed: u64) -> Result<ResultTable> {
    let (keys, cases, notes) = secrecy_cases(id)?;
    let mut cols = keys.clone();
    cols.extend(["gain_b", "gain_w", "sinr_b", "sinr_w", "cs"]);
    let mut t = ResultTable::new(format!("fig{id}"), seed, &cols);
    let base = ThzScenario::default();
    t.param("phi_rad", base.phi)
        .param("r_b_m", base.r_b)
        .param("horizon_m", base.horizon)
        .param("absorption_per_m", base.absorption)
        .param("h", base.h)
        .param("temperature_k", base.temperature)
        .param("noise_bandwidth_hz", base.bandwidth)
        .param("d_ab_m", base.d_ab)
        .param("d_aw_m", base.d_aw)
        .param("corr_len_m", 1.8 * MM)
        .param("area_m2", 4e-4)
        .param(
            "secrecy_convention",
            "[ln(1+SINR_B) - ln(SINR_W)] / ln(1+SINR_B), unclamped",
        );
    let fixed: &[(&str, String)] = &match id {
        9 => vec![
            ("frequency_hz", "5e11".into()),
            ("sigma_h_m", "8.8e-5".into()),
            ("theta1_deg", "60".into()),
            ("theta_b_deg", "60".into()),
        ],
        10 => vec![
            ("lambda", "0.01".into()),
            ("sigma_h_m", "5.8e-5".into()),
            ("theta1_deg", "60".into()),
            ("theta_b_deg", "60".into()),
        ],
        11 => vec![
            ("frequency_hz", "5e11".into()),
            ("lambda", "0.01".into()),
            ("theta1_deg", "60".into()),
            ("theta_b_deg", "60".into()),
        ],
        12 => vec![
            ("frequency_hz", "5e11".into()),
            ("lambda", "0.01".into()),
            ("theta1_deg", "60".into()),
        ],
        13 => vec![
            ("frequency_hz", "5e11".into()),
            ("lambda", "0.01".into()),
            ("theta_b", "theta1".into()),
            ("theta_w", "theta1 - 5 deg".into()),
        ],
        _ => vec![
            ("frequency_hz", "8e11".into()),
            ("lambda", "0.01".into()),
            ("sigma_h_m", "5.8e-5".into()),
            ("theta1_deg", "60".into()),
            ("theta_b_deg", "60".into()),
        ],
    };
    for (k, v) in fixed {
        t.param(k, v);
    }
    t.note("d_aw = 5 m is assumed; directional Willie uses the network beamwidth");
    for n in notes {
        t.note(n);
    }
    for c in cases {
        let r = evaluate_scenario(
            &c.scenario,
            &c.surface,
            &c.geom_b,
            &c.geom_w,
            c.willie,
            SecrecyOptions::default(),
        )?;
        let mut row = c.keys;
        row.extend([r.gain_b, r.gain_w, r.sinr_b, r.sinr_w, r.cs]);
        t.push(row);
    }
    Ok(t)
}

fn secrecy_figure(id: u32, seed: u64) -> Result<(ResultTable, String)> {
    let t = secrecy_table(id, seed)?;
    let (x, groups, x_label): (&str, &[&str], &str) = match id {
        9 => ("theta_w_deg", &["lambda"], "theta_W (deg)"),
        10 => ("theta_w_deg", &["frequency_hz"], "theta_W (deg)"),
        11 => ("theta_w_deg", &["sigma_h"], "theta_W (deg)"),
        12 => ("theta_b_deg", &["sigma_h", "theta_w_deg"], "theta_B (deg)"),
        13 => ("theta1_deg", &["sigma_h"], "theta_1 (deg)"),
        _ => ("theta_w_deg", &["willie_omni"], "theta_W (deg)"),
    };
    let svg = line_chart(
        "Normalized secrecy capacity",
        x_label,
        "c_s",
        &series_from(&t, x, "cs", groups),
    );
    Ok((t, svg))
}
