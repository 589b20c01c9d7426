//! Configuration-driven subcommands. Each evaluates one model over a sweep
//! of a single configuration key and returns a [`ResultTable`] whose header
//! records the full configuration.

use covertnet::awgn::{
    bob_error_upper_bound, covert_bits, covert_distance, spatial_throughput, willie_error_empirical,
    willie_error_lower_bound, Scheme, ThresholdRule,
};
use covertnet::scattering::{evaluate_scenario, SecrecyOptions};
use covertnet::shot_noise::Dimension;
use covertnet::thz::{thz_interference_moments, thz_interference_stats, variance_as_printed, ReceiverView};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::table::ResultTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    AwgnBound,
    AwgnDetect,
    AwgnThroughput,
    ThzInterference,
    ThzSecrecy,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::AwgnBound => "awgn-bound",
            Command::AwgnDetect => "awgn-detect",
            Command::AwgnThroughput => "awgn-throughput",
            Command::ThzInterference => "thz-interference",
            Command::ThzSecrecy => "thz-secrecy",
        }
    }

    /// Swept key and values used when the configuration has no `[sweep]`.
    pub fn default_sweep(self) -> (&'static str, Vec<f64>) {
        match self {
            Command::AwgnBound => ("awgn.d_aw", (1..=16).map(|k| 0.25 * k as f64).collect()),
            Command::AwgnDetect => ("awgn.d_aw", vec![0.5, 1.0, 2.0, 4.0]),
            Command::AwgnThroughput => ("awgn.lambda", vec![0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0]),
            Command::ThzInterference => ("thz.lambda", vec![0.001, 0.01, 0.1]),
            Command::ThzSecrecy => ("geometry.theta_w_deg", (50..=60).map(f64::from).collect()),
        }
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            Command::AwgnBound => &[
                "willie_error_lower",
                "covert_distance",
                "bob_error_upper",
                "covert_bits",
            ],
            Command::AwgnDetect => &["p_fa", "p_md", "p_e", "threshold", "willie_error_lower"],
            Command::AwgnThroughput => &["jammer", "interference"],
            Command::ThzInterference => &[
                "mean",
                "variance",
                "variance_as_printed",
                "mc_mean",
                "mc_mean_se",
                "mc_variance",
                "mc_variance_se",
            ],
            Command::ThzSecrecy => &["gain_b", "gain_w", "sinr_b", "sinr_w", "cs"],
        }
    }

    fn tag(self) -> u32 {
        0x0c00 + self as u32
    }
}

pub fn run_command(cmd: Command, cfg: &ExperimentConfig) -> Result<ResultTable> {
    let (key, values) = match cfg.sweep() {
        Some(sw) => (sw.name.clone(), sw.values.clone()),
        None => {
            let (k, v) = cmd.default_sweep();
            (k.to_string(), v)
        }
    };
    let (section, field) = key
        .split_once('.')
        .ok_or_else(|| HarnessError::Usage(format!("sweep name `{key}` must look like section.key")))?;
    let mut cols = vec![key.as_str()];
    cols.extend(cmd.columns());
    let mut t = ResultTable::new(cmd.name(), cfg.seed(), &cols);
    for (k, v) in cfg.provenance() {
        t.param(&k, v);
    }
    if cfg.sweep().is_none() {
        t.note(format!("default sweep over {key}"));
    }
    for v in values {
        let point = cfg.with_value(section, field, v)?;
        let mut row = vec![v];
        row.extend(evaluate(cmd, &point)?);
        t.push(row);
    }
    Ok(t)
}

fn evaluate(cmd: Command, cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    let a = &cfg.awgn;
    let extra = &cfg.file.awgn;
    let n = a.n as f64;
    Ok(match cmd {
        Command::AwgnBound => vec![
            willie_error_lower_bound(n, a.d_aw, a.alpha, a.intensity, Dimension::Two)?,
            covert_distance(n, a.alpha, a.intensity, Dimension::Two, extra.epsilon)?,
            bob_error_upper_bound(n, extra.rate, a.intensity, a.alpha)?,
            covert_bits(n, a.intensity, extra.epsilon, a.alpha)?,
        ],
        Command::AwgnDetect => {
            let o = willie_error_empirical(a, cfg.trials(), ThresholdRule::BestOnGrid, cfg.seed(), cmd.tag())?;
            let bound = willie_error_lower_bound(n, a.d_aw, a.alpha, a.intensity, Dimension::Two)?;
            vec![o.p_fa, o.p_md, o.p_e, o.threshold, bound]
        }
        Command::AwgnThroughput => {
            let jam = Scheme::Jammer { c: extra.jammer_c };
            vec![
                spatial_throughput(jam, a.intensity, extra.xi, a.d_ab, a.alpha, n)?,
                spatial_throughput(Scheme::Interference, a.intensity, extra.xi, a.d_ab, a.alpha, n)?,
            ]
        }
        Command::ThzInterference => {
            let view = ReceiverView::directional(&cfg.thz)?;
            let exact = thz_interference_stats(&cfg.thz, &view)?;
            let mc = thz_interference_moments(&cfg.thz, &view, cfg.trials().max(2), cfg.seed(), cmd.tag())?;
            vec![
                exact.mean,
                exact.variance,
                variance_as_printed(&cfg.thz, &view)?,
                mc.mean,
                mc.mean_se,
                mc.variance,
                mc.variance_se,
            ]
        }
        Command::ThzSecrecy => {
            let r = evaluate_scenario(
                &cfg.thz,
                &cfg.surface,
                &cfg.geom_b,
                &cfg.geom_w,
                cfg.willie,
                SecrecyOptions::default(),
            )?;
            vec![r.gain_b, r.gain_w, r.sinr_b, r.sinr_w, r.cs]
        }
    })
}
