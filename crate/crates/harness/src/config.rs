//! Experiment configuration files.
//!
//! TOML with one flat table per model namespace. Every key is optional and
//! defaults to the reference-figure values; unknown keys are rejected.
//!
//! ```toml
//! [run]
//! seed = 7
//! trials = 1000
//!
//! [awgn]          # powers in W, distances in m, lambda per m²
//! tx_power = 10
//! law = "bounded" # bounded | truncated | unbounded
//!
//! [thz]           # frequency in Hz, phi in rad, K in 1/m
//! lambda = 0.1
//!
//! [surface]       # sigma_h, corr_len in m, area in m²
//! sigma_h = 0.088e-3
//!
//! [geometry]      # angles in degrees
//! theta_w_deg = 55
//! willie = "omni" # directional | omni
//!
//! [sweep]
//! name = "d_aw"
//! values = [1, 2, 4]
//! ```

use std::path::{Path, PathBuf};

use covertnet::awgn::{AwgnScenario, FieldRefresh};
use covertnet::geometry::{PathLossLaw, Point, Region};
use covertnet::scattering::{ScatterGeometry, ScatterSurface, WillieAntenna};
use covertnet::thz::ThzScenario;
use serde::{Deserialize, Serialize};

use crate::error::{ConfigDiagnostic, HarnessError, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub awgn: AwgnSection,
    #[serde(default)]
    pub thz: ThzSection,
    #[serde(default)]
    pub surface: SurfaceSection,
    #[serde(default)]
    pub geometry: GeometrySection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
    pub trials: usize,
    pub out: PathBuf,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            seed: 1,
            trials: 1000,
            out: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    Bounded,
    Truncated,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefreshKind {
    PerTrace,
    PerSample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AwgnSection {
    pub tx_power: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub d_aw: f64,
    pub d_ab: f64,
    pub noise_w: f64,
    pub noise_b: f64,
    pub n: usize,
    pub p: f64,
    pub law: LawKind,
    pub guard: f64,
    pub arena_side: f64,
    pub refresh: RefreshKind,
    /// SINR threshold ξ of the throughput comparison.
    pub xi: f64,
    pub jammer_c: f64,
    pub epsilon: f64,
    /// Code rate R in bits per channel use.
    pub rate: f64,
}

impl Default for AwgnSection {
    fn default() -> Self {
        AwgnSection {
            tx_power: 1.0,
            alpha: 4.0,
            lambda: 1.0,
            d_aw: 1.0,
            d_ab: 1.0,
            noise_w: 1.0,
            noise_b: 1.0,
            n: 500,
            p: 0.5,
            law: LawKind::Bounded,
            guard: 1.0,
            arena_side: 100.0,
            refresh: RefreshKind::PerTrace,
            xi: 1.0,
            jammer_c: 1.0,
            epsilon: 0.05,
            rate: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThzSection {
    pub frequency: f64,
    pub phi: f64,
    pub r_b: f64,
    pub horizon: f64,
    pub absorption: f64,
    pub lambda: f64,
    pub h: f64,
    pub temperature: f64,
    pub bandwidth: f64,
    pub d_ab: f64,
    pub d_aw: f64,
}

impl Default for ThzSection {
    fn default() -> Self {
        let s = ThzScenario::default();
        ThzSection {
            frequency: s.frequency,
            phi: s.phi,
            r_b: s.r_b,
            horizon: s.horizon,
            absorption: s.absorption,
            lambda: s.intensity,
            h: s.h,
            temperature: s.temperature,
            bandwidth: s.bandwidth,
            d_ab: s.d_ab,
            d_aw: s.d_aw,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurfaceSection {
    pub sigma_h: f64,
    pub corr_len: f64,
    pub area: f64,
}

impl Default for SurfaceSection {
    fn default() -> Self {
        SurfaceSection {
            sigma_h: 0.088e-3,
            corr_len: 1.8e-3,
            area: 4e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WillieKind {
    Directional,
    Omni,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    pub theta1_deg: f64,
    pub theta_b_deg: f64,
    pub theta_w_deg: f64,
    pub willie: WillieKind,
}

impl Default for GeometrySection {
    fn default() -> Self {
        GeometrySection {
            theta1_deg: 60.0,
            theta_b_deg: 60.0,
            theta_w_deg: 55.0,
            willie: WillieKind::Directional,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub name: String,
    pub values: Vec<f64>,
}

/// A validated configuration, converted into model types.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub file: ConfigFile,
    pub awgn: AwgnScenario,
    pub thz: ThzScenario,
    pub surface: ScatterSurface,
    pub geom_b: ScatterGeometry,
    pub geom_w: ScatterGeometry,
    pub willie: WillieAntenna,
}

impl ExperimentConfig {
    pub fn seed(&self) -> u64 {
        self.file.run.seed
    }

    pub fn trials(&self) -> usize {
        self.file.run.trials
    }

    pub fn sweep(&self) -> Option<&SweepSection> {
        self.file.sweep.as_ref()
    }

    /// The configuration as TOML, one `key = value` per line, for table
    /// provenance.
    pub fn provenance(&self) -> Vec<(String, String)> {
        flatten(&self.file)
    }

    /// A copy with `[section].key` set to `value`, revalidated.
    pub fn with_value(&self, section: &str, key: &str, value: f64) -> Result<ExperimentConfig> {
        let mut doc = toml::Value::try_from(&self.file).expect("config serializes");
        let table = doc
            .get_mut(section)
            .and_then(|v| v.as_table_mut())
            .ok_or_else(|| HarnessError::Usage(format!("no configuration section [{section}]")))?;
        let slot = table
            .get_mut(key)
            .ok_or_else(|| HarnessError::Usage(format!("cannot sweep `{key}`: not a key of [{section}]")))?;
        *slot = match slot {
            toml::Value::Integer(_) => {
                if value.fract() != 0.0 || value < 0.0 {
                    return Err(HarnessError::Usage(format!(
                        "`{key}` needs a nonnegative integer, got {value}"
                    )));
                }
                toml::Value::Integer(value as i64)
            }
            toml::Value::Float(_) => toml::Value::Float(value),
            _ => return Err(HarnessError::Usage(format!("cannot sweep non-numeric key `{key}`"))),
        };
        let file: ConfigFile = doc
            .try_into()
            .map_err(|e: toml::de::Error| HarnessError::Usage(e.to_string()))?;
        build(file, "", Path::new("<sweep>"))
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        build(ConfigFile::default(), "", Path::new("<defaults>")).expect("defaults are valid")
    }
}

fn flatten(file: &ConfigFile) -> Vec<(String, String)> {
    let doc = toml::Value::try_from(file).expect("config serializes");
    let mut out = Vec::new();
    if let toml::Value::Table(sections) = doc {
        for (name, section) in sections {
            if let toml::Value::Table(keys) = section {
                for (k, v) in keys {
                    out.push((format!("{name}.{k}"), v.to_string()));
                }
            }
        }
    }
    out
}

/// Reads and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(format!("reading {}", path.display()), e))?;
    parse_config_str(&text, path)
}

pub fn parse_config_str(text: &str, path: &Path) -> Result<ExperimentConfig> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| HarnessError::Config {
        path: path.to_path_buf(),
        diagnostic: ConfigDiagnostic {
            key: None,
            line: e.span().map(|s| line_of_offset(text, s.start)),
            message: e.message().trim().to_string(),
        },
    })?;
    build(file, text, path)
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line of `key` inside `[section]`, if the file sets it.
fn line_of_key(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix('[') {
            current = rest.trim_end_matches(']').trim().to_string();
            continue;
        }
        if current == section {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

fn build(file: ConfigFile, text: &str, path: &Path) -> Result<ExperimentConfig> {
    let fail = |section: &str, key: &str, message: String| HarnessError::Config {
        path: path.to_path_buf(),
        diagnostic: ConfigDiagnostic {
            key: Some(key.to_string()),
            line: line_of_key(text, section, key),
            message,
        },
    };
    let model = |section: &'static str, e: covertnet::Error| match &e {
        covertnet::Error::Parameter { name, reason } => fail(section, name, reason.clone()),
        _ => fail(section, section, e.to_string()),
    };

    if file.run.trials == 0 {
        return Err(fail("run", "trials", "must be at least 1".into()));
    }
    if let Some(sw) = &file.sweep {
        if sw.values.is_empty() {
            return Err(fail("sweep", "values", "needs at least one value".into()));
        }
        if let Some(v) = sw.values.iter().find(|v| !v.is_finite()) {
            return Err(fail("sweep", "values", format!("values must be finite, got {v}")));
        }
    }

    let a = &file.awgn;
    for (key, v) in [("xi", a.xi), ("jammer_c", a.jammer_c), ("epsilon", a.epsilon)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(fail("awgn", key, format!("must be positive, got {v}")));
        }
    }
    if a.rate.is_nan() || a.rate < 0.0 {
        return Err(fail("awgn", "rate", format!("must be nonnegative, got {}", a.rate)));
    }
    let law = match a.law {
        LawKind::Bounded => PathLossLaw::bounded(a.alpha),
        LawKind::Truncated => PathLossLaw::truncated(a.alpha, a.guard),
        LawKind::Unbounded => PathLossLaw::unbounded(a.alpha),
    }
    .map_err(|e| model("awgn", e))?;
    let arena = Region::square(Point::ORIGIN, a.arena_side)
        .map_err(|_| fail("awgn", "arena_side", format!("must be positive, got {}", a.arena_side)))?;
    let awgn = AwgnScenario {
        tx_power: a.tx_power,
        alpha: a.alpha,
        intensity: a.lambda,
        d_aw: a.d_aw,
        d_ab: a.d_ab,
        noise_w: a.noise_w,
        noise_b: a.noise_b,
        n: a.n,
        p: a.p,
        law,
        arena,
        refresh: match a.refresh {
            RefreshKind::PerTrace => FieldRefresh::PerTrace,
            RefreshKind::PerSample => FieldRefresh::PerSample,
        },
    };
    awgn.validate().map_err(|e| model("awgn", e))?;

    let t = &file.thz;
    let thz = ThzScenario {
        frequency: t.frequency,
        phi: t.phi,
        r_b: t.r_b,
        horizon: t.horizon,
        absorption: t.absorption,
        intensity: t.lambda,
        h: t.h,
        temperature: t.temperature,
        bandwidth: t.bandwidth,
        d_ab: t.d_ab,
        d_aw: t.d_aw,
    };
    thz.validate().map_err(|e| model("thz", e))?;

    let sf = &file.surface;
    let surface = ScatterSurface::new(sf.sigma_h, sf.corr_len, sf.area).map_err(|e| model("surface", e))?;

    let g = &file.geometry;
    let geom_b = ScatterGeometry::in_plane_degrees(g.theta1_deg, g.theta_b_deg);
    let geom_w = ScatterGeometry::in_plane_degrees(g.theta1_deg, g.theta_w_deg);
    for (key, geom) in [("theta_b_deg", geom_b), ("theta_w_deg", geom_w)] {
        if let Err(covertnet::Error::Parameter { name, reason }) = geom.validate() {
            let key = if name == "theta1" { "theta1_deg" } else { key };
            return Err(fail("geometry", key, reason.replace("π/2", "90°")));
        }
    }
    let willie = match g.willie {
        WillieKind::Directional => WillieAntenna::Directional(thz.phi),
        WillieKind::Omni => WillieAntenna::Omni,
    };

    Ok(ExperimentConfig {
        file,
        awgn,
        thz,
        surface,
        geom_b,
        geom_w,
        willie,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        parse_config_str(text, Path::new("test.toml"))
    }

    fn diagnostic(r: Result<ExperimentConfig>) -> ConfigDiagnostic {
        match r {
            Err(HarnessError::Config { diagnostic, .. }) => diagnostic,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_gives_defaults() {
        let c = parse("").unwrap();
        assert_eq!(c.awgn.tx_power, 1.0);
        assert_eq!(c.awgn.alpha, 4.0);
        assert_eq!(c.awgn.noise_w, 1.0);
        assert_eq!(c.awgn.law, PathLossLaw::Bounded { alpha: 4.0 });
        assert_eq!(c.awgn.arena.area(), 1e4);
        assert_eq!(c.thz, ThzScenario::default());
        assert_eq!(c.seed(), 1);
    }

    #[test]
    fn minimal_awgn_config() {
        let c = parse("[awgn]\nd_aw = 2\nrefresh = \"per_sample\"\n").unwrap();
        assert_eq!(c.awgn.d_aw, 2.0);
        assert_eq!(c.awgn.refresh, FieldRefresh::PerSample);
        assert_eq!(c.awgn.tx_power, 1.0);
    }

    #[test]
    fn negative_density_names_lambda() {
        let d = diagnostic(parse("[run]\nseed = 3\n\n[awgn]\nlambda = -1\n"));
        assert_eq!(d.key.as_deref(), Some("lambda"));
        assert_eq!(d.line, Some(5));
    }

    #[test]
    fn duplicate_key_is_a_parse_error() {
        let d = diagnostic(parse("[awgn]\nd_aw = 1\nd_aw = 2\n"));
        assert_eq!(d.line, Some(3));
        assert!(d.message.contains("duplicate"), "{}", d.message);
    }

    #[test]
    fn unknown_keys_rejected() {
        let d = diagnostic(parse("[thz]\nlamda = 0.1\n"));
        assert!(d.message.contains("lamda"), "{}", d.message);
        assert_eq!(d.line, Some(2));
        assert!(matches!(parse("[bogus]\nx = 1\n"), Err(HarnessError::Config { .. })));
    }

    #[test]
    fn invariant_violations() {
        assert_eq!(diagnostic(parse("[run]\ntrials = 0\n")).key.as_deref(), Some("trials"));
        assert_eq!(
            diagnostic(parse("[sweep]\nname = \"n\"\nvalues = []\n")).key.as_deref(),
            Some("values")
        );
        assert_eq!(
            diagnostic(parse("[thz]\nhorizon = 0.05\n")).key.as_deref(),
            Some("horizon")
        );
        assert_eq!(
            diagnostic(parse("[surface]\ncorr_len = 0\n")).key.as_deref(),
            Some("corr_len")
        );
        assert_eq!(
            diagnostic(parse("[geometry]\ntheta_w_deg = 95\n")).key.as_deref(),
            Some("theta_w_deg")
        );
        assert_eq!(diagnostic(parse("[awgn]\nalpha = 1.5\n")).key.as_deref(), Some("alpha"));
    }

    #[test]
    fn sweep_overrides_revalidate() {
        let c = parse("[awgn]\nn = 100\n").unwrap();
        assert_eq!(c.with_value("awgn", "n", 300.0).unwrap().awgn.n, 300);
        assert_eq!(c.with_value("awgn", "d_aw", 3.0).unwrap().awgn.d_aw, 3.0);
        assert!(c.with_value("awgn", "n", 1.5).is_err());
        assert!(c.with_value("awgn", "nope", 1.0).is_err());
        assert!(c.with_value("awgn", "lambda", -1.0).is_err());
    }

    #[test]
    fn provenance_lists_every_key() {
        let c = ExperimentConfig::default();
        let p = c.provenance();
        assert!(p.iter().any(|(k, v)| k == "awgn.lambda" && v == "1.0"));
        assert!(p.iter().any(|(k, _)| k == "thz.frequency"));
        assert!(p.iter().any(|(k, v)| k == "geometry.willie" && v == "\"directional\""));
    }
}
