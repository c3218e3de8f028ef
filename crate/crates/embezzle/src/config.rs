//! Experiment configuration: flat `key = value` files overridden by flags of
//! the same names. Nothing is read from the environment.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{RunError, RunResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Experiment {
    #[serde(rename = "e1-vdh")]
    E1,
    #[serde(rename = "e2-nogo")]
    E2,
    #[serde(rename = "e3-lemma")]
    E3,
    #[serde(rename = "e4-car")]
    E4,
    #[serde(rename = "e5-channel")]
    E5,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [Self::E1, Self::E2, Self::E3, Self::E4, Self::E5];

    pub fn name(self) -> &'static str {
        match self {
            Self::E1 => "e1-vdh",
            Self::E2 => "e2-nogo",
            Self::E3 => "e3-lemma",
            Self::E4 => "e4-car",
            Self::E5 => "e5-channel",
        }
    }

    pub fn randomized(self) -> bool {
        matches!(self, Self::E2 | Self::E4 | Self::E5)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = RunError;

    /// Accepts `e3`, `E3` and `e3-lemma`.
    fn from_str(s: &str) -> RunResult<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|e| lower == e.name() || lower == e.name()[..2])
            .ok_or_else(|| RunError::Config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
            Self::Svg => "svg",
        }
    }
}

/// Largest sweep exponent for the van Dam-Hayden curve.
pub const MAX_K: u32 = 20;
/// Largest catalyst support the finite-dimensional sweeps accept.
pub const MAX_SUPPORT: usize = 64;
/// Largest CAR window half-width.
pub const MAX_WINDOW: i64 = 1 << 20;
/// Largest random sample count of any experiment.
pub const MAX_SAMPLES: u64 = 100_000_000;

/// Every key accepted in a config file; flags carry the same names.
pub const KEYS: [&str; 14] = [
    "experiment",
    "seed",
    "grid-step",
    "max-support",
    "window",
    "samples",
    "max-k",
    "max-weight",
    "pairs",
    "epsilon0",
    "extra-generators",
    "out",
    "format",
    "timing",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: Option<u64>,
    #[serde(rename = "grid-step")]
    pub grid_step: Option<f64>,
    #[serde(rename = "max-support")]
    pub max_support: Option<usize>,
    pub window: Option<Vec<i64>>,
    pub samples: Option<u64>,
    #[serde(rename = "max-k")]
    pub max_k: Option<u32>,
    #[serde(rename = "max-weight")]
    pub max_weight: Option<usize>,
    pub pairs: Option<u64>,
    pub epsilon0: Option<f64>,
    #[serde(rename = "extra-generators")]
    pub extra_generators: Option<PathBuf>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub formats: Vec<Format>,
    #[serde(skip)]
    pub timing: bool,
}

fn parse<T: FromStr>(key: &str, value: &str) -> RunResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| RunError::Config(format!("bad value `{value}` for {key}")))
}

/// `1/12` or a decimal.
pub fn parse_fraction(key: &str, value: &str) -> RunResult<f64> {
    let v = match value.split_once('/') {
        Some((a, b)) => parse::<f64>(key, a)? / parse::<f64>(key, b)?,
        None => parse::<f64>(key, value)?,
    };
    if !v.is_finite() {
        return Err(RunError::Config(format!("bad value `{value}` for {key}")));
    }
    Ok(v)
}

fn parse_bool(key: &str, value: &str) -> RunResult<bool> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(RunError::Config(format!("bad value `{value}` for {key}"))),
    }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            seed: None,
            grid_step: None,
            max_support: None,
            window: None,
            samples: None,
            max_k: None,
            max_weight: None,
            pairs: None,
            epsilon0: None,
            extra_generators: None,
            out: None,
            formats: Vec::new(),
            timing: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> RunResult<()> {
        match key {
            "experiment" => self.experiment = value.parse()?,
            "seed" => self.seed = Some(parse(key, value)?),
            "grid-step" => self.grid_step = Some(parse_fraction(key, value)?),
            "max-support" => self.max_support = Some(parse(key, value)?),
            "window" => {
                let ws = value.split(',').map(|w| parse(key, w)).collect::<RunResult<Vec<i64>>>()?;
                self.window = Some(ws);
            }
            "samples" => self.samples = Some(parse(key, value)?),
            "max-k" => self.max_k = Some(parse(key, value)?),
            "max-weight" => self.max_weight = Some(parse(key, value)?),
            "pairs" => self.pairs = Some(parse(key, value)?),
            "epsilon0" => self.epsilon0 = Some(parse_fraction(key, value)?),
            "extra-generators" => self.extra_generators = Some(PathBuf::from(value.trim())),
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "format" => {
                self.formats = value
                    .split(',')
                    .map(|f| match f.trim() {
                        "csv" => Ok(Format::Csv),
                        "json" => Ok(Format::Json),
                        "svg" => Ok(Format::Svg),
                        other => Err(RunError::Config(format!("unknown format `{other}`"))),
                    })
                    .collect::<RunResult<_>>()?;
            }
            "timing" => self.timing = parse_bool(key, value)?,
            _ => return Err(RunError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Fills every unset numeric parameter with the experiment's default and
    /// checks ranges. Parameters beyond a module cap are reported as
    /// [`RunError::Cap`], everything else as [`RunError::Config`].
    pub fn resolve(mut self) -> RunResult<Self> {
        use Experiment::*;
        let e = self.experiment;
        if e.randomized() && self.seed.is_none() {
            return Err(RunError::Config(format!("{e} is randomized and needs a seed")));
        }
        self.epsilon0.get_or_insert(embezzle_core::chsh::DEFAULT_EPSILON0);
        match e {
            E1 => {
                self.max_k.get_or_insert(16);
            }
            E2 => {
                self.grid_step.get_or_insert(1.0 / 50.0);
                self.max_support.get_or_insert(MAX_SUPPORT);
                self.samples.get_or_insert(1000);
            }
            E3 => {
                self.grid_step.get_or_insert(1.0 / 12.0);
                self.max_support.get_or_insert(8);
            }
            E4 => {
                self.window.get_or_insert_with(|| vec![2, 4, 8]);
                self.max_weight.get_or_insert(2);
                self.samples.get_or_insert(100_000);
            }
            E5 => {
                self.max_support.get_or_insert(MAX_SUPPORT);
                self.samples.get_or_insert(10_000);
                self.pairs.get_or_insert(1000);
            }
        }
        self.check_ranges()?;
        Ok(self)
    }

    fn check_ranges(&self) -> RunResult<()> {
        let config = |m: String| Err(RunError::Config(m));
        let cap = |m: String| Err(RunError::Cap(m));
        if let Some(k) = self.max_k {
            if k > MAX_K {
                return cap(format!("max-k {k} exceeds {MAX_K}"));
            }
        }
        if let Some(s) = self.grid_step {
            if !(s > 0.0 && s <= 0.5) {
                return config(format!("grid-step {s} outside (0, 1/2]"));
            }
        }
        if let Some(d) = self.max_support {
            if d == 0 {
                return config("max-support must be at least 1".into());
            }
            let limit = if self.experiment == Experiment::E3 { embezzle_core::embezzle::LEMMA_MAX_SUPPORT } else { MAX_SUPPORT };
            if d > limit {
                return cap(format!("max-support {d} exceeds {limit}"));
            }
        }
        if let Some(ws) = &self.window {
            if ws.is_empty() {
                return config("window list is empty".into());
            }
            for &w in ws {
                if w < 1 {
                    return config(format!("window {w} must be positive"));
                }
                if w > MAX_WINDOW {
                    return cap(format!("window {w} exceeds {MAX_WINDOW}"));
                }
            }
        }
        for (name, v) in [("samples", self.samples), ("pairs", self.pairs)] {
            if v.is_some_and(|v| v > MAX_SAMPLES) {
                return cap(format!("{name} exceeds {MAX_SAMPLES}"));
            }
        }
        if let Some(w) = self.max_weight {
            if w > 4 {
                return cap(format!("max-weight {w} exceeds 4"));
            }
        }
        if let Some(eps) = self.epsilon0 {
            if !(eps > 0.0 && eps < std::f64::consts::SQRT_2 - 1.0) {
                return config(format!("epsilon0 {eps} outside (0, sqrt 2 - 1)"));
            }
        }
        Ok(())
    }

    /// The resolved parameters as echoed in reports.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("configs serialize")
    }
}

/// Reads `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config_text(text: &str) -> RunResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| RunError::Config(format!("line {}: expected key = value", n + 1)))?;
        let key = k.trim();
        if !KEYS.contains(&key) {
            return Err(RunError::Config(format!("line {}: unknown key `{key}`", n + 1)));
        }
        out.push((key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> RunResult<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    parse_config_text(&text)
}
