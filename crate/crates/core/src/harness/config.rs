use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crlb::ScenarioParams;
use crate::topology::{Antenna, Topology, TopologyError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid topology `{0}`: expected star, daisy or file:<path>")]
    TopologySyntax(String),
    #[error("cannot load topology file {path}: {reason}")]
    TopologyFile { path: PathBuf, reason: String },
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("invalid SNR grid `{0}`: expected lo:hi:step or a comma-separated list")]
    SnrSyntax(String),
    #[error("SNR grid is empty")]
    EmptySnrGrid,
    #[error("invalid budget `{0}`: expected time:<slots> or measurements:<count>")]
    BudgetSyntax(String),
    #[error("budget of {value} {unit} is below one collection round ({needed})")]
    BudgetTooSmall {
        value: u64,
        needed: u64,
        unit: &'static str,
    },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("invalid output format `{0}`: expected csv or json")]
    FormatSyntax(String),
    #[error("topology has {found} antennas but the config says m = {expected}")]
    AntennaCountMismatch { expected: usize, found: usize },
    #[error("invalid scenario: {0}")]
    Scenario(String),
}

/// Which wiring an experiment uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TopologySpec {
    Star,
    Daisy,
    File(PathBuf),
}

impl FromStr for TopologySpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "star" => Ok(TopologySpec::Star),
            "daisy" => Ok(TopologySpec::Daisy),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(TopologySpec::File(path.into())),
                _ => Err(ConfigError::TopologySyntax(s.to_string())),
            },
        }
    }
}

impl TryFrom<String> for TopologySpec {
    type Error = ConfigError;

    fn try_from(s: String) -> Result<Self, ConfigError> {
        s.parse()
    }
}

impl From<TopologySpec> for String {
    fn from(t: TopologySpec) -> String {
        t.to_string()
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologySpec::Star => f.write_str("star"),
            TopologySpec::Daisy => f.write_str("daisy"),
            TopologySpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl TopologySpec {
    /// Builds the topology. `m` and `reference` are ignored for files except
    /// that a nonzero `m` must match the file.
    pub fn build(&self, m: usize, reference: Antenna) -> Result<Topology, ConfigError> {
        match self {
            TopologySpec::Star => Ok(Topology::star(m, reference)?),
            TopologySpec::Daisy => Ok(Topology::daisy(m, reference)?),
            TopologySpec::File(path) => {
                let fail = |reason: String| ConfigError::TopologyFile {
                    path: path.clone(),
                    reason,
                };
                let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
                let t: Topology = serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;
                if m != 0 && t.m() != m {
                    return Err(ConfigError::AntennaCountMismatch {
                        expected: m,
                        found: t.m(),
                    });
                }
                Ok(t)
            }
        }
    }

    /// Label used in result tables.
    pub fn label(&self) -> String {
        match self {
            TopologySpec::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "file".into()),
            other => other.to_string(),
        }
    }
}

/// SNR points in dB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SnrGrid(pub Vec<f64>);

impl FromStr for SnrGrid {
    type Err = ConfigError;

    /// `lo:hi:step` (inclusive) or `a,b,c`.
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let bad = || ConfigError::SnrSyntax(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let values = if parts.len() == 3 {
            let nums: Vec<f64> = parts
                .iter()
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?;
            let (lo, hi, step) = (nums[0], nums[1], nums[2]);
            if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
                return Err(bad());
            }
            let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            (0..n).map(|i| lo + i as f64 * step).collect()
        } else if parts.len() == 1 {
            s.split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad())?
        } else {
            return Err(bad());
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(bad());
        }
        Ok(SnrGrid(values))
    }
}

/// How much measurement effort each Monte-Carlo trial gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Budget {
    /// Number of scalar measurements; `I = ⌊count / 2(M − 1)⌋` rounds.
    Measurements(u64),
    /// Time in units of the slot duration; `I = ⌊slots / T_arb⌋` rounds.
    Time(u64),
}

impl FromStr for Budget {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let bad = || ConfigError::BudgetSyntax(s.to_string());
        let (mode, value) = s.split_once(':').ok_or_else(bad)?;
        let value: u64 = value.trim().parse().map_err(|_| bad())?;
        match mode.trim() {
            "time" => Ok(Budget::Time(value)),
            "measurements" => Ok(Budget::Measurements(value)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for Budget {
    type Error = ConfigError;

    fn try_from(s: String) -> Result<Self, ConfigError> {
        s.parse()
    }
}

impl From<Budget> for String {
    fn from(b: Budget) -> String {
        match b {
            Budget::Measurements(v) => format!("measurements:{v}"),
            Budget::Time(v) => format!("time:{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(ConfigError::FormatSyntax(s.to_string())),
        }
    }
}

fn default_scenario() -> ScenarioParams {
    ScenarioParams::unit()
}

/// A complete SNR-sweep description, loadable from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub m: usize,
    pub reference: Antenna,
    pub topology: TopologySpec,
    pub snr_grid_db: SnrGrid,
    pub trials: usize,
    pub master_seed: u64,
    /// `None` means a single collection round.
    #[serde(default)]
    pub budget: Option<Budget>,
    #[serde(default)]
    pub output_format: OutputFormat,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    /// Line gain, amplitudes and slot duration; the noise variance is set
    /// per grid point from the SNR.
    #[serde(default = "default_scenario")]
    pub scenario: ScenarioParams,
}

impl ExperimentConfig {
    pub fn new(topology: TopologySpec, m: usize, reference: Antenna) -> Self {
        ExperimentConfig {
            m,
            reference,
            topology,
            snr_grid_db: SnrGrid(vec![10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]),
            trials: 1000,
            master_seed: 0,
            budget: None,
            output_format: OutputFormat::Csv,
            output_path: None,
            scenario: ScenarioParams::unit(),
        }
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<Self, crate::Error> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Checks the config and resolves the topology and the repetition count
    /// `(I, F in slots)`.
    pub fn resolve(&self) -> Result<(Topology, u64, u64), ConfigError> {
        if self.snr_grid_db.0.is_empty() {
            return Err(ConfigError::EmptySnrGrid);
        }
        if self.trials == 0 {
            return Err(ConfigError::NoTrials);
        }
        self.scenario
            .validate()
            .map_err(|e| ConfigError::Scenario(e.to_string()))?;
        let t = self.topology.build(self.m, self.reference)?;
        let round_measurements = 2 * (t.m() as u64 - 1);
        let round_slots = crate::crlb::time_to_collect(&t);
        let (reps, rem) = match self.budget {
            None => (1, 0),
            Some(Budget::Measurements(v)) => {
                if v < round_measurements {
                    return Err(ConfigError::BudgetTooSmall {
                        value: v,
                        needed: round_measurements,
                        unit: "measurements",
                    });
                }
                (v / round_measurements, 0)
            }
            Some(Budget::Time(v)) => {
                if v < round_slots {
                    return Err(ConfigError::BudgetTooSmall {
                        value: v,
                        needed: round_slots,
                        unit: "slots",
                    });
                }
                (v / round_slots, v % round_slots)
            }
        };
        Ok((t, reps, rem))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_snr_ranges() {
        let g: SnrGrid = "10:40:5".parse().unwrap();
        assert_eq!(g.0, vec![10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]);
        let g: SnrGrid = "0:1:0.25".parse().unwrap();
        assert_eq!(g.0.len(), 5);
        let g: SnrGrid = "30".parse().unwrap();
        assert_eq!(g.0, vec![30.0]);
        let g: SnrGrid = "10, 20,40".parse().unwrap();
        assert_eq!(g.0, vec![10.0, 20.0, 40.0]);
        assert!("10:5:1".parse::<SnrGrid>().is_err());
        assert!("10:20:0".parse::<SnrGrid>().is_err());
        assert!("a:b".parse::<SnrGrid>().is_err());
    }

    #[test]
    fn parses_budgets_and_topologies() {
        assert_eq!("time:256".parse::<Budget>().unwrap(), Budget::Time(256));
        assert_eq!(
            "measurements:256".parse::<Budget>().unwrap(),
            Budget::Measurements(256)
        );
        assert!("time".parse::<Budget>().is_err());
        assert!("energy:3".parse::<Budget>().is_err());
        assert_eq!("star".parse::<TopologySpec>().unwrap(), TopologySpec::Star);
        assert_eq!(
            "file:net7.json".parse::<TopologySpec>().unwrap(),
            TopologySpec::File("net7.json".into())
        );
        assert!("ring".parse::<TopologySpec>().is_err());
        assert!("file:".parse::<TopologySpec>().is_err());
    }

    #[test]
    fn resolves_repetitions() {
        let mut cfg = ExperimentConfig::new(TopologySpec::Daisy, 129, 64);
        cfg.budget = Some(Budget::Time(256));
        let (_, reps, rem) = cfg.resolve().unwrap();
        assert_eq!((reps, rem), (64, 0));
        cfg.budget = Some(Budget::Measurements(256));
        assert_eq!(cfg.resolve().unwrap().1, 1);
        cfg.budget = Some(Budget::Time(3));
        assert!(matches!(cfg.resolve(), Err(ConfigError::BudgetTooSmall { .. })));
        cfg.budget = None;
        cfg.trials = 0;
        assert!(matches!(cfg.resolve(), Err(ConfigError::NoTrials)));
        cfg.trials = 1;
        cfg.snr_grid_db = SnrGrid(vec![]);
        assert!(matches!(cfg.resolve(), Err(ConfigError::EmptySnrGrid)));
    }

    #[test]
    fn config_json_round_trip() {
        let mut cfg = ExperimentConfig::new(TopologySpec::Star, 9, 2);
        cfg.budget = Some(Budget::Time(16));
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"budget\":\"time:16\""));
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);

        let minimal = r#"{"m": 5, "reference": 3, "topology": "daisy",
            "snr_grid_db": [30], "trials": 10, "master_seed": 1}"#;
        let cfg: ExperimentConfig = serde_json::from_str(minimal).unwrap();
        assert_eq!(cfg.budget, None);
        assert_eq!(cfg.scenario, ScenarioParams::unit());
    }
}
