use crate::{CliError, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    GoeBaseline,
    Gw,
    Band,
    Sparse,
    Block,
    Heavy,
    Lift2,
    Wishart,
    CounterexampleBlockdiag,
    DiagramsExact,
    NbpathExact,
    MixingAudit,
}

const STAT_KEYS: &[&str] = &["n", "replicas", "k", "level", "beta", "side", "taus", "suite_seeds"];

impl Scenario {
    pub const ALL: [Scenario; 12] = [
        Scenario::GoeBaseline,
        Scenario::Gw,
        Scenario::Band,
        Scenario::Sparse,
        Scenario::Block,
        Scenario::Heavy,
        Scenario::Lift2,
        Scenario::Wishart,
        Scenario::CounterexampleBlockdiag,
        Scenario::DiagramsExact,
        Scenario::NbpathExact,
        Scenario::MixingAudit,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Scenario::GoeBaseline => "goe-baseline",
            Scenario::Gw => "gw",
            Scenario::Band => "band",
            Scenario::Sparse => "sparse",
            Scenario::Block => "block",
            Scenario::Heavy => "heavy",
            Scenario::Lift2 => "lift2",
            Scenario::Wishart => "wishart",
            Scenario::CounterexampleBlockdiag => "counterexample-blockdiag",
            Scenario::DiagramsExact => "diagrams-exact",
            Scenario::NbpathExact => "nbpath-exact",
            Scenario::MixingAudit => "mixing-audit",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Scenario> {
        Scenario::ALL.into_iter().find(|s| s.tag() == tag)
    }

    pub fn description(self) -> &'static str {
        match self {
            Scenario::GoeBaseline => "GOE against itself on disjoint seeds (test self-calibration)",
            Scenario::Gw => "generalized Wigner profile with c < Nσ² < C against GOE",
            Scenario::Band => "band matrix on a d-torus, W = ⌈L^0.8⌉, against GOE",
            Scenario::Sparse => "homogeneous sparse θ-GOE against GOE",
            Scenario::Block => "block Wegner orbital model against GOE",
            Scenario::Heavy => "Student-t entries, optionally truncated, against GOE",
            Scenario::Lift2 => "random 2-lifts of random regular graphs: spectrum split",
            Scenario::Wishart => "banded bipartite Wishart against the flat Wishart baseline",
            Scenario::CounterexampleBlockdiag => "decoupled blocks: rejection expected",
            Scenario::DiagramsExact => "ribbon, Chebyshev and cumulant expansions against the Wick oracle",
            Scenario::NbpathExact => "Wigner and Wishart path expansions on seeded realizations",
            Scenario::MixingAudit => "short-to-long mixing certificates, Fourier route and band decay",
        }
    }

    pub fn is_statistical(self) -> bool {
        matches!(
            self,
            Scenario::GoeBaseline
                | Scenario::Gw
                | Scenario::Band
                | Scenario::Sparse
                | Scenario::Block
                | Scenario::Heavy
                | Scenario::Wishart
                | Scenario::CounterexampleBlockdiag
        )
    }

    /// Parameter keys this scenario reads; anything else is an error.
    pub fn keys(self) -> Vec<&'static str> {
        let extra: &[&str] = match self {
            Scenario::GoeBaseline => &[],
            Scenario::Gw => &["c", "cap"],
            Scenario::Band => &["l", "w", "d", "tail_grid", "tail_replicas"],
            Scenario::Sparse => &["theta"],
            Scenario::Block | Scenario::CounterexampleBlockdiag => &["blocks", "block_size", "lambda"],
            Scenario::Heavy => &["dof", "zeta"],
            Scenario::Wishart => &["alpha", "w"],
            Scenario::Lift2 => return vec!["n", "graphs", "degree"],
            Scenario::DiagramsExact => return vec!["n", "max_order", "instances"],
            Scenario::NbpathExact => return vec!["n", "max_order", "seeds"],
            Scenario::MixingAudit => return vec!["n", "c", "cap", "gamma", "delta", "t_n", "horizon", "l", "w"],
        };
        STAT_KEYS.iter().chain(extra).copied().collect()
    }
}

/// Scenario parameters. Every field is optional; unset fields take the
/// scenario default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taus: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<u8>,
    /// `upper` or `lower`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite_seeds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dof: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graphs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_replicas: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Formats {
    #[serde(default = "yes")]
    pub csv: bool,
    #[serde(default)]
    pub svg: bool,
    #[serde(default = "default_bins")]
    pub bins: usize,
}

fn yes() -> bool {
    true
}

fn default_bins() -> usize {
    40
}

impl Default for Formats {
    fn default() -> Self {
        Formats { csv: true, svg: false, bins: default_bins() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Formats,
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario) -> Self {
        ExperimentConfig { scenario, params: Params::default(), seed: 0, output: None, format: Formats::default() }
    }

    /// Parses JSON, or TOML when `toml` is set.
    pub fn parse(text: &str, toml: bool) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(CliError::Config("configuration is empty".into()));
        }
        let cfg: ExperimentConfig = if toml {
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?
        } else {
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?
        };
        cfg.check_keys()?;
        Ok(cfg)
    }

    /// Reads a config file; the format follows the extension.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.extension().is_some_and(|e| e == "toml"))
    }

    pub fn check_keys(&self) -> Result<()> {
        let allowed = self.scenario.keys();
        let value = serde_json::to_value(&self.params).map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(map) = value.as_object() {
            if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
                return Err(CliError::Config(format!(
                    "parameter `{key}` does not apply to scenario {}",
                    self.scenario.tag()
                )));
            }
        }
        if self.format.bins == 0 {
            return Err(CliError::Config("format.bins must be positive".into()));
        }
        Ok(())
    }
}
