//! Optional TOML defaults. Command-line flags always win.

use std::path::Path;

use serde::Deserialize;

/// An integer or a list of integers.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

impl OneOrMany {
    pub fn into_vec(self) -> Vec<usize> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Flat table of defaults, keyed like the long flags with `_` for `-`.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub n: Option<OneOrMany>,
    pub t_steps: Option<usize>,
    pub candidate: Option<String>,
    pub t_samples: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub dirs: Option<usize>,
    pub controls: Option<usize>,
    pub epsilon: Option<f64>,
    pub samples: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub q: Option<usize>,
    pub grid: Option<usize>,
    pub pairs: Option<usize>,
    pub sequential: Option<bool>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
