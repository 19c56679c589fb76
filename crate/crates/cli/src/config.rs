//! TOML run configuration. Command-line flags override file values.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    #[serde(default)]
    pub synth: SynthSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub mplx: MplxSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSection {
    pub nodes: Option<usize>,
    pub layers: Option<usize>,
    pub ba_m: Option<usize>,
    pub target_corr: Option<f64>,
    pub calib_samples: Option<usize>,
    pub calib_tol: Option<f64>,
    pub calib_max_steps: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub reps: Option<usize>,
    pub downsample_frac: Option<f64>,
    pub heuristics: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MplxSection {
    pub threshold_sd: Option<f64>,
    pub beta: Option<f64>,
    pub alpha: Option<f64>,
    pub max_walk_len: Option<usize>,
    pub rpr_tol: Option<f64>,
    pub rpr_max_iter: Option<usize>,
    /// `target` (default) or `each`.
    pub ccwh_reading: Option<String>,
    pub zero_weight_epsilon: Option<f64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid config {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_parse() {
        let c = RunConfig::parse(
            "seed = 4\n[synth]\nnodes = 50\ntarget_corr = 0.7\n[experiment]\nheuristics = [\"cn\", \"cwc-e\"]\n[mplx]\nbeta = 0.01\n",
        )
        .unwrap();
        assert_eq!(c.seed, Some(4));
        assert_eq!(c.synth.nodes, Some(50));
        assert_eq!(c.experiment.heuristics.as_deref().unwrap().len(), 2);
        assert_eq!(c.mplx.beta, Some(0.01));
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_are_named() {
        let e = RunConfig::parse("[synth]\nnodez = 3\n").unwrap_err();
        assert!(format!("{e:#}").contains("nodez"));
        let e = RunConfig::parse("colour = 1\n").unwrap_err();
        assert!(format!("{e:#}").contains("colour"));
    }
}
