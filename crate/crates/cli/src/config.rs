use crate::error::{usage, Result, ResultExt};
use crate::io;
use routematch::classify::ClassifyConfig;
use routematch::ingest::{ExtractConfig, Schema};
use routematch::templates::{builtin_route_tree, load_templates, TemplateSet};
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Settings shared by every subcommand, from `--config`. Command-line flags
/// override them.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub classify: ClassifyConfig,
    pub extract: ExtractConfig,
    pub schema: Schema,
    /// Template file; the built-in route tree when absent.
    pub templates: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path).usage(format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).usage(format!("parsing config {}", path.display()))
    }
}

/// The cutoffs the method was evaluated at; others work but draw a warning.
const USUAL_CUTOFFS: [f64; 3] = [3.0, 4.0, 5.0];

pub fn check_cutoff(seconds: f64, quiet: bool) -> Result<()> {
    if !(seconds > 0.0 && seconds.is_finite()) {
        return Err(usage(format!("cutoff must be a positive number of seconds, got {seconds}")));
    }
    if !quiet && !USUAL_CUTOFFS.contains(&seconds) {
        eprintln!("warning: cutoff {seconds} s is not one of 3, 4 or 5 s");
    }
    Ok(())
}

/// `builtin` or a path; falls back to the config file, then the builtin set.
pub fn templates(flag: Option<&str>, config: &RunConfig) -> Result<TemplateSet> {
    let path = match flag {
        Some("builtin") => return Ok(builtin_route_tree()),
        Some(p) => PathBuf::from(p),
        None => match &config.templates {
            Some(p) => p.clone(),
            None => return Ok(builtin_route_tree()),
        },
    };
    let file = io::open(&path)?;
    load_templates(file).usage(format!("loading templates from {}", path.display()))
}
