pub mod classify;
pub mod evaluate;
pub mod ingest;
pub mod plot;
pub mod synth;
pub mod templates;

use crate::config::RunConfig;
use crate::error::{usage, Result, ResultExt};
use crate::io;
use clap::Args;
use routematch::classify::{ClassifyConfig, Gamma};
use routematch::ingest::read_routes;
use routematch::CanonicalRoute;
use std::path::Path;

/// Matching knobs shared by `classify` and `plot`.
#[derive(Debug, Clone, Args)]
pub struct MatchArgs {
    /// Template file, or `builtin` for the built-in route tree.
    #[arg(long, value_name = "PATH|builtin")]
    pub templates: Option<String>,
    /// Weight on the template-to-route term, in (0, 1].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Shift grid step in yards.
    #[arg(long)]
    pub step: Option<f64>,
    /// Routes that never move farther than this from the snap, in yards,
    /// are labeled blocking/bubble.
    #[arg(long, value_name = "YARDS")]
    pub blocking_threshold: Option<f64>,
    /// Also try a shift that lands exactly on the far edge of the slack.
    #[arg(long)]
    pub include_endpoint: bool,
}

impl MatchArgs {
    pub fn classify_config(&self, base: &RunConfig) -> Result<ClassifyConfig> {
        let mut c = base.classify;
        if let Some(g) = self.gamma {
            c.gamma = Gamma::new(g).usage("--gamma")?;
        }
        if let Some(s) = self.step {
            if !(s > 0.0 && s.is_finite()) {
                return Err(usage(format!("--step must be positive, got {s}")));
            }
            c.step_yards = s;
        }
        if let Some(t) = self.blocking_threshold {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(usage(format!("--blocking-threshold must be non-negative, got {t}")));
            }
            c.blocking_threshold_yards = t;
        }
        c.include_exact_endpoint |= self.include_endpoint;
        Ok(c)
    }
}

pub fn load_routes(path: &Path) -> Result<Vec<CanonicalRoute>> {
    let src = io::open(path)?;
    read_routes(src).usage(format!("reading routes from {}", path.display()))
}
