use crate::config;
use crate::error::{usage, Result, ResultExt};
use crate::{io, Context};
use clap::Args;
use routematch::synth::{generate_corpus, write_tracking_csv, Corpus};
use routematch::{CorpusPlan, RouteLabel, SynthSpec};
use serde::Deserialize;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// JSON plan: an object with plan fields, or an array of route specs.
    #[arg(long, value_name = "PATH")]
    pub plan: Option<PathBuf>,
    /// Routes drawn per spec when the plan is an array.
    #[arg(long, default_value_t = 1)]
    pub n_per_spec: usize,
    /// Comma-separated route labels.
    #[arg(long, value_delimiter = ',')]
    pub labels: Option<Vec<RouteLabel>>,
    #[arg(long)]
    pub per_label: Option<usize>,
    #[arg(long, value_name = "YARDS")]
    pub scale_min: Option<f64>,
    #[arg(long, value_name = "YARDS")]
    pub scale_max: Option<f64>,
    /// Gaussian noise per point, in yards.
    #[arg(long, value_name = "YARDS")]
    pub noise: Option<f64>,
    /// Relative break-depth jitter.
    #[arg(long)]
    pub jitter: Option<f64>,
    #[arg(long)]
    pub point_count: Option<usize>,
    #[arg(long, value_name = "PATH|builtin")]
    pub templates: Option<String>,
    /// Routes as JSON lines.
    #[arg(long, value_name = "PATH")]
    pub routes_out: PathBuf,
    /// Reference labels as JSON lines.
    #[arg(long, value_name = "PATH")]
    pub labels_out: PathBuf,
    /// The routes again as a tracking CSV that `ingest` reads back.
    #[arg(long, value_name = "PATH")]
    pub tracking_out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PlanFile {
    Specs(Vec<SynthSpec>),
    Plan(CorpusPlan),
}

impl SynthArgs {
    fn has_plan_flags(&self) -> bool {
        self.labels.is_some()
            || self.per_label.is_some()
            || self.scale_min.is_some()
            || self.scale_max.is_some()
            || self.noise.is_some()
            || self.jitter.is_some()
            || self.point_count.is_some()
    }

    fn apply(&self, plan: &mut CorpusPlan) {
        if let Some(l) = &self.labels {
            plan.labels = l.clone();
        }
        plan.per_label = self.per_label.unwrap_or(plan.per_label);
        plan.scale_min = self.scale_min.unwrap_or(plan.scale_min);
        plan.scale_max = self.scale_max.unwrap_or(plan.scale_max);
        plan.noise_sigma = self.noise.unwrap_or(plan.noise_sigma);
        plan.jitter_break = self.jitter.unwrap_or(plan.jitter_break);
        plan.point_count = self.point_count.unwrap_or(plan.point_count);
    }
}

pub fn run(ctx: &Context, args: SynthArgs) -> Result<()> {
    let set = config::templates(args.templates.as_deref(), &ctx.config)?;
    let file = match &args.plan {
        Some(p) => {
            let text = std::fs::read_to_string(p).usage(format!("reading plan {}", p.display()))?;
            Some(serde_json::from_str::<PlanFile>(&text).usage(format!("parsing plan {}", p.display()))?)
        }
        None => None,
    };
    let corpus: Corpus = match file {
        Some(PlanFile::Specs(mut specs)) => {
            if args.has_plan_flags() {
                return Err(usage("plan flags only apply to object plans, not spec arrays"));
            }
            if let Some(seed) = ctx.seed() {
                for (i, s) in specs.iter_mut().enumerate() {
                    s.seed = seed.wrapping_add((i * args.n_per_spec) as u64);
                }
            }
            for s in &specs {
                s.validate().usage("plan")?;
            }
            generate_corpus(&specs, args.n_per_spec, &set).runtime("generating corpus")?
        }
        other => {
            let mut plan = match other {
                Some(PlanFile::Plan(p)) => p,
                _ => CorpusPlan::default(),
            };
            args.apply(&mut plan);
            if let Some(seed) = ctx.seed() {
                plan.seed = seed;
            }
            plan.specs().usage("plan")?;
            plan.generate(&set).runtime("generating corpus")?
        }
    };

    let mut routes = io::create(Some(&args.routes_out))?;
    let mut labels = io::create(Some(&args.labels_out))?;
    corpus.write(&mut routes, &mut labels)?;
    routes.flush()?;
    labels.flush()?;
    if let Some(p) = &args.tracking_out {
        let mut w = io::create(Some(p))?;
        write_tracking_csv(&mut w, &corpus.routes)?;
        w.flush()?;
    }
    ctx.info(format!("generated {} routes", corpus.len()));
    Ok(())
}
