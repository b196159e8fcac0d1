use crate::error::{usage, Result, ResultExt};
use crate::{io, Context};
use clap::Args;
use routematch::evaluate::{join, read_references, render_report, score, ReportFormat};
use routematch::{jsonl, MatchResult};
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Match results from `classify`, as JSON lines.
    #[arg(long, value_name = "PATH")]
    pub predictions: PathBuf,
    /// Reference labels, as JSON lines.
    #[arg(long, value_name = "PATH")]
    pub reference: PathBuf,
    /// text, json or svg.
    #[arg(long, default_value = "text")]
    pub format: String,
    /// Report destination; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also write the JSON report here.
    #[arg(long, value_name = "PATH")]
    pub write_json: Option<PathBuf>,
    /// Also write the confusion matrix SVG here.
    #[arg(long, value_name = "PATH")]
    pub write_svg: Option<PathBuf>,
    /// Fail (exit 1) when accuracy is below this.
    #[arg(long, value_name = "FRACTION")]
    pub min_accuracy: Option<f64>,
}

pub fn run(ctx: &Context, args: EvaluateArgs) -> Result<()> {
    let format: ReportFormat = args.format.parse().usage("--format")?;
    if let Some(f) = args.min_accuracy {
        if !(0.0..=1.0).contains(&f) {
            return Err(usage(format!("--min-accuracy must be in [0, 1], got {f}")));
        }
    }
    let predictions: Vec<MatchResult> = jsonl::read(io::open(&args.predictions)?)
        .usage(format!("reading predictions {}", args.predictions.display()))?;
    let references = read_references(io::open(&args.reference)?)
        .usage(format!("reading references {}", args.reference.display()))?;

    let joined = join(&predictions, &references).usage("joining predictions with references")?;
    if !joined.unmatched_predictions.is_empty() {
        eprintln!(
            "warning: {} predictions have no reference label (first: {})",
            joined.unmatched_predictions.len(),
            joined.unmatched_predictions[0]
        );
    }
    if !joined.unmatched_references.is_empty() {
        eprintln!(
            "warning: {} reference labels have no prediction (first: {})",
            joined.unmatched_references.len(),
            joined.unmatched_references[0]
        );
    }
    let report = score(&joined.pairs).runtime("scoring")?;

    io::write_all(args.out.as_deref(), &render_report(&report, format))?;
    if let Some(p) = &args.write_json {
        io::write_all(Some(p), &render_report(&report, ReportFormat::Json))?;
    }
    if let Some(p) = &args.write_svg {
        io::write_all(Some(p), &render_report(&report, ReportFormat::Svg))?;
    }
    ctx.info(format!(
        "scored {} routes: accuracy {:.4}",
        report.total, report.accuracy
    ));
    if let Some(floor) = args.min_accuracy {
        if report.accuracy < floor {
            return Err(anyhow::anyhow!("accuracy {:.4} is below the floor {floor}", report.accuracy).into());
        }
    }
    Ok(())
}
