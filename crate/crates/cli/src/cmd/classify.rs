use super::{load_routes, MatchArgs};
use crate::config::{self, check_cutoff};
use crate::error::{Result, ResultExt};
use crate::{io, Context};
use clap::Args;
use routematch::classify::Classifier;
use routematch::{jsonl, Label};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Canonical routes as JSON lines (`-` for stdin).
    #[arg(long, value_name = "PATH", default_value = "-")]
    pub routes: PathBuf,
    #[command(flatten)]
    pub matching: MatchArgs,
    /// Truncate routes to this many seconds after the snap first.
    #[arg(long, value_name = "SECONDS")]
    pub cutoff: Option<f64>,
    /// Classify on one thread.
    #[arg(long)]
    pub serial: bool,
    /// Match results as JSON lines; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Label counts per roster position, as CSV.
    #[arg(long, value_name = "PATH")]
    pub position_summary: Option<PathBuf>,
}

pub fn run(ctx: &Context, args: ClassifyArgs) -> Result<()> {
    let set = config::templates(args.matching.templates.as_deref(), &ctx.config)?;
    let cfg = args.matching.classify_config(&ctx.config)?;
    let classifier = Classifier::new(&set, cfg).usage("preparing templates")?;
    let mut routes = load_routes(&args.routes)?;
    if let Some(c) = args.cutoff {
        check_cutoff(c, ctx.global.quiet)?;
        routes = routes
            .iter()
            .map(|r| r.truncate_to_seconds(c))
            .collect::<std::result::Result<_, _>>()
            .runtime("truncating routes")?;
    }

    let started = Instant::now();
    let results = if args.serial {
        classifier.classify_batch(&routes)
    } else {
        classifier.classify_batch_parallel(&routes)
    };
    let elapsed = started.elapsed().as_secs_f64();

    let mut ok = Vec::with_capacity(results.len());
    let mut failed = 0usize;
    for (route, r) in routes.iter().zip(results) {
        match r {
            Ok(m) => ok.push(m),
            Err(e) => {
                failed += 1;
                eprintln!("warning: route {}: {e}", route.id);
            }
        }
    }
    let out = io::create(args.out.as_deref())?;
    jsonl::write(out, &ok)?;

    if let Some(p) = &args.position_summary {
        let mut counts: BTreeMap<(&str, Label), u64> = BTreeMap::new();
        for (route, m) in routes.iter().zip(&ok_by_id(&ok, &routes)) {
            if let Some(m) = m {
                *counts.entry((route.position.as_str(), *m)).or_default() += 1;
            }
        }
        let mut w = io::create(Some(p))?;
        writeln!(w, "position,label,count")?;
        for ((pos, label), n) in counts {
            writeln!(w, "{pos},{label},{n}")?;
        }
        w.flush()?;
    }

    let rate = if elapsed > 0.0 { routes.len() as f64 / elapsed } else { f64::INFINITY };
    ctx.info(format!(
        "classified {} routes in {elapsed:.3} s ({rate:.1} routes/s)",
        routes.len()
    ));
    if failed > 0 {
        return Err(anyhow::anyhow!("{failed} of {} routes could not be classified", routes.len()).into());
    }
    Ok(())
}

// labels lined up with the input routes; None where classification failed
fn ok_by_id(ok: &[routematch::MatchResult], routes: &[routematch::CanonicalRoute]) -> Vec<Option<Label>> {
    let by_id: BTreeMap<_, _> = ok.iter().map(|m| (m.id, m.label)).collect();
    routes.iter().map(|r| by_id.get(&r.id).copied()).collect()
}
