use crate::config::check_cutoff;
use crate::error::{Result, ResultExt};
use crate::{io, Context};
use clap::Args;
use routematch::ingest::{
    canonicalize, extract_routes, load_positions, parse_tracking, snap_to_outcome_seconds, write_routes, RowError,
    Schema, SkipRecord,
};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Tracking CSV (`-` for stdin).
    #[arg(long, value_name = "PATH")]
    pub tracking: PathBuf,
    /// Players CSV, for tracking files without a position column.
    #[arg(long, value_name = "PATH")]
    pub players: Option<PathBuf>,
    #[arg(long, default_value = "nflId", value_name = "COLUMN")]
    pub players_id_column: String,
    #[arg(long, default_value = "PositionAbbr", value_name = "COLUMN")]
    pub players_position_column: String,
    /// JSON column mapping; overrides the config file's schema.
    #[arg(long, value_name = "PATH")]
    pub schema: Option<PathBuf>,
    /// Seconds after the snap at which routes are cut.
    #[arg(long, value_name = "SECONDS")]
    pub cutoff: Option<f64>,
    /// Routes as JSON lines; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Skipped plays and rejected rows as JSON lines.
    #[arg(long, value_name = "PATH")]
    pub skips: Option<PathBuf>,
    /// Snap-to-outcome times per play with their empirical CDF, as CSV.
    #[arg(long, value_name = "PATH")]
    pub emit_cutoff_ecdf: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SkipLine<'a> {
    Skipped(&'a SkipRecord),
    RejectedRow(&'a RowError),
}

pub fn run(ctx: &Context, args: IngestArgs) -> Result<()> {
    let schema: Schema = match &args.schema {
        Some(p) => {
            let text = std::fs::read_to_string(p).usage(format!("reading schema {}", p.display()))?;
            serde_json::from_str(&text).usage(format!("parsing schema {}", p.display()))?
        }
        None => ctx.config.schema.clone(),
    };
    let mut extract = ctx.config.extract.clone();
    if let Some(c) = args.cutoff {
        extract.cutoff_seconds = c;
    }
    check_cutoff(extract.cutoff_seconds, ctx.global.quiet)?;

    let positions = match &args.players {
        Some(p) => {
            let src = io::open(p)?;
            Some(
                load_positions(src, &args.players_id_column, &args.players_position_column)
                    .usage(format!("reading players {}", p.display()))?,
            )
        }
        None => None,
    };
    let src = io::open(&args.tracking)?;
    let parsed = parse_tracking(src, &schema, positions.as_ref())
        .usage(format!("reading tracking {}", args.tracking.display()))?;
    let extraction = extract_routes(&parsed.frames, &extract);
    let routes: Vec<_> = extraction.routes.iter().map(|r| canonicalize(r, r.direction)).collect();

    let mut out = io::create(args.out.as_deref())?;
    write_routes(&mut out, &routes)?;
    out.flush()?;

    if let Some(p) = &args.skips {
        let mut w = io::create(Some(p))?;
        for s in &extraction.skipped {
            serde_json::to_writer(&mut w, &SkipLine::Skipped(s))?;
            w.write_all(b"\n")?;
        }
        for r in &parsed.rejected {
            serde_json::to_writer(&mut w, &SkipLine::RejectedRow(r))?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
    }

    if let Some(p) = &args.emit_cutoff_ecdf {
        let mut times: Vec<f64> = snap_to_outcome_seconds(&parsed.frames).into_iter().map(|t| t.2).collect();
        times.sort_by(f64::total_cmp);
        let mut w = io::create(Some(p))?;
        writeln!(w, "cutoff_s,ecdf")?;
        let n = times.len() as f64;
        for (i, t) in times.iter().enumerate() {
            writeln!(w, "{t},{}", (i + 1) as f64 / n)?;
        }
        w.flush()?;
    }

    let plays_skipped = extraction.skipped.iter().filter(|s| s.player_id.is_none()).count();
    let players_dropped = extraction.skipped.len() - plays_skipped;
    ctx.info(format!(
        "routes extracted: {}, plays skipped: {plays_skipped}, players dropped: {players_dropped}, rows rejected: {}",
        routes.len(),
        parsed.rejected.len()
    ));
    Ok(())
}
