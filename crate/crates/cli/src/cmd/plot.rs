use super::{load_routes, MatchArgs};
use crate::config;
use crate::error::{usage, Result, ResultExt};
use crate::{io, Context};
use clap::{Args, Subcommand};
use routematch::classify::Classifier;
use routematch::evaluate::ReferenceLabel;
use routematch::plot::{group_svg, route_svg};
use routematch::{jsonl, Label, RouteId, RouteLabel};
use std::collections::HashSet;
use std::path::PathBuf;

#[derive(Debug, Subcommand)]
pub enum PlotCommand {
    /// One route, optionally with a template scaled and shifted onto it.
    Route(RouteArgs),
    /// Every route with one label, with the group's medoid on top.
    Group(GroupArgs),
}

#[derive(Debug, Args)]
pub struct RouteArgs {
    #[arg(long, value_name = "PATH")]
    pub routes: PathBuf,
    /// Route to draw, as game:play:player.
    #[arg(long)]
    pub id: RouteId,
    /// Overlay this template.
    #[arg(long, conflicts_with = "best")]
    pub template: Option<RouteLabel>,
    /// Overlay the best-matching template.
    #[arg(long)]
    pub best: bool,
    #[command(flatten)]
    pub matching: MatchArgs,
    /// SVG destination; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    #[arg(long, value_name = "PATH")]
    pub routes: PathBuf,
    /// Labels for the routes: match results or reference labels.
    #[arg(long, value_name = "PATH")]
    pub labels: PathBuf,
    /// Label whose routes are drawn.
    #[arg(long)]
    pub label: Label,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

pub fn run(ctx: &Context, cmd: PlotCommand) -> Result<()> {
    match cmd {
        PlotCommand::Route(a) => route(ctx, a),
        PlotCommand::Group(a) => group(ctx, a),
    }
}

fn route(ctx: &Context, args: RouteArgs) -> Result<()> {
    let routes = load_routes(&args.routes)?;
    let Some(route) = routes.iter().find(|r| r.id == args.id) else {
        return Err(usage(format!("route {} is not in {}", args.id, args.routes.display())));
    };
    let mut fit = None;
    if args.best || args.template.is_some() {
        let set = config::templates(args.matching.templates.as_deref(), &ctx.config)?;
        let cfg = args.matching.classify_config(&ctx.config)?;
        let classifier = Classifier::new(&set, cfg).usage("preparing templates")?;
        let name = match args.template {
            Some(t) => Some(t),
            None => classifier.classify(route).runtime(format!("classifying {}", route.id))?.best_template,
        };
        match name {
            Some(t) => {
                let f = classifier
                    .fit(route, t)
                    .ok_or_else(|| usage(format!("template {t} is not in the template set")))?
                    .runtime(format!("fitting {t} to {}", route.id))?;
                fit = Some(f);
            }
            None => ctx.info(format!("{} is blocking/bubble; drawing the route alone", route.id)),
        }
    }
    io::write_all(args.out.as_deref(), route_svg(route, fit.as_ref()).as_bytes())
}

fn group(ctx: &Context, args: GroupArgs) -> Result<()> {
    let routes = load_routes(&args.routes)?;
    let labels: Vec<ReferenceLabel> =
        jsonl::read(io::open(&args.labels)?).usage(format!("reading labels {}", args.labels.display()))?;
    let ids: HashSet<RouteId> = labels.iter().filter(|l| l.label == args.label).map(|l| l.id).collect();
    let members: Vec<_> = routes.into_iter().filter(|r| ids.contains(&r.id)).collect();
    let title = format!("{} ({} routes)", args.label.as_str(), members.len());
    let svg = group_svg(&members, &title).runtime(format!("label {}", args.label.as_str()))?;
    io::write_all(args.out.as_deref(), svg.as_bytes())?;
    ctx.info(format!("drew {title}"));
    Ok(())
}
