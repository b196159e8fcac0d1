use crate::error::{Result, ResultExt};
use crate::{io, Context};
use clap::Subcommand;
use routematch::templates::{builtin_route_tree, load_templates, save_templates};
use std::path::PathBuf;

#[derive(Debug, Subcommand)]
pub enum TemplatesCommand {
    /// Check a template file; exits 2 when it is invalid.
    Validate {
        path: PathBuf,
    },
    /// Write the built-in route tree as a template file.
    Export {
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

pub fn run(ctx: &Context, cmd: TemplatesCommand) -> Result<()> {
    match cmd {
        TemplatesCommand::Validate { path } => {
            let set = load_templates(io::open(&path)?).usage(path.display())?;
            let names: Vec<&str> = set.labels().map(|l| l.as_str()).collect();
            ctx.info(format!("{}: {} templates ({})", path.display(), names.len(), names.join(", ")));
            Ok(())
        }
        TemplatesCommand::Export { out } => io::write_all(out.as_deref(), &save_templates(&builtin_route_tree())),
    }
}
