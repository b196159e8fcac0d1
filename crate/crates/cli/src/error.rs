use std::fmt;

/// Exit status 2 for bad arguments, configuration or unreadable inputs; 1 for
/// everything that goes wrong after the inputs were accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Runtime,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub source: anyhow::Error,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self.kind {
            Kind::Usage => 2,
            Kind::Runtime => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.source)
    }
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError {
            kind: Kind::Runtime,
            source: e.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn usage(msg: impl fmt::Display) -> CliError {
    CliError {
        kind: Kind::Usage,
        source: anyhow::anyhow!("{msg}"),
    }
}

pub trait ResultExt<T> {
    /// Marks a failure as a usage/config error, with context.
    fn usage(self, context: impl fmt::Display) -> Result<T>;
    /// Marks a failure as a runtime error, with context.
    fn runtime(self, context: impl fmt::Display) -> Result<T>;
}

impl<T, E: Into<anyhow::Error>> ResultExt<T> for std::result::Result<T, E> {
    fn usage(self, context: impl fmt::Display) -> Result<T> {
        self.map_err(|e| CliError {
            kind: Kind::Usage,
            source: e.into().context(context.to_string()),
        })
    }

    fn runtime(self, context: impl fmt::Display) -> Result<T> {
        self.map_err(|e| CliError {
            kind: Kind::Runtime,
            source: e.into().context(context.to_string()),
        })
    }
}
