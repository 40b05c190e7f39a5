use std::fmt;

/// A failed run, carrying its process exit status.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: the config (or a flag) is unusable, or outputs cannot be written.
    Config { key: Option<String>, msg: String },
    /// Exit 3: a Neumann iteration ran out of steps.
    NotConverged(String),
    /// Exit 4: a numerical invariant or guard tripped.
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::NotConverged(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "config",
            CliError::NotConverged(_) => "not_converged",
            CliError::Invariant(_) => "invariant",
        }
    }

    /// `error exit=<code> kind=<kind> key=<key or -> message=<JSON string>`.
    pub fn diagnostic(&self) -> String {
        let (key, msg) = match self {
            CliError::Config { key, msg } => (key.as_deref().unwrap_or("-"), msg.as_str()),
            CliError::NotConverged(m) | CliError::Invariant(m) => ("-", m.as_str()),
        };
        format!(
            "error exit={} kind={} key={} message={}",
            self.exit_code(),
            self.kind(),
            key,
            serde_json::Value::from(msg)
        )
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.diagnostic())
    }
}

impl std::error::Error for CliError {}

impl From<beltrami::Error> for CliError {
    fn from(e: beltrami::Error) -> Self {
        use beltrami::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidGrid(_)
            | E::InvalidRegion(_)
            | E::RegionOutsideGrid { .. }
            | E::InvalidSobolev(_)
            | E::InvalidCoefficient(_)
            | E::Fld1 { .. }
            | E::Io(_) => CliError::Config { key: None, msg },
            E::NotConverged { .. } => CliError::NotConverged(msg),
            _ => CliError::Invariant(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config {
            key: Some("out".into()),
            msg: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invariant(format!("serializing output: {e}"))
    }
}
