use serde_json::json;

/// Every failure the CLI can report, each with its own exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("{0}")]
    EventNeverHappens(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Resource(String),
    /// A checked property did not hold (verify, oracle-check).
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Validation { .. } => 2,
            CliError::EventNeverHappens(_) => 3,
            CliError::Io(_) => 4,
            CliError::Numerical(_) => 5,
            CliError::Resource(_) => 6,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Violation(_) => "violation",
            CliError::Validation { .. } => "validation",
            CliError::EventNeverHappens(_) => "event_never_happens",
            CliError::Io(_) => "io",
            CliError::Numerical(_) => "numerical",
            CliError::Resource(_) => "resource",
        }
    }

    /// Single-line JSON for the diagnostic stream.
    pub fn to_json_line(&self) -> String {
        let mut v = json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        if let CliError::Validation { field, .. } = self {
            v["field"] = json!(field);
        }
        v.to_string()
    }

    /// Map a core failure raised while computing (not while loading).
    pub fn from_core(field: &str, e: qevent_core::Error) -> Self {
        use qevent_core::Error as E;
        match e {
            E::EventNeverHappens { .. } => CliError::EventNeverHappens(e.to_string()),
            E::Numerical(_) => CliError::Numerical(e.to_string()),
            E::Resource { .. } => CliError::Resource(e.to_string()),
            E::Contract(_) | E::SpaceMismatch { .. } => {
                CliError::Validation { field: field.into(), message: e.to_string() }
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
