//! CLI error split: usage/domain problems exit 2, runtime/IO problems exit 1.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config keys, violated parameter domains.
    Usage(String),
    /// Simulation or IO failure after a well-formed invocation.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<impact_lattice::ModelError> for CliError {
    fn from(e: impact_lattice::ModelError) -> Self {
        use impact_lattice::ModelError;
        match &e {
            ModelError::InvalidParameter { name, constraint } => {
                CliError::Usage(format!("invalid value for --{name}: must satisfy {constraint}"))
            }
            ModelError::ScheduleOutOfRange { entry, steps } => CliError::Usage(format!(
                "invalid value for --snapshots: step {entry} exceeds --steps {steps}"
            )),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}
