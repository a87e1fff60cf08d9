//! Error type shared by the model, kernel and observables layers.

use core::fmt;

/// Errors reported by lattice construction, evolution and measurement.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    /// A model parameter violates its domain.
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
    },
    /// An agent index does not address a lattice site.
    IndexOutOfBounds { index: usize, len: usize },
    /// An interaction kernel was built for a different lattice or exponent.
    KernelMismatch {
        kernel_side: u32,
        kernel_alpha: f64,
        config_side: u32,
        config_alpha: f64,
    },
    /// A snapshot schedule entry lies past the end of the run.
    ScheduleOutOfRange { entry: u32, steps: u32 },
    /// Ensemble statistics passed to a trend check disagree on a parameter
    /// that is supposed to be held fixed.
    TrendParameterMismatch { name: &'static str },
    /// A trend check needs at least two points, ordered by the varying axis.
    TrendAxisNotIncreasing,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::InvalidParameter { name, constraint } => {
                write!(f, "invalid parameter `{name}`: must satisfy {constraint}")
            }
            ModelError::IndexOutOfBounds { index, len } => {
                write!(f, "agent index {index} out of bounds for lattice of {len} sites")
            }
            ModelError::KernelMismatch {
                kernel_side,
                kernel_alpha,
                config_side,
                config_alpha,
            } => write!(
                f,
                "kernel built for L={kernel_side}, alpha={kernel_alpha} cannot serve \
                 configuration with L={config_side}, alpha={config_alpha}"
            ),
            ModelError::ScheduleOutOfRange { entry, steps } => {
                write!(f, "snapshot step {entry} exceeds run length {steps}")
            }
            ModelError::TrendParameterMismatch { name } => {
                write!(f, "trend check inputs disagree on fixed parameter `{name}`")
            }
            ModelError::TrendAxisNotIncreasing => {
                write!(f, "trend check needs >= 2 points with a strictly increasing axis")
            }
        }
    }
}

impl core::error::Error for ModelError {}
