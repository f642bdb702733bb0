//! Error type shared across the crate.
//!
//! Every fallible operation returns `Result<_, Error>`. Each variant carries
//! enough context to print a one-line diagnostic, and [`Error::code`] gives a
//! stable machine-readable tag used by the CLI's JSON error output.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("base {base} is not admissible; bases must exceed e^(1/e)")]
    BaseOutOfRange { base: f64 },

    #[error("{what} did not converge (residual {residual:.3e})")]
    NoConvergence { what: &'static str, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("backward orbit left the convergence basin near {at}")]
    BasinEscape { at: Complex64 },

    #[error(
        "iteration depth exhausted; successive truncations still differ by {last_increment:.3e}"
    )]
    DepthInsufficient { last_increment: f64 },

    #[error("forward orbit overflowed")]
    OverflowEscape,

    #[error("evaluation at a fixed point of the base-b exponential")]
    AtFixedPoint,

    #[error("logarithm branch collapsed at axis node y = {node_y}")]
    BranchCollapse { node_y: f64 },

    #[error("point {z} is outside the evaluation strip")]
    OutOfStrip { z: Complex64 },

    #[error("point {z} lies on the excluded ray (real axis, Re <= -2)")]
    OutsideDomain { z: Complex64 },

    #[error("tower overflow while evaluating at {z}")]
    Overflow { z: Complex64 },

    #[error("imaginary part of {z} exceeds the table height (|Im| <= {max_im})")]
    DomainClipped { z: Complex64, max_im: f64 },

    #[error("descent crossed the logarithm cut at {at}")]
    BranchViolation { at: Complex64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("table file error: {0}")]
    TableFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable tag for machine consumption (CLI JSON errors).
    pub fn code(&self) -> &'static str {
        match self {
            Error::BaseOutOfRange { .. } => "base_out_of_range",
            Error::NoConvergence { .. } => "no_convergence",
            Error::InvalidParams(_) => "invalid_params",
            Error::BasinEscape { .. } => "basin_escape",
            Error::DepthInsufficient { .. } => "depth_insufficient",
            Error::OverflowEscape => "overflow_escape",
            Error::AtFixedPoint => "at_fixed_point",
            Error::BranchCollapse { .. } => "branch_collapse",
            Error::OutOfStrip { .. } => "out_of_strip",
            Error::OutsideDomain { .. } => "outside_domain",
            Error::Overflow { .. } => "overflow",
            Error::DomainClipped { .. } => "domain_clipped",
            Error::BranchViolation { .. } => "branch_violation",
            Error::InvalidCurve(_) => "invalid_curve",
            Error::TableFormat(_) => "table_format",
            Error::Io(_) => "io",
        }
    }

    /// Process exit code the CLI maps this error to: 2 for usage/domain
    /// problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BaseOutOfRange { .. }
            | Error::InvalidParams(_)
            | Error::OutOfStrip { .. }
            | Error::OutsideDomain { .. }
            | Error::DomainClipped { .. }
            | Error::InvalidCurve(_)
            | Error::TableFormat(_)
            | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
