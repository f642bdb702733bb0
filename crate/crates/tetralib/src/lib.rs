//! Numerics for holomorphic tetration with bases b > e^(1/e).
//!
//! The crate builds, in order of dependency:
//!
//! - [`fixpoint`]: the principal complex fixed point L of z -> b^z and its
//!   multiplier.
//! - [`koenigs`]: the Koenigs linearizing coordinate of exp_b at L, its
//!   entire inverse, and the regular Abel function derived from them.
//! - [`solver`]: a Cauchy-integral iteration producing the holomorphic
//!   tetration base b on a vertical strip, i.e. the function f with
//!   f(0) = 1, f(z+1) = b^f(z), approaching L and conj(L) towards +-i*inf.
//! - [`special`]: tetration sexp_b, its inverse slog_b, and fractional
//!   iterates exp_b^(c) = sexp_b(c + slog_b(z)) on the slit plane.
//! - [`criteria`]: sampled-curve diagnostics (initial curves, side
//!   classification, monotonicity/covering checks) that certify an Abel
//!   function numerically.
//! - [`figures`]: CSV emitters for the standard plots (real-axis tetration,
//!   complex map of sexp, the fractional-iterate family).
//!
//! Every example under `examples/` exercises one capability end to end:
//!
//! ```text
//! cargo run --example fixed_point
//! cargo run --example koenigs_function
//! cargo run --example solve_strip
//! cargo run --example tetration_values
//! cargo run --example fractional_iterates
//! cargo run --example uniqueness_criteria
//! cargo run --example figure_data
//! ```
//!
//! The `tetra` binary wraps the same capabilities as subcommands for shell
//! use (`solve`, `sexp`, `slog`, `iterate`, `verify`, `emit-figure`, ...).

// Negated comparisons (`!(a < b)`) fail closed on NaN and stay; index loops
// mirror the recurrences and grids they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod criteria;
pub mod error;
pub mod figures;
pub mod fixpoint;
pub mod geometry;
pub mod koenigs;
pub mod solver;
pub mod special;
pub mod table_io;

pub use criteria::{
    check_covering, check_criterion_b, check_criterion_c, classify_side, curve_ell,
    is_initial_curve, push_curve, szekeres_perturbation, Criterion, CriterionReport,
    InitialRegionH, SampledCurve, Side, Window, Witness,
};
pub use error::{Error, Result};
pub use figures::{
    fig1_real_axis, fig3_complex_grid, fig3_region_boundary, fig4_iterate_family, FIG4_C_LIST,
};
pub use fixpoint::{principal_fixed_point, validate_base, Base, FixedPointData};
pub use solver::{evaluate_strip, residual_report, solve, SolverParams, StripTable};
pub use special::{emit_iterate_family, in_domain, iterate, sexp, slog, BranchPolicy};
pub use table_io::{load_table, save_table, table_from_json, table_to_json};
