//! In-repo exact solving and model export.

pub mod bnb;
pub mod export;
pub mod simplex;

pub use bnb::{BbLimits, BranchAndBound, MilpResult, MilpStatus};
pub use export::{export, format_rational, ExportFormat};
pub use simplex::{LpResult, LpSolver, LpStatus};

use crate::error::Result;
use crate::models::MilpModel;

/// Solve the LP relaxation of `m` in double precision.
pub fn solve_lp(m: &MilpModel) -> Result<LpResult<f64>> {
    LpSolver::<f64>::default().solve(m)
}

/// Solve `m` to optimality (or the given limits) in double precision.
pub fn solve_bb(m: &MilpModel, limits: BbLimits) -> Result<MilpResult<f64>> {
    BranchAndBound::<f64>::default().solve(m, limits)
}
