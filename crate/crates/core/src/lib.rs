//! Exact models and solvers for robust selection under budgeted
//! interdiction uncertainty.
//!
//! An adversary may interdict selected items, paying `w_i` per item out of
//! a budget `B`; at least `p` selected items must survive every attack.
//! The crate provides the linear-time adversary, two independent exact
//! oracles, five compact MILP formulations, an in-repo simplex and
//! branch-and-bound engine, instance generators and a benchmark harness.
//!
//! The LP and MILP engines are generic over [`Scalar`]; the aliases below
//! fix the common instantiations.

pub mod adversary;
pub mod bench;
pub mod error;
pub mod instance;
pub mod instgen;
pub mod milp;
pub mod models;
pub mod oracle;
pub mod scalar;

pub use adversary::{min_attack_weight, phi, robust_feasible, AttackWeight, Feasibility};
pub use error::{Error, Result};
pub use instance::{AttackResult, Instance, Meta, Selection};
pub use milp::{solve_bb, solve_lp, BbLimits, ExportFormat, MilpStatus, LpStatus};
pub use models::{build_model, extract_selection, model_size, phi_lambda_lp, Formulation, MilpModel, SizeReport};
pub use oracle::{phi_enum, solve_dp, solve_enum, ExactResult, ExactStatus};
pub use scalar::{Rational, Scalar};

/// Arbitrary-precision rational scalar.
pub type Exact = num_rational::BigRational;

/// Double-precision simplex.
pub type LpSolverF64 = milp::LpSolver<f64>;
/// Single-precision simplex.
pub type LpSolverF32 = milp::LpSolver<f32>;
/// Exact rational simplex.
pub type ExactLpSolver = milp::LpSolver<Exact>;

/// Double-precision branch-and-bound.
pub type BranchAndBoundF64 = milp::BranchAndBound<f64>;
/// Single-precision branch-and-bound.
pub type BranchAndBoundF32 = milp::BranchAndBound<f32>;
/// Exact rational branch-and-bound.
pub type ExactBranchAndBound = milp::BranchAndBound<Exact>;

pub type LpResultF64 = milp::LpResult<f64>;
pub type MilpResultF64 = milp::MilpResult<f64>;
