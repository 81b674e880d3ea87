//! The compact robust formulations and their plumbing.

pub mod formulations;
pub mod model;

pub use formulations::{build_model, phi_lambda_program};
pub use model::{
    model_size, Constraint, Formulation, MilpModel, ObjectiveSense, Sense, SizeReport, VarKind, VarRole,
    Variable,
};

use crate::error::{Error, Result};
use crate::instance::{Instance, Selection};
use crate::milp::{LpSolver, LpStatus};
use crate::scalar::Scalar;

/// Optimal value of the relaxed prefix-attack program for `x`.
///
/// The relaxation is exact: this equals the greedy attack value.
pub fn phi_lambda_lp<T: Scalar>(inst: &Instance, x: &Selection) -> Result<T> {
    let m = phi_lambda_program(inst, x)?;
    let res = LpSolver::<T>::default().solve(&m)?;
    match res.status {
        LpStatus::Optimal => Ok(res.objective.expect("optimal LP has an objective")),
        other => Err(Error::Solver(format!("adversary LP ended {other:?}"))),
    }
}

/// Tolerance for reading binaries off a floating-point assignment.
pub const EXTRACT_TOL: f64 = 1e-6;

/// Read the item choice out of an assignment to `m`'s variables.
pub fn extract_selection<T: Scalar>(m: &MilpModel, inst: &Instance, assignment: &[T]) -> Result<Selection> {
    if assignment.len() != m.num_vars() {
        return Err(Error::Extraction(format!(
            "assignment has {} values, model has {} variables",
            assignment.len(),
            m.num_vars()
        )));
    }
    let mut chosen = vec![false; inst.n()];
    for &(var, item) in m.item_map() {
        if item >= inst.n() {
            return Err(Error::Extraction(format!("item map points at item {} beyond n", item + 1)));
        }
        let v = assignment[var].to_f64();
        chosen[item] = if v.abs() <= EXTRACT_TOL {
            false
        } else if (v - 1.0).abs() <= EXTRACT_TOL {
            true
        } else {
            return Err(Error::Extraction(format!(
                "variable {} has non-binary value {v}",
                m.variables()[var].name
            )));
        };
    }
    Selection::new(inst, chosen)
}
