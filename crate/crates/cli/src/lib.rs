//! Shared types of the `interdict` command-line tool.

use serde::{Deserialize, Serialize};

/// Machine-readable result of `interdict solve --json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    /// `ip1`..`ip5`, `dp` or `enum`.
    pub model: String,
    /// `optimal`, `infeasible` or `time_limit`.
    pub status: String,
    pub objective: Option<f64>,
    pub bound: Option<f64>,
    /// One-based chosen items.
    pub items: Option<Vec<usize>>,
    /// Selection bits, first character is item 1.
    pub x: Option<String>,
    pub nodes: usize,
    pub wall_time_s: f64,
}
