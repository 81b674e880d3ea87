//! The adversarial problem and robust feasibility.
//!
//! For a fixed selection the adversary maximises the number of chosen items
//! it can interdict within the budget. Packing the selected items in order
//! of non-decreasing weight is optimal, so the best attack is always a
//! prefix of the weight-sorted selection.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::instance::{AttackResult, Instance, Selection};

/// Budget needed to interdict a given number of items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttackWeight {
    Finite(u64),
    Infinite,
}

impl AttackWeight {
    pub fn finite(self) -> Option<u64> {
        match self {
            AttackWeight::Finite(w) => Some(w),
            AttackWeight::Infinite => None,
        }
    }
}

impl PartialOrd for AttackWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AttackWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AttackWeight::Finite(a), AttackWeight::Finite(b)) => a.cmp(b),
            (AttackWeight::Finite(_), AttackWeight::Infinite) => Ordering::Less,
            (AttackWeight::Infinite, AttackWeight::Finite(_)) => Ordering::Greater,
            (AttackWeight::Infinite, AttackWeight::Infinite) => Ordering::Equal,
        }
    }
}

fn check_len(inst: &Instance, x: &Selection) -> Result<()> {
    if x.len() != inst.n() {
        return Err(Error::Input(format!(
            "selection has {} entries, instance has {} items",
            x.len(),
            inst.n()
        )));
    }
    Ok(())
}

fn sorted_selected(inst: &Instance, x: &Selection) -> Vec<usize> {
    let w = inst.weights();
    let mut items = x.items();
    items.sort_by_key(|&i| (w[i], i));
    items
}

/// Maximum-cardinality attack on `x`.
pub fn phi(inst: &Instance, x: &Selection) -> Result<AttackResult> {
    check_len(inst, x)?;
    let w = inst.weights();
    let mut spent = 0u64;
    let mut attacked = Vec::new();
    for i in sorted_selected(inst, x) {
        if spent + w[i] > inst.budget() {
            break;
        }
        spent += w[i];
        attacked.push(i);
    }
    attacked.sort_unstable();
    Ok(AttackResult { value: attacked.len(), attacked, spent })
}

/// Sum of the `k` smallest weights among the selected items.
pub fn min_attack_weight(inst: &Instance, x: &Selection, k: usize) -> Result<AttackWeight> {
    check_len(inst, x)?;
    if k == 0 || k > inst.n() {
        return Err(Error::Input(format!("k = {k} must lie in [1, {}]", inst.n())));
    }
    let items = sorted_selected(inst, x);
    if items.len() < k {
        return Ok(AttackWeight::Infinite);
    }
    Ok(AttackWeight::Finite(items[..k].iter().map(|&i| inst.weights()[i]).sum()))
}

/// Outcome of a robust feasibility check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    /// Surviving items under the worst attack.
    pub survivors: usize,
    /// The worst attack; it is the violation witness when infeasible.
    pub attack: AttackResult,
}

/// `x` keeps at least `p` items under every admissible attack.
pub fn robust_feasible(inst: &Instance, x: &Selection) -> Result<Feasibility> {
    let attack = phi(inst, x)?;
    let survivors = x.size() - attack.value;
    Ok(Feasibility { feasible: survivors >= inst.p(), survivors, attack })
}
