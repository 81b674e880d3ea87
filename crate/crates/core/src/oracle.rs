//! Ground-truth solvers independent of the MILP formulations.
//!
//! [`solve_enum`] walks all `2^n` selections and [`phi_enum`] all attack
//! subsets. [`solve_dp`] is a pseudo-polynomial dynamic program that scans
//! items in weight order and tracks how much of the budget the greedy
//! adversary has consumed so far.

use crate::adversary::robust_feasible;
use crate::error::{Error, Result};
use crate::instance::{AttackResult, Instance, Selection};

/// Largest item count accepted by the enumeration oracles.
pub const ENUM_MAX_N: usize = 22;

/// Upper limit on DP table cells.
pub const DP_MAX_STATES: usize = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub status: ExactStatus,
    pub best: Option<Selection>,
    pub objective: Option<u64>,
}

impl ExactResult {
    fn optimal(best: Selection) -> Self {
        Self { status: ExactStatus::Optimal, objective: Some(best.cost()), best: Some(best) }
    }

    fn infeasible() -> Self {
        Self { status: ExactStatus::Infeasible, best: None, objective: None }
    }
}

fn enum_guard(n: usize) -> Result<()> {
    if n > ENUM_MAX_N {
        return Err(Error::Capacity(format!(
            "enumeration limited to n <= {ENUM_MAX_N}, got n = {n}"
        )));
    }
    Ok(())
}

/// Selection vector for a bit mask in which bit `n-1-i` stands for item `i`,
/// so increasing masks are lexicographically increasing vectors.
fn mask_to_bits(mask: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> (n - 1 - i) & 1 == 1).collect()
}

/// Exhaustive search over all selections.
pub fn solve_enum(inst: &Instance) -> Result<ExactResult> {
    let n = inst.n();
    enum_guard(n)?;
    let mut best: Option<Selection> = None;
    for mask in 0u32..(1u32 << n) {
        if (mask.count_ones() as usize) < inst.p() {
            continue;
        }
        let x = Selection::new(inst, mask_to_bits(mask, n))?;
        if best.as_ref().is_some_and(|b| x.cost() >= b.cost()) {
            continue;
        }
        if robust_feasible(inst, &x)?.feasible {
            best = Some(x);
        }
    }
    Ok(best.map_or_else(ExactResult::infeasible, ExactResult::optimal))
}

/// Best attack by exhaustive enumeration of interdicted subsets.
pub fn phi_enum(inst: &Instance, x: &Selection) -> Result<AttackResult> {
    let n = inst.n();
    enum_guard(n)?;
    if x.len() != n {
        return Err(Error::Input("selection length does not match instance".into()));
    }
    let support = x.items();
    let w = inst.weights();
    let mut best = AttackResult { value: 0, attacked: Vec::new(), spent: 0 };
    for mask in 0u32..(1u32 << support.len()) {
        let attacked: Vec<usize> = support
            .iter()
            .enumerate()
            .filter_map(|(j, &i)| (mask >> j & 1 == 1).then_some(i))
            .collect();
        let spent: u64 = attacked.iter().map(|&i| w[i]).sum();
        if spent > inst.budget() {
            continue;
        }
        let better = attacked.len() > best.value
            || (attacked.len() == best.value
                && (spent < best.spent || (spent == best.spent && attacked < best.attacked)));
        if better {
            best = AttackResult { value: attacked.len(), attacked, spent };
        }
    }
    Ok(best)
}

const UNREACHED: u64 = u64::MAX;

/// How the DP reached a cell.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    None,
    Skip,
    /// Selected the item; the predecessor cell index is stored alongside.
    Select,
}

/// Exact optimum by dynamic programming over weight-sorted items.
///
/// State after each item: budget consumed by the greedy attack (`0..=B`),
/// survivors counted up to `p`, and whether some selected item has already
/// failed to fit. Once that flag is set no later item fits either, so the
/// consumed budget no longer matters and is collapsed to zero.
pub fn solve_dp(inst: &Instance) -> Result<ExactResult> {
    let n = inst.n();
    let p = inst.p();
    let cap = usize::try_from(inst.budget())
        .ok()
        .and_then(|b| b.checked_add(1))
        .ok_or_else(|| Error::Capacity("budget too large for the DP table".into()))?;
    let layer = cap
        .checked_mul(p + 1)
        .and_then(|v| v.checked_mul(2))
        .ok_or_else(|| Error::Capacity("DP layer size overflows".into()))?;
    if layer.saturating_mul(n + 1) > DP_MAX_STATES {
        return Err(Error::Capacity(format!(
            "DP needs {} states, limit is {DP_MAX_STATES}",
            layer.saturating_mul(n + 1)
        )));
    }
    let idx = |acc: usize, surv: usize, flag: usize| (flag * (p + 1) + surv) * cap + acc;

    let order = inst.weight_order();
    let mut cost = vec![UNREACHED; layer];
    cost[idx(0, 0, 0)] = 0;
    // steps[k][cell] and preds[k][cell] describe how layer k+1 was reached
    let mut steps: Vec<Vec<Step>> = Vec::with_capacity(n);
    let mut preds: Vec<Vec<u32>> = Vec::with_capacity(n);

    for &item in &order {
        let w = inst.weights()[item] as usize;
        let c = inst.costs()[item];
        let mut next = vec![UNREACHED; layer];
        let mut step = vec![Step::None; layer];
        let mut pred = vec![0u32; layer];
        for flag in 0..2 {
            for surv in 0..=p {
                for acc in 0..cap {
                    let from = idx(acc, surv, flag);
                    let base = cost[from];
                    if base == UNREACHED {
                        continue;
                    }
                    // skip first so that it wins ties
                    if base < next[from] {
                        next[from] = base;
                        step[from] = Step::Skip;
                        pred[from] = from as u32;
                    }
                    let to = if flag == 0 && acc + w < cap {
                        idx(acc + w, surv, 0)
                    } else {
                        idx(0, (surv + 1).min(p), 1)
                    };
                    let val = base + c;
                    if val < next[to] {
                        next[to] = val;
                        step[to] = Step::Select;
                        pred[to] = from as u32;
                    }
                }
            }
        }
        cost = next;
        steps.push(step);
        preds.push(pred);
    }

    // feasible end states: survivors reached p
    let mut best: Option<(u64, usize)> = None;
    for flag in 0..2 {
        for acc in 0..cap {
            let cell = idx(acc, p, flag);
            let v = cost[cell];
            if v != UNREACHED && best.is_none_or(|(b, _)| v < b) {
                best = Some((v, cell));
            }
        }
    }
    let Some((_, mut cell)) = best else {
        return Ok(ExactResult::infeasible());
    };
    let mut chosen = vec![false; n];
    for k in (0..n).rev() {
        if steps[k][cell] == Step::Select {
            chosen[order[k]] = true;
        }
        cell = preds[k][cell] as usize;
    }
    Ok(ExactResult::optimal(Selection::new(inst, chosen)?))
}
