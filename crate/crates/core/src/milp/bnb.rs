//! LP-based branch-and-bound.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::milp::simplex::{LpSolver, LpStatus};
use crate::models::{MilpModel, ObjectiveSense};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BbLimits {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<usize>,
}

impl BbLimits {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn seconds(secs: f64) -> Self {
        Self { time_limit: Some(Duration::from_secs_f64(secs)), node_limit: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MilpStatus {
    Optimal,
    Infeasible,
    /// A time or node limit stopped the search.
    TimeLimit,
}

impl MilpStatus {
    pub fn tag(self) -> &'static str {
        match self {
            MilpStatus::Optimal => "optimal",
            MilpStatus::Infeasible => "infeasible",
            MilpStatus::TimeLimit => "time_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpResult<T> {
    pub status: MilpStatus,
    /// Incumbent objective.
    pub objective: Option<T>,
    /// Best proven bound; `None` when no open node remains and nothing is
    /// feasible.
    pub bound: Option<T>,
    /// Incumbent values per variable id, discrete entries rounded.
    pub solution: Option<Vec<T>>,
    /// LP relaxations solved.
    pub nodes: usize,
    /// Seconds spent in the search.
    pub wall_time: f64,
}

/// A bound override `(var, lower, upper)` applied on top of the root bounds.
type BoundChange = (usize, Rational, Option<Rational>);

struct Node<T> {
    id: usize,
    /// Parent relaxation value in minimisation form.
    bound: Option<T>,
    changes: Vec<BoundChange>,
}

// Heap order: lower bound first, then lower id. Only the root lacks a bound.
impl<T: PartialOrd> Ord for Node<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        let by_bound = match (&self.bound, &other.bound) {
            (Some(a), Some(b)) => a.partial_cmp(b).unwrap_or(Ordering::Equal),
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        by_bound.then(self.id.cmp(&other.id))
    }
}

impl<T: PartialOrd> PartialOrd for Node<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: PartialOrd> PartialEq for Node<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: PartialOrd> Eq for Node<T> {}

/// Branch-and-bound over scalar `T`.
///
/// Search order: depth-first, up branch first, until the first incumbent;
/// best bound after that (ties to the older node). Branching picks the most fractional
/// discrete variable, ties to the lowest id.
#[derive(Debug, Clone, Default)]
pub struct BranchAndBound<T> {
    pub lp: LpSolver<T>,
}

impl<T: Scalar> BranchAndBound<T> {
    pub fn new() -> Self {
        Self { lp: LpSolver::default() }
    }

    pub fn solve(&self, m: &MilpModel, limits: BbLimits) -> Result<MilpResult<T>> {
        m.validate()?;
        let start = Instant::now();
        let maximize = m.sense() == ObjectiveSense::Maximize;
        let integral = m.integral_objective();
        let discrete: Vec<usize> = (0..m.num_vars())
            .filter(|&v| m.variables()[v].kind.is_discrete())
            .collect();
        let root_lower: Vec<Rational> = m.variables().iter().map(|v| v.lower).collect();
        let root_upper: Vec<Option<Rational>> = m.variables().iter().map(|v| v.upper).collect();

        // all comparisons below are on minimisation keys
        let key = |obj: T| if maximize { -obj } else { obj };
        let unkey = |k: T| if maximize { -k } else { k };
        let round_bound = |b: T| if integral { (b - T::int_tol()).ceil() } else { b };
        let prunable = |b: &T, inc: &T| {
            if integral {
                let slack = if T::EXACT { T::zero() } else { T::from_ratio(Rational::new(1, 1_000_000_000)) };
                b.clone() > inc.clone() - T::one() + slack
            } else {
                let gap = if T::EXACT { T::zero() } else { T::from_ratio(Rational::new(1, 1_000_000)) };
                b.clone() >= inc.clone() - gap
            }
        };

        // dive stack until the first incumbent, best-bound heap afterwards
        let mut dive: Vec<Node<T>> = vec![Node { id: 0, bound: None, changes: Vec::new() }];
        let mut heap: BinaryHeap<Reverse<Node<T>>> = BinaryHeap::new();
        let mut next_id = 1usize;
        let mut incumbent: Option<(T, Vec<T>)> = None;
        let mut nodes = 0usize;
        let mut lower = root_lower.clone();
        let mut upper = root_upper.clone();

        let finish = |status, incumbent: Option<(T, Vec<T>)>, bound: Option<T>, nodes| {
            let (objective, solution) = match incumbent {
                Some((k, sol)) => (Some(unkey(k)), Some(sol)),
                None => (None, None),
            };
            MilpResult {
                status,
                objective,
                bound: bound.map(unkey),
                solution,
                nodes,
                wall_time: start.elapsed().as_secs_f64().max(1e-9),
            }
        };

        loop {
            if incumbent.is_some() && !dive.is_empty() {
                heap.extend(dive.drain(..).map(Reverse));
            }
            let Some(node) = dive.pop().or_else(|| heap.pop().map(|Reverse(n)| n)) else {
                break;
            };
            let over_time = limits.time_limit.is_some_and(|t| start.elapsed() >= t);
            let over_nodes = limits.node_limit.is_some_and(|cap| nodes >= cap);
            if over_time || over_nodes {
                let mut best: Option<T> = incumbent.as_ref().map(|(k, _)| k.clone());
                for n in std::iter::once(&node).chain(dive.iter()).chain(heap.iter().map(|r| &r.0)) {
                    match &n.bound {
                        None => {
                            best = None;
                            break;
                        }
                        Some(b) => {
                            if best.as_ref().is_none_or(|cur| b < cur) {
                                best = Some(b.clone());
                            }
                        }
                    }
                }
                return Ok(finish(MilpStatus::TimeLimit, incumbent, best, nodes));
            }

            if let (Some(b), Some((inc, _))) = (&node.bound, &incumbent) {
                if prunable(b, inc) {
                    continue;
                }
            }

            lower.clone_from(&root_lower);
            upper.clone_from(&root_upper);
            for (v, lo, hi) in &node.changes {
                lower[*v] = *lo;
                upper[*v] = *hi;
            }
            nodes += 1;
            let deadline = limits.time_limit.map(|t| start + t);
            let Some(lp) = self.lp.solve_until(m, &lower, &upper, deadline)? else {
                dive.push(node);
                nodes -= 1;
                continue;
            };
            match lp.status {
                LpStatus::Infeasible => continue,
                LpStatus::Unbounded => {
                    return Err(Error::Solver("LP relaxation is unbounded".into()));
                }
                LpStatus::Optimal => {}
            }
            let value = round_bound(key(lp.objective.expect("optimal LP has an objective")));
            if let Some((inc, _)) = &incumbent {
                if prunable(&value, inc) {
                    continue;
                }
            }

            // most fractional discrete variable
            let mut branch: Option<(usize, T)> = None;
            for &v in &discrete {
                let x = &lp.primal[v];
                let frac = x.clone() - x.floor();
                let dist = if frac.clone() < T::one() - frac.clone() { frac.clone() } else { T::one() - frac.clone() };
                if dist <= T::int_tol() {
                    continue;
                }
                if branch.as_ref().is_none_or(|(_, d)| dist > *d) {
                    branch = Some((v, dist));
                }
            }

            match branch {
                None => {
                    let mut sol = lp.primal;
                    for &v in &discrete {
                        sol[v] = sol[v].round_nearest();
                    }
                    let obj = m
                        .objective()
                        .iter()
                        .fold(T::zero(), |acc, (v, c)| acc + T::from_ratio(*c) * sol[*v].clone());
                    let k = key(obj);
                    if incumbent.as_ref().is_none_or(|(inc, _)| k < *inc) {
                        incumbent = Some((k, sol));
                    }
                }
                Some((v, _)) => {
                    let fl_int = to_rational(&lp.primal[v].floor())?;
                    let mut down = node.changes.clone();
                    down.push((v, lower[v], Some(fl_int)));
                    let mut up = node.changes;
                    up.push((v, fl_int + 1, upper[v]));
                    // the up child is pushed last so the dive takes it first
                    dive.push(Node { id: next_id, bound: Some(value.clone()), changes: down });
                    dive.push(Node { id: next_id + 1, bound: Some(value), changes: up });
                    next_id += 2;
                }
            }
        }

        Ok(match incumbent {
            Some((k, sol)) => {
                let bound = Some(k.clone());
                finish(MilpStatus::Optimal, Some((k, sol)), bound, nodes)
            }
            None => finish(MilpStatus::Infeasible, None, None, nodes),
        })
    }
}

fn to_rational<T: Scalar>(v: &T) -> Result<Rational> {
    let f = v.to_f64();
    if !f.is_finite() || f.abs() > 1e15 {
        return Err(Error::Solver(format!("branching value {f} out of range")));
    }
    Ok(Rational::from_integer(f.round() as i64))
}
