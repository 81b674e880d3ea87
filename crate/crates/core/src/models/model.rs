//! Solver-agnostic mixed-integer linear programs with exact coefficients.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

impl VarKind {
    pub fn is_discrete(self) -> bool {
        !matches!(self, VarKind::Continuous)
    }
}

/// What a variable stands for in a formulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarRole {
    /// Item choice `x`.
    Item,
    /// Candidate-attack indicator of the inner adversary program.
    Lambda,
    /// Dual multipliers of attack constraints.
    Alpha,
    /// Dual multipliers of the single-choice or unit-bound constraints.
    Beta,
    /// Products of an `Alpha` and an item choice.
    Mu,
    /// Attack indicators or rounded budget ratios.
    Y,
    /// Products of a `Y` and an item choice.
    Z,
    /// Anything not produced by a formulation builder.
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: Rational,
    /// `None` is `+inf`.
    pub upper: Option<Rational>,
    pub role: VarRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveSense {
    Minimize,
    Maximize,
}

/// The five compact robust formulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    Ip1,
    Ip2,
    Ip3,
    Ip4,
    Ip5,
}

impl Formulation {
    pub const ALL: [Formulation; 5] = [
        Formulation::Ip1,
        Formulation::Ip2,
        Formulation::Ip3,
        Formulation::Ip4,
        Formulation::Ip5,
    ];

    /// Formulations whose builder accepts requirement `p`.
    pub fn applicable(p: usize) -> Vec<Formulation> {
        Self::ALL.into_iter().filter(|f| *f != Formulation::Ip1 || p == 1).collect()
    }

    pub fn tag(self) -> &'static str {
        match self {
            Formulation::Ip1 => "ip1",
            Formulation::Ip2 => "ip2",
            Formulation::Ip3 => "ip3",
            Formulation::Ip4 => "ip4",
            Formulation::Ip5 => "ip5",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Formulation::Ip1 => "IP-1",
            Formulation::Ip2 => "IP-2",
            Formulation::Ip3 => "IP-3",
            Formulation::Ip4 => "IP-4",
            Formulation::Ip5 => "IP-5",
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "ip1" => Ok(Formulation::Ip1),
            "ip2" => Ok(Formulation::Ip2),
            "ip3" => Ok(Formulation::Ip3),
            "ip4" => Ok(Formulation::Ip4),
            "ip5" => Ok(Formulation::Ip5),
            _ => Err(Error::Input(format!("unknown formulation {s:?}"))),
        }
    }
}

/// A linear model. Variables are identified by their position.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    name: String,
    formulation: Option<Formulation>,
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    sense: ObjectiveSense,
    objective: Vec<(usize, Rational)>,
    /// `(var id, original item index)` for every item variable.
    item_map: Vec<(usize, usize)>,
}

impl MilpModel {
    pub fn new(name: impl Into<String>, sense: ObjectiveSense) -> Self {
        Self {
            name: name.into(),
            formulation: None,
            variables: Vec::new(),
            constraints: Vec::new(),
            sense,
            objective: Vec::new(),
            item_map: Vec::new(),
        }
    }

    pub(crate) fn set_formulation(&mut self, f: Formulation) {
        self.formulation = Some(f);
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: Rational,
        upper: Option<Rational>,
        role: VarRole,
    ) -> usize {
        let (lower, upper) = match kind {
            VarKind::Binary => (Rational::zero(), Some(Rational::from_integer(1))),
            _ => (lower, upper),
        };
        self.variables.push(Variable { name: name.into(), kind, lower, upper, role });
        self.variables.len() - 1
    }

    /// Non-negative continuous variable without upper bound.
    pub fn add_nonneg(&mut self, name: impl Into<String>, role: VarRole) -> usize {
        self.add_var(name, VarKind::Continuous, Rational::zero(), None, role)
    }

    pub fn add_binary(&mut self, name: impl Into<String>, role: VarRole) -> usize {
        self.add_var(name, VarKind::Binary, Rational::zero(), None, role)
    }

    /// Binary item variable tied to original item `item`.
    pub fn add_item_var(&mut self, item: usize) -> usize {
        let id = self.add_binary(format!("x{}", item + 1), VarRole::Item);
        self.item_map.push((id, item));
        id
    }

    /// Append a constraint named `c<k>` by position. Zero coefficients are
    /// dropped and repeated variables merged.
    pub fn add_constraint(&mut self, terms: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) -> usize {
        let name = format!("c{}", self.constraints.len() + 1);
        self.add_named_constraint(name, terms, sense, rhs)
    }

    pub fn add_named_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, Rational)>,
        sense: Sense,
        rhs: Rational,
    ) -> usize {
        let terms = normalize_terms(terms);
        debug_assert!(terms.iter().all(|&(v, _)| v < self.variables.len()));
        self.constraints.push(Constraint { name: name.into(), terms, sense, rhs });
        self.constraints.len() - 1
    }

    pub fn set_objective(&mut self, terms: Vec<(usize, Rational)>) {
        self.objective = normalize_terms(terms);
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn formulation(&self) -> Option<Formulation> {
        self.formulation
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn sense(&self) -> ObjectiveSense {
        self.sense
    }

    pub fn objective(&self) -> &[(usize, Rational)] {
        &self.objective
    }

    pub fn item_map(&self) -> &[(usize, usize)] {
        &self.item_map
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_id(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Objective coefficients are integers and only discrete variables carry
    /// them, so every integer-feasible objective value is an integer.
    pub fn integral_objective(&self) -> bool {
        self.objective
            .iter()
            .all(|(v, c)| c.is_integer() && self.variables[*v].kind.is_discrete())
    }

    /// Maximum violation of constraints and bounds by `values`, in `f64`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for c in &self.constraints {
            let lhs: f64 = c.terms.iter().map(|(v, a)| to_f64(a) * values[*v]).sum();
            let rhs = to_f64(&c.rhs);
            let viol = match c.sense {
                Sense::Le => lhs - rhs,
                Sense::Ge => rhs - lhs,
                Sense::Eq => (lhs - rhs).abs(),
            };
            worst = worst.max(viol);
        }
        for (v, var) in self.variables.iter().enumerate() {
            worst = worst.max(to_f64(&var.lower) - values[v]);
            if let Some(u) = &var.upper {
                worst = worst.max(values[v] - to_f64(u));
            }
        }
        worst
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|(v, c)| to_f64(c) * values[*v]).sum()
    }

    pub fn validate(&self) -> Result<()> {
        for (v, var) in self.variables.iter().enumerate() {
            if var.upper.is_some_and(|u| u < var.lower) {
                return Err(Error::Input(format!("variable {} ({}) has empty domain", v, var.name)));
            }
            if var.kind == VarKind::Binary && (var.lower != Rational::zero() || var.upper != Some(Rational::from_integer(1))) {
                return Err(Error::Input(format!("binary variable {} must have bounds [0,1]", var.name)));
            }
        }
        let n = self.variables.len();
        let bad = self
            .constraints
            .iter()
            .flat_map(|c| c.terms.iter())
            .chain(self.objective.iter())
            .any(|(v, _)| *v >= n);
        if bad {
            return Err(Error::Input("term references unknown variable".into()));
        }
        Ok(())
    }
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn normalize_terms(mut terms: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    terms.sort_by_key(|&(v, _)| v);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(terms.len());
    for (v, c) in terms {
        match out.last_mut() {
            Some((last, acc)) if *last == v => *acc += c,
            _ => out.push((v, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Counts of what a formulation adds to the nominal selection model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SizeReport {
    pub continuous_added: usize,
    pub discrete_added: usize,
    /// Constraints beyond the (possibly modified) cardinality constraint.
    pub constraints_added: usize,
}

/// Size of `m` relative to the nominal model. Item variables are excluded
/// and the first constraint is taken to be the cardinality constraint.
pub fn model_size(m: &MilpModel) -> SizeReport {
    let extra = m.variables().iter().filter(|v| v.role != VarRole::Item);
    let (mut continuous_added, mut discrete_added) = (0, 0);
    for v in extra {
        if v.kind.is_discrete() {
            discrete_added += 1;
        } else {
            continuous_added += 1;
        }
    }
    SizeReport {
        continuous_added,
        discrete_added,
        constraints_added: m.constraints().len().saturating_sub(1),
    }
}
