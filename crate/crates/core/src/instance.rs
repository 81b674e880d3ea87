//! Problem data: instances, selections and adversarial attacks.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Provenance of a generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub generator: String,
    pub seed: u64,
    /// Number of draws rejected because some weight exceeded the budget.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub redraws: u64,
}

fn is_zero(v: &u64) -> bool {
    *v == 0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    n: usize,
    p: usize,
    costs: Vec<u64>,
    weights: Vec<u64>,
    budget: u64,
    #[serde(default)]
    meta: Option<Meta>,
}

/// A robust selection instance: choose items of minimum total cost such
/// that at least `p` of them survive any attack whose weight fits in the
/// budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct Instance {
    n: usize,
    p: usize,
    costs: Vec<u64>,
    weights: Vec<u64>,
    budget: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = String;

    fn try_from(raw: RawInstance) -> Result<Self, String> {
        if raw.costs.len() != raw.n || raw.weights.len() != raw.n {
            return Err(format!(
                "n = {} but {} costs and {} weights given",
                raw.n,
                raw.costs.len(),
                raw.weights.len()
            ));
        }
        Instance::new(raw.costs, raw.weights, raw.budget, raw.p)
            .map(|inst| inst.with_meta(raw.meta))
            .map_err(|e| match e {
                Error::Input(msg) => msg,
                other => other.to_string(),
            })
    }
}

impl Instance {
    pub fn new(costs: Vec<u64>, weights: Vec<u64>, budget: u64, p: usize) -> Result<Self> {
        let n = costs.len();
        if n == 0 {
            return Err(Error::Input("instance needs at least one item".into()));
        }
        if weights.len() != n {
            return Err(Error::Input(format!(
                "{} costs but {} weights",
                n,
                weights.len()
            )));
        }
        if let Some(i) = costs.iter().position(|&c| c == 0) {
            return Err(Error::Input(format!("cost of item {} must be positive", i + 1)));
        }
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::Input(format!("weight of item {} must be positive", i + 1)));
        }
        if p == 0 || p > n {
            return Err(Error::Input(format!("p = {p} must lie in [1, {n}]")));
        }
        Ok(Self { n, p, costs, weights, budget, meta: None })
    }

    pub fn with_meta(mut self, meta: Option<Meta>) -> Self {
        self.meta = meta;
        self
    }

    /// Same data with a different requirement `p`.
    pub fn with_p(&self, p: usize) -> Result<Self> {
        Instance::new(self.costs.clone(), self.weights.clone(), self.budget, p)
            .map(|i| i.with_meta(self.meta.clone()))
    }

    /// The four-item instance used throughout the documentation:
    /// `c = (2,3,4,5)`, `w = (3,7,4,10)`, `B = 10`.
    pub fn worked_example(p: usize) -> Self {
        Instance::new(vec![2, 3, 4, 5], vec![3, 7, 4, 10], 10, p).expect("valid example")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn costs(&self) -> &[u64] {
        &self.costs
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn meta(&self) -> Option<&Meta> {
        self.meta.as_ref()
    }

    /// Item `i` can be interdicted on its own.
    pub fn attackable(&self, i: usize) -> bool {
        self.weights[i] <= self.budget
    }

    pub fn all_attackable(&self) -> bool {
        (0..self.n).all(|i| self.attackable(i))
    }

    /// Item indices sorted by weight, ties by index.
    pub fn weight_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&i| (self.weights[i], i));
        order
    }

    /// Copy with items rearranged so that new item `k` is old item `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&i| i >= self.n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::Input("not a permutation of the items".into()));
        }
        Instance::new(
            perm.iter().map(|&i| self.costs[i]).collect(),
            perm.iter().map(|&i| self.weights[i]).collect(),
            self.budget,
            self.p,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

/// A binary choice of items. Cost and size are always derived from the
/// choice vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selection {
    chosen: Vec<bool>,
    cost: u64,
    size: usize,
}

impl Selection {
    pub fn new(inst: &Instance, chosen: Vec<bool>) -> Result<Self> {
        if chosen.len() != inst.n() {
            return Err(Error::Input(format!(
                "selection has {} entries, instance has {} items",
                chosen.len(),
                inst.n()
            )));
        }
        let cost = chosen
            .iter()
            .zip(inst.costs())
            .filter(|(&x, _)| x)
            .map(|(_, &c)| c)
            .sum();
        let size = chosen.iter().filter(|&&x| x).count();
        Ok(Self { chosen, cost, size })
    }

    pub fn empty(inst: &Instance) -> Self {
        Self { chosen: vec![false; inst.n()], cost: 0, size: 0 }
    }

    /// Selection from zero-based item indices.
    pub fn from_items(inst: &Instance, items: &[usize]) -> Result<Self> {
        let mut chosen = vec![false; inst.n()];
        for &i in items {
            if i >= inst.n() {
                return Err(Error::Input(format!("item {} out of range", i + 1)));
            }
            chosen[i] = true;
        }
        Self::new(inst, chosen)
    }

    /// Parse a bit string whose first character is item 1.
    pub fn from_bits(inst: &Instance, bits: &str) -> Result<Self> {
        let chosen = bits
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Input(format!("invalid bit {other:?} in selection"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(inst, chosen)
    }

    pub fn chosen(&self) -> &[bool] {
        &self.chosen
    }

    pub fn is_chosen(&self, i: usize) -> bool {
        self.chosen[i]
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Zero-based indices of chosen items.
    pub fn items(&self) -> Vec<usize> {
        self.chosen
            .iter()
            .enumerate()
            .filter_map(|(i, &x)| x.then_some(i))
            .collect()
    }

    pub fn to_bits(&self) -> String {
        self.chosen.iter().map(|&x| if x { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_items(&self.items()))
    }
}

/// The adversary's best response to a selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackResult {
    /// Number of interdicted items.
    pub value: usize,
    /// Zero-based indices of interdicted items, ascending.
    pub attacked: Vec<usize>,
    /// Total weight of the interdicted items.
    pub spent: u64,
}

/// Render zero-based indices as a one-based set, e.g. `{1,3}`.
pub fn fmt_items(items: &[usize]) -> String {
    let inner: Vec<String> = items.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_data() {
        assert!(Instance::new(vec![1, 2], vec![1], 3, 1).is_err());
        assert!(Instance::new(vec![0, 2], vec![1, 1], 3, 1).is_err());
        assert!(Instance::new(vec![1, 2], vec![1, 0], 3, 1).is_err());
        assert!(Instance::new(vec![1, 2], vec![1, 1], 3, 0).is_err());
        assert!(Instance::new(vec![1, 2], vec![1, 1], 3, 3).is_err());
    }

    #[test]
    fn oversized_weights_are_recorded_not_rejected() {
        let inst = Instance::new(vec![1, 1], vec![1, 9], 5, 1).unwrap();
        assert!(inst.attackable(0));
        assert!(!inst.attackable(1));
        assert!(!inst.all_attackable());
    }

    #[test]
    fn selection_derives_cost_and_size() {
        let inst = Instance::worked_example(1);
        let sel = Selection::from_bits(&inst, "1001").unwrap();
        assert_eq!(sel.cost(), 7);
        assert_eq!(sel.size(), 2);
        assert_eq!(sel.items(), vec![0, 3]);
        assert_eq!(sel.to_string(), "{1,4}");
        assert!(Selection::from_bits(&inst, "101").is_err());
        assert!(Selection::from_bits(&inst, "10a1").is_err());
    }

    #[test]
    fn weight_order_breaks_ties_by_index() {
        let inst = Instance::new(vec![1, 1, 1, 1], vec![5, 2, 5, 2], 10, 1).unwrap();
        assert_eq!(inst.weight_order(), vec![1, 3, 0, 2]);
    }

    #[test]
    fn json_round_trip_and_field_order() {
        let inst = Instance::worked_example(1).with_meta(Some(Meta {
            generator: "gen1".into(),
            seed: 42,
            redraws: 0,
        }));
        let text = inst.to_json().unwrap();
        let keys: Vec<usize> = ["\"n\"", "\"p\"", "\"costs\"", "\"weights\"", "\"budget\"", "\"meta\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Instance::from_json(&text).unwrap(), inst);
    }

    #[test]
    fn json_schema_violations() {
        let bad_p = r#"{"n":2,"p":3,"costs":[1,1],"weights":[1,1],"budget":1}"#;
        assert!(matches!(Instance::from_json(bad_p), Err(Error::Schema(_))));
        let unknown = r#"{"n":1,"p":1,"costs":[1],"weights":[1],"budget":1,"extra":0}"#;
        assert!(matches!(Instance::from_json(unknown), Err(Error::Schema(_))));
        let short = r#"{"n":2,"p":1,"costs":[1],"weights":[1,1],"budget":1}"#;
        assert!(matches!(Instance::from_json(short), Err(Error::Schema(_))));
    }
}
