//! Builders for the five compact robust formulations.
//!
//! Variable names: `x<i>` is original item `i` (one-based); every other
//! index refers to the position in the model's item order, which is
//! weight-sorted for IP-2, IP-3 and IP-5 and the original order for IP-1
//! and IP-4.
//!
//! | model | auxiliary variables                                 |
//! |-------|-----------------------------------------------------|
//! | IP-2  | `alpha<k>`, `beta`, `mu<i>_<k>` (i <= k)             |
//! | IP-3  | `alpha`, `y<k>` (integer), `z<i>_<k>` (i <= k)       |
//! | IP-4  | `y<k>` (binary), `alpha<k>`, `beta<k>_<i>`           |
//! | IP-5  | `y<k>` (binary)                                     |
//!
//! Constraints are named `c1, c2, ...` in creation order. `c1` is always the
//! (modified) cardinality constraint; the remaining families follow in the
//! order listed in each builder.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::models::model::{Formulation, MilpModel, ObjectiveSense, Sense, VarKind, VarRole};
use crate::scalar::Rational;

fn r(v: i64) -> Rational {
    Rational::from_integer(v)
}

fn ri(v: u64) -> Rational {
    Rational::from_integer(i64::try_from(v).expect("data fits in i64"))
}

fn check_assumptions(inst: &Instance, kind: Formulation) -> Result<()> {
    if let Some(i) = (0..inst.n()).find(|&i| !inst.attackable(i)) {
        return Err(Error::Assumption(format!(
            "item {} has weight {} > budget {}; formulations require every weight to fit in the budget",
            i + 1,
            inst.weights()[i],
            inst.budget()
        )));
    }
    if kind == Formulation::Ip1 && inst.p() != 1 {
        return Err(Error::Unsupported(format!(
            "IP-1 is only applicable to p = 1 (instance has p = {})",
            inst.p()
        )));
    }
    if i64::try_from(inst.weights().iter().sum::<u64>()).is_err() || inst.budget() >= i64::MAX as u64 / 4 {
        return Err(Error::Capacity("weights too large for exact coefficients".into()));
    }
    Ok(())
}

/// Start a model with item variables in `order` and the nominal objective.
fn base_model(inst: &Instance, kind: Formulation, order: &[usize]) -> (MilpModel, Vec<usize>) {
    let mut m = MilpModel::new(kind.label(), ObjectiveSense::Minimize);
    m.set_formulation(kind);
    let x: Vec<usize> = order.iter().map(|&item| m.add_item_var(item)).collect();
    let obj = order.iter().zip(&x).map(|(&item, &v)| (v, ri(inst.costs()[item]))).collect();
    m.set_objective(obj);
    (m, x)
}

/// Build formulation `kind` for `inst`.
pub fn build_model(inst: &Instance, kind: Formulation) -> Result<MilpModel> {
    check_assumptions(inst, kind)?;
    Ok(match kind {
        Formulation::Ip1 => build_ip1(inst),
        Formulation::Ip2 => build_ip2(inst),
        Formulation::Ip3 => build_ip3(inst),
        Formulation::Ip4 => build_ip4(inst),
        Formulation::Ip5 => build_ip5(inst),
    })
}

/// Total weight strictly above the budget:
/// `sum_i w_i x_i >= B + 1`.
fn build_ip1(inst: &Instance) -> MilpModel {
    let order: Vec<usize> = (0..inst.n()).collect();
    let (mut m, x) = base_model(inst, Formulation::Ip1, &order);
    let terms = order.iter().map(|&i| (x[i], ri(inst.weights()[i]))).collect();
    m.add_constraint(terms, Sense::Ge, ri(inst.budget()) + 1);
    m
}

/// Dual of the prefix-attack LP, linearised with `mu_ik = alpha_k x_i`.
///
/// Families after `c1` (`sum x - beta >= p`):
/// attack rows `sum_{i<=k} (w_i mu_ik - x_i) - B alpha_k + beta >= 0` per k,
/// then `mu_ik <= k x_i` for all (k, i<=k), then `mu_ik <= alpha_k`.
fn build_ip2(inst: &Instance) -> MilpModel {
    let n = inst.n();
    let order = inst.weight_order();
    let w: Vec<u64> = order.iter().map(|&i| inst.weights()[i]).collect();
    let (mut m, x) = base_model(inst, Formulation::Ip2, &order);
    let alpha: Vec<usize> = (1..=n).map(|k| m.add_nonneg(format!("alpha{k}"), VarRole::Alpha)).collect();
    let beta = m.add_nonneg("beta", VarRole::Beta);
    // mu[k][i] for i <= k, zero-based
    let mu: Vec<Vec<usize>> = (0..n)
        .map(|k| (0..=k).map(|i| m.add_nonneg(format!("mu{}_{}", i + 1, k + 1), VarRole::Mu)).collect())
        .collect();

    let mut card: Vec<(usize, Rational)> = x.iter().map(|&v| (v, r(1))).collect();
    card.push((beta, r(-1)));
    m.add_constraint(card, Sense::Ge, ri(inst.p() as u64));

    for k in 0..n {
        let mut terms = Vec::with_capacity(2 * k + 4);
        for i in 0..=k {
            terms.push((mu[k][i], ri(w[i])));
            terms.push((x[i], r(-1)));
        }
        terms.push((alpha[k], -ri(inst.budget())));
        terms.push((beta, r(1)));
        m.add_constraint(terms, Sense::Ge, r(0));
    }
    for k in 0..n {
        for i in 0..=k {
            m.add_constraint(vec![(mu[k][i], r(1)), (x[i], -ri(k as u64 + 1))], Sense::Le, r(0));
        }
    }
    for k in 0..n {
        for i in 0..=k {
            m.add_constraint(vec![(mu[k][i], r(1)), (alpha[k], r(-1))], Sense::Le, r(0));
        }
    }
    m
}

/// Rounded budget ratios with integer `y_k`, linearised with
/// `z_ik = x_i y_k`.
///
/// Families after `c1` (`sum x - alpha >= p`):
/// `sum_{i<=k} (x_i - z_ik) - alpha <= 0` per k, then `z_ik <= y_k`, then
/// `z_ik <= F x_i` with `F = floor(sum_j w_j / B)`, then
/// `(B + 1) y_k - sum_{i<=k} w_i x_i <= 0` per k. The last family makes
/// `y_k >= 1` possible only when the selected prefix weight exceeds `B`;
/// a prefix of weight exactly `B` can still be attacked. Each `y_k` is
/// bounded to `[0, F]`.
fn build_ip3(inst: &Instance) -> MilpModel {
    let n = inst.n();
    let order = inst.weight_order();
    let w: Vec<u64> = order.iter().map(|&i| inst.weights()[i]).collect();
    let total: u64 = w.iter().sum();
    let ratio_cap = total / inst.budget();
    let (mut m, x) = base_model(inst, Formulation::Ip3, &order);
    let alpha = m.add_nonneg("alpha", VarRole::Alpha);
    let y: Vec<usize> = (1..=n)
        .map(|k| m.add_var(format!("y{k}"), VarKind::Integer, r(0), Some(ri(ratio_cap)), VarRole::Y))
        .collect();
    let z: Vec<Vec<usize>> = (0..n)
        .map(|k| (0..=k).map(|i| m.add_nonneg(format!("z{}_{}", i + 1, k + 1), VarRole::Z)).collect())
        .collect();

    let mut card: Vec<(usize, Rational)> = x.iter().map(|&v| (v, r(1))).collect();
    card.push((alpha, r(-1)));
    m.add_constraint(card, Sense::Ge, ri(inst.p() as u64));

    for k in 0..n {
        let mut terms = Vec::with_capacity(2 * k + 3);
        for i in 0..=k {
            terms.push((x[i], r(1)));
            terms.push((z[k][i], r(-1)));
        }
        terms.push((alpha, r(-1)));
        m.add_constraint(terms, Sense::Le, r(0));
    }
    for k in 0..n {
        for i in 0..=k {
            m.add_constraint(vec![(z[k][i], r(1)), (y[k], r(-1))], Sense::Le, r(0));
        }
    }
    for k in 0..n {
        for i in 0..=k {
            m.add_constraint(vec![(z[k][i], r(1)), (x[i], -ri(ratio_cap))], Sense::Le, r(0));
        }
    }
    for k in 0..n {
        let mut terms = vec![(y[k], ri(inst.budget()) + 1)];
        terms.extend((0..=k).map(|i| (x[i], -ri(w[i]))));
        m.add_constraint(terms, Sense::Le, r(0));
    }
    m
}

/// Dual of the minimum attack weight `W_k(x)` with big-M `B + 1`.
///
/// Families after `c1` (`sum x - sum y >= p`):
/// `(B+1) y_k + k alpha_k - sum_i beta_ki >= B + 1` per k, then
/// `alpha_k - beta_ki + (B+1) x_i <= w_i + B + 1` for all (k, i).
fn build_ip4(inst: &Instance) -> MilpModel {
    let n = inst.n();
    let order: Vec<usize> = (0..n).collect();
    let big_m = ri(inst.budget()) + 1;
    let (mut m, x) = base_model(inst, Formulation::Ip4, &order);
    let y: Vec<usize> = (1..=n).map(|k| m.add_binary(format!("y{k}"), VarRole::Y)).collect();
    let alpha: Vec<usize> = (1..=n).map(|k| m.add_nonneg(format!("alpha{k}"), VarRole::Alpha)).collect();
    let beta: Vec<Vec<usize>> = (1..=n)
        .map(|k| (1..=n).map(|i| m.add_nonneg(format!("beta{k}_{i}"), VarRole::Beta)).collect())
        .collect();

    let mut card: Vec<(usize, Rational)> = x.iter().map(|&v| (v, r(1))).collect();
    card.extend(y.iter().map(|&v| (v, r(-1))));
    m.add_constraint(card, Sense::Ge, ri(inst.p() as u64));

    for k in 0..n {
        let mut terms = vec![(y[k], big_m), (alpha[k], ri(k as u64 + 1))];
        terms.extend(beta[k].iter().map(|&b| (b, r(-1))));
        m.add_constraint(terms, Sense::Ge, big_m);
    }
    for k in 0..n {
        for i in 0..n {
            m.add_constraint(
                vec![(alpha[k], r(1)), (beta[k][i], r(-1)), (x[i], big_m)],
                Sense::Le,
                ri(inst.weights()[i]) + big_m,
            );
        }
    }
    m
}

/// Forced attack indicators along the weight order.
///
/// Families after `c1` (`sum x - sum y >= p`):
/// `(B+1)(1 - x_k + y_k) >= B + 1 - sum_{i<=k} w_i x_i`, stored as
/// `(B+1) y_k + sum_{i<k} w_i x_i + (w_k - B - 1) x_k >= 0` per k.
fn build_ip5(inst: &Instance) -> MilpModel {
    let n = inst.n();
    let order = inst.weight_order();
    let w: Vec<u64> = order.iter().map(|&i| inst.weights()[i]).collect();
    let big_m = ri(inst.budget()) + 1;
    let (mut m, x) = base_model(inst, Formulation::Ip5, &order);
    let y: Vec<usize> = (1..=n).map(|k| m.add_binary(format!("y{k}"), VarRole::Y)).collect();

    let mut card: Vec<(usize, Rational)> = x.iter().map(|&v| (v, r(1))).collect();
    card.extend(y.iter().map(|&v| (v, r(-1))));
    m.add_constraint(card, Sense::Ge, ri(inst.p() as u64));

    for k in 0..n {
        let mut terms = vec![(y[k], big_m)];
        terms.extend((0..k).map(|i| (x[i], ri(w[i]))));
        terms.push((x[k], ri(w[k]) - big_m));
        m.add_constraint(terms, Sense::Ge, r(0));
    }
    m
}

/// The inner adversary program for a fixed selection, with `lambda_k`
/// relaxed to `[0, inf)`: maximise `sum_k s_k lambda_k` subject to
/// `(W_k - B) lambda_k <= 0` per k and `sum_k lambda_k <= 1`, where `s_k`
/// and `W_k` are the count and weight of selected items among the `k`
/// lightest.
pub fn phi_lambda_program(inst: &Instance, x: &crate::instance::Selection) -> Result<MilpModel> {
    if x.len() != inst.n() {
        return Err(Error::Input("selection length does not match instance".into()));
    }
    if let Some(i) = (0..inst.n()).find(|&i| !inst.attackable(i)) {
        return Err(Error::Assumption(format!("item {} has weight above the budget", i + 1)));
    }
    let order = inst.weight_order();
    let mut m = MilpModel::new("phi-lambda", ObjectiveSense::Maximize);
    let lambda: Vec<usize> = (1..=inst.n())
        .map(|k| m.add_nonneg(format!("lambda{k}"), VarRole::Lambda))
        .collect();
    let mut count = 0i64;
    let mut weight = 0i64;
    let mut obj = Vec::new();
    let mut rows = Vec::new();
    for (k, &item) in order.iter().enumerate() {
        if x.is_chosen(item) {
            count += 1;
            weight += inst.weights()[item] as i64;
        }
        obj.push((lambda[k], r(count)));
        rows.push(vec![(lambda[k], r(weight) - ri(inst.budget()))]);
    }
    m.set_objective(obj);
    for terms in rows {
        m.add_constraint(terms, Sense::Le, r(0));
    }
    m.add_constraint(lambda.iter().map(|&l| (l, r(1))).collect(), Sense::Le, r(1));
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::model::model_size;

    fn inst10() -> Instance {
        Instance::new((1..=10).collect(), (1..=10).map(|v| v * 3).collect(), 60, 1).unwrap()
    }

    #[test]
    fn ip1_on_worked_example() {
        let m = build_model(&Instance::worked_example(1), Formulation::Ip1).unwrap();
        assert_eq!(m.constraints().len(), 1);
        let c = &m.constraints()[0];
        assert_eq!(c.sense, Sense::Ge);
        assert_eq!(c.rhs, r(11));
        assert_eq!(c.terms, vec![(0, r(3)), (1, r(7)), (2, r(4)), (3, r(10))]);
        assert_eq!(m.objective(), &[(0, r(2)), (1, r(3)), (2, r(4)), (3, r(5))]);
    }

    #[test]
    fn ip1_rejects_p_above_one() {
        let inst = Instance::worked_example(2);
        assert!(matches!(build_model(&inst, Formulation::Ip1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn overweight_items_are_rejected() {
        let inst = Instance::new(vec![1, 1], vec![3, 9], 5, 1).unwrap();
        for f in Formulation::ALL {
            assert!(matches!(build_model(&inst, f), Err(Error::Assumption(_))));
        }
    }

    #[test]
    fn sizes_for_n10() {
        let inst = inst10();
        let size = |f| model_size(&build_model(&inst, f).unwrap());
        let s = size(Formulation::Ip2);
        assert_eq!((s.continuous_added, s.discrete_added, s.constraints_added), (66, 0, 120));
        let s = size(Formulation::Ip3);
        assert_eq!((s.continuous_added, s.discrete_added, s.constraints_added), (56, 10, 130));
        let s = size(Formulation::Ip4);
        assert_eq!((s.continuous_added, s.discrete_added, s.constraints_added), (110, 10, 110));
        let s = size(Formulation::Ip5);
        assert_eq!((s.continuous_added, s.discrete_added, s.constraints_added), (0, 10, 10));
        let s = size(Formulation::Ip1);
        assert_eq!((s.continuous_added, s.discrete_added, s.constraints_added), (0, 0, 0));
    }

    #[test]
    fn big_m_is_budget_plus_one() {
        let inst = Instance::worked_example(1);
        let m = build_model(&inst, Formulation::Ip5).unwrap();
        let y1 = m.var_id("y1").unwrap();
        let row = &m.constraints()[1];
        assert!(row.terms.contains(&(y1, r(11))));
        let m4 = build_model(&inst, Formulation::Ip4).unwrap();
        assert_eq!(m4.constraints()[1].rhs, r(11));
    }

    #[test]
    fn sorted_models_map_back_to_items() {
        let inst = Instance::worked_example(1);
        let m = build_model(&inst, Formulation::Ip5).unwrap();
        // weights 3,7,4,10 sort to items 1,3,2,4
        let items: Vec<usize> = m.item_map().iter().map(|&(_, i)| i).collect();
        assert_eq!(items, vec![0, 2, 1, 3]);
        assert_eq!(m.variables()[1].name, "x3");
        let m1 = build_model(&inst, Formulation::Ip1).unwrap();
        let items: Vec<usize> = m1.item_map().iter().map(|&(_, i)| i).collect();
        assert_eq!(items, vec![0, 1, 2, 3]);
    }

    #[test]
    fn ip3_ratio_bound_uses_all_items() {
        let inst = Instance::worked_example(1);
        let m = build_model(&inst, Formulation::Ip3).unwrap();
        let y1 = m.var_id("y1").unwrap();
        // floor(24 / 10) = 2
        assert_eq!(m.variables()[y1].upper, Some(r(2)));
        assert_eq!(m.variables()[y1].kind, VarKind::Integer);
    }
}
