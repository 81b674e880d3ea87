//! Dense-tableau two-phase primal simplex with implicit variable bounds.
//!
//! Every variable is shifted to `[0, u]`. Variables whose bounds coincide
//! are substituted out, and rows left without terms are checked and
//! dropped. Nonbasic columns sit at either bound; the ratio test allows a
//! bound flip of the entering column. Pricing is Dantzig's rule until the
//! configured number of degenerate pivots has been seen, after which
//! Bland's rule takes over for the rest of the phase.

use std::marker::PhantomData;
use std::time::Instant;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::models::{MilpModel, ObjectiveSense, Sense};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult<T> {
    pub status: LpStatus,
    /// Objective in the model's own sense; present iff optimal.
    pub objective: Option<T>,
    /// Value per variable id; empty unless optimal.
    pub primal: Vec<T>,
    pub pivots: usize,
}

impl<T: Scalar> LpResult<T> {
    fn without_solution(status: LpStatus, pivots: usize) -> Self {
        Self { status, objective: None, primal: Vec::new(), pivots }
    }
}

/// Column bounds in the shifted space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum At {
    Basic,
    Lower,
    Upper,
}

/// LP relaxation solver over scalar type `T`.
#[derive(Debug, Clone)]
pub struct LpSolver<T> {
    /// Degenerate pivots tolerated before switching to Bland's rule.
    pub bland_after: usize,
    /// Hard cap on pivots per phase; `None` derives one from the size.
    pub max_pivots: Option<usize>,
    _scalar: PhantomData<T>,
}

impl<T> Default for LpSolver<T> {
    fn default() -> Self {
        Self { bland_after: 1000, max_pivots: None, _scalar: PhantomData }
    }
}

impl<T: Scalar> LpSolver<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Solve the relaxation of `m` with its declared bounds.
    pub fn solve(&self, m: &MilpModel) -> Result<LpResult<T>> {
        let lower: Vec<Rational> = m.variables().iter().map(|v| v.lower).collect();
        let upper: Vec<Option<Rational>> = m.variables().iter().map(|v| v.upper).collect();
        self.solve_with_bounds(m, &lower, &upper)
    }

    /// Solve the relaxation of `m` with bounds replaced by `lower`/`upper`.
    pub fn solve_with_bounds(
        &self,
        m: &MilpModel,
        lower: &[Rational],
        upper: &[Option<Rational>],
    ) -> Result<LpResult<T>> {
        Ok(self.solve_until(m, lower, upper, None)?.expect("no deadline"))
    }

    /// As [`Self::solve_with_bounds`], giving up with `None` once `deadline`
    /// passes.
    pub(crate) fn solve_until(
        &self,
        m: &MilpModel,
        lower: &[Rational],
        upper: &[Option<Rational>],
        deadline: Option<Instant>,
    ) -> Result<Option<LpResult<T>>> {
        let nv = m.num_vars();
        if lower.len() != nv || upper.len() != nv {
            return Err(Error::Input("bound vectors do not match the model".into()));
        }
        let Some(form) = StandardForm::build(m, lower, upper) else {
            return Ok(Some(LpResult::without_solution(LpStatus::Infeasible, 0)));
        };
        let mut tab = Tableau::<T>::new(&form);
        let cap = self.max_pivots.unwrap_or(50_000 + 50 * (tab.rows + tab.cols));

        if tab.first_artificial < tab.cols {
            let costs: Vec<T> = (0..tab.cols)
                .map(|j| if j >= tab.first_artificial { T::one() } else { T::zero() })
                .collect();
            match tab.run(&costs, self.bland_after, cap, deadline)? {
                PhaseEnd::Optimal => {}
                PhaseEnd::Unbounded => return Err(Error::Solver("phase one reported unbounded".into())),
                PhaseEnd::Interrupted => return Ok(None),
            }
            let infeas = tab.artificial_sum();
            let scale = T::one() + tab.rhs_scale.clone();
            if infeas > T::feas_tol() * scale * T::from_int(100) {
                return Ok(Some(LpResult::without_solution(LpStatus::Infeasible, tab.pivots)));
            }
            tab.retire_artificials()?;
        }

        let costs: Vec<T> = (0..tab.cols)
            .map(|j| {
                if j < form.columns.len() {
                    let c = T::from_ratio(form.costs[j]);
                    if form.maximize { -c } else { c }
                } else {
                    T::zero()
                }
            })
            .collect();
        match tab.run(&costs, self.bland_after, cap, deadline)? {
            PhaseEnd::Unbounded => return Ok(Some(LpResult::without_solution(LpStatus::Unbounded, tab.pivots))),
            PhaseEnd::Optimal => {}
            PhaseEnd::Interrupted => return Ok(None),
        }

        let shifted = tab.column_values();
        let mut primal: Vec<T> = lower.iter().map(|l| T::from_ratio(*l)).collect();
        for (col, &var) in form.columns.iter().enumerate() {
            primal[var] = primal[var].clone() + shifted[col].clone();
        }
        let objective = m
            .objective()
            .iter()
            .fold(T::zero(), |acc, (v, c)| acc + T::from_ratio(*c) * primal[*v].clone());
        Ok(Some(LpResult { status: LpStatus::Optimal, objective: Some(objective), primal, pivots: tab.pivots }))
    }
}

/// Shifted, fixed-variable-free form of a model with given bounds.
struct StandardForm {
    /// Variable id of each structural column.
    columns: Vec<usize>,
    /// Upper bound per column after shifting; `None` is `+inf`.
    ranges: Vec<Option<Rational>>,
    costs: Vec<Rational>,
    maximize: bool,
    /// Rows over columns, with senses and right-hand sides.
    rows: Vec<(Vec<(usize, Rational)>, Sense, Rational)>,
}

impl StandardForm {
    /// `None` when the bounds or an emptied row are contradictory.
    fn build(m: &MilpModel, lower: &[Rational], upper: &[Option<Rational>]) -> Option<Self> {
        let nv = m.num_vars();
        let mut col_of = vec![usize::MAX; nv];
        let mut columns = Vec::new();
        let mut ranges = Vec::new();
        for v in 0..nv {
            match upper[v] {
                Some(u) if u < lower[v] => return None,
                Some(u) if u == lower[v] => {}
                u => {
                    col_of[v] = columns.len();
                    columns.push(v);
                    ranges.push(u.map(|u| u - lower[v]));
                }
            }
        }
        let mut costs = vec![Rational::zero(); columns.len()];
        for (v, c) in m.objective() {
            if col_of[*v] != usize::MAX {
                costs[col_of[*v]] = *c;
            }
        }
        let mut rows = Vec::with_capacity(m.constraints().len());
        for con in m.constraints() {
            let mut rhs = con.rhs;
            let mut terms = Vec::with_capacity(con.terms.len());
            for (v, a) in &con.terms {
                rhs -= *a * lower[*v];
                if col_of[*v] != usize::MAX {
                    terms.push((col_of[*v], *a));
                }
            }
            if terms.is_empty() {
                let ok = match con.sense {
                    Sense::Le => rhs >= Rational::zero(),
                    Sense::Ge => rhs <= Rational::zero(),
                    Sense::Eq => rhs.is_zero(),
                };
                if !ok {
                    return None;
                }
                continue;
            }
            rows.push((terms, con.sense, rhs));
        }
        Some(Self {
            columns,
            ranges,
            costs,
            maximize: m.sense() == ObjectiveSense::Maximize,
            rows,
        })
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    Interrupted,
}

struct Tableau<T> {
    rows: usize,
    cols: usize,
    first_artificial: usize,
    /// `rows x cols`, row-major, the current `B^-1 A`.
    a: Vec<Vec<T>>,
    /// Upper bound per column; `None` is `+inf`.
    upper: Vec<Option<T>>,
    basis: Vec<usize>,
    at: Vec<At>,
    /// Values of the basic variables.
    xb: Vec<T>,
    /// Reduced costs for the current phase.
    d: Vec<T>,
    pivots: usize,
    rhs_scale: T,
}

impl<T: Scalar> Tableau<T> {
    fn new(form: &StandardForm) -> Self {
        let m = form.rows.len();
        let ns = form.columns.len();
        let n_slack = form.rows.iter().filter(|(_, s, _)| *s != Sense::Eq).count();
        // rows whose slack cannot start basic need an artificial
        let needs_art: Vec<bool> = form
            .rows
            .iter()
            .map(|(_, s, rhs)| {
                let negated = *rhs < Rational::zero();
                let sense = flip_if(*s, negated);
                sense != Sense::Le
            })
            .collect();
        let n_art = needs_art.iter().filter(|&&b| b).count();
        let cols = ns + n_slack + n_art;
        let first_artificial = ns + n_slack;

        let mut a = vec![vec![T::zero(); cols]; m];
        let mut upper: Vec<Option<T>> = form.ranges.iter().map(|r| r.map(T::from_ratio)).collect();
        upper.resize(cols, None);
        let mut basis = vec![0; m];
        let mut xb = vec![T::zero(); m];
        let mut at = vec![At::Lower; cols];
        let mut rhs_scale = T::zero();
        let mut slack = ns;
        let mut art = first_artificial;
        for (i, (terms, sense, rhs)) in form.rows.iter().enumerate() {
            let negated = *rhs < Rational::zero();
            let sign = if negated { -Rational::from_integer(1) } else { Rational::from_integer(1) };
            for (c, v) in terms {
                a[i][*c] = T::from_ratio(*v * sign);
            }
            let b = T::from_ratio(*rhs * sign);
            if b > rhs_scale {
                rhs_scale = b.clone();
            }
            xb[i] = b;
            let sense = flip_if(*sense, negated);
            if sense != Sense::Eq {
                a[i][slack] = if sense == Sense::Le { T::one() } else { -T::one() };
                if sense == Sense::Le {
                    basis[i] = slack;
                    at[slack] = At::Basic;
                }
                slack += 1;
            }
            if needs_art[i] {
                a[i][art] = T::one();
                basis[i] = art;
                at[art] = At::Basic;
                art += 1;
            }
        }
        Self {
            rows: m,
            cols,
            first_artificial,
            a,
            upper,
            basis,
            at,
            xb,
            d: vec![T::zero(); cols],
            pivots: 0,
            rhs_scale,
        }
    }

    fn nonbasic_value(&self, j: usize) -> T {
        match self.at[j] {
            At::Upper => self.upper[j].clone().expect("upper status implies finite bound"),
            _ => T::zero(),
        }
    }

    fn artificial_sum(&self) -> T {
        let mut s = T::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if b >= self.first_artificial {
                s = s + self.xb[i].clone().abs();
            }
        }
        s
    }

    fn column_values(&self) -> Vec<T> {
        let mut vals: Vec<T> = (0..self.cols).map(|j| self.nonbasic_value(j)).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            vals[b] = self.xb[i].clone();
        }
        vals
    }

    /// Fix artificials at zero and pivot basic ones out where possible.
    fn retire_artificials(&mut self) -> Result<()> {
        for j in self.first_artificial..self.cols {
            self.upper[j] = Some(T::zero());
        }
        for r in 0..self.rows {
            if self.basis[r] < self.first_artificial {
                continue;
            }
            let mut best: Option<(usize, T)> = None;
            for j in 0..self.first_artificial {
                if self.at[j] == At::Basic {
                    continue;
                }
                let mag = self.a[r][j].abs();
                if mag > T::zero_tol() && best.as_ref().is_none_or(|(_, b)| mag > *b) {
                    best = Some((j, mag));
                }
            }
            if let Some((q, _)) = best {
                let value = self.nonbasic_value(q);
                let leaving = self.basis[r];
                self.at[leaving] = At::Lower;
                self.pivot(r, q)?;
                self.xb[r] = value;
            }
        }
        Ok(())
    }

    fn price(&mut self, costs: &[T]) {
        self.d = costs.to_vec();
        for i in 0..self.rows {
            let cb = &costs[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (dj, aij) in self.d.iter_mut().zip(&self.a[i]) {
                if !aij.is_zero() {
                    *dj = dj.clone() - cb.clone() * aij.clone();
                }
            }
        }
        for &b in &self.basis {
            self.d[b] = T::zero();
        }
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let tol = T::cost_tol();
        let mut best: Option<(usize, T)> = None;
        for j in 0..self.cols {
            let score = match self.at[j] {
                At::Basic => continue,
                At::Lower => -self.d[j].clone(),
                At::Upper => self.d[j].clone(),
            };
            if score <= tol {
                continue;
            }
            if self.upper[j].as_ref().is_some_and(|u| u.is_zero()) {
                continue;
            }
            if bland {
                return Some(j);
            }
            if best.as_ref().is_none_or(|(_, s)| score > *s) {
                best = Some((j, score));
            }
        }
        best.map(|(j, _)| j)
    }

    fn run(&mut self, costs: &[T], bland_after: usize, cap: usize, deadline: Option<Instant>) -> Result<PhaseEnd> {
        self.price(costs);
        let mut degenerate = 0usize;
        let mut iters = 0usize;
        loop {
            let bland = degenerate >= bland_after;
            let Some(q) = self.entering(bland) else {
                return Ok(PhaseEnd::Optimal);
            };
            iters += 1;
            if iters.is_multiple_of(32) && deadline.is_some_and(|d| Instant::now() >= d) {
                return Ok(PhaseEnd::Interrupted);
            }
            if iters > cap {
                return Err(Error::Solver(format!("pivot limit {cap} reached")));
            }
            let increasing = self.at[q] == At::Lower;

            // Harris ratio test; rate[i] is how fast xb[i] falls as the step
            // grows. Pass one finds the longest step with bounds relaxed by
            // a sliver of the feasibility tolerance, pass two takes the largest pivot
            // among rows blocking within that step.
            let relax = T::feas_tol() / T::from_int(100);
            let mut rates: Vec<(usize, T)> = Vec::new();
            let mut cap_step: Option<T> = None;
            for i in 0..self.rows {
                let aiq = &self.a[i][q];
                if aiq.is_near_zero() {
                    continue;
                }
                let rate = if increasing { aiq.clone() } else { -aiq.clone() };
                let room = if rate > T::zero() {
                    self.xb[i].clone()
                } else {
                    match &self.upper[self.basis[i]] {
                        Some(u) => u.clone() - self.xb[i].clone(),
                        None => continue,
                    }
                };
                let relaxed = (room + relax.clone()) / rate.abs();
                let relaxed = if relaxed < T::zero() { T::zero() } else { relaxed };
                if cap_step.as_ref().is_none_or(|c| relaxed < *c) {
                    cap_step = Some(relaxed);
                }
                rates.push((i, rate));
            }
            let mut step: Option<T> = None;
            let mut leave: Option<(usize, At)> = None;
            let mut leave_rate = T::zero();
            if let Some(cap_step) = cap_step {
                let mut cands: Vec<(usize, T, T, At)> = Vec::new();
                for (i, rate) in rates {
                    let (room, bound) = if rate > T::zero() {
                        (self.xb[i].clone(), At::Lower)
                    } else {
                        (self.upper[self.basis[i]].clone().expect("filtered above") - self.xb[i].clone(), At::Upper)
                    };
                    let limit = room / rate.abs();
                    let limit = if limit < T::zero() { T::zero() } else { limit };
                    if limit <= cap_step {
                        cands.push((i, rate, limit, bound));
                    }
                }
                for (i, rate, limit, bound) in cands {
                    let better = match &leave {
                        None => true,
                        // floating Bland keeps the largest pivot; only exact ties can cycle
                        Some((r, _)) if bland && T::EXACT => self.basis[i] < self.basis[*r],
                        Some((r, _)) => {
                            rate.abs() > leave_rate.abs()
                                || (rate.abs() == leave_rate.abs() && self.basis[i] < self.basis[*r])
                        }
                    };
                    if better {
                        step = Some(limit);
                        leave = Some((i, bound));
                        leave_rate = rate;
                    }
                }
            }
            // a bound flip wins when the entering variable hits its own bound first
            if let Some(u) = &self.upper[q] {
                if step.as_ref().is_none_or(|s| u <= s) {
                    step = Some(u.clone());
                    leave = None;
                }
            }
            let Some(t) = step else {
                return Ok(PhaseEnd::Unbounded);
            };
            if t <= T::feas_tol() {
                degenerate += 1;
            }

            // move basic values along the edge
            if !t.is_zero() {
                for i in 0..self.rows {
                    let aiq = &self.a[i][q];
                    if aiq.is_zero() {
                        continue;
                    }
                    let delta = aiq.clone() * t.clone();
                    let mut v = if increasing {
                        self.xb[i].clone() - delta
                    } else {
                        self.xb[i].clone() + delta
                    };
                    v.chop();
                    self.xb[i] = v;
                }
            }

            match leave {
                None => {
                    // bound flip
                    self.at[q] = if increasing { At::Upper } else { At::Lower };
                    self.pivots += 1;
                }
                Some((r, bound)) => {
                    let entering_value = if increasing {
                        t
                    } else {
                        self.upper[q].clone().expect("decreasing from a finite upper bound") - t
                    };
                    let leaving = self.basis[r];
                    self.at[leaving] = bound;
                    self.pivot(r, q)?;
                    self.xb[r] = entering_value;
                }
            }
        }
    }

    /// Make column `q` basic in row `r`.
    fn pivot(&mut self, r: usize, q: usize) -> Result<()> {
        let piv = self.a[r][q].clone();
        if piv.abs() < T::pivot_tol() || piv.is_zero() {
            return Err(Error::Solver(format!(
                "pivot element {:e} in row {r}, column {q} below tolerance",
                piv.to_f64()
            )));
        }
        self.pivots += 1;
        let mut pivot_row = std::mem::take(&mut self.a[r]);
        let inv = T::one() / piv;
        let mut nz = Vec::new();
        for (k, v) in pivot_row.iter_mut().enumerate() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
                v.chop();
                if !v.is_zero() {
                    nz.push(k);
                }
            }
        }
        pivot_row[q] = T::one();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q].clone();
            if f.is_zero() {
                continue;
            }
            for &k in &nz {
                let mut v = row[k].clone() - f.clone() * pivot_row[k].clone();
                v.chop();
                row[k] = v;
            }
            row[q] = T::zero();
        }
        let f = self.d[q].clone();
        if !f.is_zero() {
            for &k in &nz {
                let mut v = self.d[k].clone() - f.clone() * pivot_row[k].clone();
                v.chop();
                self.d[k] = v;
            }
            self.d[q] = T::zero();
        }
        self.a[r] = pivot_row;
        self.at[q] = At::Basic;
        self.basis[r] = q;
        Ok(())
    }
}

fn flip_if(s: Sense, negate: bool) -> Sense {
    match (s, negate) {
        (Sense::Le, true) => Sense::Ge,
        (Sense::Ge, true) => Sense::Le,
        (s, _) => s,
    }
}
