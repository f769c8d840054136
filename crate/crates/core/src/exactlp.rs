//! Exact rational linear programming over the belief simplex.
//!
//! Systems are stated over belief coordinates `p_0 ... p_n` with the simplex
//! constraints `p >= 0`, `Σ p = 1` always implied. Strict rows are handled by
//! [`strict_feasible`], which maximizes a shared slack variable.
//!
//! The solver is a dense two-phase simplex method with Bland's rule. There
//! are no tolerances anywhere; instances are tiny.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::problem::{Belief, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `c·p >= r`
    Ge,
    /// `c·p = r`
    Eq,
    /// `c·p > r`
    Gt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn holds_at(&self, belief: &Belief) -> bool {
        let lhs = belief.dot(&self.coefficients);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Gt => lhs > self.rhs,
        }
    }
}

/// A constraint system over a belief of the given dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub dimension: usize,
    pub rows: Vec<Constraint>,
    /// Maximized by [`solve`] when present.
    pub objective: Option<Vec<Rational>>,
    /// Adds `p_i > 0` for every coordinate.
    pub interior_required: bool,
}

impl LinearSystem {
    pub fn new(dimension: usize) -> Self {
        LinearSystem {
            dimension,
            rows: Vec::new(),
            objective: None,
            interior_required: false,
        }
    }

    pub fn push(&mut self, coefficients: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        self.rows.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
        self
    }

    pub fn ge(mut self, coefficients: Vec<Rational>, rhs: Rational) -> Self {
        self.push(coefficients, Relation::Ge, rhs);
        self
    }

    pub fn eq(mut self, coefficients: Vec<Rational>, rhs: Rational) -> Self {
        self.push(coefficients, Relation::Eq, rhs);
        self
    }

    pub fn gt(mut self, coefficients: Vec<Rational>, rhs: Rational) -> Self {
        self.push(coefficients, Relation::Gt, rhs);
        self
    }

    pub fn maximize(mut self, objective: Vec<Rational>) -> Self {
        self.objective = Some(objective);
        self
    }

    pub fn interior(mut self) -> Self {
        self.interior_required = true;
        self
    }

    pub fn has_strict_rows(&self) -> bool {
        self.interior_required || self.rows.iter().any(|r| r.relation == Relation::Gt)
    }

    /// Exact substitution check of every row, strict rows strictly, plus the
    /// interior requirement.
    pub fn satisfied_by(&self, belief: &Belief) -> bool {
        belief.dim() == self.dimension
            && (!self.interior_required || belief.is_interior())
            && self.rows.iter().all(|row| row.holds_at(belief))
    }

    fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidArgument("linear system of dimension 0".into()));
        }
        let lengths = self
            .rows
            .iter()
            .map(|r| r.coefficients.len())
            .chain(self.objective.as_ref().map(Vec::len));
        for len in lengths {
            if len != self.dimension {
                return Err(Error::Dimension {
                    expected: self.dimension,
                    got: len,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Infeasible,
    Optimal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Objective value at the witness ([`solve`] with an objective only).
    pub value: Option<Rational>,
    pub witness: Option<Belief>,
    /// Optimal slack of the strict reformulation ([`strict_feasible`] only;
    /// absent when even the closed system is infeasible).
    pub slack: Option<Rational>,
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn infeasible(slack: Option<Rational>) -> Self {
        LpResult {
            status: LpStatus::Infeasible,
            value: None,
            witness: None,
            slack,
        }
    }
}

/// Solves a system without strict rows: infeasible, or optimal with an exact
/// witness (maximizing the objective when one is given).
pub fn solve(system: &LinearSystem) -> Result<LpResult> {
    system.validate()?;
    if system.has_strict_rows() {
        return Err(Error::InvalidArgument(
            "strict rows are only accepted by strict_feasible".into(),
        ));
    }
    let dim = system.dimension;
    let mut lp = StandardLp::new(dim);
    for row in &system.rows {
        let rel = match row.relation {
            Relation::Ge => Rel::Ge,
            Relation::Eq => Rel::Eq,
            Relation::Gt => unreachable!(),
        };
        lp.rows.push((row.coefficients.clone(), rel, row.rhs.clone()));
    }
    lp.rows.push((vec![Rational::one(); dim], Rel::Eq, Rational::one()));
    if let Some(obj) = &system.objective {
        lp.objective = obj.clone();
    }
    match lp.solve()? {
        Outcome::Infeasible => Ok(LpResult::infeasible(None)),
        Outcome::Optimal { x, value } => {
            let witness = Belief::new(x)
                .map_err(|e| Error::internal("lp_witness", format!("witness off the simplex: {e}")))?;
            if !system.satisfied_by(&witness) {
                return Err(Error::internal(
                    "lp_witness",
                    format!("witness {witness} fails substitution"),
                ));
            }
            Ok(LpResult {
                status: LpStatus::Optimal,
                value: system.objective.as_ref().map(|_| value),
                witness: Some(witness),
                slack: None,
            })
        }
    }
}

/// Decides feasibility of a system that may contain strict rows.
///
/// Each strict row `c·p > r` becomes `c·p >= r + t` (and `p_i >= t` when the
/// interior is required) for one shared slack `0 <= t <= 1`, and `t` is
/// maximized. The open system is feasible iff the optimal `t` is positive;
/// the result is then `Optimal` with the slack and a witness satisfying every
/// strict row strictly. Otherwise the result is `Infeasible`, with the
/// optimal slack (necessarily 0) when the closed relaxation is feasible.
pub fn strict_feasible(system: &LinearSystem) -> Result<LpResult> {
    system.validate()?;
    let dim = system.dimension;
    let t = dim;
    let mut lp = StandardLp::new(dim + 1);
    let widen = |coefficients: &[Rational], slack: Rational| {
        let mut v = coefficients.to_vec();
        v.push(slack);
        v
    };
    for row in &system.rows {
        match row.relation {
            Relation::Ge => lp.rows.push((widen(&row.coefficients, Rational::zero()), Rel::Ge, row.rhs.clone())),
            Relation::Eq => lp.rows.push((widen(&row.coefficients, Rational::zero()), Rel::Eq, row.rhs.clone())),
            Relation::Gt => lp.rows.push((widen(&row.coefficients, -Rational::one()), Rel::Ge, row.rhs.clone())),
        }
    }
    if system.interior_required {
        for i in 0..dim {
            let mut v = vec![Rational::zero(); dim + 1];
            v[i] = Rational::one();
            v[t] = -Rational::one();
            lp.rows.push((v, Rel::Ge, Rational::zero()));
        }
    }
    let mut simplex_row = vec![Rational::one(); dim];
    simplex_row.push(Rational::zero());
    lp.rows.push((simplex_row, Rel::Eq, Rational::one()));
    let mut cap = vec![Rational::zero(); dim];
    cap.push(Rational::one());
    lp.rows.push((cap, Rel::Le, Rational::one()));
    lp.objective[t] = Rational::one();

    match lp.solve()? {
        Outcome::Infeasible => Ok(LpResult::infeasible(None)),
        Outcome::Optimal { value, .. } if !value.is_positive() => Ok(LpResult::infeasible(Some(value))),
        Outcome::Optimal { mut x, value } => {
            x.truncate(dim);
            let witness = Belief::new(x)
                .map_err(|e| Error::internal("lp_witness", format!("witness off the simplex: {e}")))?;
            if !system.satisfied_by(&witness) {
                return Err(Error::internal(
                    "lp_witness",
                    format!("strict witness {witness} fails substitution"),
                ));
            }
            Ok(LpResult {
                status: LpStatus::Optimal,
                value: None,
                witness: Some(witness),
                slack: Some(value),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rel {
    Le,
    Ge,
    Eq,
}

/// `maximize objective·x  s.t.  rows, x >= 0`.
struct StandardLp {
    num_vars: usize,
    rows: Vec<(Vec<Rational>, Rel, Rational)>,
    objective: Vec<Rational>,
}

enum Outcome {
    Infeasible,
    Optimal { x: Vec<Rational>, value: Rational },
}

impl StandardLp {
    fn new(num_vars: usize) -> Self {
        StandardLp {
            num_vars,
            rows: Vec::new(),
            objective: vec![Rational::zero(); num_vars],
        }
    }

    fn solve(&self) -> Result<Outcome> {
        let n = self.num_vars;
        // Normalize to non-negative right-hand sides.
        let rows: Vec<(Vec<Rational>, Rel, Rational)> = self
            .rows
            .iter()
            .map(|(a, rel, b)| {
                if b.is_negative() {
                    let flipped = match rel {
                        Rel::Le => Rel::Ge,
                        Rel::Ge => Rel::Le,
                        Rel::Eq => Rel::Eq,
                    };
                    (a.iter().map(|v| -v).collect(), flipped, -b)
                } else {
                    (a.clone(), *rel, b.clone())
                }
            })
            .collect();

        let num_slack = rows.iter().filter(|r| r.1 != Rel::Eq).count();
        let num_artificial = rows.iter().filter(|r| r.1 != Rel::Le).count();
        let first_artificial = n + num_slack;
        let cols = first_artificial + num_artificial;

        let mut tab = Tableau {
            a: Vec::with_capacity(rows.len()),
            b: Vec::with_capacity(rows.len()),
            basis: Vec::with_capacity(rows.len()),
        };
        let (mut next_slack, mut next_artificial) = (n, first_artificial);
        for (coefficients, rel, rhs) in rows {
            let mut row = coefficients;
            row.resize(cols, Rational::zero());
            match rel {
                Rel::Le => {
                    row[next_slack] = Rational::one();
                    tab.basis.push(next_slack);
                    next_slack += 1;
                }
                Rel::Ge => {
                    row[next_slack] = -Rational::one();
                    next_slack += 1;
                    row[next_artificial] = Rational::one();
                    tab.basis.push(next_artificial);
                    next_artificial += 1;
                }
                Rel::Eq => {
                    row[next_artificial] = Rational::one();
                    tab.basis.push(next_artificial);
                    next_artificial += 1;
                }
            }
            tab.a.push(row);
            tab.b.push(rhs);
        }

        // Phase 1: drive the artificial variables to zero.
        let phase_one: Vec<Rational> = (0..cols)
            .map(|j| if j >= first_artificial { -Rational::one() } else { Rational::zero() })
            .collect();
        tab.optimize(&phase_one, cols)
            .map_err(|_| Error::internal("lp_bounded", "phase one reported unboundedness"))?;
        let artificial_total: Rational = tab
            .basis
            .iter()
            .zip(&tab.b)
            .filter(|(&j, _)| j >= first_artificial)
            .map(|(_, v)| v.clone())
            .sum();
        if artificial_total.is_positive() {
            return Ok(Outcome::Infeasible);
        }
        // Pivot remaining (zero-valued) artificials out of the basis, dropping
        // rows that turn out to be redundant.
        let mut r = 0;
        while r < tab.a.len() {
            if tab.basis[r] >= first_artificial {
                match (0..first_artificial).find(|&j| !tab.a[r][j].is_zero()) {
                    Some(j) => tab.pivot(r, j),
                    None => {
                        tab.a.remove(r);
                        tab.b.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }

        // Phase 2 over the structural and slack columns only.
        let mut phase_two = self.objective.clone();
        phase_two.resize(cols, Rational::zero());
        tab.optimize(&phase_two, first_artificial)
            .map_err(|_| Error::internal("lp_bounded", "unbounded objective over a compact region"))?;

        let mut x = vec![Rational::zero(); n];
        for (&j, v) in tab.basis.iter().zip(&tab.b) {
            if j < n {
                x[j] = v.clone();
            }
        }
        let value = x.iter().zip(&self.objective).map(|(xi, ci)| xi * ci).sum();
        Ok(Outcome::Optimal { x, value })
    }
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
}

struct Unbounded;

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v *= &inv;
        }
        self.b[r] *= &inv;
        let (pivot_row, pivot_rhs) = (self.a[r].clone(), self.b[r].clone());
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let factor = self.a[i][c].clone();
            for (v, p) in self.a[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.b[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` using only columns `< allowed`. Bland's rule: the
    /// lowest-index improving column enters, ratio ties leave by lowest
    /// basic index.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> std::result::Result<(), Unbounded> {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = self
                    .basis
                    .iter()
                    .zip(&self.a)
                    .fold(cost[j].clone(), |acc, (&bi, row)| acc - &cost[bi] * &row[j]);
                reduced.is_positive()
            });
            let Some(c) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][c];
                let better = match &leaving {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((r, _)) = leaving else {
                return Err(Unbounded);
            };
            self.pivot(r, c);
        }
    }
}
