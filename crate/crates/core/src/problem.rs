//! Decision problems, beliefs and the pointwise evaluators.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d` in canonical form. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-4"` or `"7/2"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::ParseRational(text.to_string()));
    }
    Rational::from_str(trimmed).map_err(|_| Error::ParseRational(text.to_string()))
}

/// A finite decision problem: ordered actions `a_0 < ... < a_k`, states
/// `θ_0 ... θ_n` and the payoff matrix `payoff[i][j] = u(a_i, θ_j)`.
///
/// Action labels only carry their order; every algorithm works on indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecisionProblem {
    actions: Vec<Rational>,
    states: Vec<String>,
    payoff: Vec<Vec<Rational>>,
}

impl DecisionProblem {
    pub fn new(
        actions: Vec<Rational>,
        states: Vec<String>,
        payoff: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::InvalidProblem("empty action set".into()));
        }
        if states.is_empty() {
            return Err(Error::InvalidProblem("empty state set".into()));
        }
        if let Some(w) = actions.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidProblem(format!(
                "action labels must be strictly increasing (a_{} = {} >= a_{} = {})",
                w,
                actions[w],
                w + 1,
                actions[w + 1]
            )));
        }
        if payoff.len() != actions.len() {
            return Err(Error::InvalidProblem(format!(
                "payoff has {} rows for {} actions",
                payoff.len(),
                actions.len()
            )));
        }
        if let Some(i) = payoff.iter().position(|row| row.len() != states.len()) {
            return Err(Error::InvalidProblem(format!(
                "payoff row {} has {} entries for {} states",
                i,
                payoff[i].len(),
                states.len()
            )));
        }
        Ok(DecisionProblem {
            actions,
            states,
            payoff,
        })
    }

    /// Builds a problem with action labels `0, 1, ..., k` and state labels
    /// `s0, s1, ...`.
    pub fn from_rows(payoff: Vec<Vec<Rational>>) -> Result<Self> {
        let k = payoff.len();
        let n = payoff.first().map_or(0, Vec::len);
        let actions = (0..k as i64).map(int).collect();
        let states = (0..n).map(|j| format!("s{j}")).collect();
        Self::new(actions, states, payoff)
    }

    pub fn from_integers<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().copied().map(int).collect())
                .collect(),
        )
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn actions(&self) -> &[Rational] {
        &self.actions
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.payoff
    }

    pub fn row(&self, action: usize) -> &[Rational] {
        &self.payoff[action]
    }

    pub fn payoff(&self, action: usize, state: usize) -> &Rational {
        &self.payoff[action][state]
    }

    pub fn column(&self, state: usize) -> Vec<Rational> {
        self.payoff.iter().map(|row| row[state].clone()).collect()
    }

    pub fn check_action(&self, action: usize) -> Result<()> {
        if action < self.num_actions() {
            Ok(())
        } else {
            Err(Error::ActionIndex {
                index: action,
                len: self.num_actions(),
            })
        }
    }

    pub fn check_belief(&self, belief: &Belief) -> Result<()> {
        if belief.dim() == self.num_states() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.num_states(),
                got: belief.dim(),
            })
        }
    }

    /// The sub-problem keeping the given actions, in increasing index order.
    pub fn select_actions(&self, keep: &[usize]) -> Result<Self> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        for &i in &keep {
            self.check_action(i)?;
        }
        Self::new(
            keep.iter().map(|&i| self.actions[i].clone()).collect(),
            self.states.clone(),
            keep.iter().map(|&i| self.payoff[i].clone()).collect(),
        )
    }

    /// Column-permuted copy; position `m` of the result holds original state
    /// `order[m]`.
    pub fn permute_states(&self, order: &[usize]) -> Result<Self> {
        let n = self.num_states();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: order.len(),
            });
        }
        for &j in order {
            if j >= n || seen[j] {
                return Err(Error::InvalidArgument(format!(
                    "{order:?} is not a permutation of 0..{n}"
                )));
            }
            seen[j] = true;
        }
        Self::new(
            self.actions.clone(),
            order.iter().map(|&j| self.states[j].clone()).collect(),
            self.payoff
                .iter()
                .map(|row| order.iter().map(|&j| row[j].clone()).collect())
                .collect(),
        )
    }

    /// The same problem with the action order reversed (labels negated so
    /// they stay increasing).
    pub fn reversed(&self) -> Self {
        DecisionProblem {
            actions: self.actions.iter().rev().map(|a| -a).collect(),
            states: self.states.clone(),
            payoff: self.payoff.iter().rev().cloned().collect(),
        }
    }

    /// `u -> alpha * u + shift(θ)`.
    pub fn affine_transform(&self, alpha: &Rational, shift: &[Rational]) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::InvalidArgument("alpha must be positive".into()));
        }
        if shift.len() != self.num_states() {
            return Err(Error::Dimension {
                expected: self.num_states(),
                got: shift.len(),
            });
        }
        Ok(DecisionProblem {
            actions: self.actions.clone(),
            states: self.states.clone(),
            payoff: self
                .payoff
                .iter()
                .map(|row| row.iter().zip(shift).map(|(u, c)| alpha * u + c).collect())
                .collect(),
        })
    }
}

impl fmt::Display for DecisionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.payoff.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// A point of the closed probability simplex over states.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Belief {
    coords: Vec<Rational>,
}

impl Belief {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidBelief("no coordinates".into()));
        }
        if let Some(c) = coords.iter().find(|c| c.is_negative()) {
            return Err(Error::InvalidBelief(format!("negative coordinate {c}")));
        }
        let total: Rational = coords.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidBelief(format!("coordinates sum to {total}")));
        }
        Ok(Belief { coords })
    }

    pub fn uniform(dim: usize) -> Self {
        assert!(dim > 0, "belief dimension must be positive");
        Belief {
            coords: vec![Rational::new(BigInt::one(), BigInt::from(dim)); dim],
        }
    }

    pub fn point_mass(dim: usize, state: usize) -> Self {
        assert!(state < dim, "state {state} out of range for dimension {dim}");
        let mut coords = vec![Rational::zero(); dim];
        coords[state] = Rational::one();
        Belief { coords }
    }

    /// `counts[j] / denominator`; the counts must sum to the denominator.
    pub fn from_counts(counts: &[u64], denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidBelief("zero denominator".into()));
        }
        let d = BigInt::from(denominator);
        Self::new(
            counts
                .iter()
                .map(|&c| Rational::new(BigInt::from(c), d.clone()))
                .collect(),
        )
    }

    /// `lambda * p + (1 - lambda) * q`.
    pub fn mix(lambda: &Rational, p: &Belief, q: &Belief) -> Result<Self> {
        if p.dim() != q.dim() {
            return Err(Error::Dimension {
                expected: p.dim(),
                got: q.dim(),
            });
        }
        if lambda.is_negative() || *lambda > Rational::one() {
            return Err(Error::InvalidArgument(format!("mixing weight {lambda} outside [0, 1]")));
        }
        let rest = Rational::one() - lambda;
        Self::new(
            p.coords
                .iter()
                .zip(&q.coords)
                .map(|(a, b)| lambda * a + &rest * b)
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_interior(&self) -> bool {
        self.coords.iter().all(|c| c.is_positive())
    }

    pub fn dot(&self, v: &[Rational]) -> Rational {
        self.coords.iter().zip(v).map(|(p, x)| p * x).sum()
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, c) in self.coords.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `Δu(a_i, ·)`: payoff increments between consecutive actions, state by
/// state. The vector for action 0 is identically zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DifferenceVector {
    pub action_index: usize,
    pub entries: Vec<Rational>,
}

/// Payoffs polynomial in a continuous action `a ∈ [lower, upper]`.
/// `coefficients[j][d]` is the coefficient of `a^d` for state `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialProblem {
    lower: Rational,
    upper: Rational,
    states: Vec<String>,
    coefficients: Vec<Vec<Rational>>,
}

impl PolynomialProblem {
    pub fn new(
        lower: Rational,
        upper: Rational,
        states: Vec<String>,
        coefficients: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if lower >= upper {
            return Err(Error::InvalidProblem(format!(
                "interval [{lower}, {upper}] is empty or degenerate"
            )));
        }
        if states.is_empty() {
            return Err(Error::InvalidProblem("empty state set".into()));
        }
        if coefficients.len() != states.len() {
            return Err(Error::InvalidProblem(format!(
                "{} polynomials for {} states",
                coefficients.len(),
                states.len()
            )));
        }
        if let Some(j) = coefficients.iter().position(Vec::is_empty) {
            return Err(Error::InvalidProblem(format!("polynomial for state {j} is empty")));
        }
        Ok(PolynomialProblem {
            lower,
            upper,
            states,
            coefficients,
        })
    }

    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn coefficients(&self) -> &[Vec<Rational>] {
        &self.coefficients
    }

    pub fn evaluate(&self, state: usize, action: &Rational) -> Rational {
        self.coefficients[state]
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * action + c)
    }
}

/// `u(a_i, p) = Σ_j p_j u(a_i, θ_j)`.
pub fn expected_payoff(problem: &DecisionProblem, action: usize, belief: &Belief) -> Result<Rational> {
    problem.check_action(action)?;
    problem.check_belief(belief)?;
    Ok(belief.dot(problem.row(action)))
}

/// Expected payoff of every action, in action order.
pub fn payoff_profile(problem: &DecisionProblem, belief: &Belief) -> Result<Vec<Rational>> {
    problem.check_belief(belief)?;
    Ok(problem.rows().iter().map(|row| belief.dot(row)).collect())
}

/// Indices of the optimal actions at `belief`, ascending. Never empty.
pub fn argmax_set(problem: &DecisionProblem, belief: &Belief) -> Result<Vec<usize>> {
    let values = payoff_profile(problem, belief)?;
    Ok(argmax_of(&values))
}

pub(crate) fn argmax_of(values: &[Rational]) -> Vec<usize> {
    let Some(best) = values.iter().max() else {
        return Vec::new();
    };
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| *v == best)
        .map(|(i, _)| i)
        .collect()
}

/// True iff no `i < j < k` has `values[j] < values[i]` and
/// `values[j] < values[k]`.
pub fn is_unimodal(values: &[Rational]) -> bool {
    find_dip(values).is_none()
}

/// A strict interior dip `(i, j, k)`, if any. `j` is the first dipping
/// position, `i` and `k` the nearest strictly higher positions on either side.
pub fn find_dip(values: &[Rational]) -> Option<(usize, usize, usize)> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    // suffix_max[j] = max(values[j..])
    let mut suffix_max = values.to_vec();
    for j in (0..n - 1).rev() {
        if suffix_max[j + 1] > suffix_max[j] {
            suffix_max[j] = suffix_max[j + 1].clone();
        }
    }
    let mut prefix_max = values[0].clone();
    for j in 1..n - 1 {
        let v = &values[j];
        if *v < prefix_max && *v < suffix_max[j + 1] {
            let i = (0..j).rev().find(|&i| values[i] > *v)?;
            let k = (j + 1..n).find(|&k| values[k] > *v)?;
            return Some((i, j, k));
        }
        if *v > prefix_max {
            prefix_max = v.clone();
        }
    }
    None
}

/// Which reading of "quasi-monotone" to apply.
///
/// `Literal` requires a split index `k ∈ {1, ..., n}` with non-positive
/// entries before it and non-negative entries from it on. `Relaxed` also
/// admits `k = 0` and `k = n + 1`, i.e. it only forbids a positive entry
/// followed (anywhere later) by a negative one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum QuasiMonotoneMode {
    #[default]
    Relaxed,
    Literal,
}

impl fmt::Display for QuasiMonotoneMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuasiMonotoneMode::Relaxed => "relaxed",
            QuasiMonotoneMode::Literal => "literal",
        })
    }
}

/// Returns the smallest admissible split index when `entries` is
/// quasi-monotone in `mode`, `None` otherwise.
pub fn is_quasi_monotone(entries: &[Rational], mode: QuasiMonotoneMode) -> Result<Option<usize>> {
    if entries.is_empty() {
        return Err(Error::InvalidArgument("quasi-monotonicity of an empty vector".into()));
    }
    let len = entries.len();
    // Everything from the split on must be non-negative.
    let mut split = entries
        .iter()
        .rposition(|e| e.is_negative())
        .map_or(0, |last_negative| last_negative + 1);
    if mode == QuasiMonotoneMode::Literal {
        split = split.max(1);
        if split > len - 1 {
            return Ok(None);
        }
    }
    if entries[..split].iter().any(|e| e.is_positive()) {
        return Ok(None);
    }
    Ok(Some(split))
}

/// True iff `indices` is exactly `{min, min + 1, ..., max}`.
pub fn is_contiguous(indices: &[usize], universe_size: usize) -> Result<bool> {
    let (Some(&lo), Some(&hi)) = (indices.iter().min(), indices.iter().max()) else {
        return Err(Error::InvalidArgument("contiguity of an empty set".into()));
    };
    if hi >= universe_size {
        return Err(Error::InvalidArgument(format!(
            "index {hi} outside universe of size {universe_size}"
        )));
    }
    let mut present = vec![false; hi - lo + 1];
    for &i in indices {
        present[i - lo] = true;
    }
    Ok(present.into_iter().all(|p| p))
}

/// Samples the action interval at `grid_points` equally spaced exact points
/// (endpoints included) and evaluates every state's polynomial there.
pub fn discretize(poly: &PolynomialProblem, grid_points: usize) -> Result<DecisionProblem> {
    if grid_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "discretization needs at least 2 grid points, got {grid_points}"
        )));
    }
    let step = (&poly.upper - &poly.lower) / Rational::from_integer(BigInt::from(grid_points - 1));
    let actions: Vec<Rational> = (0..grid_points)
        .map(|t| &poly.lower + &step * Rational::from_integer(BigInt::from(t)))
        .collect();
    let payoff = actions
        .iter()
        .map(|a| (0..poly.states.len()).map(|j| poly.evaluate(j, a)).collect())
        .collect();
    DecisionProblem::new(actions, poly.states.clone(), payoff)
}
