//! Quasi-concavity of expected payoffs in the action, over the whole closed
//! belief simplex.
//!
//! A problem fails to be quasi-concave iff some triple `i < j < k` admits a
//! belief with `u(a_j, p) < u(a_i, p)` and `u(a_j, p) < u(a_k, p)`. Each
//! triple is one strict LP; the first feasible triple (lexicographically)
//! is reported.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactlp::{strict_feasible, LinearSystem};
use crate::problem::{find_dip, is_unimodal, payoff_profile, Belief, DecisionProblem, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DipWitness {
    pub belief: Belief,
    pub triple: (usize, usize, usize),
    /// Exact expected payoffs of the three actions at `belief`.
    pub values: [Rational; 3],
}

impl DipWitness {
    /// Re-evaluates the dip inequalities by substitution.
    pub fn verify(&self, problem: &DecisionProblem) -> bool {
        let (i, j, k) = self.triple;
        if !(i < j && j < k && k < problem.num_actions()) {
            return false;
        }
        let Ok(values) = payoff_profile(problem, &self.belief) else {
            return false;
        };
        let actual = [values[i].clone(), values[j].clone(), values[k].clone()];
        actual == self.values && actual[1] < actual[0] && actual[1] < actual[2]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QccVerdict {
    pub holds: bool,
    pub counterexample: Option<DipWitness>,
    /// Number of triples decided, including the failing one.
    pub checked_triples: usize,
}

pub(crate) fn triples(len: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..len).flat_map(move |i| {
        (i + 1..len).flat_map(move |j| (j + 1..len).map(move |k| (i, j, k)))
    })
}

pub(crate) fn difference(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn check_qcc(problem: &DecisionProblem) -> Result<QccVerdict> {
    let mut checked = 0;
    for (i, j, k) in triples(problem.num_actions()) {
        checked += 1;
        let system = LinearSystem::new(problem.num_states())
            .gt(difference(problem.row(i), problem.row(j)), Rational::zero())
            .gt(difference(problem.row(k), problem.row(j)), Rational::zero());
        let Some(belief) = strict_feasible(&system)?.witness else {
            continue;
        };
        let values = payoff_profile(problem, &belief)?;
        let witness = DipWitness {
            values: [values[i].clone(), values[j].clone(), values[k].clone()],
            belief,
            triple: (i, j, k),
        };
        if !witness.verify(problem) {
            return Err(Error::internal(
                "qcc_witness",
                format!("dip witness at {} does not re-verify", witness.belief),
            ));
        }
        return Ok(QccVerdict {
            holds: false,
            counterexample: Some(witness),
            checked_triples: checked,
        });
    }
    Ok(QccVerdict {
        holds: true,
        counterexample: None,
        checked_triples: checked,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodalityProfile {
    pub values: Vec<Rational>,
    pub unimodal: bool,
}

impl UnimodalityProfile {
    pub fn dip(&self) -> Option<(usize, usize, usize)> {
        find_dip(&self.values)
    }
}

/// Expected payoff of every action at `belief` and whether that sequence is
/// unimodal.
pub fn unimodality_profile(problem: &DecisionProblem, belief: &Belief) -> Result<UnimodalityProfile> {
    let values = payoff_profile(problem, belief)?;
    let unimodal = is_unimodal(&values);
    Ok(UnimodalityProfile { values, unimodal })
}
