//! Local single crossing: every payoff increment vector
//! `Δu(a_i, ·) = u(a_i, ·) - u(a_{i-1}, ·)` is quasi-monotone across states.
//!
//! [`relabel_for_lsc`] orders states by their lowest optimal action. For a
//! quasi-concave problem the relabeled problem is LSC (relaxed reading).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::problem::{
    argmax_of, int, is_quasi_monotone, Belief, DecisionProblem, DifferenceVector, QuasiMonotoneMode,
    Rational,
};

pub fn difference_vectors(problem: &DecisionProblem) -> Vec<DifferenceVector> {
    let zero = DifferenceVector {
        action_index: 0,
        entries: vec![Rational::zero(); problem.num_states()],
    };
    std::iter::once(zero)
        .chain((1..problem.num_actions()).map(|i| DifferenceVector {
            action_index: i,
            entries: problem
                .row(i)
                .iter()
                .zip(problem.row(i - 1))
                .map(|(a, b)| a - b)
                .collect(),
        }))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LscVerdict {
    pub holds: bool,
    pub mode: QuasiMonotoneMode,
    pub failing_action: Option<usize>,
    pub failing_vector: Option<DifferenceVector>,
}

pub fn check_lsc(problem: &DecisionProblem, mode: QuasiMonotoneMode) -> Result<LscVerdict> {
    for dv in difference_vectors(problem) {
        if is_quasi_monotone(&dv.entries, mode)?.is_none() {
            return Ok(LscVerdict {
                holds: false,
                mode,
                failing_action: Some(dv.action_index),
                failing_vector: Some(dv),
            });
        }
    }
    Ok(LscVerdict {
        holds: true,
        mode,
        failing_action: None,
        failing_vector: None,
    })
}

/// A reordering of states. Position `m` holds original state
/// `permutation[m]`, whose key is `sort_keys[m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    pub permutation: Vec<usize>,
    pub sort_keys: Vec<Rational>,
}

impl Relabeling {
    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(m, &j)| m == j)
    }

    /// Moves a belief over the original states to the relabeled states.
    pub fn apply_to_belief(&self, belief: &Belief) -> Result<Belief> {
        if belief.dim() != self.permutation.len() {
            return Err(Error::Dimension {
                expected: self.permutation.len(),
                got: belief.dim(),
            });
        }
        Belief::new(self.permutation.iter().map(|&j| belief.coords()[j].clone()).collect())
    }
}

/// Sorts states by `a*(θ) = min argmax_i u(a_i, θ)` (stable, so ties keep
/// their original order) and returns the permutation with the column-permuted
/// problem. Keys are action indices.
pub fn relabel_for_lsc(problem: &DecisionProblem) -> Result<(Relabeling, DecisionProblem)> {
    let keys: Vec<usize> = (0..problem.num_states())
        .map(|j| argmax_of(&problem.column(j))[0])
        .collect();
    let mut permutation: Vec<usize> = (0..problem.num_states()).collect();
    permutation.sort_by_key(|&j| keys[j]);
    let relabeled = problem.permute_states(&permutation)?;
    let sort_keys = permutation.iter().map(|&j| int(keys[j] as i64)).collect();
    Ok((
        Relabeling {
            permutation,
            sort_keys,
        },
        relabeled,
    ))
}
