//! Weak dominance by mixtures, iterated elimination, and certification that
//! every surviving action is uniquely optimal at some interior belief.
//!
//! The two certificates are LP duals of each other: an action is uniquely
//! optimal somewhere iff no mixture of the other actions weakly dominates it
//! state by state. Both sides are always computed and compared.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlp::{solve, strict_feasible, LinearSystem};
use crate::problem::{argmax_set, Belief, DecisionProblem, Rational};

fn difference(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// An interior belief at which `action` is the unique optimal action, or
/// `None` if there is no such belief anywhere in the simplex.
pub fn unique_optimality_witness(problem: &DecisionProblem, action: usize) -> Result<Option<Belief>> {
    problem.check_action(action)?;
    let mut system = LinearSystem::new(problem.num_states()).interior();
    for other in (0..problem.num_actions()).filter(|&j| j != action) {
        system = system.gt(difference(problem.row(action), problem.row(other)), Rational::zero());
    }
    let result = strict_feasible(&system)?;
    let Some(witness) = result.witness else {
        return Ok(None);
    };
    if argmax_set(problem, &witness)? != [action] || !witness.is_interior() {
        return Err(Error::internal(
            "unique_optimality_witness",
            format!("belief {witness} does not make action {action} uniquely optimal"),
        ));
    }
    Ok(Some(witness))
}

/// A mixture of the other actions that weakly dominates `action` in every
/// state: `(other action index, weight)` pairs with non-zero weight.
pub fn mixed_dominance_certificate(
    problem: &DecisionProblem,
    action: usize,
) -> Result<Option<Vec<(usize, Rational)>>> {
    let certificate = dominating_mixture(problem, action)?;
    let witness = unique_optimality_witness(problem, action)?;
    match (&certificate, &witness) {
        (Some(_), Some(w)) => Err(Error::internal(
            "lp_duality",
            format!("action {action} is both dominated and uniquely optimal at {w}"),
        )),
        (None, None) => Err(Error::internal(
            "lp_duality",
            format!("action {action} is neither dominated nor uniquely optimal anywhere"),
        )),
        _ => Ok(certificate),
    }
}

/// One side of the duality only; used by [`mixed_dominance_certificate`].
fn dominating_mixture(problem: &DecisionProblem, action: usize) -> Result<Option<Vec<(usize, Rational)>>> {
    problem.check_action(action)?;
    let others: Vec<usize> = (0..problem.num_actions()).filter(|&j| j != action).collect();
    if others.is_empty() {
        return Ok(None);
    }
    // Weights live on a simplex over the other actions, so the belief solver
    // applies unchanged with one row per state. The largest uniform margin
    // (capped at 1) is tried first; plain weak dominance is the fallback.
    let mut strict = LinearSystem::new(others.len());
    let mut weak = LinearSystem::new(others.len());
    for state in 0..problem.num_states() {
        let column: Vec<Rational> = others.iter().map(|&m| problem.payoff(m, state).clone()).collect();
        let own = problem.payoff(action, state).clone();
        strict = strict.gt(column.clone(), own.clone());
        weak = weak.ge(column, own);
    }
    let weights = match strict_feasible(&strict)?.witness {
        Some(w) => w,
        None => match solve(&weak)?.witness {
            Some(w) => w,
            None => return Ok(None),
        },
    };
    let mixture: Vec<(usize, Rational)> = others
        .iter()
        .zip(weights.coords())
        .filter(|(_, w)| !w.is_zero())
        .map(|(&m, w)| (m, w.clone()))
        .collect();
    if !mixture_dominates(problem, &mixture, action) {
        return Err(Error::internal(
            "dominance_certificate",
            format!("mixture {mixture:?} does not dominate action {action}"),
        ));
    }
    Ok(Some(mixture))
}

/// State-by-state check `Σ_m w_m u(a_m, θ) >= u(a_action, θ)`.
pub fn mixture_dominates(problem: &DecisionProblem, mixture: &[(usize, Rational)], action: usize) -> bool {
    let total: Rational = mixture.iter().map(|(_, w)| w.clone()).sum();
    if !total.is_one() || mixture.iter().any(|(m, w)| *m == action || w.is_negative()) {
        return false;
    }
    (0..problem.num_states()).all(|state| {
        let mixed: Rational = mixture
            .iter()
            .map(|(m, w)| w * problem.payoff(*m, state))
            .sum();
        &mixed >= problem.payoff(action, state)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RemovalReason {
    /// Same payoff row as the lower-indexed action `kept`.
    Duplicate { kept: usize },
    /// Weakly dominated by the mixture, given as `(original index, weight)`.
    MixedDominated { mixture: Vec<(usize, Rational)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovedAction {
    pub original_index: usize,
    pub reason: RemovalReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationReport {
    pub surviving: DecisionProblem,
    /// `kept[s]` is the original index of surviving action `s`.
    pub kept: Vec<usize>,
    /// In removal order.
    pub removed: Vec<RemovedAction>,
    /// `witnesses[s]` is an interior belief at which surviving action `s` is
    /// the unique optimum.
    pub witnesses: Vec<Belief>,
}

/// Removes duplicate rows (keeping the lowest index), then repeatedly the
/// lowest-index action dominated by a mixture of the current survivors, and
/// finally certifies that every survivor is uniquely optimal at an interior
/// belief.
pub fn iterated_elimination(problem: &DecisionProblem) -> Result<EliminationReport> {
    let mut kept: Vec<usize> = Vec::new();
    let mut removed = Vec::new();
    for i in 0..problem.num_actions() {
        match kept.iter().find(|&&j| problem.row(j) == problem.row(i)) {
            Some(&j) => removed.push(RemovedAction {
                original_index: i,
                reason: RemovalReason::Duplicate { kept: j },
            }),
            None => kept.push(i),
        }
    }

    'rounds: loop {
        let current = problem.select_actions(&kept)?;
        for s in 0..kept.len() {
            if let Some(mixture) = mixed_dominance_certificate(&current, s)? {
                let original = kept[s];
                removed.push(RemovedAction {
                    original_index: original,
                    reason: RemovalReason::MixedDominated {
                        mixture: mixture.into_iter().map(|(m, w)| (kept[m], w)).collect(),
                    },
                });
                kept.remove(s);
                continue 'rounds;
            }
        }
        break;
    }

    let surviving = problem.select_actions(&kept)?;
    let mut witnesses = Vec::with_capacity(kept.len());
    for (s, &original) in kept.iter().enumerate() {
        match unique_optimality_witness(&surviving, s)? {
            Some(w) => witnesses.push(w),
            None => {
                return Err(Error::internal(
                    "unique_optimality_certification",
                    format!("surviving action {original} has no interior unique-optimality belief"),
                ))
            }
        }
    }
    Ok(EliminationReport {
        surviving,
        kept,
        removed,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{int, ratio};

    fn problem(rows: &[[i64; 2]]) -> DecisionProblem {
        DecisionProblem::from_integers(rows).unwrap()
    }

    fn p1() -> DecisionProblem {
        problem(&[[0, -4], [-1, -1], [-4, 0]])
    }

    #[test]
    fn witness_for_middle_action_of_p1() {
        let w = unique_optimality_witness(&p1(), 1).unwrap().unwrap();
        assert_eq!(w.coords(), &[ratio(1, 2), ratio(1, 2)][..]);
    }

    #[test]
    fn no_witness_for_dominated_or_duplicate() {
        let dominated = problem(&[[1, 1], [2, 2]]);
        assert_eq!(unique_optimality_witness(&dominated, 0).unwrap(), None);
        let dup = problem(&[[1, 1], [1, 1]]);
        assert_eq!(unique_optimality_witness(&dup, 0).unwrap(), None);
        assert_eq!(unique_optimality_witness(&dup, 1).unwrap(), None);
        assert!(unique_optimality_witness(&dup, 2).is_err());
    }

    #[test]
    fn mixed_certificate_examples() {
        let p = problem(&[[0, 0], [2, -1], [-1, 2]]);
        assert_eq!(
            mixed_dominance_certificate(&p, 0).unwrap(),
            Some(vec![(1, ratio(1, 2)), (2, ratio(1, 2))])
        );
        let pure = problem(&[[1, 1], [2, 2]]);
        assert_eq!(mixed_dominance_certificate(&pure, 0).unwrap(), Some(vec![(1, int(1))]));
        assert_eq!(mixed_dominance_certificate(&p1(), 1).unwrap(), None);
        assert!(mixed_dominance_certificate(&p1(), 3).is_err());
    }

    #[test]
    fn elimination_of_duplicates_then_dominated() {
        let report = iterated_elimination(&problem(&[[1, 1], [1, 1], [0, 0]])).unwrap();
        assert_eq!(report.kept, vec![0]);
        assert_eq!(
            report.removed,
            vec![
                RemovedAction {
                    original_index: 1,
                    reason: RemovalReason::Duplicate { kept: 0 }
                },
                RemovedAction {
                    original_index: 2,
                    reason: RemovalReason::MixedDominated {
                        mixture: vec![(0, int(1))]
                    }
                },
            ]
        );
        assert_eq!(report.witnesses, vec![Belief::uniform(2)]);
    }

    #[test]
    fn p1_survives_intact() {
        let report = iterated_elimination(&p1()).unwrap();
        assert_eq!(report.kept, vec![0, 1, 2]);
        assert!(report.removed.is_empty());
        for (s, w) in report.witnesses.iter().enumerate() {
            assert!(w.is_interior());
            assert_eq!(argmax_set(&report.surviving, w).unwrap(), vec![s]);
        }
    }

    #[test]
    fn single_action_survives() {
        let p = DecisionProblem::from_integers(&[[3, -1, 2]]).unwrap();
        let report = iterated_elimination(&p).unwrap();
        assert_eq!(report.kept, vec![0]);
        assert_eq!(report.witnesses, vec![Belief::uniform(3)]);
    }

    #[test]
    fn removed_mixture_refers_to_original_indices() {
        // Action 1 duplicates 0; action 3 is dominated by the mix of 2 and 4.
        let p = problem(&[[5, -5], [5, -5], [2, -1], [0, 0], [-1, 2]]);
        let report = iterated_elimination(&p).unwrap();
        assert_eq!(report.kept, vec![0, 2, 4]);
        for r in &report.removed {
            if let RemovalReason::MixedDominated { mixture } = &r.reason {
                assert!(mixture_dominates(&p, mixture, r.original_index));
            }
        }
    }
}
