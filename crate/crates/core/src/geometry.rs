//! Simplex geometry of optimality regions.
//!
//! `L_{i,j}(p) = u(a_i, p) - u(a_j, p)` is affine in the belief; its
//! coefficient vector is [`indifference_hyperplane`]. This module decides
//! whether optimal-action sets are contiguous at every belief and whether the
//! adjacent-comparison halfspaces `{L_{i,i+1} > 0}` form an increasing chain.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactlp::{strict_feasible, LinearSystem};
use crate::problem::{argmax_set, Belief, DecisionProblem, Rational};
use crate::qcc::{difference, triples};

/// Coefficients of `L_{i,j}`: `u(a_i, θ) - u(a_j, θ)` per state.
pub fn indifference_hyperplane(problem: &DecisionProblem, i: usize, j: usize) -> Result<Vec<Rational>> {
    problem.check_action(i)?;
    problem.check_action(j)?;
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "indifference hyperplane needs two distinct actions, got ({i}, {j})"
        )));
    }
    Ok(difference(problem.row(i), problem.row(j)))
}

fn negated(v: Vec<Rational>) -> Vec<Rational> {
    v.into_iter().map(|x| -x).collect()
}

/// At `belief`, actions `i` and `k` are optimal while `j` (between them)
/// is not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapWitness {
    pub belief: Belief,
    pub triple: (usize, usize, usize),
}

impl GapWitness {
    pub fn verify(&self, problem: &DecisionProblem) -> bool {
        let (i, j, k) = self.triple;
        if !(i < j && j < k) {
            return false;
        }
        match argmax_set(problem, &self.belief) {
            Ok(best) => best.contains(&i) && best.contains(&k) && !best.contains(&j),
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexityVerdict {
    pub holds: bool,
    pub counterexample: Option<GapWitness>,
}

/// Decides whether the optimal-action set is contiguous at every belief of
/// the closed simplex.
pub fn check_argmax_convexity(problem: &DecisionProblem) -> Result<ConvexityVerdict> {
    let dim = problem.num_states();
    for (i, j, k) in triples(problem.num_actions()) {
        let mut system = LinearSystem::new(dim).eq(indifference_hyperplane(problem, i, k)?, Rational::zero());
        for l in (0..problem.num_actions()).filter(|&l| l != i && l != k) {
            system = system.ge(indifference_hyperplane(problem, i, l)?, Rational::zero());
        }
        system = system.gt(indifference_hyperplane(problem, i, j)?, Rational::zero());
        let Some(belief) = strict_feasible(&system)?.witness else {
            continue;
        };
        let witness = GapWitness {
            belief,
            triple: (i, j, k),
        };
        if !witness.verify(problem) {
            return Err(Error::internal(
                "convexity_witness",
                format!("gap witness at {} does not re-verify", witness.belief),
            ));
        }
        return Ok(ConvexityVerdict {
            holds: false,
            counterexample: Some(witness),
        });
    }
    Ok(ConvexityVerdict {
        holds: true,
        counterexample: None,
    })
}

/// `L_{index,index+1}(belief) > 0` but `L_{index+1,index+2}(belief) <= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainFailure {
    pub index: usize,
    pub belief: Belief,
}

/// `L_{index,index+1}(belief) > 0` but `L_{index,other}(belief) <= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionFailure {
    pub index: usize,
    pub other: usize,
    pub belief: Belief,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestingReport {
    pub chain_holds: bool,
    pub failures: Vec<ChainFailure>,
    pub region_identification_holds: bool,
    pub region_failures: Vec<RegionFailure>,
}

impl NestingReport {
    /// Re-checks every reported failure by substitution.
    pub fn verify(&self, problem: &DecisionProblem) -> bool {
        let level = |i: usize, j: usize, b: &Belief| -> Option<Rational> {
            indifference_hyperplane(problem, i, j).ok().map(|h| b.dot(&h))
        };
        let chain_ok = self.failures.iter().all(|f| {
            matches!(
                (level(f.index, f.index + 1, &f.belief), level(f.index + 1, f.index + 2, &f.belief)),
                (Some(a), Some(b)) if a > Rational::zero() && b <= Rational::zero()
            )
        });
        let region_ok = self.region_failures.iter().all(|f| {
            f.other > f.index + 1
                && matches!(
                    (level(f.index, f.index + 1, &f.belief), level(f.index, f.other, &f.belief)),
                    (Some(a), Some(b)) if a > Rational::zero() && b <= Rational::zero()
                )
        });
        chain_ok
            && region_ok
            && self.chain_holds == self.failures.is_empty()
            && self.region_identification_holds == self.region_failures.is_empty()
    }
}

/// Checks `{L_{i,i+1} > 0} ⊆ {L_{i+1,i+2} > 0}` for every `i`, and
/// `{L_{i,i+1} > 0} ⊆ {L_{i,j} > 0}` for every `j > i + 1`.
///
/// Meaningful when every action is uniquely optimal somewhere and the
/// problem is quasi-concave, but runs on any input and reports what fails.
pub fn check_nesting(problem: &DecisionProblem) -> Result<NestingReport> {
    let dim = problem.num_states();
    let last = problem.num_actions() - 1;
    let mut failures = Vec::new();
    let mut region_failures = Vec::new();
    for i in 0..last {
        let upper = indifference_hyperplane(problem, i, i + 1)?;
        if i + 2 <= last {
            let system = LinearSystem::new(dim)
                .gt(upper.clone(), Rational::zero())
                .ge(negated(indifference_hyperplane(problem, i + 1, i + 2)?), Rational::zero());
            if let Some(belief) = strict_feasible(&system)?.witness {
                failures.push(ChainFailure { index: i, belief });
            }
        }
        for j in i + 2..=last {
            let system = LinearSystem::new(dim)
                .gt(upper.clone(), Rational::zero())
                .ge(negated(indifference_hyperplane(problem, i, j)?), Rational::zero());
            if let Some(belief) = strict_feasible(&system)?.witness {
                region_failures.push(RegionFailure { index: i, other: j, belief });
            }
        }
    }
    let report = NestingReport {
        chain_holds: failures.is_empty(),
        failures,
        region_identification_holds: region_failures.is_empty(),
        region_failures,
    };
    if !report.verify(problem) {
        return Err(Error::internal("nesting_witness", "nesting failure does not re-verify"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::int;

    fn p1() -> DecisionProblem {
        DecisionProblem::from_integers(&[[0, -4], [-1, -1], [-4, 0]]).unwrap()
    }

    fn p2() -> DecisionProblem {
        DecisionProblem::from_integers(&[[0, -4], [-4, 0], [-1, -1]]).unwrap()
    }

    #[test]
    fn hyperplane_examples() {
        let p = p1();
        assert_eq!(indifference_hyperplane(&p, 0, 1).unwrap(), vec![int(1), int(-3)]);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert_eq!(
                indifference_hyperplane(&p, i, j).unwrap(),
                negated(indifference_hyperplane(&p, j, i).unwrap())
            );
        }
        let dup = DecisionProblem::from_integers(&[[2, 3], [2, 3]]).unwrap();
        assert_eq!(indifference_hyperplane(&dup, 0, 1).unwrap(), vec![int(0), int(0)]);
        assert!(indifference_hyperplane(&p, 1, 1).is_err());
        assert!(indifference_hyperplane(&p, 1, 3).is_err());
    }

    #[test]
    fn p2_has_a_gap() {
        let v = check_argmax_convexity(&p2()).unwrap();
        assert!(!v.holds);
        let w = v.counterexample.unwrap();
        assert_eq!(w.triple, (0, 1, 2));
        assert!(w.verify(&p2()));
        // On two states the tie between actions 0 and 2 is the single point (3/4, 1/4).
        assert_eq!(w.belief, Belief::new(vec![crate::problem::ratio(3, 4), crate::problem::ratio(1, 4)]).unwrap());
    }

    #[test]
    fn p1_is_convex() {
        assert!(check_argmax_convexity(&p1()).unwrap().holds);
        let two = DecisionProblem::from_integers(&[[1, 0], [0, 1]]).unwrap();
        assert!(check_argmax_convexity(&two).unwrap().holds);
    }

    #[test]
    fn p1_nesting_holds() {
        let r = check_nesting(&p1()).unwrap();
        assert!(r.chain_holds);
        assert!(r.region_identification_holds);
        assert!(r.failures.is_empty());
    }

    #[test]
    fn p2_nesting_fails_with_valid_witness() {
        let r = check_nesting(&p2()).unwrap();
        assert!(!r.chain_holds);
        assert_eq!(r.failures.len(), 1);
        let f = &r.failures[0];
        assert_eq!(f.index, 0);
        let l01 = f.belief.dot(&indifference_hyperplane(&p2(), 0, 1).unwrap());
        let l12 = f.belief.dot(&indifference_hyperplane(&p2(), 1, 2).unwrap());
        assert!(l01 > Rational::zero() && l12 <= Rational::zero());
        assert!(r.verify(&p2()));
    }

    #[test]
    fn two_actions_have_empty_chain() {
        let two = DecisionProblem::from_integers(&[[1, 0], [0, 1]]).unwrap();
        let r = check_nesting(&two).unwrap();
        assert!(r.chain_holds && r.region_identification_holds);
        let one = DecisionProblem::from_integers(&[[1, 0]]).unwrap();
        assert!(check_nesting(&one).unwrap().chain_holds);
    }

    #[test]
    fn tampered_failure_is_rejected() {
        let mut r = check_nesting(&p2()).unwrap();
        r.failures[0].belief = Belief::point_mass(2, 1);
        assert!(!r.verify(&p2()));
    }
}
