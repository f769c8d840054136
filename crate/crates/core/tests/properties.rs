use proptest::prelude::*;

use qcc_core::dominance::{iterated_elimination, mixed_dominance_certificate, mixture_dominates};
use qcc_core::exactlp::{strict_feasible, LinearSystem};
use qcc_core::geometry::{check_argmax_convexity, check_nesting};
use qcc_core::lsc::{check_lsc, relabel_for_lsc};
use qcc_core::oracle::{exact_check_two_state, grid_beliefs, oracle_find_dip, oracle_find_gap, GridSpec};
use qcc_core::problem::{int, ratio};
use qcc_core::qcc::check_qcc;
use qcc_core::{
    argmax_set, discretize, expected_payoff, is_contiguous, is_quasi_monotone, is_unimodal, Belief,
    DecisionProblem, PolynomialProblem, QuasiMonotoneMode, Rational,
};

fn problem(max_actions: usize, max_states: usize) -> impl Strategy<Value = DecisionProblem> {
    (1..=max_actions, 1..=max_states).prop_flat_map(|(a, s)| {
        prop::collection::vec(prop::collection::vec(-8i64..=8, s), a)
            .prop_map(|rows| DecisionProblem::from_integers(&rows).unwrap())
    })
}

fn problem_with_states(max_actions: usize, states: usize) -> impl Strategy<Value = DecisionProblem> {
    (1..=max_actions).prop_flat_map(move |a| {
        prop::collection::vec(prop::collection::vec(-8i64..=8, states), a)
            .prop_map(|rows| DecisionProblem::from_integers(&rows).unwrap())
    })
}

fn belief(dim: usize) -> impl Strategy<Value = Belief> {
    prop::collection::vec(0u64..=6, dim)
        .prop_filter("nonzero mass", |c| c.iter().sum::<u64>() > 0)
        .prop_map(|c| {
            let total = c.iter().sum();
            Belief::from_counts(&c, total).unwrap()
        })
}

fn problem_and_belief() -> impl Strategy<Value = (DecisionProblem, Belief)> {
    problem(5, 4).prop_flat_map(|p| {
        let n = p.num_states();
        (Just(p), belief(n))
    })
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| ratio(n, d))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=5).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #[test]
    fn expected_payoff_is_affine(
        (p, b) in problem_and_belief(),
        alpha in positive_rational(),
        shift in prop::collection::vec(small_rational(), 4),
    ) {
        let shift = &shift[..p.num_states()];
        let q = p.affine_transform(&alpha, shift).unwrap();
        for a in 0..p.num_actions() {
            let lhs = expected_payoff(&q, a, &b).unwrap();
            let rhs = &alpha * expected_payoff(&p, a, &b).unwrap() + b.dot(shift);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn argmax_is_nonempty_sorted_and_maximal((p, b) in problem_and_belief()) {
        let best = argmax_set(&p, &b).unwrap();
        prop_assert!(!best.is_empty());
        prop_assert!(best.windows(2).all(|w| w[0] < w[1]));
        let top = expected_payoff(&p, best[0], &b).unwrap();
        for a in 0..p.num_actions() {
            let v = expected_payoff(&p, a, &b).unwrap();
            prop_assert!(v <= top);
            prop_assert_eq!(v == top, best.contains(&a));
        }
    }

    #[test]
    fn unimodality_is_reversal_symmetric(v in prop::collection::vec(-5i64..=5, 0..8)) {
        let forward: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
        let backward: Vec<Rational> = forward.iter().rev().cloned().collect();
        prop_assert_eq!(is_unimodal(&forward), is_unimodal(&backward));
    }

    #[test]
    fn literal_quasi_monotone_implies_relaxed(v in prop::collection::vec(-3i64..=3, 1..7)) {
        let entries: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
        if is_quasi_monotone(&entries, QuasiMonotoneMode::Literal).unwrap().is_some() {
            prop_assert!(is_quasi_monotone(&entries, QuasiMonotoneMode::Relaxed).unwrap().is_some());
        }
    }

    #[test]
    fn strict_feasibility_agrees_with_grid(
        n in 1usize..=3,
        rows in prop::collection::vec((prop::collection::vec(-4i64..=4, 3), -3i64..=3), 1..5),
    ) {
        let mut system = LinearSystem::new(n);
        for (coeffs, rhs) in &rows {
            system = system.gt(coeffs[..n].iter().map(|&c| int(c)).collect(), int(*rhs));
        }
        let result = strict_feasible(&system).unwrap();
        match &result.witness {
            Some(w) => prop_assert!(system.satisfied_by(w)),
            None => {
                for b in grid_beliefs(GridSpec::new(8, n).unwrap()) {
                    prop_assert!(!system.satisfied_by(&b), "grid point {} is feasible", b);
                }
            }
        }
    }

    #[test]
    fn duality_holds_for_every_action(p in problem(5, 4)) {
        for a in 0..p.num_actions() {
            if let Some(m) = mixed_dominance_certificate(&p, a).unwrap() {
                prop_assert!(mixture_dominates(&p, &m, a));
            }
        }
    }

    #[test]
    fn elimination_survivors_are_certified(p in problem(6, 4)) {
        let r = iterated_elimination(&p).unwrap();
        prop_assert!(!r.kept.is_empty());
        prop_assert_eq!(r.kept.len() + r.removed.len(), p.num_actions());
        for (s, w) in r.witnesses.iter().enumerate() {
            prop_assert!(w.is_interior());
            prop_assert_eq!(argmax_set(&r.surviving, w).unwrap(), vec![s]);
        }
    }

    #[test]
    fn verdicts_match_grid_and_witnesses_verify(p in problem(5, 3)) {
        let spec = GridSpec::new(6, p.num_states()).unwrap();
        let qcc = check_qcc(&p).unwrap();
        let convex = check_argmax_convexity(&p).unwrap();
        if qcc.holds {
            prop_assert!(oracle_find_dip(&p, spec).unwrap().is_none());
        }
        if convex.holds {
            prop_assert!(oracle_find_gap(&p, spec).unwrap().is_none());
        }
        if let Some(w) = &qcc.counterexample {
            prop_assert!(w.verify(&p));
        }
        if let Some(w) = &convex.counterexample {
            prop_assert!(w.verify(&p));
        }
    }

    #[test]
    fn equivalence_after_elimination(p in problem(6, 4)) {
        let s = iterated_elimination(&p).unwrap().surviving;
        let qcc = check_qcc(&s).unwrap();
        prop_assert_eq!(qcc.holds, check_argmax_convexity(&s).unwrap().holds);
        if qcc.holds {
            let nesting = check_nesting(&s).unwrap();
            prop_assert!(nesting.chain_holds && nesting.region_identification_holds);
            for b in grid_beliefs(GridSpec::new(6, s.num_states()).unwrap()) {
                prop_assert!(is_contiguous(&argmax_set(&s, &b).unwrap(), s.num_actions()).unwrap());
            }
        }
    }

    #[test]
    fn verdicts_are_invariant(
        p in problem(5, 4),
        alpha in positive_rational(),
        shift in prop::collection::vec(small_rational(), 4),
    ) {
        let qcc = check_qcc(&p).unwrap().holds;
        let convex = check_argmax_convexity(&p).unwrap().holds;
        let q = p.affine_transform(&alpha, &shift[..p.num_states()]).unwrap();
        prop_assert_eq!(check_qcc(&q).unwrap().holds, qcc);
        prop_assert_eq!(check_argmax_convexity(&q).unwrap().holds, convex);
        let r = p.reversed();
        prop_assert_eq!(check_qcc(&r).unwrap().holds, qcc);
        prop_assert_eq!(check_argmax_convexity(&r).unwrap().holds, convex);
    }

    #[test]
    fn relabeling_is_idempotent_and_yields_lsc(p in problem(6, 4)) {
        let s = iterated_elimination(&p).unwrap().surviving;
        let (_, relabeled) = relabel_for_lsc(&s).unwrap();
        prop_assert!(relabel_for_lsc(&relabeled).unwrap().0.is_identity());
        if check_qcc(&s).unwrap().holds {
            prop_assert!(check_lsc(&relabeled, QuasiMonotoneMode::Relaxed).unwrap().holds);
        }
    }

    #[test]
    fn two_state_oracle_agrees_with_lp(p in problem_with_states(6, 2)) {
        let (qcc, convex) = exact_check_two_state(&p).unwrap();
        prop_assert_eq!(qcc, check_qcc(&p).unwrap().holds);
        prop_assert_eq!(convex, check_argmax_convexity(&p).unwrap().holds);
    }

    #[test]
    fn discretize_samples_the_polynomial(
        coefficients in prop::collection::vec(prop::collection::vec(-3i64..=3, 1..4), 1..4),
        lower in -3i64..=0,
        width in 1i64..=4,
        m in 2usize..=5,
    ) {
        let states = (0..coefficients.len()).map(|j| format!("s{j}")).collect();
        let coefficients = coefficients
            .iter()
            .map(|c| c.iter().map(|&x| int(x)).collect())
            .collect();
        let poly = PolynomialProblem::new(int(lower), int(lower + width), states, coefficients).unwrap();
        let d = discretize(&poly, m).unwrap();
        prop_assert_eq!(d.num_actions(), m);
        for (i, a) in d.actions().iter().enumerate() {
            for j in 0..d.num_states() {
                prop_assert_eq!(d.payoff(i, j), &poly.evaluate(j, a));
            }
        }
        prop_assert_eq!(d.actions()[0].clone(), int(lower));
    }
}
