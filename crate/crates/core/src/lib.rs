//! Exact-arithmetic analysis of finite decision problems under belief
//! uncertainty.
//!
//! A [`DecisionProblem`] pairs an ordered finite action set with a payoff
//! matrix over finitely many states. Beliefs are exact rational points of the
//! probability simplex over states. On top of the pointwise evaluators in
//! [`problem`], the crate decides over the *whole* simplex:
//!
//! * whether expected payoffs are quasi-concave in the action ([`qcc`]),
//! * whether optimal-action sets are always contiguous ([`geometry`]),
//! * which actions are weakly dominated and whether the survivors are each
//!   uniquely optimal at some interior belief ([`dominance`]),
//! * the local single-crossing property and the state relabeling that
//!   establishes it for quasi-concave problems ([`lsc`]).
//!
//! Every region-level question is reduced to a small linear program solved by
//! an exact rational simplex method ([`exactlp`]). The [`oracle`] module holds
//! brute-force ground truth used to cross-check the LP verdicts.

pub mod dominance;
pub mod error;
pub mod exactlp;
pub mod geometry;
pub mod lsc;
pub mod oracle;
pub mod problem;
pub mod qcc;

pub use error::{Error, Result};
pub use problem::{
    argmax_set, discretize, expected_payoff, is_contiguous, is_quasi_monotone, is_unimodal,
    parse_rational, Belief, DecisionProblem, DifferenceVector, PolynomialProblem,
    QuasiMonotoneMode, Rational,
};
