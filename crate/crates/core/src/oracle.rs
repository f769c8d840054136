//! Brute-force ground truth, independent of the LP path: exhaustive grids
//! over the simplex, an exact breakpoint oracle for two-state problems, and
//! seeded instance generators.
//!
//! The grid oracle can only confirm failures; universal claims for three or
//! more states are left to the LP checkers.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::{
    argmax_set, find_dip, int, is_contiguous, is_unimodal, payoff_profile, Belief, DecisionProblem,
    Rational,
};

/// A grid belief together with the offending action triple.
pub type GridHit = (Belief, (usize, usize, usize));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    pub denominator: u64,
    /// Number of belief coordinates (states).
    pub dimension: usize,
}

impl GridSpec {
    pub fn new(denominator: u64, dimension: usize) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidArgument("grid denominator must be at least 1".into()));
        }
        if dimension == 0 {
            return Err(Error::InvalidArgument("grid dimension must be at least 1".into()));
        }
        Ok(GridSpec {
            denominator,
            dimension,
        })
    }

    /// `C(D + n, n)` beliefs, where `n + 1` is the dimension.
    pub fn size(&self) -> BigInt {
        let n = self.dimension as u64 - 1;
        let mut count = BigInt::one();
        for t in 1..=n {
            count = count * BigInt::from(self.denominator + t) / BigInt::from(t);
        }
        count
    }
}

/// Every belief whose coordinates are multiples of `1/D`, in lexicographic
/// order of the coordinate vector.
pub fn grid_beliefs(spec: GridSpec) -> GridBeliefs {
    let mut counts = vec![0; spec.dimension];
    counts[spec.dimension - 1] = spec.denominator;
    GridBeliefs {
        denominator: spec.denominator,
        counts: Some(counts),
    }
}

pub struct GridBeliefs {
    denominator: u64,
    counts: Option<Vec<u64>>,
}

impl Iterator for GridBeliefs {
    type Item = Belief;

    fn next(&mut self) -> Option<Belief> {
        let counts = self.counts.as_mut()?;
        let belief = Belief::from_counts(counts, self.denominator).expect("grid point lies on the simplex");
        let last = counts.len() - 1;
        // Lexicographic successor: bump the rightmost coordinate that still
        // has mass to its right, and move the remaining mass to the end.
        let mut tail = 0;
        let mut advanced = false;
        for i in (0..last).rev() {
            tail += counts[i + 1];
            if tail > 0 {
                counts[i] += 1;
                for c in counts[i + 1..].iter_mut() {
                    *c = 0;
                }
                counts[last] = tail - 1;
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.counts = None;
        }
        Some(belief)
    }
}

/// First grid belief whose payoff profile has a strict interior dip.
pub fn oracle_find_dip(problem: &DecisionProblem, spec: GridSpec) -> Result<Option<GridHit>> {
    check_spec(problem, spec)?;
    for belief in grid_beliefs(spec) {
        let values = payoff_profile(problem, &belief)?;
        if let Some(triple) = find_dip(&values) {
            return Ok(Some((belief, triple)));
        }
    }
    Ok(None)
}

/// First grid belief whose optimal-action set has a gap, with
/// `(lowest optimal, first missing, next optimal)`.
pub fn oracle_find_gap(problem: &DecisionProblem, spec: GridSpec) -> Result<Option<GridHit>> {
    check_spec(problem, spec)?;
    for belief in grid_beliefs(spec) {
        let best = argmax_set(problem, &belief)?;
        if let Some(triple) = gap_triple(&best) {
            return Ok(Some((belief, triple)));
        }
    }
    Ok(None)
}

fn gap_triple(sorted: &[usize]) -> Option<(usize, usize, usize)> {
    sorted
        .windows(2)
        .find(|w| w[1] > w[0] + 1)
        .map(|w| (sorted[0], w[0] + 1, w[1]))
}

fn check_spec(problem: &DecisionProblem, spec: GridSpec) -> Result<()> {
    if spec.dimension != problem.num_states() {
        return Err(Error::Dimension {
            expected: problem.num_states(),
            got: spec.dimension,
        });
    }
    Ok(())
}

/// Complete decision of (quasi-concave, argmax-convex) for two states.
///
/// With `p = (1 - x, x)` every pairwise comparison changes sign only at its
/// indifference point, so evaluating at all such points in `[0, 1]`, both
/// endpoints, and the midpoints between consecutive ones covers every sign
/// pattern that occurs.
pub fn exact_check_two_state(problem: &DecisionProblem) -> Result<(bool, bool)> {
    if problem.num_states() != 2 {
        return Err(Error::InvalidArgument(format!(
            "two-state oracle applied to {} states",
            problem.num_states()
        )));
    }
    let mut points = vec![Rational::zero(), Rational::one()];
    let k = problem.num_actions();
    for i in 0..k {
        for j in i + 1..k {
            let d0 = problem.payoff(i, 0) - problem.payoff(j, 0);
            let d1 = problem.payoff(i, 1) - problem.payoff(j, 1);
            if d0 != d1 {
                let x = &d0 / (&d0 - &d1);
                if x >= Rational::zero() && x <= Rational::one() {
                    points.push(x);
                }
            }
        }
    }
    points.sort();
    points.dedup();
    let half = Rational::new(1.into(), 2.into());
    let midpoints: Vec<Rational> = points.windows(2).map(|w| (&w[0] + &w[1]) * &half).collect();
    points.extend(midpoints);

    let (mut qcc, mut convex) = (true, true);
    for x in points {
        let belief = Belief::new(vec![Rational::one() - &x, x])?;
        let values = payoff_profile(problem, &belief)?;
        qcc &= is_unimodal(&values);
        convex &= is_contiguous(&argmax_set(problem, &belief)?, k)?;
    }
    Ok((qcc, convex))
}

/// Seeded payoff matrix with integer entries in `[-magnitude, magnitude]`.
///
/// Uses ChaCha8 seeded through `seed_from_u64`, which is reproducible across
/// platforms.
pub fn random_problem(seed: u64, actions: usize, states: usize, magnitude: i64) -> Result<DecisionProblem> {
    check_dims(actions, states, magnitude)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..actions)
        .map(|_| (0..states).map(|_| int(rng.gen_range(-magnitude..=magnitude))).collect())
        .collect();
    DecisionProblem::from_rows(rows)
}

/// Seeded quasi-concave problem: `u(a_i, θ_j) = c_j - w_j (i - m_j)^2` with
/// `w_j >= 1`, peaks `m_j` among the actions and offsets in
/// `[-magnitude, magnitude]`. Every expected payoff is concave in the action
/// index, hence unimodal.
pub fn random_concave_problem(seed: u64, actions: usize, states: usize, magnitude: i64) -> Result<DecisionProblem> {
    check_dims(actions, states, magnitude)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<(i64, i64, i64)> = (0..states)
        .map(|_| {
            (
                rng.gen_range(0..actions as i64),
                rng.gen_range(1..=magnitude.max(1)),
                rng.gen_range(-magnitude..=magnitude),
            )
        })
        .collect();
    let rows = (0..actions as i64)
        .map(|i| {
            params
                .iter()
                .map(|&(peak, weight, offset)| int(offset - weight * (i - peak) * (i - peak)))
                .collect()
        })
        .collect();
    DecisionProblem::from_rows(rows)
}

fn check_dims(actions: usize, states: usize, magnitude: i64) -> Result<()> {
    if actions == 0 || states == 0 || magnitude < 1 {
        return Err(Error::InvalidArgument(format!(
            "random instance needs actions, states, magnitude >= 1 (got {actions}, {states}, {magnitude})"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ratio;

    fn p1() -> DecisionProblem {
        DecisionProblem::from_integers(&[[0, -4], [-1, -1], [-4, 0]]).unwrap()
    }

    fn p2() -> DecisionProblem {
        DecisionProblem::from_integers(&[[0, -4], [-4, 0], [-1, -1]]).unwrap()
    }

    #[test]
    fn grid_two_states_denominator_two() {
        let all: Vec<Belief> = grid_beliefs(GridSpec::new(2, 2).unwrap()).collect();
        let expected: Vec<Belief> = [(0, 2), (1, 1), (2, 0)]
            .iter()
            .map(|&(a, b)| Belief::from_counts(&[a, b], 2).unwrap())
            .collect();
        assert_eq!(all, expected);
        assert_eq!(all[1].coords(), &[ratio(1, 2), ratio(1, 2)][..]);
    }

    #[test]
    fn grid_vertices() {
        let all: Vec<Belief> = grid_beliefs(GridSpec::new(1, 3).unwrap()).collect();
        assert_eq!(
            all,
            vec![Belief::point_mass(3, 2), Belief::point_mass(3, 1), Belief::point_mass(3, 0)]
        );
    }

    #[test]
    fn grid_counts_match_binomial() {
        assert_eq!(grid_beliefs(GridSpec::new(4, 2).unwrap()).count(), 5);
        for (d, dim) in [(1, 1), (3, 1), (5, 3), (7, 4), (10, 3), (20, 4)] {
            let spec = GridSpec::new(d, dim).unwrap();
            assert_eq!(BigInt::from(grid_beliefs(spec).count()), spec.size(), "D={d} dim={dim}");
        }
        assert_eq!(GridSpec::new(20, 4).unwrap().size(), BigInt::from(1771));
        assert!(GridSpec::new(0, 2).is_err());
    }

    #[test]
    fn grid_is_lexicographic_and_distinct() {
        let all: Vec<Belief> = grid_beliefs(GridSpec::new(6, 3).unwrap()).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn dip_oracle() {
        let (belief, triple) = oracle_find_dip(&p2(), GridSpec::new(5, 2).unwrap()).unwrap().unwrap();
        assert_eq!(triple, (0, 1, 2));
        assert!(!is_unimodal(&payoff_profile(&p2(), &belief).unwrap()));
        assert_eq!(oracle_find_dip(&p1(), GridSpec::new(100, 2).unwrap()).unwrap(), None);
        let single = DecisionProblem::from_integers(&[[3, 1]]).unwrap();
        assert_eq!(oracle_find_dip(&single, GridSpec::new(9, 2).unwrap()).unwrap(), None);
        assert!(oracle_find_dip(&p1(), GridSpec::new(3, 3).unwrap()).is_err());
    }

    #[test]
    fn gap_oracle() {
        let (belief, triple) = oracle_find_gap(&p2(), GridSpec::new(4, 2).unwrap()).unwrap().unwrap();
        assert_eq!(belief.coords(), &[ratio(3, 4), ratio(1, 4)][..]);
        assert_eq!(triple, (0, 1, 2));
        for d in 1..30 {
            assert_eq!(oracle_find_gap(&p1(), GridSpec::new(d, 2).unwrap()).unwrap(), None);
        }
        let two = DecisionProblem::from_integers(&[[1, 0], [0, 1]]).unwrap();
        assert_eq!(oracle_find_gap(&two, GridSpec::new(10, 2).unwrap()).unwrap(), None);
        // (3/4, 1/4) is not on the D = 5 grid, so no tie shows up there.
        assert_eq!(oracle_find_gap(&p2(), GridSpec::new(5, 2).unwrap()).unwrap(), None);
    }

    #[test]
    fn gap_triples() {
        assert_eq!(gap_triple(&[0, 2]), Some((0, 1, 2)));
        assert_eq!(gap_triple(&[1, 2, 5, 6]), Some((1, 3, 5)));
        assert_eq!(gap_triple(&[1, 2, 3]), None);
    }

    #[test]
    fn two_state_oracle() {
        assert_eq!(exact_check_two_state(&p1()).unwrap(), (true, true));
        assert_eq!(exact_check_two_state(&p2()).unwrap(), (false, false));
        let two = DecisionProblem::from_integers(&[[1, 0], [0, 1]]).unwrap();
        assert_eq!(exact_check_two_state(&two).unwrap(), (true, true));
        let three = DecisionProblem::from_integers(&[[1, 0, 0]]).unwrap();
        assert!(exact_check_two_state(&three).is_err());
    }

    #[test]
    fn random_problems_are_seeded() {
        let a = random_problem(7, 3, 2, 10).unwrap();
        assert_eq!(a, random_problem(7, 3, 2, 10).unwrap());
        assert_ne!(a, random_problem(8, 3, 2, 10).unwrap());
        for seed in 0..50 {
            let p = random_problem(seed, 4, 3, 2).unwrap();
            assert_eq!((p.num_actions(), p.num_states()), (4, 3));
            assert!(p.rows().iter().flatten().all(|v| *v >= int(-2) && *v <= int(2)));
        }
        assert!(random_problem(0, 0, 2, 1).is_err());
        assert!(random_problem(0, 2, 2, 0).is_err());
    }

    #[test]
    fn concave_generator_is_qcc_on_grid() {
        for seed in 0..20 {
            let p = random_concave_problem(seed, 5, 3, 6).unwrap();
            assert_eq!(oracle_find_dip(&p, GridSpec::new(8, 3).unwrap()).unwrap(), None);
        }
    }
}
