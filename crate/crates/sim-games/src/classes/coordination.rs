//! Generalised coordination games: positive payoffs on the diagonal, zeros
//! everywhere else. Every non-empty subset of the diagonal supports exactly
//! one equilibrium, and mixing over fewer actions is better for everyone.

use crate::equilibrium::{check_equilibrium, EquilibriumCheck, EquilibriumProfile};
use crate::game::{GameError, MixedStrategy, NormalFormGame, PayoffPair, Player};
use crate::rational::Rational;
use crate::simulation::{build_msim_reduced, SimKind, SimulationConfig};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoordinationError {
    #[error("a coordination game needs at least two joint actions, got {got}")]
    TooFewActions { got: usize },
    #[error("diagonal payoff {index} must be strictly positive for both players, got {payoffs}")]
    NonPositiveDiagonal { index: usize, payoffs: PayoffPair },
    #[error("game is not square: {rows} rows vs {cols} columns")]
    NotSquare { rows: usize, cols: usize },
    #[error("off-diagonal cell ({row}, {col}) must pay (0, 0)")]
    NonZeroOffDiagonal { row: usize, col: usize },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Builds the n-by-n game with the given diagonal payoffs and zeros off the
/// diagonal.
pub fn make_coordination_game(diagonal: &[PayoffPair]) -> Result<NormalFormGame, CoordinationError> {
    if diagonal.len() < 2 {
        return Err(CoordinationError::TooFewActions { got: diagonal.len() });
    }
    for (index, payoffs) in diagonal.iter().enumerate() {
        if !payoffs.u1.is_positive() || !payoffs.u2.is_positive() {
            return Err(CoordinationError::NonPositiveDiagonal {
                index,
                payoffs: payoffs.clone(),
            });
        }
    }
    let n = diagonal.len();
    let labels: Vec<String> = (1..=n).map(|k| format!("a{k}")).collect();
    let mut u1 = vec![vec![Rational::zero(); n]; n];
    let mut u2 = vec![vec![Rational::zero(); n]; n];
    for (k, payoffs) in diagonal.iter().enumerate() {
        u1[k][k] = payoffs.u1.clone();
        u2[k][k] = payoffs.u2.clone();
    }
    Ok(NormalFormGame::new(labels.clone(), labels, u1, u2)?)
}

/// Recovers the diagonal of a well-formed coordination game.
pub fn validate_coordination(game: &NormalFormGame) -> Result<Vec<PayoffPair>, CoordinationError> {
    if game.n_rows() != game.n_cols() {
        return Err(CoordinationError::NotSquare { rows: game.n_rows(), cols: game.n_cols() });
    }
    if game.n_rows() < 2 {
        return Err(CoordinationError::TooFewActions { got: game.n_rows() });
    }
    for r in 0..game.n_rows() {
        for c in 0..game.n_cols() {
            if r != c && (!game.u1(r, c).is_zero() || !game.u2(r, c).is_zero()) {
                return Err(CoordinationError::NonZeroOffDiagonal { row: r, col: c });
            }
        }
    }
    let diagonal: Vec<PayoffPair> = (0..game.n_rows()).map(|k| game.payoff(k, k)).collect();
    for (index, payoffs) in diagonal.iter().enumerate() {
        if !payoffs.u1.is_positive() || !payoffs.u2.is_positive() {
            return Err(CoordinationError::NonPositiveDiagonal {
                index,
                payoffs: payoffs.clone(),
            });
        }
    }
    Ok(diagonal)
}

/// Expected payoffs of the equilibrium mixing over the diagonal subset `ks`:
/// the harmonic combination `(sum_k 1/u_i(k))^-1` per player.
pub fn harmonic_payoffs(diagonal: &[PayoffPair], ks: &[usize]) -> PayoffPair {
    let inv_sum = |pick: &dyn Fn(&PayoffPair) -> &Rational| -> Rational {
        ks.iter().map(|&k| pick(&diagonal[k]).recip()).sum::<Rational>().recip()
    };
    PayoffPair::new(inv_sum(&|p| &p.u1), inv_sum(&|p| &p.u2))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoordinationRefusal {
    #[error(transparent)]
    Invalid(#[from] CoordinationError),
    #[error("simulation cost must be strictly positive, got {0}")]
    NonPositiveCost(Rational),
    #[error("simulation cost too high: the construction requires cost {relation} {bound}")]
    CostTooHigh { bound: Rational, relation: &'static str },
}

/// Which construction produced the equilibrium.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoordinationCase {
    /// P2 has two or more favourite joint actions and mixes half-half over
    /// two of them; P1 always simulates.
    TiedOptima { first: usize, second: usize },
    /// P2 has a unique favourite `k2`; P1 mixes simulation with their best
    /// remaining action `k1`.
    UniqueOptimum { k1: usize, k2: usize },
}

#[derive(Debug, Clone)]
pub struct CoordinationSimEquilibrium {
    pub case: CoordinationCase,
    /// Weight on the simulate action.
    pub p_sim: Rational,
    /// Weight on P2's second atom.
    pub p_d: Rational,
    pub profile: EquilibriumProfile,
    pub payoffs: PayoffPair,
    pub verification: EquilibriumCheck,
}

/// The closed-form simulation equilibrium of a coordination game, for costs
/// below the case-specific bound.
pub fn coordination_sim_equilibrium(
    game: &NormalFormGame,
    c_sim: &Rational,
) -> Result<CoordinationSimEquilibrium, CoordinationRefusal> {
    let diagonal = validate_coordination(game)?;
    if !c_sim.is_positive() {
        return Err(CoordinationRefusal::NonPositiveCost(c_sim.clone()));
    }
    let n = diagonal.len();
    let best_u2 = diagonal.iter().map(|p| p.u2.clone()).max().expect("non-empty diagonal");
    let optima: Vec<usize> = (0..n).filter(|&k| diagonal[k].u2 == best_u2).collect();

    let (case, p_sim, p_d, rows, atoms): (_, Rational, Rational, Vec<(usize, Rational)>, Vec<(usize, Rational)>) =
        if optima.len() >= 2 {
            let (first, second) = (optima[0], optima[1]);
            let bound = diagonal.iter().map(|p| p.u1.clone()).min().unwrap() / Rational::from(2);
            if *c_sim >= bound {
                return Err(CoordinationRefusal::CostTooHigh { bound, relation: "<" });
            }
            (
                CoordinationCase::TiedOptima { first, second },
                Rational::one(),
                Rational::new(1, 2),
                Vec::new(),
                vec![(first, Rational::new(1, 2)), (second, Rational::new(1, 2))],
            )
        } else {
            let k2 = optima[0];
            let k1 = (0..n)
                .filter(|&k| k != k2)
                .max_by(|&a, &b| diagonal[a].u1.cmp(&diagonal[b].u1))
                .expect("n >= 2");
            let bound = &diagonal[k1].u1 * &diagonal[k2].u1
                / (&diagonal[k1].u1 + &diagonal[k2].u1);
            if *c_sim > bound {
                return Err(CoordinationRefusal::CostTooHigh { bound, relation: "<=" });
            }
            let p_sim = &diagonal[k1].u2 / &diagonal[k2].u2;
            let p_d = c_sim / &diagonal[k2].u1;
            (
                CoordinationCase::UniqueOptimum { k1, k2 },
                p_sim.clone(),
                p_d.clone(),
                vec![(k1, Rational::one() - &p_sim)],
                vec![(k1, Rational::one() - &p_d), (k2, p_d)],
            )
        };

    let config = SimulationConfig::new(c_sim.clone(), SimKind::Mixed).expect("positive cost");
    let reduced = build_msim_reduced(game, &config).expect("valid base game");
    let meta = &reduced.meta;

    let mut s1_probs = vec![Rational::zero(); meta.n_rows()];
    s1_probs[reduced.simulate_row()] = p_sim.clone();
    for (row, weight) in rows {
        s1_probs[row] = weight;
    }
    let s1 = MixedStrategy::new(Player::One, s1_probs).expect("valid distribution");

    let mut s2_probs = vec![Rational::zero(); meta.n_cols()];
    for (k, weight) in atoms {
        let atom = MixedStrategy::pure(Player::Two, k, n);
        let col = reduced.column_of(&atom).expect("pure strategies are simplex corners");
        s2_probs[col] = weight;
    }
    let s2 = MixedStrategy::new(Player::Two, s2_probs).expect("valid distribution");

    let payoffs = meta.expected_utility(&s1, &s2).expect("profile matches meta-game");
    let verification = check_equilibrium(meta, &s1, &s2).expect("profile matches meta-game");
    Ok(CoordinationSimEquilibrium {
        case,
        p_sim,
        p_d,
        profile: EquilibriumProfile {
            support1: s1.support(),
            support2: s2.support(),
            s1,
            s2,
            payoffs: payoffs.clone(),
            degenerate: false,
        },
        payoffs,
        verification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::enumerate_nash;
    use crate::rat;

    fn diag(entries: &[(i64, i64)]) -> Vec<PayoffPair> {
        entries.iter().map(|&(a, b)| PayoffPair::from_integers(a, b)).collect()
    }

    #[test]
    fn constructor_validates_diagonal() {
        assert!(make_coordination_game(&diag(&[(2, 2)])).is_err());
        assert!(make_coordination_game(&diag(&[(2, 2), (0, 1)])).is_err());
        let g = make_coordination_game(&diag(&[(2, 2), (1, 1)])).unwrap();
        assert_eq!(g.payoff(0, 0), PayoffPair::from_integers(2, 2));
        assert_eq!(g.payoff(0, 1), PayoffPair::from_integers(0, 0));
    }

    #[test]
    fn harmonic_formula_matches_enumeration() {
        let d = diag(&[(2, 2), (1, 1)]);
        let g = make_coordination_game(&d).unwrap();
        let mixed = enumerate_nash(&g)
            .into_iter()
            .find(|ne| ne.support1.len() == 2)
            .expect("fully mixed equilibrium");
        assert_eq!(mixed.payoffs, harmonic_payoffs(&d, &[0, 1]));
        assert_eq!(mixed.payoffs, PayoffPair::new(rat!(2 / 3), rat!(2 / 3)));

        let d3 = diag(&[(3, 3), (3, 3), (3, 3)]);
        let g3 = make_coordination_game(&d3).unwrap();
        let mixed3 = enumerate_nash(&g3)
            .into_iter()
            .find(|ne| ne.support1.len() == 3)
            .expect("fully mixed equilibrium");
        assert_eq!(mixed3.payoffs, PayoffPair::new(rat!(1), rat!(1)));
    }

    #[test]
    fn fewer_actions_pareto_dominate() {
        let d = diag(&[(2, 3), (1, 1), (3, 2), (2, 2)]);
        let full: Vec<usize> = (0..4).collect();
        for drop in 0..4 {
            let smaller: Vec<usize> = full.iter().copied().filter(|&k| k != drop).collect();
            let small = harmonic_payoffs(&d, &smaller);
            let big = harmonic_payoffs(&d, &full);
            assert!(crate::game::pareto_strictly_improves(&small, &big));
        }
    }

    #[test]
    fn unique_optimum_case_matches_closed_forms() {
        let g = make_coordination_game(&diag(&[(2, 2), (1, 1)])).unwrap();
        let eq = coordination_sim_equilibrium(&g, &rat!(1 / 10)).unwrap();
        assert_eq!(eq.case, CoordinationCase::UniqueOptimum { k1: 1, k2: 0 });
        assert_eq!(eq.p_sim, rat!(1 / 2));
        assert_eq!(eq.p_d, rat!(1 / 20));
        assert!(eq.verification.is_exact());
    }

    #[test]
    fn tied_optima_case_mixes_over_two_favourites() {
        let g = make_coordination_game(&diag(&[(3, 2), (1, 2)])).unwrap();
        let eq = coordination_sim_equilibrium(&g, &rat!(1 / 4)).unwrap();
        assert_eq!(eq.case, CoordinationCase::TiedOptima { first: 0, second: 1 });
        assert_eq!(eq.p_sim, rat!(1));
        assert!(eq.verification.is_exact());
        // P2 collects the full optimum; P1 pays the simulation cost.
        assert_eq!(eq.payoffs, PayoffPair::new(rat!(7 / 4), rat!(2)));
    }

    #[test]
    fn excessive_cost_is_refused_with_the_bound() {
        let g = make_coordination_game(&diag(&[(3, 2), (1, 2)])).unwrap();
        match coordination_sim_equilibrium(&g, &rat!(100)) {
            Err(CoordinationRefusal::CostTooHigh { bound, .. }) => assert_eq!(bound, rat!(1 / 2)),
            other => panic!("expected cost refusal, got {other:?}"),
        }
    }
}
