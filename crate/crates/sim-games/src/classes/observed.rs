//! Leader-observed games: P1 moves first, P2 observes the move and replies.
//! The normal form has one P2 strategy per response function. With the
//! replies restricted to Pareto-optimal ones, simulation buys P1 nothing in
//! these games: P2 can always steer P1 down to their maxmin value, after
//! which paying to simulate is wasted money.

use crate::game::NormalFormGame;

/// The normal-form representation of the game where P2 observes P1's row
/// before choosing a column. P2's strategies are response functions; when
/// `pareto_only` is set, each reply is restricted to columns not strictly
/// Pareto-dominated among the replies to that row.
///
/// The column count grows as a product over rows, so this is desk-scale
/// machinery for small bases.
pub fn leader_observed_normal_form(base: &NormalFormGame, pareto_only: bool) -> NormalFormGame {
    let allowed: Vec<Vec<usize>> = (0..base.n_rows())
        .map(|r| {
            (0..base.n_cols())
                .filter(|&c| {
                    if !pareto_only {
                        return true;
                    }
                    !(0..base.n_cols()).any(|d| {
                        base.u1(r, d) > base.u1(r, c) && base.u2(r, d) > base.u2(r, c)
                    })
                })
                .collect()
        })
        .collect();

    let mut responses: Vec<Vec<usize>> = vec![Vec::new()];
    for options in &allowed {
        responses = responses
            .iter()
            .flat_map(|prefix| {
                options.iter().map(move |&c| {
                    let mut next = prefix.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }

    let s2_labels: Vec<String> = responses
        .iter()
        .map(|f| {
            f.iter()
                .map(|&c| base.s2_labels()[c].as_str())
                .collect::<Vec<_>>()
                .join("/")
        })
        .collect();
    let u1 = (0..base.n_rows())
        .map(|r| responses.iter().map(|f| base.u1(r, f[r]).clone()).collect())
        .collect();
    let u2 = (0..base.n_rows())
        .map(|r| responses.iter().map(|f| base.u2(r, f[r]).clone()).collect())
        .collect();
    NormalFormGame::new(base.s1_labels().to_vec(), s2_labels, u1, u2)
        .expect("response functions have distinct labels")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::tg;
    use crate::game::Player;
    use crate::rational::Rational;
    use crate::simulation::{build_msim_reduced, find_simulation_equilibria, SimKind, SimulationConfig};

    #[test]
    fn trust_game_response_functions() {
        let g = leader_observed_normal_form(&tg(), true);
        assert_eq!(g.n_rows(), 2);
        // Both replies to T are Pareto-optimal; replies to WO tie at (0,0).
        assert_eq!(g.n_cols(), 4);
        assert_eq!(g.s2_labels(), &["C/C", "C/D", "D/C", "D/D"]);
    }

    #[test]
    fn observed_games_admit_no_simulation_equilibrium() {
        let small_trust = NormalFormGame::from_integers(
            &["T", "WO"],
            &["C", "D"],
            &[&[1, -1], &[0, 0]],
            &[&[1, 2], &[0, 0]],
        )
        .unwrap();
        for base in [tg(), small_trust] {
            let observed = leader_observed_normal_form(&base, true);
            for cost in [Rational::new(1, 10), Rational::new(1, 4)] {
                let config = SimulationConfig::new(cost, SimKind::Mixed).unwrap();
                let reduced = build_msim_reduced(&observed, &config).unwrap();
                assert!(find_simulation_equilibria(&reduced).is_empty());
            }
        }
    }

    #[test]
    fn observed_equilibria_pin_p1_to_the_maxmin_value() {
        let observed = leader_observed_normal_form(&tg(), true);
        let maxmin = observed.maxmin_value(Player::One);
        for ne in crate::equilibrium::enumerate_nash(&observed) {
            assert_eq!(ne.payoffs.u1, maxmin);
        }
    }
}
