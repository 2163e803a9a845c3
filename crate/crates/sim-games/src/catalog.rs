//! A small catalog of the worked example games used throughout the crate's
//! documentation, tests, and the guide book.

use crate::classes::tcg::{SubgamePayoffs, TcgSpec};
use crate::game::NormalFormGame;
use crate::rational::Rational;

/// The 2x2 trust game: P1 chooses Trust/Walk Out, P2 Cooperate/Defect.
///
/// Defect strictly dominates for P2 against Trust, so the unique Nash
/// equilibrium is (WO, D) with payoffs (0, 0).
pub fn trust_game() -> NormalFormGame {
    NormalFormGame::from_integers(
        &["T", "WO"],
        &["C", "D"],
        &[&[20, -100], &[0, 0]],
        &[&[20, 100], &[0, 0]],
    )
    .expect("static game is well-formed")
}

/// The partial-trust game: the trust game plus an intermediate Partial
/// Trust row that caps both the gains and the exposure.
pub fn partial_trust_game() -> NormalFormGame {
    NormalFormGame::from_integers(
        &["FT", "PT", "WO"],
        &["C", "D"],
        &[&[20, -100], &[10, -25], &[0, 0]],
        &[&[20, 100], &[10, 25], &[0, 0]],
    )
    .expect("static game is well-formed")
}

/// A three-level trust hierarchy (full, partial, light trust, walk out).
pub fn three_level_trust_game() -> NormalFormGame {
    NormalFormGame::from_integers(
        &["T1", "T2", "T3", "WO"],
        &["C", "D"],
        &[&[20, -100], &[10, -20], &[5, -1], &[0, 0]],
        &[&[20, 100], &[10, 20], &[3, 6], &[0, 0]],
    )
    .expect("static game is well-formed")
}

/// The two-subgame trust-and-coordination specification whose full normal
/// form is a 5x5 game: coordinating on a joint action leads into a 2x2
/// trust subgame, miscoordination pays (0, 0), and opting out adds 1.
pub fn dtg_spec() -> TcgSpec {
    let sub = |g1: i64, n1: i64| SubgamePayoffs {
        g1: Rational::from(g1),
        g2: Rational::from(20),
        h1: Rational::from(-99),
        a2: Rational::from(40),
        n1: Rational::from(n1),
        h2: Rational::from(-99),
    };
    TcgSpec {
        b1: Rational::zero(),
        b2: Rational::zero(),
        epsilon: Rational::one(),
        subgames: vec![sub(20, 9), sub(20, 10)],
    }
}

/// The partial-trust game extended with a mutual opt-out worth (-200, -200),
/// the base for the password-guessing construction.
pub fn partial_trust_game_with_opt_out() -> NormalFormGame {
    NormalFormGame::from_integers(
        &["FT", "PT", "WO", "OO"],
        &["C", "D", "OO"],
        &[
            &[20, -100, -200],
            &[10, -25, -200],
            &[0, 0, -200],
            &[-200, -200, -200],
        ],
        &[
            &[20, 100, -200],
            &[10, 25, -200],
            &[0, 0, -200],
            &[-200, -200, -200],
        ],
    )
    .expect("static game is well-formed")
}

/// A 2x2 coordination game with diagonal (2,2) and (1,1).
pub fn coordination_2x2() -> NormalFormGame {
    crate::classes::coordination::make_coordination_game(&[
        crate::game::PayoffPair::from_integers(2, 2),
        crate::game::PayoffPair::from_integers(1, 1),
    ])
    .expect("static game is well-formed")
}

#[cfg(test)]
pub(crate) use {partial_trust_game as ptg, trust_game as tg};
