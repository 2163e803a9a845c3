//! Password guessing: a post-game stage where P2 must store any profit in a
//! password-protected account and P1 may try to steal it. Guessing right
//! transfers the stake plus one; guessing wrong costs double. Against a
//! uniformly random password guessing never pays, so the stage is harmless —
//! unless P1 can predict the realized password, which is exactly what
//! pure-strategy (but not mixed-strategy) simulation provides.

use crate::game::{GameError, MixedStrategy, NormalFormGame, PayoffPair};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PasswordError {
    #[error("need at least one password, got {got}")]
    NoPasswords { got: usize },
    #[error("stakes must be strictly positive, got {0}")]
    NonPositiveStakes(Rational),
    #[error("base game has no opt-out structure (a constant row and column with strictly minimal payoffs)")]
    MissingOptOut,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// The stand-alone password game with `n` passwords and stakes `x`: P2 picks
/// a password, P1 either skips (0, 0) or guesses; a correct guess pays
/// `(x + 1, -x - 1)`, a wrong one `(-2(x + 1), 0)`.
pub fn make_pg(n_passwords: usize, stakes: &Rational) -> Result<NormalFormGame, PasswordError> {
    if n_passwords == 0 {
        return Err(PasswordError::NoPasswords { got: 0 });
    }
    if !stakes.is_positive() {
        return Err(PasswordError::NonPositiveStakes(stakes.clone()));
    }
    let prize = stakes + Rational::one();
    let mut s1_labels = vec!["skip".to_string()];
    s1_labels.extend((1..=n_passwords).map(|g| format!("g{g}")));
    let s2_labels: Vec<String> = (1..=n_passwords).map(|p| format!("p{p}")).collect();
    let mut u1 = vec![vec![Rational::zero(); n_passwords]];
    let mut u2 = vec![vec![Rational::zero(); n_passwords]];
    for guess in 0..n_passwords {
        let mut row1 = Vec::with_capacity(n_passwords);
        let mut row2 = Vec::with_capacity(n_passwords);
        for password in 0..n_passwords {
            if guess == password {
                row1.push(prize.clone());
                row2.push(-prize.clone());
            } else {
                row1.push(-(&prize * Rational::from(2)));
                row2.push(Rational::zero());
            }
        }
        u1.push(row1);
        u2.push(row2);
    }
    Ok(NormalFormGame::new(s1_labels, s2_labels, u1, u2)?)
}

/// The opt-out structure of a game: a row and a column that always pay the
/// same baseline, strictly below every other payoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptOutStructure {
    pub row: usize,
    pub col: usize,
    pub baseline: PayoffPair,
}

/// Locates the opt-out row/column pair, if the game has one.
pub fn find_opt_out(game: &NormalFormGame) -> Option<OptOutStructure> {
    let constant_row = |r: usize| -> Option<PayoffPair> {
        let first = game.payoff(r, 0);
        (1..game.n_cols()).all(|c| game.payoff(r, c) == first).then_some(first)
    };
    let constant_col = |c: usize| -> Option<PayoffPair> {
        let first = game.payoff(0, c);
        (1..game.n_rows()).all(|r| game.payoff(r, c) == first).then_some(first)
    };
    for row in 0..game.n_rows() {
        let Some(row_pay) = constant_row(row) else { continue };
        for col in 0..game.n_cols() {
            let Some(col_pay) = constant_col(col) else { continue };
            if row_pay != col_pay {
                continue;
            }
            let strictly_minimal = (0..game.n_rows()).all(|r| {
                (0..game.n_cols()).all(|c| {
                    r == row
                        || c == col
                        || (game.u1(r, c) > &row_pay.u1 && game.u2(r, c) > &row_pay.u2)
                })
            });
            if strictly_minimal {
                return Some(OptOutStructure { row, col, baseline: row_pay });
            }
        }
    }
    None
}

/// Appends the password stage to a game with opt-out: whenever a cell pays
/// P2 strictly more than the baseline, the players additionally play the
/// password game over that profit. P1 strategies become (base row, guess
/// policy in {skip, 1..n}); P2 strategies (base column, password in 1..n).
/// Strategies with identical payoff vectors (the opt-out copies) are
/// collapsed, keeping the first.
pub fn apply_password_modification(
    base: &NormalFormGame,
    n_passwords: usize,
) -> Result<NormalFormGame, PasswordError> {
    if n_passwords == 0 {
        return Err(PasswordError::NoPasswords { got: 0 });
    }
    let opt_out = find_opt_out(base).ok_or(PasswordError::MissingOptOut)?;
    let baseline2 = &opt_out.baseline.u2;

    let policies = n_passwords + 1; // skip plus one guess per password
    let rows = base.n_rows() * policies;
    let cols = base.n_cols() * n_passwords;
    let mut s1_labels = Vec::with_capacity(rows);
    let mut s2_labels = Vec::with_capacity(cols);
    let mut u1 = vec![vec![Rational::zero(); cols]; rows];
    let mut u2 = vec![vec![Rational::zero(); cols]; rows];

    for br in 0..base.n_rows() {
        for policy in 0..policies {
            let label = if policy == 0 {
                format!("{}|skip", base.s1_labels()[br])
            } else {
                format!("{}|g{policy}", base.s1_labels()[br])
            };
            s1_labels.push(label);
        }
    }
    for bc in 0..base.n_cols() {
        for password in 1..=n_passwords {
            s2_labels.push(format!("{}|p{password}", base.s2_labels()[bc]));
        }
    }

    for br in 0..base.n_rows() {
        for policy in 0..policies {
            let row = br * policies + policy;
            for bc in 0..base.n_cols() {
                for password in 1..=n_passwords {
                    let col = bc * n_passwords + (password - 1);
                    let mut cell = base.payoff(br, bc);
                    let profit = &cell.u2 - baseline2;
                    if profit.is_positive() && policy != 0 {
                        let prize = profit + Rational::one();
                        if policy == password {
                            cell.u1 += &prize;
                            cell.u2 -= &prize;
                        } else {
                            cell.u1 -= &prize * Rational::from(2);
                        }
                    }
                    u1[row][col] = cell.u1;
                    u2[row][col] = cell.u2;
                }
            }
        }
    }

    // Collapse strategies with identical payoff vectors.
    let mut keep_rows: Vec<usize> = Vec::new();
    for r in 0..rows {
        if !keep_rows.iter().any(|&k| u1[k] == u1[r] && u2[k] == u2[r]) {
            keep_rows.push(r);
        }
    }
    let mut keep_cols: Vec<usize> = Vec::new();
    for c in 0..cols {
        let col_pair = |m: &[Vec<Rational>], c: usize| -> Vec<Rational> {
            keep_rows.iter().map(|&r| m[r][c].clone()).collect()
        };
        if !keep_cols
            .iter()
            .any(|&k| col_pair(&u1, k) == col_pair(&u1, c) && col_pair(&u2, k) == col_pair(&u2, c))
        {
            keep_cols.push(c);
        }
    }

    let project = |m: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
        keep_rows
            .iter()
            .map(|&r| keep_cols.iter().map(|&c| m[r][c].clone()).collect())
            .collect()
    };
    Ok(NormalFormGame::new(
        keep_rows.iter().map(|&r| s1_labels[r].clone()).collect(),
        keep_cols.iter().map(|&c| s2_labels[c].clone()).collect(),
        project(&u1),
        project(&u2),
    )?)
}

/// P2's aggregate opt-out weight in the modified game: the total probability
/// on columns derived from the base opt-out column.
pub fn opt_out_weight(modified: &NormalFormGame, s2: &MixedStrategy, opt_out_label: &str) -> Rational {
    let prefix = format!("{opt_out_label}|");
    modified
        .s2_labels()
        .iter()
        .zip(s2.probs())
        .filter(|(label, _)| label.starts_with(&prefix))
        .map(|(_, p)| p.clone())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::partial_trust_game_with_opt_out;
    use crate::game::Player;
    use crate::rat;

    #[test]
    fn password_game_payoffs() {
        let g = make_pg(3, &rat!(20)).unwrap();
        assert_eq!(g.payoff(1, 0), PayoffPair::from_integers(21, -21)); // g1 vs p1
        assert_eq!(g.payoff(1, 1), PayoffPair::from_integers(-42, 0)); // g1 vs p2
        assert_eq!(g.payoff(0, 2), PayoffPair::from_integers(0, 0)); // skip
    }

    #[test]
    fn uniform_password_makes_skipping_the_unique_best_response() {
        let stakes = rat!(20);
        let g = make_pg(3, &stakes).unwrap();
        let uniform = MixedStrategy::uniform(Player::Two, 3);
        assert_eq!(g.best_responses(&uniform).unwrap(), vec![0]);
        // Expected guess value: (x+1)/3 - 2(x+1) * 2/3 = -(x+1).
        assert_eq!(g.u1_row_vs(1, &uniform).unwrap(), rat!(-21));
    }

    #[test]
    fn single_password_makes_guessing_a_sure_thing() {
        let g = make_pg(1, &rat!(5)).unwrap();
        assert_eq!(g.payoff(1, 0), PayoffPair::from_integers(6, -6));
    }

    #[test]
    fn opt_out_detection() {
        let g = partial_trust_game_with_opt_out();
        let oo = find_opt_out(&g).expect("opt-out present");
        assert_eq!(oo.row, 3);
        assert_eq!(oo.col, 2);
        assert_eq!(oo.baseline, PayoffPair::from_integers(-200, -200));
        assert!(find_opt_out(&crate::catalog::tg()).is_none());
    }

    #[test]
    fn modification_collapses_opt_out_copies() {
        let g = partial_trust_game_with_opt_out();
        let modified = apply_password_modification(&g, 3).unwrap();
        // 3 trust rows x 4 policies + 1 collapsed opt-out row.
        assert_eq!(modified.n_rows(), 13);
        // 2 base columns x 3 passwords + 1 collapsed opt-out column.
        assert_eq!(modified.n_cols(), 7);
    }

    #[test]
    fn cells_without_p2_profit_are_unchanged() {
        let g = partial_trust_game_with_opt_out();
        let modified = apply_password_modification(&g, 3).unwrap();
        // Opt-out cells stay at the baseline whatever the guess policy.
        let oo_col = modified.col_index("OO|p1").unwrap();
        for r in 0..modified.n_rows() {
            assert_eq!(modified.payoff(r, oo_col), PayoffPair::from_integers(-200, -200));
        }
    }

    #[test]
    fn profitable_cells_gain_the_guessing_stage() {
        let g = partial_trust_game_with_opt_out();
        let modified = apply_password_modification(&g, 3).unwrap();
        let row = modified.row_index("FT|g1").unwrap();
        let hit = modified.col_index("C|p1").unwrap();
        let miss = modified.col_index("C|p2").unwrap();
        // (FT, C) pays P2 a profit of 220 over the -200 baseline.
        assert_eq!(modified.payoff(row, hit), PayoffPair::from_integers(20 + 221, 20 - 221));
        assert_eq!(modified.payoff(row, miss), PayoffPair::from_integers(20 - 442, 20));
    }

    #[test]
    fn base_equilibria_lift_with_uniform_passwords_and_skipping() {
        let g = partial_trust_game_with_opt_out();
        let modified = apply_password_modification(&g, 3).unwrap();
        // The base equilibrium (WO, D) lifted: skip policy, uniform passwords.
        let wo = modified.row_index("WO|skip").unwrap();
        let s1 = MixedStrategy::pure(Player::One, wo, modified.n_rows());
        let mut probs = vec![Rational::zero(); modified.n_cols()];
        for p in 1..=3 {
            let col = modified.col_index(&format!("D|p{p}")).unwrap();
            probs[col] = rat!(1 / 3);
        }
        let s2 = MixedStrategy::new(Player::Two, probs).unwrap();
        assert!(crate::equilibrium::verify_equilibrium(&modified, &s1, &s2).unwrap());
        assert_eq!(
            modified.expected_utility(&s1, &s2).unwrap(),
            PayoffPair::from_integers(0, 0)
        );
    }
}
