//! Two-player normal-form games, mixed strategies, and best-response
//! structure, all over exact rationals.
//!
//! ```
//! use sim_games::{NormalFormGame, MixedStrategy, Player, Rational};
//!
//! // The trust game: P1 chooses Trust or Walk Out, P2 Cooperate or Defect.
//! let tg = NormalFormGame::from_integers(
//!     &["T", "WO"],
//!     &["C", "D"],
//!     &[&[20, -100], &[0, 0]],
//!     &[&[20, 100], &[0, 0]],
//! ).unwrap();
//!
//! let c = MixedStrategy::pure(Player::Two, 0, 2);
//! assert_eq!(tg.best_responses(&c).unwrap(), vec![0]); // Trust
//! let threat = MixedStrategy::new(Player::Two, vec![
//!     Rational::new(5, 6), Rational::new(1, 6),
//! ]).unwrap();
//! assert_eq!(tg.best_responses(&threat).unwrap(), vec![0, 1]); // indifferent
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// One of the two players. P1 is the row player (and, later, the simulator);
/// P2 is the column player (and the commitment maker).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::One => write!(f, "P1"),
            Player::Two => write!(f, "P2"),
        }
    }
}

/// Structural errors raised when building or combining game objects.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("strategy list for {player} is empty")]
    EmptyStrategySet { player: Player },
    #[error("duplicate strategy label `{label}` for {player}")]
    DuplicateLabel { player: Player, label: String },
    #[error("payoff matrix {matrix} has {got} rows, expected {expected}")]
    RowCountMismatch { matrix: &'static str, got: usize, expected: usize },
    #[error("payoff matrix {matrix} row {row} has {got} entries, expected {expected}")]
    RaggedRow { matrix: &'static str, row: usize, got: usize, expected: usize },
    #[error("strategy belongs to {got}, expected {expected}")]
    WrongOwner { got: Player, expected: Player },
    #[error("mixed strategy has {got} entries, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("mixed strategy entry {index} is negative ({value})")]
    NegativeProbability { index: usize, value: Rational },
    #[error("mixed strategy probabilities sum to {sum}, expected 1")]
    BadProbabilitySum { sum: Rational },
    #[error("strategy index {index} out of range for {player} ({count} strategies)")]
    IndexOutOfRange { player: Player, index: usize, count: usize },
}

/// A pair of expected utilities, one per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PayoffPair {
    pub u1: Rational,
    pub u2: Rational,
}

impl PayoffPair {
    pub fn new(u1: Rational, u2: Rational) -> Self {
        PayoffPair { u1, u2 }
    }

    pub fn from_integers(u1: i64, u2: i64) -> Self {
        PayoffPair::new(Rational::from(u1), Rational::from(u2))
    }

    pub fn get(&self, player: Player) -> &Rational {
        match player {
            Player::One => &self.u1,
            Player::Two => &self.u2,
        }
    }
}

impl fmt::Display for PayoffPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u1, self.u2)
    }
}

/// `true` iff `a` is strictly better than `b` for both players.
pub fn pareto_strictly_improves(a: &PayoffPair, b: &PayoffPair) -> bool {
    a.u1 > b.u1 && a.u2 > b.u2
}

/// An exact probability distribution over one player's pure strategies.
///
/// Entries are non-negative and sum to exactly one. Ordering is
/// lexicographic on the probability vector, which gives every collection of
/// strategies in this crate a deterministic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MixedStrategy {
    owner: Player,
    probs: Vec<Rational>,
}

impl MixedStrategy {
    pub fn new(owner: Player, probs: Vec<Rational>) -> Result<Self, GameError> {
        for (index, p) in probs.iter().enumerate() {
            if p.is_negative() {
                return Err(GameError::NegativeProbability { index, value: p.clone() });
            }
        }
        let sum: Rational = probs.iter().sum();
        if sum != Rational::one() {
            return Err(GameError::BadProbabilitySum { sum });
        }
        Ok(MixedStrategy { owner, probs })
    }

    /// The degenerate distribution on strategy `index` out of `count`.
    pub fn pure(owner: Player, index: usize, count: usize) -> Self {
        assert!(index < count, "pure strategy index out of range");
        let mut probs = vec![Rational::zero(); count];
        probs[index] = Rational::one();
        MixedStrategy { owner, probs }
    }

    pub fn uniform(owner: Player, count: usize) -> Self {
        assert!(count > 0);
        let w = Rational::new(1, count as i64);
        MixedStrategy { owner, probs: vec![w; count] }
    }

    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, index: usize) -> &Rational {
        &self.probs[index]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Indices with strictly positive probability, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.probs.len()).filter(|&i| !self.probs[i].is_zero()).collect()
    }

    /// The pure strategy this distribution is concentrated on, if any.
    pub fn as_pure(&self) -> Option<usize> {
        let support = self.support();
        match support.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }

    /// Convex combination `weight * self + (1 - weight) * other`.
    pub fn blend(&self, other: &MixedStrategy, weight: &Rational) -> Result<Self, GameError> {
        if self.owner != other.owner {
            return Err(GameError::WrongOwner { got: other.owner, expected: self.owner });
        }
        if self.len() != other.len() {
            return Err(GameError::DimensionMismatch { got: other.len(), expected: self.len() });
        }
        let complement = Rational::one() - weight;
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| a * weight + b * &complement)
            .collect();
        MixedStrategy::new(self.owner, probs)
    }
}

impl fmt::Display for MixedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// A finite two-player game in normal form: labelled strategy sets and a
/// pair of exact payoff matrices indexed by (row, column).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormGame {
    s1_labels: Vec<String>,
    s2_labels: Vec<String>,
    u1: Vec<Vec<Rational>>,
    u2: Vec<Vec<Rational>>,
}

impl NormalFormGame {
    pub fn new(
        s1_labels: Vec<String>,
        s2_labels: Vec<String>,
        u1: Vec<Vec<Rational>>,
        u2: Vec<Vec<Rational>>,
    ) -> Result<Self, GameError> {
        for (player, labels) in [(Player::One, &s1_labels), (Player::Two, &s2_labels)] {
            if labels.is_empty() {
                return Err(GameError::EmptyStrategySet { player });
            }
            for (i, label) in labels.iter().enumerate() {
                if labels[..i].contains(label) {
                    return Err(GameError::DuplicateLabel { player, label: label.clone() });
                }
            }
        }
        for (name, matrix) in [("u1", &u1), ("u2", &u2)] {
            if matrix.len() != s1_labels.len() {
                return Err(GameError::RowCountMismatch {
                    matrix: name,
                    got: matrix.len(),
                    expected: s1_labels.len(),
                });
            }
            for (row, entries) in matrix.iter().enumerate() {
                if entries.len() != s2_labels.len() {
                    return Err(GameError::RaggedRow {
                        matrix: name,
                        row,
                        got: entries.len(),
                        expected: s2_labels.len(),
                    });
                }
            }
        }
        Ok(NormalFormGame { s1_labels, s2_labels, u1, u2 })
    }

    /// Convenience constructor for integer payoff tables.
    pub fn from_integers(
        s1_labels: &[&str],
        s2_labels: &[&str],
        u1: &[&[i64]],
        u2: &[&[i64]],
    ) -> Result<Self, GameError> {
        let to_matrix = |m: &[&[i64]]| -> Vec<Vec<Rational>> {
            m.iter().map(|row| row.iter().map(|&v| Rational::from(v)).collect()).collect()
        };
        NormalFormGame::new(
            s1_labels.iter().map(|s| s.to_string()).collect(),
            s2_labels.iter().map(|s| s.to_string()).collect(),
            to_matrix(u1),
            to_matrix(u2),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.s1_labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.s2_labels.len()
    }

    pub fn strategy_count(&self, player: Player) -> usize {
        match player {
            Player::One => self.n_rows(),
            Player::Two => self.n_cols(),
        }
    }

    pub fn s1_labels(&self) -> &[String] {
        &self.s1_labels
    }

    pub fn s2_labels(&self) -> &[String] {
        &self.s2_labels
    }

    pub fn labels(&self, player: Player) -> &[String] {
        match player {
            Player::One => &self.s1_labels,
            Player::Two => &self.s2_labels,
        }
    }

    pub fn u1(&self, row: usize, col: usize) -> &Rational {
        &self.u1[row][col]
    }

    pub fn u2(&self, row: usize, col: usize) -> &Rational {
        &self.u2[row][col]
    }

    pub fn payoff(&self, row: usize, col: usize) -> PayoffPair {
        PayoffPair::new(self.u1[row][col].clone(), self.u2[row][col].clone())
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.s1_labels.iter().position(|l| l == label)
    }

    pub fn col_index(&self, label: &str) -> Option<usize> {
        self.s2_labels.iter().position(|l| l == label)
    }

    fn check_strategy(&self, s: &MixedStrategy, expected: Player) -> Result<(), GameError> {
        if s.owner() != expected {
            return Err(GameError::WrongOwner { got: s.owner(), expected });
        }
        let want = self.strategy_count(expected);
        if s.len() != want {
            return Err(GameError::DimensionMismatch { got: s.len(), expected: want });
        }
        Ok(())
    }

    /// P1's expected utility for playing pure `row` against `s2`.
    pub fn u1_row_vs(&self, row: usize, s2: &MixedStrategy) -> Result<Rational, GameError> {
        self.check_strategy(s2, Player::Two)?;
        Ok(crate::linalg::dot(&self.u1[row], s2.probs()))
    }

    /// P2's expected utility when P1 plays pure `row` against `s2`.
    pub fn u2_row_vs(&self, row: usize, s2: &MixedStrategy) -> Result<Rational, GameError> {
        self.check_strategy(s2, Player::Two)?;
        Ok(crate::linalg::dot(&self.u2[row], s2.probs()))
    }

    /// P1's expected utility for `s1` against pure `col`.
    pub fn u1_col_vs(&self, col: usize, s1: &MixedStrategy) -> Result<Rational, GameError> {
        self.check_strategy(s1, Player::One)?;
        Ok((0..self.n_rows()).map(|r| &self.u1[r][col] * s1.prob(r)).sum())
    }

    /// P2's expected utility for playing pure `col` against `s1`.
    pub fn u2_col_vs(&self, col: usize, s1: &MixedStrategy) -> Result<Rational, GameError> {
        self.check_strategy(s1, Player::One)?;
        Ok((0..self.n_rows()).map(|r| &self.u2[r][col] * s1.prob(r)).sum())
    }

    /// Exact expected utilities for a mixed-strategy profile: the bilinear
    /// form `s1' U_i s2` for both players.
    pub fn expected_utility(
        &self,
        s1: &MixedStrategy,
        s2: &MixedStrategy,
    ) -> Result<PayoffPair, GameError> {
        self.check_strategy(s1, Player::One)?;
        self.check_strategy(s2, Player::Two)?;
        let mut u1 = Rational::zero();
        let mut u2 = Rational::zero();
        for r in 0..self.n_rows() {
            if s1.prob(r).is_zero() {
                continue;
            }
            let row1 = crate::linalg::dot(&self.u1[r], s2.probs());
            let row2 = crate::linalg::dot(&self.u2[r], s2.probs());
            u1 += row1 * s1.prob(r);
            u2 += row2 * s1.prob(r);
        }
        Ok(PayoffPair::new(u1, u2))
    }

    /// All pure best responses of P1 to `s2`, sorted ascending. Never empty.
    pub fn best_responses(&self, s2: &MixedStrategy) -> Result<Vec<usize>, GameError> {
        self.check_strategy(s2, Player::Two)?;
        let values: Vec<Rational> = (0..self.n_rows())
            .map(|r| crate::linalg::dot(&self.u1[r], s2.probs()))
            .collect();
        let best = values.iter().max().expect("non-empty strategy set").clone();
        Ok((0..self.n_rows()).filter(|&r| values[r] == best).collect())
    }

    /// All pure best responses of P2 to `s1`, sorted ascending. Never empty.
    pub fn best_responses_p2(&self, s1: &MixedStrategy) -> Result<Vec<usize>, GameError> {
        self.check_strategy(s1, Player::One)?;
        let values: Vec<Rational> = (0..self.n_cols())
            .map(|c| (0..self.n_rows()).map(|r| &self.u2[r][c] * s1.prob(r)).sum())
            .collect();
        let best = values.iter().max().expect("non-empty strategy set").clone();
        Ok((0..self.n_cols()).filter(|&c| values[c] == best).collect())
    }

    /// Among P1's best responses to `s2`, those maximizing P2's utility
    /// (the opponent-favourable best responses). Subset of
    /// [`best_responses`](Self::best_responses); never empty.
    pub fn favourable_best_responses(&self, s2: &MixedStrategy) -> Result<Vec<usize>, GameError> {
        let br = self.best_responses(s2)?;
        let values: Vec<Rational> = br
            .iter()
            .map(|&r| crate::linalg::dot(&self.u2[r], s2.probs()))
            .collect();
        let best = values.iter().max().expect("best responses non-empty").clone();
        Ok(br
            .into_iter()
            .zip(values)
            .filter(|(_, v)| *v == best)
            .map(|(r, _)| r)
            .collect())
    }

    /// Both players' utilities when P1 best-responds to `s2` favourably:
    /// `(u1(br(s2), s2), u2(fbr(s2), s2))`. P1's utility is constant across
    /// best responses and P2's across favourable ones, so the pair is
    /// well defined.
    pub fn best_response_payoffs(&self, s2: &MixedStrategy) -> Result<PayoffPair, GameError> {
        let fbr = self.favourable_best_responses(s2)?;
        let r = fbr[0];
        Ok(PayoffPair::new(
            crate::linalg::dot(&self.u1[r], s2.probs()),
            crate::linalg::dot(&self.u2[r], s2.probs()),
        ))
    }

    /// Pure maxmin value: `max_own min_opponent` own payoff over pure
    /// strategies only.
    pub fn maxmin_value(&self, player: Player) -> Rational {
        match player {
            Player::One => (0..self.n_rows())
                .map(|r| (0..self.n_cols()).map(|c| self.u1[r][c].clone()).min().unwrap())
                .max()
                .unwrap(),
            Player::Two => (0..self.n_cols())
                .map(|c| (0..self.n_rows()).map(|r| self.u2[r][c].clone()).min().unwrap())
                .max()
                .unwrap(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ptg, tg};
    use crate::rat;

    fn p2(entries: &[(i64, i64)]) -> MixedStrategy {
        MixedStrategy::new(
            Player::Two,
            entries.iter().map(|&(n, d)| Rational::new(n, d)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn expected_utility_pure_profile() {
        let g = tg();
        let t = MixedStrategy::pure(Player::One, 0, 2);
        let c = MixedStrategy::pure(Player::Two, 0, 2);
        assert_eq!(g.expected_utility(&t, &c).unwrap(), PayoffPair::from_integers(20, 20));
        let wo = MixedStrategy::pure(Player::One, 1, 2);
        let d = MixedStrategy::pure(Player::Two, 1, 2);
        assert_eq!(g.expected_utility(&wo, &d).unwrap(), PayoffPair::from_integers(0, 0));
    }

    #[test]
    fn expected_utility_against_mixture() {
        // Trust against one-sixth defection: P1 breaks even, P2 nets 100/3.
        let g = tg();
        let t = MixedStrategy::pure(Player::One, 0, 2);
        let s2 = p2(&[(5, 6), (1, 6)]);
        let u = g.expected_utility(&t, &s2).unwrap();
        assert_eq!(u, PayoffPair::new(rat!(0), rat!(100 / 3)));
    }

    #[test]
    fn expected_utility_rejects_dimension_mismatch() {
        let g = tg();
        let bad = MixedStrategy::pure(Player::Two, 0, 3);
        let t = MixedStrategy::pure(Player::One, 0, 2);
        assert!(matches!(
            g.expected_utility(&t, &bad),
            Err(GameError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn best_responses_in_trust_game() {
        let g = tg();
        let c = MixedStrategy::pure(Player::Two, 0, 2);
        assert_eq!(g.best_responses(&c).unwrap(), vec![0]);
        // Indifference point: defection probability exactly 1/6.
        let tipping = p2(&[(5, 6), (1, 6)]);
        assert_eq!(g.best_responses(&tipping).unwrap(), vec![0, 1]);
        let d = MixedStrategy::pure(Player::Two, 1, 2);
        assert_eq!(g.best_responses(&d).unwrap(), vec![1]);
    }

    #[test]
    fn singleton_strategy_set_is_its_own_best_response() {
        let g = NormalFormGame::from_integers(&["only"], &["l", "r"], &[&[3, -5]], &[&[0, 0]])
            .unwrap();
        let s2 = MixedStrategy::uniform(Player::Two, 2);
        assert_eq!(g.best_responses(&s2).unwrap(), vec![0]);
    }

    #[test]
    fn favourable_best_responses_break_ties_for_p2() {
        let g = tg();
        let tipping = p2(&[(5, 6), (1, 6)]);
        // Both T and WO are best responses, but T pays P2 100/3 > 0.
        assert_eq!(g.favourable_best_responses(&tipping).unwrap(), vec![0]);
        let d = MixedStrategy::pure(Player::Two, 1, 2);
        assert_eq!(g.favourable_best_responses(&d).unwrap(), vec![1]);
    }

    #[test]
    fn favourable_equals_best_when_u2_ties_everywhere() {
        let g = NormalFormGame::from_integers(
            &["a", "b"],
            &["x"],
            &[&[1], &[1]],
            &[&[7], &[7]],
        )
        .unwrap();
        let s2 = MixedStrategy::pure(Player::Two, 0, 1);
        assert_eq!(
            g.favourable_best_responses(&s2).unwrap(),
            g.best_responses(&s2).unwrap()
        );
    }

    #[test]
    fn maxmin_values() {
        assert_eq!(tg().maxmin_value(Player::One), rat!(0));
        assert_eq!(ptg().maxmin_value(Player::One), rat!(0));
        let single = NormalFormGame::from_integers(&["a"], &["b"], &[&[5]], &[&[7]]).unwrap();
        assert_eq!(single.maxmin_value(Player::Two), rat!(7));
    }

    #[test]
    fn pareto_comparison_is_componentwise_strict() {
        let a = PayoffPair::from_integers(20, 20);
        let b = PayoffPair::from_integers(0, 0);
        let c = PayoffPair::from_integers(20, 0);
        let d = PayoffPair::from_integers(18, 20);
        assert!(pareto_strictly_improves(&a, &b));
        assert!(!pareto_strictly_improves(&c, &b));
        assert!(pareto_strictly_improves(&d, &b));
    }

    #[test]
    fn mixed_strategy_validation() {
        assert!(MixedStrategy::new(Player::Two, vec![rat!(1 / 2), rat!(1 / 3)]).is_err());
        assert!(MixedStrategy::new(Player::Two, vec![rat!(3 / 2), rat!(-1 / 2)]).is_err());
        assert!(MixedStrategy::new(Player::Two, vec![rat!(1 / 2), rat!(1 / 2)]).is_ok());
    }

    #[test]
    fn game_validation_catches_structural_errors() {
        let r = NormalFormGame::from_integers(&["a", "a"], &["x"], &[&[1], &[1]], &[&[1], &[1]]);
        assert!(matches!(r, Err(GameError::DuplicateLabel { .. })));
        let r = NormalFormGame::from_integers(&["a"], &["x", "y"], &[&[1]], &[&[1, 2]]);
        assert!(matches!(r, Err(GameError::RaggedRow { .. })));
    }
}
