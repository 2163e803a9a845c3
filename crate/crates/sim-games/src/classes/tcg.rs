//! Trust-and-coordination games: a coordination stage whose matched
//! outcomes lead into 2x2 trust subgames, with bad miscoordination payoffs
//! and a small opt-out bonus. The only equilibrium of the base game is
//! mutual opt-out; with mixed-strategy simulation the players can do better
//! by splitting their attention between the two players' favourite subgames.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{check_equilibrium, EquilibriumCheck, EquilibriumProfile};
use crate::game::{MixedStrategy, NormalFormGame, PayoffPair, Player};
use crate::rational::Rational;
use crate::simulation::{build_msim_reduced, ReducedSimGame, SimKind, SimulationConfig};

/// The payoffs of one 2x2 trust subgame. Rows are Trust / Walk Out, columns
/// Cooperate / Defect: `(T,C) = (g1, g2)`, `(T,D) = (h1, a2)`,
/// `(WO,.) = (n1, h2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgamePayoffs {
    pub g1: Rational,
    pub g2: Rational,
    pub h1: Rational,
    pub a2: Rational,
    pub n1: Rational,
    pub h2: Rational,
}

/// A trust-and-coordination game: miscoordination payoffs, opt-out bonus,
/// and one trust subgame per joint action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TcgSpec {
    pub b1: Rational,
    pub b2: Rational,
    pub epsilon: Rational,
    pub subgames: Vec<SubgamePayoffs>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TcgViolation {
    #[error("need at least two subgames, got {got}")]
    TooFewSubgames { got: usize },
    #[error("opt-out bonus must be strictly positive, got {0}")]
    NonPositiveEpsilon(Rational),
    #[error("subgame {index} breaks the ordering {chain} for player {player}")]
    OrderingViolation { index: usize, player: Player, chain: &'static str },
}

impl TcgSpec {
    pub fn n(&self) -> usize {
        self.subgames.len()
    }

    /// Checks the defining payoff chains
    /// `h1 < b1 < b1 + eps < n1 < g1` and `h2 < b2 < b2 + eps < g2 < a2`.
    pub fn validate(&self) -> Result<(), Vec<TcgViolation>> {
        let mut violations = Vec::new();
        if self.subgames.len() < 2 {
            violations.push(TcgViolation::TooFewSubgames { got: self.subgames.len() });
        }
        if !self.epsilon.is_positive() {
            violations.push(TcgViolation::NonPositiveEpsilon(self.epsilon.clone()));
        }
        let opt1 = &self.b1 + &self.epsilon;
        let opt2 = &self.b2 + &self.epsilon;
        for (index, sub) in self.subgames.iter().enumerate() {
            if !(sub.h1 < self.b1 && opt1 < sub.n1 && sub.n1 < sub.g1) {
                violations.push(TcgViolation::OrderingViolation {
                    index,
                    player: Player::One,
                    chain: "h1 < b1 < b1+eps < n1 < g1",
                });
            }
            if !(sub.h2 < self.b2 && opt2 < sub.g2 && sub.g2 < sub.a2) {
                violations.push(TcgViolation::OrderingViolation {
                    index,
                    player: Player::Two,
                    chain: "h2 < b2 < b2+eps < g2 < a2",
                });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// The commitment-stage value of subgame `k`: P2 commits to the highest
    /// defection rate that keeps Trust a best response, leaving P1 exactly
    /// their walk-out value.
    pub fn subgame_commitment(&self, k: usize) -> (Rational, PayoffPair) {
        let sub = &self.subgames[k];
        let delta = (&sub.g1 - &sub.n1) / (&sub.g1 - &sub.h1);
        let v2 = &delta * &sub.a2 + (Rational::one() - &delta) * &sub.g2;
        (delta, PayoffPair::new(sub.n1.clone(), v2))
    }

    /// Row index of `(a_k, T)` / `(a_k, WO)` in the built normal form.
    pub fn trust_row(&self, k: usize) -> usize {
        2 * k
    }

    pub fn walk_out_row(&self, k: usize) -> usize {
        2 * k + 1
    }

    pub fn cooperate_col(&self, k: usize) -> usize {
        2 * k
    }

    pub fn defect_col(&self, k: usize) -> usize {
        2 * k + 1
    }

    pub fn opt_out_row(&self) -> usize {
        2 * self.n()
    }

    pub fn opt_out_col(&self) -> usize {
        2 * self.n()
    }
}

/// Builds the full normal form: P1 rows `(a_k, T), (a_k, WO)` per subgame
/// plus `OO`; P2 columns `(a_k, C), (a_k, D)` plus `OO`. Matched joint
/// actions score the subgame, mismatches score `(b1, b2)`, and opting out
/// adds `epsilon` for each player who opted out.
pub fn make_tcg(spec: &TcgSpec) -> Result<NormalFormGame, Vec<TcgViolation>> {
    spec.validate()?;
    let n = spec.n();
    let mut s1_labels = Vec::with_capacity(2 * n + 1);
    let mut s2_labels = Vec::with_capacity(2 * n + 1);
    for k in 1..=n {
        s1_labels.push(format!("(a{k},T)"));
        s1_labels.push(format!("(a{k},WO)"));
        s2_labels.push(format!("(a{k},C)"));
        s2_labels.push(format!("(a{k},D)"));
    }
    s1_labels.push("OO".to_string());
    s2_labels.push("OO".to_string());

    let rows = 2 * n + 1;
    let cols = 2 * n + 1;
    let mut u1 = vec![vec![spec.b1.clone(); cols]; rows];
    let mut u2 = vec![vec![spec.b2.clone(); cols]; rows];
    for k in 0..n {
        let sub = &spec.subgames[k];
        let (tr, wr) = (spec.trust_row(k), spec.walk_out_row(k));
        let (cc, dc) = (spec.cooperate_col(k), spec.defect_col(k));
        u1[tr][cc] = sub.g1.clone();
        u2[tr][cc] = sub.g2.clone();
        u1[tr][dc] = sub.h1.clone();
        u2[tr][dc] = sub.a2.clone();
        for col in [cc, dc] {
            u1[wr][col] = sub.n1.clone();
            u2[wr][col] = sub.h2.clone();
        }
    }
    let oo_row = spec.opt_out_row();
    let oo_col = spec.opt_out_col();
    for col in 0..cols {
        u1[oo_row][col] = &spec.b1 + &spec.epsilon;
        u2[oo_row][col] = spec.b2.clone();
    }
    for row in u1.iter_mut().take(rows) {
        row[oo_col] = spec.b1.clone();
    }
    for row in u2.iter_mut().take(rows) {
        row[oo_col] = &spec.b2 + &spec.epsilon;
    }
    u1[oo_row][oo_col] = &spec.b1 + &spec.epsilon;
    u2[oo_row][oo_col] = &spec.b2 + &spec.epsilon;

    Ok(NormalFormGame::new(s1_labels, s2_labels, u1, u2).expect("consistent construction"))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TcgRefusal {
    #[error("invalid trust-and-coordination spec: {0:?}")]
    Invalid(Vec<TcgViolation>),
    #[error("simulation cost must be strictly positive, got {0}")]
    NonPositiveCost(Rational),
    #[error("the players' favourite subgames coincide; the construction needs them disjoint")]
    OverlappingOptima,
    #[error("P2's walk-out payoff in subgame {subgame} is not low enough: needs < {bound}")]
    DeviationTemptation { subgame: usize, bound: Rational },
    #[error("simulation cost too high: the construction requires cost < {bound}")]
    CostTooHigh { bound: Rational },
}

/// A candidate profile with its exact no-deviation check.
#[derive(Debug, Clone)]
pub struct CheckedProfile {
    pub p_sim: Rational,
    pub profile: EquilibriumProfile,
    pub payoffs: PayoffPair,
    pub verification: EquilibriumCheck,
}

/// The closed-form simulation equilibrium of a trust-and-coordination game.
///
/// P2 mostly plays the commitment of P1's favourite subgame `k1` and
/// deviates to P2's favourite `k2` with probability `p_d`; P1 mixes the
/// simulate action with trusting in `k1`. Two weights for the simulate
/// action are reported: `ratio_form` normalizes the two commitment values as
/// odds, `indifference_form` solves P2's exact indifference condition. The
/// two disagree in general and only the latter is guaranteed to pass the
/// equilibrium check; both are returned with their verification results.
#[derive(Debug, Clone)]
pub struct TcgSimEquilibrium {
    pub k1: usize,
    pub k2: usize,
    /// Defection weight of the commitment in subgame `k1` / `k2`.
    pub defection_k1: Rational,
    pub defection_k2: Rational,
    /// The two commitments as base-game column mixtures.
    pub commitment_k1: MixedStrategy,
    pub commitment_k2: MixedStrategy,
    /// Weight on P2's deviation atom (the `k2` commitment).
    pub p_d: Rational,
    /// Upper bound that P2's walk-out payoff in `k1` must stay below for
    /// outright defection there to be unprofitable (evaluated at the
    /// ratio-form weight).
    pub deterrence_bound: Rational,
    pub ratio_form: CheckedProfile,
    pub indifference_form: CheckedProfile,
}

impl TcgSimEquilibrium {
    /// The simulate-action weight of the ratio form, the analyzer's primary
    /// report.
    pub fn p_sim(&self) -> &Rational {
        &self.ratio_form.p_sim
    }
}

fn build_profile(
    reduced: &ReducedSimGame,
    trust_row: usize,
    p_sim: &Rational,
    p_d: &Rational,
    commitment_cols: (usize, usize),
) -> CheckedProfile {
    let meta = &reduced.meta;
    let mut s1_probs = vec![Rational::zero(); meta.n_rows()];
    s1_probs[trust_row] = Rational::one() - p_sim;
    s1_probs[reduced.simulate_row()] = p_sim.clone();
    let s1 = MixedStrategy::new(Player::One, s1_probs).expect("valid distribution");
    let mut s2_probs = vec![Rational::zero(); meta.n_cols()];
    s2_probs[commitment_cols.0] = Rational::one() - p_d;
    s2_probs[commitment_cols.1] = p_d.clone();
    let s2 = MixedStrategy::new(Player::Two, s2_probs).expect("valid distribution");
    let payoffs = meta.expected_utility(&s1, &s2).expect("profile matches meta-game");
    let verification = check_equilibrium(meta, &s1, &s2).expect("profile matches meta-game");
    CheckedProfile {
        p_sim: p_sim.clone(),
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
    }
}

pub fn tcg_simulation_equilibrium(
    spec: &TcgSpec,
    c_sim: &Rational,
) -> Result<TcgSimEquilibrium, TcgRefusal> {
    spec.validate().map_err(TcgRefusal::Invalid)?;
    if !c_sim.is_positive() {
        return Err(TcgRefusal::NonPositiveCost(c_sim.clone()));
    }
    let n = spec.n();
    let commitments: Vec<(Rational, PayoffPair)> =
        (0..n).map(|k| spec.subgame_commitment(k)).collect();

    let best1 = commitments.iter().map(|(_, v)| v.u1.clone()).max().expect("n >= 2");
    let best2 = commitments.iter().map(|(_, v)| v.u2.clone()).max().expect("n >= 2");
    let argmax1: Vec<usize> = (0..n).filter(|&k| commitments[k].1.u1 == best1).collect();
    let argmax2: Vec<usize> = (0..n).filter(|&k| commitments[k].1.u2 == best2).collect();
    if argmax1.iter().any(|k| argmax2.contains(k)) {
        return Err(TcgRefusal::OverlappingOptima);
    }
    let k1 = argmax1[0];
    let k2 = argmax2[0];

    let cost_bound = (&commitments[k2].1.u1 - &spec.b1) / Rational::from(2);
    if *c_sim >= cost_bound {
        return Err(TcgRefusal::CostTooHigh { bound: cost_bound });
    }
    let p_d = c_sim / (&commitments[k2].1.u1 - &spec.b1);

    let gap1 = &commitments[k1].1.u2 - &spec.b2;
    let gap2 = &commitments[k2].1.u2 - &spec.b2;
    let odds = &gap1 / &gap2;
    let ratio_p_sim = &odds / (Rational::one() + &odds);
    let indifference_p_sim = odds;

    let deterrence_bound = (&commitments[k1].1.u2
        - (Rational::one() - &ratio_p_sim) * &spec.subgames[k1].a2)
        / &ratio_p_sim;
    if spec.subgames[k1].h2 >= deterrence_bound {
        return Err(TcgRefusal::DeviationTemptation { subgame: k1, bound: deterrence_bound });
    }

    let game = make_tcg(spec).expect("spec validated above");
    let config = SimulationConfig::new(c_sim.clone(), SimKind::Mixed).expect("positive cost");
    let reduced = build_msim_reduced(&game, &config).expect("valid base game");

    let commitment_atom = |k: usize| -> MixedStrategy {
        let mut probs = vec![Rational::zero(); game.n_cols()];
        probs[spec.cooperate_col(k)] = Rational::one() - &commitments[k].0;
        probs[spec.defect_col(k)] = commitments[k].0.clone();
        MixedStrategy::new(Player::Two, probs).expect("valid distribution")
    };
    let commitment_k1 = commitment_atom(k1);
    let commitment_k2 = commitment_atom(k2);
    let col_k1 = reduced.column_of(&commitment_k1).expect("commitment is a region vertex");
    let col_k2 = reduced.column_of(&commitment_k2).expect("commitment is a region vertex");

    let ratio_form =
        build_profile(&reduced, spec.trust_row(k1), &ratio_p_sim, &p_d, (col_k1, col_k2));
    let indifference_form =
        build_profile(&reduced, spec.trust_row(k1), &indifference_p_sim, &p_d, (col_k1, col_k2));

    Ok(TcgSimEquilibrium {
        k1,
        k2,
        defection_k1: commitments[k1].0.clone(),
        defection_k2: commitments[k2].0.clone(),
        commitment_k1,
        commitment_k2,
        p_d,
        deterrence_bound,
        ratio_form,
        indifference_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::dtg_spec;
    use crate::equilibrium::enumerate_nash;
    use crate::rat;

    #[test]
    fn dtg_spec_builds_the_five_by_five_game() {
        let game = make_tcg(&dtg_spec()).unwrap();
        assert_eq!(game.n_rows(), 5);
        assert_eq!(game.n_cols(), 5);
        // Matched subgame cells.
        assert_eq!(game.payoff(0, 0), PayoffPair::from_integers(20, 20));
        assert_eq!(game.payoff(0, 1), PayoffPair::from_integers(-99, 40));
        assert_eq!(game.payoff(1, 0), PayoffPair::from_integers(9, -99));
        assert_eq!(game.payoff(2, 2), PayoffPair::from_integers(20, 20));
        assert_eq!(game.payoff(3, 3), PayoffPair::from_integers(10, -99));
        // Miscoordination and opt-out cells.
        assert_eq!(game.payoff(0, 2), PayoffPair::from_integers(0, 0));
        assert_eq!(game.payoff(0, 4), PayoffPair::from_integers(0, 1));
        assert_eq!(game.payoff(4, 0), PayoffPair::from_integers(1, 0));
        assert_eq!(game.payoff(4, 4), PayoffPair::from_integers(1, 1));
    }

    #[test]
    fn dtg_base_game_has_only_the_mutual_opt_out_equilibrium() {
        let game = make_tcg(&dtg_spec()).unwrap();
        let equilibria = enumerate_nash(&game);
        assert_eq!(equilibria.len(), 1);
        assert_eq!(equilibria[0].s1.as_pure(), Some(4));
        assert_eq!(equilibria[0].s2.as_pure(), Some(4));
        assert_eq!(equilibria[0].payoffs, PayoffPair::from_integers(1, 1));
    }

    #[test]
    fn ordering_violations_are_listed() {
        let mut spec = dtg_spec();
        spec.epsilon = rat!(20); // opt-out bonus above the walk-out values
        let violations = make_tcg(&spec).unwrap_err();
        assert!(violations.iter().any(|v| matches!(v, TcgViolation::OrderingViolation { .. })));
    }

    #[test]
    fn subgame_commitments_match_hand_computation() {
        let spec = dtg_spec();
        let (delta0, value0) = spec.subgame_commitment(0);
        assert_eq!(delta0, rat!(11 / 119));
        assert_eq!(value0, PayoffPair::new(rat!(9), rat!(2600 / 119)));
        let (delta1, value1) = spec.subgame_commitment(1);
        assert_eq!(delta1, rat!(10 / 119));
        assert_eq!(value1, PayoffPair::new(rat!(10), rat!(2580 / 119)));
    }

    #[test]
    fn dtg_closed_forms_at_cost_one_half() {
        let eq = tcg_simulation_equilibrium(&dtg_spec(), &rat!(1 / 2)).unwrap();
        assert_eq!(eq.k1, 1);
        assert_eq!(eq.k2, 0);
        assert_eq!(eq.defection_k1, rat!(10 / 119));
        assert_eq!(eq.defection_k2, rat!(11 / 119));
        assert_eq!(eq.p_d, rat!(1 / 18));
        assert_eq!(*eq.p_sim(), rat!(129 / 259));
        assert_eq!(eq.indifference_form.p_sim, rat!(129 / 130));
        assert_eq!(eq.deterrence_bound, rat!(7060 / 2193));
        assert!(eq.deterrence_bound > rat!(1));
    }

    #[test]
    fn only_the_indifference_form_passes_the_exact_check() {
        let eq = tcg_simulation_equilibrium(&dtg_spec(), &rat!(1 / 2)).unwrap();
        assert!(eq.indifference_form.verification.is_exact());
        assert!(!eq.ratio_form.verification.is_exact());
        // The verified equilibrium strictly improves on the base game's
        // mutual opt-out payoff of (1, 1).
        let payoffs = &eq.indifference_form.payoffs;
        assert!(payoffs.u1 > rat!(1));
        assert!(payoffs.u2 > rat!(1));
        assert_eq!(payoffs.u1, rat!(85 / 9));
        assert_eq!(payoffs.u2, rat!(2580 / 119));
    }

    #[test]
    fn refusals_for_overlap_and_cost() {
        let mut spec = dtg_spec();
        spec.subgames[1] = spec.subgames[0].clone();
        assert!(matches!(
            tcg_simulation_equilibrium(&spec, &rat!(1 / 2)),
            Err(TcgRefusal::OverlappingOptima)
        ));
        assert!(matches!(
            tcg_simulation_equilibrium(&dtg_spec(), &rat!(9 / 2)),
            Err(TcgRefusal::CostTooHigh { .. })
        ));
    }
}
