//! Generalised partial-trust games: validation, the trust hierarchy, and the
//! closed-form simulation equilibrium.
//!
//! A partial-trust game has two columns (Cooperate and Defect), a Walk Out
//! row worth (0, 0), and a graded ladder of trust rows where more trust means
//! more to gain under cooperation and more to lose under defection. As P2's
//! defection probability sweeps from 0 to 1, P1's best response walks down
//! the ladder; the breakpoints of that walk drive everything else here.

use serde::Serialize;

use crate::equilibrium::{check_equilibrium, EquilibriumCheck, EquilibriumProfile};
use crate::game::{MixedStrategy, NormalFormGame, PayoffPair, Player};
use crate::geometry::decompose_simplex;
use crate::rational::Rational;
use crate::simulation::{build_msim_reduced, SimKind, SimulationConfig};

/// A violated condition of the partial-trust definition, with the offending
/// strategies.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PtgViolation {
    #[error("P2 must have exactly two strategies, found {got}")]
    NotTwoColumns { got: usize },
    #[error("no Walk Out row: some row must pay (0, 0) against both columns")]
    MissingWalkOut,
    #[error("no trust row besides Walk Out")]
    NoTrustRow,
    #[error("row `{row}` violates the trust payoff chain (needs u1 C > 0 > u1 D and u2 D > u2 C > 0)")]
    TrustChain { row: String },
    #[error("rows `{a}` and `{b}` share the same cooperation payoff for P1")]
    DuplicateCooperationPayoff { a: String, b: String },
    #[error("rows `{more}` (more trusting) and `{less}` break the monotone coupling on {component}")]
    MonotoneCoupling { more: String, less: String, component: &'static str },
    #[error("row `{row}` matches the P1 payoffs of a mixture of `{a}` and `{b}` without matching P2's")]
    TieBreaking { row: String, a: String, b: String },
}

/// One rung of the trust hierarchy: the row is a best response exactly when
/// P2's defection probability lies in `[delta_low, delta_high]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyEntry {
    pub row: usize,
    pub delta_low: Rational,
    pub delta_high: Rational,
}

/// The full analysis of a valid partial-trust game.
#[derive(Debug, Clone)]
pub struct PtgAnalysis {
    pub game: NormalFormGame,
    pub cooperate_col: usize,
    pub defect_col: usize,
    /// Best-response intervals in increasing defection order, from the
    /// full-trust row down to Walk Out. Consecutive entries share their
    /// endpoint and the intervals partition [0, 1].
    pub hierarchy: Vec<HierarchyEntry>,
    pub ft_row: usize,
    pub wo_row: usize,
    /// Rows that are never the unique best response on an open interval;
    /// they are reported rather than dropped.
    pub redundant: Vec<usize>,
    /// For each hierarchy row except Walk Out, the P2 mixture with maximal
    /// defection that still keeps the row a best response.
    pub incentivise: Vec<(usize, MixedStrategy)>,
    /// Whether the game has a middle rung: some trust row with a strictly
    /// better gain-to-loss ratio than full trust.
    pub nontrivial: bool,
    /// Cost ceiling of the closed-form construction, from the hierarchy's
    /// gain/loss ratios. `None` for trivial games.
    pub c0: Option<Rational>,
    /// Tighter ceiling up to which the closed-form profile passes the exact
    /// equilibrium check; between this and `c0` the analyzer still reports
    /// the closed forms but the verification field flags the failure.
    pub verified_cost_bound: Option<Rational>,
    /// Per middle rung: does holding the full-trust commitment beat the
    /// rung's own commitment for P2? All must hold for the closed form to be
    /// an equilibrium.
    pub sufficiency: Vec<(usize, bool)>,
    pub sufficiency_ok: bool,
    /// Informational: a cooperation payoff for P2 at full trust at least
    /// this large is sufficient (though not necessary) for `sufficiency_ok`.
    pub sufficient_gft2_bound: Option<Rational>,
}

fn label(game: &NormalFormGame, row: usize) -> String {
    game.s1_labels()[row].clone()
}

/// Checks all five defining conditions of a generalised partial-trust game
/// exactly; on success computes the hierarchy and the derived quantities.
pub fn validate_gptg(game: &NormalFormGame) -> Result<PtgAnalysis, Vec<PtgViolation>> {
    if game.n_cols() != 2 {
        return Err(vec![PtgViolation::NotTwoColumns { got: game.n_cols() }]);
    }
    let zero = Rational::zero();
    let wo_row = (0..game.n_rows()).find(|&r| {
        (0..2).all(|c| game.u1(r, c) == &zero && game.u2(r, c) == &zero)
    });
    let Some(wo_row) = wo_row else {
        return Err(vec![PtgViolation::MissingWalkOut]);
    };
    let trust_rows: Vec<usize> = (0..game.n_rows()).filter(|&r| r != wo_row).collect();
    if trust_rows.is_empty() {
        return Err(vec![PtgViolation::NoTrustRow]);
    }

    // Column roles are not fixed by position: pick the assignment whose
    // trust chain has fewer violations (cooperate-first on ties).
    let chain_violations = |coop: usize, defect: usize| -> Vec<PtgViolation> {
        trust_rows
            .iter()
            .filter(|&&r| {
                !(game.u1(r, coop) > &zero
                    && &zero > game.u1(r, defect)
                    && game.u2(r, defect) > game.u2(r, coop)
                    && game.u2(r, coop) > &zero)
            })
            .map(|&r| PtgViolation::TrustChain { row: label(game, r) })
            .collect()
    };
    let forward = chain_violations(0, 1);
    let backward = chain_violations(1, 0);
    let (cooperate_col, defect_col, mut violations) = if forward.len() <= backward.len() {
        (0, 1, forward)
    } else {
        (1, 0, backward)
    };

    // (4a) pairwise distinct cooperation payoffs for P1.
    for (i, &a) in trust_rows.iter().enumerate() {
        for &b in &trust_rows[i + 1..] {
            if game.u1(a, cooperate_col) == game.u1(b, cooperate_col) {
                violations.push(PtgViolation::DuplicateCooperationPayoff {
                    a: label(game, a),
                    b: label(game, b),
                });
            }
        }
    }

    // (4b) more cooperative gain for P1 must coincide with more cooperative
    // gain for P2, more exposure for P1, and more temptation for P2.
    for &a in &trust_rows {
        for &b in &trust_rows {
            if game.u1(a, cooperate_col) <= game.u1(b, cooperate_col) {
                continue;
            }
            let checks: [(&'static str, bool); 3] = [
                ("u2 under cooperation", game.u2(a, cooperate_col) > game.u2(b, cooperate_col)),
                ("u1 under defection", game.u1(a, defect_col) < game.u1(b, defect_col)),
                ("u2 under defection", game.u2(a, defect_col) > game.u2(b, defect_col)),
            ];
            for (component, ok) in checks {
                if !ok {
                    violations.push(PtgViolation::MonotoneCoupling {
                        more: label(game, a),
                        less: label(game, b),
                        component,
                    });
                }
            }
        }
    }

    // (5) a row whose P1 payoffs match a convex combination of two other
    // rows must match the combination's P2 payoffs as well.
    for &t in &trust_rows {
        for a in 0..game.n_rows() {
            for b in (a + 1)..game.n_rows() {
                if a == t || b == t {
                    continue;
                }
                let denom = game.u1(a, cooperate_col) - game.u1(b, cooperate_col);
                if denom.is_zero() {
                    continue; // duplicate u1 pairs are reported by (4a)
                }
                let lambda = (game.u1(t, cooperate_col) - game.u1(b, cooperate_col)) / denom;
                if lambda.is_negative() || lambda > Rational::one() {
                    continue;
                }
                let mix = |u: &dyn Fn(usize, usize) -> Rational, col: usize| {
                    &lambda * u(a, col) + (Rational::one() - &lambda) * u(b, col)
                };
                let u1 = |r: usize, c: usize| game.u1(r, c).clone();
                let u2 = |r: usize, c: usize| game.u2(r, c).clone();
                if mix(&u1, defect_col) != *game.u1(t, defect_col) {
                    continue; // P1 payoffs do not match; nothing to enforce
                }
                if mix(&u2, cooperate_col) != *game.u2(t, cooperate_col)
                    || mix(&u2, defect_col) != *game.u2(t, defect_col)
                {
                    violations.push(PtgViolation::TieBreaking {
                        row: label(game, t),
                        a: label(game, a),
                        b: label(game, b),
                    });
                }
            }
        }
    }

    if !violations.is_empty() {
        return Err(violations);
    }

    // Breakpoint scan: regions of the 2-column simplex are intervals in the
    // defection probability.
    let mut hierarchy = Vec::new();
    let mut redundant = Vec::new();
    let mut seen_rows = vec![false; game.n_rows()];
    for region in decompose_simplex(game) {
        seen_rows[region.s1] = true;
        let mut deltas: Vec<Rational> =
            region.vertices.iter().map(|v| v.prob(defect_col).clone()).collect();
        deltas.sort();
        let (low, high) = (deltas[0].clone(), deltas[deltas.len() - 1].clone());
        if low == high {
            redundant.push(region.s1);
        } else {
            hierarchy.push(HierarchyEntry { row: region.s1, delta_low: low, delta_high: high });
        }
    }
    for (row, seen) in seen_rows.iter().enumerate() {
        if !seen {
            redundant.push(row);
        }
    }
    redundant.sort_unstable();
    hierarchy.sort_by(|a, b| a.delta_low.cmp(&b.delta_low));
    debug_assert_eq!(hierarchy.first().map(|e| &e.delta_low), Some(&Rational::zero()));
    debug_assert_eq!(hierarchy.last().map(|e| e.delta_high.clone()), Some(Rational::one()));
    debug_assert_eq!(hierarchy.last().map(|e| e.row), Some(wo_row));

    let ft_row = hierarchy[0].row;
    let incentivise: Vec<(usize, MixedStrategy)> = hierarchy
        .iter()
        .filter(|e| e.row != wo_row)
        .map(|e| {
            let mut probs = vec![Rational::zero(); 2];
            probs[defect_col] = e.delta_high.clone();
            probs[cooperate_col] = Rational::one() - &e.delta_high;
            (e.row, MixedStrategy::new(Player::Two, probs).expect("valid distribution"))
        })
        .collect();

    // Gain-to-loss ratio u1(T,C) / -u1(T,D); a middle rung beating full
    // trust on this ratio is what makes mixed commitments worth anything.
    let ratio = |row: usize| game.u1(row, cooperate_col) / -game.u1(row, defect_col);
    let nontrivial = trust_rows.iter().any(|&t| t != ft_row && ratio(t) > ratio(ft_row));
    debug_assert_eq!(nontrivial, hierarchy.len() >= 3);

    let (c0, verified_cost_bound) = if nontrivial {
        let t1 = &hierarchy[1];
        let t2 = &hierarchy[2];
        let pair_ratio = |hi: usize, lo: usize| {
            (game.u1(hi, cooperate_col) - game.u1(lo, cooperate_col))
                / (game.u1(lo, defect_col) - game.u1(hi, defect_col))
        };
        let n1_minus_b = -game.u1(t1.row, defect_col);
        let c0 = (pair_ratio(t1.row, t2.row) - pair_ratio(ft_row, t1.row)) * &n1_minus_b;
        let exact = &n1_minus_b * (&t1.delta_high - &hierarchy[0].delta_high)
            / (Rational::one() - &hierarchy[0].delta_high);
        (Some(c0), Some(exact))
    } else {
        (None, None)
    };

    let delta_ft = hierarchy[0].delta_high.clone();
    let ft_weight = &delta_ft * (game.u2(ft_row, defect_col) - game.u2(ft_row, cooperate_col))
        + game.u2(ft_row, cooperate_col);
    let mut sufficiency = Vec::new();
    let mut sufficient_gft2_bound: Option<Rational> = None;
    for entry in &hierarchy[1..hierarchy.len().saturating_sub(1)] {
        let t = entry.row;
        let lhs = (&entry.delta_high * (game.u2(t, defect_col) - game.u2(t, cooperate_col))
            + game.u2(t, cooperate_col))
            / &ft_weight;
        let rhs = (Rational::one() - &entry.delta_high) / (Rational::one() - &delta_ft);
        sufficiency.push((t, lhs <= rhs));
        let bound = game.u2(t, defect_col) / (Rational::one() - &entry.delta_high);
        if sufficient_gft2_bound.as_ref().map_or(true, |b| bound > *b) {
            sufficient_gft2_bound = Some(bound);
        }
    }
    let sufficiency_ok = sufficiency.iter().all(|(_, ok)| *ok);

    Ok(PtgAnalysis {
        game: game.clone(),
        cooperate_col,
        defect_col,
        hierarchy,
        ft_row,
        wo_row,
        redundant,
        incentivise,
        nontrivial,
        c0,
        verified_cost_bound,
        sufficiency,
        sufficiency_ok,
        sufficient_gft2_bound: if sufficient_gft2_bound.is_some() && nontrivial {
            sufficient_gft2_bound
        } else {
            None
        },
    })
}

/// Why the analyzer declined to produce a simulation equilibrium.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GptgRefusal {
    #[error("game is trivial: no trust level beats full trust on gain-to-loss ratio")]
    Trivial,
    #[error("simulation cost must be strictly positive, got {0}")]
    NonPositiveCost(Rational),
    #[error("simulation cost too high: the construction requires cost < {bound}")]
    CostTooHigh { bound: Rational },
    #[error("commitment comparison fails for hierarchy row {row}: P2 prefers its own rung")]
    SufficiencyViolated { row: usize },
}

/// The closed-form simulation equilibrium of a non-trivial partial-trust
/// game: P1 mixes the simulate action with the second-highest trust level,
/// P2 mixes the full-trust commitment with outright defection.
#[derive(Debug, Clone)]
pub struct GptgSimEquilibrium {
    /// Weight on the simulate action.
    pub p_sim: Rational,
    /// Weight on outright defection; linear in the simulation cost.
    pub p_d: Rational,
    /// Defection-free fraction of the full-trust commitment.
    pub cooperation_rate: Rational,
    pub profile: EquilibriumProfile,
    pub payoffs: PayoffPair,
    /// Exact no-deviation check of the profile in the reduced meta-game.
    /// Fails for costs between `verified_cost_bound` and `c0`.
    pub verification: EquilibriumCheck,
}

/// Builds and checks the closed-form simulation equilibrium for a validated
/// analysis at the given cost.
pub fn gptg_simulation_equilibrium(
    analysis: &PtgAnalysis,
    c_sim: &Rational,
) -> Result<GptgSimEquilibrium, GptgRefusal> {
    if !analysis.nontrivial {
        return Err(GptgRefusal::Trivial);
    }
    if !c_sim.is_positive() {
        return Err(GptgRefusal::NonPositiveCost(c_sim.clone()));
    }
    let c0 = analysis.c0.clone().expect("non-trivial analysis has a cost bound");
    if *c_sim >= c0 {
        return Err(GptgRefusal::CostTooHigh { bound: c0 });
    }
    if let Some((row, _)) = analysis.sufficiency.iter().find(|(_, ok)| !ok) {
        return Err(GptgRefusal::SufficiencyViolated { row: *row });
    }

    let game = &analysis.game;
    let (coop, defect) = (analysis.cooperate_col, analysis.defect_col);
    let ft = analysis.ft_row;
    let t1 = analysis.hierarchy[1].row;
    let delta_ft = analysis.hierarchy[0].delta_high.clone();

    let p_d = c_sim / -game.u1(t1, defect);
    let spread = |row: usize| game.u2(row, defect) - game.u2(row, coop);
    let odds = ((Rational::one() - &delta_ft) * spread(t1))
        / (&delta_ft * spread(ft) + game.u2(ft, coop));
    let p_sim = &odds / (Rational::one() + &odds);

    let config = SimulationConfig::new(c_sim.clone(), SimKind::Mixed)
        .expect("cost checked positive");
    let reduced = build_msim_reduced(game, &config).expect("valid base game");

    let commitment = analysis
        .incentivise
        .iter()
        .find(|(row, _)| *row == ft)
        .map(|(_, s)| s.clone())
        .expect("full trust is in the hierarchy");
    let commitment_col = reduced
        .column_of(&commitment)
        .expect("the full-trust commitment is a region vertex");
    let defect_pure = MixedStrategy::pure(Player::Two, defect, 2);
    let defect_col = reduced.column_of(&defect_pure).expect("pure defection is a simplex corner");

    let meta = &reduced.meta;
    let mut s1_probs = vec![Rational::zero(); meta.n_rows()];
    s1_probs[t1] = Rational::one() - &p_sim;
    s1_probs[reduced.simulate_row()] = p_sim.clone();
    let s1 = MixedStrategy::new(Player::One, s1_probs).expect("valid distribution");
    let mut s2_probs = vec![Rational::zero(); meta.n_cols()];
    s2_probs[commitment_col] = Rational::one() - &p_d;
    s2_probs[defect_col] = p_d.clone();
    let s2 = MixedStrategy::new(Player::Two, s2_probs).expect("valid distribution");

    let payoffs = meta.expected_utility(&s1, &s2).expect("profile matches meta-game");
    let verification = check_equilibrium(meta, &s1, &s2).expect("profile matches meta-game");
    let profile = EquilibriumProfile {
        support1: s1.support(),
        support2: s2.support(),
        s1,
        s2,
        payoffs: payoffs.clone(),
        degenerate: false,
    };

    Ok(GptgSimEquilibrium {
        p_sim,
        p_d,
        cooperation_rate: Rational::one() - delta_ft,
        profile,
        payoffs,
        verification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ptg, tg, three_level_trust_game};
    use crate::rat;

    #[test]
    fn ptg_analysis_matches_hand_computation() {
        let analysis = validate_gptg(&ptg()).expect("valid partial-trust game");
        assert_eq!(analysis.cooperate_col, 0);
        assert_eq!(analysis.defect_col, 1);
        assert_eq!(analysis.ft_row, 0);
        assert_eq!(analysis.wo_row, 2);
        let intervals: Vec<(usize, Rational, Rational)> = analysis
            .hierarchy
            .iter()
            .map(|e| (e.row, e.delta_low.clone(), e.delta_high.clone()))
            .collect();
        assert_eq!(
            intervals,
            vec![
                (0, rat!(0), rat!(2 / 17)),
                (1, rat!(2 / 17), rat!(2 / 7)),
                (2, rat!(2 / 7), rat!(1)),
            ]
        );
        assert!(analysis.nontrivial);
        assert_eq!(analysis.c0, Some(rat!(20 / 3)));
        assert_eq!(analysis.verified_cost_bound, Some(rat!(100 / 21)));
        assert!(analysis.sufficiency_ok);
        assert!(analysis.redundant.is_empty());
    }

    #[test]
    fn ptg_sufficiency_ratio_is_seventeen_thirty_fifths() {
        // The commitment comparison for the middle rung: 17/35 <= 17/21.
        let analysis = validate_gptg(&ptg()).unwrap();
        let entry = &analysis.hierarchy[1];
        let lhs = (&entry.delta_high * rat!(15) + rat!(10)) / rat!(500 / 17);
        let rhs = (rat!(1) - &entry.delta_high) / (rat!(1) - rat!(2 / 17));
        assert_eq!(lhs, rat!(17 / 35));
        assert_eq!(rhs, rat!(17 / 21));
    }

    #[test]
    fn tg_is_a_trivial_gptg() {
        let analysis = validate_gptg(&tg()).expect("trust game is a valid gPTG");
        assert!(!analysis.nontrivial);
        assert_eq!(analysis.hierarchy.len(), 2);
        assert!(matches!(
            gptg_simulation_equilibrium(&analysis, &rat!(2)),
            Err(GptgRefusal::Trivial)
        ));
    }

    #[test]
    fn three_level_game_has_two_middle_rungs() {
        let analysis = validate_gptg(&three_level_trust_game()).unwrap();
        let rows: Vec<usize> = analysis.hierarchy.iter().map(|e| e.row).collect();
        assert_eq!(rows, vec![0, 1, 2, 3]);
        assert_eq!(analysis.hierarchy[0].delta_high, rat!(1 / 9));
        assert_eq!(analysis.hierarchy[1].delta_high, rat!(5 / 24));
        assert_eq!(analysis.hierarchy[2].delta_high, rat!(5 / 6));
    }

    #[test]
    fn monotone_coupling_violation_is_reported() {
        // An extra row that gains more for P1 under cooperation but less
        // for P2 breaks the coupling.
        let g = NormalFormGame::from_integers(
            &["T1", "T2", "X", "WO"],
            &["C", "D"],
            &[&[20, -100], &[10, -20], &[11, -30], &[0, 0]],
            &[&[20, 100], &[10, 20], &[9, 30], &[0, 0]],
        )
        .unwrap();
        let violations = validate_gptg(&g).unwrap_err();
        assert!(violations
            .iter()
            .any(|v| matches!(v, PtgViolation::MonotoneCoupling { .. })));
    }

    #[test]
    fn tie_breaking_violation_is_reported() {
        // A row matching P1's payoffs of the T1/T2 midpoint but giving P2
        // different payoffs.
        let g = NormalFormGame::from_integers(
            &["T1", "Mid", "T2", "WO"],
            &["C", "D"],
            &[&[20, -100], &[15, -60], &[10, -20], &[0, 0]],
            &[&[20, 100], &[16, 60], &[10, 20], &[0, 0]],
        )
        .unwrap();
        let violations = validate_gptg(&g).unwrap_err();
        assert!(violations
            .iter()
            .any(|v| matches!(v, PtgViolation::TieBreaking { .. })));
    }

    #[test]
    fn closed_form_equilibrium_for_ptg_at_cost_two() {
        let analysis = validate_gptg(&ptg()).unwrap();
        let eq = gptg_simulation_equilibrium(&analysis, &rat!(2)).unwrap();
        assert_eq!(eq.p_d, rat!(2 / 25));
        assert_eq!(eq.p_sim, rat!(9 / 29));
        assert_eq!(eq.cooperation_rate, rat!(15 / 17));
        assert_eq!(eq.payoffs, PayoffPair::new(rat!(58 / 17), rat!(500 / 29)));
        assert!(eq.verification.is_exact());
    }

    #[test]
    fn refusals_at_the_cost_boundary_and_for_trivial_games() {
        let analysis = validate_gptg(&ptg()).unwrap();
        assert!(matches!(
            gptg_simulation_equilibrium(&analysis, &rat!(20 / 3)),
            Err(GptgRefusal::CostTooHigh { .. })
        ));
        assert!(matches!(
            gptg_simulation_equilibrium(&analysis, &rat!(7)),
            Err(GptgRefusal::CostTooHigh { .. })
        ));
        assert!(matches!(
            gptg_simulation_equilibrium(&analysis, &rat!(0)),
            Err(GptgRefusal::NonPositiveCost(_))
        ));
    }

    #[test]
    fn verification_fails_between_exact_bound_and_c0() {
        // The closed forms are still reported there, but the no-deviation
        // check correctly refutes them: Walk Out becomes profitable.
        let analysis = validate_gptg(&ptg()).unwrap();
        let eq = gptg_simulation_equilibrium(&analysis, &rat!(6)).unwrap();
        assert_eq!(eq.p_d, rat!(6 / 25));
        assert!(!eq.verification.is_exact());
        // At the exact bound the profile is still an equilibrium.
        let boundary = gptg_simulation_equilibrium(&analysis, &rat!(100 / 21)).unwrap();
        assert!(boundary.verification.is_exact());
    }
}
