//! Simulation games and their finite reduction.
//!
//! Adding a simulate action to a game gives P1 the option to pay a cost,
//! observe P2's committed strategy (its realized pure action under
//! pure-strategy simulation, the whole mixture under mixed-strategy
//! simulation), and best-respond, breaking ties in P2's favour. Under
//! mixed-strategy simulation P2's pure strategies are entire mixtures, so the
//! game is infinite; it reduces to a finite meta-game whose columns are the
//! vertices of P2's best-response regions.
//!
//! ```
//! use sim_games::{catalog, simulation::{build_msim_reduced, SimulationConfig, SimKind}};
//! use sim_games::Rational;
//!
//! let config = SimulationConfig::new(Rational::from(2), SimKind::Mixed).unwrap();
//! let reduced = build_msim_reduced(&catalog::trust_game(), &config).unwrap();
//! // Columns: pure D, the 1/6-defection tipping point, pure C.
//! assert_eq!(reduced.meta.n_cols(), 3);
//! assert_eq!(reduced.meta.n_rows(), 3); // T, WO, and the simulate action
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::equilibrium::{enumerate_nash_bounded, enumerate_nash_vertices_bounded, EquilibriumProfile};
use crate::game::{GameError, MixedStrategy, NormalFormGame, PayoffPair, Player};
use crate::geometry::decompose_simplex;
use crate::linalg::{solve, Solution};
use crate::rational::Rational;

/// Which kind of observation the simulate action buys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimKind {
    Pure,
    Mixed,
}

/// Simulation cost and kind. The cost must be strictly positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationConfig {
    cost: Rational,
    kind: SimKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimulationError {
    #[error("simulation cost must be strictly positive, got {0}")]
    NonPositiveCost(Rational),
    #[error("expected a {expected:?} configuration, got {got:?}")]
    WrongKind { expected: SimKind, got: SimKind },
    #[error(transparent)]
    Game(#[from] GameError),
}

impl SimulationConfig {
    pub fn new(cost: Rational, kind: SimKind) -> Result<Self, SimulationError> {
        if !cost.is_positive() {
            return Err(SimulationError::NonPositiveCost(cost));
        }
        Ok(SimulationConfig { cost, kind })
    }

    pub fn cost(&self) -> &Rational {
        &self.cost
    }

    pub fn kind(&self) -> SimKind {
        self.kind
    }
}

/// What a P1 meta-game row stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetaAction {
    Base(usize),
    Simulate,
}

/// A finite-support distribution over P2 mixed strategies ("mixing over
/// mixed strategies"). Atoms are deduplicated and sorted; weights are
/// non-negative and sum to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaStrategy {
    atoms: Vec<(MixedStrategy, Rational)>,
}

impl MetaStrategy {
    pub fn new(mut atoms: Vec<(MixedStrategy, Rational)>) -> Result<Self, GameError> {
        atoms.retain(|(_, w)| !w.is_zero());
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(MixedStrategy, Rational)> = Vec::with_capacity(atoms.len());
        for (atom, weight) in atoms {
            if weight.is_negative() {
                return Err(GameError::NegativeProbability { index: merged.len(), value: weight });
            }
            match merged.last_mut() {
                Some((last, w)) if *last == atom => *w += weight,
                _ => merged.push((atom, weight)),
            }
        }
        let sum: Rational = merged.iter().map(|(_, w)| w).sum();
        if sum != Rational::one() {
            return Err(GameError::BadProbabilitySum { sum });
        }
        Ok(MetaStrategy { atoms: merged })
    }

    pub fn atoms(&self) -> &[(MixedStrategy, Rational)] {
        &self.atoms
    }

    /// The induced single mixed strategy: the weighted average of the atoms.
    pub fn aggregate(&self) -> MixedStrategy {
        let dim = self.atoms[0].0.len();
        let owner = self.atoms[0].0.owner();
        let mut probs = vec![Rational::zero(); dim];
        for (atom, weight) in &self.atoms {
            for (slot, p) in probs.iter_mut().zip(atom.probs()) {
                *slot += p * weight;
            }
        }
        MixedStrategy::new(owner, probs).expect("convex combination of distributions")
    }
}

/// The finite simulation meta-game, with maps back to the base game.
///
/// The last P1 row is always the simulate action; every other row is a base
/// row in order. Each P2 column is a base mixed strategy (a region vertex
/// under mixed simulation, a pure strategy under pure simulation).
#[derive(Debug, Clone)]
pub struct ReducedSimGame {
    pub meta: NormalFormGame,
    pub p1_map: Vec<MetaAction>,
    pub p2_map: Vec<MixedStrategy>,
    pub config: SimulationConfig,
    pub base: NormalFormGame,
}

impl ReducedSimGame {
    /// Index of the simulate row (always the last row).
    pub fn simulate_row(&self) -> usize {
        self.meta.n_rows() - 1
    }

    /// The column index holding exactly this base mixed strategy, if any.
    pub fn column_of(&self, atom: &MixedStrategy) -> Option<usize> {
        self.p2_map.iter().position(|v| v == atom)
    }

    /// Interprets a meta-game P2 strategy as a meta-strategy over base
    /// mixtures.
    pub fn meta_strategy_of(&self, s2: &MixedStrategy) -> MetaStrategy {
        let atoms = self
            .p2_map
            .iter()
            .zip(s2.probs())
            .filter(|(_, w)| !w.is_zero())
            .map(|(atom, w)| (atom.clone(), w.clone()))
            .collect();
        MetaStrategy::new(atoms).expect("meta strategy built from a distribution")
    }
}

fn atom_label(base: &NormalFormGame, atom: &MixedStrategy) -> String {
    if let Some(p) = atom.as_pure() {
        return base.s2_labels()[p].clone();
    }
    let mut label = String::from("(");
    let mut first = true;
    for (i, p) in atom.probs().iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        if !first {
            label.push_str(" + ");
        }
        write!(label, "{p} {}", base.s2_labels()[i]).expect("write to string");
        first = false;
    }
    label.push(')');
    label
}

fn build_reduced(
    base: &NormalFormGame,
    config: &SimulationConfig,
    columns: Vec<MixedStrategy>,
    sim_label: &str,
) -> Result<ReducedSimGame, SimulationError> {
    let mut s1_labels: Vec<String> = base.s1_labels().to_vec();
    s1_labels.push(sim_label.to_string());
    let s2_labels: Vec<String> = columns.iter().map(|v| atom_label(base, v)).collect();

    let n_rows = base.n_rows() + 1;
    let mut u1 = vec![Vec::with_capacity(columns.len()); n_rows];
    let mut u2 = vec![Vec::with_capacity(columns.len()); n_rows];
    for atom in &columns {
        for r in 0..base.n_rows() {
            u1[r].push(base.u1_row_vs(r, atom)?);
            u2[r].push(base.u2_row_vs(r, atom)?);
        }
        let observed = base.best_response_payoffs(atom)?;
        u1[base.n_rows()].push(observed.u1 - config.cost());
        u2[base.n_rows()].push(observed.u2);
    }

    let meta = NormalFormGame::new(s1_labels, s2_labels, u1, u2)?;
    let mut p1_map: Vec<MetaAction> = (0..base.n_rows()).map(MetaAction::Base).collect();
    p1_map.push(MetaAction::Simulate);
    Ok(ReducedSimGame { meta, p1_map, p2_map: columns, config: config.clone(), base: base.clone() })
}

/// The pure-strategy simulation game. P2 keeps their base pure strategies;
/// P1 gains a row paying the expected value of best-responding to each
/// realized pure strategy, minus the cost.
pub fn build_psim(
    base: &NormalFormGame,
    config: &SimulationConfig,
) -> Result<ReducedSimGame, SimulationError> {
    if config.kind() != SimKind::Pure {
        return Err(SimulationError::WrongKind { expected: SimKind::Pure, got: config.kind() });
    }
    let columns = (0..base.n_cols())
        .map(|c| MixedStrategy::pure(Player::Two, c, base.n_cols()))
        .collect();
    build_reduced(base, config, columns, "p-sim")
}

/// The finite reduction of the mixed-strategy simulation game: columns are
/// the globally deduplicated vertices of the best-response regions of P2's
/// simplex, sorted lexicographically.
pub fn build_msim_reduced(
    base: &NormalFormGame,
    config: &SimulationConfig,
) -> Result<ReducedSimGame, SimulationError> {
    if config.kind() != SimKind::Mixed {
        return Err(SimulationError::WrongKind { expected: SimKind::Mixed, got: config.kind() });
    }
    let mut columns: Vec<MixedStrategy> = decompose_simplex(base)
        .into_iter()
        .flat_map(|region| region.vertices)
        .collect();
    columns.sort();
    columns.dedup();
    build_reduced(base, config, columns, "m-sim")
}

/// A Nash equilibrium of the reduced game in which P1 simulates with
/// positive probability, annotated with P2's aggregate base strategy.
#[derive(Debug, Clone)]
pub struct SimulationEquilibrium {
    pub profile: EquilibriumProfile,
    pub aggregate: MixedStrategy,
}

/// All simulation equilibria of the reduced game (Nash equilibria putting
/// positive weight on the simulate row).
pub fn find_simulation_equilibria(reduced: &ReducedSimGame) -> Vec<SimulationEquilibrium> {
    find_simulation_equilibria_bounded(reduced, reduced.meta.n_rows(), reduced.meta.n_cols())
}

/// Bounded-support variant of [`find_simulation_equilibria`] for meta-games
/// too large for exhaustive support enumeration.
pub fn find_simulation_equilibria_bounded(
    reduced: &ReducedSimGame,
    max_support1: usize,
    max_support2: usize,
) -> Vec<SimulationEquilibrium> {
    let sim_row = reduced.simulate_row();
    enumerate_nash_bounded(&reduced.meta, max_support1, max_support2)
        .into_iter()
        .filter(|ne| !ne.s1.prob(sim_row).is_zero())
        .map(|profile| {
            let aggregate = reduced.meta_strategy_of(&profile.s2).aggregate();
            SimulationEquilibrium { profile, aggregate }
        })
        .collect()
}

/// Checks that a base-game Nash equilibrium survives as an equilibrium of
/// the simulation game when P2 plays their whole equilibrium mixture as a
/// single atom.
///
/// P1 is tested against every base row and the simulate action; P2 against
/// every reduced column and the atom itself. Returns `true` when no
/// deviation strictly profits.
pub fn lift_check(
    base: &NormalFormGame,
    reduced: &ReducedSimGame,
    ne: &EquilibriumProfile,
) -> Result<bool, GameError> {
    let value = base.expected_utility(&ne.s1, &ne.s2)?;
    // P1 deviations: base rows, then paying for simulation against the atom.
    for r in 0..base.n_rows() {
        if base.u1_row_vs(r, &ne.s2)? > value.u1 {
            return Ok(false);
        }
    }
    let observed = base.best_response_payoffs(&ne.s2)?;
    if observed.u1 - reduced.config.cost() > value.u1 {
        return Ok(false);
    }
    // P2 deviations: every reduced column, and the atom itself (a no-op).
    for column in &reduced.p2_map {
        if base.expected_utility(&ne.s1, column)?.u2 > value.u2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The question "does enabling mixed-strategy simulation introduce a Nash
/// equilibrium strictly better than every equilibrium of the base game?" in
/// one of five senses.
#[derive(Clone, Copy)]
pub enum HelpsCriterion {
    /// (a) strictly better for both players.
    ParetoBoth,
    /// (b) strictly better for P1.
    Utility1,
    /// (c) strictly better for P2.
    Utility2,
    /// (d) strictly better under a strictly monotone welfare function.
    Welfare(fn(&PayoffPair) -> Rational),
    /// (e) strictly better under min(u1, u2).
    Egalitarian,
}

impl HelpsCriterion {
    pub fn utilitarian() -> Self {
        HelpsCriterion::Welfare(|p| &p.u1 + &p.u2)
    }

    pub fn nash_product() -> Self {
        HelpsCriterion::Welfare(|p| &p.u1 * &p.u2)
    }
}

impl std::fmt::Debug for HelpsCriterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            HelpsCriterion::ParetoBoth => "ParetoBoth",
            HelpsCriterion::Utility1 => "Utility1",
            HelpsCriterion::Utility2 => "Utility2",
            HelpsCriterion::Welfare(_) => "Welfare",
            HelpsCriterion::Egalitarian => "Egalitarian",
        };
        f.write_str(name)
    }
}

/// Support-size limits for the two Nash enumerations inside
/// [`decide_msim_helps`]. `unbounded()` is exhaustive; finite limits make
/// negative answers conservative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_support1: usize,
    pub max_support2: usize,
}

impl SearchLimits {
    pub fn unbounded() -> Self {
        SearchLimits { max_support1: usize::MAX, max_support2: usize::MAX }
    }

    pub fn capped(max_support1: usize, max_support2: usize) -> Self {
        SearchLimits { max_support1, max_support2 }
    }
}

/// Outcome of [`decide_msim_helps`].
#[derive(Debug, Clone)]
pub struct DecisionReport {
    pub helps: bool,
    /// A verified simulation-game equilibrium exceeding every base
    /// equilibrium under the criterion, when one exists.
    pub witness: Option<SimulationEquilibrium>,
    /// Set when the answer may under-enumerate: a degenerate component was
    /// flagged in either game, or the search limits actually bound.
    pub conservative: bool,
    pub base_payoffs: Vec<PayoffPair>,
    pub sim_payoffs: Vec<PayoffPair>,
}

/// Decides whether enabling mixed-strategy simulation introduces a Nash
/// equilibrium strictly exceeding all base-game equilibria under the given
/// criterion. Yes-answers carry a verified witness; no-answers are exact
/// only when the report is not marked conservative.
pub fn decide_msim_helps(
    base: &NormalFormGame,
    config: &SimulationConfig,
    criterion: HelpsCriterion,
    limits: SearchLimits,
) -> Result<DecisionReport, SimulationError> {
    let reduced = build_msim_reduced(base, config)?;
    let base_cap1 = limits.max_support1.min(base.n_rows());
    let base_cap2 = limits.max_support2.min(base.n_cols());
    let base_nes = enumerate_nash_vertices_bounded(base, base_cap1, base_cap2);
    let meta_cap1 = limits.max_support1.min(reduced.meta.n_rows());
    let meta_cap2 = limits.max_support2.min(reduced.meta.n_cols());
    let sim_nes = enumerate_nash_vertices_bounded(&reduced.meta, meta_cap1, meta_cap2);

    let mut conservative = base_nes.iter().any(|ne| ne.degenerate)
        || sim_nes.iter().any(|ne| ne.degenerate);
    if base_cap1 < base.n_rows()
        || base_cap2 < base.n_cols()
        || meta_cap1 < reduced.meta.n_rows()
        || meta_cap2 < reduced.meta.n_cols()
    {
        conservative = true;
    }

    let base_payoffs: Vec<PayoffPair> = base_nes.iter().map(|ne| ne.payoffs.clone()).collect();
    let sim_payoffs: Vec<PayoffPair> = sim_nes.iter().map(|ne| ne.payoffs.clone()).collect();

    let exceeds_all_base = |candidate: &PayoffPair| -> bool {
        base_payoffs.iter().all(|base_p| match criterion {
            HelpsCriterion::ParetoBoth => {
                candidate.u1 > base_p.u1 && candidate.u2 > base_p.u2
            }
            HelpsCriterion::Utility1 => candidate.u1 > base_p.u1,
            HelpsCriterion::Utility2 => candidate.u2 > base_p.u2,
            HelpsCriterion::Welfare(w) => w(candidate) > w(base_p),
            HelpsCriterion::Egalitarian => {
                candidate.u1.clone().min(candidate.u2.clone())
                    > base_p.u1.clone().min(base_p.u2.clone())
            }
        })
    };

    let witness = sim_nes
        .iter()
        .find(|ne| exceeds_all_base(&ne.payoffs))
        .map(|ne| SimulationEquilibrium {
            profile: ne.clone(),
            aggregate: reduced.meta_strategy_of(&ne.s2).aggregate(),
        });

    Ok(DecisionReport { helps: witness.is_some(), witness, conservative, base_payoffs, sim_payoffs })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceProfileError {
    #[error("atom has no best-response region column set to decompose over")]
    NoFace,
    #[error("atom is not a convex combination of its face's columns")]
    NotInFace,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Rewrites a simulation-game profile whose P2 atoms are arbitrary base
/// mixtures into an equivalent profile of the reduced meta-game.
///
/// Each atom is replaced by a convex combination of reduced columns drawn
/// from the face of its best-response region on which P2's payoff against
/// P1's mixture is maximal; this preserves both players' payoffs against
/// every row. The caller still has to verify the result is an equilibrium.
pub fn reduce_meta_profile(
    reduced: &ReducedSimGame,
    sim_weight: &Rational,
    base_rows: &MixedStrategy,
    atoms: &[(MixedStrategy, Rational)],
) -> Result<EquilibriumProfile, ReduceProfileError> {
    let base = &reduced.base;
    let meta = &reduced.meta;
    let sim_row = reduced.simulate_row();

    let mut s1_probs = vec![Rational::zero(); meta.n_rows()];
    let keep = Rational::one() - sim_weight;
    for (r, p) in base_rows.probs().iter().enumerate() {
        s1_probs[r] = p * &keep;
    }
    s1_probs[sim_row] = sim_weight.clone();
    let s1 = MixedStrategy::new(Player::One, s1_probs).map_err(ReduceProfileError::Game)?;

    let mut column_weights = vec![Rational::zero(); meta.n_cols()];
    for (atom, weight) in atoms {
        if weight.is_zero() {
            continue;
        }
        if let Some(col) = reduced.column_of(atom) {
            column_weights[col] += weight;
            continue;
        }
        // Face selection: among columns keeping the atom's favourable best
        // response a best response, take those maximizing P2's payoff
        // against P1's overall mixture.
        let reply = base.favourable_best_responses(atom)?[0];
        let candidates: Vec<usize> = (0..meta.n_cols())
            .filter(|&c| base.best_responses(&reduced.p2_map[c]).expect("valid column").contains(&reply))
            .collect();
        if candidates.is_empty() {
            return Err(ReduceProfileError::NoFace);
        }
        let score = |c: usize| -> Rational {
            let column = &reduced.p2_map[c];
            let direct = base.u2_row_vs(reply, column).expect("valid column");
            let blind = base
                .expected_utility(base_rows, column)
                .expect("valid column")
                .u2;
            sim_weight * direct + &keep * blind
        };
        let best_score = candidates.iter().map(|&c| score(c)).max().expect("non-empty");
        let face: Vec<usize> = candidates.into_iter().filter(|&c| score(c) == best_score).collect();

        // Express the atom as a convex combination of the face's columns.
        let dim = base.n_cols();
        let mut rows: Vec<Vec<Rational>> = (0..dim)
            .map(|j| face.iter().map(|&c| reduced.p2_map[c].prob(j).clone()).collect())
            .collect();
        rows.push(vec![Rational::one(); face.len()]);
        let mut rhs: Vec<Rational> = atom.probs().to_vec();
        rhs.push(Rational::one());
        let lambda = match solve(&rows, &rhs) {
            Solution::Unique(l) => {
                if l.iter().any(|w| w.is_negative()) {
                    return Err(ReduceProfileError::NotInFace);
                }
                l
            }
            Solution::Affine { particular, basis } => {
                let constraints: Vec<(Vec<Rational>, Rational)> = (0..face.len())
                    .map(|j| {
                        let coeffs = basis.iter().map(|v| v[j].clone()).collect();
                        (coeffs, -particular[j].clone())
                    })
                    .collect();
                let vertex = polytope_point(&constraints, basis.len())
                    .ok_or(ReduceProfileError::NotInFace)?;
                let mut l = particular;
                for (v, w) in basis.iter().zip(&vertex) {
                    for j in 0..l.len() {
                        l[j] += &v[j] * w;
                    }
                }
                l
            }
            Solution::Inconsistent => return Err(ReduceProfileError::NotInFace),
        };
        for (&c, w) in face.iter().zip(&lambda) {
            column_weights[c] += w * weight;
        }
    }
    let s2 = MixedStrategy::new(Player::Two, column_weights).map_err(ReduceProfileError::Game)?;
    let payoffs = meta.expected_utility(&s1, &s2).map_err(ReduceProfileError::Game)?;
    Ok(EquilibriumProfile {
        support1: s1.support(),
        support2: s2.support(),
        s1,
        s2,
        payoffs,
        degenerate: false,
    })
}

/// One feasible point of `{t : coeffs . t >= bound}`, found by vertex
/// enumeration. `None` when the polytope is empty.
fn polytope_point(constraints: &[(Vec<Rational>, Rational)], q: usize) -> Option<Vec<Rational>> {
    if q == 0 {
        return Some(Vec::new());
    }
    let n = constraints.len();
    if n < q {
        return None;
    }
    let mut found = None;
    let mut subset = vec![0usize; q];
    subset_scan(n, q, 0, 0, &mut subset, &mut |chosen: &[usize]| {
        if found.is_some() {
            return;
        }
        let rows: Vec<Vec<Rational>> = chosen.iter().map(|&i| constraints[i].0.clone()).collect();
        let rhs: Vec<Rational> = chosen.iter().map(|&i| constraints[i].1.clone()).collect();
        if let Solution::Unique(t) = solve(&rows, &rhs) {
            if constraints.iter().all(|(c, b)| crate::linalg::dot(c, &t) >= *b) {
                found = Some(t);
            }
        }
    });
    found
}

fn subset_scan(
    n: usize,
    k: usize,
    depth: usize,
    start: usize,
    subset: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        visit(subset);
        return;
    }
    for i in start..=(n - (k - depth)) {
        subset[depth] = i;
        subset_scan(n, k, depth + 1, i + 1, subset, visit);
    }
}
