//! Exact Nash enumeration, Stackelberg commitment (P2 as leader), and
//! pure-commitment equilibria.
//!
//! Nash enumeration walks every pair of supports, solves the rational
//! indifference-and-normalization systems, and keeps solutions that verify as
//! mutual best responses. When an indifference system is underdetermined the
//! game is degenerate there: the solution set is a polytope, and we report
//! every vertex of it, each flagged, so downstream "for all equilibria"
//! checks can quantify over the whole component.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::game::{GameError, MixedStrategy, NormalFormGame, PayoffPair, Player};
use crate::geometry::decompose_simplex;
use crate::linalg::{dot, solve, Solution};
use crate::rational::Rational;

/// A Nash equilibrium (or, when `degenerate` is set, one vertex of a
/// degenerate equilibrium component).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumProfile {
    pub s1: MixedStrategy,
    pub s2: MixedStrategy,
    pub payoffs: PayoffPair,
    pub support1: Vec<usize>,
    pub support2: Vec<usize>,
    /// Set when the profile came from an underdetermined indifference
    /// system, i.e. it is one vertex of a continuum of equilibria.
    pub degenerate: bool,
}

/// Exact mutual-best-response check: no pure deviation strictly profits
/// either player.
pub fn verify_equilibrium(
    game: &NormalFormGame,
    s1: &MixedStrategy,
    s2: &MixedStrategy,
) -> Result<bool, GameError> {
    Ok(matches!(check_equilibrium(game, s1, s2)?, EquilibriumCheck::Exact))
}

/// Result of an exact no-deviation check with a concrete counterexample on
/// failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquilibriumCheck {
    Exact,
    ProfitableDeviation {
        player: Player,
        action: usize,
        gain: Rational,
    },
}

impl EquilibriumCheck {
    pub fn is_exact(&self) -> bool {
        matches!(self, EquilibriumCheck::Exact)
    }
}

/// Like [`verify_equilibrium`] but reports the most profitable deviation on
/// failure.
pub fn check_equilibrium(
    game: &NormalFormGame,
    s1: &MixedStrategy,
    s2: &MixedStrategy,
) -> Result<EquilibriumCheck, GameError> {
    let value = game.expected_utility(s1, s2)?;
    let mut worst: Option<(Player, usize, Rational)> = None;
    for r in 0..game.n_rows() {
        let gain = game.u1_row_vs(r, s2)? - &value.u1;
        if gain.is_positive() && worst.as_ref().map_or(true, |(_, _, g)| gain > *g) {
            worst = Some((Player::One, r, gain));
        }
    }
    for c in 0..game.n_cols() {
        let gain = game.u2_col_vs(c, s1)? - &value.u2;
        if gain.is_positive() && worst.as_ref().map_or(true, |(_, _, g)| gain > *g) {
            worst = Some((Player::Two, c, gain));
        }
    }
    Ok(match worst {
        None => EquilibriumCheck::Exact,
        Some((player, action, gain)) => EquilibriumCheck::ProfitableDeviation { player, action, gain },
    })
}

/// Enumerates the Nash equilibria of a finite game, one profile per
/// equilibrium point or degenerate component.
///
/// Every support pair is tried, equal-sized or not. Support pairs whose
/// indifference system is underdetermined contribute a single representative
/// (the lexicographically smallest vertex of the solution polytope) carrying
/// the degeneracy flag; use [`enumerate_nash_vertices`] when a "for all
/// equilibria" check needs the whole component. The output is deduplicated
/// and deterministically ordered; it is never empty for a well-formed
/// finite game.
pub fn enumerate_nash(game: &NormalFormGame) -> Vec<EquilibriumProfile> {
    enumerate_nash_bounded(game, game.n_rows(), game.n_cols())
}

/// [`enumerate_nash`] restricted to supports of bounded size. With caps below
/// the full strategy counts the result may miss large-support equilibria;
/// callers that need exhaustiveness must pass full caps.
pub fn enumerate_nash_bounded(
    game: &NormalFormGame,
    max_support1: usize,
    max_support2: usize,
) -> Vec<EquilibriumProfile> {
    enumerate_impl(game, max_support1, max_support2, false)
}

/// Every vertex of every equilibrium component. Payoffs over a degenerate
/// component are bilinear, so their extrema are attained at the vertex pairs
/// listed here; quantify over this set for exact "for all equilibria"
/// claims.
pub fn enumerate_nash_vertices(game: &NormalFormGame) -> Vec<EquilibriumProfile> {
    enumerate_nash_vertices_bounded(game, game.n_rows(), game.n_cols())
}

/// Bounded-support variant of [`enumerate_nash_vertices`].
pub fn enumerate_nash_vertices_bounded(
    game: &NormalFormGame,
    max_support1: usize,
    max_support2: usize,
) -> Vec<EquilibriumProfile> {
    enumerate_impl(game, max_support1, max_support2, true)
}

fn enumerate_impl(
    game: &NormalFormGame,
    max_support1: usize,
    max_support2: usize,
    all_vertices: bool,
) -> Vec<EquilibriumProfile> {
    let row_supports = nonempty_subsets(game.n_rows(), max_support1);
    let col_supports = nonempty_subsets(game.n_cols(), max_support2);

    // Phase one: all extreme solutions over all support pairs, with the
    // underdetermined-origin flag per strategy.
    let found: Vec<(Vec<Rational>, Vec<Rational>, bool)> = row_supports
        .par_iter()
        .with_min_len(1)
        .flat_map_iter(|k1| {
            let mut local = Vec::new();
            for k2 in &col_supports {
                solve_support_pair(game, k1, k2, &mut local);
            }
            local
        })
        .collect();
    if found.is_empty() {
        return Vec::new();
    }

    let mut xs: Vec<Vec<Rational>> = found.iter().map(|(x, _, _)| x.clone()).collect();
    xs.sort();
    xs.dedup();
    let mut ys: Vec<Vec<Rational>> = found.iter().map(|(_, y, _)| y.clone()).collect();
    ys.sort();
    ys.dedup();
    let x_strategies: Vec<MixedStrategy> = xs
        .into_iter()
        .map(|x| MixedStrategy::new(Player::One, x).expect("feasible distribution"))
        .collect();
    let y_strategies: Vec<MixedStrategy> = ys
        .into_iter()
        .map(|y| MixedStrategy::new(Player::Two, y).expect("feasible distribution"))
        .collect();
    let underdetermined: BTreeSet<(Vec<Rational>, Vec<Rational>)> = found
        .iter()
        .filter(|(_, _, flag)| *flag)
        .map(|(x, y, _)| (x.clone(), y.clone()))
        .collect();

    // Phase two: compatibility graph over the extreme strategies. Any
    // cross-pair that verifies is itself an extreme equilibrium; connected
    // groups of compatible pairs form one equilibrium component.
    let nx = x_strategies.len();
    let ny = y_strategies.len();
    let mut compatible = vec![vec![false; ny]; nx];
    for (i, x) in x_strategies.iter().enumerate() {
        for (j, y) in y_strategies.iter().enumerate() {
            compatible[i][j] = verify_equilibrium(game, x, y).expect("dimensions match");
        }
    }
    let mut parent: Vec<usize> = (0..nx + ny).collect();
    fn root(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for i in 0..nx {
        for j in 0..ny {
            if compatible[i][j] {
                let (a, b) = (root(&mut parent, i), root(&mut parent, nx + j));
                parent[a] = b;
            }
        }
    }

    // Per component: either every compatible pair (vertex mode) or the
    // lexicographically smallest one (representative mode), with the
    // degeneracy flag set when the component is not a single point.
    let mut pairs_by_component: std::collections::BTreeMap<usize, Vec<(usize, usize)>> =
        std::collections::BTreeMap::new();
    for i in 0..nx {
        for j in 0..ny {
            if compatible[i][j] {
                let key = root(&mut parent, i);
                pairs_by_component.entry(key).or_default().push((i, j));
            }
        }
    }

    let mut result = Vec::new();
    for pairs in pairs_by_component.values() {
        let degenerate = pairs.len() > 1
            || pairs.iter().any(|&(i, j)| {
                underdetermined.contains(&(
                    x_strategies[i].probs().to_vec(),
                    y_strategies[j].probs().to_vec(),
                ))
            });
        let selected: Vec<(usize, usize)> = if all_vertices {
            pairs.clone()
        } else {
            let best = pairs
                .iter()
                .min_by(|&&(i1, j1), &&(i2, j2)| {
                    (x_strategies[i1].probs(), y_strategies[j1].probs())
                        .cmp(&(x_strategies[i2].probs(), y_strategies[j2].probs()))
                })
                .expect("non-empty component");
            vec![*best]
        };
        for (i, j) in selected {
            let s1 = x_strategies[i].clone();
            let s2 = y_strategies[j].clone();
            let payoffs = game.expected_utility(&s1, &s2).expect("dimensions match");
            result.push(EquilibriumProfile {
                support1: s1.support(),
                support2: s2.support(),
                s1,
                s2,
                payoffs,
                degenerate,
            });
        }
    }
    result.sort_by(|a, b| (a.s1.probs(), a.s2.probs()).cmp(&(b.s1.probs(), b.s2.probs())));
    result
}

fn solve_support_pair(
    game: &NormalFormGame,
    k1: &[usize],
    k2: &[usize],
    out: &mut Vec<(Vec<Rational>, Vec<Rational>, bool)>,
) {
    let (ys, y_degenerate) = side_solutions(game, k1, k2, Player::Two);
    if ys.is_empty() {
        return;
    }
    let (xs, x_degenerate) = side_solutions(game, k1, k2, Player::One);
    if xs.is_empty() {
        return;
    }
    let degenerate = x_degenerate || y_degenerate;
    for x in &xs {
        let s1 = MixedStrategy::new(Player::One, x.clone()).expect("feasible distribution");
        for y in &ys {
            let s2 = MixedStrategy::new(Player::Two, y.clone()).expect("feasible distribution");
            if verify_equilibrium(game, &s1, &s2).expect("dimensions match") {
                out.push((x.clone(), y.clone(), degenerate));
            }
        }
    }
}

/// Solves one side of a support pair.
///
/// For `side == Player::Two` this finds P2 mixtures `y` with support inside
/// `k2` that make every row of `k1` a best response; the symmetric problem
/// for `side == Player::One` finds P1 mixtures `x` over `k1` making every
/// column of `k2` a best response. Returns the solution vertices (full-length
/// probability vectors) and whether the indifference system was
/// underdetermined.
fn side_solutions(
    game: &NormalFormGame,
    k1: &[usize],
    k2: &[usize],
    side: Player,
) -> (Vec<Vec<Rational>>, bool) {
    // Payoff of the responder's pure strategy `r` against opponent pure `c`.
    let (own, opp, total, payoff): (_, _, _, Box<dyn Fn(usize, usize) -> Rational>) = match side {
        Player::Two => (k2, k1, game.n_cols(), Box::new(|r, c| game.u1(r, c).clone())),
        Player::One => (k1, k2, game.n_rows(), Box::new(|r, c| game.u2(c, r).clone())),
    };
    // `own`: support of the strategy being solved for (unknowns).
    // `opp`: responder strategies that must be indifferent and optimal.
    let responder_rows: Vec<usize> = match side {
        Player::Two => (0..game.n_rows()).collect(),
        Player::One => (0..game.n_cols()).collect(),
    };

    let m = own.len();
    let mut rows = Vec::with_capacity(opp.len());
    let mut rhs = Vec::with_capacity(opp.len());
    for pair in opp.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        rows.push(own.iter().map(|&j| payoff(a, j) - payoff(b, j)).collect::<Vec<_>>());
        rhs.push(Rational::zero());
    }
    rows.push(vec![Rational::one(); m]);
    rhs.push(Rational::one());

    let embed = |compact: &[Rational]| -> Vec<Rational> {
        let mut full = vec![Rational::zero(); total];
        for (slot, value) in own.iter().zip(compact) {
            full[*slot] = value.clone();
        }
        full
    };

    let feasible = |compact: &[Rational]| -> bool {
        if compact.iter().any(|p| p.is_negative()) {
            return false;
        }
        let value: Rational = own.iter().zip(compact).map(|(&j, p)| payoff(opp[0], j) * p).sum();
        responder_rows.iter().all(|&r| {
            if opp.contains(&r) {
                return true;
            }
            let u: Rational = own.iter().zip(compact).map(|(&j, p)| payoff(r, j) * p).sum();
            u <= value
        })
    };

    match solve(&rows, &rhs) {
        Solution::Inconsistent => (Vec::new(), false),
        Solution::Unique(compact) => {
            if feasible(&compact) {
                (vec![embed(&compact)], false)
            } else {
                (Vec::new(), false)
            }
        }
        Solution::Affine { particular, basis } => {
            // The solution set is a polytope in the free parameters; collect
            // its vertices so callers can see the whole component.
            let q = basis.len();
            let mut constraints: Vec<(Vec<Rational>, Rational)> = Vec::new();
            // Coordinate non-negativity: particular_j + (B t)_j >= 0.
            for j in 0..m {
                let coeffs: Vec<Rational> = basis.iter().map(|v| v[j].clone()).collect();
                constraints.push((coeffs, -particular[j].clone()));
            }
            // Best-response conditions: value(t) - u_r(t) >= 0.
            let line = |r: usize| -> (Vec<Rational>, Rational) {
                let base: Rational =
                    own.iter().zip(&particular).map(|(&j, p)| payoff(r, j) * p).sum();
                let coeffs: Vec<Rational> = basis
                    .iter()
                    .map(|v| own.iter().zip(v).map(|(&j, p)| payoff(r, j) * p).sum())
                    .collect();
                (coeffs, base)
            };
            let (value_coeffs, value_base) = line(opp[0]);
            for &r in &responder_rows {
                if opp.contains(&r) {
                    continue;
                }
                let (r_coeffs, r_base) = line(r);
                let coeffs: Vec<Rational> = value_coeffs
                    .iter()
                    .zip(&r_coeffs)
                    .map(|(a, b)| a - b)
                    .collect();
                constraints.push((coeffs, r_base - &value_base));
            }
            let vertices = polytope_vertices(&constraints, q);
            let solutions = vertices
                .into_iter()
                .map(|t| {
                    let mut compact = particular.clone();
                    for (v, w) in basis.iter().zip(&t) {
                        for j in 0..m {
                            compact[j] += &v[j] * w;
                        }
                    }
                    compact
                })
                .filter(|compact| feasible(compact))
                .map(|compact| embed(&compact))
                .collect();
            (solutions, true)
        }
    }
}

/// Vertices of `{t : coeffs . t >= bound}` in `q`-dimensional space by
/// combinatorial enumeration. Callers guarantee boundedness.
fn polytope_vertices(constraints: &[(Vec<Rational>, Rational)], q: usize) -> Vec<Vec<Rational>> {
    if q == 0 {
        return vec![Vec::new()];
    }
    let n = constraints.len();
    if n < q {
        return Vec::new();
    }
    let mut vertices = Vec::new();
    let mut subset = vec![0usize; q];
    enumerate_subsets(n, q, 0, 0, &mut subset, &mut |chosen: &[usize]| {
        let rows: Vec<Vec<Rational>> = chosen.iter().map(|&i| constraints[i].0.clone()).collect();
        let rhs: Vec<Rational> = chosen.iter().map(|&i| constraints[i].1.clone()).collect();
        if let Solution::Unique(t) = solve(&rows, &rhs) {
            if constraints.iter().all(|(c, b)| dot(c, &t) >= *b) {
                vertices.push(t);
            }
        }
    });
    vertices.sort();
    vertices.dedup();
    vertices
}

fn enumerate_subsets(
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
        enumerate_subsets(n, k, depth + 1, i + 1, subset, visit);
    }
}

fn nonempty_subsets(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=max_size.min(n) {
        let mut subset = vec![0usize; size];
        enumerate_subsets(n, size, 0, 0, &mut subset, &mut |s: &[usize]| {
            out.push(s.to_vec());
        });
    }
    out
}

/// Outcome of a leader commitment: P2's committed mixture, P1's reply, and
/// the resulting payoffs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackelbergOutcome {
    pub leader_strategy: MixedStrategy,
    pub follower_reply: usize,
    pub payoffs: PayoffPair,
}

/// The Stackelberg equilibrium with P2 as leader and a follower that breaks
/// ties in the leader's favour.
///
/// For each P1 reply the leader's best commitment inducing that reply sits at
/// a vertex of the reply's best-response region, so scanning all region
/// vertices finds the exact optimum. Ties break towards the lowest reply
/// index, then the lexicographically smallest vertex.
pub fn stackelberg(game: &NormalFormGame) -> StackelbergOutcome {
    let mut best: Option<StackelbergOutcome> = None;
    for region in decompose_simplex(game) {
        for vertex in &region.vertices {
            let u2 = dot(
                &(0..game.n_cols()).map(|c| game.u2(region.s1, c).clone()).collect::<Vec<_>>(),
                vertex.probs(),
            );
            let better = match &best {
                None => true,
                Some(current) => u2 > current.payoffs.u2,
            };
            if better {
                let u1 = dot(
                    &(0..game.n_cols()).map(|c| game.u1(region.s1, c).clone()).collect::<Vec<_>>(),
                    vertex.probs(),
                );
                best = Some(StackelbergOutcome {
                    leader_strategy: vertex.clone(),
                    follower_reply: region.s1,
                    payoffs: PayoffPair::new(u1, u2),
                });
            }
        }
    }
    best.expect("simplex decomposition is non-empty")
}

/// The best pure commitment for P2: the column maximizing
/// `u2(fbr(col), col)`, ties to the lowest column index. The recorded reply
/// is the lowest-index favourable best response.
pub fn pure_commitment(game: &NormalFormGame) -> StackelbergOutcome {
    let mut best: Option<StackelbergOutcome> = None;
    for col in 0..game.n_cols() {
        let commitment = MixedStrategy::pure(Player::Two, col, game.n_cols());
        let payoffs = game.best_response_payoffs(&commitment).expect("valid column");
        let reply = game.favourable_best_responses(&commitment).expect("valid column")[0];
        let better = match &best {
            None => true,
            Some(current) => payoffs.u2 > current.payoffs.u2,
        };
        if better {
            best = Some(StackelbergOutcome { leader_strategy: commitment, follower_reply: reply, payoffs });
        }
    }
    best.expect("non-empty column set")
}

/// `true` iff every optimal pure commitment strictly Pareto-improves every
/// Nash equilibrium payoff (vertices of degenerate components included).
pub fn is_generalised_trust_game(game: &NormalFormGame) -> bool {
    let best_value = (0..game.n_cols())
        .map(|col| {
            let commitment = MixedStrategy::pure(Player::Two, col, game.n_cols());
            game.best_response_payoffs(&commitment).expect("valid column")
        })
        .max_by(|a, b| a.u2.cmp(&b.u2))
        .expect("non-empty column set");
    let optimal_outcomes: Vec<PayoffPair> = (0..game.n_cols())
        .map(|col| {
            let commitment = MixedStrategy::pure(Player::Two, col, game.n_cols());
            game.best_response_payoffs(&commitment).expect("valid column")
        })
        .filter(|p| p.u2 == best_value.u2)
        .collect();
    let equilibria = enumerate_nash(game);
    optimal_outcomes.iter().all(|outcome| {
        equilibria
            .iter()
            .all(|ne| crate::game::pareto_strictly_improves(outcome, &ne.payoffs))
    })
}
