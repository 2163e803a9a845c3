//! Best-response regions of P2's strategy simplex and their exact vertices.
//!
//! For each P1 pure strategy `s1`, the set of P2 mixed strategies against
//! which `s1` is a best response is a closed convex polytope: the simplex cut
//! by the payoff-comparison halfspaces `u1(s1, x) >= u1(t, x)`. These
//! polytopes cover the simplex, and their vertices are exactly the columns
//! the finite simulation meta-game needs.
//!
//! Vertex enumeration is deliberately combinatorial: every choice of
//! `dim - 1` constraints is intersected with the simplex hyperplane and the
//! resulting square rational system solved exactly. At the scale this crate
//! targets (single-digit strategy counts) that is fast, and every kept vertex
//! is certified feasible against the full system.

use rayon::prelude::*;

use crate::game::{MixedStrategy, NormalFormGame, Player};
use crate::linalg::{dot, solve, Solution};
use crate::rational::Rational;

/// One linear constraint `coeffs . x >= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
}

impl Inequality {
    pub fn holds_at(&self, x: &[Rational]) -> bool {
        dot(&self.coeffs, x) >= self.bound
    }

    pub fn tight_at(&self, x: &[Rational]) -> bool {
        dot(&self.coeffs, x) == self.bound
    }
}

/// An H-representation of a slice of the probability simplex: a list of
/// `coeffs . x >= bound` constraints (always including `x_j >= 0` for every
/// coordinate) together with the implicit equality `sum x = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfspaceSystem {
    dimension: usize,
    inequalities: Vec<Inequality>,
}

impl HalfspaceSystem {
    /// Builds a system over a `dimension`-coordinate simplex from the given
    /// extra inequalities; non-negativity constraints are appended
    /// automatically.
    pub fn simplex_slice(dimension: usize, mut inequalities: Vec<Inequality>) -> Self {
        assert!(dimension > 0);
        for ineq in &inequalities {
            assert_eq!(ineq.coeffs.len(), dimension, "inequality dimension mismatch");
        }
        for j in 0..dimension {
            let mut coeffs = vec![Rational::zero(); dimension];
            coeffs[j] = Rational::one();
            inequalities.push(Inequality { coeffs, bound: Rational::zero() });
        }
        HalfspaceSystem { dimension, inequalities }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    /// Point membership: all inequalities hold and coordinates sum to one.
    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dimension
            && x.iter().sum::<Rational>() == Rational::one()
            && self.inequalities.iter().all(|ineq| ineq.holds_at(x))
    }
}

/// H-representation of the closure of `br^-1(s1)`: the set of P2 mixed
/// strategies to which P1's pure strategy `s1` is a best response.
pub fn br_region_system(game: &NormalFormGame, s1: usize) -> HalfspaceSystem {
    assert!(s1 < game.n_rows(), "row index out of range");
    let dim = game.n_cols();
    let mut inequalities = Vec::with_capacity(game.n_rows() - 1);
    for t in 0..game.n_rows() {
        if t == s1 {
            continue;
        }
        // u1(s1, x) - u1(t, x) >= 0
        let coeffs = (0..dim).map(|c| game.u1(s1, c) - game.u1(t, c)).collect();
        inequalities.push(Inequality { coeffs, bound: Rational::zero() });
    }
    HalfspaceSystem::simplex_slice(dim, inequalities)
}

/// Exact, deduplicated, lexicographically sorted vertex set of the polytope.
///
/// Each subset of `dimension - 1` inequalities is turned into equalities,
/// solved together with `sum x = 1`, and kept when the solution is unique and
/// feasible. Rank-deficient subsets are skipped silently.
pub fn enumerate_vertices(system: &HalfspaceSystem) -> Vec<MixedStrategy> {
    let dim = system.dimension();
    let one_row = vec![Rational::one(); dim];

    if dim == 1 {
        let x = vec![Rational::one()];
        if system.inequalities().iter().all(|i| i.holds_at(&x)) {
            return vec![MixedStrategy::new(Player::Two, x).unwrap()];
        }
        return Vec::new();
    }

    let subsets = k_subsets(system.inequalities().len(), dim - 1);
    let mut vertices: Vec<Vec<Rational>> = subsets
        .par_iter()
        .with_min_len(64)
        .filter_map(|subset| {
            let mut rows = Vec::with_capacity(dim);
            let mut rhs = Vec::with_capacity(dim);
            for &i in subset {
                rows.push(system.inequalities()[i].coeffs.clone());
                rhs.push(system.inequalities()[i].bound.clone());
            }
            rows.push(one_row.clone());
            rhs.push(Rational::one());
            match solve(&rows, &rhs) {
                Solution::Unique(x) => {
                    if system.inequalities().iter().all(|ineq| ineq.holds_at(&x)) {
                        Some(x)
                    } else {
                        None
                    }
                }
                _ => None,
            }
        })
        .collect();

    vertices.sort();
    vertices.dedup();
    vertices
        .into_iter()
        .map(|x| MixedStrategy::new(Player::Two, x).expect("feasible vertex is a distribution"))
        .collect()
}

/// All `k`-element subsets of `0..n` in lexicographic order.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn recurse(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let remaining = k - current.len();
        for i in start..=(n - remaining) {
            current.push(i);
            recurse(n, k, i + 1, current, out);
            current.pop();
        }
    }
    if k <= n {
        recurse(n, k, 0, &mut current, &mut out);
    }
    out
}

/// The region of P2's simplex on which a given P1 pure strategy is a best
/// response, with its exact vertex set.
#[derive(Debug, Clone)]
pub struct BestResponseRegion {
    pub s1: usize,
    pub system: HalfspaceSystem,
    pub vertices: Vec<MixedStrategy>,
}

/// Splits P2's simplex into best-response regions, one per P1 pure strategy
/// with a non-empty region; empty regions are omitted. The returned regions
/// cover the simplex.
pub fn decompose_simplex(game: &NormalFormGame) -> Vec<BestResponseRegion> {
    (0..game.n_rows())
        .map(|s1| {
            let system = br_region_system(game, s1);
            let vertices = enumerate_vertices(&system);
            BestResponseRegion { s1, system, vertices }
        })
        .filter(|region| !region.vertices.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ptg, tg};
    use crate::rat;

    fn vertex_defections(region: &BestResponseRegion, d_col: usize) -> Vec<Rational> {
        region.vertices.iter().map(|v| v.prob(d_col).clone()).collect()
    }

    #[test]
    fn trust_game_region_of_trust_is_low_defection() {
        let g = tg();
        let system = br_region_system(&g, 0);
        let vertices = enumerate_vertices(&system);
        // Endpoints of the interval [0, 1/6] in defection probability,
        // in lexicographic vertex order (the tipping point sorts first).
        let defections: Vec<Rational> = vertices.iter().map(|v| v.prob(1).clone()).collect();
        assert_eq!(defections, vec![rat!(1 / 6), rat!(0)]);
    }

    #[test]
    fn trust_game_region_of_walk_out_is_complementary() {
        let g = tg();
        let vertices = enumerate_vertices(&br_region_system(&g, 1));
        let defections: Vec<Rational> = vertices.iter().map(|v| v.prob(1).clone()).collect();
        assert_eq!(defections, vec![rat!(1), rat!(1 / 6)]);
    }

    #[test]
    fn full_simplex_has_corner_vertices() {
        // A dominant row's region is the whole simplex.
        let g = NormalFormGame::from_integers(
            &["top", "bottom"],
            &["l", "r"],
            &[&[5, 5], &[0, 0]],
            &[&[0, 0], &[0, 0]],
        )
        .unwrap();
        let vertices = enumerate_vertices(&br_region_system(&g, 0));
        assert_eq!(vertices.len(), 2);
        assert_eq!(vertices[0], MixedStrategy::pure(Player::Two, 1, 2));
        assert_eq!(vertices[1], MixedStrategy::pure(Player::Two, 0, 2));
    }

    #[test]
    fn ptg_partial_trust_region_endpoints() {
        let g = ptg();
        let region = BestResponseRegion {
            s1: 1,
            system: br_region_system(&g, 1),
            vertices: enumerate_vertices(&br_region_system(&g, 1)),
        };
        assert_eq!(vertex_defections(&region, 1), vec![rat!(2 / 7), rat!(2 / 17)]);
    }

    #[test]
    fn ptg_decomposition_has_three_regions_with_shared_breakpoints() {
        let g = ptg();
        let regions = decompose_simplex(&g);
        assert_eq!(regions.len(), 3);
        assert_eq!(regions[0].s1, 0);
        assert_eq!(vertex_defections(&regions[0], 1), vec![rat!(2 / 17), rat!(0)]);
        assert_eq!(vertex_defections(&regions[1], 1), vec![rat!(2 / 7), rat!(2 / 17)]);
        assert_eq!(vertex_defections(&regions[2], 1), vec![rat!(1), rat!(2 / 7)]);
    }

    #[test]
    fn one_row_game_region_covers_whole_simplex() {
        let g = NormalFormGame::from_integers(
            &["only"],
            &["a", "b", "c"],
            &[&[1, 2, 3]],
            &[&[0, 0, 0]],
        )
        .unwrap();
        let regions = decompose_simplex(&g);
        assert_eq!(regions.len(), 1);
        assert_eq!(regions[0].vertices.len(), 3);
    }

    #[test]
    fn adjacent_regions_share_exactly_one_vertex_in_two_column_games() {
        for g in [tg(), ptg(), crate::catalog::three_level_trust_game()] {
            let regions = decompose_simplex(&g);
            for pair in regions.windows(2) {
                let shared: Vec<_> = pair[0]
                    .vertices
                    .iter()
                    .filter(|v| pair[1].vertices.contains(v))
                    .collect();
                assert_eq!(shared.len(), 1, "adjacent intervals share one endpoint");
            }
        }
    }

    #[test]
    fn vertices_reproduce_themselves_from_their_tight_constraints() {
        let g = ptg();
        for region in decompose_simplex(&g) {
            for vertex in &region.vertices {
                let tight: Vec<Inequality> = region
                    .system
                    .inequalities()
                    .iter()
                    .filter(|i| i.tight_at(vertex.probs()))
                    .cloned()
                    .collect();
                let rebuilt = HalfspaceSystem {
                    dimension: region.system.dimension(),
                    inequalities: tight,
                };
                assert!(enumerate_vertices(&rebuilt).contains(vertex));
            }
        }
    }

    #[test]
    fn vertex_count_stays_under_binomial_bound() {
        let g = crate::catalog::three_level_trust_game();
        let bound = binomial(2 * g.n_cols(), g.n_cols() - 1);
        for region in decompose_simplex(&g) {
            assert!(region.vertices.len() <= bound);
        }
    }

    fn binomial(n: usize, k: usize) -> usize {
        let mut result = 1usize;
        for i in 0..k {
            result = result * (n - i) / (i + 1);
        }
        result
    }
}
