//! The complete-bipartite-subgraph gadget: a game built from a bipartite
//! graph and a parameter `k` whose high-payoff equilibria exist exactly when
//! the graph contains a balanced complete bipartite subgraph of order `k`.
//!
//! The construction glues three subgames along the diagonal of a
//! coordination frame: a graph game over the vertices plus an opt-out, and
//! two copies of a small trust game. Playing into different subgames pays
//! (0, 0).

use std::collections::BTreeSet;

use crate::game::NormalFormGame;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge ({a}, {b}) out of range for partite sets of size {a_count} and {b_count}")]
    EdgeOutOfRange { a: usize, b: usize, a_count: usize, b_count: usize },
    #[error("both partite sets must be non-empty")]
    EmptyPartiteSet,
    #[error("the subgraph parameter k must be at least 1, got {got}")]
    BadParameter { got: usize },
}

/// A bipartite graph with partite sets `A` and `B` (0-indexed) and the
/// subgraph-order parameter `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    a_count: usize,
    b_count: usize,
    edges: BTreeSet<(usize, usize)>,
    k: usize,
}

impl BipartiteGraph {
    pub fn new(
        a_count: usize,
        b_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        k: usize,
    ) -> Result<Self, GraphError> {
        if a_count == 0 || b_count == 0 {
            return Err(GraphError::EmptyPartiteSet);
        }
        if k == 0 {
            return Err(GraphError::BadParameter { got: 0 });
        }
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        for &(a, b) in &edges {
            if a >= a_count || b >= b_count {
                return Err(GraphError::EdgeOutOfRange { a, b, a_count, b_count });
            }
        }
        Ok(BipartiteGraph { a_count, b_count, edges, k })
    }

    pub fn complete(a_count: usize, b_count: usize, k: usize) -> Result<Self, GraphError> {
        let edges = (0..a_count).flat_map(|a| (0..b_count).map(move |b| (a, b)));
        BipartiteGraph::new(a_count, b_count, edges, k)
    }

    pub fn a_count(&self) -> usize {
        self.a_count
    }

    pub fn b_count(&self) -> usize {
        self.b_count
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    /// Brute-force search for a complete bipartite subgraph with `k`
    /// vertices in each partite set.
    pub fn has_balanced_complete_subgraph(&self) -> bool {
        let k = self.k;
        if k > self.a_count || k > self.b_count {
            return false;
        }
        let a_sets = subsets_of_size(self.a_count, k);
        let b_sets = subsets_of_size(self.b_count, k);
        a_sets.iter().any(|a_set| {
            b_sets.iter().any(|b_set| {
                a_set.iter().all(|&a| b_set.iter().all(|&b| self.has_edge(a, b)))
            })
        })
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn recurse(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=(n - need) {
            cur.push(i);
            recurse(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        recurse(n, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Builds the gadget game for a graph.
///
/// Within the graph subgame, both players' actions are the vertices of both
/// partite sets plus an opt-out: adjacent own-partite picks pay (1, 1), a
/// player caught copying the opponent's own vertex swings `k` to the
/// catcher, and the opt-out beats any non-opt-out action by exactly one.
/// Two trust-game copies (T/C = (1,1), T/D = (-1,2), WO/C = (1,-1),
/// WO/D = (0,0)) are glued block-diagonally.
pub fn hardness_gadget(graph: &BipartiteGraph) -> NormalFormGame {
    let k = Rational::from(graph.k as i64);
    let a_count = graph.a_count;
    let b_count = graph.b_count;
    let graph_actions = a_count + b_count + 1; // vertices plus opt-out
    let oo = a_count + b_count;
    let total = graph_actions + 4; // plus two trust-game copies

    let mut labels: Vec<String> = Vec::with_capacity(total);
    labels.extend((1..=a_count).map(|i| format!("a{i}")));
    labels.extend((1..=b_count).map(|i| format!("b{i}")));
    labels.push("OO".to_string());
    let mut s1_labels = labels.clone();
    s1_labels.extend(["T1", "WO1", "T2", "WO2"].map(String::from));
    let mut s2_labels = labels;
    s2_labels.extend(["C1", "D1", "C2", "D2"].map(String::from));

    let is_a = |i: usize| i < a_count;
    let is_b = |i: usize| (a_count..a_count + b_count).contains(&i);
    let b_index = |i: usize| i - a_count;

    let mut u1 = vec![vec![Rational::zero(); total]; total];
    let mut u2 = vec![vec![Rational::zero(); total]; total];

    // Graph subgame block.
    for row in 0..graph_actions {
        for col in 0..graph_actions {
            let cell: (Rational, Rational) = if row == oo && col == oo {
                (Rational::zero(), Rational::zero())
            } else if row == oo {
                (Rational::one(), -Rational::one())
            } else if col == oo {
                (-Rational::one(), Rational::one())
            } else if is_a(row) && is_b(col) {
                if graph.has_edge(row, b_index(col)) {
                    (Rational::one(), Rational::one())
                } else {
                    (Rational::zero(), Rational::zero())
                }
            } else if is_a(row) && is_a(col) {
                if row == col {
                    (-k.clone(), k.clone())
                } else {
                    (Rational::zero(), Rational::zero())
                }
            } else if is_b(row) && is_b(col) {
                if row == col {
                    (k.clone(), -k.clone())
                } else {
                    (Rational::zero(), Rational::zero())
                }
            } else {
                // b-vertex row against a-vertex column
                (Rational::zero(), Rational::zero())
            };
            u1[row][col] = cell.0;
            u2[row][col] = cell.1;
        }
    }

    // Two trust-game copies on the diagonal.
    let trust = [
        [(1i64, 1i64), (-1, 2)],
        [(1, -1), (0, 0)],
    ];
    for copy in 0..2 {
        let row0 = graph_actions + 2 * copy;
        let col0 = graph_actions + 2 * copy;
        for (dr, row) in trust.iter().enumerate() {
            for (dc, &(a, b)) in row.iter().enumerate() {
                u1[row0 + dr][col0 + dc] = Rational::from(a);
                u2[row0 + dr][col0 + dc] = Rational::from(b);
            }
        }
    }

    NormalFormGame::new(s1_labels, s2_labels, u1, u2).expect("consistent construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::enumerate_nash;
    use crate::game::{MixedStrategy, PayoffPair, Player};
    use crate::rational::Rational;

    fn disjoint_edges() -> BipartiteGraph {
        BipartiteGraph::new(2, 2, [(0, 0), (1, 1)], 2).unwrap()
    }

    #[test]
    fn subgraph_search_on_tiny_graphs() {
        assert!(BipartiteGraph::complete(2, 2, 2).unwrap().has_balanced_complete_subgraph());
        assert!(!disjoint_edges().has_balanced_complete_subgraph());
        assert!(BipartiteGraph::complete(3, 2, 2).unwrap().has_balanced_complete_subgraph());
        assert!(!BipartiteGraph::complete(1, 3, 2).unwrap().has_balanced_complete_subgraph());
    }

    #[test]
    fn gadget_shape_and_cells() {
        let g = hardness_gadget(&BipartiteGraph::complete(2, 2, 2).unwrap());
        assert_eq!(g.n_rows(), 9);
        assert_eq!(g.n_cols(), 9);
        // Edge cell, self-match cells, opt-out cells.
        assert_eq!(g.payoff(0, 2), PayoffPair::from_integers(1, 1)); // a1 vs b1
        assert_eq!(g.payoff(0, 0), PayoffPair::from_integers(-2, 2)); // a1 vs a1
        assert_eq!(g.payoff(2, 2), PayoffPair::from_integers(2, -2)); // b1 vs b1
        assert_eq!(g.payoff(4, 0), PayoffPair::from_integers(1, -1)); // OO vs a1
        assert_eq!(g.payoff(0, 4), PayoffPair::from_integers(-1, 1)); // a1 vs OO
        assert_eq!(g.payoff(4, 4), PayoffPair::from_integers(0, 0));
        // Trust copies and the off-block zeros.
        assert_eq!(g.payoff(5, 5), PayoffPair::from_integers(1, 1)); // T1 vs C1
        assert_eq!(g.payoff(5, 6), PayoffPair::from_integers(-1, 2)); // T1 vs D1
        assert_eq!(g.payoff(7, 8), PayoffPair::from_integers(-1, 2)); // T2 vs D2
        assert_eq!(g.payoff(5, 8), PayoffPair::from_integers(0, 0));
    }

    #[test]
    fn complete_graph_gadget_has_the_cooperative_equilibrium() {
        let game = hardness_gadget(&BipartiteGraph::complete(2, 2, 2).unwrap());
        // Uniform mixes over own partite sets pay (1, 1).
        let mut p1 = vec![Rational::zero(); 9];
        p1[0] = Rational::new(1, 2);
        p1[1] = Rational::new(1, 2);
        let s1 = MixedStrategy::new(Player::One, p1).unwrap();
        let mut p2 = vec![Rational::zero(); 9];
        p2[2] = Rational::new(1, 2);
        p2[3] = Rational::new(1, 2);
        let s2 = MixedStrategy::new(Player::Two, p2).unwrap();
        assert!(crate::equilibrium::verify_equilibrium(&game, &s1, &s2).unwrap());
        assert_eq!(
            game.expected_utility(&s1, &s2).unwrap(),
            PayoffPair::from_integers(1, 1)
        );
    }

    #[test]
    fn disjoint_edge_gadget_has_no_profitable_equilibrium() {
        let game = hardness_gadget(&disjoint_edges());
        for ne in enumerate_nash(&game) {
            assert!(!ne.payoffs.u1.is_positive(), "found {:?}", ne.payoffs);
            assert!(!ne.payoffs.u2.is_positive(), "found {:?}", ne.payoffs);
        }
    }
}
