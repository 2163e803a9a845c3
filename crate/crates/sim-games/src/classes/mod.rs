//! Constructors, validators and closed-form equilibrium analyzers for the
//! specific game families the engine ships with: graded-trust games,
//! coordination games, trust-and-coordination games, password guessing, and
//! the complete-bipartite-subgraph hardness gadget.

pub mod coordination;
pub mod gadget;
pub mod gptg;
pub mod observed;
pub mod password;
pub mod tcg;
