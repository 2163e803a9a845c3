//! An exact-arithmetic engine for two-player normal-form games in which one
//! player can pay to simulate the other before acting.
//!
//! The crate covers the full pipeline:
//!
//! - exact rationals ([`Rational`]) and games over them ([`NormalFormGame`],
//!   [`MixedStrategy`]),
//! - best-response structure and the decomposition of P2's strategy simplex
//!   into best-response regions with exact vertices ([`geometry`]),
//! - Nash enumeration, Stackelberg commitment with P2 as leader, and
//!   pure-commitment equilibria ([`equilibrium`]),
//! - pure- and mixed-strategy simulation games and the reduction of the
//!   infinite mixed-simulation game to a finite meta-game ([`simulation`]),
//! - constructors and closed-form analyzers for the graded-trust,
//!   coordination, trust-and-coordination, password-guessing and
//!   hardness-gadget families ([`classes`]),
//! - a JSON document format and a CLI (the `simgame` binary) on top
//!   ([`io`]).
//!
//! Everything on the solver path is exact: no floating point is involved in
//! any equilibrium or region computation, so argmax sets and equilibrium
//! memberships are decided correctly rather than approximately.
//!
//! ```
//! use sim_games::{catalog, equilibrium};
//!
//! // The trust game's unique equilibrium is mutual distrust...
//! let tg = catalog::trust_game();
//! let nash = equilibrium::enumerate_nash(&tg);
//! assert_eq!(nash.len(), 1);
//! assert_eq!(nash[0].payoffs, sim_games::PayoffPair::from_integers(0, 0));
//!
//! // ...but a leader commitment earns P2 a third of the pie.
//! let se = equilibrium::stackelberg(&tg);
//! assert_eq!(se.payoffs.u2, sim_games::Rational::new(100, 3));
//! ```

pub mod catalog;
pub mod classes;
pub mod equilibrium;
pub mod game;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod rational;
pub mod simulation;

mod book;

pub use game::{
    pareto_strictly_improves, GameError, MixedStrategy, NormalFormGame, PayoffPair, Player,
};
pub use rational::{ParseRationalError, Rational};
