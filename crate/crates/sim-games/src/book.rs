//! The guide book's chapters, included as doc modules so that every code
//! fence in the book runs under `cargo test --doc` and stays in sync with
//! the crate. (mdBook itself cannot link the library when testing snippets;
//! this is the usual workaround.)

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/exact-arithmetic.md")]
pub mod exact_arithmetic {}

#[doc = include_str!("../../../book/src/games-and-best-responses.md")]
pub mod games_and_best_responses {}

#[doc = include_str!("../../../book/src/regions-and-vertices.md")]
pub mod regions_and_vertices {}

#[doc = include_str!("../../../book/src/nash-and-commitment.md")]
pub mod nash_and_commitment {}

#[doc = include_str!("../../../book/src/simulation-games.md")]
pub mod simulation_games {}

#[doc = include_str!("../../../book/src/partial-trust.md")]
pub mod partial_trust {}

#[doc = include_str!("../../../book/src/coordination-and-trust.md")]
pub mod coordination_and_trust {}

#[doc = include_str!("../../../book/src/passwords-and-privacy.md")]
pub mod passwords_and_privacy {}

#[doc = include_str!("../../../book/src/hardness-gadget.md")]
pub mod hardness_gadget {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
