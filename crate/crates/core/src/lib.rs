//! Short combinatorial games compared by set equality.
//!
//! Games are hash-consed into a [`GameStore`], so equality of games as sets
//! reduces to equality of [`GameId`] handles. On top of the store sit
//! negation, disjunctive sum and formal birthday ([`game`]), the finite tiers
//! `G̃_0..G̃_2` and random sampling ([`universe`]), brace notation
//! ([`notation`]) and executable checks of the algebraic laws ([`laws`]).

pub mod game;
pub mod laws;
pub mod notation;
pub mod universe;

pub use game::{GameData, GameError, GameId, GameStore, SumRule};
pub use laws::{Suite, SuiteConfig, VerificationReport};
pub use notation::{evaluate, parse, print_game, Expr, ParseError};
pub use universe::{enumerate_tier, sample_games, SampleSpec, Tier};
