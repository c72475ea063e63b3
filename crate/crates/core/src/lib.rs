//! Exact solver for matching markets with middlemen.
//!
//! Buyers and sellers trade one unit each, either directly or through a
//! middleman, and a middleman may mediate any number of trades. The crate
//! computes optimal matchings and coalition worths, tests and explores the
//! core of the induced cooperative game, and builds and verifies competitive
//! equilibrium prices. All arithmetic is exact ([`Rat`]).
//!
//! ```
//! use middlemen::{fixtures, matching::{coalition_worth, Coalition}};
//!
//! let market = fixtures::two_broker_market();
//! let worth = coalition_worth(&market, &Coalition::grand(&market));
//! assert_eq!(worth.to_string(), "12");
//! ```

pub mod assignment;
pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod lp;
pub mod matching;
pub mod model;
pub mod polytope;
pub mod rational;
pub mod solution;

pub use error::{Error, Result};
pub use matching::{BasicCoalition, Coalition, Matching, TwoSidedMatching};
pub use model::{AgentId, DetailedMarket, Market, Mediator, ReducedMarket, Side};
pub use rational::Rat;
pub use solution::{CheckMode, CoreCertificate, PayoffVector};
