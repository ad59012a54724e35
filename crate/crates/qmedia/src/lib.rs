//! Computing with quasi-median graphs arising from graph products of finite
//! groups and from right-angled graphs of groups.
//!
//! The crate is organised around seven subsystems:
//!
//! * [`groups`] — validated multiplication-table groups, direct sums,
//!   permutation closures, free-action tests.
//! * [`words`] — the graph-product word calculus: elementary moves, canonical
//!   (heap) normal forms, tails, parabolic membership.
//! * [`qmgraph`] — finite quasi-median graph engine: Cayley balls, axiom
//!   checking, hyperplanes/sectors/carriers, gates, cliques, path moves, and
//!   exact algebraic hyperplane descriptors for Cayley graphs.
//! * [`action`] — group actions on balls: orbits, stabilisers, sector actions,
//!   specialness verdicts, rotative stabilisers, fundamental domains.
//! * [`embed`] — the embedding pipeline: orbit-hyperplane graph, vertex groups,
//!   sector labelling, the maps Phi and phi, verification, and
//!   virtual-retract certificates.
//! * [`ragg`] — right-angled graphs of groups: groupoid normal forms, path
//!   morphisms, the specialness criterion, the Psi graph, covers, and the
//!   groupoid Cayley ball.
//! * [`cli`] — the `qmedia` command-line front end.
//!
//! [`oracle`] holds brute-force reference implementations (elementary-move
//! closures, shuffle classes) used by the test suites as independent checks;
//! they deliberately share no code with the production paths they verify.

pub mod action;
pub mod budget;
pub mod cli;
pub mod embed;
pub mod error;
pub mod groups;
pub mod io;
pub mod oracle;
pub mod qmgraph;
pub mod ragg;
pub mod words;

pub use budget::Budget;
pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
