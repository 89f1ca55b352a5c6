//! Measurement bench for minimax tree search.
//!
//! The crate bundles three small deterministic games, a family of
//! alpha-beta engines sharing one transposition table, and measurement
//! procedures that compare what a search actually visited against the
//! smallest tree (or graph) that proves the minimax value. A CLI harness
//! drives experiment sweeps and emits deterministic CSV.

pub mod etc;
pub mod game;
pub mod harness;
pub mod minimal_graphs;
pub mod ordering;
pub mod rng;
pub mod score;
pub mod search;
pub mod ttable;
