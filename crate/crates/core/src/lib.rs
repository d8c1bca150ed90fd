//! Strong Ramsey games on k-uniform hypergraphs: a game engine, the
//! drawing strategies for the second player, test adversaries, and an
//! adversarial verifier.

pub mod game;
pub mod hypercore;
pub mod strategy;
pub mod verify;
