//! Canonical forms, exhaustive search, playouts, an exact solver and
//! brute-force oracles.

pub mod agreement;
pub mod canon;
pub mod oracle;
pub mod playout;
pub mod report;
pub mod search;
pub mod solve;

pub use agreement::{oracle_agreement, random_position, AgreementReport};
pub use canon::{canonical_form, canonical_form_with, canonical_key, CanonKey, Colored};
pub use playout::{play_game, playout_suite, reply_violations, Adversary};
pub use search::{
    candidate_moves, exhaustive_search, exhaustive_verify, minimize_counterexample, SearchOptions,
    SearchResult,
};
pub use solve::{exact_solve, exact_solve_capped, GameValue, SolveError, Solver, DEFAULT_EDGE_CAP};
pub use report::{Outcome, PlayoutStats, VerifyReport};
