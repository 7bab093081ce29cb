//! Part-of-speech tagging toolkit.
//!
//! Three taggers share one corpus model and one evaluation harness:
//!
//! * [`crf`]: a first-order linear-chain conditional random field over
//!   sparse morphological and contextual features, trained by L-BFGS with
//!   orthant-wise L1 handling ([`optimize`]).
//! * [`tnt`]: a trigram hidden Markov model with deleted interpolation,
//!   suffix-based unknown-word handling and beam Viterbi decoding.
//! * [`brill`]: transformation-based learning of contextual rewrite rules on
//!   top of a most-frequent-tag baseline.
//!
//! [`eval`] scores taggers with accuracy split over known and unknown
//! words, per-tag precision/recall/F1 and confusion matrices, and runs
//! k-fold cross-validation and regularization grid search.

pub mod brill;
pub mod corpus;
pub mod crf;
pub mod error;
pub mod eval;
pub mod features;
pub mod modelfile;
pub mod optimize;
pub mod tagger;
pub mod tnt;

pub use error::{Error, Result};
