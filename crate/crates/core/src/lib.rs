//! Prompted query-focused summarisation of biomedical questions.
//!
//! The crate loads BioASQ Task B question sets, renders the five prompt
//! variants (zero/few-shot, with or without snippet or extract context),
//! obtains answers from a completion backend and scores them with
//! ROUGE-SU4 F1 against the golden ideal answers.
//!
//! Scoring code is generic over a [`Scalar`]; the aliases below fix the
//! scalar for the common cases.

pub mod dataset;
pub mod extractive;
pub mod harness;
pub mod llm_client;
pub mod metrics;
pub mod prompts;
pub mod scalar;

pub use dataset::{Question, QuestionSet, QuestionType, Snippet};
pub use prompts::{Prompt, PromptStrategy};
pub use scalar::Scalar;

use num_rational::Rational64;

/// ROUGE score in double precision; what reports and the CLI use.
pub type RougeScore = metrics::RougeScore<f64>;
/// Single-precision ROUGE score.
pub type RougeScore32 = metrics::RougeScore<f32>;
/// ROUGE score as exact ratios of unit counts.
pub type ExactRougeScore = metrics::RougeScore<Rational64>;

pub type ExtractConfig = extractive::ExtractConfig<f64>;
pub type LexicalScorer = extractive::LexicalScorer<f64>;
pub type LexicalScorer32 = extractive::LexicalScorer<f32>;
