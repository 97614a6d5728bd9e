//! ROUGE-SU4 with multi-reference maximum, plus batch evaluation.

mod evaluate;
mod rouge;
mod tokenize;

pub use evaluate::{evaluate_run, write_csv, QuestionScore, RunEvaluation, CSV_HEADER};
pub use rouge::{
    rouge_su, rouge_su4, rouge_su4_multi, rouge_su4_with, skip_bigrams, unit_counts, RougeOptions, RougeScore,
    UnitCounts, DEFAULT_SKIP_DISTANCE,
};
pub use tokenize::{tokenize, tokenize_with, Token};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("at least one reference is required")]
    NoReferences,
    #[error("answers for ids not present in the gold set: {0:?}")]
    UnknownIds(Vec<String>),
    #[error("gold questions without any ideal answer cannot be scored: {0:?}")]
    NoGoldenAnswers(Vec<String>),
}
