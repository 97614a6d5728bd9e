//! Experiment orchestration: prompts in, answers and reports out.

pub mod cli;
mod config;
mod report;
mod run;

pub use config::{BackendKind, RunConfig};
pub use report::{emit_report, render_table, report_csv, ReportFormat, RunRecord, RunReport};
pub use run::{read_answers_jsonl, run_experiment, run_with_backend, AnswerRecord};

use std::path::PathBuf;

use thiserror::Error;

use crate::dataset::DatasetError;
use crate::llm_client::BackendError;
use crate::metrics::MetricsError;
use crate::prompts::PromptError;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid run config: {0}")]
    Config(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Answers {
        path: PathBuf,
        line: usize,
        message: String,
    },
}
