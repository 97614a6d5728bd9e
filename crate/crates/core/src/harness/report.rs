use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::QuestionType;
use crate::metrics::{write_csv, QuestionScore, RougeScore};
use crate::prompts::PromptStrategy;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub question_id: String,
    pub qtype: QuestionType,
    pub prompt_chars: usize,
    pub answer: String,
    /// Scores are absent when the question has no golden answer.
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Everything one run produced: a cell of the results table plus its rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub run_id: String,
    pub strategy: PromptStrategy,
    pub batch: String,
    pub records: Vec<RunRecord>,
    /// Mean ROUGE-SU4 F1 over questions with golden answers.
    pub mean_f1: Option<f64>,
    pub errors: usize,
    pub warnings: usize,
}

impl RunReport {
    /// Scored rows, in the shape the metrics CSV writer takes.
    pub fn scored_rows(&self) -> Vec<QuestionScore> {
        self.records
            .iter()
            .filter_map(|r| {
                Some(QuestionScore {
                    question_id: r.question_id.clone(),
                    qtype: r.qtype,
                    score: RougeScore {
                        precision: r.precision?,
                        recall: r.recall?,
                        f1: r.f1?,
                    },
                    answered: r.error.is_none(),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    TextTable,
}

/// Per-question CSV with a `mean` footer; header only when nothing was scored.
pub fn report_csv(report: &RunReport) -> String {
    let rows = report.scored_rows();
    let mut buf = Vec::new();
    write_csv(&rows, report.mean_f1.unwrap_or(0.0), &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Results table: one row per strategy, one column per batch, mean F1 to 3 decimals.
pub fn render_table(reports: &[RunReport]) -> String {
    let mut batches: Vec<&str> = Vec::new();
    for r in reports {
        if !batches.contains(&r.batch.as_str()) {
            batches.push(&r.batch);
        }
    }
    let strategies: BTreeSet<usize> = reports
        .iter()
        .map(|r| PromptStrategy::ALL.iter().position(|s| *s == r.strategy).unwrap_or(0))
        .collect();

    let name_width = strategies
        .iter()
        .map(|&i| PromptStrategy::ALL[i].display_name().len())
        .chain(std::iter::once("System".len()))
        .max()
        .unwrap_or(6);
    let col_width = batches.iter().map(|b| b.chars().count()).max().unwrap_or(0).max(5);

    let mut out = String::new();
    let _ = write!(out, "{:<name_width$}", "System");
    for b in &batches {
        let _ = write!(out, "  {b:>col_width$}");
    }
    out.push('\n');
    for &i in &strategies {
        let strategy = PromptStrategy::ALL[i];
        let _ = write!(out, "{:<name_width$}", strategy.display_name());
        for b in &batches {
            let cell = reports
                .iter()
                .rev()
                .find(|r| r.strategy == strategy && r.batch == *b)
                .and_then(|r| r.mean_f1)
                .map(|m| format!("{m:.3}"))
                .unwrap_or_default();
            let _ = write!(out, "  {cell:>col_width$}");
        }
        out.push('\n');
    }
    out.push_str("Metric: ROUGE-SU4 F1\n");
    out
}

pub fn emit_report(report: &RunReport, format: ReportFormat, path: &Path) -> std::io::Result<()> {
    let text = match format {
        ReportFormat::Csv => report_csv(report),
        ReportFormat::TextTable => render_table(std::slice::from_ref(report)),
    };
    super::run::write_atomic(path, text.as_bytes())
}
