use std::collections::HashMap;
use std::io::Write;

use serde::Serialize;

use super::rouge::{rouge_su4_multi, RougeOptions, RougeScore};
use super::MetricsError;
use crate::dataset::{QuestionSet, QuestionType};

pub const CSV_HEADER: [&str; 5] = ["question_id", "qtype", "precision", "recall", "f1"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionScore {
    pub question_id: String,
    pub qtype: QuestionType,
    pub score: RougeScore<f64>,
    /// False when the gold question had no system answer; the score is then zero.
    pub answered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunEvaluation {
    /// One entry per gold question that has at least one ideal answer, in gold order.
    pub scores: Vec<QuestionScore>,
    pub unanswered: Vec<String>,
    /// Gold questions without ideal answers; left out of the mean.
    pub unlabelled: Vec<String>,
    pub mean_f1: f64,
}

impl RunEvaluation {
    pub fn answered_count(&self) -> usize {
        self.scores.iter().filter(|s| s.answered).count()
    }
}

/// Scores every answer against its golden answers and averages F1.
///
/// Gold questions without an answer count as zero in the mean.
pub fn evaluate_run(
    answers: &HashMap<String, String>,
    gold: &QuestionSet,
    opts: &RougeOptions,
) -> Result<RunEvaluation, MetricsError> {
    let mut unknown: Vec<String> = answers.keys().filter(|id| gold.get(id).is_none()).cloned().collect();
    if !unknown.is_empty() {
        unknown.sort();
        return Err(MetricsError::UnknownIds(unknown));
    }
    let mut no_gold: Vec<String> = gold
        .questions
        .iter()
        .filter(|q| q.ideal_answers.is_empty() && answers.contains_key(&q.id))
        .map(|q| q.id.clone())
        .collect();
    if !no_gold.is_empty() {
        no_gold.sort();
        return Err(MetricsError::NoGoldenAnswers(no_gold));
    }

    let mut scores = Vec::new();
    let mut unanswered = Vec::new();
    let mut unlabelled = Vec::new();
    for q in &gold.questions {
        if q.ideal_answers.is_empty() {
            unlabelled.push(q.id.clone());
            continue;
        }
        let (score, answered) = match answers.get(&q.id) {
            Some(text) => (rouge_su4_multi::<f64, _>(text, &q.ideal_answers, opts)?, true),
            None => {
                unanswered.push(q.id.clone());
                (RougeScore::zero(), false)
            }
        };
        scores.push(QuestionScore {
            question_id: q.id.clone(),
            qtype: q.qtype,
            score,
            answered,
        });
    }
    let mean_f1 = mean(scores.iter().map(|s| s.score.f1));
    Ok(RunEvaluation {
        scores,
        unanswered,
        unlabelled,
        mean_f1,
    })
}

pub(crate) fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Per-question rows followed by a `mean` footer. An empty evaluation
/// produces the header alone.
pub fn write_csv<W: Write>(scores: &[QuestionScore], mean_f1: f64, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for s in scores {
        w.write_record([
            s.question_id.as_str(),
            s.qtype.as_str(),
            &s.score.precision.to_string(),
            &s.score.recall.to_string(),
            &s.score.f1.to_string(),
        ])?;
    }
    if !scores.is_empty() {
        w.write_record(["mean", "", "", "", &mean_f1.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
