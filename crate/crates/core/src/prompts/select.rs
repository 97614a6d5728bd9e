use serde::{Deserialize, Serialize};

use super::PromptError;
use crate::dataset::{Question, QuestionSet, QuestionType};

/// One worked example placed before the target question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FewShotSample {
    pub question: String,
    pub qtype: QuestionType,
    /// First golden ideal answer of the source question.
    pub answer: String,
    /// Context shown with the sample; only the few-shot extract prompt uses it.
    pub extract: Option<String>,
}

impl FewShotSample {
    pub fn from_question(q: &Question) -> Option<Self> {
        Some(FewShotSample {
            question: q.body.clone(),
            qtype: q.qtype,
            answer: q.first_ideal_answer()?.to_string(),
            extract: None,
        })
    }
}

/// The last `n` questions (file order) with a golden answer that pass the
/// type filter and `eligible`, oldest first.
pub fn select_sample_questions(
    training: &QuestionSet,
    qtype: Option<QuestionType>,
    n: usize,
    eligible: impl Fn(&Question) -> bool,
) -> Result<Vec<&Question>, PromptError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut picked: Vec<&Question> = training
        .questions
        .iter()
        .rev()
        .filter(|q| !q.ideal_answers.is_empty())
        .filter(|q| qtype.is_none_or(|t| q.qtype == t))
        .filter(|q| eligible(q))
        .take(n)
        .collect();
    if picked.len() < n {
        return Err(PromptError::NotEnoughSamples {
            qtype,
            requested: n,
            available: picked.len(),
        });
    }
    picked.reverse();
    Ok(picked)
}

pub fn select_few_shot_samples(
    training: &QuestionSet,
    qtype: Option<QuestionType>,
    n: usize,
) -> Result<Vec<FewShotSample>, PromptError> {
    Ok(select_sample_questions(training, qtype, n, |_| true)?
        .into_iter()
        .filter_map(FewShotSample::from_question)
        .collect())
}
