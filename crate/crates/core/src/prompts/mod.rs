//! The five prompt variants and few-shot sample selection.
//!
//! Layout is byte-exact: blocks are separated by one blank line and every
//! prompt that ends in an answer slot ends with `"A: "` and no newline.

mod select;

pub use select::{select_few_shot_samples, select_sample_questions, FewShotSample};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{Question, QuestionType, Snippet};

pub const PLAIN_PREAMBLE: &str =
    "Answer this biomedical question. Write the answer as the ideal answer given to a medical practitioner.";
pub const SNIPPETS_PREAMBLE: &str = "Answer the biomedical question as truthfully as possible using the provided list of snippets. Write the answer as the ideal answer given to a medical practitioner.";
pub const TEXT_PREAMBLE: &str = "Answer the biomedical question as truthfully as possible using the provided text. Write the answer as the ideal answer given to a medical practitioner.";

/// Default few-shot sample count.
pub const DEFAULT_FEW_SHOT_N: usize = 10;
/// Default prompt size limit in characters.
pub const DEFAULT_CHAR_BUDGET: usize = 12_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PromptStrategy {
    #[serde(rename = "zero-plain")]
    ZeroShotPlain,
    #[serde(rename = "few-plain")]
    FewShotPlain,
    #[serde(rename = "zero-snippets")]
    ZeroShotSnippets,
    #[serde(rename = "zero-extract")]
    ZeroShotExtract,
    #[serde(rename = "few-extract")]
    FewShotExtract,
}

impl PromptStrategy {
    pub const ALL: [PromptStrategy; 5] = [
        PromptStrategy::ZeroShotPlain,
        PromptStrategy::FewShotPlain,
        PromptStrategy::ZeroShotSnippets,
        PromptStrategy::ZeroShotExtract,
        PromptStrategy::FewShotExtract,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PromptStrategy::ZeroShotPlain => "zero-plain",
            PromptStrategy::FewShotPlain => "few-plain",
            PromptStrategy::ZeroShotSnippets => "zero-snippets",
            PromptStrategy::ZeroShotExtract => "zero-extract",
            PromptStrategy::FewShotExtract => "few-extract",
        }
    }

    /// Row label for result tables: shot setting and context kind.
    pub fn display_name(self) -> &'static str {
        match self {
            PromptStrategy::ZeroShotPlain => "Zero-shot / None",
            PromptStrategy::FewShotPlain => "Few-shot / None",
            PromptStrategy::ZeroShotSnippets => "Zero-shot / Snippets",
            PromptStrategy::ZeroShotExtract => "Zero-shot / Extract",
            PromptStrategy::FewShotExtract => "Few-shot / Extract",
        }
    }

    pub fn is_few_shot(self) -> bool {
        matches!(self, PromptStrategy::FewShotPlain | PromptStrategy::FewShotExtract)
    }

    pub fn needs_extract(self) -> bool {
        matches!(self, PromptStrategy::ZeroShotExtract | PromptStrategy::FewShotExtract)
    }

    /// Few-shot extract samples come from the target's question type only.
    pub fn filters_samples_by_type(self) -> bool {
        self == PromptStrategy::FewShotExtract
    }
}

impl fmt::Display for PromptStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PromptStrategy {
    type Err = PromptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PromptStrategy::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| PromptError::UnknownStrategy(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error(
        "unknown prompt strategy {0:?} (expected zero-plain, few-plain, zero-snippets, zero-extract or few-extract)"
    )]
    UnknownStrategy(String),
    #[error("sample {index} carries an extract, which the plain few-shot prompt does not use")]
    UnexpectedExtract { index: usize },
    #[error("sample {index} has no extract")]
    MissingSampleExtract { index: usize },
    #[error("the extract is empty")]
    EmptyExtract,
    #[error("sample {index} has type {found}, target question has type {expected}")]
    TypeMismatch {
        index: usize,
        expected: QuestionType,
        found: QuestionType,
    },
    #[error("need {requested} few-shot samples{}, only {available} eligible", type_suffix(.qtype))]
    NotEnoughSamples {
        qtype: Option<QuestionType>,
        requested: usize,
        available: usize,
    },
}

fn type_suffix(qtype: &Option<QuestionType>) -> String {
    qtype.map(|t| format!(" of type {t}")).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PromptWarning {
    /// The snippets prompt was built with an empty snippet list.
    NoSnippets,
    /// Items were dropped from the end of the context to respect the budget.
    Truncated { dropped: usize },
    /// Still over budget with nothing left to drop.
    OverBudget { chars: usize, budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prompt {
    pub text: String,
    pub strategy: PromptStrategy,
    pub question_id: String,
    pub sample_count: usize,
    /// Snippets or samples removed to fit the character budget.
    pub dropped: usize,
    pub warnings: Vec<PromptWarning>,
}

impl Prompt {
    fn new(text: String, strategy: PromptStrategy, q: &Question, sample_count: usize) -> Self {
        Prompt {
            text,
            strategy,
            question_id: q.id.clone(),
            sample_count,
            dropped: 0,
            warnings: Vec::new(),
        }
    }

    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

pub fn build_zero_shot_plain(q: &Question) -> Prompt {
    Prompt::new(q.body.clone(), PromptStrategy::ZeroShotPlain, q, 0)
}

pub fn build_few_shot_plain(q: &Question, samples: &[FewShotSample]) -> Result<Prompt, PromptError> {
    if let Some(index) = samples.iter().position(|s| s.extract.is_some()) {
        return Err(PromptError::UnexpectedExtract { index });
    }
    let mut blocks = Vec::with_capacity(samples.len() + 2);
    blocks.push(PLAIN_PREAMBLE.to_string());
    for s in samples {
        blocks.push(format!("Q: {}\nQ type: {}\nA: {}", s.question, s.qtype, s.answer));
    }
    blocks.push(format!("Q: {}\nQ type: {}\nA: ", q.body, q.qtype));
    Ok(Prompt::new(
        blocks.join("\n\n"),
        PromptStrategy::FewShotPlain,
        q,
        samples.len(),
    ))
}

pub fn build_zero_shot_snippets(q: &Question) -> Prompt {
    let mut snippets: Vec<&Snippet> = q.snippets.iter().collect();
    snippets.sort_by_key(|s| s.order_index);
    render_snippets(q, &snippets)
}

fn render_snippets(q: &Question, snippets: &[&Snippet]) -> Prompt {
    let mut blocks = Vec::with_capacity(snippets.len() + 3);
    blocks.push(SNIPPETS_PREAMBLE.to_string());
    blocks.push("Snippets:".to_string());
    for s in snippets {
        blocks.push(format!("- {}", s.text));
    }
    blocks.push(format!("Q: {}\nA: ", q.body));
    let mut p = Prompt::new(blocks.join("\n\n"), PromptStrategy::ZeroShotSnippets, q, 0);
    if snippets.is_empty() {
        p.warnings.push(PromptWarning::NoSnippets);
    }
    p
}

pub fn build_zero_shot_extract(q: &Question, extract: &str) -> Result<Prompt, PromptError> {
    if extract.trim().is_empty() {
        return Err(PromptError::EmptyExtract);
    }
    let text = [TEXT_PREAMBLE, "Text:", extract, &format!("Q: {}\nA: ", q.body)].join("\n\n");
    Ok(Prompt::new(text, PromptStrategy::ZeroShotExtract, q, 0))
}

pub fn build_few_shot_extract(q: &Question, extract: &str, samples: &[FewShotSample]) -> Result<Prompt, PromptError> {
    if extract.trim().is_empty() {
        return Err(PromptError::EmptyExtract);
    }
    let mut blocks = Vec::with_capacity(samples.len() + 2);
    blocks.push(TEXT_PREAMBLE.to_string());
    for (index, s) in samples.iter().enumerate() {
        if s.qtype != q.qtype {
            return Err(PromptError::TypeMismatch {
                index,
                expected: q.qtype,
                found: s.qtype,
            });
        }
        let sample_extract = match s.extract.as_deref() {
            Some(e) if !e.trim().is_empty() => e,
            _ => return Err(PromptError::MissingSampleExtract { index }),
        };
        blocks.push(format!(
            "Text: {}\nQ: {}\nQ type: {}\nA: {}",
            sample_extract, s.question, s.qtype, s.answer
        ));
    }
    blocks.push(format!("Text: {}\nQ: {}\nQ type: {}\nA: ", extract, q.body, q.qtype));
    Ok(Prompt::new(
        blocks.join("\n\n"),
        PromptStrategy::FewShotExtract,
        q,
        samples.len(),
    ))
}

/// Builds the prompt for `strategy`, dropping snippets or samples from the
/// end of their list until the text fits in `char_budget` characters.
///
/// `extract` is required by the two extract strategies and ignored by the
/// others; `samples` is ignored by the zero-shot strategies.
pub fn build_prompt(
    strategy: PromptStrategy,
    q: &Question,
    extract: Option<&str>,
    samples: &[FewShotSample],
    char_budget: Option<usize>,
) -> Result<Prompt, PromptError> {
    let render = |keep: usize| -> Result<Prompt, PromptError> {
        match strategy {
            PromptStrategy::ZeroShotPlain => Ok(build_zero_shot_plain(q)),
            PromptStrategy::FewShotPlain => build_few_shot_plain(q, &samples[..keep]),
            PromptStrategy::ZeroShotSnippets => {
                let mut snippets: Vec<&Snippet> = q.snippets.iter().collect();
                snippets.sort_by_key(|s| s.order_index);
                snippets.truncate(keep);
                Ok(render_snippets(q, &snippets))
            }
            PromptStrategy::ZeroShotExtract => build_zero_shot_extract(q, extract.ok_or(PromptError::EmptyExtract)?),
            PromptStrategy::FewShotExtract => {
                build_few_shot_extract(q, extract.ok_or(PromptError::EmptyExtract)?, &samples[..keep])
            }
        }
    };
    let full = match strategy {
        PromptStrategy::ZeroShotSnippets => q.snippets.len(),
        PromptStrategy::FewShotPlain | PromptStrategy::FewShotExtract => samples.len(),
        _ => 0,
    };

    let mut keep = full;
    let mut prompt = render(keep)?;
    let Some(budget) = char_budget else {
        return Ok(prompt);
    };
    while prompt.char_len() > budget && keep > 0 {
        keep -= 1;
        prompt = render(keep)?;
    }
    prompt.dropped = full - keep;
    if prompt.dropped > 0 {
        prompt.warnings.push(PromptWarning::Truncated {
            dropped: prompt.dropped,
        });
    }
    if prompt.char_len() > budget {
        prompt.warnings.push(PromptWarning::OverBudget {
            chars: prompt.char_len(),
            budget,
        });
    }
    Ok(prompt)
}
