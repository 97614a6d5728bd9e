//! BioASQ Task B question sets: loading, statistics and sentence splitting.

mod sentences;
mod stats;

pub use sentences::split_sentences;
pub use stats::{statistics, CorpusStats};

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed BioASQ JSON in {origin} at line {line}, column {column}: {message}")]
    Json {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("question {id}: unknown question type {value:?}")]
    UnknownType { id: String, value: String },
    #[error("question {id}: duplicate question id")]
    DuplicateId { id: String },
    #[error("question {id}: empty body")]
    EmptyBody { id: String },
}

#[derive(Debug, Error)]
#[error("unknown question type {0:?} (expected yesno, factoid, list or summary)")]
pub struct ParseQuestionTypeError(pub String);

/// The four BioASQ question categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuestionType {
    Yesno,
    Factoid,
    List,
    Summary,
}

impl QuestionType {
    pub const ALL: [QuestionType; 4] = [
        QuestionType::Yesno,
        QuestionType::Factoid,
        QuestionType::List,
        QuestionType::Summary,
    ];

    /// The BioASQ JSON spelling, also used when rendering prompts.
    pub fn as_str(self) -> &'static str {
        match self {
            QuestionType::Yesno => "yesno",
            QuestionType::Factoid => "factoid",
            QuestionType::List => "list",
            QuestionType::Summary => "summary",
        }
    }
}

impl fmt::Display for QuestionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QuestionType {
    type Err = ParseQuestionTypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "yesno" => Ok(QuestionType::Yesno),
            "factoid" => Ok(QuestionType::Factoid),
            "list" => Ok(QuestionType::List),
            "summary" => Ok(QuestionType::Summary),
            other => Err(ParseQuestionTypeError(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snippet {
    pub text: String,
    /// Source identifier, usually a PubMed URL.
    pub document: String,
    /// 0-based position within the owning question's snippet list.
    pub order_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    pub id: String,
    pub body: String,
    pub qtype: QuestionType,
    pub snippets: Vec<Snippet>,
    /// Golden ideal answers; empty for unlabelled test questions.
    pub ideal_answers: Vec<String>,
}

impl Question {
    pub fn first_ideal_answer(&self) -> Option<&str> {
        self.ideal_answers.first().map(String::as_str)
    }
}

/// An ordered, immutable collection of questions. File order is preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionSet {
    pub label: String,
    pub questions: Vec<Question>,
}

impl QuestionSet {
    pub fn len(&self) -> usize {
        self.questions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.questions.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Question> {
        self.questions.iter().find(|q| q.id == id)
    }

    /// Parses a BioASQ JSON document already held in memory.
    pub fn from_json_str(json: &str, label: &str, origin: &str) -> Result<Self, DatasetError> {
        let raw: RawFile = serde_json::from_str(json).map_err(|e| DatasetError::Json {
            origin: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;

        let mut seen = HashSet::with_capacity(raw.questions.len());
        let mut questions = Vec::with_capacity(raw.questions.len());
        for rq in raw.questions {
            let qtype = rq
                .qtype
                .parse::<QuestionType>()
                .map_err(|e| DatasetError::UnknownType {
                    id: rq.id.clone(),
                    value: e.0,
                })?;
            if !seen.insert(rq.id.clone()) {
                return Err(DatasetError::DuplicateId { id: rq.id });
            }
            if rq.body.trim().is_empty() {
                return Err(DatasetError::EmptyBody { id: rq.id });
            }
            // Whitespace-only snippets carry nothing to render or extract from.
            let snippets = rq
                .snippets
                .into_iter()
                .filter(|s| !s.text.trim().is_empty())
                .enumerate()
                .map(|(order_index, s)| Snippet {
                    text: s.text,
                    document: s.document,
                    order_index,
                })
                .collect();
            let ideal_answers = match rq.ideal_answer {
                None => Vec::new(),
                Some(IdealAnswer::One(a)) => vec![a],
                Some(IdealAnswer::Many(v)) => v,
            };
            questions.push(Question {
                id: rq.id,
                body: rq.body,
                qtype,
                snippets,
                ideal_answers,
            });
        }
        Ok(QuestionSet {
            label: label.to_string(),
            questions,
        })
    }

    /// Serialises back to the BioASQ layout; `ideal_answer` is always an array.
    pub fn to_bioasq_json(&self) -> serde_json::Value {
        let questions: Vec<RawQuestion> = self
            .questions
            .iter()
            .map(|q| RawQuestion {
                id: q.id.clone(),
                body: q.body.clone(),
                qtype: q.qtype.as_str().to_string(),
                snippets: q
                    .snippets
                    .iter()
                    .map(|s| RawSnippet {
                        text: s.text.clone(),
                        document: s.document.clone(),
                    })
                    .collect(),
                ideal_answer: if q.ideal_answers.is_empty() {
                    None
                } else {
                    Some(IdealAnswer::Many(q.ideal_answers.clone()))
                },
            })
            .collect();
        serde_json::to_value(RawFile { questions }).expect("question set serialises")
    }
}

/// Loads a BioASQ Task B JSON file (training or test batch).
pub fn load_question_set(path: impl AsRef<Path>, label: &str) -> Result<QuestionSet, DatasetError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    QuestionSet::from_json_str(&text, label, &path.display().to_string())
}

#[derive(Serialize, Deserialize)]
struct RawFile {
    questions: Vec<RawQuestion>,
}

#[derive(Serialize, Deserialize)]
struct RawQuestion {
    id: String,
    body: String,
    #[serde(rename = "type")]
    qtype: String,
    #[serde(default)]
    snippets: Vec<RawSnippet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ideal_answer: Option<IdealAnswer>,
}

#[derive(Serialize, Deserialize)]
struct RawSnippet {
    text: String,
    #[serde(default)]
    document: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IdealAnswer {
    One(String),
    Many(Vec<String>),
}
