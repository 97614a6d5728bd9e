//! Query-focused extractive summarisation over a question's snippets.
//!
//! Snippets are split into candidate sentences, every candidate is scored
//! against the question by a [`RelevanceScorer`], and the top `n` are
//! returned in their original order. [`LexicalScorer`] (tf-idf cosine plus
//! a position prior) is the built-in scorer.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{split_sentences, Question, Snippet};
use crate::metrics::{tokenize, Token};
use crate::scalar::RealScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("question {question_id} has no candidate sentences")]
    NoCandidates { question_id: String },
    #[error("extract length must be at least 1")]
    ZeroLength,
    #[error("position weight must lie in [0, 1]")]
    PositionWeightOutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub sentence: String,
    /// Global index over all sentences of all snippets.
    pub position: usize,
    /// `order_index` of the snippet the sentence came from.
    pub source_snippet: usize,
}

pub fn candidates_from_snippets(snippets: &[Snippet]) -> Vec<Candidate> {
    let mut ordered: Vec<&Snippet> = snippets.iter().collect();
    ordered.sort_by_key(|s| s.order_index);
    ordered
        .into_iter()
        .flat_map(|s| {
            split_sentences(&s.text)
                .into_iter()
                .map(move |sentence| (s.order_index, sentence))
        })
        .enumerate()
        .map(|(position, (source_snippet, sentence))| Candidate {
            sentence,
            position,
            source_snippet,
        })
        .collect()
}

/// Scores a pool of candidates against a question; higher is more relevant.
///
/// Implementations must be deterministic and return one score per candidate.
pub trait RelevanceScorer<F> {
    fn score(&self, question: &str, candidates: &[Candidate]) -> Vec<F>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractConfig<F> {
    /// Number of sentences in the extract.
    pub n: usize,
    pub position_weight: F,
}

impl<F: RealScalar> Default for ExtractConfig<F> {
    fn default() -> Self {
        Self {
            n: 3,
            position_weight: F::from_f64(0.1).expect("0.1 fits"),
        }
    }
}

impl<F: RealScalar> ExtractConfig<F> {
    pub fn validate(&self) -> Result<(), ExtractError> {
        if self.n == 0 {
            return Err(ExtractError::ZeroLength);
        }
        if !(self.position_weight >= F::zero() && self.position_weight <= F::one()) {
            return Err(ExtractError::PositionWeightOutOfRange);
        }
        Ok(())
    }
}

/// Term weights fitted on one question's candidate pool.
///
/// `idf(t) = ln((1 + N) / (1 + df(t))) + 1`, so terms absent from the pool
/// still get a finite positive weight.
#[derive(Debug, Clone)]
pub struct TfIdfModel<F> {
    doc_freq: HashMap<Token, usize>,
    docs: usize,
    _scalar: std::marker::PhantomData<F>,
}

impl<F: RealScalar> TfIdfModel<F> {
    pub fn fit<'a>(sentences: impl IntoIterator<Item = &'a str>) -> Self {
        let mut doc_freq: HashMap<Token, usize> = HashMap::new();
        let mut docs = 0;
        for s in sentences {
            docs += 1;
            let mut seen = tokenize(s);
            seen.sort();
            seen.dedup();
            for t in seen {
                *doc_freq.entry(t).or_insert(0) += 1;
            }
        }
        Self {
            doc_freq,
            docs,
            _scalar: std::marker::PhantomData,
        }
    }

    pub fn idf(&self, token: &Token) -> F {
        let df = self.doc_freq.get(token).copied().unwrap_or(0);
        let one = F::one();
        ((one + F::from_count(self.docs)) / (one + F::from_count(df))).ln() + one
    }

    pub fn vector(&self, text: &str) -> BTreeMap<Token, F> {
        let mut tf: BTreeMap<Token, usize> = BTreeMap::new();
        for t in tokenize(text) {
            *tf.entry(t).or_insert(0) += 1;
        }
        tf.into_iter()
            .map(|(t, n)| {
                let w = F::from_count(n) * self.idf(&t);
                (t, w)
            })
            .collect()
    }

    /// Cosine of the two tf-idf vectors, clamped to `[0, 1]`; zero if either is empty.
    ///
    /// Sums run in ascending order of their terms, so sentences with the same
    /// multiset of weights score bit-identically and ties stay ties.
    pub fn cosine(&self, a: &str, b: &str) -> F {
        let (va, vb) = (self.vector(a), self.vector(b));
        let norm = |v: &BTreeMap<Token, F>| ordered_sum(v.values().map(|&w| w * w)).sqrt();
        let (na, nb) = (norm(&va), norm(&vb));
        if na.is_zero() || nb.is_zero() {
            return F::zero();
        }
        let dot = ordered_sum(va.iter().filter_map(|(t, &w)| vb.get(t).map(|&x| w * x)));
        (dot / (na * nb)).max(F::zero()).min(F::one())
    }
}

fn ordered_sum<F: RealScalar>(terms: impl Iterator<Item = F>) -> F {
    let mut terms: Vec<F> = terms.collect();
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    terms.into_iter().fold(F::zero(), |acc, x| acc + x)
}

/// `(1 - w) * cosine(question, sentence) + w / (1 + position)`.
pub fn lexical_score<F: RealScalar>(
    model: &TfIdfModel<F>,
    question: &str,
    candidate: &Candidate,
    position_weight: F,
) -> F {
    let cos = model.cosine(question, &candidate.sentence);
    let prior = F::one() / (F::one() + F::from_count(candidate.position));
    (F::one() - position_weight) * cos + position_weight * prior
}

/// Tf-idf cosine relevance with a decaying position prior.
#[derive(Debug, Clone, Copy)]
pub struct LexicalScorer<F> {
    pub position_weight: F,
}

impl<F: RealScalar> LexicalScorer<F> {
    pub fn new(position_weight: F) -> Self {
        Self { position_weight }
    }
}

impl<F: RealScalar> RelevanceScorer<F> for LexicalScorer<F> {
    fn score(&self, question: &str, candidates: &[Candidate]) -> Vec<F> {
        let model = TfIdfModel::fit(candidates.iter().map(|c| c.sentence.as_str()));
        candidates
            .iter()
            .map(|c| lexical_score(&model, question, c, self.position_weight))
            .collect()
    }
}

/// Picks the top `n` candidates (ties go to the earlier position) and joins
/// them with single spaces in original order. Sentences are copied verbatim.
pub fn summarize_candidates<F: RealScalar, S: RelevanceScorer<F> + ?Sized>(
    question: &str,
    candidates: &[Candidate],
    n: usize,
    scorer: &S,
) -> Vec<usize> {
    let scores = scorer.score(question, candidates);
    debug_assert_eq!(scores.len(), candidates.len());
    let mut ranked: Vec<usize> = (0..candidates.len()).collect();
    ranked.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(Ordering::Equal)
            .then(candidates[a].position.cmp(&candidates[b].position))
    });
    ranked.truncate(n);
    ranked.sort_by_key(|&i| candidates[i].position);
    ranked
}

pub fn summarize<F: RealScalar, S: RelevanceScorer<F> + ?Sized>(
    question: &Question,
    config: &ExtractConfig<F>,
    scorer: &S,
) -> Result<String, ExtractError> {
    config.validate()?;
    let candidates = candidates_from_snippets(&question.snippets);
    if candidates.is_empty() {
        return Err(ExtractError::NoCandidates {
            question_id: question.id.clone(),
        });
    }
    let chosen = summarize_candidates(&question.body, &candidates, config.n, scorer);
    Ok(chosen
        .into_iter()
        .map(|i| candidates[i].sentence.as_str())
        .collect::<Vec<_>>()
        .join(" "))
}
