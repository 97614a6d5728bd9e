use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

use super::tokenize::{tokenize_with, Token};
use super::MetricsError;
use crate::scalar::{ratio_or_zero, Scalar};

/// Maximum number of tokens allowed between the two halves of a skip-bigram.
pub const DEFAULT_SKIP_DISTANCE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RougeOptions {
    pub skip_distance: usize,
    pub stem: bool,
}

impl Default for RougeOptions {
    fn default() -> Self {
        Self {
            skip_distance: DEFAULT_SKIP_DISTANCE,
            stem: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RougeScore<T> {
    pub precision: T,
    pub recall: T,
    pub f1: T,
}

impl<T: Scalar> RougeScore<T> {
    pub fn zero() -> Self {
        Self {
            precision: T::zero(),
            recall: T::zero(),
            f1: T::zero(),
        }
    }

    pub fn from_precision_recall(precision: T, recall: T) -> Self {
        let two = T::one() + T::one();
        let f1 = ratio_or_zero(two * precision * recall, precision + recall);
        Self { precision, recall, f1 }
    }

    pub fn from_counts(counts: UnitCounts) -> Self {
        let m = T::from_count(counts.matches);
        Self::from_precision_recall(
            ratio_or_zero(m, T::from_count(counts.candidate_units)),
            ratio_or_zero(m, T::from_count(counts.reference_units)),
        )
    }

    pub fn to_f64(self) -> RougeScore<f64> {
        RougeScore {
            precision: self.precision.to_f64_lossy(),
            recall: self.recall.to_f64_lossy(),
            f1: self.f1.to_f64_lossy(),
        }
    }
}

/// Raw match statistics behind a ROUGE-SU score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UnitCounts {
    /// Clipped unigram matches plus clipped skip-bigram matches.
    pub matches: usize,
    /// Candidate unigrams plus candidate skip-bigrams.
    pub candidate_units: usize,
    pub reference_units: usize,
}

/// Multiset of ordered pairs `(t[i], t[j])` with `i < j` and at most
/// `skip_distance` tokens between them.
pub fn skip_bigrams<T: Eq + Hash>(tokens: &[T], skip_distance: usize) -> HashMap<(&T, &T), usize> {
    let mut out = HashMap::new();
    for (i, first) in tokens.iter().enumerate() {
        for second in tokens.iter().skip(i + 1).take(skip_distance + 1) {
            *out.entry((first, second)).or_insert(0) += 1;
        }
    }
    out
}

fn multiset<T: Eq + Hash>(tokens: &[T]) -> HashMap<&T, usize> {
    let mut out = HashMap::new();
    for t in tokens {
        *out.entry(t).or_insert(0) += 1;
    }
    out
}

fn clipped_overlap<K: Eq + Hash>(a: &HashMap<K, usize>, b: &HashMap<K, usize>) -> usize {
    a.iter().map(|(k, &n)| b.get(k).map_or(0, |&m| n.min(m))).sum()
}

/// Unigram plus skip-bigram counts for two token sequences.
pub fn unit_counts<T: Eq + Hash>(candidate: &[T], reference: &[T], skip_distance: usize) -> UnitCounts {
    if candidate.is_empty() || reference.is_empty() {
        return UnitCounts::default();
    }
    let (cu, ru) = (multiset(candidate), multiset(reference));
    let (cs, rs) = (
        skip_bigrams(candidate, skip_distance),
        skip_bigrams(reference, skip_distance),
    );
    UnitCounts {
        matches: clipped_overlap(&cu, &ru) + clipped_overlap(&cs, &rs),
        candidate_units: candidate.len() + cs.values().sum::<usize>(),
        reference_units: reference.len() + rs.values().sum::<usize>(),
    }
}

/// ROUGE-SU over pre-tokenised input.
pub fn rouge_su<T: Scalar, K: Eq + Hash>(candidate: &[K], reference: &[K], skip_distance: usize) -> RougeScore<T> {
    RougeScore::from_counts(unit_counts(candidate, reference, skip_distance))
}

pub fn rouge_su4<T: Scalar>(candidate: &str, reference: &str) -> RougeScore<T> {
    rouge_su4_with(candidate, reference, &RougeOptions::default())
}

pub fn rouge_su4_with<T: Scalar>(candidate: &str, reference: &str, opts: &RougeOptions) -> RougeScore<T> {
    let c: Vec<Token> = tokenize_with(candidate, opts.stem);
    let r: Vec<Token> = tokenize_with(reference, opts.stem);
    rouge_su(&c, &r, opts.skip_distance)
}

/// Best score over several golden answers, by F1. Ties keep the earlier reference.
pub fn rouge_su4_multi<T: Scalar, S: AsRef<str>>(
    candidate: &str,
    references: &[S],
    opts: &RougeOptions,
) -> Result<RougeScore<T>, MetricsError> {
    let cand = tokenize_with(candidate, opts.stem);
    let mut best: Option<RougeScore<T>> = None;
    for r in references {
        let score = rouge_su(&cand, &tokenize_with(r.as_ref(), opts.stem), opts.skip_distance);
        match best {
            Some(b) if score.f1 <= b.f1 => {}
            _ => best = Some(score),
        }
    }
    best.ok_or(MetricsError::NoReferences)
}
