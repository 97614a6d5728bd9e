mod common;

use std::collections::HashMap;

use bioqa_core::dataset::{Question, QuestionType, Snippet};
use bioqa_core::extractive::{
    candidates_from_snippets, lexical_score, summarize, summarize_candidates, ExtractConfig, LexicalScorer, TfIdfModel,
};
use proptest::prelude::*;

const QUESTION: &str = "Does aspirin inhibit platelet aggregation?";
const POOL: [&str; 3] = [
    "Aspirin is widely used.",
    "Aspirin can inhibit platelet aggregation in patients.",
    "Platelet counts were normal.",
];

fn question(texts: &[&str]) -> Question {
    Question {
        id: "fx".into(),
        body: QUESTION.into(),
        qtype: QuestionType::Yesno,
        snippets: texts
            .iter()
            .enumerate()
            .map(|(i, t)| Snippet {
                text: t.to_string(),
                document: String::new(),
                order_index: i,
            })
            .collect(),
        ideal_answers: vec![],
    }
}

/// Hand tf-idf: raw counts, idf = ln((1+N)/(1+df)) + 1, cosine, plus w/(1+pos).
fn oracle_scores(w: f64) -> Vec<f64> {
    let tok = |s: &str| -> Vec<String> {
        s.to_lowercase()
            .split(|c: char| !c.is_alphanumeric())
            .filter(|t| !t.is_empty())
            .map(String::from)
            .collect()
    };
    let docs: Vec<Vec<String>> = POOL.iter().map(|s| tok(s)).collect();
    let n = docs.len() as f64;
    let idf = |t: &str| {
        let df = docs.iter().filter(|d| d.iter().any(|x| x == t)).count() as f64;
        ((1.0 + n) / (1.0 + df)).ln() + 1.0
    };
    let vec = |ts: &[String]| {
        let mut m: HashMap<String, f64> = HashMap::new();
        for t in ts {
            *m.entry(t.clone()).or_default() += 1.0;
        }
        m.into_iter()
            .map(|(t, c)| {
                let v = c * idf(&t);
                (t, v)
            })
            .collect::<HashMap<_, _>>()
    };
    let q = vec(&tok(QUESTION));
    let norm = |v: &HashMap<String, f64>| v.values().map(|x| x * x).sum::<f64>().sqrt();
    docs.iter()
        .enumerate()
        .map(|(pos, d)| {
            let dv = vec(d);
            let dot: f64 = q.iter().map(|(t, x)| x * dv.get(t).copied().unwrap_or(0.0)).sum();
            (1.0 - w) * dot / (norm(&q) * norm(&dv)) + w / (1.0 + pos as f64)
        })
        .collect()
}

#[test]
fn hand_oracle_scores() {
    // Frozen from an independent hand computation of the same formulas.
    let frozen_w0 = [0.13482436064175385, 0.560988989201643, 0.13482436064175385];
    let frozen_w01 = [0.22134192457757845, 0.5548900902814787, 0.1546752579109118];
    let cands = candidates_from_snippets(&question(&POOL).snippets);
    let model = TfIdfModel::<f64>::fit(cands.iter().map(|c| c.sentence.as_str()));
    for (w, frozen) in [(0.0, frozen_w0), (0.1, frozen_w01)] {
        let oracle = oracle_scores(w);
        for (i, c) in cands.iter().enumerate() {
            let got = lexical_score(&model, QUESTION, c, w);
            assert!((got - frozen[i]).abs() < 1e-12, "w={w} i={i}: {got}");
            assert!((got - oracle[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn hand_oracle_ranking() {
    let q = question(&POOL);
    let top2 = summarize(
        &q,
        &ExtractConfig {
            n: 2,
            position_weight: 0.1,
        },
        &LexicalScorer::new(0.1),
    )
    .unwrap();
    assert_eq!(
        top2,
        "Aspirin is widely used. Aspirin can inhibit platelet aggregation in patients."
    );
    // without the position prior sentences 0 and 2 tie; the earlier one wins
    let top2 = summarize(
        &q,
        &ExtractConfig {
            n: 2,
            position_weight: 0.0,
        },
        &LexicalScorer::new(0.0),
    )
    .unwrap();
    assert_eq!(
        top2,
        "Aspirin is widely used. Aspirin can inhibit platelet aggregation in patients."
    );
    let top1 = summarize(
        &q,
        &ExtractConfig {
            n: 1,
            position_weight: 0.1,
        },
        &LexicalScorer::new(0.1),
    )
    .unwrap();
    assert_eq!(top1, POOL[1]);
}

#[test]
fn duplicate_snippets_are_harmless() {
    let q = question(&[POOL[1], POOL[1], POOL[0]]);
    let cfg = ExtractConfig {
        n: 2,
        position_weight: 0.1,
    };
    let a = summarize(&q, &cfg, &LexicalScorer::new(0.1)).unwrap();
    assert_eq!(a, format!("{} {}", POOL[1], POOL[1]));
    assert_eq!(a, summarize(&q, &cfg, &LexicalScorer::new(0.1)).unwrap());
}

fn arb_snippets() -> impl Strategy<Value = Vec<String>> {
    let word = prop::sample::select(vec![
        "aspirin", "platelet", "gene", "Tumour", "cell", "dose", "risk", "12",
    ]);
    let sentence = proptest::collection::vec(word, 1..6).prop_map(|w| format!("{}.", w.join(" ")));
    proptest::collection::vec(
        proptest::collection::vec(sentence, 1..4).prop_map(|s| s.join(" ")),
        1..6,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn extract_is_ordered_subset(snips in arb_snippets(), n in 1usize..5, w in 0.0f64..=1.0) {
        let refs: Vec<&str> = snips.iter().map(String::as_str).collect();
        let q = question(&refs);
        let cands = candidates_from_snippets(&q.snippets);
        let chosen = summarize_candidates(&q.body, &cands, n, &LexicalScorer::new(w));
        prop_assert!(chosen.len() <= n);
        prop_assert!(chosen.windows(2).all(|p| cands[p[0]].position < cands[p[1]].position));
        let text = summarize(&q, &ExtractConfig { n, position_weight: w }, &LexicalScorer::new(w)).unwrap();
        let expected: Vec<&str> = chosen.iter().map(|&i| cands[i].sentence.as_str()).collect();
        prop_assert_eq!(text, expected.join(" "));
    }
}
