use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::{BackendKind, RunConfig};
use super::report::{report_csv, RunRecord, RunReport};
use super::RunError;
use crate::dataset::{load_question_set, Question, QuestionSet, QuestionType};
use crate::extractive::{candidates_from_snippets, summarize, ExtractConfig, LexicalScorer};
use crate::llm_client::{CompletionBackend, HttpBackend, MockBackend};
use crate::metrics::{evaluate_run, RougeOptions};
use crate::prompts::{
    build_prompt, select_few_shot_samples, select_sample_questions, FewShotSample, Prompt, PromptStrategy,
    PromptWarning,
};

/// One line of `answers.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerRecord {
    pub id: String,
    pub ideal_answer: String,
}

/// Runs `config` with the backend it names. For `http`, the credential is
/// read from the environment.
pub fn run_experiment(config: &RunConfig) -> Result<RunReport, RunError> {
    config.validate()?;
    match config.backend {
        BackendKind::Mock => run_with_backend(config, &MockBackend),
        BackendKind::Http => {
            let backend = HttpBackend::from_env(config.endpoint.clone(), config.retry.clone())?;
            run_with_backend(config, &backend)
        }
    }
}

struct Outcome {
    prompt: Result<Prompt, String>,
    answer: Result<String, String>,
}

pub fn run_with_backend(config: &RunConfig, backend: &dyn CompletionBackend) -> Result<RunReport, RunError> {
    config.validate()?;
    let test = load_question_set(&config.test_path, &config.batch_label())?;
    let training = match &config.training_path {
        Some(p) if config.strategy.is_few_shot() => Some(load_question_set(p, "training")?),
        _ => None,
    };
    let extract_cfg = config.extract_config.unwrap_or_default();
    let samples = prepare_samples(config, training.as_ref(), &test, &extract_cfg)?;

    let outcomes = process_questions(config, backend, &test, &samples, &extract_cfg);

    let mut answers = HashMap::new();
    for (q, o) in test.questions.iter().zip(&outcomes) {
        if let Ok(a) = &o.answer {
            if !q.ideal_answers.is_empty() {
                answers.insert(q.id.clone(), a.clone());
            }
        }
    }
    let opts = RougeOptions {
        stem: config.rouge_stem,
        ..RougeOptions::default()
    };
    let labelled = test.questions.iter().any(|q| !q.ideal_answers.is_empty());
    let evaluation = evaluate_run(&answers, &test, &opts)?;
    let by_id: HashMap<&str, _> = evaluation
        .scores
        .iter()
        .map(|s| (s.question_id.as_str(), s.score))
        .collect();

    let mut records = Vec::with_capacity(test.len());
    let mut warnings = 0;
    for (q, o) in test.questions.iter().zip(&outcomes) {
        let score = by_id.get(q.id.as_str());
        let mut w: Vec<String> = Vec::new();
        if let Ok(p) = &o.prompt {
            w.extend(p.warnings.iter().map(describe_warning));
        }
        warnings += w.len();
        let error = match (&o.prompt, &o.answer) {
            (Err(e), _) | (_, Err(e)) => Some(e.clone()),
            _ => None,
        };
        records.push(RunRecord {
            question_id: q.id.clone(),
            qtype: q.qtype,
            prompt_chars: o.prompt.as_ref().map(Prompt::char_len).unwrap_or(0),
            answer: o.answer.clone().unwrap_or_default(),
            precision: score.map(|s| s.precision),
            recall: score.map(|s| s.recall),
            f1: score.map(|s| s.f1),
            error,
            warnings: w,
        });
    }
    let errors = records.iter().filter(|r| r.error.is_some()).count();
    let report = RunReport {
        run_id: format!("{}-{}", config.strategy, test.label),
        strategy: config.strategy,
        batch: test.label.clone(),
        records,
        mean_f1: labelled.then_some(evaluation.mean_f1),
        errors,
        warnings,
    };
    write_artifacts(config, &test, &outcomes, &report)?;
    Ok(report)
}

fn describe_warning(w: &PromptWarning) -> String {
    match w {
        PromptWarning::NoSnippets => "no snippets".to_string(),
        PromptWarning::Truncated { dropped } => format!("dropped {dropped} item(s) to fit the character budget"),
        PromptWarning::OverBudget { chars, budget } => format!("prompt has {chars} chars, budget {budget}"),
    }
}

/// Few-shot samples per question type; the plain strategy shares one list
/// across all types.
fn prepare_samples(
    config: &RunConfig,
    training: Option<&QuestionSet>,
    test: &QuestionSet,
    extract_cfg: &ExtractConfig<f64>,
) -> Result<BTreeMap<Option<QuestionType>, Vec<FewShotSample>>, RunError> {
    let mut out = BTreeMap::new();
    let Some(training) = training else {
        return Ok(out);
    };
    match config.strategy {
        PromptStrategy::FewShotPlain => {
            out.insert(None, select_few_shot_samples(training, None, config.few_shot_n)?);
        }
        PromptStrategy::FewShotExtract => {
            let scorer = LexicalScorer::new(extract_cfg.position_weight);
            let needed: HashSet<QuestionType> = test.questions.iter().map(|q| q.qtype).collect();
            for qtype in QuestionType::ALL.into_iter().filter(|t| needed.contains(t)) {
                let picked = select_sample_questions(training, Some(qtype), config.few_shot_n, |q| {
                    !candidates_from_snippets(&q.snippets).is_empty()
                })?;
                let mut samples = Vec::with_capacity(picked.len());
                for q in picked {
                    let mut s = FewShotSample::from_question(q).expect("selected samples have answers");
                    s.extract = Some(summarize(q, extract_cfg, &scorer).map_err(|e| RunError::Config(e.to_string()))?);
                    samples.push(s);
                }
                out.insert(Some(qtype), samples);
            }
        }
        _ => {}
    }
    Ok(out)
}

fn build_for(
    config: &RunConfig,
    q: &Question,
    samples: &BTreeMap<Option<QuestionType>, Vec<FewShotSample>>,
    extract_cfg: &ExtractConfig<f64>,
) -> Result<Prompt, String> {
    let extract = if config.strategy.needs_extract() {
        let scorer = LexicalScorer::new(extract_cfg.position_weight);
        Some(summarize(q, extract_cfg, &scorer).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let key = config.strategy.filters_samples_by_type().then_some(q.qtype);
    let samples = samples.get(&key).map(Vec::as_slice).unwrap_or(&[]);
    build_prompt(
        config.strategy,
        q,
        extract.as_deref(),
        samples,
        Some(config.prompt_char_budget),
    )
    .map_err(|e| e.to_string())
}

fn process_questions(
    config: &RunConfig,
    backend: &dyn CompletionBackend,
    test: &QuestionSet,
    samples: &BTreeMap<Option<QuestionType>, Vec<FewShotSample>>,
    extract_cfg: &ExtractConfig<f64>,
) -> Vec<Outcome> {
    let n = test.len();
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Outcome>>> = Mutex::new((0..n).map(|_| None).collect());
    let workers = config.max_concurrency.min(n).max(1);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let q = &test.questions[i];
                let prompt = build_for(config, q, samples, extract_cfg);
                let answer = match &prompt {
                    Ok(p) => backend.complete(&p.text, &config.params).map_err(|e| e.to_string()),
                    Err(e) => Err(e.clone()),
                };
                if let Err(e) = &answer {
                    tracing::warn!(question = %q.id, error = %e, "question failed");
                }
                slots.lock().expect("result slots")[i] = Some(Outcome { prompt, answer });
            });
        }
    });
    slots
        .into_inner()
        .expect("result slots")
        .into_iter()
        .map(|o| o.expect("every question processed"))
        .collect()
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Serialize)]
struct Snapshot<'a> {
    created_unix: u64,
    #[serde(flatten)]
    config: &'a RunConfig,
}

fn write_artifacts(
    config: &RunConfig,
    test: &QuestionSet,
    outcomes: &[Outcome],
    report: &RunReport,
) -> Result<(), RunError> {
    let dir = &config.output_dir;
    let io_err = |name: &str| {
        let path = dir.join(name);
        move |source| RunError::Io { path, source }
    };

    let mut answers = String::new();
    let mut prompts = String::new();
    for (q, o) in test.questions.iter().zip(outcomes) {
        let rec = AnswerRecord {
            id: q.id.clone(),
            ideal_answer: o.answer.clone().unwrap_or_default(),
        };
        answers.push_str(&serde_json::to_string(&rec).expect("answer serialises"));
        answers.push('\n');

        match &o.prompt {
            Ok(p) => {
                prompts.push_str(&format!(
                    "===== {} | {} | {} chars | {} samples =====\n{}\n",
                    q.id,
                    p.strategy,
                    p.char_len(),
                    p.sample_count,
                    p.text
                ));
            }
            Err(e) => prompts.push_str(&format!("===== {} | {} | error =====\n{}\n", q.id, config.strategy, e)),
        }
    }

    write_atomic(&dir.join("answers.jsonl"), answers.as_bytes()).map_err(io_err("answers.jsonl"))?;
    write_atomic(&dir.join("prompts.log"), prompts.as_bytes()).map_err(io_err("prompts.log"))?;
    write_atomic(&dir.join("report.csv"), report_csv(report).as_bytes()).map_err(io_err("report.csv"))?;
    let json = serde_json::to_vec_pretty(report).expect("report serialises");
    write_atomic(&dir.join("report.json"), &json).map_err(io_err("report.json"))?;
    let snapshot = Snapshot {
        created_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config,
    };
    let json = serde_json::to_vec_pretty(&snapshot).expect("config serialises");
    write_atomic(&dir.join("config.snapshot.json"), &json).map_err(io_err("config.snapshot.json"))?;
    Ok(())
}

/// Reads `answers.jsonl` into an id → answer map. Blank lines are skipped.
pub fn read_answers_jsonl(path: &Path) -> Result<HashMap<String, String>, RunError> {
    let file = std::fs::File::open(path).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = HashMap::new();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let err = |message: String| RunError::Answers {
            path: PathBuf::from(path),
            line: i + 1,
            message,
        };
        let line = line.map_err(|e| err(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: AnswerRecord = serde_json::from_str(&line).map_err(|e| err(e.to_string()))?;
        if out.insert(rec.id.clone(), rec.ideal_answer).is_some() {
            return Err(err(format!("duplicate answer for {}", rec.id)));
        }
    }
    Ok(out)
}
