//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use super::{read_answers_jsonl, render_table, run_experiment, RunConfig, RunReport};
use crate::dataset::{load_question_set, statistics, CorpusStats};
use crate::extractive::{candidates_from_snippets, summarize, ExtractConfig, LexicalScorer};
use crate::metrics::{evaluate_run, write_csv, RougeOptions};
use crate::prompts::{build_prompt, select_few_shot_samples, select_sample_questions, FewShotSample, PromptStrategy};

#[derive(Debug, Parser)]
#[command(
    name = "bioqa",
    version,
    about = "Prompted answers to BioASQ questions, scored with ROUGE-SU4"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StatsFormat {
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Question counts per type for one or more BioASQ files.
    Stats {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: StatsFormat,
    },
    /// Run one experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Score an answers file against golden answers.
    Eval {
        #[arg(long)]
        answers: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        /// Write the per-question CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Porter-stem tokens before matching.
        #[arg(long)]
        stem: bool,
    },
    /// Print the prompt one strategy renders for one question.
    Prompt {
        #[arg(long)]
        strategy: PromptStrategy,
        #[arg(long = "question-id")]
        question_id: String,
        /// BioASQ file containing the question.
        #[arg(long)]
        questions: PathBuf,
        /// Training file for the few-shot strategies.
        #[arg(long)]
        training: Option<PathBuf>,
        #[arg(long, default_value_t = crate::prompts::DEFAULT_FEW_SHOT_N)]
        n: usize,
        #[arg(long, default_value_t = crate::prompts::DEFAULT_CHAR_BUDGET)]
        budget: usize,
        /// Use this text as the extract instead of computing one.
        #[arg(long)]
        extract: Option<String>,
    },
    /// Merge `report.json` files into one results table.
    Table {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn label_for(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn execute(command: Command) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Stats { files, format } => {
            let mut rows = Vec::new();
            for f in &files {
                let label = label_for(f);
                let set = load_question_set(f, &label)?;
                rows.push((label, statistics(&set)));
            }
            match format {
                StatsFormat::Text => {
                    let borrowed: Vec<(&str, CorpusStats)> = rows.iter().map(|(l, s)| (l.as_str(), *s)).collect();
                    write!(out, "{}", CorpusStats::render_table(&borrowed))?;
                }
                StatsFormat::Csv => {
                    writeln!(out, "{}", CorpusStats::csv_header())?;
                    for (l, s) in &rows {
                        writeln!(out, "{}", s.csv_row(l))?;
                    }
                }
            }
        }
        Command::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            let report = run_experiment(&cfg)?;
            writeln!(
                out,
                "run {}: {} questions, {} errors, {} warnings",
                report.run_id,
                report.records.len(),
                report.errors,
                report.warnings
            )?;
            write!(out, "{}", render_table(std::slice::from_ref(&report)))?;
            writeln!(out, "artifacts in {}", cfg.output_dir.display())?;
        }
        Command::Eval {
            answers,
            gold,
            out: csv_path,
            stem,
        } => {
            let answers = read_answers_jsonl(&answers)?;
            let gold = load_question_set(&gold, &label_for(&gold))?;
            let opts = RougeOptions {
                stem,
                ..RougeOptions::default()
            };
            let eval = evaluate_run(&answers, &gold, &opts)?;
            if let Some(p) = csv_path {
                let f = std::fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                write_csv(&eval.scores, eval.mean_f1, f)?;
            }
            writeln!(
                out,
                "scored {} questions ({} unanswered)",
                eval.scores.len(),
                eval.unanswered.len()
            )?;
            writeln!(out, "mean ROUGE-SU4 F1: {:.3}", eval.mean_f1)?;
        }
        Command::Prompt {
            strategy,
            question_id,
            questions,
            training,
            n,
            budget,
            extract,
        } => {
            let set = load_question_set(&questions, &label_for(&questions))?;
            let Some(q) = set.get(&question_id) else {
                bail!("question {question_id} not found in {}", questions.display());
            };
            let cfg = ExtractConfig::<f64>::default();
            let scorer = LexicalScorer::new(cfg.position_weight);
            let extract = match (strategy.needs_extract(), extract) {
                (false, _) => None,
                (true, Some(e)) => Some(e),
                (true, None) => Some(summarize(q, &cfg, &scorer)?),
            };
            let samples: Vec<FewShotSample> = match strategy {
                PromptStrategy::FewShotPlain | PromptStrategy::FewShotExtract => {
                    let Some(tp) = training else {
                        bail!("strategy {strategy} needs --training");
                    };
                    let training = load_question_set(&tp, "training")?;
                    if strategy == PromptStrategy::FewShotPlain {
                        select_few_shot_samples(&training, None, n)?
                    } else {
                        let picked = select_sample_questions(&training, Some(q.qtype), n, |t| {
                            !candidates_from_snippets(&t.snippets).is_empty()
                        })?;
                        picked
                            .into_iter()
                            .map(|t| -> Result<FewShotSample> {
                                let mut s = FewShotSample::from_question(t).expect("selected samples have answers");
                                s.extract = Some(summarize(t, &cfg, &scorer)?);
                                Ok(s)
                            })
                            .collect::<Result<_>>()?
                    }
                }
                _ => Vec::new(),
            };
            let prompt = build_prompt(strategy, q, extract.as_deref(), &samples, Some(budget))?;
            for w in &prompt.warnings {
                eprintln!("warning: {w:?}");
            }
            out.write_all(prompt.text.as_bytes())?;
        }
        Command::Table { reports } => {
            let mut loaded = Vec::new();
            for p in &reports {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                let r: RunReport = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
                loaded.push(r);
            }
            write!(out, "{}", render_table(&loaded))?;
        }
    }
    out.flush()?;
    Ok(())
}
