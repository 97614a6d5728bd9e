use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::RunError;
use crate::extractive::ExtractConfig;
use crate::llm_client::{EndpointConfig, GenerationParams, RetryPolicy};
use crate::prompts::{PromptStrategy, DEFAULT_CHAR_BUDGET, DEFAULT_FEW_SHOT_N};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Http,
    Mock,
}

/// One experimental run: a strategy applied to one test batch.
///
/// Relative paths in a config file are resolved against the file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub strategy: PromptStrategy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training_path: Option<PathBuf>,
    pub test_path: PathBuf,
    /// Batch label used in reports; defaults to the test file stem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_label: Option<String>,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub params: GenerationParams,
    #[serde(default = "default_few_shot_n")]
    pub few_shot_n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extract_config: Option<ExtractConfig<f64>>,
    pub backend: BackendKind,
    #[serde(default)]
    pub endpoint: EndpointConfig,
    #[serde(default)]
    pub retry: RetryPolicy,
    #[serde(default = "default_concurrency")]
    pub max_concurrency: usize,
    #[serde(default = "default_budget")]
    pub prompt_char_budget: usize,
    /// Apply Porter stemming before ROUGE matching.
    #[serde(default)]
    pub rouge_stem: bool,
}

fn default_few_shot_n() -> usize {
    DEFAULT_FEW_SHOT_N
}

fn default_concurrency() -> usize {
    4
}

fn default_budget() -> usize {
    DEFAULT_CHAR_BUDGET
}

impl RunConfig {
    /// A config with defaults for everything but the essentials.
    pub fn new(strategy: PromptStrategy, test_path: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            strategy,
            training_path: None,
            test_path: test_path.into(),
            test_label: None,
            output_dir: output_dir.into(),
            params: GenerationParams::default(),
            few_shot_n: DEFAULT_FEW_SHOT_N,
            extract_config: strategy.needs_extract().then(ExtractConfig::default),
            backend: BackendKind::Mock,
            endpoint: EndpointConfig::default(),
            retry: RetryPolicy::default(),
            max_concurrency: default_concurrency(),
            prompt_char_budget: DEFAULT_CHAR_BUDGET,
            rouge_stem: false,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RunError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        if let Some(dir) = path.parent() {
            cfg.resolve_relative_to(dir);
        }
        Ok(cfg)
    }

    fn resolve_relative_to(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        fix(&mut self.test_path);
        fix(&mut self.output_dir);
        if let Some(t) = self.training_path.as_mut() {
            fix(t);
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |m: String| Err(RunError::Config(m));
        if self.strategy.is_few_shot() && self.training_path.is_none() {
            return bad(format!("strategy {} requires training_path", self.strategy));
        }
        if self.strategy.needs_extract() {
            match &self.extract_config {
                None => return bad(format!("strategy {} requires extract_config", self.strategy)),
                Some(e) => e.validate().map_err(|e| RunError::Config(e.to_string()))?,
            }
        }
        if self.max_concurrency == 0 {
            return bad("max_concurrency must be at least 1".into());
        }
        if self.prompt_char_budget == 0 {
            return bad("prompt_char_budget must be positive".into());
        }
        self.params.validate().map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn batch_label(&self) -> String {
        self.test_label.clone().unwrap_or_else(|| {
            self.test_path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "test".to_string())
        })
    }
}
