use super::{BackendError, CompletionBackend, GenerationParams};
use crate::dataset::split_sentences;

pub const MOCK_ANSWER: &str = "MOCK ANSWER";

/// Answers with the first sentence of the last `Text:` or `Snippets:`
/// section, or [`MOCK_ANSWER`] when the prompt has no context.
pub fn mock_complete(prompt: &str, _params: &GenerationParams) -> String {
    let marker_end = ["Text:", "Snippets:"]
        .iter()
        .filter_map(|m| prompt.rfind(m).map(|i| i + m.len()))
        .max();
    let Some(start) = marker_end else {
        return MOCK_ANSWER.to_string();
    };
    let first_line = prompt[start..].lines().map(str::trim).find(|l| !l.is_empty());
    match first_line {
        Some(line) if !line.starts_with("Q:") => {
            let line = line.strip_prefix("- ").unwrap_or(line);
            split_sentences(line)
                .into_iter()
                .next()
                .unwrap_or_else(|| MOCK_ANSWER.to_string())
        }
        _ => MOCK_ANSWER.to_string(),
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct MockBackend;

impl CompletionBackend for MockBackend {
    fn complete(&self, prompt: &str, params: &GenerationParams) -> Result<String, BackendError> {
        Ok(mock_complete(prompt, params))
    }
}
