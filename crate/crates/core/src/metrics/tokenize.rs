use std::fmt;

/// A normalised, non-empty, whitespace-free token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(String);

impl Token {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Lower-cases and splits on every maximal run of non-alphanumeric characters.
pub fn tokenize(text: &str) -> Vec<Token> {
    tokenize_with(text, false)
}

/// As [`tokenize`], optionally reducing each token with the Porter stemmer.
pub fn tokenize_with(text: &str, stem: bool) -> Vec<Token> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| {
            let lower = w.to_lowercase();
            if stem {
                Token(porter_stemmer::stem(&lower))
            } else {
                Token(lower)
            }
        })
        .collect()
}
