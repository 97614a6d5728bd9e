//! Rule-based sentence splitting for snippet-sized text.

/// Lower-cased final words that end in a period without ending a sentence.
const ABBREVIATIONS: &[&str] = &[
    "e.g.", "i.e.", "fig.", "figs.", "al.", "cf.", "vs.", "approx.", "ca.", "no.", "nos.", "ref.", "refs.", "eq.",
    "eqs.", "vol.", "dr.", "mr.", "mrs.", "ms.", "prof.", "st.", "jr.", "sr.", "inc.", "ltd.", "co.", "resp.", "sp.",
    "spp.", "viz.",
];

const TERMINALS: [char; 3] = ['.', '?', '!'];
const CLOSERS: [char; 7] = [')', ']', '"', '\'', '\u{2019}', '\u{201d}', '}'];

/// Splits `text` into sentences.
///
/// A boundary is a run of `.`, `?` or `!` (optionally followed by closing
/// brackets or quotes), then whitespace, then an uppercase letter or a digit.
/// A period closing a known abbreviation is not a boundary. Each line is
/// segmented on its own so text on different lines is never merged.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for line in text.split('\n') {
        split_line(line, &mut out);
    }
    out
}

fn split_line(line: &str, out: &mut Vec<String>) {
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let n = chars.len();
    let byte_at = |i: usize| if i < n { chars[i].0 } else { line.len() };

    let mut start = 0usize;
    let mut i = 0usize;
    while i < n {
        let c = chars[i].1;
        if !TERMINALS.contains(&c) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < n && (TERMINALS.contains(&chars[j].1) || CLOSERS.contains(&chars[j].1)) {
            j += 1;
        }
        if j < n && chars[j].1.is_whitespace() {
            let mut k = j;
            while k < n && chars[k].1.is_whitespace() {
                k += 1;
            }
            let opens_sentence = k < n && (chars[k].1.is_uppercase() || chars[k].1.is_ascii_digit());
            if opens_sentence && !(c == '.' && ends_with_abbreviation(&line[start..byte_at(i + 1)])) {
                push_trimmed(&line[start..byte_at(j)], out);
                start = byte_at(k);
                i = k;
                continue;
            }
        }
        i = j;
    }
    push_trimmed(&line[start..], out);
}

fn ends_with_abbreviation(segment: &str) -> bool {
    let word = segment
        .split_whitespace()
        .next_back()
        .unwrap_or("")
        .trim_start_matches(['(', '[', '"', '\'']);
    let word = word.to_lowercase();
    ABBREVIATIONS.contains(&word.as_str())
}

fn push_trimmed(s: &str, out: &mut Vec<String>) {
    let s = s.trim();
    if !s.is_empty() {
        out.push(s.to_string());
    }
}
