//! Brute-force ROUGE-SU reference, written without any of the crate's code.

/// Lower-case, split on non-alphanumerics.
pub fn words(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() {
            for l in c.to_lowercase() {
                cur.push(l);
            }
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Every ordered index pair with at most `gap` tokens in between.
pub fn pairs(tokens: &[String], gap: usize) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for i in 0..tokens.len() {
        for j in 0..tokens.len() {
            if j > i && j - i - 1 <= gap {
                out.push((tokens[i].clone(), tokens[j].clone()));
            }
        }
    }
    out
}

/// Greedy one-to-one matching of equal items: the clipped intersection size.
fn greedy_matches<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut used = vec![false; b.len()];
    let mut n = 0;
    for x in a {
        for (k, y) in b.iter().enumerate() {
            if !used[k] && x == y {
                used[k] = true;
                n += 1;
                break;
            }
        }
    }
    n
}

/// (matches, candidate units, reference units)
pub fn su_counts(cand: &[String], refr: &[String], gap: usize) -> (usize, usize, usize) {
    if cand.is_empty() || refr.is_empty() {
        return (0, 0, 0);
    }
    let (cp, rp) = (pairs(cand, gap), pairs(refr, gap));
    let m = greedy_matches(cand, refr) + greedy_matches(&cp, &rp);
    (m, cand.len() + cp.len(), refr.len() + rp.len())
}

/// (precision, recall, f1)
pub fn su_score(cand: &[String], refr: &[String], gap: usize) -> (f64, f64, f64) {
    let (m, c, r) = su_counts(cand, refr, gap);
    let p = if c == 0 { 0.0 } else { m as f64 / c as f64 };
    let rc = if r == 0 { 0.0 } else { m as f64 / r as f64 };
    let f = if p + rc == 0.0 { 0.0 } else { 2.0 * p * rc / (p + rc) };
    (p, rc, f)
}

pub fn su4_text(cand: &str, refr: &str) -> (f64, f64, f64) {
    su_score(&words(cand), &words(refr), 4)
}

/// Plain contiguous-bigram ROUGE with unigrams, for the skip-distance-0 check.
pub fn bigram_plus_unigram(cand: &[String], refr: &[String]) -> (f64, f64, f64) {
    if cand.is_empty() || refr.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let cb: Vec<_> = cand.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    let rb: Vec<_> = refr.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    let m = greedy_matches(cand, refr) + greedy_matches(&cb, &rb);
    let p = m as f64 / (cand.len() + cb.len()) as f64;
    let r = m as f64 / (refr.len() + rb.len()) as f64;
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f)
}

/// Deterministic token sequences over a small alphabet.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    pub fn tokens(&mut self, max_len: u64, alphabet: u64) -> Vec<String> {
        let len = self.below(max_len + 1);
        (0..len).map(|_| format!("w{}", self.below(alphabet))).collect()
    }
}
