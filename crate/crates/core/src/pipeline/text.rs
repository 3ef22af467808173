//! Message tokenization and character n-grams.

/// Tokens and counters extracted from a user's messages.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tokens {
    /// Lower-cased letter runs outside links, mentions and hashtags.
    pub words: Vec<String>,
    /// Hashtag text without the `#`, lower-cased.
    pub hashtags: Vec<String>,
    pub mentions: u64,
    pub links: u64,
    pub retweets: u64,
}

fn letter_runs(s: &str, out: &mut Vec<String>) {
    let mut cur = String::new();
    for c in s.chars() {
        if c.is_alphabetic() {
            cur.extend(c.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
}

/// Whitespace tokens starting with `http` are links, `@` mentions and `#`
/// hashtags (the leading letter run after `#`). A message whose first token
/// is `RT` counts as a retweet and that token is dropped.
pub fn tokenize_tweets<S: AsRef<str>>(tweets: &[S]) -> Tokens {
    let mut t = Tokens::default();
    for tweet in tweets {
        let mut parts = tweet.as_ref().split_whitespace().peekable();
        if parts.peek() == Some(&"RT") {
            t.retweets += 1;
            parts.next();
        }
        for tok in parts {
            if tok.starts_with("http") {
                t.links += 1;
            } else if tok.starts_with('@') {
                t.mentions += 1;
            } else if let Some(tag) = tok.strip_prefix('#') {
                let tag: String = tag.chars().take_while(|c| c.is_alphabetic()).flat_map(char::to_lowercase).collect();
                if !tag.is_empty() {
                    t.hashtags.push(tag);
                }
            } else {
                letter_runs(tok, &mut t.words);
            }
        }
    }
    t
}

/// Contiguous character n-grams of `word`, in order, duplicates kept.
pub fn char_ngrams(word: &str, n: usize) -> Vec<String> {
    let chars: Vec<char> = word.chars().collect();
    if n == 0 || chars.len() < n {
        return Vec::new();
    }
    chars.windows(n).map(|w| w.iter().collect()).collect()
}
