//! Deterministic word tokenizer.
//!
//! Rules, in order:
//! 1. Unicode NFC normalization (canonical composed form)
//! 2. lowercasing
//! 3. split on whitespace
//! 4. strip leading and trailing non-alphanumeric characters from each
//!    chunk; interior punctuation (apostrophes, hyphens) is kept
//! 5. drop chunks that end up empty
//!
//! So `"Apple's iPhone 4!"` becomes `["apple's", "iphone", "4"]`. The
//! tokenizer is idempotent on its own space-joined output.

use unicode_normalization::UnicodeNormalization;

/// Splits raw text into lowercased word tokens per the module rules.
pub fn tokenize(text: &str) -> Vec<String> {
    let normalized: String = text.nfc().collect::<String>().to_lowercase();
    normalized
        .split_whitespace()
        .filter_map(|chunk| {
            let trimmed = chunk.trim_matches(|c: char| !c.is_alphanumeric());
            if trimmed.is_empty() {
                None
            } else {
                Some(trimmed.to_string())
            }
        })
        .collect()
}
