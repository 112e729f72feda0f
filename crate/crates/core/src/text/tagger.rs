//! Lightweight rule-based tagger and lemmatizer.
//!
//! A deliberately small substitute for a probabilistic tagger: a closed-class
//! stop list, an exception lexicon for irregular forms
//! (`data/lemma_exceptions.tsv`), and suffix heuristics. It only has to pick
//! a coarse part of speech so that content words (nouns, verbs, adjectives,
//! adverbs) get a lemma; everything else keeps its surface form. The rules
//! are deterministic, so any word always maps to the same term — which is
//! what bag-of-lemma features actually require — even where the chosen lemma
//! differs from dictionary truth.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Coarse part of speech. Content words are the first four.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Other,
}

impl Pos {
    pub fn is_content(&self) -> bool {
        !matches!(self, Pos::Other)
    }
}

/// A tagged token: surface form, part of speech, and lemma. The lemma equals
/// the surface for non-content words, and is never empty when the surface is
/// non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub pos: Pos,
    pub lemma: String,
}

/// Closed-class words: determiners, pronouns, prepositions, conjunctions,
/// auxiliaries, and similar function words. Tagged `Other`, never
/// lemmatized, always kept as features.
const STOPWORDS: &[&str] = &[
    "a", "an", "the", "and", "or", "but", "nor", "so", "yet", "if", "then", "than", "that",
    "this", "these", "those", "there", "here", "when", "where", "why", "how", "what", "which",
    "who", "whom", "whose", "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "you",
    "your", "yours", "he", "him", "his", "she", "her", "hers", "it", "its", "they", "them",
    "their", "theirs", "of", "in", "on", "at", "by", "for", "with", "about", "against",
    "between", "into", "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "out", "off", "over", "under", "again", "once", "is", "am", "are", "was",
    "were", "be", "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing",
    "will", "would", "shall", "should", "can", "could", "may", "might", "must", "ought", "not",
    "no", "nor", "as", "while", "because", "until", "unless", "although", "though", "all",
    "any", "both", "each", "few", "more", "most", "other", "some", "such", "only", "own",
    "same", "too", "very", "just", "also", "now", "ever", "never", "via", "per", "vs",
];

fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| STOPWORDS.iter().copied().collect())
}

/// The checked-in irregular-form table: `surface<TAB>pos<TAB>lemma`.
const EXCEPTIONS_TSV: &str = include_str!("../../data/lemma_exceptions.tsv");

fn exceptions() -> &'static HashMap<&'static str, (Pos, &'static str)> {
    static MAP: OnceLock<HashMap<&'static str, (Pos, &'static str)>> = OnceLock::new();
    MAP.get_or_init(|| {
        let mut map = HashMap::new();
        for line in EXCEPTIONS_TSV.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split('\t');
            let surface = parts.next().expect("surface column");
            let pos = match parts.next().expect("pos column") {
                "noun" => Pos::Noun,
                "verb" => Pos::Verb,
                "adjective" => Pos::Adjective,
                "adverb" => Pos::Adverb,
                other => panic!("bad pos `{other}` in lemma_exceptions.tsv"),
            };
            let lemma = parts.next().expect("lemma column");
            map.insert(surface, (pos, lemma));
        }
        map
    })
}

fn is_numeric(word: &str) -> bool {
    !word.is_empty() && word.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',')
}

fn ends_with_any(word: &str, suffixes: &[&str]) -> bool {
    suffixes.iter().any(|s| word.ends_with(s))
}

fn tag(word: &str) -> Pos {
    if word.len() >= 4 && word.ends_with("ly") {
        return Pos::Adverb;
    }
    if word.len() >= 5 && word.ends_with("ing") {
        return Pos::Verb;
    }
    if word.len() >= 4 && word.ends_with("ed") {
        return Pos::Verb;
    }
    if word.len() >= 5
        && ends_with_any(word, &["ous", "ful", "ive", "less", "able", "ible", "ish"])
    {
        return Pos::Adjective;
    }
    if word.len() >= 4 && ends_with_any(word, &["al", "ic"]) {
        return Pos::Adjective;
    }
    if ends_with_any(
        word,
        &["tion", "sion", "ment", "ness", "ity", "ship", "ism", "ance", "ence", "hood"],
    ) {
        return Pos::Noun;
    }
    Pos::Noun
}

/// Drops a doubled trailing consonant left by stripping `-ing`/`-ed`
/// ("stopped" -> "stopp" -> "stop"); `ll` and `ss` stay.
fn undouble(stem: &str) -> &str {
    let bytes = stem.as_bytes();
    if bytes.len() >= 3 {
        let last = bytes[bytes.len() - 1];
        let prev = bytes[bytes.len() - 2];
        if last == prev && last.is_ascii_alphabetic() && !matches!(last, b'l' | b's' | b'e') {
            return &stem[..stem.len() - 1];
        }
    }
    stem
}

fn has_vowel(s: &str) -> bool {
    s.chars().any(|c| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y'))
}

/// Accepts a candidate stem only if it still looks like a word.
fn stem_or<'a>(candidate: &'a str, surface: &'a str) -> &'a str {
    if candidate.len() >= 2 && has_vowel(candidate) {
        candidate
    } else {
        surface
    }
}

fn verb_lemma(word: &str) -> String {
    if word.len() >= 5 && word.ends_with("ies") {
        return format!("{}y", &word[..word.len() - 3]);
    }
    if word.len() >= 5 && word.ends_with("ied") {
        return format!("{}y", &word[..word.len() - 3]);
    }
    if word.len() >= 5 && word.ends_with("ing") {
        let stem = undouble(&word[..word.len() - 3]);
        return stem_or(stem, word).to_string();
    }
    if word.len() >= 4 && word.ends_with("ed") {
        let stem = undouble(&word[..word.len() - 2]);
        return stem_or(stem, word).to_string();
    }
    if word.len() >= 3
        && word.ends_with('s')
        && !ends_with_any(word, &["ss", "us", "is"])
    {
        return stem_or(&word[..word.len() - 1], word).to_string();
    }
    word.to_string()
}

fn noun_lemma(word: &str) -> String {
    if word.len() >= 5 && word.ends_with("ies") {
        return format!("{}y", &word[..word.len() - 3]);
    }
    if word.len() >= 5 && word.ends_with("ves") {
        return format!("{}f", &word[..word.len() - 3]);
    }
    if word.len() >= 5 && ends_with_any(word, &["ses", "xes", "zes", "ches", "shes"]) {
        return word[..word.len() - 2].to_string();
    }
    if word.len() >= 3
        && word.ends_with('s')
        && !ends_with_any(word, &["ss", "us", "is"])
    {
        return stem_or(&word[..word.len() - 1], word).to_string();
    }
    word.to_string()
}

fn lemmatize(word: &str, pos: Pos) -> String {
    let lemma = match pos {
        Pos::Verb => verb_lemma(word),
        Pos::Noun => noun_lemma(word),
        // Comparatives and irregular adverbs come from the exception table;
        // regular adjectives and adverbs are already citation forms.
        Pos::Adjective | Pos::Adverb | Pos::Other => word.to_string(),
    };
    if lemma.is_empty() {
        word.to_string()
    } else {
        lemma
    }
}

/// Tags each token and replaces content words by their lemma. Resolution
/// order: stop list, exception lexicon, numeral check, suffix heuristics
/// (defaulting to noun).
pub fn tag_and_lemmatize(tokens: &[String]) -> Vec<Token> {
    tokens
        .iter()
        .map(|surface| {
            let word = surface.as_str();
            if stopwords().contains(word) || is_numeric(word) {
                return Token {
                    surface: surface.clone(),
                    pos: Pos::Other,
                    lemma: surface.clone(),
                };
            }
            if let Some(&(pos, lemma)) = exceptions().get(word) {
                return Token {
                    surface: surface.clone(),
                    pos,
                    lemma: lemma.to_string(),
                };
            }
            let pos = tag(word);
            Token {
                surface: surface.clone(),
                pos,
                lemma: lemmatize(word, pos),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(word: &str) -> Token {
        tag_and_lemmatize(&[word.to_string()]).remove(0)
    }

    #[test]
    fn regular_plural_noun() {
        let t = one("cats");
        assert_eq!(t.pos, Pos::Noun);
        assert_eq!(t.lemma, "cat");
    }

    #[test]
    fn irregular_verb_from_exception_table() {
        // The table itself is the oracle here.
        let expected = EXCEPTIONS_TSV
            .lines()
            .find(|l| l.starts_with("ran\t"))
            .and_then(|l| l.split('\t').nth(2))
            .expect("`ran` in exception table");
        let t = one("ran");
        assert_eq!(t.pos, Pos::Verb);
        assert_eq!(t.lemma, expected);
        assert_eq!(t.lemma, "run");
    }

    #[test]
    fn stopword_passes_through() {
        let t = one("the");
        assert_eq!(t.pos, Pos::Other);
        assert_eq!(t.lemma, "the");
    }

    #[test]
    fn numerals_are_other() {
        let t = one("2009");
        assert_eq!(t.pos, Pos::Other);
        assert_eq!(t.lemma, "2009");
    }

    #[test]
    fn suffix_heuristics() {
        assert_eq!(one("quickly").pos, Pos::Adverb);
        assert_eq!(one("running").lemma, "run");
        assert_eq!(one("stopped").lemma, "stop");
        assert_eq!(one("studies").lemma, "study");
        assert_eq!(one("wolves").lemma, "wolf");
        assert_eq!(one("boxes").lemma, "box");
        assert_eq!(one("famous").pos, Pos::Adjective);
        assert_eq!(one("movement").pos, Pos::Noun);
    }

    #[test]
    fn lemma_never_empty() {
        for word in ["s", "ss", "es", "ing", "ed", "a1", "x"] {
            let t = one(word);
            assert!(!t.lemma.is_empty(), "empty lemma for {word:?}");
        }
    }
}
