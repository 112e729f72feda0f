//! Vocabulary construction and sparse bag-of-lemma vectors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::Story;
use crate::text::analyze;

/// Feature value semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// 1.0 per distinct term (the default for short-text classification).
    #[default]
    Presence,
    /// Term occurrence count.
    Count,
}

/// Pipeline configuration shared by vocabulary building and vectorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub weighting: Weighting,
    /// Prefix terms with their field (`t:`/`s:`) instead of pooling title
    /// and snippet into one bag.
    pub field_prefix: bool,
}

/// The terms of one story under `cfg`: title and snippet tokenized, content
/// words replaced by lemmas, field prefixes applied when configured.
pub fn story_terms(story: &Story, cfg: &FeatureConfig) -> Vec<String> {
    if cfg.field_prefix {
        let mut terms = Vec::new();
        for token in analyze(&story.title) {
            terms.push(format!("t:{}", token.lemma));
        }
        for token in analyze(&story.snippet) {
            terms.push(format!("s:{}", token.lemma));
        }
        terms
    } else {
        let text = format!("{} {}", story.title, story.snippet);
        analyze(&text).into_iter().map(|t| t.lemma).collect()
    }
}

/// A frozen term -> index mapping, dense and 0-based, in lexicographic term
/// order. Built from training stories only; no frequency cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(term)
    }
}

/// Builds the vocabulary of every distinct term in the given stories.
/// Deterministic: indices follow lexicographic term order.
pub fn build_vocabulary<'a, I>(stories: I, cfg: &FeatureConfig) -> Vocabulary
where
    I: IntoIterator<Item = &'a Story>,
{
    let mut distinct = BTreeSet::new();
    for story in stories {
        for term in story_terms(story, cfg) {
            distinct.insert(term);
        }
    }
    let terms: Vec<String> = distinct.into_iter().collect();
    let index = terms
        .iter()
        .enumerate()
        .map(|(ix, term)| (term.clone(), ix))
        .collect();
    Vocabulary { terms, index }
}

/// A sparse feature vector: strictly increasing indices, positive values.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureVector(Vec<(usize, f64)>);

impl FeatureVector {
    /// Builds from (index, value) pairs; indices must be strictly increasing
    /// and values finite and nonzero. Vectors produced by [`vectorize`] are
    /// additionally always positive-valued.
    pub fn from_pairs(pairs: Vec<(usize, f64)>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(pairs.iter().all(|&(_, v)| v != 0.0 && v.is_finite()));
        FeatureVector(pairs)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0.iter().copied()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().map(|&(ix, _)| ix)
    }

    /// Sum of squared values; with presence weighting this is the number of
    /// active features, computed exactly.
    pub fn squared_norm(&self) -> f64 {
        self.0.iter().map(|&(_, v)| v * v).sum()
    }
}

/// Maps a story through the pipeline and vocabulary. Out-of-vocabulary
/// terms are dropped; duplicate terms never produce duplicate indices.
pub fn vectorize(story: &Story, vocab: &Vocabulary, cfg: &FeatureConfig) -> FeatureVector {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for term in story_terms(story, cfg) {
        if let Some(ix) = vocab.index_of(&term) {
            *counts.entry(ix).or_insert(0.0) += 1.0;
        }
    }
    let pairs = counts
        .into_iter()
        .map(|(ix, count)| match cfg.weighting {
            Weighting::Presence => (ix, 1.0),
            Weighting::Count => (ix, count),
        })
        .collect();
    FeatureVector::from_pairs(pairs)
}

/// Writes `index<TAB>term` lines.
pub fn write_vocab_tsv<W: Write>(mut writer: W, vocab: &Vocabulary) -> std::io::Result<()> {
    for (ix, term) in vocab.terms().enumerate() {
        writeln!(writer, "{ix}\t{term}")?;
    }
    Ok(())
}

/// Writes the classifier-interchange text format: one example per line,
/// `label index:value ...` with strictly increasing 1-based indices.
pub fn write_svmlight<W: Write>(
    mut writer: W,
    examples: &[(FeatureVector, i8)],
) -> std::io::Result<()> {
    for (vector, label) in examples {
        let mut line = format!("{:+}", label);
        for (ix, value) in vector.iter() {
            line.push_str(&format!(" {}:{}", ix + 1, value));
        }
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn story(title: &str, snippet: &str) -> Story {
        Story {
            id: "s".into(),
            title: title.into(),
            snippet: snippet.into(),
            digg_count: 0,
        }
    }

    #[test]
    fn vocabulary_counts_distinct_terms() {
        let s = story("a a b", "");
        let vocab = build_vocabulary([&s], &FeatureConfig::default());
        assert_eq!(vocab.len(), 2);
    }

    #[test]
    fn vocabulary_is_deterministic() {
        let stories = [story("cats dogs", "birds"), story("zebra", "apple cats")];
        let cfg = FeatureConfig::default();
        let a = build_vocabulary(stories.iter(), &cfg);
        let b = build_vocabulary(stories.iter(), &cfg);
        assert_eq!(a, b);
        let mut sorted: Vec<&str> = a.terms().collect();
        sorted.sort();
        assert_eq!(a.terms().collect::<Vec<_>>(), sorted);
    }

    #[test]
    fn oov_terms_drop_to_empty_vector() {
        let train = story("cat dog", "");
        let vocab = build_vocabulary([&train], &FeatureConfig::default());
        let test = story("zebra quagga", "okapi");
        let v = vectorize(&test, &vocab, &FeatureConfig::default());
        assert!(v.is_empty());
    }

    #[test]
    fn presence_weighting_dedupes() {
        let train = story("cat dog", "");
        let cfg = FeatureConfig::default();
        let vocab = build_vocabulary([&train], &cfg);
        let test = story("cat cat dog", "");
        let v = vectorize(&test, &vocab, &cfg);
        let pairs: Vec<(usize, f64)> = v.iter().collect();
        assert_eq!(pairs.len(), 2);
        assert!(pairs.iter().all(|&(_, value)| value == 1.0));
    }

    #[test]
    fn count_weighting_counts() {
        let train = story("cat dog", "");
        let cfg = FeatureConfig {
            weighting: Weighting::Count,
            field_prefix: false,
        };
        let vocab = build_vocabulary([&train], &cfg);
        let v = vectorize(&story("cat cat dog", ""), &vocab, &cfg);
        let values: Vec<f64> = v.iter().map(|(_, value)| value).collect();
        assert_eq!(values, vec![2.0, 1.0]);
    }

    #[test]
    fn field_prefix_separates_title_and_snippet() {
        let s = story("cat", "cat");
        let cfg = FeatureConfig {
            weighting: Weighting::Presence,
            field_prefix: true,
        };
        let vocab = build_vocabulary([&s], &cfg);
        assert_eq!(vocab.len(), 2);
        assert!(vocab.contains("t:cat") && vocab.contains("s:cat"));
    }

    #[test]
    fn word_order_does_not_change_presence_vector() {
        let train = story("cat dog bird", "");
        let cfg = FeatureConfig::default();
        let vocab = build_vocabulary([&train], &cfg);
        let a = vectorize(&story("cat dog bird", ""), &vocab, &cfg);
        let b = vectorize(&story("bird cat dog", ""), &vocab, &cfg);
        assert_eq!(a, b);
    }

    #[test]
    fn svmlight_lines_are_one_based() {
        let v = FeatureVector::from_pairs(vec![(0, 1.0), (4, 2.0)]);
        let mut out = Vec::new();
        write_svmlight(&mut out, &[(v, -1)]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "-1 1:1 5:2\n");
    }
}
