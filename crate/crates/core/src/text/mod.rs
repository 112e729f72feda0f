//! Text pipeline: tokenization, tagging/lemmatization, and sparse features.
//!
//! The pipeline turns a story's title + snippet into a sparse bag-of-lemma
//! vector: tokenize, assign a coarse part of speech, replace content words
//! (nouns, verbs, adjectives, adverbs) by their lemma, and map the resulting
//! terms through a vocabulary built from training stories only. No frequency
//! cutoff or feature selection is applied.

mod features;
mod tagger;
mod tokenizer;

pub use features::{
    build_vocabulary, story_terms, vectorize, write_svmlight, write_vocab_tsv, FeatureConfig,
    FeatureVector, Vocabulary, Weighting,
};
pub use tagger::{tag_and_lemmatize, Pos, Token};
pub use tokenizer::tokenize;

/// Tokenize + tag + lemmatize in one call.
pub fn analyze(text: &str) -> Vec<Token> {
    tag_and_lemmatize(&tokenize(text))
}
