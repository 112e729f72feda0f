//! Corpus analytics for text virality in social-bookmarking data.
//!
//! The crate covers the full pipeline from raw story/comment files to
//! cross-validated classification reports:
//!
//! - [`corpus`] — data model, line-delimited ingestion, validation, and a
//!   seeded synthetic-corpus generator with planted lexical signals
//! - [`metrics`] — per-story aggregate counts and the six virality metrics
//!   (appreciation, buzz/spreading, raising-discussion, controversiality,
//!   white/black buzz polarity)
//! - [`dataset`] — threshold labeling, balanced positive/negative dataset
//!   construction, and the class-overlap matrix
//! - [`text`] — tokenizer, rule-based tagger/lemmatizer, and sparse
//!   bag-of-lemma feature vectors
//! - [`svm`] — soft-margin linear SVM trained by seeded subgradient descent
//! - [`eval`] — stratified k-fold cross-validation, precision/recall/F1
//!   reporting, and fold-hygiene audits
//!
//! All randomness is driven by explicit seeds; identical seeds produce
//! identical outputs across runs and platforms.

pub mod corpus;
pub mod dataset;
pub mod eval;
pub mod metrics;
pub mod svm;
pub mod text;

pub use corpus::{load_corpus, validate_corpus, write_corpus, Comment, Corpus, Emotion, Story};
pub use corpus::{generate_synthetic, SynthConfig, SyntheticCorpus, TruthRecord};
pub use dataset::{
    build_balanced, default_rules, label_metric, overlap_matrix, LabelRule, LabeledDataset,
    NegativePool, OverlapMatrix, Thresholds,
};
pub use eval::{cross_validate, f1_score, kfold_split, report_table, CvConfig, EvalReport};
pub use metrics::{
    buzz_polarity, comment_stats, compute_all_metrics, controversiality_score,
    raising_discussion_score, CommentStats, MetricKind, Polarity, Rational, StoryMetrics,
};
pub use svm::{HyperParams, SvmModel};
pub use text::{build_vocabulary, tag_and_lemmatize, tokenize, vectorize, FeatureVector, Vocabulary};

/// SplitMix64 step, used to derive independent sub-seeds from a base seed.
///
/// Seed derivation is part of the reproducibility contract: fold and
/// per-metric seeds are `mix_seed(base, salt)` with documented salts.
pub fn mix_seed(base: u64, salt: u64) -> u64 {
    let mut z = base ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
