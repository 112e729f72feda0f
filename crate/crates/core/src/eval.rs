//! Stratified k-fold cross-validation and F1 reporting.
//!
//! The protocol: per fold, a vocabulary is built from the training fold's
//! stories only, train and test stories are vectorized through it, a linear
//! SVM is trained, and the test fold is scored on the positive class. The
//! headline number is the mean of per-fold F1; the pooled-confusion F1 is
//! also reported. Everything is deterministic for fixed seeds, including
//! the per-fold SVM seeds, which derive from the evaluation seed via
//! [`mix_seed`](crate::mix_seed).

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Story};
use crate::dataset::LabeledDataset;
use crate::metrics::MetricKind;
use crate::mix_seed;
use crate::svm::{self, HyperParams, SvmError};
use crate::text::{build_vocabulary, story_terms, vectorize, FeatureConfig, FeatureVector};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("invalid parameter: {message}")]
    Param { message: String },
    #[error("dataset story `{story_id}` not present in the corpus")]
    UnknownStory { story_id: String },
    #[error(transparent)]
    Svm(#[from] SvmError),
}

/// One train/test split. Both id lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

/// A stratified k-fold partition: test folds are pairwise disjoint, cover
/// the dataset, and preserve the class ratio to within one example per
/// class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<Fold>,
}

/// Stratified split: each class is sorted, Fisher–Yates-shuffled with a
/// ChaCha8 stream seeded by `seed` (positives first, the stream continuing
/// into the negatives), and dealt round-robin over the `k` test folds, the
/// negatives starting where the positives stopped.
pub fn kfold_split(ids: &[(String, i8)], k: usize, seed: u64) -> Result<FoldPlan, EvalError> {
    if k < 2 {
        return Err(EvalError::Param {
            message: format!("k must be >= 2, got {k}"),
        });
    }
    if ids.len() < k {
        return Err(EvalError::Param {
            message: format!("dataset of {} examples cannot fill {k} folds", ids.len()),
        });
    }
    let mut distinct = BTreeSet::new();
    for (id, label) in ids {
        if !matches!(label, 1 | -1) {
            return Err(EvalError::Param {
                message: format!("labels must be +1 or -1, got {label}"),
            });
        }
        if !distinct.insert(id.as_str()) {
            return Err(EvalError::Param {
                message: format!("duplicate id `{id}`"),
            });
        }
    }
    let mut positives: Vec<&str> = ids
        .iter()
        .filter(|(_, y)| *y == 1)
        .map(|(id, _)| id.as_str())
        .collect();
    let mut negatives: Vec<&str> = ids
        .iter()
        .filter(|(_, y)| *y == -1)
        .map(|(id, _)| id.as_str())
        .collect();
    if positives.is_empty() || negatives.is_empty() {
        return Err(EvalError::Param {
            message: "both classes must be present".into(),
        });
    }
    positives.sort_unstable();
    negatives.sort_unstable();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffle = |items: &mut Vec<&str>| {
        for i in (1..items.len()).rev() {
            let j = rng.random_range(0..=i);
            items.swap(i, j);
        }
    };
    shuffle(&mut positives);
    shuffle(&mut negatives);

    let mut test_sets: Vec<Vec<&str>> = vec![Vec::new(); k];
    for (i, id) in positives.iter().enumerate() {
        test_sets[i % k].push(id);
    }
    let offset = positives.len() % k;
    for (j, id) in negatives.iter().enumerate() {
        test_sets[(offset + j) % k].push(id);
    }

    let all: BTreeSet<&str> = distinct;
    let folds = test_sets
        .into_iter()
        .map(|mut test| {
            test.sort_unstable();
            let test_set: BTreeSet<&str> = test.iter().copied().collect();
            let train: Vec<String> = all
                .iter()
                .filter(|id| !test_set.contains(*id))
                .map(|id| id.to_string())
                .collect();
            Fold {
                train,
                test: test.into_iter().map(String::from).collect(),
            }
        })
        .collect();
    Ok(FoldPlan { k, seed, folds })
}

/// Precision, recall, and F1 on the positive class. Any 0/0 is 0 by
/// convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub fn f1_score(tp: u64, fp: u64, fn_: u64) -> Scores {
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Scores {
        precision,
        recall,
        f1,
    }
}

/// Confusion counts and scores for one fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// The C the trainer actually used on this fold.
    pub c_resolved: f64,
}

/// Pooled confusion over all folds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PooledReport {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// The full cross-validation result for one metric's dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub metric: MetricKind,
    pub k: usize,
    pub seed: u64,
    pub hyperparams: HyperParams,
    pub features: FeatureConfig,
    pub folds: Vec<FoldReport>,
    /// Mean of per-fold F1 — the headline number.
    pub f1_mean: f64,
    /// Population standard deviation of per-fold F1.
    pub f1_sd: f64,
    pub pooled: PooledReport,
}

/// Evaluation configuration: fold count, seed, solver hyperparameters, and
/// the feature pipeline settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvConfig {
    pub k: usize,
    pub seed: u64,
    pub hyperparams: HyperParams,
    pub features: FeatureConfig,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            k: 10,
            seed: 0,
            hyperparams: HyperParams::default(),
            features: FeatureConfig::default(),
        }
    }
}

fn lookup_stories<'a>(
    corpus: &'a Corpus,
    ids: &[String],
) -> Result<Vec<&'a Story>, EvalError> {
    ids.iter()
        .map(|id| {
            corpus.story(id).ok_or_else(|| EvalError::UnknownStory {
                story_id: id.clone(),
            })
        })
        .collect()
}

/// Runs the k-fold protocol on one balanced dataset. Folds are evaluated in
/// parallel and assembled in fold order, so the report is deterministic for
/// fixed seeds.
pub fn cross_validate(
    dataset: &LabeledDataset,
    corpus: &Corpus,
    cfg: &CvConfig,
) -> Result<EvalReport, EvalError> {
    if dataset.positives.is_empty() {
        return Err(EvalError::Param {
            message: "dataset has no positives".into(),
        });
    }
    if dataset.positives.len() != dataset.negatives.len() {
        return Err(EvalError::Param {
            message: format!(
                "dataset is not balanced: {} positives vs {} negatives",
                dataset.positives.len(),
                dataset.negatives.len()
            ),
        });
    }
    let ids: Vec<(String, i8)> = dataset
        .positives
        .iter()
        .map(|id| (id.clone(), 1i8))
        .chain(dataset.negatives.iter().map(|id| (id.clone(), -1i8)))
        .collect();
    let plan = kfold_split(&ids, cfg.k, cfg.seed)?;

    let folds: Vec<FoldReport> = plan
        .folds
        .par_iter()
        .enumerate()
        .map(|(fold_ix, fold)| evaluate_fold(fold_ix, fold, dataset, corpus, cfg))
        .collect::<Result<Vec<_>, EvalError>>()?;

    let n = folds.len() as f64;
    let f1_mean = folds.iter().map(|f| f.f1).sum::<f64>() / n;
    let variance = folds.iter().map(|f| (f.f1 - f1_mean).powi(2)).sum::<f64>() / n;
    let (tp, fp, fn_, tn) = folds.iter().fold((0, 0, 0, 0), |acc, f| {
        (acc.0 + f.tp, acc.1 + f.fp, acc.2 + f.fn_, acc.3 + f.tn)
    });
    let pooled_scores = f1_score(tp, fp, fn_);
    Ok(EvalReport {
        metric: dataset.metric,
        k: cfg.k,
        seed: cfg.seed,
        hyperparams: cfg.hyperparams.clone(),
        features: cfg.features,
        folds,
        f1_mean,
        f1_sd: variance.sqrt(),
        pooled: PooledReport {
            tp,
            fp,
            fn_,
            tn,
            precision: pooled_scores.precision,
            recall: pooled_scores.recall,
            f1: pooled_scores.f1,
        },
    })
}

fn evaluate_fold(
    fold_ix: usize,
    fold: &Fold,
    dataset: &LabeledDataset,
    corpus: &Corpus,
    cfg: &CvConfig,
) -> Result<FoldReport, EvalError> {
    let train_stories = lookup_stories(corpus, &fold.train)?;
    let test_stories = lookup_stories(corpus, &fold.test)?;
    let vocab = build_vocabulary(train_stories.iter().copied(), &cfg.features);

    let label_of = |id: &str| -> i8 {
        if dataset.positives.contains(id) {
            1
        } else {
            -1
        }
    };
    let train_data: Vec<(FeatureVector, i8)> = train_stories
        .iter()
        .map(|story| {
            (
                vectorize(story, &vocab, &cfg.features),
                label_of(&story.id),
            )
        })
        .collect();

    let mut hp = cfg.hyperparams.clone();
    hp.seed = mix_seed(cfg.seed, fold_ix as u64 + 1);
    let model = svm::train(vocab.len(), &train_data, &hp)?;

    let (mut tp, mut fp, mut fn_, mut tn) = (0u64, 0u64, 0u64, 0u64);
    for story in &test_stories {
        let x = vectorize(story, &vocab, &cfg.features);
        let (predicted, _) = svm::predict(&model, &x)?;
        match (label_of(&story.id), predicted) {
            (1, 1) => tp += 1,
            (-1, 1) => fp += 1,
            (1, -1) => fn_ += 1,
            (-1, -1) => tn += 1,
            _ => unreachable!("labels are +/-1"),
        }
    }
    let scores = f1_score(tp, fp, fn_);
    Ok(FoldReport {
        tp,
        fp,
        fn_,
        tn,
        precision: scores.precision,
        recall: scores.recall,
        f1: scores.f1,
        c_resolved: model.meta.c_resolved,
    })
}

/// Scans a fold plan for protocol leaks: train/test id overlap, and
/// vocabulary terms that occur only in that fold's test stories. Returns a
/// description per violation; clean plans return an empty list.
pub fn audit_fold_hygiene(
    plan: &FoldPlan,
    corpus: &Corpus,
    features: &FeatureConfig,
) -> Vec<String> {
    let mut violations = Vec::new();
    for (fold_ix, fold) in plan.folds.iter().enumerate() {
        let train_set: BTreeSet<&str> = fold.train.iter().map(String::as_str).collect();
        for id in &fold.test {
            if train_set.contains(id.as_str()) {
                violations.push(format!("fold {fold_ix}: id `{id}` in both train and test"));
            }
        }
        let train_stories: Vec<&Story> =
            fold.train.iter().filter_map(|id| corpus.story(id)).collect();
        let vocab = build_vocabulary(train_stories.iter().copied(), features);
        let mut train_terms = BTreeSet::new();
        for story in &train_stories {
            train_terms.extend(story_terms(story, features));
        }
        for id in &fold.test {
            let Some(story) = corpus.story(id) else {
                continue;
            };
            for term in story_terms(story, features) {
                if !train_terms.contains(&term) && vocab.contains(&term) {
                    violations.push(format!(
                        "fold {fold_ix}: test-only term `{term}` present in vocabulary"
                    ));
                }
            }
        }
    }
    violations
}

/// Renders F1 with two decimals, rounding decimal halves up (0.805 ->
/// "0.81"). Operates on the shortest decimal representation, so the
/// rounding is decimal, not binary.
pub fn round_half_up_2dp(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x:.2}");
    }
    let s = format!("{x}");
    if s.contains(['e', 'E']) {
        // |x| too extreme for plain notation; scores never get here.
        return format!("{x:.2}");
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", s.as_str()),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    let mut digits: Vec<u8> = int_part.bytes().map(|b| b - b'0').collect();
    let mut frac: Vec<u8> = frac_part.bytes().map(|b| b - b'0').collect();
    let round_up = frac.len() > 2 && frac[2] >= 5;
    frac.resize(2, 0);
    if round_up {
        let mut all = digits;
        all.extend_from_slice(&frac);
        let mut pos = all.len();
        loop {
            if pos == 0 {
                all.insert(0, 1);
                break;
            }
            pos -= 1;
            if all[pos] == 9 {
                all[pos] = 0;
            } else {
                all[pos] += 1;
                break;
            }
        }
        let split = all.len() - 2;
        frac = all[split..].to_vec();
        digits = all[..split].to_vec();
    }
    let int_str: String = if digits.is_empty() {
        "0".to_string()
    } else {
        digits.iter().map(|d| (d + b'0') as char).collect()
    };
    let frac_str: String = frac.iter().map(|d| (d + b'0') as char).collect();
    format!("{sign}{int_str}.{frac_str}")
}

/// Renders the two-column metric/F1 table. Rows follow the canonical
/// classified order (appreciation, buzz, controversiality,
/// raising-discussion), then any remaining reports in metric order.
pub fn report_table(reports: &[EvalReport]) -> String {
    let mut out = String::from("metric                F1\n");
    let mut remaining: Vec<&EvalReport> = reports.iter().collect();
    let mut ordered: Vec<&EvalReport> = Vec::new();
    for kind in MetricKind::CLASSIFIED {
        if let Some(pos) = remaining.iter().position(|r| r.metric == kind) {
            ordered.push(remaining.remove(pos));
        }
    }
    remaining.sort_by_key(|r| r.metric);
    ordered.extend(remaining);
    for report in ordered {
        out.push_str(&format!(
            "{:<22}{}\n",
            report.metric.display_name(),
            round_half_up_2dp(report.f1_mean)
        ));
    }
    out
}
