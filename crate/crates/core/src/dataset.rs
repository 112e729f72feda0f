//! Threshold labeling, balanced dataset construction, and class overlap.
//!
//! Stories are labeled per metric by clear-margin predicates: a positive
//! predicate and a disjoint negative-eligibility predicate. Stories
//! satisfying neither are excluded from that metric's dataset entirely.
//! Negative pools are two-tier where the construction calls for a preferred
//! shape (e.g. raising-discussion negatives prefer commented stories whose
//! score is zero) with a fallback tier used only when the preferred tier
//! runs short.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{MetricKind, Polarity, Rational, StoryMetrics};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("negative pool too small: need {need}, have {have}")]
    Capacity { need: usize, have: usize },
    #[error("missing dataset for `{metric}`")]
    MissingDataset { metric: MetricKind },
    #[error("invalid decimal `{input}`: {message}")]
    BadDecimal { input: String, message: String },
}

/// Labeling thresholds. Defaults follow the reference construction:
/// appreciation positives need at least 100 diggs and negatives at most 1;
/// buzz positives need at least 100 distinct commenters and negatives no
/// comments; raising-discussion positives exceed 50 strictly;
/// controversiality positives are at least 0.9 and preferred negatives at
/// most 0.1; polarity classes live in the universe of stories with at least
/// 100 distinct commenters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub appreciation_pos_min: i64,
    pub appreciation_neg_max: i64,
    pub buzz_pos_min: u64,
    pub raising_pos_min: Rational,
    pub controversial_pos_min: Rational,
    pub controversial_neg_max: Rational,
    pub polarity_min_nuc: u64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            appreciation_pos_min: 100,
            appreciation_neg_max: 1,
            buzz_pos_min: 100,
            raising_pos_min: Rational::from_integer(50),
            controversial_pos_min: Rational::new(9, 10),
            controversial_neg_max: Rational::new(1, 10),
            polarity_min_nuc: 100,
        }
    }
}

/// Positive and negative-eligibility predicates for one metric. The two are
/// disjoint by construction; in-between stories belong to neither class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelRule {
    pub metric: MetricKind,
    pub thresholds: Thresholds,
}

impl LabelRule {
    pub fn is_positive(&self, m: &StoryMetrics) -> bool {
        let t = &self.thresholds;
        match self.metric {
            MetricKind::Appreciation => m.appreciation >= t.appreciation_pos_min,
            MetricKind::Buzz => m.buzz_spreading >= t.buzz_pos_min,
            MetricKind::RaisingDiscussion => m.raising_discussion > t.raising_pos_min,
            MetricKind::Controversiality => m
                .controversiality
                .map(|c| c >= t.controversial_pos_min)
                .unwrap_or(false),
            MetricKind::WhiteBuzz => {
                m.polarity == Polarity::White && m.stats.nuc >= t.polarity_min_nuc
            }
            MetricKind::BlackBuzz => {
                m.polarity == Polarity::Black && m.stats.nuc >= t.polarity_min_nuc
            }
        }
    }

    /// Preferred negative tier: the clear-margin shape sampled first.
    pub fn is_negative_preferred(&self, m: &StoryMetrics) -> bool {
        let t = &self.thresholds;
        match self.metric {
            MetricKind::Appreciation => m.appreciation <= t.appreciation_neg_max,
            MetricKind::Buzz => m.stats.nc_total == 0,
            MetricKind::RaisingDiscussion => {
                m.raising_discussion == Rational::from_integer(0) && m.stats.nc_total >= 1
            }
            MetricKind::Controversiality => m
                .controversiality
                .map(|c| c <= t.controversial_neg_max)
                .unwrap_or(false),
            MetricKind::WhiteBuzz => {
                m.polarity != Polarity::White && m.stats.nuc >= t.polarity_min_nuc
            }
            MetricKind::BlackBuzz => {
                m.polarity != Polarity::Black && m.stats.nuc >= t.polarity_min_nuc
            }
        }
    }

    /// Fallback negative tier, drawn from only when the preferred tier is
    /// smaller than the positive set.
    pub fn is_negative_fallback(&self, m: &StoryMetrics) -> bool {
        match self.metric {
            // Any zero-score story qualifies once commented ones run out.
            MetricKind::RaisingDiscussion => {
                m.raising_discussion == Rational::from_integer(0) && m.stats.nc_total == 0
            }
            // Undefined controversiality carries no evidence either way.
            MetricKind::Controversiality => m.controversiality.is_none(),
            _ => false,
        }
    }

    pub fn is_negative_eligible(&self, m: &StoryMetrics) -> bool {
        self.is_negative_preferred(m) || self.is_negative_fallback(m)
    }
}

/// The default labeling rules for all six metrics.
pub fn default_rules() -> BTreeMap<MetricKind, LabelRule> {
    rules_with(Thresholds::default())
}

/// Labeling rules with overridden thresholds.
pub fn rules_with(thresholds: Thresholds) -> BTreeMap<MetricKind, LabelRule> {
    MetricKind::ALL
        .into_iter()
        .map(|metric| {
            (
                metric,
                LabelRule {
                    metric,
                    thresholds: thresholds.clone(),
                },
            )
        })
        .collect()
}

/// Negative-eligible story ids, split into the preferred tier and the
/// fallback tier. The tiers are disjoint.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NegativePool {
    pub preferred: BTreeSet<String>,
    pub fallback: BTreeSet<String>,
}

impl NegativePool {
    pub fn len(&self) -> usize {
        self.preferred.len() + self.fallback.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preferred.is_empty() && self.fallback.is_empty()
    }
}

/// Applies one rule to every story: positives and the negative pool.
pub fn label_metric(
    metrics: &BTreeMap<String, StoryMetrics>,
    rule: &LabelRule,
) -> (BTreeSet<String>, NegativePool) {
    let mut positives = BTreeSet::new();
    let mut pool = NegativePool::default();
    for (id, m) in metrics {
        if rule.is_positive(m) {
            positives.insert(id.clone());
        } else if rule.is_negative_preferred(m) {
            pool.preferred.insert(id.clone());
        } else if rule.is_negative_fallback(m) {
            pool.fallback.insert(id.clone());
        }
    }
    (positives, pool)
}

/// A balanced two-class story set for one metric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub metric: MetricKind,
    pub positives: BTreeSet<String>,
    pub negatives: BTreeSet<String>,
    /// Seed used for negative sampling.
    pub seed: u64,
}

impl LabeledDataset {
    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positives.is_empty()
    }
}

/// Seeded Fisher–Yates shuffle: for `i` from `n-1` down to `1`,
/// swap(`i`, `rng.random_range(0..=i)`). This exact procedure is part of the
/// reproducibility contract.
fn fisher_yates<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

/// Draws `k` ids without replacement: ids sorted ascending, shuffled by
/// [`fisher_yates`], first `k` taken.
fn sample_ids(ids: &BTreeSet<String>, k: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut sorted: Vec<String> = ids.iter().cloned().collect();
    fisher_yates(&mut sorted, rng);
    sorted.truncate(k);
    sorted
}

/// Balances a dataset by sampling `|positives|` negatives without
/// replacement, deterministically for a fixed seed.
///
/// Sampling algorithm (fixed): a ChaCha8 stream is seeded with `seed`; the
/// preferred tier is sorted, Fisher–Yates-shuffled, and its first
/// `min(k, |preferred|)` ids taken; if short, the fallback tier is sorted
/// and shuffled with the same stream continuing, and the remainder taken
/// from its front.
pub fn build_balanced(
    metric: MetricKind,
    positives: &BTreeSet<String>,
    pool: &NegativePool,
    seed: u64,
) -> Result<LabeledDataset, DatasetError> {
    let need = positives.len();
    if pool.len() < need {
        return Err(DatasetError::Capacity {
            need,
            have: pool.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut negatives: BTreeSet<String> = BTreeSet::new();
    let from_preferred = need.min(pool.preferred.len());
    for id in sample_ids(&pool.preferred, from_preferred, &mut rng) {
        negatives.insert(id);
    }
    if from_preferred < need {
        for id in sample_ids(&pool.fallback, need - from_preferred, &mut rng) {
            negatives.insert(id);
        }
    }
    debug_assert_eq!(negatives.len(), need);
    Ok(LabeledDataset {
        metric,
        positives: positives.clone(),
        negatives,
        seed,
    })
}

/// Pairwise positive-set overlap for the four classified metrics.
///
/// `cell(x, y)` is the percentage of x's positives that are also positive
/// for y; the diagonal and rows with no positives are undefined.
#[derive(Debug, Clone, Serialize)]
pub struct OverlapMatrix {
    pub kinds: Vec<MetricKind>,
    pub pos_counts: Vec<usize>,
    /// `intersections[i][j]` = |pos(kinds[i]) ∩ pos(kinds[j])|.
    pub intersections: Vec<Vec<usize>>,
}

impl OverlapMatrix {
    fn index_of(&self, kind: MetricKind) -> Option<usize> {
        self.kinds.iter().position(|&k| k == kind)
    }

    /// Exact cell value as `(intersection, row positive count)`, or `None`
    /// on the diagonal or for a row with no positives.
    pub fn cell_exact(&self, x: MetricKind, y: MetricKind) -> Option<(usize, usize)> {
        let (i, j) = (self.index_of(x)?, self.index_of(y)?);
        if i == j || self.pos_counts[i] == 0 {
            return None;
        }
        Some((self.intersections[i][j], self.pos_counts[i]))
    }

    /// Cell percentage in [0, 100].
    pub fn cell(&self, x: MetricKind, y: MetricKind) -> Option<f64> {
        self.cell_exact(x, y)
            .map(|(inter, total)| 100.0 * inter as f64 / total as f64)
    }

    /// Renders the percentage table; undefined cells are blank, one decimal
    /// place otherwise.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("metric");
        for kind in &self.kinds {
            out.push(',');
            out.push_str(kind.name());
        }
        out.push('\n');
        for &row in &self.kinds {
            out.push_str(row.name());
            for &col in &self.kinds {
                out.push(',');
                if let Some(pct) = self.cell(row, col) {
                    out.push_str(&format!("{pct:.1}"));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Builds the overlap matrix over the positives of the four classified
/// metrics. Overlap is computed over full positive sets; negatives never
/// enter.
pub fn overlap_matrix(
    datasets: &BTreeMap<MetricKind, LabeledDataset>,
) -> Result<OverlapMatrix, DatasetError> {
    let kinds: Vec<MetricKind> = MetricKind::CLASSIFIED.to_vec();
    for kind in &kinds {
        if !datasets.contains_key(kind) {
            return Err(DatasetError::MissingDataset { metric: *kind });
        }
    }
    let sets: Vec<&BTreeSet<String>> = kinds.iter().map(|k| &datasets[k].positives).collect();
    let pos_counts: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    let intersections: Vec<Vec<usize>> = sets
        .iter()
        .map(|a| sets.iter().map(|b| a.intersection(b).count()).collect())
        .collect();
    Ok(OverlapMatrix {
        kinds,
        pos_counts,
        intersections,
    })
}

/// Writes `story_id,label` rows, positives (label 1) sorted first, then
/// negatives (label -1) sorted.
pub fn write_dataset_csv<W: std::io::Write>(
    mut writer: W,
    dataset: &LabeledDataset,
) -> std::io::Result<()> {
    writeln!(writer, "story_id,label")?;
    for id in &dataset.positives {
        writeln!(writer, "{id},1")?;
    }
    for id in &dataset.negatives {
        writeln!(writer, "{id},-1")?;
    }
    Ok(())
}

/// Parses a plain decimal string (`"0.9"`, `"50"`, `"50.0001"`) into an
/// exact rational, so threshold comparisons are never subject to binary
/// rounding.
pub fn parse_decimal_rational(input: &str) -> Result<Rational, DatasetError> {
    let bad = |message: &str| DatasetError::BadDecimal {
        input: input.to_string(),
        message: message.to_string(),
    };
    let s = input.trim();
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, s.strip_prefix('+').unwrap_or(s)),
    };
    if digits.is_empty() {
        return Err(bad("empty"));
    }
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad("expected only digits and one `.`"));
    }
    let mut numer: i64 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add((c as u8 - b'0') as i64))
            .ok_or_else(|| bad("out of range"))?;
    }
    let mut denom: i64 = 1;
    for _ in 0..frac_part.len() {
        denom = denom.checked_mul(10).ok_or_else(|| bad("out of range"))?;
    }
    Ok(Rational::new(sign * numer, denom))
}
