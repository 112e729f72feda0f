//! Per-story aggregate counts and the six virality metrics.
//!
//! All metric values are held exactly — wide integers and [`Rational`]
//! ratios — so threshold comparisons never hinge on floating-point
//! rounding. Decimal rendering happens only at the CSV boundary.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Emotion};

/// Exact ratio type used for raising-discussion and controversiality values.
pub type Rational = Ratio<i64>;

/// The virality metric kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetricKind {
    Appreciation,
    Buzz,
    RaisingDiscussion,
    Controversiality,
    WhiteBuzz,
    BlackBuzz,
}

impl MetricKind {
    /// The four metrics run through the classifier, in report row order.
    pub const CLASSIFIED: [MetricKind; 4] = [
        MetricKind::Appreciation,
        MetricKind::Buzz,
        MetricKind::Controversiality,
        MetricKind::RaisingDiscussion,
    ];

    pub const ALL: [MetricKind; 6] = [
        MetricKind::Appreciation,
        MetricKind::Buzz,
        MetricKind::RaisingDiscussion,
        MetricKind::Controversiality,
        MetricKind::WhiteBuzz,
        MetricKind::BlackBuzz,
    ];

    /// Stable machine name, used in file names, truth sidecars, and flags.
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Appreciation => "appreciation",
            MetricKind::Buzz => "buzz",
            MetricKind::RaisingDiscussion => "raising_discussion",
            MetricKind::Controversiality => "controversiality",
            MetricKind::WhiteBuzz => "white_buzz",
            MetricKind::BlackBuzz => "black_buzz",
        }
    }

    pub fn display_name(&self) -> &'static str {
        match self {
            MetricKind::Appreciation => "Appreciation",
            MetricKind::Buzz => "Buzz",
            MetricKind::RaisingDiscussion => "Raising-Discussion",
            MetricKind::Controversiality => "Controversiality",
            MetricKind::WhiteBuzz => "White-Buzz",
            MetricKind::BlackBuzz => "Black-Buzz",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

impl Serialize for MetricKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for MetricKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("unknown story id `{story_id}`")]
    UnknownStory { story_id: String },
    #[error("invalid counts: {message}")]
    InvalidCounts { message: String },
}

/// Aggregate comment counts for one story.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CommentStats {
    /// Total comments (NC_T).
    pub nc_total: u64,
    /// Low-level comments, i.e. replies to other comments (NC_L).
    pub nc_low: u64,
    /// Distinct commenting users (NUC).
    pub nuc: u64,
    /// Largest per-comment up-vote count; 0 with no comments.
    pub max_up: i64,
    /// Largest per-comment down-vote count; 0 with no comments.
    pub max_down: i64,
    pub n_pos: u64,
    pub n_neu: u64,
    pub n_neg: u64,
}

/// Buzz polarity of a story's comment emotions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    White,
    Black,
    Neither,
}

impl Polarity {
    pub fn name(&self) -> &'static str {
        match self {
            Polarity::White => "white",
            Polarity::Black => "black",
            Polarity::Neither => "neither",
        }
    }
}

/// All six metric values plus the aggregate counts for one story.
#[derive(Debug, Clone, PartialEq)]
pub struct StoryMetrics {
    pub story_id: String,
    /// A = ND, the story's digg count.
    pub appreciation: i64,
    /// BS = NUC, distinct commenting users.
    pub buzz_spreading: u64,
    /// RD = (NC_L / NC_T) * NUC; 0 when the story has no comments.
    pub raising_discussion: Rational,
    /// C = min(A, B) / max(A, B) over the per-comment vote maxima;
    /// undefined (`None`) when no comment received any vote.
    pub controversiality: Option<Rational>,
    pub polarity: Polarity,
    pub stats: CommentStats,
}

/// Counts a story's comments: totals, low-level replies, distinct users,
/// per-comment vote maxima, and emotion tallies. `unknown` emotions count
/// toward none of the three categories.
pub fn comment_stats(story_id: &str, corpus: &Corpus) -> Result<CommentStats, MetricsError> {
    if corpus.story(story_id).is_none() {
        return Err(MetricsError::UnknownStory {
            story_id: story_id.to_string(),
        });
    }
    let mut stats = CommentStats::default();
    let mut users = std::collections::HashSet::new();
    for comment in corpus.comments_of(story_id) {
        stats.nc_total += 1;
        if comment.parent_id.is_some() {
            stats.nc_low += 1;
        }
        users.insert(comment.user_id.as_str());
        stats.max_up = stats.max_up.max(comment.diggs_up);
        stats.max_down = stats.max_down.max(comment.diggs_down);
        match comment.emotion {
            Emotion::Positive => stats.n_pos += 1,
            Emotion::Neutral => stats.n_neu += 1,
            Emotion::Negative => stats.n_neg += 1,
            Emotion::Unknown => {}
        }
    }
    stats.nuc = users.len() as u64;
    Ok(stats)
}

fn to_i64(value: u64, what: &str) -> Result<i64, MetricsError> {
    i64::try_from(value).map_err(|_| MetricsError::InvalidCounts {
        message: format!("{what} {value} exceeds representable range"),
    })
}

/// RD = (NC_L / NC_T) * NUC, exactly; 0 when NC_T = 0 (no comments means
/// no discussion).
pub fn raising_discussion_score(
    nc_low: u64,
    nc_total: u64,
    nuc: u64,
) -> Result<Rational, MetricsError> {
    if nc_low > nc_total {
        return Err(MetricsError::InvalidCounts {
            message: format!("nc_low {nc_low} exceeds nc_total {nc_total}"),
        });
    }
    if nc_total == 0 {
        return Ok(Rational::from_integer(0));
    }
    let numer = to_i64(nc_low, "nc_low")?
        .checked_mul(to_i64(nuc, "nuc")?)
        .ok_or_else(|| MetricsError::InvalidCounts {
            message: "nc_low * nuc overflows".into(),
        })?;
    Ok(Rational::new(numer, to_i64(nc_total, "nc_total")?))
}

/// C = min(A, B) / max(A, B) over the story's per-comment vote maxima.
/// Undefined when both maxima are zero: total agreement cannot be inferred
/// from zero evidence. Symmetric in its arguments.
pub fn controversiality_score(
    max_up: i64,
    max_down: i64,
) -> Result<Option<Rational>, MetricsError> {
    if max_up < 0 || max_down < 0 {
        return Err(MetricsError::InvalidCounts {
            message: format!("vote maxima must be >= 0, got ({max_up}, {max_down})"),
        });
    }
    let (lo, hi) = (max_up.min(max_down), max_up.max(max_down));
    if hi == 0 {
        Ok(None)
    } else {
        Ok(Some(Rational::new(lo, hi)))
    }
}

/// White iff positives strictly outnumber the rest; black iff negatives do.
/// The two strict inequalities cannot hold together.
pub fn buzz_polarity(n_pos: u64, n_neu: u64, n_neg: u64) -> Polarity {
    if n_pos > n_neu + n_neg {
        Polarity::White
    } else if n_neg > n_neu + n_pos {
        Polarity::Black
    } else {
        Polarity::Neither
    }
}

/// Computes [`StoryMetrics`] for every story. Pure in the corpus: the output
/// is independent of comment file order, and stories are processed in
/// parallel with a deterministic merged result.
pub fn compute_all_metrics(corpus: &Corpus) -> BTreeMap<String, StoryMetrics> {
    corpus
        .stories()
        .par_iter()
        .map(|story| {
            let stats = comment_stats(&story.id, corpus).expect("story id from corpus");
            let metrics = story_metrics_from_stats(&story.id, story.digg_count, stats);
            (story.id.clone(), metrics)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn story_metrics_from_stats(story_id: &str, digg_count: i64, stats: CommentStats) -> StoryMetrics {
    let raising_discussion = raising_discussion_score(stats.nc_low, stats.nc_total, stats.nuc)
        .expect("counted stats are consistent");
    let controversiality = controversiality_score(stats.max_up.max(0), stats.max_down.max(0))
        .expect("clamped maxima are non-negative");
    StoryMetrics {
        story_id: story_id.to_string(),
        appreciation: digg_count,
        buzz_spreading: stats.nuc,
        raising_discussion,
        controversiality,
        polarity: buzz_polarity(stats.n_pos, stats.n_neu, stats.n_neg),
        stats,
    }
}

/// Renders a rational with six decimal places for the CSV boundary.
pub fn render_rational(r: Rational) -> String {
    format!("{:.6}", r.to_f64().unwrap_or(f64::NAN))
}

/// Writes the per-story metrics table:
/// `story_id,A,BS,RD,C,polarity,NC_T,NC_L,NUC,max_up,max_down,n_pos,n_neu,n_neg`.
/// C is rendered as an empty field when undefined.
pub fn write_metrics_csv<W: std::io::Write>(
    writer: W,
    metrics: &BTreeMap<String, StoryMetrics>,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "story_id", "A", "BS", "RD", "C", "polarity", "NC_T", "NC_L", "NUC", "max_up", "max_down",
        "n_pos", "n_neu", "n_neg",
    ])?;
    for m in metrics.values() {
        let c = m.controversiality.map(render_rational).unwrap_or_default();
        w.write_record([
            m.story_id.as_str(),
            &m.appreciation.to_string(),
            &m.buzz_spreading.to_string(),
            &render_rational(m.raising_discussion),
            &c,
            m.polarity.name(),
            &m.stats.nc_total.to_string(),
            &m.stats.nc_low.to_string(),
            &m.stats.nuc.to_string(),
            &m.stats.max_up.to_string(),
            &m.stats.max_down.to_string(),
            &m.stats.n_pos.to_string(),
            &m.stats.n_neu.to_string(),
            &m.stats.n_neg.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
