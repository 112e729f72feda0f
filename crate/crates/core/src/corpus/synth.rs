//! Seeded synthetic-corpus generator with planted lexical signals.
//!
//! Absent a real crawl, the generator produces corpora whose numeric shape
//! (digg counts, comment volume, reply structure, vote maxima, emotion
//! tallies) realizes clear positives and clear negatives for every metric,
//! and whose story text carries a recoverable lexical signal: stories made
//! positive for a metric draw words from that metric's planted lexicon with
//! probability `signal_strength`. Planted lexicons are pairwise disjoint
//! from each other and from the background vocabulary, so an end-to-end
//! classification run has a known ceiling. This is test scaffolding, not a
//! claim about any real community.
//!
//! Everything is drawn from a single ChaCha8 stream seeded with
//! `SynthConfig::seed`; a fixed seed reproduces the corpus bit-for-bit
//! across runs and platforms.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Comment, Corpus, CorpusError, Emotion, Story};
use crate::metrics::MetricKind;

/// Everyday filler vocabulary for story text. Kept disjoint, after
/// lemmatization, from every planted lexicon below.
pub const BACKGROUND_WORDS: &[&str] = &[
    "time", "year", "people", "way", "day", "man", "woman", "child", "world", "school", "state",
    "family", "student", "group", "country", "problem", "hand", "part", "place", "case", "week",
    "company", "system", "program", "question", "work", "government", "number", "night", "point",
    "home", "water", "room", "mother", "area", "money", "story", "fact", "month", "lot", "right",
    "study", "book", "eye", "job", "word", "business", "issue", "side", "kind", "head", "house",
    "service", "friend", "father", "power", "hour", "game", "line", "end", "member", "law", "car",
    "city", "community", "name", "president", "team", "minute", "idea", "kid", "body", "back",
    "parent", "face", "level", "office", "door", "health", "person", "art", "war", "history",
    "party", "result", "change", "morning", "reason", "research", "girl", "guy", "moment", "air",
    "teacher", "force", "education", "foot", "boy", "age", "policy", "process", "music", "market",
    "sense", "nation", "plan", "college", "interest", "death", "experience", "effect", "use",
    "class", "control", "care", "field", "development", "role", "effort", "rate", "heart", "drug",
    "show", "leader", "light", "voice", "wife", "police", "mind", "price", "report", "decision",
    "son", "view", "relationship", "town", "road", "arm", "difference", "value", "building",
    "action", "season", "society", "tax", "director", "position", "player", "record", "paper",
    "space", "ground", "form", "event", "official", "matter", "center", "couple", "site",
    "project", "activity", "star", "table", "court", "oil", "situation", "cost", "industry",
    "figure", "street", "image", "phone", "data", "picture", "practice", "piece", "land",
    "product", "doctor", "wall", "patient", "worker", "news", "test", "movie", "north", "love",
    "support", "technology", "make", "know", "think", "take", "come", "want", "look", "find",
    "give", "tell", "ask", "seem", "feel", "try", "leave", "call", "keep", "help", "talk", "turn",
    "start", "hear", "play", "run", "move", "live", "believe", "hold", "bring", "happen", "write",
    "provide", "sit", "stand", "lose", "pay", "meet", "include", "continue", "learn", "lead",
    "understand", "watch", "follow", "stop", "create", "speak", "read", "allow", "add", "spend",
    "grow", "open", "walk", "win", "offer", "remember", "consider", "appear", "buy", "wait",
    "serve", "send", "expect", "build", "stay", "fall", "cut", "reach", "remain", "suggest",
    "raise", "pass", "sell", "require", "report", "decide", "pull", "good", "new", "first",
    "last", "long", "great", "little", "own", "other", "old", "big", "high", "different",
    "small", "large", "next", "early", "young", "important", "few", "public", "bad", "same",
    "able", "recent", "whole", "free", "easy", "strong", "special", "clear", "certain", "late",
    "hard", "major", "economic", "military", "true", "federal", "entire", "current", "nice",
    "huge", "popular", "serious", "ready", "simple", "local", "short", "past", "dark", "common",
];

fn default_lexicons() -> BTreeMap<MetricKind, Vec<String>> {
    let plant = |words: &[&str]| words.iter().map(|w| w.to_string()).collect::<Vec<_>>();
    BTreeMap::from([
        (
            MetricKind::Appreciation,
            plant(&[
                "marvelous",
                "superb",
                "magnificent",
                "splendid",
                "sublime",
                "majestic",
                "radiant",
                "exquisite",
                "flawless",
                "stellar",
                "glorious",
                "dazzler",
            ]),
        ),
        (
            MetricKind::Buzz,
            plant(&[
                "viral",
                "buzzworthy",
                "sensation",
                "blockbuster",
                "spotlight",
                "headline",
                "frenzy",
                "mania",
                "craze",
                "hype",
                "phenomenon",
                "bombshell",
            ]),
        ),
        (
            MetricKind::RaisingDiscussion,
            plant(&[
                "debate",
                "rebuttal",
                "discourse",
                "dialogue",
                "counterpoint",
                "deliberation",
                "polemic",
                "contention",
                "disagreement",
                "viewpoint",
                "crossfire",
                "dispute",
            ]),
        ),
        (
            MetricKind::Controversiality,
            plant(&[
                "divisive",
                "polarizing",
                "contentious",
                "scandalous",
                "taboo",
                "inflammatory",
                "provocative",
                "incendiary",
                "outrage",
                "uproar",
                "firestorm",
                "backlash",
            ]),
        ),
        (
            MetricKind::WhiteBuzz,
            plant(&[
                "heartwarming",
                "uplifting",
                "delightful",
                "joyous",
                "wholesome",
                "cheerful",
                "charming",
                "blissful",
                "lovable",
                "gleeful",
            ]),
        ),
        (
            MetricKind::BlackBuzz,
            plant(&[
                "dreadful",
                "appalling",
                "atrocious",
                "horrid",
                "disgusting",
                "shameful",
                "ghastly",
                "repugnant",
                "dismal",
                "abysmal",
            ]),
        ),
    ])
}

/// Parameters for [`generate_synthetic`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthConfig {
    /// Number of stories to generate (>= 1).
    pub n_stories: usize,
    /// Probability that a story made positive for a metric draws words from
    /// that metric's planted lexicon. In [0, 1].
    pub signal_strength: f64,
    /// RNG seed; fixed seed gives a bit-identical corpus.
    pub seed: u64,
    /// Probability that a story is made numerically positive for each
    /// classified metric, independently. In [0, 1].
    pub positive_rate: f64,
    /// Among stories not positive for any comment-driven metric, the
    /// probability of having no comments at all. In [0, 1].
    pub zero_comment_rate: f64,
    /// Per-metric planted word lists; defaults are pairwise disjoint from
    /// each other and from [`BACKGROUND_WORDS`].
    #[serde(default = "default_lexicons")]
    pub lexicons: BTreeMap<MetricKind, Vec<String>>,
}

impl SynthConfig {
    pub fn new(n_stories: usize, seed: u64) -> Self {
        SynthConfig {
            n_stories,
            signal_strength: 0.9,
            seed,
            positive_rate: 0.22,
            zero_comment_rate: 0.75,
            lexicons: default_lexicons(),
        }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.n_stories < 1 {
            return Err(CorpusError::InvalidConfig {
                field: "n_stories",
                message: "must be >= 1".into(),
            });
        }
        for (field, value) in [
            ("signal_strength", self.signal_strength),
            ("positive_rate", self.positive_rate),
            ("zero_comment_rate", self.zero_comment_rate),
        ] {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(CorpusError::InvalidConfig {
                    field,
                    message: format!("must lie in [0, 1], got {value}"),
                });
            }
        }
        for kind in MetricKind::ALL {
            match self.lexicons.get(&kind) {
                Some(words) if !words.is_empty() => {}
                _ => {
                    return Err(CorpusError::InvalidConfig {
                        field: "lexicons",
                        message: format!("missing or empty lexicon for `{kind}`"),
                    })
                }
            }
        }
        Ok(())
    }
}

/// Ground-truth sidecar record: the metrics a story was planted positive for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthRecord {
    pub story_id: String,
    pub planted: Vec<String>,
}

/// A generated corpus together with its ground-truth sidecar.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    pub truth: Vec<TruthRecord>,
}

struct StoryPlan {
    appreciation: bool,
    buzz: bool,
    raising: bool,
    controversial: bool,
    polarity: Option<MetricKind>, // WhiteBuzz or BlackBuzz
}

impl StoryPlan {
    fn planted(&self) -> Vec<MetricKind> {
        let mut out = Vec::new();
        if self.appreciation {
            out.push(MetricKind::Appreciation);
        }
        if self.buzz {
            out.push(MetricKind::Buzz);
        }
        if self.raising {
            out.push(MetricKind::RaisingDiscussion);
        }
        if self.controversial {
            out.push(MetricKind::Controversiality);
        }
        if let Some(p) = self.polarity {
            out.push(p);
        }
        out
    }
}

/// Generates a corpus per `cfg`. Deterministic for a fixed seed; title
/// length averages 7 words and snippet length 31 words; the sidecar lists,
/// per story, the metrics it was planted positive for.
pub fn generate_synthetic(cfg: &SynthConfig) -> Result<SyntheticCorpus, CorpusError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut stories = Vec::with_capacity(cfg.n_stories);
    let mut comments = Vec::new();
    let mut truth = Vec::with_capacity(cfg.n_stories);

    for story_ix in 0..cfg.n_stories {
        let story_id = format!("s{story_ix:06}");
        let plan = draw_plan(cfg, &mut rng);

        let digg_count = if plan.appreciation {
            rng.random_range(150..=600)
        } else {
            rng.random_range(0..=1)
        };

        emit_comments(&story_id, &plan, cfg, &mut rng, &mut comments);

        // One signal draw per planted metric governs both title and snippet.
        let active: Vec<MetricKind> = plan
            .planted()
            .into_iter()
            .filter(|_| rng.random_bool(cfg.signal_strength))
            .collect();
        let title = compose_text(cfg, &active, 5..=9, 2, &mut rng);
        let snippet = compose_text(cfg, &active, 28..=34, 4, &mut rng);

        truth.push(TruthRecord {
            story_id: story_id.clone(),
            planted: plan.planted().iter().map(|k| k.name().to_string()).collect(),
        });
        stories.push(Story {
            id: story_id,
            title,
            snippet,
            digg_count,
        });
    }

    let corpus = Corpus::new(stories, comments)?;
    Ok(SyntheticCorpus { corpus, truth })
}

fn draw_plan(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> StoryPlan {
    let appreciation = rng.random_bool(cfg.positive_rate);
    let buzz = rng.random_bool(cfg.positive_rate);
    let raising = rng.random_bool(cfg.positive_rate);
    let controversial = rng.random_bool(cfg.positive_rate);
    let polarity = if buzz {
        match rng.random_range(0..10) {
            0 | 1 => Some(MetricKind::WhiteBuzz),
            2 | 3 => Some(MetricKind::BlackBuzz),
            _ => None,
        }
    } else {
        None
    };
    StoryPlan {
        appreciation,
        buzz,
        raising,
        controversial,
        polarity,
    }
}

/// Realizes the comment structure for one story.
///
/// Busy stories get one comment per distinct user, so NUC = NC_T and the
/// raising-discussion score equals the reply count, which lets thresholds be
/// planted with a clear margin:
/// - buzz-positive: 110..=180 users (NUC >= 100)
/// - raising-positive: replies are 85% of comments (RD > 50)
/// - otherwise replies are capped at min(40, 30%) (RD <= 40, never 0..=50)
/// - controversial-positive: the two vote anchors keep min/max >= 0.9;
///   every other commented story keeps it <= 0.05
/// - quiet stories: either no comments at all (buzz negatives) or a few
///   top-level comments (preferred raising-discussion negatives)
fn emit_comments(
    story_id: &str,
    plan: &StoryPlan,
    cfg: &SynthConfig,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Comment>,
) {
    let busy = plan.buzz || plan.raising || plan.controversial;
    let n_comments: usize = if plan.buzz {
        rng.random_range(110..=180)
    } else if plan.raising {
        rng.random_range(70..=95)
    } else if plan.controversial {
        rng.random_range(5..=30)
    } else if rng.random_bool(cfg.zero_comment_rate) {
        0
    } else {
        rng.random_range(1..=8)
    };
    if n_comments == 0 {
        return;
    }

    let reply_count = if !busy {
        0
    } else if plan.raising {
        (n_comments * 85) / 100
    } else {
        ((n_comments * 30) / 100).min(40)
    };

    let anchor_up: i64 = rng.random_range(40..=120);
    let anchor_down: i64 = anchor_up - (anchor_up / 15).max(1);
    let down_ix = if n_comments > 1 { 1 } else { 0 };

    for j in 0..n_comments {
        let user_id = if busy {
            format!("{story_id}_u{j:04}")
        } else {
            format!("{story_id}_u{:04}", rng.random_range(0..=n_comments / 2))
        };
        let parent_id = if j >= n_comments - reply_count && j > 0 {
            Some(format!("{story_id}_c{:04}", rng.random_range(0..j)))
        } else {
            None
        };
        let mut diggs_up: i64 = rng.random_range(0..=3);
        let mut diggs_down: i64 = rng.random_range(0..=2);
        if j == 0 {
            diggs_up = anchor_up;
        }
        if plan.controversial && j == down_ix {
            diggs_down = anchor_down;
        }
        let emotion = draw_emotion(plan.polarity, rng);
        out.push(Comment {
            id: format!("{story_id}_c{j:04}"),
            story_id: story_id.to_string(),
            user_id,
            parent_id,
            diggs_up,
            diggs_down,
            emotion,
        });
    }
}

fn draw_emotion(polarity: Option<MetricKind>, rng: &mut ChaCha8Rng) -> Emotion {
    let roll: u32 = rng.random_range(0..100);
    let (pos, neu, neg) = match polarity {
        Some(MetricKind::WhiteBuzz) => (75, 10, 10),
        Some(MetricKind::BlackBuzz) => (10, 10, 75),
        _ => (25, 30, 25),
    };
    if roll < pos {
        Emotion::Positive
    } else if roll < pos + neu {
        Emotion::Neutral
    } else if roll < pos + neu + neg {
        Emotion::Negative
    } else {
        Emotion::Unknown
    }
}

/// Draws `len` background words, then overwrites random positions with
/// words from each active metric's lexicon.
fn compose_text(
    cfg: &SynthConfig,
    active: &[MetricKind],
    len_range: std::ops::RangeInclusive<usize>,
    words_per_metric: usize,
    rng: &mut ChaCha8Rng,
) -> String {
    let len = rng.random_range(len_range);
    let mut words: Vec<&str> = (0..len)
        .map(|_| BACKGROUND_WORDS[rng.random_range(0..BACKGROUND_WORDS.len())])
        .collect();
    for kind in active {
        let lexicon = &cfg.lexicons[kind];
        for _ in 0..words_per_metric {
            let slot = rng.random_range(0..len);
            words[slot] = lexicon[rng.random_range(0..lexicon.len())].as_str();
        }
    }
    words.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_is_bit_identical() {
        let cfg = SynthConfig::new(50, 7);
        let a = generate_synthetic(&cfg).unwrap();
        let b = generate_synthetic(&cfg).unwrap();
        assert_eq!(a.corpus.stories(), b.corpus.stories());
        assert_eq!(a.corpus.comments(), b.corpus.comments());
        assert_eq!(a.truth, b.truth);
    }

    #[test]
    fn invalid_config_names_field() {
        let mut cfg = SynthConfig::new(0, 1);
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("n_stories"));
        cfg.n_stories = 10;
        cfg.signal_strength = 1.5;
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("signal_strength"));
    }

    #[test]
    fn mean_title_and_snippet_lengths() {
        let cfg = SynthConfig::new(1000, 42);
        let synth = generate_synthetic(&cfg).unwrap();
        let mean = |f: fn(&Story) -> usize| {
            synth.corpus.stories().iter().map(f).sum::<usize>() as f64 / 1000.0
        };
        let title_mean = mean(|s| s.title.split_whitespace().count());
        let snippet_mean = mean(|s| s.snippet.split_whitespace().count());
        assert!((6.0..=8.0).contains(&title_mean), "title mean {title_mean}");
        assert!(
            (29.0..=33.0).contains(&snippet_mean),
            "snippet mean {snippet_mean}"
        );
    }

    #[test]
    fn zero_signal_plants_no_lexicon_words() {
        let mut cfg = SynthConfig::new(300, 11);
        cfg.signal_strength = 0.0;
        let synth = generate_synthetic(&cfg).unwrap();
        let planted: std::collections::HashSet<&str> = cfg
            .lexicons
            .values()
            .flatten()
            .map(|w| w.as_str())
            .collect();
        for story in synth.corpus.stories() {
            for word in story.title.split_whitespace().chain(story.snippet.split_whitespace()) {
                assert!(
                    !planted.contains(word),
                    "planted word `{word}` at zero signal"
                );
            }
        }
    }

    #[test]
    fn generated_corpus_validates_clean() {
        let cfg = SynthConfig::new(200, 3);
        let synth = generate_synthetic(&cfg).unwrap();
        assert!(crate::corpus::validate_corpus(&synth.corpus).is_clean());
    }
}
