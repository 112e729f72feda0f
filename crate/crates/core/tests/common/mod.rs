//! Shared test helpers: an independent brute-force metrics oracle and a
//! random-corpus generator for differential testing.
//!
//! The oracle deliberately avoids the library's aggregation path: it walks
//! raw comment slices with naive loops and recomputes every formula from
//! first principles.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use virality::corpus::{Comment, Corpus, Emotion, Story};
use virality::metrics::{Polarity, Rational};

/// Independently recomputed per-story values, same shape as
/// `StoryMetrics` but produced by a separate code path.
#[derive(Debug, PartialEq)]
pub struct OracleMetrics {
    pub appreciation: i64,
    pub buzz_spreading: u64,
    pub raising_discussion: Rational,
    pub controversiality: Option<Rational>,
    pub polarity: Polarity,
    pub nc_total: u64,
    pub nc_low: u64,
    pub nuc: u64,
    pub max_up: i64,
    pub max_down: i64,
    pub n_pos: u64,
    pub n_neu: u64,
    pub n_neg: u64,
}

/// Brute-force single pass over one story's comments.
pub fn oracle_story(story: &Story, comments: &[&Comment]) -> OracleMetrics {
    let nc_total = comments.len() as u64;
    let mut nc_low = 0u64;
    let mut users: HashSet<&str> = HashSet::new();
    let mut max_up = 0i64;
    let mut max_down = 0i64;
    let (mut n_pos, mut n_neu, mut n_neg) = (0u64, 0u64, 0u64);
    for c in comments {
        if c.parent_id.is_some() {
            nc_low += 1;
        }
        users.insert(&c.user_id);
        if c.diggs_up > max_up {
            max_up = c.diggs_up;
        }
        if c.diggs_down > max_down {
            max_down = c.diggs_down;
        }
        match c.emotion {
            Emotion::Positive => n_pos += 1,
            Emotion::Neutral => n_neu += 1,
            Emotion::Negative => n_neg += 1,
            Emotion::Unknown => {}
        }
    }
    let nuc = users.len() as u64;

    let raising_discussion = if nc_total == 0 {
        Rational::from_integer(0)
    } else {
        Rational::new(nc_low as i64, nc_total as i64) * Rational::from_integer(nuc as i64)
    };
    let controversiality = if max_up == 0 && max_down == 0 {
        None
    } else if max_up <= max_down {
        Some(Rational::new(max_up, max_down))
    } else {
        Some(Rational::new(max_down, max_up))
    };
    let polarity = if n_pos > n_neu + n_neg {
        Polarity::White
    } else if n_neg > n_neu + n_pos {
        Polarity::Black
    } else {
        Polarity::Neither
    };
    OracleMetrics {
        appreciation: story.digg_count,
        buzz_spreading: nuc,
        raising_discussion,
        controversiality,
        polarity,
        nc_total,
        nc_low,
        nuc,
        max_up,
        max_down,
        n_pos,
        n_neu,
        n_neg,
    }
}

/// Oracle metrics for every story of a corpus, grouping comments naively.
pub fn oracle_all(corpus: &Corpus) -> BTreeMap<String, OracleMetrics> {
    let mut out = BTreeMap::new();
    for story in corpus.stories() {
        let comments: Vec<&Comment> = corpus
            .comments()
            .iter()
            .filter(|c| c.story_id == story.id)
            .collect();
        out.insert(story.id.clone(), oracle_story(story, &comments));
    }
    out
}

/// A structurally arbitrary random corpus: random diggs, votes, emotions,
/// user reuse, and reply links to earlier comments of the same story.
pub fn random_corpus(seed: u64, max_stories: usize, max_comments: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_stories = rng.random_range(1..=max_stories);
    let mut stories = Vec::new();
    for i in 0..n_stories {
        stories.push(Story {
            id: format!("s{i}"),
            title: format!("story {i}"),
            snippet: String::new(),
            digg_count: rng.random_range(0..=500),
        });
    }
    let n_comments = rng.random_range(0..=max_comments);
    let mut comments: Vec<Comment> = Vec::new();
    let mut per_story: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for j in 0..n_comments {
        let story_ix = rng.random_range(0..n_stories);
        let siblings = per_story.entry(story_ix).or_default();
        let parent_id = if !siblings.is_empty() && rng.random_bool(0.4) {
            let pick = siblings[rng.random_range(0..siblings.len())];
            Some(format!("c{pick}"))
        } else {
            None
        };
        let emotion = match rng.random_range(0..4) {
            0 => Emotion::Positive,
            1 => Emotion::Negative,
            2 => Emotion::Neutral,
            _ => Emotion::Unknown,
        };
        comments.push(Comment {
            id: format!("c{j}"),
            story_id: format!("s{story_ix}"),
            user_id: format!("u{}", rng.random_range(0..1 + n_comments / 2)),
            parent_id,
            diggs_up: rng.random_range(0..=40),
            diggs_down: rng.random_range(0..=40),
            emotion,
        });
        siblings.push(j);
    }
    Corpus::new(stories, comments).expect("random corpus is structurally valid")
}
