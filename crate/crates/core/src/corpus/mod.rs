//! Corpus data model, ingestion, validation, and synthetic generation.
//!
//! A [`Corpus`] holds stories and their threaded comments. Construction via
//! [`Corpus::new`] enforces the structural invariants (unique ids, resolvable
//! references, same-story reply forests, non-negative vote counts); corpora
//! produced by [`load_corpus`](crate::corpus::load_corpus) or
//! [`generate_synthetic`] therefore always validate clean. A permissive
//! constructor exists so that [`validate_corpus`] can be exercised on
//! deliberately broken data.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod io;
mod synth;

pub use io::{load_corpus, write_corpus};
pub use synth::{generate_synthetic, SynthConfig, SyntheticCorpus, TruthRecord};

/// Emotion tag carried by a comment, as ingested. Comments without a tag are
/// `Unknown`; unknown never counts toward any polarity tally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Positive,
    Negative,
    Neutral,
    Unknown,
}

/// A submitted story: title, short description, and its approval count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Story {
    pub id: String,
    pub title: String,
    pub snippet: String,
    /// Number of diggs (approvals). Non-negative in any valid corpus; kept
    /// signed so that validation can report injected bad values.
    #[serde(rename = "diggs")]
    pub digg_count: i64,
}

/// A comment on a story. `parent_id` present means a low-level comment
/// (a reply to another comment of the same story).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comment {
    pub id: String,
    pub story_id: String,
    pub user_id: String,
    pub parent_id: Option<String>,
    pub diggs_up: i64,
    pub diggs_down: i64,
    pub emotion: Emotion,
}

/// Errors from corpus construction, ingestion, and synthesis.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: field `{field}`: {message}")]
    InvalidField {
        path: String,
        line: usize,
        field: &'static str,
        message: String,
    },
    #[error("duplicate story id `{id}`")]
    DuplicateStoryId { id: String },
    #[error("duplicate comment id `{id}`")]
    DuplicateCommentId { id: String },
    #[error("comment `{comment_id}` references unknown story `{story_id}`")]
    UnknownStory {
        comment_id: String,
        story_id: String,
    },
    #[error("comment `{comment_id}` has dangling parent_id `{parent_id}`")]
    DanglingParent {
        comment_id: String,
        parent_id: String,
    },
    #[error("comment `{comment_id}` replies to `{parent_id}` which belongs to a different story")]
    CrossStoryParent {
        comment_id: String,
        parent_id: String,
    },
    #[error("comment `{comment_id}` is part of a reply cycle")]
    ParentCycle { comment_id: String },
    #[error("story `{id}` has negative digg count {value}")]
    NegativeDiggs { id: String, value: i64 },
    #[error("comment `{id}` has negative vote count {value}")]
    NegativeVotes { id: String, value: i64 },
    #[error("invalid parameter `{field}`: {message}")]
    InvalidConfig { field: &'static str, message: String },
}

/// An immutable, fully indexed story/comment collection.
///
/// Safe to share read-only across parallel workers; all mutation happens
/// before construction completes.
#[derive(Debug, Clone)]
pub struct Corpus {
    stories: Vec<Story>,
    comments: Vec<Comment>,
    story_index: HashMap<String, usize>,
    comment_index: HashMap<String, usize>,
    /// story id -> indices into `comments`, in input order.
    by_story: HashMap<String, Vec<usize>>,
}

impl Corpus {
    /// Builds a corpus, enforcing every structural invariant. The first
    /// violation in input order is reported.
    pub fn new(stories: Vec<Story>, comments: Vec<Comment>) -> Result<Self, CorpusError> {
        let mut story_index = HashMap::with_capacity(stories.len());
        for (ix, story) in stories.iter().enumerate() {
            if story.id.is_empty() {
                return Err(CorpusError::InvalidConfig {
                    field: "id",
                    message: "story id must be non-empty".into(),
                });
            }
            if story.digg_count < 0 {
                return Err(CorpusError::NegativeDiggs {
                    id: story.id.clone(),
                    value: story.digg_count,
                });
            }
            match story_index.entry(story.id.clone()) {
                Entry::Vacant(v) => {
                    v.insert(ix);
                }
                Entry::Occupied(_) => {
                    return Err(CorpusError::DuplicateStoryId {
                        id: story.id.clone(),
                    })
                }
            }
        }

        let mut comment_index = HashMap::with_capacity(comments.len());
        for (ix, comment) in comments.iter().enumerate() {
            if comment.diggs_up < 0 {
                return Err(CorpusError::NegativeVotes {
                    id: comment.id.clone(),
                    value: comment.diggs_up,
                });
            }
            if comment.diggs_down < 0 {
                return Err(CorpusError::NegativeVotes {
                    id: comment.id.clone(),
                    value: comment.diggs_down,
                });
            }
            match comment_index.entry(comment.id.clone()) {
                Entry::Vacant(v) => {
                    v.insert(ix);
                }
                Entry::Occupied(_) => {
                    return Err(CorpusError::DuplicateCommentId {
                        id: comment.id.clone(),
                    })
                }
            }
        }

        let mut by_story: HashMap<String, Vec<usize>> =
            HashMap::with_capacity(story_index.len());
        for id in story_index.keys() {
            by_story.insert(id.clone(), Vec::new());
        }
        for (ix, comment) in comments.iter().enumerate() {
            if !story_index.contains_key(&comment.story_id) {
                return Err(CorpusError::UnknownStory {
                    comment_id: comment.id.clone(),
                    story_id: comment.story_id.clone(),
                });
            }
            if let Some(parent_id) = &comment.parent_id {
                match comment_index.get(parent_id) {
                    None => {
                        return Err(CorpusError::DanglingParent {
                            comment_id: comment.id.clone(),
                            parent_id: parent_id.clone(),
                        })
                    }
                    Some(&parent_ix) => {
                        if comments[parent_ix].story_id != comment.story_id {
                            return Err(CorpusError::CrossStoryParent {
                                comment_id: comment.id.clone(),
                                parent_id: parent_id.clone(),
                            });
                        }
                    }
                }
            }
            by_story
                .get_mut(&comment.story_id)
                .expect("story present")
                .push(ix);
        }

        // Reply chains must terminate; a cycle would loop forever downstream.
        if let Some(ix) = find_cycle_member(&comments, &comment_index) {
            return Err(CorpusError::ParentCycle {
                comment_id: comments[ix].id.clone(),
            });
        }

        Ok(Corpus {
            stories,
            comments,
            story_index,
            comment_index,
            by_story,
        })
    }

    /// Builds a corpus without enforcing invariants. Intended for exercising
    /// [`validate_corpus`] on broken data; unresolvable comments are simply
    /// left out of the per-story index.
    pub fn from_parts_unchecked(stories: Vec<Story>, comments: Vec<Comment>) -> Self {
        let mut story_index = HashMap::new();
        for (ix, story) in stories.iter().enumerate() {
            story_index.entry(story.id.clone()).or_insert(ix);
        }
        let mut comment_index = HashMap::new();
        for (ix, comment) in comments.iter().enumerate() {
            comment_index.entry(comment.id.clone()).or_insert(ix);
        }
        let mut by_story: HashMap<String, Vec<usize>> = HashMap::new();
        for id in story_index.keys() {
            by_story.insert(id.clone(), Vec::new());
        }
        for (ix, comment) in comments.iter().enumerate() {
            if let Some(list) = by_story.get_mut(&comment.story_id) {
                list.push(ix);
            }
        }
        Corpus {
            stories,
            comments,
            story_index,
            comment_index,
            by_story,
        }
    }

    pub fn stories(&self) -> &[Story] {
        &self.stories
    }

    pub fn comments(&self) -> &[Comment] {
        &self.comments
    }

    pub fn story(&self, id: &str) -> Option<&Story> {
        self.story_index.get(id).map(|&ix| &self.stories[ix])
    }

    pub fn comment(&self, id: &str) -> Option<&Comment> {
        self.comment_index.get(id).map(|&ix| &self.comments[ix])
    }

    /// Comments of one story, in input order. Empty for unknown ids.
    pub fn comments_of(&self, story_id: &str) -> impl Iterator<Item = &Comment> {
        self.by_story
            .get(story_id)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&ix| &self.comments[ix])
    }

    pub fn n_stories(&self) -> usize {
        self.stories.len()
    }

    pub fn n_comments(&self) -> usize {
        self.comments.len()
    }
}

/// Walks every reply chain; returns a comment index on a cycle, if any.
fn find_cycle_member(
    comments: &[Comment],
    comment_index: &HashMap<String, usize>,
) -> Option<usize> {
    // 0 = unvisited, 1 = on current path, 2 = known-terminating
    let mut state = vec![0u8; comments.len()];
    for start in 0..comments.len() {
        if state[start] != 0 {
            continue;
        }
        let mut path: Vec<usize> = Vec::new();
        let mut cur = start;
        loop {
            if state[cur] == 1 {
                return Some(cur);
            }
            if state[cur] == 2 {
                break;
            }
            state[cur] = 1;
            path.push(cur);
            match &comments[cur].parent_id {
                Some(pid) => match comment_index.get(pid) {
                    Some(&next) => cur = next,
                    None => break, // dangling: reported elsewhere
                },
                None => break,
            }
        }
        for ix in path {
            state[ix] = 2;
        }
    }
    None
}

/// The checks run by [`validate_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    UniqueIds,
    ReferentialIntegrity,
    ForestAcyclicity,
    NonNegativeVotes,
}

/// One violation: the ids involved and a human-readable detail.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub ids: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: CheckKind,
    pub violations: Vec<Violation>,
}

/// Per-check violation listing. Validation reports; it never fails.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.checks.iter().all(|c| c.violations.is_empty())
    }

    pub fn violation_count(&self) -> usize {
        self.checks.iter().map(|c| c.violations.len()).sum()
    }

    pub fn violations_for(&self, kind: CheckKind) -> &[Violation] {
        self.checks
            .iter()
            .find(|c| c.check == kind)
            .map(|c| c.violations.as_slice())
            .unwrap_or(&[])
    }
}

/// Checks uniqueness, referential integrity, reply-forest acyclicity, and
/// vote non-negativity, reporting every violation with the offending ids.
pub fn validate_corpus(corpus: &Corpus) -> ValidationReport {
    let stories = corpus.stories();
    let comments = corpus.comments();

    let mut unique = Vec::new();
    let mut seen_story = HashMap::new();
    for story in stories {
        if let Some(prev) = seen_story.insert(story.id.as_str(), ()) {
            let _ = prev;
            unique.push(Violation {
                ids: vec![story.id.clone()],
                detail: format!("duplicate story id `{}`", story.id),
            });
        }
    }
    let mut seen_comment = HashMap::new();
    for comment in comments {
        if seen_comment.insert(comment.id.as_str(), ()).is_some() {
            unique.push(Violation {
                ids: vec![comment.id.clone()],
                detail: format!("duplicate comment id `{}`", comment.id),
            });
        }
    }

    let mut referential = Vec::new();
    let mut comment_ix = HashMap::new();
    for (ix, comment) in comments.iter().enumerate() {
        comment_ix.entry(comment.id.as_str()).or_insert(ix);
    }
    let story_ids: HashMap<&str, ()> = stories.iter().map(|s| (s.id.as_str(), ())).collect();
    for comment in comments {
        if !story_ids.contains_key(comment.story_id.as_str()) {
            referential.push(Violation {
                ids: vec![comment.id.clone()],
                detail: format!(
                    "comment `{}` references unknown story `{}`",
                    comment.id, comment.story_id
                ),
            });
        }
        if let Some(pid) = &comment.parent_id {
            match comment_ix.get(pid.as_str()) {
                None => referential.push(Violation {
                    ids: vec![comment.id.clone(), pid.clone()],
                    detail: format!("comment `{}` has dangling parent `{}`", comment.id, pid),
                }),
                Some(&pix) => {
                    if comments[pix].story_id != comment.story_id {
                        referential.push(Violation {
                            ids: vec![comment.id.clone(), pid.clone()],
                            detail: format!(
                                "comment `{}` replies across stories to `{}`",
                                comment.id, pid
                            ),
                        });
                    }
                }
            }
        }
    }

    let mut acyclicity = Vec::new();
    for cycle in find_all_cycles(comments, &comment_ix) {
        let detail = format!("reply cycle: {}", cycle.join(" -> "));
        acyclicity.push(Violation { ids: cycle, detail });
    }

    let mut votes = Vec::new();
    for story in stories {
        if story.digg_count < 0 {
            votes.push(Violation {
                ids: vec![story.id.clone()],
                detail: format!(
                    "story `{}` has negative digg count {}",
                    story.id, story.digg_count
                ),
            });
        }
    }
    for comment in comments {
        if comment.diggs_up < 0 || comment.diggs_down < 0 {
            votes.push(Violation {
                ids: vec![comment.id.clone()],
                detail: format!(
                    "comment `{}` has negative votes (up {}, down {})",
                    comment.id, comment.diggs_up, comment.diggs_down
                ),
            });
        }
    }

    ValidationReport {
        checks: vec![
            CheckResult {
                check: CheckKind::UniqueIds,
                violations: unique,
            },
            CheckResult {
                check: CheckKind::ReferentialIntegrity,
                violations: referential,
            },
            CheckResult {
                check: CheckKind::ForestAcyclicity,
                violations: acyclicity,
            },
            CheckResult {
                check: CheckKind::NonNegativeVotes,
                violations: votes,
            },
        ],
    }
}

/// Finds every distinct reply cycle; each is reported once with all member
/// ids in chain order.
fn find_all_cycles(comments: &[Comment], comment_ix: &HashMap<&str, usize>) -> Vec<Vec<String>> {
    let mut state = vec![0u8; comments.len()];
    let mut cycles = Vec::new();
    for start in 0..comments.len() {
        if state[start] != 0 {
            continue;
        }
        let mut path: Vec<usize> = Vec::new();
        let mut cur = start;
        loop {
            if state[cur] == 1 {
                // `cur` is on the current path: everything from its first
                // occurrence onward forms the cycle.
                let pos = path.iter().position(|&ix| ix == cur).expect("on path");
                let cycle: Vec<String> =
                    path[pos..].iter().map(|&ix| comments[ix].id.clone()).collect();
                cycles.push(cycle);
                break;
            }
            if state[cur] == 2 {
                break;
            }
            state[cur] = 1;
            path.push(cur);
            match &comments[cur].parent_id {
                Some(pid) => match comment_ix.get(pid.as_str()) {
                    Some(&next) => cur = next,
                    None => break,
                },
                None => break,
            }
        }
        for ix in path {
            state[ix] = 2;
        }
    }
    cycles
}
