//! Ingestion, validation, and round-trip behavior on real files.

mod common;

use std::fs;
use std::path::{Path, PathBuf};

use virality::corpus::{
    generate_synthetic, load_corpus, validate_corpus, write_corpus, CorpusError, SynthConfig,
};
use virality::metrics::{compute_all_metrics, MetricKind};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn fixture_corpus() -> virality::corpus::Corpus {
    load_corpus(&fixture("stories.jsonl"), &fixture("comments.jsonl")).unwrap()
}

#[test]
fn fixture_counts_match_hand_count() {
    let corpus = fixture_corpus();
    assert_eq!(corpus.n_stories(), 3);
    assert_eq!(corpus.n_comments(), 7);
    assert_eq!(corpus.comments_of("s1").count(), 4);
    assert_eq!(corpus.comments_of("s2").count(), 3);
    assert_eq!(corpus.comments_of("s3").count(), 0);
    assert!(validate_corpus(&corpus).is_clean());
}

#[test]
fn two_stories_no_comments() {
    let dir = tempfile::tempdir().unwrap();
    let stories = dir.path().join("stories.jsonl");
    let comments = dir.path().join("comments.jsonl");
    fs::write(
        &stories,
        concat!(
            "{\"id\":\"a\",\"title\":\"t\",\"snippet\":\"s\",\"diggs\":3}\n",
            "{\"id\":\"b\",\"title\":\"\",\"snippet\":\"\",\"diggs\":0}\n",
        ),
    )
    .unwrap();
    fs::write(&comments, "").unwrap();
    let corpus = load_corpus(&stories, &comments).unwrap();
    assert_eq!(corpus.n_stories(), 2);
    assert_eq!(corpus.n_comments(), 0);
    assert_eq!(corpus.comments_of("a").count(), 0);
}

#[test]
fn cross_story_parent_rejected_naming_comment() {
    let dir = tempfile::tempdir().unwrap();
    let stories = dir.path().join("stories.jsonl");
    let comments = dir.path().join("comments.jsonl");
    fs::write(
        &stories,
        concat!(
            "{\"id\":\"a\",\"title\":\"t\",\"snippet\":\"s\",\"diggs\":0}\n",
            "{\"id\":\"b\",\"title\":\"t\",\"snippet\":\"s\",\"diggs\":0}\n",
        ),
    )
    .unwrap();
    fs::write(
        &comments,
        concat!(
            "{\"id\":\"c1\",\"story_id\":\"a\",\"user_id\":\"u\",\"parent_id\":null,\"diggs_up\":0,\"diggs_down\":0,\"emotion\":null}\n",
            "{\"id\":\"c2\",\"story_id\":\"b\",\"user_id\":\"u\",\"parent_id\":\"c1\",\"diggs_up\":0,\"diggs_down\":0,\"emotion\":null}\n",
        ),
    )
    .unwrap();
    match load_corpus(&stories, &comments) {
        Err(CorpusError::CrossStoryParent { comment_id, .. }) => assert_eq!(comment_id, "c2"),
        other => panic!("expected cross-story rejection, got {other:?}"),
    }
}

#[test]
fn malformed_line_reports_line_number_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let stories = dir.path().join("stories.jsonl");
    let comments = dir.path().join("comments.jsonl");
    fs::write(
        &stories,
        concat!(
            "{\"id\":\"a\",\"title\":\"t\",\"snippet\":\"s\",\"diggs\":0}\n",
            "{\"id\":\"b\",\"title\":\"t\",\"diggs\":1}\n", // missing snippet
        ),
    )
    .unwrap();
    fs::write(&comments, "").unwrap();
    match load_corpus(&stories, &comments) {
        Err(CorpusError::Parse { line, message, .. }) => {
            assert_eq!(line, 2);
            assert!(message.contains("snippet"), "message: {message}");
        }
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn negative_diggs_rejected_at_load() {
    let dir = tempfile::tempdir().unwrap();
    let stories = dir.path().join("stories.jsonl");
    let comments = dir.path().join("comments.jsonl");
    fs::write(
        &stories,
        "{\"id\":\"a\",\"title\":\"t\",\"snippet\":\"s\",\"diggs\":-1}\n",
    )
    .unwrap();
    fs::write(&comments, "").unwrap();
    match load_corpus(&stories, &comments) {
        Err(CorpusError::InvalidField { field, line, .. }) => {
            assert_eq!(field, "diggs");
            assert_eq!(line, 1);
        }
        other => panic!("expected invalid-field error, got {other:?}"),
    }
}

#[test]
fn duplicate_and_orphan_rejections_name_ids() {
    let dir = tempfile::tempdir().unwrap();
    let stories = dir.path().join("stories.jsonl");
    let comments = dir.path().join("comments.jsonl");
    fs::write(
        &stories,
        concat!(
            "{\"id\":\"a\",\"title\":\"\",\"snippet\":\"\",\"diggs\":0}\n",
            "{\"id\":\"a\",\"title\":\"\",\"snippet\":\"\",\"diggs\":0}\n",
        ),
    )
    .unwrap();
    fs::write(&comments, "").unwrap();
    match load_corpus(&stories, &comments) {
        Err(CorpusError::DuplicateStoryId { id }) => assert_eq!(id, "a"),
        other => panic!("expected duplicate rejection, got {other:?}"),
    }

    fs::write(
        &stories,
        "{\"id\":\"a\",\"title\":\"\",\"snippet\":\"\",\"diggs\":0}\n",
    )
    .unwrap();
    fs::write(
        &comments,
        "{\"id\":\"c1\",\"story_id\":\"ghost\",\"user_id\":\"u\",\"parent_id\":null,\"diggs_up\":0,\"diggs_down\":0,\"emotion\":null}\n",
    )
    .unwrap();
    match load_corpus(&stories, &comments) {
        Err(CorpusError::UnknownStory {
            comment_id,
            story_id,
        }) => {
            assert_eq!(comment_id, "c1");
            assert_eq!(story_id, "ghost");
        }
        other => panic!("expected orphan rejection, got {other:?}"),
    }
}

#[test]
fn round_trip_preserves_every_record() {
    let corpus = fixture_corpus();
    let dir = tempfile::tempdir().unwrap();
    let stories = dir.path().join("stories.jsonl");
    let comments = dir.path().join("comments.jsonl");
    write_corpus(&corpus, &stories, &comments).unwrap();
    let reloaded = load_corpus(&stories, &comments).unwrap();
    assert_eq!(reloaded.stories(), corpus.stories());
    assert_eq!(reloaded.comments(), corpus.comments());
}

#[test]
fn parent_chains_terminate_within_comment_count() {
    let corpus = common::random_corpus(99, 20, 200);
    let bound = corpus.n_comments();
    for comment in corpus.comments() {
        let mut steps = 0;
        let mut cur = comment;
        while let Some(pid) = &cur.parent_id {
            cur = corpus.comment(pid).expect("parent resolves");
            assert_eq!(cur.story_id, comment.story_id);
            steps += 1;
            assert!(steps <= bound, "chain exceeded {bound} steps");
        }
    }
}

#[test]
fn synthetic_truth_sidecar_agrees_with_computed_metrics() {
    let cfg = SynthConfig::new(400, 17);
    let synth = generate_synthetic(&cfg).unwrap();
    let all = compute_all_metrics(&synth.corpus);
    let rules = virality::dataset::default_rules();
    for truth in &synth.truth {
        let m = &all[&truth.story_id];
        for kind in [
            MetricKind::Appreciation,
            MetricKind::Buzz,
            MetricKind::RaisingDiscussion,
            MetricKind::Controversiality,
        ] {
            let planted = truth.planted.iter().any(|p| p == kind.name());
            let is_positive = rules[&kind].is_positive(m);
            assert_eq!(
                planted, is_positive,
                "story {} metric {kind}: planted={planted} computed={is_positive}",
                truth.story_id
            );
        }
    }
}
