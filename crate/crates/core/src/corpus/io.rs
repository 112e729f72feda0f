//! Line-delimited ingestion and re-serialization.
//!
//! `stories.jsonl`: one object per line with `id`, `title`, `snippet`,
//! `diggs`. `comments.jsonl`: `id`, `story_id`, `user_id`, `parent_id`
//! (nullable), `diggs_up`, `diggs_down`, `emotion` (nullable
//! `positive|negative|neutral`). A missing or null emotion ingests as
//! [`Emotion::Unknown`].

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Comment, Corpus, CorpusError, Emotion, Story};

#[derive(Serialize, Deserialize)]
struct CommentRecord {
    id: String,
    story_id: String,
    user_id: String,
    parent_id: Option<String>,
    diggs_up: i64,
    diggs_down: i64,
    #[serde(default)]
    emotion: Option<String>,
}

fn emotion_from_field(
    value: Option<String>,
    path: &str,
    line: usize,
) -> Result<Emotion, CorpusError> {
    match value.as_deref() {
        None => Ok(Emotion::Unknown),
        Some("positive") => Ok(Emotion::Positive),
        Some("negative") => Ok(Emotion::Negative),
        Some("neutral") => Ok(Emotion::Neutral),
        Some(other) => Err(CorpusError::InvalidField {
            path: path.to_string(),
            line,
            field: "emotion",
            message: format!("expected positive|negative|neutral|null, got `{other}`"),
        }),
    }
}

fn emotion_to_field(e: Emotion) -> Option<String> {
    match e {
        Emotion::Positive => Some("positive".into()),
        Emotion::Negative => Some("negative".into()),
        Emotion::Neutral => Some("neutral".into()),
        Emotion::Unknown => None,
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CorpusError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })
}

fn read_line_error(path: &Path, source: std::io::Error) -> CorpusError {
    CorpusError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Loads and fully indexes a corpus from line-delimited story and comment
/// files. Malformed lines are rejected with their line number and field;
/// orphan comments, dangling or cross-story parents, duplicates, reply
/// cycles, and negative counts are all rejected, so the result always
/// validates clean.
pub fn load_corpus(stories_path: &Path, comments_path: &Path) -> Result<Corpus, CorpusError> {
    let path_str = stories_path.display().to_string();
    let mut stories = Vec::new();
    for (ix, line) in open(stories_path)?.lines().enumerate() {
        let line = line.map_err(|e| read_line_error(stories_path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = ix + 1;
        let story: Story = serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
            path: path_str.clone(),
            line: lineno,
            message: e.to_string(),
        })?;
        if story.digg_count < 0 {
            return Err(CorpusError::InvalidField {
                path: path_str.clone(),
                line: lineno,
                field: "diggs",
                message: format!("must be >= 0, got {}", story.digg_count),
            });
        }
        if story.id.is_empty() {
            return Err(CorpusError::InvalidField {
                path: path_str.clone(),
                line: lineno,
                field: "id",
                message: "must be non-empty".into(),
            });
        }
        stories.push(story);
    }

    let path_str = comments_path.display().to_string();
    let mut comments = Vec::new();
    for (ix, line) in open(comments_path)?.lines().enumerate() {
        let line = line.map_err(|e| read_line_error(comments_path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = ix + 1;
        let record: CommentRecord =
            serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
                path: path_str.clone(),
                line: lineno,
                message: e.to_string(),
            })?;
        for (field, value) in [("diggs_up", record.diggs_up), ("diggs_down", record.diggs_down)] {
            if value < 0 {
                return Err(CorpusError::InvalidField {
                    path: path_str.clone(),
                    line: lineno,
                    field,
                    message: format!("must be >= 0, got {value}"),
                });
            }
        }
        let emotion = emotion_from_field(record.emotion, &path_str, lineno)?;
        comments.push(Comment {
            id: record.id,
            story_id: record.story_id,
            user_id: record.user_id,
            parent_id: record.parent_id,
            diggs_up: record.diggs_up,
            diggs_down: record.diggs_down,
            emotion,
        });
    }

    Corpus::new(stories, comments)
}

/// Re-serializes a corpus to the ingestion formats. Record order is
/// preserved, so `write_corpus(load_corpus(f))` reproduces `f` up to field
/// ordering within each record.
pub fn write_corpus(
    corpus: &Corpus,
    stories_path: &Path,
    comments_path: &Path,
) -> Result<(), CorpusError> {
    let io_err = |path: &Path, source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut w = BufWriter::new(File::create(stories_path).map_err(|e| io_err(stories_path, e))?);
    for story in corpus.stories() {
        let line = serde_json::to_string(story).expect("story serializes");
        writeln!(w, "{line}").map_err(|e| io_err(stories_path, e))?;
    }
    w.flush().map_err(|e| io_err(stories_path, e))?;

    let mut w = BufWriter::new(File::create(comments_path).map_err(|e| io_err(comments_path, e))?);
    for comment in corpus.comments() {
        let record = CommentRecord {
            id: comment.id.clone(),
            story_id: comment.story_id.clone(),
            user_id: comment.user_id.clone(),
            parent_id: comment.parent_id.clone(),
            diggs_up: comment.diggs_up,
            diggs_down: comment.diggs_down,
            emotion: emotion_to_field(comment.emotion),
        };
        let line = serde_json::to_string(&record).expect("comment serializes");
        writeln!(w, "{line}").map_err(|e| io_err(comments_path, e))?;
    }
    w.flush().map_err(|e| io_err(comments_path, e))?;
    Ok(())
}
