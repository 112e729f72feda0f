//! Soft-margin binary linear SVM trained on the primal.
//!
//! Minimizes `(1/2)·||w||^2 + C · Σ max(0, 1 - y_i(w·x_i + b))`.
//!
//! Two solver modes share that objective:
//!
//! - **Stochastic** (default): seeded subgradient descent with the standard
//!   `1/(λt)` step schedule on the equivalent mean-loss form
//!   (`λ = 1/(nC)`), a `1/t` bias step, example order reshuffled each epoch.
//!   The returned model is the epoch-end iterate with the lowest objective.
//! - **FullBatch**: subgradient descent with halving line search; a step is
//!   accepted only if it strictly lowers the objective, so the recorded
//!   per-epoch objectives are strictly decreasing.
//!
//! With `CMode::Auto`, `C = 1 / mean(||x_i||^2)` over the training set, the
//! conventional default of linear SVM tooling. Training is deterministic for
//! fixed seed; flipping every label exactly negates the learned `(w, b)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::FeatureVector;

#[derive(Debug, Error)]
pub enum SvmError {
    #[error("invalid parameter: {message}")]
    Param { message: String },
    #[error("training data contains only the {label:+} class")]
    SingleClass { label: i8 },
    #[error("feature index {index} out of range for dimension {dim}")]
    Dimension { index: usize, dim: usize },
    #[error("malformed model: {message}")]
    ModelFormat { message: String },
}

/// How the soft-margin trade-off C is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CMode {
    /// C = 1 / mean squared example norm.
    Auto,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainMode {
    Stochastic,
    FullBatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub c_mode: CMode,
    /// Used when `c_mode` is `Fixed`; must be positive.
    pub c_value: f64,
    /// Epoch budget (passes over the data).
    pub epochs: usize,
    /// Stop when the relative objective change between epochs drops below
    /// this; must be positive.
    pub tolerance: f64,
    /// Seed for example shuffling.
    pub seed: u64,
    pub mode: TrainMode,
}

impl Default for HyperParams {
    fn default() -> Self {
        HyperParams {
            c_mode: CMode::Auto,
            c_value: 1.0,
            epochs: 100,
            tolerance: 1e-3,
            seed: 0,
            mode: TrainMode::Stochastic,
        }
    }
}

/// Training record kept with the model.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainMeta {
    pub c_resolved: f64,
    pub epochs_run: usize,
    pub final_objective: f64,
    /// Objective after each epoch (full-batch: each accepted epoch).
    pub epoch_objectives: Vec<f64>,
}

/// A trained linear classifier: dense weights and a bias term.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub meta: TrainMeta,
}

fn dot(w: &[f64], x: &FeatureVector) -> f64 {
    x.iter().map(|(ix, v)| w[ix] * v).sum()
}

fn validate(
    dim: usize,
    data: &[(FeatureVector, i8)],
    hp: &HyperParams,
) -> Result<(), SvmError> {
    if data.is_empty() {
        return Err(SvmError::Param {
            message: "training data is empty".into(),
        });
    }
    if hp.epochs == 0 {
        return Err(SvmError::Param {
            message: "epochs must be >= 1".into(),
        });
    }
    if !(hp.tolerance > 0.0) {
        return Err(SvmError::Param {
            message: format!("tolerance must be > 0, got {}", hp.tolerance),
        });
    }
    if hp.c_mode == CMode::Fixed && !(hp.c_value > 0.0) {
        return Err(SvmError::Param {
            message: format!("c_value must be > 0, got {}", hp.c_value),
        });
    }
    let mut seen_pos = false;
    let mut seen_neg = false;
    for (x, y) in data {
        match y {
            1 => seen_pos = true,
            -1 => seen_neg = true,
            other => {
                return Err(SvmError::Param {
                    message: format!("labels must be +1 or -1, got {other}"),
                })
            }
        }
        if let Some(ix) = x.max_index() {
            if ix >= dim {
                return Err(SvmError::Dimension { index: ix, dim });
            }
        }
    }
    if !seen_pos {
        return Err(SvmError::SingleClass { label: -1 });
    }
    if !seen_neg {
        return Err(SvmError::SingleClass { label: 1 });
    }
    Ok(())
}

/// Resolves C for this training set per the hyperparameters.
pub fn resolve_c(data: &[(FeatureVector, i8)], hp: &HyperParams) -> Result<f64, SvmError> {
    match hp.c_mode {
        CMode::Fixed => Ok(hp.c_value),
        CMode::Auto => {
            let mean_sq =
                data.iter().map(|(x, _)| x.squared_norm()).sum::<f64>() / data.len() as f64;
            if mean_sq > 0.0 {
                Ok(1.0 / mean_sq)
            } else {
                Err(SvmError::Param {
                    message: "auto C undefined: every training vector is empty".into(),
                })
            }
        }
    }
}

/// The exact training objective at `(weights, bias)`:
/// `(1/2)·||w||^2 + c · Σ hinge_i`.
pub fn objective_at(weights: &[f64], bias: f64, data: &[(FeatureVector, i8)], c: f64) -> f64 {
    let reg = 0.5 * weights.iter().map(|w| w * w).sum::<f64>();
    let hinge: f64 = data
        .iter()
        .map(|(x, y)| (1.0 - (*y as f64) * (dot(weights, x) + bias)).max(0.0))
        .sum();
    reg + c * hinge
}

/// Full-batch subgradient of the objective at `(weights, bias)`, taking the
/// inactive branch at hinge kinks (margin exactly 1).
pub fn objective_subgradient(
    weights: &[f64],
    bias: f64,
    data: &[(FeatureVector, i8)],
    c: f64,
) -> (Vec<f64>, f64) {
    let mut gw = weights.to_vec();
    let mut gb = 0.0;
    for (x, y) in data {
        let y = *y as f64;
        if y * (dot(weights, x) + bias) < 1.0 {
            for (ix, v) in x.iter() {
                gw[ix] -= c * y * v;
            }
            gb -= c * y;
        }
    }
    (gw, gb)
}

/// The trainer's objective for a model on `data`, with C resolved exactly as
/// [`train`] resolves it.
pub fn objective(
    model: &SvmModel,
    data: &[(FeatureVector, i8)],
    hp: &HyperParams,
) -> Result<f64, SvmError> {
    for (x, _) in data {
        if let Some(ix) = x.max_index() {
            if ix >= model.weights.len() {
                return Err(SvmError::Dimension {
                    index: ix,
                    dim: model.weights.len(),
                });
            }
        }
    }
    let c = resolve_c(data, hp)?;
    Ok(objective_at(&model.weights, model.bias, data, c))
}

/// Trains a model of dimension `dim`. Requires non-empty data with both
/// labels present; deterministic for a fixed `hp.seed`.
pub fn train(
    dim: usize,
    data: &[(FeatureVector, i8)],
    hp: &HyperParams,
) -> Result<SvmModel, SvmError> {
    validate(dim, data, hp)?;
    let c = resolve_c(data, hp)?;
    match hp.mode {
        TrainMode::Stochastic => Ok(train_stochastic(dim, data, hp, c)),
        TrainMode::FullBatch => Ok(train_full_batch(dim, data, hp, c)),
    }
}

fn train_stochastic(
    dim: usize,
    data: &[(FeatureVector, i8)],
    hp: &HyperParams,
    c: f64,
) -> SvmModel {
    let n = data.len();
    let lambda = 1.0 / (n as f64 * c);
    let mut w = vec![0.0f64; dim];
    let mut b = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut t: u64 = 0;

    let mut best_obj = f64::INFINITY;
    let mut best_w = w.clone();
    let mut best_b = b;
    let mut prev_obj = f64::INFINITY;
    let mut epoch_objectives = Vec::new();

    for _epoch in 0..hp.epochs {
        for i in (1..order.len()).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        for &i in &order {
            t += 1;
            let (x, y) = &data[i];
            let y = *y as f64;
            let violated = y * (dot(&w, x) + b) < 1.0;
            let decay = 1.0 - 1.0 / t as f64; // = 1 - eta * lambda
            for wi in &mut w {
                *wi *= decay;
            }
            if violated {
                let eta = 1.0 / (lambda * t as f64);
                for (ix, v) in x.iter() {
                    w[ix] += eta * y * v;
                }
                b += y / t as f64;
            }
        }
        let obj = objective_at(&w, b, data, c);
        epoch_objectives.push(obj);
        if obj < best_obj {
            best_obj = obj;
            best_w.copy_from_slice(&w);
            best_b = b;
        }
        if prev_obj.is_finite() {
            let rel = (prev_obj - obj).abs() / prev_obj.abs().max(f64::MIN_POSITIVE);
            if rel < hp.tolerance {
                break;
            }
        }
        prev_obj = obj;
    }

    let epochs_run = epoch_objectives.len();
    SvmModel {
        weights: best_w,
        bias: best_b,
        meta: TrainMeta {
            c_resolved: c,
            epochs_run,
            final_objective: best_obj,
            epoch_objectives,
        },
    }
}

fn train_full_batch(
    dim: usize,
    data: &[(FeatureVector, i8)],
    hp: &HyperParams,
    c: f64,
) -> SvmModel {
    let mut w = vec![0.0f64; dim];
    let mut b = 0.0f64;
    let mut current = objective_at(&w, b, data, c);
    let mut epoch_objectives = Vec::new();

    for _epoch in 0..hp.epochs {
        let (gw, gb) = objective_subgradient(&w, b, data, c);
        let mut eta = 1.0f64;
        let mut accepted = false;
        for _ in 0..60 {
            let wt: Vec<f64> = w.iter().zip(&gw).map(|(wi, gi)| wi - eta * gi).collect();
            let bt = b - eta * gb;
            let obj = objective_at(&wt, bt, data, c);
            if obj < current {
                let prev = current;
                w = wt;
                b = bt;
                current = obj;
                epoch_objectives.push(current);
                accepted = true;
                let rel = (prev - current) / prev.abs().max(f64::MIN_POSITIVE);
                if rel < hp.tolerance {
                    return finish(w, b, c, current, epoch_objectives);
                }
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            break; // no strictly improving step: treat as converged
        }
    }
    finish(w, b, c, current, epoch_objectives)
}

fn finish(
    weights: Vec<f64>,
    bias: f64,
    c: f64,
    final_objective: f64,
    epoch_objectives: Vec<f64>,
) -> SvmModel {
    let epochs_run = epoch_objectives.len();
    SvmModel {
        weights,
        bias,
        meta: TrainMeta {
            c_resolved: c,
            epochs_run,
            final_objective,
            epoch_objectives,
        },
    }
}

/// Decision rule: `margin = w·x + b`, label `+1` iff margin >= 0 (a tie at
/// exactly zero goes to +1).
pub fn predict(model: &SvmModel, x: &FeatureVector) -> Result<(i8, f64), SvmError> {
    if let Some(ix) = x.max_index() {
        if ix >= model.weights.len() {
            return Err(SvmError::Dimension {
                index: ix,
                dim: model.weights.len(),
            });
        }
    }
    let margin = dot(&model.weights, x) + model.bias;
    Ok((if margin >= 0.0 { 1 } else { -1 }, margin))
}

/// Writes the versioned text format: `viral-svm 1`, `dim N`, `bias B`, then
/// one `index:weight` line per nonzero weight. Floats use the shortest
/// representation that round-trips exactly.
pub fn write_model<W: std::io::Write>(mut writer: W, model: &SvmModel) -> std::io::Result<()> {
    writeln!(writer, "viral-svm 1")?;
    writeln!(writer, "dim {}", model.weights.len())?;
    writeln!(writer, "bias {}", model.bias)?;
    for (ix, w) in model.weights.iter().enumerate() {
        if *w != 0.0 {
            writeln!(writer, "{ix}:{w}")?;
        }
    }
    Ok(())
}

/// Reads the format written by [`write_model`]. Training metadata is not
/// part of the format and comes back zeroed.
pub fn read_model<R: std::io::BufRead>(reader: R) -> Result<SvmModel, SvmError> {
    let bad = |message: String| SvmError::ModelFormat { message };
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| bad("empty input".into()))?
        .map_err(|e| bad(e.to_string()))?;
    if header.trim() != "viral-svm 1" {
        return Err(bad(format!("unsupported header `{header}`")));
    }
    let dim_line = lines
        .next()
        .ok_or_else(|| bad("missing dim line".into()))?
        .map_err(|e| bad(e.to_string()))?;
    let dim: usize = dim_line
        .strip_prefix("dim ")
        .ok_or_else(|| bad(format!("expected `dim N`, got `{dim_line}`")))?
        .parse()
        .map_err(|e| bad(format!("bad dim: {e}")))?;
    let bias_line = lines
        .next()
        .ok_or_else(|| bad("missing bias line".into()))?
        .map_err(|e| bad(e.to_string()))?;
    let bias: f64 = bias_line
        .strip_prefix("bias ")
        .ok_or_else(|| bad(format!("expected `bias B`, got `{bias_line}`")))?
        .parse()
        .map_err(|e| bad(format!("bad bias: {e}")))?;
    let mut weights = vec![0.0f64; dim];
    for line in lines {
        let line = line.map_err(|e| bad(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let (ix, value) = line
            .split_once(':')
            .ok_or_else(|| bad(format!("expected `index:weight`, got `{line}`")))?;
        let ix: usize = ix.parse().map_err(|e| bad(format!("bad index: {e}")))?;
        if ix >= dim {
            return Err(SvmError::Dimension { index: ix, dim });
        }
        weights[ix] = value
            .parse()
            .map_err(|e| bad(format!("bad weight: {e}")))?;
    }
    Ok(SvmModel {
        weights,
        bias,
        meta: TrainMeta::default(),
    })
}
