//! Property-based invariants across the pipeline.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use virality::dataset::{build_balanced, overlap_matrix, LabeledDataset, NegativePool};
use virality::metrics::{
    buzz_polarity, controversiality_score, raising_discussion_score, MetricKind, Polarity,
    Rational,
};
use virality::svm::{self, HyperParams, TrainMode};
use virality::text::{build_vocabulary, tokenize, vectorize, FeatureConfig, FeatureVector};

proptest! {
    #[test]
    fn controversiality_symmetry_range_and_extremes(a in 0i64..2000, b in 0i64..2000) {
        let ab = controversiality_score(a, b).unwrap();
        let ba = controversiality_score(b, a).unwrap();
        prop_assert_eq!(ab, ba);
        if let Some(c) = ab {
            prop_assert!(c >= Rational::from_integer(0));
            prop_assert!(c <= Rational::from_integer(1));
            prop_assert_eq!(c == Rational::from_integer(1), a == b && a > 0);
            prop_assert_eq!(
                c == Rational::from_integer(0),
                (a == 0) != (b == 0)
            );
        } else {
            prop_assert_eq!((a, b), (0, 0));
        }
    }

    #[test]
    fn controversiality_scale_invariance(a in 0i64..500, b in 0i64..500, k in 1i64..20) {
        let base = controversiality_score(a, b).unwrap();
        let scaled = controversiality_score(k * a, k * b).unwrap();
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn raising_discussion_monotone(nc_low in 0u64..200, nc_total in 1u64..200, nuc in 0u64..200) {
        let nc_low = nc_low.min(nc_total);
        let rd = raising_discussion_score(nc_low, nc_total, nuc).unwrap();
        if nc_low < nc_total {
            let bumped = raising_discussion_score(nc_low + 1, nc_total, nuc).unwrap();
            prop_assert!(bumped >= rd);
        }
        // monotone in nuc at fixed reply ratio
        let more_users = raising_discussion_score(nc_low, nc_total, nuc + 1).unwrap();
        prop_assert!(more_users >= rd);
    }

    #[test]
    fn polarity_exclusive_and_neutral_stable(p in 0u64..100, m in 0u64..100, n in 0u64..100) {
        let polarity = buzz_polarity(p, m, n);
        // white and black are mutually exclusive by construction
        prop_assert!(!(p > m + n && n > m + p));
        // adding a neutral comment never flips neither -> white/black
        if polarity == Polarity::Neither {
            prop_assert_eq!(buzz_polarity(p, m + 1, n), Polarity::Neither);
        }
    }

    #[test]
    fn tokenizer_idempotent(text in "\\PC{0,80}") {
        let once = tokenize(&text);
        let twice = tokenize(&once.join(" "));
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn balanced_dataset_always_balanced(
        n_pos in 0usize..30,
        extra in 0usize..30,
        seed in any::<u64>(),
    ) {
        let positives: BTreeSet<String> = (0..n_pos).map(|i| format!("p{i}")).collect();
        let pool = NegativePool {
            preferred: (0..n_pos + extra).map(|i| format!("n{i}")).collect(),
            fallback: BTreeSet::new(),
        };
        let ds = build_balanced(MetricKind::Buzz, &positives, &pool, seed).unwrap();
        prop_assert_eq!(ds.positives.len(), ds.negatives.len());
        prop_assert!(ds.positives.is_disjoint(&ds.negatives));
        prop_assert!(ds.negatives.iter().all(|id| pool.preferred.contains(id)));
    }

    #[test]
    fn overlap_reciprocity_exact(
        bits in proptest::collection::vec(0u8..16, 1..120),
    ) {
        // bit i of each element decides membership of that story in metric i's positives
        let mut sets: Vec<BTreeSet<String>> = vec![BTreeSet::new(); 4];
        for (story, mask) in bits.iter().enumerate() {
            for (metric_ix, set) in sets.iter_mut().enumerate() {
                if mask & (1 << metric_ix) != 0 {
                    set.insert(format!("s{story}"));
                }
            }
        }
        let kinds = MetricKind::CLASSIFIED;
        let datasets = kinds
            .iter()
            .zip(&sets)
            .map(|(&metric, positives)| {
                (metric, LabeledDataset {
                    metric,
                    positives: positives.clone(),
                    negatives: BTreeSet::new(),
                    seed: 0,
                })
            })
            .collect();
        let matrix = overlap_matrix(&datasets).unwrap();
        for &x in &kinds {
            for &y in &kinds {
                let xy = matrix.cell_exact(x, y);
                let yx = matrix.cell_exact(y, x);
                if let (Some((ixy, px)), Some((iyx, py))) = (xy, yx) {
                    // cell(X,Y)·|pos(X)| = 100·|X∩Y| = cell(Y,X)·|pos(Y)|, pre-rounding
                    prop_assert_eq!(ixy, iyx);
                    prop_assert!(px > 0 && py > 0);
                }
                if let Some((ixy, px)) = xy {
                    prop_assert!(ixy <= px);
                }
            }
        }
    }

    #[test]
    fn svm_label_flip_antisymmetry(
        raw in proptest::collection::vec(
            (proptest::collection::vec(-2.0f64..2.0, 3), prop_oneof![Just(1i8), Just(-1i8)]),
            4..20,
        ),
        seed in any::<u64>(),
    ) {
        let mut data: Vec<(FeatureVector, i8)> = Vec::new();
        let mut seen = [false, false];
        for (dense, label) in &raw {
            let pairs: Vec<(usize, f64)> = dense
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(ix, v)| (ix, *v))
                .collect();
            data.push((FeatureVector::from_pairs(pairs), *label));
            seen[if *label == 1 { 0 } else { 1 }] = true;
        }
        prop_assume!(seen[0] && seen[1]);
        prop_assume!(data.iter().any(|(x, _)| !x.is_empty()));
        let flipped: Vec<(FeatureVector, i8)> =
            data.iter().map(|(x, y)| (x.clone(), -y)).collect();
        let hp = HyperParams { seed, epochs: 15, ..HyperParams::default() };
        let a = svm::train(3, &data, &hp).unwrap();
        let b = svm::train(3, &flipped, &hp).unwrap();
        for (wa, wb) in a.weights.iter().zip(&b.weights) {
            prop_assert_eq!(*wa, -*wb);
        }
        prop_assert_eq!(a.bias, -b.bias);
    }
}

#[test]
fn full_batch_objective_permutation_stable() {
    let mut data: Vec<(FeatureVector, i8)> = Vec::new();
    for i in 0..24usize {
        let pairs = vec![(0, (i % 5) as f64 + 0.5), (1, ((i * 7) % 3) as f64 + 0.25)];
        data.push((
            FeatureVector::from_pairs(pairs),
            if i % 2 == 0 { 1 } else { -1 },
        ));
    }
    let hp = HyperParams {
        mode: TrainMode::FullBatch,
        epochs: 60,
        tolerance: 1e-10,
        ..HyperParams::default()
    };
    let a = svm::train(2, &data, &hp).unwrap();
    let mut permuted = data.clone();
    permuted.reverse();
    permuted.swap(0, 5);
    let b = svm::train(2, &permuted, &hp).unwrap();
    let rel = (a.meta.final_objective - b.meta.final_objective).abs()
        / a.meta.final_objective.abs().max(1e-12);
    assert!(rel < 1e-9, "relative objective gap {rel}");
}

#[test]
fn stochastic_objective_permutation_within_tolerance() {
    // With a configured tolerance, reordering training examples moves the
    // achieved objective by at most that tolerance (relative).
    let tolerance = 0.05;
    let mut data: Vec<(FeatureVector, i8)> = Vec::new();
    for i in 0..40usize {
        let x = (i % 7) as f64 - 3.0;
        let pairs: Vec<(usize, f64)> = [(0usize, x), (1, 1.0 + (i % 3) as f64)]
            .into_iter()
            .filter(|(_, v)| *v != 0.0)
            .collect();
        let label = if x + 0.3 * ((i % 3) as f64) > 0.0 { 1 } else { -1 };
        data.push((FeatureVector::from_pairs(pairs), label));
    }
    let hp = HyperParams {
        epochs: 120,
        tolerance,
        seed: 4,
        ..HyperParams::default()
    };
    let a = svm::train(2, &data, &hp).unwrap();
    let mut permuted = data.clone();
    permuted.rotate_left(13);
    let b = svm::train(2, &permuted, &hp).unwrap();
    let rel = (a.meta.final_objective - b.meta.final_objective).abs()
        / a.meta.final_objective.abs().max(1e-12);
    assert!(rel <= tolerance, "relative objective gap {rel} > {tolerance}");
}

#[test]
fn vectorize_output_has_unique_sorted_positive_entries() {
    let corpus = common::random_corpus(5, 30, 60);
    let cfg = FeatureConfig::default();
    let vocab = build_vocabulary(corpus.stories().iter(), &cfg);
    for story in corpus.stories() {
        let v = vectorize(story, &vocab, &cfg);
        let pairs: Vec<(usize, f64)> = v.iter().collect();
        for w in pairs.windows(2) {
            assert!(w[0].0 < w[1].0, "indices not strictly increasing");
        }
        for (ix, value) in pairs {
            assert!(value > 0.0);
            assert!(ix < vocab.len());
        }
    }
}
