//! Arc-factored scoring and averaged-perceptron training for the
//! graph-based parser.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ddp_core::DepDocument;

use crate::eisner::eisner_decode;
use crate::error::ParseError;
use crate::features::{extract_arc_features, FeatureVector};
use crate::mst::mst_decode;
use crate::weights::AveragedTable;

/// Dense arc scores: `get(h, d)` is the score of attaching dependent `d`
/// (1..=n) under head `h` (0..=n).
#[derive(Debug, Clone)]
pub struct ScoreMatrix {
    n: usize,
    data: Vec<f64>,
}

impl ScoreMatrix {
    pub fn new(n: usize) -> Self {
        ScoreMatrix {
            n,
            data: vec![0.0; (n + 1) * (n + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, head: usize, dependent: usize) -> f64 {
        self.data[head * (self.n + 1) + dependent]
    }

    pub fn set(&mut self, head: usize, dependent: usize, score: f64) {
        self.data[head * (self.n + 1) + dependent] = score;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Eisner,
    Mst,
}

impl DecoderKind {
    pub fn decode(self, scores: &ScoreMatrix, single_root: bool) -> Vec<usize> {
        match self {
            DecoderKind::Eisner => eisner_decode(scores, single_root),
            DecoderKind::Mst => mst_decode(scores, single_root),
        }
    }
}

/// Sparse arc-scoring weights with their running average.
#[derive(Debug, Clone, Default)]
pub struct ArcScorer {
    table: AveragedTable,
    averaged: BTreeMap<String, f64>,
    instances: u64,
    update_count: u64,
}

impl ArcScorer {
    pub fn new() -> Self {
        ArcScorer::default()
    }

    /// A scorer whose raw and averaged weights are both `weights`, as when
    /// loading a serialized model.
    pub fn from_weights(weights: BTreeMap<String, f64>) -> Self {
        let mut table = AveragedTable::default();
        for (feature, w) in &weights {
            table.update(feature, *w, 0);
        }
        ArcScorer {
            table,
            averaged: weights,
            instances: 0,
            update_count: 0,
        }
    }

    pub fn weights(&self) -> &BTreeMap<String, f64> {
        &self.table.weights
    }

    pub fn averaged_weights(&self) -> &BTreeMap<String, f64> {
        &self.averaged
    }

    pub fn update_count(&self) -> u64 {
        self.update_count
    }

    pub fn score(&self, features: &FeatureVector, use_averaged: bool) -> f64 {
        if use_averaged {
            features.dot(&self.averaged)
        } else {
            features.dot(&self.table.weights)
        }
    }

    fn apply_update(&mut self, features: &FeatureVector, sign: f64) {
        for (feature, value) in features.iter() {
            self.table.update(feature, sign * value, self.instances);
        }
    }

    fn finalize(&mut self) {
        self.averaged = self.table.averaged(self.instances);
    }
}

pub fn score_matrix(model: &ArcScorer, doc: &DepDocument, use_averaged: bool) -> ScoreMatrix {
    let n = doc.n_edus();
    let mut scores = ScoreMatrix::new(n);
    for h in 0..=n {
        for d in 1..=n {
            if h == d {
                continue;
            }
            scores.set(h, d, model.score(&extract_arc_features(doc, h, d), use_averaged));
        }
    }
    scores
}

#[derive(Debug, Clone)]
pub struct GraphTrainOptions {
    pub epochs: usize,
    pub seed: u64,
    pub decoder: DecoderKind,
    pub single_root: bool,
    /// Reshuffle document order each epoch (seeded).
    pub shuffle: bool,
}

impl Default for GraphTrainOptions {
    fn default() -> Self {
        GraphTrainOptions {
            epochs: 10,
            seed: 0,
            decoder: DecoderKind::Eisner,
            single_root: true,
            shuffle: true,
        }
    }
}

/// Per-epoch training metrics handed to the progress callback.
#[derive(Debug, Clone, Copy)]
pub struct EpochStats {
    pub epoch: usize,
    /// Attachment (or action) accuracy against gold during the pass,
    /// measured before each update.
    pub train_metric: f64,
}

/// Structured perceptron over whole trees: decode each document with the
/// raw weights and, on a mistake, promote the gold arcs and demote the
/// predicted ones. Deterministic given corpus order and seed.
pub fn train_graph_parser(
    corpus: &[DepDocument],
    opts: &GraphTrainOptions,
    mut on_epoch: Option<&mut dyn FnMut(EpochStats, &ArcScorer)>,
) -> Result<ArcScorer, ParseError> {
    if corpus.is_empty() {
        return Err(ParseError::EmptyCorpus);
    }
    // Arc features are static per document; extract once.
    let feature_cache: Vec<Vec<FeatureVector>> = corpus
        .iter()
        .map(|doc| {
            let n = doc.n_edus();
            let mut cache = Vec::with_capacity((n + 1) * (n + 1));
            for h in 0..=n {
                for d in 0..=n {
                    cache.push(if d == 0 || h == d {
                        FeatureVector::new()
                    } else {
                        extract_arc_features(doc, h, d)
                    });
                }
            }
            cache
        })
        .collect();

    let mut model = ArcScorer::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut order: Vec<usize> = (0..corpus.len()).collect();

    for epoch in 1..=opts.epochs {
        if opts.shuffle {
            order.shuffle(&mut rng);
        }
        let mut correct = 0usize;
        let mut total = 0usize;
        for &di in &order {
            let doc = &corpus[di];
            let n = doc.n_edus();
            if n == 0 {
                continue;
            }
            model.instances += 1;
            let cache = &feature_cache[di];
            let mut scores = ScoreMatrix::new(n);
            for h in 0..=n {
                for d in 1..=n {
                    if h != d {
                        scores.set(h, d, model.score(&cache[h * (n + 1) + d], false));
                    }
                }
            }
            let predicted = opts.decoder.decode(&scores, opts.single_root);
            let gold = doc.heads();
            total += n;
            for d in 1..=n {
                let (g, p) = (gold[d - 1], predicted[d - 1]);
                if g == p {
                    correct += 1;
                } else {
                    model.update_count += 1;
                    let gold_fv = cache[g * (n + 1) + d].clone();
                    let pred_fv = cache[p * (n + 1) + d].clone();
                    model.apply_update(&gold_fv, 1.0);
                    model.apply_update(&pred_fv, -1.0);
                }
            }
        }
        model.finalize();
        if let Some(cb) = on_epoch.as_mut() {
            cb(
                EpochStats {
                    epoch,
                    train_metric: if total == 0 {
                        0.0
                    } else {
                        correct as f64 / total as f64
                    },
                },
                &model,
            );
        }
    }
    model.finalize();
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ddp_core::Edu;

    fn chain(id: &str, n: usize) -> DepDocument {
        let edus = (1..=n).map(|i| Edu::new(i, format!("第{i}句"))).collect();
        let heads: Vec<usize> = (0..n).collect();
        let labels: Vec<&str> = (0..n).map(|i| if i == 0 { "root" } else { "joint" }).collect();
        DepDocument::from_heads(id, edus, &heads, &labels).unwrap()
    }

    #[test]
    fn zero_model_scores_zero_and_decodes_some_valid_tree() {
        let doc = chain("d", 4);
        let model = ArcScorer::new();
        let scores = score_matrix(&model, &doc, false);
        for h in 0..=4 {
            for d in 1..=4 {
                if h != d {
                    assert_eq!(scores.get(h, d), 0.0);
                }
            }
        }
        let heads = eisner_decode(&scores, true);
        assert_eq!(heads.iter().filter(|&&h| h == 0).count(), 1);
    }

    #[test]
    fn direction_feature_scores_rightward_non_root_arcs() {
        let doc = chain("d", 3);
        let mut weights = BTreeMap::new();
        weights.insert("dir=right".to_string(), 1.0);
        let model = ArcScorer::from_weights(weights);
        let scores = score_matrix(&model, &doc, true);
        for h in 0..=3 {
            for d in 1..=3 {
                if h == d {
                    continue;
                }
                let expected = if h >= 1 && d > h { 1.0 } else { 0.0 };
                assert_eq!(scores.get(h, d), expected, "arc {h}->{d}");
            }
        }
    }

    #[test]
    fn averaged_differs_from_raw_after_updates() {
        let corpus = vec![chain("a", 3), chain("b", 4)];
        let model = train_graph_parser(
            &corpus,
            &GraphTrainOptions {
                epochs: 3,
                ..GraphTrainOptions::default()
            },
            None,
        )
        .unwrap();
        assert!(model.update_count() > 0, "training never updated");
        assert_ne!(model.weights(), model.averaged_weights());
    }

    #[test]
    fn single_doc_is_learned_within_five_epochs() {
        let corpus = vec![chain("d", 2)];
        let mut last_uas = 0.0;
        train_graph_parser(
            &corpus,
            &GraphTrainOptions {
                epochs: 5,
                ..GraphTrainOptions::default()
            },
            Some(&mut |stats: EpochStats, _: &ArcScorer| {
                last_uas = stats.train_metric;
            }),
        )
        .unwrap();
        assert_eq!(last_uas, 1.0);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(matches!(
            train_graph_parser(&[], &GraphTrainOptions::default(), None),
            Err(ParseError::EmptyCorpus)
        ));
    }

    #[test]
    fn training_is_deterministic() {
        let corpus = vec![chain("a", 3), chain("b", 5), chain("c", 2)];
        let opts = GraphTrainOptions::default();
        let m1 = train_graph_parser(&corpus, &opts, None).unwrap();
        let m2 = train_graph_parser(&corpus, &opts, None).unwrap();
        assert_eq!(m1.weights(), m2.weights());
        assert_eq!(m1.averaged_weights(), m2.averaged_weights());
    }
}
