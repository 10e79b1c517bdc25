//! Multiclass linear classification with a margin objective, trained by
//! stochastic subgradient steps with weight averaging.

use std::collections::BTreeMap;

use crate::features::FeatureVector;
use crate::weights::AveragedTable;

/// Per-class sparse weight tables over a fixed class inventory. Prediction
/// ties break toward the earlier class, so the inventory order is part of
/// the model.
#[derive(Debug, Clone, Default)]
pub struct LinearClassifier {
    classes: Vec<String>,
    tables: Vec<AveragedTable>,
    averaged: Vec<BTreeMap<String, f64>>,
    instances: u64,
    update_count: u64,
}

impl LinearClassifier {
    pub fn new(classes: Vec<String>) -> Self {
        let k = classes.len();
        LinearClassifier {
            classes,
            tables: vec![AveragedTable::default(); k],
            averaged: vec![BTreeMap::new(); k],
            instances: 0,
            update_count: 0,
        }
    }

    /// A classifier whose raw and averaged weights are both `weights`, as
    /// when loading a serialized model.
    pub fn from_weights(classes: Vec<String>, weights: Vec<BTreeMap<String, f64>>) -> Self {
        debug_assert_eq!(classes.len(), weights.len());
        let tables = weights
            .iter()
            .map(|map| {
                let mut t = AveragedTable::default();
                for (feature, w) in map {
                    t.update(feature, *w, 0);
                }
                t
            })
            .collect();
        LinearClassifier {
            classes,
            tables,
            averaged: weights,
            instances: 0,
            update_count: 0,
        }
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn update_count(&self) -> u64 {
        self.update_count
    }

    pub fn class_weights(&self, idx: usize, averaged: bool) -> &BTreeMap<String, f64> {
        if averaged {
            &self.averaged[idx]
        } else {
            &self.tables[idx].weights
        }
    }

    pub fn score(&self, idx: usize, features: &FeatureVector, averaged: bool) -> f64 {
        features.dot(self.class_weights(idx, averaged))
    }

    pub fn scores(&self, features: &FeatureVector, averaged: bool) -> Vec<f64> {
        (0..self.classes.len())
            .map(|i| self.score(i, features, averaged))
            .collect()
    }

    /// Index of the best class; ties go to the earlier class.
    pub fn predict(&self, features: &FeatureVector, averaged: bool) -> Option<usize> {
        let scores = self.scores(features, averaged);
        let mut best: Option<usize> = None;
        for (i, &s) in scores.iter().enumerate() {
            if best.map_or(true, |b| s > scores[b]) {
                best = Some(i);
            }
        }
        best
    }

    pub fn class_index(&self, class: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == class)
    }

    /// One margin step: if the gold class does not beat the best rival by
    /// `margin`, promote gold and demote the rival. Returns whether the
    /// raw prediction was already correct.
    pub(crate) fn learn(&mut self, features: &FeatureVector, gold: usize, margin: f64) -> bool {
        self.instances += 1;
        let scores = self.scores(features, false);
        let mut rival: Option<usize> = None;
        for (i, &s) in scores.iter().enumerate() {
            if i == gold {
                continue;
            }
            if rival.map_or(true, |r| s > scores[r]) {
                rival = Some(i);
            }
        }
        let correct = rival.map_or(true, |r| {
            scores[gold] > scores[r] || (scores[gold] == scores[r] && gold < r)
        });
        if let Some(r) = rival {
            if scores[gold] - scores[r] < margin {
                self.update_count += 1;
                let now = self.instances;
                for (feature, value) in features.iter() {
                    self.tables[gold].update(feature, value, now);
                    self.tables[r].update(feature, -value, now);
                }
            }
        }
        correct
    }

    pub(crate) fn finalize(&mut self) {
        self.averaged = self
            .tables
            .iter()
            .map(|t| t.averaged(self.instances))
            .collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(names: &[&str]) -> FeatureVector {
        let mut fv = FeatureVector::new();
        for n in names {
            fv.add(*n);
        }
        fv
    }

    #[test]
    fn learns_a_separable_problem() {
        let mut clf = LinearClassifier::new(vec!["a".into(), "b".into()]);
        let data = [(fv(&["x"]), 0), (fv(&["y"]), 1)];
        for _ in 0..5 {
            for (features, gold) in &data {
                clf.learn(features, *gold, 1.0);
            }
        }
        clf.finalize();
        assert_eq!(clf.predict(&fv(&["x"]), true), Some(0));
        assert_eq!(clf.predict(&fv(&["y"]), true), Some(1));
    }

    #[test]
    fn ties_break_toward_the_earlier_class() {
        let clf = LinearClassifier::new(vec!["a".into(), "b".into(), "c".into()]);
        assert_eq!(clf.predict(&fv(&["x"]), false), Some(0));
    }
}
