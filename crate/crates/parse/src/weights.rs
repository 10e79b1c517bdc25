//! Lazily averaged sparse weight tables shared by the perceptron learners.

use std::collections::BTreeMap;

/// A weight table with the standard lazy bookkeeping for weight averaging:
/// `totals` accumulates weight-value-times-timesteps, synchronized on each
/// touch, so the average over all timesteps is available at any point.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct AveragedTable {
    pub weights: BTreeMap<String, f64>,
    totals: BTreeMap<String, f64>,
    stamps: BTreeMap<String, u64>,
}

impl AveragedTable {
    pub fn update(&mut self, feature: &str, delta: f64, now: u64) {
        let w = self.weights.entry(feature.to_string()).or_insert(0.0);
        let total = self.totals.entry(feature.to_string()).or_insert(0.0);
        let stamp = self.stamps.entry(feature.to_string()).or_insert(0);
        *total += *w * (now - *stamp) as f64;
        *stamp = now;
        *w += delta;
    }

    /// The averaged weights after `now` timesteps.
    pub fn averaged(&self, now: u64) -> BTreeMap<String, f64> {
        if now == 0 {
            return self.weights.clone();
        }
        self.weights
            .iter()
            .map(|(feature, &w)| {
                let total = self.totals.get(feature).copied().unwrap_or(0.0);
                let stamp = self.stamps.get(feature).copied().unwrap_or(0);
                let synced = total + w * (now - stamp) as f64;
                (feature.clone(), synced / now as f64)
            })
            .collect()
    }
}
