//! Deterministic whole-document corpus splits.

use ddp_core::DepDocument;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::FormatError;

/// Partitions `docs` into train/dev/test by a seeded shuffle of document
/// positions followed by prefix assignment. Within each split, documents
/// keep their original corpus order, so a fixed seed reproduces the same
/// bytes on any platform.
pub fn split_corpus(
    docs: Vec<DepDocument>,
    n_train: usize,
    n_dev: usize,
    n_test: usize,
    seed: u64,
) -> Result<(Vec<DepDocument>, Vec<DepDocument>, Vec<DepDocument>), FormatError> {
    let total = n_train
        .checked_add(n_dev)
        .and_then(|s| s.checked_add(n_test))
        .ok_or_else(|| FormatError::Data("split sizes overflow".into()))?;
    if total != docs.len() {
        return Err(FormatError::Data(format!(
            "split sizes {n_train}+{n_dev}+{n_test} = {total} do not cover {} documents",
            docs.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..docs.len()).collect();
    order.shuffle(&mut rng);

    // 0 = train, 1 = dev, 2 = test
    let mut assignment = vec![0u8; docs.len()];
    for (rank, &pos) in order.iter().enumerate() {
        assignment[pos] = if rank < n_train {
            0
        } else if rank < n_train + n_dev {
            1
        } else {
            2
        };
    }

    let mut train = Vec::with_capacity(n_train);
    let mut dev = Vec::with_capacity(n_dev);
    let mut test = Vec::with_capacity(n_test);
    for (doc, &bucket) in docs.into_iter().zip(&assignment) {
        match bucket {
            0 => train.push(doc),
            1 => dev.push(doc),
            _ => test.push(doc),
        }
    }
    Ok((train, dev, test))
}
