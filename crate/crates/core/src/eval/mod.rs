//! DTW nearest-neighbor evaluation on toy motion classes.
//!
//! This is a measurement instrument for augmentation and sampling choices,
//! not an action recognizer: [`toy`] generates separable-by-construction
//! motion classes, [`knn`] classifies them, and [`benchmark`] runs the
//! paired comparisons reported by the `eval` command.

pub mod benchmark;
pub mod knn;
pub mod toy;

use std::collections::{BTreeSet, HashMap};

pub use knn::{classify_1nn, evaluate, nearest_label, ConfusionMatrix, Evaluation, SampledClip};
pub use toy::{generate_toy_dataset, ToySpec};

use crate::error::{Error, Result};
use crate::motion_model::MotionClip;
use crate::scene::Split;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledClip {
    pub clip: MotionClip,
    pub split: Split,
}

/// Clips tagged train or test; no source id is in both splits.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    items: Vec<LabeledClip>,
}

impl LabeledDataset {
    pub fn new(items: Vec<LabeledClip>) -> Result<Self> {
        let mut seen: HashMap<&str, Split> = HashMap::new();
        for item in &items {
            match seen.insert(item.clip.source_id(), item.split) {
                Some(prev) if prev != item.split => {
                    return Err(Error::Leakage(item.clip.source_id().to_string()));
                }
                _ => {}
            }
        }
        Ok(LabeledDataset { items })
    }

    pub fn items(&self) -> &[LabeledClip] {
        &self.items
    }

    pub fn split(&self, split: Split) -> Vec<MotionClip> {
        self.items
            .iter()
            .filter(|i| i.split == split)
            .map(|i| i.clip.clone())
            .collect()
    }

    pub fn train(&self) -> Vec<MotionClip> {
        self.split(Split::Train)
    }

    pub fn test(&self) -> Vec<MotionClip> {
        self.split(Split::Test)
    }

    pub fn num_classes(&self) -> usize {
        self.items
            .iter()
            .map(|i| i.clip.action_label())
            .collect::<BTreeSet<_>>()
            .len()
    }
}
