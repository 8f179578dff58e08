use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augmentation::{dtw, frame_pose_distance};
use crate::error::{Error, Result};
use crate::motion_model::{MotionClip, QuatPose};
use crate::rng;
use crate::sampling::{sample_train_clip, SamplingStrategy};

/// A clip reduced to its sampled frames, one quaternion track per person.
#[derive(Debug, Clone)]
pub struct SampledClip {
    label: u32,
    source_id: String,
    people: Vec<Vec<QuatPose>>,
}

impl SampledClip {
    pub fn new<R: Rng + ?Sized>(
        clip: &MotionClip,
        strategy: &SamplingStrategy,
        rng: &mut R,
    ) -> Result<Self> {
        let idx = sample_train_clip(clip.frames(), strategy, rng)?;
        let people = clip
            .people()
            .iter()
            .map(|p| {
                let q = p.quaternions();
                idx.as_slice().iter().map(|&i| q[i]).collect()
            })
            .collect();
        Ok(SampledClip {
            label: clip.action_label(),
            source_id: clip.source_id().to_string(),
            people,
        })
    }

    pub fn label(&self) -> u32 {
        self.label
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    /// DTW cost summed over people; infinite when person counts differ.
    pub fn distance(&self, other: &SampledClip) -> f64 {
        if self.people.len() != other.people.len() {
            return f64::INFINITY;
        }
        let (a, b) = (&self.people, &other.people);
        dtw(a[0].len(), b[0].len(), |i, j| {
            a.iter()
                .zip(b)
                .map(|(pa, pb)| frame_pose_distance(&pa[i], &pb[j]))
                .sum()
        })
        .map(|(_, cost)| cost)
        .unwrap_or(f64::INFINITY)
    }
}

/// Label of the nearest prepared training clip; ties go to the smallest
/// source id.
pub fn nearest_label(train: &[SampledClip], query: &SampledClip) -> Result<u32> {
    let mut best: Option<(f64, &SampledClip)> = None;
    for item in train {
        let d = query.distance(item);
        let better = match best {
            None => true,
            Some((bd, b)) => d < bd || (d == bd && item.source_id() < b.source_id()),
        };
        if better {
            best = Some((d, item));
        }
    }
    best.map(|(_, item)| item.label())
        .ok_or_else(|| Error::Config("training set is empty".into()))
}

/// 1-NN under DTW on sampled frames. Each training clip draws its frames
/// from `rng` in order, then the query does.
pub fn classify_1nn<R: Rng + ?Sized>(
    train: &[MotionClip],
    query: &MotionClip,
    strategy: &SamplingStrategy,
    rng: &mut R,
) -> Result<u32> {
    if train.is_empty() {
        return Err(Error::Config("training set is empty".into()));
    }
    let prepared = train
        .iter()
        .map(|c| SampledClip::new(c, strategy, rng))
        .collect::<Result<Vec<_>>>()?;
    let q = SampledClip::new(query, strategy, rng)?;
    nearest_label(&prepared, &q)
}

/// Rows are true classes, columns predictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(num_classes: usize) -> Self {
        ConfusionMatrix {
            counts: vec![vec![0; num_classes]; num_classes],
        }
    }

    pub fn record(&mut self, truth: u32, predicted: u32) {
        let needed = truth.max(predicted) as usize + 1;
        if needed > self.counts.len() {
            for row in &mut self.counts {
                row.resize(needed, 0);
            }
            self.counts.resize(needed, vec![0; needed]);
        }
        self.counts[truth as usize][predicted as usize] += 1;
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.counts.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            n => self.trace() as f64 / n as f64,
        }
    }

    /// One `{"true": c, "counts": [...]}` object per line.
    pub fn to_jsonl(&self) -> String {
        self.counts
            .iter()
            .enumerate()
            .map(|(c, row)| format!("{}\n", serde_json::json!({ "true": c, "counts": row })))
            .collect()
    }

    /// Plain-text grid with a header row of predicted classes.
    pub fn to_grid(&self) -> String {
        let width = self
            .counts
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1)
            .max(self.counts.len().to_string().len())
            .max(2);
        let mut out = String::new();
        let _ = write!(out, "{:>6}", "t\\p");
        for c in 0..self.counts.len() {
            let _ = write!(out, " {c:>width$}");
        }
        out.push('\n');
        for (c, row) in self.counts.iter().enumerate() {
            let _ = write!(out, "{c:>6}");
            for v in row {
                let _ = write!(out, " {v:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
}

/// Classifies every test clip against `train`.
///
/// Training clips sample their frames from stream `(seed, 0)`; test clip `i`
/// uses stream `(seed, i + 1)`, so results do not depend on scheduling.
/// With `check_leakage`, a source id present in both sets is an error.
pub fn evaluate(
    train: &[MotionClip],
    test: &[MotionClip],
    strategy: &SamplingStrategy,
    seed: u64,
    check_leakage: bool,
) -> Result<Evaluation> {
    if train.is_empty() {
        return Err(Error::Config("training set is empty".into()));
    }
    if check_leakage {
        let ids: HashSet<&str> = train.iter().map(MotionClip::source_id).collect();
        if let Some(c) = test.iter().find(|c| ids.contains(c.source_id())) {
            return Err(Error::Leakage(c.source_id().to_string()));
        }
    }
    let mut train_rng = rng::derived(seed, 0);
    let prepared = train
        .iter()
        .map(|c| SampledClip::new(c, strategy, &mut train_rng))
        .collect::<Result<Vec<_>>>()?;
    let predictions = test
        .par_iter()
        .enumerate()
        .map(|(i, clip)| {
            let mut r = rng::derived(seed, i as u64 + 1);
            let q = SampledClip::new(clip, strategy, &mut r)?;
            Ok((clip.action_label(), nearest_label(&prepared, &q)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let classes = train
        .iter()
        .chain(test)
        .map(|c| c.action_label() as usize + 1)
        .max()
        .unwrap_or(0);
    let mut confusion = ConfusionMatrix::new(classes);
    for (truth, pred) in predictions {
        confusion.record(truth, pred);
    }
    Ok(Evaluation {
        accuracy: confusion.accuracy(),
        confusion,
    })
}
