use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motion_model::{smooth_translations, Kernel, MotionClip};

/// How root translations are carried into the rendered scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TranslationMode {
    /// Everyone centered at the origin in every frame.
    None,
    /// xy motion relative to the clip mean for any number of people; z = 0.
    XyAlways,
    /// Like `XyAlways` for multi-person clips; single people are centered.
    #[default]
    XyWhenMulti,
    /// xy relative to the clip mean, z kept as estimated.
    Xyz,
}

impl TranslationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TranslationMode::None => "none",
            TranslationMode::XyAlways => "xy_always",
            TranslationMode::XyWhenMulti => "xy_when_multi",
            TranslationMode::Xyz => "xyz",
        }
    }
}

impl fmt::Display for TranslationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TranslationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            TranslationMode::None,
            TranslationMode::XyAlways,
            TranslationMode::XyWhenMulti,
            TranslationMode::Xyz,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown translation mode `{s}`")))
    }
}

/// Smooths translations with `kernel`, then applies `mode`.
///
/// In the mean-subtracting modes the xy mean over all frames and all people
/// is removed from every translation. That is a common shift, so in-frame
/// offsets between people are preserved.
pub fn process_translations(
    clip: &MotionClip,
    mode: TranslationMode,
    kernel: &Kernel,
) -> Result<MotionClip> {
    let smoothed: Vec<Vec<[f64; 3]>> = clip
        .people()
        .iter()
        .map(|p| smooth_translations(p.trans(), kernel))
        .collect();

    let center_everyone = match mode {
        TranslationMode::None => true,
        TranslationMode::XyWhenMulti => clip.people().len() == 1,
        TranslationMode::XyAlways | TranslationMode::Xyz => false,
    };

    let processed: Vec<Vec<[f64; 3]>> = if center_everyone {
        smoothed.iter().map(|t| vec![[0.0; 3]; t.len()]).collect()
    } else {
        let count = smoothed.iter().map(Vec::len).sum::<usize>() as f64;
        let mut mean = [0.0; 2];
        for v in smoothed.iter().flatten() {
            mean[0] += v[0];
            mean[1] += v[1];
        }
        let mean = mean.map(|m| m / count);
        let keep_z = mode == TranslationMode::Xyz;
        smoothed
            .iter()
            .map(|t| {
                t.iter()
                    .map(|v| {
                        [
                            v[0] - mean[0],
                            v[1] - mean[1],
                            if keep_z { v[2] } else { 0.0 },
                        ]
                    })
                    .collect()
            })
            .collect()
    };

    let people = clip
        .people()
        .iter()
        .zip(processed)
        .map(|(p, t)| p.with_trans(t))
        .collect::<Result<Vec<_>>>()?;
    clip.with_people(people)
}
