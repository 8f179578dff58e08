use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motion_model::NUM_BETAS;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

/// Appearance of one rendered clip. Ids point into external asset pools.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppearanceSpec {
    pub cloth_texture_id: String,
    pub body_shape_betas: [f64; NUM_BETAS],
    pub background_id: String,
    pub lighting_seed: u64,
}

/// Assets available to one split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppearancePools {
    pub split: Split,
    pub cloth_textures: Vec<String>,
    pub backgrounds: Vec<String>,
    pub body_shapes: Vec<[f64; NUM_BETAS]>,
}

impl AppearancePools {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("cloth texture", &self.cloth_textures),
            ("background", &self.backgrounds),
        ];
        for (what, pool) in named {
            if pool.is_empty() {
                return Err(Error::Config(format!(
                    "{} {what} pool is empty",
                    self.split
                )));
            }
            if pool.iter().any(String::is_empty) {
                return Err(Error::Config(format!(
                    "{} {what} pool has an empty id",
                    self.split
                )));
            }
        }
        if self.body_shapes.is_empty() {
            return Err(Error::Config(format!(
                "{} body shape pool is empty",
                self.split
            )));
        }
        if self.body_shapes.iter().flatten().any(|b| !b.is_finite()) {
            return Err(Error::Config(format!(
                "{} body shape pool has non-finite betas",
                self.split
            )));
        }
        Ok(())
    }

    /// Draws texture, background, body shape and lighting seed, in that order.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> AppearanceSpec {
        let cloth = &self.cloth_textures[rng.gen_range(0..self.cloth_textures.len())];
        let background = &self.backgrounds[rng.gen_range(0..self.backgrounds.len())];
        let betas = self.body_shapes[rng.gen_range(0..self.body_shapes.len())];
        AppearanceSpec {
            cloth_texture_id: cloth.clone(),
            body_shape_betas: betas,
            background_id: background.clone(),
            lighting_seed: rng.gen(),
        }
    }

    /// Placeholder pools with generated ids: `{split}/cloth/female_000`,
    /// `{split}/background/00000` and standard-normal shapes.
    pub fn synthetic(
        split: Split,
        female: usize,
        male: usize,
        backgrounds: usize,
        shapes: usize,
        seed: u64,
    ) -> Self {
        let mut cloth: Vec<String> = (0..female)
            .map(|i| format!("{split}/cloth/female_{i:03}"))
            .collect();
        cloth.extend((0..male).map(|i| format!("{split}/cloth/male_{i:03}")));
        let mut r = rng::seeded(seed);
        AppearancePools {
            split,
            cloth_textures: cloth,
            backgrounds: (0..backgrounds)
                .map(|i| format!("{split}/background/{i:05}"))
                .collect(),
            body_shapes: (0..shapes)
                .map(|_| std::array::from_fn(|_| StandardNormal.sample(&mut r)))
                .collect(),
        }
    }
}

/// Train and test pools, checked to share no asset id.
#[derive(Debug, Clone, PartialEq)]
pub struct AppearanceLibrary {
    train: AppearancePools,
    test: AppearancePools,
}

impl AppearanceLibrary {
    pub fn new(train: AppearancePools, test: AppearancePools) -> Result<Self> {
        if train.split != Split::Train || test.split != Split::Test {
            return Err(Error::Config(
                "pools are labeled with the wrong split".into(),
            ));
        }
        train.validate()?;
        test.validate()?;
        let train_ids: HashSet<&String> = train
            .cloth_textures
            .iter()
            .chain(&train.backgrounds)
            .collect();
        if let Some(shared) = test
            .cloth_textures
            .iter()
            .chain(&test.backgrounds)
            .find(|id| train_ids.contains(id))
        {
            return Err(Error::Config(format!(
                "asset `{shared}` appears in both train and test pools"
            )));
        }
        Ok(AppearanceLibrary { train, test })
    }

    /// Pool counts of the textures released with the body model: 361/90
    /// female and 382/96 male for train/test.
    pub fn synthetic_default(seed: u64) -> Self {
        AppearanceLibrary::new(
            AppearancePools::synthetic(Split::Train, 361, 382, 1000, 256, seed),
            AppearancePools::synthetic(Split::Test, 90, 96, 1000, 256, seed.wrapping_add(1)),
        )
        .expect("generated pools are disjoint")
    }

    pub fn pools(&self, split: Split) -> &AppearancePools {
        match split {
            Split::Train => &self.train,
            Split::Test => &self.test,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_pool_is_config_error() {
        let mut p = AppearancePools::synthetic(Split::Train, 2, 2, 2, 2, 0);
        p.backgrounds.clear();
        assert!(matches!(p.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn overlapping_pools_rejected() {
        let train = AppearancePools::synthetic(Split::Train, 2, 2, 2, 2, 0);
        let mut test = AppearancePools::synthetic(Split::Test, 2, 2, 2, 2, 1);
        test.cloth_textures.push(train.cloth_textures[0].clone());
        assert!(AppearanceLibrary::new(train, test).is_err());
    }

    #[test]
    fn default_library_counts() {
        let lib = AppearanceLibrary::synthetic_default(0);
        assert_eq!(lib.pools(Split::Train).cloth_textures.len(), 743);
        assert_eq!(lib.pools(Split::Test).cloth_textures.len(), 186);
    }
}
