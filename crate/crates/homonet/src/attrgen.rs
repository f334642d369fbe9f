//! Node attribute generation.
//!
//! Each synthetic user gets a name, gender, age, five binary personality
//! traits, an age-consistent occupation, up to `max_interests` interests and
//! a power-law social influence score. Every node draws from its own RNG
//! stream, so profile generation is order-independent and reproducible.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::{Catalogs, GeneratorConfig};
use crate::error::{Error, Result};
use crate::rng;

pub const TRAIT_NAMES: [&str; 5] = [
    "Openness",
    "Conscientiousness",
    "Extraversion",
    "Agreeableness",
    "Neuroticism",
];

/// Age distribution over seven contiguous integer intervals.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgeModel {
    pub intervals: Vec<[u32; 2]>,
    pub probs: Vec<f64>,
}

impl AgeModel {
    pub fn validate(&self) -> Result<()> {
        if self.intervals.len() != 7 || self.probs.len() != 7 {
            return Err(Error::Config("age model needs exactly 7 intervals and 7 probs".into()));
        }
        if self.intervals[0][0] != 0 || self.intervals[6][1] != 80 {
            return Err(Error::Config("age intervals must cover 0-80".into()));
        }
        for w in self.intervals.windows(2) {
            if w[0][1] + 1 != w[1][0] {
                return Err(Error::Config("age intervals must be contiguous".into()));
            }
        }
        if self.intervals.iter().any(|iv| iv[0] > iv[1]) {
            return Err(Error::Config("age interval bounds out of order".into()));
        }
        if self.probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::Config("age probs must lie in [0,1]".into()));
        }
        let total: f64 = self.probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("age probs sum to {total}, expected 1")));
        }
        Ok(())
    }

    /// Index of the interval containing `age`.
    pub fn interval_of(&self, age: u32) -> Option<usize> {
        self.intervals.iter().position(|iv| age >= iv[0] && age <= iv[1])
    }
}

/// Per-trait probability of the "+" polarity.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraitModel {
    pub openness: f64,
    pub conscientiousness: f64,
    pub extraversion: f64,
    pub agreeableness: f64,
    pub neuroticism: f64,
}

impl Default for TraitModel {
    fn default() -> Self {
        TraitModel {
            openness: 0.75,
            conscientiousness: 0.5,
            extraversion: 0.75,
            agreeableness: 0.5,
            neuroticism: 0.75,
        }
    }
}

impl TraitModel {
    pub fn as_array(&self) -> [f64; 5] {
        [
            self.openness,
            self.conscientiousness,
            self.extraversion,
            self.agreeableness,
            self.neuroticism,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if self.as_array().iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::Config("trait probabilities must lie in [0,1]".into()));
        }
        Ok(())
    }
}

/// Occupation pools, one per age interval.
#[derive(Debug, Clone)]
pub struct OccupationPools {
    intervals: Vec<[u32; 2]>,
    pools: Vec<Vec<String>>,
}

impl OccupationPools {
    pub fn new(intervals: Vec<[u32; 2]>, pools: Vec<Vec<String>>) -> Self {
        debug_assert_eq!(intervals.len(), pools.len());
        OccupationPools { intervals, pools }
    }

    pub fn pools(&self) -> &[Vec<String>] {
        &self.pools
    }

    pub fn pool_for_age(&self, age: u32) -> Option<&[String]> {
        self.intervals
            .iter()
            .position(|iv| age >= iv[0] && age <= iv[1])
            .map(|i| self.pools[i].as_slice())
    }
}

/// Thematic interest catalog.
#[derive(Debug, Clone)]
pub struct InterestCatalog {
    pub labels: Vec<String>,
    pub max_interests: usize,
}

impl InterestCatalog {
    pub fn validate(&self) -> Result<()> {
        if self.labels.is_empty() {
            return Err(Error::Config("interest catalog is empty".into()));
        }
        if self.max_interests < 1 {
            return Err(Error::Config("max_interests must be at least 1".into()));
        }
        let mut sorted = self.labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("interest labels must be unique".into()));
        }
        Ok(())
    }
}

/// Power-law influence score model. `a` is the density exponent of the
/// power law (CCDF decays as `x^(1-a)`), so the underlying Pareto shape is
/// `a - 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfluenceModel {
    pub a: f64,
    pub x_min: f64,
    pub max_score: f64,
    pub boost_prob: f64,
    pub young_mult: f64,
    pub old_mult: f64,
}

impl Default for InfluenceModel {
    fn default() -> Self {
        InfluenceModel {
            a: 2.5,
            x_min: 6.0,
            max_score: 100.0,
            boost_prob: 0.5,
            young_mult: 1.2,
            old_mult: 0.8,
        }
    }
}

impl InfluenceModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 1.0) {
            return Err(Error::Config("influence exponent a must exceed 1".into()));
        }
        if !(self.x_min > 0.0 && self.x_min < self.max_score) {
            return Err(Error::Config("need 0 < x_min < max_score".into()));
        }
        if !(0.0..=1.0).contains(&self.boost_prob) {
            return Err(Error::Config("boost_prob must lie in [0,1]".into()));
        }
        if !(self.young_mult > 0.0 && self.old_mult > 0.0) {
            return Err(Error::Config("age multipliers must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Female,
    Male,
}

/// Five signed Big Five flags, stored in [`TRAIT_NAMES`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraitFlags(pub [bool; 5]);

impl TraitFlags {
    pub fn extraversion_positive(&self) -> bool {
        self.0[2]
    }
}

impl Serialize for TraitFlags {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let labels: Vec<String> = TRAIT_NAMES
            .iter()
            .zip(self.0.iter())
            .map(|(name, &plus)| format!("{name}{}", if plus { '+' } else { '-' }))
            .collect();
        labels.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TraitFlags {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<String>::deserialize(deserializer)?;
        if labels.len() != 5 {
            return Err(D::Error::custom("expected exactly 5 trait flags"));
        }
        let mut flags = [false; 5];
        for (i, (label, name)) in labels.iter().zip(TRAIT_NAMES.iter()).enumerate() {
            let plus = format!("{name}+");
            let minus = format!("{name}-");
            flags[i] = if *label == plus {
                true
            } else if *label == minus {
                false
            } else {
                return Err(D::Error::custom(format!("bad trait flag {label:?}")));
            };
        }
        Ok(TraitFlags(flags))
    }
}

/// One synthetic user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeProfile {
    pub id: u32,
    pub name: String,
    pub gender: Gender,
    pub age: u32,
    pub occupation: String,
    pub interests: Vec<String>,
    pub traits: TraitFlags,
    pub influence: f64,
}

/// Sample an age: categorical over intervals, uniform inside the interval.
pub fn sample_age<R: Rng>(rng: &mut R, model: &AgeModel) -> u32 {
    let idx = rng::categorical(rng, &model.probs);
    let [lo, hi] = model.intervals[idx];
    rng.gen_range(lo..=hi)
}

/// Five independent Bernoulli draws, one per trait.
pub fn sample_traits<R: Rng>(rng: &mut R, model: &TraitModel) -> TraitFlags {
    let probs = model.as_array();
    let mut flags = [false; 5];
    for (flag, &p) in flags.iter_mut().zip(probs.iter()) {
        *flag = rng.gen::<f64>() < p;
    }
    TraitFlags(flags)
}

/// Uniform draw from the pool of the interval containing `age`.
pub fn sample_occupation<R: Rng>(
    rng: &mut R,
    age: u32,
    pools: &OccupationPools,
) -> Result<String> {
    let pool = pools.pool_for_age(age).ok_or(Error::AgeOutOfRange(age))?;
    Ok(pool[rng.gen_range(0..pool.len())].clone())
}

/// Between 1 and `max_interests` distinct labels; the count itself is
/// uniform over that range, the labels uniform without replacement.
pub fn sample_interests<R: Rng>(rng: &mut R, catalog: &InterestCatalog) -> Vec<String> {
    let upper = catalog.max_interests.min(catalog.labels.len());
    let count = if upper <= 1 { 1 } else { rng.gen_range(1..=upper) };
    rng::index_sample(rng, catalog.labels.len(), count)
        .into_iter()
        .map(|i| catalog.labels[i].clone())
        .collect()
}

/// Power-law influence draw with the extraversion boost and age modulation.
pub fn sample_influence<R: Rng>(
    rng: &mut R,
    model: &InfluenceModel,
    traits: &TraitFlags,
    age: u32,
) -> f64 {
    let shape = model.a - 1.0;
    let inv = -1.0 / shape;
    let mut value = model.x_min * rng::open_closed(rng).powf(inv);
    if traits.extraversion_positive() && rng.gen::<f64>() < model.boost_prob {
        // Resample conditioned on the top quintile: for a Pareto tail the
        // conditional law above the 80th percentile is the same Pareto
        // rescaled to start there.
        let q80 = model.x_min * 0.2f64.powf(inv);
        value = q80 * rng::open_closed(rng).powf(inv);
    }
    let mult = if (16..=39).contains(&age) {
        model.young_mult
    } else if age >= 40 {
        model.old_mult
    } else {
        1.0
    };
    (value * mult).min(model.max_score)
}

fn generate_one(id: u32, config: &GeneratorConfig, catalogs: &Catalogs, seed: u64) -> Result<NodeProfile> {
    let mut rng = rng::stream(seed, "profile", id as u64);
    let gender = if rng.gen::<f64>() < 0.5 { Gender::Female } else { Gender::Male };
    let names = match gender {
        Gender::Female => &catalogs.female_names,
        Gender::Male => &catalogs.male_names,
    };
    let name = names[rng.gen_range(0..names.len())].clone();
    let age = sample_age(&mut rng, &config.age);
    let traits = sample_traits(&mut rng, &config.traits);
    let occupation = sample_occupation(&mut rng, age, &config.occupations)?;
    let interests = sample_interests(&mut rng, &config.interests);
    let influence = sample_influence(&mut rng, &config.influence, &traits, age);
    Ok(NodeProfile { id, name, gender, age, occupation, interests, traits, influence })
}

/// Generate `n` profiles with ids `0..n`. Deterministic for a fixed seed
/// and independent of the rayon worker count.
pub fn generate_profiles(
    n: usize,
    config: &GeneratorConfig,
    catalogs: &Catalogs,
    seed: u64,
) -> Result<Vec<NodeProfile>> {
    if n < 1 {
        return Err(Error::Config("need at least one profile".into()));
    }
    (0..n as u32)
        .into_par_iter()
        .map(|id| generate_one(id, config, catalogs, seed))
        .collect()
}

/// Write profiles as line-delimited JSON, one record per line.
pub fn write_profiles(path: &Path, profiles: &[NodeProfile]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for p in profiles {
        let line = serde_json::to_string(p).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_profiles(path: &Path) -> Result<Vec<NodeProfile>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut profiles = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let p: NodeProfile = serde_json::from_str(&line).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        profiles.push(p);
    }
    Ok(profiles)
}
