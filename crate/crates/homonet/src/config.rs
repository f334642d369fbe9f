//! Configuration loading and the bundled data catalogs.
//!
//! A config file is TOML with sections `[age]`, `[traits]`, `[occupations]`,
//! `[interests]`, `[influence]` and `[hyperparams]`; any missing section
//! falls back to the bundled defaults. Catalog data (name lists and the
//! semantic orderings) is resolved from `HOMONET_DATA_DIR` when set and
//! otherwise from copies embedded at compile time.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::attrgen::{AgeModel, InfluenceModel, InterestCatalog, OccupationPools, TraitModel};
use crate::error::{Error, Result};
use crate::linkgen::RawHyperParams;

pub const DATA_DIR_ENV: &str = "HOMONET_DATA_DIR";

const DEFAULT_CONFIG_TOML: &str = include_str!("../data/default_config.toml");
const OCCUPATIONS_TXT: &str = include_str!("../data/occupations.txt");
const INTERESTS_TXT: &str = include_str!("../data/interests.txt");
const NAMES_FEMALE_TXT: &str = include_str!("../data/names_female.txt");
const NAMES_MALE_TXT: &str = include_str!("../data/names_male.txt");
pub const BLUESKY_TARGETS_TOML: &str = include_str!("../data/bluesky_targets.toml");
pub const DEFAULT_GRID_TOML: &str = include_str!("../data/default_grid.toml");

/// Bundled label/name data backing attribute generation.
#[derive(Debug, Clone)]
pub struct Catalogs {
    pub occupation_order: Vec<String>,
    pub interest_order: Vec<String>,
    pub female_names: Vec<String>,
    pub male_names: Vec<String>,
}

fn read_lines(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect()
}

fn read_lines_file(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(read_lines(&text))
}

impl Catalogs {
    /// Load from `HOMONET_DATA_DIR` when set, otherwise use the embedded
    /// copies.
    pub fn load() -> Result<Self> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => Self::from_dir(Path::new(&dir)),
            None => Ok(Self::embedded()),
        }
    }

    pub fn embedded() -> Self {
        Catalogs {
            occupation_order: read_lines(OCCUPATIONS_TXT),
            interest_order: read_lines(INTERESTS_TXT),
            female_names: read_lines(NAMES_FEMALE_TXT),
            male_names: read_lines(NAMES_MALE_TXT),
        }
    }

    pub fn from_dir(dir: &Path) -> Result<Self> {
        Ok(Catalogs {
            occupation_order: read_lines_file(&dir.join("occupations.txt"))?,
            interest_order: read_lines_file(&dir.join("interests.txt"))?,
            female_names: read_lines_file(&dir.join("names_female.txt"))?,
            male_names: read_lines_file(&dir.join("names_male.txt"))?,
        })
    }
}

/// Fully resolved and validated generator configuration.
#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub age: AgeModel,
    pub traits: TraitModel,
    pub occupations: OccupationPools,
    pub interests: InterestCatalog,
    pub influence: InfluenceModel,
    pub hyperparams: RawHyperParams,
    /// Optional explicit projection weights; length must be
    /// `interest slots + 3` at projection time. Defaults to all-ones.
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    age: Option<AgeModel>,
    traits: Option<TraitModel>,
    occupations: Option<BTreeMap<String, Vec<String>>>,
    interests: Option<RawInterests>,
    influence: Option<InfluenceModel>,
    hyperparams: Option<RawHyperParams>,
    weights: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInterests {
    labels: Option<Vec<String>>,
    max_interests: Option<usize>,
}

fn parse_raw(text: &str, origin: &Path) -> Result<RawConfig> {
    toml::from_str(text).map_err(|e| Error::Toml {
        path: origin.to_path_buf(),
        message: e.to_string(),
    })
}

fn interval_key(interval: [u32; 2]) -> String {
    format!("{}-{}", interval[0], interval[1])
}

impl GeneratorConfig {
    /// The bundled defaults.
    pub fn default_config(catalogs: &Catalogs) -> Result<Self> {
        Self::from_toml_str(DEFAULT_CONFIG_TOML, Path::new("<default config>"), catalogs)
    }

    pub fn load(path: &Path, catalogs: &Catalogs) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text, path, catalogs)
    }

    /// Parse a config, filling unset sections from the defaults, then
    /// validate everything against the catalogs.
    pub fn from_toml_str(text: &str, origin: &Path, catalogs: &Catalogs) -> Result<Self> {
        let raw = parse_raw(text, origin)?;
        let defaults = parse_raw(DEFAULT_CONFIG_TOML, Path::new("<default config>"))?;

        let age = raw.age.or(defaults.age).ok_or_else(|| {
            Error::Config("missing [age] section".into())
        })?;
        let traits = raw.traits.or(defaults.traits).unwrap_or_default();
        let pools_map = raw
            .occupations
            .or(defaults.occupations)
            .ok_or_else(|| Error::Config("missing [occupations] section".into()))?;
        let raw_interests = raw.interests;
        let default_interests = defaults.interests;
        let influence = raw.influence.or(defaults.influence).unwrap_or_default();
        let hyperparams = raw.hyperparams.or(defaults.hyperparams).unwrap_or_default();
        let weights = raw.weights;

        age.validate()?;

        // Resolve interval-keyed pools against the age model.
        let mut pools = Vec::with_capacity(age.intervals.len());
        for &interval in &age.intervals {
            let key = interval_key(interval);
            let pool = pools_map.get(&key).ok_or_else(|| {
                Error::Config(format!("[occupations] missing pool for interval {key:?}"))
            })?;
            if pool.is_empty() {
                return Err(Error::Config(format!(
                    "[occupations] pool for {key:?} is empty"
                )));
            }
            pools.push(pool.clone());
        }
        for key in pools_map.keys() {
            if !age.intervals.iter().any(|&iv| interval_key(iv) == *key) {
                return Err(Error::Config(format!(
                    "[occupations] key {key:?} matches no age interval"
                )));
            }
        }
        let occupations = OccupationPools::new(age.intervals.clone(), pools);

        let (labels, max_interests) = match raw_interests {
            Some(ri) => (ri.labels, ri.max_interests),
            None => match default_interests {
                Some(di) => (di.labels, di.max_interests),
                None => (None, None),
            },
        };
        let interests = InterestCatalog {
            labels: labels.unwrap_or_else(|| catalogs.interest_order.clone()),
            max_interests: max_interests.unwrap_or(5),
        };

        let config = GeneratorConfig {
            age,
            traits,
            occupations,
            interests,
            influence,
            hyperparams,
            weights,
        };
        config.validate(catalogs)?;
        Ok(config)
    }

    pub fn validate(&self, catalogs: &Catalogs) -> Result<()> {
        self.age.validate()?;
        self.traits.validate()?;
        self.interests.validate()?;
        self.influence.validate()?;
        self.hyperparams.validate()?;

        for pool in self.occupations.pools() {
            for label in pool {
                if !catalogs.occupation_order.iter().any(|l| l == label) {
                    return Err(Error::Config(format!(
                        "occupation {label:?} missing from the semantic occupation ordering"
                    )));
                }
            }
        }
        for label in &self.interests.labels {
            if !catalogs.interest_order.iter().any(|l| l == label) {
                return Err(Error::Config(format!(
                    "interest {label:?} missing from the semantic interest ordering"
                )));
            }
        }
        if let Some(w) = &self.weights {
            if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::Config("weights must be non-negative".into()));
            }
        }
        if catalogs.female_names.is_empty() || catalogs.male_names.is_empty() {
            return Err(Error::Config("name lists must be non-empty".into()));
        }
        Ok(())
    }
}

/// Locate a bundled data file: `HOMONET_DATA_DIR` first, then the source
/// tree copy (useful when running from the repository).
pub fn data_file(name: &str) -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        let p = PathBuf::from(dir).join(name);
        if p.exists() {
            return Some(p);
        }
    }
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name);
    p.exists().then_some(p)
}
