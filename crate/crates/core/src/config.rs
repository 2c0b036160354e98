//! TOML run configuration for the simulation subcommands.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::averages::{Character, StepFunction};
use crate::dynamics::boxes::{AxisBox, BoxSet, DEFAULT_SEED};
use crate::dynamics::orbit::UnipotentAffineMap;
use crate::dynamics::symbolic::{Basis, SymbolicReal};
use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, PolyFamily};

pub const SEED_ENV: &str = "POLYERG_SEED";

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    #[serde(default)]
    pub basis: BasisConfig,
    pub map: MapConfig,
    pub family: FamilyConfig,
    #[serde(default)]
    pub point: PointConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
    pub restricted: Option<RestrictedConfig>,
    pub weighted: Option<WeightedConfig>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    /// Square roots appended after sqrt2, sqrt3, sqrt5.
    #[serde(default)]
    pub sqrt: Vec<u64>,
    #[serde(default)]
    pub decimal: Vec<DecimalConstant>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DecimalConstant {
    pub name: String,
    pub digits: String,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    pub dimension: usize,
    /// Strictly lower-triangular part `N` of `I + N`; zero when absent.
    pub matrix: Option<Vec<Vec<i64>>>,
    pub translation: Vec<String>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub polynomials: Vec<String>,
    /// One frequency vector per polynomial.
    #[serde(default)]
    pub characters: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    /// Initial point; zero when absent.
    pub x0: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default = "default_n_values")]
    pub n_values: Vec<u64>,
    #[serde(default)]
    pub m: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_n_values() -> Vec<u64> {
    vec![1_000, 10_000, 100_000, 1_000_000]
}

fn default_tolerance() -> f64 {
    0.02
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig { n_values: default_n_values(), m: 0, tolerance: default_tolerance() }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictedConfig {
    pub set: Vec<BoxConfig>,
    pub q1: String,
    pub q2: String,
    pub delta: f64,
    pub n: u64,
    /// Fails the run when the average falls below this.
    pub min_value: Option<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "lowercase")]
pub enum WeightConfig {
    Constant { re: f64, #[serde(default)] im: f64 },
    Indicator { a: f64, b: f64 },
    Character { k: i64, bins: usize },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedConfig {
    pub h: WeightConfig,
    pub beta: String,
    pub n: u64,
    /// Fails the run when `|weighted - predicted|` exceeds this.
    pub tolerance: Option<f64>,
}

/// Everything the simulation subcommands need, parsed and validated.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub basis: Basis,
    pub map: UnipotentAffineMap,
    pub family: PolyFamily,
    pub characters: Vec<Character>,
    pub x0: Vec<f64>,
    pub seed: u64,
}

fn cfg_err(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

impl RunConfig {
    pub fn parse(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(cfg_err)
    }

    pub fn basis(&self) -> Result<Basis> {
        let mut b = Basis::default();
        for &k in &self.basis.sqrt {
            b.push_sqrt(k)?;
        }
        for d in &self.basis.decimal {
            b.push_decimal(&d.name, &d.digits)?;
        }
        Ok(b)
    }

    /// `seed_override` comes from the environment.
    pub fn resolve(&self, seed_override: Option<u64>) -> Result<Resolved> {
        let basis = self.basis()?;
        let d = self.map.dimension;
        if self.map.translation.len() != d {
            return Err(Error::Config(format!("translation has {} entries for dimension {d}", self.map.translation.len())));
        }
        let translation = self
            .map
            .translation
            .iter()
            .map(|s| SymbolicReal::parse(s, &basis))
            .collect::<Result<Vec<_>>>()?;
        let matrix = self.map.matrix.clone().unwrap_or_else(|| vec![vec![0; d]; d]);
        let map = UnipotentAffineMap::new(matrix, translation)?;
        let family = PolyFamily::parse(&self.family.polynomials)?;
        if family.is_empty() {
            return Err(Error::Config("family.polynomials is empty".into()));
        }
        let characters = if self.family.characters.is_empty() {
            vec![Character::new(vec![1; d]); family.len()]
        } else {
            self.family.characters.iter().cloned().map(Character::new).collect()
        };
        let x0 = self.point.x0.clone().unwrap_or_else(|| vec![0.0; d]);
        if x0.len() != d {
            return Err(Error::Config(format!("point.x0 has {} entries for dimension {d}", x0.len())));
        }
        let seed = seed_override.or(self.seed).unwrap_or(DEFAULT_SEED);
        Ok(Resolved { basis, map, family, characters, x0, seed })
    }
}

impl RestrictedConfig {
    pub fn set(&self, dim: usize) -> Result<BoxSet> {
        let boxes = self
            .set
            .iter()
            .map(|b| AxisBox::new(b.lo.clone(), b.hi.clone()))
            .collect::<Result<Vec<_>>>()?;
        BoxSet::new(dim, boxes)
    }

    pub fn gates(&self) -> Result<(IntPolynomial, IntPolynomial)> {
        Ok((self.q1.parse()?, self.q2.parse()?))
    }
}

impl WeightConfig {
    pub fn step_function(&self) -> Result<StepFunction> {
        match *self {
            WeightConfig::Constant { re, im } => Ok(StepFunction::constant(Complex64::new(re, im))),
            WeightConfig::Indicator { a, b } => StepFunction::indicator(a, b),
            WeightConfig::Character { k, bins } => StepFunction::character(k, bins),
        }
    }
}

pub fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|e| Error::Config(format!("{SEED_ENV}={v:?}: {e}"))),
        Err(_) => Ok(None),
    }
}
