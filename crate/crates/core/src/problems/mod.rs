//! Search-space definitions: bit-string points, Hamming geometry, and the NK
//! and HIFF fitness families with seeded, persistable instance generation.

mod bitpoint;
mod hiff;
mod nk;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bitpoint::{hamming_distance, BitPoint, MAX_N};
pub use hiff::{classic_hiff, HiffExtension, HiffInstance, HiffVariant};
pub use nk::NkInstance;

/// A fitness function over `BitPoint`s together with the parameters and seed
/// that generated it. Instances are immutable after generation and fitness
/// evaluation is pure, so evaluating from many threads is safe.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LandscapeInstance {
    Nk(NkInstance),
    Hiff(HiffInstance),
}

impl LandscapeInstance {
    pub fn generate_nk(n: usize, k: usize, seed: u64) -> Result<Self> {
        Ok(LandscapeInstance::Nk(NkInstance::generate(n, k, seed)?))
    }

    pub fn hiff(n: usize, variant: HiffVariant) -> Result<Self> {
        Ok(LandscapeInstance::Hiff(HiffInstance::new(n, variant)?))
    }

    pub fn n(&self) -> usize {
        match self {
            LandscapeInstance::Nk(i) => i.n(),
            LandscapeInstance::Hiff(i) => i.n(),
        }
    }

    /// Number of points in the search space.
    pub fn space_size(&self) -> usize {
        1usize << self.n()
    }

    /// Short identifier embedded in derived files so samples and reports can
    /// name their source instance.
    pub fn instance_ref(&self) -> String {
        match self {
            LandscapeInstance::Nk(i) => format!("nk-n{}-k{}-s{}", i.n(), i.k(), i.seed()),
            LandscapeInstance::Hiff(i) => format!("hiff-{}-n{}", i.variant(), i.n()),
        }
    }

    /// Errors unless every point of the instance can be evaluated (a HIFFC or
    /// HIFFM instance without a registered extension cannot).
    pub fn ensure_evaluatable(&self) -> Result<()> {
        match self {
            LandscapeInstance::Nk(_) => Ok(()),
            LandscapeInstance::Hiff(h) => {
                if h.is_evaluatable() {
                    Ok(())
                } else {
                    Err(Error::Configuration(format!(
                        "HIFF variant {} has no registered fitness function",
                        h.variant()
                    )))
                }
            }
        }
    }

    /// Fitness of `p`. Callers must have checked [`ensure_evaluatable`]
    /// (entry points do); an unevaluatable variant panics here.
    ///
    /// [`ensure_evaluatable`]: LandscapeInstance::ensure_evaluatable
    pub fn fitness(&self, p: &BitPoint) -> f64 {
        match self {
            LandscapeInstance::Nk(i) => i.fitness(p),
            LandscapeInstance::Hiff(h) => h
                .fitness(p)
                .expect("fitness of unevaluatable instance; ensure_evaluatable was skipped"),
        }
    }

    /// Fitness of every point, indexed by `BitPoint::index()`.
    pub fn fitness_table(&self) -> Result<Vec<f64>> {
        self.ensure_evaluatable()?;
        if self.n() > MAX_N {
            return Err(Error::Capability(format!(
                "cannot enumerate 2^{} points",
                self.n()
            )));
        }
        Ok(BitPoint::enumerate(self.n())
            .map(|p| self.fitness(&p))
            .collect())
    }

    /// Exact minimum and maximum fitness over the whole space. Classic HIFF
    /// uses its closed form; everything else is a full scan.
    pub fn fitness_extrema(&self) -> Result<(f64, f64)> {
        match self {
            LandscapeInstance::Hiff(h) => h.extrema(),
            LandscapeInstance::Nk(_) => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for f in self.fitness_table()? {
                    lo = lo.min(f);
                    hi = hi.max(f);
                }
                Ok((lo, hi))
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let inst: LandscapeInstance = serde_json::from_str(json)?;
        if let LandscapeInstance::Nk(nk) = &inst {
            nk.validate()?;
        }
        Ok(inst)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
