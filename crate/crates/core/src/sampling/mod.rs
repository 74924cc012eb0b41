//! The three input point sets: full enumeration (ENUM), adjusted Wang-Landau
//! samples (AWL) and size-matched uniform random samples (RAND).

mod bins;
mod wang_landau;

use std::fmt;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{BitPoint, LandscapeInstance, MAX_N};

pub use bins::BinLayout;
pub use wang_landau::{
    awl_sample, is_flat, AwlRun, AwlTrace, FlatEvent, StopReason, WlParams, WlState,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SampleOrigin {
    Enum,
    Awl,
    Rand,
}

impl fmt::Display for SampleOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SampleOrigin::Enum => "ENUM",
            SampleOrigin::Awl => "AWL",
            SampleOrigin::Rand => "RAND",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub bits: BitPoint,
    pub fitness: f64,
}

/// A duplicate-free set of evaluated points drawn from one instance.
///
/// Points are held in lexicographic order so files and set operations are
/// canonical regardless of visit order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sample {
    pub origin: SampleOrigin,
    pub instance_ref: String,
    pub seed: u64,
    n: usize,
    points: Vec<SamplePoint>,
}

impl Sample {
    /// Builds a sample from explicit points, canonicalizing the order and
    /// dropping duplicates.
    pub fn from_points(
        origin: SampleOrigin,
        instance_ref: String,
        seed: u64,
        n: usize,
        mut points: Vec<SamplePoint>,
    ) -> Self {
        points.sort_unstable_by_key(|sp| sp.bits);
        points.dedup_by_key(|sp| sp.bits);
        Sample { origin, instance_ref, seed, n, points }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Fraction of the search space the sample covers.
    pub fn coverage(&self) -> f64 {
        self.points.len() as f64 / (1u64 << self.n) as f64
    }

    pub fn points(&self) -> &[SamplePoint] {
        &self.points
    }

    pub fn point(&self, idx: usize) -> &SamplePoint {
        &self.points[idx]
    }

    pub fn fitness(&self, idx: usize) -> f64 {
        self.points[idx].fitness
    }

    /// Index of `p` within the sample, if present.
    pub fn index_of(&self, p: &BitPoint) -> Option<usize> {
        self.points.binary_search_by_key(p, |sp| sp.bits).ok()
    }

    /// Index of the point with maximal fitness (first by point order on
    /// exact ties).
    pub fn fittest_index(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, sp) in self.points.iter().enumerate() {
            if best.is_none_or(|b| sp.fitness > self.points[b].fitness) {
                best = Some(i);
            }
        }
        best
    }

    pub fn max_fitness(&self) -> f64 {
        self.fittest_index()
            .map(|i| self.points[i].fitness)
            .unwrap_or(f64::NAN)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let mut s: Sample = serde_json::from_str(json)?;
        s.points.sort_unstable_by_key(|sp| sp.bits);
        let before = s.points.len();
        s.points.dedup_by_key(|sp| sp.bits);
        if s.points.len() != before {
            return Err(Error::Input("sample file contains duplicate points".into()));
        }
        if s.points.iter().any(|sp| sp.bits.len() != s.n) {
            return Err(Error::Input("sample point length differs from sample n".into()));
        }
        Ok(s)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// The ENUM condition: the entire search space with fitness attached.
pub fn enumerate(inst: &LandscapeInstance) -> Result<Sample> {
    inst.ensure_evaluatable()?;
    let n = inst.n();
    if n > MAX_N {
        return Err(Error::Capability(format!("cannot enumerate 2^{n} points")));
    }
    let points = BitPoint::enumerate(n)
        .map(|p| SamplePoint { bits: p, fitness: inst.fitness(&p) })
        .collect();
    Ok(Sample::from_points(
        SampleOrigin::Enum,
        inst.instance_ref(),
        0,
        n,
        points,
    ))
}

/// The RAND condition: `size` distinct points chosen uniformly at random
/// without replacement.
pub fn rand_sample(inst: &LandscapeInstance, size: usize, seed: u64) -> Result<Sample> {
    inst.ensure_evaluatable()?;
    let n = inst.n();
    let space = 1usize << n;
    if size == 0 || size > space {
        return Err(Error::Input(format!(
            "random sample size must be in 1..=2^{n}, got {size}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = rand::seq::index::sample(&mut rng, space, size)
        .into_iter()
        .map(|w| {
            let p = BitPoint::new(w as u32, n);
            SamplePoint { bits: p, fitness: inst.fitness(&p) }
        })
        .collect();
    Ok(Sample::from_points(
        SampleOrigin::Rand,
        inst.instance_ref(),
        seed,
        n,
        points,
    ))
}
