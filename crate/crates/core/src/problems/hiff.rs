use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::bitpoint::{BitPoint, MAX_N};

/// Which member of the HIFF family an instance evaluates.
///
/// `Classic` is implemented directly. `Hiffc` and `Hiffm` are defined
/// elsewhere and are deliberately not guessed at: they evaluate only through
/// a registered extension, otherwise requesting their fitness is a
/// configuration error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HiffVariant {
    Classic,
    Hiffc,
    Hiffm,
}

impl fmt::Display for HiffVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HiffVariant::Classic => "classic",
            HiffVariant::Hiffc => "hiffc",
            HiffVariant::Hiffm => "hiffm",
        })
    }
}

impl std::str::FromStr for HiffVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(HiffVariant::Classic),
            "hiffc" => Ok(HiffVariant::Hiffc),
            "hiffm" => Ok(HiffVariant::Hiffm),
            other => Err(Error::Input(format!("unknown HIFF variant {other:?}"))),
        }
    }
}

/// Externally supplied fitness function for the non-classic variants.
pub type HiffExtension = Arc<dyn Fn(&BitPoint) -> f64 + Send + Sync>;

/// A hierarchical-if-and-only-if instance over strings whose length is a
/// power of two.
#[derive(Clone, Serialize, Deserialize)]
pub struct HiffInstance {
    n: usize,
    variant: HiffVariant,
    #[serde(skip)]
    extension: Option<HiffExtension>,
}

impl fmt::Debug for HiffInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HiffInstance")
            .field("n", &self.n)
            .field("variant", &self.variant)
            .field("extension", &self.extension.is_some())
            .finish()
    }
}

impl HiffInstance {
    pub fn new(n: usize, variant: HiffVariant) -> Result<Self> {
        if !(2..=MAX_N).contains(&n) || !n.is_power_of_two() {
            return Err(Error::Input(format!(
                "HIFF length must be a power of two in 2..={MAX_N}, got {n}"
            )));
        }
        Ok(HiffInstance { n, variant, extension: None })
    }

    /// Registers the fitness function that evaluates a non-classic variant.
    pub fn with_extension(mut self, extension: HiffExtension) -> Self {
        self.extension = Some(extension);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> HiffVariant {
        self.variant
    }

    pub fn is_evaluatable(&self) -> bool {
        self.variant == HiffVariant::Classic || self.extension.is_some()
    }

    /// Fitness of `p` under the configured variant.
    pub fn fitness(&self, p: &BitPoint) -> Result<f64> {
        debug_assert_eq!(p.len(), self.n);
        match (self.variant, &self.extension) {
            (HiffVariant::Classic, _) => Ok(classic_hiff(p)),
            (_, Some(ext)) => Ok(ext(p)),
            (v, None) => Err(Error::Configuration(format!(
                "HIFF variant {v} has no registered fitness function"
            ))),
        }
    }

    /// Exact fitness extrema. Classic has the closed form min = n (no
    /// homogeneous block above size 1) and max = n(log2 n + 1); extension
    /// variants are scanned exhaustively.
    pub fn extrema(&self) -> Result<(f64, f64)> {
        match (self.variant, &self.extension) {
            (HiffVariant::Classic, _) => {
                let levels = self.n.trailing_zeros() as usize + 1;
                Ok((self.n as f64, (self.n * levels) as f64))
            }
            (_, Some(ext)) => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for p in BitPoint::enumerate(self.n) {
                    let f = ext(&p);
                    lo = lo.min(f);
                    hi = hi.max(f);
                }
                Ok((lo, hi))
            }
            (v, None) => Err(Error::Configuration(format!(
                "HIFF variant {v} has no registered fitness function"
            ))),
        }
    }
}

/// Classic HIFF: every aligned homogeneous block of size 2^level contributes
/// its size; single bits always count, so fitness is at least n.
pub fn classic_hiff(p: &BitPoint) -> f64 {
    let n = p.len();
    let mut total = n as u64; // level 0: every 1-block is homogeneous
    let mut block = 2usize;
    while block <= n {
        for start in (0..n).step_by(block) {
            let first = p.bit(start);
            if (start + 1..start + block).all(|i| p.bit(i) == first) {
                total += block as u64;
            }
        }
        block *= 2;
    }
    total as f64
}
