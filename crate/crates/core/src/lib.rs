//! Analysis of combinatorial search spaces over fixed-length bit strings.
//!
//! The library detects potential local optima (PLOPs) from the step sizes of
//! slow adaptive walks, samples search spaces with an adjusted Wang-Landau
//! random walk, and characterizes the resulting point sets through basins of
//! attraction, step-size-barrier (temperature) networks, and basin overlap
//! networks. NK and HIFF bit-string landscapes are built in.

pub mod basins;
mod bitset;
pub mod error;
pub mod networks;
pub mod plops;
pub mod problems;
pub mod sampling;
pub mod stats;
pub mod walks;

pub use error::{Error, Result};
pub use problems::{BitPoint, HiffInstance, HiffVariant, LandscapeInstance, NkInstance};
pub use sampling::{Sample, SampleOrigin};
