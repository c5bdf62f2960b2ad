//! Tangle-theoretic analysis of small pictures.
//!
//! A picture on a pixel grid induces an order function on the pixel
//! subsets. From it we build the separation strata, enumerate profiles and
//! their regions, compute canonical tree sets of lines, and certify the
//! maximal resolution either with a tangle or with a chop tree.

pub mod canvas;
pub mod duality;
mod error;
pub mod fixtures;
mod pixelset;
pub mod profiles;
mod search;
pub mod sepsys;
pub mod treeset;

pub use canvas::{Canvas, Picture, WeightedCanvas};
pub use error::{Error, Result};
pub use pixelset::PixelSet;
pub use sepsys::{OrientedSep, Pool, PoolMode, PoolOptions, Star, Stratum};
pub use profiles::{Orientation, Profile, ProfileAtlas, ProfileId, Region};
