//! Command-line front end: picture input, analysis reports and line
//! renders.

mod error;
pub mod fixture_files;
pub mod input;
pub mod render;
pub mod report;

pub use error::{CliError, Result};
pub use input::{load_picture, parse_grid, parse_pgm, Format};
pub use report::{analyze, AnalysisReport, AnalyzeOptions, Mode};

use tanglescope::duality::max_supported_resolution;
use tanglescope::{Picture, PixelSet};

/// Largest supported resolution of `picture`, or of the sub-picture on
/// `subset`.
pub fn resolution(picture: Picture, offset: Option<u32>, subset: Option<&str>) -> Result<u64> {
    let wc = report::weighted(picture, offset)?;
    let subset = subset
        .map(|s| {
            PixelSet::from_hex(s)
                .filter(|m| m.is_subset(wc.all()))
                .ok_or_else(|| CliError::Bitmask(s.to_string()))
        })
        .transpose()?;
    Ok(max_supported_resolution(&wc, subset)?)
}
