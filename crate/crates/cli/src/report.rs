//! The JSON analysis report and the pipeline that fills it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use tanglescope::duality::{resolution_of, verify_duality, CHOP_PIXEL_CAP};
use tanglescope::profiles::refines;
use tanglescope::treeset::{
    build_distinguishing_tree_set, maximal_profiles, outline, splitting_stars, verify_tree_set,
};
use tanglescope::{Picture, PixelSet, Pool, PoolMode, PoolOptions, ProfileAtlas, Star, WeightedCanvas};

use crate::error::{CliError, Result};

pub const SCHEMA: u32 = 1;

/// Exact pools beyond this many pixels need too much memory.
pub const DEFAULT_POOL_CAP: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Connected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PictureInfo {
    pub width: usize,
    pub height: usize,
    /// Bits per pixel code.
    pub n: usize,
    /// Offset `N`; a cut edge costs `N − δ`.
    #[serde(rename = "N")]
    pub offset: u32,
    pub mode: Mode,
    /// Largest order of any separation in the pool.
    pub max_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionEntry {
    pub id: usize,
    pub complexity: u64,
    pub cohesion: u64,
    pub visibility: u64,
    /// Pixels common to every side the region's top profile chooses; absent
    /// when there are none.
    pub kernel: Option<String>,
    /// Ids of the other regions this one refines.
    pub refines: Vec<usize>,
    /// Its outline in the tree set: the sides pointing at it.
    pub outline: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineEntry {
    /// The side without pixel 0, as a hex bitmask.
    pub side: String,
    pub order: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Tangle,
    ChopTree,
    Both,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub k: u64,
    pub witness: Witness,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityEntry {
    /// One entry per `k`; empty when the picture is too large for chop
    /// tree search.
    pub verdicts: Vec<Verdict>,
    pub max_supported_resolution: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSetChecks {
    pub laminar: bool,
    pub efficiency: bool,
    pub minimality: bool,
    pub bijection: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub picture: PictureInfo,
    pub regions: Vec<RegionEntry>,
    /// Number of profiles the tree set distinguishes.
    pub distinguished: usize,
    pub tree_set: Vec<LineEntry>,
    pub splitting_stars: Vec<Vec<String>>,
    pub duality: DualityEntry,
    pub tree_set_checks: TreeSetChecks,
}

#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    pub mode: Mode,
    /// Override the suggested offset `N`.
    pub offset: Option<u32>,
    pub pool_cap: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            mode: Mode::Exact,
            offset: None,
            pool_cap: DEFAULT_POOL_CAP,
        }
    }
}

fn star_hex(star: &Star) -> Vec<String> {
    star.elements().iter().map(|s| s.to_hex()).collect()
}

pub(crate) fn weighted(picture: Picture, offset: Option<u32>) -> Result<WeightedCanvas> {
    Ok(match offset {
        Some(n) => WeightedCanvas::new(picture, n)?,
        None => WeightedCanvas::with_suggested_offset(picture),
    })
}

pub(crate) fn pool(wc: WeightedCanvas, mode: Mode, pool_cap: usize) -> Result<Arc<Pool>> {
    let opts = PoolOptions {
        mode: match mode {
            Mode::Exact => PoolMode::Exact,
            Mode::Connected => PoolMode::Connected,
        },
        pixel_cap: pool_cap,
        ..PoolOptions::default()
    };
    Ok(Pool::build(Arc::new(wc), opts)?)
}

/// Run the whole pipeline on one picture.
pub fn analyze(picture: Picture, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let (width, height, n) = (picture.canvas().width(), picture.canvas().height(), picture.n());
    let wc = weighted(picture, opts.offset)?;
    let offset = wc.offset();
    let pool = pool(wc, opts.mode, opts.pool_cap)?;
    let atlas = ProfileAtlas::build(&pool);
    let regions = atlas.regions();

    let profiles = maximal_profiles(&atlas);
    let t = build_distinguishing_tree_set(&profiles)?;
    let checks = verify_tree_set(&t, &profiles);

    let entries = regions
        .iter()
        .enumerate()
        .map(|(id, r)| RegionEntry {
            id,
            complexity: r.complexity(),
            cohesion: r.cohesion(),
            visibility: r.visibility(),
            kernel: Some(r.kernel()).filter(|k| !k.is_empty()).map(PixelSet::to_hex),
            refines: regions
                .iter()
                .enumerate()
                .filter(|&(j, rho)| j != id && refines(r, rho))
                .map(|(j, _)| j)
                .collect(),
            outline: star_hex(&outline(r, &t)),
        })
        .collect();

    let mut verdicts = Vec::new();
    if pool.pixel_count() <= CHOP_PIXEL_CAP {
        for k in 1..=pool.top_level() {
            let d = verify_duality(&pool, k)?;
            let witness = match (d.tangle.is_some(), d.chop_tree.is_some()) {
                (true, false) => Witness::Tangle,
                (false, true) => Witness::ChopTree,
                (true, true) => Witness::Both,
                (false, false) => Witness::Neither,
            };
            verdicts.push(Verdict {
                k,
                witness,
                valid: d.holds(),
            });
        }
    }

    Ok(AnalysisReport {
        schema: SCHEMA,
        picture: PictureInfo {
            width,
            height,
            n,
            offset,
            mode: opts.mode,
            max_order: pool.max_order(),
        },
        regions: entries,
        distinguished: profiles.len(),
        tree_set: t
            .lines()
            .iter()
            .map(|l| LineEntry {
                side: l.side().to_hex(),
                order: l.order(),
            })
            .collect(),
        splitting_stars: splitting_stars(&t).iter().map(star_hex).collect(),
        duality: DualityEntry {
            verdicts,
            max_supported_resolution: resolution_of(&pool),
        },
        tree_set_checks: TreeSetChecks {
            laminar: checks.laminar,
            efficiency: checks.efficiency,
            minimality: checks.minimality,
            bijection: checks.bijection,
        },
    })
}

impl AnalysisReport {
    /// Every tree set check and every duality verdict holds.
    pub fn passed(&self) -> bool {
        let c = &self.tree_set_checks;
        c.laminar
            && c.efficiency
            && c.minimality
            && c.bijection
            && self.duality.verdicts.iter().all(|v| v.valid)
    }

    pub fn pixel_count(&self) -> usize {
        self.picture.width * self.picture.height
    }

    /// Decode a bitmask string of this report.
    pub fn decode(&self, hex: &str) -> Result<PixelSet> {
        let full = PixelSet::full(self.pixel_count());
        PixelSet::from_hex(hex)
            .filter(|s| s.is_subset(full))
            .ok_or_else(|| CliError::Bitmask(hex.to_string()))
    }

    /// Check that every bitmask decodes inside the picture.
    pub fn validate(&self) -> Result<()> {
        let masks = self
            .tree_set
            .iter()
            .map(|l| &l.side)
            .chain(self.splitting_stars.iter().flatten())
            .chain(self.regions.iter().flat_map(|r| r.kernel.iter().chain(&r.outline)));
        for m in masks {
            self.decode(m)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<AnalysisReport> {
        let r: AnalysisReport = serde_json::from_str(text)?;
        if r.schema != SCHEMA {
            return Err(CliError::Schema(r.schema));
        }
        r.validate()?;
        Ok(r)
    }
}
