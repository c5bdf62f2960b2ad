//! Tangles avoiding small stars against chop trees.
//!
//! For each `k` a picture either has an orientation of `S_k` avoiding void
//! stars of up to three elements and single pixels, or it can be chopped
//! into single pixels along cuts of order `< k`, never both.

use std::sync::Arc;

use crate::canvas::{WeightedCanvas, DEFAULT_PIXEL_CAP};
use crate::error::{Error, Result};
use crate::pixelset::PixelSet;
use crate::profiles::{self, Profile};
use crate::search::Rule;
use crate::sepsys::{is_star, Pool, PoolOptions, Star, Stratum};

/// Chop tree search visits every partition of every part; keep it small.
pub const CHOP_PIXEL_CAP: usize = 16;

/// The star set `F` of `S_k`: void stars with at most three elements and
/// single pixels. The co-trivial singleton `{∅}` is void, so `F` is
/// standard.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarSetF {
    k: u64,
    min_interior: usize,
}

impl StarSetF {
    pub fn standard(stratum: &Stratum) -> Self {
        StarSetF {
            k: stratum.k(),
            min_interior: 1,
        }
    }

    /// Also forbid stars of up to three elements whose interior has fewer
    /// than `min_interior` pixels. With `1` this is [`Self::standard`].
    pub fn with_interior_threshold(stratum: &Stratum, min_interior: usize) -> Self {
        StarSetF {
            k: stratum.k(),
            min_interior: min_interior.max(1),
        }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn min_interior(&self) -> usize {
        self.min_interior
    }

    /// Membership for a star of the stratum's members.
    pub fn contains(&self, star: &Star, stratum: &Stratum) -> bool {
        let full = stratum.full();
        if !star.elements().iter().all(|&s| stratum.contains(s)) || !star.is_star(full) {
            return false;
        }
        if star.is_single_pixel() {
            return true;
        }
        !star.is_empty() && star.len() <= 3 && star.interior(full).len() < self.min_interior
    }

    /// All members of `F`, for small strata.
    pub fn enumerate(&self, stratum: &Stratum) -> Vec<Star> {
        let members = stratum.members();
        let mut out = Vec::new();
        for (i, &a) in members.iter().enumerate() {
            let one = Star::new([a]);
            if self.contains(&one, stratum) {
                out.push(one);
            }
            for (j, &b) in members.iter().enumerate().skip(i + 1) {
                let two = Star::new([a, b]);
                if self.contains(&two, stratum) {
                    out.push(two);
                }
                for &c in &members[j + 1..] {
                    let three = Star::new([a, b, c]);
                    if self.contains(&three, stratum) {
                        out.push(three);
                    }
                }
            }
        }
        out.sort();
        out
    }

    fn rule(&self) -> Rule {
        Rule {
            min_interior: self.min_interior,
            ..Rule::STAR
        }
    }
}

/// Every `F`-tangle of each `S_k`, `k = 1..=max_k`.
fn tangle_sweep(pool: &Arc<Pool>, max_k: u64, f: &StarSetF) -> Vec<Vec<Profile>> {
    profiles::unfocused_sweep(pool, max_k, f.rule())
}

/// An `F`-tangle of `stratum`, if there is one.
pub fn find_f_tangle(stratum: &Stratum, f: &StarSetF) -> Option<Profile> {
    let pool = stratum.pool();
    let k = stratum.k();
    let below = tangle_sweep(pool, k - 1, f);
    let bases: &[Profile] = below.last().map_or(&[], Vec::as_slice);
    if k > 1 && bases.is_empty() {
        return None;
    }
    profiles::extend_all(pool, k, bases, f.rule(), Some(1))
        .into_iter()
        .next()
}

/// All `F`-tangles of `stratum`, canonically ordered.
pub fn f_tangles(stratum: &Stratum, f: &StarSetF) -> Vec<Profile> {
    let mut v = tangle_sweep(stratum.pool(), stratum.k(), f)
        .pop()
        .unwrap_or_default();
    profiles::canonical_sort(&mut v);
    v
}

/// Consistent orientations of `stratum` avoiding every star
/// `{r⃗, s⃗, (r⃗ ∨ s⃗)*}` that violates the profile condition, canonically
/// ordered.
pub fn f_prime_tangles(stratum: &Stratum) -> Vec<Profile> {
    let pool = stratum.pool();
    let k = stratum.k();
    let mut v = profiles::unfocused_sweep(pool, k, Rule::STAR)
        .pop()
        .unwrap_or_default();
    v.extend(profiles::focused(pool, k));
    profiles::canonical_sort(&mut v);
    v
}

/// A node of a chop tree: a part of Π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChopNode {
    Leaf(usize),
    Split {
        part: PixelSet,
        left: Box<ChopNode>,
        right: Box<ChopNode>,
    },
}

impl ChopNode {
    pub fn part(&self) -> PixelSet {
        match self {
            ChopNode::Leaf(p) => PixelSet::singleton(*p),
            ChopNode::Split { part, .. } => *part,
        }
    }

    fn walk<'a>(&'a self, out: &mut Vec<&'a ChopNode>) {
        out.push(self);
        if let ChopNode::Split { left, right, .. } = self {
            left.walk(out);
            right.walk(out);
        }
    }
}

/// A binary decomposition of Π down to single pixels along cuts of order
/// `< k`, rooted at the edge between its two top parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChopTree {
    k: u64,
    full: PixelSet,
    /// Two top parts, or a single leaf when `|Π| = 1`.
    top: Vec<ChopNode>,
}

impl ChopTree {
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Every node below the root edge.
    pub fn nodes(&self) -> Vec<&ChopNode> {
        let mut out = Vec::new();
        for n in &self.top {
            n.walk(&mut out);
        }
        out
    }

    /// Lines carried by the edges, as canonical sides, sorted.
    pub fn lines(&self) -> Vec<PixelSet> {
        let mut v: Vec<_> = self
            .nodes()
            .iter()
            .map(|n| crate::sepsys::canonical_side(n.part(), self.full))
            .filter(|s| !s.is_empty())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Leaf pixels in tree order.
    pub fn leaves(&self) -> Vec<usize> {
        self.nodes()
            .iter()
            .filter_map(|n| match n {
                ChopNode::Leaf(p) => Some(*p),
                ChopNode::Split { .. } => None,
            })
            .collect()
    }

    /// The star at each node, oriented toward it: `{C, Π∖C₁, Π∖C₂}` at a
    /// split of `C` and `{{p}}` at a leaf.
    pub fn splitting_stars(&self) -> Vec<Star> {
        let full = self.full;
        self.nodes()
            .iter()
            .map(|n| match n {
                ChopNode::Leaf(p) => Star::new([PixelSet::singleton(*p)]),
                ChopNode::Split { part, left, right } => Star::new([
                    *part,
                    left.part().complement_in(full),
                    right.part().complement_in(full),
                ]),
            })
            .collect()
    }
}

/// Search for a chop tree of `S_k`; `None` if none exists.
pub fn build_chop_tree(pool: &Pool, k: u64) -> Result<Option<ChopTree>> {
    let n = pool.pixel_count();
    if k == 0 {
        return Err(Error::ZeroStratum);
    }
    if n > CHOP_PIXEL_CAP {
        return Err(Error::PixelCap {
            pixels: n,
            cap: CHOP_PIXEL_CAP,
        });
    }
    let full = pool.full();
    let small = |s: PixelSet| pool.order_of(s).is_some_and(|o| o < k);
    // best[c]: the split of part c, as its half containing c's lowest
    // pixel; 0 marks parts that cannot be chopped (leaves use their own
    // mask).
    let size = 1usize << n;
    let mut best = vec![0u32; size];
    for m in 1..size as u32 {
        let c = PixelSet(m);
        if c != full && !small(c) {
            continue;
        }
        if c.len() == 1 {
            best[m as usize] = m;
            continue;
        }
        let low = m & m.wrapping_neg();
        let rest = m ^ low;
        let mut winner: Option<(u64, u32)> = None;
        // Halves containing the lowest pixel, excluding c itself.
        let mut sub = rest;
        loop {
            let c1 = sub | low;
            if c1 != m {
                let c2 = m ^ c1;
                if best[c1 as usize] != 0 && best[c2 as usize] != 0 {
                    let o1 = pool.order_of(PixelSet(c1)).unwrap_or(u64::MAX);
                    let o2 = pool.order_of(PixelSet(c2)).unwrap_or(u64::MAX);
                    let key = (o1.max(o2), c1);
                    if winner.is_none_or(|w| key < w) {
                        winner = Some(key);
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        if let Some((_, c1)) = winner {
            best[m as usize] = c1;
        }
    }
    fn build(c: u32, best: &[u32]) -> ChopNode {
        if c.count_ones() == 1 {
            return ChopNode::Leaf(c.trailing_zeros() as usize);
        }
        let c1 = best[c as usize];
        ChopNode::Split {
            part: PixelSet(c),
            left: Box::new(build(c1, best)),
            right: Box::new(build(c ^ c1, best)),
        }
    }
    let root = full.bits();
    if best[root as usize] == 0 {
        return Ok(None);
    }
    let top = if n == 1 {
        vec![ChopNode::Leaf(0)]
    } else {
        let c1 = best[root as usize];
        vec![build(c1, &best), build(root ^ c1, &best)]
    };
    Ok(Some(ChopTree { k, full, top }))
}

/// Independent checks of a chop tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChopReport {
    pub laminar: bool,
    pub orders_below_k: bool,
    pub leaves_biject: bool,
    /// Internal stars are void with exactly three elements, leaf stars are
    /// single pixels.
    pub stars_in_f: bool,
}

impl ChopReport {
    pub fn all(&self) -> bool {
        self.laminar && self.orders_below_k && self.leaves_biject && self.stars_in_f
    }
}

pub fn validate_chop_tree(tree: &ChopTree, pool: &Pool) -> ChopReport {
    let full = pool.full();
    let lines = tree.lines();
    let laminar = lines.iter().enumerate().all(|(i, &a)| {
        lines[i + 1..]
            .iter()
            .all(|&b| crate::sepsys::nested(a, b, full))
    });
    let orders_below_k = tree
        .nodes()
        .iter()
        .all(|n| pool.order_of(n.part()).is_some_and(|o| o < tree.k));
    let mut leaves = tree.leaves();
    leaves.sort_unstable();
    let leaves_biject = leaves == (0..pool.pixel_count()).collect::<Vec<_>>();
    let stars_in_f = tree.nodes().iter().zip(tree.splitting_stars()).all(|(n, s)| {
        match n {
            ChopNode::Leaf(_) => s.is_single_pixel(),
            ChopNode::Split { left, right, part } => {
                s.len() == 3
                    && is_star(s.elements(), full)
                    && s.is_void(full)
                    && left.part().union(right.part()) == *part
                    && left.part().is_disjoint(right.part())
            }
        }
    });
    ChopReport {
        laminar,
        orders_below_k,
        leaves_biject,
        stars_in_f,
    }
}

/// Both sides of the dichotomy at one `k`.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub k: u64,
    pub tangle: Option<Profile>,
    pub chop_tree: Option<ChopTree>,
    /// The tangle is consistent, satisfies the profile condition and is
    /// unfocused; `true` when there is none.
    pub tangle_valid: bool,
    /// The chop tree passes [`validate_chop_tree`]; `true` when none.
    pub chop_valid: bool,
}

impl DualityReport {
    pub fn exactly_one(&self) -> bool {
        self.tangle.is_some() != self.chop_tree.is_some()
    }

    pub fn holds(&self) -> bool {
        self.exactly_one() && self.tangle_valid && self.chop_valid
    }
}

pub fn verify_duality(pool: &Arc<Pool>, k: u64) -> Result<DualityReport> {
    let stratum = pool.stratum(k)?;
    let f = StarSetF::standard(&stratum);
    let tangle = find_f_tangle(&stratum, &f);
    let chop_tree = build_chop_tree(pool, k)?;
    let tangle_valid = tangle.as_ref().is_none_or(|t| {
        let o = t.orientation();
        o.is_consistent() && o.satisfies_profile_condition() && !t.is_focused()
    });
    let chop_valid = chop_tree
        .as_ref()
        .is_none_or(|c| validate_chop_tree(c, pool).all());
    Ok(DualityReport {
        k,
        tangle,
        chop_tree,
        tangle_valid,
        chop_valid,
    })
}

/// Largest `k` such that `S_k` has an unfocused profile, found through
/// `F`-tangles; 0 if there is none. With `subset`, works on the induced
/// sub-canvas keeping `N`.
pub fn max_supported_resolution(wc: &WeightedCanvas, subset: Option<PixelSet>) -> Result<u64> {
    let wc = match subset {
        Some(s) if s.is_empty() => return Err(Error::EmptySubset),
        Some(s) => wc.restrict(s)?,
        None => wc.clone(),
    };
    let n = wc.pixel_count();
    let pool = Pool::build(
        Arc::new(wc),
        PoolOptions::exact_with_cap(n.max(DEFAULT_PIXEL_CAP)),
    )?;
    Ok(resolution_of(&pool))
}

/// [`max_supported_resolution`] on an existing pool.
pub fn resolution_of(pool: &Arc<Pool>) -> u64 {
    let f = StarSetF::standard(&pool.stratum(1).expect("k = 1"));
    tangle_sweep(pool, pool.top_level(), &f)
        .iter()
        .rposition(|l| !l.is_empty())
        .map_or(0, |i| i as u64 + 1)
}
