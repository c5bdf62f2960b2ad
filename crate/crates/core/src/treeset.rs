//! Laminar sets of lines that distinguish a family of profiles
//! efficiently, their consistent orientations, splitting stars and
//! outlines.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pixelset::PixelSet;
use crate::profiles::{distinguishable, distinguishes, induces, Profile, ProfileAtlas, Region};
use crate::sepsys::{canonical_side, is_consistent, nested, Pool, Star};

/// A pair `{A, Π∖A}` with `∅ ≠ A ≠ Π`, stored by its side without pixel 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    order: u64,
    side: PixelSet,
}

impl Line {
    pub fn new(pool: &Pool, side: PixelSet) -> Result<Line> {
        let full = pool.full();
        if side.is_empty() || side == full || !side.is_subset(full) {
            return Err(Error::NotALine(side.bits()));
        }
        let side = canonical_side(side, full);
        let order = pool.order_of(side).ok_or(Error::NotALine(side.bits()))?;
        Ok(Line { order, side })
    }

    /// The side not containing pixel 0.
    pub fn side(&self) -> PixelSet {
        self.side
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Both orientations.
    pub fn sides(&self, full: PixelSet) -> [PixelSet; 2] {
        [self.side, self.side.complement_in(full)]
    }
}

/// A laminar set of lines, sorted by `(order, side)`.
#[derive(Clone, Debug)]
pub struct TreeSet {
    pool: Arc<Pool>,
    lines: Vec<Line>,
}

impl PartialEq for TreeSet {
    fn eq(&self, other: &Self) -> bool {
        self.lines == other.lines
    }
}

impl TreeSet {
    pub fn new(pool: &Arc<Pool>, lines: impl IntoIterator<Item = Line>) -> Result<TreeSet> {
        let mut lines: Vec<Line> = lines.into_iter().collect();
        lines.sort();
        lines.dedup();
        let full = pool.full();
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                if !nested(a.side, b.side, full) {
                    return Err(Error::NotLaminar(a.side.bits(), b.side.bits()));
                }
            }
        }
        Ok(TreeSet {
            pool: Arc::clone(pool),
            lines,
        })
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn pool(&self) -> &Arc<Pool> {
        &self.pool
    }

    fn without(&self, i: usize) -> TreeSet {
        let mut lines = self.lines.clone();
        lines.remove(i);
        TreeSet {
            pool: Arc::clone(&self.pool),
            lines,
        }
    }
}

/// All lines of least order distinguishing `p` and `q`, from a scan of the
/// whole pool.
pub fn min_distinguishers(p: &Profile, q: &Profile) -> Result<Vec<Line>> {
    if !distinguishable(p, q) {
        return Err(Error::Indistinguishable);
    }
    let pool = p.pool();
    for o in 0..p.k().min(q.k()) {
        let found: Vec<Line> = pool
            .layer(o)
            .iter()
            .filter(|s| !s.is_empty() && distinguishes(**s, p, q))
            .map(|&side| Line { order: o, side })
            .collect();
        if !found.is_empty() {
            return Ok(found);
        }
    }
    Err(Error::Indistinguishable)
}

struct PairTask {
    a: usize,
    b: usize,
    order: u64,
    candidates: Vec<Line>,
}

fn efficiently(task: &PairTask, lines: &[Line], profiles: &[Profile]) -> bool {
    lines.iter().any(|l| {
        l.order == task.order && distinguishes(l.side, &profiles[task.a], &profiles[task.b])
    })
}

fn separated(a: &Profile, b: &Profile, lines: &[Line]) -> bool {
    lines.iter().any(|l| distinguishes(l.side, a, b))
}

/// A laminar set distinguishing every pair of `profiles` efficiently, with
/// no redundant line and in bijection with its consistent orientations.
///
/// Pairs are handled by increasing least distinguishing order; each one
/// not yet settled takes a least-order distinguisher nested with the lines
/// chosen so far, smallest side first, backtracking when none fits.
pub fn build_distinguishing_tree_set(profiles: &[Profile]) -> Result<TreeSet> {
    let pool = match profiles.first() {
        Some(p) => Arc::clone(p.pool()),
        None => return Err(Error::SearchExhausted),
    };
    let mut tasks = Vec::new();
    for a in 0..profiles.len() {
        for b in a + 1..profiles.len() {
            let candidates = min_distinguishers(&profiles[a], &profiles[b])?;
            tasks.push(PairTask {
                a,
                b,
                order: candidates[0].order,
                candidates,
            });
        }
    }
    tasks.sort_by_key(|t| (t.order, t.a, t.b));
    let full = pool.full();
    let mut chosen: Vec<Line> = Vec::new();
    let mut result = None;
    search(&tasks, 0, &mut chosen, full, profiles, &pool, &mut result);
    result.ok_or(Error::SearchExhausted)
}

fn search(
    tasks: &[PairTask],
    i: usize,
    chosen: &mut Vec<Line>,
    full: PixelSet,
    profiles: &[Profile],
    pool: &Arc<Pool>,
    result: &mut Option<TreeSet>,
) {
    if result.is_some() {
        return;
    }
    let Some(task) = tasks.get(i) else {
        let mut lines = chosen.clone();
        lines.sort();
        // Drop lines that no pair needs, costliest first.
        for j in (0..lines.len()).rev() {
            let mut rest = lines.clone();
            rest.remove(j);
            if tasks.iter().all(|t| efficiently(t, &rest, profiles)) {
                lines = rest;
            }
        }
        let t = TreeSet {
            pool: Arc::clone(pool),
            lines,
        };
        if verify_tree_set(&t, profiles).all() {
            *result = Some(t);
        }
        return;
    };
    if efficiently(task, chosen, profiles) {
        search(tasks, i + 1, chosen, full, profiles, pool, result);
        return;
    }
    for &line in &task.candidates {
        if chosen.iter().all(|c| nested(c.side, line.side, full)) {
            chosen.push(line);
            search(tasks, i + 1, chosen, full, profiles, pool, result);
            chosen.pop();
            if result.is_some() {
                return;
            }
        }
    }
}

/// Every consistent choice of one side per line, each sorted.
pub fn consistent_orientations(t: &TreeSet) -> Vec<Vec<PixelSet>> {
    let full = t.pool.full();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(t.lines.len());
    fn go(
        lines: &[Line],
        full: PixelSet,
        cur: &mut Vec<PixelSet>,
        out: &mut Vec<Vec<PixelSet>>,
    ) {
        let Some((l, rest)) = lines.split_first() else {
            let mut o = cur.clone();
            o.sort();
            out.push(o);
            return;
        };
        for side in l.sides(full) {
            cur.push(side);
            if is_consistent(cur, full) {
                go(rest, full, cur, out);
            }
            cur.pop();
        }
    }
    go(&t.lines, full, &mut cur, &mut out);
    out.sort();
    out
}

/// `⊆`-minimal members, i.e. the maximal elements under `≤ = ⊇`.
fn maximal_elements(sides: &[PixelSet]) -> Star {
    Star::new(
        sides
            .iter()
            .copied()
            .filter(|&s| !sides.iter().any(|&o| o != s && o.is_subset(s))),
    )
}

/// The maximal elements of each consistent orientation.
pub fn splitting_stars(t: &TreeSet) -> Vec<Star> {
    consistent_orientations(t)
        .iter()
        .map(|o| maximal_elements(o))
        .collect()
}

/// The sides of `t` that `p` contains.
pub fn restriction_to(p: &Profile, t: &TreeSet) -> Vec<PixelSet> {
    let full = t.pool.full();
    let mut v: Vec<_> = t
        .lines
        .iter()
        .flat_map(|l| l.sides(full))
        .filter(|&s| p.contains(s))
        .collect();
    v.sort();
    v
}

/// Maximal elements of `P ∩ L⃗` for `P` the member of `region` at its
/// complexity.
pub fn outline(region: &Region, t: &TreeSet) -> Star {
    maximal_elements(&restriction_to(region.representative(), t))
}

/// The profiles worth drawing lines between: those among the region
/// members and the 1-profiles that no other one induces. They are pairwise
/// distinguishable, and the 1-profiles keep the order-0 structure of a
/// picture with a single region.
pub fn maximal_profiles(atlas: &ProfileAtlas) -> Vec<Profile> {
    let mut candidates: Vec<Profile> = atlas.level(1).to_vec();
    for r in atlas.regions() {
        candidates.extend(r.profiles().iter().cloned());
    }
    candidates.sort_by_key(|p| std::cmp::Reverse(p.k()));
    let mut out: Vec<Profile> = Vec::new();
    for p in candidates {
        let covered = out
            .iter()
            .any(|q| q.k() >= p.k() && induces(q, &p).unwrap_or(false));
        if !covered {
            out.push(p);
        }
    }
    out.sort_by_cached_key(|p| (p.k(), p.members()));
    out
}

/// Outcome of [`verify_tree_set`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeSetReport {
    pub laminar: bool,
    /// Every pair is distinguished by a line of least possible order.
    pub efficiency: bool,
    /// Deleting any line leaves some pair undistinguished.
    pub minimality: bool,
    /// Each profile extends to exactly one consistent orientation and these
    /// are all distinct and exhaust the consistent orientations.
    pub bijection: bool,
}

impl TreeSetReport {
    pub fn all(&self) -> bool {
        self.laminar && self.efficiency && self.minimality && self.bijection
    }
}

pub fn verify_tree_set(t: &TreeSet, profiles: &[Profile]) -> TreeSetReport {
    let full = t.pool.full();
    let lines = &t.lines;
    let laminar = lines
        .iter()
        .enumerate()
        .all(|(i, a)| lines[i + 1..].iter().all(|b| nested(a.side, b.side, full)));
    let mut efficiency = true;
    for (i, a) in profiles.iter().enumerate() {
        for b in &profiles[i + 1..] {
            let best = match min_distinguishers(a, b) {
                Ok(v) => v[0].order,
                Err(_) => {
                    efficiency = false;
                    continue;
                }
            };
            if !lines
                .iter()
                .any(|l| l.order == best && distinguishes(l.side, a, b))
            {
                efficiency = false;
            }
        }
    }
    let all_separated = |ls: &[Line]| {
        profiles.iter().enumerate().all(|(i, a)| {
            profiles[i + 1..].iter().all(|b| separated(a, b, ls))
        })
    };
    let minimality = (0..lines.len()).all(|i| !all_separated(&t.without(i).lines));
    let orientations = consistent_orientations(t);
    let mut images = Vec::new();
    let mut bijection = orientations.len() == profiles.len();
    for p in profiles {
        let partial = restriction_to(p, t);
        let ext: Vec<usize> = orientations
            .iter()
            .enumerate()
            .filter(|(_, o)| partial.iter().all(|s| o.binary_search(s).is_ok()))
            .map(|(i, _)| i)
            .collect();
        if ext.len() != 1 {
            bijection = false;
        }
        images.extend(ext);
    }
    images.sort();
    images.dedup();
    bijection &= images.len() == profiles.len();
    TreeSetReport {
        laminar,
        efficiency,
        minimality,
        bijection,
    }
}
