//! Profiles of the strata `S_k`, their induced restrictions, and the
//! regions they form across `k`.
//!
//! Profiles are found level by level. Focused profiles are principal and
//! written down directly; every unfocused profile of `S_k` restricts to an
//! unfocused profile of `S_{k-1}`, so only those are extended by search.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pixelset::PixelSet;
use crate::search::{self, Rule};
use crate::sepsys::{is_consistent, Pool, Stratum};

/// One chosen side per pair of a stratum, `Π` always included.
#[derive(Clone, Debug)]
pub struct Orientation {
    stratum: Stratum,
    chosen: Vec<PixelSet>,
}

impl Orientation {
    /// Validates that `chosen` picks exactly one side of every pair.
    pub fn new(stratum: Stratum, chosen: impl IntoIterator<Item = PixelSet>) -> Result<Self> {
        let full = stratum.full();
        let mut chosen: Vec<_> = chosen.into_iter().collect();
        chosen.sort_unstable();
        chosen.dedup();
        let set: HashSet<PixelSet> = chosen.iter().copied().collect();
        for &s in &chosen {
            if !stratum.contains(s) {
                return Err(Error::NotInStratum(s.bits()));
            }
        }
        for c in stratum.pairs() {
            let one = set.contains(&c);
            let other = set.contains(&c.complement_in(full));
            if one == other {
                return Err(Error::NotInStratum(c.bits()));
            }
        }
        Ok(Orientation { stratum, chosen })
    }

    pub fn stratum(&self) -> &Stratum {
        &self.stratum
    }

    /// Chosen sides, sorted by bitmask.
    pub fn chosen(&self) -> &[PixelSet] {
        &self.chosen
    }

    pub fn contains(&self, side: PixelSet) -> bool {
        self.chosen.binary_search(&side).is_ok()
    }

    pub fn is_consistent(&self) -> bool {
        is_consistent(&self.chosen, self.stratum.full())
    }

    /// For `r⃗, s⃗` in the orientation, `(r⃗ ∨ s⃗)*` is not.
    pub fn satisfies_profile_condition(&self) -> bool {
        let full = self.stratum.full();
        let set: HashSet<PixelSet> = self.chosen.iter().copied().collect();
        self.chosen.iter().all(|&r| {
            self.chosen
                .iter()
                .all(|&s| !set.contains(&r.intersection(s).complement_in(full)))
        })
    }
}

/// Consistent and satisfying the profile condition.
pub fn is_profile(o: &Orientation) -> bool {
    o.is_consistent() && o.satisfies_profile_condition()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Body {
    /// All members of `S_k` containing the kernel.
    Principal(PixelSet),
    /// Sorted chosen sides; their intersection is empty.
    Explicit(Arc<Vec<PixelSet>>),
}

/// A profile of `S_k`.
#[derive(Clone)]
pub struct Profile {
    pool: Arc<Pool>,
    k: u64,
    body: Body,
}

impl PartialEq for Profile {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.body == other.body
            && Arc::ptr_eq(&self.pool, &other.pool)
    }
}

impl Eq for Profile {}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Principal(kernel) => write!(f, "Profile(k={}, principal {:?})", self.k, kernel),
            Body::Explicit(m) => write!(f, "Profile(k={}, {} sides)", self.k, m.len()),
        }
    }
}

impl Profile {
    pub(crate) fn principal(pool: &Arc<Pool>, k: u64, kernel: PixelSet) -> Self {
        Profile {
            pool: Arc::clone(pool),
            k,
            body: Body::Principal(kernel),
        }
    }

    /// From a sorted side list; collapses to the principal form whenever
    /// the sides share a pixel.
    pub(crate) fn from_sides(pool: &Arc<Pool>, k: u64, sides: Vec<PixelSet>) -> Self {
        let kernel = sides
            .iter()
            .fold(pool.full(), |acc, &s| acc.intersection(s));
        let body = if kernel.is_empty() {
            Body::Explicit(Arc::new(sides))
        } else {
            Body::Principal(kernel)
        };
        Profile {
            pool: Arc::clone(pool),
            k,
            body,
        }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn pool(&self) -> &Arc<Pool> {
        &self.pool
    }

    pub fn stratum(&self) -> Stratum {
        self.pool.stratum(self.k).expect("profiles live on k >= 1")
    }

    /// `⋂P`, which is nonempty exactly for principal profiles.
    pub fn kernel(&self) -> PixelSet {
        match &self.body {
            Body::Principal(k) => *k,
            Body::Explicit(_) => PixelSet::EMPTY,
        }
    }

    /// Whether `side` is a member.
    pub fn contains(&self, side: PixelSet) -> bool {
        if !self.pool.order_of(side).is_some_and(|o| o < self.k) {
            return false;
        }
        match &self.body {
            Body::Principal(kernel) => kernel.is_subset(side),
            Body::Explicit(m) => m.binary_search(&side).is_ok(),
        }
    }

    /// Sorted member sides.
    pub fn members(&self) -> Vec<PixelSet> {
        match &self.body {
            Body::Explicit(m) => m.as_ref().clone(),
            Body::Principal(kernel) => {
                let full = self.pool.full();
                let mut v: Vec<_> = self
                    .stratum()
                    .pairs()
                    .map(|c| if kernel.is_subset(c) { c } else { c.complement_in(full) })
                    .collect();
                v.sort_unstable();
                v
            }
        }
    }

    pub fn orientation(&self) -> Orientation {
        Orientation {
            stratum: self.stratum(),
            chosen: self.members(),
        }
    }

    /// Contains `{p}` for some pixel `p`.
    pub fn is_focused(&self) -> bool {
        match self.body {
            Body::Principal(kernel) => kernel.len() == 1 && self.contains(kernel),
            Body::Explicit(_) => false,
        }
    }

    /// Equal to `{A ∈ S_k : p ∈ A}` for some pixel `p`.
    pub fn is_principal(&self) -> bool {
        matches!(self.body, Body::Principal(_))
    }

    /// The induced profile `P ∩ S_ℓ`.
    pub fn restrict(&self, l: u64) -> Result<Profile> {
        if l == 0 {
            return Err(Error::ZeroStratum);
        }
        if l > self.k {
            return Err(Error::InductionDirection {
                lower: self.k,
                higher: l,
            });
        }
        if l == self.k {
            return Ok(self.clone());
        }
        Ok(match &self.body {
            Body::Principal(kernel) => {
                let p = kernel.first().expect("kernels are nonempty");
                Profile::principal(&self.pool, l, self.pool.block(p, l))
            }
            Body::Explicit(m) => {
                let sides = m
                    .iter()
                    .copied()
                    .filter(|&s| self.pool.order_of(s).is_some_and(|o| o < l))
                    .collect();
                Profile::from_sides(&self.pool, l, sides)
            }
        })
    }

    /// Lexicographic comparison of the orientation bits over the pairs of
    /// `S_k` in canonical order; a set bit means the side without pixel 0
    /// is chosen.
    fn signature_cmp(&self, other: &Profile) -> Ordering {
        if let (Body::Principal(a), Body::Principal(b)) = (&self.body, &other.body) {
            if a == b {
                return Ordering::Equal;
            }
        }
        let s = self.stratum();
        for c in s.pairs() {
            let x = self.contains(c);
            let y = other.contains(c);
            if x != y {
                return x.cmp(&y);
            }
        }
        Ordering::Equal
    }

    fn key(&self) -> Body {
        self.body.clone()
    }
}

fn same_universe(p: &Profile, q: &Profile) -> Result<()> {
    if p.pool.canvas().universe_id() == q.pool.canvas().universe_id() {
        Ok(())
    } else {
        Err(Error::UniverseMismatch)
    }
}

/// Whether `q` is the restriction of `p`; needs `k(q) ≤ k(p)`.
pub fn induces(p: &Profile, q: &Profile) -> Result<bool> {
    same_universe(p, q)?;
    if q.k > p.k {
        return Err(Error::InductionDirection {
            lower: p.k,
            higher: q.k,
        });
    }
    Ok(p.restrict(q.k)?.body == q.body)
}

/// Whether the pair with side `side` lies in both strata and the two
/// profiles orient it differently.
pub fn distinguishes(side: PixelSet, p: &Profile, q: &Profile) -> bool {
    let k = p.k.min(q.k);
    if !p.pool.order_of(side).is_some_and(|o| o < k) {
        return false;
    }
    p.contains(side) != q.contains(side)
}

/// Neither profile is a subset of the other.
pub fn distinguishable(p: &Profile, q: &Profile) -> bool {
    let (hi, lo) = if p.k >= q.k { (p, q) } else { (q, p) };
    !matches!(induces(hi, lo), Ok(true))
}

/// Extends each base with `rule`; `k = 1` starts from the empty
/// orientation.
pub(crate) fn extend_all(
    pool: &Arc<Pool>,
    k: u64,
    bases: &[Profile],
    rule: Rule,
    limit: Option<usize>,
) -> Vec<Profile> {
    let run = |base: Option<&Profile>| -> Vec<Profile> {
        let sides = base.map(Profile::members).unwrap_or_default();
        search::extend(pool, k, &sides, rule, limit)
            .into_iter()
            .map(|v| Profile::from_sides(pool, k, v))
            .collect()
    };
    if k == 1 {
        return run(None);
    }
    bases.par_iter().flat_map_iter(|b| run(Some(b))).collect()
}

/// Unfocused orientations satisfying `rule`, for each `k` in `1..=max_k`;
/// stops early once a level is empty.
pub(crate) fn unfocused_sweep(pool: &Arc<Pool>, max_k: u64, rule: Rule) -> Vec<Vec<Profile>> {
    let mut levels: Vec<Vec<Profile>> = Vec::new();
    for k in 1..=max_k {
        let prev: &[Profile] = levels.last().map_or(&[], Vec::as_slice);
        if k > 1 && prev.is_empty() {
            levels.push(Vec::new());
            continue;
        }
        let next = if k > 1 && pool.layer(k - 1).is_empty() {
            prev.iter()
                .map(|p| Profile {
                    k,
                    ..p.clone()
                })
                .collect()
        } else {
            extend_all(pool, k, prev, rule, None)
        };
        levels.push(next);
    }
    levels
}

/// The focused profiles of `S_k`: `{A : p ∈ A}` for each `{p} ∈ S_k`.
pub(crate) fn focused(pool: &Arc<Pool>, k: u64) -> Vec<Profile> {
    (0..pool.pixel_count())
        .map(PixelSet::singleton)
        .filter(|&s| pool.order_of(s).is_some_and(|o| o < k))
        .map(|s| Profile::principal(pool, k, s))
        .collect()
}

/// Sort profiles of one level into canonical order.
pub(crate) fn canonical_sort(v: &mut [Profile]) {
    v.sort_by(Profile::signature_cmp);
}

/// Identifies a profile inside a [`ProfileAtlas`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProfileId {
    pub k: u64,
    pub index: usize,
}

/// Every profile of every `S_k` for `k = 1..=max order + 1`, with each
/// profile linked to its restriction one level down.
pub struct ProfileAtlas {
    pool: Arc<Pool>,
    levels: Vec<Vec<Profile>>,
    parents: Vec<Vec<Option<usize>>>,
    children: Vec<Vec<Vec<usize>>>,
}

impl fmt::Debug for ProfileAtlas {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<_> = self.levels.iter().map(Vec::len).collect();
        f.debug_struct("ProfileAtlas").field("levels", &sizes).finish()
    }
}

impl ProfileAtlas {
    pub fn build(pool: &Arc<Pool>) -> Self {
        Self::build_to(pool, pool.top_level())
    }

    /// Levels `1..=max_k` only.
    pub fn build_to(pool: &Arc<Pool>, max_k: u64) -> Self {
        let unfocused = unfocused_sweep(pool, max_k, Rule::PROFILE);
        let levels: Vec<Vec<Profile>> = unfocused
            .into_iter()
            .enumerate()
            .map(|(i, mut level)| {
                level.extend(focused(pool, i as u64 + 1));
                level.sort_by(Profile::signature_cmp);
                level
            })
            .collect();
        let mut parents = vec![vec![None; levels.first().map_or(0, Vec::len)]];
        let mut children = Vec::new();
        for w in levels.windows(2) {
            let index: HashMap<Body, usize> =
                w[0].iter().enumerate().map(|(i, p)| (p.key(), i)).collect();
            let mut kids = vec![Vec::new(); w[0].len()];
            let ps: Vec<Option<usize>> = w[1]
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    let r = p.restrict(p.k - 1).expect("k >= 2");
                    let parent = index.get(&r.key()).copied();
                    if let Some(i) = parent {
                        kids[i].push(j);
                    }
                    parent
                })
                .collect();
            parents.push(ps);
            children.push(kids);
        }
        children.push(vec![Vec::new(); levels.last().map_or(0, Vec::len)]);
        ProfileAtlas {
            pool: Arc::clone(pool),
            levels,
            parents,
            children,
        }
    }

    pub fn pool(&self) -> &Arc<Pool> {
        &self.pool
    }

    /// Highest level present.
    pub fn top(&self) -> u64 {
        self.levels.len() as u64
    }

    /// The profiles of `S_k` in canonical order.
    pub fn level(&self, k: u64) -> &[Profile] {
        k.checked_sub(1)
            .and_then(|i| self.levels.get(i as usize))
            .map_or(&[], Vec::as_slice)
    }

    pub fn get(&self, id: ProfileId) -> &Profile {
        &self.level(id.k)[id.index]
    }

    pub fn ids(&self) -> impl Iterator<Item = ProfileId> + '_ {
        self.levels.iter().enumerate().flat_map(|(i, l)| {
            (0..l.len()).map(move |index| ProfileId {
                k: i as u64 + 1,
                index,
            })
        })
    }

    /// Position of `p` in the atlas.
    pub fn find(&self, p: &Profile) -> Option<ProfileId> {
        self.level(p.k)
            .iter()
            .position(|q| q.body == p.body)
            .map(|index| ProfileId { k: p.k, index })
    }

    /// The restriction one level down.
    pub fn parent(&self, id: ProfileId) -> Option<ProfileId> {
        let i = id.k as usize - 1;
        self.parents[i][id.index].map(|index| ProfileId { k: id.k - 1, index })
    }

    /// Profiles one level up that induce `id`.
    pub fn children(&self, id: ProfileId) -> Vec<ProfileId> {
        self.children[id.k as usize - 1][id.index]
            .iter()
            .map(|&index| ProfileId { k: id.k + 1, index })
            .collect()
    }

    /// With `Q` the lower and `P` the higher of the two: `P` induces `Q`
    /// and every profile between their levels inducing `Q` is induced by
    /// `P`. Evaluated against the complete enumeration.
    pub fn equivalent(&self, a: ProfileId, b: ProfileId) -> bool {
        let (hi, lo) = if a.k >= b.k { (a, b) } else { (b, a) };
        let (p, q) = (self.get(hi), self.get(lo));
        if !induces(p, q).unwrap_or(false) {
            return false;
        }
        (lo.k..=hi.k).all(|l| {
            self.level(l)
                .iter()
                .filter(|r| induces(r, q).unwrap_or(false))
                .all(|r| induces(p, r).unwrap_or(false))
        })
    }

    /// Equivalence classes: chains along which each profile has exactly
    /// one inducing profile one level up.
    pub fn classes(&self) -> Vec<Vec<ProfileId>> {
        let mut out = Vec::new();
        for id in self.ids() {
            let starts = match self.parent(id) {
                None => true,
                Some(p) => self.children(p).len() != 1,
            };
            if !starts {
                continue;
            }
            let mut chain = vec![id];
            let mut cur = id;
            loop {
                let kids = self.children(cur);
                if kids.len() != 1 {
                    break;
                }
                cur = kids[0];
                chain.push(cur);
            }
            out.push(chain);
        }
        out
    }

    /// Classes without a focused profile.
    pub fn regions(&self) -> Vec<Region> {
        self.classes()
            .into_iter()
            .filter(|c| c.iter().all(|&id| !self.get(id).is_focused()))
            .map(|ids| Region {
                profiles: ids.iter().map(|&id| self.get(id).clone()).collect(),
                ids,
            })
            .collect()
    }

    /// Largest `k` with an unfocused profile of `S_k`, or 0.
    pub fn max_unfocused_level(&self) -> u64 {
        self.levels
            .iter()
            .rposition(|l| l.iter().any(|p| !p.is_focused()))
            .map_or(0, |i| i as u64 + 1)
    }
}

/// The profiles of one stratum, in canonical order.
pub fn enumerate_profiles(stratum: &Stratum) -> Vec<Profile> {
    let atlas = ProfileAtlas::build_to(stratum.pool(), stratum.k());
    atlas.level(stratum.k()).to_vec()
}

/// An equivalence class of profiles containing no focused profile.
#[derive(Clone, Debug)]
pub struct Region {
    ids: Vec<ProfileId>,
    profiles: Vec<Profile>,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.profiles == other.profiles
    }
}

impl Eq for Region {}

impl Region {
    /// Members by increasing `k`.
    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn ids(&self) -> &[ProfileId] {
        &self.ids
    }

    pub fn complexity(&self) -> u64 {
        self.profiles[0].k
    }

    pub fn cohesion(&self) -> u64 {
        self.profiles[self.profiles.len() - 1].k
    }

    pub fn visibility(&self) -> u64 {
        self.cohesion() - self.complexity()
    }

    /// The member at the complexity level.
    pub fn representative(&self) -> &Profile {
        &self.profiles[0]
    }

    /// The member at the cohesion level.
    pub fn top(&self) -> &Profile {
        &self.profiles[self.profiles.len() - 1]
    }

    /// Pixels shared by every side of the top member; empty unless the
    /// region is principal there.
    pub fn kernel(&self) -> PixelSet {
        self.top().kernel()
    }
}

/// `σ` refines `ρ` if every profile of `σ` induces every profile of `ρ`;
/// every region refines itself.
pub fn refines(sigma: &Region, rho: &Region) -> bool {
    if sigma == rho {
        return true;
    }
    sigma.profiles.iter().all(|p| {
        rho.profiles
            .iter()
            .all(|q| q.k <= p.k && induces(p, q).unwrap_or(false))
    })
}
