//! The separation universe `U = 2^Π`: `≤` is `⊇`, the involution is
//! complementation in Π, join is `∩` and meet is `∪`.
//!
//! Most of the crate works on raw [`PixelSet`]s for speed; [`OrientedSep`]
//! is the checked, universe-tagged wrapper for the public algebra.

use std::collections::HashMap;
use std::sync::Arc;

use crate::canvas::WeightedCanvas;
use crate::error::{Error, Result};
use crate::pixelset::PixelSet;

/// `a ≤ b` in `U`, i.e. `a ⊇ b`.
#[inline]
pub fn leq(a: PixelSet, b: PixelSet) -> bool {
    b.is_subset(a)
}

/// Whether `a` and `b` have comparable orientations.
#[inline]
pub fn nested(a: PixelSet, b: PixelSet, full: PixelSet) -> bool {
    a.is_subset(b) || b.is_subset(a) || a.is_disjoint(b) || a.union(b) == full
}

/// The side of the pair `{side, Π∖side}` that does not contain pixel 0.
#[inline]
pub fn canonical_side(side: PixelSet, full: PixelSet) -> PixelSet {
    if side.contains(0) {
        side.complement_in(full)
    } else {
        side
    }
}

/// Pairwise star condition: `r ≤ s*` for all distinct `r, s`, which for
/// sets reads `r ∪ s = Π`.
pub fn is_star(elements: &[PixelSet], full: PixelSet) -> bool {
    elements.iter().enumerate().all(|(i, &r)| {
        elements
            .iter()
            .enumerate()
            .all(|(j, &s)| i == j || r == s || leq(r, s.complement_in(full)))
    })
}

/// Consistency: no `r⃖, s⃗` in the set with `r⃗ < s⃗` for distinct `r, s`.
pub fn is_consistent(elements: &[PixelSet], full: PixelSet) -> bool {
    for &back in elements {
        let r = back.complement_in(full);
        for &s in elements {
            let same_pair = s == back || s == r;
            if !same_pair && leq(r, s) && r != s {
                return false;
            }
        }
    }
    true
}

/// A set of oriented separations; `σ = {{p}}` is a single pixel, and the
/// star is void when the intersection of its sides is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Star {
    elements: Vec<PixelSet>,
}

impl Star {
    pub fn new<I: IntoIterator<Item = PixelSet>>(elements: I) -> Self {
        let mut elements: Vec<_> = elements.into_iter().collect();
        elements.sort();
        elements.dedup();
        Star { elements }
    }

    pub fn elements(&self) -> &[PixelSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_star(&self, full: PixelSet) -> bool {
        is_star(&self.elements, full)
    }

    /// `⋂σ`; the empty star has interior Π.
    pub fn interior(&self, full: PixelSet) -> PixelSet {
        self.elements
            .iter()
            .fold(full, |acc, &s| acc.intersection(s))
    }

    pub fn is_void(&self, full: PixelSet) -> bool {
        !self.elements.is_empty() && self.interior(full).is_empty()
    }

    pub fn is_single_pixel(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].len() == 1
    }
}

/// An element of `U`, tagged with its universe and carrying its order.
#[derive(Clone, Debug)]
pub struct OrientedSep {
    side: PixelSet,
    order: u64,
    wc: Arc<WeightedCanvas>,
}

impl PartialEq for OrientedSep {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.wc.universe_id() == other.wc.universe_id()
    }
}

impl Eq for OrientedSep {}

impl OrientedSep {
    pub fn new(wc: &Arc<WeightedCanvas>, side: PixelSet) -> Result<Self> {
        if !side.is_subset(wc.all()) {
            return Err(Error::OutOfUniverse {
                set: side.bits(),
                pixels: wc.pixel_count(),
            });
        }
        Ok(OrientedSep {
            side,
            order: wc.order(side),
            wc: Arc::clone(wc),
        })
    }

    pub fn side(&self) -> PixelSet {
        self.side
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn universe_id(&self) -> u64 {
        self.wc.universe_id()
    }

    fn same_universe(&self, other: &Self) -> Result<()> {
        if self.wc.universe_id() == other.wc.universe_id() {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    fn with_side(&self, side: PixelSet) -> Self {
        OrientedSep {
            side,
            order: self.wc.order(side),
            wc: Arc::clone(&self.wc),
        }
    }

    pub fn inverse(&self) -> Self {
        OrientedSep {
            side: self.side.complement_in(self.wc.all()),
            order: self.order,
            wc: Arc::clone(&self.wc),
        }
    }

    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.same_universe(other)?;
        Ok(leq(self.side, other.side))
    }

    /// Supremum: intersection of sides.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        Ok(self.with_side(self.side.intersection(other.side)))
    }

    /// Infimum: union of sides.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        Ok(self.with_side(self.side.union(other.side)))
    }

    pub fn is_nested(&self, other: &Self) -> Result<bool> {
        self.same_universe(other)?;
        Ok(nested(self.side, other.side, self.wc.all()))
    }

    /// Classify within a stratum; the separation must be a member.
    pub fn classify(&self, stratum: &Stratum) -> Result<Classification> {
        if stratum.pool().wc.universe_id() != self.wc.universe_id() {
            return Err(Error::UniverseMismatch);
        }
        classify(self.side, stratum)
    }
}

/// Flags from the small / trivial / proper definitions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    pub small: bool,
    pub cosmall: bool,
    pub trivial: bool,
    pub cotrivial: bool,
    pub proper: bool,
    /// Member of the `{∅, Π}` pair.
    pub boundary_pair: bool,
}

/// Classify `side` in `stratum`.
///
/// Small means `s ≤ s*`, i.e. `side = Π`. Trivial means `s < t` and
/// `s < t*` for some `t` in the stratum, which only `Π` can satisfy, and it
/// does as soon as the stratum has a proper pair.
pub fn classify(side: PixelSet, stratum: &Stratum) -> Result<Classification> {
    if !stratum.contains(side) {
        return Err(Error::NotInStratum(side.bits()));
    }
    let full = stratum.full();
    let inv = side.complement_in(full);
    let witness = |s: PixelSet| {
        stratum.pairs().any(|t| {
            let t_inv = t.complement_in(full);
            leq(s, t) && s != t && leq(s, t_inv) && s != t_inv
        })
    };
    Ok(Classification {
        small: leq(side, inv),
        cosmall: leq(inv, side),
        trivial: witness(side),
        cotrivial: witness(inv),
        proper: !leq(side, inv) && !leq(inv, side),
        boundary_pair: side.is_empty() || side == full,
    })
}

/// How the candidate pool of separations is generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoolMode {
    /// Every subset of Π.
    Exact,
    /// Heuristic: subsets whose both sides induce connected subgraphs.
    Connected,
}

#[derive(Clone, Copy, Debug)]
pub struct PoolOptions {
    pub mode: PoolMode,
    /// Drop members of larger order.
    pub max_order: Option<u64>,
    /// Cap on `|Π|` for exact mode.
    pub pixel_cap: usize,
}

impl Default for PoolOptions {
    fn default() -> Self {
        PoolOptions {
            mode: PoolMode::Exact,
            max_order: None,
            pixel_cap: crate::canvas::DEFAULT_PIXEL_CAP,
        }
    }
}

impl PoolOptions {
    pub fn exact_with_cap(pixel_cap: usize) -> Self {
        PoolOptions {
            pixel_cap,
            ..Self::default()
        }
    }
}

const ABSENT16: u16 = u16::MAX;
const ABSENT32: u32 = u32::MAX;

#[derive(Clone, Debug)]
enum OrderTable {
    Dense16(Vec<u16>),
    Dense32(Vec<u32>),
    Sparse(HashMap<u32, u32>),
}

/// The enumerated candidate pool with cached orders, closed under
/// complement. Pairs are kept as canonical sides bucketed by order, each
/// bucket sorted by bitmask.
#[derive(Debug)]
pub struct Pool {
    wc: Arc<WeightedCanvas>,
    mode: PoolMode,
    table: OrderTable,
    by_order: Vec<Vec<PixelSet>>,
    /// `thresholds[p * n + q]`: least order of a member separating `p`
    /// from `q`, `u64::MAX` if none does.
    thresholds: Vec<u64>,
}

impl Pool {
    pub fn exact(wc: Arc<WeightedCanvas>) -> Result<Arc<Pool>> {
        Self::build(wc, PoolOptions::default())
    }

    pub fn build(wc: Arc<WeightedCanvas>, opts: PoolOptions) -> Result<Arc<Pool>> {
        let n = wc.pixel_count();
        let bound = wc.order_bound();
        if bound >= u64::from(ABSENT32) {
            return Err(Error::OrderOverflow(bound));
        }
        let keep = |o: u64| opts.max_order.is_none_or(|m| o <= m);
        let (table, by_order) = match opts.mode {
            PoolMode::Exact => {
                let cap = opts.pixel_cap.min(crate::canvas::HARD_PIXEL_CAP);
                if n > cap {
                    return Err(Error::PixelCap { pixels: n, cap });
                }
                let orders = dense_orders(&wc);
                let mut by_order = vec![Vec::new(); bound as usize + 1];
                let full = wc.all();
                // Canonical sides are exactly the masks without pixel 0.
                for m in (0..orders.len() as u32).step_by(2) {
                    let o = u64::from(orders[m as usize]);
                    if keep(o) {
                        by_order[o as usize].push(PixelSet(m));
                    }
                }
                let table = if bound < u64::from(ABSENT16) {
                    OrderTable::Dense16(
                        orders
                            .iter()
                            .map(|&o| if keep(o.into()) { o as u16 } else { ABSENT16 })
                            .collect(),
                    )
                } else {
                    OrderTable::Dense32(
                        orders
                            .iter()
                            .map(|&o| if keep(o.into()) { o } else { ABSENT32 })
                            .collect(),
                    )
                };
                debug_assert_eq!(full, PixelSet::full(n));
                (table, by_order)
            }
            PoolMode::Connected => {
                let full = wc.all();
                let canvas = wc.canvas();
                let mut map = HashMap::new();
                let mut by_order = vec![Vec::new(); bound as usize + 1];
                let mut sides = vec![PixelSet::EMPTY];
                for set in connected_sets(canvas) {
                    let inv = set.complement_in(full);
                    if !set.contains(0) && canvas.is_connected(inv) {
                        sides.push(set);
                    }
                }
                for side in sides {
                    let o = wc.order(side);
                    if keep(o) {
                        map.insert(side.bits(), o as u32);
                        map.insert(side.complement_in(full).bits(), o as u32);
                        by_order[o as usize].push(side);
                    }
                }
                for bucket in &mut by_order {
                    bucket.sort();
                }
                (OrderTable::Sparse(map), by_order)
            }
        };
        let mut by_order = by_order;
        while by_order.len() > 1 && by_order.last().is_some_and(Vec::is_empty) {
            by_order.pop();
        }
        let thresholds = match opts.mode {
            PoolMode::Exact => min_cut_matrix(&wc)
                .into_iter()
                .map(|t| if keep(t) { t } else { u64::MAX })
                .collect(),
            PoolMode::Connected => scanned_thresholds(n, wc.all(), &by_order),
        };
        Ok(Arc::new(Pool {
            wc,
            mode: opts.mode,
            table,
            by_order,
            thresholds,
        }))
    }

    pub fn canvas(&self) -> &Arc<WeightedCanvas> {
        &self.wc
    }

    pub fn mode(&self) -> PoolMode {
        self.mode
    }

    pub fn full(&self) -> PixelSet {
        self.wc.all()
    }

    pub fn pixel_count(&self) -> usize {
        self.wc.pixel_count()
    }

    /// Cached order of a pool member, `None` if not in the pool.
    #[inline]
    pub fn order_of(&self, side: PixelSet) -> Option<u64> {
        match &self.table {
            OrderTable::Dense16(t) => match t.get(side.bits() as usize) {
                Some(&o) if o != ABSENT16 => Some(u64::from(o)),
                _ => None,
            },
            OrderTable::Dense32(t) => match t.get(side.bits() as usize) {
                Some(&o) if o != ABSENT32 => Some(u64::from(o)),
                _ => None,
            },
            OrderTable::Sparse(m) => m.get(&side.bits()).map(|&o| u64::from(o)),
        }
    }

    pub fn contains(&self, side: PixelSet) -> bool {
        self.order_of(side).is_some()
    }

    /// Largest order present in the pool.
    pub fn max_order(&self) -> u64 {
        (self.by_order.len() - 1) as u64
    }

    /// The `k` beyond which strata stop growing: `max order + 1`.
    pub fn top_level(&self) -> u64 {
        self.max_order() + 1
    }

    /// Canonical sides of the pairs with order exactly `order`.
    pub fn layer(&self, order: u64) -> &[PixelSet] {
        self.by_order
            .get(order as usize)
            .map_or(&[], Vec::as_slice)
    }

    /// All pairs as canonical sides, sorted by `(order, bitmask)`.
    pub fn pairs(&self) -> impl Iterator<Item = PixelSet> + '_ {
        self.by_order.iter().flatten().copied()
    }

    /// Number of oriented members.
    pub fn len(&self) -> usize {
        2 * self.by_order.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Oriented members sorted by `(order, bitmask)`.
    pub fn members(&self) -> Vec<OrientedSep> {
        let full = self.full();
        let mut out: Vec<_> = self
            .pairs()
            .flat_map(|s| [s, s.complement_in(full)])
            .map(|side| OrientedSep {
                side,
                order: self.order_of(side).unwrap_or(0),
                wc: Arc::clone(&self.wc),
            })
            .collect();
        out.sort_by_key(|s| (s.order, s.side));
        out
    }

    pub fn stratum(self: &Arc<Self>, k: u64) -> Result<Stratum> {
        if k == 0 {
            return Err(Error::ZeroStratum);
        }
        Ok(Stratum {
            pool: Arc::clone(self),
            k,
        })
    }

    /// Least order of a member separating `p` from `q`.
    pub fn separation_threshold(&self, p: usize, q: usize) -> Option<u64> {
        let t = self.thresholds[p * self.pixel_count() + q];
        (t != u64::MAX).then_some(t)
    }

    /// The atom of `S_k` containing pixel `p`: pixels no member of order
    /// `< k` separates from `p`.
    pub fn block(&self, p: usize, k: u64) -> PixelSet {
        let n = self.pixel_count();
        PixelSet::from_pixels((0..n).filter(|&q| q == p || self.thresholds[p * n + q] >= k))
    }

    /// A line is a pair other than `{∅, Π}`.
    pub fn lines(&self) -> impl Iterator<Item = PixelSet> + '_ {
        self.pairs().filter(|s| !s.is_empty())
    }
}

/// Orders of all `2^n` subsets: adding the top pixel `h` to a set flips
/// the boundary status of each edge at `h`.
fn dense_orders(wc: &WeightedCanvas) -> Vec<u32> {
    let n = wc.pixel_count();
    let canvas = wc.canvas();
    let size = 1usize << n;
    let mut orders = vec![0u32; size];
    for h in 0..n {
        let nbrs: Vec<(usize, i64)> = canvas
            .incident_edges(h)
            .iter()
            .map(|&ei| {
                let e = canvas.edges()[ei];
                let q = if e.a == h { e.b } else { e.a };
                (q, i64::from(wc.edge_cost(ei)))
            })
            .collect();
        let base = 1usize << h;
        for m in 0..base {
            let mut o = i64::from(orders[m]);
            for &(q, c) in &nbrs {
                if m >> q & 1 == 1 {
                    o -= c;
                } else {
                    o += c;
                }
            }
            orders[m | base] = o as u32;
        }
    }
    orders
}

/// Pairwise minimum cuts by augmenting paths; in the exact pool every
/// subset is a member, so these are the separation thresholds.
fn min_cut_matrix(wc: &WeightedCanvas) -> Vec<u64> {
    let n = wc.pixel_count();
    let canvas = wc.canvas();
    let mut cap = vec![0u64; n * n];
    for (i, e) in canvas.edges().iter().enumerate() {
        let c = u64::from(wc.edge_cost(i));
        cap[e.a * n + e.b] += c;
        cap[e.b * n + e.a] += c;
    }
    let mut out = vec![u64::MAX; n * n];
    for s in 0..n {
        for t in s + 1..n {
            let mut flow = cap.clone();
            let mut total = 0u64;
            loop {
                let mut prev = vec![usize::MAX; n];
                prev[s] = s;
                let mut queue = std::collections::VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for v in 0..n {
                        if prev[v] == usize::MAX && flow[u * n + v] > 0 {
                            prev[v] = u;
                            queue.push_back(v);
                        }
                    }
                }
                if prev[t] == usize::MAX {
                    break;
                }
                let mut bottleneck = u64::MAX;
                let mut v = t;
                while v != s {
                    let u = prev[v];
                    bottleneck = bottleneck.min(flow[u * n + v]);
                    v = u;
                }
                let mut v = t;
                while v != s {
                    let u = prev[v];
                    flow[u * n + v] -= bottleneck;
                    flow[v * n + u] += bottleneck;
                    v = u;
                }
                total += bottleneck;
            }
            out[s * n + t] = total;
            out[t * n + s] = total;
        }
    }
    out
}

fn scanned_thresholds(n: usize, full: PixelSet, by_order: &[Vec<PixelSet>]) -> Vec<u64> {
    let mut out = vec![u64::MAX; n * n];
    for (o, layer) in by_order.iter().enumerate() {
        for &side in layer {
            let inv = side.complement_in(full);
            for p in side.iter() {
                for q in inv.iter() {
                    let t = &mut out[p * n + q];
                    *t = (*t).min(o as u64);
                    out[q * n + p] = out[p * n + q];
                }
            }
        }
    }
    for p in 0..n {
        out[p * n + p] = u64::MAX;
    }
    out
}

/// All nonempty connected pixel subsets, each exactly once.
fn connected_sets(canvas: &crate::canvas::Canvas) -> Vec<PixelSet> {
    let n = canvas.pixel_count();
    let neighbours: Vec<PixelSet> = (0..n)
        .map(|p| {
            PixelSet::from_pixels(canvas.incident_edges(p).iter().map(|&ei| {
                let e = canvas.edges()[ei];
                if e.a == p {
                    e.b
                } else {
                    e.a
                }
            }))
        })
        .collect();
    let mut out = Vec::new();
    // Sets whose minimum pixel is `root`, grown by branching on the
    // lowest frontier pixel: include it, or exclude it for good.
    fn grow(
        current: PixelSet,
        frontier: PixelSet,
        excluded: PixelSet,
        neighbours: &[PixelSet],
        out: &mut Vec<PixelSet>,
    ) {
        let Some(p) = frontier.first() else {
            out.push(current);
            return;
        };
        let bit = PixelSet::singleton(p);
        let with = current.union(bit);
        let new_frontier = frontier
            .difference(bit)
            .union(neighbours[p])
            .difference(with)
            .difference(excluded);
        grow(with, new_frontier, excluded, neighbours, out);
        grow(
            current,
            frontier.difference(bit),
            excluded.union(bit),
            neighbours,
            out,
        );
    }
    for root in 0..n {
        let below = PixelSet((1u32 << root) - 1);
        let current = PixelSet::singleton(root);
        let frontier = neighbours[root].difference(below);
        grow(current, frontier, below.union(current), &neighbours, &mut out);
    }
    out
}

/// `S_k`: the pool members of order `< k`.
#[derive(Clone, Debug)]
pub struct Stratum {
    pool: Arc<Pool>,
    k: u64,
}

impl Stratum {
    pub fn pool(&self) -> &Arc<Pool> {
        &self.pool
    }
    pub fn k(&self) -> u64 {
        self.k
    }
    pub fn full(&self) -> PixelSet {
        self.pool.full()
    }

    #[inline]
    pub fn contains(&self, side: PixelSet) -> bool {
        self.pool.order_of(side).is_some_and(|o| o < self.k)
    }

    /// Canonical sides of the member pairs in `(order, bitmask)` order,
    /// starting with the `{∅, Π}` pair.
    pub fn pairs(&self) -> impl Iterator<Item = PixelSet> + '_ {
        (0..self.k.min(self.pool.top_level()))
            .flat_map(move |o| self.pool.layer(o).iter().copied())
    }

    pub fn pair_count(&self) -> usize {
        (0..self.k.min(self.pool.top_level()))
            .map(|o| self.pool.layer(o).len())
            .sum()
    }

    /// Pairs other than `{∅, Π}`.
    pub fn proper_pair_count(&self) -> usize {
        self.pair_count() - usize::from(self.contains(PixelSet::EMPTY))
    }

    /// Oriented members sorted by `(order, bitmask)`.
    pub fn members(&self) -> Vec<PixelSet> {
        let full = self.full();
        let mut out: Vec<_> = self
            .pairs()
            .flat_map(|s| [s, s.complement_in(full)])
            .collect();
        out.sort_by_key(|&s| (self.pool.order_of(s), s));
        out
    }

    pub fn is_subset_of(&self, other: &Stratum) -> bool {
        self.pairs().all(|s| other.contains(s))
    }
}
