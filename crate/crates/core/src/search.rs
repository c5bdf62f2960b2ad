//! Branch-and-propagate extension of an orientation of `S_{k-1}` to all
//! orientations of `S_k` that satisfy a chosen rule set.
//!
//! The new pairs are exactly those of order `k - 1`. Choosing a side
//! is checked pairwise against everything chosen so far, and intersections
//! the rule requires are forced onto a queue.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::pixelset::PixelSet;
use crate::sepsys::Pool;

/// Dense membership bitsets are used up to this many pixels.
const DENSE_LIMIT: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Rule {
    /// `X, Y ∈ O` and `X ∩ Y ∈ S` force `X ∩ Y ∈ O` for all pairs (the
    /// profile condition). When false only pairs with `X ∪ Y = Π` are
    /// considered, which is avoidance of void 3-stars.
    pub pairwise: bool,
    /// Reject `{p}` as a member.
    pub forbid_singletons: bool,
    /// Stars with at most 3 elements and fewer interior pixels than this
    /// are forbidden. `1` adds nothing beyond the rules above.
    pub min_interior: usize,
}

impl Rule {
    pub const PROFILE: Rule = Rule {
        pairwise: true,
        forbid_singletons: true,
        min_interior: 1,
    };
    pub const STAR: Rule = Rule {
        pairwise: false,
        forbid_singletons: true,
        min_interior: 1,
    };
}

enum Marks {
    Dense(FixedBitSet),
    Sparse(HashSet<u32>),
}

impl Marks {
    fn new(pixels: usize) -> Self {
        if pixels <= DENSE_LIMIT {
            Marks::Dense(FixedBitSet::with_capacity(1 << pixels))
        } else {
            Marks::Sparse(HashSet::new())
        }
    }

    #[inline]
    fn get(&self, s: PixelSet) -> bool {
        match self {
            Marks::Dense(b) => b.contains(s.bits() as usize),
            Marks::Sparse(h) => h.contains(&s.bits()),
        }
    }

    #[inline]
    fn set(&mut self, s: PixelSet, on: bool) {
        match self {
            Marks::Dense(b) => b.set(s.bits() as usize, on),
            Marks::Sparse(h) => {
                if on {
                    h.insert(s.bits());
                } else {
                    h.remove(&s.bits());
                }
            }
        }
    }
}

struct Extender<'a> {
    pool: &'a Pool,
    k: u64,
    full: PixelSet,
    rule: Rule,
    marks: Marks,
    chosen: Vec<PixelSet>,
    queue: Vec<PixelSet>,
}

impl Extender<'_> {
    #[inline]
    fn in_stratum(&self, s: PixelSet) -> bool {
        self.pool.order_of(s).is_some_and(|o| o < self.k)
    }

    #[inline]
    fn decided(&self, s: PixelSet) -> bool {
        self.marks.get(s) || self.marks.get(s.complement_in(self.full))
    }

    fn undo(&mut self, mark: usize) {
        for s in self.chosen.drain(mark..) {
            self.marks.set(s, false);
        }
    }

    /// Requirement on an intersection `z` of two chosen sides.
    #[inline]
    fn demand(&mut self, z: PixelSet) -> bool {
        if !self.in_stratum(z) || self.marks.get(z) {
            return true;
        }
        if self.marks.get(z.complement_in(self.full)) {
            return false;
        }
        self.queue.push(z);
        true
    }

    fn small_interior_violation(&self, x: PixelSet) -> bool {
        let t = self.rule.min_interior;
        if x.len() < t {
            return true;
        }
        let full = self.full;
        for (i, &y) in self.chosen.iter().enumerate() {
            if x.union(y) != full {
                continue;
            }
            let xy = x.intersection(y);
            if xy.len() < t {
                return true;
            }
            for &z in &self.chosen[i + 1..] {
                if x.union(z) == full
                    && y.union(z) == full
                    && xy.intersection(z).len() < t
                {
                    return true;
                }
            }
        }
        false
    }

    /// Choose `x` and everything it forces. On failure the caller undoes.
    fn assign(&mut self, x: PixelSet) -> bool {
        self.queue.clear();
        self.queue.push(x);
        let full = self.full;
        while let Some(x) = self.queue.pop() {
            if self.marks.get(x) {
                continue;
            }
            if self.marks.get(x.complement_in(full)) {
                return false;
            }
            if self.rule.forbid_singletons && x.len() == 1 {
                return false;
            }
            if self.rule.min_interior > 1 && self.small_interior_violation(x) {
                return false;
            }
            for i in 0..self.chosen.len() {
                let y = self.chosen[i];
                let z = x.intersection(y);
                let covers = x.union(y) == full;
                if z.is_empty() {
                    if !covers {
                        return false;
                    }
                    continue;
                }
                if (self.rule.pairwise || covers) && z != x && z != y && !self.demand(z) {
                    return false;
                }
            }
            self.marks.set(x, true);
            self.chosen.push(x);
        }
        true
    }

    /// Intersections of pairs already in the base whose order is exactly
    /// `k - 1` are new and may be forced.
    fn force_from_base(&mut self, base_len: usize) -> bool {
        let full = self.full;
        let top = self.k - 1;
        let mut forced = Vec::new();
        for i in 0..base_len {
            let x = self.chosen[i];
            for &y in &self.chosen[i + 1..base_len] {
                if !self.rule.pairwise && x.union(y) != full {
                    continue;
                }
                let z = x.intersection(y);
                if self.pool.order_of(z) == Some(top) {
                    forced.push(z);
                }
            }
        }
        forced.into_iter().all(|z| self.assign(z))
    }
}

/// All orientations of `S_k` extending `base` (an orientation of
/// `S_{k-1}`) that satisfy `rule`, as sorted side lists, at most `limit`.
pub(crate) fn extend(
    pool: &Pool,
    k: u64,
    base: &[PixelSet],
    rule: Rule,
    limit: Option<usize>,
) -> Vec<Vec<PixelSet>> {
    let full = pool.full();
    let mut ex = Extender {
        pool,
        k,
        full,
        rule,
        marks: Marks::new(pool.pixel_count()),
        chosen: Vec::with_capacity(2 * base.len()),
        queue: Vec::new(),
    };
    for &s in base {
        ex.marks.set(s, true);
        ex.chosen.push(s);
    }
    let mut out = Vec::new();
    let record = |ex: &Extender, out: &mut Vec<Vec<PixelSet>>| {
        let mut v = ex.chosen.clone();
        v.sort_unstable();
        out.push(v);
    };
    if !ex.force_from_base(base.len()) || (!ex.marks.get(full) && !ex.assign(full)) {
        return out;
    }
    let layer = pool.layer(k - 1);
    let full_reached = |out: &Vec<Vec<PixelSet>>| limit.is_some_and(|l| out.len() >= l);

    struct Frame {
        idx: usize,
        mark: usize,
        flipped: bool,
    }
    let mut stack: Vec<Frame> = Vec::new();
    let mut cursor = 0usize;
    loop {
        while cursor < layer.len() && ex.decided(layer[cursor]) {
            cursor += 1;
        }
        let mut advanced = false;
        if cursor == layer.len() {
            record(&ex, &mut out);
            if full_reached(&out) {
                return out;
            }
        } else {
            let mark = ex.chosen.len();
            let side = layer[cursor];
            if ex.assign(side) {
                stack.push(Frame {
                    idx: cursor,
                    mark,
                    flipped: false,
                });
                cursor += 1;
                advanced = true;
            } else {
                ex.undo(mark);
                if ex.assign(side.complement_in(full)) {
                    stack.push(Frame {
                        idx: cursor,
                        mark,
                        flipped: true,
                    });
                    cursor += 1;
                    advanced = true;
                } else {
                    ex.undo(mark);
                }
            }
        }
        if advanced {
            continue;
        }
        // Backtrack to the most recent frame with an untried side.
        loop {
            let Some(frame) = stack.last_mut() else {
                return out;
            };
            ex.undo(frame.mark);
            if !frame.flipped {
                frame.flipped = true;
                let idx = frame.idx;
                let mark = frame.mark;
                if ex.assign(layer[idx].complement_in(full)) {
                    cursor = idx + 1;
                    break;
                }
                ex.undo(mark);
            }
            stack.pop();
        }
    }
}
