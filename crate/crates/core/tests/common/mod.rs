//! Brute-force oracles shared by the integration tests. Nothing here goes
//! through the pool or the search engine: orders come straight from the
//! grid coordinates and pixel codes.

#![allow(dead_code)]

use std::collections::HashSet;

use tanglescope::{Profile, WeightedCanvas};

/// Order of `set` on a grid picture, summed over right and down neighbours.
pub fn naive_order(wc: &WeightedCanvas, set: u32) -> u64 {
    let (w, h) = (wc.canvas().width(), wc.canvas().height());
    let values = wc.picture().values();
    let n = u64::from(wc.offset());
    let inside = |p: usize| (set >> p) & 1 == 1;
    let mut total = 0;
    for r in 0..h {
        for c in 0..w {
            let p = r * w + c;
            let right = (c + 1 < w).then_some(p + 1);
            let down = (r + 1 < h).then_some(p + w);
            for q in right.into_iter().chain(down) {
                if inside(p) != inside(q) {
                    total += n - u64::from((values[p] ^ values[q]).count_ones());
                }
            }
        }
    }
    total
}

pub fn full_mask(wc: &WeightedCanvas) -> u32 {
    let n = wc.pixel_count();
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Orders of every set avoiding pixel 0, indexed by `set >> 1`.
pub fn canonical_order_table(wc: &WeightedCanvas) -> Vec<u64> {
    let n = wc.pixel_count();
    (0..1u64 << (n - 1))
        .map(|i| naive_order(wc, (i as u32) << 1))
        .collect()
}

/// Canonical sides (without pixel 0) of order `< k`, sorted by
/// `(order, mask)`.
pub fn naive_pairs(wc: &WeightedCanvas, k: u64) -> Vec<u32> {
    let n = wc.pixel_count();
    let mut v: Vec<(u64, u32)> = (0..1u32 << (n - 1))
        .map(|i| i << 1)
        .map(|s| (naive_order(wc, s), s))
        .filter(|&(o, _)| o < k)
        .collect();
    v.sort_unstable();
    v.into_iter().map(|(_, s)| s).collect()
}

/// Literal consistency: no distinct `X, Y` with `X ∩ Y = ∅` and
/// `X ∪ Y ≠ Π`.
pub fn naive_consistent(chosen: &[u32], full: u32) -> bool {
    chosen.iter().all(|&x| {
        chosen
            .iter()
            .all(|&y| x == y || x & y != 0 || x | y == full)
    })
}

/// All profiles of `S_k` by filtering every orientation of the pairs.
/// The `{∅, Π}` pair is always oriented as `Π`. Each profile is its sorted
/// member list, and the list comes in lexicographic order of the
/// orientation bits over `pairs` (bit set: the side without pixel 0).
pub fn naive_profiles(wc: &WeightedCanvas, k: u64, pairs: &[u32]) -> Vec<Vec<u32>> {
    let full = full_mask(wc);
    let m = pairs.len();
    assert!(m <= 16, "oracle limited to 16 pairs");
    let mut keyed = Vec::new();
    for bits in 0u32..1 << m {
        let chosen: Vec<u32> = (0..m)
            .map(|i| {
                if (bits >> i) & 1 == 1 {
                    pairs[i]
                } else {
                    full & !pairs[i]
                }
            })
            .collect();
        if chosen.contains(&0) || !naive_consistent(&chosen, full) {
            continue;
        }
        let set: HashSet<u32> = chosen.iter().copied().collect();
        let violates = chosen.iter().any(|&x| {
            chosen.iter().any(|&y| {
                let z = x & y;
                naive_order(wc, z) < k && set.contains(&(full & !z))
            })
        });
        if violates {
            continue;
        }
        let key: Vec<bool> = (0..m).map(|i| (bits >> i) & 1 == 1).collect();
        let mut sorted = chosen;
        sorted.sort_unstable();
        keyed.push((key, sorted));
    }
    keyed.sort();
    keyed.into_iter().map(|(_, s)| s).collect()
}

pub fn members(p: &Profile) -> Vec<u32> {
    let mut v: Vec<u32> = p.members().into_iter().map(|s| s.bits()).collect();
    v.sort_unstable();
    v
}

pub fn nested(a: u32, b: u32, full: u32) -> bool {
    a & b == a || a & b == b || a & b == 0 || a | b == full
}

/// `chosen` orients the tangle search's star set away: no single pixel, no
/// void star of at most three elements. `chosen` must be the full member
/// list of an orientation of `S_k`.
pub fn avoids_small_void_stars(chosen: &[u32], full: u32) -> bool {
    let set: HashSet<u32> = chosen.iter().copied().collect();
    if set.contains(&0) || chosen.iter().any(|s| s.count_ones() == 1) {
        return false;
    }
    for &x in chosen {
        if set.contains(&(full & !x)) {
            return false;
        }
        for &y in chosen {
            // The only third element making {x, y, z} a void star.
            if x != y && x | y == full && set.contains(&(full & !(x & y))) {
                let z = full & !(x & y);
                if z != x && z != y {
                    return false;
                }
            }
        }
    }
    true
}
