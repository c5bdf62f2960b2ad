use std::fmt;

/// A set of pixels stored as a bitmask over pixel ids `0..32`.
///
/// The same value doubles as an oriented separation: the set `A` stands for
/// the bipartition `(Π∖A, A)` pointing toward `A`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PixelSet(pub u32);

impl PixelSet {
    pub const EMPTY: PixelSet = PixelSet(0);

    /// All pixels of a universe with `pixels` elements.
    pub fn full(pixels: usize) -> Self {
        debug_assert!(pixels <= 32);
        if pixels >= 32 {
            PixelSet(u32::MAX)
        } else {
            PixelSet((1u32 << pixels) - 1)
        }
    }

    pub fn singleton(pixel: usize) -> Self {
        PixelSet(1 << pixel)
    }

    pub fn from_pixels<I: IntoIterator<Item = usize>>(pixels: I) -> Self {
        PixelSet(pixels.into_iter().fold(0, |acc, p| acc | (1 << p)))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn contains(self, pixel: usize) -> bool {
        self.0 >> pixel & 1 == 1
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        PixelSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        PixelSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        PixelSet(self.0 & !other.0)
    }

    /// Complement relative to the universe `full`.
    #[inline]
    pub fn complement_in(self, full: Self) -> Self {
        PixelSet(full.0 & !self.0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Lowest pixel id in the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let p = rest.trailing_zeros();
                rest &= rest - 1;
                Some(p as usize)
            }
        })
    }

    /// All subsets of `self`, starting with the empty set.
    pub fn subsets(self) -> impl Iterator<Item = PixelSet> {
        let set = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            let succ = cur.wrapping_sub(set) & set;
            next = (succ != 0).then_some(succ);
            Some(PixelSet(cur))
        })
    }

    /// Hex encoding used by reports and the `--subset` flag.
    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        let s = s.trim();
        let s = s.strip_prefix("0x").unwrap_or(s);
        u32::from_str_radix(s, 16).ok().map(PixelSet)
    }
}

impl fmt::Debug for PixelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PixelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}
