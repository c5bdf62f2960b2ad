//! Small reference pictures.
//!
//! Pixel ids are row-major; in grid tables `1` is black.

use crate::canvas::{Canvas, Picture, WeightedCanvas};
use crate::pixelset::PixelSet;

fn mono(width: usize, height: usize, black: &[(usize, usize)], cap: usize) -> Picture {
    let canvas = Canvas::grid_with_cap(width, height, cap).expect("fixture fits the cap");
    let values = (0..width * height)
        .map(|p| u64::from(black.contains(&(p / width, p % width))))
        .collect();
    Picture::new(canvas, 1, values).expect("fixture values are one bit")
}

/// 2×2 with only the top-left pixel black; `N = 1`.
pub fn mono2x2() -> WeightedCanvas {
    WeightedCanvas::with_suggested_offset(mono(2, 2, &[(0, 0)], 4))
}

/// Black cells of [`mini_l`]: an L stroke with a right-hand serif.
pub const MINI_L_BLACK: [(usize, usize); 7] = [(0, 1), (1, 1), (2, 1), (3, 1), (3, 2), (3, 3), (2, 3)];

/// Pixel cap needed for [`mini_l`].
pub const MINI_L_CAP: usize = 25;

/// 5×5 letter L on white; `N = 1`.
pub fn mini_l() -> WeightedCanvas {
    WeightedCanvas::with_suggested_offset(mono(5, 5, &MINI_L_BLACK, MINI_L_CAP))
}

/// The black pixels of [`mini_l`].
pub fn mini_l_figure() -> PixelSet {
    PixelSet::from_pixels(MINI_L_BLACK.iter().map(|&(r, c)| r * 5 + c))
}

/// 4×4 with four 2×2 quadrants of 2-bit values
/// `TL = 00, TR = 11, BL = 01, BR = 10`; `N = 2`.
///
/// Horizontally adjacent quadrants differ in both bits, vertically
/// adjacent ones in one, so the vertical mid-line is free.
pub fn quad4x4() -> WeightedCanvas {
    let canvas = Canvas::grid(4, 4).expect("16 pixels fit");
    let values = (0..16)
        .map(|p| match (p / 4 < 2, p % 4 < 2) {
            (true, true) => 0b00,
            (true, false) => 0b11,
            (false, true) => 0b01,
            (false, false) => 0b10,
        })
        .collect();
    let pic = Picture::new(canvas, 2, values).expect("two-bit values");
    WeightedCanvas::new(pic, 2).expect("N = 2 bounds every weight")
}

/// The quadrant of [`quad4x4`] given by `(bottom, right)`.
pub fn quadrant(bottom: bool, right: bool) -> PixelSet {
    PixelSet::from_pixels(
        (0..16).filter(|&p| (p / 4 >= 2) == bottom && (p % 4 >= 2) == right),
    )
}

/// 4×4 checkerboard; every separation has order 0.
pub fn checker4x4() -> WeightedCanvas {
    let black: Vec<_> = (0..16)
        .map(|p| (p / 4, p % 4))
        .filter(|(r, c)| (r + c) % 2 == 1)
        .collect();
    WeightedCanvas::with_suggested_offset(mono(4, 4, &black, 16))
}

/// Seed of the noise in [`noise_disc4x4`]; the first seed whose ring has
/// no run of three equal pixels.
pub const NOISE_SEED: u32 = 15;

/// Linear congruential bits: `x ← 1664525·x + 1013904223 mod 2³²`, top bit.
pub fn lcg_bits(seed: u32, count: usize) -> Vec<bool> {
    let mut x = seed;
    (0..count)
        .map(|_| {
            x = x.wrapping_mul(1_664_525).wrapping_add(1_013_904_223);
            x >> 31 == 1
        })
        .collect()
}

/// The solid central block of [`noise_disc4x4`].
pub fn noise_disc_block() -> PixelSet {
    PixelSet::from_pixels([5, 6, 9, 10])
}

/// The surrounding noise ring of [`noise_disc4x4`].
pub fn noise_disc_ring() -> PixelSet {
    noise_disc_block().complement_in(PixelSet::full(16))
}

/// 4×4 with a black central 2×2 block and seeded noise around it; `N = 1`.
pub fn noise_disc4x4() -> WeightedCanvas {
    let block = noise_disc_block();
    let mut noise = lcg_bits(NOISE_SEED, 12).into_iter();
    let values = (0..16)
        .map(|p| {
            if block.contains(p) {
                1
            } else {
                u64::from(noise.next().expect("12 ring pixels"))
            }
        })
        .collect();
    let pic = Picture::new(Canvas::grid(4, 4).expect("16 pixels fit"), 1, values)
        .expect("one-bit values");
    WeightedCanvas::new(pic, 1).expect("N = 1 bounds one-bit weights")
}

/// A uniform white picture with offset `offset`.
pub fn all_white(width: usize, height: usize, offset: u32) -> WeightedCanvas {
    let pic = mono(width, height, &[], width * height);
    WeightedCanvas::new(pic, offset).expect("uniform pictures have zero weights")
}

/// Named fixtures with at most 12 pixels.
pub fn small_fixtures() -> Vec<(&'static str, WeightedCanvas)> {
    let plus = [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)];
    let stripes = [(0, 1), (1, 1)];
    let diag = [(0, 0), (1, 1), (2, 2), (2, 3)];
    let blob = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 3), (1, 3)];
    vec![
        ("pixel1x1", WeightedCanvas::with_suggested_offset(mono(1, 1, &[], 1))),
        ("domino1x2", WeightedCanvas::with_suggested_offset(mono(2, 1, &[(0, 1)], 2))),
        ("mono2x2", mono2x2()),
        ("white2x2", all_white(2, 2, 1)),
        ("white2x2_n0", all_white(2, 2, 0)),
        ("stripes3x2", WeightedCanvas::with_suggested_offset(mono(3, 2, &stripes, 6))),
        ("white3x3", all_white(3, 3, 1)),
        ("white3x3_n0", all_white(3, 3, 0)),
        ("plus3x3", WeightedCanvas::with_suggested_offset(mono(3, 3, &plus, 9))),
        ("diag4x3", WeightedCanvas::with_suggested_offset(mono(4, 3, &diag, 12))),
        ("blob4x3", WeightedCanvas::with_suggested_offset(mono(4, 3, &blob, 12))),
        ("white4x3", all_white(4, 3, 1)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcg_matches_hand_computation() {
        // 1664525 + 1013904223 = 1015568748 < 2^31.
        assert_eq!(lcg_bits(1, 1), vec![false]);
        let second = 1_015_568_748u64 * 1_664_525 + 1_013_904_223;
        assert_eq!(lcg_bits(1, 2)[1], (second % (1 << 32)) >> 31 == 1);
    }

    #[test]
    fn fixture_shapes() {
        assert_eq!(mini_l().pixel_count(), 25);
        assert_eq!(mini_l_figure().len(), 7);
        assert_eq!(quad4x4().offset(), 2);
        assert_eq!(noise_disc_ring().len(), 12);
        for (name, wc) in small_fixtures() {
            assert!(wc.pixel_count() <= 12, "{name}");
        }
        let q = quad4x4();
        assert_eq!(q.order(quadrant(false, false).union(quadrant(true, false))), 0);
        assert_eq!(q.order(quadrant(false, false)), 2);
        assert_eq!(q.order(quadrant(false, false).union(quadrant(false, true))), 4);
    }
}
